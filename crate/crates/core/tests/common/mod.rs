//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use zonal::jack::jack_in_monomials;
use zonal::partitions::partitions_of;
use zonal::{Complex64, Partition};

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every exponent vector of `m_μ` in `n` variables.
pub fn monomial_exponents(mu: &Partition, n: usize) -> Vec<Vec<usize>> {
    let mut e: Vec<usize> = (0..n).map(|i| mu.part(i)).collect();
    e.sort_unstable();
    let mut out = vec![e.clone()];
    while next_permutation(&mut e) {
        out.push(e.clone());
    }
    out
}

/// `P_κ` expanded into `(coefficient, exponent)` terms in `n` variables.
pub fn expand_jack(kappa: &Partition, alpha: f64, n: usize) -> Vec<(f64, Vec<usize>)> {
    let table = jack_in_monomials(kappa, alpha).unwrap();
    let mut terms = Vec::new();
    for mu in partitions_of(kappa.weight()) {
        if mu.length() > n {
            continue;
        }
        let c = table.coefficient(&mu);
        if c != 0.0 {
            for e in monomial_exponents(&mu, n) {
                terms.push((c, e));
            }
        }
    }
    terms
}

/// `|D P − E P| / max(|E P|, 1)` for the operator
/// `Σ x_j² ∂_j² + (2/α) Σ_{j<k} (x_j² ∂_j − x_k² ∂_k) / (x_j − x_k)`
/// at the point `x`, with `E = Σ κ_j(κ_j − 1) + (2/α) Σ (N − j) κ_j`.
pub fn eigenoperator_residual(kappa: &Partition, alpha: f64, x: &[f64]) -> f64 {
    let n = x.len();
    let terms = expand_jack(kappa, alpha, n);
    let mono = |e: &[usize]| e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product::<f64>();
    let mut p = 0.0;
    // x_j ∂_j P and x_j² ∂_j² P
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for (c, e) in &terms {
        let m = c * mono(e);
        p += m;
        for j in 0..n {
            let ej = e[j] as f64;
            d1[j] += ej * m;
            d2[j] += ej * (ej - 1.0) * m;
        }
    }
    let mut dp: f64 = d2.iter().sum();
    for j in 0..n {
        for k in j + 1..n {
            // x_j² ∂_j P = x_j · (x_j ∂_j P)
            dp += 2.0 / alpha * (x[j] * d1[j] - x[k] * d1[k]) / (x[j] - x[k]);
        }
    }
    let eig: f64 = kappa
        .parts()
        .iter()
        .enumerate()
        .map(|(j, &kj)| {
            let kj = kj as f64;
            kj * (kj - 1.0) + 2.0 / alpha * (n - 1 - j) as f64 * kj
        })
        .sum();
    (dp - eig * p).abs() / (eig * p).abs().max(1.0)
}

/// Schur polynomial as the bialternant `det(x_i^{κ_j+N−j}) / det(x_i^{N−j})`.
pub fn schur_bialternant(kappa: &Partition, x: &[Complex64]) -> Complex64 {
    let n = x.len();
    let alt = |shape: &dyn Fn(usize) -> usize| {
        DMatrix::from_fn(n, n, |i, j| x[i].powu(shape(j) as u32)).determinant()
    };
    alt(&|j| kappa.part(j) + n - 1 - j) / alt(&|j| n - 1 - j)
}

/// `∫_c^∞ f` by exp-sinh quadrature.
pub fn exp_sinh<F: FnMut(f64) -> f64>(c: f64, mut f: F) -> f64 {
    let h = 1.0 / 16.0;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut acc = 0.0;
    for i in -72..=64 {
        let t = i as f64 * h;
        let u = (half_pi * t.sinh()).exp();
        let w = half_pi * t.cosh() * u;
        let v = f(c + u);
        if v != 0.0 {
            acc += v * w;
        }
    }
    acc * h
}

/// `∫_{ℝ₊ⁿ} Π x^a e^{−x} Π|x_k − x_j|^β` by nested quadrature over the
/// ordered chamber.
pub fn selberg_by_quadrature(beta: f64, n: usize, a: f64) -> f64 {
    fn nested(beta: f64, n: usize, a: f64, lower: f64, prefix: &mut Vec<f64>) -> f64 {
        if prefix.len() == n {
            let mut v = 1.0;
            for (i, &xi) in prefix.iter().enumerate() {
                v *= xi.powf(a) * (-xi).exp();
                for &xj in &prefix[..i] {
                    v *= (xi - xj).abs().powf(beta);
                }
            }
            return v;
        }
        exp_sinh(lower, |x| {
            prefix.push(x);
            let v = nested(beta, n, a, x, prefix);
            prefix.pop();
            v
        })
    }
    let fact: f64 = (1..=n).map(|i| i as f64).product();
    fact * nested(beta, n, a, 0.0, &mut Vec::new())
}
