//! Jack polynomials `P_κ^(α)` in the monomial basis, their `C`-normalisation,
//! specialisations at repeated arguments and generalised Pochhammer symbols.
//!
//! Coefficients come from the triangular system obtained by applying the
//! Laplace–Beltrami type operator
//! `Σ x_j² ∂_j² + (2/α) Σ_{j<k} (x_j² ∂_j − x_k² ∂_k)/(x_j − x_k)`
//! to monomial symmetric functions. Partitions are processed in
//! lexicographically descending order, which refines dominance.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Result, ZonalError};
use crate::partitions::{enumerate_in_box, hook_products, hook_products_in, partitions_of, Partition};
use crate::scalar::Field;

pub const DEFAULT_DEGREE_CAP: usize = 24;

/// Expansion of one Jack polynomial in monomial symmetric functions.
#[derive(Debug, Clone, PartialEq)]
pub struct JackCoefficientTable {
    pub kappa: Partition,
    pub alpha: f64,
    /// `μ ↦ c_{κ,μ}`; contains `κ` itself with coefficient 1.
    pub coeffs: BTreeMap<Partition, f64>,
}

impl JackCoefficientTable {
    pub fn coefficient(&self, mu: &Partition) -> f64 {
        self.coeffs.get(mu).copied().unwrap_or(0.0)
    }

    /// Evaluates `Σ_μ c_{κμ} m_μ(x)`.
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        if self.kappa.length() > x.len() {
            return Complex64::new(0.0, 0.0);
        }
        let powers = power_table(x, self.kappa.part(0));
        let mut acc = CompensatedSum::default();
        for (mu, &c) in &self.coeffs {
            if mu.length() <= x.len() {
                acc.add(monomial_with_powers(mu, &powers) * c);
            }
        }
        acc.value()
    }

    /// Evaluates `(x_1 ⋯ x_k)^max_part · P_κ(1/x)` without dividing, via the
    /// complement of each monomial inside the `(max_part)^k` box. Valid at
    /// zero arguments. Requires `κ_1 <= max_part`.
    pub fn eval_reciprocal_cleared(&self, x: &[Complex64], max_part: usize) -> Complex64 {
        let k = x.len();
        if self.kappa.length() > k {
            return Complex64::new(0.0, 0.0);
        }
        debug_assert!(self.kappa.part(0) <= max_part);
        let powers = power_table(x, max_part);
        let mut acc = CompensatedSum::default();
        for (mu, &c) in &self.coeffs {
            if mu.length() <= k {
                let comp = mu.complement_in_box(max_part, k);
                acc.add(monomial_with_powers(&comp, &powers) * c);
            }
        }
        acc.value()
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn step((sum, comp): (f64, f64), v: f64) -> (f64, f64) {
        let t = sum + v;
        let c = if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        (t, comp + c)
    }

    pub(crate) fn add(&mut self, v: Complex64) {
        self.re = Self::step(self.re, v.re);
        self.im = Self::step(self.im, v.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

fn power_table(x: &[Complex64], max_exp: usize) -> Vec<Vec<Complex64>> {
    x.iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(max_exp + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            row.push(acc);
            for _ in 0..max_exp {
                acc *= xi;
                row.push(acc);
            }
            row
        })
        .collect()
}

/// Monomial symmetric polynomial `m_μ(x)`, summing over distinct
/// rearrangements of the zero-padded exponent vector only.
pub fn monomial_symmetric(mu: &Partition, x: &[Complex64]) -> Complex64 {
    if mu.length() > x.len() {
        return Complex64::new(0.0, 0.0);
    }
    monomial_with_powers(mu, &power_table(x, mu.part(0)))
}

fn monomial_with_powers(mu: &Partition, powers: &[Vec<Complex64>]) -> Complex64 {
    let n = powers.len();
    // distinct exponent values with multiplicities, zeros included
    let mut values: Vec<(usize, usize)> = Vec::new();
    for &p in mu.parts() {
        match values.last_mut() {
            Some((v, c)) if *v == p => *c += 1,
            _ => values.push((p, 1)),
        }
    }
    let zeros = n - mu.length();
    if zeros > 0 {
        values.push((0, zeros));
    }
    fn rec(i: usize, values: &mut [(usize, usize)], powers: &[Vec<Complex64>]) -> Complex64 {
        if i == powers.len() {
            return Complex64::new(1.0, 0.0);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for slot in 0..values.len() {
            let (v, c) = values[slot];
            if c == 0 {
                continue;
            }
            values[slot].1 -= 1;
            total += powers[i][v] * rec(i + 1, values, powers);
            values[slot].1 += 1;
        }
        total
    }
    rec(0, &mut values, powers)
}

/// Jack coefficients over any field. Returns `(μ, c_{κμ})` for every
/// `μ ≤ κ` of the same weight, lexicographically descending (so `κ` first).
pub fn jack_coefficients_in<T: Field>(kappa: &Partition, alpha: &T) -> Vec<(Partition, T)> {
    let n = kappa.weight();
    let candidates: Vec<Partition> =
        partitions_of(n).into_iter().filter(|mu| mu.dominated_by(kappa)).collect();
    let index: HashMap<&Partition, usize> =
        candidates.iter().enumerate().map(|(i, mu)| (mu, i)).collect();

    let two_over_alpha = T::from_i64(2) / alpha.clone();
    let eigen = |mu: &Partition| -> T {
        let mut diag = T::zero();
        let mut shift = T::zero();
        for (i, &m) in mu.parts().iter().enumerate() {
            diag = diag + T::from_i64((m * (m.saturating_sub(1))) as i64);
            shift = shift + T::from_i64((i * m) as i64);
        }
        diag - two_over_alpha.clone() * shift
    };
    let e_kappa = eigen(kappa);

    let mut coeffs: Vec<T> = vec![T::zero(); candidates.len()];
    if candidates.is_empty() {
        return vec![(kappa.clone(), T::one())];
    }
    coeffs[0] = T::one();
    for (idx, mu) in candidates.iter().enumerate().skip(1) {
        let parts = mu.parts();
        let mut sum = T::zero();
        for k in 1..parts.len() {
            for j in 0..k {
                let (mj, mk) = (parts[j], parts[k]);
                for q in 0..mk {
                    let p = mj + mk - q;
                    let mut src = parts.to_vec();
                    src[j] = p;
                    src[k] = q;
                    let nu = Partition::new(src);
                    if let Some(&s) = index.get(&nu) {
                        if s < idx && !coeffs[s].is_zero() {
                            sum = sum + coeffs[s].clone() * T::from_i64((p - q) as i64);
                        }
                    }
                }
            }
        }
        coeffs[idx] = two_over_alpha.clone() * sum / (e_kappa.clone() - eigen(mu));
    }
    candidates.into_iter().zip(coeffs).collect()
}

type CacheKey = (Partition, u64);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<JackCoefficientTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<JackCoefficientTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(ZonalError::NonPositiveAlpha(alpha))
    }
}

/// Memoised monomial expansion of `P_κ^(α)` under the default degree cap.
pub fn jack_in_monomials(kappa: &Partition, alpha: f64) -> Result<Arc<JackCoefficientTable>> {
    jack_in_monomials_capped(kappa, alpha, DEFAULT_DEGREE_CAP)
}

pub fn jack_in_monomials_capped(
    kappa: &Partition,
    alpha: f64,
    degree_cap: usize,
) -> Result<Arc<JackCoefficientTable>> {
    check_alpha(alpha)?;
    if kappa.weight() > degree_cap {
        return Err(ZonalError::DegreeCap { degree: kappa.weight(), cap: degree_cap });
    }
    let key = (kappa.clone(), alpha.to_bits());
    if let Some(t) = cache().read().expect("jack cache poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    let coeffs = jack_coefficients_in(kappa, &alpha).into_iter().collect();
    let table = Arc::new(JackCoefficientTable { kappa: kappa.clone(), alpha, coeffs });
    let mut guard = cache().write().expect("jack cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(table)))
}

pub fn jack_eval(kappa: &Partition, alpha: f64, x: &[Complex64]) -> Result<Complex64> {
    if kappa.length() > x.len() {
        check_alpha(alpha)?;
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(jack_in_monomials(kappa, alpha)?.eval(x))
}

pub fn jack_eval_real(kappa: &Partition, alpha: f64, x: &[f64]) -> Result<f64> {
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(jack_eval(kappa, alpha, &xc)?.re)
}

/// Generalised Pochhammer symbol `[u]_κ^(α) = Π_j Π_{i<κ_j} (u − (j−1)/α + i)`
/// over any field.
pub fn pochhammer_in<T: Field>(u: &T, kappa: &Partition, alpha: &T) -> T {
    let mut acc = T::one();
    for (j, &kj) in kappa.parts().iter().enumerate() {
        let shift = u.clone() - T::from_i64(j as i64) / alpha.clone();
        for i in 0..kj {
            acc = acc * (shift.clone() + T::from_i64(i as i64));
        }
    }
    acc
}

pub fn pochhammer_real(u: f64, kappa: &Partition, alpha: f64) -> f64 {
    let mut acc = 1.0;
    for (j, &kj) in kappa.parts().iter().enumerate() {
        let shift = u - j as f64 / alpha;
        for i in 0..kj {
            acc *= shift + i as f64;
        }
    }
    acc
}

/// `[u]_κ^(α)` with the product taken over `n_pad` rows; rows beyond `ℓ(κ)`
/// contribute 1.
pub fn pochhammer_general(u: Complex64, kappa: &Partition, alpha: f64, n_pad: usize) -> Result<Complex64> {
    check_alpha(alpha)?;
    if n_pad < kappa.length() {
        return Err(ZonalError::InvalidParameter(format!(
            "padding {n_pad} shorter than partition {kappa}"
        )));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &kj) in kappa.parts().iter().enumerate() {
        let shift = u - j as f64 / alpha;
        for i in 0..kj {
            acc *= shift + i as f64;
        }
    }
    Ok(acc)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `P_κ^(α)((1)^N) = α^{|κ|} [N/α]_κ / h_κ`.
pub fn jack_at_ones(kappa: &Partition, alpha: f64, n: usize) -> Result<f64> {
    let (_, lower) = hook_products(kappa, alpha)?;
    let poch = pochhammer_real(n as f64 / alpha, kappa, alpha);
    Ok(alpha.powi(kappa.weight() as i32) * poch / lower)
}

/// Factor `α^{|κ|} |κ|! / h'_κ` relating `C_κ` to `P_κ`.
pub fn c_normalisation(kappa: &Partition, alpha: f64) -> Result<f64> {
    let (upper, _) = hook_products(kappa, alpha)?;
    Ok(alpha.powi(kappa.weight() as i32) * factorial(kappa.weight()) / upper)
}

/// `C_κ^(α)(x) = α^{|κ|} |κ|! / h'_κ · P_κ^(α)(x)`.
pub fn jack_c(kappa: &Partition, alpha: f64, x: &[Complex64]) -> Result<Complex64> {
    Ok(jack_eval(kappa, alpha, x)? * c_normalisation(kappa, alpha)?)
}

/// `C_κ^(α)((s)^N)` from the ones-specialisation and homogeneity.
pub fn jack_c_repeated(kappa: &Partition, alpha: f64, n: usize, s: Complex64) -> Result<Complex64> {
    let base = c_normalisation(kappa, alpha)? * jack_at_ones(kappa, alpha, n)?;
    Ok(s.powu(kappa.weight() as u32) * base)
}

/// Exact-path version of the ones-specialisation, for golden tests.
pub fn jack_at_ones_in<T: Field>(kappa: &Partition, alpha: &T, n: usize) -> T {
    let (_, lower) = hook_products_in(kappa, alpha);
    let mut scale = T::one();
    for _ in 0..kappa.weight() {
        scale = scale * alpha.clone();
    }
    let u = T::from_i64(n as i64) / alpha.clone();
    scale * pochhammer_in(&u, kappa, alpha) / lower
}

/// `|Π(1 − x_k y_l) − Σ_{κ ⊆ (p)^N} (−1)^{|κ|} P_κ^(α)(x) P_{κ'}^(1/α)(y)|`.
pub fn dual_cauchy_residual(x: &[Complex64], y: &[Complex64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (n, p) = (x.len(), y.len());
    if n * p > DEFAULT_DEGREE_CAP {
        return Err(ZonalError::DegreeCap { degree: n * p, cap: DEFAULT_DEGREE_CAP });
    }
    let mut lhs = Complex64::new(1.0, 0.0);
    for &xk in x {
        for &yl in y {
            lhs *= 1.0 - xk * yl;
        }
    }
    let mut rhs = CompensatedSum::default();
    for kappa in enumerate_in_box(p, n) {
        let sign = if kappa.weight() % 2 == 0 { 1.0 } else { -1.0 };
        let a = jack_eval(&kappa, alpha, x)?;
        let b = jack_eval(&kappa.conjugate(), 1.0 / alpha, y)?;
        rhs.add(a * b * sign);
    }
    Ok((lhs - rhs.value()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn weight_one_and_column_tables() {
        for alpha in [0.5, 1.0, 2.0, 3.3] {
            let t = jack_in_monomials(&p(&[1]), alpha).unwrap();
            assert_eq!(t.coeffs.len(), 1);
            assert_eq!(t.coefficient(&p(&[1])), 1.0);
            let t = jack_in_monomials(&p(&[1, 1]), alpha).unwrap();
            assert_eq!(t.coeffs.len(), 1);
        }
    }

    #[test]
    fn row_two_coefficient() {
        for alpha in [0.5, 1.0, 2.0, 3.3] {
            let t = jack_in_monomials(&p(&[2]), alpha).unwrap();
            assert!((t.coefficient(&p(&[1, 1])) - 2.0 / (1.0 + alpha)).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_coefficients_match_known_values() {
        // P_(2,1) = m_21 + 6/(α+2) m_111
        let half = Rational::from_ratio(1, 2);
        let t = jack_coefficients_in(&p(&[2, 1]), &half);
        assert_eq!(t[1], (p(&[1, 1, 1]), Rational::from_ratio(12, 5)));
        // Schur at α = 1: s_(2,2) = m_22 + m_211 + 2 m_1111
        let one = Rational::from_ratio(1, 1);
        let t: BTreeMap<_, _> = jack_coefficients_in(&p(&[2, 2]), &one).into_iter().collect();
        assert_eq!(t[&p(&[2, 1, 1])], Rational::from_ratio(1, 1));
        assert_eq!(t[&p(&[1, 1, 1, 1])], Rational::from_ratio(2, 1));
    }

    #[test]
    fn float_table_tracks_exact_table() {
        for kappa in [p(&[3, 1]), p(&[2, 2, 1]), p(&[4, 2])] {
            for (num, den) in [(1, 2), (2, 1)] {
                let exact = jack_coefficients_in(&kappa, &Rational::from_ratio(num, den));
                let float = jack_in_monomials(&kappa, num as f64 / den as f64).unwrap();
                for (mu, r) in exact {
                    let v = r.to_f64();
                    assert!((float.coefficient(&mu) - v).abs() <= 1e-13 * v.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn triangularity() {
        for kappa in enumerate_in_box(4, 4) {
            let t = jack_in_monomials(&kappa, 2.0).unwrap();
            assert_eq!(t.coefficient(&kappa), 1.0);
            for mu in t.coeffs.keys() {
                assert_eq!(mu.weight(), kappa.weight());
                assert!(mu.dominated_by(&kappa));
            }
        }
    }

    #[test]
    fn degree_cap_and_alpha_errors() {
        assert!(matches!(
            jack_in_monomials(&p(&[25]), 1.0),
            Err(ZonalError::DegreeCap { .. })
        ));
        assert!(jack_in_monomials(&p(&[1]), 0.0).is_err());
        assert!(jack_in_monomials_capped(&p(&[3]), 1.0, 2).is_err());
    }

    #[test]
    fn eval_small_cases() {
        let x = [c(0.3), c(-1.2), c(2.0)];
        let v = jack_eval(&p(&[1]), 0.7, &x).unwrap();
        assert!((v - c(1.1)).norm() < 1e-15);
        assert_eq!(jack_eval(&p(&[2, 1]), 2.0, &[c(1.3)]).unwrap(), c(0.0));
        assert_eq!(jack_eval(&Partition::empty(), 2.0, &x).unwrap(), c(1.0));
    }

    #[test]
    fn homogeneity() {
        let x = [Complex64::new(0.3, 0.2), Complex64::new(-0.7, 0.1), Complex64::new(0.5, -0.4)];
        let kappa = p(&[2, 1]);
        let base = jack_eval(&kappa, 2.0, &x).unwrap();
        let scaled: Vec<_> = x.iter().map(|v| v * 3.0).collect();
        let ratio = jack_eval(&kappa, 2.0, &scaled).unwrap() / base;
        assert!((ratio - c(27.0)).norm() < 1e-12);
    }

    #[test]
    fn ones_specialisation_two_paths() {
        assert_eq!(jack_at_ones(&p(&[1]), 0.8, 5).unwrap(), 5.0);
        assert_eq!(jack_at_ones(&Partition::empty(), 0.8, 5).unwrap(), 1.0);
        let closed = jack_at_ones(&p(&[2, 2]), 0.5, 4).unwrap();
        let direct = jack_eval_real(&p(&[2, 2]), 0.5, &[1.0; 4]).unwrap();
        assert!((closed - direct).abs() <= 1e-10 * direct.abs());
        for kappa in enumerate_in_box(3, 3) {
            for alpha in [0.5, 1.0, 2.0, std::f64::consts::E] {
                for n in 0..=4usize {
                    let closed = jack_at_ones(&kappa, alpha, n).unwrap();
                    let direct = jack_eval_real(&kappa, alpha, &vec![1.0; n]).unwrap();
                    assert!((closed - direct).abs() <= 1e-10 * direct.abs().max(1.0), "{kappa} {alpha} {n}");
                }
            }
        }
        let exact = jack_at_ones_in(&p(&[2, 1]), &Rational::from_ratio(1, 2), 3);
        assert!((exact.to_f64() - jack_at_ones(&p(&[2, 1]), 0.5, 3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn c_normalisation_small_cases() {
        let s = Complex64::new(0.4, -0.3);
        for alpha in [0.5, 2.0, 3.0] {
            assert!((jack_c(&p(&[1]), alpha, &[s]).unwrap() - s).norm() < 1e-15);
            assert_eq!(jack_c(&Partition::empty(), alpha, &[s]).unwrap(), c(1.0));
        }
        let (upper, _) = hook_products(&p(&[2]), 2.0).unwrap();
        let want = 4.0 * 2.0 / upper * jack_eval_real(&p(&[2]), 2.0, &[1.0, 1.0]).unwrap();
        let got = jack_c(&p(&[2]), 2.0, &[c(1.0), c(1.0)]).unwrap();
        assert!((got - c(want)).norm() < 1e-14);
        // Σ_{|κ|=n} C_κ(x) = (x_1 + ... + x_N)^n
        let x = [c(0.3), c(0.5), c(-0.2)];
        for alpha in [0.5, 1.0, 2.0] {
            let total: Complex64 = partitions_of(3).iter().map(|k| jack_c(k, alpha, &x).unwrap()).sum();
            assert!((total - c(0.6f64.powi(3))).norm() < 1e-13);
        }
    }

    #[test]
    fn pochhammer_small_cases() {
        let u = Complex64::new(0.7, 0.2);
        let alpha = 1.6;
        assert_eq!(pochhammer_general(u, &p(&[1]), alpha, 3).unwrap(), u);
        let want = u * (u - 1.0 / alpha);
        assert!((pochhammer_general(u, &p(&[1, 1]), alpha, 2).unwrap() - want).norm() < 1e-15);
        let want = u * (u + 1.0);
        assert!((pochhammer_general(u, &p(&[2]), alpha, 1).unwrap() - want).norm() < 1e-15);
        assert_eq!(pochhammer_general(u, &Partition::empty(), alpha, 0).unwrap(), c(1.0));
        // terminating base: [-k]_κ vanishes once κ_1 > k
        assert_eq!(pochhammer_real(-2.0, &p(&[3]), 2.0), 0.0);
        assert!(pochhammer_general(u, &p(&[1, 1]), alpha, 1).is_err());
    }

    #[test]
    fn dual_cauchy_trivial_cases() {
        let y = [Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.2)];
        assert!(dual_cauchy_residual(&[c(0.0), c(0.0)], &y, 2.0).unwrap() < 1e-15);
        let r = dual_cauchy_residual(&[Complex64::new(0.2, 0.6)], &[Complex64::new(-0.4, 0.3)], 0.7).unwrap();
        assert!(r < 1e-15);
        let x = [Complex64::new(0.3, -0.4), Complex64::new(-0.6, 0.1)];
        assert!(dual_cauchy_residual(&x, &y, 2.0).unwrap() < 1e-10);
    }
}
