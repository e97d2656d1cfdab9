mod common;

use common::{eigenoperator_residual, schur_bialternant, selberg_by_quadrature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zonal::jack::{dual_cauchy_residual, jack_at_ones, jack_eval};
use zonal::partitions::{enumerate_in_box, hook_products, partitions_of};
use zonal::special_functions::{
    hypergeom_2f1_jack, selberg_laguerre, spherical_moment_exact, spherical_moment_via_jacobi, HypergeomParams,
    SphericalKind,
};
use zonal::Complex64;

fn random_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    let r: f64 = rng.random::<f64>().sqrt();
    let t: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, t)
}

#[test]
fn jack_polynomials_are_eigenfunctions() {
    for alpha in [0.5, 1.0, 2.0, std::f64::consts::E] {
        for w in 1..=6 {
            for kappa in partitions_of(w) {
                for extra in 0..2 {
                    let n = kappa.length() + extra;
                    let x: Vec<f64> = (0..n).map(|i| 0.4 + 0.35 * i as f64 + 0.01 * (i * i) as f64).collect();
                    let r = eigenoperator_residual(&kappa, alpha, &x);
                    assert!(r < 1e-9, "kappa={kappa} alpha={alpha} n={n}: residual {r:e}");
                }
            }
        }
    }
}

#[test]
fn alpha_one_matches_bialternant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for w in 1..=5 {
        for kappa in partitions_of(w) {
            let n = kappa.length() + 1;
            let x: Vec<Complex64> = (0..n).map(|_| random_disk(&mut rng) + 0.5).collect();
            let s = schur_bialternant(&kappa, &x);
            let p = jack_eval(&kappa, 1.0, &x).unwrap();
            assert!((s - p).norm() <= 1e-9 * s.norm(), "kappa={kappa}: {s} vs {p}");
        }
    }
}

#[test]
fn dual_cauchy_over_random_trials() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for alpha in [0.5, 1.0, 2.0, std::f64::consts::E] {
        for _ in 0..100 {
            let n = rng.random_range(1..=4);
            let p = rng.random_range(1..=4);
            let x: Vec<Complex64> = (0..n).map(|_| random_disk(&mut rng)).collect();
            let y: Vec<Complex64> = (0..p).map(|_| random_disk(&mut rng)).collect();
            let r = dual_cauchy_residual(&x, &y, alpha).unwrap();
            assert!(r < 1e-9, "alpha={alpha} n={n} p={p}: {r:e}");
        }
    }
}

#[test]
fn conjugate_hook_relation() {
    for alpha in [0.5, 1.0, 2.0, 3.7] {
        for kappa in enumerate_in_box(5, 5) {
            let (upper_conj, _) = hook_products(&kappa.conjugate(), alpha).unwrap();
            let (_, lower) = hook_products(&kappa, 1.0 / alpha).unwrap();
            let rhs = alpha.powi(kappa.weight() as i32) * lower;
            assert!((upper_conj - rhs).abs() <= 1e-12 * rhs, "kappa={kappa} alpha={alpha}");
        }
    }
}

#[test]
fn ones_specialisation_against_evaluation() {
    for alpha in [0.5, 1.0, 2.0, 3.7] {
        for kappa in enumerate_in_box(4, 3) {
            for n in kappa.length().max(1)..=4 {
                let closed = jack_at_ones(&kappa, alpha, n).unwrap();
                let direct = jack_eval(&kappa, alpha, &vec![Complex64::new(1.0, 0.0); n]).unwrap();
                assert!((closed - direct.re).abs() <= 1e-10 * closed.abs().max(1.0), "kappa={kappa} n={n}");
            }
        }
    }
}

#[test]
fn selberg_limit_against_quadrature() {
    for beta in [1.0, 2.0, 4.0] {
        for n in 1..=3 {
            for a in [0.0, 1.0, -0.5] {
                let closed = selberg_laguerre(beta, n, a).unwrap();
                let quad = selberg_by_quadrature(beta, n, a);
                assert!((closed - quad).abs() <= 1e-6 * closed, "beta={beta} n={n} a={a}: {closed} vs {quad}");
            }
        }
    }
}

#[test]
fn spherical_moment_routes_agree() {
    for kind in [SphericalKind::Symmetric, SphericalKind::Selfdual] {
        for n in 1..=3 {
            for k in 1..=2 {
                for s in [0.0, 0.3, 1.7] {
                    let a = spherical_moment_exact(kind, n, 8, k, s).unwrap();
                    let b = spherical_moment_via_jacobi(kind, n, 8, k, s).unwrap();
                    assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{kind:?} n={n} k={k} s={s}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn one_variable_hypergeometric_is_classical() {
    // ₂F₁(−k, b; c; x) for a single variable, all α
    let (k, b, c, x) = (3usize, 1.5, -4.5, 0.7);
    let mut classical = 0.0;
    let mut term = 1.0;
    for j in 0..=k {
        classical += term;
        let jf = j as f64;
        term *= (-(k as f64) + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * x;
    }
    for alpha in [0.5, 1.0, 2.0] {
        let p = HypergeomParams { a1: -(k as f64), a2: b, b1: c, alpha, s: Complex64::new(x, 0.0), n: 1 };
        let v = hypergeom_2f1_jack(&p).unwrap();
        assert!((v.re - classical).abs() < 1e-12 && v.im.abs() < 1e-14, "alpha={alpha}");
    }
}
