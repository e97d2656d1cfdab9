use proptest::prelude::*;
use zonal::ensembles::{sample_gqa, sample_gs, SeedPath};
use zonal::jack::{jack_at_ones, jack_eval, jack_in_monomials};
use zonal::linalg::{char_poly_value, det, eigenvalues, pfaffian, quaternion_dual, CMat};
use zonal::partitions::{enumerate_in_box, Partition};
use zonal::special_functions::{det_average_laguerre, log_det_average_laguerre, SignedLog};
use zonal::Complex64;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(0usize..4, 0..4).prop_map(Partition::new)
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn alpha() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.5, 1.0, 2.0, 3.7])
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_an_involution(k in partition()) {
        prop_assert_eq!(k.conjugate().conjugate(), k.clone());
        prop_assert_eq!(k.conjugate().weight(), k.weight());
    }

    #[test]
    fn partitions_are_weakly_decreasing(k in partition()) {
        prop_assert!(k.parts().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(k.parts().iter().all(|&p| p > 0));
    }

    #[test]
    fn jack_is_homogeneous(k in partition(), a in alpha(), c in complex(), x in prop::collection::vec(complex(), 3)) {
        let scaled: Vec<Complex64> = x.iter().map(|v| v * c).collect();
        let lhs = jack_eval(&k, a, &scaled).unwrap();
        let rhs = jack_eval(&k, a, &x).unwrap() * c.powu(k.weight() as u32);
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn jack_is_symmetric(k in partition(), a in alpha(), x in prop::collection::vec(complex(), 4), r in 1usize..4) {
        let mut y = x.clone();
        y.rotate_left(r);
        y.swap(0, 1);
        prop_assert!(close(jack_eval(&k, a, &x).unwrap(), jack_eval(&k, a, &y).unwrap(), 1e-10));
    }

    #[test]
    fn padding_with_zero_is_invisible(k in partition(), a in alpha(), x in prop::collection::vec(complex(), 3)) {
        let mut padded = x.clone();
        padded.push(Complex64::new(0.0, 0.0));
        prop_assert!(close(jack_eval(&k, a, &x).unwrap(), jack_eval(&k, a, &padded).unwrap(), 1e-10));
    }

    #[test]
    fn jack_is_monic_and_triangular(k in partition(), a in alpha()) {
        let t = jack_in_monomials(&k, a).unwrap();
        prop_assert_eq!(t.coefficient(&k), 1.0);
        for mu in enumerate_in_box(k.weight(), k.weight()) {
            if mu.weight() == k.weight() && !mu.dominated_by(&k) {
                prop_assert_eq!(t.coefficient(&mu), 0.0);
            }
        }
    }

    #[test]
    fn ones_specialisation_is_positive_and_vanishes_past_length(k in partition(), a in alpha(), n in 1usize..5) {
        let v = jack_at_ones(&k, a, n).unwrap();
        if k.length() > n {
            prop_assert_eq!(v, 0.0);
        } else {
            prop_assert!(v > 0.0);
        }
    }

    #[test]
    fn signed_log_round_trips(v in -1e200f64..1e200) {
        let s = SignedLog::from_f64(v);
        // exp(ln v) loses about |ln v| ulps
        prop_assert!((s.to_f64() - v).abs() <= 4e-16 * (2.0 + v.abs().ln().abs()) * v.abs());
    }

    #[test]
    fn laguerre_average_log_route_matches(k in 1usize..3, n in 1usize..5, s in 0.0f64..2.0) {
        let direct = det_average_laguerre(k, n, 2.0, 0.0, 1.0, s).unwrap();
        let logged = log_det_average_laguerre(k, n, 2.0, 0.0, 1.0, s).unwrap();
        prop_assert!(direct > 0.0 && logged.sign > 0.0);
        prop_assert!((logged.ln_abs - direct.ln()).abs() < 1e-12);
    }

    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = SeedPath::new(seed, 0).rng();
        let a = sample_gs(n, &mut rng);
        let b = sample_gs(n, &mut rng);
        prop_assert!(close(det(&(&a * &b)).unwrap(), det(&a).unwrap() * det(&b).unwrap(), 1e-9));
    }

    #[test]
    fn char_poly_is_eigenvalue_product(seed in any::<u64>(), n in 1usize..6, z in complex()) {
        let mut rng = SeedPath::new(seed, 1).rng();
        let m = sample_gs(n, &mut rng);
        let prod = eigenvalues(&m).unwrap().into_iter().fold(Complex64::new(1.0, 0.0), |acc, l| acc * (z - l));
        prop_assert!(close(char_poly_value(z, &m).unwrap(), prod, 1e-8));
    }

    #[test]
    fn pfaffian_squares_to_determinant(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = SeedPath::new(seed, 2).rng();
        let a = CMat::from_fn(2 * n, 2 * n, |_, _| zonal::ensembles::complex_normal(1.0, &mut rng));
        let anti = &a - a.transpose();
        let pf = pfaffian(&anti).unwrap();
        prop_assert!(close(pf * pf, det(&anti).unwrap(), 1e-9));
    }

    #[test]
    fn self_dual_samples_are_self_dual(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = SeedPath::new(seed, 3).rng();
        let m = sample_gqa(n, &mut rng);
        prop_assert!((quaternion_dual(&m) - &m).norm() < 1e-12);
    }
}
