use zonal::charpoly_mc::{
    estimate_block_rhs, estimate_product_average, verify_identity, BlockIdentity, IdentityId, IdentityParams,
    McBudget, PowerMode,
};
use zonal::ensembles::{EnsembleKind, EnsembleSpec, SeedPath};
use zonal::special_functions::{
    det_average_laguerre, duality_rhs_jack_sum_gs, ginue_pair_exact, gs_pair_exact,
};
use zonal::{Complex64, Partition};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn budget(n: u64, seed: u64) -> McBudget {
    McBudget::new(n, SeedPath::new(seed, 0))
}

#[test]
fn ginue_pair_matches_truncated_exponential() {
    let spec = EnsembleSpec::new(EnsembleKind::GinUE, 2).unwrap();
    let (z, w) = (c(0.4, 0.1), c(0.4, -0.1));
    let e = estimate_product_average(&spec, &[z], &[w], PowerMode::Full, true, &budget(100_000, 1)).unwrap();
    assert!(e.z_score_exact(ginue_pair_exact(2, z * w.conj())) < 4.0, "{e:?}");
}

#[test]
fn symmetric_pair_matches_jack_sum() {
    let spec = EnsembleSpec::new(EnsembleKind::GS, 2).unwrap();
    let z = [c(0.3, 0.2), c(-0.4, 0.1)];
    let w = [c(0.5, -0.1), c(0.2, 0.3)];
    let exact = duality_rhs_jack_sum_gs(&z, &w, 2).unwrap();
    let e = estimate_product_average(&spec, &z, &w, PowerMode::Full, false, &budget(100_000, 2)).unwrap();
    assert!(e.z_score_exact(exact) < 4.0, "{e:?} vs {exact}");
}

#[test]
fn ginue_block_side_at_one_by_one() {
    // with the w-list holding w̄ the block side is ⟨z w̄ + |u|²⟩
    let (z, w) = (c(0.5, 0.2), c(0.1, -0.6));
    let e = estimate_block_rhs(BlockIdentity::GinueDual, &[z], &[w.conj()], 1, &budget(100_000, 3)).unwrap();
    assert!(e.z_score_exact(z * w.conj() + 1.0) < 4.0, "{e:?}");
}

#[test]
fn symmetric_block_side_matches_pair_closed_form() {
    let (z, w) = (c(0.5, 0.0), c(0.3, 0.2));
    let n = 2;
    let scale = duality_rhs_jack_sum_gs(&[c(0.0, 0.0)], &[c(0.0, 0.0)], n).unwrap();
    let exact = gs_pair_exact(n, z * w.conj()) * scale;
    let e = estimate_block_rhs(BlockIdentity::SymmetricDual, &[z], &[w], n, &budget(100_000, 4)).unwrap();
    assert!(e.z_score_exact(exact) < 5.0, "{e:?} vs {exact}");
}

#[test]
fn real_companion_side_at_equal_arguments() {
    let x = 0.7;
    let exact = det_average_laguerre(1, 2, 4.0, 0.0, 1.0, x * x).unwrap();
    let e = estimate_block_rhs(BlockIdentity::RealCompanion, &[c(x, 0.0); 2], &[], 2, &budget(100_000, 5)).unwrap();
    assert!(e.z_score_exact(c(exact, 0.0)) < 4.0, "{e:?} vs {exact}");
}

#[test]
fn conjugating_arguments_conjugates_real_ensemble_averages() {
    // spectra closed under conjugation: ⟨f(z̄, w̄)⟩ = conj⟨f(z, w)⟩
    let spec = EnsembleSpec::new(EnsembleKind::GinOE, 2).unwrap();
    let (z, w) = ([c(0.3, 0.4)], [c(-0.2, 0.5)]);
    let a = estimate_product_average(&spec, &z, &w, PowerMode::Full, false, &budget(100_000, 6)).unwrap();
    let zc = [z[0].conj()];
    let wc = [w[0].conj()];
    let b = estimate_product_average(&spec, &zc, &wc, PowerMode::Full, false, &budget(100_000, 7)).unwrap();
    let diff = (a.mean.conj() - b.mean).norm();
    assert!(diff < 4.0 * a.std_error.hypot(b.std_error), "{a:?} {b:?}");
}

#[test]
fn standard_error_scales_as_inverse_root_n() {
    let spec = EnsembleSpec::new(EnsembleKind::GS, 2).unwrap();
    let z = [c(0.4, 0.1)];
    let mut ratios = Vec::new();
    for seed in 0..5 {
        let small = estimate_product_average(&spec, &z, &z, PowerMode::Full, false, &budget(20_000, 100 + seed)).unwrap();
        let large = estimate_product_average(&spec, &z, &z, PowerMode::Full, false, &budget(80_000, 200 + seed)).unwrap();
        ratios.push(large.std_error / small.std_error);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean - 0.5).abs() < 0.1, "{ratios:?}");
}

#[test]
fn exact_and_both_sides_agree_in_repeated_runs() {
    let p = IdentityParams { n: 1, z: vec![c(0.4, 0.2)], w: vec![c(-0.3, 0.1)], ..Default::default() };
    let mut passes = 0;
    for rep in 0..100 {
        let r = verify_identity(IdentityId::D60vPlus, &p, &budget(2_000, 1_000 + rep)).unwrap();
        assert_eq!(r.z_scores.len(), 3);
        let strict = r.z_scores.iter().all(|z| z.value <= 4.0);
        passes += usize::from(strict);
    }
    assert!(passes >= 99, "{passes} of 100 repetitions inside 4 sigma");
}

#[test]
fn orthogonality_for_distinct_partitions() {
    let shapes = [vec![1], vec![2], vec![1, 1], vec![3], vec![2, 1], vec![1, 1, 1]];
    let a = vec![c(0.6, 0.0), c(0.3, 0.2), c(-0.4, 0.1)];
    let b = vec![c(0.5, -0.2), c(0.7, 0.0), c(0.2, 0.3)];
    for (i, k) in shapes.iter().enumerate() {
        for mu in &shapes[i + 1..] {
            if k.iter().sum::<usize>() != mu.iter().sum::<usize>() {
                continue;
            }
            let p = IdentityParams {
                n: 3,
                kappa: Some(Partition::new(k.clone())),
                mu: Some(Partition::new(mu.clone())),
                z: a.clone(),
                w: b.clone(),
                ..Default::default()
            };
            let r = verify_identity(IdentityId::T1, &p, &budget(20_000, 9)).unwrap();
            assert_eq!(r.exact_value, Some(c(0.0, 0.0)));
            assert!(r.passed(), "{k:?} vs {mu:?}: {:?}", r.z_scores);
        }
    }
}

#[test]
fn group_integral_factorises_at_alpha_one() {
    for k in [vec![1], vec![2], vec![1, 1]] {
        let p = IdentityParams {
            n: 2,
            kappa: Some(Partition::new(k.clone())),
            z: vec![c(0.5, 0.0), c(0.3, 0.1)],
            w: vec![c(0.7, 0.0), c(-0.2, 0.4)],
            ..Default::default()
        };
        let r = verify_identity(IdentityId::JlX, &p, &budget(50_000, 10)).unwrap();
        assert!(r.passed(), "{k:?}: {:?}", r.z_scores);
    }
}

#[test]
fn reports_are_reproducible() {
    let p = IdentityParams { n: 2, z: vec![c(0.5, 0.0)], w: vec![c(0.3, 0.0)], ..Default::default() };
    let run = || serde_json::to_string(&verify_identity(IdentityId::A3a, &p, &budget(5_000, 11)).unwrap()).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn too_small_budgets_are_reported() {
    let p = IdentityParams { n: 2, z: vec![c(0.5, 0.0)], w: vec![c(0.3, 0.0)], ..Default::default() };
    assert!(matches!(
        verify_identity(IdentityId::A3a, &p, &budget(10, 1)),
        Err(zonal::ZonalError::Budget(_))
    ));
}

#[test]
fn deterministic_identities_need_no_sampling() {
    let p = IdentityParams { n: 2, p: Some(2), alpha: Some(2.0), ..Default::default() };
    let r = verify_identity(IdentityId::SM2, &p, &budget(100, 1)).unwrap();
    assert!(r.passed() && r.lhs_mc.is_none() && r.residuals[0].value < 1e-9);
}
