use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    estimate_block_rhs, estimate_plain_product, estimate_product_average, estimate_scalar_dual, iid_mean, mcmc_mean,
    BlockIdentity, MCEstimate, McBudget, PowerMode, IID_THRESHOLD, MCMC_THRESHOLD,
};
use crate::ensembles::{
    complex_normal, mcmc_sample_eigen_gas, sample_laguerre_beta, EnsembleKind, EnsembleSpec,
};
use crate::error::{Result, ZonalError};
use crate::jack::{c_normalisation, dual_cauchy_residual, jack_at_ones, jack_c, jack_eval};
use crate::linalg::{default_pair_tolerance, det, eigenvalues, pair_eigenvalues, CMat};
use crate::partitions::{hook_products, Partition};
use crate::special_functions::{
    det_average_laguerre, duality_rhs_jack_sum_gqa, duality_rhs_jack_sum_gs, ginue_pair_exact, gqa_pair_exact,
    gs_pair_exact, jacobi_type_jack_average, laguerre_jack_average, spherical_moment_exact, truncated_exp,
    MEWeightSpec, SphericalKind, WeightKind,
};

/// Identities that can be checked end to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    #[serde(rename = "A.3a")]
    A3a,
    #[serde(rename = "A.3b")]
    A3b,
    #[serde(rename = "A.3c")]
    A3c,
    #[serde(rename = "A.3c+")]
    A3cPlus,
    #[serde(rename = "6.V")]
    D6V,
    #[serde(rename = "6.0v+")]
    D60vPlus,
    #[serde(rename = "6.0w+")]
    D60wPlus,
    #[serde(rename = "6.0W")]
    D60W,
    #[serde(rename = "5.47")]
    D547,
    #[serde(rename = "5.48")]
    D548,
    #[serde(rename = "7.U1")]
    U1,
    #[serde(rename = "7.U2")]
    U2,
    #[serde(rename = "7.U3")]
    U3,
    #[serde(rename = "GE")]
    GE,
    #[serde(rename = "7.V1")]
    V1,
    #[serde(rename = "7.V2")]
    V2,
    #[serde(rename = "7.V1x")]
    V1x,
    #[serde(rename = "7.V2x")]
    V2x,
    #[serde(rename = "SM2")]
    SM2,
    #[serde(rename = "7.X1")]
    X1,
    #[serde(rename = "16.jlX")]
    JlX,
    #[serde(rename = "t.1")]
    T1,
    #[serde(rename = "W")]
    W,
}

impl IdentityId {
    pub const ALL: [IdentityId; 23] = [
        IdentityId::A3a,
        IdentityId::A3b,
        IdentityId::A3c,
        IdentityId::A3cPlus,
        IdentityId::D6V,
        IdentityId::D60vPlus,
        IdentityId::D60wPlus,
        IdentityId::D60W,
        IdentityId::D547,
        IdentityId::D548,
        IdentityId::U1,
        IdentityId::U2,
        IdentityId::U3,
        IdentityId::GE,
        IdentityId::V1,
        IdentityId::V2,
        IdentityId::V1x,
        IdentityId::V2x,
        IdentityId::SM2,
        IdentityId::X1,
        IdentityId::JlX,
        IdentityId::T1,
        IdentityId::W,
    ];

    pub fn label(self) -> &'static str {
        use IdentityId::*;
        match self {
            A3a => "A.3a",
            A3b => "A.3b",
            A3c => "A.3c",
            A3cPlus => "A.3c+",
            D6V => "6.V",
            D60vPlus => "6.0v+",
            D60wPlus => "6.0w+",
            D60W => "6.0W",
            D547 => "5.47",
            D548 => "5.48",
            U1 => "7.U1",
            U2 => "7.U2",
            U3 => "7.U3",
            GE => "GE",
            V1 => "7.V1",
            V2 => "7.V2",
            V1x => "7.V1x",
            V2x => "7.V2x",
            SM2 => "SM2",
            X1 => "7.X1",
            JlX => "16.jlX",
            T1 => "t.1",
            W => "W",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for IdentityId {
    type Err = ZonalError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        IdentityId::ALL
            .into_iter()
            .find(|id| id.label() == t)
            .ok_or_else(|| ZonalError::InvalidParameter(format!("unknown identity {s:?}")))
    }
}

/// Parameters of one verification. Which fields are read depends on the
/// identity; see [`verify_identity`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityParams {
    #[serde(default)]
    pub n: usize,
    /// Power or number of copies, for identities taking a single `z`.
    #[serde(default)]
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_k: Option<usize>,
    #[serde(default)]
    pub z: Vec<Complex64>,
    #[serde(default)]
    pub w: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Laguerre exponent `a`, or the Jacobi-type `b2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Partition>,
    /// Second variable count for the dual Cauchy check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZScore {
    pub pair: String,
    pub value: f64,
    pub threshold: f64,
}

impl ZScore {
    pub fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

/// A deterministic residual and the tolerance it must meet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub identity_id: IdentityId,
    pub params: IdentityParams,
    /// Ensemble scaling used on the Monte Carlo side.
    pub scaling: f64,
    pub exact_value: Option<Complex64>,
    pub lhs_mc: Option<MCEstimate>,
    pub rhs_mc: Option<MCEstimate>,
    pub z_scores: Vec<ZScore>,
    pub residuals: Vec<Residual>,
    pub verdict: Verdict,
}

impl DualityReport {
    fn new(identity_id: IdentityId, params: &IdentityParams) -> Self {
        DualityReport {
            identity_id,
            params: params.clone(),
            scaling: 1.0,
            exact_value: None,
            lhs_mc: None,
            rhs_mc: None,
            z_scores: Vec::new(),
            residuals: Vec::new(),
            verdict: Verdict::Fail,
        }
    }

    /// Fills in every available pairing and the verdict. Sides marked
    /// `relaxed` (half powers, eigensolvers) use the Markov-chain threshold.
    fn finish(mut self, relaxed_lhs: bool, relaxed_rhs: bool) -> Self {
        let thr = |e: &MCEstimate, relaxed: bool| {
            if relaxed {
                e.threshold().max(MCMC_THRESHOLD)
            } else {
                e.threshold().max(IID_THRESHOLD)
            }
        };
        if let (Some(l), Some(x)) = (&self.lhs_mc, self.exact_value) {
            self.z_scores.push(ZScore { pair: "lhs_mc-exact".into(), value: l.z_score_exact(x), threshold: thr(l, relaxed_lhs) });
        }
        if let (Some(r), Some(x)) = (&self.rhs_mc, self.exact_value) {
            self.z_scores.push(ZScore { pair: "rhs_mc-exact".into(), value: r.z_score_exact(x), threshold: thr(r, relaxed_rhs) });
        }
        if let (Some(l), Some(r)) = (&self.lhs_mc, &self.rhs_mc) {
            let t = thr(l, relaxed_lhs).max(thr(r, relaxed_rhs));
            self.z_scores.push(ZScore { pair: "lhs_mc-rhs_mc".into(), value: l.z_score_against(r), threshold: t });
        }
        let ok = self.z_scores.iter().all(ZScore::passed) && self.residuals.iter().all(|r| r.value <= r.tolerance);
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn missing(what: &str, id: IdentityId) -> ZonalError {
    ZonalError::InvalidParameter(format!("{id} needs {what}"))
}

fn need_n(p: &IdentityParams, id: IdentityId) -> Result<usize> {
    if p.n == 0 {
        return Err(missing("N >= 1", id));
    }
    Ok(p.n)
}

fn need_k(p: &IdentityParams, id: IdentityId) -> Result<usize> {
    if p.k == 0 {
        return Err(missing("k >= 1", id));
    }
    Ok(p.k)
}

fn single_z(p: &IdentityParams, id: IdentityId) -> Result<Complex64> {
    match p.z.as_slice() {
        [z] => Ok(*z),
        _ => Err(missing("exactly one z", id)),
    }
}

fn real_z(p: &IdentityParams, id: IdentityId) -> Result<f64> {
    let z = single_z(p, id)?;
    if z.im != 0.0 {
        return Err(ZonalError::InvalidParameter(format!(
            "{id} over a real or quaternion ensemble needs a real z, got {z}"
        )));
    }
    Ok(z.re)
}

fn pair_args(p: &IdentityParams, id: IdentityId) -> Result<(Complex64, Complex64)> {
    match (p.z.as_slice(), p.w.as_slice()) {
        ([z], [w]) => Ok((*z, *w)),
        _ => Err(missing("exactly one z and one w", id)),
    }
}

fn lists(p: &IdentityParams, id: IdentityId) -> Result<usize> {
    if p.z.is_empty() || p.z.len() != p.w.len() {
        return Err(missing("nonempty z and w lists of equal length", id));
    }
    Ok(p.z.len())
}

fn kappa(p: &IdentityParams, id: IdentityId) -> Result<Partition> {
    p.kappa.clone().ok_or_else(|| missing("a partition kappa", id))
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn spec(kind: EnsembleKind, n: usize) -> Result<EnsembleSpec> {
    EnsembleSpec::new(kind, n)
}

/// `⟨|det(x − Z)|^power⟩` by direct sampling.
fn abs_det_power(spec: &EnsembleSpec, x: Complex64, power: i32, budget: &McBudget) -> Result<MCEstimate> {
    iid_mean(budget.seed, budget.n_samples, |rng| {
        let mut m = -spec.draw(rng)?;
        for i in 0..m.nrows() {
            m[(i, i)] += x;
        }
        Ok(real(det(&m)?.norm().powi(power)))
    })
}

fn diag(v: &[Complex64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_column_slice(v))
}

/// Runs both sides of `id` that apply, compares them, and returns the report.
///
/// Parameter use, by identity:
/// - pair averages (`A.3a`, `A.3b`, `A.3c`, `A.3c+`): `n`, one `z`, one `w`;
/// - block dualities (`6.V`, `6.0v+`, `6.0w+`, `6.0W`): `n`, lists `z`, `w`;
/// - companion dualities (`5.47`, `5.48`): `n`, an even-length list `z`;
/// - power averages (`7.U*`, `GE`, `7.V*`): `n`, `k`, one `z`, and `big_k`
///   for spherical ensembles; `7.U3` reads `ensemble` (GinOE or GinSE);
/// - `SM2`: `alpha`, `n`, `p`, `trials`;
/// - `7.X1`: `beta`, `n`, `a`, `kappa`; `W`: `alpha`, `n`, `a` as `b2`, `kappa`;
/// - `16.jlX` and `t.1`: `n`, `kappa`, `mu` (`t.1`), diagonals `z` and `w`;
///   `t.1` reads `ensemble` (G_S or G_QA).
pub fn verify_identity(id: IdentityId, p: &IdentityParams, budget: &McBudget) -> Result<DualityReport> {
    use IdentityId::*;
    let mut r = DualityReport::new(id, p);
    let (lhs_b, rhs_b) = (budget.derive(0), budget.derive(1));
    let (mut relaxed_lhs, mut relaxed_rhs) = (false, false);
    match id {
        A3a | A3b | A3c => {
            let n = need_n(p, id)?;
            let (z, w) = pair_args(p, id)?;
            let y = z * w.conj();
            let (kind, scaling, exact) = match id {
                A3a => (EnsembleKind::GS, 1.0, gs_pair_exact(n, y)),
                A3b => (EnsembleKind::GQA, std::f64::consts::FRAC_1_SQRT_2, gqa_pair_exact(n, y)),
                _ => (EnsembleKind::GinUE, 1.0, ginue_pair_exact(n, y)),
            };
            let s = EnsembleSpec::with_scaling(kind, n, scaling)?;
            r.scaling = scaling;
            r.exact_value = Some(exact);
            r.lhs_mc = Some(estimate_product_average(&s, &[z], &[w], PowerMode::Full, true, &lhs_b)?);
        }
        A3cPlus => {
            let n = need_n(p, id)?;
            let (z, w) = pair_args(p, id)?;
            r.exact_value = Some(ginue_pair_exact(n, z * w.conj()) * factorial(n));
            r.lhs_mc = Some(estimate_product_average(&spec(EnsembleKind::GinUE, n)?, &[z], &[w], PowerMode::Full, false, &lhs_b)?);
            r.rhs_mc = Some(estimate_scalar_dual(z, w, n, &rhs_b)?);
        }
        D6V => {
            let n = need_n(p, id)?;
            let k = lists(p, id)?;
            // the left side carries det(w − Z̄) = conj(det(w̄ − Z))
            let wbar: Vec<Complex64> = p.w.iter().map(|v| v.conj()).collect();
            if k == 1 {
                r.exact_value = Some(truncated_exp(n, p.z[0] * p.w[0]) * factorial(n));
            }
            r.lhs_mc = Some(estimate_product_average(&spec(EnsembleKind::GinUE, n)?, &p.z, &wbar, PowerMode::Full, false, &lhs_b)?);
            r.rhs_mc = Some(estimate_block_rhs(BlockIdentity::GinueDual, &p.z, &p.w, n, &rhs_b)?);
        }
        D60vPlus => {
            let n = need_n(p, id)?;
            lists(p, id)?;
            r.exact_value = Some(duality_rhs_jack_sum_gs(&p.z, &p.w, n)?);
            r.lhs_mc = Some(estimate_product_average(&spec(EnsembleKind::GS, n)?, &p.z, &p.w, PowerMode::Full, false, &lhs_b)?);
            r.rhs_mc = Some(estimate_block_rhs(BlockIdentity::SymmetricDual, &p.z, &p.w, n, &rhs_b)?);
            relaxed_rhs = true;
        }
        D60wPlus => {
            let n = need_n(p, id)?;
            lists(p, id)?;
            r.exact_value = Some(duality_rhs_jack_sum_gqa(&p.z, &p.w, n)?);
            r.lhs_mc = Some(estimate_product_average(&spec(EnsembleKind::GQA, n)?, &p.z, &p.w, PowerMode::Half, false, &lhs_b)?);
            r.rhs_mc = Some(estimate_block_rhs(BlockIdentity::SelfDualHalf, &p.z, &p.w, n, &rhs_b)?);
            relaxed_lhs = true;
        }
        D60W => {
            let n = need_n(p, id)?;
            let k = lists(p, id)?;
            let dz = super::doubled(&p.z);
            let dw = super::doubled(&p.w);
            let exact = duality_rhs_jack_sum_gqa(&dz, &dw, n)?;
            r.exact_value = Some(exact);
            if p.z.iter().chain(&p.w).all(|&v| v == p.z[0]) {
                let s = p.z[0].norm_sqr();
                let laguerre = det_average_laguerre(2 * k, n, 1.0, -0.5, 0.5, s)?;
                r.residuals.push(Residual {
                    label: "half-power Jack sum vs Laguerre average (relative)".into(),
                    value: (exact - laguerre).norm() / laguerre.abs().max(1.0),
                    tolerance: 1e-9,
                });
            }
            r.lhs_mc = Some(estimate_product_average(&spec(EnsembleKind::GQA, n)?, &p.z, &p.w, PowerMode::Full, false, &lhs_b)?);
            r.rhs_mc = Some(estimate_block_rhs(BlockIdentity::SelfDualFull, &p.z, &p.w, n, &rhs_b)?);
        }
        D547 | D548 => {
            let n = need_n(p, id)?;
            let len = p.z.len();
            if len == 0 || len % 2 == 1 {
                return Err(missing("an even, nonempty z list", id));
            }
            let k = len / 2;
            let first = p.z[0];
            if first.im == 0.0 && p.z.iter().all(|&v| v == first) {
                let s = first.re * first.re;
                r.exact_value = Some(real(if id == D547 {
                    det_average_laguerre(k, n, 4.0, 0.0, 1.0, s)?
                } else {
                    det_average_laguerre(2 * k, n, 1.0, 0.0, 1.0, s)?
                }));
            }
            let (kind, block) = if id == D547 {
                (EnsembleKind::GinOE, BlockIdentity::RealCompanion)
            } else {
                (EnsembleKind::GinSE, BlockIdentity::QuaternionCompanion)
            };
            r.lhs_mc = Some(estimate_plain_product(&spec(kind, n)?, &p.z, &lhs_b)?);
            r.rhs_mc = Some(estimate_block_rhs(block, &p.z, &[], n, &rhs_b)?);
            relaxed_rhs = id == D547;
        }
        U1 | U2 | GE => {
            let n = need_n(p, id)?;
            let k = need_k(p, id)?;
            let z = single_z(p, id)?;
            let s = z.norm_sqr();
            let (kind, mode, exact) = match id {
                U1 => (EnsembleKind::GS, PowerMode::Full, det_average_laguerre(k, n, 4.0, 1.0, 2.0, s)?),
                U2 => (EnsembleKind::GQA, PowerMode::Half, det_average_laguerre(k, n, 1.0, -0.5, 0.5, s)?),
                _ => (EnsembleKind::GinUE, PowerMode::Full, det_average_laguerre(k, n, 2.0, 0.0, 1.0, s)?),
            };
            relaxed_lhs = mode == PowerMode::Half;
            r.exact_value = Some(real(exact));
            let zs = vec![z; k];
            r.lhs_mc = Some(estimate_product_average(&spec(kind, n)?, &zs, &zs, mode, false, &lhs_b)?);
        }
        U3 => {
            let n = need_n(p, id)?;
            let k = need_k(p, id)?;
            let x = real_z(p, id)?;
            let (beta, power) = match p.ensemble.unwrap_or(EnsembleKind::GinOE) {
                EnsembleKind::GinOE => (4.0, 2 * k),
                EnsembleKind::GinSE => (1.0, k),
                other => {
                    return Err(ZonalError::ModeMismatch { mode: id.to_string(), ensemble: other.to_string() })
                }
            };
            let kind = p.ensemble.unwrap_or(EnsembleKind::GinOE);
            r.exact_value = Some(real(det_average_laguerre(k, n, beta, 0.0, 1.0, x * x)?));
            r.lhs_mc = Some(abs_det_power(&spec(kind, n)?, real(x), power as i32, &lhs_b)?);
        }
        V1 | V2 | V1x | V2x => {
            let n = need_n(p, id)?;
            let k = need_k(p, id)?;
            let big_k = p.big_k.ok_or_else(|| missing("the spherical parameter K", id))?;
            let sk = match id {
                V1 => SphericalKind::Symmetric,
                V2 => SphericalKind::Selfdual,
                V1x => SphericalKind::Real,
                _ => SphericalKind::Quaternion,
            };
            let z = match id {
                V1x | V2x => real(real_z(p, id)?),
                _ => single_z(p, id)?,
            };
            r.exact_value = Some(real(spherical_moment_exact(sk, n, big_k, k, z.norm_sqr())?));
            let zs = vec![z; k];
            r.lhs_mc = Some(match id {
                V1 => estimate_product_average(&spec(EnsembleKind::SS(big_k), n)?, &zs, &zs, PowerMode::Full, false, &lhs_b)?,
                V2 => estimate_product_average(&spec(EnsembleKind::SQA(big_k), n)?, &zs, &zs, PowerMode::Half, false, &lhs_b)?,
                V1x => abs_det_power(&spec(EnsembleKind::SrOE(2 * big_k), n)?, z, 2 * k as i32, &lhs_b)?,
                _ => abs_det_power(&spec(EnsembleKind::SrSE(big_k), n)?, z, k as i32, &lhs_b)?,
            });
        }
        SM2 => {
            let alpha = p.alpha.ok_or_else(|| missing("alpha", id))?;
            let n = need_n(p, id)?;
            let q = p.p.ok_or_else(|| missing("p", id))?;
            let trials = p.trials.unwrap_or(100);
            let mut rng = budget.seed.rng();
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let x: Vec<Complex64> = (0..n).map(|_| complex_normal(0.5, &mut rng)).collect();
                let y: Vec<Complex64> = (0..q).map(|_| complex_normal(0.5, &mut rng)).collect();
                worst = worst.max(dual_cauchy_residual(&x, &y, alpha)?);
            }
            r.residuals.push(Residual { label: "dual Cauchy identity".into(), value: worst, tolerance: 1e-9 });
        }
        X1 => {
            let n = need_n(p, id)?;
            let beta = p.beta.ok_or_else(|| missing("beta", id))?;
            let a = p.a.unwrap_or(0.0);
            let kap = kappa(p, id)?;
            let alpha = 2.0 / beta;
            r.exact_value = Some(real(laguerre_jack_average(&kap, alpha, n, a)?));
            r.lhs_mc = Some(iid_mean(lhs_b.seed, lhs_b.n_samples, |rng| {
                let x = sample_laguerre_beta(beta, n, a, rng)?;
                let xc: Vec<Complex64> = x.into_iter().map(real).collect();
                jack_c(&kap, alpha, &xc)
            })?);
        }
        W => {
            let n = need_n(p, id)?;
            let alpha = p.alpha.ok_or_else(|| missing("alpha", id))?;
            let b2 = p.a.ok_or_else(|| missing("b2 (given as a)", id))?;
            let kap = kappa(p, id)?;
            let beta = 2.0 / alpha;
            r.exact_value = Some(real(jacobi_type_jack_average(&kap, alpha, n, 0.0, b2)?));
            let weight = MEWeightSpec::new(
                beta,
                WeightKind::CauchyLike { exponent: b2 + 2.0 + beta * (n as f64 - 1.0) },
                n,
            )?;
            r.lhs_mc = Some(mcmc_mean(
                &budget.mcmc,
                budget.seed,
                budget.n_samples,
                |s| mcmc_sample_eigen_gas(weight, &budget.mcmc, s),
                |x: &Vec<f64>| {
                    let xc: Vec<Complex64> = x.iter().map(|&v| real(v)).collect();
                    let c = jack_c(&kap, alpha, &xc)?;
                    Ok((c, x.iter().sum()))
                },
            )?);
        }
        JlX => {
            let n = need_n(p, id)?;
            let kap = kappa(p, id)?;
            if p.z.len() != n || p.w.len() != n {
                return Err(missing("diagonals z and w of length N", id));
            }
            let (a, b) = (diag(&p.z), diag(&p.w));
            let ones = jack_at_ones(&kap, 1.0, n)? * c_normalisation(&kap, 1.0)?;
            let exact = jack_c(&kap, 1.0, &p.z)? * jack_c(&kap, 1.0, &p.w)? / (ones * ones)
                * laguerre_jack_average(&kap, 1.0, n, 0.0)?;
            r.exact_value = Some(exact);
            let s = spec(EnsembleKind::GinUE, n)?;
            r.lhs_mc = Some(iid_mean(lhs_b.seed, lhs_b.n_samples, |rng| {
                let x = s.draw(rng)?;
                let m = &a * x.adjoint() * &b * &x;
                jack_c(&kap, 1.0, &eigenvalues(&m)?)
            })?);
        }
        T1 => {
            let n = need_n(p, id)?;
            let kap = kappa(p, id)?;
            let mu = p.mu.clone().ok_or_else(|| missing("a partition mu", id))?;
            if p.z.len() != n || p.w.len() != n {
                return Err(missing("diagonals z and w of length N", id));
            }
            let kind = p.ensemble.unwrap_or(EnsembleKind::GS);
            let alpha = match kind {
                EnsembleKind::GS => 2.0,
                EnsembleKind::GQA => 0.5,
                other => {
                    return Err(ZonalError::ModeMismatch { mode: id.to_string(), ensemble: other.to_string() })
                }
            };
            let exact = if kap == mu {
                let nk = c_normalisation(&kap, alpha)?;
                let ab: Vec<Complex64> = p.z.iter().zip(&p.w).map(|(x, y)| x * y).collect();
                let (_, lower) = hook_products(&kap.conjugate(), 1.0 / alpha)?;
                jack_eval(&kap, alpha, &ab)? * nk * nk * lower
            } else {
                real(0.0)
            };
            r.exact_value = Some(exact);
            let (az, bz) = if kind == EnsembleKind::GQA {
                (diag(&super::doubled(&p.z)), diag(&super::doubled(&p.w)))
            } else {
                (diag(&p.z), diag(&p.w))
            };
            let s = spec(kind, n)?;
            let arg = |m: CMat| -> Result<Vec<Complex64>> {
                let eig = eigenvalues(&m)?;
                if kind == EnsembleKind::GQA {
                    pair_eigenvalues(eig, default_pair_tolerance(&m))
                } else {
                    Ok(eig)
                }
            };
            r.lhs_mc = Some(iid_mean(lhs_b.seed, lhs_b.n_samples, |rng| {
                let x = s.draw(rng)?;
                let left = jack_c(&kap, alpha, &arg(&az * &x)?)?;
                let right = jack_c(&mu, alpha, &arg(&bz * x.adjoint())?)?;
                Ok(left * right)
            })?);
            relaxed_lhs = kind == EnsembleKind::GQA;
        }
    }
    Ok(r.finish(relaxed_lhs, relaxed_rhs))
}
