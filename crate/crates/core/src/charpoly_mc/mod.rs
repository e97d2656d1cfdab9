//! Monte Carlo estimates of averaged products of characteristic
//! polynomials, block-matrix dual sides, identity verification and exact
//! large-`N` ratio tables.
//!
//! Sample budgets are split across a fixed number of seeded streams and
//! merged in stream order, so estimates do not depend on thread scheduling.

mod ratio;
mod verify;

pub use ratio::{ratio_convergence_experiment, RatioFit, RatioRow, RatioTable};
pub use verify::{verify_identity, DualityReport, IdentityId, IdentityParams, ZScore};

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{
    mcmc_sample_spherical, sample_complex_antisymmetric, sample_ginibre, sample_gs, ChainDiagnostics, EnsembleSpec,
    GinibreField, McmcConfig, SeedPath,
};
use crate::error::{Result, ZonalError};
use crate::linalg::{det, log_det, pfaffian, q_matrix, CMat};
use crate::stats::{batch_means, split_rhat, MomentAccumulator, RatioAccumulator};

/// Number of independent seeded streams an i.i.d. budget is split into.
pub const STREAMS: u64 = 64;
pub const IID_THRESHOLD: f64 = 4.0;
pub const MCMC_THRESHOLD: f64 = 5.0;
/// Smallest budget for which a standard error is reported.
pub const MIN_SAMPLES: u64 = 100;
/// Above this many determinant factors' total size, products go through logs.
const LOG_SPACE_SIZE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Iid,
    BatchMeans,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcDiagnostics {
    pub split_rhat: f64,
    pub acceptance_rate: f64,
    pub batches: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: Complex64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed_path: SeedPath,
    pub estimator_kind: EstimatorKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mcmc: Option<McmcDiagnostics>,
}

impl MCEstimate {
    pub fn threshold(&self) -> f64 {
        match self.estimator_kind {
            EstimatorKind::Iid => IID_THRESHOLD,
            EstimatorKind::BatchMeans => MCMC_THRESHOLD,
        }
    }

    /// `|mean − exact| / std_error`.
    pub fn z_score_exact(&self, exact: Complex64) -> f64 {
        z_score((self.mean - exact).norm(), self.std_error)
    }

    /// `|mean_a − mean_b| / sqrt(σ_a² + σ_b²)`.
    pub fn z_score_against(&self, other: &MCEstimate) -> f64 {
        z_score((self.mean - other.mean).norm(), self.std_error.hypot(other.std_error))
    }
}

fn z_score(diff: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        diff / sigma
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// How to raise characteristic polynomials of self-dual matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerMode {
    Full,
    /// One factor per degenerate eigenvalue pair.
    Half,
}

/// Sample budget and seeding for one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McBudget {
    pub n_samples: u64,
    pub seed: SeedPath,
    pub mcmc: McmcConfig,
}

impl McBudget {
    pub fn new(n_samples: u64, seed: SeedPath) -> Self {
        McBudget { n_samples, seed, mcmc: McmcConfig::default() }
    }

    fn check(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(ZonalError::Budget(format!(
                "{} samples cannot resolve a standard error; need at least {MIN_SAMPLES}",
                self.n_samples
            )));
        }
        Ok(())
    }

    /// Budget for the `i`-th independent side of a report.
    pub fn derive(&self, i: u64) -> McBudget {
        McBudget { seed: self.seed.child(i), ..*self }
    }
}

fn stream_sizes(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..STREAMS).map(move |i| (i, n / STREAMS + u64::from(i < n % STREAMS)))
}

/// Mean of `f` over `n` i.i.d. draws.
pub fn iid_mean<F>(seed: SeedPath, n: u64, f: F) -> Result<MCEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Complex64> + Sync,
{
    let parts: Vec<Result<MomentAccumulator>> = stream_sizes(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, len)| {
            let mut rng = seed.child(i).rng();
            let mut acc = MomentAccumulator::default();
            for _ in 0..len {
                acc.push(f(&mut rng)?);
            }
            Ok(acc)
        })
        .collect();
    let mut total = MomentAccumulator::default();
    for p in parts {
        total.merge(&p?);
    }
    Ok(MCEstimate {
        mean: total.mean(),
        std_error: total.std_error(),
        n_samples: total.count(),
        seed_path: seed,
        estimator_kind: EstimatorKind::Iid,
        mcmc: None,
    })
}

/// Ratio `mean(f) / mean(g)` over `n` i.i.d. draws of the pair.
pub fn iid_ratio<F>(seed: SeedPath, n: u64, f: F) -> Result<MCEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(Complex64, Complex64)> + Sync,
{
    let parts: Vec<Result<RatioAccumulator>> = stream_sizes(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, len)| {
            let mut rng = seed.child(i).rng();
            let mut acc = RatioAccumulator::default();
            for _ in 0..len {
                let (a, b) = f(&mut rng)?;
                acc.push(a, b);
            }
            Ok(acc)
        })
        .collect();
    let mut total = RatioAccumulator::default();
    for p in parts {
        total.merge(&p?);
    }
    Ok(MCEstimate {
        mean: total.ratio(),
        std_error: total.std_error(),
        n_samples: total.count(),
        seed_path: seed,
        estimator_kind: EstimatorKind::Iid,
        mcmc: None,
    })
}

/// Batch-means estimate over `cfg.chains` Metropolis chains. `f` maps a
/// state to the integrand and a scalar monitored by split-R̂.
pub fn mcmc_mean<I, T, M, F>(cfg: &McmcConfig, seed: SeedPath, n: u64, make: M, f: F) -> Result<MCEstimate>
where
    I: Iterator<Item = T> + ChainDiagnostics,
    M: Fn(SeedPath) -> Result<I> + Sync,
    F: Fn(&T) -> Result<(Complex64, f64)> + Sync,
{
    cfg.validate()?;
    let chains = cfg.chains as u64;
    let per_chain = n.div_ceil(chains);
    let runs: Vec<Result<(Vec<Complex64>, Vec<f64>, f64, Option<String>)>> = (0..chains)
        .into_par_iter()
        .map(|c| {
            let mut it = make(seed.child(c))?;
            let mut values = Vec::with_capacity(per_chain as usize);
            let mut monitor = Vec::with_capacity(per_chain as usize);
            for _ in 0..per_chain {
                let state = it.next().expect("Metropolis streams are infinite");
                let (v, m) = f(&state)?;
                values.push(v);
                monitor.push(m);
            }
            Ok((values, monitor, it.acceptance_rate(), it.tuning_warning()))
        })
        .collect();
    let mut values = Vec::new();
    let mut monitors = Vec::new();
    let mut acceptance = 0.0;
    let mut warnings = Vec::new();
    for r in runs {
        let (v, m, a, w) = r?;
        values.push(v);
        monitors.push(m);
        acceptance += a / chains as f64;
        warnings.extend(w);
    }
    let (mean, std_error, batches) = batch_means(&values, cfg.batch_count);
    let rhat = split_rhat(&monitors);
    if rhat > 1.05 {
        warnings.push(format!("split R-hat {rhat:.3} exceeds 1.05"));
    }
    Ok(MCEstimate {
        mean,
        std_error,
        n_samples: per_chain * chains,
        seed_path: seed,
        estimator_kind: EstimatorKind::BatchMeans,
        mcmc: Some(McmcDiagnostics { split_rhat: rhat, acceptance_rate: acceptance, batches, warnings }),
    })
}

/// `det(z I − M)`; re-exported for callers that work on raw matrices.
pub use crate::linalg::char_poly_value;
pub use crate::linalg::sqrt_det_shifted;

/// `det(z I − M)^{1/2}` for `M = Q A` self-dual, as the Pfaffian
/// `Pf(Qᵀ(z I − M))`; equals the product over one eigenvalue per pair.
pub fn half_char_poly_self_dual(z: Complex64, m: &CMat) -> Result<Complex64> {
    let n = m.nrows() / 2;
    let mut shifted = -m.clone();
    for i in 0..m.nrows() {
        shifted[(i, i)] += z;
    }
    pfaffian(&(q_matrix(n).transpose() * shifted))
}

/// Multiplies factors given as `(ln|f|, f/|f|)`.
fn product_from_logs(factors: impl Iterator<Item = (f64, Complex64)>) -> Complex64 {
    let (ln_abs, phase) = factors.fold((0.0, Complex64::new(1.0, 0.0)), |(l, p), (lf, pf)| (l + lf, p * pf));
    if ln_abs == f64::NEG_INFINITY {
        Complex64::new(0.0, 0.0)
    } else {
        phase * ln_abs.exp()
    }
}

fn shifted(z: Complex64, m: &CMat) -> CMat {
    let mut s = -m.clone();
    for i in 0..m.nrows() {
        s[(i, i)] += z;
    }
    s
}

/// `Π_l f(z_l) conj(f(w_l))` with `f = det(· I − M)` or its half power.
pub fn product_integrand(m: &CMat, z: &[Complex64], w: &[Complex64], mode: PowerMode) -> Result<Complex64> {
    let single = |x: Complex64| -> Result<Complex64> {
        match mode {
            PowerMode::Full => det(&shifted(x, m)),
            PowerMode::Half => half_char_poly_self_dual(x, m),
        }
    };
    if m.nrows() * (z.len() + w.len()) > LOG_SPACE_SIZE && mode == PowerMode::Full {
        let mut logs = Vec::with_capacity(z.len() + w.len());
        for &x in z {
            logs.push(log_det(&shifted(x, m))?);
        }
        for &x in w {
            let (l, p) = log_det(&shifted(x, m))?;
            logs.push((l, p.conj()));
        }
        return Ok(product_from_logs(logs.into_iter()));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for &x in z {
        acc *= single(x)?;
    }
    for &x in w {
        acc *= single(x)?.conj();
    }
    Ok(acc)
}

/// `Π_j det(M − z_j I)`, no conjugates.
pub fn plain_product_integrand(m: &CMat, zs: &[Complex64]) -> Result<Complex64> {
    let sign = if m.nrows() % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = Complex64::new(1.0, 0.0);
    for &x in zs {
        acc *= det(&shifted(x, m))? * sign;
    }
    Ok(acc)
}

fn check_lists(z: &[Complex64], w: &[Complex64]) -> Result<()> {
    if z.len() != w.len() {
        return Err(ZonalError::InvalidParameter(format!(
            "z and w lists differ in length ({} vs {})",
            z.len(),
            w.len()
        )));
    }
    Ok(())
}

fn check_mode(spec: &EnsembleSpec, mode: PowerMode) -> Result<()> {
    use crate::ensembles::EnsembleKind::*;
    if mode == PowerMode::Half && !matches!(spec.kind, GQA | SQA(_)) {
        return Err(ZonalError::ModeMismatch { mode: "half power".into(), ensemble: spec.kind.to_string() });
    }
    Ok(())
}

fn trace_gram(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm_sqr()).sum()
}

/// Estimate of `⟨Π_l det(z_l − Z) det(w̄_l − Z̄)⟩` (or half powers). With
/// `normalize`, the ratio to the same average at `z = w = 0` is returned.
pub fn estimate_product_average(
    spec: &EnsembleSpec,
    z: &[Complex64],
    w: &[Complex64],
    mode: PowerMode,
    normalize: bool,
    budget: &McBudget,
) -> Result<MCEstimate> {
    check_lists(z, w)?;
    check_mode(spec, mode)?;
    budget.check()?;
    let zeros = vec![Complex64::new(0.0, 0.0); z.len()];
    if spec.kind.needs_mcmc() {
        if normalize {
            return Err(ZonalError::ModeMismatch {
                mode: "normalised ratio estimate".into(),
                ensemble: spec.kind.to_string(),
            });
        }
        let spec = *spec;
        return mcmc_mean(
            &budget.mcmc,
            budget.seed,
            budget.n_samples,
            |s| mcmc_sample_spherical(spec, &budget.mcmc, s),
            |sample| Ok((product_integrand(&sample.entries, z, w, mode)?, trace_gram(&sample.entries))),
        );
    }
    if normalize {
        iid_ratio(budget.seed, budget.n_samples, |rng| {
            let m = spec.draw(rng)?;
            Ok((product_integrand(&m, z, w, mode)?, product_integrand(&m, &zeros, &zeros, mode)?))
        })
    } else {
        iid_mean(budget.seed, budget.n_samples, |rng| product_integrand(&spec.draw(rng)?, z, w, mode))
    }
}

/// Estimate of `⟨Π_j det(G − z_j I)⟩` without conjugated factors.
pub fn estimate_plain_product(spec: &EnsembleSpec, zs: &[Complex64], budget: &McBudget) -> Result<MCEstimate> {
    budget.check()?;
    if spec.kind.needs_mcmc() {
        return Err(ZonalError::ModeMismatch { mode: "plain product".into(), ensemble: spec.kind.to_string() });
    }
    iid_mean(budget.seed, budget.n_samples, |rng| plain_product_integrand(&spec.draw(rng)?, zs))
}

/// Block-matrix dual sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockIdentity {
    /// `det[[D1, −Y], [Y†, D2]]^N`, `Y ∈ GinUE_k`.
    GinueDual,
    /// `det[[D1⊗I₂, −Y], [Y†, D̄2⊗I₂]]^{N/2}`, `Y ∈ GinSE_k`.
    SymmetricDual,
    /// `det[[D1, −Y], [Y†, D̄2]]^N`, `Y ∈ GinOE_k`.
    SelfDualHalf,
    /// `det[[D1⊗I₂, −Y], [Y†, D̄2⊗I₂]]^N`, `Y ∈ GinOE_{2k}`.
    SelfDualFull,
    /// `det[[X, Z], [−Z, X†]]^{N/2}`, `X` complex antisymmetric of size `2k`.
    RealCompanion,
    /// `det[[X, Z], [−Z, X†]]^N`, `X ∈ G𝒮_{2k}`.
    QuaternionCompanion,
}

fn diag(v: &[Complex64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_column_slice(v))
}

fn doubled(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().flat_map(|&x| [x, x]).collect()
}

fn block(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let (p, q) = (a.nrows(), a.ncols());
    let mut m = CMat::zeros(p + c.nrows(), q + b.ncols());
    m.view_mut((0, 0), (p, q)).copy_from(a);
    m.view_mut((0, q), (b.nrows(), b.ncols())).copy_from(b);
    m.view_mut((p, 0), (c.nrows(), c.ncols())).copy_from(c);
    m.view_mut((p, q), (d.nrows(), d.ncols())).copy_from(d);
    m
}

fn sign_pow(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// One sample of a block-matrix dual side. `z` and `w` are the argument
/// lists (`w` unused by the companion identities, whose `z` has length `2k`).
pub fn block_rhs_integrand(
    identity: BlockIdentity,
    z: &[Complex64],
    w: &[Complex64],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Complex64> {
    let k = z.len();
    let wbar: Vec<Complex64> = w.iter().map(|v| v.conj()).collect();
    let n32 = n as u32;
    match identity {
        BlockIdentity::GinueDual => {
            let y = sample_ginibre(GinibreField::Complex, k, rng);
            Ok(det(&block(&diag(z), &(-&y), &y.adjoint(), &diag(w)))?.powu(n32))
        }
        BlockIdentity::SymmetricDual => {
            let y = sample_ginibre(GinibreField::Quaternion, k, rng);
            let b = block(&diag(&doubled(z)), &(-&y), &y.adjoint(), &diag(&doubled(&wbar)));
            let q = q_matrix(k);
            let jt = block(&q.transpose(), &CMat::zeros(2 * k, 2 * k), &CMat::zeros(2 * k, 2 * k), &(-q.transpose()));
            Ok((pfaffian(&(jt * b))? * sign_pow(k)).powu(n32))
        }
        BlockIdentity::SelfDualHalf => {
            let y = sample_ginibre(GinibreField::Real, k, rng);
            Ok(det(&block(&diag(z), &(-&y), &y.adjoint(), &diag(&wbar)))?.powu(n32))
        }
        BlockIdentity::SelfDualFull => {
            let y = sample_ginibre(GinibreField::Real, 2 * k, rng);
            Ok(det(&block(&diag(&doubled(z)), &(-&y), &y.adjoint(), &diag(&doubled(&wbar))))?.powu(n32))
        }
        BlockIdentity::RealCompanion | BlockIdentity::QuaternionCompanion => {
            if k % 2 == 1 {
                return Err(ZonalError::InvalidParameter(format!(
                    "companion identities need an even number of arguments, got {k}"
                )));
            }
            let x = if identity == BlockIdentity::RealCompanion {
                sample_complex_antisymmetric(k, rng)
            } else {
                sample_gs(k, rng)
            };
            let zm = diag(z);
            let m = block(&x, &zm, &(-&zm), &x.adjoint());
            if identity == BlockIdentity::RealCompanion {
                Ok((pfaffian(&m)? * sign_pow(k / 2)).powu(n32))
            } else {
                Ok(det(&m)?.powu(n32))
            }
        }
    }
}

/// Estimate of a block-matrix dual side.
pub fn estimate_block_rhs(
    identity: BlockIdentity,
    z: &[Complex64],
    w: &[Complex64],
    n: usize,
    budget: &McBudget,
) -> Result<MCEstimate> {
    budget.check()?;
    if !matches!(identity, BlockIdentity::RealCompanion | BlockIdentity::QuaternionCompanion) {
        check_lists(z, w)?;
    }
    if z.is_empty() {
        return Err(ZonalError::InvalidParameter("empty argument list".into()));
    }
    iid_mean(budget.seed, budget.n_samples, |rng| block_rhs_integrand(identity, z, w, n, rng))
}

/// `⟨(z w̄ + |u|²)^N⟩` over a standard complex normal `u`.
pub fn estimate_scalar_dual(z: Complex64, w: Complex64, n: usize, budget: &McBudget) -> Result<MCEstimate> {
    budget.check()?;
    let y = z * w.conj();
    iid_mean(budget.seed, budget.n_samples, |rng| {
        let u = crate::ensembles::complex_normal(1.0, rng);
        Ok((y + u.norm_sqr()).powu(n as u32))
    })
}
