//! Seedable samplers for the Gaussian, Ginibre and spherical matrix
//! ensembles, Laguerre β-ensembles, and Metropolis samplers for measures
//! without a direct construction.
//!
//! Complex "standard" Gaussians have `E|x|² = 1`. Quaternion entries are
//! stored as 2×2 complex blocks `[[a, b], [−b̄, ā]]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZonalError};
use crate::linalg::{hermitian_inv_sqrt, log_det_identity_plus_gram, q_matrix, symmetric_eigenvalues, CMat};
use crate::special_functions::{MEWeightSpec, WeightKind};

/// Master seed plus ChaCha stream index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedPath {
    pub master: u64,
    pub stream: u64,
}

impl SeedPath {
    pub fn new(master: u64, stream: u64) -> Self {
        SeedPath { master, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }

    /// Deterministic sub-stream `i` of this stream.
    pub fn child(&self, i: u64) -> SeedPath {
        SeedPath { master: self.master, stream: self.stream.wrapping_mul(1 << 20).wrapping_add(i + 1) }
    }
}

impl fmt::Display for SeedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.master, self.stream)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EnsembleKind {
    GinOE,
    GinUE,
    GinSE,
    /// Gaussian complex symmetric, density `∝ e^{−Tr XX†}`.
    GS,
    /// Gaussian complex self-dual `M = Q A`, density `∝ e^{−Tr MM†/2}`.
    GQA,
    /// `(AᵀA)^{−1/2} B` with real `A` of size `(N+K)×N`.
    SrOE(usize),
    /// `(A†A)^{−1/2} B` with quaternion `A` of size `(N+K)×N`.
    SrSE(usize),
    /// Complex symmetric, density `∝ det(I + XX†)^{−N−K}`.
    SS(usize),
    /// Complex self-dual of size `2N`, density `∝ det(I + XX†)^{−2N−K}`.
    SQA(usize),
}

impl EnsembleKind {
    pub fn spherical_parameter(&self) -> Option<usize> {
        match *self {
            EnsembleKind::SrOE(k) | EnsembleKind::SrSE(k) | EnsembleKind::SS(k) | EnsembleKind::SQA(k) => Some(k),
            _ => None,
        }
    }

    /// Whether matrices are `2N×2N` complex representations.
    pub fn is_doubled(&self) -> bool {
        matches!(self, EnsembleKind::GinSE | EnsembleKind::GQA | EnsembleKind::SrSE(_) | EnsembleKind::SQA(_))
    }

    /// Whether sampling needs a Markov chain.
    pub fn needs_mcmc(&self) -> bool {
        matches!(self, EnsembleKind::SS(_) | EnsembleKind::SQA(_))
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleKind::GinOE => write!(f, "GinOE"),
            EnsembleKind::GinUE => write!(f, "GinUE"),
            EnsembleKind::GinSE => write!(f, "GinSE"),
            EnsembleKind::GS => write!(f, "G_S"),
            EnsembleKind::GQA => write!(f, "G_QA"),
            EnsembleKind::SrOE(k) => write!(f, "SrOE({k})"),
            EnsembleKind::SrSE(k) => write!(f, "SrSE({k})"),
            EnsembleKind::SS(k) => write!(f, "S_S({k})"),
            EnsembleKind::SQA(k) => write!(f, "S_QA({k})"),
        }
    }
}

impl From<EnsembleKind> for String {
    fn from(k: EnsembleKind) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for EnsembleKind {
    type Error = ZonalError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for EnsembleKind {
    type Err = ZonalError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || ZonalError::InvalidParameter(format!("unknown ensemble {s:?}"));
        let s = s.trim();
        if let Some(open) = s.find('(') {
            let name = &s[..open];
            let k: usize = s[open + 1..].strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            return match name {
                "SrOE" => Ok(EnsembleKind::SrOE(k)),
                "SrSE" => Ok(EnsembleKind::SrSE(k)),
                "S_S" => Ok(EnsembleKind::SS(k)),
                "S_QA" => Ok(EnsembleKind::SQA(k)),
                _ => Err(bad()),
            };
        }
        match s {
            "GinOE" => Ok(EnsembleKind::GinOE),
            "GinUE" => Ok(EnsembleKind::GinUE),
            "GinSE" => Ok(EnsembleKind::GinSE),
            "G_S" => Ok(EnsembleKind::GS),
            "G_QA" => Ok(EnsembleKind::GQA),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub scaling: f64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize) -> Result<Self> {
        Self::with_scaling(kind, n, 1.0)
    }

    pub fn with_scaling(kind: EnsembleKind, n: usize, scaling: f64) -> Result<Self> {
        if n == 0 {
            return Err(ZonalError::InvalidParameter("matrix size N must be positive".into()));
        }
        if !(scaling > 0.0 && scaling.is_finite()) {
            return Err(ZonalError::InvalidParameter(format!("scaling must be positive, got {scaling}")));
        }
        if kind.spherical_parameter() == Some(0) {
            return Err(ZonalError::InvalidParameter(format!("{kind} needs K >= 1")));
        }
        Ok(EnsembleSpec { kind, n, scaling })
    }

    /// Side length of the complex matrix representation.
    pub fn dim(&self) -> usize {
        if self.kind.is_doubled() {
            2 * self.n
        } else {
            self.n
        }
    }

    /// One independent draw. Markov-chain ensembles are rejected.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CMat> {
        let n = self.n;
        let mut m = match self.kind {
            EnsembleKind::GinOE => real_gaussian(n, n, rng),
            EnsembleKind::GinUE => complex_gaussian(n, n, 1.0, rng),
            EnsembleKind::GinSE => quaternion_gaussian(n, n, rng),
            EnsembleKind::GS => gs_matrix(n, rng),
            EnsembleKind::GQA => gqa_matrix(n, rng),
            EnsembleKind::SrOE(k) => spherical_direct(SphericalField::Real, n, k, rng)?,
            EnsembleKind::SrSE(k) => spherical_direct(SphericalField::Quaternion, n, k, rng)?,
            EnsembleKind::SS(_) | EnsembleKind::SQA(_) => {
                return Err(ZonalError::ModeMismatch {
                    mode: "direct sampling".into(),
                    ensemble: self.kind.to_string(),
                })
            }
        };
        if self.scaling != 1.0 {
            m *= Complex64::new(self.scaling, 0.0);
        }
        Ok(m)
    }
}

/// A sampled matrix with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSample {
    pub entries: CMat,
    pub ensemble: EnsembleSpec,
    pub seed_path: SeedPath,
}

/// Iterator of independent draws from one seeded stream.
pub struct SampleStream {
    spec: EnsembleSpec,
    seed_path: SeedPath,
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(spec: EnsembleSpec, seed_path: SeedPath) -> Self {
        SampleStream { spec, seed_path, rng: seed_path.rng() }
    }
}

impl Iterator for SampleStream {
    type Item = Result<MatrixSample>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.spec.draw(&mut self.rng).map(|entries| MatrixSample {
            entries,
            ensemble: self.spec,
            seed_path: self.seed_path,
        }))
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Gaussian with `E|x|² = var`.
pub fn complex_normal<R: Rng + ?Sized>(var: f64, rng: &mut R) -> Complex64 {
    let s = (var / 2.0).sqrt();
    Complex64::new(s * normal(rng), s * normal(rng))
}

fn real_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| Complex64::new(normal(rng), 0.0))
}

fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, var: f64, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_normal(var, rng))
}

/// `2·rows × 2·cols` complex form of a quaternion Gaussian matrix whose
/// complex entries have `E|a|² = E|b|² = 1/2`.
fn quaternion_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    let mut m = CMat::zeros(2 * rows, 2 * cols);
    for i in 0..rows {
        for j in 0..cols {
            let a = complex_normal(0.5, rng);
            let b = complex_normal(0.5, rng);
            m[(2 * i, 2 * j)] = a;
            m[(2 * i, 2 * j + 1)] = b;
            m[(2 * i + 1, 2 * j)] = -b.conj();
            m[(2 * i + 1, 2 * j + 1)] = a.conj();
        }
    }
    m
}

fn gs_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = complex_normal(1.0, rng);
        for j in i + 1..n {
            let v = complex_normal(0.5, rng);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn antisymmetric_from_upper(n: usize, upper: impl Iterator<Item = Complex64>) -> CMat {
    let mut a = CMat::zeros(n, n);
    let mut it = upper;
    for i in 0..n {
        for j in i + 1..n {
            let v = it.next().expect("enough upper entries");
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    a
}

fn gqa_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let dim = 2 * n;
    let count = dim * (dim - 1) / 2;
    let upper: Vec<Complex64> = (0..count).map(|_| complex_normal(1.0, rng)).collect();
    q_matrix(n) * antisymmetric_from_upper(dim, upper.into_iter())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GinibreField {
    Real,
    Complex,
    Quaternion,
}

pub fn sample_ginibre<R: Rng + ?Sized>(field: GinibreField, n: usize, rng: &mut R) -> CMat {
    match field {
        GinibreField::Real => real_gaussian(n, n, rng),
        GinibreField::Complex => complex_gaussian(n, n, 1.0, rng),
        GinibreField::Quaternion => quaternion_gaussian(n, n, rng),
    }
}

/// Complex symmetric Gaussian: `E|X_jj|² = 1`, `E|X_jk|² = 1/2`.
pub fn sample_gs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    gs_matrix(n, rng)
}

/// Complex self-dual Gaussian `M = Q_{2N} A`, `E|A_jk|² = 1`.
pub fn sample_gqa<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    gqa_matrix(n, rng)
}

/// Complex antisymmetric Gaussian with `E|X_jk|² = 1` above the diagonal.
pub fn sample_complex_antisymmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let count = n * n.saturating_sub(1) / 2;
    let upper: Vec<Complex64> = (0..count).map(|_| complex_normal(1.0, rng)).collect();
    antisymmetric_from_upper(n, upper.into_iter())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphericalField {
    Real,
    Quaternion,
}

fn spherical_direct<R: Rng + ?Sized>(field: SphericalField, n: usize, k: usize, rng: &mut R) -> Result<CMat> {
    let (a, b) = match field {
        SphericalField::Real => (real_gaussian(n + k, n, rng), real_gaussian(n, n, rng)),
        SphericalField::Quaternion => (quaternion_gaussian(n + k, n, rng), quaternion_gaussian(n, n, rng)),
    };
    Ok(hermitian_inv_sqrt(&(a.adjoint() * &a))? * b)
}

/// `(A†A)^{−1/2} B` with Gaussian `A` of size `(N+K)×N` and `B` of size `N×N`.
pub fn sample_spherical_direct<R: Rng + ?Sized>(field: SphericalField, n: usize, k: usize, rng: &mut R) -> Result<CMat> {
    if n == 0 || k == 0 {
        return Err(ZonalError::InvalidParameter(format!("need N, K >= 1, got N = {n}, K = {k}")));
    }
    spherical_direct(field, n, k, rng)
}

/// Eigenvalues of `ME_{β,N}[λ^a e^{−λ}]` from the bidiagonal model.
pub fn sample_laguerre_beta<R: Rng + ?Sized>(beta: f64, n: usize, a: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(beta > 0.0) || !(a > -1.0) || n == 0 {
        return Err(ZonalError::InvalidParameter(format!(
            "need beta > 0, a > -1, N >= 1; got beta = {beta}, a = {a}, N = {n}"
        )));
    }
    let chi = |dof: f64, rng: &mut R| -> f64 {
        ChiSquared::new(dof).expect("positive degrees of freedom").sample(rng).sqrt()
    };
    let mut diag = Vec::with_capacity(n);
    let mut sub = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        diag.push(chi(2.0 * (a + 1.0) + beta * (n - 1 - i) as f64, rng));
        if i + 1 < n {
            sub.push(chi(beta * (n - 1 - i) as f64, rng));
        }
    }
    // tridiagonal B Bᵀ for lower-bidiagonal B
    let t = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i] * diag[i] + if i > 0 { sub[i - 1] * sub[i - 1] } else { 0.0 }
        } else if i == j + 1 {
            sub[j] * diag[j]
        } else if j == i + 1 {
            sub[i] * diag[i]
        } else {
            0.0
        }
    });
    Ok(symmetric_eigenvalues(t).into_iter().map(|v| (v / 2.0).max(0.0)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McmcConfig {
    pub proposal_scale: f64,
    pub burn_in: usize,
    pub thinning: usize,
    pub chains: usize,
    pub batch_count: usize,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig { proposal_scale: 0.3, burn_in: 5_000, thinning: 5, chains: 4, batch_count: 50 }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.proposal_scale > 0.0) || self.burn_in == 0 || self.thinning == 0 || self.chains == 0 || self.batch_count == 0 {
            return Err(ZonalError::InvalidParameter(format!("invalid MCMC configuration {self:?}")));
        }
        Ok(())
    }
}

/// Unnormalised log-density on `ℝ^d`.
pub trait Target {
    fn dim(&self) -> usize;
    fn log_density(&self, x: &[f64]) -> f64;
    fn initial_state(&self) -> Vec<f64>;
}

const ADAPT_WINDOW: usize = 100;
const TARGET_ACCEPTANCE: f64 = 0.3;

/// Random-walk Metropolis with Gaussian proposals. The global scale adapts
/// only during burn-in and is frozen afterwards.
pub struct MetropolisChain<T: Target> {
    target: T,
    state: Vec<f64>,
    log_p: f64,
    scale: f64,
    rng: ChaCha8Rng,
    accepted: u64,
    proposed: u64,
    thinning: usize,
    proposal: Vec<f64>,
}

impl<T: Target> MetropolisChain<T> {
    pub fn new(target: T, cfg: &McmcConfig, seed: SeedPath) -> Result<Self> {
        cfg.validate()?;
        let state = target.initial_state();
        let log_p = target.log_density(&state);
        if !log_p.is_finite() {
            return Err(ZonalError::NonFiniteLogDensity);
        }
        let dim = target.dim();
        let mut chain = MetropolisChain {
            target,
            state,
            log_p,
            scale: cfg.proposal_scale,
            rng: seed.rng(),
            accepted: 0,
            proposed: 0,
            thinning: cfg.thinning,
            proposal: vec![0.0; dim],
        };
        chain.burn_in(cfg.burn_in);
        Ok(chain)
    }

    fn step(&mut self) -> bool {
        for (p, &x) in self.proposal.iter_mut().zip(&self.state) {
            *p = x + self.scale * normal(&mut self.rng);
        }
        let lp = self.target.log_density(&self.proposal);
        self.proposed += 1;
        let u: f64 = self.rng.random();
        if lp.is_finite() && u.ln() < lp - self.log_p {
            std::mem::swap(&mut self.state, &mut self.proposal);
            self.log_p = lp;
            self.accepted += 1;
            true
        } else {
            false
        }
    }

    fn burn_in(&mut self, steps: usize) {
        let mut window = 0usize;
        for i in 0..steps {
            if self.step() {
                window += 1;
            }
            if (i + 1) % ADAPT_WINDOW == 0 {
                let rate = window as f64 / ADAPT_WINDOW as f64;
                self.scale *= (2.0 * (rate - TARGET_ACCEPTANCE)).exp();
                window = 0;
            }
        }
        self.accepted = 0;
        self.proposed = 0;
    }

    /// Advances `thinning` steps and returns the new state.
    pub fn next_state(&mut self) -> &[f64] {
        for _ in 0..self.thinning {
            self.step();
        }
        &self.state
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            f64::NAN
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Warning text when post-adaptation acceptance left `[0.1, 0.6]`.
    pub fn tuning_warning(&self) -> Option<String> {
        let r = self.acceptance_rate();
        if r.is_finite() && !(0.1..=0.6).contains(&r) {
            let msg = format!("Metropolis acceptance rate {r:.3} outside [0.1, 0.6]; adjust proposal_scale or burn_in");
            log::warn!("{msg}");
            Some(msg)
        } else {
            None
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn target(&self) -> &T {
        &self.target
    }
}

/// Spherical measures on complex symmetric or self-dual matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalTarget {
    pub kind: EnsembleKind,
    pub n: usize,
    pub k: usize,
    exponent: f64,
    entries: usize,
}

impl SphericalTarget {
    pub fn new(kind: EnsembleKind, n: usize) -> Result<Self> {
        let (k, exponent, entries) = match kind {
            EnsembleKind::SS(k) => (k, (n + k) as f64, n * (n + 1) / 2),
            EnsembleKind::SQA(k) => (k, (2 * n + k) as f64, n * (2 * n - 1)),
            _ => {
                return Err(ZonalError::ModeMismatch { mode: "spherical MCMC".into(), ensemble: kind.to_string() })
            }
        };
        if n == 0 || k == 0 {
            return Err(ZonalError::InvalidParameter(format!("need N, K >= 1 for {kind}")));
        }
        Ok(SphericalTarget { kind, n, k, exponent, entries })
    }

    /// Matrix for a coordinate vector `(re, im)` of the free entries.
    pub fn matrix(&self, x: &[f64]) -> CMat {
        let vals = x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1]));
        match self.kind {
            EnsembleKind::SS(_) => {
                let mut m = CMat::zeros(self.n, self.n);
                let mut it = vals;
                for i in 0..self.n {
                    for j in i..self.n {
                        let v = it.next().expect("coordinate count");
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
                m
            }
            _ => q_matrix(self.n) * antisymmetric_from_upper(2 * self.n, vals),
        }
    }
}

impl Target for SphericalTarget {
    fn dim(&self) -> usize {
        2 * self.entries
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        match log_det_identity_plus_gram(&self.matrix(x)) {
            Ok(l) => -self.exponent * l,
            Err(_) => f64::NEG_INFINITY,
        }
    }

    fn initial_state(&self) -> Vec<f64> {
        vec![0.0; self.dim()]
    }
}

/// Acceptance statistics shared by the Metropolis streams.
pub trait ChainDiagnostics {
    fn acceptance_rate(&self) -> f64;
    fn tuning_warning(&self) -> Option<String>;
}

/// Stream of thinned post-burn-in spherical samples.
pub struct SphericalMcmc {
    chain: MetropolisChain<SphericalTarget>,
    spec: EnsembleSpec,
    seed_path: SeedPath,
}

impl ChainDiagnostics for SphericalMcmc {
    fn acceptance_rate(&self) -> f64 {
        self.chain.acceptance_rate()
    }

    fn tuning_warning(&self) -> Option<String> {
        self.chain.tuning_warning()
    }
}

impl Iterator for SphericalMcmc {
    type Item = MatrixSample;

    fn next(&mut self) -> Option<MatrixSample> {
        let x = self.chain.next_state().to_vec();
        let mut entries = self.chain.target().matrix(&x);
        if self.spec.scaling != 1.0 {
            entries *= Complex64::new(self.spec.scaling, 0.0);
        }
        Some(MatrixSample { entries, ensemble: self.spec, seed_path: self.seed_path })
    }
}

/// Metropolis sampler for `S_S(K)` or `S_QA(K)`.
pub fn mcmc_sample_spherical(spec: EnsembleSpec, cfg: &McmcConfig, seed: SeedPath) -> Result<SphericalMcmc> {
    let target = SphericalTarget::new(spec.kind, spec.n)?;
    Ok(SphericalMcmc { chain: MetropolisChain::new(target, cfg, seed)?, spec, seed_path: seed })
}

/// Eigenvalue gas `Π w(x_l) Π_{j<k} |x_k − x_j|^β`, sampled in log or logit
/// coordinates with the Jacobian included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenGasTarget {
    pub weight: MEWeightSpec,
}

impl EigenGasTarget {
    pub fn new(weight: MEWeightSpec) -> Result<Self> {
        weight.validate()?;
        Ok(EigenGasTarget { weight })
    }

    fn unit_interval(&self) -> bool {
        matches!(self.weight.weight, WeightKind::Jacobi01 { .. })
    }

    pub fn eigenvalues(&self, y: &[f64]) -> Vec<f64> {
        if self.unit_interval() {
            y.iter().map(|&v| 1.0 / (1.0 + (-v).exp())).collect()
        } else {
            y.iter().map(|&v| v.exp()).collect()
        }
    }
}

impl Target for EigenGasTarget {
    fn dim(&self) -> usize {
        self.weight.n
    }

    fn log_density(&self, y: &[f64]) -> f64 {
        let x = self.eigenvalues(y);
        let mut lp = 0.0;
        for (i, (&xi, &yi)) in x.iter().zip(y).enumerate() {
            lp += self.weight.log_weight(xi);
            lp += if self.unit_interval() { xi.ln() + (1.0 - xi).ln() } else { yi };
            if self.weight.beta != 0.0 {
                for &xj in &x[..i] {
                    lp += self.weight.beta * (xi - xj).abs().ln();
                }
            }
        }
        if lp.is_nan() {
            f64::NEG_INFINITY
        } else {
            lp
        }
    }

    fn initial_state(&self) -> Vec<f64> {
        // distinct starting points avoid the repulsion singularity
        (0..self.weight.n).map(|i| (i as f64 + 0.5) / self.weight.n as f64 - 0.5).collect()
    }
}

/// Stream of eigenvalue lists from one Metropolis chain.
pub struct EigenGasMcmc {
    chain: MetropolisChain<EigenGasTarget>,
}

impl ChainDiagnostics for EigenGasMcmc {
    fn acceptance_rate(&self) -> f64 {
        self.chain.acceptance_rate()
    }

    fn tuning_warning(&self) -> Option<String> {
        self.chain.tuning_warning()
    }
}

impl Iterator for EigenGasMcmc {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let y = self.chain.next_state().to_vec();
        Some(self.chain.target().eigenvalues(&y))
    }
}

pub fn mcmc_sample_eigen_gas(weight: MEWeightSpec, cfg: &McmcConfig, seed: SeedPath) -> Result<EigenGasMcmc> {
    Ok(EigenGasMcmc { chain: MetropolisChain::new(EigenGasTarget::new(weight)?, cfg, seed)? })
}
