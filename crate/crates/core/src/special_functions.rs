//! Exact finite-sum evaluators: truncated exponentials, the Jack-based
//! `₂F₁`, Laguerre and Jacobi-type Jack averages, Selberg-type products,
//! duality sums with reciprocal arguments and large-`N` ratio predictions.
//!
//! Sums whose terms overflow for large `N` are accumulated as signed
//! logarithms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::factorial;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Result, ZonalError};
use crate::jack::{jack_at_ones, jack_in_monomials, CompensatedSum};
use crate::partitions::{box_size, enumerate_in_box, Partition};

/// Weight of a one-component log-gas `Π w(x_l) Π |x_k − x_j|^β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightKind {
    /// `λ^a e^{−λ}` on `(0, ∞)`.
    Laguerre { a: f64 },
    /// `λ^{a1} (1 − λ)^{a2}` on `(0, 1)`.
    Jacobi01 { a1: f64, a2: f64 },
    /// `(1 + λ)^{−exponent}` on `(0, ∞)`.
    CauchyLike { exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MEWeightSpec {
    pub beta: f64,
    pub weight: WeightKind,
    pub n: usize,
}

impl MEWeightSpec {
    pub fn new(beta: f64, weight: WeightKind, n: usize) -> Result<Self> {
        let spec = MEWeightSpec { beta, weight, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) || self.n == 0 {
            return Err(ZonalError::InvalidParameter(format!(
                "need beta >= 0 and N >= 1, got beta = {}, N = {}",
                self.beta, self.n
            )));
        }
        let ok = match self.weight {
            WeightKind::Laguerre { a } => a > -1.0,
            WeightKind::Jacobi01 { a1, a2 } => a1 > -1.0 && a2 > -1.0,
            // the largest eigenvalue sees a tail x^{β(N−1) − exponent}
            WeightKind::CauchyLike { exponent } => {
                exponent > 1.0 + self.beta * (self.n as f64 - 1.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(ZonalError::InvalidParameter(format!("weight {:?} is not normalisable", self.weight)))
        }
    }

    /// Log of the weight at `x`, `-inf` outside the support.
    pub fn log_weight(&self, x: f64) -> f64 {
        match self.weight {
            WeightKind::Laguerre { a } if x > 0.0 => a * x.ln() - x,
            WeightKind::Jacobi01 { a1, a2 } if x > 0.0 && x < 1.0 => a1 * x.ln() + a2 * (1.0 - x).ln(),
            WeightKind::CauchyLike { exponent } if x > 0.0 => -exponent * x.ln_1p(),
            _ => f64::NEG_INFINITY,
        }
    }
}

/// A real number stored as sign and natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0.0, ln_abs: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: 1.0, ln_abs: 0.0 };

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            SignedLog { sign: v.signum(), ln_abs: v.abs().ln() }
        }
    }

    pub fn mul(self, other: SignedLog) -> SignedLog {
        if self.sign == 0.0 || other.sign == 0.0 {
            return Self::ZERO;
        }
        SignedLog { sign: self.sign * other.sign, ln_abs: self.ln_abs + other.ln_abs }
    }

    pub fn mul_f64(self, v: f64) -> SignedLog {
        self.mul(Self::from_f64(v))
    }

    pub fn div(self, other: SignedLog) -> SignedLog {
        debug_assert!(other.sign != 0.0);
        SignedLog { sign: self.sign * other.sign, ln_abs: self.ln_abs - other.ln_abs }
    }

    pub fn to_f64(self) -> f64 {
        self.sign * self.ln_abs.exp()
    }

    /// `self / other` as an ordinary float.
    pub fn ratio(self, other: SignedLog) -> f64 {
        self.div(other).to_f64()
    }
}

/// Sum of signed logs, rescaled by the largest magnitude at the end.
#[derive(Debug, Clone, Default)]
pub struct LogSum {
    terms: Vec<SignedLog>,
}

impl LogSum {
    pub fn add(&mut self, t: SignedLog) {
        if t.sign != 0.0 {
            self.terms.push(t);
        }
    }

    pub fn value(&self) -> SignedLog {
        let m = self.terms.iter().map(|t| t.ln_abs).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return SignedLog::ZERO;
        }
        let mut acc = CompensatedSum::default();
        for t in &self.terms {
            acc.add(Complex64::new(t.sign * (t.ln_abs - m).exp(), 0.0));
        }
        let s = acc.value().re;
        if s == 0.0 {
            SignedLog::ZERO
        } else {
            SignedLog { sign: s.signum(), ln_abs: m + s.abs().ln() }
        }
    }
}

fn log_factorial(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    ln_gamma(n as f64 + 1.0)
}

/// `ln` of the upper and lower hook products `h'_κ`, `h_κ`.
pub fn log_hooks(kappa: &Partition, alpha: f64) -> (f64, f64) {
    let conj = kappa.conjugate();
    let (mut up, mut low) = (0.0, 0.0);
    for (i, &ki) in kappa.parts().iter().enumerate() {
        for j in 0..ki {
            let arm = (ki - j - 1) as f64;
            let leg = (conj.part(j) - i - 1) as f64;
            up += (alpha * (arm + 1.0) + leg).ln();
            low += (alpha * arm + leg + 1.0).ln();
        }
    }
    (up, low)
}

/// `[u]_κ^(α)` as a signed log.
pub fn log_pochhammer(u: f64, kappa: &Partition, alpha: f64) -> SignedLog {
    let mut sign = 1.0;
    let mut ln_abs = 0.0;
    for (j, &kj) in kappa.parts().iter().enumerate() {
        let shift = u - j as f64 / alpha;
        for i in 0..kj {
            let f = shift + i as f64;
            if f == 0.0 {
                return SignedLog::ZERO;
            }
            if f < 0.0 {
                sign = -sign;
            }
            ln_abs += f.abs().ln();
        }
    }
    SignedLog { sign, ln_abs }
}

/// `C_κ^(α)((1)^N)` as a signed log (zero when `ℓ(κ) > N`).
pub fn log_c_at_ones(kappa: &Partition, alpha: f64, n: usize) -> SignedLog {
    if kappa.length() > n {
        return SignedLog::ZERO;
    }
    let (up, low) = log_hooks(kappa, alpha);
    let w = kappa.weight() as f64;
    let poch = log_pochhammer(n as f64 / alpha, kappa, alpha);
    poch.mul(SignedLog {
        sign: 1.0,
        ln_abs: 2.0 * w * alpha.ln() + log_factorial(kappa.weight()) - up - low,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(ZonalError::NonPositiveAlpha(alpha))
    }
}

/// `E_N(x) = Σ_{j ≤ N} x^j / j!`.
pub fn truncated_exp(n: usize, x: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = CompensatedSum::default();
    acc.add(term);
    for j in 1..=n {
        term *= x / j as f64;
        acc.add(term);
    }
    acc.value()
}

/// Normalised `⟨(z − x)(w̄ − x̄)⟩`-type pair average for the complex
/// symmetric Gaussian ensemble, `y = z w̄`.
pub fn gs_pair_exact(n: usize, y: Complex64) -> Complex64 {
    let two_y = 2.0 * y;
    let tail = if n == 0 { Complex64::new(0.0, 0.0) } else { truncated_exp(n - 1, two_y) };
    truncated_exp(n, two_y) - two_y / (n as f64 + 1.0) * tail
}

/// Normalised pair average for the complex self-dual (quaternion
/// antisymmetric) Gaussian ensemble, `y = z w̄`.
pub fn gqa_pair_exact(n: usize, y: Complex64) -> Complex64 {
    let two_y = 2.0 * y;
    let four_y = 4.0 * y;
    // (N!/(2N)!) (2j)!/j! computed as a running ratio
    let mut acc = CompensatedSum::default();
    for j in 0..=n {
        let mut c = 1.0;
        for i in j + 1..=n {
            c *= i as f64 / ((2 * i - 1) as f64 * (2 * i) as f64);
        }
        acc.add(four_y.powu((n - j) as u32) * truncated_exp(2 * j, two_y) * c);
    }
    acc.value()
}

/// Normalised pair average for the complex Ginibre ensemble.
pub fn ginue_pair_exact(n: usize, y: Complex64) -> Complex64 {
    truncated_exp(n, y)
}

/// Largest partition box the exact finite sums will enumerate.
pub const MAX_BOX_PARTITIONS: u64 = 2_000_000;

fn bounded_box(max_part: usize, max_parts: usize) -> Result<Vec<Partition>> {
    let size = box_size(max_part, max_parts);
    if size > MAX_BOX_PARTITIONS {
        return Err(ZonalError::InvalidParameter(format!(
            "exact sum over the ({max_part}, {max_parts}) box needs {size} partitions, above {MAX_BOX_PARTITIONS}"
        )));
    }
    Ok(enumerate_in_box(max_part, max_parts))
}

/// Parameters of `₂F₁^(α)(a1, a2; b1; (s)^N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergeomParams {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub alpha: f64,
    pub s: Complex64,
    pub n: usize,
}

impl HypergeomParams {
    /// `k` with `a1 = −k`, if `a1` is a nonpositive integer.
    pub fn truncation(&self) -> Option<usize> {
        if self.a1 <= 0.0 && self.a1.fract() == 0.0 {
            Some((-self.a1) as usize)
        } else {
            None
        }
    }
}

/// Coefficients `c_d` of `₂F₁ = Σ_d c_d s^d`, as signed logs, `d = 0..=k N`.
fn hypergeom_degree_coefficients(p: &HypergeomParams) -> Result<Vec<SignedLog>> {
    check_alpha(p.alpha)?;
    let k = p.truncation().ok_or_else(|| {
        ZonalError::InvalidParameter(format!("a1 = {} is not a nonpositive integer", p.a1))
    })?;
    let mut sums: Vec<LogSum> = vec![LogSum::default(); k * p.n + 1];
    for kappa in bounded_box(k, p.n)? {
        let denom = log_pochhammer(p.b1, &kappa, p.alpha);
        let num = log_pochhammer(p.a1, &kappa, p.alpha).mul(log_pochhammer(p.a2, &kappa, p.alpha));
        if num.sign == 0.0 {
            continue;
        }
        if denom.sign == 0.0 {
            return Err(ZonalError::ZeroDenominator(kappa));
        }
        let c = log_c_at_ones(&kappa, p.alpha, p.n);
        let term = num.div(denom).mul(c).mul(SignedLog {
            sign: 1.0,
            ln_abs: -log_factorial(kappa.weight()),
        });
        sums[kappa.weight()].add(term);
    }
    Ok(sums.iter().map(LogSum::value).collect())
}

/// Terminating `₂F₁^(α)(−k, a2; b1; (s)^N)`.
pub fn hypergeom_2f1_jack(p: &HypergeomParams) -> Result<Complex64> {
    let coeffs = hypergeom_degree_coefficients(p)?;
    let mut acc = CompensatedSum::default();
    for (d, c) in coeffs.iter().enumerate() {
        if c.sign != 0.0 {
            acc.add(p.s.powu(d as u32) * c.to_f64());
        }
    }
    Ok(acc.value())
}

/// `⟨C_κ^(α)(x)⟩` over `ME_{2/α,N}[λ^a e^{−λ}]`.
pub fn laguerre_jack_average(kappa: &Partition, alpha: f64, n: usize, a: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(a > -1.0) {
        return Err(ZonalError::InvalidParameter(format!("need a > -1, got {a}")));
    }
    let c = log_c_at_ones(kappa, alpha, n);
    let poch = log_pochhammer(a + 1.0 + (n as f64 - 1.0) / alpha, kappa, alpha);
    Ok(c.mul(poch).to_f64())
}

/// `⟨C_κ^(α)(x)⟩` over `ME_{2/α,N}[λ^{b1}(1+λ)^{−b1−b2−2−2(N−1)/α}]`.
pub fn jacobi_type_jack_average(kappa: &Partition, alpha: f64, n: usize, b1: f64, b2: f64) -> Result<f64> {
    Ok(log_jacobi_type_jack_average(kappa, alpha, n, b1, b2)?.to_f64())
}

fn log_jacobi_type_jack_average(
    kappa: &Partition,
    alpha: f64,
    n: usize,
    b1: f64,
    b2: f64,
) -> Result<SignedLog> {
    check_alpha(alpha)?;
    let denom = log_pochhammer(-b2, kappa, alpha);
    if denom.sign == 0.0 {
        return Err(ZonalError::ZeroDenominator(kappa.clone()));
    }
    let mut c = log_c_at_ones(kappa, alpha, n);
    if kappa.weight() % 2 == 1 {
        c.sign = -c.sign;
    }
    let poch = log_pochhammer(b1 + 1.0 + (n as f64 - 1.0) / alpha, kappa, alpha);
    Ok(c.mul(poch).div(denom))
}

/// `ln W_{β,n}(a)` where `W_{β,n}(a) = ∫_{(0,∞)^n} Π λ^a e^{−λ} Π|λ_k − λ_j|^β dλ`.
pub fn ln_selberg_laguerre(beta: f64, n: usize, a: f64) -> Result<f64> {
    if !(a > -1.0) || !(beta >= 0.0) || n == 0 {
        return Err(ZonalError::InvalidParameter(format!(
            "Selberg-Laguerre integral diverges for beta = {beta}, n = {n}, a = {a}"
        )));
    }
    let half = beta / 2.0;
    Ok((0..n)
        .map(|j| {
            let j = j as f64;
            ln_gamma(1.0 + (j + 1.0) * half) + ln_gamma(a + 1.0 + j * half) - ln_gamma(1.0 + half)
        })
        .sum())
}

/// `Γ(x)`, exact at positive integers.
fn gamma_at(x: f64) -> f64 {
    if x.fract() == 0.0 && (1.0..=171.0).contains(&x) {
        factorial(x as u64 - 1)
    } else {
        gamma(x)
    }
}

/// Direct gamma product while it stays finite, else via [`ln_selberg_laguerre`].
pub fn selberg_laguerre(beta: f64, n: usize, a: f64) -> Result<f64> {
    let ln = ln_selberg_laguerre(beta, n, a)?;
    let half = beta / 2.0;
    let direct: f64 = (0..n)
        .map(|j| {
            let j = j as f64;
            gamma_at(1.0 + (j + 1.0) * half) * gamma_at(a + 1.0 + j * half) / gamma_at(1.0 + half)
        })
        .product();
    Ok(if direct.is_finite() && direct > 0.0 { direct } else { ln.exp() })
}

fn beta_to_alpha(beta: f64) -> Result<f64> {
    if beta > 0.0 {
        Ok(2.0 / beta)
    } else {
        Err(ZonalError::InvalidParameter(format!("need beta > 0, got {beta}")))
    }
}

/// `⟨det(s I_k + W)^N⟩` over `ME_{β,k}[λ^a e^{−c λ}]` as a signed log.
pub fn log_det_average_laguerre(k: usize, n: usize, beta: f64, a: f64, rate: f64, s: f64) -> Result<SignedLog> {
    let alpha = beta_to_alpha(beta)?;
    if !(a > -1.0) || !(rate > 0.0) || !(s >= 0.0) {
        return Err(ZonalError::InvalidParameter(format!(
            "need a > -1, rate > 0, s >= 0; got a = {a}, rate = {rate}, s = {s}"
        )));
    }
    let shift = a + 1.0 + (k as f64 - 1.0) / alpha;
    let mut sum = LogSum::default();
    for kappa in bounded_box(n, k)? {
        let w = kappa.weight();
        let power = k * n - w;
        if s == 0.0 && power > 0 {
            continue;
        }
        // [−N]_κ (−1)^{|κ|} is positive on the box
        let mut poch_n = log_pochhammer(-(n as f64), &kappa, alpha);
        if w % 2 == 1 {
            poch_n.sign = -poch_n.sign;
        }
        let s_pow = if power == 0 { 0.0 } else { power as f64 * s.ln() };
        let term = poch_n
            .mul(log_c_at_ones(&kappa, alpha, k))
            .mul(log_pochhammer(shift, &kappa, alpha))
            .mul(SignedLog { sign: 1.0, ln_abs: s_pow - w as f64 * rate.ln() - log_factorial(w) });
        sum.add(term);
    }
    Ok(sum.value())
}

pub fn det_average_laguerre(k: usize, n: usize, beta: f64, a: f64, rate: f64, s: f64) -> Result<f64> {
    Ok(log_det_average_laguerre(k, n, beta, a, rate, s)?.to_f64())
}

fn check_duality_args(z: &[Complex64], w: &[Complex64], n: usize) -> Result<usize> {
    if z.len() != w.len() || z.is_empty() {
        return Err(ZonalError::InvalidParameter(format!(
            "need equal nonempty argument lists, got {} and {}",
            z.len(),
            w.len()
        )));
    }
    let degree = n * z.len();
    if degree > crate::jack::DEFAULT_DEGREE_CAP {
        return Err(ZonalError::DegreeCap { degree, cap: crate::jack::DEFAULT_DEGREE_CAP });
    }
    Ok(z.len())
}

/// `Π(z_l w̄_l)^N Σ_{κ ⊆ (N)^k} P_κ^(α)(1/z) P_κ^(α)(1/w̄) P_{κ'}^(1/α)((1)^N) g(κ) / P_κ^(α)((1)^k)`
/// with the prefactor cleared into each term, so zero arguments are allowed.
fn reciprocal_duality_sum(
    z: &[Complex64],
    w: &[Complex64],
    n: usize,
    alpha: f64,
    weight: impl Fn(&Partition) -> f64,
) -> Result<Complex64> {
    let k = check_duality_args(z, w, n)?;
    let wbar: Vec<Complex64> = w.iter().map(|v| v.conj()).collect();
    let mut acc = CompensatedSum::default();
    for kappa in bounded_box(n, k)? {
        let table = jack_in_monomials(&kappa, alpha)?;
        let pz = table.eval_reciprocal_cleared(z, n);
        let pw = table.eval_reciprocal_cleared(&wbar, n);
        let dual = jack_at_ones(&kappa.conjugate(), 1.0 / alpha, n)?;
        let ones = jack_at_ones(&kappa, alpha, k)?;
        acc.add(pz * pw * (dual * weight(&kappa) / ones));
    }
    Ok(acc.value())
}

/// Exact `⟨Π_l det(z_l − X) det(w̄_l − X̄)⟩` over the complex symmetric
/// Gaussian ensemble of size `N`.
pub fn duality_rhs_jack_sum_gs(z: &[Complex64], w: &[Complex64], n: usize) -> Result<Complex64> {
    let k = z.len() as f64;
    reciprocal_duality_sum(z, w, n, 0.5, |kappa| {
        0.5f64.powi(kappa.weight() as i32) * crate::jack::pochhammer_real(2.0 * k, kappa, 0.5)
    })
}

/// Exact `⟨Π_l det(z_l − X)^{1/2} det(w̄_l − X̄)^{1/2}⟩` over the complex
/// self-dual Gaussian ensemble of size `2N`.
pub fn duality_rhs_jack_sum_gqa(z: &[Complex64], w: &[Complex64], n: usize) -> Result<Complex64> {
    let k = z.len() as f64;
    reciprocal_duality_sum(z, w, n, 2.0, |kappa| {
        2.0f64.powi(kappa.weight() as i32) * crate::jack::pochhammer_real(k / 2.0, kappa, 2.0)
    })
}

/// Spherical ensembles with an exact moment formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphericalKind {
    /// `⟨|det(z − Z)|^{2k}⟩`, complex symmetric spherical `S𝒮_{N,K}`.
    Symmetric,
    /// `⟨|det(z − Z)|^k⟩`, complex self-dual spherical `S𝒬𝒜_{2N,K}`.
    Selfdual,
    /// `⟨|det(z − Z)|^{2k}⟩`, real spherical `SrOE_{N,2K}`.
    Real,
    /// `⟨|det(z − Z)|^k⟩`, quaternion spherical `SrSE_{N,K}`.
    Quaternion,
}

impl SphericalKind {
    /// `(α, a2, b1)` of the `₂F₁^(α)(−k, a2; b1; ·)` representation.
    pub fn hypergeom_parameters(self, k: usize, big_k: usize) -> (f64, f64, f64) {
        let (k, kk) = (k as f64, big_k as f64);
        match self {
            SphericalKind::Symmetric => (2.0, -k, -kk + 1.0),
            SphericalKind::Selfdual => (0.5, -k, -2.0 * kk - 2.0),
            SphericalKind::Real => (2.0, -k + 0.5, -kk + 0.5),
            SphericalKind::Quaternion => (0.5, -k - 1.0, -2.0 * kk - 1.0),
        }
    }
}

/// `s^{kN} ₂F₁^(α)(−k, a2; b1; (−1/s)^N)` as a signed log. Each degree-`d`
/// term carries `s^{kN−d}`, so the value is a polynomial in `s` and the
/// `s = 0` limit keeps only the top-degree coefficient.
pub fn log_spherical_moment_exact(kind: SphericalKind, n: usize, big_k: usize, k: usize, s: f64) -> Result<SignedLog> {
    if !(s >= 0.0) {
        return Err(ZonalError::InvalidParameter(format!("need s = |z|^2 >= 0, got {s}")));
    }
    let (alpha, a2, b1) = kind.hypergeom_parameters(k, big_k);
    let p = HypergeomParams { a1: -(k as f64), a2, b1, alpha, s: Complex64::new(1.0, 0.0), n };
    let coeffs = hypergeom_degree_coefficients(&p)?;
    let top = k * n;
    let mut sum = LogSum::default();
    for (d, c) in coeffs.into_iter().enumerate() {
        if c.sign == 0.0 {
            continue;
        }
        let power = top - d;
        if s == 0.0 && power > 0 {
            continue;
        }
        let s_pow = if power == 0 { 0.0 } else { power as f64 * s.ln() };
        let sign = if d % 2 == 1 { -c.sign } else { c.sign };
        sum.add(SignedLog { sign, ln_abs: c.ln_abs + s_pow });
    }
    Ok(sum.value())
}

pub fn spherical_moment_exact(kind: SphericalKind, n: usize, big_k: usize, k: usize, s: f64) -> Result<f64> {
    Ok(log_spherical_moment_exact(kind, n, big_k, k, s)?.to_f64())
}

/// Second route for the symmetric and self-dual kinds: the finite double
/// expansion reduced by the Jacobi-type Jack average.
pub fn spherical_moment_via_jacobi(kind: SphericalKind, n: usize, big_k: usize, k: usize, s: f64) -> Result<f64> {
    let (alpha, shift, b2) = match kind {
        SphericalKind::Symmetric => (2.0, (n as f64 + 1.0) / 2.0, big_k as f64 - 1.0),
        SphericalKind::Selfdual => (0.5, 2.0 * n as f64 - 1.0, 2.0 * big_k as f64 + 2.0),
        _ => {
            return Err(ZonalError::InvalidParameter(format!(
                "{kind:?} has no Jacobi-type reduction"
            )))
        }
    };
    let mut sum = LogSum::default();
    for kappa in bounded_box(k, n)? {
        let poch = log_pochhammer(-(k as f64), &kappa, alpha);
        if poch.sign == 0.0 {
            continue;
        }
        let w = kappa.weight();
        let avg = log_jacobi_type_jack_average(&kappa, alpha, n, 0.0, b2)?;
        let inv = log_pochhammer(shift, &kappa, alpha);
        let power = k * n - w;
        if s == 0.0 && power > 0 {
            continue;
        }
        let s_pow = if power == 0 { 0.0 } else { power as f64 * s.ln() };
        let term = poch.mul(poch).mul(avg).div(inv).mul(SignedLog {
            sign: 1.0,
            ln_abs: s_pow - log_factorial(w),
        });
        sum.add(term);
    }
    Ok(sum.value().to_f64())
}

/// Identities whose `N → ∞` ratio limits are predicted in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AsymptoticIdentity {
    K1,
    K2,
    K1x,
    K2x,
    GE1,
}

impl std::str::FromStr for AsymptoticIdentity {
    type Err = ZonalError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K1" => Ok(Self::K1),
            "K2" => Ok(Self::K2),
            "K1x" => Ok(Self::K1x),
            "K2x" => Ok(Self::K2x),
            "GE1" => Ok(Self::GE1),
            _ => Err(ZonalError::InvalidParameter(format!("unknown ratio identity {s}"))),
        }
    }
}

impl std::fmt::Display for AsymptoticIdentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Predicted large-`N` ratio: `shape(|z|)` times `constant`, where the
/// constant is `None` when only proportionality is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub shape: f64,
    /// Exponent `p` in `shape = (1 ∓ |z|²)^p`.
    pub exponent: f64,
    pub constant: Option<f64>,
}

impl AsymptoticPrediction {
    pub fn value(&self) -> Option<f64> {
        self.constant.map(|c| c * self.shape)
    }
}

/// `W_{β,n}(a1) / W_{β,n}(a2)`.
fn selberg_ratio(beta: f64, n: usize, a1: f64, a2: f64) -> Result<f64> {
    let r = selberg_laguerre(beta, n, a1)? / selberg_laguerre(beta, n, a2)?;
    if r.is_finite() && r > 0.0 {
        Ok(r)
    } else {
        Ok((ln_selberg_laguerre(beta, n, a1)? - ln_selberg_laguerre(beta, n, a2)?).exp())
    }
}

pub fn asymptotic_ratio_prediction(identity: AsymptoticIdentity, k: usize, z: Complex64) -> Result<AsymptoticPrediction> {
    let s = z.norm_sqr();
    let kf = k as f64;
    let disk = matches!(identity, AsymptoticIdentity::K1 | AsymptoticIdentity::K2 | AsymptoticIdentity::GE1);
    if disk && s >= 1.0 {
        return Err(ZonalError::InvalidParameter(format!("|z| = {} lies outside the unit disk", s.sqrt())));
    }
    Ok(match identity {
        AsymptoticIdentity::K1 => {
            let c = if k == 0 {
                1.0
            } else {
                selberg_ratio(4.0, k, 0.0, 1.0)?
            };
            AsymptoticPrediction { shape: (1.0 - s).powf(kf), exponent: kf, constant: Some(c) }
        }
        AsymptoticIdentity::K2 => {
            let c = if k == 0 {
                1.0
            } else {
                selberg_ratio(1.0, k, 0.0, -0.5)?
            };
            AsymptoticPrediction { shape: (1.0 - s).powf(-kf / 2.0), exponent: -kf / 2.0, constant: Some(c) }
        }
        AsymptoticIdentity::K1x => {
            AsymptoticPrediction { shape: (1.0 + s).powf(-2.0 * kf), exponent: -2.0 * kf, constant: None }
        }
        AsymptoticIdentity::K2x => AsymptoticPrediction { shape: (1.0 + s).powf(kf), exponent: kf, constant: None },
        AsymptoticIdentity::GE1 => AsymptoticPrediction { shape: 1.0, exponent: 0.0, constant: Some(1.0) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selberg_ratio_survives_overflow() {
        for n in [1, 3, 40, 120] {
            let direct = selberg_ratio(4.0, n, 0.0, 1.0).unwrap();
            let logs = (ln_selberg_laguerre(4.0, n, 0.0).unwrap() - ln_selberg_laguerre(4.0, n, 1.0).unwrap()).exp();
            assert!(((direct - logs) / logs).abs() < 1e-10, "n={n}: {direct} vs {logs}");
        }
        assert_eq!(selberg_laguerre(4.0, 1, 0.0).unwrap(), 1.0);
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn truncated_exponential() {
        assert_eq!(truncated_exp(0, c(3.0, 1.0)), c(1.0, 0.0));
        assert_eq!(truncated_exp(2, c(1.0, 0.0)), c(2.5, 0.0));
        assert!((truncated_exp(30, c(1.0, 0.0)).re - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn pair_closed_forms_small_n() {
        let y = c(0.3, -0.2);
        for n in 1..6 {
            assert_eq!(gs_pair_exact(n, c(0.0, 0.0)), c(1.0, 0.0));
            assert!((gqa_pair_exact(n, c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
            assert_eq!(ginue_pair_exact(n, c(0.0, 0.0)), c(1.0, 0.0));
        }
        assert!((gs_pair_exact(1, y) - (1.0 + y)).norm() < 1e-15);
        assert!((ginue_pair_exact(1, y) - (1.0 + y)).norm() < 1e-15);
        // N = 1: (1/2)(4y + 2 E_2(2y)) = 1 + 4y + 2y²
        assert!((gqa_pair_exact(1, y) - (1.0 + 4.0 * y + 2.0 * y * y)).norm() < 1e-14);
    }

    #[test]
    fn hypergeometric_trivial_cases() {
        let base = HypergeomParams { a1: 0.0, a2: 1.3, b1: -4.5, alpha: 2.0, s: c(0.7, 0.1), n: 3 };
        assert_eq!(hypergeom_2f1_jack(&base).unwrap(), c(1.0, 0.0));
        let p = HypergeomParams { a1: -2.0, s: c(0.0, 0.0), ..base };
        assert_eq!(hypergeom_2f1_jack(&p).unwrap(), c(1.0, 0.0));
        let p = HypergeomParams { a1: -1.0, n: 1, ..base };
        let want = 1.0 + p.a1 * p.a2 / p.b1 * p.s;
        assert!((hypergeom_2f1_jack(&p).unwrap() - want).norm() < 1e-14);
        let p = HypergeomParams { a1: -1.0, b1: 0.0, ..base };
        assert!(matches!(hypergeom_2f1_jack(&p), Err(ZonalError::ZeroDenominator(_))));
        let p = HypergeomParams { a1: 0.5, ..base };
        assert!(hypergeom_2f1_jack(&p).is_err());
    }

    #[test]
    fn one_cell_averages() {
        let one = Partition::row(1);
        for (alpha, n, a) in [(1.0, 2usize, 0.0), (2.0, 3, 0.5), (0.5, 4, -0.5)] {
            let want = n as f64 * (a + 1.0 + (n as f64 - 1.0) / alpha);
            assert!(close(laguerre_jack_average(&one, alpha, n, a).unwrap(), want, 1e-13));
            assert!(close(jacobi_type_jack_average(&one, alpha, n, a, 7.0).unwrap(), want / 7.0, 1e-13));
        }
        assert_eq!(laguerre_jack_average(&Partition::empty(), 2.0, 3, 0.0).unwrap(), 1.0);
        assert!(jacobi_type_jack_average(&Partition::row(2), 2.0, 3, 0.0, 1.0).is_err());
    }

    #[test]
    fn selberg_small_cases() {
        assert!(close(selberg_laguerre(2.0, 1, 0.5).unwrap(), ln_gamma(1.5).exp(), 1e-14));
        assert!(close(selberg_laguerre(1.0, 2, 0.0).unwrap(), 1.0, 1e-14));
        assert!(close(selberg_laguerre(4.0, 1, 0.0).unwrap() / selberg_laguerre(4.0, 1, 1.0).unwrap(), 1.0, 1e-14));
        assert!(selberg_laguerre(1.0, 2, -1.0).is_err());
    }

    #[test]
    fn det_average_single_eigenvalue() {
        // ⟨(s + λ)^N⟩ with λ^a e^{−cλ}: Σ binom(N,m) s^{N−m} Γ(a+1+m)/Γ(a+1) c^{−m}
        let (n, a, rate, s): (usize, f64, f64, f64) = (5, 0.5, 2.0, 0.7);
        let mut want = 0.0;
        let mut binom = 1.0;
        for m in 0..=n {
            if m > 0 {
                binom *= (n - m + 1) as f64 / m as f64;
            }
            let moment = (ln_gamma(a + 1.0 + m as f64) - ln_gamma(a + 1.0)).exp() / rate.powi(m as i32);
            want += binom * s.powi((n - m) as i32) * moment;
        }
        for beta in [1.0, 4.0] {
            assert!(close(det_average_laguerre(1, n, beta, a, rate, s).unwrap(), want, 1e-12));
        }
        assert_eq!(det_average_laguerre(3, 0, 4.0, 1.0, 2.0, 0.4).unwrap(), 1.0);
        let big: f64 = 1e8;
        let v = det_average_laguerre(2, 3, 4.0, 1.0, 2.0, big).unwrap();
        assert!(close(v / big.powi(6), 1.0, 1e-6));
    }

    #[test]
    fn duality_sums_reduce_to_pair_forms() {
        let z = [c(0.4, 0.3)];
        let w = [c(-0.2, 0.5)];
        let y = z[0] * w[0].conj();
        // the self-dual closed form averages the full determinant in the
        // variance-1/2 convention: duplicate the arguments and rescale y ↦ 2y
        let zs = [z[0] * 2f64.sqrt(); 2];
        let ws = [w[0] * 2f64.sqrt(); 2];
        for n in 1..=4 {
            let gs = duality_rhs_jack_sum_gs(&z, &w, n).unwrap();
            let norm_gs = duality_rhs_jack_sum_gs(&[c(0.0, 0.0)], &[c(0.0, 0.0)], n).unwrap();
            assert!((gs / norm_gs - gs_pair_exact(n, y)).norm() < 1e-12, "gs n={n}");
            let gqa = duality_rhs_jack_sum_gqa(&zs, &ws, n).unwrap();
            let norm_gqa = duality_rhs_jack_sum_gqa(&[c(0.0, 0.0); 2], &[c(0.0, 0.0); 2], n).unwrap();
            assert!((gqa / norm_gqa - gqa_pair_exact(n, y)).norm() < 1e-12, "gqa n={n}");
        }
    }

    #[test]
    fn spherical_single_row_values() {
        let s = 0.25;
        for kk in [4usize, 6, 9] {
            let k = kk as f64;
            let sym = spherical_moment_exact(SphericalKind::Symmetric, 1, kk, 1, s).unwrap();
            assert!(close(sym, s + 1.0 / (k - 1.0), 1e-13));
            let real = spherical_moment_exact(SphericalKind::Real, 1, kk, 1, s).unwrap();
            assert!(close(real, s + 1.0 / (2.0 * k - 1.0), 1e-13));
            let quat = spherical_moment_exact(SphericalKind::Quaternion, 1, kk, 1, s).unwrap();
            assert!(close(quat, s + 2.0 / (2.0 * k + 1.0), 1e-13));
        }
        assert_eq!(spherical_moment_exact(SphericalKind::Real, 3, 8, 0, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn spherical_two_routes_agree() {
        for kind in [SphericalKind::Symmetric, SphericalKind::Selfdual] {
            for (n, kk, k) in [(1usize, 6usize, 1usize), (2, 10, 1), (3, 12, 2), (2, 9, 3)] {
                for s in [0.0, 0.3, 1.7] {
                    let a = spherical_moment_exact(kind, n, kk, k, s).unwrap();
                    let b = spherical_moment_via_jacobi(kind, n, kk, k, s).unwrap();
                    assert!(close(a, b, 1e-10), "{kind:?} {n} {kk} {k} {s}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn large_n_sums_stay_finite() {
        let v = log_spherical_moment_exact(SphericalKind::Symmetric, 2000, 12, 1, 0.5).unwrap();
        assert!(v.sign > 0.0 && v.ln_abs.is_finite());
        let v = log_det_average_laguerre(1, 3000, 4.0, 1.0, 2.0, 0.5).unwrap();
        assert!(v.sign > 0.0 && v.ln_abs.is_finite());
    }

    #[test]
    fn predictions() {
        let p = asymptotic_ratio_prediction(AsymptoticIdentity::K1, 1, c(0.5, 0.0)).unwrap();
        assert!(close(p.value().unwrap(), 0.75, 1e-14));
        let p = asymptotic_ratio_prediction(AsymptoticIdentity::GE1, 3, c(0.5, 0.0)).unwrap();
        assert_eq!(p.value(), Some(1.0));
        let p = asymptotic_ratio_prediction(AsymptoticIdentity::K1x, 1, c(1.5, 0.0)).unwrap();
        assert!(p.constant.is_none());
        assert!(asymptotic_ratio_prediction(AsymptoticIdentity::K2, 1, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn weight_spec_normalisability() {
        assert!(MEWeightSpec::new(2.0, WeightKind::Laguerre { a: -1.0 }, 2).is_err());
        assert!(MEWeightSpec::new(1.0, WeightKind::CauchyLike { exponent: 2.0 }, 2).is_err());
        assert!(MEWeightSpec::new(1.0, WeightKind::CauchyLike { exponent: 12.0 }, 2).is_ok());
        assert!(MEWeightSpec::new(4.0, WeightKind::Jacobi01 { a1: 0.5, a2: -0.5 }, 3).is_ok());
    }
}
