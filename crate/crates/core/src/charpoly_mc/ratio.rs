use serde::{Deserialize, Serialize};

use crate::error::{Result, ZonalError};
use crate::special_functions::{
    asymptotic_ratio_prediction, log_det_average_laguerre, log_spherical_moment_exact, AsymptoticIdentity,
    SignedLog, SphericalKind,
};
use crate::stats::linear_fit;
use statrs::function::factorial::factorial;
use num_complex::Complex64;

/// One `(N, |z|)` row of a finite-`N` ratio table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    pub abs_z: f64,
    pub ratio: f64,
    /// Limit value; for the spherical pairs, the fitted constant times the shape.
    pub prediction: f64,
    pub rel_err: f64,
    /// Power of `N` by which the literal ratio outgrows its limit, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compensated_ratio: Option<f64>,
    /// Limit of `compensated_ratio`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compensated_prediction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compensated_rel_err: Option<f64>,
}

/// Least-squares fit of `ln ratio = c + p ln(1 + |z|²)` at one `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioFit {
    pub n: usize,
    pub exponent: f64,
    pub target_exponent: f64,
    pub constant: f64,
    pub max_log_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub identity: AsymptoticIdentity,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_k: Option<usize>,
    pub rows: Vec<RatioRow>,
    pub fits: Vec<RatioFit>,
}

fn ln_positive(v: SignedLog, what: &str) -> Result<f64> {
    if v.sign <= 0.0 {
        return Err(ZonalError::InvalidParameter(format!("{what} is not positive")));
    }
    Ok(v.ln_abs)
}

/// `ln` of the finite-`N` ratio under the global scalings of each identity.
fn ln_ratio(identity: AsymptoticIdentity, k: usize, n: usize, big_k: Option<usize>, s: f64) -> Result<f64> {
    let nf = n as f64;
    let kn = (k * n) as f64;
    use AsymptoticIdentity::*;
    match identity {
        K1 => {
            let num = ln_positive(log_det_average_laguerre(k, n, 4.0, 1.0, 2.0, s * nf / 2.0)?, "numerator")?;
            let den = ln_positive(log_det_average_laguerre(k, n, 4.0, 0.0, 1.0, s * nf)?, "denominator")?;
            Ok(num + kn * (2.0 / nf).ln() - (den - kn * nf.ln()))
        }
        K2 => {
            let num = ln_positive(log_det_average_laguerre(k, n, 1.0, -0.5, 0.5, 2.0 * nf * s)?, "numerator")?;
            let den = ln_positive(log_det_average_laguerre(k, n, 1.0, 0.0, 1.0, s * nf)?, "denominator")?;
            Ok(num - kn * (2.0 * nf).ln() - (den - kn * nf.ln()))
        }
        GE1 => {
            let num = ln_positive(log_det_average_laguerre(k, n, 4.0, 0.0, 1.0, s * nf)?, "numerator")?;
            let den = ln_positive(log_det_average_laguerre(k, n, 2.0, 0.0, 1.0, s * nf)?, "denominator")?;
            Ok(num - den)
        }
        K1x | K2x => {
            let big_k = big_k.ok_or_else(|| {
                ZonalError::InvalidParameter(format!("{identity} needs the spherical parameter K"))
            })?;
            let (a, b) = if identity == K1x {
                (SphericalKind::Symmetric, SphericalKind::Real)
            } else {
                (SphericalKind::Selfdual, SphericalKind::Quaternion)
            };
            let num = ln_positive(log_spherical_moment_exact(a, n, big_k, k, s)?, "numerator")?;
            let den = ln_positive(log_spherical_moment_exact(b, n, big_k, k, s)?, "denominator")?;
            Ok(num - den)
        }
    }
}

/// Exact finite-`N` ratios over `abs_z × n_schedule`, against the large-`N`
/// prediction. For `K1x`/`K2x` the unknown constant is fitted per `N`.
pub fn ratio_convergence_experiment(
    identity: AsymptoticIdentity,
    k: usize,
    abs_z: &[f64],
    n_schedule: &[usize],
    big_k: Option<usize>,
) -> Result<RatioTable> {
    if abs_z.is_empty() || n_schedule.is_empty() {
        return Err(ZonalError::InvalidParameter("empty |z| grid or N schedule".into()));
    }
    if n_schedule.contains(&0) {
        return Err(ZonalError::InvalidParameter("N must be positive".into()));
    }
    let preds = abs_z
        .iter()
        .map(|&r| asymptotic_ratio_prediction(identity, k, Complex64::new(r, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    // GE1: the two Laguerre weights differ only in β, and a saddle point
    // with a Gaussian Mehta integral leaves N^{k(k−1)/2} Π_{j<k} j!/(2j)!.
    let (n_power, ge1_constant) = match identity {
        AsymptoticIdentity::K1 => (Some(k as f64), None),
        AsymptoticIdentity::K2 => (Some(-(k as f64) / 2.0), None),
        AsymptoticIdentity::GE1 if k >= 2 => {
            let c = (0..k as u64).map(|j| factorial(j) / factorial(2 * j)).product();
            (Some((k * (k - 1)) as f64 / 2.0), Some(c))
        }
        _ => (None, None),
    };
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &n in n_schedule {
        let ln_r = abs_z.iter().map(|&r| ln_ratio(identity, k, n, big_k, r * r)).collect::<Result<Vec<_>>>()?;
        let constant = match preds[0].constant {
            Some(_) => None,
            None => {
                let x: Vec<f64> = abs_z.iter().map(|r| (1.0 + r * r).ln()).collect();
                if abs_z.len() < 2 {
                    return Err(ZonalError::InvalidParameter("fitting the shape needs at least two |z| values".into()));
                }
                let (slope, intercept) = linear_fit(&x, &ln_r);
                let max_log_residual =
                    x.iter().zip(&ln_r).map(|(xi, yi)| (yi - intercept - slope * xi).abs()).fold(0.0, f64::max);
                fits.push(RatioFit {
                    n,
                    exponent: slope,
                    target_exponent: preds[0].exponent,
                    constant: intercept.exp(),
                    max_log_residual,
                });
                Some(intercept.exp())
            }
        };
        for ((&r, pred), &l) in abs_z.iter().zip(&preds).zip(&ln_r) {
            let ratio = l.exp();
            let prediction = pred.value().unwrap_or_else(|| pred.shape * constant.unwrap_or(1.0));
            let rel = |v: f64, target: f64| ((v - target) / target).abs();
            let compensated_ratio = n_power.map(|p| (l - p * (n as f64).ln()).exp());
            let compensated_prediction = n_power.map(|_| ge1_constant.unwrap_or(prediction));
            rows.push(RatioRow {
                n,
                abs_z: r,
                ratio,
                prediction,
                rel_err: rel(ratio, prediction),
                n_power,
                compensated_ratio,
                compensated_prediction,
                compensated_rel_err: compensated_ratio.zip(compensated_prediction).map(|(v, t)| rel(v, t)),
            });
        }
    }
    Ok(RatioTable { identity, k, big_k, rows, fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ge1_prediction_column_is_one() {
        let t = ratio_convergence_experiment(AsymptoticIdentity::GE1, 2, &[0.3], &[5, 10], None).unwrap();
        assert!(t.rows.iter().all(|r| r.prediction == 1.0 && r.n_power == Some(1.0)));
    }

    #[test]
    fn ge1_is_exactly_one_at_k1() {
        let t = ratio_convergence_experiment(AsymptoticIdentity::GE1, 1, &[0.0, 0.7], &[3, 17], None).unwrap();
        assert!(t.rows.iter().all(|r| r.rel_err < 1e-12 && r.n_power.is_none()), "{t:?}");
    }

    #[test]
    fn ge1_k2_grows_like_half_n() {
        let t = ratio_convergence_experiment(AsymptoticIdentity::GE1, 2, &[0.0, 0.5], &[400], None).unwrap();
        for r in &t.rows {
            assert_eq!(r.compensated_prediction, Some(0.5));
            assert!(r.compensated_rel_err.unwrap() < 0.02, "{r:?}");
        }
    }

    #[test]
    fn disk_identities_reject_outside_points() {
        assert!(ratio_convergence_experiment(AsymptoticIdentity::K1, 1, &[1.2], &[5], None).is_err());
    }

    #[test]
    fn spherical_pairs_need_k() {
        assert!(ratio_convergence_experiment(AsymptoticIdentity::K1x, 1, &[0.2, 0.4], &[5], None).is_err());
    }

    #[test]
    fn k1_compensated_column_converges() {
        let t = ratio_convergence_experiment(AsymptoticIdentity::K1, 1, &[0.0, 0.5], &[50], None).unwrap();
        for r in &t.rows {
            assert!(r.compensated_rel_err.unwrap() < 0.05, "{r:?}");
        }
    }
}
