//! Mergeable moment accumulators and Monte Carlo error estimates.
//!
//! Accumulators use compensated sums and are merged in a fixed order, so
//! results do not depend on how streams were scheduled across threads.

use num_complex::Complex64;

use crate::jack::CompensatedSum;

/// First and second moments of a complex sample.
#[derive(Debug, Clone, Copy, Default)]
pub struct MomentAccumulator {
    n: u64,
    sum: CompensatedSum,
    sum_sq: CompensatedSum,
}

impl MomentAccumulator {
    pub fn push(&mut self, x: Complex64) {
        self.n += 1;
        self.sum.add(x);
        self.sum_sq.add(Complex64::new(x.norm_sqr(), 0.0));
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        self.n += other.n;
        self.sum.add(other.sum.value());
        self.sum_sq.add(other.sum_sq.value());
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> Complex64 {
        self.sum.value() / self.n as f64
    }

    /// `E|X − E X|²`.
    pub fn variance(&self) -> f64 {
        let n = self.n as f64;
        (self.sum_sq.value().re / n - self.mean().norm_sqr()).max(0.0) * n / (n - 1.0).max(1.0)
    }

    pub fn std_error(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Moments for the ratio estimator `mean(f) / mean(g)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RatioAccumulator {
    n: u64,
    f: CompensatedSum,
    g: CompensatedSum,
    ff: CompensatedSum,
    gg: CompensatedSum,
    fg: CompensatedSum,
}

impl RatioAccumulator {
    pub fn push(&mut self, f: Complex64, g: Complex64) {
        self.n += 1;
        self.f.add(f);
        self.g.add(g);
        self.ff.add(Complex64::new(f.norm_sqr(), 0.0));
        self.gg.add(Complex64::new(g.norm_sqr(), 0.0));
        self.fg.add(f * g.conj());
    }

    pub fn merge(&mut self, o: &RatioAccumulator) {
        self.n += o.n;
        self.f.add(o.f.value());
        self.g.add(o.g.value());
        self.ff.add(o.ff.value());
        self.gg.add(o.gg.value());
        self.fg.add(o.fg.value());
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn ratio(&self) -> Complex64 {
        self.f.value() / self.g.value()
    }

    /// Delta-method standard error of the ratio.
    pub fn std_error(&self) -> f64 {
        let n = self.n as f64;
        let r = self.ratio();
        let mean_g = self.g.value() / n;
        let var = self.ff.value().re / n - 2.0 * (r.conj() * self.fg.value() / n).re
            + r.norm_sqr() * self.gg.value().re / n;
        (var.max(0.0) / n).sqrt() / mean_g.norm()
    }
}

/// Mean and batch-means standard error over correlated chains. Each chain
/// is cut into `batch_count` equal batches; trailing remainders are dropped.
pub fn batch_means(chains: &[Vec<Complex64>], batch_count: usize) -> (Complex64, f64, usize) {
    let mut means = Vec::new();
    for chain in chains {
        let len = chain.len() / batch_count.max(1);
        if len == 0 {
            continue;
        }
        for b in chain.chunks_exact(len).take(batch_count) {
            let mut s = CompensatedSum::default();
            b.iter().for_each(|&x| s.add(x));
            means.push(s.value() / len as f64);
        }
    }
    let mut acc = MomentAccumulator::default();
    means.iter().for_each(|&m| acc.push(m));
    (acc.mean(), acc.std_error(), means.len())
}

/// Split-R̂ (Gelman–Rubin on half chains).
pub fn split_rhat(chains: &[Vec<f64>]) -> f64 {
    let halves: Vec<&[f64]> = chains
        .iter()
        .flat_map(|c| {
            let h = c.len() / 2;
            [&c[..h], &c[h..2 * h]]
        })
        .collect();
    let m = halves.len() as f64;
    let n = halves.iter().map(|h| h.len()).min().unwrap_or(0) as f64;
    if m < 2.0 || n < 2.0 {
        return f64::NAN;
    }
    let means: Vec<f64> = halves.iter().map(|h| h.iter().sum::<f64>() / n).collect();
    let grand = means.iter().sum::<f64>() / m;
    let b = n / (m - 1.0) * means.iter().map(|x| (x - grand).powi(2)).sum::<f64>();
    let w = halves
        .iter()
        .zip(&means)
        .map(|(h, mu)| h.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1.0))
        .sum::<f64>()
        / m;
    let var_plus = (n - 1.0) / n * w + b / n;
    (var_plus / w).sqrt()
}

/// One-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max);
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let mut p = 0.0;
    for j in 1..=100 {
        let j = j as f64;
        let sign = if j as u64 % 2 == 1 { 1.0 } else { -1.0 };
        p += 2.0 * sign * (-2.0 * j * j * lambda * lambda).exp();
    }
    (d, p.clamp(0.0, 1.0))
}

/// Least-squares slope and intercept of `y` on `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_a_small_sample() {
        let mut acc = MomentAccumulator::default();
        for v in [1.0, 2.0, 3.0, 4.0] {
            acc.push(Complex64::new(v, 0.0));
        }
        assert_eq!(acc.mean(), Complex64::new(2.5, 0.0));
        assert!((acc.variance() - 5.0 / 3.0).abs() < 1e-14);
        let mut a = MomentAccumulator::default();
        let mut b = MomentAccumulator::default();
        a.push(Complex64::new(1.0, 0.0));
        a.push(Complex64::new(2.0, 0.0));
        b.push(Complex64::new(3.0, 0.0));
        b.push(Complex64::new(4.0, 0.0));
        a.merge(&b);
        assert_eq!(a.mean(), acc.mean());
    }

    #[test]
    fn ratio_of_proportional_samples_has_no_error() {
        let mut acc = RatioAccumulator::default();
        for v in [1.0, 2.0, 5.0] {
            acc.push(Complex64::new(3.0 * v, 0.0), Complex64::new(v, 0.0));
        }
        assert!((acc.ratio() - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        assert!(acc.std_error() < 1e-7);
    }

    #[test]
    fn rhat_of_identical_chains_is_near_one() {
        let chain: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1000) as f64).collect();
        let r = split_rhat(&[chain.clone(), chain]);
        assert!((r - 1.0).abs() < 0.01);
        let shifted = vec![(0..100).map(|i| i as f64).collect(), (0..100).map(|i| 1000.0 + i as f64).collect()];
        assert!(split_rhat(&shifted) > 2.0);
    }

    #[test]
    fn ks_on_uniform_grid() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let (d, p) = ks_test(&xs, |x| x.clamp(0.0, 1.0));
        assert!(d <= 0.0005 + 1e-12 && p > 0.99);
        let (_, p) = ks_test(&xs, |x| (x * x).clamp(0.0, 1.0));
        assert!(p < 1e-6);
    }

    #[test]
    fn fit_recovers_a_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| -2.0 * v + 0.5).collect();
        let (s, c) = linear_fit(&x, &y);
        assert!((s + 2.0).abs() < 1e-14 && (c - 0.5).abs() < 1e-14);
    }
}
