//! Small statistics toolbox used by the verification suites and the CLI:
//! Poisson goodness-of-fit, Kolmogorov-Smirnov, and summary helpers.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

pub fn poisson_pmf(k: u64, rate: f64) -> f64 {
    if rate <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let ln_pmf = -rate + k as f64 * rate.ln() - statrs::function::gamma::ln_gamma(k as f64 + 1.0);
    ln_pmf.exp()
}

#[derive(Debug, Clone, Copy)]
pub struct GofResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of integer samples against Poisson(rate),
/// pooling the upper tail so every bin has expected count at least
/// `min_expected`.
pub fn chi_square_poisson_gof(samples: &[u64], rate: f64, min_expected: f64) -> Result<GofResult> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    let nf = n as f64;
    // choose the pooled-tail cut: the largest k with n * pmf >= min_expected
    let mut cut = 0u64;
    let mut cum = 0.0;
    for k in 0.. {
        let e = nf * poisson_pmf(k, rate);
        if e < min_expected && k > 0 {
            break;
        }
        cum += e;
        cut = k;
        if nf - cum < min_expected {
            break;
        }
    }
    // bins 0..=cut plus one tail bin
    let mut observed = vec![0u64; cut as usize + 2];
    for &s in samples {
        let ix = (s.min(cut + 1)) as usize;
        observed[ix] += 1;
    }
    let mut expected: Vec<f64> = (0..=cut).map(|k| nf * poisson_pmf(k, rate)).collect();
    expected.push((nf - expected.iter().sum::<f64>()).max(1e-12));
    // merge the tail into the last regular bin when too thin
    if *expected.last().unwrap() < min_expected && expected.len() >= 2 {
        let tail_e = expected.pop().unwrap();
        let tail_o = observed.pop().unwrap();
        *expected.last_mut().unwrap() += tail_e;
        *observed.last_mut().unwrap() += tail_o;
    }
    let statistic: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let df = expected.len().saturating_sub(1).max(1);
    let p_value = ChiSquared::new(df as f64).map_or(1.0, |dist| dist.sf(statistic));
    Ok(GofResult {
        statistic,
        df,
        p_value,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// One-sample Kolmogorov-Smirnov test against a continuous CDF, with the
/// asymptotic p-value (fine for the sample sizes used here).
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let nf = n as f64;
    let mut d = 0.0f64;
    for (ix, &x) in sorted.iter().enumerate() {
        let f = cdf(x).clamp(0.0, 1.0);
        d = d.max(((ix + 1) as f64 / nf - f).abs());
        d = d.max((f - ix as f64 / nf).abs());
    }
    let lambda = d * (nf.sqrt() + 0.12 + 0.11 / nf.sqrt());
    let mut p = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = 2.0 * (-1.0f64).powi(j + 1) * (-2.0 * jf * jf * lambda * lambda).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    Ok(KsResult {
        statistic: d,
        p_value: p.clamp(0.0, 1.0),
    })
}

pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Empirical quantile by linear interpolation on the sorted sample.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_distr::Distribution;

    #[test]
    fn pmf_sums_to_one() {
        let total: f64 = (0..200).map(|k| poisson_pmf(k, 7.3)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gof_accepts_true_poisson_rejects_wrong_rate() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        let dist = rand_distr::Poisson::new(3.0).unwrap();
        let samples: Vec<u64> = (0..10_000).map(|_| dist.sample(&mut rng) as u64).collect();
        let ok = chi_square_poisson_gof(&samples, 3.0, 5.0).unwrap();
        assert!(ok.p_value > 0.01, "true rate rejected: p = {}", ok.p_value);
        let bad = chi_square_poisson_gof(&samples, 4.0, 5.0).unwrap();
        assert!(
            bad.p_value < 1e-6,
            "wrong rate accepted: p = {}",
            bad.p_value
        );
    }

    #[test]
    fn ks_accepts_uniform_rejects_shifted() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(29);
        let samples: Vec<f64> = (0..10_000).map(|_| rng.gen_range(0.0..1.0)).collect();
        let ok = ks_test(&samples, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(ok.p_value > 0.01, "uniform rejected: p = {}", ok.p_value);
        let bad = ks_test(&samples, |x| (x * x).clamp(0.0, 1.0)).unwrap();
        assert!(bad.p_value < 1e-6);
    }

    #[test]
    fn summary_helpers() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let (mean, sd) = mean_sd(&xs);
        assert_eq!(mean, 2.5);
        assert!((sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 1.0), 4.0);
        assert_eq!(quantile(&xs, 0.5), 2.5);
    }
}
