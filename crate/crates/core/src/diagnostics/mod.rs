//! Single-chain convergence diagnostics and the joint-distribution check of
//! the samplers.

mod geweke;

pub use geweke::{geweke_test, GewekeConfig, GewekeMoment, GewekeReport};

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Sample autocorrelation with the biased `1/N` normalisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Acf {
    pub values: Vec<f64>,
    /// Set when the series is constant; the ACF is then `1, 0, 0, ...`.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ess {
    pub ess: f64,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    pub name: String,
    pub acf: Vec<f64>,
    pub ess: f64,
    pub degenerate: bool,
    pub mean: f64,
    pub q025: f64,
    pub q500: f64,
    pub q975: f64,
}

fn centered(series: &[f64]) -> (Vec<f64>, f64) {
    let m = series.iter().sum::<f64>() / series.len() as f64;
    let c: Vec<f64> = series.iter().map(|v| v - m).collect();
    let c0 = c.iter().map(|v| v * v).sum::<f64>() / series.len() as f64;
    (c, c0)
}

fn is_flat(c0: f64, series: &[f64]) -> bool {
    let scale = series.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    !(c0 > 1e-28 * scale * scale) || !c0.is_finite()
}

fn lag_cov(c: &[f64], k: usize) -> f64 {
    c[..c.len() - k].iter().zip(&c[k..]).map(|(a, b)| a * b).sum::<f64>() / c.len() as f64
}

pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Acf> {
    if series.len() <= max_lag {
        return Err(Error::domain(format!(
            "series of length {} is too short for lag {max_lag}",
            series.len()
        )));
    }
    let (c, c0) = centered(series);
    if is_flat(c0, series) {
        let mut values = vec![0.0; max_lag + 1];
        values[0] = 1.0;
        return Ok(Acf { values, degenerate: true });
    }
    let values = (0..=max_lag).map(|k| if k == 0 { 1.0 } else { lag_cov(&c, k) / c0 }).collect();
    Ok(Acf {
        values,
        degenerate: false,
    })
}

/// Geyer's initial positive sequence estimator, using the initial monotone
/// variant: sums of adjacent autocorrelation pairs are accumulated while
/// positive and forced non-increasing. The result is capped at `N`.
pub fn effective_sample_size(series: &[f64]) -> Result<Ess> {
    let n = series.len();
    if n < 100 {
        return Err(Error::domain(format!("ESS needs at least 100 draws, got {n}")));
    }
    let (c, c0) = centered(series);
    if is_flat(c0, series) {
        return Ok(Ess {
            ess: n as f64,
            degenerate: true,
        });
    }
    let rho = |k: usize| lag_cov(&c, k) / c0;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut k = 0;
    while 2 * k + 1 < n {
        let g = if k == 0 { 1.0 + rho(1) } else { rho(2 * k) + rho(2 * k + 1) };
        if g <= 0.0 {
            break;
        }
        let g = g.min(prev);
        sum += g;
        prev = g;
        k += 1;
    }
    let tau = (2.0 * sum - 1.0).max(1e-12);
    Ok(Ess {
        ess: (n as f64 / tau).min(n as f64),
        degenerate: false,
    })
}

/// ACF, ESS and a quantile summary for each named column, in parallel.
pub fn diagnose_columns(columns: &[(String, Vec<f64>)], max_lag: usize) -> Result<Vec<ChainDiagnostics>> {
    columns
        .par_iter()
        .map(|(name, s)| {
            let acf = autocorrelation(s, max_lag)?;
            let ess = effective_sample_size(s)?;
            let mut sorted = s.clone();
            sorted.sort_by(f64::total_cmp);
            let q = |p| crate::gibbs::quantile_sorted(&sorted, p);
            Ok(ChainDiagnostics {
                name: name.clone(),
                acf: acf.values,
                ess: ess.ess,
                degenerate: acf.degenerate || ess.degenerate,
                mean: s.iter().sum::<f64>() / s.len() as f64,
                q025: q(0.025),
                q500: q(0.5),
                q975: q(0.975),
            })
        })
        .collect()
}

/// Standard error of the mean of a dependent series from `batches`
/// non-overlapping batch means.
pub fn batch_means_se(series: &[f64], batches: usize) -> f64 {
    let len = series.len() / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| series[b * len..(b + 1) * len].iter().sum::<f64>() / len as f64)
        .collect();
    let m = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and a
/// continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter().enumerate().fold(0.0, |d, (i, x)| {
        let f = cdf(*x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rngdist::{standard_normal, RngStream};

    fn ar1(phi: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0);
        let mut x = standard_normal(&mut rng) / (1.0 - phi * phi).sqrt();
        (0..n)
            .map(|_| {
                x = phi * x + standard_normal(&mut rng);
                x
            })
            .collect()
    }

    #[test]
    fn acf_of_ar1() {
        let s = ar1(0.8, 100_000, 1);
        let a = autocorrelation(&s, 5).unwrap();
        assert_eq!(a.values[0], 1.0);
        for k in 1..=5 {
            assert!((a.values[k] - 0.8f64.powi(k as i32)).abs() < 0.05);
        }
    }

    #[test]
    fn ess_of_iid_and_ar1() {
        let iid = ar1(0.0, 20_000, 2);
        let r = effective_sample_size(&iid).unwrap().ess / 20_000.0;
        assert!((0.8..=1.2).contains(&r), "{r}");
        let s = ar1(0.8, 100_000, 3);
        let r = effective_sample_size(&s).unwrap().ess / 100_000.0;
        assert!((r - 1.0 / 9.0).abs() < 0.3 / 9.0, "{r}");
    }

    #[test]
    fn ess_is_affine_invariant() {
        let s = ar1(0.5, 5_000, 4);
        let t: Vec<f64> = s.iter().map(|v| 3.0 * v - 7.0).collect();
        let a = effective_sample_size(&s).unwrap().ess;
        let b = effective_sample_size(&t).unwrap().ess;
        assert!((a - b).abs() < 1e-6 * a);
    }

    #[test]
    fn ks_of_uniforms() {
        let mut rng = RngStream::new(6, 0);
        let u: Vec<f64> = (0..50_000).map(|_| crate::rngdist::uniform_open(&mut rng)).collect();
        assert!(ks_statistic(&u, |x| x) < 0.008);
        assert!(ks_statistic(&u, |x| x * x) > 0.2);
        assert_eq!(ks_statistic(&[0.5], |x| x), 0.5);
    }

    #[test]
    fn constant_series_flagged() {
        let s = vec![2.5; 200];
        let a = autocorrelation(&s, 3).unwrap();
        assert!(a.degenerate && a.values == vec![1.0, 0.0, 0.0, 0.0]);
        assert!(effective_sample_size(&s).unwrap().degenerate);
        let mut rng = RngStream::new(5, 0);
        let noisy: Vec<f64> = (0..100).map(|_| 1.0 + 1e-9 * standard_normal(&mut rng)).collect();
        assert!(effective_sample_size(&noisy).unwrap().ess > 0.0);
        assert!(autocorrelation(&s, 200).is_err());
    }
}
