use crate::error::{Error, Result};
use crate::priors::PriorSpec;
use serde::{Deserialize, Serialize};
use std::io::Write;

use super::McmcConfig;

/// Retained draws of one chain. `beta` is column-major: the draws of
/// coefficient `j` occupy `beta[j * retained .. (j + 1) * retained]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosteriorDraws {
    pub p: usize,
    pub retained: usize,
    pub beta: Vec<f64>,
    pub sigma2: Vec<f64>,
    /// Global scale trace: `omega` (R2-D2) or `tau` (DL, Horseshoe variants).
    pub global: Vec<f64>,
    pub global_name: String,
    pub meta: DrawsMeta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrawsMeta {
    pub prior: PriorSpec,
    pub mcmc: McmcConfig,
    pub seed: u64,
    pub stream_id: u64,
    pub n: usize,
    /// Wall-clock seconds; filled in by callers that ask for timings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

/// Per-coefficient posterior summary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefSummary {
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub q975: f64,
    /// `mean / sd`.
    pub t: f64,
}

impl PosteriorDraws {
    pub fn coef(&self, j: usize) -> &[f64] {
        &self.beta[j * self.retained..(j + 1) * self.retained]
    }

    pub fn posterior_mean(&self) -> Vec<f64> {
        (0..self.p).map(|j| mean(self.coef(j))).collect()
    }

    pub fn t_statistics(&self) -> Vec<f64> {
        self.summary().iter().map(|s| s.t).collect()
    }

    pub fn summary(&self) -> Vec<CoefSummary> {
        (0..self.p).map(|j| summarize(self.coef(j))).collect()
    }

    /// Columns `iteration, beta_1..beta_p, sigma2, <global>`, one row per
    /// retained draw; `iteration` is the 1-based sweep index.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "iteration")?;
        for j in 1..=self.p {
            write!(w, ",beta_{j}")?;
        }
        writeln!(w, ",sigma2,{}", self.global_name)?;
        let (burn, thin) = (self.meta.mcmc.burn_in, self.meta.mcmc.thin);
        for r in 0..self.retained {
            write!(w, "{}", burn + (r + 1) * thin)?;
            for j in 0..self.p {
                write!(w, ",{:.16e}", self.beta[j * self.retained + r])?;
            }
            writeln!(w, ",{:.16e},{:.16e}", self.sigma2[r], self.global[r])?;
        }
        Ok(())
    }

    pub fn write_metadata<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, &self.meta)?;
        Ok(())
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        let bad = self
            .beta
            .iter()
            .chain(&self.sigma2)
            .chain(&self.global)
            .any(|v| !v.is_finite());
        if bad {
            return Err(Error::numerical(self.meta.mcmc.iterations, "non-finite value among retained draws"));
        }
        Ok(())
    }
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Linear-interpolation quantile of sorted data (the usual "type 7").
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(x: &[f64]) -> CoefSummary {
    let m = mean(x);
    let n = x.len();
    let sd = if n > 1 {
        (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    CoefSummary {
        mean: m,
        sd,
        q025: quantile_sorted(&s, 0.025),
        q975: quantile_sorted(&s, 0.975),
        t: if sd > 0.0 { m / sd } else { 0.0 },
    }
}
