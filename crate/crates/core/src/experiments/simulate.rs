//! Replicated simulation study: generate, fit every prior, score.

use super::generate::{generate, Setup};
use super::csv_field;
use super::metrics::{auc_from_tstats, sse_decompose, SseDecomposition};
use crate::error::{Error, Result};
use crate::gibbs::{run_chain, McmcConfig};
use crate::priors::PriorRecipe;
use crate::rngdist::{derive_stream_id, RngStream};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write;

const STREAM_DATA: u64 = 1;
const STREAM_CHAIN: u64 = 2;

fn desk_mcmc() -> McmcConfig {
    McmcConfig {
        iterations: 2_000,
        burn_in: 1_000,
        ..Default::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub setup: Setup,
    pub n: usize,
    pub p: usize,
    pub rho: f64,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "PriorRecipe::simulation_set")]
    pub priors: Vec<PriorRecipe>,
    #[serde(default = "desk_mcmc")]
    pub mcmc: McmcConfig,
    #[serde(default)]
    pub base_seed: u64,
}

fn default_replications() -> usize {
    50
}

impl SimulationConfig {
    /// 50 replications of 2000 sweeps (1000 burn-in) over the full prior set.
    pub fn desk(setup: Setup, n: usize, p: usize, rho: f64, base_seed: u64) -> Self {
        SimulationConfig {
            setup,
            n,
            p,
            rho,
            replications: default_replications(),
            priors: PriorRecipe::simulation_set(),
            mcmc: desk_mcmc(),
            base_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < self.setup.min_p() {
            return Err(Error::Config(format!(
                "{} needs p >= {}, got {}",
                self.setup.label(),
                self.setup.min_p(),
                self.p
            )));
        }
        if self.n < 2 {
            return Err(Error::Config(format!("need n >= 2, got {}", self.n)));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::Config(format!("rho must lie in [0, 1), got {}", self.rho)));
        }
        if self.replications == 0 || self.priors.is_empty() {
            return Err(Error::Config("need at least one replication and one prior".into()));
        }
        self.mcmc.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationMetrics {
    pub sse: SseDecomposition,
    pub auc: f64,
}

/// Result of one prior on one replicated dataset; failures are kept as text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationOutcome {
    pub replication: usize,
    pub prior: String,
    pub result: std::result::Result<ReplicationMetrics, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorSummary {
    pub prior: String,
    pub completed: usize,
    pub failed: usize,
    pub mean: SseDecomposition,
    /// Standard errors `sd / sqrt(completed)`.
    pub se: SseDecomposition,
    pub auc_mean: f64,
    pub auc_se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    pub outcomes: Vec<ReplicationOutcome>,
    pub summaries: Vec<PriorSummary>,
}

/// Stream of the dataset for replication `rep`.
pub fn data_stream(base_seed: u64, rep: usize) -> RngStream {
    RngStream::new(base_seed, derive_stream_id(&[STREAM_DATA, rep as u64]))
}

/// Stream of the chain for prior `k` on replication `rep`.
pub fn chain_stream(base_seed: u64, rep: usize, k: usize) -> RngStream {
    RngStream::new(base_seed, derive_stream_id(&[STREAM_CHAIN, rep as u64, k as u64]))
}

fn one(cfg: &SimulationConfig, rep: usize, k: usize) -> Result<ReplicationMetrics> {
    let sim = generate(cfg.setup, cfg.n, cfg.p, cfg.rho, &mut data_stream(cfg.base_seed, rep))?;
    let prior = cfg.priors[k].resolve(cfg.p, cfg.n);
    let draws = run_chain(&prior, &sim.data, &cfg.mcmc, &mut chain_stream(cfg.base_seed, rep, k))?;
    let est = sim.data.to_raw_scale(&draws.posterior_mean());
    Ok(ReplicationMetrics {
        sse: sse_decompose(&est, &sim.beta_true)?,
        auc: auc_from_tstats(&draws.t_statistics(), &sim.beta_true)?,
    })
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn summarize(label: &str, rows: &[&ReplicationOutcome]) -> PriorSummary {
    let ok: Vec<&ReplicationMetrics> = rows.iter().filter_map(|o| o.result.as_ref().ok()).collect();
    let col = |f: &dyn Fn(&ReplicationMetrics) -> f64| mean_se(&ok.iter().map(|m| f(m)).collect::<Vec<_>>());
    let (z, zs) = col(&|m| m.sse.sse_zero);
    let (s, ss) = col(&|m| m.sse.sse_small);
    let (l, ls) = col(&|m| m.sse.sse_large);
    let (t, ts) = col(&|m| m.sse.sse_total);
    let (a, as_) = col(&|m| m.auc);
    PriorSummary {
        prior: label.to_string(),
        completed: ok.len(),
        failed: rows.len() - ok.len(),
        mean: SseDecomposition {
            sse_zero: z,
            sse_small: s,
            sse_large: l,
            sse_total: t,
        },
        se: SseDecomposition {
            sse_zero: zs,
            sse_small: ss,
            sse_large: ls,
            sse_total: ts,
        },
        auc_mean: a,
        auc_se: as_,
    }
}

/// Every (replication, prior) pair runs as an independent task on its own
/// streams, so the report does not depend on the size of the thread pool.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    for r in &cfg.priors {
        r.resolve(cfg.p, cfg.n).validate()?;
    }
    let np = cfg.priors.len();
    let labels: Vec<String> = cfg.priors.iter().map(|r| r.label()).collect();
    let outcomes: Vec<ReplicationOutcome> = (0..cfg.replications * np)
        .into_par_iter()
        .map(|task| {
            let (rep, k) = (task / np, task % np);
            ReplicationOutcome {
                replication: rep,
                prior: labels[k].clone(),
                result: one(cfg, rep, k).map_err(|e| e.to_string()),
            }
        })
        .collect();
    let summaries = (0..np)
        .map(|k| {
            let rows: Vec<&ReplicationOutcome> = outcomes.iter().skip(k).step_by(np).collect();
            summarize(&labels[k], &rows)
        })
        .collect();
    Ok(SimulationReport {
        config: cfg.clone(),
        outcomes,
        summaries,
    })
}

impl SimulationReport {
    pub fn summary(&self, prior: &str) -> Option<&PriorSummary> {
        self.summaries.iter().find(|s| s.prior == prior)
    }

    /// Long format `setup,prior,metric,mean,se`, unscaled.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "setup,prior,metric,mean,se")?;
        let setup = self.config.setup.label();
        for s in &self.summaries {
            let prior = csv_field(&s.prior);
            let rows = [
                ("sse_zero", s.mean.sse_zero, s.se.sse_zero),
                ("sse_small", s.mean.sse_small, s.se.sse_small),
                ("sse_large", s.mean.sse_large, s.se.sse_large),
                ("sse_total", s.mean.sse_total, s.se.sse_total),
                ("auc", s.auc_mean, s.auc_se),
            ];
            for (metric, m, se) in rows {
                writeln!(w, "{setup},{prior},{metric},{m:.16e},{se:.16e}")?;
            }
            writeln!(w, "{setup},{prior},failed_replications,{},0", s.failed)?;
        }
        Ok(())
    }

    /// One row per (replication, prior); failed fits carry their message.
    pub fn write_replications_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "replication,prior,sse_zero,sse_small,sse_large,sse_total,auc,error")?;
        for o in &self.outcomes {
            match &o.result {
                Ok(m) => writeln!(
                    w,
                    "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},",
                    o.replication, csv_field(&o.prior), m.sse.sse_zero, m.sse.sse_small, m.sse.sse_large, m.sse.sse_total, m.auc
                )?,
                Err(e) => writeln!(w, "{},{},,,,,,{}", o.replication, csv_field(&o.prior), csv_field(e))?,
            }
        }
        Ok(())
    }

    /// Presentation table: every value times 100, two decimals, standard
    /// errors in parentheses.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<16} {:>16} {:>16} {:>16} {:>16} {:>16}",
            "prior", "SSE(=0)", "SSE((0,0.5])", "SSE(>0.5)", "SSE(Total)", "AUC"
        );
        let cell = |m: f64, s: f64| format!("{:.2} ({:.2})", 100.0 * m, 100.0 * s);
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{:<16} {:>16} {:>16} {:>16} {:>16} {:>16}",
                s.prior,
                cell(s.mean.sse_zero, s.se.sse_zero),
                cell(s.mean.sse_small, s.se.sse_small),
                cell(s.mean.sse_large, s.se.sse_large),
                cell(s.mean.sse_total, s.se.sse_total),
                cell(s.auc_mean, s.auc_se)
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SimulationConfig {
        SimulationConfig {
            replications: 2,
            mcmc: McmcConfig::new(60, 30, 1).unwrap(),
            ..SimulationConfig::desk(Setup::Setup2, 25, 20, 0.2, 11)
        }
    }

    #[test]
    fn partition_identity_and_shape() {
        let r = run_simulation(&tiny()).unwrap();
        assert_eq!(r.outcomes.len(), 2 * r.config.priors.len());
        for o in &r.outcomes {
            let m = o.result.as_ref().unwrap();
            let s = m.sse;
            assert!((s.sse_total - (s.sse_zero + s.sse_small + s.sse_large)).abs() < 1e-10);
            assert!((0.0..=1.0).contains(&m.auc));
        }
    }

    #[test]
    fn report_is_reproducible() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        run_simulation(&tiny()).unwrap().write_csv(&mut a).unwrap();
        run_simulation(&tiny()).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_configs() {
        let mut c = tiny();
        c.p = 10;
        assert!(run_simulation(&c).is_err());
        let mut c = tiny();
        c.rho = 1.0;
        assert!(c.validate().is_err());
    }
}
