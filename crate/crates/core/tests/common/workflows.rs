//! Simulation-study and prediction-workflow checks, with the serialized
//! outputs used for the determinism comparison.

use super::Check;
use shrinkage::experiments::*;
use shrinkage::gibbs::McmcConfig;
use shrinkage::priors::{PriorRecipe, R2d2Variant};
use shrinkage::rngdist::RngStream;

pub const DESK_SEED: u64 = 20_170_601;
pub const PREDICT_SEED: u64 = 3_330;
pub const AUC_BAND: (f64, f64) = (0.85, 0.95);
pub const TOTAL_SSE_BAND_X100: (f64, f64) = (50.0, 110.0);
pub const R2_TOL: f64 = 0.05;
pub const PERMUTED_REL_TOL: f64 = 0.15;

pub fn desk_config() -> SimulationConfig {
    SimulationConfig::desk(Setup::Setup1, 60, 50, 0.5, DESK_SEED)
}

/// Runs the desk simulation; returns the report and its CSV bytes.
pub fn desk_run() -> (SimulationReport, Vec<u8>) {
    let r = run_simulation(&desk_config()).unwrap();
    let mut bytes = Vec::new();
    r.write_csv(&mut bytes).unwrap();
    r.write_replications_csv(&mut bytes).unwrap();
    (r, bytes)
}

fn label(v: R2d2Variant) -> String {
    PriorRecipe::R2d2 { variant: v }.label()
}

pub fn simulation_checks(r: &SimulationReport) -> Vec<Check> {
    let mut out = Vec::new();
    let failed: usize = r.summaries.iter().map(|s| s.failed).sum();
    out.push(Check::holds("desk run: no failed chains", failed == 0, failed as f64));
    let main = r.summary(&label(R2d2Variant::POverNB05)).unwrap();
    let hs = r.summary("Horseshoe").unwrap();
    out.push(Check::holds(
        format!("SSE(=0) R2-D2(p/n,0.5) {:.4} < Horseshoe {:.4}", main.mean.sse_zero, hs.mean.sse_zero),
        main.mean.sse_zero < hs.mean.sse_zero,
        main.mean.sse_zero - hs.mean.sse_zero,
    ));
    let dl = r.summary("DL(1/p)").unwrap();
    let worst = R2d2Variant::ALL
        .iter()
        .map(|v| r.summary(&label(*v)).unwrap().mean.sse_large)
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(Check::holds(
        format!("SSE(>0.5) DL(1/p) {:.4} > every R2-D2 (max {worst:.4})", dl.mean.sse_large),
        dl.mean.sse_large > worst,
        dl.mean.sse_large - worst,
    ));
    for s in &r.summaries {
        out.push(Check::between(format!("mean AUC {}", s.prior), s.auc_mean, AUC_BAND.0, AUC_BAND.1));
    }
    out.push(Check::between(
        "SSE(Total) x100 R2-D2(p/n,0.5)",
        100.0 * main.mean.sse_total,
        TOTAL_SSE_BAND_X100.0,
        TOTAL_SSE_BAND_X100.1,
    ));
    out
}

pub fn r2_check() -> Check {
    let r2 = theoretical_r2(Setup::Setup2, 100, 0.0, 20_000, &mut RngStream::new(DESK_SEED, 1)).unwrap();
    Check::within("Setup 2 theoretical R^2 at rho=0", r2, 0.5, R2_TOL)
}

pub fn predict_mcmc() -> McmcConfig {
    McmcConfig::new(1_000, 500, 1).unwrap()
}

pub fn split_config() -> SplitConfig {
    SplitConfig {
        splits: 20,
        test_size: 5,
        screen_k: Some(999),
        keep_columns: vec![0],
        base_seed: PREDICT_SEED,
    }
}

/// Informative and permuted-response tables plus their serialized bytes.
pub fn prediction_run() -> (MspeTable, MspeTable, Vec<u8>) {
    let d = synthetic_expression(60, 5_000, &mut RngStream::new(PREDICT_SEED, 0)).unwrap();
    let cfg = split_config();
    let priors = PriorRecipe::prediction_set();
    let mcmc = predict_mcmc();
    let real = train_test_evaluate(&d.x, &d.y, &cfg, &priors, &mcmc).unwrap();
    let perm = permuted_response(&d.y, PREDICT_SEED);
    let null = train_test_evaluate(&d.x, &perm, &cfg, &priors, &mcmc).unwrap();
    let mut bytes = Vec::new();
    for t in [&real, &null] {
        t.write_csv(&mut bytes).unwrap();
        bytes.extend(serde_json::to_vec(t).unwrap());
    }
    (real, null, bytes)
}

pub fn prediction_checks(real: &MspeTable, null: &MspeTable) -> Vec<Check> {
    let mut out = Vec::new();
    let errs = real.errors.len() + null.errors.len();
    out.push(Check::holds("prediction: no failed chains", errs == 0, errs as f64));
    for (r, c) in real.rows.iter().zip(&null.rows) {
        let rel = c.mean / null.null_mean - 1.0;
        out.push(Check::within(
            format!("permuted MSPE / var(y_test) - 1, {}", c.prior),
            rel,
            0.0,
            PERMUTED_REL_TOL,
        ));
        out.push(Check::holds(
            format!("MSPE informative {:.4} < permuted {:.4}, {}", r.mean, c.mean, r.prior),
            r.mean < c.mean,
            r.mean - c.mean,
        ));
    }
    out
}
