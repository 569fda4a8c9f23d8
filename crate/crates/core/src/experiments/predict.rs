//! Repeated train/test splits with screening refit on each training set.

use super::csv_field;
use super::generate::ar1_design;
use super::metrics::ordering_agreement;
use super::screen::screen_by_marginal_correlation;
use crate::error::{Error, Result};
use crate::gibbs::{run_chain, Dataset, McmcConfig};
use crate::priors::PriorRecipe;
use crate::rngdist::{derive_stream_id, standard_normal, RngStream};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

const STREAM_SPLIT: u64 = 11;
const STREAM_CHAIN: u64 = 12;
const STREAM_PERMUTE: u64 = 13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub splits: usize,
    pub test_size: usize,
    /// Number of columns kept by marginal-correlation screening; `None`
    /// keeps every column.
    pub screen_k: Option<usize>,
    /// Columns always kept, ahead of the screened ones.
    #[serde(default)]
    pub keep_columns: Vec<usize>,
    pub base_seed: u64,
}

impl SplitConfig {
    pub fn validate(&self, n: usize, p: usize) -> Result<()> {
        if self.splits == 0 {
            return Err(Error::Config("need at least one split".into()));
        }
        if self.test_size == 0 || self.test_size + 3 > n {
            return Err(Error::Config(format!(
                "test size {} leaves too few training rows out of {n}",
                self.test_size
            )));
        }
        if let Some(&j) = self.keep_columns.iter().find(|&&j| j >= p) {
            return Err(Error::Config(format!("kept column {j} out of range (p = {p})")));
        }
        if let Some(k) = self.screen_k {
            if k + self.keep_columns.len() > p {
                return Err(Error::Config(format!(
                    "cannot screen {k} of {} candidate columns",
                    p - self.keep_columns.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MspeRow {
    pub prior: String,
    pub mean: f64,
    pub se: f64,
    /// Per-split MSPE, `None` where the chain failed.
    pub per_split: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MspeTable {
    pub rows: Vec<MspeRow>,
    /// Per-split MSPE of the training-mean predictor.
    pub null_per_split: Vec<f64>,
    pub null_mean: f64,
    pub errors: Vec<String>,
}

impl MspeTable {
    pub fn row(&self, prior: &str) -> Option<&MspeRow> {
        self.rows.iter().find(|r| r.prior == prior)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "prior,mspe_mean,mspe_se,completed,failed")?;
        for r in &self.rows {
            let done = r.per_split.iter().flatten().count();
            writeln!(
                w,
                "{},{:.16e},{:.16e},{},{}",
                csv_field(&r.prior),
                r.mean,
                r.se,
                done,
                r.per_split.len() - done
            )?;
        }
        let (m, se) = mean_se(&self.null_per_split);
        writeln!(w, "training_mean,{m:.16e},{se:.16e},{},0", self.null_per_split.len())?;
        Ok(())
    }
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Row indices `(train, test)` of split `s`; the test rows come first in a
/// shuffle drawn from the split's own stream.
pub fn split_rows(n: usize, test_size: usize, base_seed: u64, s: usize) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut RngStream::new(base_seed, derive_stream_id(&[STREAM_SPLIT, s as u64])));
    let train = idx.split_off(test_size);
    (train, idx)
}

fn rows(x: &DMatrix<f64>, idx: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), cols.len(), |i, j| x[(idx[i], cols[j])])
}

fn select_columns(x_train: &DMatrix<f64>, y_train: &DVector<f64>, cfg: &SplitConfig) -> Result<Vec<usize>> {
    let p = x_train.ncols();
    let Some(k) = cfg.screen_k else {
        return Ok((0..p).collect());
    };
    let candidates: Vec<usize> = (0..p).filter(|j| !cfg.keep_columns.contains(j)).collect();
    let sub = DMatrix::from_fn(x_train.nrows(), candidates.len(), |i, j| x_train[(i, candidates[j])]);
    let picked = screen_by_marginal_correlation(&sub, y_train, k)?;
    Ok(cfg.keep_columns.iter().copied().chain(picked.into_iter().map(|j| candidates[j])).collect())
}

fn one_split(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    cfg: &SplitConfig,
    prior: &PriorRecipe,
    mcmc: &McmcConfig,
    s: usize,
    k: usize,
) -> Result<f64> {
    let (train, test) = split_rows(x.nrows(), cfg.test_size, cfg.base_seed, s);
    let all: Vec<usize> = (0..x.ncols()).collect();
    let x_train_full = rows(x, &train, &all);
    let y_train = DVector::from_fn(train.len(), |i, _| y[train[i]]);
    let cols = select_columns(&x_train_full, &y_train, cfg)?;
    let data = Dataset::standardize(rows(x, &train, &cols), y_train)?;
    let spec = prior.resolve(data.p(), data.n());
    let mut rng = RngStream::new(cfg.base_seed, derive_stream_id(&[STREAM_CHAIN, s as u64, k as u64]));
    let draws = run_chain(&spec, &data, mcmc, &mut rng)?;
    let pred = data.predict(&draws.posterior_mean(), &rows(x, &test, &cols))?;
    Ok(test.iter().zip(pred.iter()).map(|(&i, f)| (y[i] - f).powi(2)).sum::<f64>() / test.len() as f64)
}

/// MSPE of every prior over `cfg.splits` random splits. Each (split, prior)
/// pair is an independent task on its own stream, so the table does not
/// depend on the thread count. Failed chains are recorded, not fatal.
pub fn train_test_evaluate(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    cfg: &SplitConfig,
    priors: &[PriorRecipe],
    mcmc: &McmcConfig,
) -> Result<MspeTable> {
    if y.len() != x.nrows() {
        return Err(Error::Dimension(format!("{} responses for {} rows", y.len(), x.nrows())));
    }
    cfg.validate(x.nrows(), x.ncols())?;
    mcmc.validate()?;
    if priors.is_empty() {
        return Err(Error::Config("no priors to evaluate".into()));
    }
    let np = priors.len();
    let results: Vec<Result<f64>> = (0..cfg.splits * np)
        .into_par_iter()
        .map(|task| one_split(x, y, cfg, &priors[task % np], mcmc, task / np, task % np))
        .collect();

    let mut errors = Vec::new();
    let rows = priors
        .iter()
        .enumerate()
        .map(|(k, prior)| {
            let per_split: Vec<Option<f64>> = (0..cfg.splits)
                .map(|s| match &results[s * np + k] {
                    Ok(v) => Some(*v),
                    Err(e) => {
                        errors.push(format!("split {s}, {}: {e}", prior.label()));
                        None
                    }
                })
                .collect();
            let ok: Vec<f64> = per_split.iter().flatten().copied().collect();
            let (mean, se) = mean_se(&ok);
            MspeRow {
                prior: prior.label(),
                mean,
                se,
                per_split,
            }
        })
        .collect();

    let null_per_split: Vec<f64> = (0..cfg.splits)
        .map(|s| {
            let (train, test) = split_rows(x.nrows(), cfg.test_size, cfg.base_seed, s);
            let ybar = train.iter().map(|&i| y[i]).sum::<f64>() / train.len() as f64;
            test.iter().map(|&i| (y[i] - ybar).powi(2)).sum::<f64>() / test.len() as f64
        })
        .collect();
    let null_mean = null_per_split.iter().sum::<f64>() / cfg.splits as f64;
    Ok(MspeTable {
        rows,
        null_per_split,
        null_mean,
        errors,
    })
}

const STREAM_FULL: u64 = 14;

/// Posterior t-statistics of every prior fitted to all rows, after the same
/// screening as the splits (run once on all rows). Returns the selected
/// columns and one t-vector per prior.
pub fn full_data_tstats(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    cfg: &SplitConfig,
    priors: &[PriorRecipe],
    mcmc: &McmcConfig,
) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
    if y.len() != x.nrows() {
        return Err(Error::Dimension(format!("{} responses for {} rows", y.len(), x.nrows())));
    }
    let cols = select_columns(x, y, cfg)?;
    let all: Vec<usize> = (0..x.nrows()).collect();
    let data = Dataset::standardize(rows(x, &all, &cols), y.clone())?;
    let tstats = priors
        .par_iter()
        .enumerate()
        .map(|(k, prior)| {
            let spec = prior.resolve(data.p(), data.n());
            let mut rng = RngStream::new(cfg.base_seed, derive_stream_id(&[STREAM_FULL, k as u64]));
            Ok(run_chain(&spec, &data, mcmc, &mut rng)?.t_statistics())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((cols, tstats))
}

/// Agreement curves for every pair of priors: `top` is the size of each
/// top set by `|t|`, `matching` the size of their intersection.
pub fn write_agreement_csv<W: Write>(labels: &[String], tstats: &[Vec<f64>], mut w: W) -> Result<()> {
    writeln!(w, "prior_a,prior_b,top,matching")?;
    for a in 0..tstats.len() {
        for b in a + 1..tstats.len() {
            let curve = ordering_agreement(&tstats[a], &tstats[b])?;
            for (x, m) in curve.iter().enumerate() {
                writeln!(w, "{},{},{},{m}", csv_field(&labels[a]), csv_field(&labels[b]), x + 1)?;
            }
        }
    }
    Ok(())
}

/// `y` under one fixed permutation: the link to `x` is broken but the
/// marginal distribution of the response is kept.
pub fn permuted_response(y: &DVector<f64>, base_seed: u64) -> DVector<f64> {
    let mut v: Vec<f64> = y.iter().copied().collect();
    v.shuffle(&mut RngStream::new(base_seed, derive_stream_id(&[STREAM_PERMUTE])));
    DVector::from_vec(v)
}

/// Synthetic expression-style data. Column 0 is a binary indicator; the
/// remaining `genes` columns are AR(1) noise with correlation 0.5, and a
/// scattered module of `MODULE_SIZE` genes also loads on a latent factor
/// that drives the response, as co-expressed genes do.
#[derive(Clone, Debug)]
pub struct ExpressionData {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    /// The indicator followed by the module genes.
    pub signal_columns: Vec<usize>,
}

const MODULE_SIZE: usize = 40;
const FACTOR_EFFECT: f64 = 2.0;
const INDICATOR_EFFECT: f64 = 0.8;

pub fn synthetic_expression<R: rand::Rng + ?Sized>(n: usize, genes: usize, rng: &mut R) -> Result<ExpressionData> {
    if genes < MODULE_SIZE || n < 4 {
        return Err(Error::Config(format!("need at least {MODULE_SIZE} genes and 4 rows")));
    }
    let mut indicator: Vec<f64> = (0..n).map(|i| if 2 * i < n { 1.0 } else { 0.0 }).collect();
    indicator.shuffle(rng);
    let factor: Vec<f64> = (0..n).map(|_| standard_normal(rng)).collect();
    let g = ar1_design(n, genes, 0.5, rng);
    let stride = genes / MODULE_SIZE;
    let module: Vec<usize> = (0..MODULE_SIZE).map(|k| 1 + k * stride + stride / 2).collect();
    let mut x = DMatrix::from_fn(n, genes + 1, |i, j| if j == 0 { indicator[i] } else { g[(i, j - 1)] });
    for &c in &module {
        for i in 0..n {
            x[(i, c)] += factor[i];
        }
    }
    let y = DVector::from_fn(n, |i, _| {
        INDICATOR_EFFECT * indicator[i] + FACTOR_EFFECT * factor[i] + standard_normal(rng)
    });
    let mut signal_columns = vec![0];
    signal_columns.extend(module);
    Ok(ExpressionData { x, y, signal_columns })
}
