//! Estimation and ranking metrics.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Squared estimation error split by the size of the true coefficient:
/// `beta_j = 0`, `|beta_j|` in `(0, 0.5]`, and `|beta_j| > 0.5`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SseDecomposition {
    pub sse_zero: f64,
    pub sse_small: f64,
    pub sse_large: f64,
    pub sse_total: f64,
}

pub fn sse_decompose(beta_hat: &[f64], beta_true: &[f64]) -> Result<SseDecomposition> {
    if beta_hat.len() != beta_true.len() {
        return Err(Error::Dimension(format!(
            "{} estimates for {} true coefficients",
            beta_hat.len(),
            beta_true.len()
        )));
    }
    let mut s = SseDecomposition::default();
    for (h, t) in beta_hat.iter().zip(beta_true) {
        let e = (h - t) * (h - t);
        let a = t.abs();
        if a == 0.0 {
            s.sse_zero += e;
        } else if a <= 0.5 {
            s.sse_small += e;
        } else {
            s.sse_large += e;
        }
    }
    s.sse_total = s.sse_zero + s.sse_small + s.sse_large;
    Ok(s)
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && v[idx[j]] == v[idx[i]] {
            j += 1;
        }
        let r = 0.5 * ((i + 1) + j) as f64;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Mann-Whitney AUC of `|t|` for telling nonzero true coefficients from zero
/// ones; ties count one half.
pub fn auc_from_tstats(tstats: &[f64], beta_true: &[f64]) -> Result<f64> {
    if tstats.len() != beta_true.len() {
        return Err(Error::Dimension(format!(
            "{} t-statistics for {} true coefficients",
            tstats.len(),
            beta_true.len()
        )));
    }
    if tstats.iter().any(|t| t.is_nan()) {
        return Err(Error::Domain("t-statistics contain NaN".into()));
    }
    let pos = beta_true.iter().filter(|b| **b != 0.0).count();
    let neg = beta_true.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::Config("AUC needs both zero and nonzero true coefficients".into()));
    }
    let abs: Vec<f64> = tstats.iter().map(|t| t.abs()).collect();
    let ranks = average_ranks(&abs);
    let rank_sum: f64 = ranks.iter().zip(beta_true).filter(|(_, b)| **b != 0.0).map(|(r, _)| r).sum();
    let (pos, neg) = (pos as f64, neg as f64);
    Ok((rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg))
}

/// Indices ordered by decreasing `|t|`, ties to the lower index.
pub fn rank_by_magnitude(t: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..t.len()).collect();
    idx.sort_by(|&a, &b| match t[b].abs().total_cmp(&t[a].abs()) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    idx
}

/// Entry `x - 1` is the number of coefficients shared by the top-`x` lists of
/// the two rankings by `|t|`.
pub fn ordering_agreement(tstats_a: &[f64], tstats_b: &[f64]) -> Result<Vec<usize>> {
    if tstats_a.len() != tstats_b.len() {
        return Err(Error::Dimension(format!(
            "rankings of different lengths: {} and {}",
            tstats_a.len(),
            tstats_b.len()
        )));
    }
    let ra = rank_by_magnitude(tstats_a);
    let rb = rank_by_magnitude(tstats_b);
    let mut seen = vec![0u8; ra.len()];
    let mut shared = 0;
    let mut curve = Vec::with_capacity(ra.len());
    for (a, b) in ra.iter().zip(&rb) {
        for &k in [a, b].iter() {
            seen[*k] += 1;
            if seen[*k] == 2 {
                shared += 1;
            }
        }
        curve.push(shared);
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_worked_sse() {
        let s = sse_decompose(&[0.1, 0.0, 1.0], &[0.0, 0.3, 2.0]).unwrap();
        assert!((s.sse_zero - 0.01).abs() < 1e-15);
        assert!((s.sse_small - 0.09).abs() < 1e-15);
        assert_eq!(s.sse_large, 1.0);
        assert!((s.sse_total - 1.10).abs() < 1e-12);
        let b = sse_decompose(&[0.0], &[0.5]).unwrap();
        assert_eq!(b.sse_small, 0.25);
        assert!(sse_decompose(&[0.0], &[]).is_err());
    }

    #[test]
    fn auc_cases() {
        let truth = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
        assert_eq!(auc_from_tstats(&[5.0, 4.0, 3.0, 2.0, 1.0, 0.0], &truth).unwrap(), 1.0);
        let swapped = auc_from_tstats(&[5.0, 4.0, 1.5, 2.0, 1.0, 0.0], &truth).unwrap();
        assert!((swapped - 8.0 / 9.0).abs() < 1e-15);
        assert_eq!(auc_from_tstats(&[1.0; 6], &truth).unwrap(), 0.5);
        assert!(auc_from_tstats(&[1.0, 2.0], &[0.0, 0.0]).is_err());
        // sign and monotone transforms do not matter
        let t = [-3.0, 0.2, 2.5, -0.1, 1.0, 0.7];
        let cube: Vec<f64> = t.iter().map(|v: &f64| v.powi(3)).collect();
        assert_eq!(auc_from_tstats(&t, &truth).unwrap(), auc_from_tstats(&cube, &truth).unwrap());
    }

    #[test]
    fn agreement_curves() {
        let t: Vec<f64> = (1..=6).map(|v| v as f64).collect();
        assert_eq!(ordering_agreement(&t, &t).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        let rev: Vec<f64> = t.iter().rev().cloned().collect();
        let c = ordering_agreement(&t, &rev).unwrap();
        let want: Vec<usize> = (1..=6).map(|x: i64| (2 * x - 6).max(0) as usize).collect();
        assert_eq!(c, want);
    }
}
