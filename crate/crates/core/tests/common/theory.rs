//! Tail/origin orders of the marginal densities and the near-zero mass rates.

use super::Check;
use shrinkage::density::*;
use shrinkage::priors::{DlParams, PriorSpec, R2d2Params};
use shrinkage::specialfns::EvalOptions;

pub const SLOPE_TOL: f64 = 0.05;
pub const MASS_SLOPE_TOL: f64 = 0.03;
/// Largest allowed max/min ratio for "bounded and bounded away from zero".
pub const RATIO_LIMIT: f64 = 3.0;

fn r2d2(b: f64, a_pi: f64) -> PriorSpec {
    PriorSpec::R2d2(R2d2Params::new(a_pi, b, a_pi).unwrap())
}

fn ratio_spread<F: Fn(f64) -> f64>(lo: f64, hi: f64, f: F) -> f64 {
    let v: Vec<f64> = log_spaced(lo, hi, 25).into_iter().map(f).collect();
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 && max.is_finite() {
        max / min
    } else {
        f64::INFINITY
    }
}

pub fn density_checks() -> Vec<Check> {
    let o = EvalOptions::default();
    let mut out = Vec::new();
    for b in [0.1, 0.5, 1.0] {
        let s = log_log_slope(&r2d2(b, 0.25), 50.0, 500.0, 20, &o).unwrap();
        out.push(Check::within(format!("R2-D2 tail slope b={b}"), s, -(2.0 * b + 1.0), SLOPE_TOL));
    }
    for a_pi in [0.1, 0.25, 0.4] {
        let s = log_log_slope(&r2d2(0.5, a_pi), 1e-8, 1e-4, 20, &o).unwrap();
        out.push(Check::within(format!("R2-D2 origin slope a_pi={a_pi}"), s, -(1.0 - 2.0 * a_pi), SLOPE_TOL));
    }
    for a_d in [0.2, 0.5, 0.8] {
        let s = log_log_slope(&PriorSpec::Dl(DlParams::new(a_d).unwrap()), 1e-8, 1e-4, 20, &o).unwrap();
        out.push(Check::within(format!("DL origin slope a_D={a_d}"), s, -(1.0 - a_d), SLOPE_TOL));
    }
    let a_d = 0.5;
    let dl = DlParams::new(a_d).unwrap();
    let r = ratio_spread(50.0, 500.0, |x| {
        dl_marginal(x, &dl, &o).unwrap() * (2.0 * x).sqrt().exp() * x.powf(0.75 - a_d / 2.0)
    });
    out.push(Check::below("DL tail f e^sqrt(2b) b^(3/4-a_D/2) max/min", r, RATIO_LIMIT));

    let inside = log_spaced(1e-8, 0.1, 40).into_iter().all(|x| {
        let (lo, hi) = hs_marginal_bounds(x);
        let f = hs_marginal(x).unwrap();
        lo < f && f < hi
    });
    out.push(Check::holds("HS origin inside log envelope on (1e-8, 0.1]", inside, 0.0));
    let r = ratio_spread(50.0, 500.0, |x| hs_marginal(x).unwrap() * x * x);
    out.push(Check::below("HS tail f b^2 max/min", r, 1.05));

    let r = ratio_spread(1e-8, 1e-5, |x| hsplus_marginal(x, &o).unwrap() / (1.0 / x).ln().powi(2));
    out.push(Check::below("HS+ origin f / log^2(1/b) max/min", r, RATIO_LIMIT));
    let r = ratio_spread(100.0, 1000.0, |x| hsplus_marginal(x, &o).unwrap() * x * x / x.ln());
    out.push(Check::below("HS+ tail f b^2 / log b max/min", r, RATIO_LIMIT));
    out
}

pub fn mass_slope(prior: &PriorSpec) -> f64 {
    let o = EvalOptions::default();
    let (x, y): (Vec<f64>, Vec<f64>) = (2..=8)
        .map(|k| {
            let n = 10usize.pow(k);
            ((n as f64).ln(), prior_mass_near_zero(prior, n, &o).unwrap().ln())
        })
        .unzip();
    ols_slope(&x, &y)
}

pub fn mass_checks() -> Vec<Check> {
    let mut out = Vec::new();
    // for shapes near 1/2 the n^(-1/2) correction decays too slowly for
    // n <= 1e8 to show the limiting rate, so only smaller shapes are checked
    for a_pi in [0.1, 0.25] {
        let s = mass_slope(&r2d2(0.5, a_pi));
        out.push(Check::within(format!("R2-D2 near-zero mass slope a_pi={a_pi}"), s, -a_pi, MASS_SLOPE_TOL));
    }
    for a_d in [0.2, 0.5] {
        let s = mass_slope(&PriorSpec::Dl(DlParams::new(a_d).unwrap()));
        out.push(Check::within(format!("DL near-zero mass slope a_D={a_d}"), s, -a_d / 2.0, MASS_SLOPE_TOL));
    }
    out
}
