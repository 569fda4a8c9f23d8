//! Oracles shared by the integration tests and the acceptance report.
#![allow(dead_code)]

use shrinkage::quad::{integrate, QuadOptions};

/// CDF of a positive random variable, tabulated by adaptive quadrature of its
/// (unnormalised) log density in `u = ln z` and read back by cubic Hermite
/// interpolation. Mass outside `[e^lo, e^hi]` is treated as zero.
pub struct LogCdf {
    u: Vec<f64>,
    c: Vec<f64>,
    g: Vec<f64>,
}

impl LogCdf {
    pub fn new<F: Fn(f64) -> f64>(log_f: F, lo: f64, hi: f64, knots: usize) -> Self {
        let lh = |u: f64| log_f(u.exp()) + u;
        let u: Vec<f64> = (0..knots).map(|i| lo + (hi - lo) * i as f64 / (knots - 1) as f64).collect();
        let peak = u.iter().map(|&v| lh(v)).filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        let h = |v: f64| {
            let l = lh(v) - peak;
            if l.is_finite() {
                l.exp()
            } else {
                0.0
            }
        };
        let opts = QuadOptions::with_rel_tol(1e-12);
        let mut c = vec![0.0; knots];
        for i in 1..knots {
            c[i] = c[i - 1] + integrate(h, u[i - 1], u[i], &opts).value;
        }
        let total = c[knots - 1];
        let c = c.iter().map(|v| v / total).collect();
        let g = u.iter().map(|&v| h(v) / total).collect();
        LogCdf { u, c, g }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        if !(z > 0.0) {
            return 0.0;
        }
        let v = z.ln();
        let n = self.u.len();
        if v <= self.u[0] {
            return 0.0;
        }
        if v >= self.u[n - 1] {
            return 1.0;
        }
        let i = self.u.partition_point(|&k| k <= v) - 1;
        let h = self.u[i + 1] - self.u[i];
        let t = (v - self.u[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let f = (2.0 * t3 - 3.0 * t2 + 1.0) * self.c[i]
            + (t3 - 2.0 * t2 + t) * h * self.g[i]
            + (-2.0 * t3 + 3.0 * t2) * self.c[i + 1]
            + (t3 - t2) * h * self.g[i + 1];
        f.clamp(0.0, 1.0)
    }
}

/// One-sample KS distance when draws below `floor` are reported as `floor`:
/// the atom is compared with `F(floor)`, the rest as usual.
pub fn ks_censored<F: Fn(f64) -> f64>(samples: &[f64], cdf: F, floor: f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let k = s.partition_point(|&x| x <= floor);
    let mut d = (k as f64 / n - cdf(floor)).abs();
    for (i, x) in s.iter().enumerate().skip(k) {
        let f = cdf(*x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (m, x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0))
}

pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let (mx, vx) = mean_var(x);
    let (my, vy) = mean_var(y);
    let c = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (x.len() as f64 - 1.0);
    c / (vx * vy).sqrt()
}

/// A named measurement against a tolerance, for the acceptance report.
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub pass: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound: format!("< {limit}"),
            pass: value < limit,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound: format!("{target} +/- {tol}"),
            pass: (value - target).abs() <= tol,
        }
    }

    pub fn between(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound: format!("in [{lo}, {hi}]"),
            pass: lo <= value && value <= hi,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool, detail: f64) -> Self {
        Check {
            name: name.into(),
            value: detail,
            bound: "holds".into(),
            pass: ok,
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {:.6e} ({})", self.name, self.value, self.bound)
    }
}

pub fn assert_all(checks: &[Check]) {
    let bad: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.to_string()).collect();
    assert!(bad.is_empty(), "failed:\n{}", bad.join("\n"));
}

pub mod samplers;
pub mod theory;
pub mod gibbs;
pub mod workflows;
