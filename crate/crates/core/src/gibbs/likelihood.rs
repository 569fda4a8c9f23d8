use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rngdist::standard_normal;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Which factorisation the coefficient draw uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaRoute {
    /// `Primal` when `p <= n`, `Dual` otherwise.
    #[default]
    Auto,
    /// Cholesky of a `p x p` system.
    Primal,
    /// Woodbury-type draw through an `n x n` system; never forms `p x p`.
    Dual,
}

/// Prior variances (relative to `sigma^2`) are kept inside
/// `[FLOOR_REL * median, VAR_CAP]`.
pub const FLOOR_REL: f64 = 1e-12;
pub const VAR_CAP: f64 = 1e100;

const JITTER: [f64; 4] = [1e-12, 1e-10, 1e-8, 1e-6];

/// The Gaussian linear model `y = X beta + e`, `e ~ N(0, sigma^2 I)`, with the
/// cross-products the coefficient draw needs.
#[derive(Clone, Debug)]
pub struct Likelihood {
    x: DMatrix<f64>,
    y: DVector<f64>,
    xty: DVector<f64>,
    xtx: Option<DMatrix<f64>>,
    route: BetaRoute,
}

impl Likelihood {
    pub fn new(data: &Dataset, route: BetaRoute) -> Self {
        Self::from_xy(data.x.clone(), data.y.clone(), route)
    }

    pub fn from_xy(x: DMatrix<f64>, y: DVector<f64>, route: BetaRoute) -> Self {
        let route = match route {
            BetaRoute::Auto if x.ncols() <= x.nrows() => BetaRoute::Primal,
            BetaRoute::Auto => BetaRoute::Dual,
            r => r,
        };
        let xtx = (route == BetaRoute::Primal).then(|| x.tr_mul(&x));
        let xty = x.tr_mul(&y);
        Likelihood { x, y, xty, xtx, route }
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn route(&self) -> BetaRoute {
        self.route
    }

    /// Swap in a new response (same design).
    pub fn set_y(&mut self, y: DVector<f64>) {
        assert_eq!(y.len(), self.n(), "response length must match the design");
        self.xty = self.x.tr_mul(&y);
        self.y = y;
    }

    /// `||y - X beta||^2`.
    pub fn rss(&self, beta: &[f64]) -> f64 {
        let b = DVector::from_column_slice(beta);
        (&self.y - &self.x * b).norm_squared()
    }

    /// Draw `beta ~ N(V X'y, sigma2 V)`, `V = (X'X + D^-1)^-1`, where `d` holds
    /// the prior variances divided by `sigma2`. `d` must already be floored.
    pub fn draw_beta<R: Rng + ?Sized>(&self, d: &[f64], sigma2: f64, rng: &mut R) -> Result<Vec<f64>> {
        debug_assert_eq!(d.len(), self.p());
        match self.route {
            BetaRoute::Dual => self.draw_dual(d, sigma2, rng),
            _ => self.draw_primal(d, sigma2, rng),
        }
    }

    fn draw_primal<R: Rng + ?Sized>(&self, d: &[f64], sigma2: f64, rng: &mut R) -> Result<Vec<f64>> {
        let p = self.p();
        let xtx = self.xtx.as_ref().expect("primal route keeps X'X");
        let s: Vec<f64> = d.iter().map(|v| v.sqrt()).collect();
        // M = D^1/2 X'X D^1/2 + I; beta = D^1/2 gamma, gamma ~ N(M^-1 D^1/2 X'y, sigma2 M^-1)
        let mut m = DMatrix::from_fn(p, p, |i, j| s[i] * xtx[(i, j)] * s[j]);
        for i in 0..p {
            m[(i, i)] += 1.0;
        }
        let chol = cholesky_with_jitter(m)?;
        let rhs = DVector::from_fn(p, |i, _| s[i] * self.xty[i]);
        let mean = chol.solve(&rhs);
        let z = DVector::from_fn(p, |_, _| standard_normal(rng));
        let noise = chol
            .l_dirty()
            .tr_solve_lower_triangular(&z)
            .ok_or_else(|| Error::numerical(0, "triangular solve failed in coefficient draw"))?;
        let sigma = sigma2.sqrt();
        Ok((0..p).map(|i| s[i] * (mean[i] + sigma * noise[i])).collect())
    }

    fn draw_dual<R: Rng + ?Sized>(&self, d: &[f64], sigma2: f64, rng: &mut R) -> Result<Vec<f64>> {
        let (n, p) = (self.n(), self.p());
        let sigma = sigma2.sqrt();
        // u ~ N(0, D), delta ~ N(0, I_n); (X D X' + I) w = y/sigma - (X u + delta);
        // beta = sigma (u + D X' w)
        let u = DVector::from_fn(p, |i, _| d[i].sqrt() * standard_normal(rng));
        let delta = DVector::from_fn(n, |_, _| standard_normal(rng));
        let xd = DMatrix::from_fn(n, p, |i, j| self.x[(i, j)] * d[j]);
        let mut a = &xd * self.x.transpose();
        for i in 0..n {
            a[(i, i)] += 1.0;
        }
        let chol = cholesky_with_jitter(a)?;
        let rhs = &self.y / sigma - (&self.x * &u + delta);
        let w = chol.solve(&rhs);
        let dxw = xd.tr_mul(&w);
        Ok((0..p).map(|i| sigma * (u[i] + dxw[i])).collect())
    }
}

fn cholesky_with_jitter(m: DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return Ok(c);
    }
    let scale = m.diagonal().iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    for eps in JITTER {
        let mut mj = m.clone();
        for i in 0..mj.nrows() {
            mj[(i, i)] += eps * scale;
        }
        if let Some(c) = Cholesky::new(mj) {
            return Ok(c);
        }
    }
    Err(Error::numerical(0, "coefficient system is not positive definite after jitter"))
}

/// Floor (relative to the median) and cap a vector of prior variances in place.
pub fn floor_variances(d: &mut [f64]) {
    let mut sorted: Vec<f64> = d.iter().copied().filter(|v| v.is_finite()).collect();
    let med = if sorted.is_empty() {
        1.0
    } else {
        let k = sorted.len() / 2;
        *sorted.select_nth_unstable_by(k, f64::total_cmp).1
    };
    let floor = (FLOOR_REL * med).clamp(f64::MIN_POSITIVE, VAR_CAP);
    for v in d.iter_mut() {
        *v = if v.is_nan() { floor } else { v.clamp(floor, VAR_CAP) };
    }
}
