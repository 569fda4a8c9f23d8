//! R2-D2 full conditionals.
//!
//! Model: `beta_j ~ N(0, sigma^2 S_jj)`, `S_jj = psi_j phi_j omega / 2`,
//! `psi_j ~ Exp(1/2)`, `phi ~ Dir(a_pi, ..., a_pi)`, `omega | xi ~ Ga(a, xi)`,
//! `xi ~ Ga(b, 1)`, `sigma^2 ~ IG(a1, b1)`.

use super::likelihood::{floor_variances, Likelihood};
use crate::error::{Error, Result};
use crate::priors::{R2d2Params, SigmaPrior};
use crate::rngdist::{gamma_unchecked, gig_unchecked, inverse_gaussian_unchecked, standard_normal};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// `|beta_j|` is floored at this multiple of its prior scale wherever the
/// conditionals divide by it.
pub const BETA_FLOOR_REL: f64 = 1e-10;
const CHI_MAX: f64 = 1e300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct R2d2State {
    pub beta: Vec<f64>,
    pub sigma2: f64,
    pub psi: Vec<f64>,
    pub phi: Vec<f64>,
    pub omega: f64,
    pub xi: f64,
}

impl R2d2State {
    /// Neutral starting point: unit local scales, uniform weights, `sigma^2`
    /// at the sample variance of `y`.
    pub fn initial(lik: &Likelihood) -> Self {
        let p = lik.p();
        R2d2State {
            beta: vec![0.0; p],
            sigma2: response_variance(lik),
            psi: vec![1.0; p],
            phi: vec![1.0 / p as f64; p],
            omega: 1.0,
            xi: 1.0,
        }
    }

    /// One draw of every parameter from the prior (reduced form `a = p a_pi`).
    pub fn from_prior<R: Rng + ?Sized>(params: &R2d2Params, p: usize, sp: &SigmaPrior, rng: &mut R) -> Self {
        let sigma2 = 1.0 / gamma_unchecked(sp.a1, sp.b1, rng);
        let xi = gamma_unchecked(params.b, 1.0, rng);
        let t: Vec<f64> = (0..p).map(|_| gamma_unchecked(params.a_pi, xi, rng)).collect();
        let omega: f64 = t.iter().sum();
        let phi: Vec<f64> = t.iter().map(|v| (v / omega).max(f64::MIN_POSITIVE)).collect();
        let psi: Vec<f64> = (0..p).map(|_| gamma_unchecked(1.0, 0.5, rng)).collect();
        let mut s = R2d2State {
            beta: vec![0.0; p],
            sigma2,
            psi,
            phi,
            omega,
            xi,
        };
        let sd = s.shrink_scale();
        s.beta = sd.iter().map(|v| (sigma2 * v).sqrt() * standard_normal(rng)).collect();
        s
    }

    /// Floored diagonal of `S`.
    pub fn shrink_scale(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .psi
            .iter()
            .zip(&self.phi)
            .map(|(psi, phi)| psi * phi * self.omega / 2.0)
            .collect();
        floor_variances(&mut s);
        s
    }

    /// `beta_j^2`, floored relative to `sigma^2 S_jj`.
    fn beta2_floored(&self, s: &[f64]) -> Vec<f64> {
        self.beta
            .iter()
            .zip(s)
            .map(|(b, sj)| (b * b).max(BETA_FLOOR_REL * BETA_FLOOR_REL * self.sigma2 * sj))
            .collect()
    }
}

pub(crate) fn response_variance(lik: &Likelihood) -> f64 {
    let n = lik.n().max(2) as f64;
    (lik.y().norm_squared() / (n - 1.0)).max(1e-8)
}

/// (a) `beta ~ N(V X'y, sigma^2 V)`, `V = (X'X + S^-1)^-1`.
pub fn step_beta<R: Rng + ?Sized>(lik: &Likelihood, st: &mut R2d2State, rng: &mut R) -> Result<()> {
    let s = st.shrink_scale();
    st.beta = lik.draw_beta(&s, st.sigma2, rng)?;
    Ok(())
}

/// (b) `sigma^2 ~ IG(a1 + (n+p)/2, b1 + (beta' S^-1 beta + RSS)/2)`.
pub fn step_sigma2<R: Rng + ?Sized>(lik: &Likelihood, sp: &SigmaPrior, st: &mut R2d2State, rng: &mut R) -> Result<()> {
    let s = st.shrink_scale();
    let quad: f64 = st.beta.iter().zip(&s).map(|(b, v)| b * b / v).sum();
    st.sigma2 = draw_sigma2(lik, sp, &st.beta, quad, rng)?;
    Ok(())
}

pub(crate) fn draw_sigma2<R: Rng + ?Sized>(
    lik: &Likelihood,
    sp: &SigmaPrior,
    beta: &[f64],
    prior_quad: f64,
    rng: &mut R,
) -> Result<f64> {
    let shape = sp.a1 + 0.5 * (lik.n() + lik.p()) as f64;
    let scale = sp.b1 + 0.5 * (prior_quad + lik.rss(beta));
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::numerical(0, format!("sigma^2 scale is {scale}")));
    }
    Ok(1.0 / gamma_unchecked(shape, scale, rng))
}

/// (c) `1/psi_j ~ IG(mu_j, 1)`, `mu_j = sqrt(sigma^2 phi_j omega / 2) / |beta_j|`.
pub fn step_psi<R: Rng + ?Sized>(st: &mut R2d2State, rng: &mut R) {
    for j in 0..st.psi.len() {
        let scale = (st.sigma2 * st.phi[j] * st.omega / 2.0).sqrt().max(f64::MIN_POSITIVE);
        let babs = st.beta[j].abs().max(BETA_FLOOR_REL * scale);
        let inv = inverse_gaussian_unchecked(scale / babs, 1.0, rng);
        st.psi[j] = 1.0 / inv;
    }
}

/// (d) `omega ~ giG(sum 2 beta_j^2 / (sigma^2 psi_j phi_j), 2 xi, a - p/2)`.
pub fn step_omega<R: Rng + ?Sized>(params: &R2d2Params, st: &mut R2d2State, rng: &mut R) -> Result<()> {
    let s = st.shrink_scale();
    let b2 = st.beta2_floored(&s);
    let chi: f64 = (0..b2.len())
        .map(|j| 2.0 * b2[j] / (st.sigma2 * st.psi[j] * st.phi[j]))
        .sum::<f64>()
        .clamp(f64::MIN_POSITIVE, CHI_MAX);
    let lambda0 = params.a - 0.5 * st.beta.len() as f64;
    let w = gig_unchecked(chi, 2.0 * st.xi, lambda0, rng);
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::numerical(0, format!("omega draw {w} from giG({chi}, {}, {lambda0})", 2.0 * st.xi)));
    }
    st.omega = w;
    Ok(())
}

/// (e) `xi ~ Ga(a + b, 1 + omega)`.
pub fn step_xi<R: Rng + ?Sized>(params: &R2d2Params, st: &mut R2d2State, rng: &mut R) {
    st.xi = gamma_unchecked(params.a + params.b, 1.0 + st.omega, rng);
}

/// (f) `T_j ~ giG(2 beta_j^2 / (sigma^2 psi_j), 2 xi, a_pi - 1/2)`, then
/// `phi = T / sum T` and `omega = sum T`. Valid only in the reduced form
/// `a = p a_pi`, where `omega phi_j` are independent `Ga(a_pi, xi)`.
pub fn step_phi<R: Rng + ?Sized>(params: &R2d2Params, st: &mut R2d2State, rng: &mut R) -> Result<()> {
    let s = st.shrink_scale();
    let b2 = st.beta2_floored(&s);
    let lambda0 = params.a_pi - 0.5;
    let rho = 2.0 * st.xi;
    let t: Vec<f64> = (0..b2.len())
        .map(|j| {
            let chi = (2.0 * b2[j] / (st.sigma2 * st.psi[j])).clamp(f64::MIN_POSITIVE, CHI_MAX);
            gig_unchecked(chi, rho, lambda0, rng)
        })
        .collect();
    let total: f64 = t.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::numerical(0, format!("Dirichlet normalisation failed: sum T = {total}")));
    }
    for (phi, tj) in st.phi.iter_mut().zip(&t) {
        *phi = (tj / total).max(f64::MIN_POSITIVE);
    }
    st.omega = total;
    Ok(())
}

/// Steps (a) through (f) in order.
pub fn sweep<R: Rng + ?Sized>(
    lik: &Likelihood,
    params: &R2d2Params,
    sp: &SigmaPrior,
    st: &mut R2d2State,
    rng: &mut R,
) -> Result<()> {
    step_beta(lik, st, rng)?;
    step_sigma2(lik, sp, st, rng)?;
    step_psi(st, rng);
    step_omega(params, st, rng)?;
    step_xi(params, st, rng);
    step_phi(params, st, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rngdist::RngStream;
    use nalgebra::{DMatrix, DVector};

    fn toy() -> Likelihood {
        let mut rng = RngStream::new(3, 0);
        let x = DMatrix::from_fn(8, 2, |_, _| standard_normal(&mut rng));
        let y = DVector::from_fn(8, |_, _| standard_normal(&mut rng));
        Likelihood::from_xy(x, y, Default::default())
    }

    #[test]
    fn phi_stays_on_simplex() {
        let lik = toy();
        let params = R2d2Params::reduced(2, 0.5, 0.3).unwrap();
        let mut st = R2d2State::initial(&lik);
        let mut rng = RngStream::new(5, 1);
        for _ in 0..500 {
            sweep(&lik, &params, &SigmaPrior::default(), &mut st, &mut rng).unwrap();
            assert!((st.phi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(st.sigma2 > 0.0 && st.omega > 0.0 && st.xi > 0.0);
            assert!(st.beta.iter().chain(&st.psi).all(|v| v.is_finite()));
        }
    }

    #[test]
    fn zero_beta_is_guarded() {
        let lik = toy();
        let params = R2d2Params::reduced(2, 0.5, 0.3).unwrap();
        let mut st = R2d2State::initial(&lik);
        let mut rng = RngStream::new(9, 0);
        step_psi(&mut st, &mut rng);
        step_omega(&params, &mut st, &mut rng).unwrap();
        step_phi(&params, &mut st, &mut rng).unwrap();
        assert!(st.psi.iter().all(|v| v.is_finite() && *v > 0.0));
        assert!(st.omega.is_finite() && st.omega > 0.0);
    }

    #[test]
    fn xi_mean() {
        let params = R2d2Params::new(1.5, 0.5, 0.5).unwrap();
        let lik = toy();
        let mut st = R2d2State::initial(&lik);
        st.omega = 3.0;
        let mut rng = RngStream::new(2, 0);
        let m = 200_000;
        let mut acc = 0.0;
        for _ in 0..m {
            step_xi(&params, &mut st, &mut rng);
            acc += st.xi;
        }
        // Ga(2, 4): mean 0.5, sd 0.354
        assert!((acc / m as f64 - 0.5).abs() < 5.0 * 0.354 / (m as f64).sqrt());
    }
}
