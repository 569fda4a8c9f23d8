//! Seeded random streams and the samplers the Gibbs kernels are built from.
//!
//! Every sampler is a pure function of its parameters and the generator it is
//! handed. Parameters are validated and out-of-domain values are reported as
//! [`Error::Domain`].

mod gig;
mod stream;

pub use gig::{sample_gig, GigParams};
pub(crate) use gig::gig_unchecked;
pub use stream::{derive_stream_id, RngStream};

use crate::error::{Error, Result};
use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;

#[inline]
pub fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Marsaglia-Tsang squeeze for shape >= 1, unit rate.
fn gamma_mt<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let (x, v) = loop {
            let x = standard_normal(rng);
            let v = 1.0 + c * x;
            if v > 0.0 {
                break (x, v * v * v);
            }
        };
        let u = uniform_open(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Log of a Ga(shape, 1) draw. Works for arbitrarily small shapes, where the
/// draw itself routinely underflows: a shape below one is boosted to
/// `shape + 1` and corrected by `U^(1/shape)`, applied on the log scale.
pub fn sample_log_gamma_unit<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape >= 1.0 {
        gamma_mt(shape, rng).ln()
    } else {
        gamma_mt(shape + 1.0, rng).ln() + uniform_open(rng).ln() / shape
    }
}

/// Ga(shape, rate) with mean `shape / rate`.
///
/// Draws below the smallest normal double are returned as
/// `f64::MIN_POSITIVE`; use [`sample_log_gamma_unit`] when the lower tail
/// matters (shape well below 0.01).
pub fn sample_gamma<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> Result<f64> {
    check_positive("gamma shape", shape)?;
    check_positive("gamma rate", rate)?;
    Ok(gamma_unchecked(shape, rate, rng))
}

#[inline]
pub(crate) fn gamma_unchecked<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    let g = if shape >= 1.0 {
        gamma_mt(shape, rng)
    } else {
        (sample_log_gamma_unit(shape, rng)).exp()
    };
    (g / rate).max(f64::MIN_POSITIVE)
}

/// Inverse-gamma with shape `shape` and scale `scale` (density
/// proportional to `x^(-shape-1) exp(-scale/x)`).
pub fn sample_inverse_gamma<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> Result<f64> {
    check_positive("inverse-gamma shape", shape)?;
    check_positive("inverse-gamma scale", scale)?;
    Ok(1.0 / gamma_unchecked(shape, scale, rng))
}

/// Dirichlet draw computed on the log scale, so concentrations far below one
/// (1/(2p) with p in the hundreds) still yield a valid simplex point.
pub fn sample_dirichlet<R: Rng + ?Sized>(concentration: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    if concentration.is_empty() {
        return Err(Error::domain("Dirichlet concentration vector is empty"));
    }
    for &a in concentration {
        check_positive("Dirichlet concentration", a)?;
    }
    let logs: Vec<f64> = concentration
        .iter()
        .map(|&a| sample_log_gamma_unit(a, rng))
        .collect();
    Ok(normalize_log_weights(&logs))
}

/// `exp(l_j - logsumexp(l))`, renormalised so the entries sum to one.
pub(crate) fn normalize_log_weights(logs: &[f64]) -> Vec<f64> {
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    w
}

/// Beta-prime BP(a, b) through the two-gamma hierarchy
/// `omega | xi ~ Ga(a, xi)`, `xi ~ Ga(b, 1)`.
pub fn sample_beta_prime<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    check_positive("beta-prime a", a)?;
    check_positive("beta-prime b", b)?;
    let xi = gamma_unchecked(b, 1.0, rng);
    Ok(gamma_unchecked(a, xi, rng))
}

/// Beta-prime through `W = R^2 / (1 - R^2)` with `R^2 ~ Beta(a, b)`.
///
/// For small shapes the Beta variate comes from Johnk's rejection sampler, which
/// uses only uniforms and yields `W = X / Y` directly on the log scale, so the
/// result is independent of the gamma machinery used by [`sample_beta_prime`].
pub fn sample_beta_prime_via_beta<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    check_positive("beta-prime a", a)?;
    check_positive("beta-prime b", b)?;
    if a + b <= 3.0 {
        loop {
            let lx = uniform_open(rng).ln() / a;
            let ly = uniform_open(rng).ln() / b;
            // accept when X + Y <= 1
            let m = lx.max(ly);
            let lsum = m + ((lx - m).exp() + (ly - m).exp()).ln();
            if lsum <= 0.0 {
                return Ok((lx - ly).exp());
            }
        }
    }
    let lx = sample_log_gamma_unit(a, rng);
    let ly = sample_log_gamma_unit(b, rng);
    Ok((lx - ly).exp())
}

/// Inverse Gaussian with mean `mu` and shape `lambda`.
///
/// Transformation with root selection: the smaller root of the chi-square
/// quadratic is formed without cancellation so very large `mu` stays finite.
pub fn sample_inverse_gaussian<R: Rng + ?Sized>(mu: f64, lambda: f64, rng: &mut R) -> Result<f64> {
    check_positive("inverse-Gaussian mean", mu)?;
    check_positive("inverse-Gaussian shape", lambda)?;
    Ok(inverse_gaussian_unchecked(mu, lambda, rng))
}

#[inline]
pub(crate) fn inverse_gaussian_unchecked<R: Rng + ?Sized>(mu: f64, lambda: f64, rng: &mut R) -> f64 {
    let z = standard_normal(rng);
    let r = mu * z * z / (2.0 * lambda);
    // mu * (1 + r - sqrt(r^2 + 2r)) rewritten as mu / (1 + r + sqrt(r^2 + 2r))
    let x = mu / (1.0 + r + (r * (r + 2.0)).sqrt());
    let u = uniform_open(rng);
    let out = if u * (mu + x) <= mu { x } else { mu * (mu / x) };
    out.max(f64::MIN_POSITIVE)
}

/// Student-t with `df` degrees of freedom.
pub fn sample_student_t<R: Rng + ?Sized>(df: f64, rng: &mut R) -> Result<f64> {
    check_positive("Student-t degrees of freedom", df)?;
    let z = standard_normal(rng);
    let chi2 = gamma_unchecked(0.5 * df, 0.5, rng);
    Ok(z / (chi2 / df).sqrt())
}
