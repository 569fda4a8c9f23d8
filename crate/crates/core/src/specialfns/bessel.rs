//! Modified Bessel function of the second kind, real order and argument.
//!
//! The order is reduced to `mu` in `[-1/2, 1/2)`. `K_mu` and `K_{mu+1}` come
//! from Temme's series for `z <= 2` and from Steed's continued fraction
//! (Thompson-Barnett form, scaled by `e^z`) above that; the integer part of
//! the order is then restored by forward recurrence carried out on ratios, so
//! only logarithms of `K` are ever accumulated.

use super::{log_gamma, EvalOptions};
use crate::error::{Error, Result};
use std::f64::consts::{LN_2, PI};

const TEMME_MAX_Z: f64 = 2.0;

/// Coefficients of `1/Gamma(z) = sum_k c_k z^k`, k = 1..26.
const RGAMMA: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// `1/Gamma(1+mu)`, `1/Gamma(1-mu)` and Temme's `gamma1`, `gamma2`, free of
/// cancellation as `mu -> 0`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Gamma(1+z) = sum_k c_k z^(k-1)
    let mut even = 0.0; // terms with even power of mu
    let mut odd = 0.0; // coefficient series of the odd part divided by mu
    for (k, &c) in RGAMMA.iter().enumerate().rev() {
        // k here is (power of mu)
        if k % 2 == 0 {
            even = even * mu * mu + c;
        } else {
            odd = odd * mu * mu + c;
        }
    }
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    let gam1 = -odd;
    let gam2 = even;
    (gam1, gam2, gampl, gammi)
}

fn not_converged(what: &str, nu: f64, z: f64) -> Error {
    Error::numerical(0, format!("{what} did not converge for nu={nu}, z={z}"))
}

/// `(ln K_mu(z), K_{mu+1}(z) / K_mu(z))` for `|mu| <= 1/2`, `z <= 2`.
fn temme(mu: f64, z: f64, opts: &EvalOptions) -> Result<(f64, f64)> {
    let x2 = 0.5 * z;
    let pimu = PI * mu;
    let fact = if pimu.abs() < f64::EPSILON { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < f64::EPSILON { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mut converged = false;
    for i in 1..=opts.max_terms {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(not_converged("Temme series", mu, z));
    }
    Ok((sum.ln(), sum1 * 2.0 / (z * sum)))
}

/// `(ln K_mu(z), K_{mu+1}(z) / K_mu(z))` for `|mu| <= 1/2`, `z > 2`.
fn steed(mu: f64, z: f64, opts: &EvalOptions) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..=opts.max_terms {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(not_converged("Steed continued fraction", mu, z));
    }
    h *= a1;
    let log_kmu = 0.5 * (PI / (2.0 * z)).ln() - s.ln() - z;
    Ok((log_kmu, (mu + z + 0.5 - h) / z))
}

/// `ln K_nu(z)` for `z > 0`.
pub fn log_bessel_k(nu: f64, z: f64, opts: &EvalOptions) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("bessel_k requires z > 0, got {z}")));
    }
    if !nu.is_finite() {
        return Err(Error::domain(format!("bessel_k requires finite order, got {nu}")));
    }
    let nu = nu.abs();

    // Deep in the origin regime the leading term is exact to far below
    // rel_tol, and the series below would overflow on K_{mu+1}.
    if z < 1e-100 && nu > 0.1 {
        return Ok(log_gamma(nu)? - LN_2 + nu * (LN_2 - z.ln()));
    }

    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut log_k, mut ratio) = if z <= TEMME_MAX_Z {
        temme(mu, z, opts)?
    } else {
        steed(mu, z, opts)?
    };
    for i in 1..=(nl as usize) {
        log_k += ratio.ln();
        ratio = 2.0 * (mu + i as f64) / z + 1.0 / ratio;
    }
    if log_k.is_nan() {
        return Err(Error::numerical(0, format!("bessel_k produced NaN for nu={nu}, z={z}")));
    }
    Ok(log_k)
}

/// `K_nu(z)`; overflows to infinity near the origin for large orders, in which
/// case [`log_bessel_k`] should be used.
pub fn bessel_k(nu: f64, z: f64, opts: &EvalOptions) -> Result<f64> {
    Ok(log_bessel_k(nu, z, opts)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(nu: f64, z: f64) -> f64 {
        bessel_k(nu, z, &EvalOptions::default()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_integer_closed_form() {
        for &z in &[1e-3, 0.5, 1.0, 1.9, 2.0, 2.1, 7.0, 40.0] {
            let want = (PI / (2.0 * z)).sqrt() * (-z).exp();
            assert!(rel(k(0.5, z), want) < 1e-13, "z={z}");
            // K_{3/2}(z) = K_{1/2}(z)(1 + 1/z)
            assert!(rel(k(1.5, z), want * (1.0 + 1.0 / z)) < 1e-13, "z={z}");
        }
    }

    #[test]
    fn known_values() {
        // K_0(1), K_1(1), K_0(0.1), K_2(5) from standard tables
        assert!(rel(k(0.0, 1.0), 0.421_024_438_240_708_3) < 1e-14);
        assert!(rel(k(1.0, 1.0), 0.601_907_230_197_234_6) < 1e-14);
        assert!(rel(k(0.0, 0.1), 2.427_069_024_702_016_6) < 1e-13);
        assert!(rel(k(2.0, 5.0), 0.005_308_943_712_223_460) < 1e-13);
    }

    #[test]
    fn symmetric_in_order() {
        assert_eq!(k(0.3, 1.7), k(-0.3, 1.7));
    }

    #[test]
    fn continuous_across_crossover() {
        for &nu in &[0.0, 0.25, 0.49, 0.51, 1.3] {
            let lo = k(nu, TEMME_MAX_Z);
            let hi = k(nu, TEMME_MAX_Z * (1.0 + 1e-12));
            assert!(rel(lo, hi) < 1e-11, "nu={nu}");
        }
    }

    #[test]
    fn log_scale_survives_tiny_argument() {
        let opts = EvalOptions::default();
        let l = log_bessel_k(2.5, 1e-200, &opts).unwrap();
        let want = log_gamma(2.5).unwrap() - LN_2 + 2.5 * (2.0f64.ln() - (1e-200f64).ln());
        assert!((l - want).abs() < 1e-12);
        assert!(log_bessel_k(0.5, 1e3, &opts).unwrap().is_finite());
        assert!(bessel_k(0.5, 0.0, &opts).is_err());
        assert!(bessel_k(0.5, -1.0, &opts).is_err());
    }
}
