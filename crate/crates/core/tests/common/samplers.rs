//! Distributional checks of every sampler against independent CDF oracles.

use super::{correlation, ks_censored, ks_two_sample, Check, LogCdf};
use shrinkage::diagnostics::ks_statistic;
use shrinkage::rngdist::*;
use statrs::distribution::{Beta, ContinuousCDF, Gamma, StudentsT};
use statrs::function::gamma::ln_gamma;

pub const KS_LIMIT: f64 = 0.002;

fn draws<F: FnMut(&mut RngStream) -> f64>(n: usize, stream: u64, mut f: F) -> Vec<f64> {
    let mut rng = RngStream::new(20_240_601, stream);
    (0..n).map(|_| f(&mut rng)).collect()
}

/// `P(Ga(a, 1) <= e^t)`, accurate far below the smallest double.
fn log_gamma_cdf(a: f64, t: f64) -> f64 {
    if t < -25.0 {
        // series P(a, x) = x^a e^{-x} / Gamma(a+1) (1 + x/(a+1) + ...), x < 1e-10
        (a * t - ln_gamma(a + 1.0)).exp()
    } else {
        Gamma::new(a, 1.0).unwrap().cdf(t.exp())
    }
}

pub fn checks(n: usize) -> Vec<Check> {
    let mut out = Vec::new();

    // gamma, tiny shape: log-scale draws, then the floored natural-scale draws
    let a = 0.005;
    let lg = draws(n, 1, |r| sample_log_gamma_unit(a, r));
    out.push(Check::below("gamma(0.005,1) log-scale KS", ks_statistic(&lg, |t| log_gamma_cdf(a, t)), KS_LIMIT));
    let g = draws(n, 2, |r| sample_gamma(a, 1.0, r).unwrap());
    let ga = Gamma::new(a, 1.0).unwrap();
    out.push(Check::below(
        "gamma(0.005,1) KS",
        ks_censored(&g, |x| ga.cdf(x), f64::MIN_POSITIVE),
        KS_LIMIT,
    ));
    let g = draws(n, 3, |r| sample_gamma(2.5, 3.0, r).unwrap());
    let orc = LogCdf::new(|x| 1.5 * x.ln() - 3.0 * x, -30.0, 4.0, 400);
    out.push(Check::below("gamma(2.5,3) KS", ks_statistic(&g, |x| orc.cdf(x)), KS_LIMIT));
    let g = draws(n, 4, |r| sample_gamma(0.5, 0.5, r).unwrap());
    let (m, v) = super::mean_var(&g);
    out.push(Check::within("gamma(0.5,0.5) variance", v, 2.0, 0.02));
    out.push(Check::within("gamma(0.5,0.5) mean", m, 1.0, 0.005));

    let g = draws(n, 5, |r| sample_inverse_gamma(3.0, 2.0, r).unwrap());
    let orc = LogCdf::new(|x| -4.0 * x.ln() - 2.0 / x, -8.0, 12.0, 400);
    out.push(Check::below("inverse-gamma(3,2) KS", ks_statistic(&g, |x| orc.cdf(x)), KS_LIMIT));

    for (mu, lam, stream) in [(2.0, 5.0, 6), (1.0, 1.0, 7)] {
        let g = draws(n, stream, |r| sample_inverse_gaussian(mu, lam, r).unwrap());
        let orc = LogCdf::new(
            |x| -1.5 * x.ln() - lam * (x - mu) * (x - mu) / (2.0 * mu * mu * x),
            -12.0,
            7.0,
            400,
        );
        out.push(Check::below(
            format!("inverse-Gaussian({mu},{lam}) KS"),
            ks_statistic(&g, |x| orc.cdf(x)),
            KS_LIMIT,
        ));
    }

    let gig_cases = [
        (2.0, 2.0, 0.5, -16.0, 5.0),
        (1e-10, 2.0, -0.45, -40.0, 4.5),
        (0.5, 3.0, 1.5, -12.0, 4.0),
        (4.0, 0.1, -2.0, -8.0, 9.0),
        (0.3, 0.7, -0.5, -14.0, 6.0),
    ];
    for (k, (chi, rho, l0, lo, hi)) in gig_cases.into_iter().enumerate() {
        let p = GigParams::new(chi, rho, l0).unwrap();
        let g = draws(n, 10 + k as u64, |r| sample_gig(&p, r).unwrap());
        let orc = LogCdf::new(|z| (l0 - 1.0) * z.ln() - 0.5 * (rho * z + chi / z), lo, hi, 1200);
        let finite = g.iter().all(|v| v.is_finite() && *v > 0.0);
        out.push(Check::below(
            format!("giG({chi},{rho},{l0}) KS"),
            if finite { ks_statistic(&g, |x| orc.cdf(x)) } else { f64::INFINITY },
            KS_LIMIT,
        ));
    }

    let g = draws(n, 20, |r| sample_student_t(3.0, r).unwrap());
    let t3 = StudentsT::new(0.0, 1.0, 3.0).unwrap();
    out.push(Check::below("Student-t(3) KS", ks_statistic(&g, |x| t3.cdf(x)), KS_LIMIT));

    // Dirichlet margins are Beta(a_j, sum a - a_j)
    for (conc, stream) in [(vec![0.5; 4], 21), (vec![0.01; 50], 22), (vec![2.0, 3.0, 5.0], 23)] {
        let total: f64 = conc.iter().sum();
        let mut rng = RngStream::new(20_240_601, stream);
        let first: Vec<f64> = (0..n).map(|_| sample_dirichlet(&conc, &mut rng).unwrap()[0]).collect();
        let be = Beta::new(conc[0], total - conc[0]).unwrap();
        out.push(Check::below(
            format!("Dirichlet({}x{}) margin KS", conc.len(), conc[0]),
            ks_censored(&first, |x| be.cdf(x), 0.0),
            KS_LIMIT,
        ));
    }

    // beta prime: each route against the exact CDF, and the two routes against each other
    for (k, (a, b)) in [(0.5, 0.5), (1.0, 1.0), (2.0, 0.1), (1.0, 2.0)].into_iter().enumerate() {
        // upper tail through the mirrored Beta, which keeps 1/(1+w) exact for huge w
        let bp = Beta::new(b, a).unwrap();
        let cdf = |w: f64| bp.sf(1.0 / (1.0 + w));
        let h = draws(n, 30 + 2 * k as u64, |r| sample_beta_prime(a, b, r).unwrap());
        let d = draws(n, 31 + 2 * k as u64, |r| sample_beta_prime_via_beta(a, b, r).unwrap());
        out.push(Check::below(format!("beta-prime({a},{b}) hierarchical KS"), ks_censored(&h, cdf, f64::MIN_POSITIVE), KS_LIMIT));
        out.push(Check::below(format!("beta-prime({a},{b}) direct KS"), ks_statistic(&d, cdf), KS_LIMIT));
        if k < 3 {
            out.push(Check::below(format!("beta-prime({a},{b}) two-sample KS"), ks_two_sample(&h, &d), KS_LIMIT));
        }
    }

    // product phi_j omega with omega ~ Ga(p a_pi, xi), phi ~ Dir(a_pi): iid Ga(a_pi, xi)
    let (p, a_pi, xi) = (5usize, 0.3, 1.7);
    let mut rng = RngStream::new(20_240_601, 40);
    let mut t1 = Vec::with_capacity(n);
    let mut t2 = Vec::with_capacity(n);
    for _ in 0..n {
        let w = sample_gamma(p as f64 * a_pi, xi, &mut rng).unwrap();
        let phi = sample_dirichlet(&vec![a_pi; p], &mut rng).unwrap();
        t1.push(phi[0] * w);
        t2.push(phi[1] * w);
    }
    let gx = Gamma::new(a_pi, xi).unwrap();
    out.push(Check::below("phi*omega vs Ga(a_pi, xi) KS", ks_censored(&t1, |x| gx.cdf(x), f64::MIN_POSITIVE), KS_LIMIT));
    let r = correlation(&t1, &t2);
    out.push(Check::below("phi_1 omega, phi_2 omega |correlation|", r.abs(), 4.0 / (n as f64).sqrt()));
    out
}
