mod common;

#[test]
fn every_sampler_matches_its_oracle() {
    let checks = common::samplers::checks(1_000_000);
    for c in &checks {
        println!("{c}");
    }
    common::assert_all(&checks);
}

#[test]
fn quadrature_cdf_oracle_matches_closed_form() {
    // Ga(2, 1): F(x) = 1 - (1 + x) e^{-x}
    let orc = common::LogCdf::new(|x| x.ln() - x, -30.0, 4.0, 300);
    for x in [1e-6, 0.1, 1.0, 2.5, 10.0] {
        let want = 1.0 - (1.0 + x) * (-x as f64).exp();
        assert!((orc.cdf(x) - want).abs() < 1e-6, "{x}: {} vs {want}", orc.cdf(x));
    }
}
