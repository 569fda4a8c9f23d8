mod common;

use shrinkage::diagnostics::{geweke_test, GewekeConfig};
use shrinkage::priors::{HsParams, PriorSpec};

#[test]
fn marginal_and_successive_simulators_agree() {
    let checks = common::gibbs::geweke_checks(&GewekeConfig::default());
    for c in &checks {
        println!("{c}");
    }
    common::assert_all(&checks);
}

#[test]
fn geweke_is_reproducible() {
    let cfg = GewekeConfig {
        cycles: 2_000,
        batches: 20,
        ..Default::default()
    };
    let pr = PriorSpec::HsPlus(HsParams::default());
    assert_eq!(geweke_test(&pr, &cfg).unwrap(), geweke_test(&pr, &cfg).unwrap());
}

#[test]
fn frozen_latents_give_the_conjugate_posterior() {
    common::assert_all(&common::gibbs::conjugate_checks());
}
