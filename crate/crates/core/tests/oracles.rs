use std::f64::consts::PI;

use dimer_qc::check::{check_mutual_information_with, check_oracle_agreement, run_check, CheckConfig, QD_AGREEMENT};
use dimer_qc::closed::{qd_closed, reduced_entropy_single_expression, reduced_entropy_closed, xi};
use dimer_qc::density::partial_trace;
use dimer_qc::dimer::{build_density, xstate_params};
use dimer_qc::oracle::{conditional_entropy, min_oracle, qd_oracle, qd_oracle_on, MinBranch, DEFAULT_DEGENERACY_TOL};
use dimer_qc::{CorrelationReport, DimerParams, MeasurementAxis, OptimizerConfig, Party};

fn dimer(beta: f64, eps: f64) -> DimerParams {
    DimerParams::new(beta, eps).unwrap()
}

#[test]
fn xi_is_the_conditional_entropy_at_every_polar_angle() {
    for (beta, eps) in [(0.5, 0.0), (2.0, 0.3), (5.0, 0.8), (7.0, 1.0)] {
        let p = dimer(beta, eps);
        let rho = build_density(&xstate_params(&p)).unwrap();
        for k in 0..=10 {
            let theta = k as f64 * PI / 20.0;
            for phi in [0.0, 1.1, 4.0] {
                let axis = MeasurementAxis::new(theta, phi).unwrap();
                let direct = conditional_entropy(&rho, &axis, Party::N);
                let closed = xi(theta.cos(), &p).unwrap().xi;
                assert!((direct - closed).abs() < 1e-12, "beta {beta} eps {eps} theta {theta} phi {phi}");
            }
        }
    }
}

#[test]
fn discord_does_not_depend_on_the_measured_party_for_the_dimer() {
    let cfg = OptimizerConfig::default();
    for (beta, eps) in [(1.0, 0.2), (3.0, 0.6)] {
        let rho = build_density(&xstate_params(&dimer(beta, eps))).unwrap();
        let on_m = qd_oracle_on(&rho, Party::M, &cfg).unwrap().value;
        let on_n = qd_oracle_on(&rho, Party::N, &cfg).unwrap().value;
        assert!((on_m - on_n).abs() < 1e-10);
        let min_m = min_oracle(&rho, Party::M, &cfg, DEFAULT_DEGENERACY_TOL).result.value;
        let min_n = min_oracle(&rho, Party::N, &cfg, DEFAULT_DEGENERACY_TOL).result.value;
        assert!((min_m - min_n).abs() < 1e-12);
    }
}

#[test]
fn reduced_states_of_the_dimer_are_equal() {
    let rho = build_density(&xstate_params(&dimer(2.5, 0.4))).unwrap();
    let diff = partial_trace(&rho, Party::M).matrix() - partial_trace(&rho, Party::N).matrix();
    assert!(diff.norm() < 1e-15);
}

#[test]
fn single_expression_reduced_entropy_is_not_an_entropy() {
    // The single expression evaluates to −1 bit for the maximally mixed state.
    let p = dimer(0.0, 0.5);
    assert!((reduced_entropy_single_expression(&p) + 1.0).abs() < 1e-12);
    assert!((reduced_entropy_closed(&p) - 1.0).abs() < 1e-12);
}

#[test]
fn min_branch_follows_reduced_state_degeneracy() {
    let cfg = OptimizerConfig::default();
    let degenerate = build_density(&xstate_params(&dimer(3.0, 0.0))).unwrap();
    assert_eq!(min_oracle(&degenerate, Party::M, &cfg, DEFAULT_DEGENERACY_TOL).branch, MinBranch::Degenerate);
    let split = build_density(&xstate_params(&dimer(3.0, 0.5))).unwrap();
    assert_eq!(min_oracle(&split, Party::M, &cfg, DEFAULT_DEGENERACY_TOL).branch, MinBranch::Eigenbasis);
}

#[test]
fn report_exposes_closed_form_min_excess() {
    let p = dimer(1.0, 1.0);
    let r = CorrelationReport::compute(&p, &OptimizerConfig::default(), DEFAULT_DEGENERACY_TOL).unwrap();
    assert_eq!(r.min_oracle.result.value, 0.0);
    assert!(r.min_closed > 1e-3);
    assert_eq!(r.delta_min(), r.min_closed - r.min_oracle.result.value);
}

#[test]
fn coarse_grid_without_polish_misses_the_discord_optimum() {
    let coarse = OptimizerConfig {
        grid_theta: 4,
        grid_phi: 8,
        refine_iters: 0,
        ..OptimizerConfig::default()
    };
    let p = dimer(3.0, 0.5);
    let rho = build_density(&xstate_params(&p)).unwrap();
    let delta = (qd_oracle(&rho, &coarse).unwrap().value - qd_closed(&p).unwrap()).abs();
    assert!(delta > QD_AGREEMENT, "delta {delta:e}");

    let cfg = CheckConfig {
        oracle: coarse,
        ..CheckConfig::default()
    };
    let outcomes = check_oracle_agreement(&cfg);
    let qd = outcomes.iter().find(|o| o.name == "closed-vs-oracle-qd").unwrap();
    assert!(!qd.passed);
    assert!(qd.deviation > QD_AGREEMENT);
}

#[test]
fn corrupted_entropy_sign_is_caught() {
    let flipped = |ev: &[f64]| -> dimer_qc::Result<f64> { Ok(ev.iter().filter(|&&l| l > 0.0).map(|&l| l * l.log2()).sum()) };
    let outcome = check_mutual_information_with(flipped);
    assert!(!outcome.passed);
    assert_eq!(outcome.name, "mutual-information-nonnegativity");
}

#[test]
fn full_check_passes() {
    let report = run_check(&CheckConfig::default());
    assert!(report.passed(), "{report}");
}
