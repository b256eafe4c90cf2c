use crate::closed::{gqd_closed, min_closed, qd_single_expression, qd_closed};
use crate::density::Party;
use crate::dimer::{build_density, xstate_params, DimerParams};
use crate::error::Result;
use crate::optimize::{OptimizerConfig, OracleResult};
use crate::oracle::{gqd_eigen_form, gqd_measurement_form, min_oracle, qd_oracle, MinOracle};

/// Closed-form and oracle values of all three measures at one `(β, ε)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationReport {
    pub params: DimerParams,
    pub qd_closed: f64,
    /// The single-expression discord, kept for comparison only.
    pub qd_single_expression: f64,
    pub qd_oracle: OracleResult,
    pub gqd_closed: f64,
    pub gqd_oracle: f64,
    /// The measurement-minimisation path of the geometric discord.
    pub gqd_measurement: OracleResult,
    pub min_closed: f64,
    pub min_oracle: MinOracle,
    /// `2|e|²`, the disturbance of the eigenbasis pinching.
    pub min_pinching: f64,
}

impl CorrelationReport {
    /// Evaluates every route. Unlike `oracle::gqd_oracle_detailed`, a
    /// disagreement between the two geometric-discord paths is recorded
    /// rather than raised, so callers can report its size.
    pub fn compute(params: &DimerParams, cfg: &OptimizerConfig, degeneracy_tol: f64) -> Result<Self> {
        let xp = xstate_params(params);
        let rho = build_density(&xp)?;
        Ok(CorrelationReport {
            params: *params,
            qd_closed: qd_closed(params)?,
            qd_single_expression: qd_single_expression(params),
            qd_oracle: qd_oracle(&rho, cfg)?,
            gqd_closed: gqd_closed(&xp),
            gqd_oracle: gqd_eigen_form(&rho),
            gqd_measurement: gqd_measurement_form(&rho, cfg),
            min_closed: min_closed(&xp),
            min_oracle: min_oracle(&rho, Party::M, cfg, degeneracy_tol),
            min_pinching: 2.0 * xp.e_mag * xp.e_mag,
        })
    }

    pub fn delta_qd(&self) -> f64 {
        (self.qd_closed - self.qd_oracle.value).abs()
    }

    pub fn delta_gqd(&self) -> f64 {
        (self.gqd_closed - self.gqd_oracle).abs()
    }

    pub fn delta_min(&self) -> f64 {
        (self.min_closed - self.min_oracle.result.value).abs()
    }
}
