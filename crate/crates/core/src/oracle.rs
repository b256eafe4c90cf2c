//! Definitional correlation measures for arbitrary two-qubit states.
//!
//! Nothing here knows about the dimer: every quantity is computed from the
//! density matrix by explicit measurement and optimisation over axes, which
//! is what makes these functions usable as ground truth for the closed forms.

use nalgebra::{Matrix2, SymmetricEigen};

use crate::density::{
    apply_measurement, bloch_decompose, eigenvalues_2x2, hs_norm_sq, partial_trace, DensityMatrix4, MeasurementAxis, Party,
    QubitState2, C64,
};
use crate::error::{Error, Result};
use crate::optimize::{optimize_axis, Goal, OptimizerConfig, OracleResult};

/// Reduced-state eigenvalue gaps at or below this count as degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;
/// Agreement expected between the two geometric-discord paths.
pub const GQD_PATH_AGREEMENT: f64 = 1e-6;
/// Disagreement beyond this is treated as a bug rather than optimiser slack.
pub const GQD_PATH_FAILURE: f64 = 1e-4;

const ZERO_PROBABILITY: f64 = 1e-14;

fn bits(eigenvalues: [f64; 2]) -> f64 {
    eigenvalues
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

/// `Σ_k p_k S(ρ_other|k)` for a measurement along `axis` on `measured`.
///
/// Zero-probability outcomes contribute nothing.
pub fn conditional_entropy(rho: &DensityMatrix4, axis: &MeasurementAxis, measured: Party) -> f64 {
    let m = rho.matrix();
    axis.projectors()
        .iter()
        .map(|proj| {
            // Unnormalised conditional state Tr_measured[(Π ⊗ I) ρ], using cyclicity.
            let sigma = match measured {
                Party::N => Matrix2::from_fn(|i, j| {
                    (0..2)
                        .flat_map(|a| (0..2).map(move |b| (a, b)))
                        .map(|(a, b)| m[(2 * i + a, 2 * j + b)] * proj[(b, a)])
                        .sum::<C64>()
                }),
                Party::M => Matrix2::from_fn(|a, b| {
                    (0..2)
                        .flat_map(|i| (0..2).map(move |j| (i, j)))
                        .map(|(i, j)| m[(2 * i + a, 2 * j + b)] * proj[(j, i)])
                        .sum::<C64>()
                }),
            };
            let p = sigma.trace().re;
            if p < ZERO_PROBABILITY {
                return 0.0;
            }
            let normalised = QubitState2::from_channel_output(sigma.unscale(p));
            p * bits(normalised.eigenvalues())
        })
        .sum()
}

/// Minimum over measurement axes on `measured` of [`conditional_entropy`].
pub fn conditional_entropy_min(rho: &DensityMatrix4, measured: Party, cfg: &OptimizerConfig) -> OracleResult {
    optimize_axis(|axis| conditional_entropy(rho, axis, measured), cfg, Goal::Minimize)
}

fn reduced_entropy(rho: &DensityMatrix4, party: Party) -> Result<f64> {
    let reduced = partial_trace(rho, party);
    Ok(bits(eigenvalues_2x2(reduced.matrix())?))
}

/// Quantum discord with the measurement on `measured`:
/// `I(ρ) − [S(ρ_other) − min Σ p_k S(ρ_other|k)]`.
///
/// The reported `axis`, `grid_value` and `evaluations` are those of the
/// conditional-entropy search, with `grid_value` shifted to discord units.
pub fn qd_oracle_on(rho: &DensityMatrix4, measured: Party, cfg: &OptimizerConfig) -> Result<OracleResult> {
    let s_m = reduced_entropy(rho, Party::M)?;
    let s_n = reduced_entropy(rho, Party::N)?;
    let s_joint = rho.entropy()?;
    let mutual = s_m + s_n - s_joint;
    let s_other = match measured {
        Party::N => s_m,
        Party::M => s_n,
    };
    let inner = conditional_entropy_min(rho, measured, cfg);
    let discord = |cond: f64| mutual - (s_other - cond);
    Ok(OracleResult {
        value: discord(inner.value),
        grid_value: discord(inner.grid_value),
        ..inner
    })
}

/// Quantum discord with the measurement on party N.
pub fn qd_oracle(rho: &DensityMatrix4, cfg: &OptimizerConfig) -> Result<OracleResult> {
    qd_oracle_on(rho, Party::N, cfg)
}

/// Geometric discord (measurement on M) from the Bloch data:
/// `¼(‖x‖² + ‖T‖² − k_max)` with `k_max` the top eigenvalue of `x xᵀ + T Tᵀ`.
pub fn gqd_eigen_form(rho: &DensityMatrix4) -> f64 {
    let bloch = bloch_decompose(rho);
    let k_max = SymmetricEigen::new(bloch.discord_matrix()).eigenvalues.max();
    0.25 * (bloch.x.norm_squared() + bloch.t.norm_squared() - k_max)
}

/// Geometric discord as `min_axis ‖ρ − Π_M(ρ)‖²`.
pub fn gqd_measurement_form(rho: &DensityMatrix4, cfg: &OptimizerConfig) -> OracleResult {
    optimize_axis(
        |axis| hs_norm_sq(&(rho.matrix() - apply_measurement(rho, axis, Party::M).matrix())),
        cfg,
        Goal::Minimize,
    )
}

/// Both geometric-discord paths side by side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GqdOracle {
    pub eigen_form: f64,
    pub measurement: OracleResult,
}

impl GqdOracle {
    pub fn path_delta(&self) -> f64 {
        (self.eigen_form - self.measurement.value).abs()
    }
}

pub fn gqd_oracle_detailed(rho: &DensityMatrix4, cfg: &OptimizerConfig) -> Result<GqdOracle> {
    let out = GqdOracle {
        eigen_form: gqd_eigen_form(rho),
        measurement: gqd_measurement_form(rho, cfg),
    };
    let delta = out.path_delta();
    if delta > GQD_PATH_FAILURE {
        return Err(Error::OracleDisagreement {
            eigen: out.eigen_form,
            measured: out.measurement.value,
        });
    }
    if delta > GQD_PATH_AGREEMENT {
        log::warn!("geometric discord paths differ by {delta:e}");
    }
    Ok(out)
}

/// Geometric discord, cross-checked against the measurement form with the
/// default optimiser.
pub fn gqd_oracle(rho: &DensityMatrix4) -> Result<f64> {
    Ok(gqd_oracle_detailed(rho, &OptimizerConfig::default())?.eigen_form)
}

/// Which admissible set of measurements the MIN optimisation ran over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinBranch {
    /// Non-degenerate reduced state: only its eigenbasis leaves it invariant.
    Eigenbasis,
    /// Degenerate reduced state: every axis is admissible.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinOracle {
    pub result: OracleResult,
    pub branch: MinBranch,
}

/// Measurement-induced nonlocality: the largest `‖ρ − Π(ρ)‖²` over local
/// von Neumann measurements on `measured` that leave its reduced state
/// unchanged.
pub fn min_oracle(rho: &DensityMatrix4, measured: Party, cfg: &OptimizerConfig, degeneracy_tol: f64) -> MinOracle {
    let disturbance = |axis: &MeasurementAxis| hs_norm_sq(&(rho.matrix() - apply_measurement(rho, axis, measured).matrix()));
    let reduced = partial_trace(rho, measured);
    let [hi, lo] = reduced.eigenvalues();
    let eigen_axis = if hi - lo > degeneracy_tol {
        MeasurementAxis::from_vector(&reduced.bloch_vector())
    } else {
        None
    };
    match eigen_axis {
        Some(axis) => {
            let value = disturbance(&axis);
            MinOracle {
                result: OracleResult {
                    value,
                    axis,
                    grid_value: value,
                    evaluations: 1,
                },
                branch: MinBranch::Eigenbasis,
            }
        }
        None => MinOracle {
            result: optimize_axis(disturbance, cfg, Goal::Maximize),
            branch: MinBranch::Degenerate,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use approx::assert_abs_diff_eq;

    fn bell_mixture(w: f64) -> DensityMatrix4 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix4::from_pure(&[C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)]).unwrap();
        DensityMatrix4::new(bell.matrix().scale(w) + DensityMatrix4::maximally_mixed().matrix().scale(1.0 - w)).unwrap()
    }

    #[test]
    fn maximally_mixed_has_one_bit_conditional_entropy() {
        let id = DensityMatrix4::maximally_mixed();
        for party in [Party::M, Party::N] {
            let r = conditional_entropy_min(&id, party, &OptimizerConfig::default());
            assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(qd_oracle(&id, &OptimizerConfig::default()).unwrap().value, 0.0, epsilon = 1e-12);
        assert_eq!(gqd_oracle(&id).unwrap(), 0.0);
    }

    #[test]
    fn werner_state_discord_matches_known_form() {
        // Werner states: GQD = w²/2, QD has a known closed form in terms of w.
        let w = 0.6f64;
        let rho = bell_mixture(w);
        assert_abs_diff_eq!(gqd_oracle(&rho).unwrap(), w * w / 2.0, epsilon = 1e-12);
        let qd = qd_oracle(&rho, &OptimizerConfig::default()).unwrap().value;
        let expected = 0.25 * (1.0 - w) * (1.0 - w).log2() - 0.5 * (1.0 + w) * (1.0 + w).log2()
            + 0.25 * (1.0 + 3.0 * w) * (1.0 + 3.0 * w).log2();
        assert_abs_diff_eq!(qd, expected, epsilon = 1e-9);
    }

    #[test]
    fn min_on_bell_mixture_uses_degenerate_branch() {
        let w = 0.6f64;
        let r = min_oracle(&bell_mixture(w), Party::M, &OptimizerConfig::default(), DEFAULT_DEGENERACY_TOL);
        assert_eq!(r.branch, MinBranch::Degenerate);
        // T = diag(w, −w, w): ¼(‖T‖² − min t²) = w²/2
        assert_abs_diff_eq!(r.result.value, w * w / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn product_state_has_no_discord() {
        let a = QubitState2::from_bloch(&nalgebra::Vector3::new(0.2, -0.3, 0.5)).unwrap();
        let b = QubitState2::from_bloch(&nalgebra::Vector3::new(-0.6, 0.1, 0.1)).unwrap();
        let rho = DensityMatrix4::product(&a, &b);
        assert!(qd_oracle(&rho, &OptimizerConfig::default()).unwrap().value.abs() < 1e-6);
        assert!(gqd_oracle(&rho).unwrap().abs() < 1e-12);
        let m = min_oracle(&rho, Party::M, &OptimizerConfig::default(), DEFAULT_DEGENERACY_TOL);
        assert_eq!(m.branch, MinBranch::Eigenbasis);
        assert!(m.result.value < 1e-15);
    }
}
