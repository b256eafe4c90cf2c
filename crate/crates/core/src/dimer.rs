//! The NMR dimer: two dipolar-coupled spin-1/2 nuclei in the preparation
//! period of a multiple-quantum experiment.
//!
//! The state is built two ways. [`build_density`] writes down the X-matrix
//! from its five scalars; [`evolve`] runs the thermal state through the
//! double-quantum Hamiltonian. Both land on the same matrix (up to the phase
//! of the coherence), which is what the cross-checks rely on.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};

use crate::density::{hermiticity_violation, DensityMatrix4, C64, HERMITIAN_TOL, X_BLOCK_TOL};
use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Dimensionless model inputs: inverse temperature `β` and time factor
/// `ε = |cos ητ|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimerParams {
    beta: f64,
    epsilon: f64,
}

impl DimerParams {
    pub fn new(beta: f64, epsilon: f64) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {beta}")));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in [0, 1], got {epsilon}")));
        }
        Ok(DimerParams { beta, epsilon })
    }

    /// `ε = |cos(ητ)|` for a coupling `eta` (rad/s) and time `tau` (s).
    pub fn from_time(beta: f64, eta: f64, tau: f64) -> Result<Self> {
        DimerParams::new(beta, (eta * tau).cos().abs().min(1.0))
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `z = 2(1 + cosh β)`.
    pub fn partition(&self) -> f64 {
        partition(self.beta)
    }
}

fn partition(beta: f64) -> f64 {
    2.0 * (1.0 + beta.cosh())
}

/// Laboratory parameters of the dimer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Gyromagnetic ratio, rad·s⁻¹·T⁻¹.
    pub gamma: f64,
    /// Inter-spin distance, m.
    pub r12: f64,
    /// Angle between the external field and the inter-spin vector, rad.
    pub alpha12: f64,
    /// External field magnitude, T.
    pub h0: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Preparation time, s.
    pub tau: f64,
}

impl PhysicalParams {
    /// Dipolar coupling `η = (γħ/R³)(1 − 3cos²α)`.
    pub fn coupling(&self) -> f64 {
        let c = self.alpha12.cos();
        self.gamma * HBAR / self.r12.powi(3) * (1.0 - 3.0 * c * c)
    }

    /// Larmor frequency `ω = γ|H₀|`.
    pub fn larmor(&self) -> f64 {
        self.gamma * self.h0.abs()
    }
}

/// `β = ħω/(kT)` and `ε = |cos ητ|` from laboratory parameters.
pub fn derive_dimer_params(p: &PhysicalParams) -> Result<DimerParams> {
    if !(p.r12 > 0.0) || !(p.temperature > 0.0) || !(p.tau >= 0.0) {
        return Err(Error::InvalidParameter(
            "physical parameters need r12 > 0, temperature > 0 and tau >= 0".into(),
        ));
    }
    let beta = HBAR * p.larmor() / (BOLTZMANN * p.temperature);
    DimerParams::from_time(beta, p.coupling(), p.tau)
}

/// The five scalars of the dimer X-state plus its normalisation.
///
/// The coherence sits at entry (1,4) as `i·e_mag` and at (4,1) as `−i·e_mag`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e_mag: f64,
    pub z: f64,
}

impl XStateParams {
    /// Populations at a signed rotation angle `ητ`, keeping the sign of
    /// `cos ητ` (so `a` and `d` swap when the cosine is negative).
    pub fn at_time(beta: f64, eta_tau: f64) -> Self {
        let (s, c) = eta_tau.sin_cos();
        Self::from_cos_sin(beta, c, s.abs())
    }

    fn from_cos_sin(beta: f64, cos: f64, sin_abs: f64) -> Self {
        let z = partition(beta);
        let (sh, ch) = (beta.sinh(), beta.cosh());
        XStateParams {
            a: (ch + cos * sh) / z,
            b: 1.0 / z,
            c: 1.0 / z,
            d: (ch - cos * sh) / z,
            e_mag: sin_abs * sh / z,
            z,
        }
    }

    /// `a·d − |e|²`, the determinant of the outer block.
    pub fn outer_determinant(&self) -> f64 {
        self.a * self.d - self.e_mag * self.e_mag
    }
}

/// X-state scalars for the given `(β, ε)`; `|sin ητ| = √(1 − ε²)`.
pub fn xstate_params(params: &DimerParams) -> XStateParams {
    let eps = params.epsilon;
    XStateParams::from_cos_sin(params.beta, eps, (1.0 - eps * eps).max(0.0).sqrt())
}

/// The dimer density matrix with populations `a, b, c, d` and coherence `i·e_mag`.
pub fn build_density(xp: &XStateParams) -> Result<DensityMatrix4> {
    let det = xp.outer_determinant();
    if det < -1e-12 {
        return Err(Error::NotPositive(det));
    }
    let mut m = Matrix4::from_diagonal(&Vector4::new(xp.a, xp.b, xp.c, xp.d).map(|v| C64::new(v, 0.0)));
    m[(0, 3)] = C64::new(0.0, xp.e_mag);
    m[(3, 0)] = m[(0, 3)].conj();
    DensityMatrix4::new(m)
}

/// Total `J_z = J_{1z} + J_{2z}` in units where its spectrum is `(1, 0, 0, −1)`.
pub fn total_jz() -> Matrix4<C64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, 0.0, 0.0, -1.0).map(|v| C64::new(v, 0.0)))
}

/// Equilibrium state `e^{βJ_z} / Tr e^{βJ_z}`.
pub fn thermal_state(beta: f64) -> Result<DensityMatrix4> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {beta}")));
    }
    let z = partition(beta);
    let diag = Vector4::new(beta.exp(), 1.0, 1.0, (-beta).exp()) / z;
    DensityMatrix4::new(Matrix4::from_diagonal(&diag.map(|v| C64::new(v, 0.0))))
}

/// Double-quantum Hamiltonian `(η/2)(J⁺₁J⁺₂ + J⁻₁J⁻₂)`: couples only `|00⟩` and `|11⟩`.
pub fn hamiltonian_mq(eta: f64) -> Matrix4<C64> {
    let mut h = Matrix4::zeros();
    h[(0, 3)] = C64::new(0.5 * eta, 0.0);
    h[(3, 0)] = C64::new(0.5 * eta, 0.0);
    h
}

fn is_double_quantum(h: &Matrix4<C64>) -> bool {
    (0..4).all(|i| (0..4).all(|j| matches!((i, j), (0, 3) | (3, 0)) || h[(i, j)].norm() < X_BLOCK_TOL))
}

fn propagator(h: &Matrix4<C64>, tau: f64) -> Matrix4<C64> {
    if is_double_quantum(h) {
        // On the {|00>,|11>} block H² = |g|² I, so exp(−iHτ) = cos(|g|τ) − i sin(|g|τ) H/|g|.
        let g = h[(0, 3)];
        let w = g.norm();
        let mut u = Matrix4::identity();
        if w > 0.0 {
            let (s, c) = (w * tau).sin_cos();
            let block = Matrix2::new(C64::new(c, 0.0), g * C64::new(0.0, -s / w), g.conj() * C64::new(0.0, -s / w), C64::new(c, 0.0));
            u[(0, 0)] = block[(0, 0)];
            u[(0, 3)] = block[(0, 1)];
            u[(3, 0)] = block[(1, 0)];
            u[(3, 3)] = block[(1, 1)];
        }
        u
    } else {
        let eig = SymmetricEigen::new((h + h.adjoint()).scale(0.5));
        let phases = Matrix4::from_diagonal(&eig.eigenvalues.map(|l| C64::new(0.0, -l * tau).exp()));
        eig.eigenvectors * phases * eig.eigenvectors.adjoint()
    }
}

/// `U ρ₀ U†` with `U = exp(−iHτ)`.
pub fn evolve(rho0: &DensityMatrix4, h: &Matrix4<C64>, tau: f64) -> Result<DensityMatrix4> {
    let v = hermiticity_violation(h);
    if v > HERMITIAN_TOL {
        return Err(Error::NotHermitian(v));
    }
    let u = propagator(h, tau);
    Ok(DensityMatrix4::from_channel_output(u * rho0.matrix() * u.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::hs_norm_sq;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parameter_validation() {
        assert!(DimerParams::new(-0.1, 0.5).is_err());
        assert!(DimerParams::new(1.0, 1.01).is_err());
        assert!(DimerParams::new(1.0, f64::NAN).is_err());
        assert!(DimerParams::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        for eps in [0.0, 0.4, 1.0] {
            let xp = xstate_params(&DimerParams::new(0.0, eps).unwrap());
            for v in [xp.a, xp.b, xp.c, xp.d] {
                assert_abs_diff_eq!(v, 0.25, epsilon = 1e-15);
            }
            assert_eq!(xp.e_mag, 0.0);
            let rho = build_density(&xp).unwrap();
            assert!(hs_norm_sq(&(rho.matrix() - DensityMatrix4::maximally_mixed().matrix())) < 1e-30);
        }
    }

    #[test]
    fn epsilon_one_has_no_coherence() {
        let xp = xstate_params(&DimerParams::new(1.0, 1.0).unwrap());
        assert_eq!(xp.e_mag, 0.0);
        assert_abs_diff_eq!(xp.a, 1f64.exp() / xp.z, epsilon = 1e-15);
        assert_abs_diff_eq!(xp.d, (-1f64).exp() / xp.z, epsilon = 1e-15);
    }

    #[test]
    fn reference_point_beta1_eps_half() {
        // Frozen from a direct evaluation in double precision.
        let xp = xstate_params(&DimerParams::new(1.0, 0.5).unwrap());
        assert_abs_diff_eq!(xp.z, 5.086_161_269_630_487, epsilon = 1e-14);
        assert_abs_diff_eq!(xp.a, 0.418_917_356_073_520_5, epsilon = 1e-14);
        assert_abs_diff_eq!(xp.d, 0.187_858_777_443_515_7, epsilon = 1e-14);
        assert_abs_diff_eq!(xp.b, 0.196_611_933_241_481_85, epsilon = 1e-14);
        assert_abs_diff_eq!(xp.e_mag, 0.200_102_598_855_908_42, epsilon = 1e-14);
    }

    #[test]
    fn coherence_pythagorean_identity() {
        for beta in [0.3, 1.0, 4.0] {
            for eps in [0.0, 0.35, 0.8, 1.0] {
                let xp = xstate_params(&DimerParams::new(beta, eps).unwrap());
                let lhs = xp.e_mag.powi(2) + (eps * beta.sinh() / xp.z).powi(2);
                assert_abs_diff_eq!(lhs, (beta.sinh() / xp.z).powi(2), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn psd_violation_rejected() {
        let xp = XStateParams { a: 0.25, b: 0.25, c: 0.25, d: 0.25, e_mag: 0.3, z: 4.0 };
        assert!(matches!(build_density(&xp), Err(Error::NotPositive(_))));
    }

    #[test]
    fn thermal_state_values() {
        let rho = thermal_state(1.0).unwrap();
        let z = 5.086_161_269_630_487;
        assert_abs_diff_eq!(rho.entry(0, 0).re, std::f64::consts::E / z, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(3, 3).re, 0.367_879_441_171_442_33 / z, epsilon = 1e-15);
        // e^7 / (e^7 + 2 + e^-7): dominant but still short of 0.999.
        assert_abs_diff_eq!(thermal_state(7.0).unwrap().entry(0, 0).re, 0.998_178_727_625_477_5, epsilon = 1e-15);
        assert!(thermal_state(-1.0).is_err());
    }

    #[test]
    fn hamiltonian_structure() {
        assert_eq!(hamiltonian_mq(0.0), Matrix4::zeros());
        let h = hamiltonian_mq(2.0);
        assert_eq!(h[(0, 3)], C64::new(1.0, 0.0));
        assert_eq!(h[(3, 0)], C64::new(1.0, 0.0));
        assert_eq!(hs_norm_sq(&h), 2.0);
        let jz = total_jz();
        let rho0 = thermal_state(1.0).unwrap().into_matrix();
        assert!(hs_norm_sq(&(h * jz - jz * h)) > 1.0);
        assert!(hs_norm_sq(&(h * rho0 - rho0 * h)) > 1e-3);
    }

    #[test]
    fn evolution_at_zero_time_is_identity() {
        let rho0 = thermal_state(2.0).unwrap();
        let out = evolve(&rho0, &hamiltonian_mq(3.0), 0.0).unwrap();
        assert!(hs_norm_sq(&(out.matrix() - rho0.matrix())) < 1e-32);
    }

    #[test]
    fn evolved_coherence_carries_positive_imaginary_part() {
        // With U = exp(−iHτ) the (1,4) entry is +i sin(ητ) sinh β / z.
        let (beta, eta, tau) = (1.3, 2.0, 0.4);
        let out = evolve(&thermal_state(beta).unwrap(), &hamiltonian_mq(eta), tau).unwrap();
        let expected = (eta * tau).sin() * beta.sinh() / partition(beta);
        assert_abs_diff_eq!(out.entry(0, 3).re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.entry(0, 3).im, expected, epsilon = 1e-15);
    }

    #[test]
    fn generic_propagator_matches_block_rotation() {
        let rho0 = thermal_state(0.9).unwrap();
        let mut h = hamiltonian_mq(1.7);
        let block = evolve(&rho0, &h, 0.8).unwrap();
        // A diagonal term on |01> forces the dense path without changing the
        // result, since ρ₀ is diagonal there.
        h[(1, 1)] = C64::new(0.5, 0.0);
        let dense = evolve(&rho0, &h, 0.8).unwrap();
        assert!(hs_norm_sq(&(block.matrix() - dense.matrix())) < 1e-16);
        assert!(evolve(&rho0, &Matrix4::from_element(C64::new(0.0, 1.0)), 1.0).is_err());
    }

    #[test]
    fn physical_parameter_scaling() {
        let p = PhysicalParams {
            gamma: 2.675_221_87e8,
            r12: 2.0e-10,
            alpha12: 0.0,
            h0: 9.4,
            temperature: 300.0,
            tau: 1e-4,
        };
        let far = PhysicalParams { r12: 4.0e-10, ..p };
        assert_abs_diff_eq!(p.coupling() / far.coupling(), 8.0, epsilon = 1e-12);
        let magic = PhysicalParams { alpha12: (1.0 / 3f64.sqrt()).acos(), ..p };
        assert_abs_diff_eq!(derive_dimer_params(&magic).unwrap().epsilon(), 1.0, epsilon = 1e-15);
        let start = PhysicalParams { tau: 0.0, ..p };
        assert_eq!(derive_dimer_params(&start).unwrap().epsilon(), 1.0);
        let dp = derive_dimer_params(&p).unwrap();
        assert_abs_diff_eq!(dp.beta(), HBAR * p.gamma * 9.4 / (BOLTZMANN * 300.0), epsilon = 1e-18);
        assert!(derive_dimer_params(&PhysicalParams { temperature: 0.0, ..p }).is_err());
    }
}
