//! Closed-form correlation measures for the dimer family.
//!
//! Discord is assembled piece by piece (mutual information, reduced
//! entropies, the `Ξ(κ)` conditional entropy) instead of through a single
//! collapsed formula, so each piece can be checked against the
//! density-matrix computation on its own. The `*_single_expression`
//! functions keep the collapsed forms around as diagnostics; they differ in
//! sign structure from the definitional quantities.

use std::f64::consts::LN_2;

use crate::dimer::{xstate_params, DimerParams, XStateParams};
use crate::error::{Error, Result};

/// Number of points in the `κ ∈ [0, 1]` scan.
pub const KAPPA_GRID_POINTS: usize = 101;
/// `Ξ(0) − min_grid Ξ` beyond this means κ = 0 is not the minimiser.
pub const KAPPA_CLAIM_TOL: f64 = 1e-6;
/// Negative results down to `−CLAMP_WINDOW` are rounding noise and clamp to zero.
pub const CLAMP_WINDOW: f64 = 1e-6;

const BLOCH_SLACK: f64 = 1e-9;

/// Shannon entropy in bits of the distribution `(p, 1 − p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    [p, 1.0 - p]
        .into_iter()
        .filter(|&q| q > 0.0)
        .map(|q| -q * q.log2())
        .sum()
}

/// Entropy of a qubit whose Bloch vector has length `r`.
pub fn bloch_entropy(r: f64) -> f64 {
    binary_entropy(0.5 * (1.0 + r))
}

pub(crate) fn clamp_nonnegative(quantity: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLAMP_WINDOW {
        if value < -1e-12 {
            log::warn!("{quantity} = {value:e} clamped to 0");
        }
        Ok(0.0)
    } else {
        Err(Error::NegativeMeasure { quantity, value })
    }
}

/// Closed-form spectrum `{e^β, 1, 1, e^{−β}}/z`, descending.
pub fn spectrum_closed(beta: f64) -> [f64; 4] {
    let z = 2.0 * (1.0 + beta.cosh());
    [beta.exp() / z, 1.0 / z, 1.0 / z, (-beta).exp() / z]
}

/// `S(ρ)` from the closed-form spectrum.
pub fn joint_entropy_closed(beta: f64) -> f64 {
    spectrum_closed(beta)
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

/// `S(ρ^M) = h(a + b)`; equal to `S(ρ^N) = h(a + c)` since `b = c`.
pub fn reduced_entropy_closed(params: &DimerParams) -> f64 {
    let xp = xstate_params(params);
    binary_entropy(xp.a + xp.b)
}

/// The reduced entropy collapsed into one logarithmic expression:
///
/// `(1/2ln2) ln[((z/2)² − ε²sinh²β)/z²] − (ε sinh β/(z ln2)) ln[((z/2) + ε sinh β)/((z/2) − ε sinh β)]`.
///
/// It evaluates to −1 at β = 0, the negative of the true entropy.
pub fn reduced_entropy_single_expression(params: &DimerParams) -> f64 {
    let z = params.partition();
    let es = params.epsilon() * params.beta().sinh();
    let half = 0.5 * z;
    (((half * half - es * es) / (z * z)).ln()) / (2.0 * LN_2) - es / (z * LN_2) * ((half + es) / (half - es)).ln()
}

/// Terms of the averaged conditional entropy `Ξ(κ) = p₀f₀ + p₁f₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiComponents {
    pub kappa: f64,
    pub p0: f64,
    pub p1: f64,
    pub phi0: f64,
    pub phi1: f64,
    pub f0: f64,
    pub f1: f64,
    pub xi: f64,
}

/// Conditional entropy of party M after a projective measurement on N whose
/// axis makes `cos θ = κ` with the z axis.
pub fn xi(kappa: f64, params: &DimerParams) -> Result<XiComponents> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::InvalidParameter(format!("kappa must lie in [0, 1], got {kappa}")));
    }
    let xp = xstate_params(params);
    let e2 = xp.e_mag * xp.e_mag;
    let pop_bias = 2.0 * (xp.a + xp.c) - 1.0;
    let m_bias = 2.0 * (xp.a + xp.b) - 1.0;
    let corr = 1.0 - 2.0 * (xp.b + xp.c);

    let branch = |sign: f64| -> Result<(f64, f64, f64)> {
        let p = 0.5 * (1.0 + sign * kappa * pop_bias);
        if p < 1e-14 {
            return Ok((p, 0.0, 0.0));
        }
        let inner = (1.0 - kappa * kappa) * e2 + 0.25 * (m_bias + sign * kappa * corr).powi(2);
        let phi = inner.sqrt() / p;
        if phi > 1.0 + BLOCH_SLACK {
            return Err(Error::BlochLengthOutOfRange { kappa, value: phi });
        }
        let phi = phi.min(1.0);
        Ok((p, phi, bloch_entropy(phi)))
    };
    let (p0, phi0, f0) = branch(1.0)?;
    let (p1, phi1, f1) = branch(-1.0)?;
    Ok(XiComponents {
        kappa,
        p0,
        p1,
        phi0,
        phi1,
        f0,
        f1,
        xi: p0 * f0 + p1 * f1,
    })
}

/// `Ξ(0, β) = (1/2ln2)[ln(z/4) + φ₀ ln((1 − φ₀)/(1 + φ₀))] + 1` with
/// `φ₀ = √((cosh β − 1)/(cosh β + 1))`.
pub fn xi_at_zero(beta: f64) -> f64 {
    let ch = beta.cosh();
    let phi0 = ((ch - 1.0) / (ch + 1.0)).sqrt();
    if phi0 >= 1.0 {
        // β beyond ~37: the conditional state is pure to double precision.
        return 0.0;
    }
    let z = 2.0 * (1.0 + ch);
    ((z / 4.0).ln() + phi0 * ((-phi0).ln_1p() - phi0.ln_1p())) / (2.0 * LN_2) + 1.0
}

/// Outcome of scanning `Ξ(κ)` over an evenly spaced `κ` grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KappaScan {
    pub at_zero: f64,
    pub minimum: f64,
    pub argmin: f64,
}

impl KappaScan {
    /// How far `Ξ(0)` sits above the grid minimum.
    pub fn excess(&self) -> f64 {
        self.at_zero - self.minimum
    }
}

pub fn kappa_scan(params: &DimerParams, points: usize) -> Result<KappaScan> {
    let points = points.max(2);
    let at_zero = xi_at_zero(params.beta());
    let mut minimum = f64::INFINITY;
    let mut argmin = 0.0;
    for i in 0..points {
        let kappa = i as f64 / (points - 1) as f64;
        let v = xi(kappa, params)?.xi;
        if v < minimum {
            minimum = v;
            argmin = kappa;
        }
    }
    Ok(KappaScan { at_zero, minimum, argmin })
}

/// Minimum of `Ξ` over `κ`, taken at `κ = 0`.
///
/// The κ grid is scanned as well; if some κ beats `κ = 0` by more than
/// [`KAPPA_CLAIM_TOL`] the point is reported as an error instead of
/// returning a value that is not a minimum.
pub fn xi_min(params: &DimerParams) -> Result<f64> {
    let scan = kappa_scan(params, KAPPA_GRID_POINTS)?;
    if scan.excess() > KAPPA_CLAIM_TOL {
        return Err(Error::KappaClaimViolated {
            beta: params.beta(),
            epsilon: params.epsilon(),
            at_zero: scan.at_zero,
            grid_minimum: scan.minimum,
            argmin: scan.argmin,
        });
    }
    Ok(scan.at_zero)
}

/// `C(ρ) = S(ρ^M) − min_κ Ξ`, with measurement on N.
pub fn classical_correlation(params: &DimerParams) -> Result<f64> {
    clamp_nonnegative("classical correlation", reduced_entropy_closed(params) - xi_min(params)?)
}

/// `I(ρ) = S(ρ^M) + S(ρ^N) − S(ρ)`.
pub fn mutual_information(params: &DimerParams) -> f64 {
    let xp = xstate_params(params);
    binary_entropy(xp.a + xp.b) + binary_entropy(xp.a + xp.c) - joint_entropy_closed(params.beta())
}

/// Quantum discord `I(ρ) − C(ρ)` in bits, measurement on N.
pub fn qd_closed(params: &DimerParams) -> Result<f64> {
    clamp_nonnegative("quantum discord", mutual_information(params) - classical_correlation(params)?)
}

/// Discord from the collapsed expression: [`reduced_entropy_single_expression`]
/// plus `Ξ(0, β)`. Kept as a diagnostic only.
pub fn qd_single_expression(params: &DimerParams) -> f64 {
    reduced_entropy_single_expression(params) + xi_at_zero(params.beta())
}

/// `[ξ₁, ξ₂, ξ₃] = [4|e|², 4|e|², 2((a − c)² + (b − d)²)]`: the spectrum of `x xᵀ + T Tᵀ`.
pub fn gqd_eigenvalues(xp: &XStateParams) -> [f64; 3] {
    let e2 = xp.e_mag * xp.e_mag;
    [4.0 * e2, 4.0 * e2, 2.0 * ((xp.a - xp.c).powi(2) + (xp.b - xp.d).powi(2))]
}

/// Geometric discord `¼[8|e|² + ξ₃ − max(ξ₁, ξ₂, ξ₃)]`.
pub fn gqd_closed(xp: &XStateParams) -> f64 {
    let [x1, x2, x3] = gqd_eigenvalues(xp);
    0.25 * (8.0 * xp.e_mag * xp.e_mag + x3 - x1.max(x2).max(x3))
}

/// `Γ = (a − b − c + d)²`.
pub fn gamma(xp: &XStateParams) -> f64 {
    (xp.a - xp.b - xp.c + xp.d).powi(2)
}

/// Measurement-induced nonlocality in the closed form `¼[Γ + 8|e|² − 4 min(Γ/4, |e|²)]`.
///
/// This equals the pinching value `2|e|²` only while `Γ/4 ≤ |e|²`; beyond
/// that it overshoots the definitional value, which [`crate::oracle::min_oracle`]
/// computes.
pub fn min_closed(xp: &XStateParams) -> f64 {
    let g = gamma(xp);
    let e2 = xp.e_mag * xp.e_mag;
    0.25 * (g + 8.0 * e2 - 4.0 * (0.25 * g).min(e2))
}
