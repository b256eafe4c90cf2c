//! Two-qubit density matrices and the small linear algebra they need.
//!
//! The basis order is fixed as `|00⟩, |01⟩, |10⟩, |11⟩`, with party
//! [`Party::M`] (the first spin) as the left tensor factor. Index `r` of a
//! 4×4 matrix therefore splits as `r = 2·m + n`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, SMatrix, SymmetricEigen, Vector3};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Maximum tolerated `|m_ij − conj(m_ji)|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Maximum tolerated `|Tr ρ − 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues down to `−PSD_TOL` count as zero.
pub const PSD_TOL: f64 = 1e-10;
/// Entries off the diagonal and anti-diagonal below this make a matrix an X-matrix.
pub const X_BLOCK_TOL: f64 = 1e-14;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// One of the two spins of the dimer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    /// First spin, left tensor factor.
    M,
    /// Second spin, right tensor factor.
    N,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::M => Party::N,
            Party::N => Party::M,
        }
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "M" | "m" | "A" | "a" | "first" => Ok(Party::M),
            "N" | "n" | "B" | "b" | "second" => Ok(Party::N),
            other => Err(Error::InvalidParty(other.to_string())),
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::M => f.write_str("M"),
            Party::N => f.write_str("N"),
        }
    }
}

/// Pauli matrix `σ_i` for `i ∈ {0, 1, 2}` (x, y, z).
pub fn pauli(i: usize) -> Matrix2<C64> {
    let i_ = C64::new(0.0, 1.0);
    match i {
        0 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        1 => Matrix2::new(ZERO, -i_, i_, ZERO),
        2 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {i} out of range"),
    }
}

/// Tensor product `a ⊗ b` in the fixed basis order.
pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Lifts a single-qubit operator to the two-qubit space, acting on `party`.
pub fn embed(op: &Matrix2<C64>, party: Party) -> Matrix4<C64> {
    match party {
        Party::M => kron(op, &Matrix2::identity()),
        Party::N => kron(&Matrix2::identity(), op),
    }
}

/// Largest `|m_ij − conj(m_ji)|`.
pub fn hermiticity_violation<const D: usize>(m: &SMatrix<C64, D, D>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..D {
        for j in i..D {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitian_part<const D: usize>(m: &SMatrix<C64, D, D>) -> SMatrix<C64, D, D> {
    (m + m.adjoint()).scale(0.5)
}

/// Squared Hilbert–Schmidt norm `Tr(F†F)`, i.e. the sum of `|f_ij|²`.
pub fn hs_norm_sq<const R: usize, const C: usize>(m: &SMatrix<C64, R, C>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

fn eig2_unchecked(m: &Matrix2<C64>) -> [f64; 2] {
    let p = m[(0, 0)].re;
    let r = m[(1, 1)].re;
    let q = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (p + r);
    let radius = (0.5 * (p - r)).hypot(q.norm());
    [mean + radius, mean - radius]
}

fn is_x_matrix(m: &Matrix4<C64>) -> bool {
    (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || m[(i, j)].norm() < X_BLOCK_TOL))
}

fn eig4_unchecked(m: &Matrix4<C64>) -> [f64; 4] {
    let mut out = if is_x_matrix(m) {
        let outer = Matrix2::new(m[(0, 0)], m[(0, 3)], m[(3, 0)], m[(3, 3)]);
        let inner = Matrix2::new(m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]);
        let [a, b] = eig2_unchecked(&outer);
        let [c, d] = eig2_unchecked(&inner);
        [a, b, c, d]
    } else {
        let eig = SymmetricEigen::new(hermitian_part(m));
        [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2], eig.eigenvalues[3]]
    };
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Eigenvalues of a Hermitian 2×2 matrix in descending order, in closed form.
pub fn eigenvalues_2x2(m: &Matrix2<C64>) -> Result<[f64; 2]> {
    let v = hermiticity_violation(m);
    if v > HERMITIAN_TOL {
        return Err(Error::NotHermitian(v));
    }
    Ok(eig2_unchecked(m))
}

/// Eigenvalues of a Hermitian 4×4 matrix in descending order.
///
/// X-matrices split into the `{|00⟩,|11⟩}` and `{|01⟩,|10⟩}` blocks, each
/// solved in closed form; anything else goes through a Hermitian
/// tridiagonal QR sweep.
pub fn eigenvalues_4x4(m: &Matrix4<C64>) -> Result<[f64; 4]> {
    let v = hermiticity_violation(m);
    if v > HERMITIAN_TOL {
        return Err(Error::NotHermitian(v));
    }
    Ok(eig4_unchecked(m))
}

/// Von Neumann entropy in bits of a spectrum, `−Σ λ log₂ λ` with `0 log 0 = 0`.
pub fn entropy_from_eigenvalues(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in eigenvalues {
        if lambda < -PSD_TOL {
            return Err(Error::NotPositive(lambda));
        }
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s)
}

/// Anything whose spectrum is available: the input to [`von_neumann_entropy`].
pub trait Spectrum {
    fn spectrum(&self) -> Vec<f64>;
}

/// Von Neumann entropy `S(ρ) = −Tr ρ log₂ ρ` in bits.
pub fn von_neumann_entropy<S: Spectrum + ?Sized>(rho: &S) -> Result<f64> {
    entropy_from_eigenvalues(&rho.spectrum())
}

/// Diagnostics produced by [`validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_violation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

impl ValidationReport {
    fn into_result(self) -> Result<()> {
        if self.hermiticity_violation > HERMITIAN_TOL {
            Err(Error::NotHermitian(self.hermiticity_violation))
        } else if self.trace_deviation > TRACE_TOL {
            Err(Error::InvalidTrace(self.trace_deviation))
        } else if self.min_eigenvalue < -PSD_TOL {
            Err(Error::NotPositive(self.min_eigenvalue))
        } else {
            Ok(())
        }
    }
}

fn validate_generic<const D: usize>(m: &SMatrix<C64, D, D>, spectrum: impl Fn(&SMatrix<C64, D, D>) -> Vec<f64>) -> ValidationReport {
    let hermiticity_violation = hermiticity_violation(m);
    let trace_deviation = (m.trace() - ONE).norm();
    let min_eigenvalue = spectrum(&hermitian_part(m))
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let passed = hermiticity_violation <= HERMITIAN_TOL
        && trace_deviation <= TRACE_TOL
        && min_eigenvalue >= -PSD_TOL;
    ValidationReport {
        hermiticity_violation,
        trace_deviation,
        min_eigenvalue,
        passed,
    }
}

/// Checks Hermiticity, unit trace and positivity of an arbitrary 4×4 matrix.
///
/// The minimum eigenvalue is that of the Hermitian part, so the report is
/// meaningful even when the Hermiticity check fails.
pub fn validate(m: &Matrix4<C64>) -> ValidationReport {
    validate_generic(m, |h| eig4_unchecked(h).to_vec())
}

/// [`validate`] for single-qubit matrices.
pub fn validate_qubit(m: &Matrix2<C64>) -> ValidationReport {
    validate_generic(m, |h| eig2_unchecked(h).to_vec())
}

/// A validated two-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix4(Matrix4<C64>);

impl DensityMatrix4 {
    pub fn new(m: Matrix4<C64>) -> Result<Self> {
        validate(&m).into_result()?;
        Ok(DensityMatrix4(m))
    }

    /// Wraps the output of a trace-preserving positive map, dropping the
    /// anti-Hermitian rounding residue.
    pub(crate) fn from_channel_output(m: Matrix4<C64>) -> Self {
        DensityMatrix4(hermitian_part(&m))
    }

    /// `I/4`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix4(Matrix4::identity().scale(0.25))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) nonzero vector.
    pub fn from_pure(psi: &[C64; 4]) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::InvalidParameter("pure state vector must be nonzero".into()));
        }
        let m = Matrix4::from_fn(|i, j| psi[i] * psi[j].conj() / norm_sq);
        Ok(DensityMatrix4::from_channel_output(m))
    }

    /// `ρ_M ⊗ ρ_N`.
    pub fn product(m: &QubitState2, n: &QubitState2) -> Self {
        DensityMatrix4::from_channel_output(kron(m.matrix(), n.matrix()))
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4<C64> {
        self.0
    }

    /// Entry `(i, j)`, zero-based.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    /// Descending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 4] {
        eig4_unchecked(&self.0)
    }

    pub fn entropy(&self) -> Result<f64> {
        von_neumann_entropy(self)
    }
}

impl Spectrum for DensityMatrix4 {
    fn spectrum(&self) -> Vec<f64> {
        self.eigenvalues().to_vec()
    }
}

/// A validated single-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState2(Matrix2<C64>);

impl QubitState2 {
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        validate_qubit(&m).into_result()?;
        Ok(QubitState2(m))
    }

    pub(crate) fn from_channel_output(m: Matrix2<C64>) -> Self {
        QubitState2(hermitian_part(&m))
    }

    /// `(I + r·σ)/2`; fails when `|r| > 1`.
    pub fn from_bloch(r: &Vector3<f64>) -> Result<Self> {
        let m = (Matrix2::identity() + bloch_operator(r)).scale(0.5);
        QubitState2::new(m)
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        eig2_unchecked(&self.0)
    }

    /// Bloch vector `r_i = Tr(ρ σ_i)`.
    pub fn bloch_vector(&self) -> Vector3<f64> {
        Vector3::from_fn(|i, _| (self.0 * pauli(i)).trace().re)
    }
}

impl Spectrum for QubitState2 {
    fn spectrum(&self) -> Vec<f64> {
        self.eigenvalues().to_vec()
    }
}

/// `r·σ`.
fn bloch_operator(r: &Vector3<f64>) -> Matrix2<C64> {
    (0..3).fold(Matrix2::zeros(), |acc, i| acc + pauli(i).scale(r[i]))
}

/// Reduced state of the `keep` party.
pub fn partial_trace(rho: &DensityMatrix4, keep: Party) -> QubitState2 {
    let m = rho.matrix();
    let reduced = match keep {
        Party::M => Matrix2::from_fn(|i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)]),
        Party::N => Matrix2::from_fn(|a, b| m[(a, b)] + m[(2 + a, 2 + b)]),
    };
    QubitState2::from_channel_output(reduced)
}

/// Local Bloch vectors and correlation tensor of a two-qubit state:
/// `ρ = ¼[I⊗I + x·σ⊗I + I⊗y·σ + Σ T_ij σ_i⊗σ_j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochDecomposition {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
    pub t: Matrix3<f64>,
}

impl BlochDecomposition {
    pub fn reconstruct(&self) -> Matrix4<C64> {
        let mut m = Matrix4::identity();
        for i in 0..3 {
            m += embed(&pauli(i), Party::M).scale(self.x[i]);
            m += embed(&pauli(i), Party::N).scale(self.y[i]);
            for j in 0..3 {
                m += kron(&pauli(i), &pauli(j)).scale(self.t[(i, j)]);
            }
        }
        m.scale(0.25)
    }

    /// `x xᵀ + T Tᵀ`, whose spectrum governs geometric discord on party M.
    pub fn discord_matrix(&self) -> Matrix3<f64> {
        self.x * self.x.transpose() + self.t * self.t.transpose()
    }
}

pub fn bloch_decompose(rho: &DensityMatrix4) -> BlochDecomposition {
    let m = rho.matrix();
    let expect = |op: Matrix4<C64>| (m * op).trace().re;
    BlochDecomposition {
        x: Vector3::from_fn(|i, _| expect(embed(&pauli(i), Party::M))),
        y: Vector3::from_fn(|i, _| expect(embed(&pauli(i), Party::N))),
        t: Matrix3::from_fn(|i, j| expect(kron(&pauli(i), &pauli(j)))),
    }
}

/// A von Neumann measurement on one qubit, given by the axis `n(θ, φ)` of
/// its projector pair `Π± = (I ± n·σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementAxis {
    theta: f64,
    phi: f64,
}

impl MeasurementAxis {
    /// Requires `θ ∈ [0, π]` and `φ ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidParameter(format!(
                "measurement angles out of range: theta = {theta}, phi = {phi}"
            )));
        }
        Ok(MeasurementAxis { theta, phi })
    }

    /// Canonicalises arbitrary real angles onto the same unit vector.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let n = Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
        Self::from_vector(&n).unwrap_or_else(Self::z)
    }

    /// Axis along `v`; `None` for the zero vector.
    pub fn from_vector(v: &Vector3<f64>) -> Option<Self> {
        let norm = v.norm();
        if !(norm > 0.0) {
            return None;
        }
        let theta = v.x.hypot(v.y).atan2(v.z);
        let mut phi = v.y.atan2(v.x).rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Some(MeasurementAxis { theta, phi })
    }

    pub fn z() -> Self {
        MeasurementAxis { theta: 0.0, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// `[Π₊, Π₋]`.
    pub fn projectors(&self) -> [Matrix2<C64>; 2] {
        let n_sigma = bloch_operator(&self.unit_vector());
        let id = Matrix2::identity();
        [(id + n_sigma).scale(0.5), (id - n_sigma).scale(0.5)]
    }
}

/// `Σ_k (Π_k ⊗ I) ρ (Π_k ⊗ I)`, or with `I ⊗ Π_k` when `party` is N.
pub fn apply_measurement(rho: &DensityMatrix4, axis: &MeasurementAxis, party: Party) -> DensityMatrix4 {
    let m = rho.matrix();
    let out = axis
        .projectors()
        .iter()
        .map(|p| {
            let lifted = embed(p, party);
            lifted * m * lifted
        })
        .fold(Matrix4::zeros(), |acc, term| acc + term);
    DensityMatrix4::from_channel_output(out)
}
