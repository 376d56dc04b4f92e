//! Dense linear-algebra substrate: state vectors, density matrices,
//! observables, tensor structure, trace norms and spectral decompositions.
//!
//! Basis convention used throughout the crate: computational basis states of
//! an `N`-qubit register are indexed by integers whose **most significant bit
//! is qubit 0**, so `|0...0>` is index `0` and qubit `q` occupies bit
//! `N - 1 - q` of the index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance for construction-time invariant checks.
pub const TOL_CONSTRUCT: f64 = 1e-12;
/// Tolerance for assertion-style checks.
pub const TOL_ASSERT: f64 = 1e-10;

pub(crate) fn c(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

/// Hilbert-space dimension of an `n`-qubit register.
pub fn dim_of(n_qubits: usize) -> usize {
    1usize << n_qubits
}

/// Number of qubits for a dimension that must be a power of two.
pub(crate) fn qubits_of_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Bit mask selecting qubit `q` inside an `n`-qubit basis index.
pub(crate) fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1usize << (n_qubits - 1 - qubit)
}

fn check_qubit(n_qubits: usize, qubit: usize) -> Result<()> {
    if qubit >= n_qubits {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits,
        });
    }
    Ok(())
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// A normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: CVector,
}

impl StateVector {
    /// Builds a state from amplitudes, enforcing length `2^n_qubits` and
    /// unit norm within `1e-12`.
    pub fn new(n_qubits: usize, amplitudes: CVector) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidState("n_qubits must be positive".into()));
        }
        if amplitudes.len() != dim_of(n_qubits) {
            return Err(Error::InvalidState(format!(
                "amplitude vector has length {}, expected {}",
                amplitudes.len(),
                dim_of(n_qubits)
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > TOL_CONSTRUCT {
            return Err(Error::InvalidState(format!(
                "norm deviates from 1 by {:.3e}",
                (norm - 1.0).abs()
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Builds a state from unnormalized amplitudes by rescaling.
    pub fn new_normalized(n_qubits: usize, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero amplitude vector".into()));
        }
        Self::new(n_qubits, amplitudes / c(norm))
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = dim_of(n_qubits);
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[index] = c(1.0);
        Self::new(n_qubits, amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Projector `|psi><psi|` as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::unchecked(self.n_qubits, m)
    }

    /// Tensor product `|self> (x) |other>`; `self` occupies the leading
    /// (most significant) qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let amps = self.amplitudes.kronecker(&other.amplitudes);
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes: amps,
        }
    }

    /// Fixes the global phase so the first amplitude of magnitude above
    /// `1e-12` is real and positive.
    pub fn canonical_phase(mut self) -> Self {
        if let Some(a) = self.amplitudes.iter().find(|a| a.norm() > 1e-12) {
            let phase = a.conj() / a.norm();
            self.amplitudes *= phase;
        }
        self
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix on `n_qubits`
/// qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Builds a density matrix, enforcing all invariants (Hermiticity and
    /// unit trace within `1e-12`, minimum eigenvalue `>= -1e-10`).
    pub fn new(n_qubits: usize, matrix: CMatrix) -> Result<Self> {
        let dm = Self::unchecked_with_shape_check(n_qubits, matrix)?;
        dm.validate()?;
        Ok(dm)
    }

    fn unchecked_with_shape_check(n_qubits: usize, matrix: CMatrix) -> Result<Self> {
        let dim = dim_of(n_qubits);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidDensityMatrix(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                dim,
                dim
            )));
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Construction without the (expensive) eigenvalue check, for internal
    /// paths that preserve the invariants by construction.
    pub(crate) fn unchecked(n_qubits: usize, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), dim_of(n_qubits));
        debug_assert!(hermiticity_deviation(&matrix) <= 1e-9);
        Self { n_qubits, matrix }
    }

    /// Checks all type invariants on the stored matrix.
    pub fn validate(&self) -> Result<()> {
        let herm = hermiticity_deviation(&self.matrix);
        if herm > TOL_CONSTRUCT {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian: deviation {herm:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TOL_CONSTRUCT || tr.im.abs() > TOL_CONSTRUCT {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {tr}, expected 1"
            )));
        }
        let min_eig = self
            .matrix
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::InvalidDensityMatrix(format!(
                "minimum eigenvalue {min_eig:.3e} below -1e-10"
            )));
        }
        Ok(())
    }

    /// `|psi><psi|`.
    pub fn pure(psi: &StateVector) -> Self {
        psi.density()
    }

    /// The maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = dim_of(n_qubits);
        let m = CMatrix::identity(dim, dim) / c(dim as f64);
        Self::unchecked(n_qubits, m)
    }

    /// Convex mixture of pure states. Weights must be nonnegative and sum
    /// to 1 within `1e-12`.
    pub fn mixture(parts: &[(f64, &StateVector)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("empty mixture".into()));
        }
        let n = parts[0].1.n_qubits();
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if (total - 1.0).abs() > TOL_CONSTRUCT || parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::InvalidArgument(
                "mixture weights must be nonnegative and sum to 1".into(),
            ));
        }
        let dim = dim_of(n);
        let mut m = CMatrix::zeros(dim, dim);
        for (w, psi) in parts {
            if psi.n_qubits() != n {
                return Err(Error::DimensionMismatch(
                    "mixture states live on different registers".into(),
                ));
            }
            m += psi.density().matrix() * c(*w);
        }
        Ok(Self::unchecked(n, m))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex {
        self.matrix.trace()
    }
}

/// A Hermitian observable together with its spectral radius.
#[derive(Debug, Clone)]
pub struct Observable {
    n_qubits: usize,
    matrix: CMatrix,
    spectral_radius: f64,
}

impl Observable {
    /// Builds an observable from a Hermitian matrix; the spectral radius is
    /// computed by exact diagonalization.
    pub fn new(n_qubits: usize, matrix: CMatrix) -> Result<Self> {
        let dim = dim_of(n_qubits);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "observable is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                dim,
                dim
            )));
        }
        let herm = hermiticity_deviation(&matrix);
        if herm > TOL_CONSTRUCT {
            return Err(Error::NotHermitian(herm));
        }
        let spectral_radius = matrix
            .symmetric_eigenvalues()
            .iter()
            .map(|l| l.abs())
            .fold(0.0, f64::max);
        Ok(Self {
            n_qubits,
            matrix,
            spectral_radius,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// Divides by the spectral radius; returns the rescaled observable and
    /// the factor. Errors on the zero operator.
    pub fn rescaled(&self) -> Result<(Observable, f64)> {
        if self.spectral_radius < 1e-300 {
            return Err(Error::InvalidArgument(
                "cannot rescale the zero observable".into(),
            ));
        }
        let factor = self.spectral_radius;
        let m = &self.matrix / c(factor);
        Ok((
            Observable {
                n_qubits: self.n_qubits,
                matrix: m,
                spectral_radius: 1.0,
            },
            factor,
        ))
    }
}

// ---------------------------------------------------------------------------
// Spectral operations
// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian matrix with default tolerance.
///
/// Returns eigenvalues sorted ascending and the matching orthonormal
/// eigenvectors as columns.
pub fn eigendecompose_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    eigendecompose_hermitian_with_tol(m, TOL_ASSERT)
}

/// Eigendecomposition of a Hermitian matrix with caller-chosen Hermiticity
/// tolerance.
pub fn eigendecompose_hermitian_with_tol(m: &CMatrix, tol: f64) -> Result<(Vec<f64>, CMatrix)> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    let dev = hermiticity_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    Ok(eig_hermitian_unchecked(m))
}

/// Eigendecomposition without the Hermiticity check, for hot paths that
/// construct Hermitian operands.
pub(crate) fn eig_hermitian_unchecked(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Eigenvalues only (unsorted), skipping the Hermiticity check.
pub(crate) fn eigvals_hermitian_unchecked(m: &CMatrix) -> Vec<f64> {
    m.symmetric_eigenvalues().iter().cloned().collect()
}

/// Trace norm of a Hermitian matrix: sum of |eigenvalue|.
pub fn trace_norm_hermitian(m: &CMatrix) -> Result<f64> {
    let dev = hermiticity_deviation(m);
    if dev > TOL_ASSERT {
        return Err(Error::NotHermitian(dev));
    }
    Ok(trace_norm_hermitian_unchecked(m))
}

pub(crate) fn trace_norm_hermitian_unchecked(m: &CMatrix) -> f64 {
    eigvals_hermitian_unchecked(m).iter().map(|l| l.abs()).sum()
}

/// Trace norm of an arbitrary matrix, computed as the sum of the square
/// roots of the eigenvalues of `M^dag M` (the Hermitian eigendecomposition
/// is the single spectral backend of the crate).
pub fn trace_norm(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    eigvals_hermitian_unchecked(&gram)
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum()
}

/// Von Neumann entropy `-sum lambda ln(lambda)` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    eigvals_hermitian_unchecked(rho.matrix())
        .iter()
        .map(|&l| if l > 1e-15 { -l * l.ln() } else { 0.0 })
        .sum()
}

/// Trace distance `||rho - sigma||_1 / 2` between density matrices.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "trace_distance: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let delta = rho.matrix() - sigma.matrix();
    Ok(0.5 * trace_norm_hermitian_unchecked(&delta))
}

// ---------------------------------------------------------------------------
// Partial trace
// ---------------------------------------------------------------------------

/// Table mapping a compact index over `positions` to the scattered basis
/// index with those bits placed at the given qubit positions.
pub(crate) fn scatter_table(n_qubits: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    let mut table = vec![0usize; 1 << k];
    for (i, entry) in table.iter_mut().enumerate() {
        let mut idx = 0usize;
        for (bit, &q) in positions.iter().enumerate() {
            if (i >> (k - 1 - bit)) & 1 == 1 {
                idx |= qubit_mask(n_qubits, q);
            }
        }
        *entry = idx;
    }
    table
}

fn validated_subset(n_qubits: usize, qubits: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidArgument(format!(
                "duplicate qubit index {}",
                w[0]
            )));
        }
    }
    for &q in &sorted {
        check_qubit(n_qubits, q)?;
    }
    Ok(sorted)
}

/// Partial trace of an arbitrary operator over the given qubits. The
/// remaining qubits keep their relative order.
pub fn partial_trace_op(m: &CMatrix, n_qubits: usize, traced: &[usize]) -> Result<CMatrix> {
    let traced = validated_subset(n_qubits, traced)?;
    let remaining: Vec<usize> = (0..n_qubits).filter(|q| !traced.contains(q)).collect();
    let t_tab = scatter_table(n_qubits, &traced);
    let r_tab = scatter_table(n_qubits, &remaining);
    let rd = r_tab.len();
    let mut out = CMatrix::zeros(rd, rd);
    for r in 0..rd {
        for cc in 0..rd {
            let mut acc = Complex::default();
            for &b in &t_tab {
                acc += m[(r_tab[r] | b, r_tab[cc] | b)];
            }
            out[(r, cc)] = acc;
        }
    }
    Ok(out)
}

/// Partial trace of a density matrix; the result is a density matrix on the
/// remaining qubits.
pub fn partial_trace(rho: &DensityMatrix, qubits: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if qubits.len() >= n {
        return Err(Error::InvalidArgument(
            "cannot trace out every qubit; at least one must remain".into(),
        ));
    }
    let m = partial_trace_op(rho.matrix(), n, qubits)?;
    Ok(DensityMatrix::unchecked(n - qubits.len(), m))
}

// ---------------------------------------------------------------------------
// Complement basis, expectation, local unitaries
// ---------------------------------------------------------------------------

/// Orthonormal basis of the orthogonal complement of `psi`, as the columns
/// of a `2^N x (2^N - 1)` matrix. Built by Householder QR of `psi` completed
/// with standard basis vectors.
pub(crate) fn complement_matrix(psi: &StateVector) -> CMatrix {
    let dim = psi.dim();
    let amps = psi.amplitudes();
    let mut m = CMatrix::zeros(dim, dim);
    m.set_column(0, amps);
    // Drop the basis vector most parallel to psi so the columns stay
    // linearly independent.
    let argmax = (0..dim)
        .max_by(|&a, &b| amps[a].norm().total_cmp(&amps[b].norm()))
        .unwrap();
    let mut col = 1;
    for i in 0..dim {
        if i == argmax {
            continue;
        }
        m[(i, col)] = c(1.0);
        col += 1;
    }
    let q = m.qr().q();
    q.columns(1, dim - 1).into_owned()
}

/// The `2^N - 1` orthonormal states spanning the orthogonal complement of
/// `psi`.
pub fn orthonormal_complement_basis(psi: &StateVector) -> Vec<StateVector> {
    let v = complement_matrix(psi);
    (0..v.ncols())
        .map(|j| StateVector {
            n_qubits: psi.n_qubits(),
            amplitudes: v.column(j).into_owned(),
        })
        .collect()
}

/// Expectation value `Tr(A rho)`. The imaginary part must vanish within
/// `1e-10` and is discarded.
pub fn expectation(obs: &Observable, rho: &DensityMatrix) -> Result<f64> {
    if obs.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "expectation: observable on {} qubits, state on {}",
            obs.n_qubits(),
            rho.n_qubits()
        )));
    }
    let val = (obs.matrix() * rho.matrix()).trace();
    assert!(
        val.im.abs() < TOL_ASSERT,
        "expectation of a Hermitian observable has imaginary part {:.3e}",
        val.im
    );
    Ok(val.re)
}

/// Applies one 2x2 unitary per qubit to a state: `(U_0 (x) ... (x) U_{N-1}) |psi>`.
pub fn apply_local_unitary(psi: &StateVector, unitaries: &[CMatrix]) -> Result<StateVector> {
    let n = psi.n_qubits();
    if unitaries.len() != n {
        return Err(Error::InvalidArgument(format!(
            "expected {n} unitaries, got {}",
            unitaries.len()
        )));
    }
    for (q, u) in unitaries.iter().enumerate() {
        if u.nrows() != 2 || u.ncols() != 2 {
            return Err(Error::InvalidArgument(format!(
                "unitary for qubit {q} is not 2x2"
            )));
        }
        let dev = max_abs(&(u.adjoint() * u - CMatrix::identity(2, 2)));
        if dev > TOL_CONSTRUCT {
            return Err(Error::InvalidArgument(format!(
                "factor for qubit {q} is not unitary: deviation {dev:.3e}"
            )));
        }
    }
    let mut amps = psi.amplitudes().clone();
    for (q, u) in unitaries.iter().enumerate() {
        let mask = qubit_mask(n, q);
        for idx in 0..amps.len() {
            if idx & mask == 0 {
                let a0 = amps[idx];
                let a1 = amps[idx | mask];
                amps[idx] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                amps[idx | mask] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        }
    }
    // Unitarity preserves the norm; renormalize to absorb rounding.
    let norm = amps.norm();
    Ok(StateVector {
        n_qubits: n,
        amplitudes: amps / c(norm),
    })
}

/// Kronecker product of two operators (leading factor on the most
/// significant qubits).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
