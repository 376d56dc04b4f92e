//! Pauli-basis Hamiltonians: weights, localities, spectral gaps, and the
//! explicit constructions whose unique gapped ground states certify state
//! families (total angular momentum, Dicke projectors, graph stabilizers).

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hilbert::{c, dim_of, kron, CMatrix, Observable, StateVector};
use crate::states::GraphSpec;

/// Single-qubit Pauli operator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMatrix {
        let (a, b, cc, d) = match self {
            Pauli::I => (c(1.0), c(0.0), c(0.0), c(1.0)),
            Pauli::X => (c(0.0), c(1.0), c(1.0), c(0.0)),
            Pauli::Y => (
                c(0.0),
                num_complex::Complex64::new(0.0, -1.0),
                num_complex::Complex64::new(0.0, 1.0),
                c(0.0),
            ),
            Pauli::Z => (c(1.0), c(0.0), c(0.0), c(-1.0)),
        };
        CMatrix::from_row_slice(2, 2, &[a, b, cc, d])
    }

    pub fn from_char(ch: char) -> Result<Self> {
        match ch {
            'I' | 'i' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("unknown Pauli label '{other}'"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// One weighted Pauli string `coefficient * sigma_(l_0) (x) ... (x) sigma_(l_(N-1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub labels: Vec<Pauli>,
}

impl PauliTerm {
    pub fn new(coefficient: f64, labels: Vec<Pauli>) -> Self {
        Self {
            coefficient,
            labels,
        }
    }

    /// Identity string on `n` qubits.
    pub fn identity(n_qubits: usize, coefficient: f64) -> Self {
        Self::new(coefficient, vec![Pauli::I; n_qubits])
    }

    /// String with a single non-identity label.
    pub fn single(n_qubits: usize, qubit: usize, pauli: Pauli, coefficient: f64) -> Self {
        let mut labels = vec![Pauli::I; n_qubits];
        labels[qubit] = pauli;
        Self::new(coefficient, labels)
    }

    /// Number of non-identity labels.
    pub fn weight(&self) -> usize {
        self.labels.iter().filter(|&&l| l != Pauli::I).count()
    }

    /// Dense matrix of the full string including the coefficient.
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::identity(1, 1);
        for &l in &self.labels {
            m = kron(&m, &l.matrix());
        }
        m * c(self.coefficient)
    }

    pub fn label_string(&self) -> String {
        self.labels.iter().map(|l| l.to_char()).collect()
    }
}

/// A Hamiltonian as a duplicate-free sum of Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliHamiltonian {
    /// Builds the Hamiltonian, merging terms with equal label arrays and
    /// dropping exact-zero coefficients.
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("n_qubits must be positive".into()));
        }
        let mut merged: std::collections::BTreeMap<Vec<Pauli>, f64> =
            std::collections::BTreeMap::new();
        for term in terms {
            if term.labels.len() != n_qubits {
                return Err(Error::InvalidArgument(format!(
                    "term '{}' has {} labels, expected {n_qubits}",
                    term.label_string(),
                    term.labels.len()
                )));
            }
            if !term.coefficient.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite coefficient on term '{}'",
                    term.label_string()
                )));
            }
            *merged.entry(term.labels).or_insert(0.0) += term.coefficient;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, coeff)| *coeff != 0.0)
            .map(|(labels, coefficient)| PauliTerm {
                coefficient,
                labels,
            })
            .collect();
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Maximal term weight.
    pub fn locality(&self) -> usize {
        self.terms.iter().map(PauliTerm::weight).max().unwrap_or(0)
    }

    /// Dense matrix realization (Kronecker assembly term by term).
    pub fn to_matrix(&self) -> CMatrix {
        let dim = dim_of(self.n_qubits);
        let mut m = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            m += term.matrix();
        }
        m
    }

    pub fn to_observable(&self) -> Result<Observable> {
        Observable::new(self.n_qubits, self.to_matrix())
    }

    /// All coefficients multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm::new(t.coefficient * factor, t.labels.clone()))
                .collect(),
        }
    }
}

/// Record format for loading custom Hamiltonians from JSON:
/// `[{"coefficient": -1.0, "labels": "XZI"}, ...]`.
#[derive(Debug, Deserialize)]
struct PauliTermRecord {
    coefficient: f64,
    labels: String,
}

/// Parses a Hamiltonian from a JSON list of `{coefficient, labels}` records
/// with label strings over `IXYZ`.
pub fn hamiltonian_from_json(json: &str) -> Result<PauliHamiltonian> {
    let records: Vec<PauliTermRecord> =
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if records.is_empty() {
        return Err(Error::Parse("empty term list".into()));
    }
    let n_qubits = records[0].labels.chars().count();
    let mut terms = Vec::with_capacity(records.len());
    for rec in &records {
        let labels = rec
            .labels
            .chars()
            .map(Pauli::from_char)
            .collect::<Result<Vec<_>>>()?;
        terms.push(PauliTerm::new(rec.coefficient, labels));
    }
    PauliHamiltonian::new(n_qubits, terms)
}

// ---------------------------------------------------------------------------
// Named constructions
// ---------------------------------------------------------------------------

/// `J_z = (1/2) sum_i Z_i`.
pub fn jz(n_qubits: usize) -> PauliHamiltonian {
    let terms = (0..n_qubits)
        .map(|q| PauliTerm::single(n_qubits, q, Pauli::Z, 0.5))
        .collect();
    PauliHamiltonian::new(n_qubits, terms).expect("well-formed by construction")
}

fn two_body_sum(n_qubits: usize, pauli: Pauli, coefficient: f64) -> Vec<PauliTerm> {
    let mut terms = Vec::new();
    for i in 0..n_qubits {
        for j in i + 1..n_qubits {
            let mut labels = vec![Pauli::I; n_qubits];
            labels[i] = pauli;
            labels[j] = pauli;
            terms.push(PauliTerm::new(coefficient, labels));
        }
    }
    terms
}

/// `J^2 = J_x^2 + J_y^2 + J_z^2`, expanded to weight <= 2 strings:
/// `(3N/4) I + (1/2) sum_(i<j) (X_i X_j + Y_i Y_j + Z_i Z_j)`.
pub fn j_squared(n_qubits: usize) -> PauliHamiltonian {
    let mut terms = vec![PauliTerm::identity(n_qubits, 0.75 * n_qubits as f64)];
    for pauli in [Pauli::X, Pauli::Y, Pauli::Z] {
        terms.extend(two_body_sum(n_qubits, pauli, 0.5));
    }
    PauliHamiltonian::new(n_qubits, terms).expect("well-formed by construction")
}

/// `J_z^2` expanded: `(N/4) I + (1/2) sum_(i<j) Z_i Z_j`.
fn jz_squared_terms(n_qubits: usize) -> Vec<PauliTerm> {
    let mut terms = vec![PauliTerm::identity(n_qubits, 0.25 * n_qubits as f64)];
    terms.extend(two_body_sum(n_qubits, Pauli::Z, 0.5));
    terms
}

/// 2-local gapped Hamiltonian with the Dicke state `|N, k>` as unique
/// ground state: `-J^2 + (J_z - (N/2 - k) I)^2`.
///
/// The shifted-`J_z` square enters with a positive sign: it is the positive
/// semidefinite penalty vanishing exactly on the Hamming-weight-`k` sector,
/// and `-J^2` selects the symmetric state inside that sector.
pub fn dicke_hamiltonian(n_qubits: usize, k: usize) -> Result<PauliHamiltonian> {
    if k > n_qubits {
        return Err(Error::InvalidArgument(format!(
            "excitation number {k} exceeds {n_qubits} qubits"
        )));
    }
    let shift = n_qubits as f64 / 2.0 - k as f64;
    let mut terms: Vec<PauliTerm> = j_squared(n_qubits)
        .terms()
        .iter()
        .map(|t| PauliTerm::new(-t.coefficient, t.labels.clone()))
        .collect();
    // (J_z - shift I)^2 = J_z^2 - 2 shift J_z + shift^2 I
    terms.extend(jz_squared_terms(n_qubits));
    for q in 0..n_qubits {
        terms.push(PauliTerm::single(n_qubits, q, Pauli::Z, -shift));
    }
    terms.push(PauliTerm::identity(n_qubits, shift * shift));
    PauliHamiltonian::new(n_qubits, terms)
}

/// Generating stabilizer `K_a = X_a prod_(b in N_a) Z_b` of a graph state.
pub fn graph_stabilizer(graph: &GraphSpec, vertex: usize) -> PauliHamiltonian {
    let n = graph.n_vertices();
    let mut labels = vec![Pauli::I; n];
    labels[vertex] = Pauli::X;
    for b in graph.neighbors(vertex) {
        labels[b] = Pauli::Z;
    }
    PauliHamiltonian::new(n, vec![PauliTerm::new(1.0, labels)])
        .expect("well-formed by construction")
}

/// `-sum_a K_a`: gapped, with the graph state as unique ground state at
/// energy `-N`; locality is `1 + max degree`.
pub fn graph_hamiltonian(graph: &GraphSpec) -> PauliHamiltonian {
    let n = graph.n_vertices();
    let mut terms = Vec::with_capacity(n);
    for a in 0..n {
        let mut labels = vec![Pauli::I; n];
        labels[a] = Pauli::X;
        for b in graph.neighbors(a) {
            labels[b] = Pauli::Z;
        }
        terms.push(PauliTerm::new(-1.0, labels));
    }
    PauliHamiltonian::new(n, terms).expect("well-formed by construction")
}

/// `-J_z^2`, whose two-fold ground space is spanned by `|0..0>` and
/// `|1..1>` (equivalently the GHZ pair).
pub fn neg_jz_squared(n_qubits: usize) -> PauliHamiltonian {
    let terms = jz_squared_terms(n_qubits)
        .into_iter()
        .map(|t| PauliTerm::new(-t.coefficient, t.labels))
        .collect();
    PauliHamiltonian::new(n_qubits, terms).expect("well-formed by construction")
}

// ---------------------------------------------------------------------------
// Spectral analysis
// ---------------------------------------------------------------------------

/// Ground-sector data of a Hamiltonian from full diagonalization.
#[derive(Debug, Clone)]
pub struct SpectralInfo {
    pub ground_energy: f64,
    pub first_excited_energy: f64,
    /// `E_1 - E_0`; zero when the spectrum is a single degenerate level.
    pub gap: f64,
    pub ground_degeneracy: usize,
    pub ground_space: Vec<StateVector>,
}

/// Degeneracy clustering tolerance: spectra here are integer or
/// half-integer valued, far above this.
const DEGENERACY_TOL: f64 = 1e-8;

/// Full diagonalization; ground degeneracy counts eigenvalues within `1e-8`
/// of the minimum.
pub fn spectral_info(h: &PauliHamiltonian) -> SpectralInfo {
    let m = h.to_matrix();
    let (values, vectors) = crate::hilbert::eig_hermitian_unchecked(&m);
    let ground_energy = values[0];
    let degeneracy = values
        .iter()
        .take_while(|&&v| v - ground_energy <= DEGENERACY_TOL)
        .count();
    let (first_excited_energy, gap) = if degeneracy < values.len() {
        let e1 = values[degeneracy];
        (e1, e1 - ground_energy)
    } else {
        (ground_energy, 0.0)
    };
    let ground_space = (0..degeneracy)
        .map(|i| {
            StateVector::new(h.n_qubits(), vectors.column(i).into_owned())
                .expect("eigenvectors are normalized")
        })
        .collect();
    SpectralInfo {
        ground_energy,
        first_excited_energy,
        gap,
        ground_degeneracy: degeneracy,
        ground_space,
    }
}

/// Divides all coefficients by the exact spectral radius; returns the
/// rescaled Hamiltonian and the factor.
pub fn rescale_to_unit_spectral_radius(h: &PauliHamiltonian) -> Result<(PauliHamiltonian, f64)> {
    let radius = h
        .to_matrix()
        .symmetric_eigenvalues()
        .iter()
        .map(|l| l.abs())
        .fold(0.0f64, f64::max);
    if radius < 1e-300 {
        return Err(Error::InvalidArgument(
            "cannot rescale the zero operator".into(),
        ));
    }
    Ok((h.scaled(1.0 / radius), radius))
}

/// Pads every term to weight exactly `k` by appending `sigma_z` factors on
/// `k` ancilla qubits (term of weight `w` receives `k - w` of them). Used to
/// verify that trace distances under the product channel are unchanged by
/// ancillas in the `|0>` state.
pub fn pad_to_uniform_weight(h: &PauliHamiltonian, k: usize) -> Result<PauliHamiltonian> {
    if k < h.locality() {
        return Err(Error::InvalidArgument(format!(
            "target weight {k} below locality {}",
            h.locality()
        )));
    }
    let n = h.n_qubits();
    let terms = h
        .terms()
        .iter()
        .map(|t| {
            let mut labels = t.labels.clone();
            let pad = k - t.weight();
            for a in 0..k {
                labels.push(if a < pad { Pauli::Z } else { Pauli::I });
            }
            PauliTerm::new(t.coefficient, labels)
        })
        .collect();
    PauliHamiltonian::new(n + k, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::apply_to_operator;
    use crate::hilbert::qubit_mask;
    use crate::states::{dicke, ghz, graph_state, product_zero, GraphSpec, Sign};
    use approx::assert_relative_eq;

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn jz_structure_and_spectrum() {
        let h = jz(1);
        assert_eq!(h.terms().len(), 1);
        assert!(max_abs(&(h.to_matrix() - Pauli::Z.matrix().scale(0.5))) < 1e-15);

        let n = 4;
        let info = spectral_info(&jz(n));
        assert_relative_eq!(info.ground_energy, -(n as f64) / 2.0, epsilon = 1e-12);
        assert_eq!(info.ground_degeneracy, 1);
        // unique top eigenstate |N,0>: check through -J_z
        let neg = jz(n).scaled(-1.0);
        let info = spectral_info(&neg);
        assert_eq!(info.ground_degeneracy, 1);
        let overlap = info.ground_space[0].inner(&product_zero(n)).norm();
        assert!(overlap > 1.0 - 1e-12);
    }

    #[test]
    fn j_squared_commutes_with_jz() {
        let n = 3;
        let a = j_squared(n).to_matrix();
        let b = jz(n).to_matrix();
        assert!(max_abs(&(&a * &b - &b * &a)) < 1e-10);
    }

    #[test]
    fn j_squared_single_qubit_is_three_quarters() {
        let m = j_squared(1).to_matrix();
        assert!(max_abs(&(&m - CMatrix::identity(2, 2).scale(0.75))) < 1e-15);
    }

    #[test]
    fn j_squared_dicke_eigenvalue() {
        let n = 4;
        let m = j_squared(n).to_matrix();
        let mu = (n as f64 / 2.0) * (n as f64 / 2.0 + 1.0);
        for k in 0..=n {
            let d = dicke(n, k).unwrap();
            let v = &m * d.amplitudes() - d.amplitudes().scale(mu);
            assert!(v.norm() < 1e-10);
        }
    }

    #[test]
    fn dicke_hamiltonian_matches_matrix_composition() {
        // Independent oracle: assemble -J^2 + (J_z - shift)^2 at matrix level.
        for (n, k) in [(3usize, 1usize), (4, 2), (4, 0)] {
            let h = dicke_hamiltonian(n, k).unwrap();
            assert!(h.locality() <= 2);
            let dim = dim_of(n);
            let j2 = j_squared(n).to_matrix();
            let jzm = jz(n).to_matrix();
            let shift = n as f64 / 2.0 - k as f64;
            let shifted = &jzm - CMatrix::identity(dim, dim).scale(shift);
            let expect = -&j2 + &shifted * &shifted;
            assert!(max_abs(&(h.to_matrix() - expect)) < 1e-12);
        }
    }

    #[test]
    fn dicke_hamiltonian_unique_gapped_ground_state() {
        let info = spectral_info(&dicke_hamiltonian(4, 2).unwrap());
        assert_eq!(info.ground_degeneracy, 1);
        assert_relative_eq!(info.ground_energy, -6.0, epsilon = 1e-10);
        assert_relative_eq!(info.gap, 1.0, epsilon = 1e-10);
        let target = dicke(4, 2).unwrap();
        assert!(info.ground_space[0].inner(&target).norm() > 1.0 - 1e-10);

        for n in 3..=6 {
            let info = spectral_info(&dicke_hamiltonian(n, n / 2).unwrap());
            assert_eq!(info.ground_degeneracy, 1, "N = {n}");
            assert!(info.gap > 0.0, "N = {n}");
        }

        // k = 0 reduces to the product state.
        let info = spectral_info(&dicke_hamiltonian(3, 0).unwrap());
        assert!(info.ground_space[0].inner(&product_zero(3)).norm() > 1.0 - 1e-10);
        assert!(dicke_hamiltonian(3, 4).is_err());
    }

    #[test]
    fn graph_hamiltonian_ground_state_and_gap() {
        for graph in [
            GraphSpec::line(4).unwrap(),
            GraphSpec::ring(4).unwrap(),
            GraphSpec::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap(),
        ] {
            let n = graph.n_vertices();
            let h = graph_hamiltonian(&graph);
            assert_eq!(h.locality(), 1 + graph.max_degree());
            let info = spectral_info(&h);
            assert_relative_eq!(info.ground_energy, -(n as f64), epsilon = 1e-10);
            assert_eq!(info.ground_degeneracy, 1);
            assert_relative_eq!(info.gap, 2.0, epsilon = 1e-10);
            let target = graph_state(&graph);
            assert!(info.ground_space[0].inner(&target).norm() > 1.0 - 1e-10);
        }

        let empty = GraphSpec::empty(3).unwrap();
        let expect = -(PauliTerm::single(3, 0, Pauli::X, 1.0).matrix()
            + PauliTerm::single(3, 1, Pauli::X, 1.0).matrix()
            + PauliTerm::single(3, 2, Pauli::X, 1.0).matrix());
        assert!(max_abs(&(graph_hamiltonian(&empty).to_matrix() - expect)) < 1e-14);
    }

    #[test]
    fn neg_jz_squared_ground_space() {
        let info = spectral_info(&neg_jz_squared(4));
        assert_eq!(info.ground_degeneracy, 2);
        assert_relative_eq!(info.ground_energy, -4.0, epsilon = 1e-10);
        // span{|0000>, |1111>} = span{GHZ, GHZ_perp}
        let plus = ghz(4, Sign::Plus);
        let minus = ghz(4, Sign::Minus);
        for target in [&plus, &minus] {
            let overlap: f64 = info
                .ground_space
                .iter()
                .map(|g| g.inner(target).norm_sqr())
                .sum();
            assert!(overlap > 1.0 - 1e-10);
        }

        let info2 = spectral_info(&neg_jz_squared(2));
        assert_relative_eq!(info2.ground_energy, -1.0, epsilon = 1e-12);

        // The ground-to-first-excited gap is N - 1: the top two J_z^2
        // values are (N/2)^2 and (N/2 - 1)^2.
        for n in 3..=7 {
            let info = spectral_info(&neg_jz_squared(n));
            assert_relative_eq!(info.gap, n as f64 - 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn spectral_rescaling() {
        let (h, factor) = rescale_to_unit_spectral_radius(&jz(1).scaled(2.0)).unwrap();
        assert_relative_eq!(factor, 1.0, epsilon = 1e-12);
        assert!(max_abs(&(h.to_matrix() - Pauli::Z.matrix())) < 1e-12);

        let three_z = PauliHamiltonian::new(
            1,
            vec![PauliTerm::single(1, 0, Pauli::Z, 3.0)],
        )
        .unwrap();
        let (h, factor) = rescale_to_unit_spectral_radius(&three_z).unwrap();
        assert_relative_eq!(factor, 3.0, epsilon = 1e-12);
        assert!(max_abs(&(h.to_matrix() - Pauli::Z.matrix())) < 1e-12);

        let (_, factor) = rescale_to_unit_spectral_radius(&jz(4)).unwrap();
        assert_relative_eq!(factor, 2.0, epsilon = 1e-12);

        let zero = PauliHamiltonian::new(1, vec![]).unwrap();
        assert!(rescale_to_unit_spectral_radius(&zero).is_err());
    }

    #[test]
    fn matrix_realization_is_hermitian_and_matches_assembly() {
        let h = dicke_hamiltonian(3, 1).unwrap();
        let m = h.to_matrix();
        assert!(max_abs(&(&m - m.adjoint())) < 1e-12);
        // jz(3) against hand-assembled (Z I I + I Z I + I I Z) / 2
        let z = Pauli::Z.matrix();
        let i2 = CMatrix::identity(2, 2);
        let hand = (kron(&kron(&z, &i2), &i2)
            + kron(&kron(&i2, &z), &i2)
            + kron(&kron(&i2, &i2), &z))
        .scale(0.5);
        assert!(max_abs(&(jz(3).to_matrix() - hand)) < 1e-12);
    }

    #[test]
    fn terms_damped_by_weight_under_noise() {
        let h = dicke_hamiltonian(3, 1).unwrap();
        let p = 0.85;
        for term in h.terms() {
            let damped = apply_to_operator(&term.matrix(), p).unwrap();
            let expect = term.matrix().scale(p.powi(term.weight() as i32));
            assert!(max_abs(&(&damped - expect)) < 1e-12);
        }
    }

    #[test]
    fn permutation_invariance_of_symmetric_hamiltonians() {
        let n = 4;
        for h in [j_squared(n), dicke_hamiltonian(n, 1).unwrap()] {
            let m = h.to_matrix();
            for swap in 0..n - 1 {
                let perm = transposition_matrix(n, swap, swap + 1);
                let rotated = &perm * &m * perm.adjoint();
                assert!(max_abs(&(&rotated - &m)) < 1e-10);
            }
        }
    }

    fn transposition_matrix(n: usize, a: usize, b: usize) -> CMatrix {
        let dim = dim_of(n);
        let mut m = CMatrix::zeros(dim, dim);
        let ma = qubit_mask(n, a);
        let mb = qubit_mask(n, b);
        for idx in 0..dim {
            let bit_a = idx & ma != 0;
            let bit_b = idx & mb != 0;
            let mut target = idx & !(ma | mb);
            if bit_a {
                target |= mb;
            }
            if bit_b {
                target |= ma;
            }
            m[(target, idx)] = c(1.0);
        }
        m
    }

    #[test]
    fn padding_to_uniform_weight() {
        let h = dicke_hamiltonian(3, 1).unwrap();
        let k = h.locality();
        let padded = pad_to_uniform_weight(&h, k).unwrap();
        assert_eq!(padded.n_qubits(), 3 + k);
        assert!(padded.terms().iter().all(|t| t.weight() == k));
        assert!(pad_to_uniform_weight(&h, 1).is_err());
    }

    #[test]
    fn hamiltonian_json_roundtrip() {
        let json = r#"[
            {"coefficient": -1.0, "labels": "XZ"},
            {"coefficient": 0.5, "labels": "ZI"},
            {"coefficient": 0.25, "labels": "ZI"}
        ]"#;
        let h = hamiltonian_from_json(json).unwrap();
        assert_eq!(h.n_qubits(), 2);
        assert_eq!(h.terms().len(), 2); // ZI merged
        let zi = h
            .terms()
            .iter()
            .find(|t| t.label_string() == "ZI")
            .unwrap();
        assert_relative_eq!(zi.coefficient, 0.75, epsilon = 1e-15);

        assert!(hamiltonian_from_json("[{\"coefficient\": 1.0, \"labels\": \"Q\"}]").is_err());
        assert!(hamiltonian_from_json("not json").is_err());
    }

    #[test]
    fn duplicate_merge_and_validation() {
        let terms = vec![
            PauliTerm::single(2, 0, Pauli::X, 1.0),
            PauliTerm::single(2, 0, Pauli::X, -1.0),
        ];
        let h = PauliHamiltonian::new(2, terms).unwrap();
        assert!(h.terms().is_empty());
        assert_eq!(h.locality(), 0);

        let bad = vec![PauliTerm::new(1.0, vec![Pauli::X])];
        assert!(PauliHamiltonian::new(2, bad).is_err());
    }
}
