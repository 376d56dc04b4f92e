//! Constructors for the state families under study.
//!
//! All constructors return states in canonical global phase (first
//! amplitude of magnitude above 1e-12 is real positive) so equality tests
//! are deterministic.

use crate::error::{Error, Result};
use crate::hilbert::{c, dim_of, CVector, Complex, Observable, StateVector};

/// Relative sign of a two-branch superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// An undirected graph on `n_vertices` vertices, no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    pub fn new(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidArgument("graph needs vertices".into()));
        }
        let mut normalized = Vec::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for {n_vertices} vertices"
                )));
            }
            let e = (a.min(b), a.max(b));
            if !normalized.contains(&e) {
                normalized.push(e);
            }
        }
        normalized.sort_unstable();
        Ok(Self {
            n_vertices,
            edges: normalized,
        })
    }

    /// Path graph 0 - 1 - ... - (n-1); the 1D cluster-state graph.
    pub fn line(n_vertices: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = (1..n_vertices).map(|v| (v - 1, v)).collect();
        Self::new(n_vertices, &edges)
    }

    /// Cycle graph on `n_vertices >= 3` vertices.
    pub fn ring(n_vertices: usize) -> Result<Self> {
        if n_vertices < 3 {
            return Err(Error::InvalidArgument("ring needs at least 3 vertices".into()));
        }
        let mut edges: Vec<(usize, usize)> = (1..n_vertices).map(|v| (v - 1, v)).collect();
        edges.push((0, n_vertices - 1));
        Self::new(n_vertices, &edges)
    }

    pub fn empty(n_vertices: usize) -> Result<Self> {
        Self::new(n_vertices, &[])
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n_vertices)
            .map(|v| self.neighbors(v).len())
            .max()
            .unwrap_or(0)
    }
}

/// `|0>^(x)N`, the product state with maximal `J_z`.
pub fn product_zero(n_qubits: usize) -> StateVector {
    StateVector::basis_state(n_qubits, 0).expect("index 0 always valid")
}

/// `(|0..0> + sign |1..1>) / sqrt(2)`.
pub fn ghz(n_qubits: usize, sign: Sign) -> StateVector {
    let dim = dim_of(n_qubits);
    let mut amps = CVector::zeros(dim);
    let w = 1.0 / 2f64.sqrt();
    amps[0] = c(w);
    amps[dim - 1] = c(sign.factor() * w);
    StateVector::new(n_qubits, amps)
        .expect("normalized by construction")
        .canonical_phase()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Dicke state `|N, k>`: equal superposition of all computational basis
/// states of Hamming weight `k`.
pub fn dicke(n_qubits: usize, k: usize) -> Result<StateVector> {
    if k > n_qubits {
        return Err(Error::InvalidArgument(format!(
            "Dicke excitation number {k} exceeds {n_qubits} qubits"
        )));
    }
    let dim = dim_of(n_qubits);
    let count = binomial(n_qubits, k);
    let w = 1.0 / (count as f64).sqrt();
    let mut amps = CVector::zeros(dim);
    for idx in 0..dim {
        if idx.count_ones() as usize == k {
            amps[idx] = c(w);
        }
    }
    Ok(StateVector::new(n_qubits, amps)?.canonical_phase())
}

/// Graph state `|G>`, built as `prod_(a,b) CZ_ab |+>^(x)N`. It is the unique
/// joint +1 eigenstate of the generating stabilizers
/// `K_a = X_a prod_(b in N_a) Z_b`.
pub fn graph_state(graph: &GraphSpec) -> StateVector {
    let n = graph.n_vertices();
    let dim = dim_of(n);
    let w = 1.0 / (dim as f64).sqrt();
    let mut amps = CVector::from_element(dim, c(w));
    for &(a, b) in graph.edges() {
        let mask_a = crate::hilbert::qubit_mask(n, a);
        let mask_b = crate::hilbert::qubit_mask(n, b);
        for idx in 0..dim {
            if idx & mask_a != 0 && idx & mask_b != 0 {
                amps[idx] = -amps[idx];
            }
        }
    }
    StateVector::new(n, amps)
        .expect("normalized by construction")
        .canonical_phase()
}

/// Basis index of the block pattern `|pattern>` (on `block` qubits)
/// repeated `reps` times.
fn repeated_pattern_index(pattern: usize, block: usize, reps: usize) -> usize {
    let mut idx = 0usize;
    for _ in 0..reps {
        idx = (idx << block) | pattern;
    }
    idx
}

/// Member `k` (1-based, `k = 1 .. 2^m`) of the phase family
/// `|Psi_k> = 2^(-m/2) sum_j omega^(jk) |j>^(x)(N/m)` with `omega` the
/// primitive `2^m`-th root of unity, so the `2^m` members are orthonormal.
/// For `m = 1` this gives the GHZ pair.
pub fn phase_family(n_qubits: usize, m: usize, k: usize) -> Result<StateVector> {
    if m == 0 || n_qubits % m != 0 {
        return Err(Error::InvalidArgument(format!(
            "group size {m} must divide N = {n_qubits}"
        )));
    }
    let members = 1usize << m;
    if k == 0 || k > members {
        return Err(Error::InvalidArgument(format!(
            "family index {k} outside 1..={members}"
        )));
    }
    let reps = n_qubits / m;
    let dim = dim_of(n_qubits);
    let w = 1.0 / (members as f64).sqrt();
    let mut amps = CVector::zeros(dim);
    for j in 0..members {
        let angle = 2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / members as f64;
        let idx = repeated_pattern_index(j, m, reps);
        amps[idx] = Complex::new(angle.cos(), angle.sin()) * w;
    }
    Ok(StateVector::new(n_qubits, amps)?.canonical_phase())
}

/// All `2^m` members of the phase family.
pub fn phase_family_all(n_qubits: usize, m: usize) -> Result<Vec<StateVector>> {
    (1..=(1usize << m))
        .map(|k| phase_family(n_qubits, m, k))
        .collect()
}

/// Tensor product of `m` sign-labelled GHZ blocks of `N/m` qubits each:
/// `|GHZ^(k_1)> (x) ... (x) |GHZ^(k_m)>`.
pub fn ghz_product_family(n_qubits: usize, m: usize, bits: &[bool]) -> Result<StateVector> {
    if m == 0 || n_qubits % m != 0 {
        return Err(Error::InvalidArgument(format!(
            "group count {m} must divide N = {n_qubits}"
        )));
    }
    if bits.len() != m {
        return Err(Error::InvalidArgument(format!(
            "expected {m} sign bits, got {}",
            bits.len()
        )));
    }
    let block = n_qubits / m;
    let mut state = ghz(block, Sign::from_bit(bits[0]));
    for &bit in &bits[1..] {
        state = state.tensor(&ghz(block, Sign::from_bit(bit)));
    }
    Ok(state.canonical_phase())
}

/// All `2^m` members of the GHZ product family, ordered by the integer
/// value of their sign bits.
pub fn ghz_product_family_all(n_qubits: usize, m: usize) -> Result<Vec<StateVector>> {
    (0..(1usize << m))
        .map(|pattern| {
            let bits: Vec<bool> = (0..m).map(|b| pattern >> (m - 1 - b) & 1 == 1).collect();
            ghz_product_family(n_qubits, m, &bits)
        })
        .collect()
}

/// Logical GHZ state on `n_groups` blocks of `m` qubits, with
/// `|0_L> = (|0>^m + |1>^m)/sqrt(2)` and `|1_L> = (|0>^m - |1>^m)/sqrt(2)`:
/// `(|0_L>^(x)n + sign |1_L>^(x)n) / sqrt(2)`.
pub fn logical_ghz(n_groups: usize, m: usize, sign: Sign) -> Result<StateVector> {
    if n_groups == 0 || m == 0 {
        return Err(Error::InvalidArgument(
            "logical GHZ needs at least one group of one qubit".into(),
        ));
    }
    let total = n_groups * m;
    if total > 12 {
        return Err(Error::CapExceeded {
            requested: total,
            cap: 12,
        });
    }
    let zero_l = ghz(m, Sign::Plus);
    let one_l = ghz(m, Sign::Minus);
    let mut branch0 = zero_l.clone();
    let mut branch1 = one_l.clone();
    for _ in 1..n_groups {
        branch0 = branch0.tensor(&zero_l);
        branch1 = branch1.tensor(&one_l);
    }
    let amps = (branch0.amplitudes() + branch1.amplitudes().scale(sign.factor()))
        / c(2f64.sqrt());
    Ok(StateVector::new(total, amps)?.canonical_phase())
}

/// The pair of logical branch states `(|0_L>^(x)n, |1_L>^(x)n)`.
pub fn logical_ghz_branches(n_groups: usize, m: usize) -> Result<(StateVector, StateVector)> {
    let zero_l = ghz(m, Sign::Plus);
    let one_l = ghz(m, Sign::Minus);
    let mut branch0 = zero_l.clone();
    let mut branch1 = one_l.clone();
    for _ in 1..n_groups {
        branch0 = branch0.tensor(&zero_l);
        branch1 = branch1.tensor(&one_l);
    }
    Ok((branch0, branch1))
}

/// The five states and the local witness of the confusability
/// counterexample: a state confusable with `(phi_1 + phi_2)/sqrt(2)` while a
/// 2-local observable separates it from `phi_1` alone.
#[derive(Debug, Clone)]
pub struct Section5States {
    pub psi: StateVector,
    pub phi1: StateVector,
    pub phi2: StateVector,
    pub xi1: StateVector,
    pub xi2: StateVector,
    /// `sum_(i even) Z_i Z_(i+1)`; spectral radius `N/2`.
    pub witness: Observable,
}

/// Builds the counterexample family on `n_qubits` (even) qubits.
pub fn section5_counterexample(n_qubits: usize) -> Result<Section5States> {
    if n_qubits == 0 || n_qubits % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "counterexample needs an even qubit count, got {n_qubits}"
        )));
    }
    let reps = n_qubits / 2;
    let dim = dim_of(n_qubits);
    let pattern_state = |patterns: &[(usize, f64)]| -> Result<StateVector> {
        let mut amps = CVector::zeros(dim);
        let norm = (patterns.iter().map(|(_, w)| w * w).sum::<f64>()).sqrt();
        for &(pat, w) in patterns {
            amps[repeated_pattern_index(pat, 2, reps)] = c(w / norm);
        }
        Ok(StateVector::new(n_qubits, amps)?.canonical_phase())
    };

    let psi = pattern_state(&[(0b00, 1.0), (0b01, 1.0), (0b10, 1.0), (0b11, 1.0)])?;
    let phi1 = pattern_state(&[(0b00, 1.0), (0b11, -1.0)])?;
    let phi2 = pattern_state(&[(0b01, 1.0), (0b10, -1.0)])?;
    let xi = |s: f64| -> Result<StateVector> {
        let amps = (phi1.amplitudes() + phi2.amplitudes().scale(s)) / c(2f64.sqrt());
        Ok(StateVector::new(n_qubits, amps)?.canonical_phase())
    };
    let xi1 = xi(1.0)?;
    let xi2 = xi(-1.0)?;

    let mut terms = Vec::new();
    for pair in 0..reps {
        let mut labels = vec![crate::hamiltonians::Pauli::I; n_qubits];
        labels[2 * pair] = crate::hamiltonians::Pauli::Z;
        labels[2 * pair + 1] = crate::hamiltonians::Pauli::Z;
        terms.push(crate::hamiltonians::PauliTerm::new(1.0, labels));
    }
    let witness = crate::hamiltonians::PauliHamiltonian::new(n_qubits, terms)?
        .to_observable()?;

    Ok(Section5States {
        psi,
        phi1,
        phi2,
        xi1,
        xi2,
        witness,
    })
}
