//! Local depolarizing noise in the three granularities used by the bounds:
//! per qubit, per group, and the correction map that factors the product
//! channel through group-local depolarization.
//!
//! All channel actions are deterministic linear maps (no trajectory
//! sampling) and extend to arbitrary operators, not only states; qubit
//! indices follow the crate convention (qubit 0 = most significant bit).

use crate::error::{Error, Result};
use crate::hilbert::{
    c, dim_of, kron, qubit_mask, qubits_of_dim, scatter_table, CMatrix, DensityMatrix,
};

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "{name} = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Noise model and Kraus sets
// ---------------------------------------------------------------------------

/// Depolarizing parameter plus an optional partition of the qubits into
/// groups (for the group-local channel and the correction map).
#[derive(Debug, Clone)]
pub struct NoiseModel {
    p: f64,
    grouping: Option<Grouping>,
}

/// A partition of `{0, .., n_qubits - 1}` into disjoint covering groups.
#[derive(Debug, Clone)]
pub struct Grouping {
    n_qubits: usize,
    groups: Vec<Vec<usize>>,
}

impl Grouping {
    pub fn new(n_qubits: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n_qubits];
        for group in &groups {
            if group.is_empty() {
                return Err(Error::InvalidArgument("empty group".into()));
            }
            for &q in group {
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange {
                        index: q,
                        n_qubits,
                    });
                }
                if seen[q] {
                    return Err(Error::InvalidArgument(format!(
                        "qubit {q} appears in more than one group"
                    )));
                }
                seen[q] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidArgument(
                "groups must cover every qubit".into(),
            ));
        }
        Ok(Self { n_qubits, groups })
    }

    /// Contiguous blocks of size `m` (the last block absorbs any remainder).
    pub fn contiguous_blocks(n_qubits: usize, m: usize) -> Result<Self> {
        if m == 0 || m > n_qubits {
            return Err(Error::InvalidArgument(format!(
                "block size {m} invalid for {n_qubits} qubits"
            )));
        }
        let n_groups = n_qubits / m;
        let mut groups: Vec<Vec<usize>> = (0..n_groups)
            .map(|g| (g * m..(g + 1) * m).collect())
            .collect();
        for q in n_groups * m..n_qubits {
            groups.last_mut().unwrap().push(q);
        }
        Self::new(n_qubits, groups)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self { p, grouping: None })
    }

    pub fn with_grouping(p: f64, grouping: Grouping) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self {
            p,
            grouping: Some(grouping),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn grouping(&self) -> Option<&Grouping> {
        self.grouping.as_ref()
    }

    /// Retention probability of the group-local channel on a group of `m`
    /// qubits: `q = 1 - (1 - p)^m`.
    pub fn q_for_group(&self, m: usize) -> f64 {
        1.0 - (1.0 - self.p).powi(m as i32)
    }

    /// Full product channel `E = E^(0) (x) ... (x) E^(N-1)`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        depolarize_all(rho, self.p)
    }

    /// Group-local channel: one `E_g` per group, with `q` derived from the
    /// group size.
    pub fn apply_group_local(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let grouping = self.grouping.as_ref().ok_or_else(|| {
            Error::InvalidArgument("noise model has no grouping".into())
        })?;
        if grouping.n_qubits() != rho.n_qubits() {
            return Err(Error::DimensionMismatch(
                "grouping does not match state size".into(),
            ));
        }
        let mut out = rho.clone();
        for group in grouping.groups() {
            out = group_depolarize(&out, group, self.q_for_group(group.len()))?;
        }
        Ok(out)
    }
}

/// A set of Kraus operators satisfying the completeness relation.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
}

impl KrausSet {
    /// Validates `sum K^dag K = I` within `1e-10` elementwise.
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidArgument("empty Kraus set".into()));
        }
        let dim = operators[0].nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &operators {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch(
                    "Kraus operators differ in dimension".into(),
                ));
            }
            sum += k.adjoint() * k;
        }
        let dev = (&sum - CMatrix::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        if dev > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "Kraus completeness violated: max deviation {dev:.3e}"
            )));
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// Operator-sum action `sum_j K_j M K_j^dag`.
    pub fn apply(&self, m: &CMatrix) -> CMatrix {
        let dim = m.nrows();
        let mut out = CMatrix::zeros(dim, dim);
        for k in &self.operators {
            out += k * m * k.adjoint();
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Channel primitives on raw operators
// ---------------------------------------------------------------------------

/// Replaces the qubits in `subset` by the maximally mixed state:
/// `M -> Tr_subset(M) (x) I / 2^k` with the identity reinserted at the
/// original positions.
pub(crate) fn trace_out_and_mix(m: &CMatrix, n_qubits: usize, subset: &[usize]) -> CMatrix {
    let k = subset.len();
    if k == 0 {
        return m.clone();
    }
    let remaining: Vec<usize> = (0..n_qubits).filter(|q| !subset.contains(q)).collect();
    let t_tab = scatter_table(n_qubits, subset);
    let r_tab = scatter_table(n_qubits, &remaining);
    let rd = r_tab.len();
    let dim = m.nrows();
    let mut out = CMatrix::zeros(dim, dim);
    let weight = 1.0 / (1usize << k) as f64;
    for i in 0..rd {
        for j in 0..rd {
            let mut acc = num_complex::Complex64::default();
            for &b in &t_tab {
                acc += m[(r_tab[i] | b, r_tab[j] | b)];
            }
            acc *= weight;
            if acc.norm_sqr() == 0.0 {
                continue;
            }
            for &b in &t_tab {
                out[(r_tab[i] | b, r_tab[j] | b)] = acc;
            }
        }
    }
    out
}

/// Linear action of the single-qubit depolarizing channel on an arbitrary
/// operator: `M -> p M + (1 - p) Tr_i(M) (x) I/2`.
pub fn depolarize_qubit_op(m: &CMatrix, qubit: usize, p: f64) -> Result<CMatrix> {
    check_probability("p", p)?;
    let n = qubits_of_dim(m.nrows())?;
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("operator must be square".into()));
    }
    if qubit >= n {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits: n,
        });
    }
    Ok(depolarize_qubit_unchecked(m, n, qubit, p))
}

pub(crate) fn depolarize_qubit_unchecked(
    m: &CMatrix,
    n_qubits: usize,
    qubit: usize,
    p: f64,
) -> CMatrix {
    let dim = m.nrows();
    let mask = qubit_mask(n_qubits, qubit);
    let mut out = m.scale(p);
    for r in 0..dim {
        for col in 0..dim {
            if (r & mask) == (col & mask) {
                let avg = (m[(r & !mask, col & !mask)] + m[(r | mask, col | mask)]) * 0.5;
                out[(r, col)] += avg * (1.0 - p);
            }
        }
    }
    out
}

/// Linear extension of the full product depolarizing channel to arbitrary
/// square operators of dimension `2^N`.
pub fn apply_to_operator(m: &CMatrix, p: f64) -> Result<CMatrix> {
    check_probability("p", p)?;
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("operator must be square".into()));
    }
    let n = qubits_of_dim(m.nrows())?;
    let mut out = m.clone();
    for q in 0..n {
        out = depolarize_qubit_unchecked(&out, n, q, p);
    }
    Ok(out)
}

/// Group-local depolarization on an arbitrary operator:
/// `M -> q M + (1 - q) Tr_group(M) (x) (I/2)^(x)m`.
pub fn group_depolarize_op(m: &CMatrix, group: &[usize], q: f64) -> Result<CMatrix> {
    check_probability("q", q)?;
    let n = qubits_of_dim(m.nrows())?;
    if group.is_empty() {
        return Err(Error::InvalidArgument("empty group".into()));
    }
    let mut sorted = group.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != group.len() {
        return Err(Error::InvalidArgument("duplicate qubit in group".into()));
    }
    for &g in &sorted {
        if g >= n {
            return Err(Error::QubitOutOfRange {
                index: g,
                n_qubits: n,
            });
        }
    }
    Ok(m.scale(q) + trace_out_and_mix(m, n, &sorted).scale(1.0 - q))
}

/// The correction map on a subset of qubits of an arbitrary operator
/// (the sum over proper-subset partial depolarizations, normalized so that
/// composing it after group-local depolarization reproduces the product
/// channel on the group).
pub fn correction_map_op(m: &CMatrix, group: &[usize], p: f64) -> Result<CMatrix> {
    if p <= 0.0 || p > 1.0 || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "correction map requires p in (0, 1], got {p}"
        )));
    }
    let n = qubits_of_dim(m.nrows())?;
    let group_size = group.len();
    if group_size == 0 {
        return Err(Error::InvalidArgument("empty group".into()));
    }
    for &g in group {
        if g >= n {
            return Err(Error::QubitOutOfRange {
                index: g,
                n_qubits: n,
            });
        }
    }
    let norm = 1.0 - (1.0 - p).powi(group_size as i32);
    let dim = m.nrows();
    let mut out = CMatrix::zeros(dim, dim);
    // Sum over all proper subsets of the group, graded by size.
    for subset_bits in 0..(1usize << group_size) - 1 {
        let k = subset_bits.count_ones() as usize;
        let coeff = p.powi((group_size - k) as i32) * (1.0 - p).powi(k as i32) / norm;
        let subset: Vec<usize> = (0..group_size)
            .filter(|b| subset_bits >> b & 1 == 1)
            .map(|b| group[b])
            .collect();
        out += trace_out_and_mix(m, n, &subset).scale(coeff);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Typed channel operations on density matrices
// ---------------------------------------------------------------------------

/// Single-qubit depolarization of a state.
pub fn depolarize_qubit(rho: &DensityMatrix, qubit: usize, p: f64) -> Result<DensityMatrix> {
    if qubit >= rho.n_qubits() {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits: rho.n_qubits(),
        });
    }
    check_probability("p", p)?;
    let m = depolarize_qubit_unchecked(rho.matrix(), rho.n_qubits(), qubit, p);
    Ok(DensityMatrix::unchecked(rho.n_qubits(), m))
}

/// Product depolarization of every qubit of a state.
pub fn depolarize_all(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    let mut m = rho.matrix().clone();
    for q in 0..rho.n_qubits() {
        m = depolarize_qubit_unchecked(&m, rho.n_qubits(), q, p);
    }
    Ok(DensityMatrix::unchecked(rho.n_qubits(), m))
}

/// Group-local depolarization of a state.
pub fn group_depolarize(rho: &DensityMatrix, group: &[usize], q: f64) -> Result<DensityMatrix> {
    let m = group_depolarize_op(rho.matrix(), group, q)?;
    Ok(DensityMatrix::unchecked(rho.n_qubits(), m))
}

/// The correction map applied to a whole `m`-qubit state. Rejects `p = 0`,
/// where the normalization degenerates.
pub fn correction_map(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    let group: Vec<usize> = (0..rho.n_qubits()).collect();
    let m = correction_map_op(rho.matrix(), &group, p)?;
    Ok(DensityMatrix::unchecked(rho.n_qubits(), m))
}

/// Explicit Kraus set of the correction map on `m` qubits: one operator
/// `sqrt(c) sigma_{j1}^{(i1)} ... sigma_{jk}^{(ik)}` per subset size
/// `k = 0 .. m-1`, subset, and Pauli label assignment, with
/// `c = p^(m-k) (1-p)^k / (4^k (1 - (1-p)^m))`.
pub fn correction_map_kraus(m: usize, p: f64) -> Result<KrausSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if p <= 0.0 || p > 1.0 || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "correction map requires p in (0, 1], got {p}"
        )));
    }
    let norm = 1.0 - (1.0 - p).powi(m as i32);
    let paulis = crate::hamiltonians::Pauli::ALL;
    let mut operators = Vec::new();
    for subset_bits in 0..(1usize << m) - 1 {
        let k = subset_bits.count_ones() as usize;
        let positions: Vec<usize> = (0..m).filter(|b| subset_bits >> b & 1 == 1).collect();
        let c_j =
            p.powi((m - k) as i32) * (1.0 - p).powi(k as i32) / (4f64.powi(k as i32) * norm);
        let scale = c(c_j.sqrt());
        // All 4^k Pauli label assignments on the chosen positions.
        let mut labels = vec![0usize; k];
        loop {
            let mut op = CMatrix::identity(1, 1);
            for q in 0..m {
                let factor = match positions.iter().position(|&pos| pos == q) {
                    Some(slot) => paulis[labels[slot]].matrix(),
                    None => CMatrix::identity(2, 2),
                };
                op = kron(&op, &factor);
            }
            operators.push(op * scale);
            // Advance the mixed-radix label counter.
            let mut carry = true;
            for slot in (0..k).rev() {
                if labels[slot] < 3 {
                    labels[slot] += 1;
                    carry = false;
                    break;
                }
                labels[slot] = 0;
            }
            if carry {
                break;
            }
        }
    }
    KrausSet::new(operators)
}

// ---------------------------------------------------------------------------
// Channel descriptors and the Choi matrix
// ---------------------------------------------------------------------------

/// Named channels used for complete-positivity verification.
#[derive(Debug, Clone)]
pub enum ChannelKind {
    /// Product depolarizing channel with retention probability `p`.
    Depolarizing { p: f64 },
    /// Group-local depolarization of the whole register with parameter `q`.
    GroupDepolarizing { q: f64 },
    /// The correction map with parameter `p`.
    Correction { p: f64 },
    /// Matrix transposition; positive but not completely positive. Used as
    /// a negative control.
    Transpose,
}

impl ChannelKind {
    /// Linear action on an arbitrary operator on `n_qubits` qubits.
    pub fn apply_op(&self, m: &CMatrix, n_qubits: usize) -> Result<CMatrix> {
        let all: Vec<usize> = (0..n_qubits).collect();
        match self {
            ChannelKind::Depolarizing { p } => apply_to_operator(m, *p),
            ChannelKind::GroupDepolarizing { q } => group_depolarize_op(m, &all, *q),
            ChannelKind::Correction { p } => correction_map_op(m, &all, *p),
            ChannelKind::Transpose => Ok(m.transpose()),
        }
    }
}

/// Normalized Choi matrix of a channel on `m` qubits:
/// `J = (1/2^m) sum_ij |i><j| (x) L(|i><j|)`. The channel is completely
/// positive iff `J` is positive semidefinite.
pub fn choi_matrix(channel: &ChannelKind, m: usize) -> Result<CMatrix> {
    if m == 0 || m > 4 {
        return Err(Error::CapExceeded {
            requested: m,
            cap: 4,
        });
    }
    let dim = dim_of(m);
    let mut choi = CMatrix::zeros(dim * dim, dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut e_ij = CMatrix::zeros(dim, dim);
            e_ij[(i, j)] = c(1.0);
            let mapped = channel.apply_op(&e_ij, m)?;
            for k in 0..dim {
                for l in 0..dim {
                    choi[(i * dim + k, j * dim + l)] = mapped[(k, l)] / c(dim as f64);
                }
            }
        }
    }
    Ok(choi)
}
