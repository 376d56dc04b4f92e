//! Confusability relations between orthogonal states under noise: pairwise
//! decay scans, the degenerate-ground-space upper bound on the
//! confusability index, Helstrom group discrimination, and effective-size
//! estimation for two-branch superpositions.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::certify::{classify_decay, pairwise_noisy_distance, DecayFit, SweepRecord};
use crate::channels;
use crate::error::{Error, Result};
use crate::family::StateFamily;
use crate::hamiltonians::{spectral_info, PauliHamiltonian};
use crate::hilbert::{
    eig_hermitian_unchecked, partial_trace, scatter_table, trace_distance, CMatrix,
    DensityMatrix, StateVector,
};

/// Default minimal spectral gap for applying the ground-space degeneracy
/// bound.
pub const DEFAULT_GAP_THRESHOLD: f64 = 1e-6;

/// Pairwise decay classification of one family pair.
#[derive(Debug, Clone)]
pub struct PairClassification {
    pub i: usize,
    pub j: usize,
    pub fit: DecayFit,
}

/// Pairwise noisy distances of a set of mutually orthogonal states, with
/// per-pair decay classifications over a system-size sweep.
#[derive(Debug, Clone)]
pub struct ConfusabilityMatrix {
    /// The member states at the reference size (the last sweep point).
    pub states: Vec<StateVector>,
    /// Symmetric distance matrix at the reference size.
    pub distances: DMatrix<f64>,
    /// One classification per unordered pair, when the sweep has at least
    /// four points; empty otherwise.
    pub classifications: Vec<PairClassification>,
    /// The underlying sweep data (one record per pair and size).
    pub sweep_records: Vec<SweepRecord>,
}

fn check_mutually_orthogonal(states: &[StateVector]) -> Result<()> {
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let g = a.inner(b).norm();
            let expect = if i == j { 1.0 } else { 0.0 };
            if (g - expect).abs() > 1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "states {i} and {j} are not orthonormal: |<i|j>| = {g:.3e}"
                )));
            }
        }
    }
    Ok(())
}

/// Symmetric matrix of pairwise noisy distances at fixed `(N, p)`.
pub fn pairwise_distance_matrix(states: &[StateVector], p: f64) -> Result<DMatrix<f64>> {
    check_mutually_orthogonal(states)?;
    let n = states.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| pairwise_noisy_distance(&states[i], &states[j], p))
        .collect::<Result<Vec<_>>>()?;
    let mut m = DMatrix::zeros(n, n);
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    Ok(m)
}

/// Builds the confusability matrix of a parametric family: pairwise
/// distances at the largest sweep size plus per-pair decay classifications
/// across the sweep.
pub fn confusability_matrix(
    family: &StateFamily,
    p: f64,
    n_sweep: &[usize],
) -> Result<ConfusabilityMatrix> {
    let &ref_n = n_sweep.last().ok_or_else(|| {
        Error::InvalidArgument("confusability sweep needs at least one size".into())
    })?;
    let states = family.members(ref_n)?;
    let distances = pairwise_distance_matrix(&states, p)?;

    let n_members = states.len();
    let pairs: Vec<(usize, usize)> = (0..n_members)
        .flat_map(|i| (i + 1..n_members).map(move |j| (i, j)))
        .collect();

    let mut sweep_records = Vec::new();
    let per_size: Vec<(usize, Vec<f64>)> = n_sweep
        .par_iter()
        .map(|&n| -> Result<(usize, Vec<f64>)> {
            let members = family.members(n)?;
            if members.len() != n_members {
                return Err(Error::InvalidArgument(
                    "family changes member count across the sweep".into(),
                ));
            }
            let m = pairwise_distance_matrix(&members, p)?;
            Ok((n, pairs.iter().map(|&(i, j)| m[(i, j)]).collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    for (n, values) in &per_size {
        for (&(i, j), &value) in pairs.iter().zip(values) {
            sweep_records.push(SweepRecord {
                family: family.name(),
                n: *n,
                p,
                quantity: format!("pair({i},{j})"),
                kind: "pairwise".into(),
                value,
            });
        }
    }

    let classifications = if n_sweep.len() >= 4 {
        pairs
            .iter()
            .enumerate()
            .map(|(pair_idx, &(i, j))| {
                let records: Vec<SweepRecord> = per_size
                    .iter()
                    .map(|(n, values)| SweepRecord {
                        family: family.name(),
                        n: *n,
                        p,
                        quantity: format!("pair({i},{j})"),
                        kind: "pairwise".into(),
                        value: values[pair_idx],
                    })
                    .collect();
                Ok(PairClassification {
                    i,
                    j,
                    fit: classify_decay(&records)?,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    Ok(ConfusabilityMatrix {
        states,
        distances,
        classifications,
        sweep_records,
    })
}

/// `D[E(psi_1), E(mean)]` against the equal incoherent mixture of the set.
pub fn equal_mixture_distance(states: &[StateVector], p: f64) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::InvalidArgument("empty state set".into()));
    }
    check_mutually_orthogonal(states)?;
    let weight = 1.0 / states.len() as f64;
    let parts: Vec<(f64, &StateVector)> = states.iter().map(|s| (weight, s)).collect();
    let mixture = DensityMatrix::mixture(&parts)?;
    let a = channels::depolarize_all(&states[0].density(), p)?;
    let b = channels::depolarize_all(&mixture, p)?;
    trace_distance(&a, &b)
}

/// Ground-space degeneracy of a gapped Hamiltonian, an upper bound on the
/// confusability index of its ground states. Refuses gaps below
/// `gap_threshold` (the bound needs `E_1 - E_0 >= 1/poly(N)`).
pub fn confusability_index_upper_bound(
    h: &PauliHamiltonian,
    gap_threshold: f64,
) -> Result<usize> {
    let info = spectral_info(h);
    if info.gap < gap_threshold {
        return Err(Error::GapBelowThreshold {
            gap: info.gap,
            threshold: gap_threshold,
        });
    }
    Ok(info.ground_degeneracy)
}

/// Optimal success probability for distinguishing two branch states by
/// measuring one qubit group.
#[derive(Debug, Clone)]
pub struct GroupDistinguishability {
    pub group: Vec<usize>,
    /// Helstrom probability `1/2 + D(rho_0, rho_1)/2` of the reduced
    /// states; in `[1/2, 1]`.
    pub success_probability: f64,
}

fn reduced_onto_group(psi: &StateVector, group: &[usize]) -> Result<DensityMatrix> {
    let n = psi.n_qubits();
    let complement: Vec<usize> = (0..n).filter(|q| !group.contains(q)).collect();
    if complement.is_empty() {
        return Ok(psi.density());
    }
    partial_trace(&psi.density(), &complement)
}

/// Helstrom discrimination of `psi_0` vs `psi_1` from the reduced states on
/// `group`.
pub fn group_success_probability(
    psi0: &StateVector,
    psi1: &StateVector,
    group: &[usize],
) -> Result<GroupDistinguishability> {
    if group.is_empty() {
        return Err(Error::InvalidArgument("empty measurement group".into()));
    }
    if psi0.dim() != psi1.dim() {
        return Err(Error::DimensionMismatch(
            "branch states differ in size".into(),
        ));
    }
    let r0 = reduced_onto_group(psi0, group)?;
    let r1 = reduced_onto_group(psi1, group)?;
    let d = trace_distance(&r0, &r1)?;
    Ok(GroupDistinguishability {
        group: group.to_vec(),
        success_probability: 0.5 + 0.5 * d,
    })
}

/// How candidate partitions are generated for the effective size.
#[derive(Debug, Clone)]
pub enum GroupingStrategy {
    /// Contiguous equal blocks of size `m = 1, 2, ...` (remainder joins the
    /// last block).
    ContiguousBlocks,
    /// Explicit partitions, tried in order.
    Custom(Vec<Vec<Vec<usize>>>),
}

/// Largest group count over the grouping strategy such that every group
/// distinguishes the branches with probability at least `1 - eps`; `1`
/// when no candidate partition qualifies.
pub fn effective_size(
    psi0: &StateVector,
    psi1: &StateVector,
    eps: f64,
    strategy: &GroupingStrategy,
) -> Result<usize> {
    if !(0.0..0.5).contains(&eps) {
        return Err(Error::InvalidArgument(format!(
            "eps = {eps} outside [0, 1/2)"
        )));
    }
    if psi0.inner(psi1).norm() > 1e-10 {
        return Err(Error::InvalidArgument(
            "effective size needs orthogonal branches".into(),
        ));
    }
    let n = psi0.n_qubits();
    let partitions: Vec<Vec<Vec<usize>>> = match strategy {
        GroupingStrategy::ContiguousBlocks => (1..=n)
            .map(|m| {
                channels::Grouping::contiguous_blocks(n, m)
                    .map(|g| g.groups().to_vec())
            })
            .collect::<Result<Vec<_>>>()?,
        GroupingStrategy::Custom(parts) => parts.clone(),
    };
    for partition in &partitions {
        let mut all_pass = true;
        for group in partition {
            let p_succ = group_success_probability(psi0, psi1, group)?.success_probability;
            if p_succ + 1e-12 < 1.0 - eps {
                all_pass = false;
                break;
            }
        }
        if all_pass {
            return Ok(partition.len());
        }
    }
    Ok(1)
}

/// Embeds an operator on the (ascending-sorted) group qubits into the full
/// register, acting as identity elsewhere.
fn embed_group_operator(op: &CMatrix, n_qubits: usize, group: &[usize]) -> CMatrix {
    let rest: Vec<usize> = (0..n_qubits).filter(|q| !group.contains(q)).collect();
    let g_tab = scatter_table(n_qubits, group);
    let r_tab = scatter_table(n_qubits, &rest);
    let dim = 1usize << n_qubits;
    let mut out = CMatrix::zeros(dim, dim);
    for (a, &ga) in g_tab.iter().enumerate() {
        for (b, &gb) in g_tab.iter().enumerate() {
            let v = op[(a, b)];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            for &r in &r_tab {
                out[(ga | r, gb | r)] = v;
            }
        }
    }
    out
}

/// Helstrom observable (spectrum `{-1, +1}`) distinguishing the reduced
/// branch states on a group.
fn helstrom_observable(
    psi0: &StateVector,
    psi1: &StateVector,
    group: &[usize],
) -> Result<CMatrix> {
    let r0 = reduced_onto_group(psi0, group)?;
    let r1 = reduced_onto_group(psi1, group)?;
    let delta = r0.matrix() - r1.matrix();
    let (values, vectors) = eig_hermitian_unchecked(&delta);
    let dim = delta.nrows();
    let mut a = CMatrix::zeros(dim, dim);
    for (i, l) in values.iter().enumerate() {
        let col = vectors.column(i);
        let s = if *l >= 0.0 { 1.0 } else { -1.0 };
        a += (col * col.adjoint()).scale(s);
    }
    Ok(a)
}

/// Measurement-independence diagnostic: for every group pair `(i, j)`, the
/// largest covariance `|<A_i A_j> - <A_i><A_j>|` of the optimal group
/// observables over the two branch states. Reported, not enforced.
pub fn independence_diagnostic(
    psi0: &StateVector,
    psi1: &StateVector,
    groups: &[Vec<usize>],
) -> Result<Vec<(usize, usize, f64)>> {
    let n = psi0.n_qubits();
    let observables: Vec<CMatrix> = groups
        .iter()
        .map(|g| {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            Ok(embed_group_operator(
                &helstrom_observable(psi0, psi1, &sorted)?,
                n,
                &sorted,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let expect = |op: &CMatrix, psi: &StateVector| -> f64 {
        (psi.amplitudes().adjoint() * op * psi.amplitudes())[(0, 0)].re
    };
    let mut out = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let prod = &observables[i] * &observables[j];
            let mut dev: f64 = 0.0;
            for branch in [psi0, psi1] {
                let joint = expect(&prod, branch);
                let sep = expect(&observables[i], branch) * expect(&observables[j], branch);
                dev = dev.max((joint - sep).abs());
            }
            out.push((i, j, dev));
        }
    }
    Ok(out)
}
