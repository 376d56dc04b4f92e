//! Name-addressable state families so sweeps, confusability scans and the
//! CLI can construct states parametrically in the system size.

use crate::certify::{macro_upper_bound, prop1_bound};
use crate::error::{Error, Result};
use crate::hamiltonians;
use crate::hilbert::{c, StateVector};
use crate::states::{self, GraphSpec, Sign};

/// Whether a closed-form bound sits below or above the exact certifiability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// A parametric family of (sets of) mutually orthogonal states.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily {
    /// GHZ state and its sign-flipped partner.
    GhzPair,
    /// `|0>^(x)N`.
    ProductZero,
    /// Dicke state with fixed excitation number.
    Dicke { k: usize },
    /// W state and inverted W state.
    WPair,
    /// The `2^m` discrete-Fourier phase superpositions of repeated blocks.
    PhaseFamily { m: usize },
    /// The `2^m` products of sign-labelled GHZ blocks.
    GhzProduct { m: usize },
    /// Logical GHZ pair on blocks of `m` qubits.
    LogicalGhz { m: usize },
    /// 1D cluster state (line-graph state).
    ClusterLine,
    /// `(|G> +- Z^(x)N |G>)/sqrt(2)` on the line graph.
    GraphZPair,
    /// The two-state confusable pair of the counterexample family.
    Section5,
}

impl StateFamily {
    /// Parses a family by CLI name plus optional parameters.
    pub fn parse(name: &str, k: Option<usize>, m: Option<usize>) -> Result<Self> {
        let need_m = |m: Option<usize>| {
            m.ok_or_else(|| Error::Parse(format!("family '{name}' needs parameter m")))
        };
        match name {
            "ghz-pair" => Ok(StateFamily::GhzPair),
            "product-zero" => Ok(StateFamily::ProductZero),
            "dicke" => Ok(StateFamily::Dicke {
                k: k.ok_or_else(|| Error::Parse("family 'dicke' needs parameter k".into()))?,
            }),
            "w-pair" => Ok(StateFamily::WPair),
            "phase-family" => Ok(StateFamily::PhaseFamily { m: need_m(m)? }),
            "ghz-product" => Ok(StateFamily::GhzProduct { m: need_m(m)? }),
            "logical-ghz" => Ok(StateFamily::LogicalGhz { m: need_m(m)? }),
            "cluster-line" => Ok(StateFamily::ClusterLine),
            "graph-z-pair" => Ok(StateFamily::GraphZPair),
            "section5" => Ok(StateFamily::Section5),
            other => Err(Error::Parse(format!("unknown state family '{other}'"))),
        }
    }

    /// Stable display name (appears in CSV output).
    pub fn name(&self) -> String {
        match self {
            StateFamily::GhzPair => "ghz-pair".into(),
            StateFamily::ProductZero => "product-zero".into(),
            StateFamily::Dicke { k } => format!("dicke[k={k}]"),
            StateFamily::WPair => "w-pair".into(),
            StateFamily::PhaseFamily { m } => format!("phase-family[m={m}]"),
            StateFamily::GhzProduct { m } => format!("ghz-product[m={m}]"),
            StateFamily::LogicalGhz { m } => format!("logical-ghz[m={m}]"),
            StateFamily::ClusterLine => "cluster-line".into(),
            StateFamily::GraphZPair => "graph-z-pair".into(),
            StateFamily::Section5 => "section5".into(),
        }
    }

    /// The mutually orthogonal member states at system size `n`.
    pub fn members(&self, n: usize) -> Result<Vec<StateVector>> {
        match self {
            StateFamily::GhzPair => Ok(vec![ghz_plus(n), states::ghz(n, Sign::Minus)]),
            StateFamily::ProductZero => Ok(vec![states::product_zero(n)]),
            StateFamily::Dicke { k } => Ok(vec![states::dicke(n, *k)?]),
            StateFamily::WPair => {
                if n < 3 {
                    return Err(Error::InvalidArgument(
                        "w-pair needs N >= 3 for distinct members".into(),
                    ));
                }
                Ok(vec![states::dicke(n, 1)?, states::dicke(n, n - 1)?])
            }
            StateFamily::PhaseFamily { m } => states::phase_family_all(n, *m),
            StateFamily::GhzProduct { m } => states::ghz_product_family_all(n, *m),
            StateFamily::LogicalGhz { m } => {
                let groups = logical_groups(n, *m)?;
                Ok(vec![
                    states::logical_ghz(groups, *m, Sign::Plus)?,
                    states::logical_ghz(groups, *m, Sign::Minus)?,
                ])
            }
            StateFamily::ClusterLine => Ok(vec![states::graph_state(&GraphSpec::line(n)?)]),
            StateFamily::GraphZPair => {
                let (g, zg) = graph_z_branches(n)?;
                let sup = |sign: f64| {
                    StateVector::new_normalized(
                        n,
                        (g.amplitudes() + zg.amplitudes().scale(sign)) / c(2f64.sqrt()),
                    )
                    .map(StateVector::canonical_phase)
                };
                Ok(vec![sup(1.0)?, sup(-1.0)?])
            }
            StateFamily::Section5 => {
                let s = states::section5_counterexample(n)?;
                Ok(vec![s.psi, s.xi1])
            }
        }
    }

    /// The first member; the state whose certifiability a sweep tracks.
    pub fn primary(&self, n: usize) -> Result<StateVector> {
        Ok(self.members(n)?.remove(0))
    }

    /// The canonical orthogonal pair of the family.
    pub fn pair(&self, n: usize) -> Result<(StateVector, StateVector)> {
        let mut members = self.members(n)?;
        if members.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "family '{}' has a single member; no pairwise distance",
                self.name()
            )));
        }
        let b = members.swap_remove(1);
        let a = members.swap_remove(0);
        Ok((a, b))
    }

    /// Branch decomposition `(psi_0, psi_1)` when the primary member is a
    /// macroscopic superposition `(psi_0 + psi_1)/sqrt(2)`.
    pub fn branches(&self, n: usize) -> Result<Option<(StateVector, StateVector)>> {
        match self {
            StateFamily::GhzPair => Ok(Some((
                states::product_zero(n),
                StateVector::basis_state(n, (1usize << n) - 1)?,
            ))),
            StateFamily::WPair => {
                let (a, b) = self.pair(n)?;
                Ok(Some((a, b)))
            }
            StateFamily::LogicalGhz { m } => {
                let groups = logical_groups(n, *m)?;
                Ok(Some(states::logical_ghz_branches(groups, *m)?))
            }
            StateFamily::GraphZPair => Ok(Some(graph_z_branches(n)?)),
            _ => Ok(None),
        }
    }

    /// The family's closed-form certifiability bound at `(n, p)`, when one
    /// exists.
    pub fn bound(&self, n: usize, p: f64) -> Result<(String, f64, BoundSide)> {
        match self {
            StateFamily::GhzPair => Ok((
                "macro-upper".into(),
                macro_upper_bound(n, n, p)?,
                BoundSide::Upper,
            )),
            StateFamily::ProductZero => {
                if n == 0 {
                    return Err(Error::InvalidArgument("N must be positive".into()));
                }
                Ok(("witness-lower".into(), p / n as f64, BoundSide::Lower))
            }
            StateFamily::Dicke { k } => {
                let h = hamiltonians::dicke_hamiltonian(n, *k)?;
                Ok(("prop1-lower".into(), prop1_bound(&h, p)?, BoundSide::Lower))
            }
            StateFamily::ClusterLine => {
                let h = hamiltonians::graph_hamiltonian(&GraphSpec::line(n)?);
                Ok(("prop1-lower".into(), prop1_bound(&h, p)?, BoundSide::Lower))
            }
            StateFamily::LogicalGhz { m } => {
                let groups = logical_groups(n, *m)?;
                Ok((
                    "macro-upper".into(),
                    macro_upper_bound(n, groups, p)?,
                    BoundSide::Upper,
                ))
            }
            StateFamily::GhzProduct { m } => {
                // The canonical pair differs in exactly one GHZ block of
                // n/m qubits, so its coherence decays at least as fast as
                // that block's.
                if *m == 0 || n % m != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "group count {m} must divide N = {n}"
                    )));
                }
                let q = 1.0 - (1.0 - p).powi((n / m) as i32);
                Ok(("macro-upper".into(), q, BoundSide::Upper))
            }
            StateFamily::GraphZPair => {
                let groups = line_stabilizer_partition(n)?;
                let mut bound = 1.0;
                for g in &groups {
                    bound *= 1.0 - (1.0 - p).powi(g.len() as i32);
                }
                Ok(("macro-upper".into(), bound, BoundSide::Upper))
            }
            StateFamily::WPair | StateFamily::PhaseFamily { .. } | StateFamily::Section5 => {
                Err(Error::InvalidArgument(format!(
                    "family '{}' has no closed-form bound",
                    self.name()
                )))
            }
        }
    }
}

fn ghz_plus(n: usize) -> StateVector {
    states::ghz(n, Sign::Plus)
}

fn logical_groups(n: usize, m: usize) -> Result<usize> {
    if m == 0 || n % m != 0 {
        return Err(Error::InvalidArgument(format!(
            "block size {m} must divide N = {n}"
        )));
    }
    Ok(n / m)
}

/// Branches of the graph-state superposition on the line graph:
/// `|G>` and `Z^(x)N |G>`.
fn graph_z_branches(n: usize) -> Result<(StateVector, StateVector)> {
    let g = states::graph_state(&GraphSpec::line(n)?);
    let mut amps = g.amplitudes().clone();
    for idx in 0..amps.len() {
        if idx.count_ones() % 2 == 1 {
            amps[idx] = -amps[idx];
        }
    }
    let zg = StateVector::new(n, amps)?;
    Ok((g, zg))
}

/// Disjoint qubit groups covering the line graph such that each group
/// contains the full support of one stabilizer: `{0, 1}` (first vertex's
/// stabilizer), then blocks of three around interior vertices; leftover
/// qubits join the last group.
pub fn line_stabilizer_partition(n: usize) -> Result<Vec<Vec<usize>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "line partition needs at least 2 qubits".into(),
        ));
    }
    let mut groups: Vec<Vec<usize>> = vec![vec![0, 1]];
    let mut next = 2usize;
    while n - next >= 3 {
        groups.push(vec![next, next + 1, next + 2]);
        next += 3;
    }
    match n - next {
        0 => {}
        // The trailing vertex pair supports the last vertex's stabilizer.
        2 => groups.push(vec![n - 2, n - 1]),
        // A single leftover qubit supports no stabilizer; absorb it.
        _ => groups.last_mut().unwrap().push(next),
    }
    Ok(groups)
}
