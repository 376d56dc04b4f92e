//! The certifiability measure: exact minimization of the noisy trace
//! distance over the orthogonal complement, the closed-form bounds, mixture
//! indistinguishability, the epsilon-ball check, and scaling classification.

mod optimizer;

pub use optimizer::{OptimizerOptions, OptimizerReport};

use rayon::prelude::*;
use serde::Serialize;

use crate::channels;
use crate::error::{Error, Result};
use crate::family::StateFamily;
use crate::hamiltonians::{self, PauliHamiltonian};
use crate::hilbert::{
    complement_matrix, partial_trace_op, trace_distance, trace_norm, DensityMatrix,
    Observable, StateVector,
};

/// Default cap for pairwise-distance and bound sweeps.
pub const PAIRWISE_N_CAP: usize = 10;

/// Result of one exact certifiability computation.
#[derive(Debug, Clone)]
pub struct CertificationResult {
    /// Best (smallest) noisy trace distance found; an upper bound on the
    /// true minimum.
    pub value: f64,
    /// The orthogonal state achieving `value`.
    pub argmin_state: StateVector,
    /// Named analytic lower bounds attached by the caller.
    pub lower_bounds: Vec<(String, f64)>,
    /// Named analytic upper bounds attached by the caller.
    pub upper_bounds: Vec<(String, f64)>,
    pub report: OptimizerReport,
}

impl CertificationResult {
    pub fn with_lower_bound(mut self, name: &str, value: f64) -> Self {
        self.lower_bounds.push((name.to_string(), value));
        self
    }

    pub fn with_upper_bound(mut self, name: &str, value: f64) -> Self {
        self.upper_bounds.push((name.to_string(), value));
        self
    }

    /// Soft bound check: descriptions of every violated bound at tolerance
    /// `tol`. A non-empty result flags an optimizer failure rather than a
    /// silent pass.
    pub fn bound_violations(&self, tol: f64) -> Vec<String> {
        let mut violations = Vec::new();
        for (name, bound) in &self.lower_bounds {
            if self.value < bound - tol {
                violations.push(format!(
                    "value {:.9} below lower bound {name} = {bound:.9}",
                    self.value
                ));
            }
        }
        for (name, bound) in &self.upper_bounds {
            if self.value > bound + tol {
                violations.push(format!(
                    "value {:.9} above upper bound {name} = {bound:.9}",
                    self.value
                ));
            }
        }
        violations
    }
}

/// Exact certifiability: minimizes `D[E(psi), E(phi)]` over normalized
/// `phi` in the orthogonal complement of `psi` by multi-start projected
/// subgradient descent. The reported value is the best found, hence an
/// upper bound on the true minimum.
pub fn certifiability_exact(
    psi: &StateVector,
    p: f64,
    opts: &OptimizerOptions,
) -> Result<CertificationResult> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    if psi.n_qubits() > opts.n_cap {
        return Err(Error::CapExceeded {
            requested: psi.n_qubits(),
            cap: opts.n_cap,
        });
    }
    let e_psi = channels::apply_to_operator(psi.density().matrix(), p)?;
    let basis = complement_matrix(psi);
    let outcome = optimizer::minimize_over_complement(psi, e_psi, basis.clone(), p, opts);
    let phi = &basis * outcome.argmin;
    let argmin_state = StateVector::new_normalized(psi.n_qubits(), phi)?.canonical_phase();
    Ok(CertificationResult {
        value: outcome.value,
        argmin_state,
        lower_bounds: Vec::new(),
        upper_bounds: Vec::new(),
        report: outcome.report,
    })
}

/// `D[E(psi), E(phi)]` for two pure states under the product depolarizing
/// channel.
pub fn pairwise_noisy_distance(psi: &StateVector, phi: &StateVector, p: f64) -> Result<f64> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pairwise distance: {} vs {}",
            psi.dim(),
            phi.dim()
        )));
    }
    let a = channels::depolarize_all(&psi.density(), p)?;
    let b = channels::depolarize_all(&phi.density(), p)?;
    trace_distance(&a, &b)
}

/// Witness lower bound `|Tr[A (E(psi) - E(phi))]| / 2`, evaluated through
/// the adjoint identity as `|Tr[E(A) (psi - phi)]| / 2` (the depolarizing
/// Kraus operators are Hermitian). With `p_damped = true` the observable is
/// damped by the channel before evaluation; with `false` it is used as
/// given (a noiseless witness gap) and `p` is ignored.
pub fn witness_lower_bound(
    psi: &StateVector,
    phi: &StateVector,
    witness: &Observable,
    p_damped: bool,
    p: f64,
) -> Result<f64> {
    if psi.dim() != phi.dim() || witness.n_qubits() != psi.n_qubits() {
        return Err(Error::DimensionMismatch(
            "witness bound operands differ in size".into(),
        ));
    }
    if witness.spectral_radius() > 1.0 + 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "witness spectral radius {:.6} exceeds 1; rescale first",
            witness.spectral_radius()
        )));
    }
    let a_eff = if p_damped {
        channels::apply_to_operator(witness.matrix(), p)?
    } else {
        witness.matrix().clone()
    };
    let quad = |state: &StateVector| -> f64 {
        let v = state.amplitudes();
        (v.adjoint() * &a_eff * v)[(0, 0)].re
    };
    Ok(0.5 * (quad(psi) - quad(phi)).abs())
}

/// Lower bound `p^k Delta_hat / 2` for the unique gapped ground state of a
/// `k`-local Hamiltonian, with `Delta_hat` the gap after rescaling the
/// Hamiltonian to unit spectral radius. Refuses degenerate ground spaces.
pub fn prop1_bound(h: &PauliHamiltonian, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    let (scaled, _factor) = hamiltonians::rescale_to_unit_spectral_radius(h)?;
    let info = hamiltonians::spectral_info(&scaled);
    if info.ground_degeneracy != 1 {
        return Err(Error::DegenerateGroundSpace(info.ground_degeneracy));
    }
    if info.gap <= 0.0 {
        return Err(Error::GapBelowThreshold {
            gap: info.gap,
            threshold: f64::MIN_POSITIVE,
        });
    }
    let k = h.locality();
    Ok(p.powi(k as i32) * info.gap / 2.0)
}

/// Upper bound `q^N_eff` with `q = 1 - (1 - p)^(N / N_eff)` for a
/// macroscopic superposition with perfectly distinguishing groups.
pub fn macro_upper_bound(n: usize, n_eff: usize, p: f64) -> Result<f64> {
    if n_eff == 0 || n_eff > n {
        return Err(Error::InvalidArgument(format!(
            "N_eff = {n_eff} outside 1..={n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    let group_size = n as f64 / n_eff as f64;
    let q = 1.0 - (1.0 - p).powf(group_size);
    Ok(q.powi(n_eff as i32))
}

/// Finite-success-probability extension: `[q + eps (1 - q)]^N_eff`.
pub fn epsilon_macro_bound(n_eff: usize, q: f64, eps: f64) -> Result<f64> {
    if n_eff == 0 {
        return Err(Error::InvalidArgument("N_eff must be positive".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidArgument(format!("q = {q} outside [0, 1]")));
    }
    if !(0.0..0.5).contains(&eps) {
        return Err(Error::InvalidArgument(format!(
            "eps = {eps} outside [0, 1/2)"
        )));
    }
    Ok((q + eps * (1.0 - q)).powi(n_eff as i32))
}

/// Distances `D[E(psi), E(rho(a))]` along the mixture family
/// `rho(a) = a psi + (1 - a) phi` for orthogonal `psi`, `phi`. Every value
/// is bounded by the `a = 0` endpoint.
pub fn mixture_family_check(
    psi: &StateVector,
    phi: &StateVector,
    p: f64,
    a_grid: &[f64],
) -> Result<Vec<f64>> {
    if psi.inner(phi).norm() > 1e-10 {
        return Err(Error::InvalidArgument(
            "mixture family requires orthogonal states".into(),
        ));
    }
    let e_psi = channels::depolarize_all(&psi.density(), p)?;
    a_grid
        .iter()
        .map(|&a| {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidArgument(format!(
                    "mixture weight {a} outside [0, 1]"
                )));
            }
            let rho = DensityMatrix::mixture(&[(a, psi), (1.0 - a, phi)])?;
            let e_rho = channels::depolarize_all(&rho, p)?;
            trace_distance(&e_psi, &e_rho)
        })
        .collect()
}

/// `|| Tr_group |psi_0><psi_1| ||_1`: the surviving off-diagonal weight
/// after tracing out a group. Zero for perfectly group-distinguishable
/// branches.
pub fn off_diagonal_group_trace(
    psi0: &StateVector,
    psi1: &StateVector,
    group: &[usize],
) -> Result<f64> {
    if psi0.dim() != psi1.dim() {
        return Err(Error::DimensionMismatch(
            "off-diagonal trace operands differ in size".into(),
        ));
    }
    let off = psi0.amplitudes() * psi1.amplitudes().adjoint();
    let reduced = partial_trace_op(&off, psi0.n_qubits(), group)?;
    Ok(trace_norm(&reduced))
}

/// Epsilon-ball certifiability: the found value must beat both the
/// measurement accuracy `delta` and twice the ball radius `eps`.
pub fn epsilon_ball_certifiable(result: &CertificationResult, delta: f64, eps: f64) -> bool {
    result.value > delta && result.value > 2.0 * eps
}

/// Which quantity a scaling sweep records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepQuantity {
    /// Exact certifiability via the optimizer.
    Exact,
    /// Pairwise noisy distance of the family's canonical pair.
    Pairwise,
    /// The family's closed-form bound.
    Bound,
}

impl SweepQuantity {
    pub fn kind(&self) -> &'static str {
        match self {
            SweepQuantity::Exact => "exact",
            SweepQuantity::Pairwise => "pairwise",
            SweepQuantity::Bound => "bound",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SweepQuantity::Exact),
            "pairwise" => Ok(SweepQuantity::Pairwise),
            "bound" => Ok(SweepQuantity::Bound),
            other => Err(Error::Parse(format!("unknown sweep quantity '{other}'"))),
        }
    }
}

/// One sweep data point.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub family: String,
    pub n: usize,
    pub p: f64,
    /// Descriptive name of the recorded quantity.
    pub quantity: String,
    /// One of `exact`, `pairwise`, `bound`.
    pub kind: String,
    pub value: f64,
}

/// Computes the chosen quantity for one family across system sizes. Exact
/// points run the optimizer with a seed derived from `(opts.seed, N)`;
/// points evaluate in parallel and are returned sorted by `(N, p)`.
pub fn scaling_sweep(
    family: &StateFamily,
    n_list: &[usize],
    p: f64,
    quantity: SweepQuantity,
    opts: &OptimizerOptions,
    pairwise_cap: usize,
) -> Result<Vec<SweepRecord>> {
    let cap = match quantity {
        SweepQuantity::Exact => opts.n_cap,
        _ => pairwise_cap,
    };
    for &n in n_list {
        if n > cap {
            return Err(Error::CapExceeded {
                requested: n,
                cap,
            });
        }
    }
    let mut records = n_list
        .par_iter()
        .map(|&n| -> Result<SweepRecord> {
            let (name, value) = match quantity {
                SweepQuantity::Exact => {
                    let per_point = opts
                        .clone()
                        .with_seed(opts.seed.wrapping_add(n as u64));
                    let res = certifiability_exact(&family.primary(n)?, p, &per_point)?;
                    ("certifiability".to_string(), res.value)
                }
                SweepQuantity::Pairwise => {
                    let (a, b) = family.pair(n)?;
                    ("distance".to_string(), pairwise_noisy_distance(&a, &b, p)?)
                }
                SweepQuantity::Bound => {
                    let (name, value, _side) = family.bound(n, p)?;
                    (name, value)
                }
            };
            Ok(SweepRecord {
                family: family.name(),
                n,
                p,
                quantity: name,
                kind: quantity.kind().to_string(),
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| (a.n, a.p).partial_cmp(&(b.n, b.p)).unwrap());
    Ok(records)
}

/// Decay classification of a scaling sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecayClass {
    Exponential,
    Polynomial,
    Inconclusive,
}

/// Least-squares comparison of the exponential model (`log q` linear in
/// `N`) against the polynomial model (`log q` linear in `log N`).
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub class: DecayClass,
    /// Slope of the winning model: `ln p` for an exponential `p^N` decay,
    /// the power for a polynomial one. For inconclusive fits, the
    /// exponential slope.
    pub rate: f64,
    pub slope_exponential: f64,
    pub slope_polynomial: f64,
    pub rss_exponential: f64,
    pub rss_polynomial: f64,
    /// Set when nonpositive values were clamped to `1e-300` before taking
    /// logarithms.
    pub clamped: bool,
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    (slope, intercept, rss)
}

/// Classifies a sweep with the default residual margin of 2.
pub fn classify_decay(records: &[SweepRecord]) -> Result<DecayFit> {
    classify_decay_with_margin(records, 2.0)
}

/// Classifies a sweep: the winning model must have a residual sum at most
/// `1/margin` times the loser's, and an exponential verdict additionally
/// requires genuine decay. Non-decaying data (both models exact, zero
/// slope) counts as polynomial, matching the certifiable side of the
/// asymptotic dichotomy.
pub fn classify_decay_with_margin(records: &[SweepRecord], margin: f64) -> Result<DecayFit> {
    if records.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "decay classification needs at least 4 records, got {}",
            records.len()
        )));
    }
    let mut sorted: Vec<&SweepRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let mut clamped = false;
    let ns: Vec<f64> = sorted.iter().map(|r| r.n as f64).collect();
    let logs: Vec<f64> = sorted
        .iter()
        .map(|r| {
            if r.value <= 0.0 {
                clamped = true;
                (1e-300f64).ln()
            } else {
                r.value.ln()
            }
        })
        .collect();
    let log_ns: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let (slope_exp, _, rss_exp) = least_squares(&ns, &logs);
    let (slope_pol, _, rss_pol) = least_squares(&log_ns, &logs);

    const SLOPE_EPS: f64 = 1e-9;
    const RSS_TINY: f64 = 1e-20;
    let class = if rss_exp <= rss_pol / margin && slope_exp < -SLOPE_EPS {
        DecayClass::Exponential
    } else if rss_pol <= rss_exp / margin {
        DecayClass::Polynomial
    } else if rss_exp < RSS_TINY && rss_pol < RSS_TINY && slope_exp.abs() < SLOPE_EPS {
        DecayClass::Polynomial
    } else {
        DecayClass::Inconclusive
    };
    let rate = match class {
        DecayClass::Exponential | DecayClass::Inconclusive => slope_exp,
        DecayClass::Polynomial => slope_pol,
    };
    Ok(DecayFit {
        class,
        rate,
        slope_exponential: slope_exp,
        slope_polynomial: slope_pol,
        rss_exponential: rss_exp,
        rss_polynomial: rss_pol,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::eigendecompose_hermitian;
    use crate::sampling;
    use crate::states::{self, ghz, Sign};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small_opts(seed: u64) -> OptimizerOptions {
        OptimizerOptions {
            restarts: 16,
            ..OptimizerOptions::default().with_seed(seed)
        }
    }

    #[test]
    fn exact_at_p_one_is_unity() {
        let psi = ghz(2, Sign::Plus);
        let res = certifiability_exact(&psi, 1.0, &small_opts(1)).unwrap();
        assert_relative_eq!(res.value, 1.0, epsilon = 1e-9);
        assert!(psi.inner(&res.argmin_state).norm() < 1e-9);
    }

    #[test]
    fn exact_at_p_zero_vanishes() {
        let psi = states::product_zero(2);
        let res = certifiability_exact(&psi, 0.0, &small_opts(2)).unwrap();
        assert!(res.value < 1e-12);
    }

    #[test]
    fn exact_product_state_matches_brute_force_n2() {
        // Independent oracle: seeded random search over the 3-dimensional
        // complement sphere with 10^6 samples.
        let psi = states::product_zero(2);
        let p = 0.9;
        let res = certifiability_exact(&psi, p, &OptimizerOptions::default().with_seed(7))
            .unwrap();
        assert!(res.value >= p / 2.0 - 1e-7);
        assert!(res.report.converged);

        let e_psi = channels::depolarize_all(&psi.density(), p).unwrap();
        let basis = complement_matrix(&psi);
        let samples = 1_000_000usize;
        let chunk = 10_000usize;
        let best = (0..samples / chunk)
            .into_par_iter()
            .map(|c_idx| {
                let mut rng_local = ChaCha8Rng::seed_from_u64(4242 + c_idx as u64);
                let mut local_best = f64::INFINITY;
                for _ in 0..chunk {
                    let u = sampling::haar_unit_vector(3, &mut rng_local);
                    let phi = &basis * u;
                    let rho = &phi * phi.adjoint();
                    let e_phi = channels::apply_to_operator(&rho, p).unwrap();
                    let d = 0.5
                        * crate::hilbert::trace_norm_hermitian_unchecked(
                            &(e_psi.matrix() - e_phi),
                        );
                    local_best = local_best.min(d);
                }
                local_best
            })
            .reduce(|| f64::INFINITY, f64::min);
        assert!(
            (best - res.value).abs() < 1e-3,
            "optimizer {} vs brute force {}",
            res.value,
            best
        );
        // The descent refines past any random sample.
        assert!(res.value <= best + 1e-9);
    }

    #[test]
    fn pairwise_ghz_distance_is_p_to_the_n() {
        // Oracle: the damped difference operator is
        // p^N (|0..0><1..1| + h.c.), with eigenvalues exactly +-p^N.
        for n in 2..=5usize {
            for &p in &[0.5, 0.9] {
                let d = pairwise_noisy_distance(&ghz(n, Sign::Plus), &ghz(n, Sign::Minus), p)
                    .unwrap();
                assert_relative_eq!(d, p.powi(n as i32), epsilon = 1e-11);

                let dim = crate::hilbert::dim_of(n);
                let mut oracle = crate::hilbert::CMatrix::zeros(dim, dim);
                oracle[(0, dim - 1)] = crate::hilbert::c(p.powi(n as i32));
                oracle[(dim - 1, 0)] = crate::hilbert::c(p.powi(n as i32));
                let (vals, _) = eigendecompose_hermitian(&oracle).unwrap();
                let sum: f64 = vals.iter().map(|l| l.abs()).sum();
                assert_relative_eq!(d, 0.5 * sum, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn pairwise_identical_states_is_zero() {
        let s = states::dicke(3, 1).unwrap();
        assert!(pairwise_noisy_distance(&s, &s, 0.8).unwrap() < 1e-13);
    }

    #[test]
    fn pairwise_product_vs_w_meets_bound() {
        let d = pairwise_noisy_distance(
            &states::product_zero(4),
            &states::dicke(4, 1).unwrap(),
            0.9,
        )
        .unwrap();
        assert!(d >= 0.9 / 4.0 - 1e-12);
    }

    #[test]
    fn witness_bound_product_state() {
        let n = 4;
        let p = 0.9;
        let jz = hamiltonians::jz(n);
        let rescaled = jz.scaled(2.0 / n as f64).to_observable().unwrap();
        let psi = states::product_zero(n);
        let w = states::dicke(n, 1).unwrap();
        let bound = witness_lower_bound(&psi, &w, &rescaled, true, p).unwrap();
        assert_relative_eq!(bound, p / n as f64, epsilon = 1e-11);

        // identity witness gives no information
        let id = Observable::new(n, crate::hilbert::CMatrix::identity(16, 16)).unwrap();
        assert!(witness_lower_bound(&psi, &w, &id, true, p).unwrap() < 1e-14);
    }

    #[test]
    fn witness_bound_rejects_large_radius() {
        let n = 4;
        let jz = hamiltonians::jz(n).to_observable().unwrap(); // radius 2
        let psi = states::product_zero(n);
        let w = states::dicke(n, 1).unwrap();
        assert!(witness_lower_bound(&psi, &w, &jz, true, 0.9).is_err());
    }

    #[test]
    fn witness_bound_section5_constant_in_n() {
        let p = 0.9;
        let mut values = Vec::new();
        for n in [4usize, 6] {
            let s = states::section5_counterexample(n).unwrap();
            let (witness, _) = s.witness.rescaled().unwrap();
            let b = witness_lower_bound(&s.psi, &s.phi1, &witness, true, p).unwrap();
            values.push(b);
        }
        assert!(values[0] > 0.0);
        assert_relative_eq!(values[0], values[1], epsilon = 1e-10);
        assert_relative_eq!(values[0], p * p / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn prop1_bound_cluster_state() {
        let graph = crate::states::GraphSpec::line(4).unwrap();
        let h = hamiltonians::graph_hamiltonian(&graph);
        // spectral radius 4, gap 2, locality 3
        let p = 0.9;
        let bound = prop1_bound(&h, p).unwrap();
        assert_relative_eq!(bound, p.powi(3) * 0.25, epsilon = 1e-12);
        assert_relative_eq!(prop1_bound(&h, 1.0).unwrap(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn prop1_bound_refuses_degenerate_ground_space() {
        let h = hamiltonians::neg_jz_squared(3);
        assert!(matches!(
            prop1_bound(&h, 0.9),
            Err(Error::DegenerateGroundSpace(2))
        ));
    }

    #[test]
    fn macro_bound_values() {
        assert_relative_eq!(
            macro_upper_bound(4, 4, 0.9).unwrap(),
            0.9f64.powi(4),
            epsilon = 1e-15
        );
        assert_relative_eq!(macro_upper_bound(4, 2, 0.9).unwrap(), 0.9801, epsilon = 1e-12);
        assert_relative_eq!(macro_upper_bound(6, 2, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(macro_upper_bound(4, 5, 0.9).is_err());
    }

    #[test]
    fn epsilon_macro_bound_values() {
        let q = 0.9;
        assert_relative_eq!(
            epsilon_macro_bound(10, q, 0.1).unwrap(),
            0.91f64.powi(10),
            epsilon = 1e-12
        );
        // eps -> 0 recovers the perfect-distinction bound
        assert_relative_eq!(
            epsilon_macro_bound(5, q, 0.0).unwrap(),
            q.powi(5),
            epsilon = 1e-15
        );
        // monotone in eps
        let lo = epsilon_macro_bound(5, q, 0.05).unwrap();
        let hi = epsilon_macro_bound(5, q, 0.2).unwrap();
        assert!(lo < hi);
        assert!(epsilon_macro_bound(5, q, 0.6).is_err());
    }

    #[test]
    fn mixture_family_interpolates_linearly() {
        let n = 4;
        let p = 0.95;
        let plus = ghz(n, Sign::Plus);
        let minus = ghz(n, Sign::Minus);
        let grid = [0.0, 0.25, 0.5, 1.0];
        let values = mixture_family_check(&plus, &minus, p, &grid).unwrap();
        let pairwise = pairwise_noisy_distance(&plus, &minus, p).unwrap();
        assert_relative_eq!(values[0], pairwise, epsilon = 1e-12);
        assert!(values[3] < 1e-12);
        for (a, v) in grid.iter().zip(&values) {
            assert!(*v <= pairwise + 1e-10);
            // D(E psi, E rho(a)) = (1 - a) * pairwise exactly
            assert_relative_eq!(*v, (1.0 - a) * pairwise, epsilon = 1e-10);
        }
        assert!(values[2] <= p.powi(4));

        let not_orth = states::product_zero(n); // <GHZ|0..0> = 1/sqrt(2)
        assert!(mixture_family_check(&plus, &not_orth, p, &grid).is_err());
    }

    #[test]
    fn off_diagonal_traces() {
        let n = 4;
        let zero = states::product_zero(n);
        let ones = StateVector::basis_state(n, (1 << n) - 1).unwrap();
        for q in 0..n {
            let t = off_diagonal_group_trace(&zero, &ones, &[q]).unwrap();
            assert!(t < 1e-14, "qubit {q}: {t}");
        }
        // psi_0 = psi_1 reduces to the trace of a state
        let t = off_diagonal_group_trace(&zero, &zero, &[0]).unwrap();
        assert_relative_eq!(t, 1.0, epsilon = 1e-12);
        // W vs inverted W: || Tr_1 |W><W~| ||_1 = 2 sqrt(N-1) / N
        let w = states::dicke(n, 1).unwrap();
        let wbar = states::dicke(n, n - 1).unwrap();
        let t = off_diagonal_group_trace(&w, &wbar, &[0]).unwrap();
        assert_relative_eq!(t, 2.0 * 3f64.sqrt() / 4.0, epsilon = 1e-10);
    }

    #[test]
    fn epsilon_ball_decisions() {
        let psi = states::product_zero(1);
        let mk = |value: f64| CertificationResult {
            value,
            argmin_state: psi.clone(),
            lower_bounds: vec![],
            upper_bounds: vec![],
            report: OptimizerReport {
                restarts_used: 0,
                total_iterations: 0,
                function_evals: 0,
                final_grad_norm: 0.0,
                converged: true,
            },
        };
        assert!(epsilon_ball_certifiable(&mk(0.5), 0.1, 0.1));
        assert!(!epsilon_ball_certifiable(&mk(0.15), 0.1, 0.1));
        assert!(!epsilon_ball_certifiable(&mk(0.05), 0.1, 0.01));
    }

    #[test]
    fn sweep_ghz_pairwise() {
        let records = scaling_sweep(
            &StateFamily::GhzPair,
            &[2, 3, 4, 5],
            0.9,
            SweepQuantity::Pairwise,
            &OptimizerOptions::default(),
            PAIRWISE_N_CAP,
        )
        .unwrap();
        assert_eq!(records.len(), 4);
        for r in &records {
            assert_relative_eq!(r.value, 0.9f64.powi(r.n as i32), epsilon = 1e-11);
            assert_eq!(r.kind, "pairwise");
            assert_eq!(r.quantity, "distance");
        }
        // determinism
        let again = scaling_sweep(
            &StateFamily::GhzPair,
            &[2, 3, 4, 5],
            0.9,
            SweepQuantity::Pairwise,
            &OptimizerOptions::default(),
            PAIRWISE_N_CAP,
        )
        .unwrap();
        for (a, b) in records.iter().zip(&again) {
            assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }

    #[test]
    fn sweep_at_p_one_is_flat() {
        let records = scaling_sweep(
            &StateFamily::GhzPair,
            &[2, 3, 4, 5],
            1.0,
            SweepQuantity::Pairwise,
            &OptimizerOptions::default(),
            PAIRWISE_N_CAP,
        )
        .unwrap();
        for r in &records {
            assert_relative_eq!(r.value, 1.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn sweep_respects_caps() {
        let err = scaling_sweep(
            &StateFamily::GhzPair,
            &[11],
            0.9,
            SweepQuantity::Pairwise,
            &OptimizerOptions::default(),
            PAIRWISE_N_CAP,
        );
        assert!(matches!(err, Err(Error::CapExceeded { .. })));
    }

    fn synthetic_records(values: &[(usize, f64)]) -> Vec<SweepRecord> {
        values
            .iter()
            .map(|&(n, value)| SweepRecord {
                family: "synthetic".into(),
                n,
                p: 0.9,
                quantity: "value".into(),
                kind: "bound".into(),
                value,
            })
            .collect()
    }

    #[test]
    fn classify_exponential_synthetic() {
        let recs =
            synthetic_records(&(2..=8).map(|n| (n, 0.9f64.powi(n as i32))).collect::<Vec<_>>());
        let fit = classify_decay(&recs).unwrap();
        assert_eq!(fit.class, DecayClass::Exponential);
        assert_relative_eq!(fit.rate, 0.9f64.ln(), epsilon = 1e-6);
    }

    #[test]
    fn classify_polynomial_synthetic() {
        let recs =
            synthetic_records(&(2..=8).map(|n| (n, 0.9 / n as f64)).collect::<Vec<_>>());
        let fit = classify_decay(&recs).unwrap();
        assert_eq!(fit.class, DecayClass::Polynomial);
        assert_relative_eq!(fit.rate, -1.0, epsilon = 1e-9);
    }

    #[test]
    fn classify_constant_data_is_polynomial() {
        let recs = synthetic_records(&[(4, 0.405), (6, 0.405), (8, 0.405), (10, 0.405)]);
        let fit = classify_decay(&recs).unwrap();
        assert_eq!(fit.class, DecayClass::Polynomial);
        assert!(fit.rate.abs() < 1e-9);
    }

    #[test]
    fn classify_requires_enough_records() {
        let recs = synthetic_records(&[(2, 0.5), (3, 0.4), (4, 0.3)]);
        assert!(classify_decay(&recs).is_err());
    }

    #[test]
    fn classify_flags_clamped_values() {
        let recs = synthetic_records(&[(2, 0.5), (3, 0.0), (4, 0.3), (5, 0.2)]);
        let fit = classify_decay(&recs).unwrap();
        assert!(fit.clamped);
    }

    #[test]
    fn classify_ghz_sweep() {
        let records = scaling_sweep(
            &StateFamily::GhzPair,
            &(2..=8).collect::<Vec<_>>(),
            0.9,
            SweepQuantity::Pairwise,
            &OptimizerOptions::default(),
            PAIRWISE_N_CAP,
        )
        .unwrap();
        let fit = classify_decay(&records).unwrap();
        assert_eq!(fit.class, DecayClass::Exponential);
        assert!((fit.rate - 0.9f64.ln()).abs() < 0.01);
    }

    #[test]
    fn certification_result_bound_bookkeeping() {
        let psi = ghz(3, Sign::Plus);
        let res = certifiability_exact(&psi, 0.9, &small_opts(3))
            .unwrap()
            .with_upper_bound("macro", 0.9f64.powi(3))
            .with_lower_bound("trivial", 0.0);
        assert!(res.bound_violations(1e-7).is_empty());
        let bad = CertificationResult {
            lower_bounds: vec![("impossible".into(), 2.0)],
            ..res
        };
        assert_eq!(bad.bound_violations(1e-7).len(), 1);
    }

    #[test]
    fn exact_cap_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = sampling::haar_state(3, &mut rng);
        let opts = OptimizerOptions {
            n_cap: 2,
            ..OptimizerOptions::default()
        };
        assert!(matches!(
            certifiability_exact(&psi, 0.9, &opts),
            Err(Error::CapExceeded { .. })
        ));
    }
}
