//! Multi-start projected subgradient descent for the certifiability
//! minimization over the orthogonal complement of the input state.
//!
//! The objective `f(u) = D[E(psi), E(V u)]` on unit vectors `u` is nonconvex;
//! restarts combine deterministic seeds (complement basis vectors plus
//! analytic candidates such as the sign-flipped GHZ partner) with
//! Haar-random starts on per-restart RNG streams, so results are independent
//! of scheduling.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels;
use crate::hilbert::{
    c, eig_hermitian_unchecked, trace_norm_hermitian_unchecked, CMatrix, CVector, StateVector,
};
use crate::sampling;
use crate::states::{self, Sign};

/// Options controlling the certifiability search.
#[derive(Debug, Clone)]
pub struct OptimizerOptions {
    /// Number of descent restarts.
    pub restarts: usize,
    /// Global budget of objective evaluations, split evenly across restarts.
    pub max_evals: usize,
    /// Convergence window: stop when the relative improvement over this many
    /// iterations falls below `rel_tol`.
    pub stall_window: usize,
    /// Relative improvement threshold for convergence.
    pub rel_tol: f64,
    /// Hard iteration cap per restart.
    pub max_iterations: usize,
    /// Base seed for the per-restart RNG streams.
    pub seed: u64,
    /// Largest admissible qubit count for the exact minimization.
    pub n_cap: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_evals: 50_000,
            stall_window: 20,
            rel_tol: 1e-9,
            max_iterations: 300,
            seed: 0,
            n_cap: 8,
        }
    }
}

impl OptimizerOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Diagnostics of one certifiability search.
#[derive(Debug, Clone)]
pub struct OptimizerReport {
    pub restarts_used: usize,
    pub total_iterations: usize,
    pub function_evals: usize,
    /// Projected gradient norm at the best point found.
    pub final_grad_norm: f64,
    /// True when the best restart terminated through the stall criterion
    /// rather than by exhausting its budget share.
    pub converged: bool,
}

pub(crate) struct SearchOutcome {
    pub value: f64,
    pub argmin: CVector,
    pub report: OptimizerReport,
}

struct Objective {
    e_psi: CMatrix,
    basis: CMatrix,
    p: f64,
    evals: usize,
}

impl Objective {
    /// Objective value only (eigenvalues of the difference operator).
    fn value(&mut self, u: &CVector) -> f64 {
        self.evals += 1;
        0.5 * trace_norm_hermitian_unchecked(&self.delta(u))
    }

    fn delta(&self, u: &CVector) -> CMatrix {
        let phi = &self.basis * u;
        let rho_phi = &phi * phi.adjoint();
        let e_phi = channels::apply_to_operator(&rho_phi, self.p)
            .expect("validated channel parameters");
        &self.e_psi - e_phi
    }

    /// Value, trace-norm subgradient direction in `u`-coordinates, and the
    /// projected gradient norm at `u`.
    fn value_and_direction(&mut self, u: &CVector) -> (f64, CVector, f64) {
        self.evals += 1;
        let delta = self.delta(u);
        let (values, vectors) = eig_hermitian_unchecked(&delta);
        let f = 0.5 * values.iter().map(|l| l.abs()).sum::<f64>();
        // S = sign(Delta); eigenvalues below 1e-12 in magnitude contribute 0.
        let n = delta.nrows();
        let mut sign = CMatrix::zeros(n, n);
        for (i, l) in values.iter().enumerate() {
            if l.abs() >= 1e-12 {
                let col = vectors.column(i);
                let s = if *l > 0.0 { 1.0 } else { -1.0 };
                sign += (col * col.adjoint()).scale(s);
            }
        }
        // d f = -Re <V^H E(S) V u, du>, so the descent direction is the
        // projection of g = V^H E(S) V u onto the tangent space at u.
        let damped_sign =
            channels::apply_to_operator(&sign, self.p).expect("validated channel parameters");
        let g = self.basis.adjoint() * (damped_sign * (&self.basis * u));
        let radial = u.dotc(&g);
        let direction = &g - u * radial;
        let grad_norm = direction.norm();
        (f, direction, grad_norm)
    }
}

struct RestartResult {
    value: f64,
    u: CVector,
    iterations: usize,
    evals: usize,
    grad_norm: f64,
    converged: bool,
}

fn run_restart(
    objective: &mut Objective,
    start: CVector,
    eval_budget: usize,
    opts: &OptimizerOptions,
) -> RestartResult {
    let mut u = start;
    let start_evals = objective.evals;
    let (mut f, mut direction, mut grad_norm) = objective.value_and_direction(&u);
    let mut history = vec![f];
    let mut alpha_prev = 1.0f64;
    let mut iterations = 0usize;
    let mut converged = false;

    for _ in 0..opts.max_iterations {
        if objective.evals - start_evals >= eval_budget {
            break;
        }
        if grad_norm < 1e-14 {
            converged = true;
            break;
        }
        iterations += 1;
        // Backtracking line search with warm-started step size.
        let mut alpha = (alpha_prev * 2.0).min(1e3);
        let mut accepted = false;
        for _ in 0..60 {
            if objective.evals - start_evals >= eval_budget {
                break;
            }
            let mut trial = &u + &direction * c(alpha);
            let norm = trial.norm();
            trial /= c(norm);
            let f_trial = objective.value(&trial);
            if f_trial < f - 1e-4 * alpha * grad_norm * grad_norm {
                u = trial;
                f = f_trial;
                alpha_prev = alpha;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            // No descent along the subgradient at line-search resolution.
            converged = true;
            break;
        }
        let (f_new, dir_new, gn_new) = objective.value_and_direction(&u);
        f = f_new.min(f);
        direction = dir_new;
        grad_norm = gn_new;
        history.push(f);
        if history.len() > opts.stall_window {
            let f_old = history[history.len() - 1 - opts.stall_window];
            if f_old - f < opts.rel_tol * f.max(1e-300) {
                converged = true;
                break;
            }
        }
    }

    RestartResult {
        value: f,
        u,
        iterations,
        evals: objective.evals - start_evals,
        grad_norm,
        converged,
    }
}

/// Deterministic starting points: complement basis vectors, projected
/// computational basis states, and analytic sign-flip candidates when the
/// input matches a known family.
fn deterministic_seeds(psi: &StateVector, basis: &CMatrix, limit: usize) -> Vec<CVector> {
    let dim_c = basis.ncols();
    let mut seeds: Vec<CVector> = Vec::new();

    let push_state = |candidate: &StateVector, seeds: &mut Vec<CVector>| {
        if candidate.inner(psi).norm() > 1.0 - 1e-9 {
            return;
        }
        let u = basis.adjoint() * candidate.amplitudes();
        let norm = u.norm();
        if norm > 1e-6 {
            seeds.push(u / c(norm));
        }
    };

    let n = psi.n_qubits();
    // Sign-flipped partners of recognizable families.
    for (family, partner) in [
        (states::ghz(n, Sign::Plus), states::ghz(n, Sign::Minus)),
        (states::ghz(n, Sign::Minus), states::ghz(n, Sign::Plus)),
    ] {
        if psi.inner(&family).norm() > 1.0 - 1e-9 {
            push_state(&partner, &mut seeds);
        }
    }
    for k in 0..=n {
        if let Ok(d) = states::dicke(n, k) {
            if psi.inner(&d).norm() > 1.0 - 1e-9 {
                for neighbor in [k.wrapping_sub(1), k + 1] {
                    if let Ok(cand) = states::dicke(n, neighbor) {
                        push_state(&cand, &mut seeds);
                    }
                }
            }
        }
    }
    // Complement basis vectors.
    let mut col = 0;
    while seeds.len() < limit && col < dim_c {
        let mut e = DVector::zeros(dim_c);
        e[col] = c(1.0);
        seeds.push(e);
        col += 1;
    }
    seeds.truncate(limit);
    seeds
}

/// Runs the multi-start search. `e_psi` is the noisy image of `psi` and
/// `basis` the orthonormal complement from `complement_matrix`.
pub(crate) fn minimize_over_complement(
    psi: &StateVector,
    e_psi: CMatrix,
    basis: CMatrix,
    p: f64,
    opts: &OptimizerOptions,
) -> SearchOutcome {
    let dim_c = basis.ncols();
    let restarts = opts.restarts.max(1);
    let budget_per_restart = (opts.max_evals / restarts).max(8);
    let seeds = deterministic_seeds(psi, &basis, restarts.min(dim_c + 4));

    let outcomes: Vec<RestartResult> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut objective = Objective {
                e_psi: e_psi.clone(),
                basis: basis.clone(),
                p,
                evals: 0,
            };
            let start = if r < seeds.len() {
                seeds[r].clone()
            } else {
                let stream = opts
                    .seed
                    .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                    .wrapping_add(r as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(stream);
                sampling::haar_unit_vector(dim_c, &mut rng)
            };
            run_restart(&mut objective, start, budget_per_restart, opts)
        })
        .collect();

    // Deterministic reduction: strictly better value wins, ties go to the
    // earlier restart index.
    let mut best_idx = 0usize;
    for (i, out) in outcomes.iter().enumerate() {
        if out.value < outcomes[best_idx].value {
            best_idx = i;
        }
    }
    let total_iterations: usize = outcomes.iter().map(|o| o.iterations).sum();
    let function_evals: usize = outcomes.iter().map(|o| o.evals).sum();
    let best = &outcomes[best_idx];
    SearchOutcome {
        value: best.value,
        argmin: best.u.clone(),
        report: OptimizerReport {
            restarts_used: restarts,
            total_iterations,
            function_evals,
            final_grad_norm: best.grad_norm,
            converged: best.converged,
        },
    }
}
