//! Seeded random states and operators.
//!
//! Every generator takes the RNG explicitly; callers derive one stream per
//! task so parallel and serial runs produce identical results.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::hilbert::{c, dim_of, CMatrix, CVector, Complex, DensityMatrix, StateVector};

fn gaussian_complex(rng: &mut impl Rng) -> Complex {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(re, im)
}

/// Haar-random pure state on `n_qubits` qubits.
pub fn haar_state(n_qubits: usize, rng: &mut impl Rng) -> StateVector {
    let v = haar_unit_vector(dim_of(n_qubits), rng);
    StateVector::new(n_qubits, v).expect("normalized by construction")
}

/// Haar-random unit vector of the given dimension.
pub fn haar_unit_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    let v = DVector::from_fn(dim, |_, _| gaussian_complex(rng));
    let norm = v.norm();
    v / c(norm)
}

/// Full-rank random density matrix (normalized Wishart).
pub fn random_density_matrix(n_qubits: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = dim_of(n_qubits);
    let a = DMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let w = &a * a.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(n_qubits, w / c(tr)).expect("Wishart matrices are valid states")
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let a = DMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    (&a + a.adjoint()) * c(0.5)
}

/// Haar-random 2x2 unitary (QR of a Ginibre matrix with phase fix).
pub fn random_unitary_2x2(rng: &mut impl Rng) -> CMatrix {
    let a = DMatrix::from_fn(2, 2, |_, _| gaussian_complex(rng));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..2 {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..2 {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// One Haar-random single-qubit unitary per qubit.
pub fn random_local_unitaries(n_qubits: usize, rng: &mut impl Rng) -> Vec<CMatrix> {
    (0..n_qubits).map(|_| random_unitary_2x2(rng)).collect()
}
