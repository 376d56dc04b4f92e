//! certilab: certifiability of N-qubit pure states under local depolarizing
//! noise.
//!
//! The library computes the minimal trace distance between the noisy image
//! of a pure state and the noisy image of any orthogonal pure state —
//! exactly, by multi-start subgradient descent over the orthogonal
//! complement — together with the closed-form lower and upper bounds
//! available for product states, gapped unique ground states, GHZ-type
//! superpositions and their generalizations. Desk-scale sweeps over the
//! system size feed a least-squares classifier that separates exponential
//! from polynomial decay.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index,
//! so `|0...0>` is index 0.

pub mod certify;
pub mod channels;
pub mod confuse;
pub mod error;
pub mod family;
pub mod hamiltonians;
pub mod hilbert;
pub mod sampling;
pub mod states;

pub use error::{Error, Result};
