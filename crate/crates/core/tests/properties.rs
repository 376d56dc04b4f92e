//! Cross-module invariants: the bound sandwich, local-unitary invariance
//! and monotonicity of the exact value, ancilla padding, and the decay
//! classes of the standard fixtures.

use certilab_core::certify::{
    certifiability_exact, classify_decay, pairwise_noisy_distance, scaling_sweep, DecayClass,
    OptimizerOptions, SweepQuantity, PAIRWISE_N_CAP,
};
use certilab_core::channels::depolarize_all;
use certilab_core::confuse::confusability_matrix;
use certilab_core::family::{BoundSide, StateFamily};
use certilab_core::hamiltonians::{dicke_hamiltonian, pad_to_uniform_weight};
use certilab_core::hilbert::{apply_local_unitary, trace_distance, StateVector};
use certilab_core::sampling;
use certilab_core::states::{self, section5_counterexample};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every computable closed-form bound brackets the exact value on the
/// paper's fixtures.
#[test]
fn bound_sandwich_on_fixtures() {
    let n = 4usize;
    let families = [
        StateFamily::ProductZero,
        StateFamily::GhzPair,
        StateFamily::Dicke { k: 2 },
        StateFamily::ClusterLine,
    ];
    for family in &families {
        for &p in &[0.7, 0.9, 0.99] {
            let opts = OptimizerOptions::default().with_seed(7_000 + n as u64);
            let psi = family.primary(n).unwrap();
            let mut result = certifiability_exact(&psi, p, &opts).unwrap();
            let (name, bound, side) = family.bound(n, p).unwrap();
            result = match side {
                BoundSide::Lower => result.with_lower_bound(&name, bound),
                BoundSide::Upper => result.with_upper_bound(&name, bound),
            };
            let violations = result.bound_violations(1e-6);
            assert!(
                violations.is_empty(),
                "{} at p = {p}: {violations:?}",
                family.name()
            );
        }
    }
}

/// The exact value is invariant under local unitary rotations of the input
/// up to optimizer tolerance.
#[test]
fn local_unitary_invariance_of_exact_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(512);
    let psi = states::ghz(3, states::Sign::Plus);
    let us = sampling::random_local_unitaries(3, &mut rng);
    let rotated = apply_local_unitary(&psi, &us).unwrap();
    let opts = OptimizerOptions::default().with_seed(17);
    let a = certifiability_exact(&psi, 0.9, &opts).unwrap().value;
    let b = certifiability_exact(&rotated, 0.9, &opts).unwrap().value;
    assert!(
        (a - b).abs() <= 2e-3,
        "LU invariance violated: {a} vs {b}"
    );
}

/// The exact value is nondecreasing in the retention probability.
#[test]
fn monotonicity_in_p() {
    for family in [StateFamily::GhzPair, StateFamily::ProductZero] {
        let psi = family.primary(3).unwrap();
        let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
        let values: Vec<f64> = grid
            .iter()
            .map(|&p| {
                certifiability_exact(&psi, p, &OptimizerOptions::default().with_seed(23))
                    .unwrap()
                    .value
            })
            .collect();
        for w in values.windows(2) {
            assert!(
                w[1] >= w[0] - 1e-5,
                "{}: not monotone: {values:?}",
                family.name()
            );
        }
    }
}

/// Appending ancilla qubits in `|0>` changes neither side of the noisy
/// trace distance (the identity behind weight padding).
#[test]
fn ancilla_padding_preserves_noisy_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let psi = sampling::haar_state(2, &mut rng);
    let phi = sampling::haar_state(2, &mut rng);
    let p = 0.8;
    let d = pairwise_noisy_distance(&psi, &phi, p).unwrap();
    let pad = states::product_zero(2);
    let d_padded = pairwise_noisy_distance(&psi.tensor(&pad), &phi.tensor(&pad), p).unwrap();
    assert!((d - d_padded).abs() < 1e-10);

    // And the padded Hamiltonian exists with uniform weight.
    let h = dicke_hamiltonian(2, 1).unwrap();
    let padded = pad_to_uniform_weight(&h, h.locality()).unwrap();
    assert!(padded.terms().iter().all(|t| t.weight() == h.locality()));
}

/// Classification of the four standard fixtures.
#[test]
fn fixture_decay_classes() {
    let p = 0.9;

    let cluster = scaling_sweep(
        &StateFamily::ClusterLine,
        &(2..=6).collect::<Vec<_>>(),
        p,
        SweepQuantity::Exact,
        &OptimizerOptions::default().with_seed(31),
        PAIRWISE_N_CAP,
    )
    .unwrap();
    let cluster_fit = classify_decay(&cluster).unwrap();
    assert_eq!(
        cluster_fit.class,
        DecayClass::Polynomial,
        "cluster exact sweep: {cluster_fit:?}"
    );

    let phase = scaling_sweep(
        &StateFamily::PhaseFamily { m: 2 },
        &[4, 6, 8, 10],
        p,
        SweepQuantity::Pairwise,
        &OptimizerOptions::default(),
        PAIRWISE_N_CAP,
    )
    .unwrap();
    let phase_fit = classify_decay(&phase).unwrap();
    assert_eq!(
        phase_fit.class,
        DecayClass::Exponential,
        "phase-family pairwise sweep: {phase_fit:?}"
    );
}

/// All pairs of the 2^m-member GHZ product family decay exponentially.
#[test]
fn ghz_product_family_pairs_all_exponential() {
    let cm = confusability_matrix(&StateFamily::GhzProduct { m: 2 }, 0.9, &[4, 6, 8, 10])
        .unwrap();
    assert_eq!(cm.classifications.len(), 6);
    for pc in &cm.classifications {
        assert_eq!(
            pc.fit.class,
            DecayClass::Exponential,
            "pair ({}, {}): {:?}",
            pc.i,
            pc.j,
            pc.fit
        );
    }
}

/// All off-diagonal pairs of the phase family are confusable.
#[test]
fn phase_family_matrix_all_exponential() {
    let cm = confusability_matrix(&StateFamily::PhaseFamily { m: 2 }, 0.9, &[4, 6, 8])
        .unwrap();
    // Three sweep points: classifications are skipped, distances and
    // orthogonality still verified by construction.
    assert!(cm.classifications.is_empty());
    let cm = confusability_matrix(&StateFamily::PhaseFamily { m: 2 }, 0.9, &[4, 6, 8, 10])
        .unwrap();
    for pc in &cm.classifications {
        assert_eq!(
            pc.fit.class,
            DecayClass::Exponential,
            "pair ({}, {}): {:?}",
            pc.i,
            pc.j,
            pc.fit
        );
    }
}

/// The counterexample state is confusable with both equal-weight
/// combinations of phi_1 and phi_2 but not with phi_1 itself, which stays
/// separated by the constant witness gap.
#[test]
fn section5_confusability_structure() {
    let p = 0.9;
    let sizes = [4usize, 6, 8, 10];

    let classify_pair = |pick: fn(&states::Section5States) -> (StateVector, StateVector)| {
        let records: Vec<_> = sizes
            .iter()
            .map(|&n| {
                let s = section5_counterexample(n).unwrap();
                let (a, b) = pick(&s);
                let d = pairwise_noisy_distance(&a, &b, p).unwrap();
                certilab_core::certify::SweepRecord {
                    family: "section5".into(),
                    n,
                    p,
                    quantity: "distance".into(),
                    kind: "pairwise".into(),
                    value: d,
                }
            })
            .collect();
        classify_decay(&records).unwrap()
    };

    let xi1_fit = classify_pair(|s| (s.psi.clone(), s.xi1.clone()));
    assert_eq!(xi1_fit.class, DecayClass::Exponential, "{xi1_fit:?}");
    let xi2_fit = classify_pair(|s| (s.psi.clone(), s.xi2.clone()));
    assert_eq!(xi2_fit.class, DecayClass::Exponential, "{xi2_fit:?}");

    // psi vs phi_1 stays bounded below by the witness gap p^2/2, so it
    // cannot decay exponentially.
    let phi1_fit = classify_pair(|s| (s.psi.clone(), s.phi1.clone()));
    assert_ne!(phi1_fit.class, DecayClass::Exponential, "{phi1_fit:?}");
    for &n in &sizes {
        let s = section5_counterexample(n).unwrap();
        let d = pairwise_noisy_distance(&s.psi, &s.phi1, p).unwrap();
        assert!(d >= p * p / 2.0 - 1e-10, "N = {n}: D = {d}");
    }
}

/// Channel composability ties the monotonicity check to first principles:
/// E_(p1 p2) = E_(p1) o E_(p2).
#[test]
fn channel_composability() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let rho = sampling::random_density_matrix(3, &mut rng);
    let (p1, p2) = (0.8, 0.7);
    let composed = depolarize_all(&depolarize_all(&rho, p2).unwrap(), p1).unwrap();
    let direct = depolarize_all(&rho, p1 * p2).unwrap();
    assert!(trace_distance(&composed, &direct).unwrap() < 1e-12);
}
