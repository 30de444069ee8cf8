//! Pauli-string algebra checked against dense Kronecker matrices.
//!
//! The library composes strings with mask arithmetic and a phase ledger;
//! the oracle multiplies the 2ⁿ×2ⁿ matrices out and compares entries.

mod common;

use common::{max_column_distance, random_pauli, string_matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use toricsim::lattice::TorusLattice;
use toricsim::pauli::{
    all_stabilizers, ground_space_dimension, plaquette_operator, stabilizer_rank, star_operator,
    PauliString,
};

#[test]
fn product_matches_dense_matrix_product() {
    let mut rng = ChaCha12Rng::seed_from_u64(71);
    for n in 1..=5 {
        for _ in 0..60 {
            let a = random_pauli(&mut rng, n, false);
            let b = random_pauli(&mut rng, n, false);
            let product = a.mul(&b).expect("same length");
            let dense = string_matrix(&a) * string_matrix(&b);
            assert!(
                max_column_distance(&dense, &string_matrix(&product)) < 1e-12,
                "mask/phase product disagrees with dense product for {a} * {b}"
            );
        }
    }
}

#[test]
fn commutation_matches_dense_commutator() {
    let mut rng = ChaCha12Rng::seed_from_u64(72);
    for n in 1..=5 {
        for _ in 0..60 {
            let a = random_pauli(&mut rng, n, false);
            let b = random_pauli(&mut rng, n, false);
            let ma = string_matrix(&a);
            let mb = string_matrix(&b);
            let commutator_norm = max_column_distance(&(&ma * &mb), &(&mb * &ma));
            assert_eq!(
                a.commutes_with(&b).expect("same length"),
                commutator_norm < 1e-12,
                "symplectic commutation test disagrees with [{a}, {b}]"
            );
        }
    }
}

#[test]
fn parsing_round_trips_through_display() {
    let mut rng = ChaCha12Rng::seed_from_u64(73);
    for n in 1..=6 {
        for _ in 0..40 {
            let p = random_pauli(&mut rng, n, false);
            let reparsed: PauliString = p.to_string().parse().expect("own display is parseable");
            assert_eq!(p, reparsed);
        }
    }
}

/// Star and plaquette operators are hermitian, square to the identity,
/// and every star commutes with every plaquette — checked on the dense
/// 256×256 matrices for k = 2. Products are probed on random columns
/// (M(Mv) = v and A(Bv) = B(Av)) to keep the cost linear in the dimension.
#[test]
fn stabilizer_matrix_identities_k2() {
    let lattice = TorusLattice::new(2).expect("k = 2 is valid");
    let dim = 1usize << lattice.n_qubits();
    let mut rng = ChaCha12Rng::seed_from_u64(74);
    let probes: Vec<nalgebra::DMatrix<num_complex::Complex64>> = (0..6)
        .map(|_| {
            nalgebra::DMatrix::from_fn(dim, 1, |_, _| {
                common::c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            })
        })
        .collect();
    let stars: Vec<PauliString> = (0..lattice.n_vertices())
        .map(|s| star_operator(&lattice, s).expect("vertex in range"))
        .collect();
    let plaquettes: Vec<PauliString> = (0..lattice.n_faces())
        .map(|p| plaquette_operator(&lattice, p).expect("face in range"))
        .collect();
    for op in stars.iter().chain(plaquettes.iter()) {
        let m = string_matrix(op);
        assert!(
            max_column_distance(&m, &m.adjoint()) < 1e-12,
            "{op} not hermitian"
        );
        for v in &probes {
            assert!(
                max_column_distance(&(&m * (&m * v)), v) < 1e-10,
                "{op}² ≠ I"
            );
        }
    }
    for a in &stars {
        for b in &plaquettes {
            let (ma, mb) = (string_matrix(a), string_matrix(b));
            for v in &probes {
                assert!(
                    max_column_distance(&(&ma * (&mb * v)), &(&mb * (&ma * v))) < 1e-10,
                    "[{a}, {b}] ≠ 0"
                );
            }
        }
    }
}

/// Ground-space dimension by exhaustive subset enumeration.
///
/// tr ∏ᵍ (I+g)/2 = 2⁻ᵐ Σ_S tr(∏_{g∈S} g), and a product of stabilizer
/// generators has zero trace unless it multiplies out to the identity.
/// Stars are pure X and plaquettes pure Z, so a subset multiplies to the
/// identity exactly when the star masks XOR to zero and the plaquette
/// masks XOR to zero independently (no reordering signs arise). The
/// degeneracy is then 2ⁿ⁻ᵐ times the number of identity subsets — a
/// route that never touches the library's rank computation.
#[test]
fn degeneracy_matches_subset_enumeration() {
    for k in [2usize, 3] {
        let lattice = TorusLattice::new(k).expect("valid size");
        let star_masks: Vec<u64> = (0..lattice.n_vertices())
            .map(|s| star_operator(&lattice, s).expect("in range").x_mask())
            .collect();
        let plaquette_masks: Vec<u64> = (0..lattice.n_faces())
            .map(|p| plaquette_operator(&lattice, p).expect("in range").z_mask())
            .collect();
        let zero_xor_subsets = |masks: &[u64]| -> u64 {
            (0u64..1 << masks.len())
                .filter(|subset| {
                    masks
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| subset >> i & 1 == 1)
                        .fold(0u64, |acc, (_, m)| acc ^ m)
                        == 0
                })
                .count() as u64
        };
        let identity_subsets = zero_xor_subsets(&star_masks) * zero_xor_subsets(&plaquette_masks);
        let n = lattice.n_qubits() as i32;
        let m = (lattice.n_vertices() + lattice.n_faces()) as i32;
        let degeneracy = identity_subsets as f64 * 2f64.powi(n - m);
        assert_eq!(
            degeneracy, 4.0,
            "k = {k}: subset enumeration gives {degeneracy}"
        );
        let generators = all_stabilizers(&lattice).expect("valid lattice");
        let rank = stabilizer_rank(&generators).expect("nonempty generators");
        assert_eq!(
            ground_space_dimension(lattice.n_qubits(), rank).expect("rank fits"),
            degeneracy as u64,
            "k = {k}: rank-based count disagrees with enumeration"
        );
    }
}

#[test]
fn all_stabilizers_matches_per_site_constructors() {
    for k in [2usize, 3] {
        let lattice = TorusLattice::new(k).expect("valid size");
        let all = all_stabilizers(&lattice).expect("valid lattice");
        assert_eq!(all.len(), lattice.n_vertices() + lattice.n_faces());
        for (s, op) in all.iter().take(lattice.n_vertices()).enumerate() {
            assert_eq!(*op, star_operator(&lattice, s).expect("in range"));
        }
        for (p, op) in all.iter().skip(lattice.n_vertices()).enumerate() {
            assert_eq!(*op, plaquette_operator(&lattice, p).expect("in range"));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Products of hermitian strings have unit-modulus phase and the same
    /// support as the symplectic masks predict, verified densely at n ≤ 4.
    #[test]
    fn prop_product_associates(
        seeds in prop::array::uniform3(any::<u64>()),
        n in 1usize..=4,
    ) {
        let mut rng = ChaCha12Rng::seed_from_u64(seeds[0] ^ seeds[1].rotate_left(17));
        let a = random_pauli(&mut rng, n, false);
        let b = random_pauli(&mut rng, n, false);
        let c = random_pauli(&mut rng, n, false);
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let dense = string_matrix(&a) * string_matrix(&b) * string_matrix(&c);
        prop_assert!(max_column_distance(&dense, &string_matrix(&left)) < 1e-12);
    }

    /// Two strings either commute or anticommute; the dense matrices decide
    /// which, and the symplectic predicate must agree.
    #[test]
    fn prop_commute_or_anticommute(
        seed in any::<u64>(),
        n in 1usize..=4,
    ) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_pauli(&mut rng, n, true);
        let b = random_pauli(&mut rng, n, true);
        let ma = string_matrix(&a);
        let mb = string_matrix(&b);
        let ab = &ma * &mb;
        let ba = &mb * &ma;
        let commutes = max_column_distance(&ab, &ba) < 1e-12;
        let anticommutes = max_column_distance(&ab, &(-&ba)) < 1e-12;
        prop_assert!(commutes ^ anticommutes);
        prop_assert_eq!(a.commutes_with(&b).unwrap(), commutes);
    }
}
