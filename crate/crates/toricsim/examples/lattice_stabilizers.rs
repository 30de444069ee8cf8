//! Stabilizer algebra on k×k torus lattices: star and plaquette operators,
//! their commutation, the GF(2) rank of the generator set, and the
//! resulting four-fold ground-space degeneracy.
//!
//! ```bash
//! cargo run --example lattice_stabilizers
//! ```

use toricsim::lattice::TorusLattice;
use toricsim::pauli::{
    all_stabilizers, ground_space_dimension, plaquette_operator, stabilizer_rank, star_operator,
};

fn main() -> toricsim::Result<()> {
    for k in [2usize, 3] {
        let lattice = TorusLattice::new(k)?;
        let n = lattice.n_qubits();
        println!(
            "k = {k}: {} qubits, {} stars, {} plaquettes",
            n,
            lattice.n_vertices(),
            lattice.n_faces()
        );
        println!("  A_0 = {}", star_operator(&lattice, 0)?);
        println!("  B_0 = {}", plaquette_operator(&lattice, 0)?);

        let generators = all_stabilizers(&lattice)?;
        let mut commuting_pairs = 0usize;
        for a in 0..generators.len() {
            for b in (a + 1)..generators.len() {
                assert!(generators[a].commutes_with(&generators[b])?);
                commuting_pairs += 1;
            }
        }
        println!("  all {commuting_pairs} generator pairs commute");

        let rank = stabilizer_rank(&generators)?;
        let degeneracy = ground_space_dimension(n, rank)?;
        println!(
            "  {} generators, rank {rank} -> ground-space dimension 2^({n}-{rank}) = {degeneracy}",
            generators.len()
        );
        println!();
    }
    println!("two independent product relations leave the rank at 2k^2 - 2: degeneracy 4");
    Ok(())
}
