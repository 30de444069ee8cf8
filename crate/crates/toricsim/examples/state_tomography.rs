//! Pauli-basis state tomography of the protocol states: extract all 256
//! coefficients c_P = Tr(ρP), reconstruct the density matrix, score the
//! fidelity, and show the ±0.5 bar pattern the corner entries form.
//!
//! ```bash
//! cargo run --example state_tomography
//! ```

use toricsim::anyon::{ghz_state, run_braid_experiment, Snapshot, Variant};
use toricsim::engine::DensityMatrix;
use toricsim::tomography::{
    bar_export, pauli_index, readout_library, tomograph_sampled, tomograph_scored,
};

fn main() -> toricsim::Result<()> {
    let library = readout_library(4)?;
    println!(
        "readout library: {} settings, e.g. {} {} {}",
        library.len(),
        library[0].label(),
        library[1].label(),
        library[2].label(),
    );

    let rho = DensityMatrix::from_pure(&ghz_state());
    let result = tomograph_scored(&rho, &ghz_state(), "xi")?;
    println!(
        "\nGHZ tomography ({} coefficients):",
        result.coefficients().len()
    );
    for label in ["XXXX", "ZZII", "ZIII", "YYXX"] {
        let c = result.coefficient_named(label)?;
        let setting = result
            .setting_for(pauli_index(&label.parse()?)?)?
            .unwrap_or("-");
        println!("  c_{label} = {c:+.4}   (readout {setting})");
    }
    println!(
        "  Parseval sum = {:.6} (pure state: 2^n = 16)",
        result.parseval_sum()
    );
    println!(
        "  round-trip |rho' - rho| = {:.2e}",
        result.reconstructed().max_entry_distance(&rho)?
    );
    println!(
        "  fidelity vs {}: {:.6}",
        result.target_label().unwrap(),
        result.fidelity().unwrap()
    );

    // The braid output flips the sign of the off-diagonal corner bars.
    let record = run_braid_experiment(Variant::Braid)?;
    let Snapshot::Pure { state } = &record.snapshot_final else {
        unreachable!("exact runs record pure snapshots");
    };
    let braid_rho = DensityMatrix::from_pure(state);
    println!("\nbraid-output corner bars:");
    for bar in bar_export(&braid_rho) {
        if bar.real.abs() > 1e-9 {
            println!("  ({}, {}) -> {:+.4}", bar.row, bar.col, bar.real);
        }
    }

    // Finite-shot mode: binomial estimates instead of exact expectations.
    let sampled = tomograph_sampled(&braid_rho, 1_000_000, 7)?;
    println!(
        "\nsampled (10^6 shots): c_XXXX = {:+.4}, exact {:+.4}",
        sampled.coefficient_named("XXXX")?,
        tomograph_scored(&braid_rho, state, "t1")?.coefficient_named("XXXX")?,
    );
    Ok(())
}
