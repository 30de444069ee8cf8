//! The four-qubit interference experiment: braid an m particle around an
//! e particle and read the statistical phase off the corner coherence.
//!
//! The protected GHZ state (|0000⟩ + |1111⟩)/√2 plays the toric-code
//! ground state of the reduced register. The braid variant creates an
//! e pair (√Z), carries an m particle around one of them (four X gates),
//! and annihilates the pair (√Z⁻¹); the control variant drives the same
//! loop with no anyon inside. Exchange statistics show up as the sign of
//! ⟨0000|ρ|1111⟩: −0.5 after the braid, +0.5 for the control.
//!
//! ```bash
//! cargo run --example braid_interference
//! ```

use toricsim::anyon::{run_braid_experiment, Variant};

fn main() -> toricsim::Result<()> {
    for variant in [Variant::Braid, Variant::Control] {
        let record = run_braid_experiment(variant)?;
        record.validate()?;
        let phase = record.extracted_phase_complex();
        let corner = record.snapshot_final.corner_coherence();
        println!("variant: {}", variant.as_str());
        println!("  initial state : {}", record.initial_label);
        println!("  final time    : {}", record.final_time_label);
        println!(
            "  corner bar    : <0000|rho|1111> = {:+.4}{:+.4}i",
            corner.re, corner.im
        );
        println!(
            "  phase         : {:+.6}{:+.6}i (expected {:+.0})",
            phase.re,
            phase.im,
            variant.expected_phase().re
        );
        println!();
    }
    println!("the braid flips the corner bar to -0.5; the empty loop leaves it at +0.5");
    Ok(())
}
