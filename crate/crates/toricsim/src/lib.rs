//! Exact simulation of abelian-anyon braiding on the minimal toric code,
//! together with a pulse-level emulation of a four-spin NMR realization.
//!
//! The crate is organised as a library whose primary interface is the
//! `examples/` directory — one runnable example per major capability —
//! plus a thin `toricsim` binary exposing the same entry points as
//! subcommands.
//!
//! | Example | Capability |
//! |---|---|
//! | `braid_interference` | four-qubit interference braid vs. control |
//! | `lattice_stabilizers` | stabilizer algebra and degeneracy on k×k tori |
//! | `minimal_lattice_braiding` | full eight-qubit braid on the k=2 torus |
//! | `nmr_schedule` | circuit-to-pulse compilation and schedule table |
//! | `state_tomography` | Pauli-basis readout and state reconstruction |
//! | `noise_sweep` | braid fidelity across a noise-parameter grid |
//!
//! Module layout mirrors the physics: [`lattice`] holds torus geometry and
//! paths, [`pauli`] the signed Pauli algebra, [`engine`] dense state-vector
//! and density-matrix evolution, [`anyon`] anyon creation/braiding, [`nmr`]
//! the spin system, pulse compiler and noisy scheduler, [`tomography`]
//! Pauli-basis readout, and [`cli`] the reusable command implementations.

pub mod anyon;
pub mod cli;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod nmr;
pub mod pauli;
pub mod tomography;

pub use error::{Error, Result};
