//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All the ways an operation in this crate can fail.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested lattice size is not supported by the operation.
    #[error("lattice size k={k} not supported: {reason}")]
    LatticeSize { k: usize, reason: &'static str },

    /// A vertex/face/edge/qubit index was out of range.
    #[error("{what} index {index} out of range (have {count})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        count: usize,
    },

    /// Two objects that must live on the same number of qubits do not.
    #[error("size mismatch in {what}: {left} vs {right} qubits")]
    SizeMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    /// A path must contain at least one edge.
    #[error("path has no edges")]
    EmptyPath,

    /// The edge list cannot be traversed as a single connected walk.
    #[error("cannot continue the {kind} walk from edge {a} to edge {b}")]
    DisconnectedPath {
        kind: &'static str,
        a: usize,
        b: usize,
    },

    /// Two paths that must belong to the same lattice do not.
    #[error("paths belong to different lattices (k={left} vs k={right})")]
    LatticeMismatch { left: usize, right: usize },

    /// A string species was applied to the wrong kind of path.
    #[error("{species} strings require a {expected} path, got a {got} path")]
    PathKindMismatch {
        species: &'static str,
        expected: &'static str,
        got: &'static str,
    },

    /// The dense engine is capped at eight qubits.
    #[error("qubit count {n} exceeds the engine cap of {max}")]
    TooManyQubits { n: usize, max: usize },

    /// A state vector failed its normalization check.
    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    /// Expectation values require a Hermitian operator (phase must be real).
    #[error("Pauli string with phase {phase} is not Hermitian")]
    NonHermitianPhase { phase: &'static str },

    /// Stabilizer generators must commute pairwise.
    #[error("generators {i} and {j} anticommute")]
    NonCommutingGenerators { i: usize, j: usize },

    /// Stabilizer generators must carry a real phase.
    #[error("generator {index} has imaginary phase")]
    GeneratorPhase { index: usize },

    /// A Pauli string could not be parsed from text.
    #[error("cannot parse Pauli string {input:?}: {reason}")]
    ParsePauli { input: String, reason: &'static str },

    /// Phase extraction is undefined when a branch amplitude vanishes.
    #[error("branch amplitude |{label}| = {magnitude:.3e} too small to define a phase")]
    BranchAmplitude { label: String, magnitude: f64 },

    /// A CNOT was requested across a coupling below the compile threshold.
    #[error(
        "spins {control} and {target} are coupled at {j_hz} Hz, below the {threshold_hz} Hz \
         threshold for a CNOT"
    )]
    UncoupledPair {
        control: usize,
        target: usize,
        j_hz: f64,
        threshold_hz: f64,
    },

    /// A spin system description was inconsistent.
    #[error("invalid spin system: {0}")]
    BadSpinSystem(String),

    /// A noise model description was inconsistent.
    #[error("invalid noise model: {0}")]
    BadNoiseModel(String),

    /// A density matrix failed validation.
    #[error("invalid density matrix: {0}")]
    BadDensity(String),

    /// A numeric parameter was outside its admissible range.
    #[error("parameter {name} = {value} out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A run configuration was rejected before any computation.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("TOML error: {0}")]
    Toml(#[from] toml::de::Error),
}
