//! Anyon physics protocols: ground states, pair creation, string
//! transport, and the braiding interference experiment.
//!
//! Two registers appear throughout. The *reduced* register has four qubits
//! — the four edges of the minimal lattice that the interference protocol
//! actually touches — and its protected state is the GHZ state. The *full*
//! register has all eight edge qubits of the k=2 torus; rerunning the braid
//! there shows the reduction changes nothing.
//!
//! The interference protocol in both registers: prepare the protected
//! state, split it into a superposition of "no anyons" and "one e-pair"
//! branches with a √Z on the creation qubit, carry an m-type x-loop around
//! one e particle, and close the superposition with √Z⁻¹. The loop flips
//! the relative sign of the branches — the −1 mutual statistics — which the
//! final √Z⁻¹ converts into a population transfer that plain state readout
//! can see.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::{Circuit, DensityMatrix, Gate, PauliSum, StateVector, TOL_PIPELINE};
use crate::error::{Error, Result};
use crate::lattice::{Path, PathKind, TorusLattice};
use crate::pauli::{star_operator, PauliLetter, PauliString};

/// Anyon species: `e` (vertex excitations, z-strings) or `m` (face
/// excitations, x-strings).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    E,
    M,
}

impl Species {
    /// The single-edge Pauli letter that transports this species.
    pub fn letter(self) -> PauliLetter {
        match self {
            Species::E => PauliLetter::Z,
            Species::M => PauliLetter::X,
        }
    }

    /// The path kind this species moves along.
    pub fn path_kind(self) -> PathKind {
        match self {
            Species::E => PathKind::Direct,
            Species::M => PathKind::Dual,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Species::E => "e",
            Species::M => "m",
        }
    }
}

/// Protocol variant: the full braid, or the control run that skips anyon
/// creation/annihilation and only carries the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "braid")]
    Braid,
    #[serde(rename = "control-no-anyon", alias = "control")]
    Control,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Braid => "braid",
            Variant::Control => "control-no-anyon",
        }
    }

    /// The timeline label of the final snapshot: the braid run ends at t₁,
    /// the control run at t₂.
    pub fn final_time_label(self) -> &'static str {
        match self {
            Variant::Braid => "t1",
            Variant::Control => "t2",
        }
    }

    /// The phase the protocol is expected to imprint.
    pub fn expected_phase(self) -> Complex64 {
        match self {
            Variant::Braid => Complex64::new(-1.0, 0.0),
            Variant::Control => Complex64::new(1.0, 0.0),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "braid" => Ok(Variant::Braid),
            "control" | "control-no-anyon" => Ok(Variant::Control),
            other => Err(Error::Config(format!(
                "unknown variant {other:?}; expected braid or control"
            ))),
        }
    }
}

/// Size of the reduced register.
pub const REDUCED_QUBITS: usize = 4;

/// The 0-based creation qubit: the e-pair lives on the third qubit.
pub const E_CREATION_QUBIT: usize = 2;

/// The k=2 edges retained by the four-qubit reduction, listed in reduced
/// qubit order 1→4: the east, north, west, south star edges of vertex 0.
pub const REDUCTION_EDGES: [usize; 4] = [0, 6, 1, 4];

/// Edge order in which the braid loop is applied (reduced qubits 3,4,1,2).
/// The four factors commute, so the order only fixes the recorded schedule.
pub const LATTICE_LOOP_EDGES: [usize; 4] = [1, 4, 0, 6];

/// The creation edge on the full lattice (reduced qubit 3 = edge 1).
pub const LATTICE_CREATION_EDGE: usize = 1;

/// The gate network preparing the four-qubit GHZ state from |0000⟩.
pub fn ghz_circuit() -> Circuit {
    Circuit::from_gates(
        REDUCED_QUBITS,
        vec![
            Gate::H { qubit: 0 },
            Gate::Cnot {
                control: 0,
                target: 1,
            },
            Gate::Cnot {
                control: 1,
                target: 2,
            },
            Gate::Cnot {
                control: 2,
                target: 3,
            },
        ],
    )
    .expect("static circuit is well-formed")
}

/// (|0000⟩ + |1111⟩)/√2, the protected state of the reduced register.
pub fn ghz_state() -> StateVector {
    let mut s = StateVector::zero_state(REDUCED_QUBITS).expect("4 <= MAX_QUBITS");
    s.apply_circuit(&ghz_circuit()).expect("sizes match");
    s
}

/// The reduced-register Hamiltonian −X₁X₂X₃X₄ − Z₁Z₂ − Z₂Z₃ − Z₁Z₄ − Z₃Z₄,
/// whose unique minimum-energy eigenvector is the GHZ state.
pub fn four_qubit_hamiltonian() -> PauliSum {
    let mut h = PauliSum::new(REDUCED_QUBITS).expect("4 <= MAX_QUBITS");
    for term in ["+XXXX", "+ZZII", "+IZZI", "+ZIIZ", "+IIZZ"] {
        let p: PauliString = term.parse().expect("static term parses");
        h.add_term(-1.0, p).expect("terms are Hermitian and sized");
    }
    h
}

/// The four-gate interference sequence on a register of `n` qubits:
/// optional √Z on `creation_qubit`, X along `loop_qubits` in order, and the
/// closing √Z⁻¹ for the braid variant.
fn interference_gates(
    variant: Variant,
    creation_qubit: usize,
    loop_qubits: [usize; 4],
) -> Vec<Gate> {
    let mut gates = Vec::new();
    if variant == Variant::Braid {
        gates.push(Gate::SqrtZ {
            qubit: creation_qubit,
        });
    }
    for q in loop_qubits {
        gates.push(Gate::X { qubit: q });
    }
    if variant == Variant::Braid {
        gates.push(Gate::SqrtZInv {
            qubit: creation_qubit,
        });
    }
    gates
}

/// The full reduced-register network: GHZ preparation followed by the
/// interference sequence. Loop order is qubits 3, 4, 1, 2 (1-based).
pub fn braid_circuit(variant: Variant) -> Circuit {
    let mut circuit = ghz_circuit();
    for g in interference_gates(variant, E_CREATION_QUBIT, [2, 3, 0, 1]) {
        circuit.push(g).expect("static gates are in range");
    }
    circuit
}

/// The interference sequence alone — everything [`braid_circuit`] applies
/// after GHZ preparation. Useful when the protocol is staged so the
/// intermediate state can be recorded.
pub fn braid_tail_circuit(variant: Variant) -> Circuit {
    Circuit::from_gates(
        REDUCED_QUBITS,
        interference_gates(variant, E_CREATION_QUBIT, [2, 3, 0, 1]),
    )
    .expect("static gates are in range")
}

/// Builds the stabilizer ground state |ξ⟩ of the k=2 torus by projecting
/// |0…0⟩ with ∏ₛ (1 + Aₛ)/2 and normalizing.
pub fn ground_state(lattice: &TorusLattice) -> Result<StateVector> {
    if lattice.k() != 2 {
        return Err(Error::LatticeSize {
            k: lattice.k(),
            reason: "dense ground-state construction is implemented for k = 2 \
                     (the engine is capped at 8 qubits)",
        });
    }
    let n = lattice.n_qubits();
    let mut state = StateVector::zero_state(n)?;
    for s in 0..lattice.n_vertices() {
        let a_s = star_operator(lattice, s)?;
        let mut flipped = state.clone();
        flipped.apply_pauli(&a_s)?;
        state.add_scaled(&flipped, Complex64::new(1.0, 0.0))?;
        state.scale(Complex64::new(0.5, 0.0));
    }
    // |0…0⟩ already satisfies every B_p, so star projection alone cannot
    // annihilate it; normalize() still guards the zero-norm case.
    state.normalize()?;
    Ok(state)
}

/// Applies the pair-creation operator for `species` on edge `r`: σ_r^z
/// makes an e-pair on the two adjacent vertices, σ_r^x an m-pair on the
/// two adjacent faces.
pub fn create_pair(state: &mut StateVector, r: usize, species: Species) -> Result<()> {
    let p = PauliString::single(state.n(), r, species.letter())?;
    state.apply_pauli(&p)
}

/// The string operator for `species` along `path` — the product of the
/// per-edge Paulis, with repeated edges cancelling pairwise.
pub fn string_operator(
    lattice: &TorusLattice,
    path: &Path,
    species: Species,
) -> Result<PauliString> {
    check_species_path(lattice, path, species)?;
    let mut op = PauliString::identity(lattice.n_qubits())?;
    for &edge in path.edges() {
        op = op.mul(&PauliString::single(
            lattice.n_qubits(),
            edge,
            species.letter(),
        )?)?;
    }
    Ok(op)
}

/// Applies the string operator edge by edge, in path order.
pub fn apply_string(
    state: &mut StateVector,
    lattice: &TorusLattice,
    path: &Path,
    species: Species,
) -> Result<()> {
    check_species_path(lattice, path, species)?;
    if state.n() != lattice.n_qubits() {
        return Err(Error::SizeMismatch {
            what: "string application",
            left: state.n(),
            right: lattice.n_qubits(),
        });
    }
    for &edge in path.edges() {
        let p = PauliString::single(state.n(), edge, species.letter())?;
        state.apply_pauli(&p)?;
    }
    Ok(())
}

fn check_species_path(lattice: &TorusLattice, path: &Path, species: Species) -> Result<()> {
    if path.lattice_k() != lattice.k() {
        return Err(Error::LatticeMismatch {
            left: lattice.k(),
            right: path.lattice_k(),
        });
    }
    if path.kind() != species.path_kind() {
        return Err(Error::PathKindMismatch {
            species: species.as_str(),
            expected: species.path_kind().as_str(),
            got: path.kind().as_str(),
        });
    }
    Ok(())
}

/// The dual loop encircling one member of the e-pair on the k=2 lattice,
/// in application order.
pub fn lattice_loop_path() -> Path {
    let lattice = TorusLattice::new(2).expect("k = 2 is valid");
    Path::dual(&lattice, LATTICE_LOOP_EDGES.to_vec()).expect("static loop is a valid dual path")
}

fn branch_amplitude(state: &StateVector, branch: &StateVector, label: &str) -> Result<Complex64> {
    let a = branch.inner_product(state)?;
    if a.norm() < TOL_PIPELINE {
        return Err(Error::BranchAmplitude {
            label: label.to_string(),
            magnitude: a.norm(),
        });
    }
    Ok(a)
}

/// Relative phase between two interference branches, measured against a
/// reference state: how much the coefficient ratio (branch b over branch a)
/// rotated going from `reference` to `final_state`, normalized to unit
/// modulus. Errors if any branch amplitude falls below 1e−9.
pub fn extract_phase_in_branches(
    final_state: &StateVector,
    reference: &StateVector,
    branch_a: &StateVector,
    branch_b: &StateVector,
) -> Result<Complex64> {
    let fa = branch_amplitude(final_state, branch_a, "final state, branch a")?;
    let fb = branch_amplitude(final_state, branch_b, "final state, branch b")?;
    let ra = branch_amplitude(reference, branch_a, "reference, branch a")?;
    let rb = branch_amplitude(reference, branch_b, "reference, branch b")?;
    let ratio = (fb / fa) / (rb / ra);
    Ok(ratio / ratio.norm())
}

/// Relative phase of the |1…1⟩ component to the |0…0⟩ component of
/// `final_state`, measured against the same ratio in `reference`.
pub fn extract_phase(final_state: &StateVector, reference: &StateVector) -> Result<Complex64> {
    let n = final_state.n();
    let zeros = StateVector::basis_state(n, 0)?;
    let ones = StateVector::basis_state(n, (1usize << n) - 1)?;
    extract_phase_in_branches(final_state, reference, &zeros, &ones)
}

/// Same branch-phase readout from a density matrix: the coherence
/// ⟨1…1|ρ|0…0⟩ normalized against the reference's, reduced to unit modulus.
pub fn extract_phase_from_density(
    rho: &DensityMatrix,
    reference: &DensityMatrix,
) -> Result<Complex64> {
    if rho.n() != reference.n() {
        return Err(Error::SizeMismatch {
            what: "density phase readout",
            left: rho.n(),
            right: reference.n(),
        });
    }
    let top = rho.dim() - 1;
    let c = rho.entry(top, 0);
    let c_ref = reference.entry(top, 0);
    if c.norm() < TOL_PIPELINE {
        return Err(Error::BranchAmplitude {
            label: "coherence <1…1|rho|0…0>".to_string(),
            magnitude: c.norm(),
        });
    }
    if c_ref.norm() < TOL_PIPELINE {
        return Err(Error::BranchAmplitude {
            label: "reference coherence <1…1|rho|0…0>".to_string(),
            magnitude: c_ref.norm(),
        });
    }
    let ratio = c / c_ref;
    Ok(ratio / ratio.norm())
}

/// A state snapshot inside an experiment record: pure for the exact
/// backend, mixed for pulse-level runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Snapshot {
    Pure { state: StateVector },
    Mixed { state: DensityMatrix },
}

impl Snapshot {
    /// ⟨0…0|ρ|1…1⟩, the signed interference bar the experiment reads out.
    pub fn corner_coherence(&self) -> Complex64 {
        match self {
            Snapshot::Pure { state } => {
                state.amplitude(0) * state.amplitude(state.dim() - 1).conj()
            }
            Snapshot::Mixed { state } => state.entry(0, state.dim() - 1),
        }
    }

    /// Fidelity against a pure target.
    pub fn fidelity_with(&self, target: &StateVector) -> Result<f64> {
        match self {
            Snapshot::Pure { state } => state.fidelity(target),
            Snapshot::Mixed { state } => state.fidelity_with_pure(target),
        }
    }
}

/// Everything one interference run produces: the initial and final
/// snapshots, the extracted relative phase, and what it should have been.
/// Phases are stored as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraidExperimentRecord {
    pub initial_label: String,
    pub variant: Variant,
    pub snapshot_t0: Snapshot,
    pub final_time_label: String,
    pub snapshot_final: Snapshot,
    pub extracted_phase: [f64; 2],
    pub expected_phase: [f64; 2],
}

impl BraidExperimentRecord {
    pub fn extracted_phase_complex(&self) -> Complex64 {
        Complex64::new(self.extracted_phase[0], self.extracted_phase[1])
    }

    /// Checks the record's own invariants: normalized snapshots (trace 1
    /// in the mixed case) and an extracted phase of unit modulus, both
    /// within 1e−9.
    pub fn validate(&self) -> Result<()> {
        for snap in [&self.snapshot_t0, &self.snapshot_final] {
            let norm = match snap {
                Snapshot::Pure { state } => state.norm(),
                Snapshot::Mixed { state } => state.trace().re,
            };
            if (norm - 1.0).abs() > TOL_PIPELINE {
                return Err(Error::NotNormalized { norm });
            }
        }
        let modulus = self.extracted_phase_complex().norm();
        if (modulus - 1.0).abs() > TOL_PIPELINE {
            return Err(Error::BranchAmplitude {
                label: "extracted phase modulus".to_string(),
                magnitude: modulus,
            });
        }
        Ok(())
    }
}

/// Runs the four-qubit interference experiment exactly.
///
/// The braid variant ends (up to the recorded canonical global phase) at
/// (|0000⟩ − |1111⟩)/√2; the control variant returns to the GHZ state.
pub fn run_braid_experiment(variant: Variant) -> Result<BraidExperimentRecord> {
    let t0 = ghz_state();
    let mut state = t0.clone();
    for g in interference_gates(variant, E_CREATION_QUBIT, [2, 3, 0, 1]) {
        state.apply_gate(g)?;
    }
    let extracted = extract_phase(&state, &t0)?;
    let record = BraidExperimentRecord {
        initial_label: "GHZ".to_string(),
        variant,
        snapshot_t0: Snapshot::Pure { state: t0 },
        final_time_label: variant.final_time_label().to_string(),
        snapshot_final: Snapshot::Pure {
            state: state.canonicalized(),
        },
        extracted_phase: phase_pair(extracted),
        expected_phase: phase_pair(variant.expected_phase()),
    };
    record.validate()?;
    Ok(record)
}

/// Runs the same interference experiment on the full k=2 lattice
/// (8 qubits): √Z on the creation edge, x-loop around one e particle, √Z⁻¹.
///
/// The braid variant reads the phase from the no-anyon/e-pair branch
/// ratio before vs. after the loop (−1); the control variant carries the
/// loop over the ground state, where the loop is a stabilizer product and
/// the phase is the plain overlap ⟨t₀|final⟩ (+1).
pub fn run_braid_on_lattice(variant: Variant) -> Result<BraidExperimentRecord> {
    let lattice = TorusLattice::new(2)?;
    let xi = ground_state(&lattice)?;
    let mut e_branch = xi.clone();
    create_pair(&mut e_branch, LATTICE_CREATION_EDGE, Species::E)?;

    let loop_path = lattice_loop_path();
    let mut state = xi.clone();
    let extracted = match variant {
        Variant::Braid => {
            state.apply_gate(Gate::SqrtZ {
                qubit: LATTICE_CREATION_EDGE,
            })?;
            let before_loop = state.clone();
            apply_string(&mut state, &lattice, &loop_path, Species::M)?;
            let phase = extract_phase_in_branches(&state, &before_loop, &xi, &e_branch)?;
            state.apply_gate(Gate::SqrtZInv {
                qubit: LATTICE_CREATION_EDGE,
            })?;
            phase
        }
        Variant::Control => {
            apply_string(&mut state, &lattice, &loop_path, Species::M)?;
            let overlap = xi.inner_product(&state)?;
            if overlap.norm() < TOL_PIPELINE {
                return Err(Error::BranchAmplitude {
                    label: "control overlap".to_string(),
                    magnitude: overlap.norm(),
                });
            }
            overlap / overlap.norm()
        }
    };
    let record = BraidExperimentRecord {
        initial_label: "xi(k=2)".to_string(),
        variant,
        snapshot_t0: Snapshot::Pure { state: xi },
        final_time_label: variant.final_time_label().to_string(),
        snapshot_final: Snapshot::Pure {
            state: state.canonicalized(),
        },
        extracted_phase: phase_pair(extracted),
        expected_phase: phase_pair(variant.expected_phase()),
    };
    record.validate()?;
    Ok(record)
}

fn phase_pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}
