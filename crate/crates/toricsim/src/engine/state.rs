//! Dense state vectors: exact pure-state evolution for n ≤ 8 qubits.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

use super::gate::{Circuit, Gate};
use super::{check_engine_qubits, PauliAction, BIT_ORDER, TOL_CONSTRUCT};

/// A normalized pure state on `n` qubits, amplitudes indexed with qubit 1
/// as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::basis_state(n, 0)
    }

    /// The computational basis state with the given index.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_engine_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                what: "basis state",
                index,
                count: dim,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes })
    }

    /// Wraps amplitudes that are already normalized (within 1e−12).
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_engine_qubits(n)?;
        let dim = 1usize << n;
        if amplitudes.len() != dim {
            return Err(Error::SizeMismatch {
                what: "amplitude vector",
                left: dim,
                right: amplitudes.len(),
            });
        }
        let state = Self { n, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > TOL_CONSTRUCT {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Normalizes arbitrary amplitudes; errors on (numerically) zero norm.
    pub fn from_unnormalized(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_engine_qubits(n)?;
        let dim = 1usize << n;
        if amplitudes.len() != dim {
            return Err(Error::SizeMismatch {
                what: "amplitude vector",
                left: dim,
                right: amplitudes.len(),
            });
        }
        let mut state = Self { n, amplitudes };
        state.normalize()?;
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Rescales to unit norm; errors if the norm is below 1e−12.
    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm < TOL_CONSTRUCT {
            return Err(Error::NotNormalized { norm });
        }
        let inv = 1.0 / norm;
        for a in &mut self.amplitudes {
            *a *= inv;
        }
        Ok(())
    }

    /// In-place `self += coeff · other`, leaving the result unnormalized;
    /// callers building superpositions must renormalize afterwards.
    pub fn add_scaled(&mut self, other: &StateVector, coeff: Complex64) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                what: "state sum",
                left: self.n,
                right: other.n,
            });
        }
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += coeff * b;
        }
        Ok(())
    }

    /// Multiplies every amplitude by a scalar (e.g. a global phase).
    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    fn apply_single_qubit(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let pbit = 1usize << (self.n - 1 - qubit);
        let dim = self.dim();
        for i in 0..dim {
            if i & pbit == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | pbit];
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i | pbit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cbit = 1usize << (self.n - 1 - control);
        let tbit = 1usize << (self.n - 1 - target);
        let dim = self.dim();
        for i in 0..dim {
            if i & cbit != 0 && i & tbit == 0 {
                self.amplitudes.swap(i, i | tbit);
            }
        }
    }

    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        match gate {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            single => {
                let m = single
                    .single_qubit_matrix()
                    .expect("every non-CNOT gate has a 2x2 matrix");
                let qubit = single.qubits()[0];
                self.apply_single_qubit(qubit, m);
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n() != self.n {
            return Err(Error::SizeMismatch {
                what: "circuit register",
                left: self.n,
                right: circuit.n(),
            });
        }
        for &g in circuit.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Applies a signed Pauli string, including its phase.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        let action = PauliAction::new(self.n, p)?;
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for b in 0..dim {
            out[b ^ action.x_mask] = action.factor(b) * self.amplitudes[b];
        }
        self.amplitudes = out;
        Ok(())
    }

    /// ⟨ψ|P|ψ⟩ for a Hermitian Pauli string; always real.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitianPhase {
                phase: p.phase().prefix(),
            });
        }
        let action = PauliAction::new(self.n, p)?;
        let mut total = Complex64::new(0.0, 0.0);
        for b in 0..self.dim() {
            total +=
                self.amplitudes[b ^ action.x_mask].conj() * action.factor(b) * self.amplitudes[b];
        }
        Ok(total.re)
    }

    /// ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                what: "inner product",
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|², the pure-state fidelity.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// A copy rotated by the global phase that makes ⟨reference|copy⟩ real
    /// and positive — the canonical representative for comparing states
    /// that differ only by a physically meaningless overall phase.
    pub fn aligned_to(&self, reference: &StateVector) -> Result<StateVector> {
        let overlap = reference.inner_product(self)?;
        if overlap.norm() < TOL_CONSTRUCT {
            return Err(Error::BranchAmplitude {
                label: "global-phase alignment overlap".to_string(),
                magnitude: overlap.norm(),
            });
        }
        let mut aligned = self.clone();
        aligned.scale(overlap.conj() / overlap.norm());
        Ok(aligned)
    }

    /// A copy with the global phase fixed so the first amplitude of
    /// magnitude above 1e−9 is real and positive. Gives records a
    /// deterministic, convention-free representative of the ray.
    pub fn canonicalized(&self) -> StateVector {
        let mut out = self.clone();
        if let Some(a) = self.amplitudes.iter().find(|a| a.norm() > 1e-9) {
            out.scale(a.conj() / a.norm());
        }
        out
    }

    /// Largest entrywise deviation from another state.
    pub fn max_amplitude_distance(&self, other: &StateVector) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                what: "state comparison",
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

#[derive(Serialize, Deserialize)]
struct StateVectorRepr {
    n: usize,
    bit_order: String,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateVectorRepr {
            n: self.n,
            bit_order: BIT_ORDER.to_string(),
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateVectorRepr::deserialize(deserializer)?;
        if repr.bit_order != BIT_ORDER {
            return Err(D::Error::custom(format!(
                "unsupported bit order {:?}; expected {BIT_ORDER:?}",
                repr.bit_order
            )));
        }
        let amplitudes = repr
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::from_amplitudes(repr.n, amplitudes).map_err(D::Error::custom)
    }
}
