//! Dense density matrices: mixed-state evolution for n ≤ 8 qubits.
//!
//! Needed wherever the simulation leaves pure states: pseudo-pure thermal
//! preparations, correlated pulse-amplitude averaging, and dephasing all
//! produce proper mixtures.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

use super::gate::{Circuit, Gate};
use super::state::StateVector;
use super::{check_engine_qubits, PauliAction, BIT_ORDER, TOL_CONSTRUCT};

/// A density operator stored as a dense row-major 2ⁿ×2ⁿ matrix, indexed
/// with qubit 1 as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    fn blank(n: usize) -> Result<Self> {
        check_engine_qubits(n)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    /// |ψ⟩⟨ψ| for a pure state.
    pub fn from_pure(state: &StateVector) -> Self {
        let dim = state.dim();
        let mut rho = Self::blank(state.n()).expect("state n already validated");
        for i in 0..dim {
            for j in 0..dim {
                rho.entries[i * dim + j] = state.amplitude(i) * state.amplitude(j).conj();
            }
        }
        rho
    }

    /// The basis projector |index⟩⟨index|.
    pub fn basis_projector(n: usize, index: usize) -> Result<Self> {
        Ok(Self::from_pure(&StateVector::basis_state(n, index)?))
    }

    /// I/2ⁿ.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let mut rho = Self::blank(n)?;
        let dim = rho.dim();
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        for i in 0..dim {
            rho.entries[i * dim + i] = p;
        }
        Ok(rho)
    }

    /// Builds a matrix from raw row-major entries. Only the shape is checked;
    /// call [`validate`](Self::validate) separately when physicality matters
    /// (estimates reconstructed from sampled data may fail it legitimately).
    pub fn from_row_major(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_engine_qubits(n)?;
        let dim = 1usize << n;
        if entries.len() != dim * dim {
            return Err(Error::SizeMismatch {
                what: "density-matrix entries",
                left: dim * dim,
                right: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: Complex64) {
        let dim = self.dim();
        self.entries[row * dim + col] = value;
    }

    /// Visits every entry as `(row, col, &mut value)`, row-major.
    pub fn map_entries_mut(&mut self, mut f: impl FnMut(usize, usize, &mut Complex64)) {
        let dim = self.dim();
        for row in 0..dim {
            for col in 0..dim {
                f(row, col, &mut self.entries[row * dim + col]);
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i]).sum()
    }

    /// Tr(ρ²), real for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        let dim = self.dim();
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                total += self.entries[i * dim + j] * self.entries[j * dim + i];
            }
        }
        total.re
    }

    /// Populations ⟨b|ρ|b⟩ in basis order.
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i].re).collect()
    }

    /// Largest deviation |ρ[i][j] − conj(ρ[j][i])| from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let d = (self.entries[i * dim + j] - self.entries[j * dim + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |i, j| self.entries[i * dim + j])
    }

    /// Smallest eigenvalue (the matrix is treated as Hermitian).
    pub fn min_eigenvalue(&self) -> f64 {
        let eig = self.to_nalgebra().symmetric_eigen();
        eig.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks the physical-state invariants: Hermitian and unit trace
    /// within 1e−12, minimum eigenvalue ≥ −1e−10.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > TOL_CONSTRUCT {
            return Err(Error::BadDensity(format!(
                "Hermiticity violated by {herm:.3e}"
            )));
        }
        let trace = self.trace();
        if (trace.re - 1.0).abs() > TOL_CONSTRUCT || trace.im.abs() > TOL_CONSTRUCT {
            return Err(Error::BadDensity(format!(
                "trace is {} + {}i, expected 1",
                trace.re, trace.im
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -1e-10 {
            return Err(Error::BadDensity(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    fn apply_single_qubit(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let dim = self.dim();
        let pbit = 1usize << (self.n - 1 - qubit);
        // ρ ← U ρ: update row pairs within each column.
        for col in 0..dim {
            for row in 0..dim {
                if row & pbit == 0 {
                    let a0 = self.entries[row * dim + col];
                    let a1 = self.entries[(row | pbit) * dim + col];
                    self.entries[row * dim + col] = m[0][0] * a0 + m[0][1] * a1;
                    self.entries[(row | pbit) * dim + col] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
        // ρ ← ρ U†: update column pairs within each row.
        for row in 0..dim {
            for col in 0..dim {
                if col & pbit == 0 {
                    let b0 = self.entries[row * dim + col];
                    let b1 = self.entries[row * dim + (col | pbit)];
                    self.entries[row * dim + col] = b0 * m[0][0].conj() + b1 * m[0][1].conj();
                    self.entries[row * dim + (col | pbit)] =
                        b0 * m[1][0].conj() + b1 * m[1][1].conj();
                }
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let dim = self.dim();
        let cbit = 1usize << (self.n - 1 - control);
        let tbit = 1usize << (self.n - 1 - target);
        let flip = |i: usize| if i & cbit != 0 { i ^ tbit } else { i };
        for row in 0..dim {
            if row & cbit != 0 && row & tbit == 0 {
                for col in 0..dim {
                    self.entries.swap(row * dim + col, (row | tbit) * dim + col);
                }
            }
        }
        for row in 0..dim {
            for col in 0..dim {
                if col & cbit != 0 && col & tbit == 0 {
                    self.entries.swap(row * dim + col, row * dim + flip(col));
                }
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
                self.apply_single_qubit(single.qubits()[0], m);
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

    /// ρ ← P ρ P†.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        let action = PauliAction::new(self.n, p)?;
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for row in 0..dim {
            let fr = action.factor(row);
            for col in 0..dim {
                out[(row ^ action.x_mask) * dim + (col ^ action.x_mask)] =
                    fr * action.factor(col).conj() * self.entries[row * dim + col];
            }
        }
        self.entries = out;
        Ok(())
    }

    /// Tr(ρP) for a Hermitian Pauli string; always real for Hermitian ρ.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitianPhase {
                phase: p.phase().prefix(),
            });
        }
        let action = PauliAction::new(self.n, p)?;
        let dim = self.dim();
        let mut total = Complex64::new(0.0, 0.0);
        for b in 0..dim {
            total += action.factor(b) * self.entries[b * dim + (b ^ action.x_mask)];
        }
        Ok(total.re)
    }

    /// ⟨ψ|ρ|ψ⟩, the fidelity of ρ against a pure target.
    pub fn fidelity_with_pure(&self, target: &StateVector) -> Result<f64> {
        if self.n != target.n() {
            return Err(Error::SizeMismatch {
                what: "fidelity",
                left: self.n,
                right: target.n(),
            });
        }
        let dim = self.dim();
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                total +=
                    target.amplitude(i).conj() * self.entries[i * dim + j] * target.amplitude(j);
            }
        }
        Ok(total.re)
    }

    /// In-place `self += weight · other` (no renormalization).
    pub fn add_scaled(&mut self, other: &DensityMatrix, weight: f64) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                what: "density sum",
                left: self.n,
                right: other.n,
            });
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += weight * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: f64) {
        for a in &mut self.entries {
            *a *= factor;
        }
    }

    /// Convex mixture Σ wᵢ ρᵢ; weights must be nonnegative and sum to 1
    /// within 1e−12.
    pub fn weighted_mix(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let Some(((_, first), rest)) = parts.split_first() else {
            return Err(Error::BadDensity("empty mixture".to_string()));
        };
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > TOL_CONSTRUCT || parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::BadDensity(format!(
                "mixture weights must be nonnegative and sum to 1 (got {total})"
            )));
        }
        let mut rho = Self::blank(first.n)?;
        rho.add_scaled(first, parts[0].0)?;
        for (w, part) in rest {
            rho.add_scaled(part, *w)?;
        }
        Ok(rho)
    }

    /// Largest entrywise deviation from another density matrix.
    pub fn max_entry_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                what: "density comparison",
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixRepr {
    n: usize,
    bit_order: String,
    rows: Vec<Vec<[f64; 2]>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.dim();
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let e = self.entries[i * dim + j];
                        [e.re, e.im]
                    })
                    .collect()
            })
            .collect();
        DensityMatrixRepr {
            n: self.n,
            bit_order: BIT_ORDER.to_string(),
            rows,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DensityMatrixRepr::deserialize(deserializer)?;
        if repr.bit_order != BIT_ORDER {
            return Err(D::Error::custom(format!(
                "unsupported bit order {:?}; expected {BIT_ORDER:?}",
                repr.bit_order
            )));
        }
        let mut rho = DensityMatrix::blank(repr.n).map_err(D::Error::custom)?;
        let dim = rho.dim();
        if repr.rows.len() != dim || repr.rows.iter().any(|r| r.len() != dim) {
            return Err(D::Error::custom(format!(
                "density matrix for n={} must be {dim}x{dim}",
                repr.n
            )));
        }
        for (i, row) in repr.rows.iter().enumerate() {
            for (j, &[re, im]) in row.iter().enumerate() {
                rho.entries[i * dim + j] = Complex64::new(re, im);
            }
        }
        Ok(rho)
    }
}
