//! Exact dense simulation backend for up to eight qubits.
//!
//! Submodules: [`gate`] (the gate set and circuits), [`state`] (state
//! vectors), [`density`] (density matrices). Everything is dense and exact:
//! a 2ⁿ amplitude vector or 2ⁿ×2ⁿ matrix, complex `f64` throughout.
//!
//! Bit-ordering convention (shared by every module and by all JSON
//! artifacts): **qubit 1 is the most significant bit** of a basis-state
//! index, so `|0110⟩` on four qubits is index 6 and the bit of 0-based
//! qubit `q` in index `b` is `(b >> (n - 1 - q)) & 1`. Exported states
//! carry this as an explicit `bit_order` tag.

pub mod density;
pub mod gate;
pub mod state;

pub use density::DensityMatrix;
pub use gate::{Circuit, Gate};
pub use state::StateVector;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Hard cap on qubit count: the full minimal lattice has eight edge qubits
/// and 256-dimensional dense states keep every check exact and fast.
pub const MAX_QUBITS: usize = 8;

/// Tag written into JSON exports to pin the basis-index convention.
pub const BIT_ORDER: &str = "qubit-1-most-significant";

/// Construction-time tolerance (single operations, exact algebra).
pub const TOL_CONSTRUCT: f64 = 1e-12;

/// Accumulated-pipeline tolerance (long gate/pulse sequences).
pub const TOL_PIPELINE: f64 = 1e-9;

pub(crate) fn check_engine_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    Ok(())
}

pub(crate) fn check_qubit_index(n: usize, q: usize) -> Result<()> {
    if q >= n {
        return Err(Error::IndexOutOfRange {
            what: "qubit",
            index: q,
            count: n,
        });
    }
    Ok(())
}

/// Converts a qubit-indexed mask (bit `q` = qubit `q`) into a basis-index
/// mask under the qubit-1-most-significant convention.
pub(crate) fn qubit_mask_to_index_mask(n: usize, mask: u64) -> usize {
    let mut out = 0usize;
    for q in 0..n {
        if (mask >> q) & 1 == 1 {
            out |= 1 << (n - 1 - q);
        }
    }
    out
}

/// Precomputed data for applying a Pauli string to basis states:
/// `P |b⟩ = base · (−1)^{popcount(b & z_mask)} |b ⊕ x_mask⟩`
/// with all masks in basis-index space.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    pub x_mask: usize,
    pub z_mask: usize,
    pub base: Complex64,
}

impl PauliAction {
    pub fn new(n: usize, p: &PauliString) -> Result<Self> {
        if p.n() != n {
            return Err(Error::SizeMismatch {
                what: "Pauli application",
                left: n,
                right: p.n(),
            });
        }
        // ⊗ letters = i^{#Y} · (X part)·(Z part), Z acting first.
        let i_pow = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        let base = p.phase_value() * i_pow[(p.y_count() % 4) as usize];
        Ok(Self {
            x_mask: qubit_mask_to_index_mask(n, p.x_mask()),
            z_mask: qubit_mask_to_index_mask(n, p.z_mask()),
            base,
        })
    }

    /// The scalar factor multiplying `|b ⊕ x_mask⟩` in `P|b⟩`.
    pub fn factor(&self, b: usize) -> Complex64 {
        if (b & self.z_mask).count_ones() % 2 == 1 {
            -self.base
        } else {
            self.base
        }
    }
}

/// A real-weighted sum of Hermitian Pauli strings, H = Σ cᵢ Pᵢ.
#[derive(Debug, Clone)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(n: usize) -> Result<Self> {
        check_engine_qubits(n)?;
        Ok(Self {
            n,
            terms: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Adds `coeff · p`; `p` must be Hermitian (phase ±1) and sized to fit.
    pub fn add_term(&mut self, coeff: f64, p: PauliString) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::SizeMismatch {
                what: "Hamiltonian term",
                left: self.n,
                right: p.n(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::NonHermitianPhase {
                phase: p.phase().prefix(),
            });
        }
        self.terms.push((coeff, p));
        Ok(())
    }

    /// Dense 2ⁿ×2ⁿ matrix of the sum.
    pub fn dense(&self) -> Result<DMatrix<Complex64>> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (coeff, p) in &self.terms {
            let action = PauliAction::new(self.n, p)?;
            for b in 0..dim {
                // Column b of P has its single entry in row b ⊕ x_mask.
                m[(b ^ action.x_mask, b)] += action.factor(b) * *coeff;
            }
        }
        Ok(m)
    }

    /// Expectation ⟨ψ|H|ψ⟩.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        let mut total = 0.0;
        for (coeff, p) in &self.terms {
            total += coeff * state.expectation(p)?;
        }
        Ok(total)
    }

    /// Smallest eigenvalue and a matching normalized eigenvector, from
    /// dense Hermitian diagonalization.
    pub fn min_eigenpair(&self) -> Result<(f64, StateVector)> {
        let eig = self.dense()?.symmetric_eigen();
        let mut best = 0;
        for i in 1..eig.eigenvalues.len() {
            if eig.eigenvalues[i] < eig.eigenvalues[best] {
                best = i;
            }
        }
        let column = eig.eigenvectors.column(best);
        let amplitudes: Vec<Complex64> = column.iter().copied().collect();
        let state = StateVector::from_unnormalized(self.n, amplitudes)?;
        Ok((eig.eigenvalues[best], state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliLetter, PauliString};
    use approx::assert_relative_eq;

    #[test]
    fn index_mask_reverses_qubit_order() {
        // Qubit 0 is the most significant index bit.
        assert_eq!(qubit_mask_to_index_mask(4, 0b0001), 0b1000);
        assert_eq!(qubit_mask_to_index_mask(4, 0b1010), 0b0101);
        assert_eq!(qubit_mask_to_index_mask(1, 0b1), 0b1);
    }

    #[test]
    fn pauli_action_reproduces_y_on_one_qubit() {
        let y = PauliString::single(1, 0, PauliLetter::Y).unwrap();
        let a = PauliAction::new(1, &y).unwrap();
        // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩.
        assert_eq!(a.x_mask, 1);
        assert_relative_eq!(a.factor(0).im, 1.0);
        assert_relative_eq!(a.factor(1).im, -1.0);
    }

    #[test]
    fn pauli_sum_dense_matches_single_z() {
        let mut h = PauliSum::new(1).unwrap();
        h.add_term(2.5, PauliString::single(1, 0, PauliLetter::Z).unwrap())
            .unwrap();
        let m = h.dense().unwrap();
        assert_relative_eq!(m[(0, 0)].re, 2.5);
        assert_relative_eq!(m[(1, 1)].re, -2.5);
        assert_relative_eq!(m[(0, 1)].norm(), 0.0);
    }

    #[test]
    fn min_eigenpair_of_minus_x_is_plus_state() {
        let mut h = PauliSum::new(1).unwrap();
        h.add_term(-1.0, PauliString::single(1, 0, PauliLetter::X).unwrap())
            .unwrap();
        let (val, vec) = h.min_eigenpair().unwrap();
        assert_relative_eq!(val, -1.0, max_relative = 1e-12);
        // |+⟩ up to global phase: both amplitudes share magnitude 1/√2.
        assert_relative_eq!(vec.amplitude(0).norm(), 0.5f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(vec.amplitude(1).norm(), 0.5f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(h.expectation(&vec).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn non_hermitian_terms_are_rejected() {
        let mut h = PauliSum::new(2).unwrap();
        let ixx: PauliString = "iXX".parse().unwrap();
        assert!(h.add_term(1.0, ixx).is_err());
        let xxx: PauliString = "+XXX".parse().unwrap();
        assert!(h.add_term(1.0, xxx).is_err());
    }
}
