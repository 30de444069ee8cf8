//! The gate set of the braiding network and its pulse-level realization.
//!
//! Rotation conventions: `Rx(θ) = exp(−iθX/2)`, and likewise for Y and Z,
//! so `Rx(π)` equals X up to the global phase −i. `SqrtZ = diag(1, i)` and
//! `SqrtZInv = diag(1, −i)`; applied to the |1111⟩ component of a GHZ state,
//! SqrtZ contributes the +i the interference protocol relies on.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::check_qubit_index;

/// One gate acting on named qubits (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    H { qubit: usize },
    X { qubit: usize },
    Z { qubit: usize },
    SqrtZ { qubit: usize },
    SqrtZInv { qubit: usize },
    Cnot { control: usize, target: usize },
    Rx { qubit: usize, angle: f64 },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
}

impl Gate {
    /// Checks targets against the register size; CNOT also rejects
    /// `control == target`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Gate::H { qubit }
            | Gate::X { qubit }
            | Gate::Z { qubit }
            | Gate::SqrtZ { qubit }
            | Gate::SqrtZInv { qubit }
            | Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. } => check_qubit_index(n, qubit),
            Gate::Cnot { control, target } => {
                check_qubit_index(n, control)?;
                check_qubit_index(n, target)?;
                if control == target {
                    return Err(Error::IndexOutOfRange {
                        what: "CNOT target (must differ from control)",
                        index: target,
                        count: n,
                    });
                }
                Ok(())
            }
        }
    }

    /// The 2×2 matrix of a single-qubit gate; `None` for CNOT.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = Complex64::new;
        let m = match *self {
            Gate::H { .. } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
            }
            Gate::X { .. } => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Gate::Z { .. } => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
            Gate::SqrtZ { .. } => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
            Gate::SqrtZInv { .. } => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
            Gate::Rx { angle, .. } => {
                let (h, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                [[c(h, 0.0), c(0.0, -s)], [c(0.0, -s), c(h, 0.0)]]
            }
            Gate::Ry { angle, .. } => {
                let (h, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                [[c(h, 0.0), c(-s, 0.0)], [c(s, 0.0), c(h, 0.0)]]
            }
            Gate::Rz { angle, .. } => {
                let e = Complex64::from_polar(1.0, -angle / 2.0);
                [[e, c(0.0, 0.0)], [c(0.0, 0.0), e.conj()]]
            }
            Gate::Cnot { .. } => return None,
        };
        Some(m)
    }

    /// The gate that undoes this one.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::SqrtZ { qubit } => Gate::SqrtZInv { qubit },
            Gate::SqrtZInv { qubit } => Gate::SqrtZ { qubit },
            Gate::Rx { qubit, angle } => Gate::Rx {
                qubit,
                angle: -angle,
            },
            Gate::Ry { qubit, angle } => Gate::Ry {
                qubit,
                angle: -angle,
            },
            Gate::Rz { qubit, angle } => Gate::Rz {
                qubit,
                angle: -angle,
            },
            other => other, // H, X, Z, CNOT are involutions
        }
    }

    /// All qubits the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { qubit }
            | Gate::X { qubit }
            | Gate::Z { qubit }
            | Gate::SqrtZ { qubit }
            | Gate::SqrtZInv { qubit }
            | Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }
}

/// An ordered gate list on a fixed-size register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        super::check_engine_qubits(n)?;
        Ok(Self {
            n,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut circuit = Self::new(n)?;
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The circuit that undoes this one (reversed inverses).
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_unitary(m: [[Complex64; 2]; 2]) {
        // U†U = I entrywise.
        for i in 0..2 {
            for j in 0..2 {
                let mut dot = Complex64::new(0.0, 0.0);
                for row in &m {
                    dot += row[i].conj() * row[j];
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(dot.re, expected, epsilon = 1e-12);
                assert_relative_eq!(dot.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn all_single_qubit_matrices_are_unitary() {
        let gates = [
            Gate::H { qubit: 0 },
            Gate::X { qubit: 0 },
            Gate::Z { qubit: 0 },
            Gate::SqrtZ { qubit: 0 },
            Gate::SqrtZInv { qubit: 0 },
            Gate::Rx {
                qubit: 0,
                angle: 0.7,
            },
            Gate::Ry {
                qubit: 0,
                angle: -1.3,
            },
            Gate::Rz {
                qubit: 0,
                angle: 2.9,
            },
        ];
        for g in gates {
            assert_unitary(g.single_qubit_matrix().unwrap());
        }
        assert!(Gate::Cnot {
            control: 0,
            target: 1
        }
        .single_qubit_matrix()
        .is_none());
    }

    #[test]
    fn sqrt_z_squares_to_z() {
        let s = Gate::SqrtZ { qubit: 0 }.single_qubit_matrix().unwrap();
        let z = Gate::Z { qubit: 0 }.single_qubit_matrix().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut prod = Complex64::new(0.0, 0.0);
                for (k, row) in s.iter().enumerate() {
                    prod += s[i][k] * row[j];
                }
                assert_relative_eq!(prod.re, z[i][j].re, epsilon = 1e-12);
                assert_relative_eq!(prod.im, z[i][j].im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn validate_rejects_bad_targets() {
        assert!(Gate::H { qubit: 4 }.validate(4).is_err());
        assert!(Gate::Cnot {
            control: 1,
            target: 1
        }
        .validate(4)
        .is_err());
        assert!(Gate::Cnot {
            control: 0,
            target: 4
        }
        .validate(4)
        .is_err());
        assert!(Gate::Cnot {
            control: 0,
            target: 1
        }
        .validate(4)
        .is_ok());
    }

    #[test]
    fn circuit_push_validates_and_inverse_reverses() {
        let mut c = Circuit::new(2).unwrap();
        c.push(Gate::H { qubit: 0 }).unwrap();
        c.push(Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        c.push(Gate::SqrtZ { qubit: 1 }).unwrap();
        assert!(c.push(Gate::X { qubit: 2 }).is_err());
        let inv = c.inverse();
        assert_eq!(
            inv.gates(),
            &[
                Gate::SqrtZInv { qubit: 1 },
                Gate::Cnot {
                    control: 0,
                    target: 1
                },
                Gate::H { qubit: 0 },
            ]
        );
    }

    #[test]
    fn gate_serde_round_trips() {
        let g = Gate::Rx {
            qubit: 2,
            angle: 1.5,
        };
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.contains("\"gate\":\"rx\""));
        let back: Gate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }
}
