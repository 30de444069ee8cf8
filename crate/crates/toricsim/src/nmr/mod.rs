//! Emulation of the four-spin NMR realization: the ZZ-coupled system
//! Hamiltonian, pseudo-pure state preparation, pulse compilation, exact
//! scheduled evolution, and a parametric noise model.
//!
//! The system Hamiltonian is
//!
//! ```text
//! H_sys = Σᵢ ωᵢ I_zⁱ + 2π Σ_{i<j} J_ij I_zⁱ I_zʲ,   I_z = Z/2
//! ```
//!
//! with ωᵢ in rad/s and J in Hz. Every term is diagonal in the Z basis, so
//! free evolution is an exact diagonal phase map — no Trotterization
//! anywhere. Chemical shifts default to a synthetic kHz-order set; compiled
//! schedules refocus them completely, and a test asserts results are
//! ω-independent.

pub mod compile;
pub mod run;
pub mod schedule;

pub use compile::{compile_circuit, compile_circuit_with, CompileOptions};
pub use run::{run_schedule, run_schedule_pure, run_schedule_with, RunOptions};
pub use schedule::{Axis, PulseEvent, PulseSchedule};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::{check_engine_qubits, DensityMatrix, StateVector};
use crate::error::{Error, Result};

/// A register of coupled spin-1/2 nuclei.
///
/// Constructed via [`SpinSystem::new`] (which enforces a symmetric,
/// zero-diagonal coupling matrix) or deserialized from JSON/TOML with the
/// same validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinSystem {
    /// Rotating-frame offsets ωᵢ in rad/s.
    larmor_rad_per_s: Vec<f64>,
    /// Scalar couplings J in Hz; symmetric with zero diagonal.
    couplings_hz: Vec<Vec<f64>>,
}

impl SpinSystem {
    pub fn new(larmor_rad_per_s: Vec<f64>, couplings_hz: Vec<Vec<f64>>) -> Result<Self> {
        let n = larmor_rad_per_s.len();
        check_engine_qubits(n)?;
        if couplings_hz.len() != n || couplings_hz.iter().any(|row| row.len() != n) {
            return Err(Error::BadSpinSystem(format!(
                "coupling matrix must be {n}x{n} to match {n} larmor frequencies"
            )));
        }
        for (i, row) in couplings_hz.iter().enumerate() {
            if row[i] != 0.0 {
                return Err(Error::BadSpinSystem(format!(
                    "coupling diagonal must be zero (J[{i}][{i}] = {})",
                    row[i]
                )));
            }
            for (j, &j_ij) in row.iter().enumerate().take(i) {
                if j_ij != couplings_hz[j][i] {
                    return Err(Error::BadSpinSystem(format!(
                        "coupling matrix must be symmetric (J[{i}][{j}] = {} vs J[{j}][{i}] = {})",
                        j_ij, couplings_hz[j][i]
                    )));
                }
            }
        }
        if larmor_rad_per_s.iter().any(|w| !w.is_finite())
            || couplings_hz.iter().flatten().any(|j| !j.is_finite())
        {
            return Err(Error::BadSpinSystem(
                "larmor frequencies and couplings must be finite".to_string(),
            ));
        }
        Ok(Self {
            larmor_rad_per_s,
            couplings_hz,
        })
    }

    /// The default four-spin register: measured scalar couplings (Hz) of
    /// the crotonic-acid style molecule, with synthetic distinct kHz-order
    /// chemical shifts (the shifts are refocused by every compiled
    /// schedule, so their values never influence results).
    pub fn default_four_spin() -> Self {
        let tau = std::f64::consts::TAU;
        let larmor = vec![tau * 1520.0, tau * -2630.0, tau * 790.0, tau * -310.0];
        let j = vec![
            vec![0.0, 71.2, -1.3, 7.0],
            vec![71.2, 0.0, 69.4, -1.6],
            vec![-1.3, 69.4, 0.0, 41.3],
            vec![7.0, -1.6, 41.3, 0.0],
        ];
        Self::new(larmor, j).expect("default constants are well-formed")
    }

    pub fn n(&self) -> usize {
        self.larmor_rad_per_s.len()
    }

    pub fn larmor(&self, spin: usize) -> f64 {
        self.larmor_rad_per_s[spin]
    }

    pub fn coupling_hz(&self, a: usize, b: usize) -> f64 {
        self.couplings_hz[a][b]
    }

    /// A copy with different chemical shifts and the same couplings.
    pub fn with_larmor(&self, larmor_rad_per_s: Vec<f64>) -> Result<Self> {
        Self::new(larmor_rad_per_s, self.couplings_hz.clone())
    }

    /// Diagonal energy E(b) (rad/s) of the basis state with index `b`:
    /// `Σᵢ ωᵢ sᵢ/2 + 2π Σ_{i<j} J_ij sᵢ sⱼ/4` with `sᵢ = ±1` (`+1` for
    /// bit 0 = spin up).
    pub fn energy(&self, b: usize) -> f64 {
        let n = self.n();
        let sign = |i: usize| 1.0 - 2.0 * ((b >> (n - 1 - i)) & 1) as f64;
        let mut e = 0.0;
        for i in 0..n {
            e += self.larmor_rad_per_s[i] * sign(i) / 2.0;
        }
        let tau = std::f64::consts::TAU;
        for i in 0..n {
            for j in (i + 1)..n {
                e += tau * self.couplings_hz[i][j] * sign(i) * sign(j) / 4.0;
            }
        }
        e
    }

    /// Parses from JSON or TOML text (tried in that order).
    pub fn from_config_str(text: &str) -> Result<Self> {
        if let Ok(sys) = serde_json::from_str::<SpinSystem>(text) {
            return Ok(sys);
        }
        Ok(toml::from_str::<SpinSystem>(text)?)
    }
}

#[derive(Deserialize)]
struct SpinSystemRepr {
    larmor_rad_per_s: Vec<f64>,
    couplings_hz: Vec<Vec<f64>>,
}

impl<'de> Deserialize<'de> for SpinSystem {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = SpinSystemRepr::deserialize(deserializer)?;
        SpinSystem::new(repr.larmor_rad_per_s, repr.couplings_hz).map_err(serde::de::Error::custom)
    }
}

/// One branch of the RF-field-strength distribution: with probability
/// `weight`, every physical rotation angle in the schedule is multiplied
/// by `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfBranch {
    pub weight: f64,
    pub scale: f64,
}

/// Parametric pulse-level noise: systematic rotation-angle error, a
/// weighted RF-amplitude distribution (correlated across the whole
/// schedule), and per-spin dephasing during free evolution.
///
/// Frame z-rotations and echo markers are bookkeeping, not RF pulses, and
/// are never touched by any knob. With every knob zero the model is
/// exactly ideal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Fractional over/under-rotation: physical angles become θ(1+ε).
    pub rotation_error: f64,
    /// RF-amplitude branches; weights must be nonnegative and sum to 1.
    pub rf_weights: Vec<RfBranch>,
    /// Per-spin coherence decay rates 1/T₂ (s⁻¹) active during free
    /// evolution.
    pub dephasing_rates: Vec<f64>,
}

impl NoiseModel {
    /// The exactly-ideal model for `n` spins.
    pub fn ideal(n: usize) -> Self {
        Self {
            rotation_error: 0.0,
            rf_weights: vec![RfBranch {
                weight: 1.0,
                scale: 1.0,
            }],
            dephasing_rates: vec![0.0; n],
        }
    }

    pub fn is_ideal(&self) -> bool {
        self.rotation_error == 0.0
            && self.rf_weights.iter().all(|b| b.scale == 1.0)
            && self.dephasing_rates.iter().all(|&r| r == 0.0)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !self.rotation_error.is_finite() || self.rotation_error <= -1.0 {
            return Err(Error::BadNoiseModel(format!(
                "rotation error must be finite and > -1 (got {})",
                self.rotation_error
            )));
        }
        if self.rf_weights.is_empty() {
            return Err(Error::BadNoiseModel("no RF branches".to_string()));
        }
        let total: f64 = self.rf_weights.iter().map(|b| b.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadNoiseModel(format!(
                "RF branch weights must sum to 1 (got {total})"
            )));
        }
        for b in &self.rf_weights {
            if b.weight < 0.0 || !b.weight.is_finite() || !b.scale.is_finite() || b.scale < 0.0 {
                return Err(Error::BadNoiseModel(format!(
                    "RF branch (weight {}, scale {}) out of range",
                    b.weight, b.scale
                )));
            }
        }
        if self.dephasing_rates.len() != n {
            return Err(Error::BadNoiseModel(format!(
                "need one dephasing rate per spin ({n}), got {}",
                self.dephasing_rates.len()
            )));
        }
        if self
            .dephasing_rates
            .iter()
            .any(|r| *r < 0.0 || !r.is_finite())
        {
            return Err(Error::BadNoiseModel(
                "dephasing rates must be finite and nonnegative".to_string(),
            ));
        }
        Ok(())
    }
}

/// The pseudo-pure state ρ = (1−ε)/2ⁿ · 1 + ε |0…0⟩⟨0…0|.
///
/// Trace is exactly 1 for any polarization, and every traceless
/// observable's expectation is ε times its pure-state value. (Note the
/// identity prefactor is (1−ε)/2ⁿ, which for four spins reads (1−ε)/16 —
/// the only normalization with unit trace.)
pub fn pps(n: usize, epsilon: f64) -> Result<DensityMatrix> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            reason: "polarization must satisfy 0 < epsilon <= 1",
        });
    }
    let mut rho = DensityMatrix::maximally_mixed(n)?;
    rho.scale(1.0 - epsilon);
    rho.add_scaled(&DensityMatrix::basis_projector(n, 0)?, epsilon)?;
    Ok(rho)
}

/// Undoes the pseudo-pure embedding: (ρ − (1−ε)/2ⁿ · 1)/ε.
///
/// Because every process in this module is unital (unitaries, echoes,
/// dephasing, convex RF mixing all fix the identity), this recovers
/// exactly the state the same process would have produced from the pure
/// input, and is itself a valid density matrix.
pub fn effective_state(rho: &DensityMatrix, epsilon: f64) -> Result<DensityMatrix> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            reason: "polarization must satisfy 0 < epsilon <= 1",
        });
    }
    let mut out = rho.clone();
    let background = (1.0 - epsilon) / out.dim() as f64;
    out.map_entries_mut(|i, j, v| {
        if i == j {
            *v -= background;
        }
    });
    out.scale(1.0 / epsilon);
    Ok(out)
}

/// Exact free evolution ρ ← U ρ U† with U = exp(−i H_sys τ), computed as
/// a diagonal phase map.
pub fn free_evolution(rho: &DensityMatrix, sys: &SpinSystem, tau: f64) -> Result<DensityMatrix> {
    if rho.n() != sys.n() {
        return Err(Error::SizeMismatch {
            what: "free evolution",
            left: rho.n(),
            right: sys.n(),
        });
    }
    if tau < 0.0 || !tau.is_finite() {
        return Err(Error::OutOfRange {
            name: "tau",
            value: tau,
            reason: "evolution time must be finite and nonnegative",
        });
    }
    let energies: Vec<f64> = (0..rho.dim()).map(|b| sys.energy(b)).collect();
    let mut out = rho.clone();
    out.map_entries_mut(|i, j, v| {
        *v *= Complex64::from_polar(1.0, -(energies[i] - energies[j]) * tau);
    });
    Ok(out)
}

/// Free evolution of a pure state: amplitude phases e^{−iE(b)τ}.
pub fn free_evolution_state(
    state: &StateVector,
    sys: &SpinSystem,
    tau: f64,
) -> Result<StateVector> {
    if state.n() != sys.n() {
        return Err(Error::SizeMismatch {
            what: "free evolution",
            left: state.n(),
            right: sys.n(),
        });
    }
    let amplitudes = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(b, a)| a * Complex64::from_polar(1.0, -sys.energy(b) * tau))
        .collect();
    StateVector::from_amplitudes(state.n(), amplitudes)
}
