//! Circuit-to-pulse compilation.
//!
//! Lowering rules:
//!
//! - `Rx/Ry(θ)` → one physical pulse with nominal duration
//!   200 µs + 300 µs·|θ|/π (angles folded into [0, π] for timing), so all
//!   compiled pulses last between 200 and 500 µs.
//! - `Rz(θ)`, `Z`, `SqrtZ`, `SqrtZInv` → zero-duration frame rotations.
//! - `H` → frame Rz(π) followed by a physical Ry(π/2) pulse.
//! - `X` → a physical Rx(π) pulse.
//! - `CNOT(c,t)` → Ry(±π/2) on t, a refocused coupling interval of total
//!   length 1/(2|J_ct|), Ry(∓π/2) and Rx(π/2) on t, and a frame Rz(π/2)
//!   on c (the ± follows the sign of J_ct). The block equals CNOT up to a
//!   global phase.
//!
//! The refocused interval uses Walsh-pattern echoes: the interval splits
//! into 2^g equal segments; each spin is assigned a Walsh function
//! w_j(x) = (−1)^popcount(j & x) over segment index x, with the control
//! and target sharing j = 1 and every spectator taking a distinct j ≥ 2;
//! an ideal π echo fires wherever a spin's sign flips between segments,
//! plus a final restoring echo if its last sign is −1. Summed over
//! segments, every chemical-shift term and every coupling except
//! control–target cancels exactly (Walsh orthogonality), and each spin
//! receives an even number of echoes, so the interval implements the bare
//! ZZ half-rotation — making every compiled schedule independent of the
//! chemical shifts by construction.

use crate::engine::{Circuit, Gate};
use crate::error::{Error, Result};

use super::schedule::{Axis, PulseEvent, PulseSchedule};
use super::SpinSystem;

/// Shortest nominal pulse (zero-angle limit), seconds.
pub const PULSE_BASE_S: f64 = 200e-6;

/// Additional nominal length per π of rotation angle, seconds.
pub const PULSE_SLOPE_S: f64 = 300e-6;

/// Knobs for compilation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompileOptions {
    /// Couplings weaker than this (Hz, absolute value) cannot host a CNOT.
    pub coupling_threshold_hz: f64,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            coupling_threshold_hz: 5.0,
        }
    }
}

/// Nominal duration of a physical pulse of the given angle: the angle is
/// folded into [0, π] (a rotation by 3π/2 is driven as −π/2), keeping
/// durations within [200, 500] µs.
pub fn pulse_duration(angle: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let wrapped = angle.abs() % tau;
    let folded = if wrapped > std::f64::consts::PI {
        tau - wrapped
    } else {
        wrapped
    };
    PULSE_BASE_S + PULSE_SLOPE_S * folded / std::f64::consts::PI
}

/// Compiles with default options.
pub fn compile_circuit(circuit: &Circuit, sys: &SpinSystem) -> Result<PulseSchedule> {
    compile_circuit_with(circuit, sys, &CompileOptions::default())
}

/// Compiles a circuit into a pulse schedule for the given spin system.
pub fn compile_circuit_with(
    circuit: &Circuit,
    sys: &SpinSystem,
    options: &CompileOptions,
) -> Result<PulseSchedule> {
    if circuit.n() != sys.n() {
        return Err(Error::SizeMismatch {
            what: "compilation register",
            left: circuit.n(),
            right: sys.n(),
        });
    }
    let mut schedule = PulseSchedule::new(sys.n())?;
    for &gate in circuit.gates() {
        lower_gate(gate, sys, options, &mut schedule)?;
    }
    Ok(schedule)
}

fn push_pulse(schedule: &mut PulseSchedule, qubit: usize, axis: Axis, angle: f64) -> Result<()> {
    schedule.push(PulseEvent::Rotation {
        qubit,
        axis,
        angle,
        duration: pulse_duration(angle),
    })
}

fn push_frame_z(schedule: &mut PulseSchedule, qubit: usize, angle: f64) -> Result<()> {
    schedule.push(PulseEvent::Rotation {
        qubit,
        axis: Axis::Z,
        angle,
        duration: 0.0,
    })
}

fn lower_gate(
    gate: Gate,
    sys: &SpinSystem,
    options: &CompileOptions,
    schedule: &mut PulseSchedule,
) -> Result<()> {
    use std::f64::consts::{FRAC_PI_2, PI};
    gate.validate(sys.n())?;
    match gate {
        Gate::H { qubit } => {
            // H = Ry(π/2) · Z up to a global phase; the frame flip comes
            // first in time.
            push_frame_z(schedule, qubit, PI)?;
            push_pulse(schedule, qubit, Axis::Y, FRAC_PI_2)?;
        }
        Gate::X { qubit } => push_pulse(schedule, qubit, Axis::X, PI)?,
        Gate::Z { qubit } => push_frame_z(schedule, qubit, PI)?,
        Gate::SqrtZ { qubit } => push_frame_z(schedule, qubit, FRAC_PI_2)?,
        Gate::SqrtZInv { qubit } => push_frame_z(schedule, qubit, -FRAC_PI_2)?,
        Gate::Rx { qubit, angle } => {
            if angle != 0.0 {
                push_pulse(schedule, qubit, Axis::X, angle)?;
            }
        }
        Gate::Ry { qubit, angle } => {
            if angle != 0.0 {
                push_pulse(schedule, qubit, Axis::Y, angle)?;
            }
        }
        Gate::Rz { qubit, angle } => {
            if angle != 0.0 {
                push_frame_z(schedule, qubit, angle)?;
            }
        }
        Gate::Cnot { control, target } => {
            lower_cnot(control, target, sys, options, schedule)?;
        }
    }
    Ok(())
}

fn lower_cnot(
    control: usize,
    target: usize,
    sys: &SpinSystem,
    options: &CompileOptions,
    schedule: &mut PulseSchedule,
) -> Result<()> {
    use std::f64::consts::FRAC_PI_2;
    let j = sys.coupling_hz(control, target);
    if j.abs() < options.coupling_threshold_hz {
        return Err(Error::UncoupledPair {
            control,
            target,
            j_hz: j,
            threshold_hz: options.coupling_threshold_hz,
        });
    }
    let first_ry = if j > 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 };
    push_pulse(schedule, target, Axis::Y, first_ry)?;
    push_refocused_interval(control, target, 1.0 / (2.0 * j.abs()), sys.n(), schedule)?;
    push_pulse(schedule, target, Axis::Y, -first_ry)?;
    push_pulse(schedule, target, Axis::X, FRAC_PI_2)?;
    push_frame_z(schedule, control, FRAC_PI_2)?;
    Ok(())
}

/// The Walsh index of each spin for a refocused control–target interval.
fn walsh_assignment(control: usize, target: usize, n: usize) -> Vec<u32> {
    let mut next = 2;
    (0..n)
        .map(|spin| {
            if spin == control || spin == target {
                1
            } else {
                let idx = next;
                next += 1;
                idx
            }
        })
        .collect()
}

fn walsh_sign(index: u32, segment: u32) -> i32 {
    if (index & segment).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn push_refocused_interval(
    control: usize,
    target: usize,
    total: f64,
    n: usize,
    schedule: &mut PulseSchedule,
) -> Result<()> {
    let assignment = walsh_assignment(control, target, n);
    let max_index = *assignment.iter().max().expect("n >= 2 spins");
    let segments = (max_index + 1).next_power_of_two();
    let dt = total / segments as f64;
    for segment in 0..segments {
        schedule.push(PulseEvent::FreeEvolution { duration: dt })?;
        for (spin, &index) in assignment.iter().enumerate() {
            let here = walsh_sign(index, segment);
            let flip = if segment + 1 < segments {
                here != walsh_sign(index, segment + 1)
            } else {
                here == -1 // restore the frame at the end of the interval
            };
            if flip {
                schedule.push(PulseEvent::Echo { qubit: spin })?;
            }
        }
    }
    Ok(())
}
