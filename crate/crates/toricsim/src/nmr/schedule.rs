//! Pulse schedules: the compiled, time-ordered representation of a
//! circuit as rotations, free-evolution intervals, and echo markers.

use serde::{Deserialize, Serialize};

use crate::engine::check_engine_qubits;
use crate::error::{Error, Result};

/// Rotation axis in the rotating frame. X and Y rotations are physical RF
/// pulses; Z rotations are reference-frame bookkeeping with zero duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// One schedule event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum PulseEvent {
    /// A rotation by `angle` (rad) about `axis` on one spin. `duration`
    /// is the nominal wall-clock length in seconds (zero for z-frame
    /// rotations).
    Rotation {
        qubit: usize,
        axis: Axis,
        angle: f64,
        duration: f64,
    },
    /// Evolution under the full system Hamiltonian for `duration` seconds.
    FreeEvolution { duration: f64 },
    /// An instantaneous, ideal π refocusing pulse on one spin.
    Echo { qubit: usize },
}

impl PulseEvent {
    pub fn duration(&self) -> f64 {
        match *self {
            PulseEvent::Rotation { duration, .. } | PulseEvent::FreeEvolution { duration } => {
                duration
            }
            PulseEvent::Echo { .. } => 0.0,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let qubit = match *self {
            PulseEvent::Rotation {
                qubit, duration, ..
            } => {
                if duration < 0.0 || !duration.is_finite() {
                    return Err(Error::OutOfRange {
                        name: "rotation duration",
                        value: duration,
                        reason: "must be finite and nonnegative",
                    });
                }
                qubit
            }
            PulseEvent::FreeEvolution { duration } => {
                if duration < 0.0 || !duration.is_finite() {
                    return Err(Error::OutOfRange {
                        name: "free-evolution duration",
                        value: duration,
                        reason: "must be finite and nonnegative",
                    });
                }
                return Ok(());
            }
            PulseEvent::Echo { qubit } => qubit,
        };
        if qubit >= n {
            return Err(Error::IndexOutOfRange {
                what: "spin",
                index: qubit,
                count: n,
            });
        }
        Ok(())
    }
}

/// A time-ordered event list for an `n`-spin register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    n: usize,
    events: Vec<PulseEvent>,
}

impl PulseSchedule {
    pub fn new(n: usize) -> Result<Self> {
        check_engine_qubits(n)?;
        Ok(Self {
            n,
            events: Vec::new(),
        })
    }

    pub fn push(&mut self, event: PulseEvent) -> Result<()> {
        event.validate(self.n)?;
        self.events.push(event);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Sum of all event durations, in seconds.
    pub fn total_duration(&self) -> f64 {
        self.events.iter().map(PulseEvent::duration).sum()
    }

    /// Number of physical RF pulses (x/y rotations; frames and echoes not
    /// counted).
    pub fn pulse_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| {
                matches!(
                    e,
                    PulseEvent::Rotation { axis: Axis::X, .. }
                        | PulseEvent::Rotation { axis: Axis::Y, .. }
                )
            })
            .count()
    }

    /// A human-readable table: one row per event with qubit, axis, angle,
    /// and duration columns.
    pub fn table(&self) -> String {
        let mut out =
            String::from("  # | event          | qubit | axis | angle (rad) | duration (µs)\n");
        out.push_str("----+----------------+-------+------+-------------+--------------\n");
        for (i, event) in self.events.iter().enumerate() {
            let row = match *event {
                PulseEvent::Rotation {
                    qubit,
                    axis,
                    angle,
                    duration,
                } => format!(
                    "{i:>3} | rotation       | {qubit:>5} | {:>4} | {angle:>11.6} | {:>12.1}",
                    axis.as_str(),
                    duration * 1e6
                ),
                PulseEvent::FreeEvolution { duration } => format!(
                    "{i:>3} | free evolution |     - |    - |           - | {:>12.1}",
                    duration * 1e6
                ),
                PulseEvent::Echo { qubit } => {
                    format!(
                        "{i:>3} | echo           | {qubit:>5} |    x |           - |          0.0"
                    )
                }
            };
            out.push_str(&row);
            out.push('\n');
        }
        out.push_str(&format!(
            "total duration: {:.1} µs over {} events ({} RF pulses)\n",
            self.total_duration() * 1e6,
            self.len(),
            self.pulse_count()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_accumulates_duration() {
        let mut s = PulseSchedule::new(2).unwrap();
        s.push(PulseEvent::Rotation {
            qubit: 0,
            axis: Axis::Y,
            angle: std::f64::consts::FRAC_PI_2,
            duration: 350e-6,
        })
        .unwrap();
        s.push(PulseEvent::FreeEvolution { duration: 7e-3 })
            .unwrap();
        s.push(PulseEvent::Echo { qubit: 1 }).unwrap();
        s.push(PulseEvent::Rotation {
            qubit: 1,
            axis: Axis::Z,
            angle: 1.0,
            duration: 0.0,
        })
        .unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.pulse_count(), 1);
        assert!((s.total_duration() - 7.35e-3).abs() < 1e-12);
    }

    #[test]
    fn push_validates_events() {
        let mut s = PulseSchedule::new(2).unwrap();
        assert!(s.push(PulseEvent::Echo { qubit: 2 }).is_err());
        assert!(s
            .push(PulseEvent::FreeEvolution { duration: -1.0 })
            .is_err());
        assert!(s
            .push(PulseEvent::Rotation {
                qubit: 0,
                axis: Axis::X,
                angle: 1.0,
                duration: f64::NAN,
            })
            .is_err());
    }

    #[test]
    fn table_lists_every_event() {
        let mut s = PulseSchedule::new(2).unwrap();
        s.push(PulseEvent::Rotation {
            qubit: 0,
            axis: Axis::Y,
            angle: std::f64::consts::FRAC_PI_2,
            duration: 350e-6,
        })
        .unwrap();
        s.push(PulseEvent::FreeEvolution { duration: 7e-3 })
            .unwrap();
        s.push(PulseEvent::Echo { qubit: 1 }).unwrap();
        let table = s.table();
        assert_eq!(table.lines().count(), 2 + 3 + 1);
        assert!(table.contains("rotation"));
        assert!(table.contains("free evolution"));
        assert!(table.contains("echo"));
        assert!(table.contains("total duration: 7350.0 µs"));
    }

    #[test]
    fn schedule_serde_round_trips() {
        let mut s = PulseSchedule::new(3).unwrap();
        s.push(PulseEvent::Rotation {
            qubit: 2,
            axis: Axis::X,
            angle: -std::f64::consts::PI,
            duration: 500e-6,
        })
        .unwrap();
        s.push(PulseEvent::Echo { qubit: 0 }).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: PulseSchedule = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
