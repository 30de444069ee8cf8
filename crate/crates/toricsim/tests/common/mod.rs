//! Shared brute-force oracles for integration tests.
//!
//! Everything here is built the slow, literal way — explicit Kronecker
//! products, dense matrix multiplication, diagonal exponentials — without
//! reusing any of the library's fast-path update logic, so agreement
//! between the two routes is meaningful evidence.

// Each integration-test target compiles this module separately and uses
// its own subset of the helpers.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use toricsim::engine::{Circuit, DensityMatrix, Gate, StateVector};
use toricsim::nmr::{Axis, PulseEvent, PulseSchedule, SpinSystem};
use toricsim::pauli::{PauliLetter, PauliString};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_diagonal_element(dim, dim, c(1.0, 0.0))
}

/// Kronecker product, written out as the quadruple loop.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::from_element(ar * br, ac * bc, c(0.0, 0.0));
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn letter_matrix(letter: PauliLetter) -> DMatrix<Complex64> {
    let rows = match letter {
        PauliLetter::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        PauliLetter::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        PauliLetter::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        PauliLetter::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
    };
    DMatrix::from_fn(2, 2, |i, j| rows[i][j])
}

/// The dense matrix of a signed Pauli string: phase × (qubit-1 factor ⊗ …).
pub fn string_matrix(p: &PauliString) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, p.phase_value());
    for q in 0..p.n() {
        m = kron(&m, &letter_matrix(p.letter(q).expect("q < n")));
    }
    m
}

/// Embeds a 2×2 matrix on qubit `q` of an `n`-qubit register
/// (qubit 0 is the most significant factor).
pub fn embed_single(n: usize, q: usize, u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut m = eye(1 << q);
    m = kron(&m, u);
    kron(&m, &eye(1 << (n - 1 - q)))
}

/// The dense matrix of one gate, every 2×2 written out by hand here.
pub fn gate_matrix(n: usize, gate: &Gate) -> DMatrix<Complex64> {
    let frac = std::f64::consts::FRAC_1_SQRT_2;
    match *gate {
        Gate::H { qubit } => embed_single(
            n,
            qubit,
            &DMatrix::from_row_slice(
                2,
                2,
                &[c(frac, 0.0), c(frac, 0.0), c(frac, 0.0), c(-frac, 0.0)],
            ),
        ),
        Gate::X { qubit } => embed_single(n, qubit, &letter_matrix(PauliLetter::X)),
        Gate::Z { qubit } => embed_single(n, qubit, &letter_matrix(PauliLetter::Z)),
        Gate::SqrtZ { qubit } => embed_single(
            n,
            qubit,
            &DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
        ),
        Gate::SqrtZInv { qubit } => embed_single(
            n,
            qubit,
            &DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]),
        ),
        Gate::Rx { qubit, angle } => embed_single(n, qubit, &axis_rotation(Axis::X, angle)),
        Gate::Ry { qubit, angle } => embed_single(n, qubit, &axis_rotation(Axis::Y, angle)),
        Gate::Rz { qubit, angle } => embed_single(n, qubit, &axis_rotation(Axis::Z, angle)),
        Gate::Cnot { control, target } => {
            let dim = 1 << n;
            let mut m = DMatrix::from_element(dim, dim, c(0.0, 0.0));
            for b in 0..dim {
                let control_set = (b >> (n - 1 - control)) & 1 == 1;
                let image = if control_set {
                    b ^ (1 << (n - 1 - target))
                } else {
                    b
                };
                m[(image, b)] = c(1.0, 0.0);
            }
            m
        }
    }
}

/// exp(−i θ σ/2) = cos(θ/2)·I − i sin(θ/2)·σ, as an explicit 2×2.
pub fn axis_rotation(axis: Axis, angle: f64) -> DMatrix<Complex64> {
    let sigma = match axis {
        Axis::X => letter_matrix(PauliLetter::X),
        Axis::Y => letter_matrix(PauliLetter::Y),
        Axis::Z => letter_matrix(PauliLetter::Z),
    };
    let cos = c((angle / 2.0).cos(), 0.0);
    let isin = c(0.0, (angle / 2.0).sin());
    eye(2) * cos - sigma * isin
}

/// Multiplies the gate matrices of a circuit out, first gate rightmost.
pub fn circuit_matrix(circuit: &Circuit) -> DMatrix<Complex64> {
    let mut total = eye(1 << circuit.n());
    for gate in circuit.gates() {
        total = gate_matrix(circuit.n(), gate) * total;
    }
    total
}

/// The spin Hamiltonian Σᵢ ωᵢ·Zᵢ/2 + 2π Σᵢ<ⱼ Jᵢⱼ·ZᵢZⱼ/4 as a dense
/// (diagonal) matrix built from Kronecker embeddings.
pub fn hamiltonian_matrix(sys: &SpinSystem) -> DMatrix<Complex64> {
    let n = sys.n();
    let dim = 1 << n;
    let mut h = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    let z = |q: usize| embed_single(n, q, &letter_matrix(PauliLetter::Z));
    for i in 0..n {
        h += z(i) * c(sys.larmor(i) / 2.0, 0.0);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            h += z(i)
                * z(j)
                * c(
                    2.0 * std::f64::consts::PI * sys.coupling_hz(i, j) / 4.0,
                    0.0,
                );
        }
    }
    h
}

/// exp(−i H τ) for the diagonal spin Hamiltonian.
pub fn free_evolution_matrix(sys: &SpinSystem, tau: f64) -> DMatrix<Complex64> {
    let h = hamiltonian_matrix(sys);
    let dim = h.nrows();
    let mut u = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for b in 0..dim {
        u[(b, b)] = (c(0.0, -1.0) * h[(b, b)] * c(tau, 0.0)).exp();
    }
    u
}

/// The total ideal propagator of a pulse schedule: rotations as
/// exp(−iθσ/2), free evolution as the diagonal exponential, echoes as X.
pub fn schedule_propagator(schedule: &PulseSchedule, sys: &SpinSystem) -> DMatrix<Complex64> {
    let n = schedule.n();
    let mut total = eye(1 << n);
    for event in schedule.events() {
        let step = match *event {
            PulseEvent::Rotation {
                qubit, axis, angle, ..
            } => embed_single(n, qubit, &axis_rotation(axis, angle)),
            PulseEvent::FreeEvolution { duration } => free_evolution_matrix(sys, duration),
            PulseEvent::Echo { qubit } => embed_single(n, qubit, &letter_matrix(PauliLetter::X)),
        };
        total = step * total;
    }
    total
}

pub fn state_column(state: &StateVector) -> DMatrix<Complex64> {
    DMatrix::from_fn(state.dim(), 1, |i, _| state.amplitude(i))
}

pub fn density_matrix_of(rho: &DensityMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(rho.dim(), rho.dim(), |i, j| rho.entry(i, j))
}

pub fn max_column_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Distance after rotating `other` by the unit phase that matches it to
/// `reference` on the latter's largest entry — the comparison that treats
/// global phase as unphysical.
pub fn aligned_distance(reference: &DMatrix<Complex64>, other: &DMatrix<Complex64>) -> f64 {
    let pivot = (0..reference.len())
        .max_by(|&a, &b| reference[a].norm().total_cmp(&reference[b].norm()))
        .expect("nonempty matrix");
    let ratio = reference[pivot] / other[pivot];
    let rot = ratio / ratio.norm();
    max_column_distance(reference, &(other * rot))
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> StateVector {
    let dim = 1usize << n;
    let amplitudes: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    StateVector::from_unnormalized(n, amplitudes).expect("nonzero with probability one")
}

pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let parts: Vec<(f64, DensityMatrix)> = [0.5, 0.3, 0.2]
        .iter()
        .map(|&w| (w, DensityMatrix::from_pure(&random_state(rng, n))))
        .collect();
    DensityMatrix::weighted_mix(&parts).expect("weights sum to one")
}

/// A uniformly random signed Pauli string (real phase only when
/// `hermitian` is set).
pub fn random_pauli<R: Rng + ?Sized>(rng: &mut R, n: usize, hermitian: bool) -> PauliString {
    use toricsim::pauli::Phase;
    let letters: Vec<PauliLetter> = (0..n)
        .map(|_| match rng.random_range(0..4) {
            0 => PauliLetter::I,
            1 => PauliLetter::X,
            2 => PauliLetter::Y,
            _ => PauliLetter::Z,
        })
        .collect();
    let phase = if hermitian {
        if rng.random::<bool>() {
            Phase::PlusOne
        } else {
            Phase::MinusOne
        }
    } else {
        Phase::from_exponent(rng.random_range(0..4))
    };
    PauliString::from_letters(phase, &letters).expect("letters sized")
}
