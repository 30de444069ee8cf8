//! Signed multi-qubit Pauli operators with exact phase tracking.
//!
//! A `PauliString` is stored symplectically: bit `q` of the `x` (resp. `z`)
//! mask records an X (resp. Z) factor on qubit `q`; a qubit with both bits
//! set carries Y. Phases live in the cyclic group {+1, +i, −1, −i} and are
//! tracked exactly as powers of i, so products like X·Z = −iY come out with
//! the right sign. Commutation checks and stabilizer rank work purely over
//! GF(2) — no floating point enters the group structure.
//!
//! Text form: a phase prefix (`+`, `i`, `-`, `-i`) followed by one letter
//! per qubit with qubit 1 leftmost, e.g. `+XIZY` is X on qubit 1, Z on
//! qubit 3 and Y on qubit 4.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::TorusLattice;

/// Upper bound on qubit count imposed by the 64-bit masks.
pub const MAX_QUBITS: usize = 64;

/// A fourth root of unity, stored as the exponent of i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Phase {
    #[default]
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_exponent(e: u32) -> Self {
        match e % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    /// Exponent e such that the phase equals i^e.
    pub fn exponent(self) -> u32 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            Phase::PlusOne => Complex64::new(1.0, 0.0),
            Phase::PlusI => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// True for ±1; Pauli strings with real phase are Hermitian.
    pub fn is_real(self) -> bool {
        matches!(self, Phase::PlusOne | Phase::MinusOne)
    }

    pub fn prefix(self) -> &'static str {
        match self {
            Phase::PlusOne => "+",
            Phase::PlusI => "i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    // Phases are powers of i, so their product adds exponents mod 4.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Phase) -> Phase {
        Phase::from_exponent(self.exponent() + other.exponent())
    }
}

/// Single-qubit Pauli symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn bits(self) -> (u64, u64) {
        match self {
            PauliLetter::I => (0, 0),
            PauliLetter::X => (1, 0),
            PauliLetter::Y => (1, 1),
            PauliLetter::Z => (0, 1),
        }
    }

    fn from_bits(x: u64, z: u64) -> Self {
        match (x, z) {
            (0, 0) => PauliLetter::I,
            (1, 0) => PauliLetter::X,
            (1, 1) => PauliLetter::Y,
            _ => PauliLetter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// A signed Pauli operator on `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

impl PauliString {
    fn check_n(n: usize) -> Result<()> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Self {
            n,
            x: 0,
            z: 0,
            phase: Phase::PlusOne,
        })
    }

    /// A single Pauli letter on qubit `q` (phase +1).
    pub fn single(n: usize, q: usize, letter: PauliLetter) -> Result<Self> {
        Self::from_sparse(n, Phase::PlusOne, &[(q, letter)])
    }

    /// Builds a string from `(qubit, letter)` assignments; a qubit assigned
    /// twice is rejected via the out-of-range check on mask collisions.
    pub fn from_sparse(n: usize, phase: Phase, letters: &[(usize, PauliLetter)]) -> Result<Self> {
        Self::check_n(n)?;
        let mut s = Self {
            n,
            x: 0,
            z: 0,
            phase,
        };
        for &(q, letter) in letters {
            if q >= n {
                return Err(Error::IndexOutOfRange {
                    what: "qubit",
                    index: q,
                    count: n,
                });
            }
            let (xb, zb) = letter.bits();
            s.x |= xb << q;
            s.z |= zb << q;
        }
        Ok(s)
    }

    pub fn from_letters(phase: Phase, letters: &[PauliLetter]) -> Result<Self> {
        let assignments: Vec<(usize, PauliLetter)> = letters.iter().copied().enumerate().collect();
        Self::from_sparse(letters.len(), phase, &assignments)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Replaces the phase, keeping the letters.
    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// X-part bit mask; bit `q` set means an X or Y factor on qubit `q`.
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    /// Z-part bit mask; bit `q` set means a Z or Y factor on qubit `q`.
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, q: usize) -> Result<PauliLetter> {
        if q >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "qubit",
                index: q,
                count: self.n,
            });
        }
        Ok(PauliLetter::from_bits((self.x >> q) & 1, (self.z >> q) & 1))
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Number of Y letters (needed for the i-power in dense actions).
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0 && self.phase == Phase::PlusOne
    }

    /// Hermitian iff the phase is ±1 (the letterwise tensor is Hermitian).
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Letterwise product `self · other` with exact phase accumulation.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                what: "Pauli product",
                left: self.n,
                right: other.n,
            });
        }
        let mut exp = self.phase.exponent() + other.phase.exponent();
        for q in 0..self.n {
            let a = PauliLetter::from_bits((self.x >> q) & 1, (self.z >> q) & 1);
            let b = PauliLetter::from_bits((other.x >> q) & 1, (other.z >> q) & 1);
            exp += pair_exponent(a, b);
        }
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: Phase::from_exponent(exp),
        })
    }

    /// True iff the two strings commute (symplectic inner product 0).
    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                what: "commutation check",
                left: self.n,
                right: other.n,
            });
        }
        Ok(symplectic_inner(&self.symplectic(), &other.symplectic())? == 0)
    }

    pub fn symplectic(&self) -> SymplecticVector {
        SymplecticVector {
            n: self.n,
            x: self.x,
            z: self.z,
        }
    }

    /// The phase as a complex number times the letterwise tensor.
    pub fn phase_value(&self) -> Complex64 {
        self.phase.value()
    }
}

/// Exponent of i picked up when multiplying two single-qubit letters.
fn pair_exponent(a: PauliLetter, b: PauliLetter) -> u32 {
    use PauliLetter::{X, Y, Z};
    match (a, b) {
        (X, Y) | (Y, Z) | (Z, X) => 1, // XY = iZ, YZ = iX, ZX = iY
        (Y, X) | (Z, Y) | (X, Z) => 3, // reversed order picks up −i
        _ => 0,
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase.prefix())?;
        for q in 0..self.n {
            let letter = PauliLetter::from_bits((self.x >> q) & 1, (self.z >> q) & 1);
            write!(f, "{}", letter.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (phase, rest) = if let Some(rest) = s.strip_prefix("-i") {
            (Phase::MinusI, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (Phase::PlusI, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (Phase::PlusI, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (Phase::MinusOne, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (Phase::PlusOne, rest)
        } else {
            (Phase::PlusOne, s)
        };
        if rest.is_empty() {
            return Err(Error::ParsePauli {
                input: s.to_string(),
                reason: "no letters",
            });
        }
        if rest.len() > MAX_QUBITS {
            return Err(Error::ParsePauli {
                input: s.to_string(),
                reason: "too many letters",
            });
        }
        let mut letters = Vec::with_capacity(rest.len());
        for ch in rest.chars() {
            letters.push(match ch {
                'I' => PauliLetter::I,
                'X' => PauliLetter::X,
                'Y' => PauliLetter::Y,
                'Z' => PauliLetter::Z,
                _ => {
                    return Err(Error::ParsePauli {
                        input: s.to_string(),
                        reason: "letters must be one of I, X, Y, Z",
                    })
                }
            });
        }
        PauliString::from_letters(phase, &letters)
    }
}

/// The GF(2) symplectic image of a Pauli string (phase forgotten).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticVector {
    pub n: usize,
    pub x: u64,
    pub z: u64,
}

/// Symplectic inner product ⟨a, b⟩ = a_x·b_z + a_z·b_x (mod 2); zero iff the
/// operators commute.
pub fn symplectic_inner(a: &SymplecticVector, b: &SymplecticVector) -> Result<u8> {
    if a.n != b.n {
        return Err(Error::SizeMismatch {
            what: "symplectic inner product",
            left: a.n,
            right: b.n,
        });
    }
    let parity = ((a.x & b.z).count_ones() + (a.z & b.x).count_ones()) % 2;
    Ok(parity as u8)
}

/// The star operator A_s: X on the four edges incident to vertex `s`.
pub fn star_operator(lattice: &TorusLattice, s: usize) -> Result<PauliString> {
    stabilizer_from_edges(lattice, lattice.star_edges(s)?, PauliLetter::X)
}

/// The plaquette operator B_p: Z on the four boundary edges of face `p`.
pub fn plaquette_operator(lattice: &TorusLattice, p: usize) -> Result<PauliString> {
    stabilizer_from_edges(lattice, lattice.boundary_edges(p)?, PauliLetter::Z)
}

fn stabilizer_from_edges(
    lattice: &TorusLattice,
    edges: [usize; 4],
    letter: PauliLetter,
) -> Result<PauliString> {
    if lattice.k() < 2 {
        return Err(Error::LatticeSize {
            k: lattice.k(),
            reason: "stabilizer operators need k >= 2 (k=1 stars touch each edge twice)",
        });
    }
    let assignments: Vec<(usize, PauliLetter)> = edges.iter().map(|&e| (e, letter)).collect();
    PauliString::from_sparse(lattice.n_qubits(), Phase::PlusOne, &assignments)
}

/// GF(2) rank of the symplectic matrix spanned by `generators`.
///
/// The generators must pairwise commute and carry real phases (they are
/// meant to generate a stabilizer group); the ground-space dimension of the
/// group on `n` qubits is `2^(n − rank)`.
pub fn stabilizer_rank(generators: &[PauliString]) -> Result<usize> {
    for (i, g) in generators.iter().enumerate() {
        if !g.phase().is_real() {
            return Err(Error::GeneratorPhase { index: i });
        }
        for (j, h) in generators.iter().enumerate().skip(i + 1) {
            if !g.commutes_with(h)? {
                return Err(Error::NonCommutingGenerators { i, j });
            }
        }
    }
    // Pack each generator's (x | z) pair into one 128-bit row.
    let mut rows: Vec<u128> = generators
        .iter()
        .map(|g| ((g.x_mask() as u128) << MAX_QUBITS) | g.z_mask() as u128)
        .collect();
    let mut rank = 0;
    for bit in (0..2 * MAX_QUBITS).rev() {
        let mask = 1u128 << bit;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & mask != 0 {
                *row ^= pivot_row;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Ground-space dimension `2^(n − rank)` of a stabilizer group.
pub fn ground_space_dimension(n: usize, rank: usize) -> Result<u64> {
    if rank > n || n - rank >= 64 {
        return Err(Error::OutOfRange {
            name: "rank",
            value: rank as f64,
            reason: "rank must satisfy 0 <= n - rank < 64",
        });
    }
    Ok(1u64 << (n - rank))
}

/// All 2k² stabilizer generators (stars then plaquettes) of a lattice.
pub fn all_stabilizers(lattice: &TorusLattice) -> Result<Vec<PauliString>> {
    let mut gens = Vec::with_capacity(lattice.n_vertices() + lattice.n_faces());
    for s in 0..lattice.n_vertices() {
        gens.push(star_operator(lattice, s)?);
    }
    for p in 0..lattice.n_faces() {
        gens.push(plaquette_operator(lattice, p)?);
    }
    Ok(gens)
}
