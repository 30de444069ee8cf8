//! Full Pauli-basis state tomography: coefficient extraction, density-matrix
//! reconstruction, fidelity scoring, and bar-table export.
//!
//! Every n-qubit density operator decomposes uniquely over the 4ⁿ Pauli
//! strings as ρ = (1/2ⁿ) Σ_P c_P·P with real coefficients c_P = Tr(ρP).
//! [`tomograph`] evaluates all 4ⁿ expectations exactly and reconstructs ρ
//! from them, which makes the round-trip a built-in self-check. Coefficients
//! are indexed base-4 lexicographically with I < X < Y < Z and qubit 1 as
//! the most significant digit, so files and reports order deterministically.
//!
//! Spectrometer hardware cannot read the coefficients directly: only product
//! operators with exactly one transverse (X or Y) spin show up in the
//! detected signal, and every other coefficient must first be rotated into
//! such a form by a *readout setting* — one 90° pulse (or none) per spin.
//! [`readout_library`] builds a fixed covering library of these settings;
//! for the four-spin system it is padded to the hardware count of
//! [`FOUR_SPIN_READOUT_SETTINGS`]. The expectations themselves are always
//! computed exactly; the settings are bookkeeping metadata recording which
//! acquisition would expose each coefficient. [`tomograph_sampled`] swaps
//! the exact expectations for finite-shot binomial estimates when shot
//! noise is the object of study.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{check_engine_qubits, DensityMatrix, PauliAction, StateVector};
use crate::error::{Error, Result};
use crate::pauli::{PauliLetter, PauliString, Phase};

/// Library size for the four-spin system: a greedy covering set padded to
/// the fixed hardware count of 40 readout settings.
pub const FOUR_SPIN_READOUT_SETTINGS: usize = 40;

/// Number of Pauli coefficients on `n` qubits, 4ⁿ.
pub fn num_labels(n: usize) -> usize {
    1usize << (2 * n)
}

fn letter_digit(letter: PauliLetter) -> usize {
    match letter {
        PauliLetter::I => 0,
        PauliLetter::X => 1,
        PauliLetter::Y => 2,
        PauliLetter::Z => 3,
    }
}

fn digit_letter(digit: usize) -> PauliLetter {
    match digit {
        0 => PauliLetter::I,
        1 => PauliLetter::X,
        2 => PauliLetter::Y,
        _ => PauliLetter::Z,
    }
}

fn check_label_index(n: usize, index: usize) -> Result<()> {
    check_engine_qubits(n)?;
    if index >= num_labels(n) {
        return Err(Error::IndexOutOfRange {
            what: "Pauli label",
            index,
            count: num_labels(n),
        });
    }
    Ok(())
}

/// The label of coefficient `index`, e.g. `"ZIXY"`.
pub fn pauli_label(n: usize, index: usize) -> Result<String> {
    check_label_index(n, index)?;
    let mut out = String::with_capacity(n);
    for q in 0..n {
        let digit = (index >> (2 * (n - 1 - q))) & 3;
        out.push(digit_letter(digit).as_char());
    }
    Ok(out)
}

/// The (phase +1) Pauli string of coefficient `index`.
pub fn pauli_from_index(n: usize, index: usize) -> Result<PauliString> {
    check_label_index(n, index)?;
    let letters: Vec<PauliLetter> = (0..n)
        .map(|q| digit_letter((index >> (2 * (n - 1 - q))) & 3))
        .collect();
    PauliString::from_letters(Phase::PlusOne, &letters)
}

/// The coefficient index of a Pauli string; its phase is ignored.
pub fn pauli_index(p: &PauliString) -> Result<usize> {
    let n = p.n();
    let mut index = 0usize;
    for q in 0..n {
        index |= letter_digit(p.letter(q)?) << (2 * (n - 1 - q));
    }
    Ok(index)
}

/// The binary label of basis state `index`, e.g. `"0110"`.
pub fn basis_label(n: usize, index: usize) -> Result<String> {
    check_engine_qubits(n)?;
    if index >= (1 << n) {
        return Err(Error::IndexOutOfRange {
            what: "basis state",
            index,
            count: 1 << n,
        });
    }
    Ok(format!("{index:0n$b}"))
}

/// One per-spin rotation inside a readout setting: nothing, a 90° pulse
/// about x, or a 90° pulse about y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadoutRotation {
    Idle,
    X90,
    Y90,
}

impl ReadoutRotation {
    /// Single-character label: `I`, `X`, or `Y`.
    pub fn as_char(self) -> char {
        match self {
            ReadoutRotation::Idle => 'I',
            ReadoutRotation::X90 => 'X',
            ReadoutRotation::Y90 => 'Y',
        }
    }

    /// Whether `letter` lands in the transverse (detected) plane after this
    /// rotation. Conjugation sends each non-identity letter transverse
    /// under exactly two of the three rotations:
    /// idle keeps X and Y transverse; a 90° x-pulse turns Z into ∓Y while
    /// parking Y along z; a 90° y-pulse turns Z into ±X while parking X.
    pub fn makes_transverse(self, letter: PauliLetter) -> bool {
        match letter {
            PauliLetter::I => false,
            PauliLetter::X => matches!(self, ReadoutRotation::Idle | ReadoutRotation::X90),
            PauliLetter::Y => matches!(self, ReadoutRotation::Idle | ReadoutRotation::Y90),
            PauliLetter::Z => matches!(self, ReadoutRotation::X90 | ReadoutRotation::Y90),
        }
    }

    /// The two letters this rotation makes transverse.
    fn transverse_letters(self) -> [PauliLetter; 2] {
        match self {
            ReadoutRotation::Idle => [PauliLetter::X, PauliLetter::Y],
            ReadoutRotation::X90 => [PauliLetter::X, PauliLetter::Z],
            ReadoutRotation::Y90 => [PauliLetter::Y, PauliLetter::Z],
        }
    }

    /// The unique non-identity letter this rotation keeps longitudinal.
    fn longitudinal_letter(self) -> PauliLetter {
        match self {
            ReadoutRotation::Idle => PauliLetter::Z,
            ReadoutRotation::X90 => PauliLetter::Y,
            ReadoutRotation::Y90 => PauliLetter::X,
        }
    }
}

/// A readout setting: one rotation per spin, applied right before signal
/// acquisition. It exposes exactly the Pauli strings that it maps onto a
/// directly observable form — one transverse spin, everything else
/// identity or longitudinal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadoutSetting {
    rotations: Vec<ReadoutRotation>,
}

impl ReadoutSetting {
    pub fn new(rotations: Vec<ReadoutRotation>) -> Self {
        Self { rotations }
    }

    pub fn n(&self) -> usize {
        self.rotations.len()
    }

    pub fn rotations(&self) -> &[ReadoutRotation] {
        &self.rotations
    }

    /// Per-spin label string, e.g. `"XIIY"` for x-pulse, idle, idle, y-pulse.
    pub fn label(&self) -> String {
        self.rotations.iter().map(|r| r.as_char()).collect()
    }

    /// Whether this setting exposes the coefficient of `p`: after the
    /// per-spin rotations exactly one spin of `p` must be transverse.
    pub fn exposes(&self, p: &PauliString) -> Result<bool> {
        if p.n() != self.n() {
            return Err(Error::SizeMismatch {
                what: "readout setting",
                left: self.n(),
                right: p.n(),
            });
        }
        let mut transverse = 0usize;
        for (q, &r) in self.rotations.iter().enumerate() {
            if r.makes_transverse(p.letter(q)?) {
                transverse += 1;
            }
        }
        Ok(transverse == 1)
    }

    /// All coefficient indices this setting exposes, ascending. Each string
    /// has a unique transverse spin, so the union below is disjoint.
    fn exposed_indices(&self) -> Vec<usize> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (1 << n));
        let spectator_choices: Vec<[usize; 2]> = self
            .rotations
            .iter()
            .map(|r| [0, letter_digit(r.longitudinal_letter())])
            .collect();
        for t in 0..n {
            let spectators: Vec<usize> = (0..n).filter(|&q| q != t).collect();
            for letter in self.rotations[t].transverse_letters() {
                let base = letter_digit(letter) << (2 * (n - 1 - t));
                for mask in 0..(1usize << spectators.len()) {
                    let mut index = base;
                    for (pos, &q) in spectators.iter().enumerate() {
                        let digit = spectator_choices[q][(mask >> pos) & 1];
                        index |= digit << (2 * (n - 1 - q));
                    }
                    out.push(index);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Builds the fixed readout library for `n` spins: a deterministic greedy
/// cover of all non-identity coefficients (candidates enumerated
/// lexicographically, ties resolved to the earlier candidate, chosen
/// settings reported in lexicographic order). For four spins the cover is
/// padded with the lexicographically smallest unused settings up to the
/// hardware count of 40.
pub fn readout_library(n: usize) -> Result<Vec<ReadoutSetting>> {
    check_engine_qubits(n)?;
    let mut candidates = Vec::with_capacity(3usize.pow(n as u32));
    let rotations = [
        ReadoutRotation::Idle,
        ReadoutRotation::X90,
        ReadoutRotation::Y90,
    ];
    for code in 0..3usize.pow(n as u32) {
        let mut setting = Vec::with_capacity(n);
        let mut rest = code;
        for q in 0..n {
            let divisor = 3usize.pow((n - 1 - q) as u32);
            setting.push(rotations[rest / divisor]);
            rest %= divisor;
        }
        candidates.push(ReadoutSetting::new(setting));
    }
    let shadows: Vec<Vec<usize>> = candidates.iter().map(|s| s.exposed_indices()).collect();

    let mut covered = vec![false; num_labels(n)];
    covered[0] = true; // the identity coefficient is normalization, not data
    let mut remaining = num_labels(n) - 1;
    let mut used = vec![false; candidates.len()];
    let mut chosen: Vec<usize> = Vec::new();
    while remaining > 0 {
        let mut best: Option<(usize, usize)> = None;
        for (ci, shadow) in shadows.iter().enumerate() {
            if used[ci] {
                continue;
            }
            let gain = shadow.iter().filter(|&&i| !covered[i]).count();
            if gain > best.map_or(0, |(_, g)| g) {
                best = Some((ci, gain));
            }
        }
        let (ci, _) = best.ok_or_else(|| {
            Error::Config("readout library cannot cover all coefficients".to_string())
        })?;
        used[ci] = true;
        chosen.push(ci);
        for &i in &shadows[ci] {
            if !covered[i] {
                covered[i] = true;
                remaining -= 1;
            }
        }
    }
    chosen.sort_unstable();
    if n == 4 {
        for (ci, flag) in used.iter_mut().enumerate() {
            if chosen.len() >= FOUR_SPIN_READOUT_SETTINGS {
                break;
            }
            if !*flag {
                *flag = true;
                chosen.push(ci);
            }
        }
        chosen.sort_unstable();
    }
    Ok(chosen
        .into_iter()
        .map(|ci| candidates[ci].clone())
        .collect())
}

/// For each coefficient index, the first library setting exposing it
/// (`None` exactly for the identity coefficient).
fn exposure_map(n: usize, library: &[ReadoutSetting]) -> Result<Vec<Option<usize>>> {
    let mut map = vec![None; num_labels(n)];
    for (si, setting) in library.iter().enumerate() {
        for index in setting.exposed_indices() {
            if map[index].is_none() {
                map[index] = Some(si);
            }
        }
    }
    for (index, slot) in map.iter().enumerate() {
        if index != 0 && slot.is_none() {
            return Err(Error::Config(format!(
                "readout library misses coefficient {}",
                pauli_label(n, index)?
            )));
        }
    }
    Ok(map)
}

/// A complete tomography record: all 4ⁿ coefficients, the matrix
/// reconstructed from them, the readout bookkeeping, and (when scored
/// against a target) a fidelity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyResult {
    n: usize,
    coefficients: Vec<f64>,
    reconstructed: DensityMatrix,
    readout_settings: Vec<String>,
    exposed_by: Vec<Option<usize>>,
    target_label: Option<String>,
    fidelity: Option<f64>,
}

impl TomographyResult {
    pub fn n(&self) -> usize {
        self.n
    }

    /// All 4ⁿ coefficients in label order.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, index: usize) -> Result<f64> {
        check_label_index(self.n, index)?;
        Ok(self.coefficients[index])
    }

    /// Looks a coefficient up by its letter label, e.g. `"XXII"`.
    pub fn coefficient_named(&self, label: &str) -> Result<f64> {
        let p: PauliString = label.parse()?;
        if p.phase() != Phase::PlusOne {
            return Err(Error::ParsePauli {
                input: label.to_string(),
                reason: "coefficient labels carry no phase prefix",
            });
        }
        if p.n() != self.n {
            return Err(Error::SizeMismatch {
                what: "coefficient label",
                left: self.n,
                right: p.n(),
            });
        }
        self.coefficient(pauli_index(&p)?)
    }

    pub fn reconstructed(&self) -> &DensityMatrix {
        &self.reconstructed
    }

    /// Labels of the library settings, in library order.
    pub fn readout_settings(&self) -> &[String] {
        &self.readout_settings
    }

    /// Library index exposing each coefficient; `None` for the identity.
    pub fn exposed_by(&self) -> &[Option<usize>] {
        &self.exposed_by
    }

    /// The label of the setting exposing coefficient `index`, if any.
    pub fn setting_for(&self, index: usize) -> Result<Option<&str>> {
        check_label_index(self.n, index)?;
        Ok(self.exposed_by[index].map(|si| self.readout_settings[si].as_str()))
    }

    pub fn target_label(&self) -> Option<&str> {
        self.target_label.as_deref()
    }

    pub fn fidelity(&self) -> Option<f64> {
        self.fidelity
    }

    /// Σ_P c_P², which equals 2ⁿ·Tr(ρ²) and 2ⁿ for pure states.
    pub fn parseval_sum(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }

    /// CSV export, one row per coefficient: `label,coefficient,setting`.
    pub fn coefficients_csv(&self) -> String {
        let mut out = String::from("label,coefficient,setting\n");
        for (index, c) in self.coefficients.iter().enumerate() {
            let label = pauli_label(self.n, index).expect("index in range");
            let setting = self.exposed_by[index]
                .map(|si| self.readout_settings[si].as_str())
                .unwrap_or("");
            out.push_str(&format!("{label},{c},{setting}\n"));
        }
        out
    }
}

fn tomograph_inner(
    rho: &DensityMatrix,
    coefficients: Vec<f64>,
    target: Option<(String, f64)>,
) -> Result<TomographyResult> {
    let n = rho.n();
    let library = readout_library(n)?;
    let exposed_by = exposure_map(n, &library)?;
    let reconstructed = reconstruct(n, &coefficients)?;
    let (target_label, fidelity) = match target {
        Some((label, value)) => (Some(label), Some(value)),
        None => (None, None),
    };
    Ok(TomographyResult {
        n,
        coefficients,
        reconstructed,
        readout_settings: library.iter().map(|s| s.label()).collect(),
        exposed_by,
        target_label,
        fidelity,
    })
}

fn exact_coefficients(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let n = rho.n();
    (0..num_labels(n))
        .into_par_iter()
        .map(|index| rho.expectation(&pauli_from_index(n, index)?))
        .collect()
}

/// Tomographs `rho` exactly: all 4ⁿ coefficients c_P = Tr(ρP), the
/// reconstruction, and the readout bookkeeping.
pub fn tomograph(rho: &DensityMatrix) -> Result<TomographyResult> {
    tomograph_inner(rho, exact_coefficients(rho)?, None)
}

/// Like [`tomograph`], additionally scoring ⟨target|ρ|target⟩ into the
/// record under `target_label`.
pub fn tomograph_scored(
    rho: &DensityMatrix,
    target: &StateVector,
    target_label: &str,
) -> Result<TomographyResult> {
    let value = fidelity(rho, target)?;
    tomograph_inner(
        rho,
        exact_coefficients(rho)?,
        Some((target_label.to_string(), value)),
    )
}

/// Tomographs `rho` with simulated shot noise: every non-identity
/// coefficient is replaced by a binomial estimate from `shots` two-outcome
/// measurements of its exact expectation (estimates are drawn
/// independently per coefficient; the identity coefficient stays exactly 1).
/// The reconstruction then uses the noisy coefficients, so it may be
/// slightly unphysical — by design, no physicality projection is applied.
pub fn tomograph_sampled(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<TomographyResult> {
    if shots == 0 {
        return Err(Error::OutOfRange {
            name: "shots",
            value: 0.0,
            reason: "at least one shot per setting is required",
        });
    }
    let mut coefficients = exact_coefficients(rho)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for (index, c) in coefficients.iter_mut().enumerate() {
        if index == 0 {
            *c = 1.0;
            continue;
        }
        let p = ((1.0 + *c) / 2.0).clamp(0.0, 1.0);
        let dist = Binomial::new(shots, p)
            .map_err(|e| Error::Config(format!("binomial sampling: {e}")))?;
        let ups = dist.sample(&mut rng);
        *c = 2.0 * (ups as f64) / (shots as f64) - 1.0;
    }
    tomograph_inner(rho, coefficients, None)
}

/// Rebuilds ρ = (1/2ⁿ) Σ_P c_P·P from a full coefficient vector. The
/// result is not validated for physicality (sampled coefficient vectors
/// legitimately reconstruct to slightly unphysical matrices).
pub fn reconstruct(n: usize, coefficients: &[f64]) -> Result<DensityMatrix> {
    check_engine_qubits(n)?;
    if coefficients.len() != num_labels(n) {
        return Err(Error::SizeMismatch {
            what: "coefficient vector",
            left: num_labels(n),
            right: coefficients.len(),
        });
    }
    let dim = 1usize << n;
    let scale = 1.0 / dim as f64;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (index, &c) in coefficients.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let action = PauliAction::new(n, &pauli_from_index(n, index)?)?;
        for b in 0..dim {
            entries[(b ^ action.x_mask) * dim + b] += scale * c * action.factor(b);
        }
    }
    DensityMatrix::from_row_major(n, entries)
}

/// ⟨target|ρ|target⟩ — the fidelity of a (possibly mixed) state against a
/// pure target. Invariant under global phase of the target and linear in ρ.
pub fn fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    rho.fidelity_with_pure(target)
}

/// One bar of a density-matrix bar chart: ⟨row|ρ|col⟩ with binary labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarEntry {
    pub row: String,
    pub col: String,
    pub real: f64,
    pub imag: f64,
}

/// All 2ⁿ×2ⁿ matrix entries as labelled bars, row-major.
pub fn bar_export(rho: &DensityMatrix) -> Vec<BarEntry> {
    let n = rho.n();
    let dim = rho.dim();
    let mut out = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        for col in 0..dim {
            let value = rho.entry(row, col);
            out.push(BarEntry {
                row: basis_label(n, row).expect("row in range"),
                col: basis_label(n, col).expect("col in range"),
                real: value.re,
                imag: value.im,
            });
        }
    }
    out
}

/// CSV export of [`bar_export`]: `row,col,real,imag`.
pub fn bar_csv(rho: &DensityMatrix) -> String {
    let mut out = String::from("row,col,real,imag\n");
    for bar in bar_export(rho) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            bar.row, bar.col, bar.real, bar.imag
        ));
    }
    out
}

/// A named fidelity, exported as JSON `{label, value}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub label: String,
    pub value: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    use crate::anyon::{self, Snapshot, Variant};

    fn random_state(rng: &mut ChaCha12Rng, n: usize) -> StateVector {
        let dim = 1usize << n;
        let amplitudes: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        StateVector::from_unnormalized(n, amplitudes).expect("nonzero with probability one")
    }

    fn random_density(rng: &mut ChaCha12Rng, n: usize) -> DensityMatrix {
        let parts: Vec<(f64, DensityMatrix)> = [0.5, 0.3, 0.2]
            .iter()
            .map(|&w| (w, DensityMatrix::from_pure(&random_state(rng, n))))
            .collect();
        DensityMatrix::weighted_mix(&parts).expect("weights sum to one")
    }

    #[test]
    fn labels_follow_base_four_lexicographic_order() {
        assert_eq!(pauli_label(4, 0).unwrap(), "IIII");
        assert_eq!(pauli_label(4, 1).unwrap(), "IIIX");
        assert_eq!(pauli_label(4, 2).unwrap(), "IIIY");
        assert_eq!(pauli_label(4, 3).unwrap(), "IIIZ");
        assert_eq!(pauli_label(4, 4).unwrap(), "IIXI");
        assert_eq!(pauli_label(4, 192).unwrap(), "ZIII");
        assert_eq!(pauli_label(4, 255).unwrap(), "ZZZZ");
        assert_eq!(pauli_label(2, 7).unwrap(), "XZ");
        assert!(pauli_label(4, 256).is_err());

        for index in 0..num_labels(4) {
            let p = pauli_from_index(4, index).unwrap();
            assert_eq!(pauli_index(&p).unwrap(), index);
            assert_eq!(
                p.to_string(),
                format!("+{}", pauli_label(4, index).unwrap())
            );
        }
    }

    #[test]
    fn zero_state_has_unit_z_type_coefficients_only() {
        let rho = DensityMatrix::basis_projector(4, 0).unwrap();
        let result = tomograph(&rho).unwrap();
        for index in 0..num_labels(4) {
            let label = pauli_label(4, index).unwrap();
            let c = result.coefficient(index).unwrap();
            if label.contains('X') || label.contains('Y') {
                assert_relative_eq!(c, 0.0, epsilon = 1e-12);
            } else {
                assert_relative_eq!(c, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn ghz_coefficients_match_direct_traces() {
        let rho = DensityMatrix::from_pure(&anyon::ghz_state());
        let result = tomograph(&rho).unwrap();
        assert_relative_eq!(
            result.coefficient_named("XXXX").unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            result.coefficient_named("ZZII").unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            result.coefficient_named("ZIII").unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // Pure state: Σ c² = 2ⁿ.
        assert_relative_eq!(result.parseval_sum(), 16.0, epsilon = 1e-9);
    }

    #[test]
    fn reconstruction_round_trips_exactly() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for n in [2usize, 4] {
            for _ in 0..5 {
                let rho = random_density(&mut rng, n);
                let result = tomograph(&rho).unwrap();
                let distance = result.reconstructed().max_entry_distance(&rho).unwrap();
                assert!(distance < 1e-10, "round-trip distance {distance}");
                // Parseval against the purity.
                assert_relative_eq!(
                    result.parseval_sum(),
                    (1 << n) as f64 * rho.purity(),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn reconstruct_rejects_wrong_length() {
        assert!(reconstruct(2, &[0.0; 5]).is_err());
    }

    #[test]
    fn readout_exposure_counts_transverse_spins() {
        let all_idle = ReadoutSetting::new(vec![ReadoutRotation::Idle; 4]);
        let x_first = ReadoutSetting::new(vec![
            ReadoutRotation::X90,
            ReadoutRotation::Idle,
            ReadoutRotation::Idle,
            ReadoutRotation::Idle,
        ]);
        let zzii: PauliString = "ZZII".parse().unwrap();
        let xxii: PauliString = "XXII".parse().unwrap();
        let ziii: PauliString = "ZIII".parse().unwrap();
        // Longitudinal-only strings are invisible without a pulse.
        assert!(!all_idle.exposes(&zzii).unwrap());
        // One x-pulse brings exactly one Z transverse.
        assert!(x_first.exposes(&zzii).unwrap());
        assert!(x_first.exposes(&ziii).unwrap());
        // Two transverse spins cannot be read in one acquisition.
        assert!(!all_idle.exposes(&xxii).unwrap());
        // Parking spin 2's X along z leaves exactly spin 1 transverse.
        let y_second = ReadoutSetting::new(vec![
            ReadoutRotation::Idle,
            ReadoutRotation::Y90,
            ReadoutRotation::Idle,
            ReadoutRotation::Idle,
        ]);
        assert!(y_second.exposes(&xxii).unwrap());
        assert_eq!(y_second.label(), "IYII");
    }

    #[test]
    fn four_spin_library_covers_all_coefficients_with_forty_settings() {
        let library = readout_library(4).unwrap();
        assert_eq!(library.len(), FOUR_SPIN_READOUT_SETTINGS);
        let labels: Vec<String> = library.iter().map(|s| s.label()).collect();
        let mut unique = labels.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), labels.len(), "duplicate settings");

        let map = exposure_map(4, &library).unwrap();
        assert!(map[0].is_none());
        for (index, entry) in map.iter().enumerate().skip(1) {
            let si = entry.expect("covered");
            let p = pauli_from_index(4, index).unwrap();
            assert!(library[si].exposes(&p).unwrap());
        }
    }

    #[test]
    fn smaller_libraries_cover_too() {
        for n in [1usize, 2, 3] {
            let library = readout_library(n).unwrap();
            let map = exposure_map(n, &library).unwrap();
            for (index, entry) in map.iter().enumerate().skip(1) {
                assert!(entry.is_some(), "n={n} index={index} uncovered");
            }
        }
    }

    #[test]
    fn sampled_tomography_stays_within_binomial_bounds() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let rho = random_density(&mut rng, 4);
        let exact = tomograph(&rho).unwrap();
        let shots = 1_000_000u64;
        let sampled = tomograph_sampled(&rho, shots, 11).unwrap();
        assert_eq!(sampled.coefficients()[0], 1.0);

        let mut beyond_three_sigma = 0usize;
        for index in 1..num_labels(4) {
            let c = exact.coefficients()[index];
            let p = (1.0 + c) / 2.0;
            let sigma = 2.0 * (p * (1.0 - p) / shots as f64).sqrt();
            let deviation = (sampled.coefficients()[index] - c).abs();
            assert!(
                deviation <= 5.0 * sigma + 1e-12,
                "index {index}: deviation {deviation} vs sigma {sigma}"
            );
            if deviation > 3.0 * sigma {
                beyond_three_sigma += 1;
            }
        }
        // ~0.3% of estimates may legitimately sit beyond 3σ.
        assert!(beyond_three_sigma <= 5, "{beyond_three_sigma} outliers");
    }

    #[test]
    fn fidelity_examples_and_global_phase_invariance() {
        let ghz = anyon::ghz_state();
        let rho = DensityMatrix::from_pure(&ghz);
        assert_relative_eq!(fidelity(&rho, &ghz).unwrap(), 1.0, epsilon = 1e-12);

        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert_relative_eq!(fidelity(&mixed, &ghz).unwrap(), 1.0 / 16.0, epsilon = 1e-12);

        let mut rotated = ghz.clone();
        rotated.scale(Complex64::from_polar(1.0, 0.83));
        assert_relative_eq!(
            fidelity(&rho, &rotated).unwrap(),
            fidelity(&rho, &ghz).unwrap(),
            epsilon = 1e-12
        );

        // Noiseless braid output against (|0000⟩ − |1111⟩)/√2.
        let record = anyon::run_braid_experiment(Variant::Braid).unwrap();
        let Snapshot::Pure { state } = &record.snapshot_final else {
            panic!("exact run must produce a pure snapshot");
        };
        let dim = state.dim();
        let mut target = vec![Complex64::new(0.0, 0.0); dim];
        target[0] = Complex64::new(1.0, 0.0);
        target[dim - 1] = Complex64::new(-1.0, 0.0);
        let target = StateVector::from_unnormalized(4, target).unwrap();
        let rho_final = DensityMatrix::from_pure(state);
        assert!((fidelity(&rho_final, &target).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bar_export_shows_half_height_corners() {
        let ghz_rho = DensityMatrix::from_pure(&anyon::ghz_state());
        let bars = bar_export(&ghz_rho);
        assert_eq!(bars.len(), 256);
        let find = |row: &str, col: &str| -> &BarEntry {
            bars.iter()
                .find(|b| b.row == row && b.col == col)
                .expect("entry present")
        };
        assert_relative_eq!(find("0000", "0000").real, 0.5, epsilon = 1e-12);
        assert_relative_eq!(find("0000", "1111").real, 0.5, epsilon = 1e-12);
        assert_relative_eq!(find("1111", "0000").real, 0.5, epsilon = 1e-12);
        assert_relative_eq!(find("1111", "1111").real, 0.5, epsilon = 1e-12);
        assert_relative_eq!(find("0000", "0001").real, 0.0, epsilon = 1e-12);

        let braid = anyon::run_braid_experiment(Variant::Braid).unwrap();
        let Snapshot::Pure { state } = &braid.snapshot_final else {
            panic!("exact run must produce a pure snapshot");
        };
        let braid_rho = DensityMatrix::from_pure(state);
        let braid_bars = bar_export(&braid_rho);
        let corner = braid_bars
            .iter()
            .find(|b| b.row == "0000" && b.col == "1111")
            .unwrap();
        assert_relative_eq!(corner.real, -0.5, epsilon = 1e-9);
        assert_relative_eq!(corner.imag, 0.0, epsilon = 1e-9);

        let control = anyon::run_braid_experiment(Variant::Control).unwrap();
        let Snapshot::Pure { state } = &control.snapshot_final else {
            panic!("exact run must produce a pure snapshot");
        };
        let control_bars = bar_export(&DensityMatrix::from_pure(state));
        let corner = control_bars
            .iter()
            .find(|b| b.row == "0000" && b.col == "1111")
            .unwrap();
        assert_relative_eq!(corner.real, 0.5, epsilon = 1e-9);

        let csv = bar_csv(&ghz_rho);
        assert!(csv.starts_with("row,col,real,imag\n"));
        assert_eq!(csv.lines().count(), 257);
    }

    #[test]
    fn tomography_csv_and_serde_round_trip() {
        let rho = DensityMatrix::from_pure(&anyon::ghz_state());
        let result = tomograph_scored(&rho, &anyon::ghz_state(), "xi").unwrap();
        assert_eq!(result.target_label(), Some("xi"));
        assert_relative_eq!(result.fidelity().unwrap(), 1.0, epsilon = 1e-12);

        let csv = result.coefficients_csv();
        assert!(csv.starts_with("label,coefficient,setting\n"));
        assert_eq!(csv.lines().count(), 257);
        // The identity row is the trace and carries no readout setting.
        let identity_row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(identity_row[0], "IIII");
        assert_relative_eq!(
            identity_row[1].parse::<f64>().unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_eq!(identity_row[2], "");

        let json = serde_json::to_string(&result).unwrap();
        let back: TomographyResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back.coefficients(), result.coefficients());
        assert_eq!(back.readout_settings(), result.readout_settings());
        assert_relative_eq!(
            back.reconstructed()
                .max_entry_distance(result.reconstructed())
                .unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }
}
