//! Reusable command implementations behind the `toricsim` binary: protocol
//! runs ([`cmd_braid`]), lattice invariant checks ([`cmd_lattice_check`]),
//! and noise sweeps ([`cmd_noise_sweep`]), each emitting plot-ready
//! artifacts into an output directory.
//!
//! Artifact discipline: every command validates its configuration first,
//! computes all artifacts in memory, and only then writes them, staging
//! each file as `<name>.tmp` before renaming it into place — a failed run
//! never leaves partial artifacts behind. All randomness flows from the
//! explicit `seed` through one named generator (ChaCha12), tables are
//! assembled in fixed order (no unordered containers anywhere), and float
//! formatting is the shortest round-trip form, so identical configurations
//! produce byte-identical artifacts.
//!
//! Formats: structured records (experiment records, check reports,
//! fidelity reports) are always JSON; tabular artifacts (bar tables, Pauli
//! coefficients, sweep grids) honor the `format` setting and come out as
//! CSV or JSON arrays.

use std::fs;
use std::path::{Path as FsPath, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anyon::{
    self, run_braid_experiment, run_braid_on_lattice, BraidExperimentRecord, Snapshot, Species,
    Variant,
};
use crate::engine::{DensityMatrix, StateVector, TOL_PIPELINE};
use crate::error::{Error, Result};
use crate::lattice::{crossing_count, random_path, PathKind, TorusLattice};
use crate::nmr::{
    compile_circuit, effective_state, pps, run_schedule, NoiseModel, RfBranch, SpinSystem,
};
use crate::pauli::{all_stabilizers, ground_space_dimension, stabilizer_rank, PauliString};
use crate::tomography::{
    bar_csv, bar_export, fidelity, pauli_label, tomograph_scored, FidelityReport, TomographyResult,
};

/// Points per axis of the noise-sweep grid.
pub const SWEEP_STEPS: usize = 10;

/// Default upper end of the rotation-error axis when the flag is zero.
pub const SWEEP_ROT_MAX: f64 = 0.06;

/// Default upper end of the dephasing axis (s⁻¹) when the flag is zero.
pub const SWEEP_DEPHASE_MAX: f64 = 4.0;

/// Simulation backend for protocol runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Exact gate-level circuit simulation.
    Abstract,
    /// Pulse-level spin simulation: pseudo-pure preparation, compiled
    /// schedules, noise model.
    Nmr,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Abstract => "abstract",
            Backend::Nmr => "nmr",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abstract" => Ok(Backend::Abstract),
            "nmr" => Ok(Backend::Nmr),
            other => Err(Error::Config(format!(
                "unknown backend {other:?}; expected abstract or nmr"
            ))),
        }
    }
}

/// Output format for tabular artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }

    fn extension(self) -> &'static str {
        self.as_str()
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown format {other:?}; expected json or csv"
            ))),
        }
    }
}

/// Full, serializable run configuration. Identical configs (including the
/// seed) produce byte-identical artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Lattice size. `None` selects the reduced four-qubit register for
    /// protocol runs; lattice checks default to k = 2.
    pub k: Option<usize>,
    /// Protocol variant: the braid or the anyon-free control loop.
    pub variant: Variant,
    /// Gate-level or pulse-level simulation.
    pub backend: Backend,
    /// Pseudo-pure excess polarization ε ∈ (0, 1].
    pub epsilon: f64,
    /// Fractional rotation-angle error; doubles as the rotation-axis
    /// maximum for `noise-sweep` (zero selects the built-in maximum).
    pub noise_rot: f64,
    /// Per-spin dephasing rate (s⁻¹); doubles as the dephasing-axis
    /// maximum for `noise-sweep` (zero selects the built-in maximum).
    pub noise_dephase: f64,
    /// Optional JSON file with RF-amplitude branches
    /// `[{"weight": w, "scale": s}, …]`; weights must sum to 1.
    pub rf_weights: Option<PathBuf>,
    /// Seed for every random draw a command makes.
    pub seed: u64,
    /// Output directory for artifacts.
    pub out: PathBuf,
    /// Format of tabular artifacts.
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: None,
            variant: Variant::Braid,
            backend: Backend::Abstract,
            epsilon: 1e-5,
            noise_rot: 0.0,
            noise_dephase: 0.0,
            rf_weights: None,
            seed: 0,
            out: PathBuf::from("toricsim-out"),
            format: OutputFormat::Csv,
        }
    }
}

/// A partial configuration: every field optional. Config files parse into
/// one of these, and command-line flags form another; layering overlays
/// onto [`RunConfig::default`] (file first, then flags) gives flags
/// precedence over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigOverlay {
    pub k: Option<usize>,
    pub variant: Option<Variant>,
    pub backend: Option<Backend>,
    pub epsilon: Option<f64>,
    pub noise_rot: Option<f64>,
    pub noise_dephase: Option<f64>,
    pub rf_weights: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl ConfigOverlay {
    /// Parses an overlay from JSON or TOML text (JSON is tried first).
    pub fn from_config_str(text: &str) -> Result<Self> {
        match serde_json::from_str::<Self>(text) {
            Ok(overlay) => Ok(overlay),
            Err(json_err) => toml::from_str::<Self>(text).map_err(|toml_err| {
                Error::Config(format!(
                    "config parses as neither JSON ({json_err}) nor TOML ({toml_err})"
                ))
            }),
        }
    }

    /// Reads and parses a config file.
    pub fn from_file(path: &FsPath) -> Result<Self> {
        Self::from_config_str(&fs::read_to_string(path)?)
    }
}

impl RunConfig {
    /// Overrides every field the overlay sets.
    pub fn apply(&mut self, overlay: &ConfigOverlay) {
        if let Some(k) = overlay.k {
            self.k = Some(k);
        }
        if let Some(variant) = overlay.variant {
            self.variant = variant;
        }
        if let Some(backend) = overlay.backend {
            self.backend = backend;
        }
        if let Some(epsilon) = overlay.epsilon {
            self.epsilon = epsilon;
        }
        if let Some(noise_rot) = overlay.noise_rot {
            self.noise_rot = noise_rot;
        }
        if let Some(noise_dephase) = overlay.noise_dephase {
            self.noise_dephase = noise_dephase;
        }
        if let Some(rf_weights) = &overlay.rf_weights {
            self.rf_weights = Some(rf_weights.clone());
        }
        if let Some(seed) = overlay.seed {
            self.seed = seed;
        }
        if let Some(out) = &overlay.out {
            self.out = out.clone();
        }
        if let Some(format) = overlay.format {
            self.format = format;
        }
    }

    /// Validates the fields every command shares.
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: self.epsilon,
                reason: "excess polarization must lie in (0, 1]",
            });
        }
        if !self.noise_rot.is_finite() || self.noise_rot < 0.0 {
            return Err(Error::OutOfRange {
                name: "noise_rot",
                value: self.noise_rot,
                reason: "rotation error must be finite and nonnegative",
            });
        }
        if !self.noise_dephase.is_finite() || self.noise_dephase < 0.0 {
            return Err(Error::OutOfRange {
                name: "noise_dephase",
                value: self.noise_dephase,
                reason: "dephasing rate must be finite and nonnegative",
            });
        }
        if let Some(k) = self.k {
            if !(2..=4).contains(&k) {
                return Err(Error::LatticeSize {
                    k,
                    reason: "commands support k in 2..=4",
                });
            }
        }
        Ok(())
    }

    /// The pulse-level noise model this config describes.
    pub fn noise_model(&self) -> Result<NoiseModel> {
        let rf_weights = match &self.rf_weights {
            Some(path) => load_rf_weights(path)?,
            None => vec![RfBranch {
                weight: 1.0,
                scale: 1.0,
            }],
        };
        let model = NoiseModel {
            rotation_error: self.noise_rot,
            rf_weights,
            dephasing_rates: vec![self.noise_dephase; anyon::REDUCED_QUBITS],
        };
        model.validate(anyon::REDUCED_QUBITS)?;
        Ok(model)
    }
}

/// Loads RF-amplitude branches from a JSON file:
/// `[{"weight": 0.5, "scale": 0.95}, …]`.
pub fn load_rf_weights(path: &FsPath) -> Result<Vec<RfBranch>> {
    let text = fs::read_to_string(path)?;
    let branches: Vec<RfBranch> = serde_json::from_str(&text)?;
    Ok(branches)
}

/// What a command produced: the artifact paths (in write order), the
/// overall health flag the process exit code reflects, and a one-line
/// human summary.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub passed: bool,
    pub summary: String,
}

fn json_artifact<T: Serialize>(value: &T) -> Result<String> {
    Ok(format!("{}\n", serde_json::to_string_pretty(value)?))
}

/// Writes fully-computed artifacts: each is staged as `<name>.tmp` and
/// renamed into place. Nothing is written before everything is computed.
fn write_artifacts(out_dir: &FsPath, files: Vec<(String, String)>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let final_path = out_dir.join(&name);
        let tmp_path = out_dir.join(format!("{name}.tmp"));
        fs::write(&tmp_path, contents)?;
        fs::rename(&tmp_path, &final_path)?;
        written.push(final_path);
    }
    Ok(written)
}

/// One Pauli coefficient row of a tomography table artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub label: String,
    pub coefficient: f64,
    pub setting: Option<String>,
}

fn coefficient_rows(result: &TomographyResult) -> Vec<CoefficientRow> {
    result
        .coefficients()
        .iter()
        .enumerate()
        .map(|(index, &coefficient)| CoefficientRow {
            label: pauli_label(result.n(), index).expect("index in range"),
            coefficient,
            setting: result
                .setting_for(index)
                .expect("index in range")
                .map(str::to_string),
        })
        .collect()
}

fn snapshot_density(snapshot: &Snapshot) -> DensityMatrix {
    match snapshot {
        Snapshot::Pure { state } => DensityMatrix::from_pure(state),
        Snapshot::Mixed { state } => state.clone(),
    }
}

fn bar_table_artifact(rho: &DensityMatrix, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(bar_csv(rho)),
        OutputFormat::Json => json_artifact(&bar_export(rho)),
    }
}

fn coefficient_artifact(result: &TomographyResult, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(result.coefficients_csv()),
        OutputFormat::Json => json_artifact(&coefficient_rows(result)),
    }
}

/// The exact pure state the reduced-register protocol should end in
/// (global phase included).
fn expected_final_state(variant: Variant) -> StateVector {
    let mut state = StateVector::zero_state(anyon::REDUCED_QUBITS).expect("4 <= MAX_QUBITS");
    state
        .apply_circuit(&anyon::braid_circuit(variant))
        .expect("sizes match");
    state
}

/// Runs the staged pulse-level protocol: pseudo-pure preparation, the
/// compiled GHZ schedule, then the compiled interference tail. Returns the
/// ε-normalized effective states at t₀ and the final time plus the
/// extracted phase.
fn run_nmr_braid(
    variant: Variant,
    epsilon: f64,
    noise: &NoiseModel,
) -> Result<(DensityMatrix, DensityMatrix, Complex64)> {
    let system = SpinSystem::default_four_spin();
    let ghz_schedule = compile_circuit(&anyon::ghz_circuit(), &system)?;
    let tail_schedule = compile_circuit(&anyon::braid_tail_circuit(variant), &system)?;
    let rho0 = pps(anyon::REDUCED_QUBITS, epsilon)?;
    let raw_t0 = run_schedule(&rho0, &ghz_schedule, &system, noise)?;
    let raw_final = run_schedule(&raw_t0, &tail_schedule, &system, noise)?;
    let eff_t0 = effective_state(&raw_t0, epsilon)?;
    let eff_final = effective_state(&raw_final, epsilon)?;
    let phase = anyon::extract_phase_from_density(&eff_final, &eff_t0)?;
    Ok((eff_t0, eff_final, phase))
}

/// Runs the braid (or control) protocol and writes its artifacts:
/// the experiment record (JSON), bar tables for t₀ and the final time,
/// Pauli-coefficient tables for four-qubit runs, and a fidelity report
/// (JSON). Exit health requires the record's internal invariants; for
/// noise-free runs the extracted phase must also match the expectation.
pub fn cmd_braid(config: &RunConfig) -> Result<CommandOutput> {
    config.validate()?;
    let variant = config.variant;
    let record = match (config.backend, config.k) {
        (Backend::Abstract, None) => run_braid_experiment(variant)?,
        (Backend::Abstract, Some(2)) => run_braid_on_lattice(variant)?,
        (Backend::Abstract, Some(k)) => {
            return Err(Error::LatticeSize {
                k,
                reason: "state-level lattice braiding is exact only for k = 2 \
                         (eight qubits); omit k for the reduced register",
            });
        }
        (Backend::Nmr, None) => {
            let noise = config.noise_model()?;
            let (eff_t0, eff_final, phase) = run_nmr_braid(variant, config.epsilon, &noise)?;
            BraidExperimentRecord {
                initial_label: "GHZ".to_string(),
                variant,
                snapshot_t0: Snapshot::Mixed { state: eff_t0 },
                final_time_label: variant.final_time_label().to_string(),
                snapshot_final: Snapshot::Mixed { state: eff_final },
                extracted_phase: [phase.re, phase.im],
                expected_phase: [variant.expected_phase().re, variant.expected_phase().im],
            }
        }
        (Backend::Nmr, Some(k)) => {
            return Err(Error::LatticeSize {
                k,
                reason: "the pulse-level backend models the four-spin register; omit k",
            });
        }
    };

    // Fidelity targets: the recorded t₀ state for lattice runs, the exact
    // protocol states for the reduced register.
    let (target_t0, target_final) = if config.k.is_some() {
        let Snapshot::Pure { state } = &record.snapshot_t0 else {
            return Err(Error::Config(
                "lattice runs are exact and must record pure snapshots".to_string(),
            ));
        };
        (state.clone(), state.clone())
    } else {
        (anyon::ghz_state(), expected_final_state(variant))
    };

    let rho_t0 = snapshot_density(&record.snapshot_t0);
    let rho_final = snapshot_density(&record.snapshot_final);
    let f_t0 = fidelity(&rho_t0, &target_t0)?;
    let f_final = fidelity(&rho_final, &target_final)?;
    let final_label = &record.final_time_label;

    let fidelity_report = vec![
        FidelityReport {
            label: "F(t0)".to_string(),
            value: f_t0,
        },
        FidelityReport {
            label: format!("F({final_label})"),
            value: f_final,
        },
    ];

    let ext = config.format.extension();
    let mut files = vec![
        ("braid_record.json".to_string(), json_artifact(&record)?),
        (
            format!("bars_t0.{ext}"),
            bar_table_artifact(&rho_t0, config.format)?,
        ),
        (
            format!("bars_{final_label}.{ext}"),
            bar_table_artifact(&rho_final, config.format)?,
        ),
        (
            "fidelity_report.json".to_string(),
            json_artifact(&fidelity_report)?,
        ),
    ];
    if rho_t0.n() == anyon::REDUCED_QUBITS {
        let tomo_t0 = tomograph_scored(&rho_t0, &target_t0, "t0")?;
        let tomo_final = tomograph_scored(&rho_final, &target_final, final_label)?;
        files.push((
            format!("coefficients_t0.{ext}"),
            coefficient_artifact(&tomo_t0, config.format)?,
        ));
        files.push((
            format!("coefficients_{final_label}.{ext}"),
            coefficient_artifact(&tomo_final, config.format)?,
        ));
    }

    record.validate()?;
    let extracted = record.extracted_phase_complex();
    let expected = variant.expected_phase();
    let noise_free = config.backend == Backend::Abstract
        || (config.noise_rot == 0.0 && config.noise_dephase == 0.0 && config.rf_weights.is_none());
    let phase_ok = (extracted - expected).norm() <= TOL_PIPELINE;
    let passed = !noise_free || phase_ok;

    let written = write_artifacts(&config.out, files)?;
    let summary = format!(
        "{} [{}]: phase {:+.6}{:+.6}i (expected {:+.0}), F(t0) = {:.6}, F({final_label}) = {:.6}",
        variant.as_str(),
        config.backend.as_str(),
        extracted.re,
        extracted.im,
        expected.re,
        f_t0,
        f_final,
    );
    Ok(CommandOutput {
        files: written,
        passed,
        summary,
    })
}

/// One named pass/fail line of a lattice-check report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The full lattice-check report written as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub k: usize,
    pub seed: u64,
    pub passed: bool,
    pub items: Vec<CheckItem>,
}

fn item(name: &str, passed: bool, detail: String) -> CheckItem {
    CheckItem {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn random_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<StateVector> {
    let dim = 1usize << n;
    let amplitudes: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    StateVector::from_unnormalized(n, amplitudes)
}

/// State-level crossing-parity sweep on the k=2 lattice:
/// S^z(t)·S^x(t′) = (−1)^{|t∩t′|} · S^x(t′)·S^z(t) applied to random
/// states, for `pairs` random path pairs.
fn crossing_parity_sweep(
    lattice: &TorusLattice,
    pairs: usize,
    rng: &mut ChaCha12Rng,
) -> Result<CheckItem> {
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let direct_len = rng.random_range(1..=6);
        let dual_len = rng.random_range(1..=6);
        let t = random_path(lattice, PathKind::Direct, direct_len, rng)?;
        let t_dual = random_path(lattice, PathKind::Dual, dual_len, rng)?;
        let crossings = crossing_count(&t, &t_dual)?;
        let sign = if crossings % 2 == 0 { 1.0 } else { -1.0 };

        let psi = random_state(rng, lattice.n_qubits())?;
        let mut zx = psi.clone();
        anyon::apply_string(&mut zx, lattice, &t_dual, Species::M)?;
        anyon::apply_string(&mut zx, lattice, &t, Species::E)?;
        let mut xz = psi;
        anyon::apply_string(&mut xz, lattice, &t, Species::E)?;
        anyon::apply_string(&mut xz, lattice, &t_dual, Species::M)?;
        xz.scale(Complex64::new(sign, 0.0));
        worst = worst.max(zx.max_amplitude_distance(&xz)?);
    }
    Ok(item(
        "crossing-parity-state-level",
        worst <= TOL_PIPELINE,
        format!("{pairs} random path pairs, worst amplitude deviation {worst:.3e}"),
    ))
}

/// Runs the stabilizer property suite for k ∈ {2, 3, 4} (state-level
/// checks additionally for k = 2), writes `lattice_check.json`, and
/// reports health. Every invariant appears as a named pass/fail item.
pub fn cmd_lattice_check(config: &RunConfig) -> Result<CommandOutput> {
    config.validate()?;
    let k = config.k.unwrap_or(2);
    let lattice = TorusLattice::new(k)?;
    let generators = all_stabilizers(&lattice)?;
    let n = lattice.n_qubits();
    let mut items = Vec::new();

    let mut commuting = true;
    for a in 0..generators.len() {
        for b in (a + 1)..generators.len() {
            commuting &= generators[a].commutes_with(&generators[b])?;
        }
    }
    items.push(item(
        "stabilizers-commute",
        commuting,
        format!("all {} generator pairs commute", generators.len()),
    ));

    let mut squares = true;
    for g in &generators {
        let sq = g.mul(g)?;
        squares &= sq.is_identity() && sq.phase_value() == Complex64::new(1.0, 0.0);
    }
    items.push(item(
        "stabilizer-squares-identity",
        squares,
        "every Aₛ² and Bₚ² is +I".to_string(),
    ));

    let star_product = (0..lattice.n_vertices())
        .try_fold(PauliString::identity(n)?, |acc, s| -> Result<PauliString> {
            acc.mul(&crate::pauli::star_operator(&lattice, s)?)
        })?;
    let plaquette_product = (0..lattice.n_faces()).try_fold(
        PauliString::identity(n)?,
        |acc, p| -> Result<PauliString> {
            acc.mul(&crate::pauli::plaquette_operator(&lattice, p)?)
        },
    )?;
    items.push(item(
        "star-product-identity",
        star_product.is_identity() && star_product.phase_value() == Complex64::new(1.0, 0.0),
        "∏ₛ Aₛ = I".to_string(),
    ));
    items.push(item(
        "plaquette-product-identity",
        plaquette_product.is_identity()
            && plaquette_product.phase_value() == Complex64::new(1.0, 0.0),
        "∏ₚ Bₚ = I".to_string(),
    ));

    let mut even_overlap = true;
    for s in 0..lattice.n_vertices() {
        let star = crate::pauli::star_operator(&lattice, s)?;
        for p in 0..lattice.n_faces() {
            let plaquette = crate::pauli::plaquette_operator(&lattice, p)?;
            even_overlap &= (star.x_mask() & plaquette.z_mask()).count_ones() % 2 == 0;
        }
    }
    items.push(item(
        "star-plaquette-even-overlap",
        even_overlap,
        "every star/plaquette support intersection has even size".to_string(),
    ));

    let rank = stabilizer_rank(&generators)?;
    let degeneracy = ground_space_dimension(n, rank)?;
    items.push(item(
        "rank-and-degeneracy",
        rank == 2 * k * k - 2 && degeneracy == 4,
        format!(
            "{} generators have rank {rank} on {n} qubits: degeneracy {degeneracy}",
            generators.len()
        ),
    ));

    if k == 2 {
        let ground = anyon::ground_state(&lattice)?;
        let mut stabilized = true;
        let mut worst: f64 = 0.0;
        for g in &generators {
            let deviation = (ground.expectation(g)? - 1.0).abs();
            worst = worst.max(deviation);
            stabilized &= deviation <= 1e-12;
        }
        items.push(item(
            "ground-state-stabilized",
            stabilized,
            format!("⟨ξ|g|ξ⟩ = 1 for every generator, worst deviation {worst:.3e}"),
        ));

        let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
        items.push(crossing_parity_sweep(&lattice, 100, &mut rng)?);

        for variant in [Variant::Braid, Variant::Control] {
            let record = run_braid_on_lattice(variant)?;
            let extracted = record.extracted_phase_complex();
            let expected = variant.expected_phase();
            items.push(item(
                &format!("loop-phase-{}", variant.as_str()),
                (extracted - expected).norm() <= TOL_PIPELINE,
                format!(
                    "loop around {} extracts {:+.6}{:+.6}i (expected {:+.0})",
                    if variant == Variant::Braid {
                        "an e particle"
                    } else {
                        "empty center"
                    },
                    extracted.re,
                    extracted.im,
                    expected.re,
                ),
            ));
        }
    }

    let passed = items.iter().all(|i| i.passed);
    let report = LatticeReport {
        k,
        seed: config.seed,
        passed,
        items,
    };
    let files = vec![("lattice_check.json".to_string(), json_artifact(&report)?)];
    let written = write_artifacts(&config.out, files)?;
    let summary = format!(
        "lattice check k={k}: {}/{} invariants passed",
        report.items.iter().filter(|i| i.passed).count(),
        report.items.len(),
    );
    Ok(CommandOutput {
        files: written,
        passed,
        summary,
    })
}

/// One row of the noise-sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub noise_rot: f64,
    pub noise_dephase: f64,
    pub f_t0: f64,
    pub f_t1: f64,
    pub f_t2: f64,
}

fn linspace(max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| max * i as f64 / (steps - 1) as f64)
        .collect()
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("noise_rot,noise_dephase,f_t0,f_t1,f_t2\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.noise_rot, row.noise_dephase, row.f_t0, row.f_t1, row.f_t2
        ));
    }
    out
}

/// Sweeps the braid pipeline over a [`SWEEP_STEPS`]×[`SWEEP_STEPS`] grid of
/// rotation error × dephasing rate and writes one fidelity row per point:
/// F(t₀) of the prepared state against GHZ, F(t₁) of the braid output, and
/// F(t₂) of the control output, all on ε-normalized states. `noise_rot` and
/// `noise_dephase` set the axis maxima (zero picks the built-in defaults);
/// grid points fan out to a worker pool and are collected in grid order.
pub fn cmd_noise_sweep(config: &RunConfig) -> Result<CommandOutput> {
    config.validate()?;
    let rot_max = if config.noise_rot > 0.0 {
        config.noise_rot
    } else {
        SWEEP_ROT_MAX
    };
    let dephase_max = if config.noise_dephase > 0.0 {
        config.noise_dephase
    } else {
        SWEEP_DEPHASE_MAX
    };
    let base_noise = config.noise_model()?;

    let system = SpinSystem::default_four_spin();
    let ghz_schedule = compile_circuit(&anyon::ghz_circuit(), &system)?;
    let braid_tail = compile_circuit(&anyon::braid_tail_circuit(Variant::Braid), &system)?;
    let control_tail = compile_circuit(&anyon::braid_tail_circuit(Variant::Control), &system)?;
    let ghz_target = anyon::ghz_state();
    let braid_target = expected_final_state(Variant::Braid);
    let control_target = expected_final_state(Variant::Control);
    let rho0 = pps(anyon::REDUCED_QUBITS, config.epsilon)?;

    let grid: Vec<(f64, f64)> = linspace(rot_max, SWEEP_STEPS)
        .into_iter()
        .flat_map(|r| {
            linspace(dephase_max, SWEEP_STEPS)
                .into_iter()
                .map(move |d| (r, d))
        })
        .collect();

    let rows: Vec<SweepRow> = grid
        .into_par_iter()
        .map(|(noise_rot, noise_dephase)| -> Result<SweepRow> {
            let noise = NoiseModel {
                rotation_error: noise_rot,
                rf_weights: base_noise.rf_weights.clone(),
                dephasing_rates: vec![noise_dephase; anyon::REDUCED_QUBITS],
            };
            let raw_t0 = run_schedule(&rho0, &ghz_schedule, &system, &noise)?;
            let eff_t0 = effective_state(&raw_t0, config.epsilon)?;
            let f_t0 = fidelity(&eff_t0, &ghz_target)?;
            let raw_t1 = run_schedule(&raw_t0, &braid_tail, &system, &noise)?;
            let f_t1 = fidelity(&effective_state(&raw_t1, config.epsilon)?, &braid_target)?;
            let raw_t2 = run_schedule(&raw_t0, &control_tail, &system, &noise)?;
            let f_t2 = fidelity(&effective_state(&raw_t2, config.epsilon)?, &control_target)?;
            Ok(SweepRow {
                noise_rot,
                noise_dephase,
                f_t0,
                f_t1,
                f_t2,
            })
        })
        .collect::<Result<_>>()?;

    let (name, contents) = match config.format {
        OutputFormat::Csv => ("noise_sweep.csv".to_string(), sweep_csv(&rows)),
        OutputFormat::Json => ("noise_sweep.json".to_string(), json_artifact(&rows)?),
    };
    let written = write_artifacts(&config.out, vec![(name, contents)])?;
    let worst = rows
        .iter()
        .map(|r| r.f_t0.min(r.f_t1).min(r.f_t2))
        .fold(f64::INFINITY, f64::min);
    let summary = format!(
        "noise sweep {}x{} (rot <= {rot_max}, dephase <= {dephase_max}): lowest fidelity {worst:.4}",
        SWEEP_STEPS, SWEEP_STEPS,
    );
    Ok(CommandOutput {
        files: written,
        passed: true,
        summary,
    })
}
