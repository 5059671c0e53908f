//! Experiment configuration: one TOML file with a section per command.
//!
//! Command-line flags (`--out`, `--seed`, `--model`) override the file.
//! Relative paths inside the file resolve against the file's directory.
//! The bundled `data/reference.toml` documents every key.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::beam::{DelimiterGeometry, SourceConfig, DEFAULT_BIN_WIDTH};
use crate::error::{Error, Result};
use crate::io::{line_of_offset, read_text, sha256_hex};
use crate::library::{parse_formula, MassTable, MolecularLibrary};
use crate::molecule::Molecule;
use crate::physics::VisibilityModel;
use crate::setup::InterferometerSetup;
use crate::velocity::VelocityDistribution;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_model")]
    pub model: VisibilityModel,
    pub molecule: MoleculeConfig,
    pub setup: InterferometerSetup,
    pub velocity: VelocitySource,
    pub visibility: Option<VisibilityConfig>,
    pub scan: Option<ScanConfig>,
    pub library: Option<LibraryConfig>,
    pub beam: Option<BeamConfig>,
}

/// Exactly one of `library_member`, `formula`, `mass` identifies the
/// particle.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeConfig {
    pub library_member: Option<u32>,
    pub formula: Option<String>,
    /// amu
    pub mass: Option<f64>,
    /// m³
    pub alpha_opt: f64,
    /// m²
    pub sigma_abs: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum VelocitySource {
    /// Gaussian profile on a grid.
    Analytic {
        mean: f64,
        fwhm: f64,
        #[serde(default = "default_grid_points")]
        points: usize,
    },
    /// Histogram from the `[beam]` simulation.
    Beam,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PowerSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl PowerSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            PowerSpec::List(v) => Ok(v.clone()),
            PowerSpec::Range { start, stop, points } => {
                if *points < 2 || !(stop > start) {
                    return Err(Error::config(
                        "visibility.powers",
                        "range needs stop > start and at least 2 points",
                    ));
                }
                let step = (stop - start) / (*points - 1) as f64;
                Ok((0..*points).map(|i| start + i as f64 * step).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VisibilityConfig {
    pub powers: PowerSpec,
    /// m/s; the ± bands around the quantum curve.
    #[serde(default = "default_velocity_shift")]
    pub velocity_shift: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub points: usize,
    #[serde(default = "default_periods")]
    pub periods: f64,
    /// Mean counts per dwell above background.
    pub mean_counts: f64,
    pub background: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibraryConfig {
    pub file: PathBuf,
    pub peaks: Option<PathBuf>,
    /// amu
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    pub n_samples: usize,
    #[serde(default = "default_bin_width")]
    pub bin_width: f64,
    pub source: SourceConfig,
    pub geometry: DelimiterGeometry,
    /// Cross section of the beam inside the interferometer, mm².
    pub beam_area: f64,
    /// Fraction of the source flux reaching the interferometer.
    pub transmission: f64,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_model() -> VisibilityModel {
    VisibilityModel::Quantum
}
fn default_grid_points() -> usize {
    401
}
fn default_velocity_shift() -> f64 {
    5.0
}
fn default_periods() -> f64 {
    1.0
}
fn default_tolerance() -> f64 {
    15.0
}
fn default_bin_width() -> f64 {
    DEFAULT_BIN_WIDTH
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub model: Option<VisibilityModel>,
}

/// A parsed config together with what is needed to reproduce it.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    /// Directory relative paths resolve against.
    pub base_dir: PathBuf,
    /// sha256 over the file bytes and the applied overrides.
    pub hash: String,
}

impl LoadedConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = read_text(path)?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_str(&text, base_dir, overrides)
    }

    pub fn from_str(text: &str, base_dir: PathBuf, overrides: &Overrides) -> Result<Self> {
        let mut config: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of_offset(text, s.start)).unwrap_or(0);
            Error::config(format!("line {line}"), e.message().trim().to_string())
        })?;
        let mut fingerprint = text.to_string();
        if let Some(dir) = &overrides.output_dir {
            config.output_dir = dir.clone();
        }
        if let Some(seed) = overrides.seed {
            config.seed = seed;
            fingerprint.push_str(&format!("\n#override seed={seed}"));
        }
        if let Some(model) = overrides.model {
            config.model = model;
            fingerprint.push_str(&format!("\n#override model={model}"));
        }
        let loaded = Self {
            config,
            base_dir,
            hash: sha256_hex(fingerprint.as_bytes()),
        };
        loaded.validate()?;
        Ok(loaded)
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    /// Output directory; relative paths resolve against the working
    /// directory, like any command-line path.
    pub fn output_dir(&self) -> &Path {
        &self.config.output_dir
    }

    fn validate(&self) -> Result<()> {
        let c = &self.config;
        let m = &c.molecule;
        let given = [m.library_member.is_some(), m.formula.is_some(), m.mass.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given != 1 {
            return Err(Error::config(
                "molecule",
                "give exactly one of library_member, formula, mass",
            ));
        }
        if m.library_member.is_some() && c.library.is_none() {
            return Err(Error::config("molecule.library_member", "requires a [library] section"));
        }
        if !(m.alpha_opt >= 0.0) {
            return Err(Error::config("molecule.alpha_opt", "must be >= 0"));
        }
        if !(m.sigma_abs >= 0.0) {
            return Err(Error::config("molecule.sigma_abs", "must be >= 0"));
        }
        c.setup
            .validate()
            .map_err(|e| Error::config("setup", e.to_string()))?;
        match &c.velocity {
            VelocitySource::Analytic { mean, fwhm, points } => {
                if !(*mean > 0.0) {
                    return Err(Error::config("velocity.mean", "must be positive"));
                }
                if !(*fwhm > 0.0) {
                    return Err(Error::config("velocity.fwhm", "must be positive"));
                }
                if *points < 3 {
                    return Err(Error::config("velocity.points", "need at least 3"));
                }
            }
            VelocitySource::Beam => {
                if c.beam.is_none() {
                    return Err(Error::config("velocity.source", "\"beam\" requires a [beam] section"));
                }
            }
        }
        if let Some(v) = &c.visibility {
            let powers = v.powers.values()?;
            if powers.is_empty() {
                return Err(Error::config("visibility.powers", "empty power list"));
            }
            if let Some(p) = powers.iter().find(|p| !(**p >= 0.0)) {
                return Err(Error::config("visibility.powers", format!("negative power {p}")));
            }
            if !(v.velocity_shift >= 0.0) {
                return Err(Error::config("visibility.velocity_shift", "must be >= 0"));
            }
        }
        if let Some(s) = &c.scan {
            if s.points < 4 {
                return Err(Error::config("scan.points", "need at least 4"));
            }
            if !(s.periods >= 0.5) {
                return Err(Error::config("scan.periods", "scan must span at least half a period"));
            }
            if !(s.mean_counts > 0.0) {
                return Err(Error::config("scan.mean_counts", "must be positive"));
            }
            if !(s.background >= 0.0) {
                return Err(Error::config("scan.background", "must be >= 0"));
            }
        }
        if let Some(l) = &c.library {
            let file = self.resolve(&l.file);
            if !file.is_file() {
                return Err(Error::config("library.file", format!("{} does not exist", file.display())));
            }
            if let Some(p) = &l.peaks {
                let peaks = self.resolve(p);
                if !peaks.is_file() {
                    return Err(Error::config("library.peaks", format!("{} does not exist", peaks.display())));
                }
            }
            if !(l.tolerance > 0.0) {
                return Err(Error::config("library.tolerance", "must be positive"));
            }
        }
        if let Some(b) = &c.beam {
            b.source
                .validate()
                .map_err(|e| Error::config("beam.source", e.to_string()))?;
            b.geometry
                .validate()
                .map_err(|e| Error::config("beam.geometry", e.to_string()))?;
            if b.n_samples < crate::beam::MIN_SELECTION_SAMPLES {
                return Err(Error::config(
                    "beam.n_samples",
                    format!("{} is below the floor of {}", b.n_samples, crate::beam::MIN_SELECTION_SAMPLES),
                ));
            }
            if !(b.bin_width > 0.0) {
                return Err(Error::config("beam.bin_width", "must be positive"));
            }
            if !(b.beam_area > 0.0) {
                return Err(Error::config("beam.beam_area", "must be positive"));
            }
            if !(b.transmission > 0.0 && b.transmission <= 1.0) {
                return Err(Error::config("beam.transmission", "must lie in (0, 1]"));
            }
        }
        Ok(())
    }

    pub fn library(&self) -> Result<(MolecularLibrary, MassTable)> {
        let l = self
            .config
            .library
            .as_ref()
            .ok_or_else(|| Error::config("library", "section missing"))?;
        let (mut lib, table) = MolecularLibrary::load(&self.resolve(&l.file))?;
        if l.n_min.is_some() || l.n_max.is_some() {
            let lo = l.n_min.unwrap_or(*lib.n_range.start());
            let hi = l.n_max.unwrap_or(*lib.n_range.end());
            lib = MolecularLibrary::new(lib.name, lib.core, lib.leaving_group, lib.added_group, lo..=hi)
                .map_err(|e| Error::config("library.n_max", e.to_string()))?;
        }
        Ok((lib, table))
    }

    pub fn molecule(&self) -> Result<Molecule> {
        let m = &self.config.molecule;
        let molecule = if let Some(n) = m.library_member {
            let (lib, table) = self.library()?;
            if !lib.n_range.contains(&n) {
                return Err(Error::config(
                    "molecule.library_member",
                    format!("{n} outside {}..={}", lib.n_range.start(), lib.n_range.end()),
                ));
            }
            Molecule::from_composition(lib.member(n)?, &table, m.alpha_opt, m.sigma_abs)?
        } else if let Some(formula) = &m.formula {
            let composition =
                parse_formula(formula).map_err(|e| Error::config("molecule.formula", e.to_string()))?;
            Molecule::from_composition(composition, &MassTable::iupac(), m.alpha_opt, m.sigma_abs)?
        } else {
            Molecule::new(m.mass.unwrap_or_default(), m.alpha_opt, m.sigma_abs)
                .map_err(|e| Error::config("molecule.mass", e.to_string()))?
        };
        Ok(molecule)
    }

    /// The analytic profile, or the histogram of a fresh beam simulation.
    pub fn velocity_distribution(&self) -> Result<VelocityDistribution> {
        match &self.config.velocity {
            VelocitySource::Analytic { mean, fwhm, points } => {
                VelocityDistribution::gaussian(*mean, *fwhm, *points)
            }
            VelocitySource::Beam => {
                let b = self.config.beam.as_ref().expect("validated");
                crate::beam::SelectionRun::run(&b.source, &b.geometry, b.n_samples, self.config.seed)?
                    .distribution(b.bin_width)
            }
        }
    }
}
