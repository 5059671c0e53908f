//! The config-driven experiments behind the `kdtl` binary.
//!
//! Every command writes its tables into the output directory together with
//! `<command>_manifest.json`, which records the config hash, seed, model,
//! constants vintage, crate version and the sha256 of each output. Two runs
//! with equal manifests produced byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::beam::{estimate_flux_density, SelectionRun};
use crate::config::LoadedConfig;
use crate::constants::VINTAGE;
use crate::error::{Error, Result};
use crate::io::{sha256_hex, write_text};
use crate::library::{assign_peaks, build_library, load_peaks};
use crate::physics::{power_scan, VisibilityModel};
use crate::scan::{fit_scan, synthesize_scan, uniform_positions};

/// Files written by one command and a short human-readable summary.
#[derive(Debug, Clone)]
pub struct CommandReport {
    pub command: &'static str,
    pub outputs: Vec<PathBuf>,
    pub summary: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    crate_version: &'a str,
    constants: &'a str,
    config_sha256: &'a str,
    seed: u64,
    model: VisibilityModel,
    outputs: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    sha256: String,
}

struct Outputs {
    dir: PathBuf,
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, text: String) -> Result<()> {
        let path = self.dir.join(name);
        write_text(&path, &text)?;
        self.files.push((path, sha256_hex(text.as_bytes())));
        Ok(())
    }

    fn finish(mut self, command: &'static str, cfg: &LoadedConfig, summary: String) -> Result<CommandReport> {
        let manifest = Manifest {
            command,
            crate_version: env!("CARGO_PKG_VERSION"),
            constants: VINTAGE,
            config_sha256: &cfg.hash,
            seed: cfg.config.seed,
            model: cfg.config.model,
            outputs: self
                .files
                .iter()
                .map(|(p, h)| ManifestEntry {
                    file: p.file_name().unwrap_or_default().to_string_lossy().into_owned(),
                    sha256: h.clone(),
                })
                .collect(),
        };
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
        json.push('\n');
        self.write(&format!("{command}_manifest.json"), json)?;
        Ok(CommandReport {
            command,
            outputs: self.files.into_iter().map(|(p, _)| p).collect(),
            summary,
        })
    }
}

/// Checks a CSV produced by this crate: every header cell reads
/// `name[unit]`, every row has as many fields as the header, and fields
/// are numeric unless the unit is `[-]`. Lines starting with `#` are
/// metadata. Returns the header cells.
pub fn check_csv_schema(text: &str) -> Result<Vec<String>> {
    let bad = |line: usize, message: String| Error::Data {
        path: PathBuf::from("<csv>"),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| bad(1, "no header".into()))?;
    let cells: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut textual = Vec::with_capacity(cells.len());
    for c in &cells {
        let open = c.find('[');
        let ok = open.is_some_and(|i| i > 0 && c.ends_with(']') && c.len() > i + 2);
        if !ok {
            return Err(bad(hline + 1, format!("header cell {c:?} is not name[unit]")));
        }
        textual.push(c.ends_with("[-]"));
    }
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cells.len() {
            return Err(bad(i + 1, format!("{} fields, header has {}", fields.len(), cells.len())));
        }
        for (f, is_text) in fields.iter().zip(&textual) {
            if !is_text && !f.is_empty() && f.parse::<f64>().is_err() {
                return Err(bad(i + 1, format!("non-numeric field {f:?}")));
            }
        }
    }
    Ok(cells)
}

/// Visibility against laser power for both models, plus the quantum curve
/// for the velocity distribution shifted by ± `velocity_shift`.
pub fn cmd_visibility(cfg: &LoadedConfig) -> Result<CommandReport> {
    let c = &cfg.config;
    let vis = c
        .visibility
        .as_ref()
        .ok_or_else(|| Error::config("visibility", "section missing"))?;
    let powers = vis.powers.values()?;
    let molecule = cfg.molecule()?;
    let dist = cfg.velocity_distribution().map_err(|e| e.at_stage("velocity distribution"))?;
    let dv = vis.velocity_shift;
    let faster = dist.shifted(dv)?;
    let slower = dist.shifted(-dv)?;

    let curve = |d, model| power_scan(&c.setup, &molecule, d, &powers, model).map_err(|e| e.at_stage("power scan"));
    let quantum = curve(&dist, VisibilityModel::Quantum)?;
    let classical = curve(&dist, VisibilityModel::Classical)?;
    let q_fast = curve(&faster, VisibilityModel::Quantum)?;
    let q_slow = curve(&slower, VisibilityModel::Quantum)?;

    let mut csv = format!("P[W],V_quantum[1],V_classical[1],V_quantum_v+{dv}[1],V_quantum_v-{dv}[1]\n");
    for i in 0..powers.len() {
        writeln!(csv, "{},{},{},{},{}", powers[i], quantum[i].1, classical[i].1, q_fast[i].1, q_slow[i].1).unwrap();
    }

    let primary = match c.model {
        VisibilityModel::Quantum => &quantum,
        VisibilityModel::Classical => &classical,
    };
    let best = (0..powers.len())
        .max_by(|&a, &b| primary[a].1.total_cmp(&primary[b].1))
        .unwrap();
    let summary = format!(
        "{} peak V = {:.4} at P = {} W (quantum {:.4}, classical {:.4})",
        c.model, primary[best].1, powers[best], quantum[best].1, classical[best].1
    );
    let toml = format!(
        "model = \"{}\"\nmean_velocity = {}\npeak_power = {}\npeak_visibility = {}\nquantum_at_peak = {}\nclassical_at_peak = {}\n",
        c.model,
        dist.mean(),
        powers[best],
        primary[best].1,
        quantum[best].1,
        classical[best].1
    );

    let mut out = Outputs::new(cfg.output_dir())?;
    out.write("visibility.csv", csv)?;
    out.write("visibility_summary.toml", toml)?;
    out.finish("visibility", cfg, summary)
}

/// Synthetic interferogram at the configured power, then the sinusoid fit.
pub fn cmd_scan(cfg: &LoadedConfig) -> Result<CommandReport> {
    let c = &cfg.config;
    let s = c
        .scan
        .as_ref()
        .ok_or_else(|| Error::config("scan", "section missing"))?;
    let molecule = cfg.molecule()?;
    let dist = cfg.velocity_distribution().map_err(|e| e.at_stage("velocity distribution"))?;
    let truth = crate::physics::visibility_averaged(&c.setup, &molecule, &dist, c.model)
        .map_err(|e| e.at_stage("visibility model"))?;
    let period_nm = c.setup.period_d * 1e9;
    let positions = uniform_positions(period_nm, s.points, s.periods);
    let scan = synthesize_scan(truth, period_nm, s.phase, s.mean_counts, s.background, &positions, c.seed)
        .map_err(|e| e.at_stage("synthesis"))?;
    let fit = fit_scan(&scan).map_err(|e| e.at_stage("fit"))?;

    let summary = format!(
        "{} model V = {:.4}; fitted V = {:.4} ± {:.4}",
        c.model, truth, fit.visibility, fit.uncertainty
    );
    let record = format!("model = \"{}\"\nmodel_visibility = {}\n{}", c.model, truth, fit.to_toml());

    let mut out = Outputs::new(cfg.output_dir())?;
    out.write("scan.csv", scan.to_csv())?;
    out.write("fit.toml", record)?;
    out.finish("scan", cfg, summary)
}

/// Library members and, when a peak list is configured, the assignment.
pub fn cmd_library(cfg: &LoadedConfig) -> Result<CommandReport> {
    let l = cfg
        .config
        .library
        .as_ref()
        .ok_or_else(|| Error::config("library", "section missing"))?;
    let (lib, table) = cfg.library()?;
    let members = build_library(&lib, &table)?;

    let mut csv = String::from("n[1],formula[-],mass[amu],atoms[1]\n");
    for m in &members {
        writeln!(csv, "{},{},{},{}", m.n, m.composition, m.mass, m.composition.total_atoms()).unwrap();
    }
    let mut summary = format!(
        "{}: {} members, n = {}..={}, step {:.4} amu",
        lib.name,
        members.len(),
        lib.n_range.start(),
        lib.n_range.end(),
        lib.mass_step(&table)?
    );

    let mut out = Outputs::new(cfg.output_dir())?;
    out.write("library.csv", csv)?;
    if let Some(p) = &l.peaks {
        let peaks = load_peaks(&cfg.resolve(p))?;
        let assigned = assign_peaks(&members, &peaks, l.tolerance)?;
        let mut csv = String::from("mz[amu],intensity[%],n[1],nearest_n[1],residual[amu],tie[-]\n");
        for a in &assigned {
            let n = a.n.map(|n| n.to_string()).unwrap_or_default();
            writeln!(csv, "{},{},{},{},{},{}", a.mz, a.intensity, n, a.nearest_n, a.residual, a.tie).unwrap();
        }
        let matched = assigned.iter().filter(|a| a.n.is_some()).count();
        write!(summary, "; {matched}/{} peaks within {} amu", assigned.len(), l.tolerance).unwrap();
        out.write("peaks.csv", csv)?;
    }
    out.finish("library", cfg, summary)
}

/// Velocity selection and the flux and density estimate.
pub fn cmd_beam(cfg: &LoadedConfig) -> Result<CommandReport> {
    let c = &cfg.config;
    let b = c
        .beam
        .as_ref()
        .ok_or_else(|| Error::config("beam", "section missing"))?;
    let run = SelectionRun::run(&b.source, &b.geometry, b.n_samples, c.seed)
        .map_err(|e| e.at_stage("velocity selection"))?;
    let dist = run.distribution(b.bin_width)?;
    let fwhm = dist.fwhm()?;
    let estimate = estimate_flux_density(&b.source, dist.mean(), b.beam_area, b.transmission)?;

    let mut csv = String::from("v[m/s],count[1]\n");
    for (v, w) in dist.samples() {
        writeln!(csv, "{v},{w}").unwrap();
    }
    let toml = format!(
        "launched = {}\ntransmitted = {}\nmean_velocity = {}\nfwhm = {}\nflux = {}\ndensity_per_mm3 = {}\nmean_spacing_um = {}\n",
        run.launched,
        run.survivors.len(),
        dist.mean(),
        fwhm,
        estimate.flux,
        estimate.density,
        estimate.mean_spacing
    );
    let summary = format!(
        "{} of {} passed; mean {:.1} m/s, FWHM {:.1} m/s; flux {:.3e} /s, density {:.1} /mm^3, spacing {:.0} um",
        run.survivors.len(),
        run.launched,
        dist.mean(),
        fwhm,
        estimate.flux,
        estimate.density,
        estimate.mean_spacing
    );

    let mut out = Outputs::new(cfg.output_dir())?;
    out.write("velocity_histogram.csv", csv)?;
    out.write("beam_summary.toml", toml)?;
    out.finish("beam", cfg, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_accepts_unit_headers() {
        let cells = check_csv_schema("# meta\nP[W],V[1],name[-]\n0.5,0.1,abc\n1,,x\n").unwrap();
        assert_eq!(cells, ["P[W]", "V[1]", "name[-]"]);
    }

    #[test]
    fn schema_rejects_bad_tables() {
        assert!(check_csv_schema("P,V[1]\n1,2\n").is_err());
        assert!(check_csv_schema("P[W],V[1]\n1\n").is_err());
        assert!(check_csv_schema("P[W],V[1]\n1,abc\n").is_err());
        assert!(check_csv_schema("P[],V[1]\n1,2\n").is_err());
        assert!(check_csv_schema("").is_err());
    }
}
