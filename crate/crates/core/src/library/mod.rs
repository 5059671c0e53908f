//! Formula arithmetic for substitution libraries: a core molecule in which
//! `n` leaving groups are replaced by `n` added groups, giving members whose
//! masses are equally spaced.

mod composition;
mod masses;

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::Path;

use serde::Deserialize;

pub use composition::{parse_formula, Composition, Element};
pub use masses::{molecular_mass, MassTable};

use crate::error::{Error, Result};
use crate::io::{line_of_offset, read_text};

#[derive(Debug, Clone, PartialEq)]
pub struct MolecularLibrary {
    pub name: String,
    pub core: Composition,
    pub leaving_group: Composition,
    pub added_group: Composition,
    pub n_range: RangeInclusive<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LibraryMember {
    pub n: u32,
    pub composition: Composition,
    /// amu
    pub mass: f64,
}

/// One mass-spectrum peak matched against the library.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakAssignment {
    /// amu
    pub mz: f64,
    /// Relative intensity, %.
    pub intensity: f64,
    /// Member index when the nearest member lies within tolerance.
    pub n: Option<u32>,
    /// Nearest member, whether or not it was accepted.
    pub nearest_n: u32,
    /// `mz − mass(nearest member)`, amu.
    pub residual: f64,
    /// Two members were equally close; the lower `n` was taken.
    pub tie: bool,
}

impl MolecularLibrary {
    pub fn new(
        name: impl Into<String>,
        core: Composition,
        leaving_group: Composition,
        added_group: Composition,
        n_range: RangeInclusive<u32>,
    ) -> Result<Self> {
        if n_range.is_empty() {
            return Err(Error::domain(format!(
                "empty substitution range {}..={}",
                n_range.start(),
                n_range.end()
            )));
        }
        if leaving_group.is_empty() && added_group.is_empty() {
            return Err(Error::domain("substitution changes nothing"));
        }
        let n_max = *n_range.end() as u64;
        if let Err(element) = core.checked_sub(&leaving_group.scaled(n_max)) {
            return Err(Error::NegativeCount {
                n: n_max as u32,
                element: element.symbol().to_string(),
            });
        }
        Ok(Self {
            name: name.into(),
            core,
            leaving_group,
            added_group,
            n_range,
        })
    }

    /// Composition after `n` substitutions.
    pub fn member(&self, n: u32) -> Result<Composition> {
        let stripped = self
            .core
            .checked_sub(&self.leaving_group.scaled(n as u64))
            .map_err(|element| Error::NegativeCount {
                n,
                element: element.symbol().to_string(),
            })?;
        Ok(stripped.combined(&self.added_group.scaled(n as u64)))
    }

    /// Mass change per substitution, amu.
    pub fn mass_step(&self, table: &MassTable) -> Result<f64> {
        Ok(molecular_mass(&self.added_group, table)? - molecular_mass(&self.leaving_group, table)?)
    }

    pub fn build(&self, table: &MassTable) -> Result<Vec<LibraryMember>> {
        build_library(self, table)
    }

    /// Loads a library definition (TOML). Returns the library and the mass
    /// table it specifies, IUPAC values when the file has no `[masses]`.
    pub fn load(path: &Path) -> Result<(MolecularLibrary, MassTable)> {
        let text = read_text(path)?;
        Self::from_toml_str(&text, path)
    }

    pub fn from_toml_str(text: &str, path: &Path) -> Result<(MolecularLibrary, MassTable)> {
        let data_error = |line: usize, message: String| Error::Data {
            path: path.to_path_buf(),
            line,
            message,
        };
        let file: LibraryFile = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of_offset(text, s.start)).unwrap_or(0);
            data_error(line, e.message().to_string())
        })?;
        let formula = |field: &str, value: &str| {
            parse_formula(value).map_err(|e| {
                data_error(line_of_key(text, field), format!("{field}: {e}"))
            })
        };
        let core = formula("core", &file.core)?;
        let leaving = formula("leaving_group", &file.leaving_group)?;
        let added = formula("added_group", &file.added_group)?;
        let library = MolecularLibrary::new(
            file.name.unwrap_or_else(|| "library".into()),
            core,
            leaving,
            added,
            file.n_min..=file.n_max,
        )
        .map_err(|e| data_error(line_of_key(text, "n_max"), e.to_string()))?;

        let table = match file.masses {
            None => MassTable::iupac(),
            Some(m) => {
                let mut values = BTreeMap::new();
                for (symbol, mass) in m.values {
                    let element = Element::from_symbol(&symbol).ok_or_else(|| {
                        data_error(line_of_key(text, &symbol), format!("unknown element {symbol}"))
                    })?;
                    values.insert(element, mass);
                }
                MassTable::new(values, m.provenance)
                    .map_err(|e| data_error(line_of_key(text, "masses"), e.to_string()))?
            }
        };

        if let Some(reference) = file.reference_member {
            let expected = formula("reference_member.formula", &reference.formula)?;
            let got = library
                .member(reference.n)
                .map_err(|e| data_error(line_of_key(text, "reference_member"), e.to_string()))?;
            if got != expected {
                return Err(data_error(
                    line_of_key(text, "reference_member"),
                    format!(
                        "member n = {} is {got}, reference says {expected}",
                        reference.n
                    ),
                ));
            }
        }
        Ok((library, table))
    }
}

/// Enumerates `core − n·leaving + n·added` over the library's `n` range.
pub fn build_library(library: &MolecularLibrary, table: &MassTable) -> Result<Vec<LibraryMember>> {
    library
        .n_range
        .clone()
        .map(|n| {
            let composition = library.member(n)?;
            let mass = molecular_mass(&composition, table)?;
            Ok(LibraryMember {
                n,
                composition,
                mass,
            })
        })
        .collect()
}

/// Matches each peak to the nearest member mass. Peaks farther than
/// `tolerance` from every member stay unassigned; equidistant members
/// resolve to the lower `n` and set `tie`.
pub fn assign_peaks(
    members: &[LibraryMember],
    peaks: &[(f64, f64)],
    tolerance: f64,
) -> Result<Vec<PeakAssignment>> {
    crate::error::ensure_positive("tolerance", tolerance)?;
    if members.is_empty() {
        return Err(Error::domain("no library members to match against"));
    }
    Ok(peaks
        .iter()
        .map(|&(mz, intensity)| {
            let mut best = &members[0];
            let mut best_dist = (mz - best.mass).abs();
            let mut tie = false;
            for m in &members[1..] {
                let dist = (mz - m.mass).abs();
                if dist < best_dist || (dist == best_dist && m.n < best.n) {
                    best = m;
                    best_dist = dist;
                    tie = false;
                } else if dist == best_dist {
                    tie = true;
                }
            }
            PeakAssignment {
                mz,
                intensity,
                n: (best_dist <= tolerance).then_some(best.n),
                nearest_n: best.n,
                residual: mz - best.mass,
                tie,
            }
        })
        .collect())
}

/// Reads a two-column peak list `m/z, intensity`. Lines starting with `#`
/// are comments; a non-numeric first row is taken as a header.
pub fn load_peaks(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = read_text(path)?;
    parse_peaks(&text, path)
}

pub fn parse_peaks(text: &str, path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let data_error = |line: usize, message: String| Error::Data {
            path: path.to_path_buf(),
            line,
            message,
        };
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            data_error(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != 2 {
            return Err(data_error(line, format!("expected 2 columns, found {}", record.len())));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(mz), Ok(intensity)) => {
                if !(mz.is_finite() && mz > 0.0) || !(intensity.is_finite() && intensity >= 0.0) {
                    return Err(data_error(line, "m/z must be positive and intensity non-negative".into()));
                }
                out.push((mz, intensity));
            }
            _ if row == 0 => continue,
            _ => return Err(data_error(line, format!("not a number pair: {:?}", record))),
        }
    }
    Ok(out)
}

fn line_of_key(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.starts_with(key) || l.starts_with(&format!("[{key}"))
        })
        .map(|i| i + 1)
        .unwrap_or(0)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LibraryFile {
    name: Option<String>,
    core: String,
    leaving_group: String,
    added_group: String,
    n_min: u32,
    n_max: u32,
    reference_member: Option<ReferenceMember>,
    masses: Option<MassesSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceMember {
    n: u32,
    formula: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MassesSection {
    provenance: String,
    values: BTreeMap<String, f64>,
}
