//! Synthetic interferograms and their fixed-period sinusoid fits.
//!
//! The fringe period behind a Talbot-Lau interferometer is the grating
//! period, whatever the molecular velocity, so the fit is linear in
//! `{1, sin(2πz/d), cos(2πz/d)}` and needs no starting guess. The contrast
//! is read off the fitted curve as `(S_max − S_min)/(S_max + S_min)` after
//! the detector background has been subtracted.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::io::{line_of_offset, read_text};

/// Detector counts recorded while stepping the third grating.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    /// Grating positions, nm, strictly monotone.
    pub positions: Vec<f64>,
    pub counts: Vec<u64>,
    /// Dark level, counts per dwell.
    pub background: f64,
    /// nm
    pub period_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityResult {
    pub visibility: f64,
    /// Phase of `sin(2πz/d + phase)`, in [0, 2π).
    pub phase: f64,
    /// Fitted mean count level, background included.
    pub mean_level: f64,
    /// 1σ on the visibility.
    pub uncertainty: f64,
}

impl FringeScan {
    pub fn new(positions: Vec<f64>, counts: Vec<u64>, background: f64, period_d: f64) -> Result<Self> {
        let scan = Self {
            positions,
            counts,
            background,
            period_d,
        };
        scan.validate()?;
        Ok(scan)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("period", self.period_d)?;
        ensure_non_negative("background", self.background)?;
        if self.positions.len() != self.counts.len() {
            return Err(Error::domain(format!(
                "{} positions but {} counts",
                self.positions.len(),
                self.counts.len()
            )));
        }
        if self.positions.iter().any(|z| !z.is_finite()) {
            return Err(Error::domain("positions must be finite"));
        }
        let increasing = self.positions.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.positions.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::domain("positions must be strictly monotone"));
        }
        Ok(())
    }

    /// Delimited text: `# period_nm = …` and `# background = …` header
    /// lines, a column header, then `z, counts` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# period_nm = {}", self.period_d).unwrap();
        writeln!(out, "# background = {}", self.background).unwrap();
        writeln!(out, "z[nm],counts[1]").unwrap();
        for (z, c) in self.positions.iter().zip(&self.counts) {
            writeln!(out, "{z},{c}").unwrap();
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_csv(&read_text(path)?, path)
    }

    pub fn from_csv(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Data {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut period = None;
        let mut background = None;
        let mut positions = Vec::new();
        let mut counts = Vec::new();
        let mut header_seen = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((key, value)) = meta.split_once('=') {
                    let value: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| err(line_no, format!("bad number in {line:?}")))?;
                    match key.trim() {
                        "period_nm" => period = Some(value),
                        "background" => background = Some(value),
                        _ => {}
                    }
                }
                continue;
            }
            if !header_seen {
                header_seen = true;
                if line.starts_with("z") {
                    continue;
                }
            }
            let (z, c) = line
                .split_once(',')
                .ok_or_else(|| err(line_no, "expected `z,counts`".into()))?;
            positions.push(
                z.trim()
                    .parse::<f64>()
                    .map_err(|_| err(line_no, format!("bad position {z:?}")))?,
            );
            counts.push(
                c.trim()
                    .parse::<u64>()
                    .map_err(|_| err(line_no, format!("bad count {c:?}")))?,
            );
        }
        let period = period.ok_or_else(|| err(1, "missing `# period_nm =` header".into()))?;
        let background = background.unwrap_or(0.0);
        Self::new(positions, counts, background, period)
            .map_err(|e| err(line_of_offset(text, text.len()), e.to_string()))
    }
}

impl VisibilityResult {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain struct serialises")
    }
}

/// `n` positions equally spaced over `periods` grating periods, starting
/// at zero.
pub fn uniform_positions(period_d: f64, n: usize, periods: f64) -> Vec<f64> {
    (0..n)
        .map(|i| i as f64 * periods * period_d / n as f64)
        .collect()
}

/// Poisson counts with mean `background + mean_counts (1 + V sin(2πz/d + phase))`.
pub fn synthesize_scan(
    true_v: f64,
    period_d: f64,
    phase: f64,
    mean_counts: f64,
    background: f64,
    positions: &[f64],
    seed: u64,
) -> Result<FringeScan> {
    if !(0.0..=1.0).contains(&true_v) {
        return Err(Error::domain(format!("visibility must lie in [0, 1], got {true_v}")));
    }
    ensure_positive("mean counts", mean_counts)?;
    ensure_non_negative("background", background)?;
    ensure_positive("period", period_d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = positions
        .iter()
        .map(|&z| {
            let mean = background + mean_counts * (1.0 + true_v * (2.0 * PI * z / period_d + phase).sin());
            if mean <= 0.0 {
                return Ok(0);
            }
            let poisson = Poisson::new(mean).map_err(|e| Error::domain(e.to_string()))?;
            Ok(poisson.sample(&mut rng) as u64)
        })
        .collect::<Result<Vec<u64>>>()?;
    FringeScan::new(positions.to_vec(), counts, background, period_d)
}

/// Weighted linear least squares on `{1, sin(kz), cos(kz)}` with weights
/// `1/max(count, 1)`.
///
/// `V = A / (c₀ − background)` with `A = √(a² + b²)`; the uncertainty
/// propagates the parameter covariance `(XᵀWX)⁻¹` to first order.
pub fn fit_scan(scan: &FringeScan) -> Result<VisibilityResult> {
    scan.validate()?;
    if scan.positions.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 points, got {}", scan.positions.len())));
    }
    let (first, last) = (scan.positions[0], scan.positions[scan.positions.len() - 1]);
    if (last - first).abs() < 0.5 * scan.period_d {
        return Err(Error::Fit("scan spans less than half a period".into()));
    }
    let k = 2.0 * PI / scan.period_d;
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for (&z, &c) in scan.positions.iter().zip(&scan.counts) {
        let w = 1.0 / (c.max(1) as f64);
        let x = Vector3::new(1.0, (k * z).sin(), (k * z).cos());
        normal += w * x * x.transpose();
        rhs += w * c as f64 * x;
    }
    let eigen = normal.symmetric_eigen();
    let (lo, hi) = eigen
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e.abs())));
    if !(lo > 1e-10 * hi) {
        return Err(Error::Fit(
            "degenerate design: positions do not resolve the fringe (all congruent mod d?)".into(),
        ));
    }
    let cov = normal
        .try_inverse()
        .ok_or_else(|| Error::Fit("normal matrix is singular".into()))?;
    let beta = cov * rhs;
    let (c0, a, b) = (beta[0], beta[1], beta[2]);
    let offset = c0 - scan.background;
    if !(offset > 0.0) {
        return Err(Error::Fit(format!(
            "fitted mean {c0} does not exceed the background {}",
            scan.background
        )));
    }
    let amplitude = a.hypot(b);
    let visibility = (amplitude / offset).min(1.0);
    let phase = b.atan2(a).rem_euclid(2.0 * PI);
    let uncertainty = if amplitude > 0.0 {
        let grad = Vector3::new(
            -amplitude / (offset * offset),
            a / (amplitude * offset),
            b / (amplitude * offset),
        );
        (grad.transpose() * cov * grad)[0].max(0.0).sqrt()
    } else {
        (0.5 * (cov[(1, 1)] + cov[(2, 2)])).sqrt() / offset
    };
    Ok(VisibilityResult {
        visibility,
        phase,
        mean_level: c0,
        uncertainty,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_scan(offset: f64, amplitude: f64, phase: f64, background: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
        let z = uniform_positions(266.0, n, 1.0);
        let s = z
            .iter()
            .map(|&z| background + offset + amplitude * (2.0 * PI * z / 266.0 + phase).sin())
            .collect();
        (z, s)
    }

    /// Unweighted solve of the same linear model for noiseless float data.
    fn fit_exact(z: &[f64], s: &[f64], background: f64) -> (f64, f64) {
        let k = 2.0 * PI / 266.0;
        let mut n = Matrix3::zeros();
        let mut r = Vector3::zeros();
        for (&z, &s) in z.iter().zip(s) {
            let x = Vector3::new(1.0, (k * z).sin(), (k * z).cos());
            n += x * x.transpose();
            r += s * x;
        }
        let b = n.try_inverse().unwrap() * r;
        (b[1].hypot(b[2]) / (b[0] - background), b[2].atan2(b[1]).rem_euclid(2.0 * PI))
    }

    #[test]
    fn integer_counts_recover_exact_contrast() {
        // offset 100, amplitude 33 at quarter-period steps: counts 100,133,100,67
        let scan = FringeScan::new(vec![0.0, 66.5, 133.0, 199.5], vec![100, 133, 100, 67], 0.0, 266.0).unwrap();
        let r = fit_scan(&scan).unwrap();
        assert!((r.visibility - 0.33).abs() < 1e-12, "{}", r.visibility);
        let (s_max, s_min) = (133.0, 67.0);
        assert!(((s_max - s_min) / (s_max + s_min) - r.visibility).abs() < 1e-12);
        assert!((r.mean_level - 100.0).abs() < 1e-12);
    }

    #[test]
    fn noiseless_recovery_any_visibility() {
        for v in [0.0, 0.05, 0.33, 0.8, 1.0] {
            let (z, s) = exact_scan(200.0, 200.0 * v, 0.7, 0.0, 24);
            let (got, _) = fit_exact(&z, &s, 0.0);
            assert!((got - v).abs() < 1e-12, "{v}: {got}");
        }
    }

    #[test]
    fn background_must_be_subtracted() {
        // quarter-period sampling with background 20: 120,153,120,87
        let scan = FringeScan::new(vec![0.0, 66.5, 133.0, 199.5], vec![120, 153, 120, 87], 20.0, 266.0).unwrap();
        let r = fit_scan(&scan).unwrap();
        assert!((r.visibility - 0.33).abs() < 1e-12);
        let raw = FringeScan { background: 0.0, ..scan };
        let r = fit_scan(&raw).unwrap();
        assert!((r.visibility - 0.275).abs() < 1e-12);
    }

    #[test]
    fn flat_scan_is_consistent_with_zero() {
        let z = uniform_positions(266.0, 20, 1.0);
        let scan = synthesize_scan(0.0, 266.0, 0.0, 250.0, 25.0, &z, 17).unwrap();
        let r = fit_scan(&scan).unwrap();
        assert!(r.visibility < 3.0 * r.uncertainty, "{r:?}");
    }

    #[test]
    fn reference_count_scan() {
        let z = uniform_positions(266.0, 20, 1.0);
        let scan = synthesize_scan(0.33, 266.0, 1.0, 250.0, 25.0, &z, 4).unwrap();
        let r = fit_scan(&scan).unwrap();
        assert!((r.visibility - 0.33).abs() < 3.0 * r.uncertainty);
        assert!(r.uncertainty > 0.015 && r.uncertainty < 0.03, "{}", r.uncertainty);
    }

    #[test]
    fn error_shrinks_with_counts() {
        let z = uniform_positions(266.0, 20, 1.0);
        let spread = |mean: f64| {
            let v: Vec<f64> = (0..400)
                .map(|s| fit_scan(&synthesize_scan(0.33, 266.0, 0.0, mean, 0.0, &z, s).unwrap()).unwrap().visibility)
                .collect();
            let m = v.iter().sum::<f64>() / v.len() as f64;
            (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
        };
        let ratio = spread(100.0) / spread(200.0);
        assert!((ratio - 2f64.sqrt()).abs() < 0.15, "{ratio}");
    }

    #[test]
    fn translation_shifts_phase_only() {
        let z = uniform_positions(266.0, 20, 1.0);
        let scan = synthesize_scan(0.4, 266.0, 0.3, 300.0, 0.0, &z, 8).unwrap();
        let r = fit_scan(&scan).unwrap();
        let shift = 57.0;
        let moved = FringeScan {
            positions: scan.positions.iter().map(|z| z + shift).collect(),
            ..scan.clone()
        };
        let m = fit_scan(&moved).unwrap();
        assert!((m.visibility - r.visibility).abs() < 1e-9);
        assert!((m.uncertainty - r.uncertainty).abs() < 1e-9);
        let expected = (r.phase - 2.0 * PI * shift / 266.0).rem_euclid(2.0 * PI);
        let diff = (m.phase - expected).rem_euclid(2.0 * PI);
        assert!(diff < 1e-9 || 2.0 * PI - diff < 1e-9);
        assert!((0.0..2.0 * PI).contains(&m.phase));
    }

    #[test]
    fn synthesis_is_deterministic() {
        let z = uniform_positions(266.0, 20, 1.0);
        let a = synthesize_scan(0.33, 266.0, 0.0, 50.0, 5.0, &z, 99).unwrap();
        let b = synthesize_scan(0.33, 266.0, 0.0, 50.0, 5.0, &z, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_inputs() {
        let z = uniform_positions(266.0, 20, 1.0);
        assert!(synthesize_scan(1.2, 266.0, 0.0, 50.0, 0.0, &z, 1).is_err());
        assert!(synthesize_scan(0.3, 266.0, 0.0, -5.0, 0.0, &z, 1).is_err());
        assert!(FringeScan::new(vec![0.0, 1.0], vec![1], 0.0, 266.0).is_err());
        assert!(FringeScan::new(vec![0.0, 2.0, 1.0], vec![1, 1, 1], 0.0, 266.0).is_err());

        let few = FringeScan::new(vec![0.0, 100.0, 200.0], vec![5, 6, 7], 0.0, 266.0).unwrap();
        assert!(matches!(fit_scan(&few), Err(Error::Fit(_))));
        let short = FringeScan::new(vec![0.0, 10.0, 20.0, 30.0], vec![5, 6, 7, 8], 0.0, 266.0).unwrap();
        assert!(matches!(fit_scan(&short), Err(Error::Fit(_))));
        let congruent = FringeScan::new(vec![0.0, 266.0, 532.0, 798.0], vec![5, 6, 7, 8], 0.0, 266.0).unwrap();
        assert!(matches!(fit_scan(&congruent), Err(Error::Fit(_))));
    }

    #[test]
    fn csv_round_trip() {
        let z = uniform_positions(266.0, 8, 1.0);
        let scan = synthesize_scan(0.33, 266.0, 0.0, 50.0, 5.0, &z, 2).unwrap();
        let text = scan.to_csv();
        assert!(text.starts_with("# period_nm = 266\n# background = 5\nz[nm],counts[1]\n"));
        let back = FringeScan::from_csv(&text, Path::new("s.csv")).unwrap();
        assert_eq!(back, scan);
        let err = FringeScan::from_csv("# period_nm = 266\nz[nm],counts[1]\n0,4\n1,x\n", Path::new("s.csv"))
            .unwrap_err();
        assert!(matches!(err, Error::Data { line: 4, .. }), "{err}");
    }
}
