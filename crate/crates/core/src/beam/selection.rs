use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::source::{draw, SourceConfig};
use crate::constants::G_GRAVITY;
use crate::error::{Error, Result};
use crate::rng::{blocks, substream};
use crate::velocity::VelocityDistribution;

pub const MIN_SELECTION_SAMPLES: usize = 10_000;
/// Histogram bin width for selected velocities, m/s.
pub const DEFAULT_BIN_WIDTH: f64 = 2.0;
/// Launch angles never exceed this magnitude, rad.
const MAX_LAUNCH_ANGLE: f64 = 0.1;
/// Extra launch cone on each side of the first aperture, as a fraction of
/// its angular size.
const LAUNCH_MARGIN: f64 = 0.05;

/// A horizontal slot that limits the beam height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Aperture {
    /// Distance from the source, m.
    pub position: f64,
    /// Height of the opening centre above the source, m.
    pub center_height: f64,
    /// Full height of the opening, m.
    pub opening: f64,
}

impl Aperture {
    fn admits(&self, y: f64) -> bool {
        (y - self.center_height).abs() <= 0.5 * self.opening
    }
}

/// Three height delimiters between a point source at the origin and the
/// detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelimiterGeometry {
    pub apertures: [Aperture; 3],
    /// m
    pub detector_position: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    /// m/s
    pub velocity: f64,
    /// rad, above horizontal
    pub angle: f64,
    pub passed: [bool; 3],
}

impl TrajectorySample {
    pub fn transmitted(&self) -> bool {
        self.passed.iter().all(|&p| p)
    }
}

impl DelimiterGeometry {
    /// Reference geometry for the 600 K, 10 123 amu beam. The first slot
    /// fixes the launch angle to within 1.4 mrad; the lower edge of the
    /// third slot rejects molecules that sag too far, which cuts the
    /// effusive distribution below about 72 m/s. The middle slot is wide
    /// and only trims stray trajectories.
    pub fn reference() -> Self {
        Self {
            apertures: [
                Aperture {
                    position: 0.10,
                    center_height: 0.07e-3,
                    opening: 0.14e-3,
                },
                Aperture {
                    position: 0.80,
                    center_height: 0.30e-3,
                    opening: 2.0e-3,
                },
                Aperture {
                    position: 1.50,
                    center_height: 1.35e-3,
                    opening: 2.43e-3,
                },
            ],
            detector_position: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut last = 0.0;
        for (i, a) in self.apertures.iter().enumerate() {
            if !(a.position.is_finite() && a.position > last) {
                return Err(Error::domain(format!(
                    "delimiter {} position {} must exceed {}",
                    i + 1,
                    a.position,
                    last
                )));
            }
            if !(a.opening > 0.0) || !a.center_height.is_finite() {
                return Err(Error::domain(format!("delimiter {} needs a positive opening", i + 1)));
            }
            last = a.position;
        }
        if !(self.detector_position > last) {
            return Err(Error::domain("detector must lie behind the last delimiter"));
        }
        Ok(())
    }

    /// Height of the flight parabola at distance `x`:
    /// `y = x tanθ − g x² / (2 v² cos²θ)`.
    pub fn height_at(x: f64, velocity: f64, angle: f64) -> f64 {
        let c = angle.cos();
        x * angle.tan() - G_GRAVITY * x * x / (2.0 * velocity * velocity * c * c)
    }

    pub fn trace(&self, velocity: f64, angle: f64) -> TrajectorySample {
        let passed = self
            .apertures
            .map(|a| a.admits(Self::height_at(a.position, velocity, angle)));
        TrajectorySample {
            velocity,
            angle,
            passed,
        }
    }

    /// Launch angles that can reach the first opening at this speed (small
    /// angle approximation, padded by `LAUNCH_MARGIN`). The width does not
    /// depend on speed, so a source that is uniform in angle feeds every
    /// speed class equally.
    fn launch_window(&self, velocity: f64) -> (f64, f64) {
        let first = &self.apertures[0];
        let x = first.position;
        let sag = G_GRAVITY * x / (2.0 * velocity * velocity);
        let lo = (first.center_height - 0.5 * first.opening) / x + sag;
        let hi = (first.center_height + 0.5 * first.opening) / x + sag;
        let pad = LAUNCH_MARGIN * (hi - lo);
        (
            (lo - pad).clamp(-MAX_LAUNCH_ANGLE, MAX_LAUNCH_ANGLE),
            (hi + pad).clamp(-MAX_LAUNCH_ANGLE, MAX_LAUNCH_ANGLE),
        )
    }
}

/// Outcome of a velocity-selection run.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRun {
    pub launched: usize,
    /// Speeds of the molecules that cleared all three delimiters, in launch
    /// order.
    pub survivors: Vec<f64>,
    pub launched_min: f64,
    pub launched_max: f64,
}

impl SelectionRun {
    pub fn run(
        source: &SourceConfig,
        geometry: &DelimiterGeometry,
        n_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        source.validate()?;
        geometry.validate()?;
        if n_samples < MIN_SELECTION_SAMPLES {
            return Err(Error::InsufficientSamples {
                got: n_samples,
                min: MIN_SELECTION_SAMPLES,
            });
        }
        let scale = source.thermal_scale();
        let per_block: Vec<(Vec<f64>, f64, f64)> = blocks(n_samples)
            .into_par_iter()
            .map(|(b, count)| {
                let mut rng = substream(seed, b);
                let mut kept = Vec::new();
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for _ in 0..count {
                    let v = draw(scale, &mut rng);
                    let (a, z) = geometry.launch_window(v);
                    let angle = a + (z - a) * rng.random::<f64>();
                    lo = lo.min(v);
                    hi = hi.max(v);
                    if geometry.trace(v, angle).transmitted() {
                        kept.push(v);
                    }
                }
                (kept, lo, hi)
            })
            .collect();
        let launched_min = per_block.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
        let launched_max = per_block.iter().map(|b| b.2).fold(f64::NEG_INFINITY, f64::max);
        let survivors: Vec<f64> = per_block.into_iter().flat_map(|b| b.0).collect();
        if survivors.is_empty() {
            return Err(Error::GeometryBlocksBeam {
                launched: n_samples,
            });
        }
        Ok(Self {
            launched: n_samples,
            survivors,
            launched_min,
            launched_max,
        })
    }

    pub fn transmission(&self) -> f64 {
        self.survivors.len() as f64 / self.launched as f64
    }

    pub fn distribution(&self, bin_width: f64) -> Result<VelocityDistribution> {
        VelocityDistribution::from_draws(&self.survivors, bin_width)
    }
}

/// Launches `n_samples` effusive molecules through the delimiters and
/// returns the histogram (bins of [`DEFAULT_BIN_WIDTH`]) of those that
/// pass all three.
pub fn simulate_velocity_selection(
    source: &SourceConfig,
    geometry: &DelimiterGeometry,
    n_samples: usize,
    seed: u64,
) -> Result<VelocityDistribution> {
    SelectionRun::run(source, geometry, n_samples, seed)?.distribution(DEFAULT_BIN_WIDTH)
}
