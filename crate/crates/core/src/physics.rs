//! Closed-form Kapitza-Dirac-Talbot-Lau model.
//!
//! The standing light wave imprints `Φ(z) = Φ₀ sin²(2πz/λ_L)` on each
//! molecule. In a symmetric setup (L₁ = L₂ = L, all periods d) the first
//! harmonic of the signal behind G3 has the signed amplitude
//!
//! ```text
//! A(v) = 2 sinc²(f) J₂(Φ₀(v) · t(v)),   sinc(f) = sin(πf)/(πf)
//! ```
//!
//! with `t = sin(πL/L_T)` quantum mechanically and `t = πL/L_T` for
//! classical ballistic particles deflected by the dipole force (the
//! `λ_dB → 0` limit). The visibility is `|A|`.
//!
//! Units of the phase: with α given as a polarizability volume, `α_SI = 4π
//! ε₀ α`. A molecule crossing the antinode of the standing wave picks up
//! `Φ₀ = α_SI/(2ħ ε₀ c) ∫ I dt` where the retro-reflected Gaussian beam has
//! peak intensity `8P/(π w_x w_y)`. The time integral is
//! `8P/(√(2π) w_y v)` (independent of `w_x`), which gives
//! `Φ₀ = 8√(2π) α P / (ħ c w_y v)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::j2;
use crate::constants::{AMU, C, H, HBAR};
use crate::error::{ensure_positive, Error, Result};
use crate::molecule::Molecule;
use crate::setup::InterferometerSetup;
use crate::velocity::VelocityDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VisibilityModel {
    Quantum,
    Classical,
}

impl std::fmt::Display for VisibilityModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VisibilityModel::Quantum => "quantum",
            VisibilityModel::Classical => "classical",
        })
    }
}

impl std::str::FromStr for VisibilityModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum" => Ok(VisibilityModel::Quantum),
            "classical" => Ok(VisibilityModel::Classical),
            other => Err(Error::config("model", format!("unknown model {other:?}"))),
        }
    }
}

/// `h / (m v)` in m, mass in amu.
pub fn de_broglie_wavelength(mass: f64, velocity: f64) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ensure_positive("velocity", velocity)?;
    Ok(H / (mass * AMU * velocity))
}

/// `d² / λ_dB` in m.
pub fn talbot_length(period_d: f64, lambda_db: f64) -> Result<f64> {
    ensure_positive("period", period_d)?;
    ensure_positive("de Broglie wavelength", lambda_db)?;
    Ok(period_d * period_d / lambda_db)
}

/// Peak phase `Φ₀ = 8√(2π) α P / (ħ c w_y v)` imprinted at an antinode.
pub fn max_phase_shift(molecule: &Molecule, setup: &InterferometerSetup, velocity: f64) -> Result<f64> {
    ensure_positive("velocity", velocity)?;
    Ok(8.0 * (2.0 * PI).sqrt() * molecule.alpha_opt * setup.laser_power
        / (HBAR * C * setup.waist_y * velocity))
}

/// `Φ₀ sin²(2πz/λ_L)`; period `λ_L/2`.
pub fn phase_profile(phi0: f64, z: f64, laser_wavelength: f64) -> Result<f64> {
    ensure_positive("laser wavelength", laser_wavelength)?;
    let s = (2.0 * PI * z / laser_wavelength).sin();
    Ok(phi0 * s * s)
}

/// `sin(πf)/(πf)`.
pub fn sinc(f: f64) -> f64 {
    if f == 0.0 {
        1.0
    } else {
        (PI * f).sin() / (PI * f)
    }
}

/// Signed first-harmonic fringe amplitude `2 sinc²(f) J₂(Φ₀ t)`.
///
/// Different velocities can give amplitudes of opposite sign, i.e.
/// phase-inverted fringes; averaging must keep the sign.
pub fn fringe_amplitude(
    setup: &InterferometerSetup,
    molecule: &Molecule,
    velocity: f64,
    model: VisibilityModel,
) -> Result<f64> {
    setup.validate()?;
    ensure_positive("velocity", velocity)?;
    if setup.is_degenerate() {
        log::warn!(
            "open fraction {} leaves no fringe contrast; reporting zero visibility",
            setup.open_fraction_f
        );
        return Ok(0.0);
    }
    let lambda = de_broglie_wavelength(molecule.mass, velocity)?;
    let ratio = setup.separation_l / talbot_length(setup.period_d, lambda)?;
    let talbot_factor = match model {
        VisibilityModel::Quantum => (PI * ratio).sin(),
        VisibilityModel::Classical => PI * ratio,
    };
    let phi0 = max_phase_shift(molecule, setup, velocity)?;
    let s = sinc(setup.open_fraction_f);
    Ok(2.0 * s * s * j2(phi0 * talbot_factor))
}

/// Fringe visibility for a single velocity, in [0, 1].
pub fn visibility_monochromatic(
    setup: &InterferometerSetup,
    molecule: &Molecule,
    velocity: f64,
    model: VisibilityModel,
) -> Result<f64> {
    Ok(fringe_amplitude(setup, molecule, velocity, model)?.abs())
}

/// `|Σ w A(v)| / Σ w` over the distribution.
///
/// The fringe period is fixed by the geometry, so fringes of all velocity
/// classes line up in position and their signed amplitudes add.
pub fn visibility_averaged(
    setup: &InterferometerSetup,
    molecule: &Molecule,
    dist: &VelocityDistribution,
    model: VisibilityModel,
) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let mut weighted = 0.0;
    for &(v, w) in dist.samples() {
        if w != 0.0 {
            weighted += w * fringe_amplitude(setup, molecule, v, model)?;
        }
    }
    Ok((weighted / dist.total_weight()).abs())
}

/// `visibility_averaged` at each power. Points are evaluated in parallel;
/// each is a pure function of its inputs, so the result does not depend on
/// the thread count. Errors carry the index of the offending power.
pub fn power_scan(
    setup: &InterferometerSetup,
    molecule: &Molecule,
    dist: &VelocityDistribution,
    powers: &[f64],
    model: VisibilityModel,
) -> Result<Vec<(f64, f64)>> {
    if powers.is_empty() {
        return Err(Error::domain("power list is empty"));
    }
    let results: Vec<Result<(f64, f64)>> = powers
        .par_iter()
        .map(|&p| {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::domain(format!("laser power must be >= 0, got {p}")));
            }
            let v = visibility_averaged(&setup.with_power(p), molecule, dist, model)?;
            Ok((p, v))
        })
        .collect();
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::ScanPoint {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Power in `[0, max_power]` maximising the averaged visibility: a grid
/// search followed by golden-section refinement around the best point.
pub fn optimal_power(
    setup: &InterferometerSetup,
    molecule: &Molecule,
    dist: &VelocityDistribution,
    model: VisibilityModel,
    max_power: f64,
) -> Result<(f64, f64)> {
    ensure_positive("max power", max_power)?;
    let steps = 200;
    let grid: Vec<f64> = (0..=steps).map(|i| max_power * i as f64 / steps as f64).collect();
    let scan = power_scan(setup, molecule, dist, &grid, model)?;
    let best = scan
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap();
    let eval = |p: f64| visibility_averaged(&setup.with_power(p), molecule, dist, model);
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(steps)];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (eval(a)?, eval(b)?);
    for _ in 0..80 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = eval(b)?;
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = eval(a)?;
        }
    }
    let p = 0.5 * (lo + hi);
    let v = eval(p)?;
    let (p_grid, v_grid) = scan[best];
    Ok(if v >= v_grid { (p, v) } else { (p_grid, v_grid) })
}

/// Expected number of photons absorbed by a molecule crossing the
/// standing-wave antinode at the beam centre.
///
/// Integrates the antinode intensity `8P/(π w_x w_y) exp(−2x²/w_x²)` along
/// the flight path (Simpson's rule over ±8 w_x), divides by `v` for the
/// fluence and by the photon energy `hc/λ_L`, then multiplies by σ. The
/// closed form is `n = 8σPλ_L / (√(2π) h c w_y v)`; for L12 at 1 W and
/// 85 m/s this is about 0.18.
pub fn mean_absorbed_photons(molecule: &Molecule, setup: &InterferometerSetup, velocity: f64) -> Result<f64> {
    ensure_positive("velocity", velocity)?;
    setup.validate()?;
    let wx = setup.waist_x;
    let peak = 8.0 * setup.laser_power / (PI * wx * setup.waist_y);
    let intensity = |x: f64| peak * (-2.0 * x * x / (wx * wx)).exp();
    let half_span = 8.0 * wx;
    let n = 2000;
    let h = 2.0 * half_span / n as f64;
    let mut sum = intensity(-half_span) + intensity(half_span);
    for i in 1..n {
        let x = -half_span + i as f64 * h;
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * intensity(x);
    }
    let line_integral = sum * h / 3.0;
    let fluence = line_integral / velocity;
    let photon_energy = H * C / setup.laser_wavelength;
    Ok(molecule.sigma_abs * fluence / photon_energy)
}
