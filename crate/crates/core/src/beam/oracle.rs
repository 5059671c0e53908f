//! Classical shadow-image oracle.
//!
//! Ballistic particles leave the slits of G1, receive a transverse kick at
//! the standing light wave, and are counted behind G3 as G3 is stepped
//! over one period. The kick uses the impulse (thin grating)
//! approximation: a particle at height `z` in G2 picks up
//! `Δv_z = (ħ/m) ∂Φ/∂z` with `Φ` the imprinted phase profile. Nothing in
//! here evaluates the closed-form visibility, so the two can be compared.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use crate::constants::HBAR;
use crate::error::{ensure_positive, Error, Result};
use crate::molecule::Molecule;
use crate::physics::max_phase_shift;
use crate::rng::{blocks, substream};
use crate::scan::{fit_scan, FringeScan};
use crate::setup::InterferometerSetup;

pub const MIN_ORACLE_SAMPLES: usize = 100_000;
/// G3 positions per period.
const SCAN_POINTS: usize = 32;
/// The angular spread illuminates this many G2 periods; an integer keeps
/// the illumination exactly uniform modulo d.
const ILLUMINATED_PERIODS: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McVisibility {
    pub visibility: f64,
    /// Standard error from the spread of per-block estimates.
    pub std_error: f64,
    pub samples: usize,
}

pub fn classical_mc_visibility(
    setup: &InterferometerSetup,
    molecule: &Molecule,
    velocity: f64,
    n_samples: usize,
    seed: u64,
) -> Result<McVisibility> {
    setup.validate()?;
    ensure_positive("velocity", velocity)?;
    if n_samples < MIN_ORACLE_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: n_samples,
            min: MIN_ORACLE_SAMPLES,
        });
    }
    if setup.is_degenerate() {
        log::warn!("open fraction {} blocks all fringes", setup.open_fraction_f);
        return Ok(McVisibility {
            visibility: 0.0,
            std_error: 0.0,
            samples: n_samples,
        });
    }

    let d = setup.period_d;
    let f = setup.open_fraction_f;
    let l = setup.separation_l;
    let k_light = 2.0 * PI / setup.laser_wavelength;
    let phi0 = max_phase_shift(molecule, setup, velocity)?;
    // Φ = Φ₀ sin²(k z)  ⇒  ∂Φ/∂z = Φ₀ k sin(2kz)
    let kick_scale = HBAR / molecule.mass_kg() * phi0 * k_light;
    let spread = ILLUMINATED_PERIODS * d;
    let window = f * d;
    let scan_step = d / SCAN_POINTS as f64;

    let per_block: Vec<[u64; SCAN_POINTS]> = blocks(n_samples)
        .into_par_iter()
        .map(|(b, count)| {
            let mut rng = substream(seed, b);
            let mut hits = [0u64; SCAN_POINTS];
            for _ in 0..count {
                let z1 = window * rng.random::<f64>();
                let drift = spread * (rng.random::<f64>() - 0.5);
                let z2 = z1 + drift;
                let kick = kick_scale * (2.0 * k_light * z2).sin();
                let z3 = z2 + drift + kick / velocity * l;
                let phase_in_period = z3.rem_euclid(d);
                for (j, h) in hits.iter_mut().enumerate() {
                    if (phase_in_period - j as f64 * scan_step).rem_euclid(d) < window {
                        *h += 1;
                    }
                }
            }
            hits
        })
        .collect();

    let positions: Vec<f64> = (0..SCAN_POINTS).map(|j| j as f64 * scan_step * 1e9).collect();
    let contrast = |counts: Vec<u64>| -> Result<f64> {
        let scan = FringeScan::new(positions.clone(), counts, 0.0, d * 1e9)?;
        Ok(fit_scan(&scan)?.visibility)
    };

    let mut total = [0u64; SCAN_POINTS];
    for hits in &per_block {
        for (t, h) in total.iter_mut().zip(hits) {
            *t += h;
        }
    }
    let visibility = contrast(total.to_vec())?;

    let block_values = per_block
        .iter()
        .map(|h| contrast(h.to_vec()))
        .collect::<Result<Vec<f64>>>()?;
    let nb = block_values.len() as f64;
    let mean = block_values.iter().sum::<f64>() / nb;
    let var = block_values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nb - 1.0);
    Ok(McVisibility {
        visibility,
        std_error: (var / nb).sqrt(),
        samples: n_samples,
    })
}
