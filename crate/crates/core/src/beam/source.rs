use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::constants::{AMU, K_B};
use crate::error::{ensure_positive, Result};
use crate::rng::substream;

/// Thermal (Knudsen cell) source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    /// K
    pub temperature: f64,
    /// amu
    pub molecule_mass: f64,
    /// Material evaporated over `duration`, kg.
    pub evaporated_mass: f64,
    /// s
    pub duration: f64,
}

impl SourceConfig {
    /// 600 K, L12 mass, 80 mg over 45 minutes.
    pub fn reference() -> Self {
        Self {
            temperature: 600.0,
            molecule_mass: 10_123.0,
            evaporated_mass: 80e-6,
            duration: 45.0 * 60.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("temperature", self.temperature)?;
        ensure_positive("molecule mass", self.molecule_mass)?;
        ensure_positive("evaporated mass", self.evaporated_mass)?;
        ensure_positive("duration", self.duration)
    }

    /// `kT/m` in m²/s².
    pub(crate) fn thermal_scale(&self) -> f64 {
        K_B * self.temperature / (self.molecule_mass * AMU)
    }
}

/// Mode of the flux-weighted distribution `v³ exp(−mv²/2kT)`: `√(3kT/m)`.
pub fn most_probable_velocity(temperature: f64, mass: f64) -> Result<f64> {
    ensure_positive("temperature", temperature)?;
    ensure_positive("mass", mass)?;
    Ok((3.0 * K_B * temperature / (mass * AMU)).sqrt())
}

/// For the flux-weighted distribution, `v²` is Gamma(2, 2kT/m), i.e.
/// `2kT/m` times the sum of two unit exponentials.
pub(crate) fn draw<R: Rng + ?Sized>(thermal_scale: f64, rng: &mut R) -> f64 {
    let e1: f64 = rng.sample(Exp1);
    let e2: f64 = rng.sample(Exp1);
    (2.0 * thermal_scale * (e1 + e2)).sqrt()
}

/// One speed from the effusive beam at temperature `T` (K) for a molecule
/// of `mass` amu.
pub fn sample_effusive_velocity(temperature: f64, mass: f64, seed: u64) -> Result<f64> {
    Ok(effusive_draws(temperature, mass, 1, seed)?[0])
}

/// `n` effusive speeds, block-parallel and reproducible for a given seed.
pub fn effusive_draws(temperature: f64, mass: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    ensure_positive("temperature", temperature)?;
    ensure_positive("mass", mass)?;
    use rayon::prelude::*;
    let scale = K_B * temperature / (mass * AMU);
    let chunks: Vec<Vec<f64>> = crate::rng::blocks(n)
        .into_par_iter()
        .map(|(b, count)| {
            let mut rng = substream(seed, b);
            (0..count).map(|_| draw(scale, &mut rng)).collect()
        })
        .collect();
    Ok(chunks.concat())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_of_l12_at_600_k() {
        let vp = most_probable_velocity(600.0, 10_123.0).unwrap();
        assert!((vp - 38.45).abs() < 0.05, "{vp}");
    }

    #[test]
    fn histogram_mode_matches_analytic() {
        let vp = most_probable_velocity(600.0, 10_123.0).unwrap();
        let draws = effusive_draws(600.0, 10_123.0, 1_000_000, 3).unwrap();
        let width = 1.0;
        let mut bins = vec![0u32; 200];
        for v in &draws {
            let k = (v / width) as usize;
            if k < bins.len() {
                bins[k] += 1;
            }
        }
        // smooth over ±3 bins before locating the peak
        let smooth: Vec<f64> = (0..bins.len())
            .map(|i| {
                let lo = i.saturating_sub(3);
                let hi = (i + 3).min(bins.len() - 1);
                bins[lo..=hi].iter().map(|&c| c as f64).sum::<f64>() / (hi - lo + 1) as f64
            })
            .collect();
        let peak = smooth
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let mode = (peak as f64 + 0.5) * width;
        assert!((mode / vp - 1.0).abs() < 0.05, "mode {mode} vs {vp}");
    }

    #[test]
    fn moments_match_flux_weighted_maxwellian() {
        // E[v] = (3/4)√(2π kT/m), E[v²] = 4kT/m
        let source = SourceConfig::reference();
        let a = source.thermal_scale();
        let draws = effusive_draws(600.0, 10_123.0, 400_000, 11).unwrap();
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let mean_sq = draws.iter().map(|v| v * v).sum::<f64>() / n;
        let expected_mean = 0.75 * (2.0 * std::f64::consts::PI * a).sqrt();
        assert!((mean / expected_mean - 1.0).abs() < 3e-3, "{mean} vs {expected_mean}");
        assert!((mean_sq / (4.0 * a) - 1.0).abs() < 5e-3);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = effusive_draws(600.0, 1000.0, 20_000, 42).unwrap();
        let b = effusive_draws(600.0, 1000.0, 20_000, 42).unwrap();
        let c = effusive_draws(600.0, 1000.0, 20_000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(sample_effusive_velocity(600.0, 1000.0, 42).unwrap(), a[0]);
    }

    #[test]
    fn velocity_scale_goes_as_root_temperature() {
        let cold = effusive_draws(300.0, 1000.0, 1000, 5).unwrap();
        let hot = effusive_draws(1200.0, 1000.0, 1000, 5).unwrap();
        for (c, h) in cold.iter().zip(&hot) {
            assert!((h / c - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_physical_inputs() {
        assert!(sample_effusive_velocity(0.0, 1.0, 1).is_err());
        assert!(sample_effusive_velocity(300.0, -1.0, 1).is_err());
        let mut s = SourceConfig::reference();
        s.duration = 0.0;
        assert!(s.validate().is_err());
    }
}
