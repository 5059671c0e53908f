use super::source::SourceConfig;
use crate::constants::AMU;
use crate::error::{ensure_positive, Error, Result};

/// Source flux and the resulting particle density in the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamEstimate {
    /// particles/s
    pub flux: f64,
    /// particles/mm³
    pub density: f64,
    /// Mean particle distance `density^(−1/3)`, µm.
    pub mean_spacing: f64,
}

impl BeamEstimate {
    /// Spacing in µm for a density in mm⁻³.
    pub fn spacing_for_density(density: f64) -> f64 {
        1e3 * density.powf(-1.0 / 3.0)
    }
}

/// * flux = evaporated mass / (molecule mass · duration)
/// * density = flux · transmission / (v · area), v in mm/s, area in mm²
/// * spacing = density^(−1/3)
pub fn estimate_flux_density(
    source: &SourceConfig,
    mean_velocity: f64,
    beam_area: f64,
    transmission: f64,
) -> Result<BeamEstimate> {
    source.validate()?;
    ensure_positive("mean velocity", mean_velocity)?;
    ensure_positive("beam area", beam_area)?;
    if !(transmission > 0.0 && transmission <= 1.0) {
        return Err(Error::domain(format!("transmission must lie in (0, 1], got {transmission}")));
    }
    let flux = source.evaporated_mass / (source.molecule_mass * AMU * source.duration);
    let velocity_mm = mean_velocity * 1e3;
    let density = flux * transmission / (velocity_mm * beam_area);
    Ok(BeamEstimate {
        flux,
        density,
        mean_spacing: BeamEstimate::spacing_for_density(density),
    })
}
