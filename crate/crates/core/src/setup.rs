use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Geometry and laser parameters of a symmetric three-grating
/// interferometer whose middle grating is a retro-reflected standing light
/// wave.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerSetup {
    /// Period of all three gratings, m.
    pub period_d: f64,
    /// Slit width over period of the material gratings.
    pub open_fraction_f: f64,
    /// Distance G1→G2, equal to G2→G3, m.
    pub separation_l: f64,
    /// m; must equal `2 · period_d`.
    pub laser_wavelength: f64,
    /// W
    pub laser_power: f64,
    /// Waist along the molecular beam, m.
    pub waist_x: f64,
    /// Waist along the grating lines, m.
    pub waist_y: f64,
}

impl InterferometerSetup {
    /// d = 266 nm, s = 110 nm, L = 10.5 cm, λ = 532 nm, P = 1 W,
    /// waists 18 µm × 945 µm.
    pub fn reference() -> Self {
        Self {
            period_d: 266e-9,
            open_fraction_f: 110.0 / 266.0,
            separation_l: 0.105,
            laser_wavelength: 532e-9,
            laser_power: 1.0,
            waist_x: 18e-6,
            waist_y: 945e-6,
        }
    }

    pub fn with_power(&self, power: f64) -> Self {
        Self {
            laser_power: power,
            ..self.clone()
        }
    }

    pub fn with_separation(&self, separation: f64) -> Self {
        Self {
            separation_l: separation,
            ..self.clone()
        }
    }

    /// Open fractions of exactly 0 or 1 are accepted; the visibility
    /// functions report zero contrast for them.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSetup(msg));
        for (name, v) in [
            ("period_d", self.period_d),
            ("separation_l", self.separation_l),
            ("laser_wavelength", self.laser_wavelength),
            ("waist_x", self.waist_x),
            ("waist_y", self.waist_y),
        ] {
            if ensure_positive(name, v).is_err() {
                return invalid(format!("{name} must be positive, got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&self.open_fraction_f) {
            return invalid(format!(
                "open_fraction_f must lie in [0, 1], got {}",
                self.open_fraction_f
            ));
        }
        if !(self.laser_power.is_finite() && self.laser_power >= 0.0) {
            return invalid(format!("laser_power must be >= 0, got {}", self.laser_power));
        }
        let mismatch = (self.laser_wavelength - 2.0 * self.period_d).abs() / (2.0 * self.period_d);
        if mismatch > 1e-6 {
            return invalid(format!(
                "standing-wave period λ/2 = {} m differs from grating period {} m",
                self.laser_wavelength / 2.0,
                self.period_d
            ));
        }
        Ok(())
    }

    /// `0 < f < 1`.
    pub fn is_degenerate(&self) -> bool {
        self.open_fraction_f <= 0.0 || self.open_fraction_f >= 1.0
    }
}

impl Default for InterferometerSetup {
    fn default() -> Self {
        Self::reference()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_is_valid() {
        InterferometerSetup::reference().validate().unwrap();
    }

    #[test]
    fn standing_wave_period_must_match() {
        let mut s = InterferometerSetup::reference();
        s.laser_wavelength = 532e-9 * (1.0 + 2e-6);
        assert!(matches!(s.validate(), Err(Error::InvalidSetup(_))));
        s.laser_wavelength = 532e-9 * (1.0 + 5e-7);
        assert!(s.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let s = InterferometerSetup::reference();
        assert!(InterferometerSetup { period_d: 0.0, ..s.clone() }.validate().is_err());
        assert!(InterferometerSetup { open_fraction_f: 1.2, ..s.clone() }.validate().is_err());
        assert!(InterferometerSetup { waist_y: -1.0, ..s.clone() }.validate().is_err());
        assert!(s.with_power(-0.1).validate().is_err());
        assert!(InterferometerSetup { open_fraction_f: 0.0, ..s }.is_degenerate());
    }
}
