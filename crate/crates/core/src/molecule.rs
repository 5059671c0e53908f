use crate::error::{ensure_non_negative, ensure_positive, Result};
use crate::library::{Composition, MassTable};

/// The particle sent through the interferometer.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    /// May be empty for particles given only by their mass.
    pub composition: Composition,
    /// amu
    pub mass: f64,
    /// Optical polarizability as a volume, m³. The SI polarizability is
    /// `4π ε₀ · alpha_opt`; 410 Å³ is stored as `410e-30`.
    pub alpha_opt: f64,
    /// Absorption cross section at the grating wavelength, m².
    pub sigma_abs: f64,
}

impl Molecule {
    pub fn new(mass: f64, alpha_opt: f64, sigma_abs: f64) -> Result<Self> {
        let m = Self {
            composition: Composition::new(),
            mass,
            alpha_opt,
            sigma_abs,
        };
        m.validate()?;
        Ok(m)
    }

    /// Mass taken from the composition.
    pub fn from_composition(
        composition: Composition,
        table: &MassTable,
        alpha_opt: f64,
        sigma_abs: f64,
    ) -> Result<Self> {
        let mass = table.molecular_mass(&composition)?;
        let m = Self {
            composition,
            mass,
            alpha_opt,
            sigma_abs,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("mass", self.mass)?;
        ensure_non_negative("alpha_opt", self.alpha_opt)?;
        ensure_non_negative("sigma_abs", self.sigma_abs)
    }

    /// Mass in kg.
    pub fn mass_kg(&self) -> f64 {
        self.mass * crate::constants::AMU
    }

    /// The 12-fold substituted fluorous porphyrin C284H190F320N4S12 with
    /// α = 410 Å³ and σ(532 nm) = 1.7e-21 m².
    pub fn fluorous_porphyrin_l12() -> Self {
        let composition = Composition::parse("C284H190F320N4S12").expect("valid formula");
        Self::from_composition(composition, &MassTable::iupac(), 410e-30, 1.7e-21)
            .expect("valid molecule")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l12_reference() {
        let m = Molecule::fluorous_porphyrin_l12();
        assert!((m.mass - 10_123.0).abs() < 1.0);
        assert_eq!(m.composition.total_atoms(), 810);
    }

    #[test]
    fn invariants() {
        assert!(Molecule::new(0.0, 1e-30, 0.0).is_err());
        assert!(Molecule::new(100.0, -1e-30, 0.0).is_err());
        assert!(Molecule::new(100.0, 0.0, -1.0).is_err());
        assert!(Molecule::new(100.0, 0.0, 0.0).is_ok());
    }
}
