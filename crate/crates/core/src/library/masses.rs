use std::collections::BTreeMap;

use super::composition::{Composition, Element};
use crate::error::{Error, Result};

/// Average atomic masses in amu.
#[derive(Debug, Clone, PartialEq)]
pub struct MassTable {
    masses: BTreeMap<Element, f64>,
    provenance: String,
}

impl MassTable {
    pub fn new(masses: BTreeMap<Element, f64>, provenance: impl Into<String>) -> Result<Self> {
        for (e, m) in &masses {
            if !(m.is_finite() && *m > 0.0) {
                return Err(Error::domain(format!("mass of {e} must be positive, got {m}")));
            }
        }
        Ok(Self {
            masses,
            provenance: provenance.into(),
        })
    }

    /// IUPAC 2021 standard atomic weights (conventional values where the
    /// standard weight is an interval).
    pub fn iupac() -> Self {
        use Element::*;
        let masses = [
            (H, 1.008),
            (B, 10.81),
            (C, 12.011),
            (N, 14.007),
            (O, 15.999),
            (F, 18.998_403_162),
            (Na, 22.989_769_28),
            (Si, 28.085),
            (P, 30.973_761_998),
            (S, 32.06),
            (Cl, 35.45),
            (K, 39.0983),
            (Fe, 55.845),
            (Ni, 58.6934),
            (Cu, 63.546),
            (Zn, 65.38),
            (Br, 79.904),
            (I, 126.904_47),
        ];
        Self {
            masses: masses.into_iter().collect(),
            provenance: "IUPAC 2021 standard atomic weights, conventional values".into(),
        }
    }

    pub fn get(&self, element: Element) -> Option<f64> {
        self.masses.get(&element).copied()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn molecular_mass(&self, composition: &Composition) -> Result<f64> {
        molecular_mass(composition, self)
    }
}

impl Default for MassTable {
    fn default() -> Self {
        Self::iupac()
    }
}

/// Sum of `count × atomic mass` in amu.
pub fn molecular_mass(composition: &Composition, table: &MassTable) -> Result<f64> {
    composition.iter().try_fold(0.0, |acc, (e, n)| {
        let m = table
            .get(e)
            .ok_or_else(|| Error::MissingElement(e.symbol().to_string()))?;
        Ok(acc + n as f64 * m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::parse_formula;
    use proptest::prelude::*;

    #[test]
    fn l12_nominal_mass() {
        let l12 = parse_formula("C284H190F320N4S12").unwrap();
        let m = molecular_mass(&l12, &MassTable::iupac()).unwrap();
        assert!((m - 10_123.0).abs() < 1.0, "{m}");
    }

    #[test]
    fn tppf20_mass() {
        // 44·12.011 + 10·1.008 + 20·18.998403162 + 4·14.007
        let tppf20 = parse_formula("C44H10F20N4").unwrap();
        let m = molecular_mass(&tppf20, &MassTable::iupac()).unwrap();
        assert!((m - 974.560_063_24).abs() < 1e-9, "{m}");
    }

    #[test]
    fn empty_composition_weighs_nothing() {
        assert_eq!(molecular_mass(&Composition::new(), &MassTable::iupac()).unwrap(), 0.0);
    }

    #[test]
    fn missing_element_is_named() {
        let table = MassTable::new([(Element::C, 12.011)].into_iter().collect(), "test").unwrap();
        let err = molecular_mass(&parse_formula("CH4").unwrap(), &table).unwrap_err();
        assert!(matches!(err, Error::MissingElement(ref s) if s == "H"));
    }

    #[test]
    fn rejects_non_positive_masses() {
        assert!(MassTable::new([(Element::C, 0.0)].into_iter().collect(), "bad").is_err());
    }

    proptest! {
        #[test]
        fn mass_is_additive(a in proptest::collection::vec((0usize..18, 1u64..300), 0..6),
                            b in proptest::collection::vec((0usize..18, 1u64..300), 0..6)) {
            let ca = Composition::from_counts(a.into_iter().map(|(i, n)| (Element::ALL[i], n)));
            let cb = Composition::from_counts(b.into_iter().map(|(i, n)| (Element::ALL[i], n)));
            let t = MassTable::iupac();
            let lhs = molecular_mass(&ca.combined(&cb), &t).unwrap();
            let rhs = molecular_mass(&ca, &t).unwrap() + molecular_mass(&cb, &t).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
        }
    }
}
