//! Physical constants (CODATA 2018 recommended values).
//!
//! The same table is kept in `data/constants.txt` next to the crate
//! manifest; a unit test keeps the two in sync.

use std::f64::consts::PI;

/// Recorded in every run manifest.
pub const VINTAGE: &str = "CODATA 2018";

/// Planck constant, J s (exact).
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J s. Stored as `H / 2π`.
pub const HBAR: f64 = H / (2.0 * PI);
/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;
/// Unified atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Standard acceleration of gravity, m/s².
pub const G_GRAVITY: f64 = 9.806_65;
/// Vacuum permittivity, F/m. Only needed to convert polarizability volumes
/// (m³) to SI polarizabilities (C m² / V) via `α_SI = 4π ε₀ α_vol`.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// The constants as a value, for code that wants to pass them around or
/// print them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub h: f64,
    pub hbar: f64,
    pub c: f64,
    pub amu_to_kg: f64,
    pub k_b: f64,
    pub g_gravity: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        h: H,
        hbar: HBAR,
        c: C,
        amu_to_kg: AMU,
        k_b: K_B,
        g_gravity: G_GRAVITY,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_is_h_over_two_pi() {
        assert_eq!(HBAR, H / (2.0 * PI));
        assert_eq!(PhysicalConstants::default().hbar, HBAR);
    }

    #[test]
    fn constants_file_matches_code() {
        let text = include_str!("../data/constants.txt");
        assert!(text.contains(VINTAGE));
        let mut seen = 0;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let name = parts.next().unwrap();
            let value: f64 = parts.next().unwrap().parse().unwrap();
            let expected = match name {
                "h" => H,
                "hbar" => HBAR,
                "c" => C,
                "amu" => AMU,
                "k_B" => K_B,
                "g" => G_GRAVITY,
                "epsilon_0" => EPSILON_0,
                other => panic!("unknown constant {other} in constants.txt"),
            };
            assert!(
                ((value - expected) / expected).abs() < 1e-15,
                "{name}: file {value} vs code {expected}"
            );
            seen += 1;
        }
        assert_eq!(seen, 7);
    }
}
