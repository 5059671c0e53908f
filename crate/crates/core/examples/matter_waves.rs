//! De Broglie wavelength, Talbot length and the optical phase for the
//! 10 123 amu fluorous porphyrin, plus the absorbed-photon estimate.
//!
//! ```bash
//! cargo run --example matter_waves
//! ```

use kdtl::physics::{de_broglie_wavelength, max_phase_shift, mean_absorbed_photons, talbot_length};
use kdtl::{InterferometerSetup, Molecule};

fn main() -> kdtl::Result<()> {
    let molecule = Molecule::fluorous_porphyrin_l12();
    let setup = InterferometerSetup::reference();
    println!("{} at {:.2} amu", molecule.composition, molecule.mass);
    println!(
        "\n{:>7} {:>10} {:>9} {:>7} {:>7} {:>7}",
        "v [m/s]", "lambda[fm]", "L_T [mm]", "L/L_T", "Phi0", "photons"
    );
    for v in [60.0, 70.0, 85.0, 100.0, 120.0, 150.0] {
        let lambda = de_broglie_wavelength(molecule.mass, v)?;
        let l_t = talbot_length(setup.period_d, lambda)?;
        println!(
            "{v:>7.0} {:>10.1} {:>9.2} {:>7.3} {:>7.3} {:>7.3}",
            lambda * 1e15,
            l_t * 1e3,
            setup.separation_l / l_t,
            max_phase_shift(&molecule, &setup, v)?,
            mean_absorbed_photons(&molecule, &setup, v)?
        );
    }
    Ok(())
}
