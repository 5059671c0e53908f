//! Trajectory Monte Carlo of the classical moiré signal against the
//! closed-form classical visibility.
//!
//! ```bash
//! cargo run --release --example classical_oracle
//! ```

use kdtl::beam::classical_mc_visibility;
use kdtl::physics::visibility_monochromatic;
use kdtl::{InterferometerSetup, Molecule, VisibilityModel};

fn main() -> kdtl::Result<()> {
    let molecule = Molecule::fluorous_porphyrin_l12();
    println!(" P [W]  Monte Carlo           formula   quantum");
    for p in [0.25, 0.5, 1.0, 1.5] {
        let setup = InterferometerSetup::reference().with_power(p);
        let mc = classical_mc_visibility(&setup, &molecule, 85.0, 1_000_000, 7)?;
        let formula = visibility_monochromatic(&setup, &molecule, 85.0, VisibilityModel::Classical)?;
        let quantum = visibility_monochromatic(&setup, &molecule, 85.0, VisibilityModel::Quantum)?;
        println!(
            "{p:6.2}  {:.4} +- {:.4}     {formula:.4}    {quantum:.4}",
            mc.visibility, mc.std_error
        );
    }
    Ok(())
}
