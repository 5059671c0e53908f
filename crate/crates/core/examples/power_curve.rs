//! Quantum and classical visibility against laser power for a Gaussian
//! velocity distribution, and the optimum power of each.
//!
//! ```bash
//! cargo run --release --example power_curve [mean] [fwhm]
//! ```

use kdtl::physics::{optimal_power, power_scan};
use kdtl::{InterferometerSetup, Molecule, VelocityDistribution, VisibilityModel};

fn main() -> kdtl::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("number"));
    let mean = args.next().unwrap_or(85.0);
    let fwhm = args.next().unwrap_or(30.0);

    let setup = InterferometerSetup::reference();
    let molecule = Molecule::fluorous_porphyrin_l12();
    let dist = VelocityDistribution::gaussian(mean, fwhm, 401)?;
    let powers: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    let q = power_scan(&setup, &molecule, &dist, &powers, VisibilityModel::Quantum)?;
    let c = power_scan(&setup, &molecule, &dist, &powers, VisibilityModel::Classical)?;

    println!("velocity {mean} m/s, FWHM {fwhm} m/s\n");
    println!(" P [W]  quantum  classical");
    for ((p, vq), (_, vc)) in q.iter().zip(&c) {
        println!("{p:6.2}  {vq:7.4}  {vc:9.4}  {}", "*".repeat((vq * 60.0) as usize));
    }
    for model in [VisibilityModel::Quantum, VisibilityModel::Classical] {
        let (p, v) = optimal_power(&setup, &molecule, &dist, model, 2.0)?;
        println!("{model:>9} optimum: V = {v:.4} at {p:.3} W");
    }
    Ok(())
}
