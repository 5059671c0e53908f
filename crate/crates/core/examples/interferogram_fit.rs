//! Simulated detector counts behind the third grating and the
//! fixed-period sinusoid fit, then a small seed ensemble.
//!
//! ```bash
//! cargo run --release --example interferogram_fit
//! ```

use kdtl::physics::visibility_averaged;
use kdtl::scan::{fit_scan, synthesize_scan, uniform_positions};
use kdtl::{InterferometerSetup, Molecule, VelocityDistribution, VisibilityModel};

fn main() -> kdtl::Result<()> {
    let setup = InterferometerSetup::reference();
    let molecule = Molecule::fluorous_porphyrin_l12();
    let dist = VelocityDistribution::gaussian(85.0, 30.0, 401)?;
    let truth = visibility_averaged(&setup, &molecule, &dist, VisibilityModel::Quantum)?;

    let period = setup.period_d * 1e9;
    let z = uniform_positions(period, 40, 2.0);
    let scan = synthesize_scan(truth, period, 1.0, 250.0, 25.0, &z, 1)?;
    print!("{}", scan.to_csv());
    let fit = fit_scan(&scan)?;
    println!(
        "\ntrue V {truth:.4}, fitted {:.4} +- {:.4}, phase {:.3} rad",
        fit.visibility, fit.uncertainty, fit.phase
    );

    let vs: Vec<f64> = (0..200)
        .map(|seed| fit_scan(&synthesize_scan(truth, period, 1.0, 250.0, 25.0, &z, seed)?).map(|f| f.visibility))
        .collect::<kdtl::Result<_>>()?;
    let mean = vs.iter().sum::<f64>() / vs.len() as f64;
    let sd = (vs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vs.len() - 1) as f64).sqrt();
    println!("200 seeds: mean {mean:.4}, spread {sd:.4}");
    Ok(())
}
