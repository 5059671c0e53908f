//! Gravitational velocity selection of an effusive beam, followed by the
//! source flux and interferometer density estimate.
//!
//! ```bash
//! cargo run --release --example velocity_selection
//! ```

use kdtl::beam::{
    estimate_flux_density, DelimiterGeometry, SelectionRun, SourceConfig, DEFAULT_BIN_WIDTH,
};

fn main() -> kdtl::Result<()> {
    let source = SourceConfig::reference();
    let geometry = DelimiterGeometry::reference();
    let run = SelectionRun::run(&source, &geometry, 1_000_000, 2013)?;
    let dist = run.distribution(DEFAULT_BIN_WIDTH)?;

    println!(
        "launched {} molecules at {} K, {} passed ({:.3}%)",
        run.launched,
        source.temperature,
        run.survivors.len(),
        100.0 * run.transmission()
    );
    println!("selected mean velocity {:.1} m/s", dist.mean());
    println!("selected FWHM          {:.1} m/s", dist.fwhm()?);

    let estimate = estimate_flux_density(&source, dist.mean(), 1.0, 1.47e-9)?;
    println!("source flux            {:.2e} /s", estimate.flux);
    println!("density                {:.1} /mm^3", estimate.density);
    println!("mean spacing           {:.0} um", estimate.mean_spacing);

    println!("\n v [m/s]  weight");
    for (v, w) in dist.samples() {
        if *w > 0.0 {
            println!("{v:8.1}  {}", "#".repeat((*w / 20.0).ceil() as usize));
        }
    }
    Ok(())
}
