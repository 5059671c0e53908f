//! Builds the fluorous porphyrin library from its data file and assigns
//! the MALDI peak list.
//!
//! ```bash
//! cargo run --example molecular_library [library.toml] [peaks.csv]
//! ```

use std::path::PathBuf;

use kdtl::library::{assign_peaks, build_library, load_peaks, MolecularLibrary};

fn main() -> kdtl::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut args = std::env::args().skip(1).map(PathBuf::from);
    let lib_path = args.next().unwrap_or_else(|| data.join("library.toml"));
    let peak_path = args.next().unwrap_or_else(|| data.join("maldi_peaks.csv"));

    let (lib, table) = MolecularLibrary::load(&lib_path)?;
    let members = build_library(&lib, &table)?;
    println!("{}: step {:.4} amu", lib.name, lib.mass_step(&table)?);
    for m in &members {
        println!("{:>3}  {:<22} {:>10.2}  {:>4} atoms", m.n, m.composition, m.mass, m.composition.total_atoms());
    }

    println!("\n    m/z  int   n  residual");
    for a in assign_peaks(&members, &load_peaks(&peak_path)?, 15.0)? {
        let n = a.n.map_or_else(|| format!("({})", a.nearest_n), |n| n.to_string());
        println!("{:>7} {:>4} {:>4} {:>+9.2}", a.mz, a.intensity, n, a.residual);
    }
    Ok(())
}
