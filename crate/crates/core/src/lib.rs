//! Simulation of a Kapitza-Dirac-Talbot-Lau matter-wave interferometer.
//!
//! * [`physics`]: de Broglie and Talbot lengths, the optical phase grating,
//!   quantum and classical fringe visibility, velocity averaging.
//! * [`library`]: formula arithmetic for substitution libraries and mass
//!   spectrum peak assignment.
//! * [`beam`]: effusive source, gravitational velocity selection, flux
//!   estimates, and a classical trajectory Monte Carlo.
//! * [`scan`]: synthetic interferograms and fixed-period sinusoid fits.
//! * [`commands`]: the config-driven experiments behind the `kdtl` binary.

pub mod beam;
pub mod bessel;
pub mod commands;
pub mod config;
pub mod constants;
mod error;
pub mod io;
pub mod library;
mod molecule;
pub mod physics;
mod rng;
pub mod scan;
mod setup;
mod velocity;

pub use error::{Error, Result};
pub use molecule::Molecule;
pub use physics::VisibilityModel;
pub use setup::InterferometerSetup;
pub use velocity::VelocityDistribution;
