//! Molecular beam: effusive source, gravitational velocity selection,
//! flux and density estimates, and the classical trajectory oracle for the
//! shadow-image visibility.

mod flux;
mod oracle;
mod selection;
mod source;

pub use flux::{estimate_flux_density, BeamEstimate};
pub use oracle::{classical_mc_visibility, McVisibility, MIN_ORACLE_SAMPLES};
pub use selection::{
    simulate_velocity_selection, Aperture, DelimiterGeometry, SelectionRun, TrajectorySample,
    DEFAULT_BIN_WIDTH, MIN_SELECTION_SAMPLES,
};
pub use source::{effusive_draws, most_probable_velocity, sample_effusive_velocity, SourceConfig};
