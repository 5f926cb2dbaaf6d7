//! Single-photon scattering of a giant atom chirally coupled to a
//! one-dimensional waveguide at several equally spaced points.
//!
//! - [`model`]: couplings, phases and regime classification
//! - [`scattering`]: Lamb shift, directional decay rates and amplitudes
//! - [`regime`]: closed forms for special coupling patterns and phases
//! - [`windows`]: numerical detection of total-reflection windows
//! - [`oracle`]: amplitudes from a direct boundary-matching linear solve
//! - [`sweep`], [`config_file`], [`verify`]: parameter scans, CSV and
//!   self-checks used by the command-line tool

pub mod config_file;
pub mod error;
pub mod model;
pub mod oracle;
pub mod regime;
pub mod scattering;
pub mod sweep;
pub mod verify;
pub mod windows;

pub use error::{Error, Result};
pub use model::{
    classify_regime, normalize_phase, phase_between, CouplingConfig, CouplingPoint, PhaseModel,
    RegimeLabel,
};
pub use oracle::{solve_oracle, solve_oracle_both, Direction, OracleSolution};
pub use scattering::{contrast_ratio, rates, scatter, Rates, SpectralPoint};
