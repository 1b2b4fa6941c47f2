//! Phase shifts induced on a separated-arm atom interferometer by a wire test
//! mass, for Newtonian, Yukawa and extra-dimension gravity, and the exclusion
//! limits on the coupling strength that follow from a phase detection
//! threshold.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: constants, beam/wire/geometry parameters, scenarios
//! - [`quadrature`]: adaptive Gauss-Kronrod integration
//! - [`specfun`]: `K0` and the `2F1(1/2, (n+1)/2; 3/2; -z^2)` family
//! - [`potentials`]: wire potentials felt by the probe atom
//! - [`interferometer`]: path phases and two-arm phase differences
//! - [`limits`]: exclusion limits, λ scans and wire-distance optimisation
//! - [`io`]: configuration files, curve CSVs and the command-line front end

pub mod error;
pub mod interferometer;
pub mod io;
pub mod limits;
pub mod model;
pub mod potentials;
pub mod quadrature;
pub mod selfcheck;
pub mod specfun;

pub use error::{Error, Result};
pub use interferometer::{PhaseMethod, PhaseResult};
pub use limits::{ExclusionCurve, ModelFamily, ScanSpec};
pub use model::{
    BeamParams, Flagged, InterferometerGeometry, PhysicalConstants, PotentialModel, Scenario,
    Warning, WireParams,
};
pub use quadrature::QuadratureSettings;
