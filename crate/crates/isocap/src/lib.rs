//! Isocapacitary deficit experiments on star-shaped domains.
//!
//! For an open set with the volume of the unit ball, the p-capacity of its
//! exterior problem exceeds the p-capacity of the unit ball, and the excess
//! controls the square of the asymmetry of the set. This crate measures that
//! relationship numerically for star-shaped domains in dimensions 2 and 3:
//!
//! * [`geometry`] builds star-shaped domains from radial profiles and
//!   computes volumes, barycenters and asymmetry functionals,
//! * [`capacity`] evaluates ball capacities in closed form and solves the
//!   exterior p-Dirichlet problem on a compactified grid,
//! * [`spectral`] carries the mode decomposition of a profile and the
//!   closed-form second variation of capacity at the ball,
//! * [`functionals`] has the volume penalty and truncation estimates used to
//!   reduce general domains to bounded ones,
//! * [`vecineq`] checks the pointwise vector inequalities that drive the
//!   energy comparison arguments,
//! * [`harness`] runs shape families end to end and fits deficit-vs-asymmetry
//!   power laws; `isocap` is the command-line front end.

pub mod capacity;
pub mod error;
pub mod functionals;
pub mod geometry;
pub mod harness;
pub mod numerics;
pub mod params;
pub mod shapefile;
pub mod spectral;
pub mod vecineq;

pub use capacity::{
    ball_capacity, deficit, deficit_report, perturbed_capacity, radial_potential, solve_capacity,
    CapacityResult, SolverConfig,
};
pub use error::Error;
pub use functionals::{
    f_eta, f_eta_about, penalized_cost, truncate_rescale, truncation_bounds_report, PenaltyParams,
    TruncationReport,
};
pub use geometry::{AngularGrid, StarDomain};
pub use params::{unit_ball_volume, unit_sphere_area, Params};
pub use vecineq::{
    monotonicity_gap, monotonicity_scan, power_taylor_gap, taylor_scan, IneqSample, ScanStats,
};
pub use shapefile::ShapeFile;
pub use spectral::ModeSpectrum;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
