//! Gaussian beam propagation through waveguides with gain and loss.
//!
//! Three propagators for the paraxial wave equation with a complex potential:
//!
//! * [`gaussian`]: the five-parameter semiclassical Gaussian dynamics,
//!   integrated with fixed-step RK4;
//! * [`oracle`]: closed-form solutions for the quadratic potential with a
//!   linear gain/loss slope, where the Gaussian ansatz is exact;
//! * [`grid`]: a split-operator spectral solver used as the numerically
//!   exact reference.
//!
//! [`harness`] wires them to scenario files, CSV output and comparisons.

pub mod error;
pub mod gaussian;
pub mod grid;
pub mod harness;
pub mod oracle;
pub mod potential;

pub use error::{DynamicsError, GridError, HarnessError, OracleError, PotentialError};
pub use gaussian::{GaussianParams, Trajectory};
pub use grid::{GridSpec, GridState};
pub use num_complex::Complex64;
pub use potential::{PhysicalConstants, Potential, PotentialSample};

/// Version string recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
