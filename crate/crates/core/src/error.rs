use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("invalid potential parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("potential is not finite at x = {x}")]
    NonFinite { x: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    /// Im(b) <= 0: the Gaussian is no longer normalizable.
    #[error("width collapse (Im b <= 0) at z = {z}")]
    WidthCollapse { z: f64 },
    #[error("non-finite beam parameters at z = {z}")]
    NonFinite { z: f64 },
    #[error("width collapse: Im b = {im_b} is not positive")]
    NonNormalizable { im_b: f64 },
    #[error("invalid integration input: {0}")]
    InvalidInput(String),
}

impl DynamicsError {
    /// Propagation distance reached before the abort, if any.
    pub fn reached_z(&self) -> Option<f64> {
        match self {
            Self::WidthCollapse { z } | Self::NonFinite { z } => Some(*z),
            Self::NonNormalizable { .. } | Self::InvalidInput(_) => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    InvalidSpec(String),
    #[error("invalid propagation input: {0}")]
    InvalidInput(String),
    #[error("non-finite amplitudes at z = {z} (gain overflow?)")]
    NonFinite { z: f64 },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("quadrature failed: non-finite integrand at s = {s}")]
    NonFiniteIntegrand { s: f64 },
    #[error("quadrature did not reach tolerance on [{a}, {b}]")]
    NotConverged { a: f64, b: f64 },
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{propagator} propagator aborted: {message}")]
    Numerical {
        propagator: String,
        reached_z: Option<f64>,
        message: String,
    },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 1,
            Self::Numerical { .. } => 2,
            Self::Io { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<PotentialError> for HarnessError {
    fn from(e: PotentialError) -> Self {
        Self::Config(e.to_string())
    }
}
