//! `borcherds-fj`: run expansions and identity checks from a config file.

pub mod commands;
pub mod config;
pub mod report;

use borcherds_core::Error;
use clap::ValueEnum;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Fourier-Jacobi expansion via the exponential of the Theta series.
    Expand,
    /// The same expansion multiplied out from the product.
    Product,
    /// The leading exponent I0 by both routes.
    I0,
    /// One Theta_{a,n} series.
    ThetaAn,
    /// The grade-0 coefficient and its phase.
    Psi0,
    /// The classical product around the Weyl vector.
    Weyl,
    /// The full identity suite.
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Compute(#[from] Error),
}

impl CliError {
    /// 2 for anything wrong with the input, 1 when an identity fails.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(Error::Consistency(_)) => 1,
            _ => 2,
        }
    }
}
