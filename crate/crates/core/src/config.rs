//! Run configuration shared by the library pipeline and the command line.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Seed for every randomized step; recorded in reports.
    pub seed: u64,
    /// Upper bound for prime searches (Galois witnesses, transvection primes).
    pub prime_bound: u64,
    /// Largest field size `p^d` enumerated when counting points.
    pub enum_cap: u64,
    /// Run the expensive checks as well.
    pub long: bool,
    /// Worker threads for point counting.
    pub workers: usize,
    pub format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            prime_bound: 10_000,
            enum_cap: 10_000_000,
            long: false,
            workers: 1,
            format: OutputFormat::Json,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.prime_bound == 0 {
            return Err(ConfigError::NonPositive("prime bound"));
        }
        if self.enum_cap == 0 {
            return Err(ConfigError::NonPositive("enumeration cap"));
        }
        if self.workers == 0 {
            return Err(ConfigError::NonPositive("worker count"));
        }
        Ok(())
    }

    pub fn count_options(&self) -> crate::curve::CountOptions {
        crate::curve::CountOptions {
            cap: self.enum_cap,
            workers: self.workers,
            seed: self.seed,
        }
    }
}
