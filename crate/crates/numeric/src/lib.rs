//! Finite-matrix realizations of transfer matrices and Q-operators for the
//! sl2 loop algebra on `n` spin-1/2 sites, and the numeric checks of their
//! factorization.
//!
//! Infinite-dimensional auxiliary spaces (Verma modules, q-oscillator Fock
//! spaces) are truncated to a finite cutoff. Every relation and intertwiner
//! equation is imposed and checked only on the interior of the truncation,
//! and the twisted trace is convergent so the discarded tail is small.

pub mod checks;
pub mod intertwiner;
pub mod params;
pub mod rep;
pub mod transfer;

pub use num_complex::Complex64;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("config parse error: {0}")]
    Config(#[from] toml::de::Error),
    #[error("representation {name}: relation residual {residual:e} exceeds {tol:e}")]
    Relation { name: String, residual: f64, tol: f64 },
    #[error("intertwiner solution space has dimension > 1 (gap {gap:e})")]
    Degenerate { gap: f64 },
    #[error("intertwiner system is inconsistent (smallest singular value {sigma:e})")]
    NoSolution { sigma: f64 },
    #[error("intertwiner normalization entry vanishes")]
    Normalization,
}

pub type Result<T> = std::result::Result<T, NumericError>;
