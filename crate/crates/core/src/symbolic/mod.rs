//! Exact arithmetic for q-exponents, weights, rational functions of linear
//! factors and l-weights. Every type is kept in a canonical form, so derived
//! `Eq`/`Ord`/`Hash` are mathematical equality and ordering is deterministic.

mod exponent;
mod lweight;
mod rational;
mod weight;

pub use exponent::{rat, ratio, AffineExponent, Symbol};
pub use lweight::LWeight;
pub use rational::{LinearFactor, RationalFunction};
pub use weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("symbol {0} is not bound")]
    Unbound(Symbol),
}
