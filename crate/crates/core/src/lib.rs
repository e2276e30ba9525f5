//! Exact symbolic machinery for l-weights of the quantum loop algebras of
//! `sl2` and `sl3`: affine q-exponents, rational functions of linear factors,
//! closed-form module catalogs, truncated q-characters and the bookkeeping
//! behind the factorization of transfer operators into Q-operators.

pub mod catalog;
pub mod factorization;
pub mod lie;
pub mod qchar;
pub mod report;
pub mod symbolic;

pub use num::BigRational;
