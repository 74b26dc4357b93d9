//! Exact f-divergences and Csiszár dependence indices on finite discrete
//! distributions, with checkerboard and interpolating copulas.

pub mod checks;
pub mod cli;
pub mod copulas;
pub mod corpus;
pub mod csiszar;
pub mod divergence;
pub mod error;
pub mod generators;
pub mod measures;
pub mod numeric;

pub use error::{Error, Result};
pub use generators::{builtin, BuiltinKind, Generator};
pub use numeric::ExtReal;
