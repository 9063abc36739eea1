pub mod arith;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod finite_field;
pub mod polynomials;
pub mod residue_symbols;
pub mod statistics;
pub mod traces;

pub use error::{Error, Result};
