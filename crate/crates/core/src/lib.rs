//! Continued fraction expansions of values of the Hecke-Mahler series at `(1/b, 1/a)`,
//! built from Ostrowski digits of the intercept, with the matching irrationality exponents.

pub mod cf_core;
pub mod error;
pub mod ostrowski;

pub use error::{Error, Result};
pub mod field;
pub mod words;
pub mod approximants;
pub mod expansion;
pub mod logmag;
pub mod analysis;
pub mod report;
pub mod checks;
pub mod cli;
