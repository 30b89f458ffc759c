//! Continued fraction plumbing: exact slope values, convergents, intervals, digit extraction.

pub mod convergents;
pub mod extract;
pub mod interval;
pub mod slope;
pub mod surd;

pub use convergents::{convergents, theta_interval, Convergents};
pub use extract::{cf_extract, rational_cf};
pub use interval::{Dyadic, RealInterval};
pub use slope::{QuadraticSurd, SlopeCursor, SlopeSource, SlopeSpec};
pub use surd::SurdSum;
