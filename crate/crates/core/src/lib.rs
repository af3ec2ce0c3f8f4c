//! Generating functions of multiple divisor sums ("brackets") over exact
//! rationals: series, the quasi-shuffle algebra they satisfy, the derivation
//! `q d/dq`, linear relations and dimension counts, Eisenstein series and the
//! limits `q -> 1` that land in multiple zeta values.

pub mod brackets;
pub mod composition;
pub mod derivation;
pub mod error;
pub mod exactnum;
pub mod linrel;
pub mod modular;
pub mod mzvlimit;
pub mod qseries;
pub mod quasishuffle;
pub mod relation;
pub mod wordsum;

pub use composition::Composition;
pub use error::{Error, Result};
pub use exactnum::Rational;
pub use qseries::QSeries;
pub use quasishuffle::OnePolynomial;
pub use relation::{Provenance, Relation, Status};
pub use wordsum::WordSum;
