//! Rationally weighted double Hurwitz numbers, computed three ways:
//! Frobenius–Schur character sums, coefficients of the hypergeometric
//! 2D Toda τ-function, and enumeration of doubly labelled constellations.

pub mod algebra;
pub mod constellation;
pub mod error;
pub mod hurwitz;
pub mod matrix_integral;
pub mod symmetric;
pub mod tau;
pub mod wire;

pub use algebra::{BetaSeries, PQKey, PQSeries, ParamPoly, Rational, VarContext};
pub use constellation::{ClassKey, Constellation, ProductOrder, Spectrum};
pub use error::{HurwitzError, Result};
pub use hurwitz::{ProfileTuple, WeightGenSpec, DEFAULT_WORK_BOUND};
pub use matrix_integral::{MatrixReport, SpectralPair};
pub use symmetric::{CharTables, Partition, Permutation};
