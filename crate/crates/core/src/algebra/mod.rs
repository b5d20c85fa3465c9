//! Exact scalars, parameter polynomials, truncated β-series and the
//! double power-sum series ring.

pub mod poly;
pub mod pq;
pub mod rational;
pub mod series;

pub use poly::{poly_mul, ParamPoly, VarContext};
pub use pq::{pq_exp, pq_log, pq_mul, PQKey, PQSeries};
pub use rational::Rational;
pub use series::{series_mul, BetaSeries};
