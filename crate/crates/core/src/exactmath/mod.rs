//! Exact scalars and truncated series.

pub mod cyclotomic;
pub mod graded;
pub mod json;
pub mod rational;
pub mod series;

pub use cyclotomic::CycRational;
pub use graded::{series_exp_graded, GradedFJSeries};
pub use rational::{int, parse_rat, rat, Rat};
pub use series::{CharKey, Difference, JacobiSeries, Term};
