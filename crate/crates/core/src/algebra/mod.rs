//! Exact arithmetic: rationals, dense univariate polynomials, truncated
//! power series and series root solving.
//!
//! Everything here is exact. Nothing is ever rounded; floats only appear at
//! the boundary (`to_f64`, `eval_f64`).

mod poly;
mod rational;
mod root;
mod series;

pub use poly::{PolyOp, RatPoly};
pub use rational::{binomial, parse_rational, rat, rat_int, to_f64, Rational};
pub use root::{series_root_solve, ZetaPoly};
pub use series::{series_op, SeriesOp, TruncSeries};

use std::fmt;

/// Name of the single variable a polynomial or series is written in.
///
/// `P` is the edge reliability, `Q = 1 - P` the edge unreliability and `Z`
/// the generating-function variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    P,
    Q,
    Z,
}

impl Var {
    /// The variable obtained by the substitution `x -> 1 - x`.
    pub fn reflected(self) -> Option<Var> {
        match self {
            Var::P => Some(Var::Q),
            Var::Q => Some(Var::P),
            Var::Z => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::P => "p",
            Var::Q => "q",
            Var::Z => "z",
        })
    }
}
