use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::RatPoly;
use super::rational::Rational;
use super::Var;
use crate::error::{Error, Result};

/// Power series known exactly up to and including `var^order`.
///
/// The coefficient vector always has length `order + 1`; higher terms are
/// unknown and never reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
    var: Var,
    order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
    Log,
    Exp,
    /// `a(b(x))`
    Compose,
}

/// Uniform entry point over the series operations. Binary operations need `b`.
pub fn series_op(a: &TruncSeries, b: Option<&TruncSeries>, op: SeriesOp) -> Result<TruncSeries> {
    let need_b = || b.ok_or_else(|| Error::InvalidArgument(format!("{op:?} needs two operands")));
    match op {
        SeriesOp::Add => a.add(need_b()?),
        SeriesOp::Sub => a.sub(need_b()?),
        SeriesOp::Mul => a.mul(need_b()?),
        SeriesOp::Div => a.div(need_b()?),
        SeriesOp::Log => a.log(),
        SeriesOp::Exp => a.exp(),
        SeriesOp::Compose => a.compose(need_b()?),
    }
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<Rational>, var: Var, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncSeries { coeffs, var, order }
    }

    pub fn from_ints(coeffs: &[i64], var: Var, order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(), var, order)
    }

    pub fn zero(var: Var, order: usize) -> Self {
        Self::new(Vec::new(), var, order)
    }

    pub fn one(var: Var, order: usize) -> Self {
        Self::constant(Rational::one(), var, order)
    }

    pub fn constant(c: Rational, var: Var, order: usize) -> Self {
        Self::new(vec![c], var, order)
    }

    /// Truncation of a polynomial, same variable.
    pub fn from_poly(poly: &RatPoly, order: usize) -> Self {
        let mut coeffs = poly.coeffs().to_vec();
        coeffs.truncate(order + 1);
        Self::new(coeffs, poly.var(), order)
    }

    /// Re-expands a polynomial around the other endpoint: `P(p)` becomes a
    /// series in `q = 1 - p` (and vice versa).
    pub fn shift_from(poly: &RatPoly, order: usize) -> Result<Self> {
        Ok(Self::from_poly(&poly.reflect()?, order))
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Index of the first nonzero coefficient, `None` if zero to this order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        let order = order.min(self.order);
        Self::new(self.coeffs[..=order].to_vec(), self.var, order)
    }

    fn check(&self, other: &TruncSeries) -> Result<usize> {
        if self.var != other.var {
            return Err(Error::VarMismatch(self.var, other.var));
        }
        Ok(self.order.min(other.order))
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        let k = self.check(other)?;
        let coeffs = (0..=k).map(|j| &self.coeffs[j] + &other.coeffs[j]).collect();
        Ok(Self::new(coeffs, self.var, k))
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        let k = self.check(other)?;
        let coeffs = (0..=k).map(|j| &self.coeffs[j] - &other.coeffs[j]).collect();
        Ok(Self::new(coeffs, self.var, k))
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        let k = self.check(other)?;
        let mut out = vec![Rational::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(k + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self::new(out, self.var, k))
    }

    pub fn neg(&self) -> TruncSeries {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), self.var, self.order)
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        Self::new(self.coeffs.iter().map(|a| a * c).collect(), self.var, self.order)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<TruncSeries> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ConstantTerm { op: "inverse", expected: "!= 0" });
        }
        let inv0 = a0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for n in 1..=self.order {
            let mut s = Rational::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    s += a * &out[n - k];
                }
            }
            out.push(-s * &inv0);
        }
        Ok(Self::new(out, self.var, self.order))
    }

    pub fn div(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check(other)?;
        if other.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm { op: "division", expected: "!= 0 in the divisor" });
        }
        self.mul(&other.inv()?)
    }

    pub fn derivative(&self) -> TruncSeries {
        let coeffs = (1..=self.order).map(|k| &self.coeffs[k] * Rational::from_integer(BigInt::from(k))).collect();
        Self::new(coeffs, self.var, self.order.saturating_sub(1))
    }

    /// Antiderivative with zero constant term; gains one order.
    pub fn integral(&self) -> TruncSeries {
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / Rational::from_integer(BigInt::from(k + 1))));
        Self::new(coeffs, self.var, self.order + 1)
    }

    /// Natural logarithm; requires constant term 1.
    pub fn log(&self) -> Result<TruncSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTerm { op: "log", expected: "= 1" });
        }
        if self.order == 0 {
            return Ok(Self::zero(self.var, 0));
        }
        // log S = integral of S'/S
        let quotient = self.derivative().mul(&self.truncate(self.order - 1).inv()?)?;
        Ok(quotient.integral())
    }

    /// Exponential; requires constant term 0.
    pub fn exp(&self) -> Result<TruncSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm { op: "exp", expected: "= 0" });
        }
        // E' = S' E  =>  n e_n = sum_{k=1..n} k s_k e_{n-k}
        let mut out: Vec<Rational> = Vec::with_capacity(self.order + 1);
        out.push(Rational::one());
        for n in 1..=self.order {
            let mut s = Rational::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    s += a * Rational::from_integer(BigInt::from(k)) * &out[n - k];
                }
            }
            out.push(s / Rational::from_integer(BigInt::from(n)));
        }
        Ok(Self::new(out, self.var, self.order))
    }

    /// `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &TruncSeries) -> Result<TruncSeries> {
        let k = self.check(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm { op: "compose", expected: "= 0 in the inner series" });
        }
        let inner = inner.truncate(k);
        let mut acc = Self::zero(self.var, k);
        for c in self.coeffs[..=k].iter().rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> Result<TruncSeries> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.var, self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Drops the truncation marker and returns the known part as a polynomial.
    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.clone(), self.var)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.to_poly();
        if body.is_zero() {
            write!(f, "O({}^{})", self.var, self.order + 1)
        } else {
            write!(f, "{body} + O({}^{})", self.var, self.order + 1)
        }
    }
}
