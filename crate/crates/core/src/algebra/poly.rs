use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use super::Var;
use crate::error::{Error, Result};

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[k]` multiplies `var^k`. Trailing zeros are always trimmed, so the
/// zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
    var: Var,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>, var: Var) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs, var }
    }

    pub fn from_ints(coeffs: &[i64], var: Var) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(), var)
    }

    pub fn zero(var: Var) -> Self {
        RatPoly { coeffs: Vec::new(), var }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(Rational::one(), var)
    }

    pub fn constant(c: Rational, var: Var) -> Self {
        Self::new(vec![c], var)
    }

    /// `c * var^k`
    pub fn monomial(c: Rational, k: usize, var: Var) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs, var)
    }

    /// The polynomial `var` itself.
    pub fn x(var: Var) -> Self {
        Self::monomial(Rational::one(), 1, var)
    }

    /// `1 - var`
    pub fn one_minus_x(var: Var) -> Self {
        Self::from_ints(&[1, -1], var)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_var(&self, other: &RatPoly) -> Result<()> {
        if self.var != other.var {
            Err(Error::VarMismatch(self.var, other.var))
        } else {
            Ok(())
        }
    }

    pub fn arith(&self, other: &RatPoly, op: PolyOp) -> Result<RatPoly> {
        self.check_var(other)?;
        Ok(match op {
            PolyOp::Add => self.zip_with(other, |a, b| a + b),
            PolyOp::Sub => self.zip_with(other, |a, b| a - b),
            PolyOp::Mul => RatPoly::new(convolve(&self.coeffs, &other.coeffs), self.var),
        })
    }

    fn zip_with(&self, other: &RatPoly, f: impl Fn(&Rational, &Rational) -> Rational) -> RatPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        let coeffs =
            (0..len).map(|k| f(self.coeffs.get(k).unwrap_or(&zero), other.coeffs.get(k).unwrap_or(&zero))).collect();
        RatPoly::new(coeffs, self.var)
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect(), self.var)
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        let mut acc = RatPoly::one(self.var);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `var^k * self`
    pub fn shift_up(&self, k: usize) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly::new(coeffs, self.var)
    }

    pub fn derivative(&self) -> RatPoly {
        let coeffs =
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(BigInt::from(k))).collect();
        RatPoly::new(coeffs, self.var)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates at a float argument without cancellation error: the argument
    /// is converted to its exact dyadic rational, the polynomial is evaluated
    /// exactly, and only the result is rounded.
    pub fn eval_f64(&self, x: f64) -> f64 {
        match Rational::from_float(x) {
            Some(r) => super::to_f64(&self.eval(&r)),
            None => f64::NAN,
        }
    }

    /// Substitutes `var -> 1 - var'` where `var'` is the reflected variable
    /// (`p <-> q`).
    pub fn reflect(&self) -> Result<RatPoly> {
        let target =
            self.var.reflected().ok_or_else(|| Error::InvalidArgument("cannot reflect a z-polynomial".into()))?;
        let base = RatPoly::one_minus_x(target);
        let mut acc = RatPoly::zero(target);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &base) + &RatPoly::constant(c.clone(), target);
        }
        Ok(acc)
    }

    /// Polynomial long division; fails on a zero divisor.
    pub fn div_rem(&self, den: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        self.check_var(den)?;
        let dd = den.degree().ok_or(Error::DivisionByZero)?;
        let lead = &den.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(self.var), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in den.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((RatPoly::new(quot, self.var), RatPoly::new(rem, self.var)))
    }

    /// Quotient of an exact division; a nonzero remainder is an error.
    pub fn exact_div(&self, den: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.div_rem(den)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonzeroRemainder)
        }
    }

    /// Sum of coefficients, i.e. the value at `var = 1`.
    pub fn coeff_sum(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

fn all_integral(a: &[Rational]) -> bool {
    a.iter().all(|c| c.denom().is_one())
}

/// Product of two dense coefficient lists. Integer inputs take a BigInt path
/// that skips the gcd normalisation rational multiplication would do.
fn convolve(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if all_integral(a) && all_integral(b) {
        let ai: Vec<&BigInt> = a.iter().map(|c| c.numer()).collect();
        let bi: Vec<&BigInt> = b.iter().map(|c| c.numer()).collect();
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in ai.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bi.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += *x * *y;
                }
            }
        }
        return out.into_iter().map(Rational::from_integer).collect();
    }
    // Common-denominator route keeps the inner loop integral as well.
    let da = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let db = b.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ai: Vec<BigInt> = a.iter().map(|c| c.numer() * (&da / c.denom())).collect();
    let bi: Vec<BigInt> = b.iter().map(|c| c.numer() * (&db / c.denom())).collect();
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in ai.iter().enumerate() {
        for (j, y) in bi.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    let den = da * db;
    out.into_iter().map(|n| Rational::new(n, den.clone())).collect()
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&RatPoly> for &RatPoly {
            type Output = RatPoly;
            /// Panics on a variable mismatch; use [`RatPoly::arith`] for a
            /// checked version.
            fn $method(self, rhs: &RatPoly) -> RatPoly {
                self.arith(rhs, $op).expect("polynomial variable mismatch")
            }
        }
        impl $tr<RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: RatPoly) -> RatPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, PolyOp::Add);
forward_binop!(Sub, sub, PolyOp::Sub);
forward_binop!(Mul, mul, PolyOp::Mul);

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect(), self.var)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{k}", self.var)?,
            }
        }
        Ok(())
    }
}
