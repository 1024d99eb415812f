use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::RatPoly;
use super::rational::Rational;
use super::series::TruncSeries;
use super::Var;
use crate::error::{Error, Result};

/// Polynomial in an eigenvalue variable `zeta` whose coefficients are
/// truncated series in a second variable: `W(zeta, x) = sum_j c_j(x) zeta^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaPoly {
    coeffs: Vec<TruncSeries>,
}

impl ZetaPoly {
    pub fn new(coeffs: Vec<TruncSeries>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::InvalidArgument("empty zeta polynomial".into()))?;
        if let Some(bad) = coeffs.iter().find(|c| c.var() != first.var()) {
            return Err(Error::VarMismatch(first.var(), bad.var()));
        }
        Ok(ZetaPoly { coeffs })
    }

    /// Builds `W` from polynomial coefficients already written in the series
    /// variable.
    pub fn from_polys(coeffs: &[RatPoly], order: usize) -> Result<Self> {
        Self::new(coeffs.iter().map(|c| TruncSeries::from_poly(c, order)).collect())
    }

    pub fn var(&self) -> Var {
        self.coeffs[0].var()
    }

    pub fn order(&self) -> usize {
        self.coeffs.iter().map(TruncSeries::order).min().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[TruncSeries] {
        &self.coeffs
    }

    pub fn derivative(&self) -> ZetaPoly {
        let var = self.var();
        let order = self.order();
        let coeffs = if self.coeffs.len() <= 1 {
            vec![TruncSeries::zero(var, order)]
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale(&Rational::from_integer(BigInt::from(j))))
                .collect()
        };
        ZetaPoly { coeffs }
    }

    /// Horner evaluation at a series argument.
    pub fn eval(&self, zeta: &TruncSeries) -> Result<TruncSeries> {
        let order = self.order().min(zeta.order());
        let mut acc = TruncSeries::zero(self.var(), order);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(zeta)?.add(c)?;
        }
        Ok(acc)
    }

    /// `W(1, 0)` and `dW/dzeta(1, 0)`.
    fn at_origin(&self) -> (Rational, Rational) {
        let mut value = Rational::zero();
        let mut slope = Rational::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            value += c.constant_term();
            slope += c.constant_term() * Rational::from_integer(BigInt::from(j));
        }
        (value, slope)
    }
}

/// Solves `W(zeta(x), x) = 0` for the branch with `zeta(0) = 1`, exactly, to
/// order `order` in `x`.
///
/// Newton iteration on truncated series, doubling the working order at every
/// step starting from the seed `zeta = 1`.
pub fn series_root_solve(w: &ZetaPoly, order: usize) -> Result<TruncSeries> {
    let var = w.var();
    let order = order.min(w.order());
    let (value, slope) = w.at_origin();
    if !value.is_zero() {
        return Err(Error::NotARoot);
    }
    if slope.is_zero() {
        return Err(Error::DegenerateRoot);
    }
    let dw = w.derivative();
    let mut zeta = TruncSeries::one(var, order);
    // zeta is exact modulo x^known
    let mut known = 1usize;
    while known <= order {
        known = (2 * known).min(order + 1);
        let t = known - 1;
        let z = zeta.truncate(t);
        let f = w.eval(&z)?;
        let fp = dw.eval(&z)?;
        let next = z.sub(&f.div(&fp)?)?;
        zeta = TruncSeries::new(next.coeffs().to_vec(), var, order);
    }
    let residual = w.eval(&zeta)?;
    if residual.valuation().is_some() {
        // Newton from a simple root cannot stall; reaching here means the
        // input coefficients were inconsistent with their declared order.
        return Err(Error::DegenerateRoot);
    }
    Ok(zeta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64], k: usize) -> TruncSeries {
        TruncSeries::from_ints(c, Var::Q, k)
    }

    #[test]
    fn linear_root() {
        // zeta - 1 + q = 0
        let w = ZetaPoly::new(vec![s(&[-1, 1], 6), s(&[1], 6)]).unwrap();
        assert_eq!(series_root_solve(&w, 6).unwrap(), s(&[1, -1], 6));
    }

    #[test]
    fn quadratic_root_satisfies_equation() {
        // zeta^2 - (1 + q) zeta + q^3 = 0
        let w = ZetaPoly::new(vec![s(&[0, 0, 0, 1], 10), s(&[-1, -1], 10), s(&[1], 10)]).unwrap();
        let z = series_root_solve(&w, 10).unwrap();
        assert_eq!(z.order(), 10);
        assert_eq!(w.eval(&z).unwrap().valuation(), None);
        assert_eq!(z.constant_term(), &Rational::from_integer(1.into()));
    }

    #[test]
    fn rejects_non_root_and_double_root() {
        let not_root = ZetaPoly::new(vec![s(&[1], 4), s(&[1], 4)]).unwrap();
        assert_eq!(series_root_solve(&not_root, 4), Err(Error::NotARoot));
        // (zeta - 1)^2 - q^2
        let double = ZetaPoly::new(vec![s(&[1, 0, -1], 4), s(&[-2], 4), s(&[1], 4)]).unwrap();
        assert_eq!(series_root_solve(&double, 4), Err(Error::DegenerateRoot));
    }
}
