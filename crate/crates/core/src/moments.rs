//! Moments, cumulants and moment-generating functions of the system
//! lifetime, from the reliability polynomial.
//!
//! For exponential components `p(t) = exp(-lambda t)` every quantity is
//! reported in the dimensionless form `lambda^m <t^m>`, which is an exact
//! rational: `lambda^m <t^m> = m! * sum_k c_k / k^m` for `R(p) = sum_k c_k p^k`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{binomial, to_f64, RatPoly, Rational};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, QuadOptions};
use crate::special::{polygamma, riemann_zeta};

/// Component failure law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FailureModel {
    /// `p(t) = exp(-lambda t)`.
    Exponential { lambda: f64 },
    /// `p(t) = exp(-(lambda t)^kappa)`.
    Weibull { lambda: f64, kappa: f64 },
    /// Only the behaviour near `p = 1` is known:
    /// `-chi'(p) -> a_beta (1 - p)^beta`, with `chi` the inverse of `p(t)`.
    PowerLawHazard { beta: f64, a_beta: f64 },
}

impl FailureModel {
    pub fn exponential(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
        }
        Ok(FailureModel::Exponential { lambda })
    }

    pub fn weibull(lambda: f64, kappa: f64) -> Result<Self> {
        Self::exponential(lambda)?;
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
        }
        Ok(FailureModel::Weibull { lambda, kappa })
    }

    pub fn power_law(beta: f64, a_beta: f64) -> Result<Self> {
        if !(beta > -1.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must exceed -1, got {beta}")));
        }
        if !(a_beta > 0.0 && a_beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("a_beta must be positive, got {a_beta}")));
        }
        Ok(FailureModel::PowerLawHazard { beta, a_beta })
    }

    /// Rate used to make moments dimensionless (`1 / a_beta` for the bare
    /// power law).
    pub fn rate(&self) -> f64 {
        match *self {
            FailureModel::Exponential { lambda } | FailureModel::Weibull { lambda, .. } => lambda,
            FailureModel::PowerLawHazard { a_beta, .. } => 1.0 / a_beta,
        }
    }

    /// `(beta, a_beta)` describing `-chi'(p)` near `p = 1`.
    pub fn power_law_params(&self) -> (f64, f64) {
        match *self {
            FailureModel::Exponential { lambda } => (0.0, 1.0 / lambda),
            FailureModel::Weibull { lambda, kappa } => (1.0 / kappa - 1.0, 1.0 / (kappa * lambda)),
            FailureModel::PowerLawHazard { beta, a_beta } => (beta, a_beta),
        }
    }

    /// Component reliability at time `t`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        match *self {
            FailureModel::Exponential { lambda } => Ok((-lambda * t).exp()),
            FailureModel::Weibull { lambda, kappa } => Ok((-(lambda * t).powf(kappa)).exp()),
            FailureModel::PowerLawHazard { .. } => Err(self.no_inverse()),
        }
    }

    /// `chi(p)`: the time at which component reliability has dropped to `p`.
    pub fn chi(&self, p: f64) -> Result<f64> {
        match *self {
            FailureModel::Exponential { lambda } => Ok(-p.ln() / lambda),
            FailureModel::Weibull { lambda, kappa } => Ok((-p.ln()).powf(1.0 / kappa) / lambda),
            FailureModel::PowerLawHazard { .. } => Err(self.no_inverse()),
        }
    }

    fn no_inverse(&self) -> Error {
        Error::Unsupported("power-law hazard has no full inverse map; only its asymptotics are defined".into())
    }
}

/// `<t^m>` stored as the dimensionless `lambda^m <t^m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentResult {
    pub m: u32,
    pub lambda: f64,
    /// `lambda^m <t^m>` when it is an exact rational.
    pub scaled_exact: Option<Rational>,
    /// `lambda^m <t^m>` as a float.
    pub scaled: f64,
}

impl MomentResult {
    /// `<t^m>` in units of time^m.
    pub fn value(&self) -> f64 {
        self.scaled / self.lambda.powi(self.m as i32)
    }
}

fn factorial_big(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn check_order(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    Ok(())
}

/// `lambda^m <t^m> = m! sum_k c_k / k^m`, exactly.
pub fn exact_scaled_moment(r: &RatPoly, m: u32) -> Result<Rational> {
    check_order(m)?;
    if !r.coeff(0).is_zero() {
        return Err(Error::DivergentMoment);
    }
    let mut acc = Rational::zero();
    for (k, c) in r.coeffs().iter().enumerate().skip(1) {
        if !c.is_zero() {
            acc += c / Rational::from_integer(BigInt::from(k).pow(m));
        }
    }
    Ok(acc * Rational::from_integer(factorial_big(m)))
}

/// Moment `<t^m>` for exponential components with rate `lambda`.
pub fn exact_moment(r: &RatPoly, m: u32, lambda: f64) -> Result<MomentResult> {
    FailureModel::exponential(lambda)?;
    let exact = exact_scaled_moment(r, m)?;
    Ok(MomentResult { m, lambda, scaled: to_f64(&exact), scaled_exact: Some(exact) })
}

/// `lambda^m <t^m>` for `m = 1..=m_max`.
pub fn exact_scaled_moments(r: &RatPoly, m_max: u32) -> Result<Vec<Rational>> {
    (1..=m_max).map(|m| exact_scaled_moment(r, m)).collect()
}

/// Cumulants from raw moments via
/// `kappa_n = mu_n - sum_{k=1}^{n-1} C(n-1, k-1) kappa_k mu_{n-k}`.
/// Entry `j` of both slices has order `j + 1`.
pub fn cumulants_from_moments(mu: &[Rational]) -> Vec<Rational> {
    let mut kappa: Vec<Rational> = Vec::with_capacity(mu.len());
    for n in 1..=mu.len() {
        let mut k_n = mu[n - 1].clone();
        for k in 1..n {
            let c = Rational::from_integer(binomial(n as u64 - 1, k as u64 - 1));
            k_n -= c * &kappa[k - 1] * &mu[n - k - 1];
        }
        kappa.push(k_n);
    }
    kappa
}

/// Float version of [`cumulants_from_moments`].
pub fn cumulants_from_moments_f64(mu: &[f64]) -> Vec<f64> {
    let mut kappa: Vec<f64> = Vec::with_capacity(mu.len());
    for n in 1..=mu.len() {
        let mut k_n = mu[n - 1];
        for k in 1..n {
            let c = binomial(n as u64 - 1, k as u64 - 1).to_f64().unwrap_or(f64::INFINITY);
            k_n -= c * kappa[k - 1] * mu[n - k - 1];
        }
        kappa.push(k_n);
    }
    kappa
}

/// Cumulants of a list of moment results with contiguous orders `1..=M`,
/// returned as `lambda^m kappa_m`.
pub fn cumulants_of(results: &[MomentResult]) -> Result<Vec<Rational>> {
    let mut mu = Vec::with_capacity(results.len());
    for (j, r) in results.iter().enumerate() {
        if r.m as usize != j + 1 {
            return Err(Error::InvalidArgument("moment orders must be 1, 2, ..., M".into()));
        }
        mu.push(
            r.scaled_exact
                .clone()
                .ok_or_else(|| Error::InvalidArgument("exact cumulants need exact moments".into()))?,
        );
    }
    Ok(cumulants_from_moments(&mu))
}

/// `lambda^m kappa_m = (m-1)! sum_{i=k}^{n} i^{-m}` for a k-out-of-n:G system.
pub fn kn_cumulant(k: u32, n: u32, m: u32) -> Result<Rational> {
    check_order(m)?;
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let mut acc = Rational::zero();
    for i in k..=n {
        acc += Rational::new(BigInt::one(), BigInt::from(i).pow(m));
    }
    Ok(acc * Rational::from_integer(factorial_big(m - 1)))
}

/// `<exp(z t)> = 1 + x sum_k c_k / (k - x)` with `x = z / lambda`.
pub fn mgf_value(r: &RatPoly, z: f64, lambda: f64) -> Result<f64> {
    FailureModel::exponential(lambda)?;
    if !r.coeff(0).is_zero() {
        return Err(Error::DivergentMoment);
    }
    let x = z / lambda;
    let k_min = r.valuation().unwrap_or(usize::MAX);
    if x >= k_min as f64 {
        return Err(Error::DivergentMgf { x, k_min });
    }
    let mut acc = 0.0;
    for (k, c) in r.coeffs().iter().enumerate().skip(1) {
        if !c.is_zero() {
            acc += to_f64(c) / (k as f64 - x);
        }
    }
    Ok(1.0 + x * acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanMethod {
    Quadrature,
    ClosedForm,
}

/// `lambda^m <t^m>` in the `n -> infinity` limit of the generalized fan.
pub fn fan_limit_moment(m: u32, method: FanMethod) -> Result<MomentResult> {
    check_order(m)?;
    let scaled = match method {
        FanMethod::Quadrature => {
            // p = exp(-u): m int_0^inf u^(m-1) R_inf(e^-u) du
            let mf = m as f64;
            let f = |u: f64| {
                let p = (-u).exp();
                let c = 1.0 - p + p * p;
                mf * u.powi(m as i32 - 1) * p * p / (c * c)
            };
            integrate_to_infinity(f, 0.0, QuadOptions::default())?
        }
        FanMethod::ClosedForm => fan_closed_form(m),
    };
    Ok(MomentResult { m, lambda: 1.0, scaled_exact: None, scaled })
}

fn fan_closed_form(m: u32) -> f64 {
    let mf = m as f64;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let first = sign * mf / 3f64.powi(m as i32 + 1)
        * (1.0 + 0.5f64.powi(m as i32 - 1))
        * (polygamma(m - 1, 1.0 / 3.0) - polygamma(m - 1, 2.0 / 3.0));
    // At m = 2 the second term is 0 * 0 * zeta(1); the printed m = 2 value
    // has no such contribution.
    let second = if m == 2 {
        0.0
    } else {
        crate::special::factorial(m) / 3f64.powi(m as i32 - 1)
            * (1.0 - 2f64.powi(2 - m as i32))
            * (3f64.powi(m as i32 - 2) - 1.0)
            * riemann_zeta(m - 1)
    };
    first - second
}

/// `<t^m>` for an arbitrary component law with a known survival function,
/// by quadrature of `m int_0^inf t^(m-1) R(p(t)) dt`.
pub fn nonexp_moment(r: &RatPoly, model: &FailureModel, m: u32) -> Result<MomentResult> {
    check_order(m)?;
    if !r.coeff(0).is_zero() {
        return Err(Error::DivergentMoment);
    }
    model.survival(0.0)?;
    let eval = PolyEvaluator::new(r);
    let mf = m as f64;
    let f = |t: f64| mf * t.powi(m as i32 - 1) * eval.eval(model.survival(t).unwrap_or(0.0));
    let value = integrate_to_infinity(f, 0.0, QuadOptions::default())?;
    let lambda = model.rate();
    Ok(MomentResult { m, lambda, scaled_exact: None, scaled: value * lambda.powi(m as i32) })
}

/// Accurate float evaluation of a polynomial whose coefficients cancel
/// heavily: double-double Horner in `p` below 1/2 and in `q = 1 - p` above,
/// with exact rational evaluation as a last resort.
#[derive(Debug, Clone)]
pub struct PolyEvaluator {
    in_p: Vec<(f64, f64)>,
    in_q: Vec<(f64, f64)>,
    exact: RatPoly,
}

/// `hi + lo` with `|lo| <= ulp(hi) / 2`.
fn split(c: &Rational) -> (f64, f64) {
    let hi = to_f64(c);
    if !hi.is_finite() {
        return (hi, 0.0);
    }
    let rest = c - Rational::from_float(hi).unwrap_or_else(Rational::zero);
    (hi, to_f64(&rest))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

impl PolyEvaluator {
    pub fn new(r: &RatPoly) -> Self {
        let to = |poly: &RatPoly| poly.coeffs().iter().map(split).collect::<Vec<_>>();
        let reflected = r.reflect().unwrap_or_else(|_| r.clone());
        PolyEvaluator { in_p: to(r), in_q: to(&reflected), exact: r.clone() }
    }

    fn horner(c: &[(f64, f64)], x: f64) -> f64 {
        let (mut hi, mut lo) = (0.0f64, 0.0f64);
        for &(ch, cl) in c.iter().rev() {
            // (hi, lo) * x
            let p = hi * x;
            let e = hi.mul_add(x, -p) + lo * x;
            // + (ch, cl)
            let (s, t) = two_sum(p, ch);
            let t = t + e + cl;
            hi = s + t;
            lo = t - (hi - s);
        }
        hi + lo
    }

    /// `R(p)` to 1e-14 relative or 1e-20 absolute accuracy.
    pub fn eval(&self, p: f64) -> f64 {
        let (c, x) = if p <= 0.5 { (&self.in_p, p) } else { (&self.in_q, 1.0 - p) };
        let value = Self::horner(c, x);
        let magnitude = c.iter().rev().fold(0.0, |acc, &(a, _)| acc * x.abs() + a.abs());
        // double-double keeps about 30 digits of the magnitude
        let error = magnitude * 1e-30;
        if error <= 1e-14 * value.abs() || error <= 1e-20 {
            value
        } else {
            self.exact.eval_f64(p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int, Var};
    use crate::architectures::{reliability_polynomial, reliability_range, Architecture, Family};
    use crate::quadrature::integrate;
    use crate::special::gamma;

    fn poly(family: Family, n: u32) -> RatPoly {
        reliability_polynomial(&Architecture::new(family, n).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(exact_scaled_moment(&poly(Family::Series, 4), 1).unwrap(), rat(1, 4));
        assert_eq!(exact_scaled_moment(&poly(Family::Parallel, 3), 1).unwrap(), rat(11, 6));
        assert_eq!(exact_scaled_moment(&poly(Family::K4Ladder, 1), 1).unwrap(), rat(79, 60));
    }

    #[test]
    fn divergent_moment() {
        assert_eq!(exact_scaled_moment(&RatPoly::one(Var::P), 1), Err(Error::DivergentMoment));
    }

    #[test]
    fn exponential_cumulants() {
        let mu: Vec<Rational> = (1..=6).map(|m| Rational::from_integer(factorial_big(m))).collect();
        let kappa = cumulants_from_moments(&mu);
        for (j, k) in kappa.iter().enumerate() {
            assert_eq!(k, &Rational::from_integer(factorial_big(j as u32)));
        }
        assert_eq!(cumulants_from_moments(&[rat_int(0), rat_int(0)]), vec![rat_int(0), rat_int(0)]);
    }

    #[test]
    fn series_cumulants() {
        for n in 1..=5u32 {
            let mu = exact_scaled_moments(&poly(Family::Series, n), 5).unwrap();
            for (j, k) in cumulants_from_moments(&mu).iter().enumerate() {
                let m = j as u32 + 1;
                let expected = Rational::new(factorial_big(m - 1), BigInt::from(n).pow(m));
                assert_eq!(k, &expected);
            }
        }
    }

    #[test]
    fn kn_examples() {
        assert_eq!(kn_cumulant(2, 3, 2).unwrap(), rat(13, 36));
        assert_eq!(kn_cumulant(5, 5, 1).unwrap(), rat(1, 5));
        assert_eq!(kn_cumulant(1, 3, 1).unwrap(), rat(11, 6));
        assert!(kn_cumulant(4, 3, 1).is_err());
    }

    #[test]
    fn kn_cumulants_match_polynomial_moments() {
        for n in 1..=6 {
            for k in 1..=n {
                let r = poly(Family::KOutOfN { k }, n);
                let kappa = cumulants_from_moments(&exact_scaled_moments(&r, 4).unwrap());
                for m in 1..=4 {
                    assert_eq!(kappa[m as usize - 1], kn_cumulant(k, n, m).unwrap(), "k={k} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn kn_cumulant_bounded_by_zeta() {
        for m in 2..=5 {
            let bound = crate::special::factorial(m - 1) * riemann_zeta(m);
            assert!(to_f64(&kn_cumulant(1, 40, m).unwrap()) < bound);
        }
    }

    #[test]
    fn mgf_examples() {
        let r = poly(Family::Series, 3);
        assert!((mgf_value(&r, 1.5, 1.0).unwrap() - 1.0 / (1.0 - 0.5)).abs() < 1e-14);
        assert_eq!(mgf_value(&r, 0.0, 2.0).unwrap(), 1.0);
        assert!(matches!(mgf_value(&r, 3.0, 1.0), Err(Error::DivergentMgf { .. })));
        // Gamma-ratio closed form for 2-out-of-3
        let r = poly(Family::KOutOfN { k: 2 }, 3);
        let x = 0.5;
        let expected = gamma(2.0 - x) * gamma(4.0) / (gamma(2.0) * gamma(4.0 - x));
        assert!((mgf_value(&r, x, 1.0).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn mgf_derivatives_match_moments() {
        for family in [Family::K4Ladder, Family::DoubleFan, Family::Street3xN] {
            let r = poly(family, 2);
            let lambda = 1.7;
            let h = 1e-4 * lambda;
            let f = |z: f64| mgf_value(&r, z, lambda).unwrap();
            let d1 = (f(h) - f(-h)) / (2.0 * h);
            let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
            let m1 = exact_moment(&r, 1, lambda).unwrap().value();
            let m2 = exact_moment(&r, 2, lambda).unwrap().value();
            assert!(((d1 - m1) / m1).abs() < 1e-5);
            assert!(((d2 - m2) / m2).abs() < 1e-5);
        }
    }

    #[test]
    fn fan_limits() {
        let m1 = (9.0 + 2.0 * std::f64::consts::PI * 3f64.sqrt()) / 27.0;
        let m2 = 2.0 / 9.0 * polygamma(1, 1.0 / 3.0) - 4.0 / 27.0 * std::f64::consts::PI.powi(2);
        for method in [FanMethod::Quadrature, FanMethod::ClosedForm] {
            assert!((fan_limit_moment(1, method).unwrap().scaled - m1).abs() < 1e-10);
            assert!((fan_limit_moment(2, method).unwrap().scaled - m2).abs() < 1e-10);
        }
        assert!((m1 - 0.736400).abs() < 1e-6 && (m2 - 0.781302).abs() < 1e-6);
        for m in 1..=12 {
            let q = fan_limit_moment(m, FanMethod::Quadrature).unwrap().scaled;
            let c = fan_limit_moment(m, FanMethod::ClosedForm).unwrap().scaled;
            assert!(((q - c) / q).abs() < 1e-9, "m={m}: {q} vs {c}");
        }
        let ratio =
            fan_limit_moment(12, FanMethod::Quadrature).unwrap().scaled / (crate::special::factorial(12) / 4096.0);
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
    }

    #[test]
    fn nonexp_matches_exponential() {
        let r = poly(Family::K4Ladder, 2);
        let model = FailureModel::exponential(1.3).unwrap();
        let q = nonexp_moment(&r, &model, 1).unwrap();
        let e = exact_moment(&r, 1, 1.3).unwrap();
        assert!(((q.value() - e.value()) / e.value()).abs() < 1e-9);
    }

    #[test]
    fn weibull_means() {
        let lambda = 2.0;
        let model = FailureModel::weibull(lambda, 2.0).unwrap();
        let g = gamma(1.5) / lambda;
        let s = nonexp_moment(&poly(Family::Series, 1), &model, 1).unwrap().value();
        assert!((s - g).abs() < 1e-9);
        let p = nonexp_moment(&poly(Family::Parallel, 2), &model, 1).unwrap().value();
        assert!((p - (2.0 - 0.5f64.sqrt()) * g).abs() < 1e-9);
        assert_eq!(model.power_law_params(), (-0.5, 0.25));
    }

    #[test]
    fn termwise_identity() {
        for k in 1..=8 {
            for m in 1..=6 {
                let v = integrate(|p: f64| p.powi(k - 1) * (-p.ln()).powi(m - 1), 0.0, 1.0, QuadOptions::default())
                    .unwrap();
                let expected = crate::special::factorial(m as u32 - 1) / (k as f64).powi(m);
                assert!((v - expected).abs() < 1e-10 * expected.max(1.0));
            }
        }
    }

    #[test]
    fn variance_positive_and_ordering() {
        for family in Family::RECURSIVE {
            for (n, r) in reliability_range(family, 1, 6).unwrap() {
                let mu = exact_scaled_moments(&r, 2).unwrap();
                let kappa = cumulants_from_moments(&mu);
                assert!(kappa[1] > rat_int(0), "{family} n={n}");
            }
        }
        let series = exact_scaled_moment(&poly(Family::Series, 3), 1).unwrap();
        let parallel = exact_scaled_moment(&poly(Family::Parallel, 3), 1).unwrap();
        for family in Family::RECURSIVE {
            let m = exact_scaled_moment(&poly(family, 3), 1).unwrap();
            let edges = family.edge_count(3).unwrap() as i64;
            // bounds on the same number of components
            let lo = exact_scaled_moment(&poly(Family::Series, edges as u32), 1).unwrap();
            let hi = exact_scaled_moment(&poly(Family::Parallel, edges as u32), 1).unwrap();
            assert!(lo <= m && m <= hi, "{family}");
        }
        assert!(series < parallel);
    }

    #[test]
    fn evaluator_accuracy() {
        for family in [Family::K4Ladder, Family::Street3xN, Family::DoubleFan] {
            let r = poly(family, 30);
            let ev = PolyEvaluator::new(&r);
            for k in 1..100 {
                let p = k as f64 / 100.0;
                let exact = r.eval_f64(p);
                assert!((ev.eval(p) - exact).abs() <= 1e-14 * exact.abs() + 1e-20, "{family} p={p}");
            }
        }
    }
}
