//! Large-`n` behaviour of recursive families: cut signatures, asymptotic
//! expansions of the moments, and Weibull-equivalent reliabilities.

mod eigen;

pub use eigen::{dominant_eigen_series, signature_from_eigen, signature_from_polynomials, DominantEigen};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{rat, rat_int, to_f64, Rational, TruncSeries};
use crate::architectures::Family;
use crate::error::{Error, Result};
use crate::moments::FailureModel;
use crate::quadrature::{integrate_to_infinity, QuadOptions};
use crate::special::{gamma, EULER_GAMMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignatureKind {
    /// `R_n -> 0`; expansions in `q = 1 - p`.
    SeriesLike,
    /// `R_n -> 1`; expansions in `p`.
    ParallelLike,
}

impl fmt::Display for SignatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignatureKind::SeriesLike => "series-like",
            SignatureKind::ParallelLike => "parallel-like",
        })
    }
}

/// Expansion data of the dominant eigenvalue and its amplitude:
/// `-ln zeta_+ = sum_{j >= i} alpha_j x^j` and
/// `alpha_+ = 1 + sum_{j >= 1} alpha'_j x^j`, with `x = q` (series-like) or
/// `x = p` (parallel-like, where the coefficients are usually written beta, beta').
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSignature {
    pub kind: SignatureKind,
    pub i: usize,
    decay: TruncSeries,
    amplitude: TruncSeries,
}

impl CutSignature {
    pub fn new(kind: SignatureKind, decay: TruncSeries, amplitude: TruncSeries) -> Result<Self> {
        let i = decay
            .valuation()
            .ok_or_else(|| Error::MissingCoefficient("-ln zeta_+ vanishes to the requested order".into()))?;
        if i == 0 {
            return Err(Error::ConstantTerm { op: "signature", expected: "zeta_+(0) = 1" });
        }
        if !decay.coeff(i).is_positive() {
            return Err(Error::InvalidArgument("leading cut coefficient must be positive".into()));
        }
        if !amplitude.constant_term().is_one() {
            return Err(Error::ConstantTerm { op: "signature", expected: "alpha_+(0) = 1" });
        }
        Ok(CutSignature { kind, i, decay, amplitude })
    }

    /// `-ln zeta_+` as a series.
    pub fn decay(&self) -> &TruncSeries {
        &self.decay
    }

    /// `alpha_+` as a series.
    pub fn amplitude(&self) -> &TruncSeries {
        &self.amplitude
    }

    /// Coefficient `alpha_j` (or `beta_j`) of `-ln zeta_+`.
    pub fn alpha(&self, j: usize) -> Result<Rational> {
        if j > self.decay.order() {
            return Err(Error::MissingCoefficient(format!("alpha_{j}")));
        }
        Ok(self.decay.coeff(j).clone())
    }

    /// Coefficient `alpha'_j` (or `beta'_j`) of `alpha_+`.
    pub fn alpha_prime(&self, j: usize) -> Result<Rational> {
        if j > self.amplitude.order() {
            return Err(Error::MissingCoefficient(format!("alpha'_{j}")));
        }
        Ok(self.amplitude.coeff(j).clone())
    }

    /// `alpha_j` for `j = i, i+1, ...` up to the truncation order.
    pub fn alpha_map(&self) -> BTreeMap<usize, Rational> {
        (self.i..=self.decay.order()).map(|j| (j, self.decay.coeff(j).clone())).collect()
    }

    /// `alpha'_j` for `j = 1, 2, ...` up to the truncation order.
    pub fn alpha_prime_map(&self) -> BTreeMap<usize, Rational> {
        (1..=self.amplitude.order()).map(|j| (j, self.amplitude.coeff(j).clone())).collect()
    }

    pub fn order(&self) -> usize {
        self.decay.order().min(self.amplitude.order())
    }

    fn require(&self, kind: SignatureKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Unsupported(format!("needs a {kind} signature, got {}", self.kind)));
        }
        Ok(())
    }
}

/// `coeff * Gamma(arg)` with `arg` reduced into `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GammaTerm {
    pub arg: Rational,
    pub coeff: Rational,
}

/// Exact linear combination of Gamma values at rational arguments, merged by
/// argument after reducing with `Gamma(x + 1) = x Gamma(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GammaCombination {
    terms: Vec<GammaTerm>,
}

impl GammaCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coeff: Rational, arg: Rational) {
        if !arg.is_positive() {
            panic!("Gamma argument must be positive, got {arg}");
        }
        let mut coeff = coeff;
        let mut arg = arg;
        while arg > Rational::one() {
            arg -= Rational::one();
            coeff *= &arg;
        }
        match self.terms.binary_search_by(|t| t.arg.cmp(&arg)) {
            Ok(k) => {
                self.terms[k].coeff += coeff;
                if self.terms[k].coeff.is_zero() {
                    self.terms.remove(k);
                }
            }
            Err(k) => {
                if !coeff.is_zero() {
                    self.terms.insert(k, GammaTerm { arg, coeff });
                }
            }
        }
    }

    pub fn scaled(&self, c: &Rational) -> GammaCombination {
        let mut out = GammaCombination::new();
        for t in &self.terms {
            out.push(&t.coeff * c, t.arg.clone());
        }
        out
    }

    pub fn terms(&self) -> &[GammaTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self) -> f64 {
        self.terms.iter().map(|t| to_f64(&t.coeff) * gamma(to_f64(&t.arg))).sum()
    }
}

impl fmt::Display for GammaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if t.arg.is_one() {
                write!(f, "{}", t.coeff)?;
            } else {
                write!(f, "({})*Gamma({})", t.coeff, t.arg)?;
            }
        }
        Ok(())
    }
}

/// `coeff * n^(-exponent)`, with `coeff = scale * gammas` when the exact
/// structure is known.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTerm {
    pub exponent: Rational,
    pub coeff: f64,
    pub gammas: Option<GammaCombination>,
    pub scale: f64,
}

impl PowerTerm {
    pub fn from_gammas(exponent: Rational, gammas: GammaCombination, scale: f64) -> Self {
        PowerTerm { exponent, coeff: scale * gammas.value(), gammas: Some(gammas), scale }
    }

    pub fn numeric(exponent: Rational, coeff: f64) -> Self {
        PowerTerm { exponent, coeff, gammas: None, scale: 1.0 }
    }
}

/// `log_coeff ln n + const_coeff + sum coeff n^(-e)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AsymptoticExpansion {
    pub log_coeff: f64,
    pub const_coeff: f64,
    pub power_terms: Vec<PowerTerm>,
}

impl AsymptoticExpansion {
    pub fn eval(&self, n: f64) -> f64 {
        let head = if self.log_coeff != 0.0 { self.log_coeff * n.ln() } else { 0.0 };
        head + self.const_coeff + self.power_terms.iter().map(|t| t.coeff * n.powf(-to_f64(&t.exponent))).sum::<f64>()
    }

    /// Keeps only the first `count` power terms.
    pub fn truncated(&self, count: usize) -> AsymptoticExpansion {
        AsymptoticExpansion { power_terms: self.power_terms.iter().take(count).cloned().collect(), ..self.clone() }
    }

    /// Highest retained exponent.
    pub fn valid_order(&self) -> Option<Rational> {
        self.power_terms.last().map(|t| t.exponent.clone())
    }

    fn push_sorted(&mut self, term: PowerTerm) {
        match self.power_terms.iter().position(|t| t.exponent >= term.exponent) {
            Some(k) if self.power_terms[k].exponent == term.exponent => {
                let t = &mut self.power_terms[k];
                t.coeff += term.coeff;
                t.gammas = None;
            }
            Some(k) => self.power_terms.insert(k, term),
            None => self.power_terms.push(term),
        }
    }
}

/// `lambda^m <t^m>` for a series-like family up to `eta^(m + max_eta_order)`,
/// with `eta = (n alpha_i)^(-1/i)`.
pub fn moment_expansion_series_like(sig: &CutSignature, m: u32, max_eta_order: u32) -> Result<AsymptoticExpansion> {
    sig.require(SignatureKind::SeriesLike)?;
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    if max_eta_order > 2 {
        return Err(Error::Unsupported("expansion is available up to eta^2".into()));
    }
    let i = sig.i;
    let ir = rat_int(i as i64);
    let mr = rat_int(m as i64);
    let alpha_i = sig.alpha(i)?;
    let lead = &mr / &ir;
    let mut out = AsymptoticExpansion::default();
    for j in 0..=max_eta_order as i64 {
        let mut g = GammaCombination::new();
        let a = (&mr + rat_int(j)) / &ir;
        match j {
            0 => g.push(Rational::one(), Rational::one() + &lead),
            1 => {
                let r = sig.alpha(i + 1)? / &alpha_i;
                let a1 = sig.alpha_prime(1)?;
                g.push(rat(1, 2) * (Rational::one() + &mr + rat_int(2) * &a1), a.clone());
                g.push(-r, Rational::one() + &a);
                g = g.scaled(&lead);
            }
            _ => {
                let r = sig.alpha(i + 1)? / &alpha_i;
                let s = sig.alpha(i + 2)? / &alpha_i;
                let a1 = sig.alpha_prime(1)?;
                let a2 = sig.alpha_prime(2)?;
                let c0 = (rat_int(10)
                    + rat_int(11) * &mr
                    + rat_int(3) * &mr * &mr
                    + rat_int(12) * (Rational::one() + &mr) * &a1
                    + rat_int(24) * &a2)
                    / rat_int(24);
                g.push(c0, a.clone());
                let c1 = -(s + &r * (Rational::one() + &mr + rat_int(2) * &a1) / rat_int(2));
                g.push(c1, Rational::one() + &a);
                g.push(rat(1, 2) * &r * &r, rat_int(2) + &a);
                g = g.scaled(&lead);
            }
        }
        let scale = to_f64(&alpha_i).powf(-to_f64(&a));
        out.power_terms.push(PowerTerm::from_gammas(a, g, scale));
    }
    Ok(out)
}

/// Mean lifetime of a parallel-like family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicMode {
    /// `(1/i)(ln(beta_i n) + C) + ...`
    Asymptotic,
    /// Keeps the harmonic sum `(1/i) H_N`, `N = round(beta_i n)`.
    ExactHarmonic,
}

/// `lambda MTTF_n` for a parallel-like family as `A + B + C`.
pub fn mttf_expansion_parallel_like(sig: &CutSignature) -> Result<AsymptoticExpansion> {
    sig.require(SignatureKind::ParallelLike)?;
    let i = sig.i;
    let beta_i = sig.alpha(i)?;
    let bi = to_f64(&beta_i);
    let inv_i = 1.0 / i as f64;
    let mut out =
        AsymptoticExpansion { log_coeff: inv_i, const_coeff: inv_i * (bi.ln() + EULER_GAMMA), power_terms: Vec::new() };
    for term in parallel_power_terms(sig)? {
        out.push_sorted(term);
    }
    if i == 1 {
        // tail of the harmonic sum, same order as B and C
        out.push_sorted(PowerTerm::numeric(rat_int(1), 1.0 / (2.0 * bi)));
    }
    Ok(out)
}

fn parallel_power_terms(sig: &CutSignature) -> Result<Vec<PowerTerm>> {
    let i = sig.i;
    let beta_i = sig.alpha(i)?;
    let beta_next = sig.alpha(i + 1)?;
    let beta_p1 = sig.alpha_prime(1)?;
    let ir = rat_int(i as i64);
    let exponent = Rational::one() / &ir;
    let scale = to_f64(&beta_i).powf(-1.0 / i as f64);
    if i == 1 {
        // B: (beta_2 - beta_1 / 2) / beta_1^2 / n ; C: -beta'_1 / (beta_1 n)
        let b = (&beta_next - &beta_i / rat_int(2)) / (&beta_i * &beta_i);
        let c = -(&beta_p1 / &beta_i);
        let mut g = GammaCombination::new();
        g.push(b + c, Rational::one());
        return Ok(vec![PowerTerm::from_gammas(exponent, g, 1.0)]);
    }
    let mut g = GammaCombination::new();
    g.push(&beta_next / (&ir * &beta_i) - beta_p1, Rational::one() + &exponent);
    Ok(vec![PowerTerm::from_gammas(exponent, g, scale)])
}

/// Parallel-like mean at a given `n` with the harmonic head summed exactly.
pub fn mttf_parallel_like_value(sig: &CutSignature, n: u32, mode: HarmonicMode) -> Result<f64> {
    sig.require(SignatureKind::ParallelLike)?;
    if mode == HarmonicMode::Asymptotic {
        return Ok(mttf_expansion_parallel_like(sig)?.eval(n as f64));
    }
    let i = sig.i as f64;
    let bi = to_f64(&sig.alpha(sig.i)?);
    let terms = (bi * n as f64).round() as u64;
    let harmonic: f64 = (1..=terms).rev().map(|k| 1.0 / k as f64).sum();
    let tail: f64 = parallel_power_terms(sig)?.iter().map(|t| t.coeff * (n as f64).powf(-to_f64(&t.exponent))).sum();
    Ok(harmonic / i + tail)
}

/// `sigma / <t> -> sqrt(Gamma(1 + 2/i) / Gamma(1 + 1/i)^2 - 1)`.
pub fn coefficient_of_variation_limit(sig: &CutSignature) -> Result<f64> {
    sig.require(SignatureKind::SeriesLike)?;
    Ok(cv_limit_for_order(sig.i))
}

pub fn cv_limit_for_order(i: usize) -> f64 {
    let i = i as f64;
    let g1 = gamma(1.0 + 1.0 / i);
    (gamma(1.0 + 2.0 / i) / (g1 * g1) - 1.0).sqrt()
}

/// `exp(-n (a_i (lambda t)^i + a_{i+1} (lambda t)^(i+1)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeibullEquivalent {
    pub i: usize,
    pub a_i: Rational,
    pub a_ip1: Rational,
    pub order: u32,
}

pub fn weibull_equivalent(sig: &CutSignature, order: u32) -> Result<WeibullEquivalent> {
    sig.require(SignatureKind::SeriesLike)?;
    let i = sig.i;
    let a_i = sig.alpha(i)?;
    match order {
        0 => Ok(WeibullEquivalent { i, a_i, a_ip1: Rational::zero(), order }),
        1 => {
            let a1 = sig.alpha_prime(1)?;
            if !a1.is_zero() {
                return Err(Error::NonzeroFirstCut(a1.to_string()));
            }
            let a_ip1 = sig.alpha(i + 1)? - rat_int(i as i64) / rat_int(2) * &a_i;
            Ok(WeibullEquivalent { i, a_i, a_ip1, order })
        }
        _ => Err(Error::InvalidArgument(format!("Weibull-equivalent order must be 0 or 1, got {order}"))),
    }
}

impl WeibullEquivalent {
    /// Reliability at dimensionless time `x = lambda t`.
    pub fn reliability(&self, n: u32, x: f64) -> f64 {
        let i = self.i as i32;
        let arg = to_f64(&self.a_i) * x.powi(i) + to_f64(&self.a_ip1) * x.powi(i + 1);
        (-(n as f64) * arg).exp()
    }

    /// Asymptotic series of `lambda^m <t^m>` for this reliability: term `k`
    /// has `n^(-(m+k)/i)` and coefficient
    /// `(m/i) (-a_{i+1})^k / k! Gamma((m + k(i+1))/i) a_i^(-(m + k(i+1))/i)`.
    pub fn moment_series(&self, m: u32, terms: usize) -> AsymptoticExpansion {
        let ir = rat_int(self.i as i64);
        let mr = rat_int(m as i64);
        let ai = to_f64(&self.a_i);
        let mut out = AsymptoticExpansion::default();
        let mut fact = Rational::one();
        for k in 0..terms {
            if k > 0 {
                fact *= rat_int(k as i64);
            }
            if k > 0 && self.a_ip1.is_zero() {
                break;
            }
            let kk = rat_int(k as i64);
            let arg = (&mr + &kk * (&ir + Rational::one())) / &ir;
            let sign_pow = (0..k).fold(Rational::one(), |acc, _| acc * -&self.a_ip1);
            let mut g = GammaCombination::new();
            g.push(&mr / &ir * sign_pow / &fact, arg.clone());
            let exponent = (&mr + &kk) / &ir;
            out.power_terms.push(PowerTerm::from_gammas(exponent, g, ai.powf(-to_f64(&arg))));
        }
        out
    }

    /// `lambda^m <t^m>` of this reliability at size `n`, by quadrature.
    pub fn moment_quadrature(&self, m: u32, n: u32) -> Result<f64> {
        let mf = m as f64;
        integrate_to_infinity(|x| mf * x.powi(m as i32 - 1) * self.reliability(n, x), 0.0, QuadOptions::default())
    }
}

/// Leading-order `<t^m>` for a power-law hazard near `p = 1`:
/// `(a/(beta+1))^m Gamma(1 + (beta+1) m / i) / (n alpha_i)^((beta+1) m / i)`.
/// Returns the value and the exponent `(beta + 1) m / i`.
pub fn nonexp_asymptotic_moment(sig: &CutSignature, model: &FailureModel, m: u32, n: u32) -> Result<(f64, f64)> {
    sig.require(SignatureKind::SeriesLike)?;
    let (beta, a) = model.power_law_params();
    let alpha_i = to_f64(&sig.alpha(sig.i)?);
    let exponent = (beta + 1.0) * m as f64 / sig.i as f64;
    let value = (a / (beta + 1.0)).powi(m as i32) * gamma(1.0 + exponent) / (n as f64 * alpha_i).powf(exponent);
    Ok((value, exponent))
}

/// Effective reliability `exp(-n alpha_i ((beta+1) t / a)^(1/(beta+1)))`.
pub fn nonexp_effective_reliability(sig: &CutSignature, model: &FailureModel, n: u32, t: f64) -> Result<f64> {
    sig.require(SignatureKind::SeriesLike)?;
    let (beta, a) = model.power_law_params();
    let alpha_i = to_f64(&sig.alpha(sig.i)?);
    Ok((-(n as f64) * alpha_i * ((beta + 1.0) * t / a).powf(1.0 / (beta + 1.0))).exp())
}

/// Higher-order MTTF terms known for specific families, beyond what the
/// general expansions produce. Used as reference curves.
pub fn reference_mttf_expansion(family: Family) -> Option<AsymptoticExpansion> {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let terms = match family {
        Family::K4Ladder => vec![
            PowerTerm::numeric(rat(1, 4), gamma(1.25)),
            PowerTerm::numeric(rat(3, 4), 17.0 / 32.0 * gamma(0.75)),
            PowerTerm::numeric(rat_int(1), -0.75),
            PowerTerm::numeric(rat(5, 4), -293.0 / 512.0 * gamma(1.25)),
        ],
        Family::DoubleFan => {
            return Some(AsymptoticExpansion {
                log_coeff: 0.5,
                const_coeff: 0.5 * EULER_GAMMA,
                power_terms: vec![
                    PowerTerm::numeric(rat(1, 2), sqrt_pi / 2.0),
                    PowerTerm::numeric(rat_int(1), -11.0 / 4.0),
                    PowerTerm::numeric(rat(3, 2), 95.0 * sqrt_pi / 16.0),
                    PowerTerm::numeric(rat_int(2), -1321.0 / 24.0),
                ],
            })
        }
        _ => return None,
    };
    Some(AsymptoticExpansion { power_terms: terms, ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Var;
    use crate::architectures::{eigen_data, reliability_polynomial, reliability_range, Architecture};
    use crate::moments::{exact_scaled_moment, nonexp_moment};

    fn sig(family: Family, kind: SignatureKind) -> CutSignature {
        signature_from_eigen(&eigen_data(family).unwrap(), kind, 8).unwrap()
    }

    fn g(terms: &[(i64, i64, i64, i64)]) -> GammaCombination {
        let mut out = GammaCombination::new();
        for &(cn, cd, an, ad) in terms {
            out.push(rat(cn, cd), rat(an, ad));
        }
        out
    }

    #[test]
    fn signatures() {
        let k4 = sig(Family::K4Ladder, SignatureKind::SeriesLike);
        assert_eq!(k4.i, 4);
        assert_eq!(
            (k4.alpha(4).unwrap(), k4.alpha(5).unwrap(), k4.alpha(6).unwrap()),
            (rat_int(1), rat_int(2), rat_int(0))
        );
        assert_eq!((k4.alpha_prime(1).unwrap(), k4.alpha_prime(2).unwrap()), (rat_int(0), rat_int(0)));
        let st = sig(Family::Street3xN, SignatureKind::SeriesLike);
        assert_eq!(st.i, 3);
        assert_eq!(
            (st.alpha(3).unwrap(), st.alpha(4).unwrap(), st.alpha(5).unwrap()),
            (rat_int(1), rat_int(4), rat_int(4))
        );
        assert_eq!(
            (st.alpha_prime(1).unwrap(), st.alpha_prime(2).unwrap(), st.alpha_prime(3).unwrap()),
            (rat_int(0), rat_int(-2), rat_int(-4))
        );
        let df = sig(Family::DoubleFan, SignatureKind::ParallelLike);
        assert_eq!(df.i, 2);
        assert_eq!((df.alpha(2).unwrap(), df.alpha(3).unwrap()), (rat_int(1), rat_int(2)));
        assert_eq!(df.alpha_prime(1).unwrap(), rat_int(0));
        assert!(matches!(df.alpha(9), Err(Error::MissingCoefficient(_))));
    }

    #[test]
    fn builtin_leading_cut_counts_are_integers() {
        for (family, kind) in [
            (Family::Series, SignatureKind::SeriesLike),
            (Family::K4Ladder, SignatureKind::SeriesLike),
            (Family::Street3xN, SignatureKind::SeriesLike),
            (Family::Parallel, SignatureKind::ParallelLike),
            (Family::DoubleFan, SignatureKind::ParallelLike),
        ] {
            let s = sig(family, kind);
            assert!(s.alpha(s.i).unwrap().is_integer(), "{family}");
        }
    }

    #[test]
    fn gamma_reduction() {
        let mut c = GammaCombination::new();
        c.push(rat_int(1), rat(1, 2));
        c.push(rat_int(-2), rat(3, 2));
        assert!(c.is_zero());
        let mut c = GammaCombination::new();
        c.push(rat_int(1), rat_int(3));
        assert_eq!(c, g(&[(2, 1, 1, 1)]));
    }

    #[test]
    fn k4_first_moment_terms() {
        let e = moment_expansion_series_like(&sig(Family::K4Ladder, SignatureKind::SeriesLike), 1, 2).unwrap();
        assert_eq!(e.power_terms[0].gammas, Some(g(&[(1, 4, 1, 4)])));
        assert!(e.power_terms[1].gammas.as_ref().unwrap().is_zero());
        assert_eq!(e.power_terms[2].gammas, Some(g(&[(17, 32, 3, 4)])));
        assert!((e.power_terms[0].coeff - gamma(1.25)).abs() < 1e-12);
        assert!((e.power_terms[2].coeff - 17.0 / 32.0 * gamma(0.75)).abs() < 1e-12);
        assert_eq!(e.power_terms[2].exponent, rat(3, 4));
    }

    #[test]
    fn k4_second_moment_terms() {
        let e = moment_expansion_series_like(&sig(Family::K4Ladder, SignatureKind::SeriesLike), 2, 2).unwrap();
        assert!((e.power_terms[0].coeff - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(e.power_terms[2].gammas, Some(g(&[(17, 12, 1, 1)])));
    }

    #[test]
    fn street_first_moment_terms() {
        let e = moment_expansion_series_like(&sig(Family::Street3xN, SignatureKind::SeriesLike), 1, 1).unwrap();
        assert_eq!(e.power_terms[0].gammas, Some(g(&[(1, 3, 1, 3)])));
        assert_eq!(e.power_terms[1].gammas, Some(g(&[(-5, 9, 2, 3)])));
    }

    #[test]
    fn missing_coefficient() {
        let low = signature_from_eigen(&eigen_data(Family::K4Ladder).unwrap(), SignatureKind::SeriesLike, 5).unwrap();
        assert!(matches!(moment_expansion_series_like(&low, 1, 2), Err(Error::MissingCoefficient(_))));
    }

    #[test]
    fn double_fan_mttf() {
        let e = mttf_expansion_parallel_like(&sig(Family::DoubleFan, SignatureKind::ParallelLike)).unwrap();
        assert!((e.log_coeff - 0.5).abs() < 1e-15);
        assert!((e.const_coeff - EULER_GAMMA / 2.0).abs() < 1e-15);
        assert_eq!(e.power_terms.len(), 1);
        assert!((e.power_terms[0].coeff - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_family_mttf() {
        let s = sig(Family::Parallel, SignatureKind::ParallelLike);
        assert_eq!(s.alpha(2).unwrap(), rat(1, 2));
        let e = mttf_expansion_parallel_like(&s).unwrap();
        assert!((e.const_coeff - EULER_GAMMA).abs() < 1e-15);
        for n in [10u32, 100, 1000] {
            let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
            assert!((e.eval(n as f64) - h).abs() < 0.1 / (n as f64 * n as f64));
            let exact = mttf_parallel_like_value(&s, n, HarmonicMode::ExactHarmonic).unwrap();
            assert!((exact - h).abs() < 1e-12);
        }
    }

    #[test]
    fn double_links_in_parallel() {
        // -ln zeta = -ln(1 - p^2) = p^2 + p^4/2 + ..., alpha = 1
        let zeta = TruncSeries::from_ints(&[1, 0, -1], Var::P, 6);
        let s = CutSignature::new(SignatureKind::ParallelLike, zeta.log().unwrap().neg(), TruncSeries::one(Var::P, 6))
            .unwrap();
        let e = mttf_expansion_parallel_like(&s).unwrap();
        assert!((e.log_coeff - 0.5).abs() < 1e-15);
        assert!(e.power_terms.iter().all(|t| t.coeff == 0.0));
    }

    #[test]
    fn cv_limits() {
        assert!((cv_limit_for_order(1) - 1.0).abs() < 1e-12);
        assert!((cv_limit_for_order(4) - 0.280544474864074).abs() < 1e-12);
        assert!((cv_limit_for_order(3) - 0.363446503252293).abs() < 1e-12);
    }

    #[test]
    fn weibull_parameters() {
        let w = weibull_equivalent(&sig(Family::Street3xN, SignatureKind::SeriesLike), 1).unwrap();
        assert_eq!((w.i, w.a_i.clone(), w.a_ip1.clone()), (3, rat_int(1), rat(5, 2)));
        let w = weibull_equivalent(&sig(Family::K4Ladder, SignatureKind::SeriesLike), 1).unwrap();
        assert_eq!(w.a_ip1, rat_int(0));
        let w = weibull_equivalent(&sig(Family::Series, SignatureKind::SeriesLike), 0).unwrap();
        assert_eq!((w.i, w.a_i), (1, rat_int(1)));
        let nonzero = CutSignature::new(
            SignatureKind::SeriesLike,
            TruncSeries::from_ints(&[0, 1, 1], Var::Q, 4),
            TruncSeries::from_ints(&[1, 1], Var::Q, 4),
        )
        .unwrap();
        assert!(matches!(weibull_equivalent(&nonzero, 1), Err(Error::NonzeroFirstCut(_))));
        assert!(weibull_equivalent(&nonzero, 0).is_ok());
    }

    #[test]
    fn weibull_moments_match_expansion() {
        for family in [Family::K4Ladder, Family::Street3xN] {
            let s = sig(family, SignatureKind::SeriesLike);
            let w = weibull_equivalent(&s, 1).unwrap();
            for m in 1..=2 {
                let exp = moment_expansion_series_like(&s, m, 1).unwrap();
                let ws = w.moment_series(m, 2);
                for k in 0..2 {
                    let a = exp.power_terms[k].coeff;
                    let b = ws.power_terms.get(k).map_or(0.0, |t| t.coeff);
                    assert!((a - b).abs() < 1e-10, "{family} m={m} k={k}: {a} vs {b}");
                }
                // large-n quadrature agrees with the series
                let n = 5000;
                let q = w.moment_quadrature(m, n).unwrap();
                let series = w.moment_series(m, 7).eval(n as f64);
                assert!(((q - series) / q).abs() < 1e-4, "{family} m={m}: {q} vs {series}");
            }
        }
    }

    #[test]
    fn expansion_converges_to_exact() {
        let s = sig(Family::K4Ladder, SignatureKind::SeriesLike);
        let e = moment_expansion_series_like(&s, 1, 2).unwrap();
        let mut prev = f64::INFINITY;
        for (n, r) in
            reliability_range(Family::K4Ladder, 16, 128).unwrap().into_iter().filter(|(n, _)| n.is_power_of_two())
        {
            let exact = to_f64(&exact_scaled_moment(&r, 1).unwrap());
            let err = (exact - e.eval(n as f64)).abs() * (n as f64);
            assert!(err < 2.0 && err <= prev * 1.5, "n={n}: {err}");
            prev = err;
        }
    }

    #[test]
    fn reference_double_fan_converges() {
        let e = reference_mttf_expansion(Family::DoubleFan).unwrap().truncated(2);
        let mut prev = f64::INFINITY;
        for n in [8u32, 16, 32, 64] {
            let r = reliability_polynomial(&Architecture::new(Family::DoubleFan, n).unwrap()).unwrap();
            let err = (to_f64(&exact_scaled_moment(&r, 1).unwrap()) - e.eval(n as f64)).abs();
            assert!(err < prev, "n={n}");
            prev = err;
        }
    }

    #[test]
    fn nonexp_leading_order() {
        let s = sig(Family::Street3xN, SignatureKind::SeriesLike);
        let exp = FailureModel::exponential(2.0).unwrap();
        let (v, e) = nonexp_asymptotic_moment(&s, &exp, 1, 50).unwrap();
        assert!((v - gamma(4.0 / 3.0) / (2.0 * 50f64.powf(1.0 / 3.0))).abs() < 1e-12);
        assert!((e - 1.0 / 3.0).abs() < 1e-15);
        let w = FailureModel::weibull(1.0, 2.0).unwrap();
        let (_, e) = nonexp_asymptotic_moment(&s, &w, 1, 50).unwrap();
        assert!((e - 1.0 / 6.0).abs() < 1e-15);
        let series = sig(Family::Series, SignatureKind::SeriesLike);
        let (v, _) = nonexp_asymptotic_moment(&series, &exp, 1, 7).unwrap();
        assert!((v - 1.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn nonexp_against_quadrature() {
        let s = sig(Family::K4Ladder, SignatureKind::SeriesLike);
        let model = FailureModel::weibull(1.0, 2.0).unwrap();
        let r = reliability_polynomial(&Architecture::new(Family::K4Ladder, 20).unwrap()).unwrap();
        let q = nonexp_moment(&r, &model, 1).unwrap().value();
        let (v, _) = nonexp_asymptotic_moment(&s, &model, 1, 20).unwrap();
        assert!(((q - v) / q).abs() < 0.05, "{q} vs {v}");
    }
}
