use num_traits::One;

use super::{CutSignature, SignatureKind};
use crate::algebra::{series_root_solve, RatPoly, Rational, TruncSeries, Var, ZetaPoly};
use crate::architectures::{z_product, EigenData, Tracked};
use crate::error::{Error, Result};

/// Dominant eigenvalue `zeta_+` and amplitude `alpha_+` as series around the
/// endpoint where `zeta_+ -> 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominantEigen {
    pub zeta_plus: TruncSeries,
    pub alpha_plus: TruncSeries,
    pub tracked: Tracked,
}

/// Expansion variable for a tracked quantity: `q` near `p = 1` for the
/// reliability, `p` near `p = 0` for the unavailability.
fn to_series(poly: &RatPoly, tracked: Tracked, order: usize) -> Result<TruncSeries> {
    match tracked {
        Tracked::Reliability => TruncSeries::shift_from(poly, order),
        Tracked::Unavailability => Ok(TruncSeries::from_poly(poly, order)),
    }
}

pub fn dominant_eigen_series(ed: &EigenData, order: usize) -> Result<DominantEigen> {
    match ed {
        EigenData::TwoEigen { trace, det, initial, tracked } => {
            let t = to_series(trace, *tracked, order)?;
            let d = to_series(det, *tracked, order)?;
            let var = t.var();
            // zeta^2 - T zeta + Det
            let w = ZetaPoly::new(vec![d, t.neg(), TruncSeries::one(var, order)])?;
            let zp = series_root_solve(&w, order)?;
            let zm = t.sub(&zp)?;
            let x0 = to_series(&initial.0, *tracked, order)?;
            let x1 = to_series(&initial.1, *tracked, order)?;
            // x_n = a_+ z_+^n + a_- z_-^n
            let alpha = x1.sub(&zm.mul(&x0)?)?.div(&zp.sub(&zm)?)?;
            Ok(DominantEigen { zeta_plus: zp, alpha_plus: alpha, tracked: *tracked })
        }
        EigenData::DenominatorRoot { numerator, d1, d2 } => {
            let tracked = Tracked::Reliability;
            let series = |v: &[RatPoly]| -> Result<Vec<TruncSeries>> {
                v.iter().map(|c| to_series(c, tracked, order)).collect()
            };
            let d2s = series(d2)?;
            // zeta^deg D2(1/zeta)
            let w = ZetaPoly::new(d2s.iter().rev().cloned().collect())?;
            let zp = series_root_solve(&w, order)?;
            let z = zp.inv()?;
            let n_at = eval_z(&series(numerator)?, &z)?;
            let d = series(&z_product(d1, d2))?;
            let d_prime: Vec<TruncSeries> =
                d.iter().enumerate().skip(1).map(|(j, c)| c.scale(&Rational::from_integer(j.into()))).collect();
            let dp_at = eval_z(&d_prime, &z)?;
            // residue of N / D at the simple pole z = 1 / zeta_+
            let alpha = zp.mul(&n_at)?.div(&dp_at)?.neg();
            Ok(DominantEigen { zeta_plus: zp, alpha_plus: alpha, tracked })
        }
        EigenData::Explicit { zeta_plus, alpha_plus, tracked } => Ok(DominantEigen {
            zeta_plus: to_series(zeta_plus, *tracked, order)?,
            alpha_plus: to_series(alpha_plus, *tracked, order)?,
            tracked: *tracked,
        }),
        EigenData::Degenerate { .. } => Err(Error::DegenerateRoot),
    }
}

fn eval_z(coeffs: &[TruncSeries], z: &TruncSeries) -> Result<TruncSeries> {
    let mut acc = TruncSeries::zero(z.var(), z.order());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z)?.add(c)?;
    }
    Ok(acc)
}

fn kind_of(tracked: Tracked) -> SignatureKind {
    match tracked {
        Tracked::Reliability => SignatureKind::SeriesLike,
        Tracked::Unavailability => SignatureKind::ParallelLike,
    }
}

/// Cut signature from the eigen-structure, exact to order `order`.
pub fn signature_from_eigen(ed: &EigenData, kind: SignatureKind, order: usize) -> Result<CutSignature> {
    let dom = dominant_eigen_series(ed, order)?;
    let actual = kind_of(dom.tracked);
    if actual != kind {
        return Err(Error::Unsupported(format!("family is {actual}, not {kind}")));
    }
    CutSignature::new(kind, dom.zeta_plus.log()?.neg(), dom.alpha_plus)
}

/// Cut signature recovered from exact polynomials at several sizes.
///
/// With `X_n = alpha_+ zeta_+^n` up to terms beyond `order` (`X_n = R_n` in
/// `q` for series-like, `X_n = 1 - R_n` in `p` for parallel-like):
/// `ln zeta_+ = (ln X_{n2} - ln X_{n1}) / (n2 - n1)` and
/// `ln alpha_+ = ln X_{n1} - n1 ln zeta_+`. Every further size must satisfy
/// the same relation exactly.
pub fn signature_from_polynomials(polys: &[(u32, RatPoly)], kind: SignatureKind, order: usize) -> Result<CutSignature> {
    if polys.len() < 2 {
        return Err(Error::InvalidArgument("need at least two sizes".into()));
    }
    let mut logs = Vec::with_capacity(polys.len());
    for (n, r) in polys {
        let x = match kind {
            SignatureKind::SeriesLike => TruncSeries::shift_from(r, order)?,
            SignatureKind::ParallelLike => TruncSeries::from_poly(&(&RatPoly::one(Var::P) - r), order),
        };
        if !x.constant_term().is_one() {
            return Err(Error::ConstantTerm { op: "log", expected: "1" });
        }
        logs.push((*n, x.log()?));
    }
    let (n1, l1) = &logs[0];
    let (n2, l2) = &logs[1];
    if n1 == n2 {
        return Err(Error::InvalidArgument("sizes must differ".into()));
    }
    let dn = Rational::from_integer((*n2 as i64 - *n1 as i64).into());
    let ln_zeta = l2.sub(l1)?.scale(&(Rational::one() / dn));
    let ln_alpha = l1.sub(&ln_zeta.scale(&Rational::from_integer((*n1).into())))?;
    for (n, l) in &logs[2..] {
        let predicted = ln_alpha.add(&ln_zeta.scale(&Rational::from_integer((*n).into())))?;
        if predicted.sub(l)?.valuation().is_some() {
            return Err(Error::InconsistentSizes(*n));
        }
    }
    CutSignature::new(kind, ln_zeta.neg(), ln_alpha.exp()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use crate::architectures::{eigen_data, reliability_range, Family};
    use num_traits::Zero;

    fn s(c: &[i64], var: Var, k: usize) -> TruncSeries {
        TruncSeries::from_ints(c, var, k)
    }

    #[test]
    fn k4_series() {
        let dom = dominant_eigen_series(&eigen_data(Family::K4Ladder).unwrap(), 8).unwrap();
        let decay = dom.zeta_plus.log().unwrap().neg();
        let mut expected = vec![rat_int(0); 9];
        expected[4] = rat_int(1);
        expected[5] = rat_int(2);
        expected[7] = rat_int(-4);
        expected[8] = rat(9, 2);
        assert_eq!(decay.coeffs(), &expected[..]);
        assert_eq!(dom.alpha_plus.truncate(7), s(&[1, 0, 0, -2, 0, 4, -3, 6], Var::Q, 7));
    }

    #[test]
    fn street_series() {
        let dom = dominant_eigen_series(&eigen_data(Family::Street3xN).unwrap(), 6).unwrap();
        assert_eq!(dom.zeta_plus, s(&[1, 0, 0, -1, -4, -4, 14], Var::Q, 6));
        assert_eq!(dom.alpha_plus, s(&[1, 0, -2, -4, 7, 22, 20], Var::Q, 6));
    }

    #[test]
    fn double_fan_series() {
        let dom = dominant_eigen_series(&eigen_data(Family::DoubleFan).unwrap(), 5).unwrap();
        assert_eq!(dom.zeta_plus, s(&[1, 0, -1, -2, 2, 4], Var::P, 5));
        assert_eq!(dom.alpha_plus, s(&[1, 0, 0, 2, 0, -8], Var::P, 5));
    }

    #[test]
    fn fan_is_degenerate() {
        let ed = eigen_data(Family::GeneralizedFan).unwrap();
        assert_eq!(signature_from_eigen(&ed, SignatureKind::SeriesLike, 6), Err(Error::DegenerateRoot));
    }

    #[test]
    fn kind_mismatch_rejected() {
        let ed = eigen_data(Family::DoubleFan).unwrap();
        assert!(signature_from_eigen(&ed, SignatureKind::SeriesLike, 6).is_err());
    }

    #[test]
    fn extraction_matches_eigen() {
        for family in [Family::Series, Family::Parallel, Family::K4Ladder, Family::DoubleFan, Family::Street3xN] {
            let ed = eigen_data(family).unwrap();
            let kind = match ed {
                EigenData::TwoEigen { tracked: Tracked::Unavailability, .. }
                | EigenData::Explicit { tracked: Tracked::Unavailability, .. } => SignatureKind::ParallelLike,
                _ => SignatureKind::SeriesLike,
            };
            let from_eigen = signature_from_eigen(&ed, kind, 8).unwrap();
            let polys = reliability_range(family, 20, 22).unwrap();
            for pair in [[0, 1, 2], [0, 2, 1], [1, 2, 0]] {
                let chosen: Vec<_> = pair.iter().map(|&j| polys[j].clone()).collect();
                let from_polys = signature_from_polynomials(&chosen, kind, 8).unwrap();
                assert_eq!(from_polys, from_eigen, "{family}");
            }
        }
    }

    #[test]
    fn extraction_detects_inconsistency() {
        // a saturating family is not of the form alpha zeta^n
        let polys = reliability_range(Family::GeneralizedFan, 3, 5).unwrap();
        assert!(matches!(
            signature_from_polynomials(&polys, SignatureKind::SeriesLike, 8),
            Err(Error::InconsistentSizes(_))
        ));
    }

    #[test]
    fn series_family_signature() {
        let polys = reliability_range(Family::Series, 3, 5).unwrap();
        let sig = signature_from_polynomials(&polys, SignatureKind::SeriesLike, 6).unwrap();
        assert_eq!(sig.i, 1);
        for j in 1..=6 {
            assert_eq!(sig.alpha(j).unwrap(), rat(1, j as i64));
            assert!(sig.alpha_prime(j).unwrap().is_zero());
        }
    }
}
