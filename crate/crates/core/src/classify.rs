//! Asymptotic regime of a family: does `R_n` go to 0, to 1, or to an
//! interior limit as `n` grows?

use std::fmt;

use crate::algebra::{rat, to_f64, RatPoly, Rational};
use crate::architectures::{fan_limit, reliability_range, Family};
use crate::asymptotics::SignatureKind;
use crate::error::{Error, Result};

/// Sizes at which `R_n(1/2)` is sampled.
pub const SAMPLE_SIZES: [u32; 3] = [4, 8, 16];

/// An extrapolated limit this close to 0 or 1 counts as the boundary.
const BOUNDARY_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub enum RegimeLabel {
    SeriesLike,
    ParallelLike,
    /// `R_n -> R_inf` with `0 < R_inf < 1`. `closed_form` holds
    /// `(numerator, denominator)` of `R_inf(p)` when it is known.
    Saturating {
        r_infinity_at_half: f64,
        closed_form: Option<(RatPoly, RatPoly)>,
    },
}

impl RegimeLabel {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeLabel::SeriesLike => "series-like",
            RegimeLabel::ParallelLike => "parallel-like",
            RegimeLabel::Saturating { .. } => "saturating",
        }
    }

    /// The signature kind the asymptotic machinery should use, if any.
    pub fn signature_kind(&self) -> Option<SignatureKind> {
        match self {
            RegimeLabel::SeriesLike => Some(SignatureKind::SeriesLike),
            RegimeLabel::ParallelLike => Some(SignatureKind::ParallelLike),
            RegimeLabel::Saturating { .. } => None,
        }
    }

    fn same_kind(&self, other: &RegimeLabel) -> bool {
        self.name() == other.name()
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Known regime of each built-in family.
pub fn expected_regime(family: Family) -> RegimeLabel {
    match family {
        Family::Series | Family::K4Ladder | Family::Street3xN => RegimeLabel::SeriesLike,
        Family::Parallel | Family::DoubleFan | Family::KOutOfN { .. } => RegimeLabel::ParallelLike,
        Family::GeneralizedFan => {
            let (num, den) = fan_limit();
            let half = rat(1, 2);
            RegimeLabel::Saturating {
                r_infinity_at_half: to_f64(&(num.eval(&half) / den.eval(&half))),
                closed_form: Some((num, den)),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: RegimeLabel,
    /// `(n, R_n(1/2))`, exact.
    pub samples: Vec<(u32, Rational)>,
    /// Geometric extrapolation of `R_n(1/2)`; `None` when the differences do
    /// not contract.
    pub extrapolated_limit: Option<f64>,
}

/// Numeric classification from `R_n(1/2)` at `n = 4, 8, 16`.
///
/// The samples must be monotone. When successive differences contract, the
/// limit is extrapolated geometrically and compared with the endpoints;
/// otherwise the direction of motion decides. An interior limit additionally
/// needs `|R_16 - R_8| < R_8 2^(-8/4)`.
pub fn classify_numeric(family: Family) -> Result<Classification> {
    let half = rat(1, 2);
    let samples: Vec<(u32, Rational)> = match family {
        Family::KOutOfN { .. } => SAMPLE_SIZES
            .iter()
            .map(|&n| {
                let arch = crate::architectures::Architecture::new(family, n)?;
                Ok((n, crate::architectures::reliability_polynomial(&arch)?.eval(&half)))
            })
            .collect::<Result<_>>()?,
        _ => reliability_range(family, SAMPLE_SIZES[0], SAMPLE_SIZES[2])?
            .into_iter()
            .filter(|(n, _)| SAMPLE_SIZES.contains(n))
            .map(|(n, r)| (n, r.eval(&half)))
            .collect(),
    };
    let x: Vec<f64> = samples.iter().map(|(_, v)| to_f64(v)).collect();
    let (d1, d2) = (x[1] - x[0], x[2] - x[1]);
    let increasing = d1 > 0.0 && d2 >= 0.0;
    let decreasing = d1 < 0.0 && d2 <= 0.0;
    if !(increasing || decreasing) {
        return Err(Error::Inconclusive(format!("R_n(1/2) is not monotone: {x:?}")));
    }
    let ratio = d2 / d1;
    let extrapolated = (ratio < 1.0).then(|| x[2] + d2 * ratio / (1.0 - ratio));
    let label = match extrapolated {
        None if decreasing => RegimeLabel::SeriesLike,
        None => RegimeLabel::ParallelLike,
        Some(l) if l <= BOUNDARY_TOL => RegimeLabel::SeriesLike,
        Some(l) if l >= 1.0 - BOUNDARY_TOL => RegimeLabel::ParallelLike,
        Some(l) => {
            let converged = d2.abs() < x[1] * 2f64.powf(-(SAMPLE_SIZES[1] as f64) / 4.0);
            if !converged {
                return Err(Error::Inconclusive(format!("interior limit {l} not reached: {x:?}")));
            }
            RegimeLabel::Saturating { r_infinity_at_half: l, closed_form: None }
        }
    };
    Ok(Classification { label, samples, extrapolated_limit: extrapolated })
}

/// Numeric classification checked against the family's known regime. For
/// saturating families the known closed form of `R_inf` is attached.
pub fn classify(family: Family) -> Result<Classification> {
    let mut c = classify_numeric(family)?;
    let expected = expected_regime(family);
    if !c.label.same_kind(&expected) {
        return Err(Error::Inconclusive(format!("numeric test gives {} but {family} is {expected}", c.label)));
    }
    if let RegimeLabel::Saturating { .. } = expected {
        c.label = expected;
    }
    Ok(c)
}
