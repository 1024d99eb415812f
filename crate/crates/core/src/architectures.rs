//! The built-in recursive families: exact reliability polynomials, the
//! eigen-structure used by the asymptotic analysis, and explicit graphs for
//! brute-force validation.
//!
//! Topologies (node numbering is part of the public contract, tests pin it):
//!
//! * K4 ladder: nodes `a_i = 2i`, `b_i = 2i + 1` for `i = 0..=n`; cell `i` is
//!   the complete graph on `{a_{i-1}, b_{i-1}, a_i, b_i}` with the rung
//!   `a_i b_i` shared by consecutive cells. Terminals `a_0`, `a_n`.
//! * Generalized fan: path `S_0 .. S_n` (nodes `0..=n`) plus a hub `T`
//!   (node `n + 1`) adjacent to every `S_i`. Terminals `S_0`, `S_n`.
//! * Double fan: terminals `S = 0`, `T = 1`, both adjacent to each of
//!   `V_1 .. V_n` (nodes `2..n+2`), plus the chain `V_i V_{i+1}`.
//! * Street 3 x n: a 3-row by `(n + 1)`-column grid, rows `S`, `T`, `U`; node
//!   `(r, c)` is `r * (n + 1) + c`. Terminals `S_0`, `U_n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{binomial, rat, RatPoly, Rational, Var};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Series,
    Parallel,
    KOutOfN { k: u32 },
    K4Ladder,
    GeneralizedFan,
    DoubleFan,
    Street3xN,
}

impl Family {
    /// Every family with a fixed structure (k-out-of-n needs its `k`).
    pub const RECURSIVE: [Family; 6] = [
        Family::Series,
        Family::Parallel,
        Family::K4Ladder,
        Family::GeneralizedFan,
        Family::DoubleFan,
        Family::Street3xN,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Series => "series",
            Family::Parallel => "parallel",
            Family::KOutOfN { .. } => "kofn",
            Family::K4Ladder => "k4ladder",
            Family::GeneralizedFan => "fan",
            Family::DoubleFan => "doublefan",
            Family::Street3xN => "street3xn",
        }
    }

    /// Smallest admissible size index.
    pub fn min_n(&self) -> u32 {
        match self {
            Family::K4Ladder | Family::Street3xN => 0,
            _ => 1,
        }
    }

    /// Number of edges in the size-`n` graph realization.
    pub fn edge_count(&self, n: u32) -> Option<usize> {
        let n = n as usize;
        match self {
            Family::Series | Family::Parallel => Some(n),
            Family::KOutOfN { .. } => None,
            Family::K4Ladder => Some(5 * n + 1),
            Family::GeneralizedFan => Some(2 * n + 1),
            Family::DoubleFan => Some(3 * n - 1),
            Family::Street3xN => Some(5 * n + 2),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::KOutOfN { k } => write!(f, "kofn(k={k})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses a family name. `kofn` parses with `k = 1`; callers set `k`.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "series" => Family::Series,
            "parallel" => Family::Parallel,
            "kofn" | "koutofn" => Family::KOutOfN { k: 1 },
            "k4ladder" | "k4" => Family::K4Ladder,
            "fan" | "generalizedfan" => Family::GeneralizedFan,
            "doublefan" => Family::DoubleFan,
            "street3xn" | "street" => Family::Street3xN,
            _ => return Err(Error::InvalidArgument(format!("unknown family '{s}'"))),
        })
    }
}

/// A family together with its size index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Architecture {
    family: Family,
    n: u32,
}

impl Architecture {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        if n < family.min_n() {
            return Err(Error::InvalidArgument(format!("{family} needs n >= {}", family.min_n())));
        }
        if let Family::KOutOfN { k } = family {
            if k < 1 || k > n {
                return Err(Error::InvalidArgument(format!("k-out-of-n needs 1 <= k <= n, got k={k}, n={n}")));
            }
        }
        Ok(Architecture { family, n })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

fn p_poly(c: &[i64]) -> RatPoly {
    RatPoly::from_ints(c, Var::P)
}

/// `sign * p^a * (1-p)^b * poly(p)`
fn pq(sign: i64, a: usize, b: u32, poly: &[i64]) -> RatPoly {
    let head = RatPoly::monomial(Rational::from_integer(sign.into()), a, Var::P);
    &(&head * &RatPoly::one_minus_x(Var::P).pow(b)) * &p_poly(poly)
}

fn k4_trace() -> RatPoly {
    pq(1, 1, 0, &[2, 4, -14, 13, -4])
}

fn k4_det() -> RatPoly {
    pq(1, 3, 0, &[4, -18, 36, -42, 30, -12, 2])
}

fn k4_first() -> RatPoly {
    pq(1, 1, 0, &[1, 2, 0, -7, 7, -2])
}

fn double_fan_trace() -> RatPoly {
    // (1-p)(1 + 2p(1-p))
    pq(1, 0, 1, &[1, 2, -2])
}

fn double_fan_det() -> RatPoly {
    pq(1, 1, 3, &[1])
}

/// Numerator of the Street 3 x n generating function, indexed by the power
/// of `z`.
pub fn street_numerator() -> Vec<RatPoly> {
    vec![
        pq(1, 2, 0, &[1]),
        pq(-1, 4, 1, &[3, 3, -4]),
        pq(1, 6, 3, &[2, 11, -3, -2]),
        pq(1, 8, 3, &[2, -4, 3, 11, -13, 3]),
        pq(-1, 10, 4, &[3, 6, -12, 10, -10, 4]),
        pq(1, 12, 6, &[1, 8, -1, -5, -1, 1]),
        pq(-1, 15, 8, &[2, 5, -4]),
        pq(1, 18, 10, &[1]),
    ]
}

/// First denominator factor (its roots never dominate).
pub fn street_d1() -> Vec<RatPoly> {
    vec![
        p_poly(&[1]),
        &pq(-1, 1, 0, &[1, 1, -1]) * &p_poly(&[1, 0, -1]),
        pq(1, 3, 2, &[1, 1, 1, -2]),
        pq(-1, 6, 4, &[1]),
    ]
}

/// Second denominator factor, carrying the dominant eigenvalue.
pub fn street_d2() -> Vec<RatPoly> {
    vec![
        p_poly(&[1]),
        pq(-1, 1, 0, &[2, 2, 1, -9, 5]),
        pq(1, 2, 1, &[1, 5, 5, -6, -15, 13, 1, -2]),
        pq(-1, 4, 2, &[2, 6, 6, -26, 17, -18, 27, -16, 3]),
        pq(1, 6, 4, &[1, 6, 4, -1, -17, 9, 3, -2]),
        pq(-1, 9, 6, &[2, 4, 1, -7, 3]),
        pq(1, 12, 8, &[1]),
    ]
}

/// Product of two polynomials in `z` with polynomial coefficients.
pub fn z_product(a: &[RatPoly], b: &[RatPoly]) -> Vec<RatPoly> {
    let mut out = vec![RatPoly::zero(Var::P); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Street 3 x n reliabilities `R_0 ..= R_{n_max}` read off the generating
/// function `N / (D1 D2)`; `D(0) = 1` so the division is a plain recurrence.
fn street_sequence(n_max: u32) -> Vec<RatPoly> {
    let num = street_numerator();
    let den = z_product(&street_d1(), &street_d2());
    let mut out: Vec<RatPoly> = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max as usize {
        let mut r = num.get(n).cloned().unwrap_or_else(|| RatPoly::zero(Var::P));
        for (j, d) in den.iter().enumerate().skip(1).take(n) {
            r = &r - &(d * &out[n - j]);
        }
        out.push(r);
    }
    out
}

fn k4_sequence(n_max: u32) -> Vec<RatPoly> {
    // The two-eigenvalue closed form evaluated at n = 0 gives (1 + p)/2, which
    // is the value the three-term recursion needs as seed. Work with 2 R_n to
    // stay on the integer multiplication path.
    let trace = k4_trace();
    let det = k4_det();
    let two = Rational::from_integer(BigInt::from(2));
    let mut doubled = vec![p_poly(&[1, 1]), k4_first().scale(&two)];
    for n in 2..=n_max as usize {
        let next = &(&trace * &doubled[n - 1]) - &(&det * &doubled[n - 2]);
        doubled.push(next);
    }
    let half = rat(1, 2);
    let mut out: Vec<RatPoly> = doubled.iter().map(|d| d.scale(&half)).collect();
    // Coinciding terminals.
    out[0] = RatPoly::one(Var::P);
    out.truncate(n_max as usize + 1);
    out
}

fn double_fan_unavailability(n_max: u32) -> Vec<RatPoly> {
    let trace = double_fan_trace();
    let det = double_fan_det();
    let mut u = vec![p_poly(&[1]), p_poly(&[1, 0, -1])];
    for n in 2..=n_max as usize {
        let next = &(&trace * &u[n - 1]) - &(&det * &u[n - 2]);
        u.push(next);
    }
    u.truncate(n_max as usize + 1);
    u
}

fn generalized_fan(n: u32) -> Result<RatPoly> {
    let c = p_poly(&[1, -1, 1]);
    let c2 = &c * &c;
    let bracket = &c.shift_up(1).scale(&Rational::from_integer(n.into())) + &p_poly(&[1, 0, 1]);
    let tail = &pq(1, n as usize, n + 2, &[1]) * &bracket;
    let num = &p_poly(&[0, 0, 1]) + &tail;
    num.exact_div(&c2)
}

fn k_out_of_n(k: u32, n: u32) -> RatPoly {
    let mut acc = RatPoly::zero(Var::P);
    for i in k..=n {
        let c = binomial(n as u64, i as u64);
        let term = pq(1, i as usize, n - i, &[1]).scale(&Rational::from_integer(c));
        acc = &acc + &term;
    }
    acc
}

/// Exact two-terminal reliability polynomial in `p`.
///
/// For the K4 ladder and Street 3 x n, `n = 0` is accepted: the ladder then
/// has coinciding terminals (`R_0 = 1`) and the street is a two-edge path.
pub fn reliability_polynomial(arch: &Architecture) -> Result<RatPoly> {
    let n = arch.n;
    Ok(match arch.family {
        Family::Series => RatPoly::x(Var::P).pow(n),
        Family::Parallel => &RatPoly::one(Var::P) - &RatPoly::one_minus_x(Var::P).pow(n),
        Family::KOutOfN { k } => k_out_of_n(k, n),
        Family::K4Ladder => k4_sequence(n.max(1)).swap_remove(n as usize),
        Family::GeneralizedFan => generalized_fan(n)?,
        Family::DoubleFan => &RatPoly::one(Var::P) - &double_fan_unavailability(n).swap_remove(n as usize),
        Family::Street3xN => street_sequence(n).swap_remove(n as usize),
    })
}

/// `R_n` for every `n` in `n_lo..=n_hi`, sharing the recursion work.
pub fn reliability_range(family: Family, n_lo: u32, n_hi: u32) -> Result<Vec<(u32, RatPoly)>> {
    if n_lo > n_hi {
        return Ok(Vec::new());
    }
    Architecture::new(family, n_lo)?;
    let seq: Vec<RatPoly> = match family {
        Family::K4Ladder => k4_sequence(n_hi.max(1)),
        Family::Street3xN => street_sequence(n_hi),
        Family::DoubleFan => double_fan_unavailability(n_hi).into_iter().map(|u| &RatPoly::one(Var::P) - &u).collect(),
        _ => return (n_lo..=n_hi).map(|n| Ok((n, reliability_polynomial(&Architecture::new(family, n)?)?))).collect(),
    };
    Ok((n_lo..=n_hi).map(|n| (n, seq[n as usize].clone())).collect())
}

/// Graph realization whose two-terminal reliability is
/// [`reliability_polynomial`].
pub fn graph(arch: &Architecture) -> Result<Graph> {
    let n = arch.n as usize;
    match arch.family {
        Family::KOutOfN { .. } => Err(Error::NoGraphRealization(arch.family.to_string())),
        Family::Series => Graph::new(n + 1, (0..n).map(|i| (i, i + 1)).collect(), 0, n),
        Family::Parallel => Graph::new(2, vec![(0, 1); n], 0, 1),
        Family::K4Ladder => {
            if n == 0 {
                return Err(Error::Unsupported("K4 ladder with n = 0 has coinciding terminals".into()));
            }
            let a = |i: usize| 2 * i;
            let b = |i: usize| 2 * i + 1;
            let mut edges = vec![(a(0), b(0))];
            for i in 1..=n {
                edges.extend([(a(i - 1), a(i)), (a(i - 1), b(i)), (b(i - 1), a(i)), (b(i - 1), b(i)), (a(i), b(i))]);
            }
            Graph::new(2 * n + 2, edges, a(0), a(n))
        }
        Family::GeneralizedFan => {
            let hub = n + 1;
            let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
            edges.extend((0..=n).map(|i| (hub, i)));
            Graph::new(n + 2, edges, 0, n)
        }
        Family::DoubleFan => {
            let mut edges = Vec::new();
            for i in 0..n {
                edges.push((0, 2 + i));
                edges.push((2 + i, 1));
            }
            edges.extend((0..n.saturating_sub(1)).map(|i| (2 + i, 3 + i)));
            Graph::new(n + 2, edges, 0, 1)
        }
        Family::Street3xN => {
            let cols = n + 1;
            let idx = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for c in 0..cols {
                edges.push((idx(0, c), idx(1, c)));
                edges.push((idx(1, c), idx(2, c)));
            }
            for r in 0..3 {
                edges.extend((0..n).map(|c| (idx(r, c), idx(r, c + 1))));
            }
            Graph::new(3 * cols, edges, idx(0, 0), idx(2, n))
        }
    }
}

/// Which quantity an eigen-decomposition describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tracked {
    /// `R_n ~ alpha_+ zeta_+^n`, analysed near `p = 1`.
    Reliability,
    /// `1 - R_n ~ alpha_+ zeta_+^n`, analysed near `p = 0`.
    Unavailability,
}

/// Data from which the dominant eigenvalue and its amplitude are built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigenData {
    /// `x_n = trace x_{n-1} - det x_{n-2}` with seeds `x_0`, `x_1`.
    TwoEigen { trace: RatPoly, det: RatPoly, initial: (RatPoly, RatPoly), tracked: Tracked },
    /// Generating function `N / (D1 D2)` in `z` with the dominant pole a root
    /// of `D2`. Each vector is indexed by the power of `z`.
    DenominatorRoot { numerator: Vec<RatPoly>, d1: Vec<RatPoly>, d2: Vec<RatPoly> },
    /// Closed-form `zeta_+` and `alpha_+`.
    Explicit { zeta_plus: RatPoly, alpha_plus: RatPoly, tracked: Tracked },
    /// The decaying part is governed by a repeated eigenvalue; no simple
    /// dominant root exists.
    Degenerate { eigenvalue: RatPoly, multiplicity: u32 },
}

pub fn eigen_data(family: Family) -> Result<EigenData> {
    Ok(match family {
        Family::K4Ladder => EigenData::TwoEigen {
            trace: k4_trace(),
            det: k4_det(),
            initial: (p_poly(&[1, 1]).scale(&rat(1, 2)), k4_first()),
            tracked: Tracked::Reliability,
        },
        Family::DoubleFan => EigenData::TwoEigen {
            trace: double_fan_trace(),
            det: double_fan_det(),
            initial: (p_poly(&[1]), p_poly(&[1, 0, -1])),
            tracked: Tracked::Unavailability,
        },
        Family::Street3xN => {
            EigenData::DenominatorRoot { numerator: street_numerator(), d1: street_d1(), d2: street_d2() }
        }
        Family::Series => EigenData::Explicit {
            zeta_plus: RatPoly::x(Var::P),
            alpha_plus: RatPoly::one(Var::P),
            tracked: Tracked::Reliability,
        },
        Family::Parallel => EigenData::Explicit {
            zeta_plus: RatPoly::one_minus_x(Var::P),
            alpha_plus: RatPoly::one(Var::P),
            tracked: Tracked::Unavailability,
        },
        Family::GeneralizedFan => EigenData::Degenerate { eigenvalue: pq(1, 1, 1, &[1]), multiplicity: 2 },
        Family::KOutOfN { .. } => return Err(Error::Unsupported("k-out-of-n has no recursive eigen-structure".into())),
    })
}

/// Limit `R_inf = p^2 / (1 - p(1-p))^2` of the generalized fan, as
/// (numerator, denominator).
pub fn fan_limit() -> (RatPoly, RatPoly) {
    let c = p_poly(&[1, -1, 1]);
    (p_poly(&[0, 0, 1]), &c * &c)
}

/// `true` when `p` is an exact rational in `[0, 1]`.
pub fn is_probability(p: &Rational) -> bool {
    p >= &Rational::from_integer(0.into()) && p <= &Rational::one()
}
