//! Ground truth independent of the recursions: exhaustive state enumeration
//! and Monte-Carlo lifetime simulation.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{binomial, RatPoly, Rational, Var};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::moments::FailureModel;

pub const MAX_BRUTE_FORCE_EDGES: usize = 22;

/// Samples per deterministic RNG stream in [`mc_moments`].
const BLOCK: usize = 4096;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.size.fill(1);
    }
}

/// Number of up-edge subsets connecting source and target, by subset size.
pub fn connected_subset_counts(g: &Graph) -> Result<Vec<u64>> {
    let e = g.edge_count();
    if e > MAX_BRUTE_FORCE_EDGES {
        return Err(Error::TooManyEdges(e));
    }
    let total: u64 = 1 << e;
    let chunk: u64 = 1 << 12.min(e);
    let counts = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut uf = UnionFind::new(g.node_count());
            let mut counts = vec![0u64; e + 1];
            for mask in c * chunk..(c + 1) * chunk {
                uf.reset();
                for (j, &(u, v)) in g.edges().iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        uf.union(u, v);
                    }
                }
                if uf.find(g.source()) == uf.find(g.target()) {
                    counts[mask.count_ones() as usize] += 1;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; e + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts)
}

/// Exact two-terminal reliability by enumerating all `2^E` edge states.
pub fn brute_force_polynomial(g: &Graph) -> Result<RatPoly> {
    let counts = connected_subset_counts(g)?;
    let e = g.edge_count();
    // sum_k N_k p^k (1-p)^(E-k), expanded: coefficient of p^j is
    // sum_{k<=j} N_k C(E-k, j-k) (-1)^(j-k)
    let mut coeffs = vec![BigInt::from(0); e + 1];
    for (k, &n_k) in counts.iter().enumerate() {
        if n_k == 0 {
            continue;
        }
        for r in 0..=e - k {
            let term = BigInt::from(n_k) * binomial((e - k) as u64, r as u64);
            if r % 2 == 0 {
                coeffs[k + r] += term;
            } else {
                coeffs[k + r] -= term;
            }
        }
    }
    Ok(RatPoly::new(coeffs.into_iter().map(Rational::from_integer).collect(), Var::P))
}

/// System lifetime given one lifetime per edge: the largest `t` such that
/// the edges alive at `t` still connect source and target.
///
/// Edges are inserted in order of decreasing lifetime; the answer is the
/// lifetime of the edge that first joins the terminals. Returns 0 when the
/// terminals are never joined.
pub fn bottleneck_lifetime(g: &Graph, lifetimes: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| lifetimes[b].total_cmp(&lifetimes[a]));
    let mut uf = UnionFind::new(g.node_count());
    for j in order {
        let (u, v) = g.edges()[j];
        uf.union(u, v);
        if uf.find(g.source()) == uf.find(g.target()) {
            return lifetimes[j];
        }
    }
    0.0
}

/// One system lifetime with fresh edge lifetimes drawn from `model`.
pub fn lifetime_sample<R: Rng + ?Sized>(g: &Graph, model: &FailureModel, rng: &mut R) -> Result<f64> {
    let mut buf = Vec::with_capacity(g.edge_count());
    lifetime_sample_into(g, model, rng, &mut buf)
}

fn lifetime_sample_into<R: Rng + ?Sized>(
    g: &Graph,
    model: &FailureModel,
    rng: &mut R,
    buf: &mut Vec<f64>,
) -> Result<f64> {
    buf.clear();
    for _ in 0..g.edge_count() {
        // p(T > t) = p  <=>  T = chi(p) with p uniform on (0, 1]
        let u: f64 = 1.0 - rng.gen::<f64>();
        buf.push(model.chi(u)?);
    }
    Ok(bottleneck_lifetime(g, buf))
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn check_sampleable(g: &Graph, model: &FailureModel) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::InvalidArgument("graph is not connected".into()));
    }
    model.chi(0.5).map(|_| ())
}

/// `n_samples` system lifetimes. Sample `i` always comes from the same
/// RNG stream position, so the output does not depend on thread count.
pub fn sample_lifetimes(g: &Graph, model: &FailureModel, n_samples: usize, seed: u64) -> Result<Vec<f64>> {
    check_sampleable(g, model)?;
    let blocks = n_samples.div_ceil(BLOCK);
    let parts: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let len = BLOCK.min(n_samples - b * BLOCK);
            let mut buf = Vec::new();
            (0..len).map(|_| lifetime_sample_into(g, model, &mut rng, &mut buf)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(parts.concat())
}

/// Monte-Carlo estimate of `<t^m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub m: u32,
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean - exact| <= k * std_error`
    pub fn within(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.std_error
    }
}

/// Sample moments `<t^m>`, `m = 1..=m_max`, with standard errors.
///
/// Per-block sums are merged in block order, so the result is bitwise
/// reproducible for a fixed seed.
pub fn mc_moments(g: &Graph, model: &FailureModel, m_max: u32, n_samples: usize, seed: u64) -> Result<Vec<McEstimate>> {
    if n_samples < 1000 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least 1000 samples".into()));
    }
    if m_max == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    check_sampleable(g, model)?;
    let mm = m_max as usize;
    let blocks = n_samples.div_ceil(BLOCK);
    let sums: Vec<(Vec<f64>, Vec<f64>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let len = BLOCK.min(n_samples - b * BLOCK);
            let mut s1 = vec![0.0; mm];
            let mut s2 = vec![0.0; mm];
            let mut buf = Vec::new();
            for _ in 0..len {
                let t = lifetime_sample_into(g, model, &mut rng, &mut buf)?;
                let mut tm = 1.0;
                for m in 0..mm {
                    tm *= t;
                    s1[m] += tm;
                    s2[m] += tm * tm;
                }
            }
            Ok((s1, s2))
        })
        .collect::<Result<_>>()?;
    let mut s1 = vec![0.0; mm];
    let mut s2 = vec![0.0; mm];
    for (a, b) in sums {
        for m in 0..mm {
            s1[m] += a[m];
            s2[m] += b[m];
        }
    }
    let n = n_samples as f64;
    Ok((0..mm)
        .map(|m| {
            let mean = s1[m] / n;
            let var = ((s2[m] - n * mean * mean) / (n - 1.0)).max(0.0);
            McEstimate { m: m as u32 + 1, mean, std_error: (var / n).sqrt(), n_samples, seed }
        })
        .collect())
}

/// Two-sided Dvoretzky-Kiefer-Wolfowitz half-width for `n` samples at
/// confidence `1 - alpha`.
pub fn dkw_epsilon(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}
