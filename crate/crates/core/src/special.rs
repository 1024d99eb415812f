//! Special functions at the accuracy the expansions need (~1e-13 relative).
//!
//! Gamma and digamma come from `statrs`; polygamma of order >= 1 and the
//! zeta functions are evaluated here through Euler-Maclaurin summation of the
//! Hurwitz zeta function.

use statrs::function::gamma as sg;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn gamma(x: f64) -> f64 {
    sg::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    sg::ln_gamma(x)
}

pub fn digamma(x: f64) -> f64 {
    sg::digamma(x)
}

/// B_{2k} for k = 1..=10.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Hurwitz zeta `sum_{j>=0} (a + j)^{-s}` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    const SHIFT: usize = 16;
    let mut sum = 0.0;
    for j in 0..SHIFT {
        sum += (a + j as f64).powf(-s);
    }
    let x = a + SHIFT as f64;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // Euler-Maclaurin tail: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * x^{-s-2k+1}
    let mut rising = s; // s(s+1)...(s+2k-2)
    let mut fact = 2.0; // (2k)!
    let mut xpow = x.powf(-s - 1.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / fact * rising * xpow;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let k = (k + 1) as f64;
        rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        xpow /= x * x;
    }
    sum
}

/// `psi^{(k)}(x)`, the k-th derivative of the digamma function, `x > 0`.
pub fn polygamma(k: u32, x: f64) -> f64 {
    if k == 0 {
        return digamma(x);
    }
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * factorial(k) * hurwitz_zeta(k as f64 + 1.0, x)
}

/// Riemann zeta at a nonnegative integer; `zeta(0) = -1/2`, pole at 1.
pub fn riemann_zeta(s: u32) -> f64 {
    match s {
        0 => -0.5,
        1 => f64::INFINITY,
        _ => hurwitz_zeta(s as f64, 1.0),
    }
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn zeta_values() {
        assert!(close(riemann_zeta(2), PI * PI / 6.0, 1e-14));
        assert!(close(riemann_zeta(4), PI.powi(4) / 90.0, 1e-14));
        assert!(close(riemann_zeta(3), 1.202_056_903_159_594_3, 1e-14));
        assert_eq!(riemann_zeta(0), -0.5);
    }

    #[test]
    fn trigamma_reflection() {
        // psi'(x) + psi'(1 - x) = pi^2 / sin^2(pi x)
        for &x in &[1.0 / 3.0, 0.25, 0.1, 0.5] {
            let lhs = polygamma(1, x) + polygamma(1, 1.0 - x);
            let rhs = PI * PI / (PI * x).sin().powi(2);
            assert!(close(lhs, rhs, 1e-13), "{x}: {lhs} vs {rhs}");
        }
        assert!(close(polygamma(1, 1.0), PI * PI / 6.0, 1e-14));
        assert!(close(polygamma(1, 1.0 / 3.0), 10.095_597_125_427_094, 1e-13));
    }

    #[test]
    fn polygamma_recurrence() {
        // psi^{(k)}(x+1) = psi^{(k)}(x) + (-1)^k k! x^{-k-1}
        for k in 0..6u32 {
            for &x in &[0.3, 1.7, 4.2] {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let lhs = polygamma(k, x + 1.0);
                let step = sign * factorial(k) * x.powi(-(k as i32) - 1);
                let rhs = polygamma(k, x) + step;
                assert!((lhs - rhs).abs() <= 1e-13 * step.abs().max(1.0), "k={k} x={x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn digamma_reflection() {
        // psi(1 - x) - psi(x) = pi cot(pi x)
        let x = 1.0 / 3.0;
        assert!(close(digamma(1.0 - x) - digamma(x), PI / (PI * x).tan(), 1e-13));
        assert!(close(digamma(1.0), -EULER_GAMMA, 1e-14));
    }

    #[test]
    fn gamma_values() {
        assert!(close(gamma(0.5), PI.sqrt(), 1e-14));
        assert!(close(gamma(1.25), 0.906_402_477_055_477, 1e-13));
        assert!(close(gamma(5.0), 24.0, 1e-14));
    }
}
