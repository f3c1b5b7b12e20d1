//! Shared oracles and grids for the integration tests.
//!
//! The Dirichlet-series oracles never touch a lattice sum: they evaluate
//! the Hurwitz zeta function by Euler-Maclaurin summation and combine it
//! into ζ(s), the Dirichlet beta function and L(s, χ₋₃).

#![allow(dead_code)]

use iwr::arith;
use num_bigint::BigInt;

/// `B_{2j}/(2j)!` for `j = 1..=8`.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// `ζ(s, a) = Σ_{n≥0} (n + a)^{−s}` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const N: usize = 30;
    let head: f64 = (0..N).map(|n| (n as f64 + a).powf(-s)).sum();
    let x = N as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial s(s+1)...(s+2j−2) times x^{−s−2j+1}
    let mut rising = s;
    let mut power = x.powf(-s - 1.0);
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        tail += b * rising * power;
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        power /= x * x;
    }
    head + tail
}

pub fn riemann_zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

/// `β(s) = Σ (−1)^n (2n + 1)^{−s}`.
pub fn dirichlet_beta(s: f64) -> f64 {
    4f64.powf(-s) * (hurwitz_zeta(s, 0.25) - hurwitz_zeta(s, 0.75))
}

/// `L(s, χ₋₃) = Σ [(3n + 1)^{−s} − (3n + 2)^{−s}]`.
pub fn l_minus3(s: f64) -> f64 {
    3f64.powf(-s) * (hurwitz_zeta(s, 1.0 / 3.0) - hurwitz_zeta(s, 2.0 / 3.0))
}

/// `E(s)` of `x² + xy + y²`.
pub fn hexagonal_closed_form(s: f64) -> f64 {
    6.0 * riemann_zeta(s) * l_minus3(s)
}

/// `E(s)` of `x² + y²`.
pub fn square_closed_form(s: f64) -> f64 {
    4.0 * riemann_zeta(s) * dirichlet_beta(s)
}

pub fn squarefree_up_to(n: i64) -> Vec<i64> {
    (1..=n)
        .filter(|&d| arith::is_squarefree(&BigInt::from(d)).unwrap())
        .collect()
}

/// `(M, D)` with `M ≤ m_max` and squarefree `D ≤ d_max`.
pub fn grid(m_max: i64, d_max: i64) -> Vec<(i64, i64)> {
    let ds = squarefree_up_to(d_max);
    (1..=m_max)
        .flat_map(|m| ds.iter().map(move |&d| (m, d)))
        .collect()
}
