//! IWR lattices of a fixed determinant `Δ = M·√D`, up to rotation and
//! reflection, and the counting functions behind their number.
//!
//! Every such lattice is `√(k/q)·Ω_D(p, q)` with `k·r = M`, so it suffices
//! to solve `q² − p² = r²D` for each divisor `r | M`. Writing `a = q − p`,
//! `b = q + p` turns this into a divisor problem for `c = r²D`: `ab = c`,
//! `a ≡ b (mod 2)`, and the angle condition `0 < p/q ≤ 1/2` becomes the
//! window `c < b² ≤ 3c`.
//!
//! For each `r`:
//! - `f(r)` counts primitive solutions inside the window,
//! - `f1(r)` counts primitive solutions with `p > 0` and no angle condition,
//! - `f2(r)` counts window solutions without the primitivity condition.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith;
use crate::classes::{class_from_mn, IwrLattice, SimilarityClass};
use crate::optimize::mn_set;
use crate::{Error, Result};

/// Determinant `Δ = M·√D` of an IWR lattice, held as the exact pair `(M, D)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeterminantSpec {
    m: BigInt,
    d: BigInt,
}

impl DeterminantSpec {
    pub fn new(m: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (m, d) = (m.into(), d.into());
        if !m.is_positive() {
            return Err(Error::non_positive("M", &m));
        }
        arith::ensure_squarefree(&d)?;
        Ok(DeterminantSpec { m, d })
    }

    pub(crate) fn new_unchecked(m: BigInt, d: BigInt) -> Self {
        DeterminantSpec { m, d }
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn pair(&self) -> (&BigInt, &BigInt) {
        (&self.m, &self.d)
    }

    /// `M·√D` as a float.
    pub fn value(&self) -> f64 {
        to_f64(&self.m) * to_f64(&self.d).sqrt()
    }
}

impl fmt::Display for DeterminantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*sqrt({})", self.m, self.d)
    }
}

pub(crate) fn to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

fn check_r_d(r: &BigInt, d: &BigInt) -> Result<()> {
    if !r.is_positive() {
        return Err(Error::non_positive("r", r));
    }
    arith::ensure_squarefree(d)
}

/// Divisor pairs `(a, b)` of `c = r²D` with `c < b² ≤ 3c` and `a ≡ b (mod 2)`.
fn window_pairs(c: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    let three_c = BigInt::from(3) * c;
    Ok(arith::divisors(c)?
        .into_iter()
        .filter(|b| {
            let b2 = b * b;
            b2 > *c && b2 <= three_c
        })
        .map(|b| (c / &b, b))
        .filter(|(a, b)| (a + b).is_even())
        .collect())
}

/// Primitive solutions `(p, q)` of `q² − p² = r²D` with `0 < p/q ≤ 1/2`,
/// ordered by increasing `p`. With `include_p_zero`, the solution
/// `(0, 1)` is added when `r²D = 1`.
pub fn solutions_for_r(
    r: &BigInt,
    d: &BigInt,
    include_p_zero: bool,
) -> Result<Vec<(BigInt, BigInt)>> {
    check_r_d(r, d)?;
    let c = r * r * d;
    let mut out = Vec::new();
    if include_p_zero && c.is_one() {
        out.push((BigInt::zero(), BigInt::one()));
    }
    for (a, b) in window_pairs(&c)? {
        let p: BigInt = (&b - &a) / 2;
        let q = (&a + &b) / 2;
        if p.gcd(&q).is_one() {
            out.push((p, q));
        }
    }
    Ok(out)
}

pub fn f(r: &BigInt, d: &BigInt) -> Result<usize> {
    Ok(solutions_for_r(r, d, false)?.len())
}

/// Number of primitive `(p, q)`, `p > 0`, with `q² − p² = r²D`, from the
/// factorization of `c = r²D`:
///
/// - `2^{ω(c)−1}` if `c` is odd and `c > 1`, or if `8 | c` and `c` has an odd prime factor;
/// - `1` if `c = 2^j` with `j ≥ 3`;
/// - `0` otherwise (including `c ∈ {1, 2, 4}`).
pub fn f1(r: &BigInt, d: &BigInt) -> Result<usize> {
    check_r_d(r, d)?;
    let c = r * r * d;
    let fac = arith::factorize(&c)?;
    let two_exp = fac
        .factors()
        .first()
        .filter(|(p, _)| *p == BigInt::from(2))
        .map_or(0, |(_, e)| *e);
    let has_odd_prime = fac.omega() > usize::from(two_exp > 0);
    let half_power = || 1usize << (fac.omega() - 1);
    // odd c > 1, or 8 | c with an odd prime factor; 2^j alone gives 1 for j ≥ 3
    Ok(match (two_exp, has_odd_prime) {
        (0, true) | (3.., true) => half_power(),
        (3.., false) => 1,
        _ => 0,
    })
}

/// `f1` by direct search over divisor pairs `a < b`, `ab = r²D`.
pub fn f1_bruteforce(r: &BigInt, d: &BigInt) -> Result<usize> {
    check_r_d(r, d)?;
    let c = r * r * d;
    Ok(arith::divisors(&c)?
        .into_iter()
        .filter(|a| a * a < c)
        .filter(|a| {
            let b = &c / a;
            if !(a + &b).is_even() {
                return false;
            }
            let p: BigInt = (&b - a) / 2;
            let q = (a + &b) / 2;
            p.gcd(&q).is_one()
        })
        .count())
}

/// Window solutions `0 < p/q ≤ 1/2` without the primitivity condition.
pub fn f2(r: &BigInt, d: &BigInt) -> Result<usize> {
    check_r_d(r, d)?;
    Ok(window_pairs(&(r * r * d))?.len())
}

/// Checks `f2(r) = Σ_{g|r} f(r/g)` and `f(r) = Σ_{g|r} μ(r/g)·f2(g)`.
pub fn mobius_identity_check(r: &BigInt, d: &BigInt) -> Result<bool> {
    check_r_d(r, d)?;
    let divs = arith::divisors(r)?;
    let mut sum_f = 0i64;
    let mut inverted = 0i64;
    for g in &divs {
        let cofactor = r / g;
        sum_f += f(&cofactor, d)? as i64;
        inverted += arith::mobius(&cofactor)? as i64 * f2(g, d)? as i64;
    }
    Ok(sum_f == f2(r, d)? as i64 && inverted == f(r, d)? as i64)
}

fn sort_lattices(lattices: &mut [IwrLattice]) {
    lattices.sort_by(|x, y| {
        (x.minimum(), x.class().q(), x.class().p()).cmp(&(y.minimum(), y.class().q(), y.class().p()))
    });
}

/// All IWR lattices of determinant `M·√D` up to rotation and reflection,
/// sorted by `(minimum, q, p)`.
///
/// The square lattice `√M·ℤ²` (class `(0, 1, 1, 1)`, only for `D = 1`) is
/// listed only when `include_square_class` is set.
pub fn enumerate_iwr(spec: &DeterminantSpec, include_square_class: bool) -> Result<Vec<IwrLattice>> {
    let (m, d) = spec.pair();
    let per_divisor: Vec<Vec<IwrLattice>> = arith::divisors(m)?
        .into_par_iter()
        .map(|r| {
            let k = m / &r;
            solutions_for_r(&r, d, include_square_class)?
                .into_iter()
                .map(|(p, q)| {
                    let class = SimilarityClass::new(p, r.clone(), q, d.clone())?;
                    IwrLattice::new(class, k.clone())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<IwrLattice> = per_divisor.into_iter().flatten().collect();
    sort_lattices(&mut out);
    Ok(out)
}

/// The same set as [`enumerate_iwr`] with the square class included, built
/// from the `(m, n)` parameterization instead of the divisor window.
pub fn enumerate_iwr_via_mn(spec: &DeterminantSpec) -> Result<Vec<IwrLattice>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for pair in mn_set(spec)? {
        let class = class_from_mn(&pair)?;
        if seen.insert(class.triple()) {
            let k = spec.m() / class.r();
            out.push(IwrLattice::new(class, k)?);
        }
    }
    sort_lattices(&mut out);
    Ok(out)
}

/// `(1/2)·Σ_{r|M} 2^{ω(rD)}`.
pub fn count_bound(spec: &DeterminantSpec) -> Result<BigRational> {
    let (m, d) = spec.pair();
    let mut sum = BigInt::zero();
    for r in arith::divisors(m)? {
        sum += BigInt::one() << arith::omega(&(&r * d))?;
    }
    Ok(BigRational::new(sum, BigInt::from(2)))
}

/// `Σ_{r|M} Σ_{g|r} μ(r/g)·τ(g²D)/√ω(gD)`, skipping terms with `ω(gD) = 0`.
/// Reported for inspection only; it bounds the count up to an unspecified constant.
pub fn count_diagnostic(spec: &DeterminantSpec) -> Result<f64> {
    let (m, d) = spec.pair();
    let mut total = 0.0;
    for r in arith::divisors(m)? {
        for g in arith::divisors(&r)? {
            let w = arith::omega(&(&g * d))?;
            if w == 0 {
                continue;
            }
            let mu = arith::mobius(&(&r / &g))?;
            if mu == 0 {
                continue;
            }
            let tau = to_f64(&arith::tau(&(&g * &g * d))?);
            total += f64::from(mu) * tau / (w as f64).sqrt();
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountRow {
    pub r: BigInt,
    pub f: usize,
    pub f1: usize,
    pub f2: usize,
}

/// Per-divisor counts for `|IWR(M·√D)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub spec: DeterminantSpec,
    pub rows: Vec<CountRow>,
    /// `Σ_{r|M} f(r)`: lattices with `0 < p/q`.
    pub total: usize,
    /// `total` plus the square lattice when `D = 1`.
    pub total_with_square_class: usize,
    pub bound: BigRational,
    pub diagnostic: f64,
}

pub fn count(spec: &DeterminantSpec) -> Result<CountReport> {
    let (m, d) = spec.pair();
    let rows = arith::divisors(m)?
        .into_iter()
        .map(|r| {
            Ok(CountRow {
                f: f(&r, d)?,
                f1: f1(&r, d)?,
                f2: f2(&r, d)?,
                r,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = rows.iter().map(|row| row.f).sum();
    Ok(CountReport {
        spec: spec.clone(),
        total,
        total_with_square_class: total + usize::from(d.is_one()),
        bound: count_bound(spec)?,
        diagnostic: count_diagnostic(spec)?,
        rows,
    })
}
