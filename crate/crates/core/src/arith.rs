//! Factorization, divisors and the multiplicative functions `μ`, `ω`, `τ`.
//!
//! Values that fit in a `u64` are factored by trial division up to
//! [`TRIAL_BOUND`]; a remaining cofactor is certified prime by a
//! deterministic Miller-Rabin test (the first twelve prime bases are exact
//! below 3.3·10²⁴) or split with Pollard-Brent using fixed parameters, so
//! the result never depends on randomness. Larger values fall back to
//! trial division over `BigInt` until the cofactor fits in a `u64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Trial division limit for the `u64` path.
pub const TRIAL_BOUND: u64 = 1 << 20;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: BigInt,
    factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigInt, u32)] {
        &self.factors
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn tau(&self) -> BigInt {
        self.factors
            .iter()
            .map(|(_, e)| BigInt::from(*e + 1))
            .product()
    }

    pub fn mobius(&self) -> i8 {
        if self.factors.iter().any(|(_, e)| *e > 1) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// All divisors in increasing order.
    pub fn divisors(&self) -> Vec<BigInt> {
        let mut divs = vec![BigInt::one()];
        for (p, e) in &self.factors {
            let len = divs.len();
            let mut pk = BigInt::one();
            for _ in 0..*e {
                pk *= p;
                for i in 0..len {
                    let d = &divs[i] * &pk;
                    divs.push(d);
                }
            }
        }
        divs.sort();
        divs
    }

    /// `(s, f)` with `value = s·f²` and `s` squarefree.
    pub fn squarefree_part(&self) -> (BigInt, BigInt) {
        let mut s = BigInt::one();
        let mut f = BigInt::one();
        for (p, e) in &self.factors {
            if e % 2 == 1 {
                s *= p;
            }
            f *= num_traits::pow(p.clone(), (e / 2) as usize);
        }
        (s, f)
    }
}

fn check_positive(what: &'static str, n: &BigInt) -> Result<()> {
    if n.is_positive() {
        Ok(())
    } else {
        Err(Error::non_positive(what, n))
    }
}

pub fn factorize(n: &BigInt) -> Result<Factorization> {
    check_positive("n", n)?;
    let factors = match n.to_u64() {
        Some(v) => factor_u64(v)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect(),
        None => factor_big(n),
    };
    Ok(Factorization {
        value: n.clone(),
        factors,
    })
}

pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    Ok(factorize(n)?.divisors())
}

pub fn squarefree_part(n: &BigInt) -> Result<(BigInt, BigInt)> {
    Ok(factorize(n)?.squarefree_part())
}

pub fn mobius(n: &BigInt) -> Result<i8> {
    Ok(factorize(n)?.mobius())
}

pub fn omega(n: &BigInt) -> Result<usize> {
    Ok(factorize(n)?.omega())
}

pub fn tau(n: &BigInt) -> Result<BigInt> {
    Ok(factorize(n)?.tau())
}

pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    Ok(factorize(n)?.is_squarefree())
}

/// Errors unless `d` is a positive squarefree integer.
pub fn ensure_squarefree(d: &BigInt) -> Result<()> {
    check_positive("D", d)?;
    if is_squarefree(d)? {
        Ok(())
    } else {
        Err(Error::NotSquarefree(d.clone()))
    }
}

/// Exact square root of a non-negative perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Largest `t ≥ 0` with `t⁴ ≤ n`.
pub fn fourth_root_floor(n: &BigInt) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    n.sqrt().sqrt()
}

/// Smallest `t ≥ 0` with `t² ≥ n`.
pub fn sqrt_ceil(n: &BigInt) -> BigInt {
    if !n.is_positive() {
        return BigInt::zero();
    }
    let s = n.sqrt();
    if &s * &s == *n {
        s
    } else {
        s + 1
    }
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // 6k ± 1 wheel
    let mut d = 5u64;
    let mut step = 2u64;
    while d <= TRIAL_BOUND && d.saturating_mul(d) <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        if d.saturating_mul(d) > n || is_prime_u64(n) {
            out.push((n, 1));
        } else {
            let mut big = Vec::new();
            split_large(n, &mut big);
            big.sort_unstable();
            for p in big {
                match out.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => out.push((p, 1)),
                }
            }
        }
    }
    out
}

/// Splits a composite with no prime factor below [`TRIAL_BOUND`] into primes.
fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent with fixed starting points; `n` must be an odd composite.
fn pollard_brent(n: u64) -> u64 {
    for c in 1..n {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard_brent called on a prime")
}

fn factor_big(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    loop {
        if let Some(v) = n.to_u64() {
            // every prime below d has already been divided out
            out.extend(
                factor_u64(v)
                    .into_iter()
                    .map(|(p, e)| (BigInt::from(p), e)),
            );
            break;
        }
        if &d * &d > n {
            out.push((n, 1));
            break;
        }
        let mut e = 0;
        while n.is_multiple_of(&d) {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn pairs(f: &Factorization) -> Vec<(i64, u32)> {
        f.factors()
            .iter()
            .map(|(p, e)| (p.to_i64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(&big(1)).unwrap().factors().is_empty());
        assert_eq!(pairs(&factorize(&big(45)).unwrap()), vec![(3, 2), (5, 1)]);
        assert_eq!(
            pairs(&factorize(&big(2880)).unwrap()),
            vec![(2, 6), (3, 2), (5, 1)]
        );
    }

    #[test]
    fn rejects_non_positive() {
        for n in [0, -1, -45] {
            assert!(matches!(
                factorize(&big(n)),
                Err(Error::NonPositive { .. })
            ));
            assert!(divisors(&big(n)).is_err());
            assert!(squarefree_part(&big(n)).is_err());
            assert!(mobius(&big(n)).is_err());
            assert!(omega(&big(n)).is_err());
            assert!(tau(&big(n)).is_err());
        }
    }

    #[test]
    fn divisor_examples() {
        let d = |n| -> Vec<i64> {
            divisors(&big(n))
                .unwrap()
                .iter()
                .map(|x| x.to_i64().unwrap())
                .collect()
        };
        assert_eq!(d(1), vec![1]);
        assert_eq!(d(24), vec![1, 2, 3, 4, 6, 8, 12, 24]);
        assert_eq!(d(45), vec![1, 3, 5, 9, 15, 45]);
    }

    #[test]
    fn squarefree_part_examples() {
        assert_eq!(squarefree_part(&big(1)).unwrap(), (big(1), big(1)));
        assert_eq!(squarefree_part(&big(2880)).unwrap(), (big(5), big(24)));
        assert_eq!(squarefree_part(&big(153)).unwrap(), (big(17), big(3)));
    }

    #[test]
    fn multiplicative_function_examples() {
        assert_eq!(
            (mobius(&big(1)).unwrap(), omega(&big(1)).unwrap(), tau(&big(1)).unwrap()),
            (1, 0, big(1))
        );
        assert_eq!(
            (mobius(&big(45)).unwrap(), omega(&big(45)).unwrap(), tau(&big(45)).unwrap()),
            (0, 2, big(6))
        );
        assert_eq!(
            (mobius(&big(30)).unwrap(), omega(&big(30)).unwrap(), tau(&big(30)).unwrap()),
            (-1, 3, big(8))
        );
    }

    #[test]
    fn large_u64_values() {
        // two primes above the trial bound
        let p = 2_147_483_647u64;
        let q = 1_000_000_007u64;
        let f = factorize(&BigInt::from(p * q)).unwrap();
        assert_eq!(
            f.factors(),
            &[(BigInt::from(q), 1), (BigInt::from(p), 1)]
        );
        let prime = 18_446_744_073_709_551_557u64;
        let f = factorize(&BigInt::from(prime)).unwrap();
        assert_eq!(f.factors(), &[(BigInt::from(prime), 1)]);
        let sq = 4_294_967_291u64; // prime, sq² < 2⁶⁴
        let f = factorize(&(BigInt::from(sq) * sq)).unwrap();
        assert_eq!(f.factors(), &[(BigInt::from(sq), 2)]);
    }

    #[test]
    fn beyond_u64_falls_back() {
        let n = num_traits::pow(big(2), 70) * big(243) * big(1_000_000_007);
        let f = factorize(&n).unwrap();
        assert_eq!(
            f.factors(),
            &[(big(2), 70), (big(3), 5), (big(1_000_000_007), 1)]
        );
        let back: BigInt = f
            .factors()
            .iter()
            .map(|(p, e)| num_traits::pow(p.clone(), *e as usize))
            .product();
        assert_eq!(back, n);
    }

    #[test]
    fn reconstruction_up_to_a_million() {
        for n in 1..=1_000_000u64 {
            let f = factor_u64(n);
            let mut prev = 1;
            let mut prod = 1u64;
            for (p, e) in f {
                assert!(p > prev && is_prime_u64(p));
                prev = p;
                prod *= p.pow(e);
            }
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..20_000u64 {
            let slow = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), slow, "n = {n}");
        }
    }

    #[test]
    fn mobius_sums_over_divisors() {
        for n in 1..=2000 {
            let f = factorize(&big(n)).unwrap();
            let sum: i64 = f
                .divisors()
                .iter()
                .map(|d| mobius(d).unwrap() as i64)
                .sum();
            assert_eq!(sum, if n == 1 { 1 } else { 0 }, "n = {n}");
            assert_eq!(f.tau(), BigInt::from(f.divisors().len()));
            let (s, sq) = f.squarefree_part();
            assert_eq!(&s * &sq * &sq, big(n));
            assert_ne!(mobius(&s).unwrap(), 0);
        }
    }

    #[test]
    fn root_helpers() {
        assert_eq!(exact_sqrt(&big(2880)), None);
        assert_eq!(exact_sqrt(&big(3721)), Some(big(61)));
        assert_eq!(fourth_root_floor(&big(80)), big(2));
        assert_eq!(fourth_root_floor(&big(81)), big(3));
        assert_eq!(sqrt_ceil(&big(10)), big(4));
        assert_eq!(sqrt_ceil(&big(9)), big(3));
    }
}
