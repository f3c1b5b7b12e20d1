//! The IWR lattice of a given determinant with the largest minimum.
//!
//! Every IWR lattice of determinant `M·√D` has the form `√(k/q)·Ω_D(p, q)`
//! for a class produced by some pair in [`mn_set`], with `k = M/r`. Its
//! minimum is `kq = M·(q/r)`, and `q/r = (m/n + D·n/m)/2`, so maximizing the
//! minimum means maximizing [`objective`] over the finite set `mn(M)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
#[cfg(test)]
use num_traits::ToPrimitive;

use crate::arith;
use crate::classes::{class_from_mn, in_band, IwrLattice, MnPair, SimilarityClass};
use crate::enumerate::{enumerate_iwr, DeterminantSpec};
use crate::{Error, Result};

/// All coprime `(m, n)` in the band `D·n² ≤ 3m²`, `m² ≤ 3D·n²` whose
/// `r = 2mn/(2^e·gcd(m, D))` divides `M`, ordered by `(n, m)`.
///
/// Loop bounds. Since `r | M` and `2^e·gcd(m, D) ≤ 2D`,
/// `2mn = r·2^e·gcd(m, D) ≤ 2DM`, so `mn ≤ DM`. Combining with the band:
///
/// - `n⁴ = n²·n² ≤ n²·(3m²/D) = 3(mn)²/D ≤ 3DM²`,
/// - `m⁴ = m²·m² ≤ m²·3Dn² = 3D(mn)² ≤ 3D³M²`.
///
/// So `n ≤ ⌊(3DM²)^{1/4}⌋` and, for each `n`, `m` ranges over
/// `⌈√(Dn²/3)⌉ ≤ m ≤ min(⌊√(3Dn²)⌋, ⌊DM/n⌋)`.
pub fn mn_set(spec: &DeterminantSpec) -> Result<Vec<MnPair>> {
    let (big_m, d) = spec.pair();
    let three = BigInt::from(3);
    let dm = d * big_m;
    let n_max = arith::fourth_root_floor(&(&three * d * big_m * big_m));
    let mut out = Vec::new();
    let mut n = BigInt::one();
    while n <= n_max {
        let dn2 = d * &n * &n;
        let m_lo = arith::sqrt_ceil(&dn2.div_ceil(&three)).max(BigInt::one());
        let m_hi = (&three * &dn2).sqrt().min(&dm / &n);
        let mut m = m_lo;
        while m <= m_hi {
            if in_band(&m, &n, d) && m.gcd(&n).is_one() {
                let pair = MnPair::new_unchecked(m.clone(), n.clone(), d.clone());
                if big_m.is_multiple_of(&pair.r_value()) {
                    out.push(pair);
                }
            }
            m += 1;
        }
        n += 1;
    }
    Ok(out)
}

/// `m/n + D·n/m = (m² + Dn²)/(mn)`, which equals `2q/r` for the pair's class.
pub fn objective(pair: &MnPair) -> BigRational {
    let (m, n, d) = (pair.m(), pair.n(), pair.d());
    BigRational::new(m * m + d * n * n, m * n)
}

/// Order in which [`optimize_with_order`] examines `mn(M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchOrder {
    /// By `(n, m)`, as produced by [`mn_set`].
    #[default]
    Natural,
    /// By `|m² − Dn²|` descending: pairs with `m/n` near the ends of the
    /// band first, where `q/r` is largest.
    Endpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    /// Canonical maximizer: the lattice of the smallest `(q, p)` among `maximizers`.
    pub lattice: IwrLattice,
    /// Every class attaining the maximal minimum, sorted by `(q, p)`.
    pub maximizers: Vec<SimilarityClass>,
    /// Position in the search order of the first pair reaching the optimum.
    pub first_hit: usize,
}

impl Optimum {
    pub fn minimum(&self) -> BigInt {
        self.lattice.minimum()
    }
}

fn ordered_pairs(spec: &DeterminantSpec, order: SearchOrder) -> Result<Vec<MnPair>> {
    let mut pairs = mn_set(spec)?;
    if order == SearchOrder::Endpoint {
        pairs.sort_by_cached_key(|p| {
            let gap = (p.m() * p.m() - p.d() * p.n() * p.n()).abs();
            std::cmp::Reverse(gap)
        });
    }
    Ok(pairs)
}

pub fn optimize_with_order(spec: &DeterminantSpec, order: SearchOrder) -> Result<Optimum> {
    let pairs = ordered_pairs(spec, order)?;
    let mut best: Option<(BigRational, usize)> = None;
    let mut winners: Vec<&MnPair> = Vec::new();
    for (i, pair) in pairs.iter().enumerate() {
        let value = objective(pair);
        let cmp = best.as_ref().map_or(Ordering::Greater, |(b, _)| value.cmp(b));
        match cmp {
            Ordering::Greater => {
                best = Some((value, i));
                winners = vec![pair];
            }
            Ordering::Equal => winners.push(pair),
            Ordering::Less => {}
        }
    }
    let Some((_, first_hit)) = best else {
        return Err(Error::InadmissibleDeterminant {
            m: spec.m().clone(),
            d: spec.d().clone(),
        });
    };
    let mut maximizers = winners
        .into_iter()
        .map(class_from_mn)
        .collect::<Result<Vec<_>>>()?;
    maximizers.sort_by(|a, b| (a.q(), a.p()).cmp(&(b.q(), b.p())));
    maximizers.dedup();
    let class = maximizers[0].clone();
    let k = spec.m() / class.r();
    Ok(Optimum {
        lattice: IwrLattice::new(class, k)?,
        maximizers,
        first_hit,
    })
}

/// The IWR lattice of determinant `M·√D` with the largest minimum. The
/// square lattice competes when `D = 1`.
pub fn optimize(spec: &DeterminantSpec) -> Result<Optimum> {
    optimize_with_order(spec, SearchOrder::Natural)
}

/// Argmax of the minimum over the full divisor-window enumeration, ties
/// broken by the smallest `(q, p)`.
pub fn optimize_bruteforce(spec: &DeterminantSpec) -> Result<IwrLattice> {
    enumerate_iwr(spec, true)?
        .into_iter()
        .max_by(|x, y| {
            x.minimum()
                .cmp(&y.minimum())
                .then_with(|| (y.class().q(), y.class().p()).cmp(&(x.class().q(), x.class().p())))
        })
        .ok_or_else(|| Error::InadmissibleDeterminant {
            m: spec.m().clone(),
            d: spec.d().clone(),
        })
}

/// `|Λ| ≤ 2Δ/√3`, attained only by hexagonal lattices.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivialBound {
    /// `4M²D/3`, the exact square of the bound.
    pub squared: BigRational,
    pub value: f64,
}

impl TrivialBound {
    /// Whether `minimum ≤ bound`, decided exactly.
    pub fn admits(&self, minimum: &BigInt) -> bool {
        BigRational::from_integer(minimum * minimum) <= self.squared
    }

    pub fn is_attained_by(&self, minimum: &BigInt) -> bool {
        BigRational::from_integer(minimum * minimum) == self.squared
    }
}

pub fn trivial_bound(spec: &DeterminantSpec) -> TrivialBound {
    let (m, d) = spec.pair();
    TrivialBound {
        squared: BigRational::new(BigInt::from(4) * m * m * d, BigInt::from(3)),
        value: 2.0 * spec.value() / 3f64.sqrt(),
    }
}

/// A row of the published table of maximizers, as printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublishedRow {
    pub m: u64,
    pub d: u64,
    pub min_norm: u64,
    /// `(p, q)` of the printed `Ω_D(p, q)`.
    pub class_pq: (u64, u64),
    /// The printed `k/q` under the square root, unreduced.
    pub scale: (u64, u64),
}

pub const TABLE1: [PublishedRow; 7] = [
    PublishedRow { m: 24, d: 5, min_norm: 61, class_pq: (29, 61), scale: (1, 61) },
    PublishedRow { m: 24, d: 7, min_norm: 69, class_pq: (9, 23), scale: (3, 23) },
    PublishedRow { m: 20, d: 11, min_norm: 75, class_pq: (7, 15), scale: (1, 3) },
    PublishedRow { m: 24, d: 13, min_norm: 98, class_pq: (7, 15), scale: (2, 49) },
    PublishedRow { m: 24, d: 17, min_norm: 104, class_pq: (4, 13), scale: (8, 13) },
    PublishedRow { m: 105, d: 19, min_norm: 510, class_pq: (15, 34), scale: (15, 34) },
    PublishedRow { m: 96, d: 23, min_norm: 522, class_pq: (41, 87), scale: (6, 87) },
];

/// The printed class is invalid, but minimum and scale agree with the optimum.
pub const CLASS_CORRECTED: &str = "class corrected";
/// The printed lattice exists but a lattice of the same determinant has a
/// larger minimum.
pub const NOT_MAXIMAL: &str = "published lattice not maximal";

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub published: PublishedRow,
    pub optimum: Optimum,
    /// Set when the computed row disagrees with the printed one.
    pub discrepancy: Option<&'static str>,
}

impl Table1Row {
    pub fn min_matches(&self) -> bool {
        self.optimum.minimum() == BigInt::from(self.published.min_norm)
    }

    /// Printed scale and computed `k/q` agree as rationals.
    pub fn scale_matches(&self) -> bool {
        let (num, den) = self.published.scale;
        self.optimum.lattice.scale_sq() == BigRational::new(num.into(), den.into())
    }

    pub fn class_matches(&self) -> bool {
        let class = self.optimum.lattice.class();
        (class.p(), class.q()) == (&self.published.class_pq.0.into(), &self.published.class_pq.1.into())
    }
}

impl PublishedRow {
    /// The printed lattice, if its `(p, q)` form a class of type `D` and the
    /// printed scale is `k/q` for an integer `k`.
    pub fn lattice(&self) -> Option<IwrLattice> {
        let class = SimilarityClass::from_pqd(self.class_pq.0, self.class_pq.1, self.d).ok()?;
        let scale = BigRational::new(self.scale.0.into(), self.scale.1.into());
        let k = scale * BigRational::from_integer(class.q().clone());
        if !k.is_integer() {
            return None;
        }
        IwrLattice::new(class, k.to_integer()).ok()
    }
}

/// Recomputes every published row and flags disagreements:
///
/// - [`CLASS_CORRECTED`] when the printed class is not a valid class of
///   type `D` while minimum and scale match the optimum;
/// - [`NOT_MAXIMAL`] when the printed lattice is a valid IWR lattice of the
///   determinant but the optimum has a strictly larger minimum.
///
/// Any other mismatch is an error.
pub fn table1() -> Result<Vec<Table1Row>> {
    TABLE1
        .iter()
        .map(|published| {
            let spec = DeterminantSpec::new(published.m, published.d)?;
            let optimum = optimize(&spec)?;
            let mut row = Table1Row {
                published: published.clone(),
                optimum,
                discrepancy: None,
            };
            if row.class_matches() && row.min_matches() && row.scale_matches() {
                return Ok(row);
            }
            let printed = published.lattice();
            let beaten = printed.as_ref().is_some_and(|lat| {
                lat.determinant() == spec && lat.minimum() < row.optimum.minimum()
            });
            row.discrepancy = if printed.is_none() && row.min_matches() && row.scale_matches() {
                Some(CLASS_CORRECTED)
            } else if beaten {
                Some(NOT_MAXIMAL)
            } else {
                return Err(Error::Invariant(format!(
                    "published row for {spec} disagrees with the optimum {}",
                    row.optimum.lattice
                )));
            };
            Ok(row)
        })
        .collect()
}
