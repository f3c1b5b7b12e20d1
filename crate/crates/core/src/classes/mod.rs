//! Similarity classes of planar IWR lattices and their realizations.
//!
//! A class is stored as the coordinates `(p, r, q, D)`: the minimal basis
//! vectors of any lattice in the class meet at an angle with
//! `cos θ = p/q` and `sin θ = r·√D/q`. The concrete lattice
//! `√(k/q)·Ω_D(p, q)`, where `Ω_D(p, q)` has basis matrix `[[q, p], [0, r√D]]`,
//! is an [`IwrLattice`].

mod dioph;
mod gram;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::arith;
use crate::enumerate::DeterminantSpec;
use crate::{Error, Result};

pub use dioph::{dioph_param, normalize_triple, TernaryForm};
pub use gram::{classify_gram, gauss_reduce, GramMatrix, Unimodular};

/// Similarity class `(p, r, q, D)` of planar IWR lattices.
///
/// Invariants: `p² + D·r² = q²`, `gcd(p, q) = 1`, `2p ≤ q`, `D` squarefree,
/// `r, q > 0`, `p ≥ 0`. The square-lattice class `(0, 1, 1, 1)` is the only
/// one with `p = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimilarityClass {
    p: BigInt,
    r: BigInt,
    q: BigInt,
    d: BigInt,
}

impl SimilarityClass {
    pub fn new(
        p: impl Into<BigInt>,
        r: impl Into<BigInt>,
        q: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let class = SimilarityClass {
            p: p.into(),
            r: r.into(),
            q: q.into(),
            d: d.into(),
        };
        class.validate()?;
        Ok(class)
    }

    /// Builds the class from `p`, `q` and `D`, recovering `r` from
    /// `q² − p² = D·r²`.
    pub fn from_pqd(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, q, d) = (p.into(), q.into(), d.into());
        arith::ensure_squarefree(&d)?;
        let diff = &q * &q - &p * &p;
        if !diff.is_positive() || !diff.is_multiple_of(&d) {
            return Err(Error::Invariant(format!(
                "q² − p² = {diff} is not a positive multiple of D = {d}"
            )));
        }
        let r = arith::exact_sqrt(&(&diff / &d)).ok_or_else(|| {
            Error::Invariant(format!("(q² − p²)/D = {} is not a square", &diff / &d))
        })?;
        Self::new(p, r, q, d)
    }

    fn validate(&self) -> Result<()> {
        let SimilarityClass { p, r, q, d } = self;
        if p.is_negative() {
            return Err(Error::Invariant(format!("p = {p} is negative")));
        }
        if !r.is_positive() {
            return Err(Error::non_positive("r", r));
        }
        if !q.is_positive() {
            return Err(Error::non_positive("q", q));
        }
        arith::ensure_squarefree(d)?;
        if p * p + d * r * r != q * q {
            return Err(Error::Invariant(format!(
                "p² + D·r² ≠ q² for (p, r, q, D) = ({p}, {r}, {q}, {d})"
            )));
        }
        if !p.gcd(q).is_one() {
            return Err(Error::Invariant(format!("gcd(p, q) ≠ 1 for p = {p}, q = {q}")));
        }
        if BigInt::from(2) * p > *q {
            return Err(Error::Invariant(format!("2p > q for p = {p}, q = {q}")));
        }
        Ok(())
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// `(p, r, q)` without the type.
    pub fn triple(&self) -> (BigInt, BigInt, BigInt) {
        (self.p.clone(), self.r.clone(), self.q.clone())
    }

    /// Six minimal vectors, `θ = π/3`.
    pub fn is_hexagonal(&self) -> bool {
        BigInt::from(2) * &self.p == self.q
    }

    /// `cos θ = p/q`, in lowest terms.
    pub fn angle_cos(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }

    /// `sin² θ = D·r²/q²`.
    pub fn angle_sin_sq(&self) -> BigRational {
        BigRational::new(&self.d * &self.r * &self.r, &self.q * &self.q)
    }

    /// The lattice `q^{-1/2}·Ω_D(p, q)`, which has the smallest minimum
    /// among integral lattices in the class.
    pub fn minimal_lattice(&self) -> IwrLattice {
        IwrLattice {
            class: self.clone(),
            k: BigInt::from(1),
        }
    }
}

impl fmt::Display for SimilarityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}; D = {})", self.p, self.r, self.q, self.d)
    }
}

/// Coprime pair `(m, n)` inside the band `D·n² ≤ 3m² ≤ 9D·n²`, which is
/// `√(D/3) ≤ m/n ≤ √(3D)` in exact form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MnPair {
    m: BigInt,
    n: BigInt,
    d: BigInt,
}

impl MnPair {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (m, n, d) = (m.into(), n.into(), d.into());
        if !m.is_positive() {
            return Err(Error::non_positive("m", &m));
        }
        if !n.is_positive() {
            return Err(Error::non_positive("n", &n));
        }
        arith::ensure_squarefree(&d)?;
        if !m.gcd(&n).is_one() {
            return Err(Error::InvalidInput(format!("gcd({m}, {n}) ≠ 1")));
        }
        if !in_band(&m, &n, &d) {
            return Err(Error::InvalidInput(format!(
                "m/n = {m}/{n} outside [√(D/3), √(3D)] for D = {d}"
            )));
        }
        Ok(MnPair { m, n, d })
    }

    pub(crate) fn new_unchecked(m: BigInt, n: BigInt, d: BigInt) -> Self {
        MnPair { m, n, d }
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// `2^e·gcd(m, D)`, the common factor removed from `(|m² − Dn²|, 2mn, m² + Dn²)`.
    pub fn reduction_factor(&self) -> BigInt {
        let e = e_bit(&self.m, &self.n, &self.d);
        (BigInt::from(1) << e) * self.m.gcd(&self.d)
    }

    /// `r = 2mn / (2^e·gcd(m, D))`.
    pub fn r_value(&self) -> BigInt {
        BigInt::from(2) * &self.m * &self.n / self.reduction_factor()
    }
}

pub(crate) fn in_band(m: &BigInt, n: &BigInt, d: &BigInt) -> bool {
    let m2 = m * m;
    let dn2 = d * n * n;
    dn2 <= BigInt::from(3) * &m2 && m2 <= BigInt::from(3) * &dn2
}

fn e_bit(m: &BigInt, n: &BigInt, d: &BigInt) -> u8 {
    let d_even = d.is_even();
    let d_odd_mn_even = d.is_odd() && (m * n).is_even();
    if d_even || d_odd_mn_even {
        0
    } else {
        1
    }
}

/// `e = 0` if `2 | D`, or if `2 | D + 1` and `2 | mn`; `e = 1` otherwise.
pub fn e_exponent(m: &BigInt, n: &BigInt, d: &BigInt) -> Result<u8> {
    if !m.is_positive() {
        return Err(Error::non_positive("m", m));
    }
    if !n.is_positive() {
        return Err(Error::non_positive("n", n));
    }
    if !d.is_positive() {
        return Err(Error::non_positive("D", d));
    }
    Ok(e_bit(m, n, d))
}

/// The class `(p, r, q, D)` attached to a pair `(m, n)`:
///
/// ```text
/// p = |m² − Dn²| / g,  r = 2mn / g,  q = (m² + Dn²) / g,   g = 2^e·gcd(m, D)
/// ```
pub fn class_from_mn(pair: &MnPair) -> Result<SimilarityClass> {
    let MnPair { m, n, d } = pair;
    let g = pair.reduction_factor();
    let m2 = m * m;
    let dn2 = d * n * n;
    let p0 = (&m2 - &dn2).abs();
    let r0 = BigInt::from(2) * m * n;
    let q0 = &m2 + &dn2;
    for (name, v) in [("p", &p0), ("r", &r0), ("q", &q0)] {
        if !v.is_multiple_of(&g) {
            return Err(Error::Invariant(format!(
                "{name}₀ = {v} not divisible by 2^e·gcd(m, D) = {g} for (m, n, D) = ({m}, {n}, {d})"
            )));
        }
    }
    SimilarityClass::new(p0 / &g, r0 / &g, q0 / &g, d.clone())
}

/// The lattice `√(k/q)·Ω_D(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IwrLattice {
    class: SimilarityClass,
    k: BigInt,
}

impl IwrLattice {
    pub fn new(class: SimilarityClass, k: impl Into<BigInt>) -> Result<Self> {
        let k = k.into();
        if !k.is_positive() {
            return Err(Error::non_positive("k", &k));
        }
        Ok(IwrLattice { class, k })
    }

    pub fn class(&self) -> &SimilarityClass {
        &self.class
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    /// Gram matrix `[[kq, kp], [kp, kq]]` of the minimal basis.
    pub fn gram(&self) -> GramMatrix {
        let kq = &self.k * &self.class.q;
        let kp = &self.k * &self.class.p;
        GramMatrix::new_unchecked(kq.clone(), kp, kq)
    }

    /// Squared length of a shortest nonzero vector, `k·q`.
    pub fn minimum(&self) -> BigInt {
        &self.k * &self.class.q
    }

    /// Determinant `k·r·√D`, kept as the exact pair `(k·r, D)`.
    pub fn determinant(&self) -> DeterminantSpec {
        DeterminantSpec::new_unchecked(&self.k * &self.class.r, self.class.d.clone())
    }

    /// Square of the scale factor, `k/q`, reduced.
    pub fn scale_sq(&self) -> BigRational {
        BigRational::new(self.k.clone(), self.class.q.clone())
    }
}

impl fmt::Display for IwrLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sqrt({}/{})·Omega_{}({}, {})",
            self.k, self.class.q, self.class.d, self.class.p, self.class.q
        )
    }
}

pub fn lattice_gram(lat: &IwrLattice) -> GramMatrix {
    lat.gram()
}

pub fn minimal_lattice(class: &SimilarityClass) -> IwrLattice {
    class.minimal_lattice()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn class(p: i64, r: i64, q: i64, d: i64) -> SimilarityClass {
        SimilarityClass::new(p, r, q, d).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(b(n), b(d))
    }

    #[test]
    fn e_exponent_examples() {
        assert_eq!(e_exponent(&b(1), &b(1), &b(3)).unwrap(), 1);
        assert_eq!(e_exponent(&b(2), &b(1), &b(5)).unwrap(), 0);
        assert_eq!(e_exponent(&b(1), &b(1), &b(2)).unwrap(), 0);
        assert!(e_exponent(&b(0), &b(1), &b(2)).is_err());
    }

    #[test]
    fn class_from_mn_examples() {
        let c = class_from_mn(&MnPair::new(1, 1, 3).unwrap()).unwrap();
        assert_eq!(c, class(1, 1, 2, 3));
        let c = class_from_mn(&MnPair::new(15, 4, 5).unwrap()).unwrap();
        assert_eq!(c, class(29, 24, 61, 5));
        let c = class_from_mn(&MnPair::new(1, 1, 1).unwrap()).unwrap();
        assert_eq!(c, class(0, 1, 1, 1));
    }

    #[test]
    fn reciprocal_pairs_share_a_class() {
        // m'/n' = D·n/m
        let a = class_from_mn(&MnPair::new(2, 1, 5).unwrap()).unwrap();
        let b = class_from_mn(&MnPair::new(5, 2, 5).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, class(1, 4, 9, 5));
    }

    #[test]
    fn mn_pair_validation() {
        assert!(MnPair::new(2, 4, 5).is_err());
        assert!(MnPair::new(10, 1, 5).is_err()); // 100 > 15
        assert!(MnPair::new(1, 2, 5).is_err()); // 20 > 3
        assert!(matches!(MnPair::new(1, 1, 4), Err(Error::NotSquarefree(_))));
        assert!(MnPair::new(0, 1, 5).is_err());
    }

    #[test]
    fn class_invariants_enforced() {
        assert!(SimilarityClass::new(1, 1, 2, 3).is_ok());
        assert!(SimilarityClass::new(1, 1, 3, 3).is_err()); // 1 + 3 ≠ 9
        assert!(SimilarityClass::new(2, 2, 4, 3).is_err()); // gcd 2
        assert!(SimilarityClass::new(22, 3, 23, 5).is_err()); // 2p > q
        assert!(matches!(
            SimilarityClass::new(1, 1, 3, 8),
            Err(Error::NotSquarefree(_))
        ));
        assert!(SimilarityClass::new(1, 0, 1, 3).is_err());
        assert_eq!(SimilarityClass::from_pqd(23, 49, 13).unwrap(), class(23, 12, 49, 13));
        assert!(SimilarityClass::from_pqd(7, 15, 13).is_err());
    }

    #[test]
    fn angles() {
        let hex = class(1, 1, 2, 3);
        assert_eq!(hex.angle_cos(), rat(1, 2));
        assert_eq!(class(0, 1, 1, 1).angle_cos(), rat(0, 1));
        let c = class(29, 24, 61, 5);
        assert_eq!(c.angle_cos(), rat(29, 61));
        assert_eq!(c.angle_sin_sq(), rat(2880, 3721));
        for c in [hex, c, class(0, 1, 1, 1), class(2, 3, 7, 5)] {
            let cos = c.angle_cos();
            assert_eq!(&cos * &cos + c.angle_sin_sq(), rat(1, 1));
        }
    }

    #[test]
    fn lattice_gram_examples() {
        let g = class(1, 1, 2, 3).minimal_lattice().gram();
        assert_eq!(g, GramMatrix::new(2, 1, 2).unwrap());
        let g = class(0, 1, 1, 1).minimal_lattice().gram();
        assert_eq!(g, GramMatrix::new(1, 0, 1).unwrap());
        let g = class(29, 24, 61, 5).minimal_lattice().gram();
        assert_eq!(g, GramMatrix::new(61, 29, 61).unwrap());
        // det = k²r²D
        let lat = IwrLattice::new(class(9, 8, 23, 7), 3).unwrap();
        assert_eq!(lat.gram().det(), b(9 * 64 * 7));
    }

    #[test]
    fn minimum_and_determinant() {
        let lat = class(1, 1, 2, 3).minimal_lattice();
        assert_eq!(lat.minimum(), b(2));
        assert_eq!(lat.determinant().pair(), (&b(1), &b(3)));

        let lat = class(29, 24, 61, 5).minimal_lattice();
        assert_eq!(lat.minimum(), b(61));
        assert_eq!(lat.determinant().pair(), (&b(24), &b(5)));

        let lat = IwrLattice::new(class(9, 8, 23, 7), 3).unwrap();
        assert_eq!(lat.minimum(), b(69));
        assert_eq!(lat.determinant().pair(), (&b(24), &b(7)));
        assert!(IwrLattice::new(class(9, 8, 23, 7), 0).is_err());
    }

    #[test]
    fn minimal_lattice_examples() {
        for (c, min) in [
            (class(1, 1, 2, 3), 2),
            (class(29, 24, 61, 5), 61),
            (class(2, 3, 7, 5), 7),
        ] {
            let lat = minimal_lattice(&c);
            assert_eq!(lat.k(), &b(1));
            assert_eq!(lat.minimum(), b(min));
            for k in 2..6 {
                assert!(IwrLattice::new(c.clone(), k).unwrap().minimum() > lat.minimum());
            }
        }
    }
}
