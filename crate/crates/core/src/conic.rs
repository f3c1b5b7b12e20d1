//! Composition of similarity classes of a fixed type `D`.
//!
//! A class `(p, r, q)` corresponds to the rational point `(q/p, r/p)` on the
//! Pell conic `x² − D·y² = 1`. The conic's group law
//! `(x₁, y₁) + (x₂, y₂) = (x₁x₂ + Dy₁y₂, x₁y₂ + x₂y₁)` pulls back to
//!
//! ```text
//! (p₁, r₁, q₁) + (p₂, r₂, q₂) = (p₁p₂, r₁q₂ + r₂q₁, q₁q₂ + D·r₁r₂) / g
//! ```
//!
//! with `g` the gcd of the three entries. Composites always satisfy
//! `4p ≤ q`. The identity `(1, 0, 1)` is not a class, and the square class
//! `(0, 1, 1, 1)` has no conic point, so it is rejected.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::classes::SimilarityClass;
use crate::{Error, Result};

/// Rational point on `x² − D·y² = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl PellPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        PellPoint { x, y }
    }

    pub fn identity() -> Self {
        PellPoint::new(BigRational::one(), BigRational::zero())
    }

    pub fn on_conic(&self, d: &BigInt) -> bool {
        let d = BigRational::from_integer(d.clone());
        &self.x * &self.x - d * &self.y * &self.y == BigRational::one()
    }

    fn check(&self, d: &BigInt) -> Result<()> {
        if self.on_conic(d) {
            Ok(())
        } else {
            Err(Error::OffConic {
                x: self.x.to_string(),
                y: self.y.to_string(),
                d: d.clone(),
            })
        }
    }
}

/// The conic point `(q/p, r/p)` of a class with `p > 0`.
pub fn conic_point(class: &SimilarityClass) -> Result<PellPoint> {
    if class.p().is_zero() {
        return Err(Error::InvalidInput(
            "the square class (p = 0) has no point on the Pell conic".to_string(),
        ));
    }
    Ok(PellPoint::new(
        BigRational::new(class.q().clone(), class.p().clone()),
        BigRational::new(class.r().clone(), class.p().clone()),
    ))
}

pub fn pell_add(a: &PellPoint, b: &PellPoint, d: &BigInt) -> Result<PellPoint> {
    a.check(d)?;
    b.check(d)?;
    let dr = BigRational::from_integer(d.clone());
    Ok(PellPoint::new(
        &a.x * &b.x + dr * &a.y * &b.y,
        &a.x * &b.y + &b.x * &a.y,
    ))
}

pub fn compose(c1: &SimilarityClass, c2: &SimilarityClass) -> Result<SimilarityClass> {
    if c1.d() != c2.d() {
        return Err(Error::MismatchedType(c1.d().clone(), c2.d().clone()));
    }
    if c1.p().is_zero() || c2.p().is_zero() {
        return Err(Error::InvalidInput(
            "composition is defined only for classes with p > 0".to_string(),
        ));
    }
    let d = c1.d();
    let (p1, r1, q1) = (c1.p(), c1.r(), c1.q());
    let (p2, r2, q2) = (c2.p(), c2.r(), c2.q());
    let p = p1 * p2;
    let r = r1 * q2 + r2 * q1;
    let q = q1 * q2 + d * r1 * r2;
    let g = p.gcd(&r).gcd(&q);
    let class = SimilarityClass::new(p / &g, r / &g, q / &g, d.clone())?;
    if BigInt::from(4) * class.p() > *class.q() {
        return Err(Error::Invariant(format!("composite {class} has 4p > q")));
    }
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{class_from_mn, MnPair};
    use proptest::prelude::*;

    fn class(p: i64, r: i64, q: i64, d: i64) -> SimilarityClass {
        SimilarityClass::new(p, r, q, d).unwrap()
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> PellPoint {
        PellPoint::new(
            BigRational::new(x.0.into(), x.1.into()),
            BigRational::new(y.0.into(), y.1.into()),
        )
    }

    #[test]
    fn pell_add_examples() {
        let d3 = BigInt::from(3);
        let p = pt((2, 1), (1, 1));
        assert_eq!(pell_add(&PellPoint::identity(), &p, &d3).unwrap(), p);
        assert_eq!(pell_add(&p, &p, &d3).unwrap(), pt((7, 1), (4, 1)));
        let off = pt((9, 2), (1, 1));
        assert!(matches!(
            pell_add(&off, &PellPoint::identity(), &BigInt::from(5)),
            Err(Error::OffConic { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let hex = class(1, 1, 2, 3);
        assert_eq!(compose(&hex, &hex).unwrap(), class(1, 4, 7, 3));
        let a = class(1, 4, 9, 5);
        assert_eq!(compose(&a, &a).unwrap(), class(1, 72, 161, 5));
        let b = class(2, 3, 7, 5);
        assert_eq!(compose(&a, &b).unwrap(), class(2, 55, 123, 5));
    }

    #[test]
    fn conic_law_on_points_outside_the_class_range() {
        // (2, 1, 3) has 2p > q, so it is a conic point but not a class
        let d5 = BigInt::from(5);
        let p = pt((3, 2), (1, 2));
        assert_eq!(pell_add(&p, &p, &d5).unwrap(), pt((7, 2), (3, 2)));
        let q = pt((9, 1), (4, 1));
        assert_eq!(pell_add(&p, &q, &d5).unwrap(), pt((47, 2), (21, 2)));
    }

    #[test]
    fn compose_rejects() {
        assert!(matches!(
            compose(&class(1, 1, 2, 3), &class(1, 4, 9, 5)),
            Err(Error::MismatchedType(..))
        ));
        let square = class(0, 1, 1, 1);
        let d1 = class(5, 12, 13, 1);
        assert!(compose(&square, &d1).is_err());
        assert!(compose(&d1, &square).is_err());
    }

    fn class_of_type(d: i64) -> impl Strategy<Value = SimilarityClass> {
        (1i64..40, 1i64..40).prop_filter_map("pair outside band or p = 0", move |(m, n)| {
            let c = class_from_mn(&MnPair::new(m, n, d).ok()?).ok()?;
            (!c.p().is_zero()).then_some(c)
        })
    }

    fn same_type_pair() -> impl Strategy<Value = (SimilarityClass, SimilarityClass)> {
        prop::sample::select(vec![1i64, 2, 3, 5, 6, 7, 11, 13])
            .prop_flat_map(|d| (class_of_type(d), class_of_type(d)))
    }

    proptest! {
        #[test]
        fn composition_matches_conic_addition((a, b) in same_type_pair()) {
            let c = compose(&a, &b).unwrap();
            let sum = pell_add(&conic_point(&a).unwrap(), &conic_point(&b).unwrap(), a.d()).unwrap();
            prop_assert_eq!(conic_point(&c).unwrap(), sum);
            prop_assert_eq!(compose(&b, &a).unwrap(), c);
        }
    }
}
