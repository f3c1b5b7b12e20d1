use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IwrLattice, SimilarityClass};
use crate::arith;
use crate::{Error, Result};

/// Integral symmetric positive-definite matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl GramMatrix {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let g = GramMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        };
        if !g.a.is_positive() || !g.det().is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(g)
    }

    pub(crate) fn new_unchecked(a: BigInt, b: BigInt, c: BigInt) -> Self {
        GramMatrix { a, b, c }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// `ac − b²`, the squared lattice determinant.
    pub fn det(&self) -> BigInt {
        &self.a * &self.c - &self.b * &self.b
    }

    pub fn rows(&self) -> [[BigInt; 2]; 2] {
        [
            [self.a.clone(), self.b.clone()],
            [self.b.clone(), self.c.clone()],
        ]
    }

    /// Lagrange-Gauss reduced: `2|b| ≤ a ≤ c`.
    pub fn is_reduced(&self) -> bool {
        BigInt::from(2) * self.b.abs() <= self.a && self.a <= self.c
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.b, self.c)
    }
}

/// Parses `"a,b,c"`.
impl FromStr for GramMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "expected three comma-separated entries a,b,c, got {s:?}"
            )));
        }
        let mut entries = Vec::with_capacity(3);
        for part in parts {
            match part.parse::<BigInt>() {
                Ok(v) => entries.push(v),
                Err(_) if part.parse::<f64>().is_ok() => {
                    return Err(Error::NotIntegral(part.to_string()))
                }
                Err(_) => {
                    return Err(Error::InvalidInput(format!("not a number: {part:?}")))
                }
            }
        }
        let c = entries.pop().unwrap();
        let b = entries.pop().unwrap();
        let a = entries.pop().unwrap();
        GramMatrix::new(a, b, c)
    }
}

/// Integer 2×2 matrix of determinant ±1; its columns are the new basis
/// expressed in the old one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unimodular(pub [[BigInt; 2]; 2]);

impl Unimodular {
    pub fn identity() -> Self {
        Unimodular([
            [BigInt::from(1), BigInt::zero()],
            [BigInt::zero(), BigInt::from(1)],
        ])
    }

    pub fn det(&self) -> BigInt {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    /// `Uᵗ·G·U`.
    pub fn congruence(&self, g: &GramMatrix) -> GramMatrix {
        let u = &self.0;
        let (a, b, c) = (&g.a, &g.b, &g.c);
        // column i of U is (u[0][i], u[1][i])
        let form = |x0: &BigInt, y0: &BigInt, x1: &BigInt, y1: &BigInt| {
            a * x0 * x1 + b * (x0 * y1 + y0 * x1) + c * y0 * y1
        };
        GramMatrix::new_unchecked(
            form(&u[0][0], &u[1][0], &u[0][0], &u[1][0]),
            form(&u[0][0], &u[1][0], &u[0][1], &u[1][1]),
            form(&u[0][1], &u[1][1], &u[0][1], &u[1][1]),
        )
    }

    fn swap_columns(&mut self) {
        for row in self.0.iter_mut() {
            row.swap(0, 1);
        }
    }

    /// column 1 −= t · column 0
    fn shear(&mut self, t: &BigInt) {
        for row in self.0.iter_mut() {
            let sub = t * &row[0];
            row[1] -= sub;
        }
    }

    fn negate_column(&mut self, i: usize) {
        for row in self.0.iter_mut() {
            row[i] = -&row[i];
        }
    }
}

/// Lagrange-Gauss reduction of a positive-definite binary form.
///
/// Returns the reduced matrix, normalised to `0 ≤ 2b ≤ a ≤ c`, and the
/// unimodular `U` with `Uᵗ·g·U = reduced`.
pub fn gauss_reduce(g: &GramMatrix) -> Result<(GramMatrix, Unimodular)> {
    if !g.a.is_positive() || !g.det().is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let (mut a, mut b, mut c) = (g.a.clone(), g.b.clone(), g.c.clone());
    let mut u = Unimodular::identity();
    let two = BigInt::from(2);
    loop {
        // size-reduce only when 2|b| > a, shifting b into [−a/2, a/2)
        if &two * b.abs() > a {
            let t = (&two * &b + &a).div_floor(&(&two * &a));
            c = &c - &two * &t * &b + &t * &t * &a;
            b = &b - &t * &a;
            u.shear(&t);
        }
        if c < a {
            std::mem::swap(&mut a, &mut c);
            u.swap_columns();
        } else {
            break;
        }
    }
    if b.is_negative() {
        b = -b;
        u.negate_column(1);
    }
    Ok((GramMatrix::new_unchecked(a, b, c), u))
}

/// Recovers the similarity class and scale of an integral Gram matrix.
///
/// The reduced form must have equal diagonal entries `[[a, b], [b, a]]`;
/// then `p/q = b/a` in lowest terms, `k = gcd(a, b)`, and `(r, D)` come from
/// the squarefree decomposition of `q² − p²`.
pub fn classify_gram(g: &GramMatrix) -> Result<(SimilarityClass, BigInt)> {
    let (reduced, _) = gauss_reduce(g)?;
    let GramMatrix { a, b, c } = &reduced;
    if a != c {
        return Err(Error::NotWellRounded {
            a: a.clone(),
            c: c.clone(),
        });
    }
    let k = a.gcd(b);
    let p = b / &k;
    let q = a / &k;
    let (d, r) = arith::squarefree_part(&(&q * &q - &p * &p))?;
    let class = SimilarityClass::new(p, r, q, d)?;
    let lattice = IwrLattice::new(class, k)?;
    if lattice.gram() != reduced {
        return Err(Error::Invariant(format!(
            "classification of {reduced} does not round-trip (got {})",
            lattice.gram()
        )));
    }
    let IwrLattice { class, k } = lattice;
    Ok((class, k))
}
