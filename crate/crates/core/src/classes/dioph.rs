//! Rational parameterization of `αx² + βxy + γy² = δz²` from one known
//! solution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Coefficients of `αx² + βxy + γy² = δz²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryForm {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
    pub delta: BigInt,
}

impl TernaryForm {
    pub fn new(
        alpha: impl Into<BigInt>,
        beta: impl Into<BigInt>,
        gamma: impl Into<BigInt>,
        delta: impl Into<BigInt>,
    ) -> Self {
        TernaryForm {
            alpha: alpha.into(),
            beta: beta.into(),
            gamma: gamma.into(),
            delta: delta.into(),
        }
    }

    /// The form `x² + D·y² = z²`.
    pub fn pell_type(d: impl Into<BigInt>) -> Self {
        TernaryForm::new(1, 0, d, 1)
    }

    pub fn binary_part(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.alpha * x * x + &self.beta * x * y + &self.gamma * y * y
    }

    pub fn is_solution(&self, x: &BigInt, y: &BigInt, z: &BigInt) -> bool {
        self.binary_part(x, y) == &self.delta * z * z
    }
}

/// The solution of `form` attached to the coprime pair `(m, n)`, given a
/// base solution `(a, b, c)` with `c ≠ 0`:
///
/// ```text
/// x = γn(an − 2bm) − (αa + βb)m²
/// y = αm(bm − 2an) − (γb + βa)n²
/// z = −c(αm² + βmn + γn²)
/// ```
///
/// Every integral solution with `z ≠ 0` is a rational multiple of one of
/// these. Either sign of `z` solves the equation; the negative one makes
/// `(m, n) = (1, 0)` return `−(a, 0, c)` for bases with `b = 0`.
pub fn dioph_param(
    form: &TernaryForm,
    base: (&BigInt, &BigInt, &BigInt),
    pair: (&BigInt, &BigInt),
) -> Result<(BigInt, BigInt, BigInt)> {
    let TernaryForm {
        alpha,
        beta,
        gamma,
        delta,
    } = form;
    let (a, b, c) = base;
    let (m, n) = pair;
    if beta * beta == BigInt::from(4) * alpha * gamma {
        return Err(Error::InvalidInput(
            "degenerate form: β² = 4αγ".to_string(),
        ));
    }
    if delta.is_zero() {
        return Err(Error::InvalidInput("δ must be nonzero".to_string()));
    }
    if c.is_zero() {
        return Err(Error::InvalidInput("base solution needs c ≠ 0".to_string()));
    }
    if !form.is_solution(a, b, c) {
        return Err(Error::InvalidInput(format!(
            "({a}, {b}, {c}) does not solve the equation"
        )));
    }
    if m.is_negative() {
        return Err(Error::InvalidInput(format!("m = {m} must be ≥ 0")));
    }
    if !m.gcd(n).is_one() {
        return Err(Error::InvalidInput(format!("gcd({m}, {n}) ≠ 1")));
    }
    let two = BigInt::from(2);
    let x = gamma * n * (a * n - &two * b * m) - (alpha * a + beta * b) * m * m;
    let y = alpha * m * (b * m - &two * a * n) - (gamma * b + beta * a) * n * n;
    let z = -(c * form.binary_part(m, n));
    if !form.is_solution(&x, &y, &z) {
        return Err(Error::Invariant(format!(
            "({x}, {y}, {z}) fails the equation for (m, n) = ({m}, {n})"
        )));
    }
    Ok((x, y, z))
}

/// Divides out the common factor and takes absolute values.
pub fn normalize_triple(x: &BigInt, y: &BigInt, z: &BigInt) -> (BigInt, BigInt, BigInt) {
    let g = x.gcd(y).gcd(z);
    if g.is_zero() {
        return (BigInt::zero(), BigInt::zero(), BigInt::zero());
    }
    ((x / &g).abs(), (y / &g).abs(), (z / &g).abs())
}
