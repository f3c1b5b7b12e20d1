//! Epstein zeta values of planar WR lattices with certified truncation error.
//!
//! A WR lattice with minimum `T` and determinant `Δ` has, in a minimal
//! basis, the quadratic form `Q(x, y) = T(x² + y² + 2c·xy)` with
//! `c = cos θ = √(1 − Δ²/T²) ∈ [0, 1/2]`. Its Epstein zeta function is
//! `E(s) = Σ Q(x, y)^{−s}` over `(x, y) ∈ ℤ² ∖ {0}`, for `s > 1`.
//!
//! Summation runs over square shells `max(|x|, |y|) = k`, `1 ≤ k ≤ N`.
//! On shell `k`, writing the smaller coordinate as `t·k` with `|t| ≤ 1`,
//! `Q ≥ T·k²·min_t(1 + t² − 2c|t|) = T(1 − c²)·k²`, and the shell has `8k`
//! points. Hence the tail beyond `N` is at most
//!
//! ```text
//! Σ_{k>N} 8k·(λk²)^{−s} ≤ 8λ^{−s}·∫_N^∞ k^{1−2s} dk = 4λ^{−s}·N^{2−2s}/(s − 1),   λ = T(1 − c²),
//! ```
//!
//! using that `k^{1−2s}` is decreasing. The reported error adds a bound on
//! floating-point rounding to this tail.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use crate::classes::IwrLattice;
use crate::enumerate::{enumerate_iwr, to_f64, DeterminantSpec};
use crate::{Error, Result};

/// Largest truncation radius [`epstein_zeta`] will use.
pub const MAX_RADIUS: u64 = 20_000;

/// Relative slack allowed on the WR angle range `(√3/2)·T ≤ Δ ≤ T`, so
/// that floating-point inputs on the boundary are accepted.
const ANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaResult {
    /// Partial sum over shells `1..=truncation_radius`.
    pub value: f64,
    /// Bound on `|value − E(s)|`: truncation tail plus rounding.
    pub abs_error_bound: f64,
    pub truncation_radius: u64,
    pub s: f64,
    /// Minimum of the lattice.
    pub t: f64,
    /// Determinant of the lattice.
    pub delta: f64,
}

impl ZetaResult {
    pub fn lower(&self) -> f64 {
        self.value - self.abs_error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.abs_error_bound
    }
}

/// Neumaier's compensated summation.
#[derive(Debug, Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `x^{−s}`, through `powi` when `s` is a small integer.
#[derive(Debug, Clone, Copy)]
enum NegPower {
    Int(i32),
    Real(f64),
}

impl NegPower {
    fn new(s: f64) -> Self {
        if s.fract() == 0.0 && s <= 64.0 {
            NegPower::Int(-(s as i32))
        } else {
            NegPower::Real(-s)
        }
    }

    #[inline]
    fn apply(self, x: f64) -> f64 {
        match self {
            NegPower::Int(e) => x.powi(e),
            NegPower::Real(e) => x.powf(e),
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::Zeta(format!("s = {s} must be a finite real > 1")));
    }
    Ok(())
}

/// Sum of `(x² + y² + 2c·xy)^{−s}` over shell `k`, without the factor `T^{−s}`.
///
/// Uses `Q(−x, −y) = Q(x, y)`: the half shell `{(k, y): −k < y ≤ k} ∪
/// {(x, k): −k ≤ x < k}` meets each antipodal pair once.
fn shell_sum(k: i64, two_c: f64, pow: NegPower) -> f64 {
    let kf = k as f64;
    let k2 = kf * kf;
    let mut acc = Compensated::default();
    for j in -k + 1..=k {
        let jf = j as f64;
        acc.add(pow.apply(k2 + jf * jf + two_c * kf * jf));
    }
    for j in -k..k {
        let jf = j as f64;
        acc.add(pow.apply(jf * jf + k2 + two_c * jf * kf));
    }
    2.0 * acc.total()
}

/// Smallest `N` with `4λ^{−s}·N^{2−2s}/(s − 1) ≤ target`, where `λ = 1 − c²`
/// and the factor `T^{−s}` is already divided out of `target`.
fn radius_for(lambda: f64, s: f64, target: f64) -> f64 {
    // N^{2s−2} ≥ 4λ^{−s}/((s − 1)·target)
    (4.0 * lambda.powf(-s) / ((s - 1.0) * target)).powf(1.0 / (2.0 * s - 2.0)).ceil().max(1.0)
}

fn tail_bound(lambda: f64, s: f64, n: u64) -> f64 {
    4.0 * lambda.powf(-s) * (n as f64).powf(2.0 - 2.0 * s) / (s - 1.0)
}

/// Relative rounding error of the partial sum: each term carries a few ulps
/// from forming `Q` and `≈ s` ulps from the power; the compensated sum adds
/// two more.
fn rounding_bound(s: f64, value: f64) -> f64 {
    (8.0 * s + 16.0) * f64::EPSILON * value.abs()
}

/// `E(s)` for the form `T(x² + y² + 2c·xy)` with `0 ≤ c ≤ 1/2`.
fn epstein_form(t: f64, c: f64, delta: f64, s: f64, eps: f64) -> Result<ZetaResult> {
    check_s(s)?;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Zeta(format!("eps = {eps} must be positive")));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Zeta(format!("T = {t} must be positive")));
    }
    let lambda = 1.0 - c * c;
    let scale = t.powf(-s);
    // truncation gets half the budget, rounding the rest
    let radius = radius_for(lambda, s, eps / (2.0 * scale));
    if radius > MAX_RADIUS as f64 {
        return Err(Error::Zeta(format!(
            "eps = {eps:e} needs truncation radius {radius:e} > {MAX_RADIUS} at s = {s}"
        )));
    }
    let n = radius as u64;
    let pow = NegPower::new(s);
    let two_c = 2.0 * c;
    let shells: Vec<f64> = (1..=n as i64)
        .into_par_iter()
        .map(|k| shell_sum(k, two_c, pow))
        .collect();
    let mut acc = Compensated::default();
    for v in shells {
        acc.add(v);
    }
    let value = scale * acc.total();
    let abs_error_bound = scale * tail_bound(lambda, s, n) + rounding_bound(s, value);
    if abs_error_bound > eps {
        return Err(Error::Zeta(format!(
            "eps = {eps:e} is below the attainable accuracy {abs_error_bound:e}"
        )));
    }
    Ok(ZetaResult {
        value,
        abs_error_bound,
        truncation_radius: n,
        s,
        t,
        delta,
    })
}

/// `E(s)` of the WR lattice with minimum `t` and determinant `delta`,
/// within `eps`.
///
/// Requires `s > 1`, `eps > 0` and `(√3/2)·t ≤ delta ≤ t`.
pub fn epstein_zeta(t: f64, delta: f64, s: f64, eps: f64) -> Result<ZetaResult> {
    check_s(s)?;
    if !(t.is_finite() && t > 0.0 && delta.is_finite() && delta > 0.0) {
        return Err(Error::Zeta(format!("T = {t} and Δ = {delta} must be positive")));
    }
    let ratio = delta / t;
    let lo = 3f64.sqrt() / 2.0;
    if ratio < lo * (1.0 - ANGLE_SLACK) || ratio > 1.0 + ANGLE_SLACK {
        return Err(Error::Zeta(format!(
            "Δ/T = {ratio} outside the WR range [√3/2, 1]"
        )));
    }
    let c = (1.0 - ratio * ratio).max(0.0).sqrt().min(0.5);
    epstein_form(t, c, delta, s, eps)
}

/// `E(s)` of an IWR lattice, with `cos θ = p/q` taken exactly from the class.
pub fn epstein_lattice(lat: &IwrLattice, s: f64, eps: f64) -> Result<ZetaResult> {
    let class = lat.class();
    let c = to_f64(class.p()) / to_f64(class.q());
    let t = to_f64(&lat.minimum());
    let delta = lat.determinant().value();
    epstein_form(t, c, delta, s, eps)
}

/// Signal-to-noise ratio `10·log10(1/(9·E(2)))` in decibels.
pub fn snr(lat: &IwrLattice, eps: f64) -> Result<f64> {
    let z = epstein_lattice(lat, 2.0, eps)?;
    Ok(-10.0 * (9.0 * z.value).log10())
}

/// Circle-packing density `π|Λ|/(4Δ) = π·q/(4r√D)`.
pub fn packing_density(lat: &IwrLattice) -> f64 {
    let class = lat.class();
    let q = to_f64(class.q());
    let r = to_f64(class.r());
    let d = to_f64(class.d());
    PI * q / (4.0 * r * d.sqrt())
}

/// A constant known to lie in `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub lower: f64,
    pub upper: f64,
}

/// The `T`-independent constants behind [`epstein_bounds`], each enclosed
/// by partial sums plus an explicit tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsteinConstants {
    pub s: f64,
    /// `Σ_{x,y>0} (x² + y²)^{−s}`.
    pub square: Enclosure,
    /// `Σ_{x,y>0} (x² + y² + xy)^{−s}`.
    pub plus: Enclosure,
    /// `Σ_{x,y>0} (x² + y² − xy)^{−s}`.
    pub minus: Enclosure,
    /// `4ζ(2s)`, the axis vectors.
    pub axis: Enclosure,
}

/// Quadrant radius used for the constants; the tail bound certifies
/// whatever is left.
const CONSTANTS_MAX_RADIUS: u64 = 3_000;
const CONSTANTS_TARGET_TAIL: f64 = 1e-6;
const ZETA_TERMS: u64 = 100_000;

impl EpsteinConstants {
    pub fn compute(s: f64) -> Result<Self> {
        check_s(s)?;
        // On the quadrant shell max(x, y) = k (2k − 1 points), x² + y² ≥ k²
        // and x² + y² − xy ≥ 3k²/4, so each of the three tails is at most
        // w·Σ_{k>N} 2k·k^{−2s} ≤ w·N^{2−2s}/(s − 1) with w = 1 or (4/3)^s.
        let w_minus = (4.0f64 / 3.0).powf(s);
        let n = ((w_minus / ((s - 1.0) * CONSTANTS_TARGET_TAIL)).powf(1.0 / (2.0 * s - 2.0)))
            .ceil()
            .clamp(1.0, CONSTANTS_MAX_RADIUS as f64) as u64;
        let pow = NegPower::new(s);
        let shells: Vec<[f64; 3]> = (1..=n as i64)
            .into_par_iter()
            .map(|k| {
                let mut acc = [Compensated::default(); 3];
                let kf = k as f64;
                let mut point = |x: f64, y: f64| {
                    let base = x * x + y * y;
                    acc[0].add(pow.apply(base));
                    acc[1].add(pow.apply(base + x * y));
                    acc[2].add(pow.apply(base - x * y));
                };
                for j in 1..=k {
                    point(kf, j as f64);
                }
                for j in 1..k {
                    point(j as f64, kf);
                }
                acc.map(|a| a.total())
            })
            .collect();
        let mut sums = [Compensated::default(); 3];
        for shell in shells {
            for (acc, v) in sums.iter_mut().zip(shell) {
                acc.add(v);
            }
        }
        let tail = (n as f64).powf(2.0 - 2.0 * s) / (s - 1.0);
        let enclose = |v: f64, tail: f64| {
            let round = rounding_bound(s, v);
            Enclosure {
                lower: v - round,
                upper: v + tail + round,
            }
        };
        let [square, plus, minus] = sums.map(|a| a.total());
        Ok(EpsteinConstants {
            s,
            square: enclose(square, tail),
            plus: enclose(plus, tail),
            minus: enclose(minus, w_minus * tail),
            axis: axis_term(s),
        })
    }

    /// Cached per `s`.
    pub fn get(s: f64) -> Result<Self> {
        static CACHE: OnceLock<Mutex<HashMap<u64, EpsteinConstants>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(c) = cache.lock().ok().and_then(|m| m.get(&s.to_bits()).copied()) {
            return Ok(c);
        }
        let c = Self::compute(s)?;
        if let Ok(mut m) = cache.lock() {
            m.insert(s.to_bits(), c);
        }
        Ok(c)
    }
}

/// `4ζ(2s)` enclosed by `Σ_{n≤N} n^{−2s}` plus the integral bounds
/// `∫_{N+1}^∞ x^{−2s} dx ≤ tail ≤ ∫_N^∞ x^{−2s} dx`.
fn axis_term(s: f64) -> Enclosure {
    let e = 2.0 * s;
    let mut acc = Compensated::default();
    for n in (1..=ZETA_TERMS).rev() {
        acc.add((n as f64).powf(-e));
    }
    let partial = acc.total();
    let n = ZETA_TERMS as f64;
    let round = rounding_bound(s, partial);
    Enclosure {
        lower: 4.0 * (partial + (n + 1.0).powf(1.0 - e) / (e - 1.0) - round),
        upper: 4.0 * (partial + n.powf(1.0 - e) / (e - 1.0) + round),
    }
}

/// Bounds `lower ≤ E(s) ≤ upper` valid for every WR lattice with minimum `t`:
///
/// ```text
/// lower = (2·Σ[(x² + y²)^{−s} + (x² + y² + xy)^{−s}] + 4ζ(2s)) / T^s
/// upper = (2·Σ[(x² + y²)^{−s} + (x² + y² − xy)^{−s}] + 4ζ(2s)) / T^s
/// ```
///
/// with sums over `x, y > 0`. They follow from `0 ≤ c ≤ 1/2` by comparing
/// `Q(x, ±y)` termwise. Each constant is replaced by the matching end of
/// its certified enclosure.
pub fn epstein_bounds(t: f64, s: f64) -> Result<(f64, f64)> {
    check_s(s)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Zeta(format!("T = {t} must be positive")));
    }
    let k = EpsteinConstants::get(s)?;
    let scale = t.powf(-s);
    let lower = (2.0 * (k.square.lower + k.plus.lower) + k.axis.lower) * scale;
    let upper = (2.0 * (k.square.upper + k.minus.upper) + k.axis.upper) * scale;
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// `s ≥ 3`: strict decrease is expected and checked with certified separation.
    Asserted,
    /// `s < 3`: the ordering is reported only.
    Observational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every step to a larger minimum strictly lowers `E`, beyond the error bounds.
    Decreasing,
    /// `E` rises, beyond the error bounds, between entries `at` and `at + 1`.
    Increasing { at: usize },
    /// Entries `at` and `at + 1` are closer than their combined error bounds.
    Inconclusive { at: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub spec: DeterminantSpec,
    pub s: f64,
    pub mode: CheckMode,
    /// Sorted by minimum.
    pub entries: Vec<(IwrLattice, ZetaResult)>,
    pub verdict: Verdict,
}

impl MonotonicityReport {
    /// `E` is certified strictly decreasing in the minimum, in asserted mode.
    pub fn certified_decreasing(&self) -> bool {
        self.mode == CheckMode::Asserted && self.verdict == Verdict::Decreasing
    }
}

/// Evaluates `E(s)` across `IWR(M·√D)`, square class included, ordered by
/// minimum, and compares neighbours with distinct minima.
pub fn monotonicity_check(spec: &DeterminantSpec, s: f64, eps: f64) -> Result<MonotonicityReport> {
    check_s(s)?;
    let lattices = enumerate_iwr(spec, true)?;
    let entries = lattices
        .into_iter()
        .map(|lat| {
            let z = epstein_lattice(&lat, s, eps)?;
            Ok((lat, z))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut verdict = Verdict::Decreasing;
    for (i, w) in entries.windows(2).enumerate() {
        let ((a, za), (b, zb)) = (&w[0], &w[1]);
        if a.minimum() == b.minimum() {
            continue;
        }
        let gap = za.value - zb.value;
        let err = za.abs_error_bound + zb.abs_error_bound;
        if gap > err {
            continue;
        }
        verdict = if -gap > err {
            Verdict::Increasing { at: i }
        } else {
            Verdict::Inconclusive { at: i }
        };
        break;
    }
    Ok(MonotonicityReport {
        spec: spec.clone(),
        s,
        mode: if s >= 3.0 {
            CheckMode::Asserted
        } else {
            CheckMode::Observational
        },
        entries,
        verdict,
    })
}
