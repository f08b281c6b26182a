//! Curvature (exponential growth rate) of nonnegative rational series.
//!
//! For a series with nonnegative coefficients the radius of convergence is
//! attained on the positive real axis, so the growth rate is the reciprocal of
//! the smallest positive root of the denominator. We work with the reversed
//! denominator, whose largest positive root is the curvature itself.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::IntPolynomial;
use crate::series::LaurentSeries;
use crate::Settings;

/// A nonnegative real, either known exactly or enclosed in a rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Curvature {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl Curvature {
    pub fn zero() -> Self {
        Curvature::Exact(BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Curvature::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Collapses to `Exact` when the bounds coincide.
    pub fn from_bounds(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        if lo == hi {
            Curvature::Exact(lo)
        } else {
            Curvature::Interval { lo, hi }
        }
    }

    pub fn lo(&self) -> &BigRational {
        match self {
            Curvature::Exact(v) => v,
            Curvature::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            Curvature::Exact(v) => v,
            Curvature::Interval { hi, .. } => hi,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Curvature::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Curvature::Exact(v) => Some(v),
            Curvature::Interval { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exact().is_some_and(Zero::is_zero)
    }

    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }

    /// Ordering when it is decided by the enclosures, `None` otherwise.
    pub fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Curvature::Exact(a), Curvature::Exact(b)) => Some(a.cmp(b)),
            _ if self.hi() < other.lo() => Some(Ordering::Less),
            _ if self.lo() > other.hi() => Some(Ordering::Greater),
            _ => None,
        }
    }

    /// Ordering against a rational, when decided.
    pub fn try_cmp_value(&self, x: &BigRational) -> Option<Ordering> {
        self.try_cmp(&Curvature::Exact(x.clone()))
    }

    /// True unless the enclosures prove `self > other`.
    pub fn possibly_le(&self, other: &Self) -> bool {
        self.lo() <= other.hi()
    }

    /// True when the enclosures share a point (exact equality for exact values).
    pub fn possibly_eq(&self, other: &Self) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }

    pub fn max(&self, other: &Self) -> Self {
        match (self, other) {
            (Curvature::Exact(a), Curvature::Exact(b)) => Curvature::Exact(a.max(b).clone()),
            _ => Curvature::from_bounds(
                self.lo().max(other.lo()).clone(),
                self.hi().max(other.hi()).clone(),
            ),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        Curvature::from_bounds(self.lo() * &k, self.hi() * &k)
    }
}

impl Add for &Curvature {
    type Output = Curvature;
    fn add(self, rhs: &Curvature) -> Curvature {
        Curvature::from_bounds(self.lo() + rhs.lo(), self.hi() + rhs.hi())
    }
}

impl Add for Curvature {
    type Output = Curvature;
    fn add(self, rhs: Curvature) -> Curvature {
        &self + &rhs
    }
}

impl core::iter::Sum for Curvature {
    fn sum<I: Iterator<Item = Curvature>>(iter: I) -> Curvature {
        iter.fold(Curvature::zero(), |a, b| a + b)
    }
}

/// Exact rationals print as `n` or `p/q`; intervals as `[lo,hi]` with the
/// bounds rounded outward to ten decimals.
impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curvature::Exact(v) => write_rational(f, v),
            Curvature::Interval { lo, hi } => {
                f.write_str("[")?;
                write_decimal(f, lo, false)?;
                f.write_str(",")?;
                write_decimal(f, hi, true)?;
                f.write_str("]")
            }
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, v: &BigRational) -> fmt::Result {
    if v.is_integer() {
        write!(f, "{}", v.numer())
    } else {
        write!(f, "{}/{}", v.numer(), v.denom())
    }
}

const DECIMALS: u32 = 10;

fn write_decimal(f: &mut fmt::Formatter<'_>, v: &BigRational, round_up: bool) -> fmt::Result {
    let scale = BigInt::from(10u32).pow(DECIMALS);
    let scaled = v * BigRational::from_integer(scale.clone());
    let n = if round_up {
        scaled.ceil()
    } else {
        scaled.floor()
    }
    .to_integer();
    let neg = n.is_negative();
    let (int_part, frac) = n.abs().div_rem(&scale);
    let frac = alloc::format!("{:0>width$}", frac, width = DECIMALS as usize);
    let frac = frac.trim_end_matches('0');
    if neg {
        f.write_str("-")?;
    }
    if frac.is_empty() {
        write!(f, "{}", int_part)
    } else {
        write!(f, "{}.{}", int_part, frac)
    }
}

/// Curvature of a series with nonnegative integer coefficients.
///
/// Runs the nonnegativity check first unless the series already carries the
/// flag. Polynomials have curvature 0; otherwise the result is exact when the
/// dominant root is rational and an interval of width at most `settings.eps`
/// otherwise.
pub fn curvature(a: &LaurentSeries, settings: &Settings) -> Result<Curvature, Error> {
    if !a.is_checked_nonneg() {
        if let Some((i, c)) = a.first_nonneg_violation(settings.n_check) {
            return Err(Error::NonNegativityViolation {
                degree: a.shift() + i as i64,
                coefficient: c,
            });
        }
    }
    if a.is_polynomial() {
        return Ok(Curvature::zero());
    }
    largest_positive_root(&a.denominator().reversed(), &settings.eps)
}

/// Largest positive real root of `f`, exact when rational.
pub fn largest_positive_root(f: &IntPolynomial, eps: &BigRational) -> Result<Curvature, Error> {
    let g = f.squarefree_part();
    if g.is_constant() {
        return Err(Error::NoDominantRoot);
    }
    let sturm = SturmChain::new(&g);
    let zero = BigRational::zero();
    let bound = cauchy_bound(&g);
    if sturm.count(&zero, &bound) == 0 {
        return Err(Error::NoDominantRoot);
    }

    // isolate the largest root in (lo, hi]
    let (mut lo, mut hi) = (zero, bound);
    while sturm.count(&lo, &hi) > 1 {
        let mid = avoid_root(&g, &lo, &hi);
        if sturm.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // any rational root a/b has b | lead(g); two such fractions are at least
    // 1/lead^2 apart, so once the interval is narrower only one candidate remains
    let lead = BigRational::from_integer(g.leading().unwrap().abs());
    let separation = (&lead * &lead).recip();
    while &hi - &lo >= separation {
        bisect_by_sign(&g, &mut lo, &mut hi);
    }
    let candidate = simplest_between(&lo, &hi);
    if g.sign_at(&candidate) == Ordering::Equal {
        return Ok(Curvature::Exact(candidate));
    }

    while &hi - &lo > *eps {
        bisect_by_sign(&g, &mut lo, &mut hi);
    }
    Ok(Curvature::Interval { lo, hi })
}

/// All real roots have modulus below `1 + max |a_i / a_n|`.
fn cauchy_bound(g: &IntPolynomial) -> BigRational {
    let lead = g.leading().unwrap().abs();
    let m = g.coeffs()[..g.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    BigRational::one() + BigRational::new(m, lead)
}

/// A point strictly inside `(lo, hi)` near the midpoint where `g` does not vanish.
fn avoid_root(g: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut mid = (lo + hi) / &two;
    let mut nudge = (hi - lo) / BigRational::from_integer(BigInt::from(1024));
    while g.sign_at(&mid) == Ordering::Equal {
        mid += &nudge;
        nudge /= &two;
    }
    mid
}

/// Halves `(lo, hi]` keeping the simple root of `g` inside.
fn bisect_by_sign(g: &IntPolynomial, lo: &mut BigRational, hi: &mut BigRational) {
    let two = BigRational::from_integer(BigInt::from(2));
    let mid = (&*lo + &*hi) / &two;
    let s_mid = g.sign_at(&mid);
    if s_mid == Ordering::Equal {
        *lo = mid.clone() - (&*hi - &mid) / &two;
        *hi = mid;
        return;
    }
    if s_mid == g.sign_at(lo) {
        *lo = mid;
    } else {
        *hi = mid;
    }
}

/// The fraction with smallest denominator in `[lo, hi]`, for `0 <= lo <= hi`.
fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    let n = lo.ceil();
    if &n <= hi {
        return n;
    }
    let k = lo.floor();
    // lo and hi lie strictly between k and k+1
    let inner = simplest_between(&(hi - &k).recip(), &(lo - &k).recip());
    k + inner.recip()
}

struct SturmChain {
    polys: Vec<IntPolynomial>,
}

impl SturmChain {
    fn new(g: &IntPolynomial) -> Self {
        let mut polys = Vec::new();
        polys.push(g.clone());
        let d = g.derivative();
        if !d.is_zero() {
            polys.push(d);
        }
        while polys.len() >= 2 {
            let n = polys.len();
            let (r, e) = polys[n - 2].pseudo_rem(&polys[n - 1]);
            if r.is_zero() {
                break;
            }
            // the pseudo-remainder equals lc^e * (true remainder); undo a negative factor
            let lc_negative = polys[n - 1].leading().unwrap().is_negative();
            let mut next = if lc_negative && e % 2 == 1 { r } else { -&r };
            let c = next.content();
            next = next.div_scalar(&c);
            polys.push(next);
        }
        SturmChain { polys }
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let mut changes = 0;
        let mut last = Ordering::Equal;
        for p in &self.polys {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Number of distinct roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// Independent growth-rate estimate from the shift-normalized coefficients.
///
/// Takes `m` and `n` as the last indices with a positive coefficient in
/// `[0, n_max/2]` and `(n_max/2, n_max]` and returns `(a_n / a_m)^(1/(n-m))`,
/// rounded down to a multiple of `2^-32`. Dividing by `a_m` cancels the
/// constant factor that makes a plain `a_n^(1/n)` overshoot at this range.
/// Zero when the upper half has no positive coefficient.
pub fn curvature_estimate(a: &LaurentSeries, n_max: usize) -> BigRational {
    assert!(n_max >= 8, "n_max must be at least 8");
    const BITS: usize = 32;
    let coeffs = a.expansion(n_max + 1);
    let half = n_max / 2;
    let last_positive =
        |range: core::ops::RangeInclusive<usize>| range.rev().find(|&i| coeffs[i].is_positive());
    let (Some(m), Some(n)) = (last_positive(0..=half), last_positive(half + 1..=n_max)) else {
        return BigRational::zero();
    };
    let k = n - m;
    let q = &coeffs[n] / &coeffs[m];
    let scaled = (q.numer() << (BITS * k)) / q.denom();
    let root = scaled.nth_root(k as u32);
    BigRational::new(root, BigInt::one() << BITS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, ratio};

    fn settings() -> Settings {
        Settings::default()
    }

    fn curv(s: &LaurentSeries) -> Curvature {
        curvature(s, &settings()).unwrap()
    }

    #[test]
    fn geometric_series_have_integer_curvature() {
        for r in 1..7 {
            assert_eq!(
                curv(&LaurentSeries::geometric(r)),
                Curvature::from_integer(r)
            );
        }
    }

    #[test]
    fn polynomials_have_zero_curvature() {
        let p = LaurentSeries::polynomial(IntPolynomial::from_i64s(&[3, 0, 5, 1]));
        assert_eq!(curv(&p), Curvature::zero());
        assert_eq!(curv(&LaurentSeries::monomial(-4)), Curvature::zero());
    }

    #[test]
    fn product_takes_the_max() {
        let f = &LaurentSeries::geometric(2) * &LaurentSeries::geometric(3);
        assert_eq!(curv(&f), Curvature::from_integer(3));
    }

    #[test]
    fn repeated_roots_are_found() {
        let f = LaurentSeries::geometric(2).pow(3);
        assert_eq!(curv(&f), Curvature::from_integer(2));
    }

    #[test]
    fn rational_root_search() {
        // 2x - 3 and (2x - 3)(x - 1)(x + 4)
        let f = IntPolynomial::from_i64s(&[-3, 2]);
        let eps = settings().eps;
        assert_eq!(
            largest_positive_root(&f, &eps).unwrap(),
            Curvature::Exact(ratio(3, 2))
        );
        let g = &(&f * &IntPolynomial::from_i64s(&[-1, 1])) * &IntPolynomial::from_i64s(&[4, 1]);
        assert_eq!(
            largest_positive_root(&g, &eps).unwrap(),
            Curvature::Exact(ratio(3, 2))
        );
        let none = IntPolynomial::from_i64s(&[1, 1]);
        assert_eq!(
            largest_positive_root(&none, &eps),
            Err(Error::NoDominantRoot)
        );
    }

    #[test]
    fn irrational_curvature_is_an_interval() {
        // Fibonacci: growth rate is the golden ratio
        let fib = LaurentSeries::new(
            0,
            IntPolynomial::one(),
            IntPolynomial::from_i64s(&[1, -1, -1]),
        )
        .unwrap();
        let c = curv(&fib);
        assert!(!c.is_exact());
        assert!(c.width() <= settings().eps);
        // the golden ratio is the positive root of x^2 - x - 1
        let g = IntPolynomial::from_i64s(&[-1, -1, 1]);
        assert_eq!(g.sign_at(c.lo()), Ordering::Less);
        assert_eq!(g.sign_at(c.hi()), Ordering::Greater);
        assert!(c.lo() > &ratio(1_618_033_988, 1_000_000_000));
        assert!(c.hi() < &ratio(1_618_033_990, 1_000_000_000));
    }

    #[test]
    fn nonnegativity_is_required() {
        let bad = LaurentSeries::polynomial(IntPolynomial::from_i64s(&[1, -3]));
        assert!(matches!(
            curvature(&bad, &settings()),
            Err(Error::NonNegativityViolation { .. })
        ));
    }

    #[test]
    fn shift_invariance() {
        let f = &LaurentSeries::geometric(2) * &LaurentSeries::geometric(5);
        for d in [-3, 0, 4] {
            assert_eq!(curv(&f.shifted(d)), Curvature::from_integer(5));
        }
    }

    #[test]
    fn estimate_brackets() {
        let e = curvature_estimate(&LaurentSeries::geometric(2), 200);
        assert!(e >= ratio(199, 100) && e <= int(2));
        let p = LaurentSeries::polynomial(IntPolynomial::from_i64s(&[1, 2, 3]));
        assert_eq!(curvature_estimate(&p, 200), int(0));
        let f = &LaurentSeries::geometric(2) * &LaurentSeries::geometric(3);
        let e = curvature_estimate(&f, 200);
        assert!(e >= ratio(299, 100) && e <= ratio(301, 100));
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", Curvature::from_integer(5)), "5");
        assert_eq!(alloc::format!("{}", Curvature::Exact(ratio(3, 2))), "3/2");
        let iv = Curvature::Interval {
            lo: ratio(1, 3),
            hi: ratio(1, 2),
        };
        assert_eq!(alloc::format!("{}", iv), "[0.3333333333,0.5]");
    }

    #[test]
    fn interval_comparisons() {
        let a = Curvature::Interval {
            lo: ratio(1, 1),
            hi: ratio(2, 1),
        };
        assert_eq!(a.try_cmp(&Curvature::from_integer(3)), Some(Ordering::Less));
        assert_eq!(a.try_cmp(&Curvature::Exact(ratio(3, 2))), None);
        assert!(a.possibly_eq(&Curvature::Exact(ratio(3, 2))));
    }
}
