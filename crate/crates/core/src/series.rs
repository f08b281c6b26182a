//! Formal Laurent series kept as exact rational functions `t^d * p(t) / q(t)`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::IntPolynomial;

/// Default number of expansion coefficients inspected by the nonnegativity check.
pub const N_CHECK: usize = 64;

/// A rational Laurent series `t^shift * num(t) / den(t)` in canonical form.
///
/// Canonical form:
/// * `num` and `den` are coprime in `Z[t]` with joint content 1,
/// * `num(0) != 0` and `den(0) > 0`, so every power of `t` lives in `shift`,
/// * the zero series is `0 / 1` with shift 0.
///
/// With these rules structural equality coincides with equality of series.
/// The `checked_nonneg` flag records a successful [`LaurentSeries::certify_nonneg`]
/// and is ignored by `==`.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    shift: i64,
    num: IntPolynomial,
    den: IntPolynomial,
    checked_nonneg: bool,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift && self.num == other.num && self.den == other.den
    }
}

impl Eq for LaurentSeries {}

impl LaurentSeries {
    /// Builds `t^shift * num / den` and brings it to canonical form.
    pub fn new(shift: i64, num: IntPolynomial, den: IntPolynomial) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroSeries);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let vn = num.t_adic_valuation();
        let vd = den.t_adic_valuation();
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let shift = shift + vn as i64 - vd as i64;

        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        let mut c = num.content().gcd(&den.content());
        if den.constant_term().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        Ok(LaurentSeries {
            shift,
            num,
            den,
            checked_nonneg: false,
        })
    }

    pub fn zero() -> Self {
        LaurentSeries {
            shift: 0,
            num: IntPolynomial::zero(),
            den: IntPolynomial::one(),
            checked_nonneg: false,
        }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `t^d`
    pub fn monomial(d: i64) -> Self {
        LaurentSeries {
            shift: d,
            num: IntPolynomial::one(),
            den: IntPolynomial::one(),
            checked_nonneg: false,
        }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::polynomial(IntPolynomial::constant(c))
    }

    pub fn polynomial(p: IntPolynomial) -> Self {
        Self::new(0, p, IntPolynomial::one()).expect("denominator is one")
    }

    /// `1 / (1 - c t)`
    pub fn geometric(c: i64) -> Self {
        Self::new(0, IntPolynomial::one(), IntPolynomial::from_i64s(&[1, -c]))
            .expect("nonzero denominator")
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the series is a Laurent polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// True for `c * t^d`.
    pub fn is_monomial(&self) -> bool {
        self.is_polynomial() && self.num.num_terms() == 1
    }

    pub fn is_checked_nonneg(&self) -> bool {
        self.checked_nonneg
    }

    /// Multiplies by `t^d`.
    pub fn shifted(&self, d: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentSeries {
            shift: self.shift + d,
            ..self.clone()
        }
    }

    /// Equality after aligning the lowest nonzero coefficient at degree 0.
    pub fn eq_up_to_shift(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }

    /// The series with its shift removed.
    pub fn unshifted(&self) -> Self {
        if self.shift == 0 {
            return self.clone();
        }
        self.shifted(-self.shift)
    }

    /// First `n` coefficients of `num / den` (the expansion without `t^shift`).
    pub fn expansion(&self, n: usize) -> Vec<BigRational> {
        let dq = self.den.coeffs();
        if self.den.constant_term().is_one() {
            // integer recurrence, the common case
            let mut out: Vec<BigInt> = Vec::with_capacity(n);
            for m in 0..n {
                let mut acc = self.num.coeff(m);
                for (i, qi) in dq.iter().enumerate().skip(1).take(m) {
                    if !qi.is_zero() {
                        acc -= &out[m - i] * qi;
                    }
                }
                out.push(acc);
            }
            return out.into_iter().map(BigRational::from_integer).collect();
        }
        let q0 = BigRational::from_integer(self.den.constant_term());
        let mut out: Vec<BigRational> = Vec::with_capacity(n);
        for m in 0..n {
            let mut acc = BigRational::from_integer(self.num.coeff(m));
            for (i, qi) in dq.iter().enumerate().skip(1).take(m) {
                if !qi.is_zero() {
                    acc -= &out[m - i] * BigRational::from_integer(qi.clone());
                }
            }
            out.push(acc / &q0);
        }
        out
    }

    /// Coefficient of `t^n` in the expansion around 0.
    ///
    /// Returned as an exact rational; series with integer coefficients always
    /// have `den(0) = 1` in canonical form, so this is an integer for them.
    pub fn coefficient(&self, n: i64) -> BigRational {
        let m = n - self.shift;
        if m < 0 {
            return BigRational::zero();
        }
        let m = m as usize;
        self.expansion(m + 1)
            .pop()
            .unwrap_or_else(BigRational::zero)
    }

    /// The first offending coefficient (index into the unshifted expansion)
    /// among the first `n_terms`, if any is negative or non-integral.
    pub fn first_nonneg_violation(&self, n_terms: usize) -> Option<(usize, BigRational)> {
        self.expansion(n_terms)
            .into_iter()
            .enumerate()
            .find(|(_, c)| c.is_negative() || !c.is_integer())
    }

    /// True iff coefficients `0..n_terms` of the unshifted expansion are
    /// nonnegative integers.
    pub fn check_nonneg(&self, n_terms: usize) -> bool {
        assert!(n_terms >= 1, "n_terms must be positive");
        self.first_nonneg_violation(n_terms).is_none()
    }

    /// Runs the nonnegativity check and returns the series flagged on success.
    pub fn certify_nonneg(mut self, n_terms: usize) -> Result<Self, Error> {
        if self.checked_nonneg {
            return Ok(self);
        }
        match self.first_nonneg_violation(n_terms) {
            None => {
                self.checked_nonneg = true;
                Ok(self)
            }
            Some((i, c)) => Err(Error::NonNegativityViolation {
                degree: self.shift + i as i64,
                coefficient: c,
            }),
        }
    }

    /// Exact quotient; the result carries no nonnegativity flag.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZeroSeries);
        }
        Self::new(
            self.shift - rhs.shift,
            &self.num * &rhs.den,
            &self.den * &rhs.num,
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(self.shift * e as i64, self.num.pow(e), self.den.pow(e))
            .expect("power of a nonzero denominator")
    }

    /// Nonnegative-integer coefficients stay nonnegative under products, so
    /// the flag survives when both factors carry it.
    fn with_flag(mut self, flag: bool) -> Self {
        self.checked_nonneg = flag;
        self
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // bring both to the common shift m = min(shifts)
        let m = self.shift.min(rhs.shift);
        let a = self.num.shift_up((self.shift - m) as usize);
        let b = rhs.num.shift_up((rhs.shift - m) as usize);
        let num = &(&a * &rhs.den) + &(&b * &self.den);
        let den = &self.den * &rhs.den;
        let flag = self.checked_nonneg && rhs.checked_nonneg;
        LaurentSeries::new(m, num, den)
            .expect("product of nonzero denominators")
            .with_flag(flag)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            shift: self.shift,
            num: -&self.num,
            den: self.den.clone(),
            checked_nonneg: false,
        }
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        let flag = self.checked_nonneg && rhs.checked_nonneg;
        LaurentSeries::new(
            self.shift + rhs.shift,
            &self.num * &rhs.num,
            &self.den * &rhs.den,
        )
        .expect("product of nonzero denominators")
        .with_flag(flag)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::render(self))
    }
}

/// `lhs + rhs`, canonical.
pub fn add(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    a + b
}

/// Cauchy product, canonical.
pub fn mul(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    a * b
}

/// Exact quotient; fails on a zero divisor.
pub fn div(a: &LaurentSeries, b: &LaurentSeries) -> Result<LaurentSeries, Error> {
    a.checked_div(b)
}

#[cfg(test)]
pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
