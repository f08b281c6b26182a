//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

/// A polynomial `c[0] + c[1] t + ... + c[n] t^n` over the integers.
///
/// The coefficient vector never carries trailing zeros, so the zero polynomial
/// is the empty vector and structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficient of `t^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Largest `k` with `t^k` dividing `self`; zero for the zero polynomial.
    pub fn t_adic_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Divides by `t^k`; the low coefficients must be zero.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x / c).collect())
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, with a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        self.div_scalar(&c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    ///
    /// Returns the remainder together with the exponent used on `lc(b)`.
    pub fn pseudo_rem(&self, b: &Self) -> (Self, usize) {
        let db = b.degree().expect("pseudo_rem by zero polynomial");
        let lb = b.leading().unwrap().clone();
        let mut r = self.clone();
        let mut e = 0usize;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shifted = b.shift_up(dr - db).scale(&lr);
            r = &r.scale(&lb) - &shifted;
            e += 1;
        }
        let full = self.degree().map_or(0, |da| (da + 1).saturating_sub(db));
        if e < full {
            r = r.scale(&Pow::pow(&lb, full - e));
        }
        (r, full)
    }

    /// Exact quotient in `Z[t]`, or `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        let db = b.degree()?;
        let lb = b.leading().unwrap();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let lr = r.leading().unwrap();
            let (quo, rem) = lr.div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &b.shift_up(dr - db).scale(&quo);
            q[dr - db] = quo;
        }
        Some(Self::new(q))
    }

    /// Primitive gcd with positive leading coefficient (zero when both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (r, _) = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a
    }

    /// Squarefree part `p / gcd(p, p')`, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .primitive_part()
    }

    /// `t^deg * p(1/t)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of `p(u/v)` for `v > 0`, computed without fractions.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let u = x.numer();
        let v = x.denom();
        // v^n p(u/v) = sum c_i u^i v^(n-i), Horner in homogeneous form
        let mut acc = BigInt::zero();
        let mut vpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c * &vpow;
            vpow *= v;
        }
        acc.cmp(&BigInt::zero())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
