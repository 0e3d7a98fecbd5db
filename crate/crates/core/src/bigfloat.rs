//! Arbitrary-precision binary floating point: a `BigInt` mantissa with a
//! power-of-two exponent, rounded to a caller-supplied bit precision, plus
//! complex pairs. Enough for Newton refinement and integer-relation input;
//! no directed rounding or transcendental functions.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

/// Working precision in bits for a decimal digit count, with guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * core::f64::consts::LOG2_10).ceil() as u32 + 32
}

/// `mantissa · 2^exp`, mantissa kept within the precision passed to each op.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mantissa: BigInt::zero(), exp: 0 }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        BigFloat { mantissa: n, exp: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        BigFloat { mantissa: BigInt::from(n), exp: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return BigFloat::zero();
        }
        assert!(x.is_finite());
        let (m, e, s) = Float::integer_decode(x);
        let mantissa = BigInt::from(m) * BigInt::from(s);
        BigFloat { mantissa, exp: e as i64 }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let num = BigFloat::from_bigint(q.numer().clone());
        let den = BigFloat::from_bigint(q.denom().clone());
        num.div(&den, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    fn normalized(mut self, prec: u32) -> Self {
        if self.mantissa.is_zero() {
            return BigFloat::zero();
        }
        let bits = self.mantissa.bits();
        if bits > prec as u64 {
            let shift = (bits - prec as u64) as usize;
            self.mantissa >>= shift;
            self.exp += shift as i64;
        }
        self
    }

    /// `log2 |x|` up to one unit, `None` for zero.
    pub fn log2_abs(&self) -> Option<i64> {
        if self.mantissa.is_zero() {
            return None;
        }
        Some(self.mantissa.bits() as i64 + self.exp)
    }

    pub fn neg(&self) -> Self {
        BigFloat { mantissa: -self.mantissa.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mantissa: self.mantissa.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return other.clone().normalized(prec);
        }
        if other.is_zero() {
            return self.clone().normalized(prec);
        }
        let (lo, hi) = if self.exp <= other.exp { (self, other) } else { (other, self) };
        let shift = (hi.exp - lo.exp) as u64;
        // the smaller term is far below the rounding error of the larger
        if shift > prec as u64 + hi.mantissa.bits() + 4 {
            return hi.clone().normalized(prec);
        }
        let mantissa = (&hi.mantissa << (shift as usize)) + &lo.mantissa;
        BigFloat { mantissa, exp: lo.exp }.normalized(prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        BigFloat { mantissa: &self.mantissa * &other.mantissa, exp: self.exp + other.exp }
            .normalized(prec)
    }

    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return BigFloat::zero();
        }
        let extra = other.mantissa.bits().saturating_sub(self.mantissa.bits());
        let shift = (prec as u64 + extra + 4) as usize;
        let mantissa = (&self.mantissa << shift) / &other.mantissa;
        BigFloat { mantissa, exp: self.exp - other.exp - shift as i64 }.normalized(prec)
    }

    /// Nonnegative square root.
    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        if self.is_zero() {
            return BigFloat::zero();
        }
        let bits = self.mantissa.bits();
        let mut shift = (2 * prec as u64 + 8).saturating_sub(bits) as i64;
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled: BigInt = if shift >= 0 {
            &self.mantissa << (shift as usize)
        } else {
            &self.mantissa >> ((-shift) as usize)
        };
        BigFloat { mantissa: scaled.sqrt(), exp: (self.exp - shift) / 2 }.normalized(prec)
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.abs().sub(&other.abs(), 128).partial_sign()
    }

    fn partial_sign(&self) -> Ordering {
        match self.mantissa.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        if bits <= 53 {
            return self.mantissa.to_f64().unwrap() * (self.exp as f64).exp2();
        }
        let shift = (bits - 53) as usize;
        let top = (&self.mantissa >> shift).to_f64().unwrap();
        top * ((self.exp + shift as i64) as f64).exp2()
    }

    /// `⌊x⌋` (toward −∞).
    pub fn floor_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mantissa << (self.exp as usize)
        } else {
            &self.mantissa >> ((-self.exp) as usize)
        }
    }

    /// Nearest integer.
    pub fn round_bigint(&self) -> BigInt {
        let half = BigFloat { mantissa: BigInt::one(), exp: -1 };
        self.add(&half, u32::MAX >> 1).floor_bigint()
    }

    /// Best rational approximation with denominator at most `den_bound`,
    /// by the continued-fraction convergents.
    pub fn to_rational(&self, den_bound: &BigInt) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let (num, den): (BigInt, BigInt) = if self.exp >= 0 {
            (&self.mantissa << (self.exp as usize), BigInt::one())
        } else {
            (self.mantissa.clone(), BigInt::one() << ((-self.exp) as usize))
        };
        let mut a = num;
        let mut b = den;
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
        while !b.is_zero() {
            let q = a.div_floor(&b);
            let r = &a - &q * &b;
            let p2 = &q * &p0 + &p1;
            let q2 = &q * &q0 + &q1;
            if &q2 > den_bound {
                break;
            }
            p1 = p0;
            q1 = q0;
            p0 = p2;
            q0 = q2;
            a = b;
            b = r;
        }
        BigRational::new(p0, q0)
    }

    /// `10^k` rounded to `prec` bits (`k` may be negative).
    pub fn pow10(k: i64, prec: u32) -> Self {
        let ten = BigFloat::from_i64(10);
        let mut acc = BigFloat::from_i64(1);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&ten, prec + 16);
        }
        if k < 0 {
            BigFloat::from_i64(1).div(&acc, prec)
        } else {
            acc
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Complex number with `BigFloat` parts.
#[derive(Clone, PartialEq, Debug)]
pub struct CBigFloat {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl CBigFloat {
    pub fn zero() -> Self {
        CBigFloat { re: BigFloat::zero(), im: BigFloat::zero() }
    }

    pub fn from_real(re: BigFloat) -> Self {
        CBigFloat { re, im: BigFloat::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        CBigFloat::from_real(BigFloat::from_i64(n))
    }

    pub fn from_complex64(z: Complex64) -> Self {
        CBigFloat { re: BigFloat::from_f64(z.re), im: BigFloat::from_f64(z.im) }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn neg(&self) -> Self {
        CBigFloat { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        CBigFloat { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        CBigFloat { re: self.re.add(&other.re, prec), im: self.im.add(&other.im, prec) }
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        CBigFloat { re: self.re.sub(&other.re, prec), im: self.im.sub(&other.im, prec) }
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        let re = self
            .re
            .mul(&other.re, prec)
            .sub(&self.im.mul(&other.im, prec), prec);
        let im = self
            .re
            .mul(&other.im, prec)
            .add(&self.im.mul(&other.re, prec), prec);
        CBigFloat { re, im }
    }

    pub fn norm_sq(&self, prec: u32) -> BigFloat {
        self.re.mul(&self.re, prec).add(&self.im.mul(&self.im, prec), prec)
    }

    pub fn abs(&self, prec: u32) -> BigFloat {
        self.norm_sq(prec).sqrt(prec)
    }

    pub fn div(&self, other: &Self, prec: u32) -> Self {
        let n = other.norm_sq(prec);
        assert!(!n.is_zero(), "complex division by zero");
        let t = self.mul(&other.conj(), prec);
        CBigFloat { re: t.re.div(&n, prec), im: t.im.div(&n, prec) }
    }

    pub fn scale(&self, c: &BigFloat, prec: u32) -> Self {
        CBigFloat { re: self.re.mul(c, prec), im: self.im.mul(c, prec) }
    }
}

/// Horner evaluation of a polynomial with `CBigFloat` coefficients.
pub fn eval_cpoly(coeffs: &[CBigFloat], x: &CBigFloat, prec: u32) -> CBigFloat {
    let mut acc = CBigFloat::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x, prec).add(c, prec);
    }
    acc
}

/// Horner evaluation of an integer polynomial at a `BigFloat`.
pub fn eval_int_poly(coeffs: &[BigInt], x: &BigFloat, prec: u32) -> BigFloat {
    let mut acc = BigFloat::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x, prec).add(&BigFloat::from_bigint(c.clone()), prec);
    }
    acc
}
