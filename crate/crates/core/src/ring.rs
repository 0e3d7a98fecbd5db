//! Coefficient fields, in ring-descriptor style: a lightweight descriptor
//! value owns the modulus/minimal-polynomial data and operates on plain
//! element values. This keeps elements small and lets polynomials stay
//! generic over the field.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rng::Rng;

pub trait Field: Clone + PartialEq + fmt::Debug {
    type El: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
    fn from_i64(&self, n: i64) -> Self::El;
    /// Characteristic; 0 in characteristic zero.
    fn characteristic(&self) -> u64;

    fn is_zero(&self, a: &Self::El) -> bool {
        *a == self.zero()
    }
    fn is_one(&self, a: &Self::El) -> bool {
        *a == self.one()
    }
    fn div(&self, a: &Self::El, b: &Self::El) -> Option<Self::El> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn pow_u64(&self, a: &Self::El, mut e: u64) -> Self::El {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    fn display(&self, a: &Self::El) -> String {
        alloc::format!("{a:?}")
    }
}

/// Finite fields additionally expose their size and uniform sampling.
pub trait FiniteField: Field {
    /// Field size `q = p^k`.
    fn size(&self) -> BigUint;
    fn random_element(&self, rng: &mut Rng) -> Self::El;
}

// ---------------------------------------------------------------------------
// Prime field F_p
// ---------------------------------------------------------------------------

/// `F_p` for a prime `p < 2^63`; elements are canonical residues.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime; this is checked for small `p` only (trial division
    /// up to 1e6), as the callers pass primes from validated input.
    pub fn new(p: u64) -> Self {
        debug_assert!(is_prime_u64(p), "modulus must be prime");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }

    /// Image of a rational, when the denominator is invertible mod p.
    pub fn reduce_rational(&self, q: &BigRational) -> Option<u64> {
        let den = self.reduce_bigint(q.denom());
        let num = self.reduce_bigint(q.numer());
        let deninv = self.inv(&den)?;
        Some(self.mul(&num, &deninv))
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            // the witness collapses to 0 when n == a (only n = 37 reaches
            // here); it carries no information, skip it
            continue;
        }
        let mut x = powmod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, a, m);
        }
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    acc
}

impl Field for PrimeField {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b { a - b } else { a + self.p - b }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 { 0 } else { self.p - a }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod_u64(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        Some(powmod_u64(*a, self.p - 2, self.p))
    }
    fn from_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn display(&self, a: &u64) -> String {
        alloc::format!("{a}")
    }
}

impl FiniteField for PrimeField {
    fn size(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn random_element(&self, rng: &mut Rng) -> u64 {
        rng.below(self.p)
    }
}

// ---------------------------------------------------------------------------
// Extension field F_{p^k}
// ---------------------------------------------------------------------------

/// `F_{p^k} = F_p[u]/(m(u))` with `m` monic irreducible of degree `k`.
/// Elements are coefficient vectors of length `k` (ascending powers of `u`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtField {
    base: PrimeField,
    /// Monic modulus, ascending coefficients, length `k + 1`.
    modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Self {
        assert!(modulus.len() >= 2, "extension degree must be >= 1");
        assert_eq!(*modulus.last().unwrap(), 1, "modulus must be monic");
        ExtField { base, modulus }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn ext_degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Embeds a base-field element.
    pub fn lift(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.ext_degree()];
        v[0] = a;
        v
    }

    /// The generator `u` of the extension.
    pub fn gen(&self) -> Vec<u64> {
        let mut v = vec![0; self.ext_degree()];
        if self.ext_degree() > 1 {
            v[1] = 1;
        } else {
            // degree-1 "extension": u is the root of the linear modulus
            v[0] = self.base.neg(&self.modulus[0]);
        }
        v
    }

    /// If the element lies in the prime field, its value there.
    pub fn to_base(&self, a: &Vec<u64>) -> Option<u64> {
        if a.iter().skip(1).all(|&c| c == 0) {
            Some(a[0])
        } else {
            None
        }
    }

    fn reduce(&self, mut c: Vec<u64>) -> Vec<u64> {
        let k = self.ext_degree();
        // reduce by the monic modulus
        while c.len() > k {
            let top = c.pop().unwrap();
            if top == 0 {
                continue;
            }
            let shift = c.len() - k;
            for i in 0..k {
                let t = self.base.mul(&top, &self.modulus[i]);
                c[shift + i] = self.base.sub(&c[shift + i], &t);
            }
        }
        c.resize(k, 0);
        c
    }

    /// Frobenius `a ↦ a^p`.
    pub fn frobenius(&self, a: &Vec<u64>) -> Vec<u64> {
        self.pow_big(a, &BigUint::from(self.base.modulus()))
    }

    pub fn pow_big(&self, a: &Vec<u64>, e: &BigUint) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }
}

impl Field for ExtField {
    type El = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.ext_degree()]
    }
    fn one(&self) -> Vec<u64> {
        self.lift(self.base.one())
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let k = self.ext_degree();
        let mut c = vec![0u64; 2 * k - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                c[i + j] = self.base.add(&c[i + j], &t);
            }
        }
        self.reduce(c)
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        // a^(q-2)
        let q = self.size();
        Some(self.pow_big(a, &(q - 2u32)))
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.lift(self.base.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.base.modulus()
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn display(&self, a: &Vec<u64>) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "[");
        for (i, c) in a.iter().enumerate() {
            if i > 0 {
                let _ = write!(s, ",");
            }
            let _ = write!(s, "{c}");
        }
        let _ = write!(s, "]");
        s
    }
}

impl FiniteField for ExtField {
    fn size(&self) -> BigUint {
        num_traits::pow::pow(BigUint::from(self.base.modulus()), self.ext_degree())
    }
    fn random_element(&self, rng: &mut Rng) -> Vec<u64> {
        (0..self.ext_degree()).map(|_| rng.below(self.base.modulus())).collect()
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// The rational numbers, with `BigRational` elements.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type El = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn display(&self, a: &BigRational) -> String {
        alloc::format!("{a}")
    }
}
