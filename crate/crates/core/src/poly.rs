//! Dense univariate polynomials over a [`Field`](crate::ring::Field).
//!
//! Coefficients are stored in ascending order with no trailing zeros; the
//! field descriptor is passed to every operation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::ring::{Field, FiniteField, PrimeField};

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    coeffs: Vec<F::El>,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(ring: &F) -> Self {
        Poly { coeffs: vec![ring.one()] }
    }

    pub fn x(ring: &F) -> Self {
        Poly { coeffs: vec![ring.zero(), ring.one()] }
    }

    pub fn constant(ring: &F, c: F::El) -> Self {
        Self::from_coeffs(ring, vec![c])
    }

    /// From ascending coefficients; trailing zeros are trimmed.
    pub fn from_coeffs(ring: &F, mut coeffs: Vec<F::El>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(ring: &F, coeffs: &[i64]) -> Self {
        Self::from_coeffs(ring, coeffs.iter().map(|&c| ring.from_i64(c)).collect())
    }

    /// `c · X^k`.
    pub fn monomial(ring: &F, c: F::El, k: usize) -> Self {
        if ring.is_zero(&c) {
            return Self::zero();
        }
        let mut coeffs = vec![ring.zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 := 0` convenience for nonzero-degree bookkeeping.
    pub fn deg_or0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[F::El] {
        &self.coeffs
    }

    pub fn coeff(&self, ring: &F, k: usize) -> F::El {
        self.coeffs.get(k).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn leading(&self) -> Option<&F::El> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, ring: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.add(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        Self::from_coeffs(ring, out)
    }

    pub fn sub(&self, ring: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.sub(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        Self::from_coeffs(ring, out)
    }

    pub fn neg(&self, ring: &F) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| ring.neg(c)).collect() }
    }

    pub fn scale(&self, ring: &F, c: &F::El) -> Self {
        if ring.is_zero(c) {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| ring.mul(a, c)).collect() }
    }

    pub fn mul(&self, ring: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = ring.mul(a, b);
                out[i + j] = ring.add(&out[i + j], &t);
            }
        }
        Self::from_coeffs(ring, out)
    }

    /// Multiplies by `X^k`.
    pub fn shift(&self, ring: &F, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![ring.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, ring: &F, div: &Self) -> (Self, Self) {
        let dd = div.degree().expect("division by zero polynomial");
        let lead_inv = ring.inv(div.leading().unwrap()).expect("leading coefficient is a unit");
        if self.is_zero() || self.degree().unwrap() < dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![ring.zero(); qlen];
        for k in (0..qlen).rev() {
            let c = ring.mul(&rem[k + dd], &lead_inv);
            if ring.is_zero(&c) {
                continue;
            }
            quot[k] = c.clone();
            for (i, dc) in div.coeffs.iter().enumerate() {
                let t = ring.mul(&c, dc);
                rem[k + i] = ring.sub(&rem[k + i], &t);
            }
        }
        (Self::from_coeffs(ring, quot), Self::from_coeffs(ring, rem))
    }

    pub fn rem(&self, ring: &F, div: &Self) -> Self {
        self.divrem(ring, div).1
    }

    /// Exact division; panics if not divisible (debug) / returns quotient.
    pub fn div_exact(&self, ring: &F, div: &Self) -> Self {
        let (q, r) = self.divrem(ring, div);
        debug_assert!(r.is_zero(), "div_exact with nonzero remainder");
        q
    }

    pub fn divides(&self, ring: &F, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(ring, self).1.is_zero()
    }

    pub fn monic(&self, ring: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                if ring.is_one(l) {
                    self.clone()
                } else {
                    let li = ring.inv(l).expect("nonzero leading coefficient");
                    self.scale(ring, &li)
                }
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, ring: &F, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ring, &b);
            a = b;
            b = r;
        }
        a.monic(ring)
    }

    pub fn derivative(&self, ring: &F) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(ring.mul(c, &ring.from_i64(i as i64)));
        }
        Self::from_coeffs(ring, out)
    }

    pub fn eval(&self, ring: &F, x: &F::El) -> F::El {
        let mut acc = ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = ring.mul(&acc, x);
            acc = ring.add(&acc, c);
        }
        acc
    }

    /// `self(other(X))`.
    pub fn compose(&self, ring: &F, other: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(ring, other);
            acc = acc.add(ring, &Self::constant(ring, c.clone()));
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, ring: &F, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(ring).rem(ring, m);
        let mut base = self.rem(ring, m);
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(ring, &base).rem(ring, m);
            }
            base = base.mul(ring, &base).rem(ring, m);
        }
        acc
    }

    pub fn pow(&self, ring: &F, mut e: usize) -> Self {
        let mut acc = Self::one(ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    /// Maps coefficients into another field.
    pub fn map<G: Field>(&self, to: &G, f: impl Fn(&F::El) -> G::El) -> Poly<G> {
        Poly::from_coeffs(to, self.coeffs.iter().map(f).collect())
    }

    pub fn display(&self, ring: &F, var: &str) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if ring.is_zero(c) {
                continue;
            }
            if !s.is_empty() {
                let _ = write!(s, " + ");
            }
            if i == 0 || !ring.is_one(c) {
                let _ = write!(s, "{}", ring.display(c));
                if i > 0 {
                    let _ = write!(s, "*");
                }
            }
            match i {
                0 => {}
                1 => {
                    let _ = write!(s, "{var}");
                }
                _ => {
                    let _ = write!(s, "{var}^{i}");
                }
            }
        }
        s
    }
}

/// Lagrange interpolation through distinct nodes.
pub fn interpolate<F: Field>(ring: &F, points: &[(F::El, F::El)]) -> Poly<F> {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial ∏_{j≠i} (X - x_j)/(x_i - x_j)
        let mut num = Poly::one(ring);
        let mut den = ring.one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(ring, &Poly::from_coeffs(ring, vec![ring.neg(xj), ring.one()]));
            den = ring.mul(&den, &ring.sub(xi, xj));
        }
        let c = ring.mul(yi, &ring.inv(&den).expect("distinct interpolation nodes"));
        acc = acc.add(ring, &num.scale(ring, &c));
    }
    acc
}

/// Squarefree decomposition in characteristic zero (Yun's algorithm).
/// Returns `(multiplicity, monic part)` pairs with parts pairwise coprime and
/// `f = lc · ∏ part^mult`.
pub fn squarefree_decomposition_char0<F: Field>(ring: &F, f: &Poly<F>) -> Vec<(usize, Poly<F>)> {
    assert_eq!(ring.characteristic(), 0);
    let f = f.monic(ring);
    if f.is_constant() {
        return Vec::new();
    }
    let df = f.derivative(ring);
    let a0 = f.gcd(ring, &df);
    let mut b = f.div_exact(ring, &a0);
    let mut c = df.div_exact(ring, &a0);
    let mut out = Vec::new();
    let mut i = 1usize;
    loop {
        let d = c.sub(ring, &b.derivative(ring));
        if d.is_zero() {
            if !b.is_constant() {
                out.push((i, b.monic(ring)));
            }
            break;
        }
        let p = b.gcd(ring, &d);
        if !p.is_constant() {
            out.push((i, p.clone()));
        }
        b = b.div_exact(ring, &p);
        c = d.div_exact(ring, &p);
        i += 1;
        if b.is_constant() {
            break;
        }
    }
    out
}

/// Squarefree decomposition over a finite field, handling p-th powers.
pub fn squarefree_decomposition_ff<F>(ring: &F, f: &Poly<F>) -> Vec<(usize, Poly<F>)>
where
    F: FiniteField + PthRoot,
{
    let p = ring.characteristic() as usize;
    let f = f.monic(ring);
    if f.is_constant() {
        return Vec::new();
    }
    let mut out: Vec<(usize, Poly<F>)> = Vec::new();
    sff_rec(ring, &f, 1, p, &mut out);
    // merge duplicate multiplicities (cannot happen, but keep output sorted)
    out.sort_by_key(|(m, _)| *m);
    out
}

fn sff_rec<F>(ring: &F, f: &Poly<F>, stride: usize, p: usize, out: &mut Vec<(usize, Poly<F>)>)
where
    F: FiniteField + PthRoot,
{
    let df = f.derivative(ring);
    if df.is_zero() {
        // f is a p-th power
        let root = pth_root_poly(ring, f);
        sff_rec(ring, &root, stride * p, p, out);
        return;
    }
    let mut c = f.gcd(ring, &df);
    let mut w = f.div_exact(ring, &c);
    let mut i = 1usize;
    while !w.is_constant() {
        let y = w.gcd(ring, &c);
        let z = w.div_exact(ring, &y);
        if !z.is_constant() {
            out.push((i * stride, z.monic(ring)));
        }
        w = y;
        c = c.div_exact(ring, &w);
        i += 1;
    }
    if !c.is_constant() {
        // remaining p-th power part
        let root = pth_root_poly(ring, &c);
        sff_rec(ring, &root, stride * p, p, out);
    }
}

/// Fields over which root multiplicities can be read off exactly, via a
/// squarefree decomposition.
pub trait SquarefreeField: Field {
    /// `(multiplicity, monic part)` pairs, pairwise coprime parts,
    /// `f = lc·∏ part^mult`.
    fn squarefree_decomposition(&self, f: &Poly<Self>) -> Vec<(usize, Poly<Self>)>;
}

impl SquarefreeField for crate::ring::Rationals {
    fn squarefree_decomposition(&self, f: &Poly<Self>) -> Vec<(usize, Poly<Self>)> {
        squarefree_decomposition_char0(self, f)
    }
}

impl SquarefreeField for PrimeField {
    fn squarefree_decomposition(&self, f: &Poly<Self>) -> Vec<(usize, Poly<Self>)> {
        squarefree_decomposition_ff(self, f)
    }
}

impl SquarefreeField for crate::ring::ExtField {
    fn squarefree_decomposition(&self, f: &Poly<Self>) -> Vec<(usize, Poly<Self>)> {
        squarefree_decomposition_ff(self, f)
    }
}

/// p-th roots of field elements, needed by squarefree decomposition.
pub trait PthRoot: FiniteField {
    fn pth_root(&self, a: &Self::El) -> Self::El;
}

impl PthRoot for PrimeField {
    fn pth_root(&self, a: &u64) -> u64 {
        *a // Frobenius is the identity on F_p
    }
}

impl PthRoot for crate::ring::ExtField {
    fn pth_root(&self, a: &Vec<u64>) -> Vec<u64> {
        // inverse of Frobenius: apply it k-1 more times
        let mut r = a.clone();
        for _ in 0..self.ext_degree().saturating_sub(1) {
            r = self.frobenius(&r);
        }
        r
    }
}

fn pth_root_poly<F: PthRoot>(ring: &F, f: &Poly<F>) -> Poly<F> {
    let p = ring.characteristic() as usize;
    let mut out = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            out.push(ring.pth_root(c));
        } else {
            debug_assert!(ring.is_zero(c));
        }
    }
    Poly::from_coeffs(ring, out)
}
