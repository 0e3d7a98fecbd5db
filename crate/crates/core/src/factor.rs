//! Univariate factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting, and randomized equal-degree (Cantor–Zassenhaus)
//! splitting. The equal-degree step takes its generator explicitly so runs
//! are reproducible from a seed.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::poly::{squarefree_decomposition_ff, Poly, PthRoot};
use crate::ring::{Field, FiniteField};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorError {
    ZeroPolynomial,
    Other(String),
}

impl fmt::Display for FactorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorError::ZeroPolynomial => write!(f, "cannot factor the zero polynomial"),
            FactorError::Other(msg) => write!(f, "{msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FactorError {}

/// `unit · ∏ factorᵢ^multᵢ` with monic pairwise-coprime irreducible factors.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredPolynomial<F: Field> {
    pub unit: F::El,
    /// `(monic irreducible, multiplicity)`, sorted by degree then by
    /// coefficient sequence for a deterministic order.
    pub factors: Vec<(Poly<F>, usize)>,
}

impl<F: Field> FactoredPolynomial<F> {
    /// Re-expands the factorization.
    pub fn expand(&self, ring: &F) -> Poly<F> {
        let mut acc = Poly::constant(ring, self.unit.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(ring, &f.pow(ring, *m));
        }
        acc
    }
}

/// Complete factorization into monic irreducibles over a finite field.
pub fn factor_univariate_ff<F>(
    ring: &F,
    f: &Poly<F>,
    rng: &mut Rng,
) -> Result<FactoredPolynomial<F>, FactorError>
where
    F: FiniteField + PthRoot,
    F::El: Ord,
{
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let unit = f.leading().unwrap().clone();
    let mut factors: Vec<(Poly<F>, usize)> = Vec::new();
    if f.is_constant() {
        return Ok(FactoredPolynomial { unit, factors });
    }
    for (mult, part) in squarefree_decomposition_ff(ring, f) {
        for (deg, prod) in distinct_degree_split(ring, &part) {
            for irr in equal_degree_split(ring, &prod, deg, rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        a.deg_or0()
            .cmp(&b.deg_or0())
            .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
    });
    Ok(FactoredPolynomial { unit, factors })
}

/// Splits a monic squarefree polynomial into products of irreducibles of a
/// common degree: returns `(d, product of all degree-d factors)`.
pub fn distinct_degree_split<F: FiniteField>(ring: &F, f: &Poly<F>) -> Vec<(usize, Poly<F>)> {
    let q = ring.size();
    let x = Poly::x(ring);
    let mut rest = f.monic(ring);
    let mut frob = x.clone(); // X^{q^i} mod rest
    let mut out = Vec::new();
    let mut d = 0usize;
    while rest.deg_or0() >= 2 * (d + 1) {
        d += 1;
        frob = frob.pow_mod(ring, &q, &rest);
        let g = frob.sub(ring, &x).gcd(ring, &rest);
        if !g.is_constant() {
            out.push((d, g.clone()));
            rest = rest.div_exact(ring, &g);
            frob = frob.rem(ring, &rest);
        }
    }
    if !rest.is_constant() {
        out.push((rest.degree().unwrap(), rest));
    }
    out
}

/// Splits a monic squarefree product of degree-`d` irreducibles into the
/// irreducibles themselves (Cantor–Zassenhaus; trace map in characteristic 2).
pub fn equal_degree_split<F: FiniteField>(
    ring: &F,
    f: &Poly<F>,
    d: usize,
    rng: &mut Rng,
) -> Vec<Poly<F>> {
    let n = f.deg_or0();
    if n == d {
        return vec![f.monic(ring)];
    }
    debug_assert!(n % d == 0);
    loop {
        let h = random_poly(ring, n - 1, rng);
        if h.is_constant() {
            continue;
        }
        let g = if ring.characteristic() == 2 {
            // trace map over F_2: h + h² + h⁴ + … (k·d terms for q = 2^k)
            let k = (ring.size().bits() - 1) as usize; // q = 2^k
            let mut acc = Poly::zero();
            let mut t = h.rem(ring, f);
            for _ in 0..k * d {
                acc = acc.add(ring, &t).rem(ring, f);
                t = t.mul(ring, &t).rem(ring, f);
            }
            acc
        } else {
            let e = (num_traits::pow::pow(ring.size(), d) - BigUint::one()).div_floor(&BigUint::from(2u32));
            h.pow_mod(ring, &e, f).sub(ring, &Poly::one(ring))
        };
        let w = g.gcd(ring, f);
        let wd = w.deg_or0();
        if wd > 0 && wd < n {
            let other = f.div_exact(ring, &w);
            let mut out = equal_degree_split(ring, &w, d, rng);
            out.extend(equal_degree_split(ring, &other, d, rng));
            return out;
        }
    }
}

fn random_poly<F: FiniteField>(ring: &F, max_deg: usize, rng: &mut Rng) -> Poly<F> {
    let coeffs = (0..=max_deg).map(|_| ring.random_element(rng)).collect();
    Poly::from_coeffs(ring, coeffs)
}

/// Whether a polynomial of degree ≥ 1 is irreducible (via distinct-degree
/// structure of its squarefree part).
pub fn is_irreducible<F>(ring: &F, f: &Poly<F>) -> bool
where
    F: FiniteField + PthRoot,
{
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(n) => {
            let sf = squarefree_decomposition_ff(ring, f);
            if sf.len() != 1 || sf[0].0 != 1 {
                return false;
            }
            let dd = distinct_degree_split(ring, &sf[0].1);
            dd.len() == 1 && dd[0].0 == n
        }
    }
}

/// Roots of `f` in the field, without multiplicity, sorted.
pub fn roots<F>(ring: &F, f: &Poly<F>, rng: &mut Rng) -> Vec<F::El>
where
    F: FiniteField + PthRoot,
    F::El: Ord,
{
    if f.is_zero() || f.is_constant() {
        return Vec::new();
    }
    // gcd with X^q − X isolates the distinct roots
    let q = ring.size();
    let frob = Poly::x(ring).pow_mod(ring, &q, f);
    let lin = frob.sub(ring, &Poly::x(ring)).gcd(ring, f);
    if lin.is_constant() {
        return Vec::new();
    }
    let mut out: Vec<F::El> = equal_degree_split(ring, &lin, 1, rng)
        .into_iter()
        .map(|l| {
            // l = X + c → root −c
            ring.neg(&l.coeff(ring, 0))
        })
        .collect();
    out.sort();
    out
}

/// Finds a monic irreducible polynomial of the given degree, deterministically
/// from the generator.
pub fn random_irreducible<F>(ring: &F, degree: usize, rng: &mut Rng) -> Poly<F>
where
    F: FiniteField + PthRoot,
{
    assert!(degree >= 1);
    loop {
        let mut coeffs: Vec<F::El> = (0..degree).map(|_| ring.random_element(rng)).collect();
        coeffs.push(ring.one());
        let f = Poly::from_coeffs(ring, coeffs);
        if is_irreducible(ring, &f) {
            return f;
        }
    }
}
