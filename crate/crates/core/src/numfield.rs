//! Number fields `K = Q(α)` presented by a monic integer minimal polynomial,
//! elements as power-basis coordinate vectors, degree-1 prime ideals
//! `(p, α − root)`, and reduction of map coefficients modulo such primes.
//!
//! Only degree-1 (norm-p) prime ideals are supported; no integral bases or
//! general ideal arithmetic.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::factor::{self, FactorError};
use crate::map::BelyiCandidate;
use crate::poly::{squarefree_decomposition_char0, Poly, SquarefreeField};
use crate::ring::{Field, PrimeField, Rationals};
use crate::rng::Rng;

/// Degree bound up to which irreducibility of the minimal polynomial is
/// certified at construction.
pub const IRREDUCIBILITY_CHECK_DEGREE_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumberFieldError {
    NotMonic,
    ZeroDegree,
    Reducible { witness: String },
    /// The best-effort check could not certify irreducibility.
    IrreducibilityUnknown,
    /// A coefficient denominator is divisible by p.
    NotPIntegral { location: String },
    /// `root` is not a root of the minimal polynomial mod p.
    InvalidPrimeSpec,
    /// Reduction would drop the degree (leading coefficient vanishes mod p).
    DegreeDrop,
    Factor(FactorError),
}

impl fmt::Display for NumberFieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberFieldError::NotMonic => write!(f, "minimal polynomial must be monic"),
            NumberFieldError::ZeroDegree => write!(f, "minimal polynomial must have degree >= 1"),
            NumberFieldError::Reducible { witness } => {
                write!(f, "minimal polynomial is reducible: {witness}")
            }
            NumberFieldError::IrreducibilityUnknown => {
                write!(f, "could not certify irreducibility of the minimal polynomial")
            }
            NumberFieldError::NotPIntegral { location } => {
                write!(f, "coefficient not p-integral at {location}")
            }
            NumberFieldError::InvalidPrimeSpec => {
                write!(f, "root does not satisfy the minimal polynomial mod p")
            }
            NumberFieldError::DegreeDrop => write!(f, "degree drops under reduction"),
            NumberFieldError::Factor(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NumberFieldError {}

impl From<FactorError> for NumberFieldError {
    fn from(e: FactorError) -> Self {
        NumberFieldError::Factor(e)
    }
}

/// `Q(α)` with `α` a root of the given monic integer polynomial.
/// `Q` itself is presented with minimal polynomial `α` (i.e. `α = 0`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NumberField {
    /// Ascending integer coefficients, monic, degree ≥ 1.
    min_poly: Vec<BigInt>,
}

impl NumberField {
    /// The rationals, as the degree-1 field `Q(α)` with `α = 0`.
    pub fn rationals() -> Self {
        NumberField { min_poly: vec![BigInt::zero(), BigInt::one()] }
    }

    /// Validates monicity and (for degree ≤ 16) certifies irreducibility by
    /// combining factorization patterns modulo several primes with a rational
    /// root check.
    pub fn new(min_poly: Vec<BigInt>) -> Result<Self, NumberFieldError> {
        let mut min_poly = min_poly;
        while min_poly.last().is_some_and(|c| c.is_zero()) {
            min_poly.pop();
        }
        if min_poly.len() < 2 {
            return Err(NumberFieldError::ZeroDegree);
        }
        if !min_poly.last().unwrap().is_one() {
            return Err(NumberFieldError::NotMonic);
        }
        let field = NumberField { min_poly };
        if field.degree() <= IRREDUCIBILITY_CHECK_DEGREE_BOUND && field.degree() > 1 {
            field.certify_irreducible()?;
        }
        Ok(field)
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn min_poly_rational(&self) -> Poly<Rationals> {
        Poly::from_coeffs(
            &Rationals,
            self.min_poly.iter().map(|c| BigRational::from(c.clone())).collect(),
        )
    }

    /// `[K : Q]`.
    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn ring(&self) -> NumberFieldRing {
        NumberFieldRing { field: self.clone() }
    }

    fn certify_irreducible(&self) -> Result<(), NumberFieldError> {
        let q = Rationals;
        let f = self.min_poly_rational();
        let n = self.degree();
        // rational roots would be integer divisors of the constant term
        let c0 = &self.min_poly[0];
        if c0.is_zero() {
            return Err(NumberFieldError::Reducible { witness: String::from("root 0") });
        }
        let bound: BigInt = c0.abs();
        let mut d = BigInt::one();
        while d <= bound {
            if (c0 % &d).is_zero() {
                for cand in [BigRational::from(d.clone()), BigRational::from(-d.clone())] {
                    if f.eval(&q, &cand).is_zero() {
                        return Err(NumberFieldError::Reducible {
                            witness: format!("rational root {cand}"),
                        });
                    }
                }
            }
            d += 1;
        }
        if n == 1 {
            return Ok(());
        }
        // squarefree over Q?
        if !f.gcd(&q, &f.derivative(&q)).is_constant() {
            return Err(NumberFieldError::Reducible {
                witness: String::from("repeated factor (not squarefree)"),
            });
        }
        // intersect the possible proper factor degrees over many primes
        let mut possible: Vec<bool> = vec![true; n + 1]; // possible[d] = a degree-d factor may exist
        let mut rng = Rng::from_seed(0);
        let mut primes_used = 0;
        let mut p = 2u64;
        while primes_used < 24 {
            p = next_prime(p + 1);
            let fp = PrimeField::new(p);
            let fbar = reduce_int_poly(&fp, &self.min_poly);
            if fbar.deg_or0() != n {
                continue; // leading coefficient drop (cannot happen: monic)
            }
            // skip primes where the reduction is not squarefree
            if !fbar.gcd(&fp, &fbar.derivative(&fp)).is_constant() {
                continue;
            }
            primes_used += 1;
            let fac = factor::factor_univariate_ff(&fp, &fbar, &mut rng)?;
            let degs: Vec<usize> = fac.factors.iter().map(|(g, _)| g.deg_or0()).collect();
            if degs.len() == 1 {
                return Ok(()); // irreducible mod p ⇒ irreducible over Q
            }
            // subset sums of factor degrees
            let mut sums = vec![false; n + 1];
            sums[0] = true;
            for d in degs {
                for s in (0..=n - d).rev() {
                    if sums[s] {
                        sums[s + d] = true;
                    }
                }
            }
            for (s, ok) in possible.iter_mut().enumerate() {
                *ok = *ok && sums[s];
            }
            if possible[1..n].iter().all(|ok| !ok) {
                return Ok(()); // no proper factor degree survives
            }
        }
        Err(NumberFieldError::IrreducibilityUnknown)
    }
}

fn next_prime(mut n: u64) -> u64 {
    while !crate::ring::is_prime_u64(n) {
        n += 1;
    }
    n
}

fn reduce_int_poly(fp: &PrimeField, coeffs: &[BigInt]) -> Poly<PrimeField> {
    Poly::from_coeffs(fp, coeffs.iter().map(|c| fp.reduce_bigint(c)).collect())
}

/// The field `K = Q(α)`, operating on power-basis coordinate vectors of
/// length `[K : Q]`.
#[derive(Clone, PartialEq, Debug)]
pub struct NumberFieldRing {
    field: NumberField,
}

impl NumberFieldRing {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// The generator α.
    pub fn gen(&self) -> Vec<BigRational> {
        let n = self.degree();
        let mut v = vec![BigRational::zero(); n];
        if n > 1 {
            v[1] = BigRational::one();
        }
        // for Q the generator is α = 0, i.e. the zero vector
        v
    }

    pub fn from_rational(&self, c: BigRational) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = c;
        v
    }

    fn to_poly(&self, a: &[BigRational]) -> Poly<Rationals> {
        Poly::from_coeffs(&Rationals, a.to_vec())
    }

    fn from_poly(&self, p: &Poly<Rationals>) -> Vec<BigRational> {
        let q = Rationals;
        let reduced = p.rem(&q, &self.field.min_poly_rational());
        let mut v = vec![BigRational::zero(); self.degree()];
        for (i, c) in reduced.coeffs().iter().enumerate() {
            v[i] = c.clone();
        }
        v
    }
}

impl Field for NumberFieldRing {
    type El = Vec<BigRational>;

    fn zero(&self) -> Self::El {
        vec![BigRational::zero(); self.degree()]
    }
    fn one(&self) -> Self::El {
        self.from_rational(BigRational::one())
    }
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn neg(&self, a: &Self::El) -> Self::El {
        a.iter().map(|x| -x).collect()
    }
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El {
        let q = Rationals;
        let prod = self.to_poly(a).mul(&q, &self.to_poly(b));
        self.from_poly(&prod)
    }
    fn inv(&self, a: &Self::El) -> Option<Self::El> {
        if self.is_zero(a) {
            return None;
        }
        // extended Euclid in Q[α] against the minimal polynomial
        let q = Rationals;
        let m = self.field.min_poly_rational();
        let mut r0 = m;
        let mut r1 = self.to_poly(a);
        let mut s0 = Poly::zero();
        let mut s1 = Poly::one(&q);
        while !r1.is_zero() {
            let (quot, rem) = r0.divrem(&q, &r1);
            let s2 = s0.sub(&q, &quot.mul(&q, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd = constant (min_poly irreducible), s0 · a ≡ r0 mod m
        debug_assert!(r0.is_constant() && !r0.is_zero());
        let c = q.inv(r0.leading().unwrap()).unwrap();
        Some(self.from_poly(&s0.scale(&q, &c)))
    }
    fn from_i64(&self, n: i64) -> Self::El {
        self.from_rational(BigRational::from(BigInt::from(n)))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &Self::El) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    fn display(&self, a: &Self::El) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "(");
        for (i, c) in a.iter().enumerate() {
            if i > 0 {
                let _ = write!(s, ",");
            }
            let _ = write!(s, "{c}");
        }
        let _ = write!(s, ")");
        s
    }
}

impl SquarefreeField for NumberFieldRing {
    fn squarefree_decomposition(&self, f: &Poly<Self>) -> Vec<(usize, Poly<Self>)> {
        squarefree_decomposition_char0(self, f)
    }
}

/// The degree-1 prime ideal `(p, α − root)` of norm `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdealSpec {
    pub p: u64,
    pub root: u64,
}

impl PrimeIdealSpec {
    pub fn new(field: &NumberField, p: u64, root: u64) -> Result<Self, NumberFieldError> {
        let fp = PrimeField::new(p);
        let fbar = reduce_int_poly(&fp, field.min_poly());
        if root >= p || fbar.eval(&fp, &root) != 0 {
            return Err(NumberFieldError::InvalidPrimeSpec);
        }
        Ok(PrimeIdealSpec { p, root })
    }
}

/// All degree-1 primes above `p`: one per root of the minimal polynomial
/// mod p, sorted by root.
pub fn degree_one_primes(field: &NumberField, p: u64) -> Vec<PrimeIdealSpec> {
    let fp = PrimeField::new(p);
    let fbar = reduce_int_poly(&fp, field.min_poly());
    let mut rng = Rng::from_seed(p); // root extraction is deterministic anyway
    factor::roots(&fp, &fbar, &mut rng)
        .into_iter()
        .map(|root| PrimeIdealSpec { p, root })
        .collect()
}

/// Reduces one field element under `α ↦ root`, failing if a denominator is
/// divisible by p.
pub fn reduce_element(
    fp: &PrimeField,
    spec: &PrimeIdealSpec,
    a: &[BigRational],
    location: &str,
) -> Result<u64, NumberFieldError> {
    let mut acc = 0u64;
    let mut alpha_pow = 1u64;
    for (i, c) in a.iter().enumerate() {
        let red = fp.reduce_rational(c).ok_or_else(|| NumberFieldError::NotPIntegral {
            location: format!("{location}, coordinate {i}"),
        })?;
        acc = fp.add(&acc, &fp.mul(&red, &alpha_pow));
        alpha_pow = fp.mul(&alpha_pow, &spec.root);
    }
    Ok(acc)
}

/// Coefficientwise reduction of a map over K to a map over `F_p`;
/// degrees must be preserved and coprimality must survive.
pub fn reduce_map_mod_prime(
    ring: &NumberFieldRing,
    m: &BelyiCandidate<NumberFieldRing>,
    spec: &PrimeIdealSpec,
) -> Result<BelyiCandidate<PrimeField>, NumberFieldError> {
    let fp = PrimeField::new(spec.p);
    let reduce_poly = |poly: &Poly<NumberFieldRing>,
                           which: &str|
     -> Result<Poly<PrimeField>, NumberFieldError> {
        let mut out = Vec::with_capacity(poly.coeffs().len());
        for (i, c) in poly.coeffs().iter().enumerate() {
            out.push(reduce_element(&fp, spec, c, &format!("{which}[{i}]"))?);
        }
        Ok(Poly::from_coeffs(&fp, out))
    };
    let num = reduce_poly(m.num(), "num")?;
    let den = reduce_poly(m.den(), "den")?;
    if num.deg_or0() != m.num().deg_or0() || den.deg_or0() != m.den().deg_or0() {
        return Err(NumberFieldError::DegreeDrop);
    }
    let _ = ring; // reduction itself only needs the spec
    if !num.gcd(&fp, &den).is_constant() {
        return Err(NumberFieldError::NotPIntegral {
            location: String::from("reduction introduces a common factor"),
        });
    }
    Ok(BelyiCandidate::new_unchecked(num, den))
}

/// The degree-7 field used throughout the tests and fixtures:
/// `α⁷ − α⁶ − 2α⁴ − α³ + 2α² + 2α + 2 = 0`, ascending coefficients.
pub fn example_septic_field() -> NumberField {
    NumberField::new(
        [2i64, 2, 2, -1, -2, 0, -1, 1].iter().map(|&c| BigInt::from(c)).collect(),
    )
    .expect("irreducible septic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn septic_field_accepted() {
        let k = example_septic_field();
        assert_eq!(k.degree(), 7);
    }

    #[test]
    fn reducible_rejected() {
        // (X−1)(X+1) = X² − 1
        let err = NumberField::new(vec![BigInt::from(-1), BigInt::zero(), BigInt::one()])
            .unwrap_err();
        assert!(matches!(err, NumberFieldError::Reducible { .. }));
        // X² − 2X + 1 = (X−1)²
        let err = NumberField::new(vec![BigInt::from(1), BigInt::from(-2), BigInt::one()])
            .unwrap_err();
        assert!(matches!(err, NumberFieldError::Reducible { .. }));
    }

    #[test]
    fn golden_quadratic_accepted() {
        NumberField::new(vec![BigInt::from(-1), BigInt::from(-1), BigInt::one()]).unwrap();
    }

    #[test]
    fn degree_one_primes_of_septic() {
        let k = example_septic_field();
        // p = 5: the unique root is 3 ≡ −2 (min_poly(−2) = 1295 ≡ 0 mod 5... wait,
        // evaluated exactly: (−2)⁷ −(−2)⁶ −2(−2)⁴ −(−2)³ +2(−2)² +2(−2)+2 = −210;
        // −210 ≡ 0 mod 5, and mod 7 ≡ 0 as well — the test pins only p = 5 here.
        let specs = degree_one_primes(&k, 5);
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].root, 3);
        // p = 269 contains root 62 ≡ −207
        let specs = degree_one_primes(&k, 269);
        assert!(specs.iter().any(|s| s.root == 62));
        // cross-check against direct evaluation at every residue
        let fp = PrimeField::new(269);
        let fbar = reduce_int_poly(&fp, k.min_poly());
        let expect: Vec<u64> = (0..269).filter(|x| fbar.eval(&fp, x) == 0).collect();
        assert_eq!(specs.iter().map(|s| s.root).collect::<Vec<_>>(), expect);
    }

    #[test]
    fn trivial_spec_over_q() {
        let q = NumberField::rationals();
        let specs = degree_one_primes(&q, 7);
        assert_eq!(specs, vec![PrimeIdealSpec { p: 7, root: 0 }]);
    }

    #[test]
    fn field_arithmetic() {
        let k = example_septic_field().ring();
        let a = k.gen();
        let ainv = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &ainv), k.one());
        // α⁷ = α⁶ + 2α⁴ + α³ − 2α² − 2α − 2
        let a7 = k.pow_u64(&a, 7);
        let mut expect = k.zero();
        for (i, c) in [-2i64, -2, -2, 1, 2, 0, 1].iter().enumerate() {
            let mut term = k.pow_u64(&a, i as u64);
            term = k.mul(&term, &k.from_i64(*c));
            expect = k.add(&expect, &term);
        }
        assert_eq!(a7, expect);
    }

    #[test]
    fn reduce_examples() {
        let k = example_septic_field();
        let ring = k.ring();
        let fp5 = PrimeField::new(5);
        let spec5 = PrimeIdealSpec::new(&k, 5, 3).unwrap();
        // 2 + α ↦ 2 + 3 = 5 ≡ 0
        let mut el = ring.from_i64(2);
        el = ring.add(&el, &ring.gen());
        assert_eq!(reduce_element(&fp5, &spec5, &el, "c").unwrap(), 0);
        // 1/2 mod 269 = 135
        let fp269 = PrimeField::new(269);
        let spec269 = PrimeIdealSpec::new(&k, 269, 62).unwrap();
        let half = ring.from_rational(BigRational::new(BigInt::one(), BigInt::from(2)));
        assert_eq!(reduce_element(&fp269, &spec269, &half, "c").unwrap(), 135);
        // 1/5 is not 5-integral
        let fifth = ring.from_rational(BigRational::new(BigInt::one(), BigInt::from(5)));
        assert!(matches!(
            reduce_element(&fp5, &spec5, &fifth, "c"),
            Err(NumberFieldError::NotPIntegral { .. })
        ));
    }

    #[test]
    fn invalid_prime_spec() {
        let k = example_septic_field();
        assert!(matches!(
            PrimeIdealSpec::new(&k, 5, 1),
            Err(NumberFieldError::InvalidPrimeSpec)
        ));
    }

    #[test]
    fn reduction_is_multiplicative() {
        // reduce(f·g) = reduce(f)·reduce(g) on polynomial parts
        let k = example_septic_field();
        let ring = k.ring();
        let spec = PrimeIdealSpec::new(&k, 269, 62).unwrap();
        let fp = PrimeField::new(269);
        let f = Poly::from_coeffs(&ring, vec![ring.gen(), ring.from_i64(3), ring.one()]);
        let g = Poly::from_coeffs(&ring, vec![ring.from_i64(-7), ring.gen()]);
        let red = |poly: &Poly<NumberFieldRing>| -> Poly<PrimeField> {
            let coeffs = poly
                .coeffs()
                .iter()
                .map(|c| reduce_element(&fp, &spec, c, "c").unwrap())
                .collect();
            Poly::from_coeffs(&fp, coeffs)
        };
        let lhs = red(&f.mul(&ring, &g));
        let rhs = red(&f).mul(&fp, &red(&g));
        assert_eq!(lhs, rhs);
    }
}
