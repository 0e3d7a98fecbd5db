//! Arithmetic-Galois checks on maps over finite fields: Dedekind
//! specialization sampling, rational-function decomposition search,
//! the 2-transitivity obstruction and the classification conclusion.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::factor::{self, FactorError};
use crate::map::{BelyiCandidate, Value};
use crate::perm::CycleType;
use crate::poly::{interpolate, Poly, PthRoot};
use crate::ring::{ExtField, Field, FiniteField, PrimeField};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisError {
    /// Characteristic divides the degree: additive/wild case unsupported.
    WildDegree { degree: usize, p: u64 },
    DegreeTooSmall { degree: usize, minimum: usize },
    /// Not enough admissible specialization points, even over extensions.
    FieldTooSmall,
    Factor(FactorError),
}

impl fmt::Display for GaloisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisError::WildDegree { degree, p } => {
                write!(f, "additive/wild case unsupported: {p} divides degree {degree}")
            }
            GaloisError::DegreeTooSmall { degree, minimum } => {
                write!(f, "degree {degree} below minimum {minimum}")
            }
            GaloisError::FieldTooSmall => {
                write!(f, "too few admissible specialization points")
            }
            GaloisError::Factor(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GaloisError {}

impl From<FactorError> for GaloisError {
    fn from(e: FactorError) -> Self {
        GaloisError::Factor(e)
    }
}

/// `p − s·q`, the polynomial whose roots form the fiber over `s`.
pub fn fiber_poly<F: Field>(ring: &F, m: &BelyiCandidate<F>, s: &F::El) -> Poly<F> {
    m.num().sub(ring, &m.den().scale(ring, s))
}

/// A specialization value `s` is admissible when it avoids 0 and 1, keeps
/// the fiber polynomial at full degree, and the fiber is squarefree.
pub fn admissible_fiber<F: Field>(ring: &F, m: &BelyiCandidate<F>, s: &F::El) -> bool {
    if ring.is_zero(s) || ring.is_one(s) {
        return false;
    }
    let fib = fiber_poly(ring, m, s);
    fib.deg_or0() == m.degree() && fib.gcd(ring, &fib.derivative(ring)).is_constant()
}

// ---------------------------------------------------------------------------
// Frobenius sampling
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct FrobeniusSamples {
    pub types: Vec<CycleType>,
    /// Inadmissible specialization values encountered while sampling.
    pub skipped: usize,
    /// False when the field ran out of admissible points before `count`.
    pub complete: bool,
}

/// Cycle types of Frobenius at `count` random admissible specializations:
/// the factor-degree multiset of `p − t0·q`.
pub fn frobenius_sample<F>(
    ring: &F,
    m: &BelyiCandidate<F>,
    count: usize,
    seed: u64,
) -> Result<FrobeniusSamples, GaloisError>
where
    F: FiniteField + PthRoot,
    F::El: Ord,
{
    let mut rng = Rng::from_seed(seed);
    let mut seen: Vec<F::El> = Vec::new();
    let mut types = Vec::new();
    let mut skipped = 0usize;
    let attempts = 60 * count as u64 + 300;
    for _ in 0..attempts {
        if types.len() == count {
            break;
        }
        let t0 = ring.random_element(&mut rng);
        if let Err(i) = seen.binary_search(&t0) {
            seen.insert(i, t0.clone());
        } else {
            continue;
        }
        if !admissible_fiber(ring, m, &t0) {
            skipped += 1;
            continue;
        }
        let fac = factor::factor_univariate_ff(ring, &fiber_poly(ring, m, &t0), &mut rng)?;
        types.push(CycleType::from_parts(fac.factors.iter().map(|(g, _)| g.deg_or0())));
    }
    let complete = types.len() == count;
    Ok(FrobeniusSamples { types, skipped, complete })
}

// ---------------------------------------------------------------------------
// Shared linear algebra and enumeration helpers
// ---------------------------------------------------------------------------

/// Any nonzero kernel vector of the `rows × ncols` matrix, or `None` when
/// the kernel is trivial.
fn kernel_vector<F: Field>(ring: &F, rows: &[Vec<F::El>], ncols: usize) -> Option<Vec<F::El>> {
    let mut mat: Vec<Vec<F::El>> = rows.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for c in 0..ncols {
        let Some(r) = (rank..mat.len()).find(|&r| !ring.is_zero(&mat[r][c])) else {
            continue;
        };
        mat.swap(rank, r);
        let inv = ring.inv(&mat[rank][c]).unwrap();
        for x in mat[rank].iter_mut() {
            *x = ring.mul(x, &inv);
        }
        for r2 in 0..mat.len() {
            if r2 != rank && !ring.is_zero(&mat[r2][c]) {
                let factor = mat[r2][c].clone();
                for j in 0..ncols {
                    let t = ring.mul(&factor, &mat[rank][j]);
                    mat[r2][j] = ring.sub(&mat[r2][j], &t);
                }
            }
        }
        pivot_of_col[c] = Some(rank);
        rank += 1;
    }
    let free = (0..ncols).find(|&c| pivot_of_col[c].is_none())?;
    let mut x = vec![ring.zero(); ncols];
    x[free] = ring.one();
    for c in 0..ncols {
        if let Some(r) = pivot_of_col[c] {
            x[c] = ring.neg(&mat[r][free]);
        }
    }
    Some(x)
}

/// All monic products of a subset of `factors` with total degree `target`,
/// or `None` when more than `cap` subsets exist.
fn degree_products<F: Field>(
    ring: &F,
    factors: &[Poly<F>],
    target: usize,
    cap: usize,
) -> Option<Vec<Poly<F>>> {
    // order by descending degree so the suffix-sum prune bites early
    let mut idx: Vec<usize> = (0..factors.len()).collect();
    idx.sort_by(|&a, &b| factors[b].deg_or0().cmp(&factors[a].deg_or0()));
    let degs: Vec<usize> = idx.iter().map(|&i| factors[i].deg_or0()).collect();
    let mut suffix = vec![0usize; degs.len() + 1];
    for i in (0..degs.len()).rev() {
        suffix[i] = suffix[i + 1] + degs[i];
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize, Poly<F>)> = vec![(0, target, Poly::one(ring))];
    while let Some((i, remaining, prod)) = stack.pop() {
        if remaining == 0 {
            if out.len() == cap {
                return None;
            }
            out.push(prod);
            continue;
        }
        if i == degs.len() || suffix[i] < remaining {
            continue;
        }
        stack.push((i + 1, remaining, prod.clone()));
        if degs[i] <= remaining {
            let with = prod.mul(ring, &factors[idx[i]].monic(ring));
            stack.push((i + 1, remaining - degs[i], with));
        }
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Indecomposability
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionCertificate<F: Field> {
    pub outer: BelyiCandidate<F>,
    pub inner: BelyiCandidate<F>,
}

#[derive(Clone, Debug)]
pub enum Decomposability {
    Decomposable(DecompositionCertificate<PrimeField>),
    /// Found only after moving to an extension field (ground field too small
    /// for admissible fibers, or the block system is not rational).
    DecomposableOverExtension {
        ext_modulus: Vec<u64>,
        cert: DecompositionCertificate<ExtField>,
    },
    /// The block search was exhaustive for every candidate inner degree.
    Indecomposable,
    /// The candidate-block budget ran out for the listed inner degrees.
    Unresolved { inner_degrees: Vec<usize> },
}

impl Decomposability {
    pub fn is_decomposable(&self) -> bool {
        matches!(
            self,
            Decomposability::Decomposable(_) | Decomposability::DecomposableOverExtension { .. }
        )
    }
}

enum SearchOutcome<F: Field> {
    Found(DecompositionCertificate<F>),
    Exhausted,
    Unresolved(Vec<usize>),
    TooFewFibers,
}

struct FiberData<F: Field> {
    base_point: F::El,
    poly: Poly<F>,
    factors: Vec<Poly<F>>,
}

fn collect_fibers<F>(
    ring: &F,
    m: &BelyiCandidate<F>,
    want: usize,
    rng: &mut Rng,
) -> Result<Vec<FiberData<F>>, GaloisError>
where
    F: FiniteField + PthRoot,
    F::El: Ord,
{
    let mut fibers: Vec<FiberData<F>> = Vec::new();
    let mut values: Vec<F::El> = Vec::new(); // specialization values already used
    let mut seen: Vec<F::El> = Vec::new();
    let attempts = 200 * want as u64 + 2000;
    for _ in 0..attempts {
        if fibers.len() == want {
            break;
        }
        let y = ring.random_element(rng);
        if let Err(i) = seen.binary_search(&y) {
            seen.insert(i, y.clone());
        } else {
            continue;
        }
        let Ok(Value::Finite(s)) = crate::map::evaluate_map(ring, m, &y) else {
            continue;
        };
        if values.contains(&s) || !admissible_fiber(ring, m, &s) {
            continue;
        }
        let poly = fiber_poly(ring, m, &s);
        let factors: Vec<Poly<F>> = factor::factor_univariate_ff(ring, &poly, rng)?
            .factors
            .into_iter()
            .map(|(g, _)| g)
            .collect();
        values.push(s);
        fibers.push(FiberData { base_point: y, poly, factors });
    }
    Ok(fibers)
}

/// Candidate blocks of size `k` through the fiber's rational base point:
/// monic degree-`k` products of irreducible factors including `X − y`.
fn candidate_blocks<F: Field>(
    ring: &F,
    fiber: &FiberData<F>,
    k: usize,
    cap: usize,
) -> Option<Vec<Poly<F>>> {
    let lin = Poly::from_coeffs(ring, vec![ring.neg(&fiber.base_point), ring.one()]);
    let others: Vec<Poly<F>> = fiber.factors.iter().filter(|g| **g != lin).cloned().collect();
    let rest = degree_products(ring, &others, k - 1, cap)?;
    Some(rest.into_iter().map(|r| r.mul(ring, &lin)).collect())
}

/// Möbius gauge for an inner map built from two blocks `d_a/d_b`:
/// numerator monic of full degree, denominator monic of lower degree,
/// and `h(0) = 0` where possible.
fn normalize_inner<F: Field>(
    ring: &F,
    d_a: &Poly<F>,
    d_b: &Poly<F>,
) -> Option<(Poly<F>, Poly<F>)> {
    if !d_a.gcd(ring, d_b).is_constant() {
        return None;
    }
    // d_a/d_b fixes ∞ ↦ 1 (both monic); send 1 ↦ ∞ instead
    let mut h1 = d_b.clone();
    let h2 = d_a.sub(ring, d_b).monic(ring);
    if h2.is_zero() {
        return None;
    }
    let h2_at_0 = h2.coeff(ring, 0);
    if !ring.is_zero(&h2_at_0) {
        let shift = ring.div(&h1.coeff(ring, 0), &h2_at_0).unwrap();
        h1 = h1.sub(ring, &h2.scale(ring, &shift));
    }
    Some((h1, h2))
}

/// Solves the linear conditions for an outer map `g` of degree `outer_deg`
/// with `g ∘ (h1/h2) = m`, verifying the composition before returning.
fn solve_outer<F: Field>(
    ring: &F,
    m: &BelyiCandidate<F>,
    h1: &Poly<F>,
    h2: &Poly<F>,
    outer_deg: usize,
) -> Option<(Poly<F>, Poly<F>)> {
    // basis A_i = h1^i h2^(outer_deg−i); condition p·Σ b_i A_i = q·Σ a_i A_i
    let mut basis = Vec::with_capacity(outer_deg + 1);
    let mut pow1 = Poly::one(ring);
    for _ in 0..=outer_deg {
        basis.push(pow1.clone());
        pow1 = pow1.mul(ring, h1);
    }
    let mut pow2 = Poly::one(ring);
    for i in (0..=outer_deg).rev() {
        basis[i] = basis[i].mul(ring, &pow2);
        pow2 = pow2.mul(ring, h2);
    }
    let nrows = m.degree() + outer_deg * h1.deg_or0() + 1;
    let ncols = 2 * (outer_deg + 1);
    let mut rows = vec![vec![ring.zero(); ncols]; nrows];
    for (i, a) in basis.iter().enumerate() {
        let qa = m.den().mul(ring, a);
        let pa = m.num().mul(ring, a);
        for (r, c) in qa.coeffs().iter().enumerate() {
            rows[r][i] = c.clone();
        }
        for (r, c) in pa.coeffs().iter().enumerate() {
            rows[r][outer_deg + 1 + i] = ring.neg(c);
        }
    }
    let x = kernel_vector(ring, &rows, ncols)?;
    let g1 = Poly::from_coeffs(ring, x[..=outer_deg].to_vec());
    let g2 = Poly::from_coeffs(ring, x[outer_deg + 1..].to_vec());
    if g1.is_zero() && g2.is_zero() {
        return None;
    }
    let common = g1.gcd(ring, &g2);
    let (g1, g2) = if common.is_constant() {
        (g1, g2)
    } else {
        (g1.div_exact(ring, &common), g2.div_exact(ring, &common))
    };
    if g1.deg_or0().max(g2.deg_or0()) != outer_deg {
        return None;
    }
    if !verify_composition(ring, m, (&g1, &g2), (h1, h2)) {
        return None;
    }
    Some((g1, g2))
}

/// Checks `g ∘ h = m` projectively.
fn verify_composition<F: Field>(
    ring: &F,
    m: &BelyiCandidate<F>,
    g: (&Poly<F>, &Poly<F>),
    h: (&Poly<F>, &Poly<F>),
) -> bool {
    let deg = g.0.deg_or0().max(g.1.deg_or0());
    let mut num = Poly::zero();
    let mut den = Poly::zero();
    let mut pow1 = vec![Poly::one(ring)];
    for _ in 0..deg {
        pow1.push(pow1.last().unwrap().mul(ring, h.0));
    }
    let mut pow2: Vec<Poly<F>> = vec![Poly::one(ring)];
    for _ in 0..deg {
        pow2.push(pow2.last().unwrap().mul(ring, h.1));
    }
    for i in 0..=deg {
        let a = pow1[i].mul(ring, &pow2[deg - i]);
        num = num.add(ring, &a.scale(ring, &g.0.coeff(ring, i)));
        den = den.add(ring, &a.scale(ring, &g.1.coeff(ring, i)));
    }
    // p/q = num/den up to a scalar
    let u = m.num().mul(ring, &den);
    let v = m.den().mul(ring, &num);
    if v.is_zero() || u.is_zero() {
        return false;
    }
    let c = ring.div(u.leading().unwrap(), v.leading().unwrap()).unwrap();
    u == v.scale(ring, &c)
}

/// Per-inner-degree cap on enumerated candidate blocks per fiber.
pub const BLOCK_CANDIDATE_CAP: usize = 20_000;

fn decompose_search<F>(
    ring: &F,
    m: &BelyiCandidate<F>,
    rng: &mut Rng,
) -> Result<SearchOutcome<F>, GaloisError>
where
    F: FiniteField + PthRoot,
    F::El: Ord,
{
    let n = m.degree();
    let fibers = collect_fibers(ring, m, 5, rng)?;
    if fibers.len() < 2 {
        return Ok(SearchOutcome::TooFewFibers);
    }
    let mut unresolved = Vec::new();
    let mut k = 2;
    while k <= n / 2 {
        if n % k != 0 {
            k += 1;
            continue;
        }
        let cands_a = candidate_blocks(ring, &fibers[0], k, BLOCK_CANDIDATE_CAP);
        let cands_b = candidate_blocks(ring, &fibers[1], k, BLOCK_CANDIDATE_CAP);
        let (Some(cands_a), Some(cands_b)) = (cands_a, cands_b) else {
            unresolved.push(k);
            k += 1;
            continue;
        };
        for d_a in &cands_a {
            'pair: for d_b in &cands_b {
                let Some((h1, h2)) = normalize_inner(ring, d_a, d_b) else {
                    continue;
                };
                if h1.deg_or0() != k {
                    continue;
                }
                // cheap filter: the h-fiber through each spare rational
                // point must again be a union of irreducible factors
                for check in &fibers[2..] {
                    let h2_at = h2.eval(ring, &check.base_point);
                    if ring.is_zero(&h2_at) {
                        continue 'pair;
                    }
                    let lambda = ring.div(&h1.eval(ring, &check.base_point), &h2_at).unwrap();
                    let block = h1.sub(ring, &h2.scale(ring, &lambda));
                    if !block.divides(ring, &check.poly) {
                        continue 'pair;
                    }
                }
                if let Some((g1, g2)) = solve_outer(ring, m, &h1, &h2, n / k) {
                    let outer = BelyiCandidate::new(ring, g1, g2).ok();
                    let inner = BelyiCandidate::new(ring, h1, h2).ok();
                    if let (Some(outer), Some(inner)) = (outer, inner) {
                        return Ok(SearchOutcome::Found(DecompositionCertificate {
                            outer,
                            inner,
                        }));
                    }
                }
            }
        }
        k += 1;
    }
    if unresolved.is_empty() {
        Ok(SearchOutcome::Exhausted)
    } else {
        Ok(SearchOutcome::Unresolved(unresolved))
    }
}

/// Whether `m = g ∘ h` admits a decomposition with both degrees ≥ 2,
/// searching candidate blocks through rational fiber points; exhaustive
/// over the ground field when enough admissible fibers exist, otherwise
/// retried over small extensions.
pub fn indecomposability_test(
    fp: &PrimeField,
    m: &BelyiCandidate<PrimeField>,
    seed: u64,
) -> Result<Decomposability, GaloisError> {
    let n = m.degree();
    if n < 2 {
        return Err(GaloisError::DegreeTooSmall { degree: n, minimum: 2 });
    }
    if n as u64 % fp.modulus() == 0 {
        return Err(GaloisError::WildDegree { degree: n, p: fp.modulus() });
    }
    if crate::ring::is_prime_u64(n as u64) {
        return Ok(Decomposability::Indecomposable);
    }
    let mut rng = Rng::from_seed(seed);
    match decompose_search(fp, m, &mut rng)? {
        SearchOutcome::Found(cert) => return Ok(Decomposability::Decomposable(cert)),
        SearchOutcome::Exhausted => return Ok(Decomposability::Indecomposable),
        SearchOutcome::Unresolved(ks) => {
            return Ok(Decomposability::Unresolved { inner_degrees: ks })
        }
        SearchOutcome::TooFewFibers => {}
    }
    for ext_deg in 2..=5 {
        let modulus = factor::random_irreducible(fp, ext_deg, &mut rng);
        let ext = ExtField::new(fp.clone(), modulus.coeffs().to_vec());
        let m_ext = m.map(&ext, |c| ext.lift(*c));
        match decompose_search(&ext, &m_ext, &mut rng)? {
            SearchOutcome::Found(cert) => {
                if let Some(base) = descend_certificate(fp, &ext, &cert) {
                    return Ok(Decomposability::Decomposable(base));
                }
                return Ok(Decomposability::DecomposableOverExtension {
                    ext_modulus: modulus.coeffs().to_vec(),
                    cert,
                });
            }
            SearchOutcome::Exhausted => return Ok(Decomposability::Indecomposable),
            SearchOutcome::Unresolved(ks) => {
                return Ok(Decomposability::Unresolved { inner_degrees: ks })
            }
            SearchOutcome::TooFewFibers => continue,
        }
    }
    Err(GaloisError::FieldTooSmall)
}

/// Maps an extension-field certificate back down when every coefficient
/// happens to lie in the prime field.
fn descend_certificate(
    fp: &PrimeField,
    ext: &ExtField,
    cert: &DecompositionCertificate<ExtField>,
) -> Option<DecompositionCertificate<PrimeField>> {
    let down = |p: &Poly<ExtField>| -> Option<Poly<PrimeField>> {
        let mut coeffs = Vec::with_capacity(p.coeffs().len());
        for c in p.coeffs() {
            coeffs.push(ext.to_base(c)?);
        }
        Some(Poly::from_coeffs(fp, coeffs))
    };
    let outer =
        BelyiCandidate::new(fp, down(cert.outer.num())?, down(cert.outer.den())?).ok()?;
    let inner =
        BelyiCandidate::new(fp, down(cert.inner.num())?, down(cert.inner.den())?).ok()?;
    Some(DecompositionCertificate { outer, inner })
}

// ---------------------------------------------------------------------------
// 2-transitivity obstruction
// ---------------------------------------------------------------------------

/// `Σ x_coeffs[i](t) · X^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bivariate<F: Field> {
    pub x_coeffs: Vec<Poly<F>>,
}

impl<F: Field> Bivariate<F> {
    pub fn degree_x(&self) -> usize {
        self.x_coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn degree_t(&self) -> usize {
        self.x_coeffs.iter().map(|c| c.deg_or0()).max().unwrap_or(0)
    }

    pub fn eval_t(&self, ring: &F, t0: &F::El) -> Poly<F> {
        Poly::from_coeffs(ring, self.x_coeffs.iter().map(|c| c.eval(ring, t0)).collect())
    }

    pub fn display(&self, ring: &F) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let mut first = true;
        for (i, c) in self.x_coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                let _ = write!(s, " + ");
            }
            first = false;
            let _ = write!(s, "({})", c.display(ring, "t"));
            if i == 1 {
                let _ = write!(s, "*X");
            } else if i > 1 {
                let _ = write!(s, "*X^{i}");
            }
        }
        if first {
            s.push('0');
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct TwoTransReport<F: Field> {
    /// A bivariate factor family dividing `(p(t)q(X) − q(t)p(X))/(X − t)`,
    /// when one was reconstructed.
    pub family: Option<Bivariate<F>>,
    /// `(t0, irreducible factor degrees of the specialized quotient)`.
    pub samples: Vec<(F::El, Vec<usize>)>,
    pub skipped: usize,
    pub diagnostics: Vec<String>,
}

/// Per-sample cap on enumerated degree-`k` divisors; samples over the cap
/// still participate in validation, just not in interpolation.
const TWOTRANS_CANDIDATE_CAP: usize = 60;
/// Cap on interpolation combinations tried per (k, deg_t) attempt.
const TWOTRANS_COMBO_CAP: usize = 400;

/// Searches for a low-X-degree factor family of the symmetrized quotient by
/// factoring specializations at many `t0` and interpolating the matched
/// factors' coefficients as rational functions of `t`.
pub fn twotrans_obstruction<F>(
    ring: &F,
    m: &BelyiCandidate<F>,
    max_factor_degree: usize,
    samples: usize,
    seed: u64,
) -> Result<TwoTransReport<F>, GaloisError>
where
    F: FiniteField + PthRoot,
    F::El: Ord,
{
    let n = m.degree();
    if n < 3 {
        return Err(GaloisError::DegreeTooSmall { degree: n, minimum: 3 });
    }
    let mut rng = Rng::from_seed(seed);
    let mut seen: Vec<F::El> = Vec::new();
    let mut skipped = 0usize;
    let mut data: Vec<(F::El, Poly<F>, Vec<Poly<F>>)> = Vec::new();
    let attempts = 60 * samples as u64 + 300;
    for _ in 0..attempts {
        if data.len() == samples {
            break;
        }
        let t0 = ring.random_element(&mut rng);
        if let Err(i) = seen.binary_search(&t0) {
            seen.insert(i, t0.clone());
        } else {
            continue;
        }
        let Ok(Value::Finite(s0)) = crate::map::evaluate_map(ring, m, &t0) else {
            skipped += 1;
            continue;
        };
        if !admissible_fiber(ring, m, &s0) {
            skipped += 1;
            continue;
        }
        // p(t0)q(X) − q(t0)p(X) = −q(t0)·(p(X) − s0·q(X)); divide out X − t0
        let lin = Poly::from_coeffs(ring, vec![ring.neg(&t0), ring.one()]);
        let b = fiber_poly(ring, m, &s0).div_exact(ring, &lin);
        let factors: Vec<Poly<F>> = factor::factor_univariate_ff(ring, &b, &mut rng)?
            .factors
            .into_iter()
            .map(|(g, _)| g)
            .collect();
        data.push((t0, b, factors));
    }
    let mut report = TwoTransReport {
        family: None,
        samples: data
            .iter()
            .map(|(t0, _, fs)| {
                let mut degs: Vec<usize> = fs.iter().map(|g| g.deg_or0()).collect();
                degs.sort_unstable();
                (t0.clone(), degs)
            })
            .collect(),
        skipped,
        diagnostics: Vec::new(),
    };
    if data.len() < samples {
        report.diagnostics.push(format!(
            "only {} of {samples} requested specializations were admissible",
            data.len()
        ));
    }
    if data.len() < 5 {
        report.diagnostics.push(String::from("too few specializations for interpolation"));
        return Ok(report);
    }
    for k in 1..=max_factor_degree.min(n.saturating_sub(2)) {
        if let Some(family) = reconstruct_family(ring, &data, k, &mut report.diagnostics) {
            report.family = Some(family);
            break;
        }
    }
    if report.family.is_none() {
        report
            .diagnostics
            .push(String::from("interpolation failed: no consistent factor family"));
    }
    Ok(report)
}

fn reconstruct_family<F: Field>(
    ring: &F,
    data: &[(F::El, Poly<F>, Vec<Poly<F>>)],
    k: usize,
    diagnostics: &mut Vec<String>,
) -> Option<Bivariate<F>>
where
    F::El: Ord,
{
    // candidate degree-k divisors per sample; None = over cap (validate only)
    let mut cands: Vec<Option<Vec<Poly<F>>>> = Vec::with_capacity(data.len());
    for (_, _, factors) in data {
        let c = degree_products(ring, factors, k, TWOTRANS_CANDIDATE_CAP);
        if let Some(c) = &c {
            if c.is_empty() {
                return None; // a sample with no degree-k divisor kills the family
            }
        }
        cands.push(c);
    }
    // interpolate from the least ambiguous samples first
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by_key(|&i| cands[i].as_ref().map_or(usize::MAX, |c| c.len()));
    let max_dt = 2 * k + 2;
    for dt in 0..=max_dt {
        let need = 2 * dt + 1;
        if need + 2 > data.len() {
            break;
        }
        let build = &order[..need];
        let mut combos: usize = 1;
        for &i in build {
            let Some(c) = &cands[i] else {
                combos = usize::MAX;
                break;
            };
            combos = combos.saturating_mul(c.len());
        }
        if combos > TWOTRANS_COMBO_CAP {
            diagnostics.push(format!(
                "degree {k}: too many candidate assignments at t-degree {dt}"
            ));
            continue;
        }
        let mut choice = vec![0usize; need];
        loop {
            if let Some(f) = try_combo(ring, data, cands.as_slice(), build, &choice, k, dt) {
                return Some(f);
            }
            // next mixed-radix choice
            let mut pos = 0;
            loop {
                if pos == need {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < cands[build[pos]].as_ref().unwrap().len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == need {
                break;
            }
        }
    }
    None
}

fn try_combo<F: Field>(
    ring: &F,
    data: &[(F::El, Poly<F>, Vec<Poly<F>>)],
    cands: &[Option<Vec<Poly<F>>>],
    build: &[usize],
    choice: &[usize],
    k: usize,
    dt: usize,
) -> Option<Bivariate<F>> {
    // Cauchy-interpolate each coefficient of the monic degree-k divisor
    let mut rationals: Vec<(Poly<F>, Poly<F>)> = Vec::with_capacity(k);
    for coeff_idx in 0..k {
        let points: Vec<(F::El, F::El)> = build
            .iter()
            .zip(choice)
            .map(|(&i, &c)| {
                let cand = &cands[i].as_ref().unwrap()[c];
                (data[i].0.clone(), cand.coeff(ring, coeff_idx))
            })
            .collect();
        rationals.push(cauchy_interpolate(ring, &points, dt, dt)?);
    }
    // clear denominators with their lcm
    let mut common = Poly::one(ring);
    for (_, den) in &rationals {
        let g = common.gcd(ring, den);
        common = common.mul(ring, &den.div_exact(ring, &g));
    }
    if common.deg_or0() > dt {
        return None;
    }
    let mut x_coeffs: Vec<Poly<F>> = rationals
        .iter()
        .map(|(num, den)| num.mul(ring, &common.div_exact(ring, den)))
        .collect();
    x_coeffs.push(common);
    let family = Bivariate { x_coeffs };
    // validate on every sample, ambiguous ones included
    for (t0, b, _) in data {
        let spec = family.eval_t(ring, t0);
        if spec.deg_or0() != k || !spec.divides(ring, b) {
            return None;
        }
    }
    Some(family)
}

/// Rational interpolation: `num/den` of degrees ≤ `dnum`, `dden` matching
/// all sample points, via the extended Euclidean scheme on the interpolant.
pub fn cauchy_interpolate<F: Field>(
    ring: &F,
    points: &[(F::El, F::El)],
    dnum: usize,
    dden: usize,
) -> Option<(Poly<F>, Poly<F>)> {
    let mut modulus = Poly::one(ring);
    for (t, _) in points {
        let lin = Poly::from_coeffs(ring, vec![ring.neg(t), ring.one()]);
        modulus = modulus.mul(ring, &lin);
    }
    let inter = interpolate(ring, points);
    let mut r0 = modulus;
    let mut r1 = inter;
    let mut v0 = Poly::zero();
    let mut v1 = Poly::one(ring);
    while !r1.is_zero() && r1.deg_or0() > dnum {
        let (q, r2) = r0.divrem(ring, &r1);
        let v2 = v0.sub(ring, &q.mul(ring, &v1));
        r0 = r1;
        r1 = r2;
        v0 = v1;
        v1 = v2;
    }
    if v1.is_zero() || v1.deg_or0() > dden {
        return None;
    }
    for (t, _) in points {
        if ring.is_zero(&v1.eval(ring, t)) {
            return None;
        }
    }
    let g = r1.gcd(ring, &v1);
    let (num, den) = if g.is_constant() {
        (r1, v1)
    } else {
        (r1.div_exact(ring, &g), v1.div_exact(ring, &g))
    };
    let c = ring.inv(den.leading().unwrap()).unwrap();
    Some((num.scale(ring, &c), den.scale(ring, &c)))
}

// ---------------------------------------------------------------------------
// Classification conclusion
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct MonodromyEvidence {
    pub degree: usize,
    /// Primitivity of the monodromy group, with how it was established.
    pub primitive: Option<bool>,
    pub primitive_provenance: String,
    /// X-degree of a found nontrivial factor family, ruling out
    /// 2-transitivity.
    pub obstruction_degree: Option<usize>,
    pub frobenius_types: Vec<CycleType>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct MonodromyConclusion {
    pub group: Option<String>,
    pub lines: Vec<String>,
}

impl MonodromyConclusion {
    pub fn conclusive(&self) -> bool {
        self.group.is_some()
    }
}

impl fmt::Display for MonodromyConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        match &self.group {
            Some(g) => write!(f, "conclusion: monodromy group is {g}"),
            None => write!(f, "conclusion: inconclusive"),
        }
    }
}

/// Applies the fixed degree-266 inference: primitive and not 2-transitive
/// forces the smallest of the three primitive groups of that degree. The
/// rule set encodes only this case; anything else is inconclusive.
pub fn conclude_monodromy(ev: &MonodromyEvidence) -> MonodromyConclusion {
    let mut lines = Vec::new();
    for t in &ev.frobenius_types {
        if t.degree() != ev.degree {
            lines.push(format!(
                "warning: sampled type {t} has total {} ≠ degree {}",
                t.degree(),
                ev.degree
            ));
        }
    }
    for n in &ev.notes {
        lines.push(format!("note: {n}"));
    }
    if ev.degree != 266 {
        lines.push(format!(
            "degree {} is outside the encoded rule set (degree 266 only)",
            ev.degree
        ));
        return MonodromyConclusion { group: None, lines };
    }
    let mut missing = Vec::new();
    match ev.primitive {
        Some(true) => lines.push(format!(
            "premise: monodromy group is primitive ({})",
            ev.primitive_provenance
        )),
        Some(false) => {
            lines.push(String::from("premise failed: monodromy group is imprimitive"));
            return MonodromyConclusion { group: None, lines };
        }
        None => missing.push("primitivity"),
    }
    match ev.obstruction_degree {
        Some(k) => lines.push(format!(
            "premise: a degree-{k} factor family of the symmetrized quotient exists, \
             so the action is not 2-transitive"
        )),
        None => missing.push("2-transitivity obstruction"),
    }
    if !missing.is_empty() {
        lines.push(format!("missing premises: {}", missing.join(", ")));
        return MonodromyConclusion { group: None, lines };
    }
    lines.push(String::from(
        "the primitive groups of degree 266 are J1, A266 and S266 \
         (tables of primitive groups)",
    ));
    lines.push(String::from(
        "A266 and S266 are 2-transitive, which the factor family excludes",
    ));
    lines.push(String::from(
        "remark: the geometric monodromy group is normal in the arithmetic one; \
         J1 is simple, so the two coincide",
    ));
    MonodromyConclusion { group: Some(String::from("J1")), lines }
}
