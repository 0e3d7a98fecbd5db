//! Back half of the solver: build the coefficient-matching ansatz from a
//! ramification profile and approximate preimages, refine it with Newton's
//! method on a precision ladder, and reconstruct the map exactly.
//!
//! The gauge places a highest-multiplicity preimage of 0 at 0, of 1 at 1
//! and of ∞ at ∞. Writing `p = c·∏ P_m^m`, `q = ∏ Q_m^m` (monic squarefree
//! class factors) and `r = c·∏ R_m^m`, the identity `p − q − r = 0` gives
//! one equation per coefficient below the leading one: `d` equations in the
//! `d` unknowns (free factor coefficients plus the scale `c`).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::bigfloat::{bits_for_digits, BigFloat, CBigFloat};
use crate::lll::{lll_reduce, AlgebraicGuess, PrecisionContext};
use crate::map::{ramification_profile, BelyiCandidate, RamificationProfile, Value};
use crate::numfield::{NumberField, NumberFieldRing};
use crate::poly::Poly;
use crate::ring::Rationals;

#[derive(Debug, Clone, PartialEq)]
pub enum NewtonError {
    MultiplicityMismatch { fiber: &'static str },
    NotGenusZero,
    MissingFinitePreimage { fiber: &'static str },
    SingularJacobian,
    /// Residual log10 per iteration of the failing level.
    Diverged { history: Vec<f64> },
    /// A refined coefficient would not round to a rational or field element
    /// within the height bounds.
    UnrecognizedCoefficient { location: String },
    ReconstructionMismatch { detail: String },
}

impl fmt::Display for NewtonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NewtonError::MultiplicityMismatch { fiber } => {
                write!(f, "preimage multiplicities do not match the profile over {fiber}")
            }
            NewtonError::NotGenusZero => write!(f, "profile is not of genus 0"),
            NewtonError::MissingFinitePreimage { fiber } => {
                write!(f, "fiber over {fiber} has no usable preimage for the gauge")
            }
            NewtonError::SingularJacobian => {
                write!(f, "degenerate configuration (coalesced preimages?)")
            }
            NewtonError::Diverged { history } => {
                write!(f, "Newton diverged; residual log10 history: {history:?}")
            }
            NewtonError::UnrecognizedCoefficient { location } => {
                write!(f, "coefficient not recognized at {location}")
            }
            NewtonError::ReconstructionMismatch { detail } => {
                write!(f, "exact recheck failed: {detail}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NewtonError {}

/// One multiplicity class of a fiber: a monic squarefree factor with
/// `free_roots` unknown coefficients; `pinned` classes carry an extra fixed
/// root (0, 1, or ∞ depending on the fiber).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzClass {
    pub multiplicity: usize,
    pub free_roots: usize,
    pub pinned: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSystem {
    pub profile: RamificationProfile,
    pub classes0: Vec<AnsatzClass>,
    pub classes1: Vec<AnsatzClass>,
    pub classes_inf: Vec<AnsatzClass>,
}

impl AnsatzSystem {
    pub fn degree(&self) -> usize {
        self.profile.degree()
    }

    /// Free factor coefficients plus the scale constant; equals the degree.
    pub fn unknowns(&self) -> usize {
        1 + self
            .classes0
            .iter()
            .chain(&self.classes1)
            .chain(&self.classes_inf)
            .map(|c| c.free_roots)
            .sum::<usize>()
    }

    pub fn equations(&self) -> usize {
        self.degree()
    }
}

/// Approximate fiber points with multiplicities, as produced by the
/// conformal stage.
#[derive(Clone, Debug)]
pub struct LabeledPreimages {
    pub over0: Vec<(Value<Complex64>, usize)>,
    pub over1: Vec<(Value<Complex64>, usize)>,
    pub over_inf: Vec<(Value<Complex64>, usize)>,
}

fn classes_from_parts(parts: &[usize]) -> Vec<AnsatzClass> {
    let mut out: Vec<AnsatzClass> = Vec::new();
    for &m in parts {
        match out.iter_mut().find(|c| c.multiplicity == m) {
            Some(c) => c.free_roots += 1,
            None => out.push(AnsatzClass { multiplicity: m, free_roots: 1, pinned: false }),
        }
    }
    out
}

/// Pins one root of the highest-multiplicity class (ties by order of the
/// `parts` list, which is descending).
fn pin_highest(classes: &mut [AnsatzClass]) {
    let best = classes
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.multiplicity, usize::MAX - i))
        .map(|(i, _)| i)
        .unwrap();
    classes[best].pinned = true;
    classes[best].free_roots -= 1;
}

fn check_preimages(
    parts: &crate::perm::CycleType,
    pre: &[(Value<Complex64>, usize)],
    fiber: &'static str,
) -> Result<(), NewtonError> {
    let mut have: Vec<usize> = pre.iter().map(|(_, m)| *m).collect();
    have.sort_unstable_by(|a, b| b.cmp(a));
    if have != parts.parts {
        return Err(NewtonError::MultiplicityMismatch { fiber });
    }
    Ok(())
}

/// Index of a highest-multiplicity preimage, preferring `∞` for the fiber
/// over ∞ when present.
fn gauge_index(pre: &[(Value<Complex64>, usize)], prefer_infinity: bool) -> usize {
    let top = pre.iter().map(|(_, m)| *m).max().unwrap();
    if prefer_infinity {
        if let Some(i) = pre
            .iter()
            .position(|(v, m)| *m == top && matches!(v, Value::Infinity))
        {
            return i;
        }
    }
    pre.iter().position(|(_, m)| *m == top).unwrap()
}

/// The ansatz plus an initial unknown vector, with all preimages moved by
/// the gauge Möbius transformation.
pub fn build_system(
    profile: &RamificationProfile,
    preimages: &LabeledPreimages,
) -> Result<(AnsatzSystem, Vec<CBigFloat>), NewtonError> {
    if !profile.is_genus_zero() {
        return Err(NewtonError::NotGenusZero);
    }
    check_preimages(&profile.over0, &preimages.over0, "0")?;
    check_preimages(&profile.over1, &preimages.over1, "1")?;
    check_preimages(&profile.over_inf, &preimages.over_inf, "infinity")?;
    let i0 = gauge_index(&preimages.over0, false);
    let i1 = gauge_index(&preimages.over1, false);
    let ii = gauge_index(&preimages.over_inf, true);
    let Value::Finite(z0) = preimages.over0[i0].0 else {
        return Err(NewtonError::MissingFinitePreimage { fiber: "0" });
    };
    let Value::Finite(z1) = preimages.over1[i1].0 else {
        return Err(NewtonError::MissingFinitePreimage { fiber: "1" });
    };
    let zi = preimages.over_inf[ii].0.clone();
    let mobius = |z: &Value<Complex64>| -> Value<Complex64> {
        match (&zi, z) {
            (Value::Infinity, Value::Infinity) => Value::Infinity,
            (Value::Infinity, Value::Finite(z)) => Value::Finite((z - z0) / (z1 - z0)),
            (Value::Finite(zi), Value::Infinity) => Value::Finite((z1 - zi) / (z1 - z0)),
            (Value::Finite(zi), Value::Finite(z)) => {
                if (z - zi).norm() == 0.0 {
                    Value::Infinity
                } else {
                    Value::Finite((z - z0) * (z1 - zi) / ((z - zi) * (z1 - z0)))
                }
            }
        }
    };
    let mut classes0 = classes_from_parts(&profile.over0.parts);
    let mut classes1 = classes_from_parts(&profile.over1.parts);
    let mut classes_inf = classes_from_parts(&profile.over_inf.parts);
    pin_highest(&mut classes0);
    pin_highest(&mut classes1);
    pin_highest(&mut classes_inf);
    let sys = AnsatzSystem {
        profile: profile.clone(),
        classes0,
        classes1,
        classes_inf,
    };

    // initial factor coefficients from the transformed preimages
    let expand = |roots: &[Complex64]| -> Vec<Complex64> {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            coeffs.insert(0, Complex64::new(0.0, 0.0));
            for i in 0..coeffs.len() - 1 {
                let t = coeffs[i + 1] * r;
                coeffs[i] -= t;
            }
        }
        coeffs
    };
    let mut init: Vec<CBigFloat> = vec![CBigFloat::zero()]; // scale filled below
    let mut fiber_products: Vec<Vec<Complex64>> = Vec::new();
    for (classes, pre, skip_idx) in [
        (&sys.classes0, &preimages.over0, i0),
        (&sys.classes1, &preimages.over1, i1),
        (&sys.classes_inf, &preimages.over_inf, ii),
    ] {
        let mut product = vec![Complex64::new(1.0, 0.0)];
        for (ci, class) in classes.iter().enumerate() {
            let mut roots = Vec::new();
            let mut pinned_seen = !class.pinned;
            for (pi, (v, m)) in pre.iter().enumerate() {
                if *m != class.multiplicity {
                    continue;
                }
                if !pinned_seen && pi == skip_idx {
                    pinned_seen = true;
                    continue;
                }
                match mobius(v) {
                    Value::Finite(z) => roots.push(z),
                    Value::Infinity => {
                        // only the gauge point may sit at infinity
                        return Err(NewtonError::MultiplicityMismatch {
                            fiber: "infinity",
                        });
                    }
                }
            }
            if roots.len() != class.free_roots {
                // a non-gauge preimage of the pinned multiplicity was the
                // pinned one; shift bookkeeping is off
                return Err(NewtonError::MultiplicityMismatch { fiber: "gauge" });
            }
            let coeffs = expand(&roots);
            for c in &coeffs[..class.free_roots] {
                init.push(CBigFloat::from_complex64(*c));
            }
            let mut full = coeffs;
            if class.pinned {
                // fiber 0: extra root at 0; fiber 1: at 1; fiber ∞ drops it
                let extra = match fiber_products.len() {
                    0 => Some(Complex64::new(0.0, 0.0)),
                    1 => Some(Complex64::new(1.0, 0.0)),
                    _ => None,
                };
                if let Some(root) = extra {
                    full = expand(
                        &roots
                            .iter()
                            .copied()
                            .chain(core::iter::once(root))
                            .collect::<Vec<_>>(),
                    );
                }
            }
            let mut powered = vec![Complex64::new(1.0, 0.0)];
            for _ in 0..class.multiplicity {
                powered = mul64(&powered, &full);
            }
            product = mul64(&product, &powered);
            let _ = ci;
        }
        fiber_products.push(product);
    }
    // f(1) = 1 forces c = Q(1)/P(1)
    let at1 = |p: &[Complex64]| -> Complex64 {
        p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc + c)
    };
    let c0 = at1(&fiber_products[2]) / at1(&fiber_products[0]);
    init[0] = CBigFloat::from_complex64(c0);
    Ok((sys, init))
}

fn mul64(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// -- complex big-float polynomial helpers -----------------------------------

fn cp_mul(a: &[CBigFloat], b: &[CBigFloat], prec: u32) -> Vec<CBigFloat> {
    let mut out = vec![CBigFloat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y, prec), prec);
        }
    }
    out
}

fn cp_add_scaled(acc: &mut Vec<CBigFloat>, a: &[CBigFloat], s: &CBigFloat, prec: u32) {
    if acc.len() < a.len() {
        acc.resize(a.len(), CBigFloat::zero());
    }
    for (i, x) in a.iter().enumerate() {
        acc[i] = acc[i].add(&x.mul(s, prec), prec);
    }
}

fn cp_pow(a: &[CBigFloat], e: usize, prec: u32) -> Vec<CBigFloat> {
    let mut out = vec![CBigFloat::from_i64(1)];
    for _ in 0..e {
        out = cp_mul(&out, a, prec);
    }
    out
}

/// Offsets of each class's coefficients within the unknown vector, in the
/// fixed layout [c, classes0…, classes1…, classes_inf…].
fn layout(sys: &AnsatzSystem) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut pos = 1;
    for class in sys.classes0.iter().chain(&sys.classes1).chain(&sys.classes_inf) {
        out.push((pos, class.free_roots));
        pos += class.free_roots;
    }
    out
}

struct FiberEval {
    /// `∏ F_m^m` for the fiber.
    product: Vec<CBigFloat>,
    /// Per class: `m·F^(m−1)·∏_{others}`, the cofactor of `∂F`.
    cofactors: Vec<Vec<CBigFloat>>,
    /// Per class: the pinned linear factor `(X − r)` when the unknowns
    /// describe only the cofactor of it.
    pinned_lin: Vec<Option<Vec<CBigFloat>>>,
}

fn eval_fiber(
    classes: &[AnsatzClass],
    u: &[CBigFloat],
    offsets: &[(usize, usize)],
    pinned_root: Option<i64>,
    prec: u32,
) -> FiberEval {
    let one = CBigFloat::from_i64(1);
    let mut factors: Vec<Vec<CBigFloat>> = Vec::with_capacity(classes.len());
    let mut pinned_lin: Vec<Option<Vec<CBigFloat>>> = Vec::with_capacity(classes.len());
    for (class, &(off, len)) in classes.iter().zip(offsets) {
        let mut f: Vec<CBigFloat> = u[off..off + len].to_vec();
        f.push(one.clone());
        let mut lin = None;
        if class.pinned {
            if let Some(r) = pinned_root {
                // multiply by (X − r)
                let l = vec![CBigFloat::from_i64(-r), one.clone()];
                f = cp_mul(&f, &l, prec);
                lin = Some(l);
            }
        }
        factors.push(f);
        pinned_lin.push(lin);
    }
    let powers: Vec<Vec<CBigFloat>> = classes
        .iter()
        .zip(&factors)
        .map(|(c, f)| cp_pow(f, c.multiplicity, prec))
        .collect();
    let mut product = vec![one.clone()];
    for p in &powers {
        product = cp_mul(&product, p, prec);
    }
    let mut cofactors = Vec::with_capacity(classes.len());
    for (t, class) in classes.iter().enumerate() {
        let mut co = cp_pow(&factors[t], class.multiplicity - 1, prec);
        let m = CBigFloat::from_i64(class.multiplicity as i64);
        co = co.iter().map(|c| c.mul(&m, prec)).collect();
        for (s, p) in powers.iter().enumerate() {
            if s != t {
                co = cp_mul(&co, p, prec);
            }
        }
        cofactors.push(co);
    }
    FiberEval { product, cofactors, pinned_lin }
}

/// Residual coefficients (0..d−1 of `p − q − r`) and the Jacobian.
fn assemble(
    sys: &AnsatzSystem,
    u: &[CBigFloat],
    prec: u32,
) -> (Vec<CBigFloat>, Vec<Vec<CBigFloat>>) {
    let d = sys.degree();
    let offsets = layout(sys);
    let n0 = sys.classes0.len();
    let n1 = sys.classes1.len();
    let f0 = eval_fiber(&sys.classes0, u, &offsets[..n0], Some(0), prec);
    let f1 = eval_fiber(&sys.classes1, u, &offsets[n0..n0 + n1], Some(1), prec);
    let fi = eval_fiber(&sys.classes_inf, u, &offsets[n0 + n1..], None, prec);
    let c = &u[0];
    // E = c·P − Q − c·R
    let mut e = vec![CBigFloat::zero(); d + 1];
    cp_add_scaled(&mut e, &f0.product, c, prec);
    cp_add_scaled(&mut e, &fi.product, &CBigFloat::from_i64(-1), prec);
    cp_add_scaled(&mut e, &f1.product, &c.neg(), prec);
    e.truncate(d); // leading coefficient cancels identically
    let nu = sys.unknowns();
    let mut jac = vec![vec![CBigFloat::zero(); nu]; d];
    let mut set_col = |col: usize, poly: &Vec<CBigFloat>| {
        for (row, v) in poly.iter().take(d).enumerate() {
            jac[row][col] = v.clone();
        }
    };
    // ∂E/∂c = P − R
    let mut dc = vec![CBigFloat::zero(); d + 1];
    cp_add_scaled(&mut dc, &f0.product, &CBigFloat::from_i64(1), prec);
    cp_add_scaled(&mut dc, &f1.product, &CBigFloat::from_i64(-1), prec);
    set_col(0, &dc);
    // factor coefficients: ∂E = scale · cofactor · X^i
    let fibers = [(&f0, c.clone()), (&f1, c.neg()), (&fi, CBigFloat::from_i64(-1))];
    let class_counts = [n0, n1, sys.classes_inf.len()];
    let mut class_idx = 0;
    for (fiber_idx, (fe, scale)) in fibers.iter().enumerate() {
        for t in 0..class_counts[fiber_idx] {
            let (off, len) = offsets[class_idx];
            let mut base: Vec<CBigFloat> =
                fe.cofactors[t].iter().map(|x| x.mul(scale, prec)).collect();
            if let Some(lin) = &fe.pinned_lin[t] {
                // unknowns describe the cofactor of the pinned linear term
                base = cp_mul(&base, lin, prec);
            }
            for i in 0..len {
                // shift by X^i
                let mut col = vec![CBigFloat::zero(); i];
                col.extend(base.iter().cloned());
                set_col(off + i, &col);
            }
            class_idx += 1;
        }
    }
    (e, jac)
}

fn solve_linear(
    mut a: Vec<Vec<CBigFloat>>,
    mut b: Vec<CBigFloat>,
    prec: u32,
) -> Option<Vec<CBigFloat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .norm_sq(64)
                .cmp_abs(&a[j][col].norm_sq(64))
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = CBigFloat::from_i64(1).div(&a[col][col].clone(), prec);
        for x in a[col].iter_mut() {
            *x = x.mul(&inv, prec);
        }
        b[col] = b[col].mul(&inv, prec);
        for row in 0..n {
            if row != col && !a[row][col].is_zero() {
                let f = a[row][col].clone();
                for k in col..n {
                    let t = f.mul(&a[col][k], prec);
                    a[row][k] = a[row][k].sub(&t, prec);
                }
                let t = f.mul(&b[col], prec);
                b[row] = b[row].sub(&t, prec);
            }
        }
    }
    Some(b)
}

fn residual_log10(e: &[CBigFloat], prec: u32) -> f64 {
    e.iter()
        .map(|x| {
            x.norm_sq(prec)
                .log2_abs()
                .map_or(f64::NEG_INFINITY, |l| l as f64 / 2.0 * core::f64::consts::LOG10_2)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Refines the unknown vector on a precision ladder (30 digits, doubling to
/// the target) until the residual drops below `10^(−target_digits)`.
pub fn newton_refine(
    sys: &AnsatzSystem,
    init: &[CBigFloat],
    ctx: &PrecisionContext,
) -> Result<Vec<CBigFloat>, NewtonError> {
    assert_eq!(init.len(), sys.unknowns(), "initial vector length mismatch");
    assert_eq!(sys.unknowns(), sys.equations(), "system must be square");
    let mut u = init.to_vec();
    let mut digits = 30u32.min(ctx.target_digits);
    loop {
        let prec = bits_for_digits(digits) + 32;
        let goal = -(digits as f64) + 2.0;
        let mut history = Vec::new();
        let mut best = f64::INFINITY;
        for _ in 0..60 {
            let (e, jac) = assemble(sys, &u, prec);
            let res = residual_log10(&e, prec);
            history.push(res);
            if res < goal {
                break;
            }
            if res > best + 2.0 {
                return Err(NewtonError::Diverged { history });
            }
            best = best.min(res);
            let rhs: Vec<CBigFloat> = e.iter().map(|x| x.neg()).collect();
            let delta = solve_linear(jac, rhs, prec).ok_or(NewtonError::SingularJacobian)?;
            for (x, dx) in u.iter_mut().zip(&delta) {
                *x = x.add(dx, prec);
            }
        }
        if *history.last().unwrap() >= goal {
            return Err(NewtonError::Diverged { history });
        }
        if digits >= ctx.target_digits {
            // final check at full precision
            let (e, _) = assemble(sys, &u, prec);
            if residual_log10(&e, prec) < -(ctx.target_digits as f64) {
                return Ok(u);
            }
            return Err(NewtonError::Diverged { history });
        }
        digits = (digits * 2).min(ctx.target_digits.max(digits + 1));
    }
}

/// Expands the refined solution into the numerator and denominator
/// coefficient lists (numerator scaled by `c`, denominator monic).
pub fn expand_solution(
    sys: &AnsatzSystem,
    u: &[CBigFloat],
    prec: u32,
) -> (Vec<CBigFloat>, Vec<CBigFloat>) {
    let offsets = layout(sys);
    let n0 = sys.classes0.len();
    let n1 = sys.classes1.len();
    let f0 = eval_fiber(&sys.classes0, u, &offsets[..n0], Some(0), prec);
    let fi = eval_fiber(&sys.classes_inf, u, &offsets[n0 + n1..], None, prec);
    let num: Vec<CBigFloat> = f0.product.iter().map(|x| x.mul(&u[0], prec)).collect();
    (num, fi.product)
}

/// Rounds the refined map to exact rational coefficients and rechecks the
/// profile by exact arithmetic.
pub fn reconstruct_rational(
    sys: &AnsatzSystem,
    u: &[CBigFloat],
    ctx: &PrecisionContext,
) -> Result<BelyiCandidate<Rationals>, NewtonError> {
    let prec = ctx.target_bits() + 32;
    let (num, den) = expand_solution(sys, u, prec);
    let den_bound = BigInt::from(10u32).pow(ctx.target_digits.div_ceil(4));
    let imag_tol = -(ctx.target_digits as i64 / 2);
    let q = Rationals;
    let round_poly = |coeffs: &[CBigFloat], which: &str| -> Result<Poly<Rationals>, NewtonError> {
        let mut out = Vec::with_capacity(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            if c.im.log2_abs().is_some_and(|l| l > imag_tol * 3) {
                return Err(NewtonError::UnrecognizedCoefficient {
                    location: format!("{which}[{i}]: imaginary part too large"),
                });
            }
            let r = c.re.to_rational(&den_bound);
            let back = BigFloat::from_rational(&r, prec);
            let err = back.sub(&c.re, prec);
            if err.log2_abs().is_some_and(|l| l > imag_tol * 3) {
                return Err(NewtonError::UnrecognizedCoefficient {
                    location: format!("{which}[{i}]: no small rational nearby"),
                });
            }
            out.push(r);
        }
        Ok(Poly::from_coeffs(&q, out))
    };
    let num = round_poly(&num, "num")?;
    let den = round_poly(&den, "den")?;
    let m = BelyiCandidate::new(&q, num, den).map_err(|e| {
        NewtonError::ReconstructionMismatch { detail: format!("{e}") }
    })?;
    let profile = ramification_profile(&q, &m).map_err(|e| {
        NewtonError::ReconstructionMismatch { detail: format!("{e}") }
    })?;
    if profile != sys.profile {
        return Err(NewtonError::ReconstructionMismatch {
            detail: format!("profile {profile} differs from requested {}", sys.profile),
        });
    }
    Ok(m)
}

/// Writes `x` in the power basis of `Q(α)` via an integer relation among
/// `(1, α, …, α^(n−1), x)`, or `None` when no small relation exists.
pub fn express_in_field(
    x: &BigFloat,
    alpha: &BigFloat,
    field_degree: usize,
    ctx: &PrecisionContext,
) -> Option<Vec<BigRational>> {
    use num_traits::{One, Zero};
    let prec = ctx.bits() + 64;
    let scale = BigFloat::pow10(ctx.digits as i64, prec);
    let dim = field_degree + 1;
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    let mut power = BigFloat::from_i64(1);
    for i in 0..dim {
        let v = if i < field_degree { power.clone() } else { x.clone() };
        let mut row = vec![BigInt::zero(); dim + 1];
        row[i] = BigInt::one();
        row[dim] = v.mul(&scale, prec).round_bigint();
        basis.push(row);
        power = power.mul(alpha, prec);
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    lll_reduce(&mut basis, &delta);
    for row in &basis {
        let b = &row[field_degree];
        if b.is_zero() {
            continue;
        }
        // residual of the relation must be at the rounding level
        let mut acc = BigFloat::zero();
        let mut power = BigFloat::from_i64(1);
        for a in row[..field_degree].iter() {
            acc = acc.add(&power.mul(&BigFloat::from_bigint(a.clone()), prec), prec);
            power = power.mul(alpha, prec);
        }
        acc = acc.add(&x.mul(&BigFloat::from_bigint(b.clone()), prec), prec);
        let bound = -(((ctx.digits / 2) as f64) * core::f64::consts::LOG2_10) as i64;
        if acc.log2_abs().is_some_and(|l| l > bound) {
            continue;
        }
        let height_bound = ctx.digits as u64 / 5 * 4 + 8; // bits
        if row[..=field_degree].iter().any(|a| a.bits() > height_bound) {
            continue;
        }
        return Some(
            row[..field_degree]
                .iter()
                .map(|a| BigRational::new(-a.clone(), b.clone()))
                .collect(),
        );
    }
    None
}

/// Rebuilds the map over a number field chosen from the coefficient guesses
/// (the maximal-degree minimal polynomial), expressing every coefficient in
/// the power basis and verifying the profile exactly.
pub fn reconstruct_over_field(
    sys: &AnsatzSystem,
    num: &[BigFloat],
    den: &[BigFloat],
    guesses: &[AlgebraicGuess],
    ctx: &PrecisionContext,
) -> Result<(NumberField, BelyiCandidate<NumberFieldRing>), NewtonError> {
    let best = guesses
        .iter()
        .max_by_key(|g| g.poly_degree())
        .ok_or(NewtonError::ReconstructionMismatch {
            detail: String::from("no accepted coefficient guesses"),
        })?;
    let field = NumberField::new(best.min_poly.clone()).map_err(|e| {
        NewtonError::ReconstructionMismatch { detail: format!("{e}") }
    })?;
    let n = field.degree();
    let alpha = best.value.clone();
    let ring = field.ring();
    let prec = ctx.bits() + 64;
    let den_bound = BigInt::from(10u32).pow(ctx.digits.div_ceil(4));
    let express = |x: &BigFloat, loc: String| -> Result<Vec<BigRational>, NewtonError> {
        if n == 1 {
            return Ok(vec![x.to_rational(&den_bound)]);
        }
        let coords = express_in_field(x, &alpha, n, ctx)
            .ok_or(NewtonError::UnrecognizedCoefficient { location: loc })?;
        Ok(coords)
    };
    let lift = |coeffs: &[BigFloat], which: &str| -> Result<Poly<NumberFieldRing>, NewtonError> {
        let mut out = Vec::with_capacity(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            let mut coords = express(c, format!("{which}[{i}]"))?;
            coords.resize(n, BigRational::from(BigInt::from(0)));
            out.push(coords);
        }
        Ok(Poly::from_coeffs(&ring, out))
    };
    let p = lift(num, "num")?;
    let q = lift(den, "den")?;
    let m = BelyiCandidate::new(&ring, p, q).map_err(|e| {
        NewtonError::ReconstructionMismatch { detail: format!("{e}") }
    })?;
    let profile = ramification_profile(&ring, &m).map_err(|e| {
        NewtonError::ReconstructionMismatch { detail: format!("{e}") }
    })?;
    if profile != sys.profile {
        return Err(NewtonError::ReconstructionMismatch {
            detail: format!("profile {profile} differs from requested {}", sys.profile),
        });
    }
    let _ = prec;
    Ok((field, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::CycleType;

    fn profile(a: &[usize], b: &[usize], c: &[usize]) -> RamificationProfile {
        RamificationProfile {
            over0: CycleType::from_parts(a.iter().copied()),
            over1: CycleType::from_parts(b.iter().copied()),
            over_inf: CycleType::from_parts(c.iter().copied()),
        }
    }

    fn fin(re: f64, im: f64) -> Value<Complex64> {
        Value::Finite(Complex64::new(re, im))
    }

    /// Preimages of 3X² − 2X³, perturbed by `eps`.
    fn cubic_preimages(eps: f64) -> LabeledPreimages {
        LabeledPreimages {
            over0: vec![(fin(0.0 + eps, 0.0), 2), (fin(1.5 + eps, 0.0), 1)],
            over1: vec![(fin(1.0, eps), 2), (fin(-0.5 + eps, 0.0), 1)],
            over_inf: vec![(Value::Infinity, 3)],
        }
    }

    #[test]
    fn system_counts() {
        let pr = profile(&[2, 1], &[2, 1], &[3]);
        let (sys, init) = build_system(&pr, &cubic_preimages(0.0)).unwrap();
        assert_eq!(sys.unknowns(), 3);
        assert_eq!(sys.equations(), 3);
        assert_eq!(init.len(), 3);
    }

    #[test]
    fn degree_one_system() {
        let pr = profile(&[1], &[1], &[1]);
        let pre = LabeledPreimages {
            over0: vec![(fin(0.0, 0.0), 1)],
            over1: vec![(fin(1.0, 0.0), 1)],
            over_inf: vec![(Value::Infinity, 1)],
        };
        let (sys, init) = build_system(&pr, &pre).unwrap();
        assert_eq!(sys.unknowns(), 1);
        let ctx = PrecisionContext::new(30, 30);
        let u = newton_refine(&sys, &init, &ctx).unwrap();
        let m = reconstruct_rational(&sys, &u, &ctx).unwrap();
        let q = Rationals;
        assert_eq!(m.num(), &Poly::x(&q));
        assert!(m.den().is_constant());
    }

    #[test]
    fn mismatch_detected() {
        let pr = profile(&[2, 1], &[2, 1], &[3]);
        let mut pre = cubic_preimages(0.0);
        pre.over0[0].1 = 3;
        assert!(matches!(
            build_system(&pr, &pre),
            Err(NewtonError::MultiplicityMismatch { fiber: "0" })
        ));
    }

    #[test]
    fn refines_cubic_from_perturbed_start() {
        let pr = profile(&[2, 1], &[2, 1], &[3]);
        let (sys, init) = build_system(&pr, &cubic_preimages(1e-3)).unwrap();
        let ctx = PrecisionContext::new(30, 60);
        let u = newton_refine(&sys, &init, &ctx).unwrap();
        let m = reconstruct_rational(&sys, &u, &ctx).unwrap();
        let q = Rationals;
        assert_eq!(m.num(), &Poly::from_i64(&q, &[0, 0, 3, -2]));
        assert!(m.den().is_constant());
        // residual from the exact solution is identically zero
        let r = m.r(&q);
        let profile = ramification_profile(&q, &m).unwrap();
        assert_eq!(profile, sys.profile);
        assert_eq!(r.deg_or0(), 3);
    }

    #[test]
    fn quadratic_convergence_observed() {
        let pr = profile(&[2, 1], &[2, 1], &[3]);
        let (sys, init) = build_system(&pr, &cubic_preimages(1e-3)).unwrap();
        let prec = bits_for_digits(60) + 32;
        let mut u = init;
        let mut residuals = Vec::new();
        for _ in 0..8 {
            let (e, jac) = assemble(&sys, &u, prec);
            residuals.push(residual_log10(&e, prec));
            let rhs: Vec<CBigFloat> = e.iter().map(|x| x.neg()).collect();
            let delta = solve_linear(jac, rhs, prec).unwrap();
            for (x, dx) in u.iter_mut().zip(&delta) {
                *x = x.add(dx, prec);
            }
        }
        // once below 1e−4, the exponent at least doubles per step
        let mut seen = false;
        for w in residuals.windows(2) {
            if w[0] < -4.0 && w[0] > -50.0 {
                seen = true;
                assert!(
                    w[1] <= 2.0 * w[0] + 2.0,
                    "residuals did not contract quadratically: {residuals:?}"
                );
            }
        }
        assert!(seen, "never reached the quadratic regime: {residuals:?}");
    }

    #[test]
    fn exact_start_needs_no_iterations() {
        let pr = profile(&[2, 1], &[2, 1], &[3]);
        let (sys, init) = build_system(&pr, &cubic_preimages(0.0)).unwrap();
        let prec = bits_for_digits(30);
        let (e, _) = assemble(&sys, &init, prec);
        assert!(residual_log10(&e, prec) < -13.0);
    }

    #[test]
    fn refines_quadratic() {
        let pr = profile(&[1, 1], &[2], &[2]);
        let pre = LabeledPreimages {
            over0: vec![(fin(0.01, 0.0), 1), (fin(0.99, 0.01), 1)],
            over1: vec![(fin(0.51, 0.0), 2)],
            over_inf: vec![(Value::Infinity, 2)],
        };
        let (sys, init) = build_system(&pr, &pre).unwrap();
        let ctx = PrecisionContext::new(30, 60);
        let u = newton_refine(&sys, &init, &ctx).unwrap();
        let m = reconstruct_rational(&sys, &u, &ctx).unwrap();
        let q = Rationals;
        // gauge-normal form of 4X − 4X²: the double point over 1 moves to 1
        assert_eq!(m.num(), &Poly::from_i64(&q, &[0, 2, -1]));
        assert!(m.den().is_constant());
    }

    #[test]
    fn express_simple_field_element() {
        let ctx = PrecisionContext::new(80, 80);
        let prec = ctx.bits() + 64;
        let alpha = BigFloat::from_i64(2).sqrt(prec);
        // x = 3/2 + 5·√2
        let x = BigFloat::from_i64(3)
            .div(&BigFloat::from_i64(2), prec)
            .add(&alpha.mul(&BigFloat::from_i64(5), prec), prec);
        let coords = express_in_field(&x, &alpha, 2, &ctx).unwrap();
        assert_eq!(coords[0], BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(coords[1], BigRational::from(BigInt::from(5)));
    }
}
