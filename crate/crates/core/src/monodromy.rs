//! Numerical monodromy of a genus-0 map: lift the fiber over a base point
//! along loops around 0 and 1 by Newton continuation and read off the two
//! permutations; the third comes from the product relation.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
// the trait supplies cos/sin/atan2/powi without std
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::ToPrimitive;

use crate::map::BelyiCandidate;
use crate::perm::{PermError, Permutation, PermutationTriple};
use crate::poly::Poly;
use crate::ring::Rationals;

/// Hard degree cap for the continuation (fiber size).
pub const MONODROMY_DEGREE_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum MonodromyError {
    DegreeTooLarge { degree: usize, bound: usize },
    DegenerateAtBasePoint,
    /// Two lifted roots approached within the collision tolerance; retry
    /// with more precision digits or a different base point.
    RootCollision { at: Complex64 },
    /// Continuation kept halving the step without converging.
    Stalled { at: Complex64 },
    MatchingFailed,
    Perm(PermError),
}

impl fmt::Display for MonodromyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonodromyError::DegreeTooLarge { degree, bound } => {
                write!(f, "degree {degree} exceeds the continuation bound {bound}")
            }
            MonodromyError::DegenerateAtBasePoint => {
                write!(f, "fiber degenerates at the base point")
            }
            MonodromyError::RootCollision { at } => write!(
                f,
                "root collision near s = {at}; increase precision or move the base point"
            ),
            MonodromyError::Stalled { at } => {
                write!(f, "continuation stalled near s = {at}; increase precision")
            }
            MonodromyError::MatchingFailed => {
                write!(f, "transported fiber does not match the starting fiber")
            }
            MonodromyError::Perm(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MonodromyError {}

impl From<PermError> for MonodromyError {
    fn from(e: PermError) -> Self {
        MonodromyError::Perm(e)
    }
}

fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Complex64::new(i as f64, 0.0))
        .collect()
}

/// Coefficients of `p − s·q`, padded to a common length.
fn fiber_coeffs(num: &[Complex64], den: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let n = num.len().max(den.len());
    (0..n)
        .map(|i| {
            let p = num.get(i).copied().unwrap_or_default();
            let q = den.get(i).copied().unwrap_or_default();
            p - s * q
        })
        .collect()
}

/// All roots of a complex polynomial by Durand–Kerner iteration.
fn all_roots(coeffs: &[Complex64], tol: f64) -> Option<Vec<Complex64>> {
    let deg = coeffs.iter().rposition(|c| c.norm() > 0.0)?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs[..=deg].iter().map(|c| c / lead).collect();
    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, |a, b| a.max(b));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1) * radius).collect();
    for _ in 0..600 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                // perturb coincident iterates
                roots[i] += Complex64::new(1e-6, 1e-6);
                continue;
            }
            let delta = eval(&monic, roots[i]) / denom;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < tol {
            return Some(roots);
        }
    }
    None
}

fn newton_polish(
    coeffs: &[Complex64],
    dcoeffs: &[Complex64],
    start: Complex64,
    tol: f64,
) -> Option<Complex64> {
    let mut x = start;
    for _ in 0..40 {
        let d = eval(dcoeffs, x);
        if d.norm() == 0.0 {
            return None;
        }
        let step = eval(coeffs, x) / d;
        x -= step;
        if step.norm() < tol {
            return Some(x);
        }
    }
    None
}

/// Lifts the whole fiber from `s_from` to `s_to` (one continuation step);
/// fails when any root refuses to converge or drifts too far.
fn lift_step(
    num: &[Complex64],
    den: &[Complex64],
    roots: &[Complex64],
    s_to: Complex64,
    tol: f64,
    max_drift: f64,
) -> Option<Vec<Complex64>> {
    let coeffs = fiber_coeffs(num, den, s_to);
    let dcoeffs = derivative(&coeffs);
    let mut out = Vec::with_capacity(roots.len());
    for &r in roots {
        let x = newton_polish(&coeffs, &dcoeffs, r, tol)?;
        if (x - r).norm() > max_drift {
            return None;
        }
        out.push(x);
    }
    Some(out)
}

fn min_pairwise_distance(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}

/// Transports the fiber along the piecewise path through `waypoints`
/// (pairs of consecutive points are straight segments) with adaptive
/// step halving.
fn transport(
    num: &[Complex64],
    den: &[Complex64],
    mut roots: Vec<Complex64>,
    waypoints: &[Complex64],
    tol: f64,
    collision_tol: f64,
) -> Result<Vec<Complex64>, MonodromyError> {
    for w in waypoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut t = 0.0f64;
        let mut dt = 1.0f64;
        while t < 1.0 {
            let step = dt.min(1.0 - t);
            let s_to = a + (b - a) * Complex64::new(t + step, 0.0);
            let scale = roots
                .iter()
                .map(|r| r.norm())
                .fold(1.0f64, |x, y| x.max(y));
            match lift_step(num, den, &roots, s_to, tol, 0.5 * scale.max(1.0)) {
                Some(next) => {
                    if min_pairwise_distance(&next) < collision_tol {
                        return Err(MonodromyError::RootCollision { at: s_to });
                    }
                    roots = next;
                    t += step;
                    dt = (dt * 1.5).min(1.0);
                }
                None => {
                    dt *= 0.5;
                    if dt < 1e-9 {
                        return Err(MonodromyError::Stalled { at: s_to });
                    }
                }
            }
        }
    }
    Ok(roots)
}

/// Circle of radius 1/4 around `center`, entered along the segment from
/// `base`, traversed once counterclockwise, and left the same way.
fn loop_waypoints(base: Complex64, center: Complex64, segments: usize) -> Vec<Complex64> {
    let radius = 0.25;
    let dir = (base - center) / (base - center).norm();
    let entry = center + dir * radius;
    let theta0 = (entry - center).im.atan2((entry - center).re);
    let mut pts = vec![base, entry];
    for i in 1..=segments {
        let theta = theta0 + core::f64::consts::TAU * i as f64 / segments as f64;
        pts.push(center + Complex64::new(radius * theta.cos(), radius * theta.sin()));
    }
    pts.push(base);
    pts
}

/// The permutation sending each starting root to the root it transported to.
fn match_permutation(
    start: &[Complex64],
    end: &[Complex64],
    collision_tol: f64,
) -> Result<Permutation, MonodromyError> {
    let n = start.len();
    let mut images = vec![u32::MAX; n];
    let mut taken = vec![false; n];
    for (i, e) in end.iter().enumerate() {
        let mut best = (f64::INFINITY, usize::MAX);
        for (j, s) in start.iter().enumerate() {
            let d = (e - s).norm();
            if d < best.0 {
                best = (d, j);
            }
        }
        if best.1 == usize::MAX || best.0 > collision_tol || taken[best.1] {
            return Err(MonodromyError::MatchingFailed);
        }
        taken[best.1] = true;
        images[i] = best.1 as u32;
    }
    Permutation::from_images(images).map_err(MonodromyError::from)
}

/// Monodromy permutations of the covering `f = num/den` around 0, 1, ∞,
/// from numerical continuation of the fiber over `base_point`.
pub fn numerical_monodromy(
    num: &[Complex64],
    den: &[Complex64],
    precision_digits: u32,
    base_point: Complex64,
) -> Result<PermutationTriple, MonodromyError> {
    let deg_num = num.iter().rposition(|c| c.norm() > 0.0).map_or(0, |d| d);
    let deg_den = den.iter().rposition(|c| c.norm() > 0.0).map_or(0, |d| d);
    let degree = deg_num.max(deg_den);
    if degree > MONODROMY_DEGREE_BOUND {
        return Err(MonodromyError::DegreeTooLarge { degree, bound: MONODROMY_DEGREE_BOUND });
    }
    let tol = 10.0f64.powi(-(precision_digits.min(14) as i32));
    let collision_tol = 10.0f64.powi(-(precision_digits as i32 / 2));
    let base_coeffs = fiber_coeffs(num, den, base_point);
    let start = all_roots(&base_coeffs, tol).ok_or(MonodromyError::DegenerateAtBasePoint)?;
    if start.len() != degree || min_pairwise_distance(&start) < collision_tol {
        return Err(MonodromyError::DegenerateAtBasePoint);
    }
    let segments = 48;
    let around0 = loop_waypoints(base_point, Complex64::new(0.0, 0.0), segments);
    let around1 = loop_waypoints(base_point, Complex64::new(1.0, 0.0), segments);
    let end0 = transport(num, den, start.clone(), &around0, tol, collision_tol)?;
    let end1 = transport(num, den, start.clone(), &around1, tol, collision_tol)?;
    let x = match_permutation(&start, &end0, collision_tol)?;
    let y = match_permutation(&start, &end1, collision_tol)?;
    PermutationTriple::from_xy(x, y).map_err(MonodromyError::from)
}

/// Convenience entry for maps over Q: embeds coefficients into f64.
pub fn numerical_monodromy_rational(
    m: &BelyiCandidate<Rationals>,
    precision_digits: u32,
    base_point: Complex64,
) -> Result<PermutationTriple, MonodromyError> {
    let embed = |p: &Poly<Rationals>| -> Vec<Complex64> {
        p.coeffs()
            .iter()
            .map(|c: &BigRational| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect()
    };
    numerical_monodromy(&embed(m.num()), &embed(m.den()), precision_digits, base_point)
}
