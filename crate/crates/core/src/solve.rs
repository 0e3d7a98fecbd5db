//! End-to-end solver: from a genus-0 transitive permutation triple to an
//! exact Belyi map.
//!
//! Pipeline: choose triangle-group orders that are multiples of the element
//! orders, build the fundamental domain of the pullback group, map it to
//! the half-plane with the zipper algorithm, weld the paired boundary back
//! together to obtain the quotient sphere, read off approximate fiber
//! points from the tracked kite corners, then sharpen with Newton iteration
//! and recognize exact coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::domain::{coset_table, fundamental_domain, DomainError, FundamentalDomain};
use crate::lll::{lll_recognize, AlgebraicGuess, PrecisionContext};
use crate::map::{BelyiCandidate, RamificationProfile, Value};
use crate::newton::{
    build_system, expand_solution, newton_refine, reconstruct_over_field, reconstruct_rational,
    LabeledPreimages, NewtonError,
};
use crate::numfield::{NumberField, NumberFieldRing};
use crate::perm::PermutationTriple;
use crate::ring::Rationals;
use crate::triangle::{
    choose_orders, embed_triangle_group, geodesic_point, hyperbolic_distance, TriangleError,
};
use crate::weld::{weld, WeldError};
use crate::zipper::{zipper_map, ZipperError};

#[derive(Debug)]
pub enum SolveError {
    NotGenusZero,
    NoHyperbolicOrders,
    Triangle(TriangleError),
    Domain(DomainError),
    Zipper(ZipperError),
    Weld(WeldError),
    Newton(NewtonError),
    PinchedBoundary,
    MarksNotMonotone { descents: usize },
    ClusterMismatch { fiber: &'static str, detail: String },
    UnrecognizedCoefficients,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NotGenusZero => write!(f, "triple does not describe a genus-0 cover"),
            SolveError::NoHyperbolicOrders => {
                write!(f, "no small hyperbolic orders dominate the element orders")
            }
            SolveError::Triangle(e) => write!(f, "triangle group: {e}"),
            SolveError::Domain(e) => write!(f, "fundamental domain: {e}"),
            SolveError::Zipper(e) => write!(f, "conformal map: {e}"),
            SolveError::Weld(e) => write!(f, "welding: {e}"),
            SolveError::Newton(e) => write!(f, "refinement: {e}"),
            SolveError::PinchedBoundary => {
                write!(f, "domain boundary touches itself; not supported")
            }
            SolveError::MarksNotMonotone { descents } => {
                write!(f, "boundary images not in cyclic order ({descents} descents)")
            }
            SolveError::ClusterMismatch { fiber, detail } => {
                write!(f, "corner clusters over {fiber} disagree with the cycle type: {detail}")
            }
            SolveError::UnrecognizedCoefficients => {
                write!(f, "could not recognize the refined coefficients exactly")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SolveError {}

impl From<TriangleError> for SolveError {
    fn from(e: TriangleError) -> Self {
        SolveError::Triangle(e)
    }
}
impl From<DomainError> for SolveError {
    fn from(e: DomainError) -> Self {
        SolveError::Domain(e)
    }
}
impl From<ZipperError> for SolveError {
    fn from(e: ZipperError) -> Self {
        SolveError::Zipper(e)
    }
}
impl From<WeldError> for SolveError {
    fn from(e: WeldError) -> Self {
        SolveError::Weld(e)
    }
}
impl From<NewtonError> for SolveError {
    fn from(e: NewtonError) -> Self {
        SolveError::Newton(e)
    }
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// glued sub-arcs per boundary edge (welding marks)
    pub subarcs_per_edge: usize,
    /// extra zipper samples per sub-arc
    pub curve_refine: usize,
    /// chordal tolerance when clustering corner images
    pub cluster_tol: f64,
    /// decimal digits for the Newton target precision
    pub target_digits: u32,
    /// maximum algebraic degree tried when rational recognition fails
    pub max_alg_degree: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            subarcs_per_edge: 12,
            curve_refine: 3,
            cluster_tol: 0.08,
            target_digits: 48,
            max_alg_degree: 6,
        }
    }
}

/// Result of the conformal stage: approximate fiber data plus quality
/// diagnostics, before any Newton refinement.
pub struct ConformalStage {
    pub domain: FundamentalDomain,
    pub orders: (usize, usize, usize),
    /// max chordal drift between welded paired marks (should be near zero)
    pub welding_residual: f64,
    /// max chordal drift between glued sub-arc midpoints (diagnostic)
    pub correspondence_drift: f64,
    pub preimages: LabeledPreimages,
    pub profile: RamificationProfile,
}

#[derive(Clone, Debug)]
pub enum SolvedMap {
    Rational(BelyiCandidate<Rationals>),
    NumberField(NumberField, BelyiCandidate<NumberFieldRing>),
}

fn profile_of(t: &PermutationTriple) -> RamificationProfile {
    RamificationProfile {
        over0: t.x.cycle_type(),
        over1: t.y.cycle_type(),
        over_inf: t.z.cycle_type(),
    }
}

fn to_sphere(z: Complex64) -> [f64; 3] {
    let n2 = z.norm_sqr();
    if !n2.is_finite() {
        return [0.0, 0.0, 1.0];
    }
    let d = 1.0 + n2;
    [2.0 * z.re / d, 2.0 * z.im / d, (n2 - 1.0) / d]
}

fn from_sphere(v: [f64; 3]) -> Value<Complex64> {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let (x, y, z) = (v[0] / norm, v[1] / norm, v[2] / norm);
    let denom = 1.0 - z;
    if denom < 1e-9 {
        Value::Infinity
    } else {
        Value::Finite(Complex64::new(x / denom, y / denom))
    }
}

fn sphere_of(v: &Value<Complex64>) -> [f64; 3] {
    match v {
        Value::Infinity => [0.0, 0.0, 1.0],
        Value::Finite(z) => to_sphere(*z),
    }
}

fn chordal_v(a: &Value<Complex64>, b: &Value<Complex64>) -> f64 {
    let (p, q) = (sphere_of(a), sphere_of(b));
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

/// Single-linkage clustering of `(coset, point)` pairs by chordal distance.
/// Returns `(representative, entry count)` per cluster. A fiber point of a
/// length-L cycle collects L corner entries over 0 and 1 (one corner per
/// kite) and 2L over infinity (each kite has two z-corners).
fn cluster_corners(
    entries: &[(usize, Value<Complex64>)],
    tol: f64,
) -> Vec<(Value<Complex64>, usize)> {
    let m = entries.len();
    let mut comp: Vec<usize> = (0..m).collect();
    fn find(comp: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while comp[r] != r {
            r = comp[r];
        }
        let mut c = i;
        while comp[c] != r {
            let nx = comp[c];
            comp[c] = r;
            c = nx;
        }
        r
    }
    for i in 0..m {
        for j in i + 1..m {
            if chordal_v(&entries[i].1, &entries[j].1) < tol {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                if a != b {
                    comp[a] = b;
                }
            }
        }
    }
    let mut out: Vec<(Value<Complex64>, usize)> = Vec::new();
    let mut seen_root: Vec<usize> = Vec::new();
    for i in 0..m {
        let r = find(&mut comp, i);
        if seen_root.contains(&r) {
            continue;
        }
        seen_root.push(r);
        let mut acc = [0.0f64; 3];
        let mut count = 0usize;
        for j in 0..m {
            if find(&mut comp, j) == r {
                let v = sphere_of(&entries[j].1);
                acc[0] += v[0];
                acc[1] += v[1];
                acc[2] += v[2];
                count += 1;
            }
        }
        out.push((from_sphere(acc), count));
    }
    out
}

fn check_fiber(
    fiber: &'static str,
    clusters: &[(Value<Complex64>, usize)],
    parts: &[usize],
    corners_per_sheet: usize,
) -> Result<(), SolveError> {
    for c in clusters {
        if c.1 % corners_per_sheet != 0 {
            return Err(SolveError::ClusterMismatch {
                fiber,
                detail: format!("cluster of {} corners is not a whole sheet count", c.1),
            });
        }
    }
    let mut got: Vec<usize> = clusters.iter().map(|c| c.1 / corners_per_sheet).collect();
    let mut want: Vec<usize> = parts.to_vec();
    got.sort_unstable();
    want.sort_unstable();
    if got != want {
        return Err(SolveError::ClusterMismatch {
            fiber,
            detail: format!("got {got:?}, expected {want:?}"),
        });
    }
    Ok(())
}

/// Runs the conformal pipeline: fundamental domain, zipper, welding, and
/// corner clustering, yielding labeled approximate preimages.
pub fn conformal_stage(
    t: &PermutationTriple,
    cfg: &SolveConfig,
) -> Result<ConformalStage, SolveError> {
    if t.genus() != Ok(0) {
        return Err(SolveError::NotGenusZero);
    }
    let profile = profile_of(t);
    let (a, b, c) = choose_orders(t.x.order() as usize, t.y.order() as usize, t.z.order() as usize)
        .ok_or(SolveError::NoHyperbolicOrders)?;
    let emb = embed_triangle_group(a, b, c)?;
    let ct = coset_table(t)?;
    let dom = fundamental_domain(&ct, &emb)?;
    let d = dom.kite_count();

    // interior reference and per-kite interior points (on the kite diagonal)
    let kite_center: Vec<Complex64> = (0..d)
        .map(|k| geodesic_point(dom.vertices[k][0], dom.vertices[k][2], 0.5))
        .collect();
    let interior_ref = kite_center[0];

    let be = dom.boundary.len();
    let s = cfg.subarcs_per_edge;
    // refinement must be even so sub-arc midpoints are curve samples and
    // never coincide with the rotated start point
    let r = cfg.curve_refine.max(2) & !1usize;

    // fine boundary sampling; every r-th point is a welding mark, every
    // (j*r + r/2)-th a glue midpoint
    let mut pts: Vec<Complex64> = Vec::with_capacity(be * s * r);
    for i in 0..be {
        let ps = dom.sample_edge(i, s * r + 1);
        pts.extend_from_slice(&ps[..s * r]);
    }
    let n_pts = pts.len();
    for i in 0..n_pts {
        for j in i + 1..n_pts {
            if hyperbolic_distance(pts[i], pts[j]) < 1e-9 {
                return Err(SolveError::PinchedBoundary);
            }
        }
    }
    // rotate the curve by one so the sample sent to infinity by the zipper
    // (the first curve point) is a plain refinement point, not a mark
    let curve: Vec<Complex64> = (0..n_pts).map(|k| pts[(k + 1) % n_pts]).collect();
    let h1 = zipper_map(&curve, interior_ref)?;
    let imgs = h1.sample_images();
    let img_of_pt = |p: usize| imgs[(p + n_pts - 1) % n_pts];

    let n_int = be * s;
    let mut coords: Vec<f64> = Vec::with_capacity(n_int);
    for g in 0..n_int {
        let (i, j) = (g / s, g % s);
        match img_of_pt(i * s * r + j * r) {
            Some(t) => coords.push(t),
            None => return Err(SolveError::MarksNotMonotone { descents: 0 }),
        }
    }

    // sub-arc pairing: deck transformations reverse the walk orientation
    let mut pairing: Vec<usize> = vec![usize::MAX; n_int];
    for i in 0..be {
        let pj = dom.pairing[i];
        let gamma = dom.deck_to_partner(i);
        let e = dom.boundary[i];
        let f = dom.boundary[pj];
        let start_i = dom.vertices[e.kite][e.side];
        let start_j = dom.vertices[f.kite][f.side];
        let end_j = dom.vertices[f.kite][(f.side + 1) % 4];
        let img = gamma.apply(start_i);
        let reversed = hyperbolic_distance(img, end_j) < hyperbolic_distance(img, start_j);
        for j in 0..s {
            let pj_sub = if reversed { s - 1 - j } else { j };
            pairing[i * s + j] = pj * s + pj_sub;
        }
    }
    for g in 0..n_int {
        if pairing[g] == g || pairing[pairing[g]] != g {
            return Err(SolveError::Weld(WeldError::BadPairing {
                detail: "edge correspondence is not an involution",
            }));
        }
    }

    // glue pairs: sub-arc midpoints correspond exactly under the deck maps
    // (hyperbolic-uniform sampling is isometry-equivariant)
    let midpoint_img = |g: usize| -> Option<f64> {
        let (i, j) = (g / s, g % s);
        img_of_pt(i * s * r + j * r + r / 2)
    };
    let mut glue_pairs: Vec<(f64, f64)> = Vec::new();
    for g in 0..n_int {
        let p = pairing[g];
        if g < p {
            if let (Some(wa), Some(wb)) = (midpoint_img(g), midpoint_img(p)) {
                glue_pairs.push((wa, wb));
            }
        }
    }

    // rotate the cyclic mark list so coordinates ascend; the single descent
    // is where the boundary image passes through infinity
    let descents: Vec<usize> = (0..n_int)
        .filter(|&g| coords[(g + 1) % n_int] < coords[g])
        .collect();
    if descents.len() != 1 {
        return Err(SolveError::MarksNotMonotone { descents: descents.len() });
    }
    let rot = (descents[0] + 1) % n_int;
    let sorted_marks: Vec<f64> = (0..n_int).map(|t| coords[(rot + t) % n_int]).collect();
    let rot_pairing: Vec<usize> = (0..n_int)
        .map(|t| (pairing[(rot + t) % n_int] + n_int - rot) % n_int)
        .collect();

    let welding = weld(&sorted_marks, &rot_pairing, &[])?;

    // push every kite corner to the quotient sphere; corners on the boundary
    // reuse the exactly tracked mark coordinate
    let edge_starts: Vec<(Complex64, f64)> = (0..be)
        .map(|i| {
            let e = dom.boundary[i];
            (dom.vertices[e.kite][e.side], coords[i * s])
        })
        .collect();
    let track = |k: usize, corner: usize| -> Complex64 {
        let z = dom.vertices[k][corner];
        for (v, t) in &edge_starts {
            if hyperbolic_distance(z, *v) < 1e-7 {
                return welding.apply(Complex64::new(*t, 0.0));
            }
        }
        welding.apply(h1.forward(z))
    };
    let val = |z: Complex64| -> Value<Complex64> {
        if z.re.is_finite() && z.im.is_finite() {
            Value::Finite(z)
        } else {
            Value::Infinity
        }
    };
    let mut raw0: Vec<(usize, Value<Complex64>)> = Vec::new();
    let mut raw1: Vec<(usize, Value<Complex64>)> = Vec::new();
    let mut rawinf: Vec<(usize, Value<Complex64>)> = Vec::new();
    for k in 0..d {
        raw0.push((k, val(track(k, 0))));
        raw1.push((k, val(track(k, 2))));
        rawinf.push((k, val(track(k, 1))));
        rawinf.push((k, val(track(k, 3))));
    }

    // the welded plane is badly normalized (the boundary tree is chordally
    // crowded); renormalize by a Mobius sending a well-spread corner triple
    // to 0, 1, infinity, one landmark per fiber, before measuring distances
    let (mut la, mut lc, mut best_d) = (raw0[0].1, rawinf[0].1, -1.0f64);
    for e0 in &raw0 {
        for ei in &rawinf {
            let dd = chordal_v(&e0.1, &ei.1);
            if dd > best_d {
                best_d = dd;
                la = e0.1;
                lc = ei.1;
            }
        }
    }
    let mut lb = raw1[0].1;
    let mut best_min = -1.0f64;
    for e1 in &raw1 {
        let m = chordal_v(&e1.1, &la).min(chordal_v(&e1.1, &lc));
        if m > best_min {
            best_min = m;
            lb = e1.1;
        }
    }
    if !(best_d > 0.0) || !(best_min > 0.0) {
        return Err(SolveError::ClusterMismatch {
            fiber: "all",
            detail: String::from("corner images collapsed; cannot normalize"),
        });
    }
    // Mobius matrix sending la, lb, lc to 0, 1, infinity
    let one = Complex64::new(1.0, 0.0);
    let (p, q, r, s) = match (la, lb, lc) {
        (Value::Finite(a), Value::Finite(b), Value::Finite(c)) => {
            (b - c, -a * (b - c), b - a, -c * (b - a))
        }
        (Value::Infinity, Value::Finite(b), Value::Finite(c)) => {
            (Complex64::new(0.0, 0.0), b - c, one, -c)
        }
        (Value::Finite(a), Value::Infinity, Value::Finite(c)) => (one, -a, one, -c),
        (Value::Finite(a), Value::Finite(b), Value::Infinity) => {
            (one, -a, Complex64::new(0.0, 0.0), b - a)
        }
        _ => {
            return Err(SolveError::ClusterMismatch {
                fiber: "all",
                detail: String::from("two landmark corners at infinity"),
            })
        }
    };
    let tmap = move |v: Value<Complex64>| -> Value<Complex64> {
        let w = match v {
            Value::Finite(z) => (p * z + q) / (r * z + s),
            Value::Infinity => p / r,
        };
        if w.re.is_finite() && w.im.is_finite() {
            Value::Finite(w)
        } else {
            Value::Infinity
        }
    };

    // welding residual: the paired marked points must map to equal points of
    // the welded tree; measured in the normalized coordinate. The mark at the
    // start of sub-arc g glues to the mark at the end of its partner (the
    // deck correspondence reverses orientation).
    let drift_between = |wa: f64, wb: f64| -> f64 {
        let pv = tmap(val(welding.apply(Complex64::new(wa, 0.0))));
        let qv = tmap(val(welding.apply(Complex64::new(wb, 0.0))));
        chordal_v(&pv, &qv)
    };
    let mut welding_residual = 0.0f64;
    for g in 0..n_int {
        let p = rot_pairing[g];
        if g < p {
            let d = drift_between(sorted_marks[g], sorted_marks[(p + 1) % n_int]);
            if d > welding_residual {
                welding_residual = d;
            }
        }
    }
    // diagnostic only: drift between glued sub-arc midpoints measures how far
    // the piecewise-Mobius welding correspondence is from the true one; it
    // decays slowly near cone points and is not gated
    let mut correspondence_drift = 0.0f64;
    for &(wa, wb) in &glue_pairs {
        let d = drift_between(wa, wb);
        if d > correspondence_drift {
            correspondence_drift = d;
        }
    }

    let norm = |v: Vec<(usize, Value<Complex64>)>| -> Vec<(usize, Value<Complex64>)> {
        v.into_iter().map(|(k, z)| (k, tmap(z))).collect()
    };
    let c0 = cluster_corners(&norm(raw0), cfg.cluster_tol);
    let c1 = cluster_corners(&norm(raw1), cfg.cluster_tol);
    let mut cinf = cluster_corners(&norm(rawinf), cfg.cluster_tol);
    check_fiber("0", &c0, &profile.over0.parts, 1)?;
    check_fiber("1", &c1, &profile.over1.parts, 1)?;
    check_fiber("inf", &cinf, &profile.over_inf.parts, 2)?;
    for c in &mut cinf {
        c.1 /= 2;
    }

    let preimages = LabeledPreimages { over0: c0, over1: c1, over_inf: cinf };
    Ok(ConformalStage {
        domain: dom,
        orders: (a, b, c),
        welding_residual,
        correspondence_drift,
        preimages,
        profile,
    })
}

/// Full solve: conformal stage, Newton refinement, exact recognition.
pub fn solve_triple(t: &PermutationTriple, cfg: &SolveConfig) -> Result<SolvedMap, SolveError> {
    let stage = conformal_stage(t, cfg)?;
    let (sys, init) = build_system(&stage.profile, &stage.preimages)?;
    let ctx = PrecisionContext::new(30.min(cfg.target_digits), cfg.target_digits);
    let refined = newton_refine(&sys, &init, &ctx)?;
    match reconstruct_rational(&sys, &refined, &ctx) {
        Ok(cand) => Ok(SolvedMap::Rational(cand)),
        Err(_) => {
            // try recognizing coefficients in a common number field
            let prec = ctx.target_bits() + 32;
            let (num, den) = expand_solution(&sys, &refined, prec);
            let reals: Vec<crate::bigfloat::BigFloat> =
                num.iter().chain(den.iter()).map(|c| c.re.clone()).collect();
            let mut guesses: Vec<AlgebraicGuess> = Vec::new();
            for x in &reals {
                if let Ok(Some(g)) = lll_recognize(x, cfg.max_alg_degree, &ctx) {
                    guesses.push(g);
                }
            }
            if guesses.is_empty() {
                return Err(SolveError::UnrecognizedCoefficients);
            }
            let num_re: Vec<_> = num.iter().map(|c| c.re.clone()).collect();
            let den_re: Vec<_> = den.iter().map(|c| c.re.clone()).collect();
            let (field, cand) = reconstruct_over_field(&sys, &num_re, &den_re, &guesses, &ctx)?;
            Ok(SolvedMap::NumberField(field, cand))
        }
    }
}
