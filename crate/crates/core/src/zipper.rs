//! Discrete conformal mapping of a Jordan domain onto the upper half-plane
//! by the geodesic variant of the zipper algorithm.
//!
//! The map is a composition of elementary closed-form maps: an initial
//! square root opening the first boundary segment onto the real line,
//! one "opener" per boundary sample (a real Mobius transformation followed
//! by sqrt(z^2 + a^2) absorbing the geodesic to the next sample), a final
//! closure folding the image quadrant onto the half-plane, and a real
//! Mobius normalization. Every step is an exact conformal bijection, so
//! forward and inverse evaluation are mutually consistent to rounding
//! error; the discretization only controls how well the zipped curve
//! approximates the true boundary.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub enum ZipperError {
    TooFewPoints { got: usize },
    SelfIntersecting { seg_a: usize, seg_b: usize },
    DegenerateStep { at: usize },
    NotInUpperHalfPlane,
}

impl fmt::Display for ZipperError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZipperError::TooFewPoints { got } => {
                write!(f, "need at least 4 boundary samples, got {got}")
            }
            ZipperError::SelfIntersecting { seg_a, seg_b } => {
                write!(f, "sampled boundary self-intersects (segments {seg_a}, {seg_b})")
            }
            ZipperError::DegenerateStep { at } => {
                write!(f, "boundary samples {at} too close together")
            }
            ZipperError::NotInUpperHalfPlane => {
                write!(f, "intermediate image left the half-plane; bad boundary order?")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ZipperError {}

/// sqrt with branch cut along the nonnegative real axis, mapping
/// C minus [0, inf) onto the upper half-plane.
fn sqrt_up(v: Complex64) -> Complex64 {
    Complex64::new(0.0, 1.0) * (-v).sqrt()
}

#[derive(Clone, Debug)]
enum Step {
    /// w = i*sqrt((z - z1)/(z - z0)), C minus [z0, z1] -> H.
    Init { z0: Complex64, z1: Complex64 },
    /// Mobius m = z/(1 - z/c) (c = None means identity), then
    /// w = sqrt(m^2 + a^2): H minus geodesic(0, zeta) -> H.
    Opener { c: Option<f64>, a: f64 },
    /// Mobius w = z/(1 - z/xi) sending the closing geodesic to the
    /// vertical ray (xi = None: identity, the ray is already vertical).
    ToRay { xi: Option<f64> },
    /// Fold the image quadrant onto H: w = z^2 (right quadrant) or
    /// w = -(z^2) (left quadrant).
    Square { left: bool },
    /// Real Mobius normalization (entries of a 2x2 real matrix).
    Mobius { m: [f64; 4] },
}

impl Step {
    fn forward(&self, z: Complex64) -> Complex64 {
        match self {
            Step::Init { z0, z1 } => {
                Complex64::new(0.0, 1.0) * ((z - z1) / (z - z0)).sqrt()
            }
            Step::Opener { c, a } => {
                let m = match c {
                    Some(c) => z / (1.0 - z / c),
                    None => z,
                };
                if m.im.abs() < 1e-14 * (1.0 + m.re.abs()) {
                    // boundary points stay on the real line
                    let v = (m.re * m.re + a * a).sqrt();
                    Complex64::new(if m.re >= 0.0 { v } else { -v }, 0.0)
                } else {
                    sqrt_up(m * m + a * a)
                }
            }
            Step::ToRay { xi } => match xi {
                Some(xi) => z / (1.0 - z / xi),
                None => z,
            },
            Step::Square { left } => {
                let w = z * z;
                if *left {
                    -w
                } else {
                    w
                }
            }
            Step::Mobius { m } => (m[0] * z + m[1]) / (m[2] * z + m[3]),
        }
    }

    fn inverse(&self, w: Complex64) -> Complex64 {
        match self {
            Step::Init { z0, z1 } => {
                let r = -(w * w);
                (z1 - z0 * r) / (1.0 - r)
            }
            Step::Opener { c, a } => {
                let m = if w.im.abs() < 1e-14 * (1.0 + w.re.abs()) && w.re * w.re >= a * a {
                    let v = (w.re * w.re - a * a).sqrt();
                    Complex64::new(if w.re >= 0.0 { v } else { -v }, 0.0)
                } else {
                    sqrt_up(w * w - a * a)
                };
                match c {
                    Some(c) => m / (1.0 + m / c),
                    None => m,
                }
            }
            Step::ToRay { xi } => match xi {
                Some(xi) => w / (1.0 + w / xi),
                None => w,
            },
            Step::Square { left } => {
                if *left {
                    Complex64::new(0.0, 1.0) * w.sqrt()
                } else {
                    w.sqrt()
                }
            }
            Step::Mobius { m } => (m[3] * w - m[1]) / (-m[2] * w + m[0]),
        }
    }
}

/// Conformal map from the sampled Jordan domain onto H, with closed-form
/// inverse.
#[derive(Clone, Debug)]
pub struct ConformalMap {
    steps: Vec<Step>,
    /// Final real positions of the input curve samples, tracked exactly
    /// through the construction; `None` marks the sample at infinity.
    sample_images: Vec<Option<f64>>,
}

impl ConformalMap {
    pub fn forward(&self, z: Complex64) -> Complex64 {
        self.steps.iter().fold(z, |z, s| s.forward(z))
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        self.steps.iter().rev().fold(w, |w, s| s.inverse(w))
    }

    /// Boundary image of each curve sample on the extended real line.
    /// These are computed with the stable real branch of every step, so
    /// they avoid the square-root cancellation that makes evaluation of
    /// near-boundary points ill-conditioned.
    pub fn sample_images(&self) -> &[Option<f64>] {
        &self.sample_images
    }
}

/// Stable real opener image: |m| grows to sqrt(m^2 + a^2), keeping the sign.
fn opener_real(m: f64, a: f64) -> f64 {
    let v = (m * m + a * a).sqrt();
    if m >= 0.0 {
        v
    } else {
        -v
    }
}

fn mobius_real(t: f64, c: f64) -> Option<f64> {
    let den = 1.0 - t / c;
    if den == 0.0 {
        None
    } else {
        Some(t / den)
    }
}

fn segments_cross(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> bool {
    let cross = |o: Complex64, p: Complex64, q: Complex64| {
        (p.re - o.re) * (q.im - o.im) - (p.im - o.im) * (q.re - o.re)
    };
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Builds the zipper map for a counterclockwise closed curve given by
/// `curve` (first point not repeated). `interior_ref` must be a point
/// inside the domain; it selects the correct branch at the closure.
/// Returns the map together with the image of `interior_ref`.
pub fn zipper_map(
    curve: &[Complex64],
    interior_ref: Complex64,
) -> Result<ConformalMap, ZipperError> {
    let n = curve.len();
    if n < 4 {
        return Err(ZipperError::TooFewPoints { got: n });
    }
    let scale = {
        let mut lo = curve[0];
        let mut hi = curve[0];
        for z in curve {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        (hi - lo).norm()
    };
    for i in 0..n {
        let a1 = curve[i];
        let a2 = curve[(i + 1) % n];
        if (a2 - a1).norm() < 1e-12 * scale {
            return Err(ZipperError::DegenerateStep { at: i });
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue; // adjacent through the wrap
            }
            let b1 = curve[j];
            let b2 = curve[(j + 1) % n];
            if segments_cross(a1, a2, b1, b2) {
                return Err(ZipperError::SelfIntersecting { seg_a: i, seg_b: j });
            }
        }
    }
    let mut steps = Vec::with_capacity(n + 3);
    steps.push(Step::Init { z0: curve[0], z1: curve[1] });
    let eval = |steps: &[Step], z: Complex64| steps.iter().fold(z, |z, s| s.forward(z));
    // boundary images of the samples, tracked through every step with the
    // stable real branches (None = infinity)
    let mut pos: Vec<Option<f64>> = vec![None; n];
    pos[1] = Some(0.0);
    for k in 2..n {
        let zeta = eval(&steps, curve[k]);
        if zeta.im <= 0.0 {
            return Err(ZipperError::NotInUpperHalfPlane);
        }
        let norm_sq = zeta.norm_sqr();
        let c = if zeta.re.abs() < 1e-14 * zeta.im.abs() {
            None
        } else {
            Some(norm_sq / zeta.re)
        };
        let a = norm_sq / zeta.im;
        steps.push(Step::Opener { c, a });
        for j in 0..k {
            pos[j] = match pos[j] {
                None => match c {
                    Some(c) => Some(opener_real(-c, a)),
                    None => None,
                },
                Some(_) if j == k - 1 => {
                    // the previous base splits into +-a; the counterclockwise
                    // boundary continues on the negative side
                    Some(-a)
                }
                Some(t) => {
                    let m = match c {
                        Some(c) => mobius_real(t, c),
                        None => Some(t),
                    };
                    m.map(|m| opener_real(m, a))
                }
            };
        }
        pos[k] = Some(0.0);
    }
    // close the curve: the tracked image of curve[0] moves to infinity
    let xi = pos[0];
    steps.push(Step::ToRay { xi });
    for p in pos.iter_mut() {
        *p = match (*p, xi) {
            (any, None) => any,
            (None, Some(x)) => Some(-x),
            (Some(t), Some(x)) => mobius_real(t, x),
        };
    }
    let ref_img = eval(&steps, interior_ref);
    let left = ref_img.re < 0.0;
    steps.push(Step::Square { left });
    for p in pos.iter_mut() {
        *p = p.map(|t| if left { -(t * t) } else { t * t });
    }
    let final_ref = eval(&steps, interior_ref);
    if final_ref.im <= 0.0 {
        return Err(ZipperError::NotInUpperHalfPlane);
    }
    Ok(ConformalMap { steps, sample_images: pos })
}

/// Appends a real Mobius normalization sending the images of the three
/// given points to 0, 1, infinity. The points must sit near the boundary
/// in counterclockwise order, so the resulting Mobius preserves H.
pub fn normalize_three_points(
    map: &mut ConformalMap,
    p0: Complex64,
    p1: Complex64,
    p2: Complex64,
) -> Result<(), ZipperError> {
    let a = map.forward(p0).re;
    let b = map.forward(p1).re;
    let c = map.forward(p2).re;
    // w -> ((w - a)(b - c)) / ((w - c)(b - a)); det = (b-c)(b-a)(a-c)
    let m = [b - c, -a * (b - c), b - a, -c * (b - a)];
    let det = m[0] * m[3] - m[1] * m[2];
    if det <= 0.0 {
        return Err(ZipperError::NotInUpperHalfPlane);
    }
    map.steps.push(Step::Mobius { m });
    for p in map.sample_images.iter_mut() {
        *p = match *p {
            None => {
                if m[2] == 0.0 {
                    None
                } else {
                    Some(m[0] / m[2])
                }
            }
            Some(t) => {
                let den = m[2] * t + m[3];
                if den == 0.0 {
                    None
                } else {
                    Some((m[0] * t + m[1]) / den)
                }
            }
        };
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Upper half-disk boundary, counterclockwise: diameter then arc.
    fn half_disk_curve(samples_per_part: usize) -> Vec<Complex64> {
        let mut pts = Vec::new();
        for k in 0..samples_per_part {
            let t = k as f64 / samples_per_part as f64;
            pts.push(Complex64::new(-1.0 + 2.0 * t, 0.0));
        }
        for k in 0..samples_per_part {
            let t = k as f64 / samples_per_part as f64;
            let th = core::f64::consts::PI * t;
            pts.push(Complex64::new(th.cos(), th.sin()));
        }
        pts
    }

    #[test]
    fn forward_inverse_identity_on_interior_points() {
        let curve = half_disk_curve(24);
        let map = zipper_map(&curve, Complex64::new(0.0, 0.4)).unwrap();
        let mut checked = 0;
        for i in 0..10 {
            for j in 1..=10 {
                let z = Complex64::new(-0.85 + 0.17 * i as f64, 0.08 * j as f64);
                if z.norm() > 0.92 {
                    continue;
                }
                let w = map.forward(z);
                assert!(w.im > 0.0, "interior point {z} left H: {w}");
                let back = map.inverse(w);
                assert!((back - z).norm() < 1e-6, "round trip {z} -> {w} -> {back}");
                checked += 1;
            }
        }
        assert!(checked >= 60, "only {checked} interior points checked");
    }

    #[test]
    fn normalization_sends_marks_to_standard_points() {
        let curve = half_disk_curve(24);
        let mut map = zipper_map(&curve, Complex64::new(0.0, 0.4)).unwrap();
        let nudge = Complex64::new(0.0, 1e-9);
        let p0 = curve[3] + nudge;
        let p1 = curve[17] + nudge;
        let p2 = curve[30] * (1.0 - 1e-6);
        normalize_three_points(&mut map, p0, p1, p2).unwrap();
        assert!(map.forward(p0).norm() < 1e-6);
        assert!((map.forward(p1) - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        assert!(map.forward(p2).norm() > 1e3);
        // still a half-plane map
        let w = map.forward(Complex64::new(0.1, 0.3));
        assert!(w.im > 0.0);
    }

    #[test]
    fn symmetric_domain_gives_symmetric_boundary_images() {
        // symmetric under reflection across the imaginary axis; normalize
        // with symmetric marks, then mirror samples map near s -> -s
        let curve = half_disk_curve(40);
        let mut map = zipper_map(&curve, Complex64::new(0.0, 0.4)).unwrap();
        let up = Complex64::new(0.0, 1e-7);
        // marks: center of diameter -> 0, +1 corner -> 1, top of arc -> inf.
        // With the reflection-fixed points at 0 and inf, the uniqueness of
        // the Riemann map forces T(-conj z) = -conj T(z), so mirrored
        // boundary samples map to s and -s.
        let center = Complex64::new(0.0, 1e-7);
        let plus = Complex64::new(0.985, 1e-7);
        let top = Complex64::new(0.0, 0.999);
        normalize_three_points(&mut map, center, plus, top).unwrap();
        // mirror-symmetric diameter samples
        for k in 1..18 {
            let z = curve[20 + k] + up; // at +x
            let zm = curve[20 - k] + up; // mirrored
            let s = map.forward(z).re;
            let sm = map.forward(zm).re;
            assert!(
                (s + sm).abs() < 0.08 * (s.abs() + sm.abs()).max(0.2),
                "k={k}: images {s} and {sm} not mirrored"
            );
        }
    }

    #[test]
    fn tracked_sample_images_match_nudged_evaluation() {
        let curve = half_disk_curve(24);
        let map = zipper_map(&curve, Complex64::new(0.0, 0.4)).unwrap();
        let imgs = map.sample_images();
        assert_eq!(imgs.iter().filter(|p| p.is_none()).count(), 1);
        assert!(imgs[0].is_none());
        let ref_pt = Complex64::new(0.0, 0.4);
        for (k, z) in curve.iter().enumerate() {
            let Some(t) = imgs[k] else { continue };
            let inward = (ref_pt - z) / (ref_pt - z).norm();
            let w = map.forward(z + inward * 1e-9);
            // local spacing as error yardstick
            let spacing = {
                let nb = [k.wrapping_sub(1) % curve.len(), (k + 1) % curve.len()];
                nb.iter()
                    .filter_map(|&j| imgs[j])
                    .map(|u| (u - t).abs())
                    .fold(f64::INFINITY, f64::min)
            };
            assert!(
                (w.re - t).abs() < 0.05 * spacing + 1e-9 * (1.0 + t.abs()),
                "sample {k}: tracked {t}, nudged {w}"
            );
        }
        // cyclically monotone: exactly one descent among the finite values
        let finite: Vec<f64> = imgs.iter().filter_map(|p| *p).collect();
        let n = finite.len();
        let descents = (0..n)
            .filter(|&i| finite[(i + 1) % n] < finite[i])
            .count();
        assert_eq!(descents, 1);
    }

    #[test]
    fn rejects_self_intersecting_curve() {
        let curve = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ];
        assert!(matches!(
            zipper_map(&curve, Complex64::new(0.5, 0.5)),
            Err(ZipperError::SelfIntersecting { .. })
        ));
    }

    #[test]
    fn boundary_images_are_monotone_on_real_line() {
        let curve = half_disk_curve(16);
        let mut map = zipper_map(&curve, Complex64::new(0.0, 0.4)).unwrap();
        normalize_three_points(
            &mut map,
            curve[1] + Complex64::new(0.0, 1e-8),
            curve[9] + Complex64::new(0.0, 1e-8),
            curve[20] * 0.999,
        )
        .unwrap();
        // walk the boundary; images must be increasing in cyclic order on R
        let mut vals = Vec::new();
        let ref_pt = Complex64::new(0.0, 0.4);
        for (i, z) in curve.iter().enumerate() {
            // convex domain: nudging toward any interior point stays inside
            let inward = (ref_pt - z) / (ref_pt - z).norm();
            let w = map.forward(z + inward * 1e-8);
            assert!(
                w.im.abs() < 1e-2 * (1.0 + w.re.abs()),
                "boundary sample {i} image {w} not near R"
            );
            vals.push(w.re);
        }
        // cyclically increasing: exactly one descent
        let n = vals.len();
        let descents = (0..n)
            .filter(|&i| vals[(i + 1) % n] < vals[i])
            .count();
        assert_eq!(descents, 1, "images not in cyclic order: {vals:?}");
    }
}
