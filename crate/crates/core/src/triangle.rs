//! Hyperbolic triangle-group embedding into PSL2(R) and the basic
//! upper-half-plane geometry used by the fundamental-domain builder.
//!
//! The generator of order `a` is an elliptic rotation about `i`, the order-b
//! generator rotates about `mu*i`, and their product has order `c`; `mu` is
//! solved from the trace condition. Rotation angles are `2*pi/a` so that the
//! elements have the stated orders (the half-angle `pi/a` appears in the
//! traces).

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float; // pulls in cos/sin/sqrt/atan2 under no_std

use core::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum TriangleError {
    NotHyperbolic { a: usize, b: usize, c: usize },
    OrderTooSmall,
}

impl fmt::Display for TriangleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriangleError::NotHyperbolic { a, b, c } => {
                write!(f, "not hyperbolic: 1/{a} + 1/{b} + 1/{c} >= 1")
            }
            TriangleError::OrderTooSmall => write!(f, "orders must be at least 2"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TriangleError {}

/// Real 2x2 matrix acting on the upper half-plane; determinant 1 up to
/// rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse assuming determinant 1.
    pub fn inv(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn pow(&self, e: usize) -> Mat2 {
        let mut out = Mat2::identity();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Distance to +-identity in the max norm; the relation check.
    pub fn dist_pm_identity(&self) -> f64 {
        let d = |s: f64| {
            let e = [self.a - s, self.b, self.c, self.d - s];
            e.iter().fold(0.0f64, |m, x| m.max(x.abs()))
        };
        d(1.0).min(d(-1.0))
    }

    /// Fixed point in the open upper half-plane of an elliptic element.
    pub fn elliptic_fixed_point(&self) -> Option<Complex64> {
        let t = self.trace();
        let disc = 4.0 - t * t;
        if disc <= 0.0 || self.c.abs() < 1e-300 {
            return None;
        }
        let im = disc.sqrt() / (2.0 * self.c);
        let re = (self.a - self.d) / (2.0 * self.c);
        if im > 0.0 {
            Some(Complex64::new(re, im))
        } else {
            Some(Complex64::new(re, -im)) // c < 0: conjugate root is in H
        }
    }
}

#[derive(Clone, Debug)]
pub struct TriangleGroupEmbedding {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub gen_a: Mat2,
    pub gen_b: Mat2,
    pub mu: f64,
    pub gamma: Complex64,
}

/// Rotation about `i` of angle `2*theta_half` (trace `2*cos(theta_half)`).
fn rotation_about_i(theta_half: f64) -> Mat2 {
    Mat2 {
        a: theta_half.cos(),
        b: theta_half.sin(),
        c: -theta_half.sin(),
        d: theta_half.cos(),
    }
}

pub fn embed_triangle_group(
    a: usize,
    b: usize,
    c: usize,
) -> Result<TriangleGroupEmbedding, TriangleError> {
    if a < 2 || b < 2 || c < 2 {
        return Err(TriangleError::OrderTooSmall);
    }
    let (fa, fb, fc) = (a as f64, b as f64, c as f64);
    if 1.0 / fa + 1.0 / fb + 1.0 / fc >= 1.0 - 1e-12 {
        return Err(TriangleError::NotHyperbolic { a, b, c });
    }
    let (ca, sa) = ((PI / fa).cos(), (PI / fa).sin());
    let (cb, sb) = ((PI / fb).cos(), (PI / fb).sin());
    let cc = (PI / fc).cos();
    // trace(gen_a * gen_b) = 2*ca*cb - sa*sb*(mu + 1/mu) = -2*cos(pi/c)
    let s = 2.0 * (ca * cb + cc) / (sa * sb);
    debug_assert!(s > 2.0);
    let mu = (s + (s * s - 4.0).sqrt()) / 2.0;
    let gen_a = rotation_about_i(PI / fa);
    let root = mu.sqrt();
    let conj = Mat2 { a: root, b: 0.0, c: 0.0, d: 1.0 / root };
    let gen_b = conj.mul(&rotation_about_i(PI / fb)).mul(&conj.inv());
    let prod = gen_a.mul(&gen_b);
    let gamma = prod
        .elliptic_fixed_point()
        .expect("product of elliptic generators must be elliptic");
    // the kite vertex with positive real part
    let gamma = if gamma.re >= 0.0 { gamma } else { -gamma.conj() };
    Ok(TriangleGroupEmbedding { a, b, c, gen_a, gen_b, mu, gamma })
}

impl TriangleGroupEmbedding {
    /// Base kite vertices in counterclockwise order: i, gamma, mu*i,
    /// -conj(gamma).
    pub fn base_kite(&self) -> [Complex64; 4] {
        [
            Complex64::new(0.0, 1.0),
            self.gamma,
            Complex64::new(0.0, self.mu),
            -self.gamma.conj(),
        ]
    }

    /// Gauss-Bonnet area of the kite: 2*pi*(1 - 1/a - 1/b - 1/c).
    pub fn kite_area(&self) -> f64 {
        2.0 * PI * (1.0 - 1.0 / self.a as f64 - 1.0 / self.b as f64 - 1.0 / self.c as f64)
    }
}

/// Hyperbolic distance in the upper half-plane.
pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm_sqr();
    let ch = 1.0 + num / (2.0 * z.im * w.im);
    (ch + (ch * ch - 1.0).max(0.0).sqrt()).ln()
}

/// Unit tangent at `z` of the geodesic toward `w`.
pub fn geodesic_tangent(z: Complex64, w: Complex64) -> Complex64 {
    let dx = w.re - z.re;
    if dx.abs() < 1e-12 * (z.im + w.im) {
        let s = if w.im > z.im { 1.0 } else { -1.0 };
        return Complex64::new(0.0, s);
    }
    // geodesic is a semicircle centered on the real axis
    let center = (w.norm_sqr() - z.norm_sqr()) / (2.0 * (w.re - z.re));
    let radial = z - Complex64::new(center, 0.0);
    let t = Complex64::new(0.0, 1.0) * radial / radial.norm();
    // orient toward w: tangent and chord make an acute angle
    if t.re * (w.re - z.re) + t.im * (w.im - z.im) >= 0.0 {
        t
    } else {
        -t
    }
}

/// Point at parameter `s` in [0, 1] along the geodesic from `z` to `w`,
/// uniform in hyperbolic arc length (hence equivariant under isometries).
pub fn geodesic_point(z: Complex64, w: Complex64, s: f64) -> Complex64 {
    let dx = w.re - z.re;
    if dx.abs() < 1e-12 * (z.im + w.im) {
        let y = ((1.0 - s) * z.im.ln() + s * w.im.ln()).exp();
        return Complex64::new(z.re + s * (w.re - z.re), y);
    }
    let center = (w.norm_sqr() - z.norm_sqr()) / (2.0 * dx);
    let r = (z - Complex64::new(center, 0.0)).norm();
    // arc-length parameter along the semicircle: l(theta) = ln tan(theta/2)
    let lz = (z.im.atan2(z.re - center) / 2.0).tan().ln();
    let lw = (w.im.atan2(w.re - center) / 2.0).tan().ln();
    let l = (1.0 - s) * lz + s * lw;
    let theta = 2.0 * l.exp().atan();
    Complex64::new(center + r * theta.cos(), r * theta.sin())
}

/// Unsigned interior angle at `v` between geodesics to `u` and to `w`.
pub fn interior_angle(v: Complex64, u: Complex64, w: Complex64) -> f64 {
    let t1 = geodesic_tangent(v, u);
    let t2 = geodesic_tangent(v, w);
    let dot = t1.re * t2.re + t1.im * t2.im;
    let cross = t1.re * t2.im - t1.im * t2.re;
    cross.abs().atan2(dot)
}

/// Gauss-Bonnet area of a geodesic polygon from measured angles.
pub fn polygon_area(vertices: &[Complex64]) -> f64 {
    let n = vertices.len();
    let mut angle_sum = 0.0;
    for i in 0..n {
        let v = vertices[i];
        let u = vertices[(i + n - 1) % n];
        let w = vertices[(i + 1) % n];
        angle_sum += interior_angle(v, u, w);
    }
    (n as f64 - 2.0) * PI - angle_sum
}

/// Smallest hyperbolic orders (a, b, c) that are multiples of the given
/// element orders, minimizing a+b+c then lexicographically.
pub fn choose_orders(
    ord_x: usize,
    ord_y: usize,
    ord_z: usize,
) -> Option<(usize, usize, usize)> {
    let mults = |o: usize| -> Vec<usize> {
        (1..=12usize)
            .map(|k| o * k)
            .filter(|&m| (2..=24).contains(&m))
            .collect()
    };
    let mut best: Option<(usize, usize, usize)> = None;
    for &a in &mults(ord_x) {
        for &b in &mults(ord_y) {
            for &c in &mults(ord_z) {
                let s = 1.0 / a as f64 + 1.0 / b as f64 + 1.0 / c as f64;
                if s >= 1.0 - 1e-12 {
                    continue;
                }
                let cand = (a + b + c, a, b, c);
                if best.map_or(true, |(x, y, z)| cand < (x + y + z, x, y, z)) {
                    best = Some((a, b, c));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_euclidean_and_spherical() {
        assert!(matches!(
            embed_triangle_group(2, 3, 6),
            Err(TriangleError::NotHyperbolic { .. })
        ));
        assert!(matches!(
            embed_triangle_group(2, 3, 5),
            Err(TriangleError::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn relations_hold_237() {
        let e = embed_triangle_group(2, 3, 7).unwrap();
        assert!(e.gen_a.pow(2).dist_pm_identity() < 1e-12);
        assert!(e.gen_b.pow(3).dist_pm_identity() < 1e-12);
        assert!(e.gen_a.mul(&e.gen_b).pow(7).dist_pm_identity() < 1e-12);
        // order-2 generator is traceless
        assert!(e.gen_a.trace().abs() < 1e-12);
    }

    #[test]
    fn relations_hold_723() {
        let e = embed_triangle_group(7, 2, 3).unwrap();
        assert!(e.gen_a.pow(7).dist_pm_identity() < 1e-12);
        assert!(e.gen_b.pow(2).dist_pm_identity() < 1e-12);
        assert!(e.gen_a.mul(&e.gen_b).pow(3).dist_pm_identity() < 1e-12);
        assert!(e.mu > 1.0);
    }

    #[test]
    fn fixed_points_are_i_and_mu_i() {
        let e = embed_triangle_group(7, 2, 3).unwrap();
        let i = Complex64::new(0.0, 1.0);
        assert!((e.gen_a.apply(i) - i).norm() < 1e-12);
        let mi = Complex64::new(0.0, e.mu);
        assert!((e.gen_b.apply(mi) - mi).norm() < 1e-12);
        // gamma is fixed by the product
        let p = e.gen_a.mul(&e.gen_b);
        let g = p.elliptic_fixed_point().unwrap();
        assert!((p.apply(g) - g).norm() < 1e-10);
        assert!(g.im > 0.0);
    }

    #[test]
    fn kite_area_matches_measured_area() {
        for (a, b, c) in [(2usize, 3usize, 7usize), (7, 2, 3), (4, 4, 3)] {
            let e = embed_triangle_group(a, b, c).unwrap();
            let measured = polygon_area(&e.base_kite());
            assert!(
                (measured - e.kite_area()).abs() < 1e-9,
                "({a},{b},{c}): measured {measured} vs {}",
                e.kite_area()
            );
        }
    }

    #[test]
    fn geodesic_point_equivariant() {
        let e = embed_triangle_group(2, 3, 7).unwrap();
        let z = Complex64::new(0.3, 0.8);
        let w = Complex64::new(-0.5, 1.7);
        for s in [0.25, 0.5, 0.75] {
            let p = geodesic_point(z, w, s);
            let q = geodesic_point(e.gen_b.apply(z), e.gen_b.apply(w), s);
            assert!((e.gen_b.apply(p) - q).norm() < 1e-9);
        }
        assert!((geodesic_point(z, w, 0.0) - z).norm() < 1e-12);
        assert!((geodesic_point(z, w, 1.0) - w).norm() < 1e-12);
    }

    #[test]
    fn distance_symmetric_and_invariant() {
        let e = embed_triangle_group(2, 3, 7).unwrap();
        let z = Complex64::new(0.1, 2.0);
        let w = Complex64::new(1.0, 0.5);
        let d = hyperbolic_distance(z, w);
        assert!((d - hyperbolic_distance(w, z)).abs() < 1e-12);
        let g = e.gen_a.mul(&e.gen_b);
        assert!((d - hyperbolic_distance(g.apply(z), g.apply(w))).abs() < 1e-9);
    }

    #[test]
    fn chooses_minimal_hyperbolic_orders() {
        assert_eq!(choose_orders(2, 3, 7), Some((2, 3, 7)));
        // spherical (1, 2, 2) and (2, 2, 3) both lift to (4, 4, 3)-type sums
        let (a, b, c) = choose_orders(1, 2, 2).unwrap();
        assert!(a % 2 == 0 || a >= 2);
        assert!(1.0 / (a as f64) + 1.0 / (b as f64) + 1.0 / (c as f64) < 1.0);
        assert!(b % 2 == 0 && c % 2 == 0);
        let (a2, b2, c2) = choose_orders(2, 2, 3).unwrap();
        assert!(a2 % 2 == 0 && b2 % 2 == 0 && c2 % 3 == 0);
        assert!(1.0 / (a2 as f64) + 1.0 / (b2 as f64) + 1.0 / (c2 as f64) < 1.0);
    }
}
