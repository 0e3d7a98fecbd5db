//! Conformal welding of a half-plane along a paired boundary subdivision.
//!
//! Input: marks on the real line in increasing order (the cyclic order on
//! the boundary circle closes through infinity) and a fixed-point-free
//! involution pairing the intervals between consecutive marks. The welding
//! is built by repeatedly gluing a "cherry": two adjacent intervals paired
//! with each other. Each glue is a fold: a Mobius map sends the cherry marks
//! u, m, v to -1, 0, 1 and w = i*sqrt(1 - s^2) then opens the slit, merging
//! the two outer marks exactly at 0 and pushing the shared mark to the slit
//! tip i. The induced point correspondence is the Mobius reflection
//! s(t') = -s(t), exact at all three marks. When only two marks remain the last
//! interval pair is closed by a Mobius-then-square map, producing the full
//! sphere with the boundary collapsed onto a planar tree. A noncrossing
//! pairing always admits a cherry; a crossing one eventually does not,
//! which is reported as a positive-genus gluing.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub enum WeldError {
    BadPairing { detail: &'static str },
    MarksNotSorted { at: usize },
    NotGenusZero { marks_left: usize },
    Degenerate { at_mark: f64 },
}

impl fmt::Display for WeldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeldError::BadPairing { detail } => write!(f, "bad interval pairing: {detail}"),
            WeldError::MarksNotSorted { at } => {
                write!(f, "marks must be strictly increasing (violated at index {at})")
            }
            WeldError::NotGenusZero { marks_left } => write!(
                f,
                "gluing is not genus 0: no adjacent paired intervals with {marks_left} marks left"
            ),
            WeldError::Degenerate { at_mark } => {
                write!(f, "marks collapsed together near {at_mark}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for WeldError {}

#[derive(Clone, Debug)]
enum WStep {
    /// s = Mobius sending u, m, v to -1, 0, 1 (an automorphism of H since
    /// u < m < v), then w = i*sqrt(1 - s^2): glues [u, m] onto [m, v] by the
    /// correspondence s(t') = -s(t), outer marks to 0, m to the slit tip i.
    Fold { u: f64, m: f64, v: f64 },
    /// z -> -1/(z - g): moves the point at infinity into a finite interval.
    MoveInf { g: f64 },
    /// z -> ((z-q)/(z-p))^2 with p < q: glues the two remaining intervals,
    /// q -> 0, p -> infinity (the tree gains an edge through infinity).
    Close { p: f64, q: f64 },
}

impl WStep {
    fn apply(&self, z: Complex64) -> Complex64 {
        match self {
            WStep::Fold { u, m, v } => {
                if z.im.abs() < 1e-13 * (1.0 + z.re.abs()) {
                    fold_real(z.re, *u, *m, *v)
                } else {
                    // 1 - s^2 = -k (z-u)(z-v) / (Cz+D)^2 in factored form,
                    // avoiding cancellation near the glued marks
                    let k = 4.0 * (m - u) * (v - m);
                    let den = (u + v - 2.0 * m) * z + (m * (u + v) - 2.0 * u * v);
                    let one_minus_s2 = -k * (z - u) * (z - v) / (den * den);
                    Complex64::new(0.0, 1.0) * one_minus_s2.sqrt()
                }
            }
            WStep::MoveInf { g } => -1.0 / (z - g),
            WStep::Close { p, q } => {
                let t = (z - q) / (z - p);
                t * t
            }
        }
    }
}

/// Real branch of the fold: slit values i*positive for t strictly between
/// u and v, real values outside (negative left of u, positive right of v),
/// monotone along the boundary circle.
fn fold_real(t: f64, u: f64, m: f64, v: f64) -> Complex64 {
    let k = 4.0 * (m - u) * (v - m);
    let den = (u + v - 2.0 * m) * t + (m * (u + v) - 2.0 * u * v);
    if t >= u && t <= v {
        Complex64::new(0.0, (k * (t - u) * (v - t)).sqrt() / den.abs())
    } else {
        let mag = (k * (t - u) * (t - v)).sqrt() / den.abs();
        let sign = ((t - m) * den).signum();
        Complex64::new(sign * mag, 0.0)
    }
}

/// A completed welding: an ordered list of elementary glue steps.
#[derive(Clone, Debug)]
pub struct Welding {
    steps: Vec<WStep>,
    /// final positions of the slit tips created by the folds
    pub tips: Vec<Complex64>,
    /// max chordal drift over the supplied glue pairs
    pub residual: f64,
    pub fold_count: usize,
}

impl Welding {
    /// Pushes an interior (or inward-nudged boundary) point through the
    /// welding. The image of infinity is the Close image of infinity, 1.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.steps.iter().fold(z, |z, s| s.apply(z))
    }
}

/// Chordal distance on the Riemann sphere.
pub fn chordal(z: Complex64, w: Complex64) -> f64 {
    let num = 2.0 * (z - w).norm();
    num / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
}

struct Mark {
    coord: f64,
    prev: usize,
    next: usize,
    /// start mark of the interval paired with the interval starting here
    partner: usize,
    alive: bool,
}

/// Welds the half-plane along the given boundary identification.
///
/// `marks` are strictly increasing reals; interval `j` runs from mark `j`
/// to mark `j+1`, the last interval from the final mark through infinity
/// back to the first. `pairing` is a fixed-point-free involution on the
/// interval indices. `glue_pairs` are point pairs that the identification
/// is supposed to merge; their final chordal separation is reported as the
/// residual (pass an empty slice to skip).
pub fn weld(
    marks: &[f64],
    pairing: &[usize],
    glue_pairs: &[(f64, f64)],
) -> Result<Welding, WeldError> {
    let n = marks.len();
    if n < 2 || n % 2 != 0 {
        return Err(WeldError::BadPairing { detail: "need an even number (>= 2) of marks" });
    }
    if pairing.len() != n {
        return Err(WeldError::BadPairing { detail: "pairing length must match mark count" });
    }
    for j in 0..n {
        if pairing[j] >= n || pairing[j] == j || pairing[pairing[j]] != j {
            return Err(WeldError::BadPairing {
                detail: "pairing must be a fixed-point-free involution",
            });
        }
    }
    for i in 1..n {
        if !(marks[i] > marks[i - 1]) {
            return Err(WeldError::MarksNotSorted { at: i });
        }
    }

    let mut nodes: Vec<Mark> = (0..n)
        .map(|i| Mark {
            coord: marks[i],
            prev: (i + n - 1) % n,
            next: (i + 1) % n,
            partner: pairing[i],
            alive: true,
        })
        .collect();
    // the interval that currently runs through infinity, by its start mark
    let mut inf_start = n - 1;
    let mut alive = n;
    let mut steps: Vec<WStep> = Vec::new();
    let mut tip_births: Vec<usize> = Vec::new(); // step index just after each fold; tip is at i
    let mut fold_count = 0usize;

    while alive > 2 {
        // find the best cherry: intervals (u -> m) and (m -> v) paired together
        let mut best: Option<(usize, f64, f64)> = None; // (shared mark id, length, coord)
        let mut id = inf_start;
        for _ in 0..alive {
            let u = id;
            let m = nodes[u].next;
            if nodes[u].partner == m {
                let len = if u == inf_start || m == inf_start {
                    f64::INFINITY
                } else {
                    nodes[nodes[m].next].coord - nodes[u].coord
                };
                let c = nodes[m].coord;
                let better = match best {
                    None => true,
                    Some((_, bl, bc)) => len < bl || (len == bl && c < bc),
                };
                if better {
                    best = Some((m, len, c));
                }
            }
            id = nodes[id].next;
        }
        let (m_id, _, _) = match best {
            Some(b) => b,
            None => return Err(WeldError::NotGenusZero { marks_left: alive }),
        };
        let u_id = nodes[m_id].prev;
        let v_id = nodes[m_id].next;

        if u_id == inf_start || m_id == inf_start {
            // the cherry straddles infinity: re-coordinate first
            let mut g = f64::NAN;
            let mut longest = -1.0;
            let mut id = inf_start;
            for _ in 0..alive {
                let s = id;
                let e = nodes[s].next;
                if s != inf_start && s != u_id && s != m_id {
                    let len = nodes[e].coord - nodes[s].coord;
                    if len > longest {
                        longest = len;
                        g = 0.5 * (nodes[s].coord + nodes[e].coord);
                    }
                }
                id = nodes[id].next;
            }
            if !g.is_finite() {
                return Err(WeldError::Degenerate { at_mark: nodes[m_id].coord });
            }
            steps.push(WStep::MoveInf { g });
            let mut id = inf_start;
            for _ in 0..alive {
                nodes[id].coord = -1.0 / (nodes[id].coord - g);
                id = nodes[id].next;
            }
        }

        let u = nodes[u_id].coord;
        let m = nodes[m_id].coord;
        let v = nodes[v_id].coord;
        if !(u < m) || !(m < v) {
            return Err(WeldError::Degenerate { at_mark: m });
        }
        steps.push(WStep::Fold { u, m, v });
        fold_count += 1;
        tip_births.push(steps.len());

        // update surviving mark coordinates through the fold; the fold does
        // not fix infinity, so only the circular order is preserved
        {
            let mut id = nodes[v_id].next;
            while id != u_id {
                nodes[id].coord = fold_real(nodes[id].coord, u, m, v).re;
                id = nodes[id].next;
            }
        }
        // merge u and v into one mark at 0, drop m
        nodes[u_id].coord = 0.0;
        nodes[m_id].alive = false;
        nodes[v_id].alive = false;
        let v_next = nodes[v_id].next;
        nodes[u_id].next = v_next;
        nodes[v_next].prev = u_id;
        let vp = nodes[v_id].partner;
        nodes[u_id].partner = vp;
        nodes[vp].partner = u_id;
        alive -= 2;

        // re-locate the interval through infinity: walking the circular list
        // the coordinates increase except across that one interval
        inf_start = {
            let mut found = usize::MAX;
            let mut id = u_id;
            for _ in 0..alive {
                let nx = nodes[id].next;
                if nodes[nx].coord <= nodes[id].coord {
                    if nodes[nx].coord == nodes[id].coord {
                        return Err(WeldError::Degenerate { at_mark: nodes[id].coord });
                    }
                    if found != usize::MAX {
                        return Err(WeldError::Degenerate { at_mark: nodes[id].coord });
                    }
                    found = id;
                }
                id = nx;
            }
            if found == usize::MAX {
                return Err(WeldError::Degenerate { at_mark: 0.0 });
            }
            found
        };
    }

    // two marks left; their two intervals are necessarily paired
    let a_id = (0..n).find(|&i| nodes[i].alive).unwrap();
    let b_id = nodes[a_id].next;
    let (p, q) = {
        let (x, y) = (nodes[a_id].coord, nodes[b_id].coord);
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    };
    if !(q > p) {
        return Err(WeldError::Degenerate { at_mark: p });
    }
    steps.push(WStep::Close { p, q });

    let tips: Vec<Complex64> = tip_births
        .iter()
        .map(|&k| {
            let tip = Complex64::new(0.0, 1.0);
            steps[k..].iter().fold(tip, |z, s| s.apply(z))
        })
        .collect();

    let full = |z: Complex64| steps.iter().fold(z, |z, s| s.apply(z));
    let mut residual = 0.0f64;
    for &(x, y) in glue_pairs {
        let d = chordal(full(Complex64::new(x, 0.0)), full(Complex64::new(y, 0.0)));
        if d > residual {
            residual = d;
        }
    }

    Ok(Welding { steps, tips, residual, fold_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_kite_welding() {
        // four marks, opposite-style pairing 0<->3, 1<->2
        let marks = [-1.0, 0.0, 1.0, 2.0];
        let pairing = [3, 2, 1, 0];
        // the fold at m=1 (a=b=1) glues by t -> -t, so 0.5 and 1.5 merge
        let w = weld(&marks, &pairing, &[(0.5, 1.5)]).unwrap();
        assert_eq!(w.fold_count, 1);
        assert_eq!(w.tips.len(), 1);
        assert!(w.residual < 1e-12, "residual {}", w.residual);
        // the outer marks of the cherry were merged exactly
        let e = Complex64::new(0.0, 1e-9);
        let d = chordal(w.apply(Complex64::new(0.0, 0.0) + e), w.apply(Complex64::new(2.0, 0.0) + e));
        assert!(d < 1e-4, "merged marks drifted: {d}");
    }

    #[test]
    fn inconsistent_pair_reported_in_residual() {
        let marks = [-1.0, 0.0, 1.0, 2.0];
        let pairing = [3, 2, 1, 0];
        let w = weld(&marks, &pairing, &[(0.5, 1.7)]).unwrap();
        assert!(w.residual > 1e-3, "residual {}", w.residual);
    }

    #[test]
    fn crossing_pairing_rejected() {
        let marks = [0.0, 1.0, 2.0, 3.0];
        let pairing = [2, 3, 0, 1];
        assert!(matches!(
            weld(&marks, &pairing, &[]),
            Err(WeldError::NotGenusZero { .. })
        ));
    }

    #[test]
    fn cherry_through_infinity_is_glued() {
        // pairing 0<->1 (finite cherry) and 2<->3 (cherry through infinity)
        let marks = [0.0, 1.0, 2.0, 3.0];
        let pairing = [1, 0, 3, 2];
        let w = weld(&marks, &pairing, &[]).unwrap();
        assert_eq!(w.fold_count, 1);
        // marks 0 and 2 merge at the first fold; 3 and 0 are the final pair
        let e = Complex64::new(0.0, 1e-9);
        let d = chordal(w.apply(Complex64::new(0.0, 0.0) + e), w.apply(Complex64::new(2.0, 0.0) + e));
        assert!(d < 1e-4, "fold outer marks drifted: {d}");
    }

    #[test]
    fn interior_points_cover_both_hemispheres() {
        let marks = [-1.0, 0.0, 1.0, 2.0];
        let pairing = [3, 2, 1, 0];
        let w = weld(&marks, &pairing, &[]).unwrap();
        // the open half-plane maps onto the sphere minus a tree; sample
        // points should spread out rather than collapse
        let mut imgs = vec![];
        for k in 1..40 {
            let z = Complex64::new(-3.0 + 0.2 * k as f64, 0.3 + 0.05 * k as f64);
            imgs.push(w.apply(z));
        }
        let mut min_d = f64::INFINITY;
        for i in 0..imgs.len() {
            for j in i + 1..imgs.len() {
                min_d = min_d.min(chordal(imgs[i], imgs[j]));
            }
        }
        assert!(min_d > 1e-9, "welding collapsed distinct points: {min_d}");
    }

    #[test]
    fn rejects_bad_involution() {
        assert!(matches!(
            weld(&[0.0, 1.0], &[0, 1], &[]),
            Err(WeldError::BadPairing { .. })
        ));
        assert!(matches!(
            weld(&[0.0, 1.0, 0.5, 2.0], &[1, 0, 3, 2], &[]),
            Err(WeldError::MarksNotSorted { .. })
        ));
    }
}
