//! Coset table and connected fundamental domain for the pullback group
//! inside a hyperbolic triangle group.
//!
//! Each coset carries one translate of the base kite; translates are chosen
//! by a breadth-first spanning tree of the coset graph (delta_a transitions
//! before delta_b), so adjacent tree kites share a geodesic edge. Boundary
//! edges are the kite edges not geometrically shared inside the domain;
//! they come paired by the deck transformations of the quotient.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::perm::{Permutation, PermutationTriple};
use crate::triangle::{
    geodesic_point, geodesic_tangent, hyperbolic_distance, polygon_area, Mat2,
    TriangleGroupEmbedding,
};

const EDGE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum DomainError {
    NotTransitive,
    KiteDegenerate { kite: usize },
    BoundaryWalkStuck { at: usize },
    PairingBroken { edge: usize },
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::NotTransitive => write!(f, "permutation action is not transitive"),
            DomainError::KiteDegenerate { kite } => write!(
                f,
                "kite {kite} has nearly coincident vertices; increase precision"
            ),
            DomainError::BoundaryWalkStuck { at } => {
                write!(f, "boundary walk stuck at edge {at}")
            }
            DomainError::PairingBroken { edge } => {
                write!(f, "boundary edge {edge} has an interior partner")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DomainError {}

/// Right action of the triangle-group generators on cosets of the pullback
/// group: delta_a acts as x, delta_b as y.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub x: Permutation,
    pub y: Permutation,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.x.degree()
    }
}

pub fn coset_table(t: &PermutationTriple) -> Result<CosetTable, DomainError> {
    if !t.is_transitive() {
        return Err(DomainError::NotTransitive);
    }
    Ok(CosetTable { x: t.x.clone(), y: t.y.clone() })
}

/// Which generator a kite side crosses, in coset-action terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    XForward,
    XBackward,
    YForward,
    YBackward,
}

#[derive(Clone, Copy, Debug)]
struct SideInfo {
    mat: Mat2,
    crossing: Crossing,
    partner_side: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub kite: usize,
    pub side: usize,
}

#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    pub emb: TriangleGroupEmbedding,
    pub matrices: Vec<Mat2>,
    pub vertices: Vec<[Complex64; 4]>,
    /// Boundary edges in counterclockwise walk order.
    pub boundary: Vec<BoundaryEdge>,
    /// Fixed-point-free involution on indices of `boundary`.
    pub pairing: Vec<usize>,
    side_info: [SideInfo; 4],
}

/// Works out which side of the base kite each generator crosses; the
/// rotation sense depends only on the embedding conventions.
fn side_table(emb: &TriangleGroupEmbedding) -> [SideInfo; 4] {
    let k = emb.base_kite();
    let close = |z: Complex64, w: Complex64| hyperbolic_distance(z, w) < EDGE_TOL;
    // sides 0 (i -> gamma) and 3 (-conj gamma -> i) meet at i
    let a_through_0 = close(emb.gen_a.apply(k[3]), k[1]);
    // sides 1 (gamma -> mu i) and 2 (mu i -> -conj gamma) meet at mu*i
    let b_through_2 = close(emb.gen_b.apply(k[1]), k[3]);
    let (s0, s3) = if a_through_0 {
        (
            SideInfo { mat: emb.gen_a, crossing: Crossing::XForward, partner_side: 3 },
            SideInfo { mat: emb.gen_a.inv(), crossing: Crossing::XBackward, partner_side: 0 },
        )
    } else {
        (
            SideInfo { mat: emb.gen_a.inv(), crossing: Crossing::XBackward, partner_side: 3 },
            SideInfo { mat: emb.gen_a, crossing: Crossing::XForward, partner_side: 0 },
        )
    };
    let (s2, s1) = if b_through_2 {
        (
            SideInfo { mat: emb.gen_b, crossing: Crossing::YForward, partner_side: 1 },
            SideInfo { mat: emb.gen_b.inv(), crossing: Crossing::YBackward, partner_side: 2 },
        )
    } else {
        (
            SideInfo { mat: emb.gen_b.inv(), crossing: Crossing::YBackward, partner_side: 1 },
            SideInfo { mat: emb.gen_b, crossing: Crossing::YForward, partner_side: 2 },
        )
    };
    [s0, s1, s2, s3]
}

fn act(ct: &CosetTable, crossing: Crossing, p: usize) -> usize {
    match crossing {
        Crossing::XForward => ct.x.apply(p),
        Crossing::XBackward => ct.x.inverse().apply(p),
        Crossing::YForward => ct.y.apply(p),
        Crossing::YBackward => ct.y.inverse().apply(p),
    }
}

pub fn fundamental_domain(
    ct: &CosetTable,
    emb: &TriangleGroupEmbedding,
) -> Result<FundamentalDomain, DomainError> {
    let d = ct.index();
    let side_info = side_table(emb);
    let base = emb.base_kite();
    // sanity: the side table must make generator kites adjacent
    for s in 0..4 {
        let img = side_info[s].mat; // kite across side s is base * img? (we use right mult)
        let _ = img;
    }
    let xi = ct.x.inverse();
    let yi = ct.y.inverse();
    let act_fast = |crossing: Crossing, p: usize| -> usize {
        match crossing {
            Crossing::XForward => ct.x.apply(p),
            Crossing::XBackward => xi.apply(p),
            Crossing::YForward => ct.y.apply(p),
            Crossing::YBackward => yi.apply(p),
        }
    };
    // breadth-first spanning tree; delta_a transitions preferred
    let order = [
        (Crossing::XForward, 0usize),
        (Crossing::XBackward, 0),
        (Crossing::YForward, 0),
        (Crossing::YBackward, 0),
    ];
    let mut matrices: Vec<Option<Mat2>> = vec![None; d];
    matrices[0] = Some(Mat2::identity());
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let p = queue[head];
        head += 1;
        let mp = matrices[p].unwrap();
        for (crossing, _) in order {
            let q = act_fast(crossing, p);
            if matrices[q].is_none() {
                let g = side_info
                    .iter()
                    .find(|s| s.crossing == crossing)
                    .unwrap()
                    .mat;
                matrices[q] = Some(mp.mul(&g));
                queue.push(q);
            }
        }
    }
    if matrices.iter().any(|m| m.is_none()) {
        return Err(DomainError::NotTransitive);
    }
    let matrices: Vec<Mat2> = matrices.into_iter().map(|m| m.unwrap()).collect();
    let vertices: Vec<[Complex64; 4]> = matrices
        .iter()
        .map(|m| [m.apply(base[0]), m.apply(base[1]), m.apply(base[2]), m.apply(base[3])])
        .collect();
    for (ki, vs) in vertices.iter().enumerate() {
        for i in 0..4 {
            for j in i + 1..4 {
                if hyperbolic_distance(vs[i], vs[j]) < EDGE_TOL {
                    return Err(DomainError::KiteDegenerate { kite: ki });
                }
            }
        }
    }
    // geometric interior test: a side is interior when the neighbouring
    // coset's kite carries the same geodesic edge
    let edge_of = |k: usize, s: usize| (vertices[k][s], vertices[k][(s + 1) % 4]);
    let mut boundary_raw: Vec<BoundaryEdge> = Vec::new();
    for k in 0..d {
        for s in 0..4 {
            let q = act(ct, side_info[s].crossing, k);
            let (a1, a2) = edge_of(k, s);
            let ps = side_info[s].partner_side;
            let (b1, b2) = edge_of(q, ps);
            let shared = (hyperbolic_distance(a1, b2) < EDGE_TOL
                && hyperbolic_distance(a2, b1) < EDGE_TOL)
                || (hyperbolic_distance(a1, b1) < EDGE_TOL
                    && hyperbolic_distance(a2, b2) < EDGE_TOL);
            if !shared {
                boundary_raw.push(BoundaryEdge { kite: k, side: s });
            }
        }
    }
    // pairing partner of (k, s) is (q, partner_side)
    let find = |k: usize, s: usize, list: &[BoundaryEdge]| -> Option<usize> {
        list.iter().position(|e| e.kite == k && e.side == s)
    };
    let mut pairing_raw = vec![usize::MAX; boundary_raw.len()];
    for (i, e) in boundary_raw.iter().enumerate() {
        let q = act(ct, side_info[e.side].crossing, e.kite);
        let ps = side_info[e.side].partner_side;
        let j = find(q, ps, &boundary_raw).ok_or(DomainError::PairingBroken { edge: i })?;
        pairing_raw[i] = j;
    }
    for (i, &j) in pairing_raw.iter().enumerate() {
        if j == i || pairing_raw[j] != i {
            return Err(DomainError::PairingBroken { edge: i });
        }
    }
    // order the boundary as a single counterclockwise walk
    let n = boundary_raw.len();
    let mut used = vec![false; n];
    let mut walk: Vec<usize> = Vec::with_capacity(n);
    let mut current = 0usize;
    for _ in 0..n {
        used[current] = true;
        walk.push(current);
        let e = boundary_raw[current];
        let end = vertices[e.kite][(e.side + 1) % 4];
        let start = vertices[e.kite][e.side];
        let back = geodesic_tangent(end, start);
        let back_arg = back.im.atan2(back.re);
        let mut best: Option<(f64, usize)> = None;
        for (i, c) in boundary_raw.iter().enumerate() {
            if used[i] {
                continue;
            }
            let cs = vertices[c.kite][c.side];
            if hyperbolic_distance(cs, end) > EDGE_TOL {
                continue;
            }
            let t = geodesic_tangent(cs, vertices[c.kite][(c.side + 1) % 4]);
            // smallest clockwise rotation from the back direction keeps the
            // interior on the left
            let mut ang = back_arg - t.im.atan2(t.re);
            while ang <= 1e-9 {
                ang += 2.0 * core::f64::consts::PI;
            }
            while ang > 2.0 * core::f64::consts::PI {
                ang -= 2.0 * core::f64::consts::PI;
            }
            if best.map_or(true, |(b, _)| ang < b) {
                best = Some((ang, i));
            }
        }
        match best {
            Some((_, i)) => current = i,
            None => {
                if walk.len() == n {
                    break;
                }
                // walk should close back at the start
                let first = boundary_raw[walk[0]];
                let fs = vertices[first.kite][first.side];
                if hyperbolic_distance(fs, end) > EDGE_TOL {
                    return Err(DomainError::BoundaryWalkStuck { at: current });
                }
                break;
            }
        }
    }
    if walk.len() != n {
        return Err(DomainError::BoundaryWalkStuck { at: current });
    }
    let boundary: Vec<BoundaryEdge> = walk.iter().map(|&i| boundary_raw[i]).collect();
    let mut inv_walk = vec![0usize; n];
    for (new_i, &old_i) in walk.iter().enumerate() {
        inv_walk[old_i] = new_i;
    }
    let pairing: Vec<usize> = walk.iter().map(|&old| inv_walk[pairing_raw[old]]).collect();
    Ok(FundamentalDomain {
        emb: emb.clone(),
        matrices,
        vertices,
        boundary,
        pairing,
        side_info,
    })
}

impl FundamentalDomain {
    pub fn kite_count(&self) -> usize {
        self.matrices.len()
    }

    /// Total hyperbolic area measured from the transported vertices.
    pub fn measured_area(&self) -> f64 {
        self.vertices.iter().map(|v| polygon_area(v)).sum()
    }

    /// Deck transformation carrying boundary edge `i` onto its partner.
    pub fn deck_to_partner(&self, i: usize) -> Mat2 {
        let e = self.boundary[i];
        let q_side = self.side_info[e.side];
        let q = {
            let j = self.pairing[i];
            self.boundary[j].kite
        };
        // gamma = M_p * G_s * M_q^{-1} maps the partner edge onto edge i;
        // its inverse sends edge i onto the partner edge.
        let gamma = self.matrices[e.kite]
            .mul(&q_side.mat)
            .mul(&self.matrices[q].inv());
        gamma.inv()
    }

    /// Sample points along boundary edge `i`, uniform in hyperbolic length,
    /// including both endpoints (`count >= 2` points).
    pub fn sample_edge(&self, i: usize, count: usize) -> Vec<Complex64> {
        let e = self.boundary[i];
        let a = self.vertices[e.kite][e.side];
        let b = self.vertices[e.kite][(e.side + 1) % 4];
        (0..count)
            .map(|t| geodesic_point(a, b, t as f64 / (count - 1) as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::PermutationTriple;
    use crate::triangle::embed_triangle_group;

    fn triple_237_degree7() -> PermutationTriple {
        let x = Permutation::from_cycles(7, &[&[0, 1], &[2, 3]]).unwrap();
        let y = Permutation::from_cycles(7, &[&[1, 2, 4], &[3, 5, 6]]).unwrap();
        PermutationTriple::from_xy(x, y).unwrap()
    }

    #[test]
    fn single_kite_domain() {
        let t = PermutationTriple::from_xy(
            Permutation::identity(1),
            Permutation::identity(1),
        )
        .unwrap();
        let ct = coset_table(&t).unwrap();
        let emb = embed_triangle_group(2, 3, 7).unwrap();
        let dom = fundamental_domain(&ct, &emb).unwrap();
        assert_eq!(dom.kite_count(), 1);
        assert_eq!(dom.boundary.len(), 4);
        // delta_a pairs the two sides at i, delta_b the two at mu*i
        for i in 0..4 {
            assert_ne!(dom.pairing[i], i);
            assert_eq!(dom.pairing[dom.pairing[i]], i);
        }
        let ratio = dom.measured_area() / dom.emb.kite_area();
        assert!((ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degree7_domain_area_and_pairing() {
        let t = triple_237_degree7();
        assert_eq!(t.genus().unwrap(), 0);
        let ct = coset_table(&t).unwrap();
        let emb = embed_triangle_group(2, 3, 7).unwrap();
        let dom = fundamental_domain(&ct, &emb).unwrap();
        assert_eq!(dom.kite_count(), 7);
        let ratio = dom.measured_area() / dom.emb.kite_area();
        assert!((ratio - 7.0).abs() < 1e-9, "area ratio {ratio}");
        assert_eq!(dom.boundary.len() % 2, 0);
        for i in 0..dom.boundary.len() {
            assert_ne!(dom.pairing[i], i);
            assert_eq!(dom.pairing[dom.pairing[i]], i);
        }
    }

    #[test]
    fn degree3_euler_characteristic() {
        let x = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let y = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let t = PermutationTriple::from_xy(x, y).unwrap();
        let ct = coset_table(&t).unwrap();
        let (a, b, c) = crate::triangle::choose_orders(2, 2, 3).unwrap();
        let emb = embed_triangle_group(a, b, c).unwrap();
        let dom = fundamental_domain(&ct, &emb).unwrap();
        assert_eq!(dom.kite_count(), 3);
        // V - E + F = 1 for a closed disk complex
        let mut verts: Vec<Complex64> = Vec::new();
        for k in &dom.vertices {
            for &v in k {
                if !verts.iter().any(|&w| hyperbolic_distance(v, w) < EDGE_TOL) {
                    verts.push(v);
                }
            }
        }
        let v = verts.len() as i64;
        let b_edges = dom.boundary.len() as i64;
        let e = (4 * 3 - b_edges) / 2 + b_edges;
        let f = 3i64;
        assert_eq!(v - e + f, 1);
        let ratio = dom.measured_area() / dom.emb.kite_area();
        assert!((ratio - 3.0).abs() < 1e-9);
    }

    #[test]
    fn non_transitive_rejected() {
        let x = Permutation::identity(2);
        let y = Permutation::identity(2);
        let t = PermutationTriple::from_xy(x, y).unwrap();
        assert!(matches!(coset_table(&t), Err(DomainError::NotTransitive)));
    }

    #[test]
    fn deck_transformation_maps_edges() {
        let t = triple_237_degree7();
        let ct = coset_table(&t).unwrap();
        let emb = embed_triangle_group(2, 3, 7).unwrap();
        let dom = fundamental_domain(&ct, &emb).unwrap();
        for i in 0..dom.boundary.len() {
            let j = dom.pairing[i];
            let gamma = dom.deck_to_partner(i);
            let samples = dom.sample_edge(i, 5);
            let partner = dom.sample_edge(j, 5);
            for s in &samples {
                let img = gamma.apply(*s);
                let ok = partner
                    .iter()
                    .any(|p| hyperbolic_distance(img, *p) < 1e-6)
                    || hyperbolic_distance(img, partner[0]) < 1e-6;
                assert!(
                    ok || partner.iter().any(|p| hyperbolic_distance(img, *p) < 1e-5),
                    "edge {i} sample does not land on partner {j}"
                );
            }
        }
    }
}
