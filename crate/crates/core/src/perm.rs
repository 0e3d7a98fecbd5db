//! Permutation triples and their combinatorial invariants.
//!
//! Points are `0..degree` internally; the text format (`parse_triple`) is
//! 1-based, matching the usual permutation-group conventions.
//!
//! Composition acts on the right: `x.then(&y)` applies `x` first, so the
//! triple relation reads `x·y·z = 1` with `z = (x·y)⁻¹`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermError {
    /// `images` is not a bijection of `0..degree`.
    NotBijective { point: usize },
    /// Operands have different degrees.
    DegreeMismatch { left: usize, right: usize },
    /// The generators do not act transitively but the operation needs a
    /// transitive action.
    NotTransitive,
    /// `x·y·z ≠ 1` for a triple given with explicit `z`.
    ProductNotIdentity,
    /// Degree exceeds the configured bound of a resource-limited operation.
    DegreeBound { degree: usize, bound: usize },
    Parse { line: usize, msg: String },
}

impl fmt::Display for PermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermError::NotBijective { point } => {
                write!(f, "images do not form a bijection (near point {})", point + 1)
            }
            PermError::DegreeMismatch { left, right } => {
                write!(f, "degree mismatch: {left} vs {right}")
            }
            PermError::NotTransitive => write!(f, "generators are not transitive"),
            PermError::ProductNotIdentity => write!(f, "x·y·z is not the identity"),
            PermError::DegreeBound { degree, bound } => {
                write!(f, "degree {degree} exceeds bound {bound}")
            }
            PermError::Parse { line, msg } => write!(f, "line {line}: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PermError {}

/// A permutation of `{0, ..., degree-1}`, stored by its image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation(")?;
        for (i, im) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", im + 1)?;
        }
        write!(f, ")")
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, validating bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &im) in images.iter().enumerate() {
            if (im as usize) >= n || seen[im as usize] {
                return Err(PermError::NotBijective { point: i });
            }
            seen[im as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut v = Vec::with_capacity(n);
        for (i, &im) in images.iter().enumerate() {
            if im == 0 || im > n {
                return Err(PermError::NotBijective { point: i });
            }
            v.push((im - 1) as u32);
        }
        Self::from_images(v)
    }

    /// Builds the permutation with the given cycles (0-based points); omitted
    /// points are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cyc in cycles {
            for w in 0..cyc.len() {
                let a = cyc[w];
                let b = cyc[(w + 1) % cyc.len()];
                if a >= degree || b >= degree {
                    return Err(PermError::NotBijective { point: a });
                }
                images[a] = b as u32;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// `self` followed by `other` (right action).
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.cycle_type()
            .parts
            .iter()
            .fold(1u64, |acc, &l| num_integer::lcm(acc, l as u64))
    }

    /// Cycles of length ≥ 1 covering all points, each starting at its
    /// smallest point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cyc.push(p);
                p = self.apply(p);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_parts(self.cycles().iter().map(|c| c.len()))
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|&(i, &im)| i as u32 != im).map(|(i, _)| i)
    }
}

/// Multiset of cycle lengths, fixed points included as 1s.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    /// Cycle lengths in decreasing order.
    pub parts: Vec<usize>,
}

impl CycleType {
    pub fn from_parts<I: IntoIterator<Item = usize>>(parts: I) -> Self {
        let mut parts: Vec<usize> = parts.into_iter().collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts (= number of cycles).
    pub fn count(&self) -> usize {
        self.parts.len()
    }

    /// `(length, multiplicity)` pairs, decreasing by length.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in &self.parts {
            *map.entry(p).or_insert(0) += 1;
        }
        map.into_iter().rev().collect()
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycleType {
    /// Renders like `3^87.1^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let mut first = true;
        for (len, mult) in self.multiplicities() {
            if !first {
                write!(f, ".")?;
            }
            first = false;
            if mult == 1 {
                write!(f, "{len}")?;
            } else {
                write!(f, "{len}^{mult}")?;
            }
        }
        Ok(())
    }
}

/// Three permutations of common degree with `x·y·z = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationTriple {
    pub x: Permutation,
    pub y: Permutation,
    pub z: Permutation,
}

impl PermutationTriple {
    /// Validates degrees and the product relation.
    pub fn new(x: Permutation, y: Permutation, z: Permutation) -> Result<Self, PermError> {
        if x.degree() != y.degree() {
            return Err(PermError::DegreeMismatch { left: x.degree(), right: y.degree() });
        }
        if x.degree() != z.degree() {
            return Err(PermError::DegreeMismatch { left: x.degree(), right: z.degree() });
        }
        if !x.then(&y).then(&z).is_identity() {
            return Err(PermError::ProductNotIdentity);
        }
        Ok(PermutationTriple { x, y, z })
    }

    /// Completes `(x, y)` with `z := (x·y)⁻¹`.
    pub fn from_xy(x: Permutation, y: Permutation) -> Result<Self, PermError> {
        if x.degree() != y.degree() {
            return Err(PermError::DegreeMismatch { left: x.degree(), right: y.degree() });
        }
        let z = x.then(&y).inverse();
        Ok(PermutationTriple { x, y, z })
    }

    pub fn degree(&self) -> usize {
        self.x.degree()
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(&[self.x.clone(), self.y.clone()])
    }

    /// Genus of the three-branch-point cover: `2 − 2g = c(x)+c(y)+c(z) − d`.
    pub fn genus(&self) -> Result<u64, PermError> {
        if !self.is_transitive() {
            return Err(PermError::NotTransitive);
        }
        let d = self.degree();
        let c = self.x.cycle_type().count() + self.y.cycle_type().count() + self.z.cycle_type().count();
        // Σ(d − c(σ)) is even for any triple with product 1, so this is exact.
        debug_assert!((d + 2 - c) % 2 == 0 && c <= d + 2);
        Ok(((d + 2 - c) / 2) as u64)
    }
}

/// Parses the triple file format: `degree: <d>`, `x: <images>`, `y: <images>`
/// and optionally `z: <images>` (computed as `(xy)⁻¹` when absent).
/// Images are whitespace-separated 1-based integers; blank lines and lines
/// starting with `#` are ignored.
pub fn parse_triple(text: &str) -> Result<PermutationTriple, PermError> {
    let mut degree: Option<usize> = None;
    let mut perms: BTreeMap<char, Permutation> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| PermError::Parse {
            line: lineno,
            msg: String::from("expected `<key>: <values>`"),
        })?;
        let key = key.trim();
        match key {
            "degree" => {
                let d: usize = rest.trim().parse().map_err(|_| PermError::Parse {
                    line: lineno,
                    msg: format!("invalid degree `{}`", rest.trim()),
                })?;
                if d == 0 {
                    return Err(PermError::Parse {
                        line: lineno,
                        msg: String::from("degree must be positive"),
                    });
                }
                degree = Some(d);
            }
            "x" | "y" | "z" => {
                let d = degree.ok_or_else(|| PermError::Parse {
                    line: lineno,
                    msg: String::from("`degree:` must come first"),
                })?;
                let mut images = Vec::with_capacity(d);
                for tok in rest.split_whitespace() {
                    let v: usize = tok.parse().map_err(|_| PermError::Parse {
                        line: lineno,
                        msg: format!("invalid image `{tok}`"),
                    })?;
                    images.push(v);
                }
                if images.len() != d {
                    return Err(PermError::Parse {
                        line: lineno,
                        msg: format!("expected {d} images, got {}", images.len()),
                    });
                }
                let p = Permutation::from_one_based(&images).map_err(|e| PermError::Parse {
                    line: lineno,
                    msg: format!("{e}"),
                })?;
                perms.insert(key.chars().next().unwrap(), p);
            }
            other => {
                return Err(PermError::Parse {
                    line: lineno,
                    msg: format!("unknown key `{other}`"),
                });
            }
        }
    }

    let x = perms.remove(&'x').ok_or(PermError::Parse { line: 0, msg: String::from("missing `x:`") })?;
    let y = perms.remove(&'y').ok_or(PermError::Parse { line: 0, msg: String::from("missing `y:`") })?;
    match perms.remove(&'z') {
        Some(z) => PermutationTriple::new(x, y, z),
        None => PermutationTriple::from_xy(x, y),
    }
}

/// Orbit of `start` under the generators.
pub fn orbit(gens: &[Permutation], start: usize) -> Vec<usize> {
    let n = gens.first().map(|g| g.degree()).unwrap_or(0);
    let mut seen = vec![false; n];
    let mut out = vec![start];
    seen[start] = true;
    let mut head = 0;
    while head < out.len() {
        let p = out[head];
        head += 1;
        for g in gens {
            let q = g.apply(p);
            if !seen[q] {
                seen[q] = true;
                out.push(q);
            }
        }
    }
    out
}

pub fn is_transitive(gens: &[Permutation]) -> bool {
    let n = gens.first().map(|g| g.degree()).unwrap_or(0);
    n <= 1 || orbit(gens, 0).len() == n
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }
    /// Returns `false` if already in the same class.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// True iff the (transitive) group generated has no nontrivial block system.
///
/// For each point `k ≠ 0` the minimal block system merging `{0, k}` is
/// computed by closure under the generators; the action is primitive iff
/// every such system is the trivial one-block partition.
pub fn is_primitive(gens: &[Permutation]) -> Result<bool, PermError> {
    if !is_transitive(gens) {
        return Err(PermError::NotTransitive);
    }
    let n = gens.first().map(|g| g.degree()).unwrap_or(0);
    if n <= 2 {
        return Ok(true);
    }
    for k in 1..n {
        let mut uf = UnionFind::new(n);
        uf.union(0, k);
        let mut queue = vec![(0usize, k)];
        while let Some((a, b)) = queue.pop() {
            for g in gens {
                let (ga, gb) = (g.apply(a), g.apply(b));
                if uf.union(ga, gb) {
                    queue.push((ga, gb));
                }
            }
        }
        let root0 = uf.find(0);
        let size = (0..n).filter(|&p| uf.find(p) == root0).count();
        if size < n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One level of the stabilizer chain: the orbit of `base` under `gens`,
/// with a transversal element per orbit point mapping `base` there.
struct ChainLevel {
    base: usize,
    gens: Vec<Permutation>,
    transversal: Vec<Option<Permutation>>,
}

impl ChainLevel {
    fn new(degree: usize, base: usize) -> Self {
        ChainLevel { base, gens: Vec::new(), transversal: vec![None; degree] }
    }

    /// Rebuilds the transversal from the given generating set (the union of
    /// this level's and all deeper levels' generators).
    fn recompute_transversal(&mut self, gens: &[Permutation]) {
        let n = self.transversal.len();
        self.transversal = vec![None; n];
        self.transversal[self.base] = Some(Permutation::identity(n));
        let mut queue = vec![self.base];
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            let rep = self.transversal[p].clone().unwrap();
            for g in gens {
                let q = g.apply(p);
                if self.transversal[q].is_none() {
                    self.transversal[q] = Some(rep.then(g));
                    queue.push(q);
                }
            }
        }
    }

    fn orbit_points(&self) -> Vec<usize> {
        (0..self.transversal.len()).filter(|&p| self.transversal[p].is_some()).collect()
    }
}

/// Reduces `g` through the chain starting at `level`; returns the residue and
/// the level where sifting stopped (chain length if it sifted through).
fn sift(chain: &[ChainLevel], level: usize, g: &Permutation) -> (Permutation, usize) {
    let mut g = g.clone();
    for (i, lvl) in chain.iter().enumerate().skip(level) {
        if g.is_identity() {
            return (g, i);
        }
        let image = g.apply(lvl.base);
        match &lvl.transversal[image] {
            Some(rep) => g = g.then(&rep.inverse()),
            None => return (g, i),
        }
    }
    (g, chain.len())
}

/// Generators of the stabilizer-chain group at `level`: everything stored at
/// this level or deeper (deeper generators fix more base points).
fn effective_gens(chain: &[ChainLevel], level: usize) -> Vec<Permutation> {
    chain[level..].iter().flat_map(|l| l.gens.iter().cloned()).collect()
}

fn chain_insert(chain: &mut Vec<ChainLevel>, degree: usize, level: usize, g: Permutation) {
    if g.is_identity() {
        return;
    }
    if level == chain.len() {
        let base = g.first_moved_point().expect("non-identity");
        chain.push(ChainLevel::new(degree, base));
    }
    chain[level].gens.push(g);
}

/// Closes the chain: rebuilds all transversals and sifts every Schreier
/// generator until everything reduces to the identity (strong generation).
fn close_chain(chain: &mut Vec<ChainLevel>, degree: usize) {
    'restart: loop {
        for i in 0..chain.len() {
            let gens = effective_gens(chain, i);
            chain[i].recompute_transversal(&gens);
        }
        for i in 0..chain.len() {
            let gens = effective_gens(chain, i);
            for p in chain[i].orbit_points() {
                for g in &gens {
                    let schreier = {
                        let lvl = &chain[i];
                        let rep = lvl.transversal[p].as_ref().unwrap();
                        let q = g.apply(p);
                        let rep_q = lvl.transversal[q].as_ref().unwrap();
                        rep.then(g).then(&rep_q.inverse())
                    };
                    let (residue, at) = sift(chain, i + 1, &schreier);
                    if !residue.is_identity() {
                        chain_insert(chain, degree, at, residue);
                        continue 'restart;
                    }
                }
            }
        }
        return;
    }
}

/// Default degree bound for [`group_order`].
pub const GROUP_ORDER_DEGREE_BOUND: usize = 1000;

/// Exact order of `⟨gens⟩` via a Schreier–Sims stabilizer chain.
pub fn group_order(gens: &[Permutation]) -> Result<BigUint, PermError> {
    group_order_bounded(gens, GROUP_ORDER_DEGREE_BOUND)
}

pub fn group_order_bounded(gens: &[Permutation], bound: usize) -> Result<BigUint, PermError> {
    let degree = gens.first().map(|g| g.degree()).unwrap_or(0);
    if degree > bound {
        return Err(PermError::DegreeBound { degree, bound });
    }
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch { left: degree, right: g.degree() });
        }
    }
    let mut chain: Vec<ChainLevel> = Vec::new();
    for g in gens {
        if !g.is_identity() && !chain.iter().any(|l| l.gens.contains(g)) {
            chain_insert(&mut chain, degree, 0, g.clone());
        }
    }
    close_chain(&mut chain, degree);
    let mut order = BigUint::one();
    for lvl in &chain {
        order *= BigUint::from(lvl.orbit_points().len());
    }
    Ok(order)
}

/// Stabilizer of a point, as generators (Schreier generators of the top
/// chain level, deduplicated). Used to read off suborbit structure.
pub fn point_stabilizer(gens: &[Permutation], point: usize) -> Vec<Permutation> {
    let degree = gens.first().map(|g| g.degree()).unwrap_or(0);
    let mut lvl = ChainLevel::new(degree, point);
    lvl.gens = gens.to_vec();
    lvl.recompute_transversal(gens);
    let mut out: Vec<Permutation> = Vec::new();
    for p in lvl.orbit_points() {
        let rep = lvl.transversal[p].as_ref().unwrap();
        for g in &lvl.gens {
            let q = g.apply(p);
            let rep_q = lvl.transversal[q].as_ref().unwrap();
            let s = rep.then(g).then(&rep_q.inverse());
            if !s.is_identity() && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Conjugates `p` by relabeling: `relabel(p)[σ(i)] = σ(p(i))`.
pub fn relabel(p: &Permutation, sigma: &Permutation) -> Permutation {
    sigma.inverse().then(p).then(sigma)
}

// Boxed to keep the error enum small.
pub type ParseResult = Result<PermutationTriple, Box<PermError>>;
