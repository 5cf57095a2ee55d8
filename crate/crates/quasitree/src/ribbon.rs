//! Ribbon graphs as signed rotation systems.
//!
//! A ribbon graph is stored combinatorially: each vertex disc carries a cyclic
//! rotation of half-edge identifiers, and each edge joins two half-edges and
//! carries a sign. Sign `Minus` means the edge ribbon has a half-twist, so a
//! loop with sign `Minus` together with its vertex forms a Möbius band.
//!
//! All operations are pure: they return new graphs and never mutate inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::trace::{self, BoundaryProfile, BoundaryTracer};

/// Edge label. Bouquet rotations use labels `1..=n`; general graphs may use
/// any positive integers, kept sorted to fix matrix row order downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeLabel(pub u32);

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge sign: `Minus` marks a half-twisted ribbon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_minus(self) -> bool {
        matches!(self, Sign::Minus)
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RibbonError {
    #[error("invalid token {0:?}: tokens must be nonzero integers")]
    InvalidToken(String),
    #[error("token 0 is not a valid edge label")]
    ZeroToken,
    #[error("label {0} appears {1} times; every label must appear exactly twice")]
    LabelCount(u32, usize),
    #[error("labels must be 1..=n with no gaps; label {0} is missing")]
    LabelGap(u32),
    #[error("unknown edge label {0}")]
    UnknownLabel(u32),
    #[error("duplicate edge label {0}")]
    DuplicateLabel(u32),
    #[error("half-edge {0} must appear exactly once across vertex rotations")]
    BadHalfEdge(usize),
    #[error("edge {0} must join two distinct half-edges")]
    DegenerateEdge(u32),
    #[error("graph has {0} vertices; a bouquet has exactly one")]
    NotABouquet(usize),
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
    #[error("gap position {0} out of range for a rotation of length {1}")]
    BadGap(usize, usize),
    #[error("elements a and b must be distinct")]
    EqualElements,
    #[error("edges {0} and {1} have no neighbouring ends in the rotation")]
    NoNeighbouringEnds(u32, u32),
    #[error("malformed graph text: {0}")]
    MalformedText(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: EdgeLabel,
    /// The two half-edges of this ribbon, in construction order.
    pub ends: (usize, usize),
    pub sign: Sign,
}

/// A ribbon graph: vertex rotations plus a signed edge table.
///
/// Invariants maintained by every constructor and operation:
/// * half-edge ids are exactly `0..2·|E|`, each appearing once in a rotation;
/// * edges are sorted by label and labels are unique;
/// * each rotation is stored starting from its smallest half-edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    vertices: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl RibbonGraph {
    pub fn new(vertices: Vec<Vec<usize>>, mut edges: Vec<Edge>) -> Result<Self, RibbonError> {
        edges.sort_by_key(|e| e.label);
        for pair in edges.windows(2) {
            if pair[0].label == pair[1].label {
                return Err(RibbonError::DuplicateLabel(pair[0].label.0));
            }
        }
        let n_hedges = 2 * edges.len();
        let mut seen = vec![0usize; n_hedges];
        for rot in &vertices {
            for &h in rot {
                if h >= n_hedges {
                    return Err(RibbonError::BadHalfEdge(h));
                }
                seen[h] += 1;
            }
        }
        if let Some(h) = seen.iter().position(|&c| c != 1) {
            return Err(RibbonError::BadHalfEdge(h));
        }
        let mut used = vec![false; n_hedges];
        for e in &edges {
            let (a, b) = e.ends;
            if a == b || a >= n_hedges || b >= n_hedges || used[a] || used[b] {
                return Err(RibbonError::DegenerateEdge(e.label.0));
            }
            used[a] = true;
            used[b] = true;
        }
        let mut g = RibbonGraph { vertices, edges };
        g.canonicalize_rotations();
        Ok(g)
    }

    /// Graph with `k` bare vertices and no edges.
    pub fn bare(k: usize) -> Self {
        RibbonGraph {
            vertices: vec![Vec::new(); k],
            edges: Vec::new(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Ordered label universe; fixes bitmask bit order and matrix row order.
    pub fn labels(&self) -> Vec<EdgeLabel> {
        self.edges.iter().map(|e| e.label).collect()
    }

    pub fn label_index(&self, label: EdgeLabel) -> Result<usize, RibbonError> {
        self.edges
            .iter()
            .position(|e| e.label == label)
            .ok_or(RibbonError::UnknownLabel(label.0))
    }

    pub fn edge(&self, label: EdgeLabel) -> Result<&Edge, RibbonError> {
        self.label_index(label).map(|i| &self.edges[i])
    }

    /// Bitmask over the label universe for a set of labels.
    pub fn mask_of(&self, subset: &[EdgeLabel]) -> Result<u64, RibbonError> {
        let mut mask = 0u64;
        for &l in subset {
            mask |= 1 << self.label_index(l)?;
        }
        Ok(mask)
    }

    /// Labels selected by a bitmask, in label order.
    pub fn labels_of_mask(&self, mask: u64) -> Vec<EdgeLabel> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.label)
            .collect()
    }

    /// Vertex index holding a given half-edge.
    pub(crate) fn vertex_of(&self, hedge: usize) -> usize {
        self.vertices
            .iter()
            .position(|rot| rot.contains(&hedge))
            .expect("half-edge in some rotation")
    }

    fn canonicalize_rotations(&mut self) {
        for rot in &mut self.vertices {
            if rot.len() > 1 {
                let min_pos = rot
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &h)| h)
                    .map(|(i, _)| i)
                    .unwrap();
                rot.rotate_left(min_pos);
            }
        }
    }

    /// Renumber half-edges to `0..2n` in order of first appearance.
    fn renumbered(&self) -> RibbonGraph {
        let mut map = BTreeMap::new();
        let mut next = 0usize;
        let vertices = self
            .vertices
            .iter()
            .map(|rot| {
                rot.iter()
                    .map(|&h| {
                        *map.entry(h).or_insert_with(|| {
                            let id = next;
                            next += 1;
                            id
                        })
                    })
                    .collect()
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                label: e.label,
                ends: (map[&e.ends.0], map[&e.ends.1]),
                sign: e.sign,
            })
            .collect();
        let mut g = RibbonGraph { vertices, edges };
        g.canonicalize_rotations();
        g
    }

    /// Number of boundary components of the spanning subgraph `(V, F)`.
    ///
    /// Each half-edge contributes two boundary-side points; corner arcs follow
    /// the vertex rotations, an absent ribbon leaves its attachment segment on
    /// the boundary, a present ribbon contributes its two sides (crossed when
    /// the sign is `Minus`). Components are the orbits of the resulting arcs.
    pub fn boundary_components(&self, subset: &[EdgeLabel]) -> Result<u32, RibbonError> {
        let mask = self.mask_of(subset)?;
        Ok(self.boundary_components_mask(mask))
    }

    pub fn boundary_components_mask(&self, mask: u64) -> u32 {
        let tracer = BoundaryTracer::new(self);
        let mut scratch = tracer.scratch();
        tracer.components(mask, &mut scratch)
    }

    /// Number of spanning quasi-trees: subsets `F` with exactly one boundary
    /// component, by exhaustive enumeration.
    pub fn quasi_tree_count(&self) -> u64 {
        trace::quasi_tree_count(self, 1)
    }

    pub fn quasi_tree_count_threaded(&self, threads: usize) -> u64 {
        trace::quasi_tree_count(self, threads)
    }

    /// Full map from edge subsets to boundary-component counts.
    pub fn boundary_profile(&self) -> BoundaryProfile {
        trace::boundary_profile(self, 1)
    }

    pub fn boundary_profile_threaded(&self, threads: usize) -> BoundaryProfile {
        trace::boundary_profile(self, threads)
    }

    /// `G \ e`: the edge and its two half-edges are removed, vertices kept.
    pub fn delete_edge(&self, label: EdgeLabel) -> Result<RibbonGraph, RibbonError> {
        let idx = self.label_index(label)?;
        let (h1, h2) = self.edges[idx].ends;
        let vertices = self
            .vertices
            .iter()
            .map(|rot| {
                rot.iter()
                    .copied()
                    .filter(|&h| h != h1 && h != h2)
                    .collect()
            })
            .collect();
        let mut edges = self.edges.clone();
        edges.remove(idx);
        Ok(RibbonGraph { vertices, edges }.renumbered())
    }

    /// Partial Petrial `G^τ(A)`: flips the sign of every edge in `A`.
    pub fn partial_petrial(&self, subset: &[EdgeLabel]) -> Result<RibbonGraph, RibbonError> {
        let mask = self.mask_of(subset)?;
        Ok(self.partial_petrial_mask(mask))
    }

    pub fn partial_petrial_mask(&self, mask: u64) -> RibbonGraph {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                e.sign = e.sign.flip();
            }
        }
        g
    }

    /// Partial dual `G^δ(A)`: the boundary components of `(V, A)` become the
    /// new vertex discs and every edge ribbon is kept.
    ///
    /// Each boundary walk alternates corner arcs with attachment arcs (the
    /// segment of an absent ribbon, or a side of a present one); the walk
    /// order of the attachment arcs is the new rotation, and the new sign of
    /// an edge compares the two walk directions against the ribbon's free
    /// sides.
    pub fn partial_dual(&self, subset: &[EdgeLabel]) -> Result<RibbonGraph, RibbonError> {
        let mask = self.mask_of(subset)?;
        Ok(self.partial_dual_mask(mask))
    }

    pub fn partial_dual_mask(&self, mask: u64) -> RibbonGraph {
        let tracer = BoundaryTracer::new(self);
        let walks = trace::boundary_walks(&tracer, mask);

        // New half-edge ids: edge i owns 2i and 2i+1. For an edge outside A
        // they stand for its old half-edges (first end, second end); for an
        // edge in A they stand for its two ribbon sides (the side containing
        // the first end's entry point, then the other).
        let new_hedge = |enter: usize, exit: usize| -> usize {
            let hedge = enter / 2;
            let i = self
                .edges
                .iter()
                .position(|e| e.ends.0 == hedge || e.ends.1 == hedge)
                .expect("point belongs to an edge");
            let e = &self.edges[i];
            if mask >> i & 1 == 0 {
                // segment arc of one half-edge
                if hedge == e.ends.0 {
                    2 * i
                } else {
                    2 * i + 1
                }
            } else {
                // side arc: side 0 is the one containing point a(first end)
                let a_first = 2 * e.ends.0;
                let side0_other = tracer.present_mate(a_first);
                if enter == a_first || exit == a_first || enter == side0_other || exit == side0_other
                {
                    2 * i
                } else {
                    2 * i + 1
                }
            }
        };

        let mut vertices: Vec<Vec<usize>> = Vec::new();
        // (enter, exit) of the walk traversal, indexed by new half-edge id
        let mut traversal: Vec<Option<(usize, usize)>> = vec![None; 2 * self.edges.len()];
        for walk in &walks {
            let mut rot = Vec::with_capacity(walk.len());
            for step in walk {
                let h = new_hedge(step.enter, step.exit);
                traversal[h] = Some((step.enter, step.exit));
                rot.push(h);
            }
            vertices.push(rot);
        }
        for rot in &self.vertices {
            if rot.is_empty() {
                vertices.push(Vec::new());
            }
        }

        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let (en1, ex1) = traversal[2 * i].expect("both arcs traversed");
                let (en2, ex2) = traversal[2 * i + 1].expect("both arcs traversed");
                // Free sides of the ribbon in the dual are the arcs of the
                // complementary matching.
                let free = |p: usize| {
                    if mask >> i & 1 == 1 {
                        tracer.absent_mate(p)
                    } else {
                        tracer.present_mate(p)
                    }
                };
                let sign = if free(en1) == ex2 {
                    debug_assert_eq!(free(ex1), en2);
                    Sign::Plus
                } else {
                    debug_assert_eq!(free(en1), en2);
                    debug_assert_eq!(free(ex1), ex2);
                    Sign::Minus
                };
                Edge {
                    label: e.label,
                    ends: (2 * i, 2 * i + 1),
                    sign,
                }
            })
            .collect();

        RibbonGraph { vertices, edges }.renumbered()
    }

    /// Contraction `G / e := G^δ(e) \ e`.
    pub fn contract_edge(&self, label: EdgeLabel) -> Result<RibbonGraph, RibbonError> {
        let dual = self.partial_dual(&[label])?;
        dual.delete_edge(label)
    }

    /// One-vertex join `P ∨ Q`: splice `Q`'s rotation at vertex `vq` into
    /// `P`'s rotation at vertex `vp`, at the chosen gaps between consecutive
    /// half-edges. `Q`'s labels are shifted above `P`'s largest label.
    pub fn one_vertex_join(
        &self,
        other: &RibbonGraph,
        vp: usize,
        vq: usize,
        gap_p: usize,
        gap_q: usize,
    ) -> Result<RibbonGraph, RibbonError> {
        if vp >= self.n_vertices() {
            return Err(RibbonError::BadVertex(vp));
        }
        if vq >= other.n_vertices() {
            return Err(RibbonError::BadVertex(vq));
        }
        let rot_p = &self.vertices[vp];
        let rot_q = &other.vertices[vq];
        if gap_p > rot_p.len() {
            return Err(RibbonError::BadGap(gap_p, rot_p.len()));
        }
        if gap_q > rot_q.len() {
            return Err(RibbonError::BadGap(gap_q, rot_q.len()));
        }

        let hedge_shift = 2 * self.n_edges();
        let label_shift = self.edges.last().map_or(0, |e| e.label.0);

        let mut merged = Vec::with_capacity(rot_p.len() + rot_q.len());
        merged.extend_from_slice(&rot_p[..gap_p]);
        merged.extend(rot_q[gap_q..].iter().map(|&h| h + hedge_shift));
        merged.extend(rot_q[..gap_q].iter().map(|&h| h + hedge_shift));
        merged.extend_from_slice(&rot_p[gap_p..]);

        let mut vertices = Vec::new();
        for (i, rot) in self.vertices.iter().enumerate() {
            if i == vp {
                vertices.push(merged.clone());
            } else {
                vertices.push(rot.clone());
            }
        }
        for (i, rot) in other.vertices.iter().enumerate() {
            if i != vq {
                vertices.push(rot.iter().map(|&h| h + hedge_shift).collect());
            }
        }

        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            label: EdgeLabel(e.label.0 + label_shift),
            ends: (e.ends.0 + hedge_shift, e.ends.1 + hedge_shift),
            sign: e.sign,
        }));

        Ok(RibbonGraph { vertices, edges }.renumbered())
    }

    /// True iff some ±1 assignment to vertices switches every sign to `Plus`,
    /// i.e. the underlying surface is orientable. For a bouquet this reduces
    /// to all loops being orientable.
    pub fn is_orientable(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n_vertices()).collect();
        // parity[v]: sign of v relative to its set representative
        let mut parity: Vec<bool> = vec![false; self.n_vertices()];

        fn find(parent: &mut [usize], parity: &mut [bool], v: usize) -> (usize, bool) {
            if parent[v] == v {
                return (v, false);
            }
            let (root, p) = find(parent, parity, parent[v]);
            parent[v] = root;
            parity[v] ^= p;
            (root, parity[v])
        }

        for e in &self.edges {
            let u = self.vertex_of(e.ends.0);
            let v = self.vertex_of(e.ends.1);
            let twisted = e.sign.is_minus();
            if u == v {
                if twisted {
                    return false;
                }
                continue;
            }
            let (ru, pu) = find(&mut parent, &mut parity, u);
            let (rv, pv) = find(&mut parent, &mut parity, v);
            if ru == rv {
                if pu ^ pv != twisted {
                    return false;
                }
            } else {
                parent[ru] = rv;
                parity[ru] = pu ^ pv ^ twisted;
            }
        }
        true
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let profile = self.boundary_profile();
        Fingerprint {
            vertices: self.n_vertices(),
            edges: self.n_edges(),
            boundary_multiset: profile.f_counts().into_iter().collect(),
            orientable: self.is_orientable(),
        }
    }

    /// Text form: one `v` line per vertex rotation, then `e label: h1 h2 sign`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for rot in &self.vertices {
            out.push('v');
            for h in rot {
                out.push_str(&format!(" {h}"));
            }
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str(&format!(
                "e {}: {} {} {:+}\n",
                e.label,
                e.ends.0,
                e.ends.1,
                e.sign.to_i8()
            ));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<RibbonGraph, RibbonError> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || RibbonError::MalformedText(line.to_string());
            if let Some(rest) = line.strip_prefix('v') {
                let rot = rest
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                vertices.push(rot);
            } else if let Some(rest) = line.strip_prefix('e') {
                let (label_part, ends_part) = rest.split_once(':').ok_or_else(bad)?;
                let label: u32 = label_part.trim().parse().map_err(|_| bad())?;
                let fields: Vec<&str> = ends_part.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(bad());
                }
                let h1: usize = fields[0].parse().map_err(|_| bad())?;
                let h2: usize = fields[1].parse().map_err(|_| bad())?;
                let sign = match fields[2] {
                    "+1" | "1" => Sign::Plus,
                    "-1" => Sign::Minus,
                    _ => return Err(bad()),
                };
                edges.push(Edge {
                    label: EdgeLabel(label),
                    ends: (h1, h2),
                    sign,
                });
            } else {
                return Err(bad());
            }
        }
        RibbonGraph::new(vertices, edges)
    }
}

/// Equality surrogate for ribbon graphs: vertex and edge counts, the multiset
/// of boundary-component counts over all spanning subgraphs, and
/// orientability. Complete enough to catch construction bugs at desk scale;
/// full isomorphism testing is out of scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub vertices: usize,
    pub edges: usize,
    pub boundary_multiset: Vec<(u32, u64)>,
    pub orientable: bool,
}

/// A cyclic sequence of signed tokens describing a bouquet: each label in
/// `1..=n` appears exactly twice, and an edge is non-orientable exactly when
/// its two tokens carry opposite signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedRotation(Vec<i32>);

impl SignedRotation {
    pub fn new(tokens: Vec<i32>) -> Result<Self, RibbonError> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &t in &tokens {
            if t == 0 {
                return Err(RibbonError::ZeroToken);
            }
            *counts.entry(t.unsigned_abs()).or_insert(0) += 1;
        }
        for (&label, &c) in &counts {
            if c != 2 {
                return Err(RibbonError::LabelCount(label, c));
            }
        }
        let n = counts.len() as u32;
        for expect in 1..=n {
            if !counts.contains_key(&expect) {
                return Err(RibbonError::LabelGap(expect));
            }
        }
        Ok(SignedRotation(tokens))
    }

    pub fn tokens(&self) -> &[i32] {
        &self.0
    }

    pub fn n_edges(&self) -> usize {
        self.0.len() / 2
    }
}

impl FromStr for SignedRotation {
    type Err = RibbonError;

    fn from_str(s: &str) -> Result<Self, RibbonError> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return SignedRotation::new(Vec::new());
        }
        let tokens = trimmed
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<i32>()
                    .map_err(|_| RibbonError::InvalidToken(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SignedRotation::new(tokens)
    }
}

impl fmt::Display for SignedRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A ribbon graph with exactly one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bouquet {
    graph: RibbonGraph,
}

/// Parse a comma-separated signed rotation into a bouquet.
pub fn parse_signed_rotation(text: &str) -> Result<Bouquet, RibbonError> {
    let rot: SignedRotation = text.parse()?;
    Ok(Bouquet::from_rotation(&rot))
}

impl Bouquet {
    pub fn from_rotation(rot: &SignedRotation) -> Bouquet {
        let tokens = rot.tokens();
        let n = rot.n_edges();
        let rotation: Vec<usize> = (0..tokens.len()).collect();
        let mut first_occurrence: BTreeMap<u32, (usize, i32)> = BTreeMap::new();
        let mut edges = Vec::with_capacity(n);
        for (pos, &t) in tokens.iter().enumerate() {
            let label = t.unsigned_abs();
            match first_occurrence.remove(&label) {
                None => {
                    first_occurrence.insert(label, (pos, t));
                }
                Some((first_pos, first_tok)) => {
                    let sign = if (first_tok > 0) == (t > 0) {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    };
                    edges.push(Edge {
                        label: EdgeLabel(label),
                        ends: (first_pos, pos),
                        sign,
                    });
                }
            }
        }
        let graph = RibbonGraph::new(vec![rotation], edges).expect("valid rotation");
        Bouquet { graph }
    }

    pub fn try_from_graph(graph: RibbonGraph) -> Result<Bouquet, RibbonError> {
        if graph.n_vertices() != 1 {
            return Err(RibbonError::NotABouquet(graph.n_vertices()));
        }
        Ok(Bouquet { graph })
    }

    pub fn graph(&self) -> &RibbonGraph {
        &self.graph
    }

    pub fn into_graph(self) -> RibbonGraph {
        self.graph
    }

    pub fn n_edges(&self) -> usize {
        self.graph.n_edges()
    }

    /// Tokens of the rotation, negating the first occurrence of each
    /// non-orientable edge. Only the sign product per edge is intrinsic, so
    /// this is a canonical representative.
    pub fn signed_rotation(&self) -> SignedRotation {
        let rot = &self.graph.vertices[0];
        let tokens = rot
            .iter()
            .map(|&h| {
                let e = self
                    .graph
                    .edges
                    .iter()
                    .find(|e| e.ends.0 == h || e.ends.1 == h)
                    .expect("edge of half-edge");
                let label = e.label.0 as i32;
                if e.sign.is_minus() && e.ends.0 == h {
                    -label
                } else {
                    label
                }
            })
            .collect();
        SignedRotation::new(tokens).expect("rotation of a valid bouquet")
    }

    pub fn quasi_tree_count(&self) -> u64 {
        self.graph.quasi_tree_count()
    }

    /// Slides one end of edge `a` over edge `b`; the moved end must sit next
    /// to an end of `b` in the rotation. Sliding over a twisted ribbon lands
    /// on the near side of `b`'s other end and flips the moved token's sign;
    /// over an untwisted ribbon it lands on the far side.
    pub fn handle_slide(&self, a: EdgeLabel, b: EdgeLabel) -> Result<Bouquet, RibbonError> {
        if a == b {
            return Err(RibbonError::EqualElements);
        }
        self.graph.edge(a)?;
        let b_sign = self.graph.edge(b)?.sign;
        let tokens = self.signed_rotation().tokens().to_vec();
        let len = tokens.len();
        let label_at = |i: usize| tokens[i].unsigned_abs();

        let mut found = None;
        for p in 0..len {
            let q = (p + 1) % len;
            if label_at(p) == a.0 && label_at(q) == b.0 {
                found = Some((p, q, true)); // a just before b
                break;
            }
            if label_at(p) == b.0 && label_at(q) == a.0 {
                found = Some((q, p, false)); // a just after b
                break;
            }
        }
        let (a_pos, b_pos, a_before) =
            found.ok_or(RibbonError::NoNeighbouringEnds(a.0, b.0))?;
        let b_other = (0..len)
            .find(|&i| i != b_pos && label_at(i) == b.0)
            .expect("second end of b");

        let mut moved = tokens[a_pos];
        if b_sign.is_minus() {
            moved = -moved;
        }
        let mut new_tokens = tokens.clone();
        new_tokens.remove(a_pos);
        let mut target = b_other;
        if a_pos < b_other {
            target -= 1;
        }
        // Untwisted: land on the far side of b's other end; twisted: near side.
        let after = a_before != b_sign.is_minus();
        let insert_at = if after { target + 1 } else { target };
        new_tokens.insert(insert_at, moved);
        Ok(Bouquet::from_rotation(
            &SignedRotation::new(new_tokens).expect("slide preserves label counts"),
        ))
    }

    /// Swaps two neighbouring ends of distinct edges `a` and `b`.
    pub fn exchange_handle_ends(&self, a: EdgeLabel, b: EdgeLabel) -> Result<Bouquet, RibbonError> {
        if a == b {
            return Err(RibbonError::EqualElements);
        }
        self.graph.edge(a)?;
        self.graph.edge(b)?;
        let mut tokens = self.signed_rotation().tokens().to_vec();
        let len = tokens.len();
        let pair = (0..len)
            .map(|p| (p, (p + 1) % len))
            .find(|&(p, q)| {
                let (x, y) = (tokens[p].unsigned_abs(), tokens[q].unsigned_abs());
                (x == a.0 && y == b.0) || (x == b.0 && y == a.0)
            })
            .ok_or(RibbonError::NoNeighbouringEnds(a.0, b.0))?;
        tokens.swap(pair.0, pair.1);
        Ok(Bouquet::from_rotation(
            &SignedRotation::new(tokens).expect("swap preserves label counts"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bouquet(s: &str) -> Bouquet {
        parse_signed_rotation(s).unwrap()
    }

    #[test]
    fn parse_single_loops() {
        let b = bouquet("1,1");
        assert_eq!(b.n_edges(), 1);
        assert_eq!(b.graph().edges()[0].sign, Sign::Plus);
        let b = bouquet("-1,1");
        assert_eq!(b.graph().edges()[0].sign, Sign::Minus);
        let b = bouquet(" -1 , 4,2, 1,3,2,4,3 ");
        assert_eq!(b.n_edges(), 4);
    }

    #[test]
    fn parse_fan_four() {
        let b = bouquet("1,2,1,3,2,4,3,4");
        assert_eq!(b.n_edges(), 4);
        assert!(b.graph().edges().iter().all(|e| e.sign == Sign::Plus));
        assert_eq!(b.signed_rotation().to_string(), "1,2,1,3,2,4,3,4");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!(
            parse_signed_rotation("1,1,1").unwrap_err(),
            RibbonError::LabelCount(1, 3)
        );
        assert_eq!(parse_signed_rotation("0,0").unwrap_err(), RibbonError::ZeroToken);
        assert_eq!(
            parse_signed_rotation("1,1,3,3").unwrap_err(),
            RibbonError::LabelGap(2)
        );
        assert!(matches!(
            parse_signed_rotation("a,1").unwrap_err(),
            RibbonError::InvalidToken(_)
        ));
        assert_eq!(parse_signed_rotation("1,2").unwrap_err(), RibbonError::LabelCount(1, 1));
    }

    #[test]
    fn parse_empty_is_edgeless_bouquet() {
        let b = parse_signed_rotation("").unwrap();
        assert_eq!(b.n_edges(), 0);
        assert_eq!(b.quasi_tree_count(), 1);
    }

    #[test]
    fn boundary_of_empty_subset_counts_vertices() {
        let b = bouquet("1,2,1,3,2,4,3,4");
        assert_eq!(b.graph().boundary_components(&[]).unwrap(), 1);
        let two = RibbonGraph::bare(2);
        assert_eq!(two.boundary_components(&[]).unwrap(), 2);
    }

    #[test]
    fn boundary_annulus_and_moebius() {
        assert_eq!(bouquet("1,1").graph().boundary_components(&[EdgeLabel(1)]).unwrap(), 2);
        assert_eq!(bouquet("-1,1").graph().boundary_components(&[EdgeLabel(1)]).unwrap(), 1);
    }

    #[test]
    fn boundary_interlaced_pair() {
        let b = bouquet("1,2,1,2");
        assert_eq!(
            b.graph().boundary_components(&[EdgeLabel(1), EdgeLabel(2)]).unwrap(),
            1
        );
    }

    #[test]
    fn boundary_unknown_label() {
        let b = bouquet("1,1");
        assert_eq!(
            b.graph().boundary_components(&[EdgeLabel(9)]).unwrap_err(),
            RibbonError::UnknownLabel(9)
        );
    }

    #[test]
    fn quasi_tree_counts() {
        assert_eq!(bouquet("1,2,1,3,2,3").quasi_tree_count(), 3);
        assert_eq!(bouquet("1,3,2,1,3,2").quasi_tree_count(), 4);
        assert_eq!(bouquet("-1,-2,3,1,2,4,3,4").quasi_tree_count(), 8);
        assert_eq!(bouquet("1,1").quasi_tree_count(), 1);
    }

    #[test]
    fn profile_single_loops() {
        let p = bouquet("1,1").graph().boundary_profile();
        assert_eq!(p.get(0), 1);
        assert_eq!(p.get(1), 2);
        let p = bouquet("-1,1").graph().boundary_profile();
        assert_eq!(p.get(0), 1);
        assert_eq!(p.get(1), 1);
    }

    #[test]
    fn profile_fan_two() {
        let p = bouquet("1,2,1,2").graph().boundary_profile();
        assert_eq!(p.f_n(1), 2);
    }

    #[test]
    fn delete_leaves_bare_vertex() {
        let g = bouquet("1,1").graph().delete_edge(EdgeLabel(1)).unwrap();
        assert_eq!(g.n_vertices(), 1);
        assert_eq!(g.n_edges(), 0);
        assert_eq!(g.boundary_components(&[]).unwrap(), 1);
    }

    #[test]
    fn delete_unknown_label() {
        assert_eq!(
            bouquet("1,1").graph().delete_edge(EdgeLabel(2)).unwrap_err(),
            RibbonError::UnknownLabel(2)
        );
    }

    #[test]
    fn petrial_is_exact_involution() {
        let g = bouquet("1,2,1,3,2,3").graph().clone();
        let once = g.partial_petrial(&[EdgeLabel(2)]).unwrap();
        assert_ne!(once, g);
        assert_eq!(once.partial_petrial(&[EdgeLabel(2)]).unwrap(), g);
    }

    #[test]
    fn dual_of_empty_subset_preserves_fingerprint() {
        let g = bouquet("-1,2,1,3,2,3").graph().clone();
        assert_eq!(g.partial_dual(&[]).unwrap().fingerprint(), g.fingerprint());
    }

    #[test]
    fn dual_preserves_quasi_tree_count() {
        let g = bouquet("-1,-2,3,1,2,4,3,4").graph().clone();
        for mask in 0..1u64 << g.n_edges() {
            assert_eq!(g.partial_dual_mask(mask).quasi_tree_count(), 8);
        }
    }

    #[test]
    fn dual_at_quasi_tree_is_a_bouquet() {
        let g = bouquet("1,2,1,3,2,3").graph().clone();
        let profile = g.boundary_profile();
        for mask in profile.quasi_tree_masks() {
            assert_eq!(g.partial_dual_mask(mask).n_vertices(), 1);
        }
    }

    #[test]
    fn contract_orientable_loop_splits_vertex() {
        let g = bouquet("1,1").graph().contract_edge(EdgeLabel(1)).unwrap();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.n_edges(), 0);
        assert_eq!(g.boundary_components(&[]).unwrap(), 2);
    }

    #[test]
    fn contract_nonorientable_loop_keeps_one_vertex() {
        let g = bouquet("-1,1").graph().contract_edge(EdgeLabel(1)).unwrap();
        assert_eq!(g.n_vertices(), 1);
        assert_eq!(g.n_edges(), 0);
    }

    #[test]
    fn contract_nonloop_merges_vertices() {
        // two vertices joined by one edge
        let g = RibbonGraph::new(
            vec![vec![0], vec![1]],
            vec![Edge {
                label: EdgeLabel(1),
                ends: (0, 1),
                sign: Sign::Plus,
            }],
        )
        .unwrap();
        let c = g.contract_edge(EdgeLabel(1)).unwrap();
        assert_eq!(c.n_vertices(), 1);
        assert_eq!(c.n_edges(), 0);
    }

    #[test]
    fn join_multiplies_quasi_tree_counts() {
        let p = bouquet("1,2,1,3,2,3").graph().clone(); // kappa 3
        let q = bouquet("-1,1").graph().clone(); // kappa 2
        for gap_p in 0..=p.vertices()[0].len() {
            let j = p.one_vertex_join(&q, 0, 0, gap_p, 1).unwrap();
            assert_eq!(j.n_vertices(), 1);
            assert_eq!(j.quasi_tree_count(), 6);
        }
    }

    #[test]
    fn join_with_edgeless_bouquet_keeps_count() {
        let p = bouquet("1,2,1,2").graph().clone();
        let empty = RibbonGraph::bare(1);
        let j = p.one_vertex_join(&empty, 0, 0, 2, 0).unwrap();
        assert_eq!(j.quasi_tree_count(), p.quasi_tree_count());
    }

    #[test]
    fn join_rejects_bad_positions() {
        let p = bouquet("1,1").graph().clone();
        let q = bouquet("1,1").graph().clone();
        assert_eq!(
            p.one_vertex_join(&q, 1, 0, 0, 0).unwrap_err(),
            RibbonError::BadVertex(1)
        );
        assert_eq!(
            p.one_vertex_join(&q, 0, 0, 5, 0).unwrap_err(),
            RibbonError::BadGap(5, 2)
        );
    }

    #[test]
    fn join_of_two_trivial_loops() {
        let p = bouquet("1,1").graph().clone();
        let j = p.one_vertex_join(&bouquet("1,1").graph().clone(), 0, 0, 0, 0).unwrap();
        assert_eq!(j.quasi_tree_count(), 1);
        assert_eq!(j.labels(), vec![EdgeLabel(1), EdgeLabel(2)]);
    }

    #[test]
    fn orientability() {
        assert!(bouquet("1,2,1,3,2,3").graph().is_orientable());
        assert!(!bouquet("-1,2,1,3,2,3").graph().is_orientable());
        // a twisted non-loop edge alone is switchable
        let g = RibbonGraph::new(
            vec![vec![0], vec![1]],
            vec![Edge {
                label: EdgeLabel(1),
                ends: (0, 1),
                sign: Sign::Minus,
            }],
        )
        .unwrap();
        assert!(g.is_orientable());
    }

    #[test]
    fn text_round_trip() {
        let g = bouquet("-1,2,1,3,2,3").graph().partial_dual(&[EdgeLabel(2)]).unwrap();
        let text = g.to_text();
        assert_eq!(RibbonGraph::from_text(&text).unwrap(), g);
    }

    #[test]
    fn canonical_rotation_signs() {
        // non-orientable edges display with the first occurrence negated
        let b = bouquet("1,2,3,2,1,-3");
        assert_eq!(b.signed_rotation().to_string(), "1,2,-3,2,1,3");
    }

    #[test]
    fn slide_and_exchange_reject_equal_or_missing() {
        let b = bouquet("1,2,1,2");
        assert_eq!(
            b.handle_slide(EdgeLabel(1), EdgeLabel(1)).unwrap_err(),
            RibbonError::EqualElements
        );
        assert_eq!(
            b.exchange_handle_ends(EdgeLabel(1), EdgeLabel(3)).unwrap_err(),
            RibbonError::UnknownLabel(3)
        );
        // 1 and 2 have no neighbouring ends here
        let separated = bouquet("1,3,1,3,2,4,2,4");
        assert_eq!(
            separated.handle_slide(EdgeLabel(1), EdgeLabel(2)).unwrap_err(),
            RibbonError::NoNeighbouringEnds(1, 2)
        );
    }

    #[test]
    fn exchange_swaps_neighbouring_ends() {
        let b = bouquet("1,2,1,3,2,3");
        let e = b.exchange_handle_ends(EdgeLabel(1), EdgeLabel(2)).unwrap();
        assert_eq!(e.signed_rotation().to_string(), "2,1,1,3,2,3");
    }
}
