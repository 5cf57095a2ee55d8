//! Boundary-component tracing over all spanning subgraphs.
//!
//! Every half-edge contributes two boundary points (the two ends of its
//! attachment segment). Corner arcs between consecutive half-edges in a
//! rotation form one perfect matching on the points; the second matching
//! depends on the edge subset: an absent ribbon contributes its attachment
//! segments, a present one its two sides, crossed when the sign is `Minus`.
//! The union of the two matchings is 2-regular, and its cycles are exactly
//! the boundary components of the spanning subgraph.

use std::collections::BTreeMap;

use crate::ribbon::RibbonGraph;

/// Precomputed matchings for one graph; cheap to query per subset.
pub struct BoundaryTracer {
    n_points: usize,
    corner: Vec<u32>,
    absent: Vec<u32>,
    present: Vec<u32>,
    /// Bit index (label order) of the edge owning each point.
    edge_bit: Vec<u32>,
    bare_vertices: u32,
}

impl BoundaryTracer {
    pub fn new(g: &RibbonGraph) -> Self {
        let n_points = 4 * g.n_edges();
        let mut corner = vec![0u32; n_points];
        let mut absent = vec![0u32; n_points];
        let mut present = vec![0u32; n_points];
        let mut edge_bit = vec![0u32; n_points];
        let mut bare_vertices = 0u32;

        // point 2h is the entry end a(h), point 2h+1 the exit end b(h),
        // along the positive traversal of the vertex disc boundary
        for rot in g.vertices() {
            if rot.is_empty() {
                bare_vertices += 1;
                continue;
            }
            for (i, &h) in rot.iter().enumerate() {
                let next = rot[(i + 1) % rot.len()];
                corner[2 * h + 1] = 2 * next as u32;
                corner[2 * next] = (2 * h + 1) as u32;
            }
        }
        for (i, e) in g.edges().iter().enumerate() {
            let (h1, h2) = e.ends;
            let (a1, b1, a2, b2) = (2 * h1, 2 * h1 + 1, 2 * h2, 2 * h2 + 1);
            absent[a1] = b1 as u32;
            absent[b1] = a1 as u32;
            absent[a2] = b2 as u32;
            absent[b2] = a2 as u32;
            if e.sign.is_minus() {
                present[a1] = a2 as u32;
                present[a2] = a1 as u32;
                present[b1] = b2 as u32;
                present[b2] = b1 as u32;
            } else {
                present[a1] = b2 as u32;
                present[b2] = a1 as u32;
                present[b1] = a2 as u32;
                present[a2] = b1 as u32;
            }
            for p in [a1, b1, a2, b2] {
                edge_bit[p] = i as u32;
            }
        }
        BoundaryTracer {
            n_points,
            corner,
            absent,
            present,
            edge_bit,
            bare_vertices,
        }
    }

    pub fn scratch(&self) -> Vec<bool> {
        vec![false; self.n_points]
    }

    pub(crate) fn present_mate(&self, p: usize) -> usize {
        self.present[p] as usize
    }

    pub(crate) fn absent_mate(&self, p: usize) -> usize {
        self.absent[p] as usize
    }

    #[inline]
    fn flex(&self, mask: u64, p: usize) -> usize {
        if mask >> self.edge_bit[p] & 1 == 1 {
            self.present[p] as usize
        } else {
            self.absent[p] as usize
        }
    }

    /// Boundary components of the spanning subgraph given by `mask`.
    pub fn components(&self, mask: u64, visited: &mut [bool]) -> u32 {
        visited.fill(false);
        let mut comps = self.bare_vertices;
        for start in 0..self.n_points {
            if visited[start] {
                continue;
            }
            comps += 1;
            let mut p = start;
            loop {
                visited[p] = true;
                let q = self.flex(mask, p);
                visited[q] = true;
                p = self.corner[q] as usize;
                if p == start {
                    break;
                }
            }
        }
        comps
    }

    /// Fast path: true iff the subgraph has exactly one boundary component.
    pub fn is_quasi_tree(&self, mask: u64, visited: &mut [bool]) -> bool {
        if self.bare_vertices > 0 || self.n_points == 0 {
            return self.bare_vertices == 1 && self.n_points == 0;
        }
        visited.fill(false);
        let mut seen = 0usize;
        let mut p = 0usize;
        loop {
            visited[p] = true;
            let q = self.flex(mask, p);
            visited[q] = true;
            seen += 2;
            p = self.corner[q] as usize;
            if p == 0 {
                break;
            }
        }
        seen == self.n_points
    }
}

/// Complete map from edge subsets (bitmasks in label order) to their
/// boundary-component counts. The empty subset maps to the vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryProfile {
    counts: Vec<u32>,
    n_edges: usize,
}

impl BoundaryProfile {
    pub fn get(&self, mask: u64) -> u32 {
        self.counts[mask as usize]
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.counts.iter().enumerate().map(|(m, &c)| (m as u64, c))
    }

    /// `f_n(G)` for every realized `n`: how many subsets have each boundary
    /// count.
    pub fn f_counts(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for &c in &self.counts {
            *out.entry(c).or_insert(0) += 1;
        }
        out
    }

    pub fn f_n(&self, n: u32) -> u64 {
        self.counts.iter().filter(|&&c| c == n).count() as u64
    }

    /// Masks of subsets with exactly one boundary component, ascending.
    pub fn quasi_tree_masks(&self) -> Vec<u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(m, _)| m as u64)
            .collect()
    }

    pub fn quasi_tree_count(&self) -> u64 {
        self.f_n(1)
    }
}

fn split_ranges(total: u64, threads: usize) -> Vec<(u64, u64)> {
    let workers = threads.max(1).min(total.max(1) as usize) as u64;
    let chunk = total / workers;
    let rem = total % workers;
    let mut ranges = Vec::new();
    let mut lo = 0u64;
    for w in 0..workers {
        let len = chunk + u64::from(w < rem);
        ranges.push((lo, lo + len));
        lo += len;
    }
    ranges
}

pub fn boundary_profile(g: &RibbonGraph, threads: usize) -> BoundaryProfile {
    let n = g.n_edges();
    assert!(n <= 28, "boundary profile over 2^{n} subsets is out of reach");
    let total = 1u64 << n;
    let tracer = BoundaryTracer::new(g);
    let mut counts = vec![0u32; total as usize];

    if threads <= 1 || total < 1024 {
        let mut scratch = tracer.scratch();
        for (mask, slot) in counts.iter_mut().enumerate() {
            *slot = tracer.components(mask as u64, &mut scratch);
        }
    } else {
        let ranges = split_ranges(total, threads);
        let mut slices: Vec<&mut [u32]> = Vec::new();
        let mut rest = counts.as_mut_slice();
        for &(lo, hi) in &ranges {
            let (head, tail) = rest.split_at_mut((hi - lo) as usize);
            slices.push(head);
            rest = tail;
        }
        std::thread::scope(|scope| {
            for (&(lo, _), slice) in ranges.iter().zip(slices) {
                let tracer = &tracer;
                scope.spawn(move || {
                    let mut scratch = tracer.scratch();
                    for (i, slot) in slice.iter_mut().enumerate() {
                        *slot = tracer.components(lo + i as u64, &mut scratch);
                    }
                });
            }
        });
    }
    BoundaryProfile { counts, n_edges: n }
}

pub fn quasi_tree_count(g: &RibbonGraph, threads: usize) -> u64 {
    let n = g.n_edges();
    assert!(n <= 62, "quasi-tree enumeration over 2^{n} subsets is out of reach");
    let total = 1u64 << n;
    let tracer = BoundaryTracer::new(g);

    let count_range = |lo: u64, hi: u64| -> u64 {
        let mut scratch = tracer.scratch();
        let mut count = 0u64;
        for mask in lo..hi {
            if tracer.is_quasi_tree(mask, &mut scratch) {
                count += 1;
            }
        }
        count
    };

    if threads <= 1 || total < 1024 {
        count_range(0, total)
    } else {
        let ranges = split_ranges(total, threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(lo, hi)| scope.spawn(move || count_range(lo, hi)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    }
}

/// One traversal step along a boundary walk: the flex arc entered at `enter`
/// and left at `exit` (corner arcs are implicit between steps).
#[derive(Debug, Clone, Copy)]
pub(crate) struct WalkStep {
    pub enter: usize,
    pub exit: usize,
}

/// Ordered boundary walks of the spanning subgraph `(V, mask)`, one per
/// boundary component that touches at least one half-edge. Walks start at
/// their smallest point and first traverse its flex arc, which makes the
/// result deterministic.
pub(crate) fn boundary_walks(tracer: &BoundaryTracer, mask: u64) -> Vec<Vec<WalkStep>> {
    let mut visited = tracer.scratch();
    let mut walks = Vec::new();
    for start in 0..tracer.n_points {
        if visited[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut p = start;
        loop {
            visited[p] = true;
            let q = tracer.flex(mask, p);
            visited[q] = true;
            walk.push(WalkStep { enter: p, exit: q });
            p = tracer.corner[q] as usize;
            if p == start {
                break;
            }
        }
        walks.push(walk);
    }
    walks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::parse_signed_rotation;

    #[test]
    fn bare_vertices_only() {
        let g = RibbonGraph::bare(3);
        let p = boundary_profile(&g, 1);
        assert_eq!(p.get(0), 3);
        assert_eq!(quasi_tree_count(&g, 1), 0);
        assert_eq!(quasi_tree_count(&RibbonGraph::bare(1), 1), 1);
    }

    #[test]
    fn threaded_runs_match_serial() {
        let g = parse_signed_rotation("-1,-2,3,1,2,4,3,5,4,6,5,6")
            .unwrap()
            .into_graph();
        let serial = boundary_profile(&g, 1);
        for threads in [2, 3, 8] {
            assert_eq!(boundary_profile(&g, threads), serial);
            assert_eq!(quasi_tree_count(&g, threads), serial.quasi_tree_count());
        }
    }

    #[test]
    fn profile_subset_order_is_bitmask_order() {
        let g = parse_signed_rotation("1,2,1,2").unwrap().into_graph();
        let p = boundary_profile(&g, 1);
        let seen: Vec<(u64, u32)> = p.iter().collect();
        assert_eq!(seen.len(), 4);
        assert_eq!(seen[0], (0, 1));
        assert_eq!(seen[3], (3, 1));
        assert_eq!(p.f_counts().get(&2), Some(&2));
    }
}
