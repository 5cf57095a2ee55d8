//! Framed chord diagrams of bouquets and their signed intersection matrices.
//!
//! The vertex boundary of a bouquet is the core circle; each edge becomes a
//! chord between the positions of its two half-edges, framed 1 exactly when
//! the loop is non-orientable. Chords are oriented canonically from first to
//! second occurrence; the determinant of `I + A` does not depend on that
//! choice.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::ribbon::{Bouquet, EdgeLabel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChordError {
    #[error("chord endpoints must cover positions 1..=2n exactly once; position {0} is wrong")]
    BadEndpoints(usize),
    #[error("framing vector length {0} does not match chord count {1}")]
    BadFraming(usize, usize),
    #[error("malformed chord diagram text: {0}")]
    MalformedText(String),
}

/// `2n` points on a circle paired into `n` chords, each carrying a framing
/// bit. Positions are `1..=2n`; chord `i` is stored as `(a_i, b_i)` with
/// `a_i < b_i` (first occurrence first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedChordDiagram {
    endpoints: Vec<(usize, usize)>,
    framing: Vec<bool>,
    labels: Vec<EdgeLabel>,
}

impl FramedChordDiagram {
    pub fn new(
        endpoints: Vec<(usize, usize)>,
        framing: Vec<bool>,
    ) -> Result<FramedChordDiagram, ChordError> {
        if framing.len() != endpoints.len() {
            return Err(ChordError::BadFraming(framing.len(), endpoints.len()));
        }
        let n = endpoints.len();
        let mut seen = vec![false; 2 * n + 1];
        for &(a, b) in &endpoints {
            for p in [a, b] {
                if p == 0 || p > 2 * n || seen[p] {
                    return Err(ChordError::BadEndpoints(p));
                }
                seen[p] = true;
            }
        }
        let endpoints = endpoints
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let labels = (1..=n as u32).map(EdgeLabel).collect();
        Ok(FramedChordDiagram {
            endpoints,
            framing,
            labels,
        })
    }

    /// Chords follow the bouquet's rotation: chord `i` joins the positions of
    /// edge `i`'s half-edges, framed 1 iff the edge has a half-twist.
    pub fn from_bouquet(b: &Bouquet) -> FramedChordDiagram {
        let rotation = &b.graph().vertices()[0];
        let pos_of = |h: usize| rotation.iter().position(|&x| x == h).unwrap() + 1;
        let mut endpoints = Vec::with_capacity(b.n_edges());
        let mut framing = Vec::with_capacity(b.n_edges());
        let mut labels = Vec::with_capacity(b.n_edges());
        for e in b.graph().edges() {
            let (p, q) = (pos_of(e.ends.0), pos_of(e.ends.1));
            endpoints.push((p.min(q), p.max(q)));
            framing.push(e.sign.is_minus());
            labels.push(e.label);
        }
        FramedChordDiagram {
            endpoints,
            framing,
            labels,
        }
    }

    pub fn n_chords(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self) -> &[(usize, usize)] {
        &self.endpoints
    }

    pub fn framing(&self) -> &[bool] {
        &self.framing
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    /// True iff chords `i` and `j` interlace: exactly one endpoint of `j`
    /// lies strictly between the endpoints of `i` on the circle.
    pub fn interlaces(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n_chords() && j < self.n_chords(), "chord index out of range");
        assert_ne!(i, j, "interlacement needs two distinct chords");
        let (ai, bi) = self.endpoints[i];
        let (aj, bj) = self.endpoints[j];
        let inside = |p: usize| ai < p && p < bi;
        inside(aj) != inside(bj)
    }

    /// Edges `(i, j)` with `i < j` of the interlacement graph.
    pub fn intersection_graph_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n_chords();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.interlaces(i, j) {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Signed intersection matrix with the canonical chord orientations.
    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        self.intersection_matrix_with_flips(&vec![false; self.n_chords()])
    }

    /// Intersection matrix with chord `i` reversed where `flips[i]` is set.
    /// `det(I + A)` is unchanged by any choice of flips.
    pub fn intersection_matrix_with_flips(&self, flips: &[bool]) -> IntersectionMatrix {
        assert_eq!(flips.len(), self.n_chords());
        let n = self.n_chords();
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = i64::from(self.framing[i]);
            for j in i + 1..n {
                if !self.interlaces(i, j) {
                    continue;
                }
                let (ai, bi) = self.endpoints[i];
                let (aj, _) = self.endpoints[j];
                // With a_i < b_i, interlacement means exactly one endpoint of
                // j sits in the open interval (a_i, b_i); the cyclic order is
                // a_i, a_j, b_i, b_j when that endpoint is a_j.
                let mut entry = if ai < aj && aj < bi { 1 } else { -1 };
                if flips[i] != flips[j] {
                    entry = -entry;
                }
                rows[i][j] = entry;
                rows[j][i] = -entry;
            }
        }
        IntersectionMatrix {
            matrix: IntMatrix::from_i64(rows).unwrap(),
            labels: self.labels.clone(),
        }
    }
}

impl fmt::Display for FramedChordDiagram {
    /// Text form `n; a1 b1 f1; a2 b2 f2; ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n_chords())?;
        for (i, &(a, b)) in self.endpoints.iter().enumerate() {
            write!(f, "; {} {} {}", a, b, u8::from(self.framing[i]))?;
        }
        Ok(())
    }
}

impl FromStr for FramedChordDiagram {
    type Err = ChordError;

    fn from_str(s: &str) -> Result<Self, ChordError> {
        let bad = || ChordError::MalformedText(s.to_string());
        let mut parts = s.split(';');
        let n: usize = parts
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let mut endpoints = Vec::with_capacity(n);
        let mut framing = Vec::with_capacity(n);
        for part in parts {
            let fields: Vec<&str> = part.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(bad());
            }
            let a: usize = fields[0].parse().map_err(|_| bad())?;
            let b: usize = fields[1].parse().map_err(|_| bad())?;
            let fr: u8 = fields[2].parse().map_err(|_| bad())?;
            endpoints.push((a, b));
            framing.push(fr != 0);
        }
        if endpoints.len() != n {
            return Err(bad());
        }
        FramedChordDiagram::new(endpoints, framing)
    }
}

/// `A(B)`: framing on the diagonal, `±1` interlacement signs elsewhere, rows
/// and columns in edge-label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    matrix: IntMatrix,
    labels: Vec<EdgeLabel>,
}

impl IntersectionMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn det_i_plus_a(&self) -> BigInt {
        self.matrix.plus_identity().det()
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }
}
