//! Exact enumeration of spanning quasi-trees of ribbon graphs.
//!
//! A ribbon graph is a surface with boundary assembled from vertex discs and
//! edge ribbons; a spanning subgraph with exactly one boundary component is a
//! quasi-tree. This crate provides:
//!
//! * [`ribbon`] — signed rotation systems, boundary-component tracing,
//!   deletion / contraction / partial dual / partial Petrial / one-vertex join;
//! * [`chord`] — framed chord diagrams of bouquets and their signed
//!   intersection matrices;
//! * [`linalg`] — exact integer determinants (fraction-free elimination),
//!   principal minors and characteristic polynomials, plus the determinant
//!   count of quasi-trees for eligible bouquets;
//! * [`delta_matroid`] — set systems with twist, loop complementation, handle
//!   slide, handle-end exchange and the four-term relation;
//! * [`families`] / [`sequences`] — the named bouquet families whose
//!   quasi-tree counts realize Fibonacci, Lucas and associated Mersenne
//!   numbers, with closed-form and deletion–contraction predictions;
//! * [`matchings`] — perfect-matching counts of ladders `P2 x Pn` and of
//!   `P2 x Tn` for a special caterpillar `Tn`.
//!
//! Everything is exact integer arithmetic; enumeration routines are pure and
//! can be partitioned over threads without changing any result.

pub mod chord;
pub mod delta_matroid;
pub mod families;
pub mod linalg;
pub mod matchings;
pub mod random;
pub mod ribbon;
pub mod sequences;
pub mod trace;

pub use chord::{FramedChordDiagram, IntersectionMatrix};
pub use delta_matroid::SetSystem;
pub use families::FamilyId;
pub use linalg::{IntMatrix, IntPolynomial};
pub use ribbon::{Bouquet, EdgeLabel, Fingerprint, RibbonGraph, Sign, SignedRotation};
pub use trace::BoundaryProfile;
