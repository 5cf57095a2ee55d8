//! Set systems and delta-matroid operations.
//!
//! A set system is a ground set together with a family of feasible subsets,
//! stored as sorted bitmasks. The delta-matroid of a ribbon graph has the
//! spanning quasi-tree edge sets as its feasible family; twist mirrors
//! partial duality and loop complementation mirrors the partial Petrial.

use std::fmt;

use thiserror::Error;

use crate::ribbon::{EdgeLabel, RibbonGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetSystemError {
    #[error("ground set has {0} elements; at most {1} are supported")]
    GroundTooLarge(usize, usize),
    #[error("duplicate ground element {0}")]
    DuplicateElement(u32),
    #[error("unknown element {0}")]
    UnknownElement(u32),
    #[error("elements a and b must be distinct")]
    EqualElements,
    #[error("feasible mask {0:#x} has bits outside the ground set")]
    MaskOutOfRange(u64),
    #[error("malformed set system text: {0}")]
    MalformedText(String),
}

pub const MAX_GROUND: usize = 24;

/// Ground set plus feasible family; masks are sorted and deduplicated, bit
/// `i` standing for the `i`-th ground element in sorted label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    ground: Vec<EdgeLabel>,
    feasible: Vec<u64>,
}

/// The four cardinalities of the four-term relation and its verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourTerm {
    /// `|F|` of the original system.
    pub original: u64,
    /// `|F|` after handle sliding `a` over `b`.
    pub slide: u64,
    /// `|F|` after exchanging the handle ends of `a` and `b`.
    pub exchange: u64,
    /// `|F|` after exchanging and then sliding.
    pub exchange_slide: u64,
    /// `original + exchange_slide - exchange - slide == 0`.
    pub holds: bool,
}

impl SetSystem {
    pub fn new(mut ground: Vec<EdgeLabel>, mut feasible: Vec<u64>) -> Result<Self, SetSystemError> {
        ground.sort();
        for pair in ground.windows(2) {
            if pair[0] == pair[1] {
                return Err(SetSystemError::DuplicateElement(pair[0].0));
            }
        }
        if ground.len() > MAX_GROUND {
            return Err(SetSystemError::GroundTooLarge(ground.len(), MAX_GROUND));
        }
        let full = full_mask(ground.len());
        for &m in &feasible {
            if m & !full != 0 {
                return Err(SetSystemError::MaskOutOfRange(m));
            }
        }
        feasible.sort_unstable();
        feasible.dedup();
        Ok(SetSystem { ground, feasible })
    }

    /// Feasible family = edge sets of spanning quasi-trees; `|F| = κ(G)`.
    pub fn from_ribbon_graph(g: &RibbonGraph) -> SetSystem {
        let profile = g.boundary_profile();
        SetSystem {
            ground: g.labels(),
            feasible: profile.quasi_tree_masks(),
        }
    }

    pub fn ground(&self) -> &[EdgeLabel] {
        &self.ground
    }

    pub fn feasible_masks(&self) -> &[u64] {
        &self.feasible
    }

    pub fn cardinality(&self) -> u64 {
        self.feasible.len() as u64
    }

    pub fn is_proper(&self) -> bool {
        !self.feasible.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.feasible.binary_search(&mask).is_ok()
    }

    pub fn element_bit(&self, e: EdgeLabel) -> Result<u64, SetSystemError> {
        self.ground
            .iter()
            .position(|&l| l == e)
            .map(|i| 1u64 << i)
            .ok_or(SetSystemError::UnknownElement(e.0))
    }

    pub fn mask_of(&self, subset: &[EdgeLabel]) -> Result<u64, SetSystemError> {
        let mut mask = 0;
        for &e in subset {
            mask |= self.element_bit(e)?;
        }
        Ok(mask)
    }

    pub fn labels_of_mask(&self, mask: u64) -> Vec<EdgeLabel> {
        self.ground
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &l)| l)
            .collect()
    }

    /// Symmetric exchange axiom, checked exhaustively: for all feasible
    /// `X, Y` and `u ∈ XΔY` there is `v ∈ XΔY` (possibly `u`) with
    /// `XΔ{u,v}` feasible. Improper systems are flagged false.
    pub fn is_delta_matroid(&self) -> bool {
        if !self.is_proper() {
            return false;
        }
        for &x in &self.feasible {
            for &y in &self.feasible {
                let mut d = x ^ y;
                while d != 0 {
                    let u = d & d.wrapping_neg();
                    d &= d - 1;
                    let mut ok = false;
                    let mut d2 = x ^ y;
                    while d2 != 0 {
                        let v = d2 & d2.wrapping_neg();
                        d2 &= d2 - 1;
                        let candidate = if u == v { x ^ u } else { x ^ u ^ v };
                        if self.contains(candidate) {
                            ok = true;
                            break;
                        }
                    }
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff all feasible sets have the same size parity.
    pub fn is_even(&self) -> bool {
        let mut parities = self.feasible.iter().map(|m| m.count_ones() % 2);
        match parities.next() {
            None => true,
            Some(p) => parities.all(|q| q == p),
        }
    }

    /// Twist `D * A`: every feasible set symmetric-differenced with `A`.
    pub fn twist_mask(&self, a: u64) -> SetSystem {
        let mut feasible: Vec<u64> = self.feasible.iter().map(|m| m ^ a).collect();
        feasible.sort_unstable();
        SetSystem {
            ground: self.ground.clone(),
            feasible,
        }
    }

    pub fn twist(&self, subset: &[EdgeLabel]) -> Result<SetSystem, SetSystemError> {
        Ok(self.twist_mask(self.mask_of(subset)?))
    }

    /// Loop complementation `D + e`:
    /// `F'' = F Δ { F ∪ {e} | F ∈ F, e ∉ F }`.
    pub fn loop_complementation(&self, e: EdgeLabel) -> Result<SetSystem, SetSystemError> {
        let bit = self.element_bit(e)?;
        let mut shifted: Vec<u64> = self
            .feasible
            .iter()
            .filter(|&&m| m & bit == 0)
            .map(|&m| m | bit)
            .collect();
        shifted.sort_unstable();
        Ok(SetSystem {
            ground: self.ground.clone(),
            feasible: sym_diff(&self.feasible, &shifted),
        })
    }

    /// Handle slide of `a` over `b`:
    /// `F̃ = F Δ { F ∪ a | F ∪ b ∈ F and F ⊆ E\{a,b} }`.
    pub fn handle_slide(&self, a: EdgeLabel, b: EdgeLabel) -> Result<SetSystem, SetSystemError> {
        let (ba, bb) = self.distinct_bits(a, b)?;
        let mut moved: Vec<u64> = self
            .feasible
            .iter()
            .filter(|&&m| m & bb != 0 && m & ba == 0)
            .map(|&m| (m & !bb) | ba)
            .collect();
        moved.sort_unstable();
        Ok(SetSystem {
            ground: self.ground.clone(),
            feasible: sym_diff(&self.feasible, &moved),
        })
    }

    /// Handle-end exchange of `a` and `b`:
    /// `F' = F Δ { F ∪ {a,b} | F ∈ F and F ⊆ E\{a,b} }`.
    pub fn exchange_handle_ends(
        &self,
        a: EdgeLabel,
        b: EdgeLabel,
    ) -> Result<SetSystem, SetSystemError> {
        let (ba, bb) = self.distinct_bits(a, b)?;
        let mut raised: Vec<u64> = self
            .feasible
            .iter()
            .filter(|&&m| m & (ba | bb) == 0)
            .map(|&m| m | ba | bb)
            .collect();
        raised.sort_unstable();
        Ok(SetSystem {
            ground: self.ground.clone(),
            feasible: sym_diff(&self.feasible, &raised),
        })
    }

    /// Evaluates the four-term relation for the ordered pair `(a, b)`; the
    /// feasible-set cardinality satisfies it for every set system.
    pub fn four_term_check(&self, a: EdgeLabel, b: EdgeLabel) -> Result<FourTerm, SetSystemError> {
        self.distinct_bits(a, b)?;
        let slide = self.handle_slide(a, b)?;
        let exchange = self.exchange_handle_ends(a, b)?;
        let exchange_slide = exchange.handle_slide(a, b)?;
        let (f, fs, fe, fes) = (
            self.cardinality(),
            slide.cardinality(),
            exchange.cardinality(),
            exchange_slide.cardinality(),
        );
        Ok(FourTerm {
            original: f,
            slide: fs,
            exchange: fe,
            exchange_slide: fes,
            holds: f as i128 + fes as i128 - fe as i128 - fs as i128 == 0,
        })
    }

    fn distinct_bits(&self, a: EdgeLabel, b: EdgeLabel) -> Result<(u64, u64), SetSystemError> {
        if a == b {
            return Err(SetSystemError::EqualElements);
        }
        Ok((self.element_bit(a)?, self.element_bit(b)?))
    }

    /// Text form: ground labels on the first line, then one feasible set per
    /// line in ascending mask order, the empty set spelled `-`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.ground.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&l.to_string());
        }
        out.push('\n');
        for &m in &self.feasible {
            if m == 0 {
                out.push('-');
            } else {
                let labels = self.labels_of_mask(m);
                for (i, l) in labels.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    out.push_str(&l.to_string());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SetSystem, SetSystemError> {
        let mut lines = text.lines();
        let ground_line = lines
            .next()
            .ok_or_else(|| SetSystemError::MalformedText("missing ground set line".into()))?;
        let ground: Vec<EdgeLabel> = ground_line
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map(EdgeLabel)
                    .map_err(|_| SetSystemError::MalformedText(t.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let system = SetSystem::new(ground, Vec::new())?;
        let mut feasible = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "-" {
                feasible.push(0);
                continue;
            }
            let labels: Vec<EdgeLabel> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map(EdgeLabel)
                        .map_err(|_| SetSystemError::MalformedText(t.to_string()))
                })
                .collect::<Result<_, _>>()?;
            feasible.push(system.mask_of(&labels)?);
        }
        SetSystem::new(system.ground, feasible)
    }
}

impl fmt::Display for SetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

/// Symmetric difference of two sorted deduplicated mask lists.
fn sym_diff(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::parse_signed_rotation;

    fn labels(v: &[u32]) -> Vec<EdgeLabel> {
        v.iter().map(|&l| EdgeLabel(l)).collect()
    }

    fn system(ground: &[u32], feasible: &[u64]) -> SetSystem {
        SetSystem::new(labels(ground), feasible.to_vec()).unwrap()
    }

    #[test]
    fn counterexample_feasible_family() {
        let b = parse_signed_rotation("-1,-2,3,1,2,4,3,4").unwrap();
        let d = SetSystem::from_ribbon_graph(b.graph());
        // {}, {1}, {2}, {13}, {23}, {34}, {234}, {134}
        assert_eq!(d.feasible_masks(), &[0b0000, 0b0001, 0b0010, 0b0101, 0b0110, 0b1100, 0b1101, 0b1110]);
        assert_eq!(d.cardinality(), 8);
    }

    #[test]
    fn trivial_loop_systems() {
        let d = SetSystem::from_ribbon_graph(parse_signed_rotation("1,1").unwrap().graph());
        assert_eq!(d.feasible_masks(), &[0]);
        let d = SetSystem::from_ribbon_graph(parse_signed_rotation("-1,1").unwrap().graph());
        assert_eq!(d.feasible_masks(), &[0, 1]);
    }

    #[test]
    fn ribbon_graph_systems_are_delta_matroids() {
        for rot in ["1,1", "-1,1", "1,2,1,2", "-1,-2,3,1,2,4,3,4", "1,2,3,2,1,4,3,4"] {
            let d = SetSystem::from_ribbon_graph(parse_signed_rotation(rot).unwrap().graph());
            assert!(d.is_delta_matroid(), "{rot}");
        }
    }

    #[test]
    fn exchange_axiom_brute_force() {
        // the axiom with u = 1 on X = {} against Y = {1,2,3} has no valid v
        assert!(!system(&[1, 2, 3], &[0b000, 0b111]).is_delta_matroid());
        // {∅}: no pair with nonempty symmetric difference
        assert!(system(&[1, 2], &[0]).is_delta_matroid());
        // {∅, {1,2}} is D of an interlaced orientable pair, hence feasible
        assert!(system(&[1, 2], &[0b00, 0b11]).is_delta_matroid());
        // improper systems are flagged, not errors
        assert!(!system(&[1, 2], &[]).is_delta_matroid());
        assert!(!system(&[1, 2], &[]).is_proper());
    }

    #[test]
    fn evenness() {
        assert!(SetSystem::from_ribbon_graph(parse_signed_rotation("1,2,1,2").unwrap().graph()).is_even());
        assert!(!SetSystem::from_ribbon_graph(parse_signed_rotation("-1,1").unwrap().graph()).is_even());
        assert!(system(&[1], &[0]).is_even());
        assert!(system(&[1, 2], &[]).is_even());
    }

    #[test]
    fn twist_basics() {
        let d = system(&[1, 2, 3], &[0b001, 0b110]);
        assert_eq!(d.twist(&[]).unwrap(), d);
        let t = d.twist(&labels(&[1, 3])).unwrap();
        assert_eq!(t.feasible_masks(), &[0b011, 0b100]);
        assert_eq!(t.twist(&labels(&[1, 3])).unwrap(), d);
        assert!(matches!(
            d.twist(&labels(&[7])).unwrap_err(),
            SetSystemError::UnknownElement(7)
        ));
    }

    #[test]
    fn loop_complementation_on_trivial_system() {
        let d = system(&[1, 2], &[0]);
        let lc = d.loop_complementation(EdgeLabel(2)).unwrap();
        assert_eq!(lc.feasible_masks(), &[0b00, 0b10]);
    }

    #[test]
    fn loop_complementation_cardinality_for_even_systems() {
        // |F''| = |F| + |F_without_e| when D is even
        let b = parse_signed_rotation("1,2,1,3,2,3").unwrap();
        let d = SetSystem::from_ribbon_graph(b.graph());
        assert!(d.is_even());
        for e in b.graph().labels() {
            let bit = d.element_bit(e).unwrap();
            let avoiding = d.feasible_masks().iter().filter(|&&m| m & bit == 0).count() as u64;
            let lc = d.loop_complementation(e).unwrap();
            assert_eq!(lc.cardinality(), d.cardinality() + avoiding);
        }
    }

    #[test]
    fn slide_without_candidates_is_identity() {
        // nothing of the form F ∪ b with F ⊆ E∖{a,b} is feasible
        let d = system(&[1, 2, 3], &[0b001, 0b011]);
        assert_eq!(d.handle_slide(EdgeLabel(2), EdgeLabel(3)).unwrap(), d);
    }

    #[test]
    fn exchange_on_empty_set_system() {
        let d = system(&[1, 2], &[0]);
        let e = d.exchange_handle_ends(EdgeLabel(1), EdgeLabel(2)).unwrap();
        assert_eq!(e.feasible_masks(), &[0b00, 0b11]);
    }

    #[test]
    fn four_term_trivial_when_elements_unused() {
        let d = system(&[1, 2, 3, 4], &[0b0100, 0b1000, 0b1100]);
        let ft = d.four_term_check(EdgeLabel(1), EdgeLabel(2)).unwrap();
        assert!(ft.holds);
        assert_eq!(ft.original, 3);
        assert_eq!(
            d.four_term_check(EdgeLabel(1), EdgeLabel(1)).unwrap_err(),
            SetSystemError::EqualElements
        );
    }

    #[test]
    fn twisting_the_counterexample_by_feasible_sets_keeps_two_singletons() {
        let b = parse_signed_rotation("-1,-2,3,1,2,4,3,4").unwrap();
        let d = SetSystem::from_ribbon_graph(b.graph());
        for &f in d.feasible_masks() {
            let twisted = d.twist_mask(f);
            let singletons = twisted
                .feasible_masks()
                .iter()
                .filter(|m| m.count_ones() == 1)
                .count();
            assert!(singletons >= 2, "twist by {f:#b} left {singletons} singletons");
        }
    }

    #[test]
    fn loop_complementation_matches_its_membership_rule() {
        // independent oracle: sets without e keep their membership, and
        // m ∪ {e} ends up feasible iff exactly one of m, m ∪ {e} was
        let mut rng_state = 0xabcd_ef01_2345_6789u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            rng_state
        };
        for _ in 0..50 {
            let ground_size = (next() % 6 + 1) as usize;
            let total = 1u64 << ground_size;
            let feasible: Vec<u64> = (0..total).filter(|_| next() % 2 == 0).collect();
            let d = SetSystem::new(
                (1..=ground_size as u32).map(EdgeLabel).collect(),
                feasible,
            )
            .unwrap();
            for idx in 0..ground_size {
                let e = EdgeLabel(idx as u32 + 1);
                let bit = 1u64 << idx;
                let got = d.loop_complementation(e).unwrap();
                for m in 0..total {
                    let expected = if m & bit == 0 {
                        d.contains(m)
                    } else {
                        d.contains(m) ^ d.contains(m & !bit)
                    };
                    assert_eq!(got.contains(m), expected, "mask {m:#b}");
                }
                // the rule applied twice restores every membership
                assert_eq!(got.loop_complementation(e).unwrap(), d);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let d = system(&[1, 2, 4], &[0b000, 0b011, 0b101]);
        let text = d.to_text();
        assert_eq!(text, "1 2 4\n-\n1 2\n1 4\n");
        assert_eq!(SetSystem::from_text(&text).unwrap(), d);
        assert!(matches!(
            SetSystem::from_text("1 2\n5\n").unwrap_err(),
            SetSystemError::UnknownElement(5)
        ));
    }

    #[test]
    fn construction_guards() {
        assert!(matches!(
            SetSystem::new(labels(&[1, 1]), vec![]).unwrap_err(),
            SetSystemError::DuplicateElement(1)
        ));
        assert!(matches!(
            SetSystem::new(labels(&[1]), vec![0b10]).unwrap_err(),
            SetSystemError::MaskOutOfRange(2)
        ));
        let big: Vec<u32> = (1..=25).collect();
        assert!(matches!(
            SetSystem::new(labels(&big), vec![]).unwrap_err(),
            SetSystemError::GroundTooLarge(25, MAX_GROUND)
        ));
    }
}
