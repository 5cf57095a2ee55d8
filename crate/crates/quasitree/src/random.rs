//! Seeded random instances for property sweeps: bouquets, multi-vertex
//! ribbon graphs, and set systems. Callers pass an explicit RNG so every run
//! is reproducible from its seed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::delta_matroid::SetSystem;
use crate::ribbon::{Bouquet, Edge, EdgeLabel, RibbonGraph, Sign, SignedRotation};

/// Uniformly shuffled rotation of `n` orientable loops.
pub fn random_orientable_bouquet<R: Rng>(n: usize, rng: &mut R) -> Bouquet {
    random_bouquet_with_twists(n, 0, rng)
}

/// Shuffled rotation with exactly one non-orientable loop.
pub fn random_one_twist_bouquet<R: Rng>(n: usize, rng: &mut R) -> Bouquet {
    assert!(n >= 1);
    random_bouquet_with_twists(n, 1, rng)
}

/// Shuffled rotation with exactly `twists` non-orientable loops.
pub fn random_bouquet_with_twists<R: Rng>(n: usize, twists: usize, rng: &mut R) -> Bouquet {
    assert!(twists <= n);
    let mut tokens: Vec<i32> = (1..=n as i32).flat_map(|l| [l, l]).collect();
    tokens.shuffle(rng);
    let mut labels: Vec<i32> = (1..=n as i32).collect();
    labels.shuffle(rng);
    for &l in labels.iter().take(twists) {
        let first = tokens.iter().position(|&t| t == l).unwrap();
        tokens[first] = -l;
    }
    Bouquet::from_rotation(&SignedRotation::new(tokens).unwrap())
}

/// Ribbon graph with `n_edges` edges spread over up to `max_vertices`
/// vertices (bare vertices allowed), each edge twisted with probability 1/2.
pub fn random_ribbon_graph<R: Rng>(n_edges: usize, max_vertices: usize, rng: &mut R) -> RibbonGraph {
    assert!(max_vertices >= 1);
    let n_vertices = rng.gen_range(1..=max_vertices);
    let mut hedges: Vec<usize> = (0..2 * n_edges).collect();
    hedges.shuffle(rng);
    let mut vertices = vec![Vec::new(); n_vertices];
    for h in hedges {
        vertices[rng.gen_range(0..n_vertices)].push(h);
    }
    let edges = (0..n_edges)
        .map(|i| Edge {
            label: EdgeLabel(i as u32 + 1),
            ends: (2 * i, 2 * i + 1),
            sign: if rng.gen_bool(0.5) {
                Sign::Minus
            } else {
                Sign::Plus
            },
        })
        .collect();
    RibbonGraph::new(vertices, edges).expect("random construction is structurally valid")
}

/// Nonempty feasible family over ground `1..=ground_size`, each subset kept
/// with probability 1/2 (resampled if everything is dropped).
pub fn random_set_system<R: Rng>(ground_size: usize, rng: &mut R) -> SetSystem {
    assert!((1..=16).contains(&ground_size));
    let ground: Vec<EdgeLabel> = (1..=ground_size as u32).map(EdgeLabel).collect();
    let total = 1u64 << ground_size;
    loop {
        let feasible: Vec<u64> = (0..total).filter(|_| rng.gen_bool(0.5)).collect();
        if !feasible.is_empty() {
            return SetSystem::new(ground, feasible).unwrap();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic_per_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(random_orientable_bouquet(6, &mut a), random_orientable_bouquet(6, &mut b));
        assert_eq!(random_ribbon_graph(5, 4, &mut a), random_ribbon_graph(5, 4, &mut b));
        assert_eq!(random_set_system(6, &mut a), random_set_system(6, &mut b));
    }

    #[test]
    fn twist_counts_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=8 {
            let b = random_one_twist_bouquet(n, &mut rng);
            let twisted = b.graph().edges().iter().filter(|e| e.sign.is_minus()).count();
            assert_eq!(twisted, 1);
            assert!(!b.graph().is_orientable());
            let o = random_orientable_bouquet(n, &mut rng);
            assert!(o.graph().is_orientable());
        }
    }
}
