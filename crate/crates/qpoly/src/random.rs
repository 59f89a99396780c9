//! Random generation of small valid polyhedra for stress tests.
//!
//! Strategy: sample two random cycle decompositions (all cycles of length
//! at least 3) of the arrow set, recover the quiver via
//! `from_permutation_pair`, and reject anything that fails validation or
//! the requested shape constraints. Rejection is cheap at these sizes.

use crate::poly::{from_permutation_pair, QuiverPolyhedron};
use rand::seq::SliceRandom;
use rand::Rng;

pub struct TorusSampler {
    pub max_vertices: usize,
    pub max_arrows: usize,
}

impl Default for TorusSampler {
    fn default() -> Self {
        TorusSampler {
            max_vertices: 4,
            max_arrows: 10,
        }
    }
}

impl TorusSampler {
    /// One random valid genus-1 unweighted polyhedron, or None if the
    /// attempt was rejected (caller loops).
    pub fn try_sample<R: Rng>(&self, rng: &mut R) -> Option<QuiverPolyhedron> {
        let n = rng.gen_range(3..=self.max_arrows);
        let plus = random_cycle_cover(rng, n)?;
        let minus = random_cycle_cover(rng, n)?;
        let qp = from_permutation_pair(n, &plus, &minus);
        if qp.vertices.len() > self.max_vertices {
            return None;
        }
        if !qp.validate().is_empty() {
            return None;
        }
        if qp.surface_topology().genus != 1 {
            return None;
        }
        Some(qp)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, max_tries: usize) -> Option<QuiverPolyhedron> {
        (0..max_tries).find_map(|_| self.try_sample(rng))
    }
}

/// Random permutation of 0..n as disjoint cycles, rejecting fixed points
/// and 2-cycles (faces must have length >= 3).
fn random_cycle_cover<R: Rng>(rng: &mut R, n: usize) -> Option<Vec<Vec<usize>>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            cur = perm[cur];
        }
        if cycle.len() < 3 {
            return None;
        }
        cycles.push(cycle);
    }
    Some(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampler_produces_valid_tori() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sampler = TorusSampler::default();
        let mut found = 0;
        for _ in 0..2000 {
            if let Some(qp) = sampler.try_sample(&mut rng) {
                assert!(qp.validate().is_empty());
                assert_eq!(qp.surface_topology().genus, 1);
                assert!(qp.vertices.len() <= 4 && qp.arrows.len() <= 10);
                found += 1;
            }
        }
        // Acceptance rate is a few percent; the consumers loop anyway.
        assert!(found >= 20, "sampler too lossy: {found}/2000");
    }
}
