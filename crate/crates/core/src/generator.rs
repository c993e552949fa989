//! Seeded random generation of centered test polytopes.
//!
//! Every consumer of the shrinking machinery wants the same kind of input: a
//! compact, full-dimensional, centered labeled polytope with small integer
//! normals. We build one by sampling `extra_rows` random normals in
//! `[-4,4]^n \ {0}`, appending the box rows `±eᵢ` so the result is always
//! compact, giving every row a small positive rational offset so the origin
//! is interior, and then translating the polytope so the shrinking procedure
//! ends at the origin. The generator is a pure function of its arguments:
//! the same `(dim, extra_rows, seed)` triple always yields the same
//! polytope, so failures reported by a property test are reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::polytope::{Constraint, LabeledPolytope};
use crate::rational::{IntVector, Rational};
use crate::shrink;

/// Sample a compact, full-dimensional, centered polytope in dimension `dim`
/// with `2·dim + extra_rows` constraints.
///
/// The raw sample keeps the origin strictly interior (all offsets are
/// positive), which guarantees fullness and feasibility; the box rows
/// guarantee compactness. The returned polytope is the centered translate,
/// so its shrinking procedure terminates at `0`.
pub fn random_centered_polytope(dim: usize, extra_rows: usize, seed: u64) -> LabeledPolytope {
    assert!(dim >= 1, "ambient dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut constraints = Vec::new();

    let offset = |rng: &mut ChaCha8Rng| -> Rational {
        let num: i64 = rng.random_range(1..=8);
        let den: i64 = rng.random_range(1..=3);
        crate::rational::ratio(num, den)
    };

    for _ in 0..extra_rows {
        let normal = loop {
            let coords: Vec<i64> = (0..dim).map(|_| rng.random_range(-4..=4)).collect();
            if coords.iter().any(|&c| c != 0) {
                break IntVector::from_i64(&coords);
            }
        };
        let lambda = offset(&mut rng);
        constraints.push(Constraint::new(normal, lambda));
    }

    for axis in 0..dim {
        for sign in [1i64, -1] {
            let mut coords = vec![0i64; dim];
            coords[axis] = sign;
            let lambda = offset(&mut rng);
            constraints.push(Constraint::new(IntVector::from_i64(&coords), lambda));
        }
    }

    let raw = LabeledPolytope::new(dim, constraints);
    let (centered, _) = shrink::center(&raw)
        .expect("sampled polytope is compact and full-dimensional by construction");
    centered
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope;

    #[test]
    fn generated_polytopes_are_compact_full_dimensional_and_centered() {
        for seed in 0..24u64 {
            let dim = 2 + (seed as usize % 3);
            let p = random_centered_polytope(dim, 2, seed);
            assert_eq!(p.constraints.len(), 2 * dim + 2);
            p.validate().unwrap();
            assert!(p.is_compact());
            assert_eq!(polytope::dimension(&p).unwrap(), dim);

            let (stages, endpoint) = shrink::shrink_stages(&p).unwrap();
            assert!(endpoint.is_zero(), "seed {seed}: endpoint {endpoint:?}");
            // Centered means each drop set is exactly the set of rows whose
            // offset equals the drop time.
            for stage in &stages {
                let expected: Vec<usize> = (0..p.constraints.len())
                    .filter(|&i| p.constraints[i].offset == stage.time)
                    .collect();
                assert_eq!(stage.d_set, expected, "seed {seed}");
            }
        }
    }

    #[test]
    fn generator_is_deterministic_in_the_seed() {
        let a = random_centered_polytope(3, 4, 17);
        let b = random_centered_polytope(3, 4, 17);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        let c = random_centered_polytope(3, 4, 18);
        assert_ne!(format!("{a:?}"), format!("{c:?}"));
    }
}
