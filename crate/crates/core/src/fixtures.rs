//! Shared test fixtures: the running example polytopes used across the
//! crate's unit and integration tests.
//!
//! Constraint order matters for facet indexing and is part of each fixture's
//! contract; tests freeze vertex sets, shrink timelines and decompositions
//! against these exact orderings.

use crate::polytope::LabeledPolytope;

/// Moment polytope of `CP²` at level `λ`: `{−x₁ ≤ λ, −x₂ ≤ λ, x₁+x₂ ≤ λ}`.
pub fn cp2(lambda: i64) -> LabeledPolytope {
    LabeledPolytope::from_rows(2, &[(&[-1, 0], lambda), (&[0, -1], lambda), (&[1, 1], lambda)])
}

/// Square `[−λ, λ]²` with normals ordered `±e₁, ±e₂`.
pub fn square(lambda: i64) -> LabeledPolytope {
    LabeledPolytope::from_rows(
        2,
        &[(&[1, 0], lambda), (&[-1, 0], lambda), (&[0, 1], lambda), (&[0, -1], lambda)],
    )
}

/// Segment `[−λ, λ]`.
pub fn segment(lambda: i64) -> LabeledPolytope {
    LabeledPolytope::from_rows(1, &[(&[1], lambda), (&[-1], lambda)])
}

/// Irregular hexagon with one non-integral vertex `(7/3, −2/3)`; shrinking
/// runs in two stages with survivor index 6 joining at the end.
pub fn hexagon() -> LabeledPolytope {
    LabeledPolytope::from_rows(
        2,
        &[
            (&[0, 1], 3),
            (&[0, -1], 3),
            (&[-1, 0], 3),
            (&[1, 1], 3),
            (&[1, -1], 3),
            (&[2, 1], 4),
        ],
    )
}

/// Frustum over a square: the slab `|x₃| ≤ 1` cut by four slanted facets.
/// Its first shrinking stage collapses only one dimension, leaving a
/// segment as the final slice.
pub fn frustum() -> LabeledPolytope {
    LabeledPolytope::from_rows(
        3,
        &[
            (&[0, 0, 1], 1),
            (&[0, 0, -1], 1),
            (&[1, 0, 1], 2),
            (&[-1, 0, 1], 2),
            (&[0, 1, 1], 2),
            (&[0, -1, 1], 2),
        ],
    )
}

/// Heptagon whose shrinking exercises three distinct stage times.
pub fn heptagon() -> LabeledPolytope {
    LabeledPolytope::from_rows(
        2,
        &[
            (&[1, 0], 4),
            (&[-1, 0], 4),
            (&[0, 1], 4),
            (&[0, -1], 4),
            (&[1, 1], 6),
            (&[-1, 1], 7),
            (&[-2, -3], 12),
        ],
    )
}

/// Box with one corner sliced off; the thin `|x₃| ≤ 1` slab collapses first.
pub fn cut_box() -> LabeledPolytope {
    LabeledPolytope::from_rows(
        3,
        &[
            (&[1, 0, 0], 4),
            (&[-1, 0, 0], 4),
            (&[0, 1, 0], 3),
            (&[0, -1, 0], 3),
            (&[1, 1, 0], 5),
            (&[0, 0, 1], 1),
            (&[0, 0, -1], 1),
        ],
    )
}

/// Pentagon with a constraint that leaves and re-enters relevance during
/// shrinking: facet 4 becomes redundant at `t = 4` while facet 3 reappears.
pub fn pentagon() -> LabeledPolytope {
    LabeledPolytope::from_rows(
        2,
        &[
            (&[0, 1], 2),
            (&[0, -1], 2),
            (&[1, 1], 6),
            (&[2, -1], 8),
            (&[-1, 0], 6),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed_and_feasible() {
        for p in [cp2(1), square(1), hexagon(), heptagon(), pentagon()] {
            p.validate().unwrap();
            p.feasible_point().unwrap();
            assert!(p.is_compact());
        }
        for p in [frustum(), cut_box()] {
            p.validate().unwrap();
            p.feasible_point().unwrap();
            assert!(p.is_compact());
        }
        segment(1).validate().unwrap();
    }
}
