//! Decomposition of a centered polytope into an intersection of monotone
//! polytopes and cylinders over monotone polytopes, with a machine check of
//! the intersection equality.
//!
//! After shrinking, the constraint set splits as
//! `{1,…,d} = D_1 ∪ … ∪ D_{M+1} ∪ I_1 ∪ … ∪ I_N`: the jam groups `D_j`
//! freeze at times `t_1 < … < t_{M+1}` and the survivors group by their
//! common offset values `λ_{j_1} < … < λ_{j_N}`, all larger than `t_{M+1}`.
//! The factors are
//!
//! * `Δ̃ⁿ_0 = ∩ {⟨x,v_i⟩ ≤ t_{M+1} : i ∈ ∪ D_j}`,
//! * `Δ̃ⁿ_k = ∩ {⟨x,v_i⟩ ≤ λ_{j_k} : i ∈ ∪ D_j ∪ I_k}` for `k = 1,…,N`,
//! * cylinders `∩ {⟨x,v_i⟩ ≤ t_j : i ∈ D_1 ∪ … ∪ D_j}` for `j = 1,…,M`,
//!
//! and the original polytope is exactly their intersection. Cylinders stay
//! in ambient coordinates: their normals already span the frozen subspace,
//! so the constraint set literally equals the product of a compact monotone
//! polytope with the complementary subspace, and no basis change is needed.

use num_traits::Zero;

use crate::error::Result;
use crate::linalg;
use crate::polytope::{classify, subset_by_vertices, vertices, Constraint, LabeledPolytope};
use crate::rational::{RatVector, Rational};
use crate::shrink::{shrink_stages, ShrinkTrace};

/// A survivor group `I_k`: the constraints sharing offset `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub indices: Vec<usize>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionPlan {
    /// The centered polytope the plan decomposes.
    pub polytope: LabeledPolytope,
    /// Shrink endpoint of the original input; the plan's polytope is the
    /// input translated by this vector.
    pub translation: RatVector,
    /// Stage data of the centered polytope. The redundancy-event timeline
    /// is not part of a decomposition and is left empty here.
    pub trace: ShrinkTrace,
    /// `I_1, …, I_N` ordered by increasing offset value.
    pub groups: Vec<Group>,
    pub n_groups: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorKind {
    /// `Δ̃ⁿ_k`; `FullDim(0)` is the core factor on the jammed normals.
    FullDim(usize),
    /// Cylinder over `Δ̃^{k_1+…+k_j}` in ambient coordinates.
    Cylinder(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneFactor {
    pub kind: FactorKind,
    pub polytope: LabeledPolytope,
    /// Common offset of every constraint of this factor.
    pub level: Rational,
}

/// Centers `P`, shrinks it, and groups the surviving constraints by their
/// offsets, validating `t_1 < … < t_{M+1} < λ_{j_1} < … < λ_{j_N}`.
pub fn decomposition_plan(p: &LabeledPolytope) -> Result<DecompositionPlan> {
    let (_, endpoint) = shrink_stages(p)?;
    let centered = p.translated(&endpoint);
    let (stages, center_pt) = shrink_stages(&centered)?;
    assert!(
        center_pt.0.iter().all(Zero::is_zero),
        "centering moves the shrink endpoint to the origin"
    );
    let frozen: Vec<usize> = stages.iter().flat_map(|s| s.d_set.clone()).collect();
    let mut survivors: Vec<usize> = (0..centered.constraints.len())
        .filter(|i| !frozen.contains(i))
        .collect();
    survivors.sort_by(|&a, &b| {
        (&centered.constraints[a].offset, a).cmp(&(&centered.constraints[b].offset, b))
    });
    let mut groups: Vec<Group> = Vec::new();
    for i in survivors {
        let value = centered.constraints[i].offset.clone();
        match groups.last_mut() {
            Some(g) if g.value == value => g.indices.push(i),
            _ => groups.push(Group {
                indices: vec![i],
                value,
            }),
        }
    }
    let t_final = stages.last().expect("at least one stage").time.clone();
    for w in stages.windows(2) {
        assert!(w[0].time < w[1].time, "stage times strictly increase");
    }
    if let Some(first) = groups.first() {
        assert!(
            t_final < first.value,
            "survivor offsets exceed the final stage time"
        );
    }
    Ok(DecompositionPlan {
        polytope: centered,
        translation: endpoint,
        m: stages.len() - 1,
        trace: ShrinkTrace {
            m: stages.len() - 1,
            stages,
            endpoint: center_pt,
            events: Vec::new(),
        },
        n_groups: groups.len(),
        groups,
    })
}

fn factor_from(
    p: &LabeledPolytope,
    indices: impl IntoIterator<Item = usize>,
    level: &Rational,
    kind: FactorKind,
) -> MonotoneFactor {
    let mut idx: Vec<usize> = indices.into_iter().collect();
    idx.sort();
    MonotoneFactor {
        kind,
        polytope: LabeledPolytope::new(
            p.dim,
            idx.iter()
                .map(|&i| Constraint::new(p.constraints[i].normal.clone(), level.clone()))
                .collect(),
        ),
        level: level.clone(),
    }
}

/// The monotone factors, in the order `Δ̃ⁿ_0, Δ̃ⁿ_1, …, Δ̃ⁿ_N,
/// Cylinder(1), …, Cylinder(M)`.
pub fn build_factors(plan: &DecompositionPlan) -> Vec<MonotoneFactor> {
    let p = &plan.polytope;
    let stages = &plan.trace.stages;
    let frozen_all: Vec<usize> = stages.iter().flat_map(|s| s.d_set.clone()).collect();
    let t_final = &stages.last().expect("at least one stage").time;
    let mut factors = vec![factor_from(
        p,
        frozen_all.iter().copied(),
        t_final,
        FactorKind::FullDim(0),
    )];
    for (k, g) in plan.groups.iter().enumerate() {
        factors.push(factor_from(
            p,
            frozen_all.iter().chain(g.indices.iter()).copied(),
            &g.value,
            FactorKind::FullDim(k + 1),
        ));
    }
    let mut prefix: Vec<usize> = Vec::new();
    for (j, stage) in stages.iter().enumerate().take(plan.m) {
        prefix.extend(stage.d_set.iter().copied());
        factors.push(factor_from(
            p,
            prefix.iter().copied(),
            &stage.time,
            FactorKind::Cylinder(j + 1),
        ));
    }
    factors
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    /// Check (a): the input is contained in every factor.
    pub containment: Vec<bool>,
    /// Check (b): the intersection of all factors has exactly the input's
    /// vertex set.
    pub intersection_matches: bool,
    /// Check (c): each factor's essential polytope is compact and monotone
    /// (for cylinders, the essential polytope lives in the span of the
    /// factor's normals).
    pub factor_states: Vec<bool>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.containment.iter().all(|&b| b)
            && self.intersection_matches
            && self.factor_states.iter().all(|&b| b)
    }
}

/// The intersection of all factors, with duplicate normals collapsed to
/// their minimal offset. Every factor normal is one of the original `v_i`,
/// so the row count stays at most the input's.
fn intersection_polytope(dim: usize, factors: &[MonotoneFactor]) -> LabeledPolytope {
    let mut rows: Vec<Constraint> = Vec::new();
    for f in factors {
        for c in &f.polytope.constraints {
            match rows.iter_mut().find(|r| r.normal == c.normal) {
                Some(r) => {
                    if c.offset < r.offset {
                        r.offset = c.offset.clone();
                    }
                }
                None => rows.push(c.clone()),
            }
        }
    }
    LabeledPolytope::new(dim, rows)
}

/// Essential polytope of a factor: the factor itself for full-dimensional
/// ones; for cylinders, the factor restricted to the span of its normals by
/// explicit integral equality rows.
fn essential_polytope(f: &MonotoneFactor) -> LabeledPolytope {
    let mut p = f.polytope.clone();
    if let FactorKind::Cylinder(_) = f.kind {
        let normal_rows: Vec<RatVector> =
            p.constraints.iter().map(|c| c.normal.to_rat()).collect();
        for u in linalg::nullspace(&normal_rows, p.dim) {
            let (_, w) = u.clear_denominators();
            p.equalities.push((w, Rational::zero()));
        }
    }
    p
}

pub fn verify_theorem1(p: &LabeledPolytope, factors: &[MonotoneFactor]) -> VerificationReport {
    let p_vertices = vertices(p).ok();
    let containment = factors
        .iter()
        .map(|f| match &p_vertices {
            Some(vs) => subset_by_vertices(vs, &f.polytope),
            None => false,
        })
        .collect();
    let inter = intersection_polytope(p.dim, factors);
    let intersection_matches = match (&p_vertices, vertices(&inter)) {
        (Some(vs), Ok(ws)) => vs.vertices == ws.vertices,
        _ => false,
    };
    let factor_states = factors
        .iter()
        .map(|f| {
            let essential = essential_polytope(f);
            essential.is_compact()
                && essential.feasible_point().is_ok()
                && match classify(&f.polytope) {
                    Ok(r) => r.monotone,
                    Err(_) => false,
                }
        })
        .collect();
    VerificationReport {
        containment,
        intersection_matches,
        factor_states,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::polytope::is_subset;
    use crate::rational::rat;

    fn rows_of(f: &MonotoneFactor) -> (Vec<Vec<i64>>, Rational) {
        (
            f.polytope
                .constraints
                .iter()
                .map(|c| c.normal.0.iter().map(|z| i64::try_from(z).unwrap()).collect())
                .collect(),
            f.level.clone(),
        )
    }

    #[test]
    fn hexagon_plan_and_factors() {
        let plan = decomposition_plan(&fixtures::hexagon()).unwrap();
        assert_eq!((plan.m, plan.n_groups), (0, 1));
        assert_eq!(plan.groups[0].indices, vec![5]);
        assert_eq!(plan.groups[0].value, rat(4));
        let factors = build_factors(&plan);
        assert_eq!(factors.len(), 2);
        assert_eq!(
            rows_of(&factors[0]),
            (
                vec![vec![0, 1], vec![0, -1], vec![-1, 0], vec![1, 1], vec![1, -1]],
                rat(3)
            )
        );
        assert_eq!(
            rows_of(&factors[1]),
            (
                vec![
                    vec![0, 1],
                    vec![0, -1],
                    vec![-1, 0],
                    vec![1, 1],
                    vec![1, -1],
                    vec![2, 1]
                ],
                rat(4)
            )
        );
        assert!(verify_theorem1(&fixtures::hexagon(), &factors).all_passed());
    }

    #[test]
    fn frustum_plan_and_factors() {
        let plan = decomposition_plan(&fixtures::frustum()).unwrap();
        assert_eq!((plan.m, plan.n_groups), (1, 0));
        let factors = build_factors(&plan);
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].kind, FactorKind::FullDim(0));
        assert_eq!(
            rows_of(&factors[0]),
            (
                vec![
                    vec![0, 0, 1],
                    vec![0, 0, -1],
                    vec![1, 0, 1],
                    vec![-1, 0, 1],
                    vec![0, 1, 1],
                    vec![0, -1, 1]
                ],
                rat(2)
            )
        );
        assert_eq!(factors[1].kind, FactorKind::Cylinder(1));
        assert_eq!(
            rows_of(&factors[1]),
            (vec![vec![0, 0, 1], vec![0, 0, -1]], rat(1))
        );
        assert!(verify_theorem1(&fixtures::frustum(), &factors).all_passed());
    }

    #[test]
    fn pentagon_plan_and_factors() {
        let plan = decomposition_plan(&fixtures::pentagon()).unwrap();
        assert_eq!((plan.m, plan.n_groups), (1, 1));
        assert_eq!(plan.groups[0].indices, vec![3]);
        assert_eq!(plan.groups[0].value, rat(8));
        let factors = build_factors(&plan);
        assert_eq!(factors.len(), 3);
        assert_eq!(
            rows_of(&factors[0]),
            (
                vec![vec![0, 1], vec![0, -1], vec![1, 1], vec![-1, 0]],
                rat(6)
            )
        );
        assert_eq!(
            rows_of(&factors[1]),
            (
                vec![vec![0, 1], vec![0, -1], vec![1, 1], vec![2, -1], vec![-1, 0]],
                rat(8)
            )
        );
        assert_eq!(rows_of(&factors[2]), (vec![vec![0, 1], vec![0, -1]], rat(2)));
        assert!(verify_theorem1(&fixtures::pentagon(), &factors).all_passed());
    }

    #[test]
    fn heptagon_and_cut_box_verify() {
        for p in [fixtures::heptagon(), fixtures::cut_box()] {
            let plan = decomposition_plan(&p).unwrap();
            let factors = build_factors(&plan);
            assert_eq!(factors.len(), plan.n_groups + 1 + plan.m);
            let report = verify_theorem1(&p, &factors);
            assert!(report.all_passed());
        }
        // the heptagon survivors have three distinct offsets
        let plan = decomposition_plan(&fixtures::heptagon()).unwrap();
        assert_eq!(plan.n_groups, 3);
        assert_eq!(
            plan.groups.iter().map(|g| g.value.clone()).collect::<Vec<_>>(),
            vec![rat(6), rat(7), rat(12)]
        );
    }

    #[test]
    fn monotone_input_is_its_own_single_factor() {
        let plan = decomposition_plan(&fixtures::square(3)).unwrap();
        assert_eq!((plan.m, plan.n_groups), (0, 0));
        let factors = build_factors(&plan);
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].polytope, fixtures::square(3));
        assert!(verify_theorem1(&fixtures::square(3), &factors).all_passed());
    }

    #[test]
    fn uncentered_input_is_translated_first() {
        let shifted = LabeledPolytope::from_rows(
            2,
            &[(&[1, 0], 2), (&[-1, 0], 0), (&[0, 1], 1), (&[0, -1], 1)],
        );
        let plan = decomposition_plan(&shifted).unwrap();
        assert_eq!(plan.translation, RatVector::from_i64(&[1, 0]));
        assert_eq!(plan.polytope, fixtures::square(1));
    }

    #[test]
    fn scaled_core_contains_each_full_dim_factor() {
        // Each Δ̃ⁿ_k sits inside the core factor rescaled by λ_{j_k}/t_{M+1}.
        for p in [fixtures::hexagon(), fixtures::pentagon(), fixtures::heptagon()] {
            let plan = decomposition_plan(&p).unwrap();
            let factors = build_factors(&plan);
            let t_final = plan.trace.stages.last().unwrap().time.clone();
            for (k, g) in plan.groups.iter().enumerate() {
                let scaled = factors[0].polytope.scaled(&(&g.value / &t_final));
                assert!(is_subset(&factors[k + 1].polytope, &scaled).unwrap());
            }
        }
    }

    #[test]
    fn wrong_scale_control_fails_only_intersection() {
        let factors = build_factors(&decomposition_plan(&fixtures::square(2)).unwrap());
        let report = verify_theorem1(&fixtures::square(1), &factors);
        assert!(report.containment.iter().all(|&b| b));
        assert!(!report.intersection_matches);
        assert!(report.factor_states.iter().all(|&b| b));
        assert!(!report.all_passed());
    }
}
