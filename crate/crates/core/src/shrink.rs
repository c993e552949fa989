//! The shrinking procedure: every facet of `Δ = ∩{⟨x,v_i⟩ ≤ λ_i}` moves
//! inward at unit speed, `Δ^t = ∩{⟨x,v_i⟩ ≤ λ_i − t}`, until the polytope
//! degenerates to a point.
//!
//! Two kinds of combinatorial events happen on the way. At a *stage time*
//! `t_j` a group `D_j` of facets jams: those constraints are tight on the
//! whole slice `Δ^{t_j}` and stay frozen as equalities `⟨x,v_i⟩ = λ_i − t_j`
//! afterwards, dropping the dimension by `k_j`. Between stage times a
//! constraint may become *redundant* (implied by the others) or — because
//! projections can change labels — become *relevant* again later, so
//! redundancy is tracked per time, never memoized.
//!
//! Stage times come from one exact LP per stage (maximize `t` subject to the
//! active inequalities and frozen equalities; the slack function is affine
//! of slope −1, so the optimum is the exact rational stage time). Slices
//! keep ambient coordinates with explicit equality rows; all orthogonality
//! statements are checked rationally, no orthonormal bases appear anywhere.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{lp_solve, LpProblem, LpStatus};
use crate::polytope::{dimension, for_each_combination, Constraint, LabeledPolytope};
use crate::rational::{primitive_decompose, rat, IntVector, RatVector, Rational};

/// Component of a surviving normal orthogonal to the frozen-normal span,
/// with its label/primitive split inside the saturated direction lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedNormal {
    pub index: usize,
    pub vector: RatVector,
    /// `vector = label · primitive`; zero label for normals that project away.
    pub label: Rational,
    pub primitive: IntVector,
    /// Set when the projection is not a rational multiple of a lattice
    /// vector of the sliced direction lattice; cannot occur for orthogonal
    /// projections of integer normals, but recorded for transparency.
    pub non_lattice: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShrinkStage {
    /// 1-based stage number `j`.
    pub index: usize,
    pub time: Rational,
    /// Constraints jamming at this stage (0-based, ascending).
    pub d_set: Vec<usize>,
    /// Dimension drop `k_j`.
    pub k: usize,
    /// Basis of the direction space of `Δ^{t_j}`.
    pub hull_basis: Vec<RatVector>,
    /// A point of `Δ^{t_j}`.
    pub base_point: RatVector,
    /// Projections of the still-active normals.
    pub projected: Vec<ProjectedNormal>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    BecomesRedundant,
    BecomesRelevant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyEvent {
    pub time: Rational,
    pub constraint: usize,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShrinkTrace {
    pub stages: Vec<ShrinkStage>,
    /// The single point `Δ^{t_{M+1}}`.
    pub endpoint: RatVector,
    /// Number of stages before the final one (`stages.len() == m + 1`).
    pub m: usize,
    pub events: Vec<RedundancyEvent>,
}

impl ShrinkTrace {
    pub fn times(&self) -> Vec<Rational> {
        self.stages.iter().map(|s| s.time.clone()).collect()
    }

    pub fn drops(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.k).collect()
    }

    /// Dimension of `Δ^t` as predicted by the stage drops.
    pub fn dimension_at(&self, ambient: usize, t: &Rational) -> usize {
        ambient
            - self
                .stages
                .iter()
                .filter(|s| &s.time <= t)
                .map(|s| s.k)
                .sum::<usize>()
    }
}

fn preconditions(p: &LabeledPolytope) -> Result<()> {
    p.validate()?;
    p.feasible_point()?;
    if !p.is_compact() {
        return Err(Error::Unbounded);
    }
    let dim = dimension(p)?;
    if dim != p.dim {
        return Err(Error::NotFullDimensional {
            dimension: dim,
            ambient: p.dim,
        });
    }
    Ok(())
}

/// Maximize `t` subject to `⟨x,v_i⟩ + t ≤ b_i` and `⟨x,w⟩ = c`; returns the
/// optimal `t` and an optimal `x`.
fn jam_lp(
    n: usize,
    ineqs: &[(IntVector, Rational)],
    eqs: &[(IntVector, Rational)],
) -> (Rational, RatVector) {
    let mut rows = Vec::with_capacity(ineqs.len());
    for (v, b) in ineqs {
        let mut row = v.to_rat();
        row.0.push(rat(1));
        rows.push((row, b.clone()));
    }
    let eq_rows = eqs
        .iter()
        .map(|(w, c)| {
            let mut row = w.to_rat();
            row.0.push(rat(0));
            (row, c.clone())
        })
        .collect();
    let mut objective = RatVector::zeros(n + 1);
    objective.0[n] = rat(1);
    let r = lp_solve(&LpProblem {
        maximize: objective,
        inequalities: rows,
        equalities: eq_rows,
    });
    assert_eq!(
        r.status,
        LpStatus::Optimal,
        "jam LP of a compact slice is feasible and bounded"
    );
    let w = r.witness.unwrap();
    (r.optimum.unwrap(), RatVector(w.0[..n].to_vec()))
}

/// Largest `t` by which every inequality of `P` (a polytope or slice with
/// equality rows) can still move inward, i.e. the next stage time measured
/// from `P`'s own offsets.
pub fn remaining_time(p: &LabeledPolytope) -> Result<Rational> {
    p.validate()?;
    p.feasible_point()?;
    let ineqs: Vec<(IntVector, Rational)> = p
        .constraints
        .iter()
        .map(|c| (c.normal.clone(), c.offset.clone()))
        .collect();
    let (t, _) = jam_lp(p.dim, &ineqs, &p.equalities);
    Ok(t)
}

/// Stage times, jam groups, dimension drops and the endpoint, without the
/// redundancy-event scan.
pub fn shrink_stages(p: &LabeledPolytope) -> Result<(Vec<ShrinkStage>, RatVector)> {
    preconditions(p)?;
    let n = p.dim;
    let d = p.constraints.len();
    let mut active: Vec<bool> = vec![true; d];
    let mut frozen: Vec<(usize, Rational)> = Vec::new();
    let mut frozen_rat: Vec<RatVector> = Vec::new();
    let mut prev_rank = 0usize;
    let mut stages: Vec<ShrinkStage> = Vec::new();
    loop {
        let ineqs: Vec<(IntVector, Rational)> = (0..d)
            .filter(|&i| active[i])
            .map(|i| (p.constraints[i].normal.clone(), p.constraints[i].offset.clone()))
            .collect();
        let eqs: Vec<(IntVector, Rational)> = frozen
            .iter()
            .map(|(i, b)| (p.constraints[*i].normal.clone(), b.clone()))
            .collect();
        let (t, x) = jam_lp(n, &ineqs, &eqs);

        // D_j: active constraints tight on the whole slice Δ^{t_j}, decided
        // per constraint by minimizing ⟨v_i, x⟩ over the slice.
        let slice_rows: Vec<(RatVector, Rational)> = (0..d)
            .filter(|&i| active[i])
            .map(|i| (p.constraints[i].normal.to_rat(), &p.constraints[i].offset - &t))
            .collect();
        let slice_eqs: Vec<(RatVector, Rational)> = frozen
            .iter()
            .map(|(i, b)| (p.constraints[*i].normal.to_rat(), b.clone()))
            .collect();
        let mut d_set = Vec::new();
        for i in (0..d).filter(|&i| active[i]) {
            let r = lp_solve(&LpProblem {
                maximize: p.constraints[i].normal.to_rat().scaled(&rat(-1)),
                inequalities: slice_rows.clone(),
                equalities: slice_eqs.clone(),
            });
            assert_eq!(r.status, LpStatus::Optimal);
            if -r.optimum.unwrap() == &p.constraints[i].offset - &t {
                d_set.push(i);
            }
        }
        assert!(!d_set.is_empty(), "every stage jams at least one facet");
        for &i in &d_set {
            active[i] = false;
            frozen.push((i, &p.constraints[i].offset - &t));
            frozen_rat.push(p.constraints[i].normal.to_rat());
        }
        let new_rank = linalg::rank(&frozen_rat);
        let hull_basis = linalg::nullspace(&frozen_rat, n);
        let projected = (0..d)
            .filter(|&i| active[i])
            .map(|i| {
                let v = p.constraints[i].normal.to_rat();
                let proj = linalg::project_onto_span(&v, &frozen_rat);
                let vector = v.sub(&proj);
                let (label, primitive) = if vector.0.iter().all(Zero::is_zero) {
                    (Rational::zero(), IntVector::zeros(n))
                } else {
                    let (den, scaled) = vector.clear_denominators();
                    let (content, prim) = primitive_decompose(&scaled).expect("nonzero");
                    (Rational::new(content, den), prim)
                };
                ProjectedNormal {
                    index: i,
                    vector,
                    label,
                    primitive,
                    non_lattice: false,
                }
            })
            .collect();
        stages.push(ShrinkStage {
            index: stages.len() + 1,
            time: t,
            d_set,
            k: new_rank - prev_rank,
            hull_basis,
            base_point: x.clone(),
            projected,
        });
        prev_rank = new_rank;
        if new_rank == n {
            return Ok((stages, x));
        }
        assert!(
            stages.len() <= d,
            "each stage freezes at least one constraint"
        );
    }
}

/// The slice `Δ^t`: still-active rows as inequalities at `λ_i − t`, jammed
/// rows as equalities at their stage offsets `λ_i − t_s`.
pub fn slice_at(p: &LabeledPolytope, stages: &[ShrinkStage], t: &Rational) -> Result<LabeledPolytope> {
    let t_final = &stages.last().expect("at least one stage").time;
    if t.is_negative() || t > t_final {
        return Err(Error::TimeOutOfRange(format!(
            "t = {} outside [0, {}]",
            t, t_final
        )));
    }
    let mut frozen_offset: Vec<Option<Rational>> = vec![None; p.constraints.len()];
    for s in stages.iter().filter(|s| &s.time <= t) {
        for &i in &s.d_set {
            frozen_offset[i] = Some(&p.constraints[i].offset - &s.time);
        }
    }
    let mut constraints = Vec::new();
    let mut equalities = Vec::new();
    for (i, c) in p.constraints.iter().enumerate() {
        match &frozen_offset[i] {
            Some(b) => equalities.push((c.normal.clone(), b.clone())),
            None => constraints.push(Constraint::new(c.normal.clone(), &c.offset - t)),
        }
    }
    Ok(LabeledPolytope {
        dim: p.dim,
        constraints,
        equalities,
    })
}

pub fn slice(p: &LabeledPolytope, t: &Rational) -> Result<LabeledPolytope> {
    let (stages, _) = shrink_stages(p)?;
    slice_at(p, &stages, t)
}

/// Full trace: stages, endpoint and the redundancy-event timeline.
pub fn shrink_trace(p: &LabeledPolytope) -> Result<ShrinkTrace> {
    let (stages, endpoint) = shrink_stages(p)?;
    let events = events_for(p, &stages);
    Ok(ShrinkTrace {
        m: stages.len() - 1,
        stages,
        endpoint,
        events,
    })
}

/// The redundancy events alone, sorted by (time, constraint, kind).
pub fn event_timeline(p: &LabeledPolytope) -> Result<Vec<RedundancyEvent>> {
    let (stages, _) = shrink_stages(p)?;
    Ok(events_for(p, &stages))
}

/// Exact LP redundancy test for active constraint `i` of the slice at time
/// `t`: redundant iff the maximum of `⟨x, v_i⟩` over the other rows is at
/// most `λ_i − t` (an unbounded maximum means the row is essential).
fn redundant_at(
    p: &LabeledPolytope,
    frozen: &[(usize, Rational)],
    others: &[usize],
    i: usize,
    t: &Rational,
) -> bool {
    let inequalities = others
        .iter()
        .map(|&l| (p.constraints[l].normal.to_rat(), &p.constraints[l].offset - t))
        .collect();
    let equalities = frozen
        .iter()
        .map(|(l, b)| (p.constraints[*l].normal.to_rat(), b.clone()))
        .collect();
    let r = lp_solve(&LpProblem {
        maximize: p.constraints[i].normal.to_rat(),
        inequalities,
        equalities,
    });
    match r.status {
        LpStatus::Optimal => r.optimum.unwrap() <= &p.constraints[i].offset - t,
        LpStatus::Unbounded => false,
        LpStatus::Infeasible => unreachable!("slice without one row contains the slice"),
    }
}

/// Candidate event times for constraint `i` inside stage interval `[a, b]`:
/// along every vertex path `x(t)` of the slice-without-`i` (an affine
/// function of `t` obtained from a square subsystem), the slack
/// `⟨v_i, x(t)⟩ − (λ_i − t)` is affine; its root, clipped to the path's
/// feasibility interval, is a candidate. The true status on each interval
/// between candidates is then confirmed by LP at the midpoint.
fn event_candidates(
    p: &LabeledPolytope,
    frozen: &[(usize, Rational)],
    others: &[usize],
    i: usize,
    a: &Rational,
    b: &Rational,
) -> Vec<Rational> {
    let n = p.dim;
    let eq_rows: Vec<RatVector> = frozen
        .iter()
        .map(|(l, _)| p.constraints[*l].normal.to_rat())
        .collect();
    let eq_idx = linalg::independent_rows(&eq_rows);
    let base_rows: Vec<RatVector> = eq_idx.iter().map(|&l| eq_rows[l].clone()).collect();
    let base_rhs0: Vec<Rational> = eq_idx.iter().map(|&l| frozen[l].1.clone()).collect();
    let m = n - base_rows.len();
    let mut candidates = Vec::new();
    for_each_combination(others.len(), m, |subset| {
        let mut rows = base_rows.clone();
        let mut rhs0 = base_rhs0.clone();
        let mut rhs_slope = vec![rat(0); base_rows.len()];
        for &s in subset {
            let l = others[s];
            rows.push(p.constraints[l].normal.to_rat());
            rhs0.push(p.constraints[l].offset.clone());
            rhs_slope.push(rat(-1));
        }
        let x0 = match linalg::solve_square(&rows, &rhs0) {
            Some(x) => x,
            None => return,
        };
        let xd = linalg::solve_square(&rows, &RatVector(rhs_slope).0)
            .expect("same invertible matrix");
        // x(t) = x0 + t·xd; feasibility of the path against the other rows
        let mut lo = a.clone();
        let mut hi = b.clone();
        for &l in others {
            // ⟨x(t), v_l⟩ ≤ λ_l − t ⇔ α + β t ≤ 0
            let alpha = p.constraints[l].normal.dot_rat(&x0) - &p.constraints[l].offset;
            let beta = p.constraints[l].normal.dot_rat(&xd) + rat(1);
            if beta.is_positive() {
                let cap = -alpha / beta;
                if cap < hi {
                    hi = cap;
                }
            } else if beta.is_negative() {
                let floor = -alpha / beta;
                if floor > lo {
                    lo = floor;
                }
            } else if alpha.is_positive() {
                return;
            }
        }
        if lo > hi {
            return;
        }
        // slack of row i along the path
        let gamma = p.constraints[i].normal.dot_rat(&x0) - &p.constraints[i].offset;
        let delta = p.constraints[i].normal.dot_rat(&xd) + rat(1);
        if !delta.is_zero() {
            let root = -gamma / delta;
            if root >= lo && root <= hi {
                candidates.push(root);
            }
        }
    });
    candidates
}

fn events_for(p: &LabeledPolytope, stages: &[ShrinkStage]) -> Vec<RedundancyEvent> {
    let d = p.constraints.len();
    let mut events = Vec::new();
    let mut last_status: Vec<Option<bool>> = vec![None; d];
    let mut frozen: Vec<(usize, Rational)> = Vec::new();
    let mut t_prev = rat(0);
    let mut active: Vec<bool> = vec![true; d];
    for stage in stages {
        let (a, b) = (t_prev.clone(), stage.time.clone());
        if a < b {
            let act: Vec<usize> = (0..d).filter(|&i| active[i]).collect();
            for &i in &act {
                let others: Vec<usize> = act.iter().copied().filter(|&l| l != i).collect();
                let mut times = event_candidates(p, &frozen, &others, i, &a, &b);
                times.push(a.clone());
                times.push(b.clone());
                times.sort();
                times.dedup();
                let mut prev_status = last_status[i];
                for w in times.windows(2) {
                    let mid = (&w[0] + &w[1]) / rat(2);
                    let status = redundant_at(p, &frozen, &others, i, &mid);
                    if let Some(prev) = prev_status {
                        if prev != status {
                            events.push(RedundancyEvent {
                                time: w[0].clone(),
                                constraint: i,
                                kind: if status {
                                    EventKind::BecomesRedundant
                                } else {
                                    EventKind::BecomesRelevant
                                },
                            });
                        }
                    }
                    prev_status = Some(status);
                }
                last_status[i] = prev_status;
            }
        }
        for &i in &stage.d_set {
            active[i] = false;
            last_status[i] = None;
            frozen.push((i, &p.constraints[i].offset - &stage.time));
        }
        t_prev = stage.time.clone();
    }
    events.sort_by(|x, y| {
        (&x.time, x.constraint, x.kind).cmp(&(&y.time, y.constraint, y.kind))
    });
    events
}

/// Translate `P` so that it shrinks to the origin; returns the centered
/// polytope and the original endpoint.
pub fn center(p: &LabeledPolytope) -> Result<(LabeledPolytope, RatVector)> {
    let (_, endpoint) = shrink_stages(p)?;
    Ok((p.translated(&endpoint), endpoint))
}
