//! Two-sided Gromov-width estimates for centered labeled polytopes.
//!
//! Both bounds are certificates about the polytope alone, stated as exact
//! rational multiples of π. The lower bound comes from the shrinking time:
//! if the first drop happens at `t₁`, a symplectic ball of capacity `4πt₁`
//! embeds into the toric manifold, provided the reflexive companion
//! `Δ′ = {x : ⟨x,vⱼ⟩ ≤ 1}` contains a unimodular basis of centrally
//! symmetric lattice points (an Ewald basis) — then the affine diamond
//! spanned by `±t₁bₖ` sits inside the polytope and carries the embedded
//! ball. The upper bound is the Lu bound: any positive integer relation
//! `Σ cⱼwⱼ = 0` among primitive normals caps the width by
//! `2π·Σ cⱼ·λⱼ/aⱼ`. Equality of the two certificates is detected through
//! the monotone factorization: an opposite pair of primitive normals in the
//! first-drop factor matches the Lu relation `wⱼ₁ = −wⱼ₂` whose value is
//! exactly `4πt₁` whenever both labels are 1, and the Fano condition on the
//! companion makes the upper bound sharp.

use num_traits::{One, Signed, Zero};

use crate::decompose;
use crate::linalg;
use crate::polytope::{self, for_each_combination, Constraint, LabeledPolytope};
use crate::rational::{rat, Int, IntVector, RatVector, Rational};
use crate::shrink;
use crate::{Error, Result};

/// `Δ′ = {x : ⟨x,vⱼ⟩ ≤ 1}`: same normals, all offsets reset to one.
///
/// For a centered polytope `t₁·Δ′ ⊆ Δ`, since every offset is at least the
/// first drop time `t₁`.
pub fn reflexive_companion(p: &LabeledPolytope) -> LabeledPolytope {
    LabeledPolytope::new(
        p.dim,
        p.constraints
            .iter()
            .map(|c| Constraint::new(c.normal.clone(), Rational::one()))
            .collect(),
    )
}

/// The centrally symmetric lattice points `S = {v ∈ Z^n ∩ D : −v ∈ D}`,
/// sorted lexicographically.
pub fn symmetric_points(d: &LabeledPolytope) -> Result<Vec<IntVector>> {
    let pts = polytope::enumerate_lattice_points(d)?;
    Ok(pts
        .into_iter()
        .filter(|v| d.contains(&v.neg().to_rat()))
        .collect())
}

/// Search `D` for an Ewald basis: `n` centrally symmetric lattice points
/// forming a unimodular basis of `Z^n`.
///
/// `D` must have every offset equal to one (a reflexive companion), else
/// [`Error::NotReflexiveCompanion`]. Candidates are ordered by L1 norm and
/// then descending lexicographically, and the backtracking search returns
/// the first unimodular tuple in that order, so the result is canonical.
pub fn ewald_basis(d: &LabeledPolytope) -> Result<Option<Vec<IntVector>>> {
    d.validate()?;
    if !d.equalities.is_empty() || d.constraints.iter().any(|c| !c.offset.is_one()) {
        return Err(Error::NotReflexiveCompanion);
    }
    let mut cands: Vec<IntVector> = symmetric_points(d)?
        .into_iter()
        .filter(|v| !v.is_zero())
        .collect();
    cands.sort_by(|a, b| {
        let la: Int = a.0.iter().map(|e| e.abs()).sum();
        let lb: Int = b.0.iter().map(|e| e.abs()).sum();
        la.cmp(&lb).then(b.cmp(a))
    });
    let n = d.dim;
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let found = extend_basis(&cands, n, 0, &mut chosen);
    Ok(found.map(|idx| idx.into_iter().map(|i| cands[i].clone()).collect()))
}

fn extend_basis(
    cands: &[IntVector],
    n: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if chosen.len() == n {
        let rows: Vec<RatVector> = chosen.iter().map(|&i| cands[i].to_rat()).collect();
        if linalg::det(&rows).abs().is_one() {
            return Some(chosen.clone());
        }
        return None;
    }
    for i in start..cands.len() {
        let mut rows: Vec<RatVector> = chosen.iter().map(|&j| cands[j].to_rat()).collect();
        rows.push(cands[i].to_rat());
        if linalg::rank(&rows) != chosen.len() + 1 {
            continue;
        }
        chosen.push(i);
        if let Some(found) = extend_basis(cands, n, i + 1, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerStatus {
    /// Smooth input, Ewald basis found, diamond verified inside the polytope.
    Certified,
    /// Smooth input but the companion has no Ewald basis; the coefficient is
    /// only heuristic.
    EwaldNotFound,
    /// The input is not smooth, so the ball-embedding theorem does not apply.
    NotApplicable,
}

/// Lower estimate `4πt₁` with its certification state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    /// The width estimate as a multiple of π.
    pub pi_coefficient: Rational,
    pub ewald_basis: Option<Vec<IntVector>>,
    pub status: LowerStatus,
}

/// Lower-bound certificate for a centered polytope: `4πt₁` is certified by
/// an Ewald basis of the reflexive companion whose diamond `±t₁bₖ` lies in
/// the polytope.
pub fn lower_bound(p: &LabeledPolytope) -> Result<LowerBound> {
    let (stages, _) = shrink::shrink_stages(p)?;
    let t1 = stages[0].time.clone();
    let pi_coefficient = rat(4) * &t1;
    if !polytope::classify(p)?.smooth {
        return Ok(LowerBound {
            pi_coefficient,
            ewald_basis: None,
            status: LowerStatus::NotApplicable,
        });
    }
    let companion = reflexive_companion(p);
    match ewald_basis(&companion)? {
        None => Ok(LowerBound {
            pi_coefficient,
            ewald_basis: None,
            status: LowerStatus::EwaldNotFound,
        }),
        Some(basis) => {
            let diamond_inside = basis.iter().all(|b| {
                p.contains(&b.to_rat().scaled(&t1)) && p.contains(&b.neg().to_rat().scaled(&t1))
            });
            if diamond_inside {
                Ok(LowerBound {
                    pi_coefficient,
                    ewald_basis: Some(basis),
                    status: LowerStatus::Certified,
                })
            } else {
                Ok(LowerBound {
                    pi_coefficient,
                    ewald_basis: None,
                    status: LowerStatus::EwaldNotFound,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanoStatus {
    /// The primitive-normal companion and its polar are both lattice
    /// polytopes, so the companion is reflexive and the associated variety
    /// is Fano.
    ReflexiveCompanionOK,
    NotVerified,
}

/// Reflexivity test for the companion built from primitive normals: both the
/// companion and its polar dual must have integer vertices.
pub fn fano_check(p: &LabeledPolytope) -> Result<FanoStatus> {
    p.validate()?;
    let mut rows = Vec::with_capacity(p.constraints.len());
    for i in 0..p.constraints.len() {
        let (_, w) = p.primitive(i)?;
        rows.push(Constraint::new(w, Rational::one()));
    }
    let companion = LabeledPolytope::new(p.dim, rows);
    let vs = polytope::vertices(&companion)?;
    let companion_integral = vs.vertices.iter().all(|v| v.0.iter().all(|e| e.is_integer()));
    let polar = polytope::polar_dual(&companion)?;
    let polar_integral = polar.vertices.iter().all(|v| v.0.iter().all(|e| e.is_integer()));
    Ok(if companion_integral && polar_integral {
        FanoStatus::ReflexiveCompanionOK
    } else {
        FanoStatus::NotVerified
    })
}

/// A positive integer relation `Σ cⱼwⱼ = 0` over `support`, witnessing the
/// Lu upper bound `2π · Σ cⱼ·λⱼ/aⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LuWitness {
    pub support: Vec<usize>,
    pub coefficients: Vec<Int>,
}

/// Upper estimate with its witnessing relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    /// The width estimate as a multiple of π.
    pub pi_coefficient: Rational,
    pub witness: LuWitness,
    pub fano_status: FanoStatus,
}

/// Minimize the Lu value `2·Σ cⱼ·λⱼ/aⱼ` over positive relations among the
/// primitive normals.
///
/// Two search phases, both exact: every circuit (minimal positively
/// dependent subset, size at most `n+1`) contributes its unique positive
/// relation, and an exhaustive scan enumerates all relations with
/// coefficient sum at most `search_bound`. Ties keep the first witness in
/// enumeration order, so the result is deterministic. A compact polytope
/// always has a positive circuit; [`Error::NoRelationFound`] is defensive.
pub fn lu_upper_bound(p: &LabeledPolytope, search_bound: u32) -> Result<UpperBound> {
    p.validate()?;
    if !p.is_compact() {
        return Err(Error::Unbounded);
    }
    let d = p.constraints.len();
    let n = p.dim;
    let mut prims: Vec<(IntVector, Rational)> = Vec::with_capacity(d);
    for i in 0..d {
        let (a, w) = p.primitive(i)?;
        let l = &p.constraints[i].offset / Rational::from_integer(a);
        prims.push((w, l));
    }

    let mut best: Option<(Rational, LuWitness)> = None;
    let mut consider = |value: Rational, support: Vec<usize>, coefficients: Vec<Int>| {
        if best.as_ref().is_none_or(|(v, _)| &value < v) {
            best = Some((
                value,
                LuWitness {
                    support,
                    coefficients,
                },
            ));
        }
    };

    // Circuits: subsets of size ≤ n+1 whose normals span a one-dimensional
    // kernel generated by a strictly positive vector.
    for size in 2..=(n + 1).min(d) {
        for_each_combination(d, size, &mut |subset: &[usize]| {
            let rows: Vec<RatVector> = (0..n)
                .map(|k| {
                    RatVector(
                        subset
                            .iter()
                            .map(|&j| Rational::from_integer(prims[j].0 .0[k].clone()))
                            .collect(),
                    )
                })
                .collect();
            let kernel = linalg::nullspace(&rows, size);
            if kernel.len() != 1 {
                return;
            }
            let b = &kernel[0];
            let all_pos = b.0.iter().all(|e| e.is_positive());
            let all_neg = b.0.iter().all(|e| e.is_negative());
            if !all_pos && !all_neg {
                return;
            }
            let (_, ints) = b.clear_denominators();
            let (_, mut c) = crate::rational::primitive_decompose(&ints)
                .expect("kernel generator is nonzero");
            if c.0[0].is_negative() {
                c = c.neg();
            }
            let value: Rational = subset
                .iter()
                .zip(&c.0)
                .map(|(&j, cj)| Rational::from_integer(cj.clone()) * &prims[j].1)
                .sum::<Rational>()
                * rat(2);
            consider(value, subset.to_vec(), c.0.clone());
        });
    }

    // Exhaustive scan over all relations with Σcⱼ ≤ search_bound, pruned by
    // how far the remaining budget can still move the partial sum.
    let mut suffix_max: Vec<Vec<Int>> = vec![vec![Int::zero(); n]; d + 1];
    for i in (0..d).rev() {
        for k in 0..n {
            suffix_max[i][k] = suffix_max[i + 1][k].clone().max(prims[i].0 .0[k].abs());
        }
    }
    let mut coeffs = vec![0i64; d];
    let mut partial = IntVector::zeros(n);
    scan(
        &prims,
        &suffix_max,
        search_bound as i64,
        0,
        &mut partial,
        &mut coeffs,
        &mut |c: &[i64]| {
            let support: Vec<usize> = (0..d).filter(|&j| c[j] > 0).collect();
            let value: Rational = support
                .iter()
                .map(|&j| rat(c[j]) * &prims[j].1)
                .sum::<Rational>()
                * rat(2);
            let coefficients: Vec<Int> = support.iter().map(|&j| Int::from(c[j])).collect();
            consider(value, support, coefficients);
        },
    );

    match best {
        None => Err(Error::NoRelationFound),
        Some((pi_coefficient, witness)) => Ok(UpperBound {
            pi_coefficient,
            witness,
            fano_status: fano_check(p)?,
        }),
    }
}

fn scan(
    prims: &[(IntVector, Rational)],
    suffix_max: &[Vec<Int>],
    remaining: i64,
    idx: usize,
    partial: &mut IntVector,
    coeffs: &mut [i64],
    visit: &mut impl FnMut(&[i64]),
) {
    let reachable = partial.0.iter().zip(&suffix_max[idx]).all(|(s, m)| {
        s.abs() <= m * Int::from(remaining)
    });
    if !reachable {
        return;
    }
    if idx == prims.len() {
        if partial.is_zero() && coeffs.iter().any(|&c| c > 0) {
            visit(coeffs);
        }
        return;
    }
    for val in 0..=remaining {
        coeffs[idx] = val;
        if val > 0 {
            *partial = partial.add(&prims[idx].0);
        }
        scan(prims, suffix_max, remaining - val, idx + 1, partial, coeffs, visit);
    }
    // undo the accumulated remaining · w_idx and reset
    *partial = partial.add(&prims[idx].0.scaled(&Int::from(-remaining)));
    coeffs[idx] = 0;
}

/// Combined report: both bounds plus the equality detection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GromovBounds {
    pub lower: LowerBound,
    pub upper: UpperBound,
    /// True when the width is pinned exactly: the first-drop factor contains
    /// an opposite pair of primitive normals whose Lu value equals the lower
    /// coefficient and the Fano condition holds.
    pub equality: bool,
}

/// Run both bounds on the centered translate of `p` and detect equality.
pub fn width_report(p: &LabeledPolytope, search_bound: u32) -> Result<GromovBounds> {
    let (centered, _) = shrink::center(p)?;
    let lower = lower_bound(&centered)?;
    let upper = lu_upper_bound(&centered, search_bound)?;

    let plan = decompose::decomposition_plan(&centered)?;
    let relevant: Vec<usize> = if plan.m == 0 {
        let mut all: Vec<usize> = plan
            .trace
            .stages
            .iter()
            .flat_map(|s| s.d_set.iter().copied())
            .collect();
        all.sort_unstable();
        all
    } else {
        plan.trace.stages[0].d_set.clone()
    };

    let mut best_pair: Option<Rational> = None;
    for (pos, &i) in relevant.iter().enumerate() {
        let (ai, wi) = centered.primitive(i)?;
        for &j in &relevant[pos + 1..] {
            let (aj, wj) = centered.primitive(j)?;
            if wi != wj.neg() {
                continue;
            }
            let li = &centered.constraints[i].offset / Rational::from_integer(ai.clone());
            let lj = &centered.constraints[j].offset / Rational::from_integer(aj);
            let value = (li + lj) * rat(2);
            if best_pair.as_ref().is_none_or(|v| &value < v) {
                best_pair = Some(value);
            }
        }
    }
    let equality = upper.fano_status == FanoStatus::ReflexiveCompanionOK
        && best_pair.as_ref() == Some(&lower.pi_coefficient);

    Ok(GromovBounds {
        lower,
        upper,
        equality,
    })
}
