//! The labeled-polytope data model and its exact geometry: vertex
//! enumeration, dimension, property classification, polar duality, subset
//! tests and lattice-point enumeration.
//!
//! A labeled polytope is `Δ = ⋂ {x : ⟨x, v_i⟩ ≤ λ_i}` with integer normals
//! `v_i = a_i·w_i` (label times primitive normal) and rational offsets.
//! Constraint order is significant: facet identity is by input index, and
//! duplicate or redundant rows are kept, never merged — the shrinking
//! procedure tracks facets through redundancy and reappearance by index.
//! Slices of the shrinking procedure additionally carry equality rows.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{lp_solve, LpProblem, LpStatus};
use crate::rational::{
    ceil_int, floor_int, primitive_decompose, rat, Int, IntVector, RatVector, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub normal: IntVector,
    pub offset: Rational,
}

impl Constraint {
    pub fn new(normal: IntVector, offset: Rational) -> Self {
        Constraint { normal, offset }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPolytope {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
    /// Frozen hyperplanes of a slice Δ^t; empty for ordinary inputs.
    pub equalities: Vec<(IntVector, Rational)>,
}

impl LabeledPolytope {
    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Self {
        LabeledPolytope {
            dim,
            constraints,
            equalities: Vec::new(),
        }
    }

    /// Test-friendly constructor from `(normal, offset)` rows.
    pub fn from_rows(dim: usize, rows: &[(&[i64], i64)]) -> Self {
        LabeledPolytope::new(
            dim,
            rows.iter()
                .map(|(n, b)| Constraint::new(IntVector::from_i64(n), rat(*b)))
                .collect(),
        )
    }

    /// Structural well-formedness: positive dimension, matching normal
    /// lengths, no zero normals.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for c in &self.constraints {
            if c.normal.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: c.normal.len(),
                });
            }
            if c.normal.is_zero() {
                return Err(Error::ZeroVector);
            }
        }
        for (n, _) in &self.equalities {
            if n.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: n.len(),
                });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        self.constraints
            .iter()
            .all(|c| c.normal.dot_rat(x) <= c.offset)
            && self.equalities.iter().all(|(n, b)| &n.dot_rat(x) == b)
    }

    /// Label/primitive decomposition of constraint `i`.
    pub fn primitive(&self, i: usize) -> Result<(Int, IntVector)> {
        primitive_decompose(&self.constraints[i].normal)
    }

    /// Translate by `-p`, i.e. the polytope `Δ − p` in the same normals.
    pub fn translated(&self, p: &RatVector) -> LabeledPolytope {
        LabeledPolytope {
            dim: self.dim,
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint::new(c.normal.clone(), &c.offset - c.normal.dot_rat(p)))
                .collect(),
            equalities: self
                .equalities
                .iter()
                .map(|(n, b)| (n.clone(), b - n.dot_rat(p)))
                .collect(),
        }
    }

    /// Dilation `c·Δ` for `c > 0`.
    pub fn scaled(&self, c: &Rational) -> LabeledPolytope {
        assert!(c.is_positive(), "scaling factor must be positive");
        LabeledPolytope {
            dim: self.dim,
            constraints: self
                .constraints
                .iter()
                .map(|k| Constraint::new(k.normal.clone(), &k.offset * c))
                .collect(),
            equalities: self
                .equalities
                .iter()
                .map(|(n, b)| (n.clone(), b * c))
                .collect(),
        }
    }

    fn lp_rows(&self) -> (Vec<(RatVector, Rational)>, Vec<(RatVector, Rational)>) {
        let ineqs = self
            .constraints
            .iter()
            .map(|c| (c.normal.to_rat(), c.offset.clone()))
            .collect();
        let eqs = self
            .equalities
            .iter()
            .map(|(n, b)| (n.to_rat(), b.clone()))
            .collect();
        (ineqs, eqs)
    }

    /// Maximize a linear objective over the polytope.
    pub fn maximize(&self, objective: &RatVector) -> crate::lp::LpResult {
        let (inequalities, equalities) = self.lp_rows();
        lp_solve(&LpProblem {
            maximize: objective.clone(),
            inequalities,
            equalities,
        })
    }

    pub fn feasible_point(&self) -> Result<RatVector> {
        let r = self.maximize(&RatVector::zeros(self.dim));
        match r.status {
            LpStatus::Infeasible => Err(Error::Empty),
            _ => Ok(r.witness.expect("feasibility LP with zero objective is bounded")),
        }
    }

    /// Recession-cone test: no nonzero direction `u` with `⟨u,v_i⟩ ≤ 0` for
    /// all constraints and `⟨u,n⟩ = 0` for all equality rows.
    pub fn is_compact(&self) -> bool {
        let cone_ineqs: Vec<(RatVector, Rational)> = self
            .constraints
            .iter()
            .map(|c| (c.normal.to_rat(), Rational::zero()))
            .collect();
        let cone_eqs: Vec<(RatVector, Rational)> = self
            .equalities
            .iter()
            .map(|(n, _)| (n.to_rat(), Rational::zero()))
            .collect();
        for k in 0..self.dim {
            for sign in [1i64, -1] {
                let mut objective = RatVector::zeros(self.dim);
                objective.0[k] = rat(sign);
                let mut inequalities = cone_ineqs.clone();
                // cap the objective so the LP stays bounded
                inequalities.push((objective.clone(), rat(1)));
                let r = lp_solve(&LpProblem {
                    maximize: objective,
                    inequalities,
                    equalities: cone_eqs.clone(),
                });
                if let Some(opt) = r.optimum {
                    if opt.is_positive() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Exact vertex set: lexicographically sorted, deduplicated, with the full
/// set of tight constraint indices per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    pub vertices: Vec<RatVector>,
    pub tight_sets: Vec<Vec<usize>>,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All vertices, by exhaustive subset solving: every choice of constraints
/// that together with the equality rows pins a unique point is solved
/// exactly and kept when feasible.
pub fn vertices(p: &LabeledPolytope) -> Result<VertexSet> {
    p.feasible_point()?;
    if !p.is_compact() {
        return Err(Error::Unbounded);
    }
    let eq_rows: Vec<RatVector> = p.equalities.iter().map(|(n, _)| n.to_rat()).collect();
    let eq_idx = linalg::independent_rows(&eq_rows);
    let eq_basis: Vec<RatVector> = eq_idx.iter().map(|&i| eq_rows[i].clone()).collect();
    let eq_rhs: Vec<Rational> = eq_idx.iter().map(|&i| p.equalities[i].1.clone()).collect();
    let m = p.dim - eq_basis.len();

    let mut found: Vec<RatVector> = Vec::new();
    for_each_combination(p.constraints.len(), m, |subset| {
        let mut rows = eq_basis.clone();
        let mut rhs = eq_rhs.clone();
        for &i in subset {
            rows.push(p.constraints[i].normal.to_rat());
            rhs.push(p.constraints[i].offset.clone());
        }
        if let Some(x) = linalg::solve_square(&rows, &rhs) {
            if p.contains(&x) {
                found.push(x);
            }
        }
    });
    found.sort();
    found.dedup();
    assert!(
        !found.is_empty(),
        "a nonempty compact polyhedron has at least one vertex"
    );
    let tight_sets = found
        .iter()
        .map(|x| {
            p.constraints
                .iter()
                .enumerate()
                .filter(|(_, c)| c.normal.dot_rat(x) == c.offset)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(VertexSet {
        vertices: found,
        tight_sets,
    })
}

/// Dimension of the affine hull of the vertex set.
pub fn dimension(p: &LabeledPolytope) -> Result<usize> {
    let vs = vertices(p)?;
    Ok(affine_rank(&vs.vertices))
}

fn affine_rank(points: &[RatVector]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<RatVector> = points[1..].iter().map(|v| v.sub(&points[0])).collect();
    linalg::rank(&diffs)
}

/// Affine-hull dimension without vertex enumeration (also valid for
/// unbounded polyhedra): ambient dimension minus the rank of the implicit
/// equalities.
fn affine_dimension(p: &LabeledPolytope) -> Result<usize> {
    p.feasible_point()?;
    let mut implicit: Vec<RatVector> = p.equalities.iter().map(|(n, _)| n.to_rat()).collect();
    for c in &p.constraints {
        let r = p.maximize(&c.normal.to_rat().scaled(&rat(-1)));
        if let (LpStatus::Optimal, Some(opt)) = (r.status, r.optimum) {
            if -opt == c.offset {
                implicit.push(c.normal.to_rat());
            }
        }
    }
    Ok(p.dim - linalg::rank(&implicit))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub compact: bool,
    pub simple: bool,
    pub smooth: bool,
    pub monotone: bool,
    pub reflexive: bool,
    pub trivially_labeled: bool,
    pub dimension: usize,
}

/// Classify a polytope against the standard toric-geometry properties.
///
/// `simple`: every vertex lies on exactly `n` facets (rows whose contact
/// face has lower dimension do not count); `smooth`: additionally the
/// primitive normals of the facets through each vertex form a
/// determinant-±1 matrix; `monotone`: all offsets equal a common positive
/// value; `reflexive`: monotone with offset 1; `trivially_labeled`: all
/// labels `a_i = 1`. Vertex-based flags are `false` for non-compact input.
pub fn classify(p: &LabeledPolytope) -> Result<PropertyReport> {
    p.validate()?;
    let compact = p.is_compact();
    let first_offset = p.constraints.first().map(|c| c.offset.clone());
    let monotone = match &first_offset {
        Some(l) => l.is_positive() && p.constraints.iter().all(|c| &c.offset == l),
        None => false,
    };
    let reflexive = monotone && first_offset.as_ref() == Some(&Rational::one());
    let mut trivially_labeled = true;
    for i in 0..p.constraints.len() {
        let (label, _) = p.primitive(i)?;
        if !label.is_one() {
            trivially_labeled = false;
        }
    }
    let (simple, smooth, dimension) = if compact {
        let vs = vertices(p)?;
        let dimension = affine_rank(&vs.vertices);
        // A constraint is a facet exactly when its contact face has
        // codimension one; rows tight only on a lower-dimensional face
        // (redundant but touching) do not count. Distinct rows cutting the
        // same facet are identified by their tight vertex sets.
        let mut facets: Vec<(Vec<usize>, usize)> = Vec::new();
        for i in 0..p.constraints.len() {
            let on_face: Vec<usize> = (0..vs.len())
                .filter(|&v| vs.tight_sets[v].contains(&i))
                .collect();
            let pts: Vec<RatVector> = on_face.iter().map(|&v| vs.vertices[v].clone()).collect();
            if !pts.is_empty()
                && dimension >= 1
                && affine_rank(&pts) == dimension - 1
                && !facets.iter().any(|(f, _)| f == &on_face)
            {
                facets.push((on_face, i));
            }
        }
        let simple = (0..vs.len())
            .all(|v| facets.iter().filter(|(f, _)| f.contains(&v)).count() == dimension);
        let mut smooth = simple && dimension == p.dim;
        if smooth {
            'vertex: for v in 0..vs.len() {
                let mut rows = Vec::with_capacity(p.dim);
                for (f, i) in &facets {
                    if f.contains(&v) {
                        let (_, w) = p.primitive(*i)?;
                        rows.push(w.to_rat());
                    }
                }
                let d = linalg::det(&rows);
                if d != rat(1) && d != rat(-1) {
                    smooth = false;
                    break 'vertex;
                }
            }
        }
        (simple, smooth, dimension)
    } else {
        (false, false, affine_dimension(p)?)
    };
    Ok(PropertyReport {
        compact,
        simple,
        smooth,
        monotone,
        reflexive,
        trivially_labeled,
        dimension,
    })
}

/// Moment polytope of the weighted projective space with weights `m`
/// (`m_d = 1`) at level `λ`:
/// `{⟨x,−e_i⟩ ≤ λ for i < d} ∩ {⟨x,(m_1,…,m_{d−1})⟩ ≤ λ}` in `R^{d−1}`.
pub fn wps_polytope(m: &[i64], lambda: &Rational) -> Result<LabeledPolytope> {
    if m.len() < 2 || m.iter().any(|&w| w <= 0) || *m.last().unwrap() != 1 {
        return Err(Error::BadWeights);
    }
    let gcd = m.iter().fold(0i64, |acc, &w| num_integer::gcd(acc, w));
    if gcd != 1 {
        return Err(Error::BadWeights);
    }
    if !lambda.is_positive() {
        return Err(Error::BadWeights);
    }
    let n = m.len() - 1;
    let mut rows = Vec::with_capacity(m.len());
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = -1;
        rows.push(Constraint::new(IntVector::from_i64(&e), lambda.clone()));
    }
    rows.push(Constraint::new(
        IntVector::from_i64(&m[..n]),
        lambda.clone(),
    ));
    Ok(LabeledPolytope::new(n, rows))
}

/// Vertices of the polar `{y : ⟨y,x⟩ ≤ 1 for all x ∈ P}`.
pub fn polar_dual(p: &LabeledPolytope) -> Result<VertexSet> {
    if !p.equalities.is_empty() || p.constraints.iter().any(|c| !c.offset.is_positive()) {
        return Err(Error::OriginNotInterior);
    }
    let vs = vertices(p)?;
    let rows = vs
        .vertices
        .iter()
        .map(|v| {
            let (c, w) = v.clear_denominators();
            Constraint::new(w, Rational::from_integer(c))
        })
        .collect();
    vertices(&LabeledPolytope::new(p.dim, rows))
}

/// `P ⊆ Q`, decided by checking every vertex of `P` against the rows of `Q`.
pub fn is_subset(p: &LabeledPolytope, q: &LabeledPolytope) -> Result<bool> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: q.dim,
        });
    }
    let vs = vertices(p)?;
    Ok(subset_by_vertices(&vs, q))
}

/// Subset test against precomputed vertices of the left-hand side.
pub fn subset_by_vertices(vs: &VertexSet, q: &LabeledPolytope) -> bool {
    vs.vertices.iter().all(|v| q.contains(v))
}

/// All integer points of a compact polytope, lexicographically sorted
/// (bounding-box scan with exact membership tests).
pub fn enumerate_lattice_points(p: &LabeledPolytope) -> Result<Vec<IntVector>> {
    if p.feasible_point().is_err() {
        return Ok(Vec::new());
    }
    let mut lower = Vec::with_capacity(p.dim);
    let mut upper = Vec::with_capacity(p.dim);
    for k in 0..p.dim {
        let mut objective = RatVector::zeros(p.dim);
        objective.0[k] = rat(1);
        let hi = p.maximize(&objective);
        if hi.status != LpStatus::Optimal {
            return Err(Error::Unbounded);
        }
        objective.0[k] = rat(-1);
        let lo = p.maximize(&objective);
        if lo.status != LpStatus::Optimal {
            return Err(Error::Unbounded);
        }
        upper.push(floor_int(&hi.optimum.unwrap()));
        lower.push(ceil_int(&(-lo.optimum.unwrap())));
    }
    let mut out = Vec::new();
    let mut current: Vec<Int> = lower.clone();
    if (0..p.dim).any(|k| lower[k] > upper[k]) {
        return Ok(out);
    }
    loop {
        let candidate = IntVector(current.clone());
        if p.contains(&candidate.to_rat()) {
            out.push(candidate);
        }
        // lexicographic odometer, last coordinate fastest
        let mut k = p.dim;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if current[k] < upper[k] {
                current[k] += 1;
                for j in k + 1..p.dim {
                    current[j] = lower[j].clone();
                }
                break;
            }
        }
    }
}
