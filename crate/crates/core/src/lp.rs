//! Exact linear programming over the rationals.
//!
//! Two-phase primal simplex on a dense tableau. Free variables are split as
//! `x = x⁺ − x⁻`, inequality rows get slack variables, and rows without a
//! feasible slack basis get artificials. Pivoting follows Bland's rule
//! (smallest eligible entering column; leaving row breaks ratio ties by the
//! smallest basic variable index), which guarantees termination and makes
//! every result bit-reproducible.

use num_traits::{Signed, Zero};

use crate::rational::{RatVector, Rational};

/// `maximize · x` subject to `⟨a,x⟩ ≤ b` rows and `⟨c,x⟩ = d` rows.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub maximize: RatVector,
    pub inequalities: Vec<(RatVector, Rational)>,
    pub equalities: Vec<(RatVector, Rational)>,
}

impl LpProblem {
    pub fn new(maximize: RatVector) -> Self {
        LpProblem {
            maximize,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    pub optimum: Option<Rational>,
    pub witness: Option<RatVector>,
    /// Indices of inequalities active at the witness.
    pub tight: Vec<usize>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    obj: Rational,
}

impl Tableau {
    /// Rebuild the reduced-cost row and objective value for the given costs.
    fn price(&mut self, costs: &[Rational]) {
        self.cost = costs.to_vec();
        self.obj = Rational::zero();
        for i in 0..self.rows.len() {
            let cb = costs[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.cost.len() {
                let delta = &cb * &self.rows[i][j];
                self.cost[j] -= delta;
            }
            self.obj += &cb * &self.rhs[i];
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for e in self.rows[r].iter_mut() {
            *e *= &inv;
        }
        self.rhs[r] *= &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                let delta = &factor * &self.rows[r][j];
                self.rows[i][j] -= delta;
            }
            let delta = &factor * &self.rhs[r];
            self.rhs[i] -= delta;
        }
        let factor = self.cost[c].clone();
        if !factor.is_zero() {
            for j in 0..self.cost.len() {
                let delta = &factor * &self.rows[r][j];
                self.cost[j] -= delta;
            }
            self.obj += &factor * &self.rhs[r];
        }
        self.basis[r] = c;
    }

    /// Run simplex to optimality. Returns `false` when unbounded.
    fn simplex(&mut self) -> bool {
        loop {
            let Some(entering) = self.cost.iter().position(|c| c.is_positive()) else {
                return true;
            };
            let mut leaving: Option<(Rational, usize, usize)> = None; // (ratio, basic var, row)
            for i in 0..self.rows.len() {
                if !self.rows[i][entering].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][entering];
                let candidate = (ratio, self.basis[i], i);
                leaving = match leaving {
                    None => Some(candidate),
                    Some(best) => {
                        if candidate.0 < best.0 || (candidate.0 == best.0 && candidate.1 < best.1) {
                            Some(candidate)
                        } else {
                            Some(best)
                        }
                    }
                };
            }
            match leaving {
                Some((_, _, row)) => self.pivot(row, entering),
                None => return false,
            }
        }
    }
}

/// Exact two-phase simplex. Panics on inconsistent row lengths (programming
/// error); infeasibility and unboundedness are statuses, not errors.
pub fn lp_solve(p: &LpProblem) -> LpResult {
    let n = p.maximize.len();
    for (a, _) in p.inequalities.iter().chain(&p.equalities) {
        assert_eq!(a.len(), n, "LP row length must match variable count");
    }
    let mi = p.inequalities.len();
    let m = mi + p.equalities.len();
    let structural = 2 * n + mi;

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut needs_artificial: Vec<bool> = Vec::with_capacity(m);
    for (k, (a, b)) in p.inequalities.iter().enumerate() {
        let mut row = vec![Rational::zero(); structural];
        for j in 0..n {
            row[j] = a.0[j].clone();
            row[n + j] = -a.0[j].clone();
        }
        row[2 * n + k] = Rational::from_integer(1.into());
        let negate = b.is_negative();
        if negate {
            for e in row.iter_mut() {
                *e = -e.clone();
            }
        }
        rows.push(row);
        rhs.push(if negate { -b.clone() } else { b.clone() });
        needs_artificial.push(negate);
    }
    for (a, b) in &p.equalities {
        let mut row = vec![Rational::zero(); structural];
        for j in 0..n {
            row[j] = a.0[j].clone();
            row[n + j] = -a.0[j].clone();
        }
        let negate = b.is_negative();
        if negate {
            for e in row.iter_mut() {
                *e = -e.clone();
            }
        }
        rows.push(row);
        rhs.push(if negate { -b.clone() } else { b.clone() });
        needs_artificial.push(true);
    }

    let mut basis = Vec::with_capacity(m);
    let mut artificials = 0;
    for (i, row) in rows.iter_mut().enumerate() {
        if needs_artificial[i] {
            basis.push(structural + artificials);
            artificials += 1;
        } else {
            basis.push(2 * n + i); // its own slack, coefficient +1
        }
        let _ = row;
    }
    let ncols = structural + artificials;
    let mut art_seen = 0;
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(ncols, Rational::zero());
        if needs_artificial[i] {
            row[structural + art_seen] = Rational::from_integer(1.into());
            art_seen += 1;
        }
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        cost: Vec::new(),
        obj: Rational::zero(),
    };

    if artificials > 0 {
        let mut phase1 = vec![Rational::zero(); ncols];
        for c in phase1.iter_mut().skip(structural) {
            *c = Rational::from_integer((-1).into());
        }
        t.price(&phase1);
        let bounded = t.simplex();
        debug_assert!(bounded, "phase-1 objective is bounded above by zero");
        if t.obj.is_negative() {
            return LpResult {
                status: LpStatus::Infeasible,
                optimum: None,
                witness: None,
                tight: Vec::new(),
            };
        }
        // Drive remaining artificials out of the basis (their values are 0).
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= structural {
                match (0..structural).find(|&c| !t.rows[r][c].is_zero()) {
                    Some(c) => t.pivot(r, c),
                    None => {
                        // Redundant row: drop it.
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in t.rows.iter_mut() {
            row.truncate(structural);
        }
    }

    let mut phase2 = vec![Rational::zero(); structural];
    for j in 0..n {
        phase2[j] = p.maximize.0[j].clone();
        phase2[n + j] = -p.maximize.0[j].clone();
    }
    t.price(&phase2);
    if !t.simplex() {
        return LpResult {
            status: LpStatus::Unbounded,
            optimum: None,
            witness: None,
            tight: Vec::new(),
        };
    }

    let mut x = RatVector::zeros(n);
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x.0[b] += &t.rhs[i];
        } else if b < 2 * n {
            x.0[b - n] -= &t.rhs[i];
        }
    }
    let tight = p
        .inequalities
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| &a.dot(&x) == b)
        .map(|(k, _)| k)
        .collect();
    LpResult {
        status: LpStatus::Optimal,
        optimum: Some(t.obj),
        witness: Some(x),
        tight,
    }
}
