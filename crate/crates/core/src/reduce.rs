//! Minkowski weights and the centered-reduction certificate.
//!
//! A compact monotone polytope with constraint normals `v_1, …, v_d` admits a
//! positive integer relation `Σ mᵢ vᵢ = 0`; normalized to content 1 these
//! `mᵢ` are the weights of a weighted projective space whose moment polytope
//! is a rescaling of the factor. Stacking the constraint systems of all
//! monotone factors of a centered polytope `P ⊂ R^n` gives a single linear
//! map `π : R^{d_total} → R^n` (columns are the stacked normals), and `P`
//! is recovered as a symplectic reduction of the product of those weighted
//! projective spaces: the reducing subtorus is the kernel of the lifted
//! torus map, split as (product of the factors' residual circles) × (a
//! complementary subtorus acting at moment level zero). The certificate
//! below records every ingredient of that splitting, and
//! [`verify_certificate`] re-derives each claimed identity from scratch so
//! a forged or corrupted certificate is rejected.

use num_traits::{One, Signed, Zero};

use crate::decompose::{self, FactorKind, MonotoneFactor};
use crate::lattice;
use crate::linalg;
use crate::lp::{lp_solve, LpProblem, LpStatus};
use crate::polytope::{Constraint, LabeledPolytope};
use crate::rational::{primitive_decompose, rat, IntVector, RatVector, Rational};
use crate::shrink;
use crate::{Error, Result};

/// Minimal positive integer relation among the constraint normals.
///
/// Solves `min Σ mᵢ` over `{m ≥ 1 : Σ mᵢ vᵢ = 0}` exactly and scales the
/// optimum to the coprime integer vector on its ray. Such a relation exists
/// precisely when the normals positively span their linear span — for a
/// full-dimensional polytope that is equivalent to compactness, so an
/// unbounded input surfaces here as [`Error::Infeasible`]. (Cylinder factors
/// are fine: their normals positively span the smaller subspace the cylinder
/// is compact in.)
pub fn minkowski_weights(p: &LabeledPolytope) -> Result<IntVector> {
    p.validate()?;
    let d = p.constraints.len();
    let mut lp = LpProblem::new(RatVector::from_i64(&vec![-1; d]));
    for i in 0..d {
        let mut row = RatVector::zeros(d);
        row.0[i] = rat(-1);
        lp.inequalities.push((row, rat(-1)));
    }
    for coord in 0..p.dim {
        let row = RatVector(
            p.constraints
                .iter()
                .map(|c| Rational::from_integer(c.normal.0[coord].clone()))
                .collect(),
        );
        lp.equalities.push((row, Rational::zero()));
    }
    let r = lp_solve(&lp);
    match r.status {
        LpStatus::Infeasible => Err(Error::Infeasible),
        LpStatus::Unbounded => unreachable!("Σmᵢ ≥ d bounds the objective"),
        LpStatus::Optimal => {
            let witness = r.witness.expect("optimal LP carries a witness");
            let (_, ints) = witness.clear_denominators();
            let (_, weights) = primitive_decompose(&ints)?;
            Ok(weights)
        }
    }
}

/// Stacked normals of `p` as the columns of the lifted torus map
/// `π : R^d → R^n`, together with a basis of its saturated integer kernel.
///
/// The kernel is the Lie-algebra lattice of the subtorus one reduces by; its
/// rank is `d − n` once the normals span `R^n`, and a failure of that span
/// (impossible for compact full-dimensional inputs) is reported as
/// [`Error::RankDeficient`].
pub fn lt_kernel(p: &LabeledPolytope) -> Result<(Vec<IntVector>, Vec<IntVector>)> {
    p.validate()?;
    let columns: Vec<IntVector> = p.constraints.iter().map(|c| c.normal.clone()).collect();
    let rows: Vec<RatVector> = columns.iter().map(|c| c.to_rat()).collect();
    if linalg::rank(&rows) < p.dim {
        return Err(Error::RankDeficient);
    }
    Ok((columns.clone(), lattice::integer_kernel_basis(&columns, p.dim)))
}

/// One factor's contribution to the stacked reduction data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCertificate {
    pub kind: FactorKind,
    /// `(start, len)`: the factor's block of stacked constraint indices.
    pub block: (usize, usize),
    /// Weighted-projective-space weights of the factor (positive, coprime).
    pub weights: IntVector,
    /// Common offset λ of the monotone factor.
    pub level: Rational,
    /// The weights embedded on the factor's block inside `Z^{d_total}`;
    /// generates the factor's residual circle inside the kernel lattice.
    pub circle_vector: IntVector,
}

/// Everything needed to exhibit a centered polytope as the moment image of
/// a reduction of a product of weighted projective spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCertificate {
    /// The centered polytope the certificate describes.
    pub polytope: LabeledPolytope,
    /// Translation that centered the original input.
    pub translation: RatVector,
    /// Number of stacked constraints, Σ over factors.
    pub d_total: usize,
    /// Columns of `π : R^{d_total} → R^n` — the stacked factor normals.
    pub pi_columns: Vec<IntVector>,
    /// Basis of the saturated integer kernel of `π` (rank `d_total − n`).
    pub kernel_basis: Vec<IntVector>,
    pub factors: Vec<FactorCertificate>,
    /// Completion of the circle vectors to a basis of the kernel lattice;
    /// the subtorus it spans reduces at moment level zero.
    pub complement_basis: Vec<IntVector>,
    /// Per stacked constraint: the central level `2λ` of the ambient
    /// product's monotone symplectic form.
    pub central_levels: Vec<Rational>,
    /// Per stacked constraint: the moment shift `Λ = (λ, …, λ)` blockwise;
    /// satisfies `−½(2Λ) + Λ = 0`, so the reduction happens at level zero.
    pub lambda_block: Vec<Rational>,
}

/// Build and self-verify the reduction certificate for `p`.
///
/// The input is centered first (the certificate records the translation),
/// its Theorem-style monotone factorization is computed, and every identity
/// the certificate asserts is checked before it is returned; a violation is
/// an internal error surfaced as [`Error::CertificateCheckFailed`].
pub fn reduction_certificate(p: &LabeledPolytope) -> Result<ReductionCertificate> {
    let plan = decompose::decomposition_plan(p)?;
    let factors = decompose::build_factors(&plan);

    let mut pi_columns = Vec::new();
    let mut central_levels = Vec::new();
    let mut lambda_block = Vec::new();
    let mut partial = Vec::new();
    for f in &factors {
        let start = pi_columns.len();
        let weights = minkowski_weights(&f.polytope)?;
        for c in &f.polytope.constraints {
            pi_columns.push(c.normal.clone());
            central_levels.push(&f.level * rat(2));
            lambda_block.push(f.level.clone());
        }
        partial.push((f.kind.clone(), (start, f.polytope.constraints.len()), weights, f.level.clone()));
    }
    let d_total = pi_columns.len();
    let n = plan.polytope.dim;

    let rows: Vec<RatVector> = pi_columns.iter().map(|c| c.to_rat()).collect();
    if linalg::rank(&rows) < n {
        return Err(Error::RankDeficient);
    }
    let kernel_basis = lattice::integer_kernel_basis(&pi_columns, n);

    let mut fcerts = Vec::new();
    let mut circles = Vec::new();
    for (kind, block, weights, level) in partial {
        let mut circle = IntVector::zeros(d_total);
        for (k, w) in weights.0.iter().enumerate() {
            circle.0[block.0 + k] = w.clone();
        }
        circles.push(circle.clone());
        fcerts.push(FactorCertificate {
            kind,
            block,
            weights,
            level,
            circle_vector: circle,
        });
    }
    let complement = lattice::complement_basis(&circles, &kernel_basis)?;

    let cert = ReductionCertificate {
        polytope: plan.polytope.clone(),
        translation: plan.translation.clone(),
        d_total,
        pi_columns,
        kernel_basis,
        factors: fcerts,
        complement_basis: complement,
        central_levels,
        lambda_block,
    };
    let report = verify_certificate(p, &cert);
    if !report.all_passed() {
        return Err(Error::CertificateCheckFailed(format!(
            "self-check failed: {report:?}"
        )));
    }
    Ok(cert)
}

/// Outcome of the six independent certificate checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    /// (a) Each factor's weights are positive, coprime, and satisfy the
    /// Minkowski relation `Σ mᵢ vᵢ = 0` on the factor's block.
    pub weights_ok: bool,
    /// (b) Each circle vector lies in the kernel lattice of `π`.
    pub circles_ok: bool,
    /// (c) Circle vectors plus complement form a basis of the kernel
    /// lattice (index-one completion, checked by Smith normal form).
    pub completion_ok: bool,
    /// (d) Level bookkeeping: `central = 2λ` blockwise and `−½(2Λ)+Λ = 0`.
    pub levels_ok: bool,
    /// (e) The stacked constraint system intersects back to the centered
    /// polytope, factor by factor.
    pub intersection_ok: bool,
    /// (f) The origin is strictly interior to the centered polytope.
    pub origin_ok: bool,
}

impl CertificateReport {
    pub fn all_passed(&self) -> bool {
        self.weights_ok
            && self.circles_ok
            && self.completion_ok
            && self.levels_ok
            && self.intersection_ok
            && self.origin_ok
    }
}

fn block_polytope(cert: &ReductionCertificate, f: &FactorCertificate) -> LabeledPolytope {
    let (start, len) = f.block;
    let constraints = (start..start + len)
        .map(|i| Constraint::new(cert.pi_columns[i].clone(), f.level.clone()))
        .collect();
    LabeledPolytope::new(cert.polytope.dim, constraints)
}

fn blocks_partition(cert: &ReductionCertificate) -> bool {
    let mut next = 0;
    for f in &cert.factors {
        if f.block.0 != next {
            return false;
        }
        next += f.block.1;
    }
    next == cert.d_total && cert.pi_columns.len() == cert.d_total
}

/// Re-derive every identity the certificate asserts about `p`.
///
/// Each check is independent so a mutation of one ingredient flips exactly
/// the check that guards it. Internal computation failures (for instance a
/// non-compact `p` that cannot be centered) count as a failed check rather
/// than an error.
pub fn verify_certificate(p: &LabeledPolytope, cert: &ReductionCertificate) -> CertificateReport {
    let shape_ok = blocks_partition(cert);

    // (a) Minkowski relation per factor block.
    let weights_ok = shape_ok
        && cert.factors.iter().all(|f| {
            let (start, len) = f.block;
            if f.weights.len() != len || f.weights.0.iter().any(|w| !w.is_positive()) {
                return false;
            }
            if !f.weights.content().is_one() {
                return false;
            }
            let mut sum = IntVector::zeros(cert.polytope.dim);
            for (k, w) in f.weights.0.iter().enumerate() {
                sum = sum.add(&cert.pi_columns[start + k].scaled(w));
            }
            sum.is_zero()
        });

    // (b) Circle vectors lie in ker π ∩ Z^{d_total}.
    let circles_ok = shape_ok
        && cert.factors.iter().all(|f| {
            if f.circle_vector.len() != cert.d_total {
                return false;
            }
            let mut sum = IntVector::zeros(cert.polytope.dim);
            for (i, c) in f.circle_vector.0.iter().enumerate() {
                sum = sum.add(&cert.pi_columns[i].scaled(c));
            }
            sum.is_zero()
        });

    // (c) Circles + complement form a basis of the kernel lattice: express
    // everything in kernel-basis coordinates (necessarily integral) and
    // demand all Smith invariant factors equal one.
    let completion_ok = shape_ok && {
        let r = cert.kernel_basis.len();
        let family: Vec<&IntVector> = cert
            .factors
            .iter()
            .map(|f| &f.circle_vector)
            .chain(cert.complement_basis.iter())
            .collect();
        if family.len() != r {
            false
        } else {
            let coord_rows: Vec<RatVector> = (0..cert.d_total)
                .map(|i| {
                    RatVector(
                        cert.kernel_basis
                            .iter()
                            .map(|b| Rational::from_integer(b.0[i].clone()))
                            .collect(),
                    )
                })
                .collect();
            let mut coords = Vec::with_capacity(r);
            let mut ok = true;
            'family: for v in family {
                if v.len() != cert.d_total {
                    ok = false;
                    break;
                }
                let rhs: Vec<Rational> = v
                    .0
                    .iter()
                    .map(|e| Rational::from_integer(e.clone()))
                    .collect();
                match linalg::solve_system(&coord_rows, &rhs) {
                    None => {
                        ok = false;
                        break;
                    }
                    Some(c) => {
                        let mut row = Vec::with_capacity(r);
                        for e in &c.0 {
                            if !e.is_integer() {
                                ok = false;
                                break 'family;
                            }
                            row.push(e.to_integer());
                        }
                        coords.push(IntVector(row));
                    }
                }
            }
            ok && {
                let factors = lattice::smith_invariant_factors(&coords);
                factors.len() == r && factors.iter().all(|f| f.is_one())
            }
        }
    };

    // (d) Central levels are 2λ blockwise and the moment shift cancels them.
    let levels_ok = shape_ok
        && cert.central_levels.len() == cert.d_total
        && cert.lambda_block.len() == cert.d_total
        && cert.factors.iter().all(|f| {
            let (start, len) = f.block;
            (start..start + len).all(|i| {
                cert.central_levels[i] == &f.level * rat(2)
                    && cert.lambda_block[i] == f.level
                    && (-&cert.central_levels[i] / rat(2) + &cert.lambda_block[i]).is_zero()
            })
        });

    // (e) The stacked system cuts out the centered polytope again.
    let intersection_ok = shape_ok
        && match shrink::center(p) {
            Err(_) => false,
            Ok((centered, shift)) => {
                centered == cert.polytope
                    && shift == cert.translation
                    && {
                        let rebuilt: Vec<MonotoneFactor> = cert
                            .factors
                            .iter()
                            .map(|f| MonotoneFactor {
                                kind: f.kind.clone(),
                                polytope: block_polytope(cert, f),
                                level: f.level.clone(),
                            })
                            .collect();
                        decompose::verify_theorem1(&cert.polytope, &rebuilt).all_passed()
                    }
            }
        };

    // (f) The centered polytope has the origin strictly inside.
    let origin_ok = cert
        .polytope
        .constraints
        .iter()
        .all(|c| c.offset.is_positive())
        && cert.polytope.equalities.is_empty();

    CertificateReport {
        weights_ok,
        circles_ok,
        completion_ok,
        levels_ok,
        intersection_ok,
        origin_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::polytope::wps_polytope;
    

    fn ints(v: &[i64]) -> IntVector {
        IntVector::from_i64(v)
    }

    #[test]
    fn weights_of_projective_spaces_and_products() {
        assert_eq!(minkowski_weights(&fixtures::cp2(2)).unwrap(), ints(&[1, 1, 1]));
        assert_eq!(minkowski_weights(&fixtures::segment(5)).unwrap(), ints(&[1, 1]));
        assert_eq!(
            minkowski_weights(&fixtures::square(3)).unwrap(),
            ints(&[1, 1, 1, 1])
        );
        let wps = wps_polytope(&[2, 3, 1], &rat(1)).unwrap();
        assert_eq!(minkowski_weights(&wps).unwrap(), ints(&[2, 3, 1]));
    }

    #[test]
    fn weights_of_monotone_factors() {
        // Inner factor of the pentagon at level 8.
        let f = LabeledPolytope::from_rows(
            2,
            &[(&[0, 1], 8), (&[0, -1], 8), (&[1, 1], 8), (&[-1, 0], 8)],
        );
        assert_eq!(minkowski_weights(&f).unwrap(), ints(&[1, 2, 1, 1]));

        // Core factor of the frustum at level 2.
        let g = LabeledPolytope::from_rows(
            3,
            &[
                (&[0, 0, 1], 2),
                (&[0, 0, -1], 2),
                (&[1, 0, 1], 2),
                (&[-1, 0, 1], 2),
                (&[0, 1, 1], 2),
                (&[0, -1, 1], 2),
            ],
        );
        assert_eq!(minkowski_weights(&g).unwrap(), ints(&[1, 5, 1, 1, 1, 1]));
    }

    #[test]
    fn weights_clear_denominators_from_the_lp_vertex() {
        // min m₁+m₂ with 2m₁ = 3m₂ has the fractional optimum (3/2, 1).
        let p = LabeledPolytope::from_rows(1, &[(&[2], 1), (&[-3], 1)]);
        assert_eq!(minkowski_weights(&p).unwrap(), ints(&[3, 2]));
    }

    #[test]
    fn weights_infeasible_for_a_non_compact_quadrant() {
        let p = LabeledPolytope::from_rows(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert!(matches!(minkowski_weights(&p), Err(Error::Infeasible)));
    }

    #[test]
    fn kernel_of_the_lifted_torus_map() {
        let (cols, kernel) = lt_kernel(&fixtures::cp2(1)).unwrap();
        assert_eq!(cols.len(), 3);
        assert_eq!(kernel, vec![ints(&[1, 1, 1])]);

        let (_, kernel) = lt_kernel(&fixtures::square(2)).unwrap();
        assert_eq!(kernel, vec![ints(&[1, 1, 0, 0]), ints(&[0, 0, 1, 1])]);

        let wps = wps_polytope(&[2, 3, 1], &rat(1)).unwrap();
        let (_, kernel) = lt_kernel(&wps).unwrap();
        assert_eq!(kernel, vec![ints(&[2, 3, 1])]);
    }

    #[test]
    fn kernel_rejects_normals_that_do_not_span() {
        let p = LabeledPolytope::from_rows(2, &[(&[1, 0], 1), (&[-1, 0], 1)]);
        assert!(matches!(lt_kernel(&p), Err(Error::RankDeficient)));
    }

    #[test]
    fn certificate_for_a_projective_plane() {
        let cert = reduction_certificate(&fixtures::cp2(2)).unwrap();
        assert_eq!(cert.d_total, 3);
        assert_eq!(cert.factors.len(), 1);
        assert_eq!(cert.factors[0].weights, ints(&[1, 1, 1]));
        assert_eq!(cert.factors[0].circle_vector, ints(&[1, 1, 1]));
        assert_eq!(cert.kernel_basis, vec![ints(&[1, 1, 1])]);
        assert!(cert.complement_basis.is_empty());
        assert_eq!(cert.central_levels, vec![rat(4), rat(4), rat(4)]);
        assert!(verify_certificate(&fixtures::cp2(2), &cert).all_passed());
    }

    #[test]
    fn certificate_for_a_square() {
        let cert = reduction_certificate(&fixtures::square(3)).unwrap();
        assert_eq!(cert.d_total, 4);
        assert_eq!(cert.kernel_basis.len(), 2);
        assert_eq!(cert.factors[0].weights, ints(&[1, 1, 1, 1]));
        assert_eq!(cert.complement_basis.len(), 1);
        assert!(verify_certificate(&fixtures::square(3), &cert).all_passed());
    }

    #[test]
    fn certificate_for_the_frustum_stacks_both_factors() {
        let p = fixtures::frustum();
        let cert = reduction_certificate(&p).unwrap();
        assert_eq!(cert.d_total, 8);
        assert_eq!(cert.factors.len(), 2);
        assert_eq!(cert.factors[0].weights, ints(&[1, 5, 1, 1, 1, 1]));
        assert_eq!(cert.factors[1].weights, ints(&[1, 1]));
        assert_eq!(cert.kernel_basis.len(), 5);
        assert_eq!(cert.complement_basis.len(), 3);
        assert!(verify_certificate(&p, &cert).all_passed());
    }

    #[test]
    fn certificate_for_the_pentagon_has_three_factors() {
        let p = fixtures::pentagon();
        let cert = reduction_certificate(&p).unwrap();
        assert_eq!(cert.factors.len(), 3);
        assert_eq!(cert.factors[0].weights, ints(&[1, 2, 1, 1]));
        assert_eq!(cert.factors[1].weights, ints(&[1, 1, 1, 1, 3]));
        assert_eq!(cert.factors[2].weights, ints(&[1, 1]));
        assert_eq!(cert.factors[2].kind, FactorKind::Cylinder(1));
        assert!(verify_certificate(&p, &cert).all_passed());
    }

    #[test]
    fn negated_weights_fail_exactly_the_relation_check() {
        let p = fixtures::square(3);
        let mut cert = reduction_certificate(&p).unwrap();
        cert.factors[0].weights = cert.factors[0].weights.neg();
        let report = verify_certificate(&p, &cert);
        assert!(!report.weights_ok);
        assert!(report.circles_ok);
        assert!(report.completion_ok);
        assert!(report.levels_ok);
        assert!(report.intersection_ok);
        assert!(report.origin_ok);
    }

    #[test]
    fn truncated_complement_fails_exactly_the_completion_check() {
        let p = fixtures::frustum();
        let mut cert = reduction_certificate(&p).unwrap();
        cert.complement_basis.pop();
        let report = verify_certificate(&p, &cert);
        assert!(!report.completion_ok);
        assert!(report.weights_ok);
        assert!(report.circles_ok);
        assert!(report.levels_ok);
        assert!(report.intersection_ok);
        assert!(report.origin_ok);
    }

    #[test]
    fn certificates_pass_on_every_fixture() {
        let fixtures: Vec<LabeledPolytope> = vec![
            fixtures::hexagon(),
            fixtures::frustum(),
            fixtures::heptagon(),
            fixtures::cut_box(),
            fixtures::pentagon(),
            fixtures::cp2(3),
            fixtures::square(1),
            fixtures::segment(2),
        ];
        for p in &fixtures {
            let cert = reduction_certificate(p).unwrap();
            assert!(verify_certificate(p, &cert).all_passed());
            assert_eq!(
                cert.factors.len() + cert.complement_basis.len(),
                cert.kernel_basis.len()
            );
            for f in &cert.factors {
                assert!(f.weights.0.iter().all(|w| w.is_positive()));
                assert!(f.weights.content().is_one());
            }
        }
    }

    #[test]
    fn uncentered_input_is_centered_and_recorded() {
        let shifted = fixtures::square(2).translated(&RatVector::from_i64(&[3, -1]));
        let cert = reduction_certificate(&shifted).unwrap();
        assert_eq!(cert.polytope, fixtures::square(2));
        assert_eq!(cert.translation, RatVector::from_i64(&[-3, 1]));
        assert!(verify_certificate(&shifted, &cert).all_passed());
        // The same certificate is not valid for a differently-shifted input.
        let other = fixtures::square(2).translated(&RatVector::from_i64(&[1, 1]));
        assert!(!verify_certificate(&other, &cert).intersection_ok);
    }
}
