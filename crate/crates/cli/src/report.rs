//! Report schemas and bit-exact serialization.
//!
//! Every scalar produced by the library is serialized as a canonical string:
//! rationals as `"p/q"` (or `"p"` when integral, always in lowest terms with
//! the sign on the numerator) and big integers as their decimal digits, so
//! parsing a report back recovers the exact values. Constraint, stage, and
//! group indices are 1-based in every report. JSON output is rendered with
//! `serde_json`'s pretty printer over plain structs, so the byte stream is a
//! pure function of the data; text output renders the same values through a
//! small YAML-like printer.

use serde::Serialize;
use toricsmith_core::decompose::{DecompositionPlan, FactorKind, MonotoneFactor, VerificationReport};
use toricsmith_core::gromov::{FanoStatus, GromovBounds, LowerStatus};
use toricsmith_core::polytope::{LabeledPolytope, PropertyReport};
use toricsmith_core::rational::{IntVector, RatVector, Rational};
use toricsmith_core::reduce::{CertificateReport, ReductionCertificate};
use toricsmith_core::shrink::{EventKind, ShrinkTrace};

pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_vec(v: &RatVector) -> Vec<String> {
    v.0.iter().map(rational_string).collect()
}

pub fn integer_vec(v: &IntVector) -> Vec<String> {
    v.0.iter().map(|e| e.to_string()).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|&i| i + 1).collect()
}

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputMeta>,
    pub report: T,
}

#[derive(Serialize, Clone)]
pub struct InputMeta {
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub sha256: String,
    pub dim: usize,
    pub constraints: usize,
}

#[derive(Serialize)]
pub struct ErrorEnvelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputMeta>,
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Serialize)]
pub struct PolytopeJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Serialize)]
pub struct ConstraintJson {
    pub normal: Vec<i64>,
    pub offset: String,
}

pub fn polytope_json(p: &LabeledPolytope, name: Option<&str>) -> PolytopeJson {
    PolytopeJson {
        name: name.map(str::to_owned),
        dim: p.dim,
        constraints: p
            .constraints
            .iter()
            .map(|c| ConstraintJson {
                normal: c
                    .normal
                    .0
                    .iter()
                    .map(|e| i64::try_from(e).expect("normal entry fits i64"))
                    .collect(),
                offset: rational_string(&c.offset),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub classification: Classification,
}

#[derive(Serialize)]
pub struct Classification {
    pub compact: bool,
    pub simple: bool,
    pub smooth: bool,
    pub monotone: bool,
    pub reflexive: bool,
    pub trivially_labeled: bool,
    pub dimension: usize,
}

pub fn validate_report(r: &PropertyReport) -> ValidateReport {
    ValidateReport {
        valid: true,
        classification: Classification {
            compact: r.compact,
            simple: r.simple,
            smooth: r.smooth,
            monotone: r.monotone,
            reflexive: r.reflexive,
            trivially_labeled: r.trivially_labeled,
            dimension: r.dimension,
        },
    }
}

#[derive(Serialize)]
pub struct ShrinkReport {
    pub m: usize,
    pub times: Vec<String>,
    pub endpoint: Vec<String>,
    pub stages: Vec<StageJson>,
    pub events: Vec<EventJson>,
}

#[derive(Serialize)]
pub struct StageJson {
    pub index: usize,
    pub time: String,
    pub d_set: Vec<usize>,
    pub k: usize,
    pub base_point: Vec<String>,
    pub hull_basis: Vec<Vec<String>>,
    pub projected_normals: Vec<ProjectedJson>,
}

#[derive(Serialize)]
pub struct ProjectedJson {
    pub constraint: usize,
    pub vector: Vec<String>,
    pub label: String,
    pub primitive: Vec<String>,
}

#[derive(Serialize)]
pub struct EventJson {
    pub time: String,
    pub constraint: usize,
    pub kind: &'static str,
}

pub fn shrink_report(trace: &ShrinkTrace) -> ShrinkReport {
    ShrinkReport {
        m: trace.m,
        times: trace.times().iter().map(rational_string).collect(),
        endpoint: rational_vec(&trace.endpoint),
        stages: trace
            .stages
            .iter()
            .map(|s| StageJson {
                index: s.index,
                time: rational_string(&s.time),
                d_set: one_based(&s.d_set),
                k: s.k,
                base_point: rational_vec(&s.base_point),
                hull_basis: s.hull_basis.iter().map(rational_vec).collect(),
                projected_normals: s
                    .projected
                    .iter()
                    .map(|pr| ProjectedJson {
                        constraint: pr.index + 1,
                        vector: rational_vec(&pr.vector),
                        label: rational_string(&pr.label),
                        primitive: integer_vec(&pr.primitive),
                    })
                    .collect(),
            })
            .collect(),
        events: trace
            .events
            .iter()
            .map(|e| EventJson {
                time: rational_string(&e.time),
                constraint: e.constraint + 1,
                kind: match e.kind {
                    EventKind::BecomesRedundant => "becomes_redundant",
                    EventKind::BecomesRelevant => "becomes_relevant",
                },
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct CenterReport {
    pub translation: Vec<String>,
    pub polytope: PolytopeJson,
}

#[derive(Serialize)]
pub struct DecomposeReport {
    pub translation: Vec<String>,
    pub m: usize,
    pub n_groups: usize,
    pub factor_count: usize,
    pub times: Vec<String>,
    pub d_sets: Vec<Vec<usize>>,
    pub groups: Vec<GroupJson>,
    pub factors: Vec<FactorJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationJson>,
}

#[derive(Serialize)]
pub struct GroupJson {
    pub indices: Vec<usize>,
    pub value: String,
}

#[derive(Serialize)]
pub struct FactorJson {
    pub kind: &'static str,
    pub index: usize,
    pub level: String,
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Serialize)]
pub struct VerificationJson {
    pub containment: Vec<bool>,
    pub intersection_matches: bool,
    pub factor_states: Vec<bool>,
    pub all_passed: bool,
}

fn kind_parts(kind: &FactorKind) -> (&'static str, usize) {
    match kind {
        FactorKind::FullDim(k) => ("full_dim", *k),
        FactorKind::Cylinder(j) => ("cylinder", *j),
    }
}

pub fn verification_json(v: &VerificationReport) -> VerificationJson {
    VerificationJson {
        containment: v.containment.clone(),
        intersection_matches: v.intersection_matches,
        factor_states: v.factor_states.clone(),
        all_passed: v.all_passed(),
    }
}

pub fn decompose_report(
    plan: &DecompositionPlan,
    factors: &[MonotoneFactor],
    verification: Option<&VerificationReport>,
) -> DecomposeReport {
    DecomposeReport {
        translation: rational_vec(&plan.translation),
        m: plan.m,
        n_groups: plan.n_groups,
        factor_count: factors.len(),
        times: plan
            .trace
            .stages
            .iter()
            .map(|s| rational_string(&s.time))
            .collect(),
        d_sets: plan
            .trace
            .stages
            .iter()
            .map(|s| one_based(&s.d_set))
            .collect(),
        groups: plan
            .groups
            .iter()
            .map(|g| GroupJson {
                indices: one_based(&g.indices),
                value: rational_string(&g.value),
            })
            .collect(),
        factors: factors
            .iter()
            .map(|f| {
                let (kind, index) = kind_parts(&f.kind);
                FactorJson {
                    kind,
                    index,
                    level: rational_string(&f.level),
                    constraints: polytope_json(&f.polytope, None).constraints,
                }
            })
            .collect(),
        verification: verification.map(verification_json),
    }
}

#[derive(Serialize)]
pub struct ReduceReport {
    pub d_total: usize,
    pub translation: Vec<String>,
    pub pi_columns: Vec<Vec<String>>,
    pub kernel_basis: Vec<Vec<String>>,
    pub factors: Vec<ReduceFactorJson>,
    pub complement_basis: Vec<Vec<String>>,
    pub central_levels: Vec<String>,
    pub lambda_block: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<CertificateJson>,
}

#[derive(Serialize)]
pub struct ReduceFactorJson {
    pub kind: &'static str,
    pub index: usize,
    pub block_start: usize,
    pub block_len: usize,
    pub weights: Vec<String>,
    pub level: String,
    pub circle_vector: Vec<String>,
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub weights_ok: bool,
    pub circles_ok: bool,
    pub completion_ok: bool,
    pub levels_ok: bool,
    pub intersection_ok: bool,
    pub origin_ok: bool,
    pub all_passed: bool,
}

pub fn reduce_report(
    cert: &ReductionCertificate,
    verification: Option<&CertificateReport>,
) -> ReduceReport {
    ReduceReport {
        d_total: cert.d_total,
        translation: rational_vec(&cert.translation),
        pi_columns: cert.pi_columns.iter().map(integer_vec).collect(),
        kernel_basis: cert.kernel_basis.iter().map(integer_vec).collect(),
        factors: cert
            .factors
            .iter()
            .map(|f| {
                let (kind, index) = kind_parts(&f.kind);
                ReduceFactorJson {
                    kind,
                    index,
                    block_start: f.block.0 + 1,
                    block_len: f.block.1,
                    weights: integer_vec(&f.weights),
                    level: rational_string(&f.level),
                    circle_vector: integer_vec(&f.circle_vector),
                }
            })
            .collect(),
        complement_basis: cert.complement_basis.iter().map(integer_vec).collect(),
        central_levels: cert.central_levels.iter().map(rational_string).collect(),
        lambda_block: cert.lambda_block.iter().map(rational_string).collect(),
        verification: verification.map(|v| CertificateJson {
            weights_ok: v.weights_ok,
            circles_ok: v.circles_ok,
            completion_ok: v.completion_ok,
            levels_ok: v.levels_ok,
            intersection_ok: v.intersection_ok,
            origin_ok: v.origin_ok,
            all_passed: v.all_passed(),
        }),
    }
}

#[derive(Serialize)]
pub struct GromovReport {
    pub lower: LowerJson,
    pub upper: UpperJson,
    pub equality: bool,
}

#[derive(Serialize)]
pub struct LowerJson {
    pub pi_coefficient: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ewald_basis: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
pub struct UpperJson {
    pub pi_coefficient: String,
    pub witness: WitnessJson,
    pub fano_status: &'static str,
}

#[derive(Serialize)]
pub struct WitnessJson {
    pub support: Vec<usize>,
    pub coefficients: Vec<String>,
}

pub fn gromov_report(bounds: &GromovBounds) -> GromovReport {
    GromovReport {
        lower: LowerJson {
            pi_coefficient: rational_string(&bounds.lower.pi_coefficient),
            status: match bounds.lower.status {
                LowerStatus::Certified => "certified",
                LowerStatus::EwaldNotFound => "ewald_not_found",
                LowerStatus::NotApplicable => "not_applicable",
            },
            ewald_basis: bounds
                .lower
                .ewald_basis
                .as_ref()
                .map(|basis| basis.iter().map(integer_vec).collect()),
        },
        upper: UpperJson {
            pi_coefficient: rational_string(&bounds.upper.pi_coefficient),
            witness: WitnessJson {
                support: one_based(&bounds.upper.witness.support),
                coefficients: bounds
                    .upper
                    .witness
                    .coefficients
                    .iter()
                    .map(|c| c.to_string())
                    .collect(),
            },
            fano_status: match bounds.upper.fano_status {
                FanoStatus::ReflexiveCompanionOK => "reflexive_companion_ok",
                FanoStatus::NotVerified => "not_verified",
            },
        },
        equality: bounds.equality,
    }
}

#[derive(Serialize)]
pub struct AllReport {
    pub validate: ValidateReport,
    pub shrink: ShrinkReport,
    pub center: CenterReport,
    pub decompose: DecomposeReport,
    pub reduce: ReduceReport,
    pub gromov: GromovReport,
}

#[derive(Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub count: u32,
    pub passed: u32,
    pub failures: Vec<FuzzFailure>,
}

#[derive(Serialize)]
pub struct FuzzFailure {
    pub index: u32,
    pub seed: u64,
    pub dim: usize,
    pub message: String,
}

/// Render any report value as indented `key: value` text (YAML-like).
///
/// Keys appear in alphabetical order (the `serde_json::Value` map is
/// ordered), scalars and scalar arrays inline, and object arrays become
/// dashed list items. Purely cosmetic — the JSON form is the contract.
pub fn render_text(value: &serde_json::Value) -> String {
    let mut out = String::new();
    render_value(value, 0, &mut out);
    out
}

fn inline(value: &serde_json::Value) -> Option<String> {
    use serde_json::Value;
    match value {
        Value::Null => Some("null".to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn render_value(value: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                match inline(v) {
                    Some(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_value(v, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match inline(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_value(item, indent + 1, out);
                    }
                }
            }
        }
        scalar => {
            let s = inline(scalar).expect("scalars always inline");
            out.push_str(&format!("{pad}{s}\n"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use toricsmith_core::rational::{rat, ratio};

    #[test]
    fn rational_strings_are_canonical_and_round_trip() {
        use std::str::FromStr;
        for r in [rat(4), rat(-3), ratio(5, 3), ratio(-7, 2), ratio(6, 4)] {
            let s = rational_string(&r);
            assert_eq!(Rational::from_str(&s).unwrap(), r);
        }
        assert_eq!(rational_string(&ratio(6, 4)), "3/2");
        assert_eq!(rational_string(&ratio(-8, 2)), "-4");
    }

    #[test]
    fn text_rendering_inlines_scalar_arrays() {
        let v = serde_json::json!({
            "times": ["2", "6"],
            "stages": [{"index": 1, "d_set": [1, 2]}],
            "equality": true
        });
        let text = render_text(&v);
        assert!(text.contains("times: [2, 6]"));
        assert!(text.contains("- d_set: [1, 2]") || text.contains("d_set: [1, 2]"));
        assert!(text.contains("equality: true"));
    }
}
