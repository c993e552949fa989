//! End-to-end acceptance suite.
//!
//! Exercises the full pipeline — shrinking traces, monotone decompositions,
//! Minkowski weights, reduction certificates, width bounds, and the CLI's
//! deterministic output contract — against the bundled example polytopes and
//! seeded random inputs. Every comparison is exact: rational equality with
//! zero tolerance, byte equality for serialized reports.

use std::path::PathBuf;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricsmith_core::decompose::{
    build_factors, decomposition_plan, verify_theorem1, FactorKind, MonotoneFactor,
};
use toricsmith_core::error::Error;
use toricsmith_core::fixtures;
use toricsmith_core::generator::random_centered_polytope;
use toricsmith_core::gromov::{ewald_basis, reflexive_companion, width_report, LowerStatus};
use toricsmith_core::polytope::{classify, dimension, LabeledPolytope};
use toricsmith_core::rational::{rat, ratio, Int, IntVector, Rational};
use toricsmith_core::reduce::{minkowski_weights, reduction_certificate, verify_certificate};
use toricsmith_core::shrink::{center, remaining_time, shrink_trace, slice, EventKind};

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.pop();
    path.pop();
    path.push("fixtures");
    path.push(name);
    path.to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.extend(["tests", "golden", name, "out.json"]);
    std::fs::read_to_string(path).expect("golden file is readable")
}

fn all_fixtures() -> Vec<(&'static str, LabeledPolytope)> {
    vec![
        ("hexagon", fixtures::hexagon()),
        ("frustum", fixtures::frustum()),
        ("heptagon", fixtures::heptagon()),
        ("cut_box", fixtures::cut_box()),
        ("pentagon", fixtures::pentagon()),
        ("square", fixtures::square(1)),
        ("cp2", fixtures::cp2(1)),
        ("segment", fixtures::segment(1)),
    ]
}

/// Shrinking traces of the five example polytopes: stage times, dimension
/// drops, endpoints, and the redundancy-event timeline.
#[test]
fn example_shrink_traces_match_hand_computations() {
    // Hexagon: one stage at t1 = 3, endpoint the origin, and the long
    // constraint 6 becomes redundant at t = 2.
    let trace = shrink_trace(&fixtures::hexagon()).unwrap();
    assert_eq!(trace.times(), vec![rat(3)]);
    assert!(trace.endpoint.is_zero());
    assert_eq!(trace.events.len(), 1);
    assert_eq!(trace.events[0].time, rat(2));
    assert_eq!(trace.events[0].constraint, 5);
    assert_eq!(trace.events[0].kind, EventKind::BecomesRedundant);

    // Frustum: stages at t = 1 and t = 2 with dimension drops 1 then 2.
    let trace = shrink_trace(&fixtures::frustum()).unwrap();
    assert_eq!(trace.times(), vec![rat(1), rat(2)]);
    assert_eq!(trace.drops(), vec![1, 2]);
    assert!(trace.endpoint.is_zero());

    // Heptagon: a single stage at t1 = 4; redundancies at t = 1 and t = 2.
    let trace = shrink_trace(&fixtures::heptagon()).unwrap();
    assert_eq!(trace.times(), vec![rat(4)]);
    let mut event_times: Vec<Rational> = trace.events.iter().map(|e| e.time.clone()).collect();
    event_times.sort();
    assert_eq!(event_times, vec![rat(1), rat(2), rat(2)]);
    assert!(trace
        .events
        .iter()
        .all(|e| e.kind == EventKind::BecomesRedundant));

    // Cut box: stages at t = 1, 3, 4 and one redundancy at t = 2.
    let trace = shrink_trace(&fixtures::cut_box()).unwrap();
    assert_eq!(trace.times(), vec![rat(1), rat(3), rat(4)]);
    assert_eq!(trace.events.len(), 1);
    assert_eq!(trace.events[0].time, rat(2));
    assert_eq!(trace.events[0].kind, EventKind::BecomesRedundant);

    // Pentagon: stages at t = 2 and t = 6; constraint 3 leaves at t = 1 and
    // returns at t = 4, where constraint 4 becomes redundant instead.
    let trace = shrink_trace(&fixtures::pentagon()).unwrap();
    assert_eq!(trace.times(), vec![rat(2), rat(6)]);
    let summary: Vec<(Rational, usize, EventKind)> = trace
        .events
        .iter()
        .map(|e| (e.time.clone(), e.constraint, e.kind))
        .collect();
    assert_eq!(
        summary,
        vec![
            (rat(1), 2, EventKind::BecomesRedundant),
            (rat(4), 2, EventKind::BecomesRelevant),
            (rat(4), 3, EventKind::BecomesRedundant),
        ]
    );
}

/// The three worked decomposition examples, compared byte-for-byte against
/// the golden reports and re-checked structurally.
#[test]
fn example_decompositions_match_golden_reports() {
    for (golden_name, file, levels, kinds) in [
        (
            "decompose_hexagon",
            "ex1.json",
            vec!["3", "4"],
            vec!["full_dim", "full_dim"],
        ),
        (
            "decompose_frustum",
            "ex2.json",
            vec!["2", "1"],
            vec!["full_dim", "cylinder"],
        ),
        (
            "decompose_pentagon",
            "ex5.json",
            vec!["6", "8", "2"],
            vec!["full_dim", "full_dim", "cylinder"],
        ),
    ] {
        let out = toricsmith_cli::run(&["decompose", &fixture(file)]);
        assert_eq!(out.code, 0, "decompose {file} failed: {}", out.stderr);
        assert_eq!(out.stdout, golden(golden_name), "golden mismatch for {file}");

        let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let report = &value["report"];
        let got_levels: Vec<&str> = report["factors"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| f["level"].as_str().unwrap())
            .collect();
        let got_kinds: Vec<&str> = report["factors"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| f["kind"].as_str().unwrap())
            .collect();
        assert_eq!(got_levels, levels);
        assert_eq!(got_kinds, kinds);
        assert_eq!(report["verification"]["all_passed"], true);
    }

    // The pentagon's constraint bookkeeping: jam sets {1, 2} and {3, 5},
    // offset group {4}, all 1-based in reports.
    let out = toricsmith_cli::run(&["decompose", &fixture("ex5.json")]);
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["report"]["d_sets"], serde_json::json!([[1, 2], [3, 5]]));
    assert_eq!(
        value["report"]["groups"],
        serde_json::json!([{ "indices": [4], "value": "8" }])
    );
}

fn assert_strictly_increasing(seq: &[Rational]) {
    for pair in seq.windows(2) {
        assert!(pair[0] < pair[1], "sequence not strictly increasing");
    }
}

/// Random centered polytopes decompose into verified monotone factors whose
/// stage times and group offsets interleave strictly.
#[test]
fn random_decompositions_verify() {
    let mut cases = 0usize;
    for dim in 2usize..=4 {
        let max_extra = 10 - 2 * dim;
        for extra in 1..=max_extra {
            for seed in 0..9u64 {
                let p = random_centered_polytope(dim, extra, 1000 + seed * 17 + (dim * 31 + extra) as u64);
                assert!(p.constraints.len() <= 10);
                let plan = decomposition_plan(&p).unwrap();
                let factors = build_factors(&plan);
                let verification = verify_theorem1(&plan.polytope, &factors);
                assert!(
                    verification.all_passed(),
                    "dim {dim} extra {extra} seed {seed}: {verification:?}"
                );

                // Strict interleaving of stage times and group offsets.
                let mut seq = plan.trace.times();
                seq.extend(plan.groups.iter().map(|g| g.value.clone()));
                assert_strictly_increasing(&seq);

                for factor in &factors {
                    // All constraints of a factor sit at its common level.
                    assert!(factor
                        .polytope
                        .constraints
                        .iter()
                        .all(|c| c.offset == factor.level));
                    if let FactorKind::FullDim(_) = factor.kind {
                        let props = classify(&factor.polytope).unwrap();
                        assert!(props.compact && props.monotone);
                    } else {
                        assert!(!factor.polytope.is_compact());
                    }
                }
                cases += 1;
            }
        }
    }
    assert!(cases >= 100, "only {cases} random cases generated");
}

/// Slicing at random times: the slice dimension follows the stage profile
/// and the remaining shrinking time decreases linearly within each stage.
#[test]
fn random_slice_times_follow_stage_profile() {
    let polys = [
        fixtures::hexagon(),
        fixtures::frustum(),
        fixtures::heptagon(),
        fixtures::cut_box(),
        fixtures::pentagon(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(911);
    let mut checks = 0usize;
    for p in &polys {
        let trace = shrink_trace(p).unwrap();
        let t_end = trace.stages.last().unwrap().time.clone();
        for _ in 0..10 {
            let b = rng.random_range(2i64..=13);
            let a = rng.random_range(0..b);
            let t = &t_end * ratio(a, b);

            let sliced = slice(p, &t).unwrap();
            assert_eq!(
                dimension(&sliced).unwrap(),
                trace.dimension_at(p.dim, &t),
                "dimension profile broken at t = {t}"
            );

            // Anchor at the latest stage time <= t (or 0): the maximal
            // remaining slack is linear with slope -1 between stages.
            let anchor_time = trace
                .stages
                .iter()
                .map(|s| s.time.clone())
                .filter(|tj| *tj <= t)
                .next_back()
                .unwrap_or_else(|| rat(0));
            let anchor = slice(p, &anchor_time).unwrap();
            let expected = remaining_time(&anchor).unwrap() - (&t - &anchor_time);
            assert_eq!(remaining_time(&sliced).unwrap(), expected);
            checks += 1;
        }
    }
    assert_eq!(checks, 50);
}

fn assert_valid_weights(p: &LabeledPolytope, weights: &IntVector) {
    assert_eq!(weights.0.len(), p.constraints.len());
    assert!(weights.0.iter().all(|w| *w > Int::from(0)));
    let gcd = weights
        .0
        .iter()
        .fold(Int::from(0), |acc, w| acc.gcd(w));
    assert_eq!(gcd, Int::from(1));
    for coord in 0..p.dim {
        let sum: Int = weights
            .0
            .iter()
            .zip(&p.constraints)
            .map(|(w, c)| w * &c.normal.0[coord])
            .sum();
        assert_eq!(sum, Int::from(0), "weights are not a Minkowski relation");
    }
}

fn factors_of(p: &LabeledPolytope) -> Vec<MonotoneFactor> {
    let plan = decomposition_plan(p).unwrap();
    build_factors(&plan)
}

/// Minkowski weights of every monotone factor are positive, coprime, and
/// sum the normals to zero; polytopes without a positive relation are
/// rejected as non-compact.
#[test]
fn factor_weights_are_exact_minkowski_relations() {
    for (_, p) in all_fixtures() {
        for factor in factors_of(&p) {
            let weights = minkowski_weights(&factor.polytope).unwrap();
            assert_valid_weights(&factor.polytope, &weights);
        }
    }
    for seed in 0..12u64 {
        let p = random_centered_polytope(2 + (seed % 3) as usize, 2, 4000 + seed);
        for factor in factors_of(&p) {
            let weights = minkowski_weights(&factor.polytope).unwrap();
            assert_valid_weights(&factor.polytope, &weights);
        }
    }

    // The positive quadrant corner {x1 <= 1} ∩ {x2 <= 1} has no positive
    // relation among its normals.
    let corner = LabeledPolytope::from_rows(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
    assert_eq!(minkowski_weights(&corner), Err(Error::Infeasible));
}

/// Reduction certificates verify on every fixture, and targeted mutations
/// are caught by exactly the check they break.
#[test]
fn certificates_verify_and_mutations_are_caught() {
    for (name, p) in all_fixtures() {
        let cert = reduction_certificate(&p).unwrap();
        let report = verify_certificate(&p, &cert);
        assert!(report.weights_ok, "{name}: weights");
        assert!(report.circles_ok, "{name}: circles");
        assert!(report.completion_ok, "{name}: completion");
        assert!(report.levels_ok, "{name}: levels");
        assert!(report.intersection_ok, "{name}: intersection");
        assert!(report.origin_ok, "{name}: origin");
        assert!(report.all_passed());
    }

    // Negating a factor's weights breaks the Minkowski-relation check and
    // nothing else; dropping a complement vector breaks only the completion.
    for p in [fixtures::square(2), fixtures::frustum()] {
        let cert = reduction_certificate(&p).unwrap();

        let mut negated = cert.clone();
        negated.factors[0].weights =
            IntVector(negated.factors[0].weights.0.iter().map(|w| -w).collect());
        let report = verify_certificate(&p, &negated);
        assert!(!report.weights_ok);
        assert!(report.circles_ok);
        assert!(report.completion_ok);
        assert!(report.levels_ok);
        assert!(report.intersection_ok);
        assert!(report.origin_ok);

        let mut truncated = cert.clone();
        assert!(!truncated.complement_basis.is_empty());
        truncated.complement_basis.pop();
        let report = verify_certificate(&p, &truncated);
        assert!(report.weights_ok);
        assert!(report.circles_ok);
        assert!(!report.completion_ok);
        assert!(report.levels_ok);
        assert!(report.intersection_ok);
        assert!(report.origin_ok);
    }
}

/// Width bounds on the model polytopes: squares are pinned exactly at 4λπ,
/// the projective plane stays strictly between 4λπ and 6λπ, the frustum is
/// pinned through its cylinder pair, and every smooth fixture's reflexive
/// companion carries an Ewald basis.
#[test]
fn width_bounds_match_known_values() {
    for lambda in [1i64, 3] {
        let bounds = width_report(&fixtures::square(lambda), 12).unwrap();
        assert_eq!(bounds.lower.pi_coefficient, rat(4 * lambda));
        assert_eq!(bounds.upper.pi_coefficient, rat(4 * lambda));
        assert!(bounds.equality);
        assert_eq!(bounds.lower.status, LowerStatus::Certified);
    }
    let scaled = fixtures::square(1).scaled(&ratio(5, 2));
    let bounds = width_report(&scaled, 12).unwrap();
    assert_eq!(bounds.lower.pi_coefficient, rat(10));
    assert_eq!(bounds.upper.pi_coefficient, rat(10));
    assert!(bounds.equality);

    for lambda in [1i64, 3] {
        let bounds = width_report(&fixtures::cp2(lambda), 12).unwrap();
        assert_eq!(bounds.lower.pi_coefficient, rat(4 * lambda));
        assert_eq!(bounds.upper.pi_coefficient, rat(6 * lambda));
        assert!(!bounds.equality);
    }

    // Frustum: both bounds are 4π and the minimizing relation is the
    // opposite-normal pair of the cylinder factor (constraints 1 and 2).
    let frustum = fixtures::frustum();
    let bounds = width_report(&frustum, 12).unwrap();
    assert_eq!(bounds.lower.pi_coefficient, rat(4));
    assert_eq!(bounds.upper.pi_coefficient, rat(4));
    assert!(bounds.equality);
    assert_eq!(bounds.upper.witness.support, vec![0, 1]);
    assert_eq!(
        bounds.upper.witness.coefficients,
        vec![Int::from(1), Int::from(1)]
    );
    let first = &frustum.constraints[0].normal;
    let second = &frustum.constraints[1].normal;
    assert!(first
        .0
        .iter()
        .zip(&second.0)
        .all(|(a, b)| *a == -b));

    // Every smooth fixture admits an Ewald basis for its companion.
    let mut smooth_names = Vec::new();
    for (name, p) in all_fixtures() {
        let (centered, _) = center(&p).unwrap();
        if classify(&centered).unwrap().smooth {
            let companion = reflexive_companion(&centered);
            assert!(
                ewald_basis(&companion).unwrap().is_some(),
                "{name}: no Ewald basis found"
            );
            smooth_names.push(name);
        }
    }
    assert_eq!(
        smooth_names,
        vec!["frustum", "cut_box", "square", "cp2", "segment"]
    );
}

/// Running `all` twice gives identical bytes, and a multi-file invocation
/// (processed in parallel) concatenates to exactly the single-file outputs.
#[test]
fn reports_are_deterministic_and_fan_out() {
    let files = ["ex1.json", "ex2.json", "ex5.json"];
    let paths: Vec<String> = files.iter().map(|f| fixture(f)).collect();

    let mut singles = String::new();
    for path in &paths {
        let once = toricsmith_cli::run(&["all", path]);
        let twice = toricsmith_cli::run(&["all", path]);
        assert_eq!(once.code, 0, "all {path}: {}", once.stderr);
        assert_eq!(once.stdout, twice.stdout, "non-deterministic output for {path}");
        singles.push_str(&once.stdout);
    }

    let mut args = vec!["all"];
    args.extend(paths.iter().map(String::as_str));
    let multi = toricsmith_cli::run(&args);
    assert_eq!(multi.code, 0);
    assert_eq!(multi.stdout, singles, "fan-out differs from serial runs");
}
