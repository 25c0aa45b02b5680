//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured runtime and asserting the pinned bound.

mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use contextum::catalog;
use contextum::cli::files;
use contextum::kosp::{
    enumerate_value_assignments, interpret_fine_grained, joint_measurement_id, KsScenario,
    ValueAssignment, DEFAULT_ENUMERATION_CAP,
};
use contextum::operational::{
    check_measurement_nc, check_nondisturbance, check_reproduction, check_simultaneous_nc,
    find_operational_equivalences, is_outcome_deterministic, reconstruct_theory, validate_theory,
    Distribution, EquivalenceClaim, OntologicalModel, ResponseKey, VerdictFlag,
};
use contextum::rational::Rational;
use contextum::sheaf::{
    brute_force_section_exists, check_consistency, find_global_section, section_matches,
    to_empirical, verify_certificate, SectionOutcome, DEFAULT_ORACLE_LIMIT, DEFAULT_SECTION_CAP,
};

use support::{component_extension, random_empirical, random_model, rng_for};

fn finish(criterion: usize, name: &str, started: Instant, bound: Duration) {
    let elapsed = started.elapsed();
    println!(
        "criterion {criterion} ({name}): PASS in {} ms (bound {} ms)",
        elapsed.as_millis(),
        bound.as_millis()
    );
    assert!(
        elapsed < bound,
        "criterion {criterion} exceeded its bound: {elapsed:?} >= {bound:?}"
    );
}

/// Independent parity obstruction: when all eigenvalues are +1/-1, every
/// context's admissible tuples share a single product value, and every
/// observable sits in an even number of contexts, an assignment would force
/// the product of those per-context values to be +1. Returns `Some(true)`
/// when the argument proves that no assignment exists.
fn parity_rules_out_assignments(scenario: &KsScenario) -> Option<bool> {
    let plus_minus: BTreeSet<Rational> = [Rational::int(1), Rational::int(-1)].into();
    for obs in scenario.observables() {
        if !obs.eigenvalues.iter().all(|x| plus_minus.contains(x)) {
            return None;
        }
    }
    let mut product = Rational::one();
    for context in scenario.contexts() {
        let admissible = scenario.admissible(context)?;
        let mut parities = admissible
            .iter()
            .map(|t| t.iter().fold(Rational::one(), |acc, x| acc * x));
        let first = parities.next()?;
        if !parities.all(|p| p == first) {
            return None;
        }
        product = product * &first;
    }
    let mut degree: BTreeMap<&str, usize> = BTreeMap::new();
    for context in scenario.contexts() {
        for id in context {
            *degree.entry(id.as_str()).or_insert(0) += 1;
        }
    }
    let all_even = scenario
        .observables()
        .iter()
        .all(|o| degree.get(o.id.as_str()).copied().unwrap_or(0) % 2 == 0);
    Some(all_even && product != Rational::one())
}

#[test]
fn criterion_1_peres_mermin_no_go() {
    let started = Instant::now();
    let scenario = catalog::peres_mermin_scenario();
    let assignments = enumerate_value_assignments(&scenario, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(assignments.len(), 0);

    let report = contextum::kosp::no_go_report(&scenario, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(report.candidate_count, 512);
    assert_eq!(report.assignment_count, 0);
    assert!(report.rules_out_simultaneous_nc);
    assert!(report.rules_out_measurement_nc);

    assert_eq!(parity_rules_out_assignments(&scenario), Some(true));
    finish(1, "peres-mermin no-go", started, Duration::from_secs(1));
}

#[test]
fn criterion_2_pm_quantum_statistics() {
    let started = Instant::now();
    let scenario = catalog::peres_mermin_scenario();
    let theory = catalog::peres_mermin_theory();
    assert!(validate_theory(&theory).holds);

    let half = Rational::new(1, 2);
    let quarter = Rational::new(1, 4);
    for obs in scenario.observables() {
        let members = BTreeSet::from([obs.id.clone()]);
        let table = theory.table(&members, "mixed").unwrap();
        assert_eq!(table.weight(&vec!["1".to_string()]), half);
        assert_eq!(table.weight(&vec!["-1".to_string()]), half);
    }
    for context in scenario.contexts() {
        let table = theory.table(context, "mixed").unwrap();
        let admissible = scenario.admissible(context).unwrap();
        let space = theory.skeleton.joint_space(context).unwrap();
        assert_eq!(space.len(), 8);
        for outcome in &space {
            let tuple: Vec<Rational> =
                outcome.iter().map(|label| label.parse().unwrap()).collect();
            let expected = if admissible.contains(&tuple) {
                quarter.clone()
            } else {
                Rational::zero()
            };
            assert_eq!(table.weight(outcome), expected, "{outcome:?}");
        }
    }
    assert!(check_nondisturbance(&theory).holds);
    finish(2, "pm quantum statistics", started, Duration::from_secs(1));
}

/// Builds the outcome-deterministic single-state model of a fine-grained
/// theory in which each context measurement answers with the given admissible
/// tuple and each coarse-graining extracts its component.
fn deterministic_fine_grained_model(
    scenario: &KsScenario,
    theory: &contextum::operational::OperationalTheory,
    choice: &[usize],
) -> OntologicalModel {
    let state = "l".to_string();
    let mut responses = BTreeMap::new();
    for (context, &pick) in scenario.contexts().iter().zip(choice) {
        let joint_id = joint_measurement_id(context);
        let admissible = scenario.admissible(context).unwrap();
        let tuple = &admissible[pick];
        let label = format!(
            "({})",
            tuple
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        responses.insert(
            ResponseKey::singleton(&joint_id, &state),
            Distribution::point(vec![label]),
        );
        for (pos, member) in context.iter().enumerate() {
            let derived_id = format!("{member}@{joint_id}");
            responses.insert(
                ResponseKey::singleton(&derived_id, &state),
                Distribution::point(vec![tuple[pos].to_string()]),
            );
        }
    }
    OntologicalModel {
        skeleton: theory.skeleton.clone(),
        ontic_states: vec![state.clone()],
        priors: theory
            .skeleton
            .preparations
            .iter()
            .map(|p| (p.clone(), BTreeMap::from([(state.clone(), Rational::one())])))
            .collect(),
        responses,
    }
}

/// Enumerates all per-context outcome choices of a fine-grained reading and
/// returns the value assignments induced by the measurement-noncontextual
/// ones.
fn assignments_from_fine_grained_models(
    scenario: &KsScenario,
    theory: &contextum::operational::OperationalTheory,
    claims: &[EquivalenceClaim],
) -> Vec<ValueAssignment> {
    let sizes: Vec<usize> = scenario
        .contexts()
        .iter()
        .map(|c| scenario.admissible(c).unwrap().len())
        .collect();
    let mut passing = Vec::new();
    let mut choice = vec![0usize; sizes.len()];
    loop {
        let model = deterministic_fine_grained_model(scenario, theory, &choice);
        if check_measurement_nc(&model, claims).unwrap().holds {
            let mut values = BTreeMap::new();
            for (context, &pick) in scenario.contexts().iter().zip(&choice) {
                let tuple = &scenario.admissible(context).unwrap()[pick];
                for (pos, member) in context.iter().enumerate() {
                    values.insert(member.clone(), tuple[pos].clone());
                }
            }
            passing.push(ValueAssignment { values });
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == choice.len() {
                passing.sort();
                passing.dedup();
                return passing;
            }
            choice[i] += 1;
            if choice[i] < sizes[i] {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_3_fine_grained_interpretation() {
    let started = Instant::now();
    let scenario = catalog::peres_mermin_scenario();
    let (theory, claims) = catalog::peres_mermin_fine();
    assert_eq!(claims.len(), 9);
    assert_eq!(theory.skeleton.measurements.len(), 24);
    assert!(theory.skeleton.contexts.is_empty());

    // Statistical equivalence of every claim, at every preparation, exactly.
    for claim in &claims {
        let first = BTreeSet::from([claim.first.clone()]);
        let second = BTreeSet::from([claim.second.clone()]);
        for prep in &theory.skeleton.preparations {
            let t1 = theory.table(&first, prep).unwrap();
            let t2 = theory.table(&second, prep).unwrap();
            for (x, y) in &claim.bijection {
                assert_eq!(
                    t1.weight(&vec![x.clone()]),
                    t2.weight(&vec![y.clone()])
                );
            }
        }
    }

    // No outcome-deterministic model of the fine-grained theory passes the
    // claims: the passing models are in bijection with the admissible value
    // assignments, of which the square has none.
    let passing = assignments_from_fine_grained_models(&scenario, &theory, &claims);
    assert!(passing.is_empty());

    // Positive control on a satisfiable sub-scenario (first row and first
    // column): the bijection matches the direct enumeration, nonempty.
    let sub = {
        let wanted: BTreeSet<&str> = ["A11", "A12", "A13", "A21", "A31"].into();
        let observables: Vec<_> = scenario
            .observables()
            .iter()
            .filter(|o| wanted.contains(o.id.as_str()))
            .cloned()
            .collect();
        let contexts = vec![
            ["A11", "A12", "A13"].iter().map(|s| s.to_string()).collect(),
            ["A11", "A21", "A31"].iter().map(|s| s.to_string()).collect(),
        ];
        KsScenario::new(observables, contexts).unwrap()
    };
    let (sub_theory, sub_claims) = interpret_fine_grained(&sub, &BTreeMap::new()).unwrap();
    assert_eq!(sub_claims.len(), 1);
    let from_models = assignments_from_fine_grained_models(&sub, &sub_theory, &sub_claims);
    let mut direct = enumerate_value_assignments(&sub, DEFAULT_ENUMERATION_CAP).unwrap();
    direct.sort();
    assert_eq!(from_models.len(), 8);
    assert_eq!(from_models, direct);

    finish(3, "fine-grained interpretation", started, Duration::from_secs(5));
}

#[test]
fn criterion_4_sheaf_verdicts() {
    let started = Instant::now();

    // Classical coins: a two-atom section with exact marginals.
    let coins = catalog::classical_coins_empirical();
    match find_global_section(&coins, DEFAULT_SECTION_CAP).unwrap() {
        SectionOutcome::Section(section) => {
            assert!(section_matches(&coins, &section));
            assert_eq!(section.weights.len(), 2);
        }
        other => panic!("expected a section for the coins, got {other:?}"),
    }

    // The square's empirical model at the maximally mixed preparation is
    // infeasible, with an independently verified certificate.
    let pm = to_empirical(&catalog::peres_mermin_theory(), "mixed").unwrap();
    assert!(check_consistency(&pm).holds);
    match find_global_section(&pm, DEFAULT_SECTION_CAP).unwrap() {
        SectionOutcome::Infeasible(cert) => {
            assert!(verify_certificate(&pm, &cert, DEFAULT_SECTION_CAP).unwrap());
        }
        other => panic!("expected infeasibility for the square, got {other:?}"),
    }

    // Solver vs brute-force oracle on at least 500 random small models.
    let mut checked = 0usize;
    let mut sections = 0usize;
    let mut infeasible = 0usize;
    let mut seed = 0u64;
    while checked < 500 {
        let mut rng = rng_for(seed);
        seed += 1;
        let em = random_empirical(&mut rng);
        if !check_consistency(&em).holds {
            continue;
        }
        let solver_says = match find_global_section(&em, DEFAULT_SECTION_CAP)
            .unwrap_or_else(|e| panic!("seed {}: {e}", seed - 1))
        {
            SectionOutcome::Section(section) => {
                assert!(section_matches(&em, &section), "seed {}", seed - 1);
                sections += 1;
                true
            }
            SectionOutcome::Infeasible(cert) => {
                assert!(
                    verify_certificate(&em, &cert, DEFAULT_SECTION_CAP).unwrap(),
                    "seed {}",
                    seed - 1
                );
                infeasible += 1;
                false
            }
        };
        let oracle_says = brute_force_section_exists(&em, DEFAULT_ORACLE_LIMIT)
            .unwrap_or_else(|e| panic!("seed {}: {e}", seed - 1));
        assert_eq!(solver_says, oracle_says, "seed {}", seed - 1);
        checked += 1;
    }
    println!("  oracle agreement over {checked} models: {sections} liftable, {infeasible} infeasible");
    assert!(infeasible > 0, "the sample must exercise the Farkas path");
    finish(4, "sheaf verdicts", started, Duration::from_secs(60));
}

#[test]
fn criterion_5_albert_model() {
    let started = Instant::now();
    let (theory, model, claim) = catalog::albert_toy_model();
    assert!(check_reproduction(&model, &theory).unwrap().holds);

    let mnc = check_measurement_nc(&model, &[claim]).unwrap();
    assert!(!mnc.holds);
    assert!(mnc
        .witnesses
        .iter()
        .any(|w| w.scope.as_deref() == Some("above")));

    let snc = check_simultaneous_nc(&model);
    assert!(snc.holds);
    assert!(snc.is_flagged(VerdictFlag::Vacuous));
    finish(5, "albert toy model", started, Duration::from_secs(1));
}

#[test]
fn criterion_6_contextual_but_adequate() {
    let started = Instant::now();
    let model = catalog::pm_contextual_model();
    assert_eq!(model.ontic_states.len(), 4096);
    assert!(is_outcome_deterministic(&model).holds);
    assert!(check_reproduction(&model, &catalog::peres_mermin_theory())
        .unwrap()
        .holds);
    let snc = check_simultaneous_nc(&model);
    assert!(!snc.holds);
    assert!(!snc.witnesses.is_empty());
    finish(6, "contextual but adequate", started, Duration::from_secs(10));
}

#[test]
fn criterion_7_implication_property() {
    let started = Instant::now();
    let mut antecedent_held = 0usize;
    let mut guarded = 0usize;
    for seed in 0..1000u64 {
        let mut rng = rng_for(seed);
        let coherent = seed % 2 == 0;
        let model = random_model(&mut rng, coherent);
        let (augmented, all_claims) = component_extension(&model);

        // Guard: only models whose reconstructed theory is non-disturbing.
        let reconstructed = reconstruct_theory(&model, &model.skeleton).unwrap();
        if !check_nondisturbance(&reconstructed).holds {
            continue;
        }
        guarded += 1;

        // Discovered claims: those whose statistics agree in the augmented
        // reconstruction (all of them, for a non-disturbing theory).
        let augmented_theory = reconstruct_theory(&augmented, &augmented.skeleton).unwrap();
        let claims: Vec<EquivalenceClaim> = all_claims
            .into_iter()
            .filter(|claim| {
                let first = BTreeSet::from([claim.first.clone()]);
                let second = BTreeSet::from([claim.second.clone()]);
                augmented_theory.skeleton.preparations.iter().all(|prep| {
                    let t1 = augmented_theory.table(&first, prep).unwrap();
                    let t2 = augmented_theory.table(&second, prep).unwrap();
                    claim
                        .bijection
                        .iter()
                        .all(|(x, y)| t1.weight(&vec![x.clone()]) == t2.weight(&vec![y.clone()]))
                })
            })
            .collect();

        let mnc = check_measurement_nc(&augmented, &claims).unwrap();
        if mnc.holds {
            antecedent_held += 1;
            let snc = check_simultaneous_nc(&model);
            assert!(
                snc.holds,
                "seed {seed}: measurement noncontextuality held but simultaneous noncontextuality failed"
            );
        }
    }
    println!("  {guarded} of 1000 models non-disturbing; antecedent held for {antecedent_held}");
    assert!(antecedent_held >= 200, "sample must exercise the implication");
    finish(7, "implication property", started, Duration::from_secs(120));
}

#[test]
fn criterion_8_logical_independence() {
    let started = Instant::now();

    // One side: no simultaneous structure at all, yet measurement
    // contextual.
    let (_, albert, claim) = catalog::albert_toy_model();
    let snc = check_simultaneous_nc(&albert);
    assert!(snc.holds && snc.is_flagged(VerdictFlag::Vacuous));
    assert!(!check_measurement_nc(&albert, &[claim]).unwrap().holds);

    // Other side: simultaneous contextual while statistically perfect. The
    // one preparation makes every pair of atomic measurements statistically
    // equivalent, and the model fails all of those trivial equivalences too,
    // consistent with its simultaneous contextuality in a non-disturbing
    // theory.
    let model = catalog::pm_contextual_model();
    assert!(!check_simultaneous_nc(&model).holds);
    let theory = catalog::peres_mermin_theory();
    assert!(check_nondisturbance(&theory).holds);
    let discovered = find_operational_equivalences(&theory, 2);
    assert!(!discovered.is_empty());
    assert!(!check_measurement_nc(&model, &discovered).unwrap().holds);

    finish(8, "logical independence", started, Duration::from_secs(30));
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contextum"))
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run_ok(cmd: &mut Command) -> i32 {
    let output = cmd.output().expect("binary runs");
    output.status.code().unwrap_or(-1)
}

#[test]
fn criterion_9_cli_contract() {
    let started = Instant::now();

    // Round trip: export -> parse -> export is byte-identical for every
    // catalog entry.
    for entry in catalog::entries() {
        let payload = catalog::build(entry.key).unwrap();
        let first = files::to_canonical_json(&files::payload_to_dto(&payload));
        let reparsed = files::parse_str(&first).unwrap();
        let second = match &reparsed {
            files::DomainObject::Theory { theory, claims } => {
                files::to_canonical_json(&files::theory_to_dto(theory, claims))
            }
            files::DomainObject::Model { model, claims } => {
                files::to_canonical_json(&files::model_to_dto(model, claims))
            }
            files::DomainObject::Ks {
                observables,
                contexts,
            } => files::to_canonical_json(&files::ks_to_dto(
                &KsScenario::new(observables.clone(), contexts.clone()).unwrap(),
            )),
            files::DomainObject::Vectors(vs) => {
                files::to_canonical_json(&files::vectors_to_dto(vs))
            }
            files::DomainObject::Empirical(em) => {
                files::to_canonical_json(&files::empirical_to_dto(em))
            }
            files::DomainObject::Representation(_) => unreachable!(),
        };
        assert_eq!(first, second, "round trip for {}", entry.key);
    }

    // Exit-code contract across the scripted flows.
    let pm_theory = tmp("pm_theory.json");
    let pm_scenario = tmp("pm_scenario.json");
    let albert_model = tmp("albert_model.json");
    let coins = tmp("coins.json");
    assert_eq!(
        run_ok(bin().args(["catalog", "export", "peres_mermin_theory"]).arg(&pm_theory)),
        0
    );
    assert_eq!(
        run_ok(bin().args(["catalog", "export", "peres_mermin"]).arg(&pm_scenario)),
        0
    );
    assert_eq!(
        run_ok(bin().args(["catalog", "export", "albert_model"]).arg(&albert_model)),
        0
    );
    assert_eq!(
        run_ok(bin().args(["catalog", "export", "classical_coins"]).arg(&coins)),
        0
    );
    assert_eq!(run_ok(bin().args(["catalog", "export", "bogus", "/tmp/x.json"])), 2);

    // validate: 0 valid, 1 invariant violation, 2 parse error.
    assert_eq!(run_ok(bin().arg("validate").arg(&pm_theory)), 0);
    let broken = tmp("broken_normalization.json");
    std::fs::write(
        &broken,
        r#"{
  "kind": "theory",
  "measurements": [{"id": "m", "outcomes": ["0", "1"]}],
  "contexts": [],
  "preparations": ["s"],
  "tables": [
    {"members": ["m"], "preparation": "s",
     "weights": [{"outcome": ["0"], "p": "3/4"}]}
  ]
}"#,
    )
    .unwrap();
    assert_eq!(run_ok(bin().arg("validate").arg(&broken)), 1);
    let truncated = tmp("truncated.json");
    std::fs::write(&truncated, "{\"kind\": \"theory\"").unwrap();
    assert_eq!(run_ok(bin().arg("validate").arg(&truncated)), 2);

    // check: non-disturbance holds (0), measurement contextuality violated (1).
    assert_eq!(run_ok(bin().args(["check", "nondisturb"]).arg(&pm_theory)), 0);
    assert_eq!(run_ok(bin().args(["check", "mnc"]).arg(&albert_model)), 1);

    // ks: search succeeds (0), capacity exceeded (3).
    assert_eq!(run_ok(bin().args(["ks", "search"]).arg(&pm_scenario)), 0);
    assert_eq!(
        run_ok(bin()
            .env("CONTEXTUM_CAP", "100")
            .args(["ks", "search"])
            .arg(&pm_scenario)),
        3
    );

    // sheaf: section found (0), infeasible (1), inconsistent input (2).
    assert_eq!(run_ok(bin().args(["sheaf", "section"]).arg(&coins)), 0);
    assert_eq!(
        run_ok(bin()
            .args(["sheaf", "section"])
            .arg(&pm_theory)
            .args(["--preparation", "mixed"])),
        1
    );
    let inconsistent = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/inconsistent_overlap.json");
    assert_eq!(run_ok(bin().args(["sheaf", "check"]).arg(&inconsistent)), 1);
    assert_eq!(run_ok(bin().args(["sheaf", "section"]).arg(&inconsistent)), 2);

    finish(9, "cli contract", started, Duration::from_secs(60));
}
