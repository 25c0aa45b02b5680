//! Shared generators for the randomized suites. Everything is seeded, so a
//! failure reproduces from the printed seed.

// Compiled once per test binary; not every binary uses every helper.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use contextum::operational::{
    marginalize, Context, Distribution, EquivalenceClaim, JointOutcome, Measurement,
    OntologicalModel, Provenance, ResponseKey, Skeleton,
};
use contextum::rational::Rational;
use contextum::sheaf::{CoverElement, EmpiricalModel};

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// A random exact distribution over the given joint outcomes (never all
/// zero; weights have denominators at most 12).
pub fn random_distribution(rng: &mut ChaCha8Rng, outcomes: &[JointOutcome]) -> Distribution {
    loop {
        let weights: Vec<i64> = (0..outcomes.len()).map(|_| rng.gen_range(0..=3)).collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        return Distribution::from_weights(
            outcomes
                .iter()
                .zip(&weights)
                .map(|(o, &w)| (o.clone(), rat(w, total))),
        );
    }
}

fn joint_space(skeleton: &Skeleton, members: &BTreeSet<String>) -> Vec<JointOutcome> {
    skeleton.joint_space(members).expect("valid members")
}

/// A random small model. Coherent models give every ontic state product
/// responses (joint = product of singletons), so they are simultaneous
/// noncontextual by construction; incoherent models draw every response
/// independently.
pub fn random_model(rng: &mut ChaCha8Rng, coherent: bool) -> OntologicalModel {
    let n_meas = rng.gen_range(2..=3);
    let measurements: Vec<Measurement> = (0..n_meas)
        .map(|i| Measurement::new(format!("m{i}"), &["0", "1"]))
        .collect();
    let ids: Vec<String> = measurements.iter().map(|m| m.id.clone()).collect();

    let mut contexts: Vec<Context> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let size = rng.gen_range(2..=n_meas);
        let mut pick = ids.clone();
        pick.shuffle(rng);
        contexts.push(Context::new(pick.into_iter().take(size)));
    }
    let preparations: Vec<String> = (0..rng.gen_range(1..=2))
        .map(|i| format!("s{i}"))
        .collect();
    let skeleton = Skeleton::new(measurements, contexts, preparations.clone());

    let n_states = rng.gen_range(1..=3);
    let ontic_states: Vec<String> = (0..n_states).map(|i| format!("l{i}")).collect();

    let mut priors = BTreeMap::new();
    for prep in &preparations {
        let state_outcomes: Vec<JointOutcome> =
            ontic_states.iter().map(|s| vec![s.clone()]).collect();
        let dist = random_distribution(rng, &state_outcomes);
        priors.insert(
            prep.clone(),
            dist.weights()
                .iter()
                .map(|(o, w)| (o[0].clone(), w.clone()))
                .collect::<BTreeMap<String, Rational>>(),
        );
    }

    let mut responses = BTreeMap::new();
    for state in &ontic_states {
        let mut singles: BTreeMap<String, Distribution> = BTreeMap::new();
        for m in &skeleton.measurements {
            let members = BTreeSet::from([m.id.clone()]);
            let dist = random_distribution(rng, &joint_space(&skeleton, &members));
            responses.insert(ResponseKey::singleton(&m.id, state), dist.clone());
            singles.insert(m.id.clone(), dist);
        }
        for context in &skeleton.contexts {
            let dist = if coherent {
                // Product of the member singletons.
                let members: Vec<&String> = context.members.iter().collect();
                let mut pairs: Vec<(JointOutcome, Rational)> =
                    vec![(Vec::new(), Rational::one())];
                for id in &members {
                    let single = &singles[*id];
                    let mut next = Vec::new();
                    for (prefix, weight) in &pairs {
                        for (outcome, w) in single.weights() {
                            let mut item = prefix.clone();
                            item.push(outcome[0].clone());
                            next.push((item, weight * w));
                        }
                    }
                    pairs = next;
                }
                Distribution::from_weights(pairs)
            } else {
                random_distribution(rng, &joint_space(&skeleton, &context.members))
            };
            responses.insert(
                ResponseKey {
                    members: context.members.clone(),
                    state: state.clone(),
                },
                dist,
            );
        }
    }

    OntologicalModel {
        skeleton,
        ontic_states,
        priors,
        responses,
    }
}

/// Materializes, for every multi-member context and member, the derived
/// measurement "perform the context jointly, keep this component", with the
/// marginal of the joint response as its response function. Returns the
/// augmented model and the identity claims pairing each member with its
/// derived component.
pub fn component_extension(
    model: &OntologicalModel,
) -> (OntologicalModel, Vec<EquivalenceClaim>) {
    let mut measurements = model.skeleton.measurements.clone();
    let mut responses = model.responses.clone();
    let mut claims = Vec::new();
    for context in &model.skeleton.contexts {
        if context.members.len() < 2 {
            continue;
        }
        let ctx_id = context
            .members
            .iter()
            .cloned()
            .collect::<Vec<_>>()
            .join("&");
        for m in &context.members {
            let derived_id = format!("{m}@{ctx_id}");
            let outcomes = model
                .skeleton
                .measurement(m)
                .expect("context member exists")
                .outcomes
                .clone();
            measurements.push(Measurement {
                id: derived_id.clone(),
                outcomes: outcomes.clone(),
            });
            let target = BTreeSet::from([m.clone()]);
            for state in &model.ontic_states {
                let joint = model
                    .response(&context.members, state)
                    .expect("context response exists");
                let marg = marginalize(joint, &context.members, &target)
                    .expect("member is in its context");
                responses.insert(ResponseKey::singleton(&derived_id, state), marg);
            }
            claims.push(EquivalenceClaim::identity(
                m,
                &derived_id,
                &outcomes,
                Provenance::Discovered,
            ));
        }
    }
    let augmented = OntologicalModel {
        skeleton: Skeleton::new(
            measurements,
            model.skeleton.contexts.clone(),
            model.skeleton.preparations.clone(),
        ),
        ontic_states: model.ontic_states.clone(),
        priors: model.priors.clone(),
        responses,
    };
    claims.sort();
    (augmented, claims)
}

/// Three pairwise contexts over a, b, c with uniform marginals and the given
/// correlation signs (true = perfectly correlated, false = anticorrelated).
/// Always consistent; liftable iff the anticorrelation count is even.
pub fn triangle_empirical(equal: [bool; 3]) -> EmpiricalModel {
    let pair = |x: &str, y: &str, same: bool| {
        let rows = if same {
            [("0", "0"), ("1", "1")]
        } else {
            [("0", "1"), ("1", "0")]
        };
        CoverElement {
            members: [x, y].iter().map(|s| s.to_string()).collect(),
            distribution: Distribution::from_weights(
                rows.iter()
                    .map(|(a, b)| (vec![a.to_string(), b.to_string()], rat(1, 2))),
            ),
        }
    };
    EmpiricalModel::new(
        vec![
            Measurement::new("a", &["0", "1"]),
            Measurement::new("b", &["0", "1"]),
            Measurement::new("c", &["0", "1"]),
        ],
        vec![
            pair("a", "b", equal[0]),
            pair("b", "c", equal[1]),
            pair("a", "c", equal[2]),
        ],
    )
}

/// A random small empirical model over at most three two-outcome
/// measurements. Flavors: marginals of a random global distribution (always
/// liftable), a random-parity triangle (consistent, sometimes unliftable),
/// or fully independent per-context distributions (often inconsistent).
pub fn random_empirical(rng: &mut ChaCha8Rng) -> EmpiricalModel {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(2..=3);
            let measurements: Vec<Measurement> = (0..n)
                .map(|i| Measurement::new(format!("m{i}"), &["0", "1"]))
                .collect();
            let ids: Vec<String> = measurements.iter().map(|m| m.id.clone()).collect();
            let skeleton = Skeleton::new(measurements.clone(), vec![], vec![]);
            let all: BTreeSet<String> = ids.iter().cloned().collect();
            let assignments = joint_space(&skeleton, &all);
            let global = random_distribution(rng, &assignments);
            let mut cover = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let size = rng.gen_range(1..=n);
                let mut pick = ids.clone();
                pick.shuffle(rng);
                let members: BTreeSet<String> = pick.into_iter().take(size).collect();
                let distribution = marginalize(&global, &all, &members).expect("subset");
                cover.push(CoverElement {
                    members,
                    distribution,
                });
            }
            EmpiricalModel::new(measurements, cover)
        }
        1 => triangle_empirical([rng.gen(), rng.gen(), rng.gen()]),
        _ => {
            let n = rng.gen_range(2..=3);
            let measurements: Vec<Measurement> = (0..n)
                .map(|i| Measurement::new(format!("m{i}"), &["0", "1"]))
                .collect();
            let ids: Vec<String> = measurements.iter().map(|m| m.id.clone()).collect();
            let skeleton = Skeleton::new(measurements.clone(), vec![], vec![]);
            let mut cover = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let size = rng.gen_range(1..=n);
                let mut pick = ids.clone();
                pick.shuffle(rng);
                let members: BTreeSet<String> = pick.into_iter().take(size).collect();
                let distribution = random_distribution(rng, &joint_space(&skeleton, &members));
                cover.push(CoverElement {
                    members,
                    distribution,
                });
            }
            EmpiricalModel::new(measurements, cover)
        }
    }
}
