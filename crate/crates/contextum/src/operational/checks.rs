use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::rational::Rational;

use super::types::{
    checks_marginalize, joint_outcome_label, render_members, Distribution, EquivalenceClaim,
    Error, JointOutcome, MeasurementId, OnticId, OntologicalModel, OperationalTheory,
    OutcomeLabel, PrepId, Provenance, ResponseKey, Skeleton, TableKey, Verdict, VerdictFlag,
    Witness,
};

/// Exact marginal of a distribution over `members` onto a non-empty
/// `target` subset.
pub fn marginalize(
    dist: &Distribution,
    members: &BTreeSet<MeasurementId>,
    target: &BTreeSet<MeasurementId>,
) -> Result<Distribution, Error> {
    checks_marginalize(dist, members, target)
}

/// Checks every structural invariant of an operational theory. Problems are
/// reported as witnesses, never as errors, so invalid theories can be
/// described precisely.
pub fn validate_theory(theory: &OperationalTheory) -> Verdict {
    let mut witnesses = validate_skeleton(&theory.skeleton);
    let skeleton = &theory.skeleton;

    for (key, dist) in &theory.tables {
        let rendered = render_members(&key.members);
        if key.members.is_empty() {
            witnesses.push(Witness::new("table key has no members").scope(&key.preparation));
            continue;
        }
        if !skeleton.preparations.contains(&key.preparation) {
            witnesses.push(
                Witness::new("table preparation not declared")
                    .measurements(key.members.iter().cloned())
                    .scope(&key.preparation),
            );
        }
        let mut members_known = true;
        for id in &key.members {
            if skeleton.measurement(id).is_none() {
                members_known = false;
                witnesses.push(
                    Witness::new("table key references unknown measurement")
                        .measurements([id.clone()]),
                );
            }
        }
        if !members_known {
            continue;
        }
        if key.members.len() >= 2 && skeleton.contexts_containing(&key.members).next().is_none() {
            witnesses.push(
                Witness::new("table key not contained in any declared context")
                    .measurements(key.members.iter().cloned()),
            );
        }
        witnesses.extend(validate_distribution(dist, skeleton, &key.members).into_iter().map(
            |w| {
                let mut w = w;
                if w.measurements.is_empty() {
                    w.measurements = key.members.iter().cloned().collect();
                }
                w.scope = Some(key.preparation.clone());
                let _ = &rendered;
                w
            },
        ));
    }

    // Every singleton and every declared context needs a table in every
    // preparation.
    for prep in &skeleton.preparations {
        for m in &skeleton.measurements {
            let key = TableKey::singleton(&m.id, prep);
            if !theory.tables.contains_key(&key) {
                witnesses.push(
                    Witness::new("missing singleton table")
                        .measurements([m.id.clone()])
                        .scope(prep),
                );
            }
        }
        for context in &skeleton.contexts {
            let key = TableKey {
                members: context.members.clone(),
                preparation: prep.clone(),
            };
            if !theory.tables.contains_key(&key) {
                witnesses.push(
                    Witness::new("missing context table")
                        .measurements(context.members.iter().cloned())
                        .scope(prep),
                );
            }
        }
    }

    Verdict::from_witnesses(witnesses, Vec::new())
}

fn validate_skeleton(skeleton: &Skeleton) -> Vec<Witness> {
    let mut witnesses = Vec::new();
    let mut seen = BTreeSet::new();
    for m in &skeleton.measurements {
        if !seen.insert(m.id.clone()) {
            witnesses.push(Witness::new("duplicate measurement id").measurements([m.id.clone()]));
        }
        if m.outcomes.is_empty() {
            witnesses.push(Witness::new("measurement has no outcomes").measurements([m.id.clone()]));
        }
        let distinct: BTreeSet<&OutcomeLabel> = m.outcomes.iter().collect();
        if distinct.len() != m.outcomes.len() {
            witnesses.push(
                Witness::new("duplicate outcome label within measurement")
                    .measurements([m.id.clone()]),
            );
        }
    }
    for context in &skeleton.contexts {
        if context.members.is_empty() {
            witnesses.push(Witness::new("declared context has no members"));
        }
        for id in &context.members {
            if skeleton.measurement(id).is_none() {
                witnesses.push(
                    Witness::new("context references unknown measurement")
                        .measurements([id.clone()]),
                );
            }
        }
    }
    let distinct_preps: BTreeSet<&PrepId> = skeleton.preparations.iter().collect();
    if distinct_preps.len() != skeleton.preparations.len() {
        witnesses.push(Witness::new("duplicate preparation id"));
    }
    witnesses
}

fn validate_distribution(
    dist: &Distribution,
    skeleton: &Skeleton,
    members: &BTreeSet<MeasurementId>,
) -> Vec<Witness> {
    let mut witnesses = Vec::new();
    let member_list: Vec<&MeasurementId> = members.iter().collect();
    for (outcome, weight) in dist.weights() {
        if weight.is_negative() {
            witnesses.push(
                Witness::new("negative weight")
                    .outcome(&joint_outcome_label(outcome))
                    .lhs_only(weight.clone()),
            );
        }
        if outcome.len() != member_list.len() {
            witnesses.push(
                Witness::new("outcome arity does not match the key")
                    .outcome(&joint_outcome_label(outcome)),
            );
            continue;
        }
        for (id, label) in member_list.iter().zip(outcome) {
            if let Some(m) = skeleton.measurement(id) {
                if !m.outcomes.contains(label) {
                    witnesses.push(
                        Witness::new("outcome label not in the measurement's outcome set")
                            .measurements([(*id).clone()])
                            .outcome(label),
                    );
                }
            }
        }
    }
    let total = dist.total();
    if !total.is_one() {
        witnesses.push(
            Witness::new("distribution does not sum to 1").values(total, Rational::one()),
        );
    }
    witnesses
}

/// Checks the structural invariants of an ontological model.
pub fn validate_model(model: &OntologicalModel) -> Verdict {
    let mut witnesses = validate_skeleton(&model.skeleton);
    let skeleton = &model.skeleton;

    let distinct_states: BTreeSet<&str> =
        model.ontic_states.iter().map(|s| s.as_str()).collect();
    if distinct_states.len() != model.ontic_states.len() {
        witnesses.push(Witness::new("duplicate ontic state id"));
    }

    for prep in &skeleton.preparations {
        match model.priors.get(prep) {
            None => witnesses.push(Witness::new("missing prior").scope(prep)),
            Some(prior) => {
                let mut total = Rational::zero();
                for (state, w) in prior {
                    if !distinct_states.contains(state.as_str()) {
                        witnesses.push(
                            Witness::new("prior references unknown ontic state").scope(state),
                        );
                    }
                    if w.is_negative() {
                        witnesses.push(
                            Witness::new("negative prior weight")
                                .scope(state)
                                .lhs_only(w.clone()),
                        );
                    }
                    total += w;
                }
                if !total.is_one() {
                    witnesses.push(
                        Witness::new("prior does not sum to 1")
                            .scope(prep)
                            .values(total, Rational::one()),
                    );
                }
            }
        }
    }
    for (prep, _) in &model.priors {
        if !skeleton.preparations.contains(prep) {
            witnesses.push(Witness::new("prior for undeclared preparation").scope(prep));
        }
    }

    // Required responses: every singleton and every declared context, in
    // every ontic state.
    let mut keyed_states: BTreeMap<&BTreeSet<MeasurementId>, BTreeSet<&str>> = BTreeMap::new();
    for key in model.responses.keys() {
        keyed_states
            .entry(&key.members)
            .or_default()
            .insert(key.state.as_str());
    }
    let mut required: Vec<BTreeSet<MeasurementId>> = skeleton
        .measurements
        .iter()
        .map(|m| BTreeSet::from([m.id.clone()]))
        .collect();
    required.extend(skeleton.contexts.iter().map(|c| c.members.clone()));
    for members in &required {
        let present = keyed_states.get(members);
        for state in &model.ontic_states {
            if !present.is_some_and(|set| set.contains(state.as_str())) {
                witnesses.push(
                    Witness::new("missing response")
                        .measurements(members.iter().cloned())
                        .scope(state),
                );
            }
        }
    }

    for (key, dist) in &model.responses {
        if !distinct_states.contains(key.state.as_str()) {
            witnesses.push(
                Witness::new("response references unknown ontic state").scope(&key.state),
            );
        }
        let mut members_known = true;
        for id in &key.members {
            if skeleton.measurement(id).is_none() {
                members_known = false;
                witnesses.push(
                    Witness::new("response key references unknown measurement")
                        .measurements([id.clone()]),
                );
            }
        }
        if !members_known {
            continue;
        }
        if key.members.len() >= 2 && skeleton.contexts_containing(&key.members).next().is_none() {
            witnesses.push(
                Witness::new("response key not contained in any declared context")
                    .measurements(key.members.iter().cloned()),
            );
        }
        witnesses.extend(
            validate_distribution(dist, skeleton, &key.members)
                .into_iter()
                .map(|mut w| {
                    if w.measurements.is_empty() {
                        w.measurements = key.members.iter().cloned().collect();
                    }
                    w.scope = Some(key.state.clone());
                    w
                }),
        );
    }

    Verdict::from_witnesses(witnesses, Vec::new())
}

/// A theory is non-disturbing when every explicit table agrees with the
/// marginal of every explicit table over a superset: statistics do not depend
/// on which compatible measurements are performed alongside.
pub fn check_nondisturbance(theory: &OperationalTheory) -> Verdict {
    let mut witnesses = Vec::new();
    let keys: Vec<&TableKey> = theory.tables.keys().collect();
    for sub in &keys {
        for sup in &keys {
            if sub.preparation != sup.preparation
                || sub.members.len() >= sup.members.len()
                || !sub.members.is_subset(&sup.members)
            {
                continue;
            }
            let sub_dist = &theory.tables[*sub];
            let sup_dist = &theory.tables[*sup];
            let marginal = match marginalize(sup_dist, &sup.members, &sub.members) {
                Ok(m) => m,
                Err(_) => continue,
            };
            witnesses.extend(compare_distributions(
                sub_dist,
                &marginal,
                "marginal mismatch",
                |w| {
                    w.measurements(sub.members.iter().cloned())
                        .related(&sup.members)
                        .scope(&sub.preparation)
                },
            ));
        }
    }
    Verdict::from_witnesses(witnesses, Vec::new())
}

fn compare_distributions(
    lhs: &Distribution,
    rhs: &Distribution,
    detail: &str,
    decorate: impl Fn(Witness) -> Witness,
) -> Vec<Witness> {
    let mut outcomes: BTreeSet<&JointOutcome> = lhs.support().collect();
    outcomes.extend(rhs.support());
    let mut witnesses = Vec::new();
    for outcome in outcomes {
        let l = lhs.weight(outcome);
        let r = rhs.weight(outcome);
        if l != r {
            witnesses.push(decorate(
                Witness::new(detail)
                    .outcome(&joint_outcome_label(outcome))
                    .values(l, r),
            ));
        }
    }
    witnesses
}

/// Eigenstate map of a measurement in a theory: for each preparation,
/// `Some(x)` iff the outcome `x` has probability exactly 1.
pub fn theory_eigenstates(
    theory: &OperationalTheory,
    measurement: &str,
) -> Result<BTreeMap<PrepId, Option<OutcomeLabel>>, Error> {
    if theory.skeleton.measurement(measurement).is_none() {
        return Err(Error::UnknownMeasurement(measurement.to_string()));
    }
    let members = BTreeSet::from([measurement.to_string()]);
    let mut out = BTreeMap::new();
    for prep in &theory.skeleton.preparations {
        let dist = theory.table(&members, prep)?;
        out.insert(prep.clone(), dist.point_mass().map(|o| o[0].clone()));
    }
    Ok(out)
}

/// Eigenstate map of a measurement in a model: for each ontic state,
/// `Some(x)` iff the response gives `x` probability exactly 1.
pub fn model_eigenstates(
    model: &OntologicalModel,
    measurement: &str,
) -> Result<BTreeMap<OnticId, Option<OutcomeLabel>>, Error> {
    if model.skeleton.measurement(measurement).is_none() {
        return Err(Error::UnknownMeasurement(measurement.to_string()));
    }
    let members = BTreeSet::from([measurement.to_string()]);
    let mut out = BTreeMap::new();
    for state in &model.ontic_states {
        let dist = model.response(&members, state)?;
        out.insert(state.clone(), dist.point_mass().map(|o| o[0].clone()));
    }
    Ok(out)
}

/// A model is outcome-deterministic when every ontic state is an eigenstate
/// of every measurement: all response weights are 0 or 1.
pub fn is_outcome_deterministic(model: &OntologicalModel) -> Verdict {
    let mut witnesses = Vec::new();
    for (key, dist) in &model.responses {
        for (outcome, weight) in dist.weights() {
            if !weight.is_one() {
                witnesses.push(
                    Witness::new("response is not a point mass")
                        .measurements(key.members.iter().cloned())
                        .scope(&key.state)
                        .outcome(&joint_outcome_label(outcome))
                        .lhs_only(weight.clone()),
                );
            }
        }
    }
    Verdict::from_witnesses(witnesses, Vec::new())
}

/// Recovers an operational theory from a model by mixing response functions
/// with the priors: `p(x|K ∧ s) = Σ_λ p(x|K ∧ λ) p(λ|s)`, exactly.
pub fn reconstruct_theory(
    model: &OntologicalModel,
    skeleton: &Skeleton,
) -> Result<OperationalTheory, Error> {
    let mut keys: BTreeSet<BTreeSet<MeasurementId>> = skeleton
        .measurements
        .iter()
        .map(|m| BTreeSet::from([m.id.clone()]))
        .collect();
    keys.extend(skeleton.contexts.iter().map(|c| c.members.clone()));
    // Any further subsets the model responds to explicitly.
    keys.extend(
        model
            .responses
            .keys()
            .map(|k| k.members.clone())
            .filter(|members| {
                skeleton.contexts_containing(members).next().is_some() || members.len() == 1
            }),
    );

    let mut by_members: BTreeMap<&BTreeSet<MeasurementId>, BTreeMap<&str, &Distribution>> =
        BTreeMap::new();
    for (key, dist) in &model.responses {
        by_members
            .entry(&key.members)
            .or_default()
            .insert(key.state.as_str(), dist);
    }

    let mut tables = BTreeMap::new();
    for prep in &skeleton.preparations {
        let prior = model
            .priors
            .get(prep)
            .ok_or_else(|| Error::MissingPrior(prep.clone()))?;
        for members in &keys {
            let per_state = by_members.get(members).ok_or_else(|| Error::MissingResponse {
                members: super::types::render_members(members),
                state: "<any>".to_string(),
            })?;
            let mut weights: BTreeMap<JointOutcome, Rational> = BTreeMap::new();
            for (state, p_state) in prior {
                if p_state.is_zero() {
                    continue;
                }
                let response =
                    per_state
                        .get(state.as_str())
                        .ok_or_else(|| Error::MissingResponse {
                            members: super::types::render_members(members),
                            state: state.clone(),
                        })?;
                for (outcome, w) in response.weights() {
                    *weights.entry(outcome.clone()).or_insert_with(Rational::zero) +=
                        &(w * p_state);
                }
            }
            tables.insert(
                TableKey {
                    members: members.clone(),
                    preparation: prep.clone(),
                },
                Distribution::from_weights(weights),
            );
        }
    }
    Ok(OperationalTheory {
        skeleton: skeleton.clone(),
        tables,
    })
}

/// Does the model reproduce the theory exactly, table by table?
pub fn check_reproduction(
    model: &OntologicalModel,
    theory: &OperationalTheory,
) -> Result<Verdict, Error> {
    if model.skeleton != theory.skeleton {
        return Err(Error::SkeletonMismatch(
            "model and theory declare different measurements, contexts or preparations"
                .to_string(),
        ));
    }
    let reconstructed = reconstruct_theory(model, &theory.skeleton)?;
    let mut keys: BTreeSet<&TableKey> = theory.tables.keys().collect();
    keys.extend(reconstructed.tables.keys());
    let mut witnesses = Vec::new();
    for key in keys {
        let expected = theory.table(&key.members, &key.preparation)?;
        let actual = reconstructed.table(&key.members, &key.preparation)?;
        witnesses.extend(compare_distributions(
            &expected,
            &actual,
            "reconstructed table differs from the theory",
            |w| {
                w.measurements(key.members.iter().cloned())
                    .scope(&key.preparation)
            },
        ));
    }
    Ok(Verdict::from_witnesses(witnesses, Vec::new()))
}

/// Simultaneous noncontextuality: in every ontic state, the response to a
/// measurement subset is the marginal of the response to any keyed superset.
/// Performing more commeasurable measurements alongside changes nothing.
pub fn check_simultaneous_nc(model: &OntologicalModel) -> Verdict {
    let mut flags = Vec::new();
    if !model.skeleton.has_multi_member_context() {
        flags.push(VerdictFlag::Vacuous);
    }
    if reconstructed_theory_is_disturbing(model) {
        flags.push(VerdictFlag::TheoryIsDisturbing);
    }

    let mut by_state: BTreeMap<&str, Vec<(&BTreeSet<MeasurementId>, &Distribution)>> =
        BTreeMap::new();
    for (key, dist) in &model.responses {
        by_state
            .entry(key.state.as_str())
            .or_default()
            .push((&key.members, dist));
    }
    let mut witnesses = Vec::new();
    for state in &model.ontic_states {
        let keyed = match by_state.get(state.as_str()) {
            Some(keyed) => keyed,
            None => continue,
        };
        for (sub_members, sub_dist) in keyed {
            for (sup_members, sup_dist) in keyed {
                if sub_members.len() >= sup_members.len()
                    || !sub_members.is_subset(sup_members)
                {
                    continue;
                }
                let marginal = match marginalize(sup_dist, sup_members, sub_members) {
                    Ok(m) => m,
                    Err(_) => continue,
                };
                witnesses.extend(compare_distributions(
                    sub_dist,
                    &marginal,
                    "response depends on the simultaneously performed measurements",
                    |w| {
                        w.measurements(sub_members.iter().cloned())
                            .related(sup_members)
                            .scope(state)
                    },
                ));
            }
        }
    }
    Verdict::from_witnesses(witnesses, flags)
}

fn reconstructed_theory_is_disturbing(model: &OntologicalModel) -> bool {
    match reconstruct_theory(model, &model.skeleton) {
        Ok(theory) => !check_nondisturbance(&theory).holds,
        Err(_) => false,
    }
}

/// Finds every pair of measurements with the same number of outcomes (at most
/// `max_outcomes`) and every outcome bijection under which their statistics
/// agree exactly in every preparation.
pub fn find_operational_equivalences(
    theory: &OperationalTheory,
    max_outcomes: usize,
) -> Vec<EquivalenceClaim> {
    let mut claims = Vec::new();
    let measurements = &theory.skeleton.measurements;
    for (i, first) in measurements.iter().enumerate() {
        for second in &measurements[i + 1..] {
            if first.outcomes.len() != second.outcomes.len()
                || first.outcomes.len() > max_outcomes
            {
                continue;
            }
            let first_members = BTreeSet::from([first.id.clone()]);
            let second_members = BTreeSet::from([second.id.clone()]);
            let indices: Vec<usize> = (0..second.outcomes.len()).collect();
            for perm in indices.iter().permutations(indices.len()) {
                let bijection: BTreeMap<OutcomeLabel, OutcomeLabel> = first
                    .outcomes
                    .iter()
                    .zip(perm.iter())
                    .map(|(x, &&j)| (x.clone(), second.outcomes[j].clone()))
                    .collect();
                let mut equivalent = true;
                'preps: for prep in &theory.skeleton.preparations {
                    let (t1, t2) = match (
                        theory.table(&first_members, prep),
                        theory.table(&second_members, prep),
                    ) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => {
                            equivalent = false;
                            break 'preps;
                        }
                    };
                    for x in &first.outcomes {
                        let lhs = t1.weight(&vec![x.clone()]);
                        let rhs = t2.weight(&vec![bijection[x].clone()]);
                        if lhs != rhs {
                            equivalent = false;
                            break 'preps;
                        }
                    }
                }
                if equivalent {
                    claims.push(EquivalenceClaim {
                        first: first.id.clone(),
                        second: second.id.clone(),
                        bijection,
                        provenance: Provenance::Discovered,
                    });
                }
            }
        }
    }
    claims.sort();
    claims
}

/// Measurement noncontextuality: under each claimed equivalence, the two
/// measurements respond identically (through the bijection) in every ontic
/// state.
pub fn check_measurement_nc(
    model: &OntologicalModel,
    claims: &[EquivalenceClaim],
) -> Result<Verdict, Error> {
    let mut witnesses = Vec::new();
    for claim in claims {
        let first = model
            .skeleton
            .measurement(&claim.first)
            .ok_or_else(|| Error::UnknownMeasurement(claim.first.clone()))?;
        let second = model
            .skeleton
            .measurement(&claim.second)
            .ok_or_else(|| Error::UnknownMeasurement(claim.second.clone()))?;
        if claim.first == claim.second {
            return Err(Error::InvalidClaim(format!(
                "claim pairs `{}` with itself",
                claim.first
            )));
        }
        let domain: BTreeSet<&OutcomeLabel> = claim.bijection.keys().collect();
        let image: BTreeSet<&OutcomeLabel> = claim.bijection.values().collect();
        let first_outcomes: BTreeSet<&OutcomeLabel> = first.outcomes.iter().collect();
        let second_outcomes: BTreeSet<&OutcomeLabel> = second.outcomes.iter().collect();
        if domain != first_outcomes || image != second_outcomes {
            return Err(Error::InvalidClaim(format!(
                "map between `{}` and `{}` is not an outcome bijection",
                claim.first, claim.second
            )));
        }

        let first_members = BTreeSet::from([claim.first.clone()]);
        let second_members = BTreeSet::from([claim.second.clone()]);
        for state in &model.ontic_states {
            let r1 = model.response(&first_members, state)?;
            let r2 = model.response(&second_members, state)?;
            for x in &first.outcomes {
                let lhs = r1.weight(&vec![x.clone()]);
                let rhs = r2.weight(&vec![claim.bijection[x].clone()]);
                if lhs != rhs {
                    witnesses.push(
                        Witness::new("equivalent measurements respond differently")
                            .measurements([claim.first.clone(), claim.second.clone()])
                            .scope(state)
                            .outcome(x)
                            .values(lhs, rhs),
                    );
                }
            }
        }
    }
    let mut flags = Vec::new();
    if reconstructed_theory_is_disturbing(model) {
        flags.push(VerdictFlag::TheoryIsDisturbing);
    }
    Ok(Verdict::from_witnesses(witnesses, flags))
}

/// Which containing slot provides the singleton response in
/// [`deterministic_decomposition_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextChoice {
    First,
    Last,
}

/// Canonical outcome-deterministic decomposition of a theory: one ontic state
/// per way of assigning each context (and each uncovered measurement) one of
/// its supported joint outcomes, weighted by the product of the theory's own
/// probabilities. Singleton responses read off the chosen slot's component.
pub fn deterministic_decomposition(theory: &OperationalTheory) -> Result<OntologicalModel, Error> {
    deterministic_decomposition_with(theory, ContextChoice::First)
}

pub fn deterministic_decomposition_with(
    theory: &OperationalTheory,
    choice: ContextChoice,
) -> Result<OntologicalModel, Error> {
    let skeleton = &theory.skeleton;
    let mut slots: BTreeSet<BTreeSet<MeasurementId>> =
        skeleton.contexts.iter().map(|c| c.members.clone()).collect();
    for m in &skeleton.measurements {
        if !slots.iter().any(|s| s.contains(&m.id)) {
            slots.insert(BTreeSet::from([m.id.clone()]));
        }
    }
    let slots: Vec<BTreeSet<MeasurementId>> = slots.into_iter().collect();

    // Per slot: the table in each preparation, and the outcomes supported in
    // at least one preparation.
    let mut slot_tables: Vec<BTreeMap<&PrepId, Distribution>> = Vec::with_capacity(slots.len());
    let mut supports: Vec<Vec<JointOutcome>> = Vec::with_capacity(slots.len());
    for slot in &slots {
        let mut support: BTreeSet<JointOutcome> = BTreeSet::new();
        let mut tables = BTreeMap::new();
        for prep in &skeleton.preparations {
            let dist = theory.table(slot, prep)?;
            support.extend(dist.support().cloned());
            tables.insert(prep, dist);
        }
        slot_tables.push(tables);
        supports.push(support.into_iter().collect());
    }

    let candidates: u128 = supports.iter().map(|s| s.len() as u128).product();
    const CAP: u64 = 1 << 20;
    if candidates > CAP as u128 {
        return Err(Error::Capacity(candidates, CAP));
    }

    // Designated slot (and component position within it) per measurement.
    let designated: Vec<(usize, usize)> = skeleton
        .measurements
        .iter()
        .map(|m| {
            let containing: Vec<usize> = slots
                .iter()
                .enumerate()
                .filter(|(_, slot)| slot.contains(&m.id))
                .map(|(i, _)| i)
                .collect();
            let slot_index = match choice {
                ContextChoice::First => *containing.first().expect("slot covers measurement"),
                ContextChoice::Last => *containing.last().expect("slot covers measurement"),
            };
            let position = slots[slot_index]
                .iter()
                .position(|id| *id == m.id)
                .expect("member of its slot");
            (slot_index, position)
        })
        .collect();

    let mut ontic_states = Vec::new();
    let mut priors: BTreeMap<PrepId, BTreeMap<OnticId, Rational>> =
        skeleton.preparations.iter().map(|p| (p.clone(), BTreeMap::new())).collect();
    let mut responses = BTreeMap::new();

    for assignment in supports.iter().multi_cartesian_product() {
        let state: OnticId = assignment
            .iter()
            .map(|outcome| {
                if outcome.len() == 1 {
                    outcome[0].clone()
                } else {
                    format!("({})", joint_outcome_label(outcome))
                }
            })
            .collect::<Vec<_>>()
            .join("|");

        for prep in &skeleton.preparations {
            let mut weight = Rational::one();
            for (tables, outcome) in slot_tables.iter().zip(&assignment) {
                weight *= &tables[prep].weight(outcome);
                if weight.is_zero() {
                    break;
                }
            }
            if !weight.is_zero() {
                priors.get_mut(prep).unwrap().insert(state.clone(), weight);
            }
        }

        for (slot, outcome) in slots.iter().zip(&assignment) {
            responses.insert(
                ResponseKey {
                    members: slot.clone(),
                    state: state.clone(),
                },
                Distribution::point((*outcome).clone()),
            );
        }
        for (m, &(slot_index, position)) in skeleton.measurements.iter().zip(&designated) {
            let label = assignment[slot_index][position].clone();
            responses.insert(
                ResponseKey::singleton(&m.id, &state),
                Distribution::point(vec![label]),
            );
        }

        ontic_states.push(state);
    }

    Ok(OntologicalModel {
        skeleton: skeleton.clone(),
        ontic_states,
        priors,
        responses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operational::{Context, Measurement, OperationalTheory, Skeleton};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn coin_theory() -> OperationalTheory {
        // Two 50/50 measurements, one preparation, no multi-member contexts.
        let skeleton = Skeleton::new(
            vec![
                Measurement::new("m1", &["1", "-1"]),
                Measurement::new("m2", &["1", "-1"]),
            ],
            vec![],
            vec!["psi".to_string()],
        );
        let mut tables = BTreeMap::new();
        for m in ["m1", "m2"] {
            tables.insert(
                TableKey::singleton(m, "psi"),
                Distribution::from_weights([
                    (vec!["1".to_string()], rat(1, 2)),
                    (vec!["-1".to_string()], rat(1, 2)),
                ]),
            );
        }
        OperationalTheory { skeleton, tables }
    }

    fn pair_theory(joint: &[(&str, &str, i64, i64)]) -> OperationalTheory {
        // Two dichotomic measurements in one context with the given joint
        // table (weights n/d) and singleton tables given by its marginals.
        let skeleton = Skeleton::new(
            vec![
                Measurement::new("a", &["0", "1"]),
                Measurement::new("b", &["0", "1"]),
            ],
            vec![Context::new(["a", "b"])],
            vec!["s".to_string()],
        );
        let joint_dist = Distribution::from_weights(
            joint
                .iter()
                .map(|(x, y, n, d)| (vec![x.to_string(), y.to_string()], rat(*n, *d))),
        );
        let members: BTreeSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let mut tables = BTreeMap::new();
        for m in ["a", "b"] {
            let target = BTreeSet::from([m.to_string()]);
            tables.insert(
                TableKey::singleton(m, "s"),
                marginalize(&joint_dist, &members, &target).unwrap(),
            );
        }
        tables.insert(TableKey::new(["a", "b"], "s"), joint_dist);
        OperationalTheory { skeleton, tables }
    }

    #[test]
    fn marginalize_uniform_pair() {
        let members: BTreeSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let outcomes: Vec<JointOutcome> = [("1", "1"), ("1", "-1"), ("-1", "1"), ("-1", "-1")]
            .iter()
            .map(|(x, y)| vec![x.to_string(), y.to_string()])
            .collect();
        let uniform = Distribution::uniform(&outcomes);
        let first = marginalize(&uniform, &members, &BTreeSet::from(["a".to_string()])).unwrap();
        assert_eq!(first.weight(&vec!["1".to_string()]), rat(1, 2));
        assert_eq!(first.weight(&vec!["-1".to_string()]), rat(1, 2));
    }

    #[test]
    fn marginalize_point_mass() {
        let members: BTreeSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let point = Distribution::point(vec!["1".to_string(), "-1".to_string()]);
        let second = marginalize(&point, &members, &BTreeSet::from(["b".to_string()])).unwrap();
        assert_eq!(second.weight(&vec!["-1".to_string()]), Rational::one());
    }

    #[test]
    fn marginalize_rejects_non_subsets() {
        let members: BTreeSet<String> = BTreeSet::from(["a".to_string()]);
        let dist = Distribution::point(vec!["0".to_string()]);
        let err = marginalize(&dist, &members, &BTreeSet::from(["z".to_string()]));
        assert!(matches!(err, Err(Error::NotASubset { .. })));
    }

    #[test]
    fn validate_flags_bad_normalization() {
        let mut theory = coin_theory();
        theory.tables.insert(
            TableKey::singleton("m1", "psi"),
            Distribution::from_weights([(vec!["1".to_string()], rat(3, 4))]),
        );
        let verdict = validate_theory(&theory);
        assert!(!verdict.holds);
        assert!(verdict
            .witnesses
            .iter()
            .any(|w| w.detail == "distribution does not sum to 1" && w.lhs == Some(rat(3, 4))));
    }

    #[test]
    fn validate_flags_uncontained_table_key() {
        let mut theory = coin_theory();
        theory.tables.insert(
            TableKey::new(["m1", "m2"], "psi"),
            Distribution::point(vec!["1".to_string(), "1".to_string()]),
        );
        let verdict = validate_theory(&theory);
        assert!(!verdict.holds);
        assert!(verdict
            .witnesses
            .iter()
            .any(|w| w.detail == "table key not contained in any declared context"));
    }

    #[test]
    fn validate_accepts_coin_theory() {
        assert!(validate_theory(&coin_theory()).holds);
    }

    #[test]
    fn nondisturbance_holds_without_contexts() {
        assert!(check_nondisturbance(&coin_theory()).holds);
    }

    #[test]
    fn nondisturbance_catches_conflicting_singleton() {
        let mut theory = pair_theory(&[("0", "0", 1, 2), ("1", "1", 1, 2)]);
        // Overwrite the singleton with a table that contradicts the joint.
        theory.tables.insert(
            TableKey::singleton("a", "s"),
            Distribution::point(vec!["0".to_string()]),
        );
        let verdict = check_nondisturbance(&theory);
        assert!(!verdict.holds);
        let w = &verdict.witnesses[0];
        assert_eq!(w.measurements, vec!["a".to_string()]);
        assert_eq!(w.lhs, Some(Rational::one()));
        assert_eq!(w.rhs, Some(rat(1, 2)));
    }

    #[test]
    fn eigenstates_from_point_mass_tables() {
        let mut theory = coin_theory();
        theory.tables.insert(
            TableKey::singleton("m1", "psi"),
            Distribution::point(vec!["1".to_string()]),
        );
        let eig = theory_eigenstates(&theory, "m1").unwrap();
        assert_eq!(eig["psi"], Some("1".to_string()));
        let eig2 = theory_eigenstates(&theory, "m2").unwrap();
        assert_eq!(eig2["psi"], None);
    }

    #[test]
    fn equivalences_require_matching_outcome_counts() {
        let skeleton = Skeleton::new(
            vec![
                Measurement::new("two", &["0", "1"]),
                Measurement::new("three", &["0", "1", "2"]),
            ],
            vec![],
            vec!["s".to_string()],
        );
        let mut tables = BTreeMap::new();
        tables.insert(
            TableKey::singleton("two", "s"),
            Distribution::uniform(&[vec!["0".to_string()], vec!["1".to_string()]]),
        );
        tables.insert(
            TableKey::singleton("three", "s"),
            Distribution::uniform(&[
                vec!["0".to_string()],
                vec!["1".to_string()],
                vec!["2".to_string()],
            ]),
        );
        let theory = OperationalTheory { skeleton, tables };
        assert!(find_operational_equivalences(&theory, 4).is_empty());
    }

    #[test]
    fn equivalences_find_identity_and_swap_on_uniform_coins() {
        let claims = find_operational_equivalences(&coin_theory(), 2);
        assert_eq!(claims.len(), 2);
        assert!(claims.iter().all(|c| c.first == "m1" && c.second == "m2"));
        assert!(claims.iter().all(|c| c.provenance == Provenance::Discovered));
    }

    #[test]
    fn measurement_nc_holds_for_duplicated_responses() {
        let theory = coin_theory();
        let mut responses = BTreeMap::new();
        for state in ["l0", "l1"] {
            for m in ["m1", "m2"] {
                let label = if state == "l0" { "1" } else { "-1" };
                responses.insert(
                    ResponseKey::singleton(m, state),
                    Distribution::point(vec![label.to_string()]),
                );
            }
        }
        let model = OntologicalModel {
            skeleton: theory.skeleton.clone(),
            ontic_states: vec!["l0".to_string(), "l1".to_string()],
            priors: BTreeMap::from([(
                "psi".to_string(),
                BTreeMap::from([
                    ("l0".to_string(), rat(1, 2)),
                    ("l1".to_string(), rat(1, 2)),
                ]),
            )]),
            responses,
        };
        assert!(validate_model(&model).holds);
        let claim = EquivalenceClaim::identity(
            "m1",
            "m2",
            &["1".to_string(), "-1".to_string()],
            Provenance::Declared,
        );
        let verdict = check_measurement_nc(&model, &[claim]).unwrap();
        assert!(verdict.holds);
        assert!(check_reproduction(&model, &theory).unwrap().holds);
    }

    #[test]
    fn measurement_nc_rejects_dangling_claims() {
        let theory = coin_theory();
        let model = deterministic_decomposition(&theory).unwrap();
        let claim = EquivalenceClaim::identity(
            "m1",
            "nope",
            &["1".to_string(), "-1".to_string()],
            Provenance::Declared,
        );
        assert!(matches!(
            check_measurement_nc(&model, &[claim]),
            Err(Error::UnknownMeasurement(_))
        ));
    }

    #[test]
    fn simultaneous_nc_vacuous_without_contexts() {
        let model = deterministic_decomposition(&coin_theory()).unwrap();
        let verdict = check_simultaneous_nc(&model);
        assert!(verdict.holds);
        assert!(verdict.is_flagged(VerdictFlag::Vacuous));
    }

    #[test]
    fn simultaneous_nc_holds_for_product_responses() {
        let theory = pair_theory(&[
            ("0", "0", 1, 4),
            ("0", "1", 1, 4),
            ("1", "0", 1, 4),
            ("1", "1", 1, 4),
        ]);
        let model = deterministic_decomposition(&theory).unwrap();
        let verdict = check_simultaneous_nc(&model);
        assert!(verdict.holds, "{verdict}");
    }

    #[test]
    fn decomposition_reproduces_nondisturbing_theories() {
        let theory = pair_theory(&[("0", "0", 1, 2), ("1", "1", 1, 3), ("1", "0", 1, 6)]);
        assert!(validate_theory(&theory).holds);
        assert!(check_nondisturbance(&theory).holds);
        let model = deterministic_decomposition(&theory).unwrap();
        assert!(validate_model(&model).holds);
        assert!(is_outcome_deterministic(&model).holds);
        assert!(check_reproduction(&model, &theory).unwrap().holds);
    }

    #[test]
    fn reconstruction_with_single_state_copies_responses() {
        let theory = coin_theory();
        let mut responses = BTreeMap::new();
        for m in ["m1", "m2"] {
            responses.insert(
                ResponseKey::singleton(m, "only"),
                Distribution::from_weights([
                    (vec!["1".to_string()], rat(1, 2)),
                    (vec!["-1".to_string()], rat(1, 2)),
                ]),
            );
        }
        let model = OntologicalModel {
            skeleton: theory.skeleton.clone(),
            ontic_states: vec!["only".to_string()],
            priors: BTreeMap::from([(
                "psi".to_string(),
                BTreeMap::from([("only".to_string(), Rational::one())]),
            )]),
            responses,
        };
        let recon = reconstruct_theory(&model, &theory.skeleton).unwrap();
        assert_eq!(recon, theory);
    }

    #[test]
    fn reproduction_spots_deliberate_mismatch() {
        let theory = coin_theory();
        let model = deterministic_decomposition(&theory).unwrap();
        let mut wrong = theory.clone();
        wrong.tables.insert(
            TableKey::singleton("m1", "psi"),
            Distribution::point(vec!["1".to_string()]),
        );
        let verdict = check_reproduction(&model, &wrong).unwrap();
        assert!(!verdict.holds);
    }

    #[test]
    fn verdicts_are_deterministic() {
        let theory = pair_theory(&[("0", "0", 1, 2), ("1", "1", 1, 2)]);
        let model = deterministic_decomposition(&theory).unwrap();
        let a = check_simultaneous_nc(&model);
        let b = check_simultaneous_nc(&model);
        assert_eq!(a, b);
    }
}
