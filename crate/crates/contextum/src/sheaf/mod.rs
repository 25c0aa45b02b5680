//! Empirical models over covers of compatible measurements, and the
//! global-section question.
//!
//! An empirical model fixes one preparation and records, for each cover
//! element (a maximal set of compatible measurements), an exact distribution
//! over its joint outcomes. The model satisfies the sheaf condition when one
//! distribution over *global* outcome assignments marginalizes to every cover
//! distribution. Existence is decided by exact rational linear feasibility;
//! a negative answer always comes with a Farkas certificate that re-verifies
//! independently of the solver.

pub mod simplex;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::operational::{
    check_nondisturbance, joint_outcome_label, marginalize, validate_theory, Distribution,
    JointOutcome, Measurement, MeasurementId, OperationalTheory, Verdict, Witness,
};
use crate::rational::Rational;

use simplex::{farkas_is_valid, solve_equality_feasibility, Feasibility};

/// Default cap on the number of global assignments the solver may index.
pub const DEFAULT_SECTION_CAP: u64 = 1 << 20;

/// Default cap on the pruned assignment count the brute-force oracle accepts
/// (it enumerates all subsets of that set).
pub const DEFAULT_ORACLE_LIMIT: usize = 10;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} global assignments exceed the cap of {1}")]
    Capacity(u128, u64),
    #[error("invalid empirical model: {0}")]
    Invalid(Verdict),
    #[error("theory is disturbing; overlap marginals would conflict: {0}")]
    Disturbing(Verdict),
    #[error("empirical model is inconsistent: {0}")]
    Inconsistent(Verdict),
    #[error("certificate shape mismatch: expected {expected} multipliers, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Operational(#[from] crate::operational::Error),
    #[error("internal invariant broken: {0}")]
    Internal(&'static str),
}

/// One cover element: a set of compatible measurements with its exact joint
/// outcome distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverElement {
    pub members: BTreeSet<MeasurementId>,
    pub distribution: Distribution,
}

/// An empirical model: measurements with their outcome sets, a cover, and one
/// distribution per cover element. Consistency of overlaps is a property to
/// check, not an assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalModel {
    pub measurements: Vec<Measurement>,
    pub cover: Vec<CoverElement>,
}

impl EmpiricalModel {
    pub fn new(mut measurements: Vec<Measurement>, mut cover: Vec<CoverElement>) -> Self {
        measurements.sort_by(|a, b| a.id.cmp(&b.id));
        cover.sort_by(|a, b| a.members.cmp(&b.members));
        EmpiricalModel {
            measurements,
            cover,
        }
    }

    pub fn measurement(&self, id: &str) -> Option<&Measurement> {
        self.measurements.iter().find(|m| m.id == id)
    }

    /// Number of global outcome assignments.
    pub fn assignment_count(&self) -> u128 {
        self.measurements
            .iter()
            .map(|m| m.outcomes.len() as u128)
            .product()
    }

    /// All global assignments, one outcome per measurement in sorted id
    /// order, lexicographically.
    fn global_assignments(&self) -> Vec<Vec<String>> {
        let mut assignments = vec![Vec::new()];
        for m in &self.measurements {
            let mut next = Vec::with_capacity(assignments.len() * m.outcomes.len());
            for prefix in &assignments {
                for o in &m.outcomes {
                    let mut item = prefix.clone();
                    item.push(o.clone());
                    next.push(item);
                }
            }
            assignments = next;
        }
        assignments
    }

    /// The restriction of a global assignment to a cover element.
    fn restrict(&self, assignment: &[String], members: &BTreeSet<MeasurementId>) -> JointOutcome {
        self.measurements
            .iter()
            .enumerate()
            .filter(|(_, m)| members.contains(&m.id))
            .map(|(i, _)| assignment[i].clone())
            .collect()
    }

    /// The full joint outcome space of a cover element, lexicographically.
    fn joint_space(&self, members: &BTreeSet<MeasurementId>) -> Vec<JointOutcome> {
        let mut space = vec![Vec::new()];
        for id in members {
            let outcomes = &self.measurement(id).expect("validated member").outcomes;
            let mut next = Vec::with_capacity(space.len() * outcomes.len());
            for prefix in &space {
                for o in outcomes {
                    let mut item = prefix.clone();
                    item.push(o.clone());
                    next.push(item);
                }
            }
            space = next;
        }
        space
    }
}

/// Structural validation: known members, well-formed outcome sets, normalized
/// distributions. Overlap consistency is *not* part of this; see
/// [`check_consistency`].
pub fn validate_empirical(em: &EmpiricalModel) -> Verdict {
    let mut witnesses = Vec::new();
    let mut ids = BTreeSet::new();
    for m in &em.measurements {
        if !ids.insert(m.id.clone()) {
            witnesses.push(Witness::new("duplicate measurement id").measurements([m.id.clone()]));
        }
        if m.outcomes.is_empty() {
            witnesses.push(Witness::new("measurement has no outcomes").measurements([m.id.clone()]));
        }
        let distinct: BTreeSet<&String> = m.outcomes.iter().collect();
        if distinct.len() != m.outcomes.len() {
            witnesses.push(
                Witness::new("duplicate outcome label within measurement")
                    .measurements([m.id.clone()]),
            );
        }
    }
    for element in &em.cover {
        if element.members.is_empty() {
            witnesses.push(Witness::new("cover element has no members"));
            continue;
        }
        let mut known = true;
        for id in &element.members {
            if !ids.contains(id) {
                known = false;
                witnesses.push(
                    Witness::new("cover element references unknown measurement")
                        .measurements([id.clone()]),
                );
            }
        }
        if !known {
            continue;
        }
        let member_list: Vec<&MeasurementId> = element.members.iter().collect();
        for (outcome, w) in element.distribution.weights() {
            if w.is_negative() {
                witnesses.push(
                    Witness::new("negative weight")
                        .measurements(element.members.iter().cloned())
                        .outcome(&joint_outcome_label(outcome))
                        .lhs_only(w.clone()),
                );
            }
            if outcome.len() != member_list.len() {
                witnesses.push(
                    Witness::new("outcome arity does not match the cover element")
                        .measurements(element.members.iter().cloned())
                        .outcome(&joint_outcome_label(outcome)),
                );
                continue;
            }
            for (id, label) in member_list.iter().zip(outcome) {
                let m = em.measurement(id).expect("known member");
                if !m.outcomes.contains(label) {
                    witnesses.push(
                        Witness::new("outcome label not in the measurement's outcome set")
                            .measurements([(*id).clone()])
                            .outcome(label),
                    );
                }
            }
        }
        let total = element.distribution.total();
        if !total.is_one() {
            witnesses.push(
                Witness::new("distribution does not sum to 1")
                    .measurements(element.members.iter().cloned())
                    .values(total, Rational::one()),
            );
        }
    }
    Verdict::from_witnesses(witnesses, Vec::new())
}

/// Builds the empirical model of a validated, non-disturbing theory at one
/// preparation: the cover is the theory's declared contexts (plus a singleton
/// element for any measurement outside every context), each with its table.
pub fn to_empirical(theory: &OperationalTheory, preparation: &str) -> Result<EmpiricalModel, Error> {
    let verdict = validate_theory(theory);
    if !verdict.holds {
        return Err(Error::Invalid(verdict));
    }
    if !theory.skeleton.preparations.iter().any(|p| p == preparation) {
        return Err(Error::Operational(
            crate::operational::Error::UnknownPreparation(preparation.to_string()),
        ));
    }
    let nondisturbance = check_nondisturbance(theory);
    if !nondisturbance.holds {
        return Err(Error::Disturbing(nondisturbance));
    }

    let mut cover_sets: Vec<BTreeSet<MeasurementId>> = theory
        .skeleton
        .contexts
        .iter()
        .map(|c| c.members.clone())
        .collect();
    for m in &theory.skeleton.measurements {
        if !cover_sets.iter().any(|c| c.contains(&m.id)) {
            cover_sets.push(BTreeSet::from([m.id.clone()]));
        }
    }

    let mut cover = Vec::new();
    for members in cover_sets {
        let distribution = theory.table(&members, preparation)?;
        cover.push(CoverElement {
            members,
            distribution,
        });
    }
    Ok(EmpiricalModel::new(
        theory.skeleton.measurements.clone(),
        cover,
    ))
}

/// Pairwise consistency: any two cover elements marginalize to the same
/// distribution on their overlap, exactly.
pub fn check_consistency(em: &EmpiricalModel) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, a) in em.cover.iter().enumerate() {
        for b in &em.cover[i + 1..] {
            let overlap: BTreeSet<MeasurementId> =
                a.members.intersection(&b.members).cloned().collect();
            if overlap.is_empty() {
                continue;
            }
            let (ma, mb) = match (
                marginalize(&a.distribution, &a.members, &overlap),
                marginalize(&b.distribution, &b.members, &overlap),
            ) {
                (Ok(ma), Ok(mb)) => (ma, mb),
                _ => continue,
            };
            let mut outcomes: BTreeSet<&JointOutcome> = ma.support().collect();
            outcomes.extend(mb.support());
            for outcome in outcomes {
                let lhs = ma.weight(outcome);
                let rhs = mb.weight(outcome);
                if lhs != rhs {
                    witnesses.push(
                        Witness::new("overlap marginal mismatch")
                            .measurements(overlap.iter().cloned())
                            .related(&a.members)
                            .related(&b.members)
                            .outcome(&joint_outcome_label(outcome))
                            .values(lhs, rhs),
                    );
                }
            }
        }
    }
    Verdict::from_witnesses(witnesses, Vec::new())
}

/// A distribution over global outcome assignments whose marginal on each
/// cover element reproduces that element's distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalSection {
    /// Keys are total assignments, one outcome per measurement in sorted id
    /// order; zero weights are omitted.
    pub weights: BTreeMap<Vec<String>, Rational>,
}

/// Farkas multipliers for the global-section system, one per linear
/// constraint: for each cover element, one row per joint outcome of its full
/// outcome space (in lexicographic order, cover elements in cover order),
/// followed by the normalization row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

/// The decision: either a section or a certificate. Never "unknown".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionOutcome {
    Section(GlobalSection),
    Infeasible(FarkasCertificate),
}

struct SectionSystem {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    assignments: Vec<Vec<String>>,
}

fn build_system(em: &EmpiricalModel, cap: u64) -> Result<SectionSystem, Error> {
    let count = em.assignment_count();
    if count > cap as u128 {
        return Err(Error::Capacity(count, cap));
    }
    let assignments = em.global_assignments();
    let n = assignments.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for element in &em.cover {
        for outcome in em.joint_space(&element.members) {
            let mut row = vec![Rational::zero(); n];
            for (j, assignment) in assignments.iter().enumerate() {
                if em.restrict(assignment, &element.members) == outcome {
                    row[j] = Rational::one();
                }
            }
            rows.push(row);
            rhs.push(element.distribution.weight(&outcome));
        }
    }
    rows.push(vec![Rational::one(); n]);
    rhs.push(Rational::one());
    Ok(SectionSystem {
        rows,
        rhs,
        assignments,
    })
}

/// Decides whether the model has a global section. Requires a structurally
/// valid, consistent model; never returns "unknown" within the cap. The
/// returned section is checked against every cover marginal, and the returned
/// certificate is re-verified, before this function returns.
pub fn find_global_section(em: &EmpiricalModel, cap: u64) -> Result<SectionOutcome, Error> {
    let structural = validate_empirical(em);
    if !structural.holds {
        return Err(Error::Invalid(structural));
    }
    let consistency = check_consistency(em);
    if !consistency.holds {
        return Err(Error::Inconsistent(consistency));
    }
    let system = build_system(em, cap)?;
    match solve_equality_feasibility(&system.rows, &system.rhs) {
        Feasibility::Feasible(x) => {
            let weights: BTreeMap<Vec<String>, Rational> = system
                .assignments
                .iter()
                .zip(&x)
                .filter(|(_, w)| !w.is_zero())
                .map(|(a, w)| (a.clone(), w.clone()))
                .collect();
            let section = GlobalSection { weights };
            if !section_matches(em, &section) {
                return Err(Error::Internal("solver returned a non-marginalizing section"));
            }
            Ok(SectionOutcome::Section(section))
        }
        Feasibility::Infeasible(multipliers) => {
            let certificate = FarkasCertificate { multipliers };
            if !verify_certificate(em, &certificate, cap)? {
                return Err(Error::Internal("solver returned an invalid certificate"));
            }
            Ok(SectionOutcome::Infeasible(certificate))
        }
    }
}

/// Marginal of a section on a measurement subset.
pub fn section_marginal(
    em: &EmpiricalModel,
    section: &GlobalSection,
    members: &BTreeSet<MeasurementId>,
) -> Distribution {
    Distribution::from_weights(section.weights.iter().map(|(assignment, w)| {
        (em.restrict(assignment, members), w.clone())
    }))
}

/// Does the section reproduce every cover distribution exactly?
pub fn section_matches(em: &EmpiricalModel, section: &GlobalSection) -> bool {
    if section.weights.values().any(|w| w.is_negative()) || !section.weights.values().sum::<Rational>().is_one()
    {
        return false;
    }
    em.cover.iter().all(|element| {
        section_marginal(em, section, &element.members) == element.distribution
    })
}

/// Re-derives the linear system and checks the multiplier combination:
/// componentwise nonnegative on the assignment variables, strictly negative
/// against the right-hand side. Independent of how the certificate was found.
pub fn verify_certificate(
    em: &EmpiricalModel,
    cert: &FarkasCertificate,
    cap: u64,
) -> Result<bool, Error> {
    let system = build_system(em, cap)?;
    if cert.multipliers.len() != system.rows.len() {
        return Err(Error::ShapeMismatch {
            expected: system.rows.len(),
            got: cert.multipliers.len(),
        });
    }
    Ok(farkas_is_valid(&system.rows, &system.rhs, &cert.multipliers))
}

/// Independent oracle for [`find_global_section`]: prune global assignments
/// to those supported by every cover element, then enumerate support subsets
/// and solve each square-rank equality system by elimination. A feasible
/// nonnegative solution on some support is exactly a global section restricted
/// to an extreme point.
pub fn brute_force_section_exists(em: &EmpiricalModel, support_limit: usize) -> Result<bool, Error> {
    let assignments = {
        let count = em.assignment_count();
        if count > DEFAULT_SECTION_CAP as u128 {
            return Err(Error::Capacity(count, DEFAULT_SECTION_CAP));
        }
        em.global_assignments()
    };
    let admissible: Vec<&Vec<String>> = assignments
        .iter()
        .filter(|assignment| {
            em.cover.iter().all(|element| {
                !element
                    .distribution
                    .weight(&em.restrict(assignment, &element.members))
                    .is_zero()
            })
        })
        .collect();

    // Rows restricted to supported outcomes plus normalization; unsupported
    // outcomes only ever see pruned-away variables, so their rows hold
    // automatically.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for element in &em.cover {
        for (outcome, w) in element.distribution.weights() {
            let row: Vec<Rational> = admissible
                .iter()
                .map(|assignment| {
                    if em.restrict(assignment, &element.members) == *outcome {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            if row.iter().all(|x| x.is_zero()) {
                // Positive probability with no admissible assignment left.
                return Ok(false);
            }
            rows.push(row);
            rhs.push(w.clone());
        }
    }
    rows.push(vec![Rational::one(); admissible.len()]);
    rhs.push(Rational::one());

    if admissible.is_empty() {
        return Ok(false);
    }
    if admissible.len() > support_limit {
        return Err(Error::Capacity(admissible.len() as u128, support_limit as u64));
    }

    let n = admissible.len();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub_rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| support.iter().map(|&j| row[j].clone()).collect())
            .collect();
        if let Some(solution) = solve_unique(&sub_rows, &rhs) {
            if solution.iter().all(|x| !x.is_negative()) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Solves an overdetermined exact system if its columns are independent and
/// the system is consistent; returns `None` otherwise.
fn solve_unique(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let m = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_rows = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let pivot = (row..m).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(row, pivot);
        let p = aug[row][col].clone();
        for k in col..=n {
            aug[row][k] = &aug[row][k] / &p;
        }
        for r in 0..m {
            if r != row && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for k in col..=n {
                    let delta = &factor * &aug[row][k];
                    aug[r][k] = &aug[r][k] - &delta;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
        if row == m {
            break;
        }
    }
    if pivot_rows.len() < n {
        return None; // dependent columns
    }
    // Consistency of the remaining rows.
    for r in row..m {
        if aug[r][..n].iter().all(|x| x.is_zero()) && !aug[r][n].is_zero() {
            return None;
        }
        if aug[r][..n].iter().any(|x| !x.is_zero()) {
            return None; // should not happen after full elimination
        }
    }
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}
