use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational;

pub type MeasurementId = String;
pub type PrepId = String;
pub type OnticId = String;
pub type OutcomeLabel = String;

/// A joint outcome: one outcome label per member of a measurement subset,
/// aligned with the members sorted by id.
pub type JointOutcome = Vec<OutcomeLabel>;

/// Renders a joint outcome the way witnesses and reports print it.
pub fn joint_outcome_label(outcome: &[OutcomeLabel]) -> String {
    outcome.join(",")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),
    #[error("unknown preparation `{0}`")]
    UnknownPreparation(String),
    #[error("`{target}` is not a subset of `{members}`")]
    NotASubset { target: String, members: String },
    #[error("no table for key `{members}` in preparation `{preparation}`")]
    MissingTable {
        members: String,
        preparation: String,
    },
    #[error("no response for key `{members}` in ontic state `{state}`")]
    MissingResponse { members: String, state: String },
    #[error("no prior for preparation `{0}`")]
    MissingPrior(String),
    #[error("skeleton mismatch: {0}")]
    SkeletonMismatch(String),
    #[error("invalid equivalence claim: {0}")]
    InvalidClaim(String),
    #[error("enumeration too large: {0} candidates exceed the cap of {1}")]
    Capacity(u128, u64),
}

/// A measurement: an identifier plus its ordered, pairwise distinct outcome
/// labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measurement {
    pub id: MeasurementId,
    pub outcomes: Vec<OutcomeLabel>,
}

impl Measurement {
    pub fn new(id: impl Into<String>, outcomes: &[&str]) -> Self {
        Measurement {
            id: id.into(),
            outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A declared commeasurable set of measurements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Context {
    pub members: BTreeSet<MeasurementId>,
}

impl Context {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(members: I) -> Self {
        Context {
            members: members.into_iter().map(Into::into).collect(),
        }
    }
}

/// The structural part of a theory or model: measurements with their outcome
/// sets, the declared contexts, and the preparation identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub measurements: Vec<Measurement>,
    pub contexts: Vec<Context>,
    pub preparations: Vec<PrepId>,
}

impl Skeleton {
    /// Builds a skeleton in canonical order (measurements sorted by id,
    /// contexts sorted lexicographically, preparations sorted).
    pub fn new(
        mut measurements: Vec<Measurement>,
        mut contexts: Vec<Context>,
        mut preparations: Vec<PrepId>,
    ) -> Self {
        measurements.sort_by(|a, b| a.id.cmp(&b.id));
        contexts.sort();
        contexts.dedup();
        preparations.sort();
        Skeleton {
            measurements,
            contexts,
            preparations,
        }
    }

    pub fn measurement(&self, id: &str) -> Option<&Measurement> {
        self.measurements.iter().find(|m| m.id == id)
    }

    pub fn has_multi_member_context(&self) -> bool {
        self.contexts.iter().any(|c| c.members.len() > 1)
    }

    /// The joint outcome space of a subset, in lexicographic order (members
    /// sorted by id, outcomes in their listed order).
    pub fn joint_space(&self, members: &BTreeSet<MeasurementId>) -> Result<Vec<JointOutcome>, Error> {
        let per_member: Vec<&[OutcomeLabel]> = members
            .iter()
            .map(|id| {
                self.measurement(id)
                    .map(|m| m.outcomes.as_slice())
                    .ok_or_else(|| Error::UnknownMeasurement(id.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut space = vec![Vec::new()];
        for outcomes in per_member {
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
        Ok(space)
    }

    /// Declared contexts that contain the given subset, in canonical order.
    pub fn contexts_containing<'a>(
        &'a self,
        subset: &'a BTreeSet<MeasurementId>,
    ) -> impl Iterator<Item = &'a Context> + 'a {
        self.contexts
            .iter()
            .filter(move |c| subset.is_subset(&c.members))
    }
}

/// An exact probability distribution over joint outcomes. Zero weights are
/// dropped, so two distributions are equal iff they assign the same weight to
/// every outcome.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Distribution {
    weights: BTreeMap<JointOutcome, Rational>,
}

impl Distribution {
    pub fn from_weights<I: IntoIterator<Item = (JointOutcome, Rational)>>(pairs: I) -> Self {
        let mut weights = BTreeMap::new();
        for (outcome, w) in pairs {
            if !w.is_zero() {
                *weights.entry(outcome).or_insert_with(Rational::zero) += &w;
            }
        }
        weights.retain(|_, w| !w.is_zero());
        Distribution { weights }
    }

    pub fn point(outcome: JointOutcome) -> Self {
        Distribution::from_weights([(outcome, Rational::one())])
    }

    pub fn uniform(outcomes: &[JointOutcome]) -> Self {
        assert!(!outcomes.is_empty(), "uniform distribution over nothing");
        let w = Rational::one() / Rational::int(outcomes.len() as i64);
        Distribution::from_weights(outcomes.iter().map(|o| (o.clone(), w.clone())))
    }

    pub fn weights(&self) -> &BTreeMap<JointOutcome, Rational> {
        &self.weights
    }

    pub fn weight(&self, outcome: &JointOutcome) -> Rational {
        self.weights.get(outcome).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &JointOutcome> {
        self.weights.keys()
    }

    /// `Some(outcome)` iff some outcome carries weight exactly 1.
    pub fn point_mass(&self) -> Option<&JointOutcome> {
        self.weights
            .iter()
            .find(|(_, w)| w.is_one())
            .map(|(o, _)| o)
    }

    /// True iff every weight is exactly 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        self.weights.values().all(|w| w.is_one())
    }
}

/// Key of a conditional-probability table: a subset of some declared context,
/// and a preparation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TableKey {
    pub members: BTreeSet<MeasurementId>,
    pub preparation: PrepId,
}

impl TableKey {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(members: I, preparation: &str) -> Self {
        TableKey {
            members: members.into_iter().map(Into::into).collect(),
            preparation: preparation.to_string(),
        }
    }

    pub fn singleton(measurement: &str, preparation: &str) -> Self {
        TableKey::new([measurement], preparation)
    }
}

/// A finite operational theory: a skeleton plus exact conditional-probability
/// tables. Singletons and declared contexts carry explicit tables; other
/// subsets may be given explicitly or default to marginals of a containing
/// context's table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationalTheory {
    pub skeleton: Skeleton,
    pub tables: BTreeMap<TableKey, Distribution>,
}

impl OperationalTheory {
    /// Table lookup with the marginal-of-first-containing-context fallback
    /// for subsets without an explicit table.
    pub fn table(
        &self,
        members: &BTreeSet<MeasurementId>,
        preparation: &str,
    ) -> Result<Distribution, Error> {
        let key = TableKey {
            members: members.clone(),
            preparation: preparation.to_string(),
        };
        if let Some(dist) = self.tables.get(&key) {
            return Ok(dist.clone());
        }
        for context in self.skeleton.contexts_containing(members) {
            let ctx_key = TableKey {
                members: context.members.clone(),
                preparation: preparation.to_string(),
            };
            if let Some(dist) = self.tables.get(&ctx_key) {
                return checks_marginalize(dist, &context.members, members);
            }
        }
        Err(Error::MissingTable {
            members: render_members(members),
            preparation: preparation.to_string(),
        })
    }
}

// Used by `OperationalTheory::table`; the public entry point lives in checks.
pub(crate) fn checks_marginalize(
    dist: &Distribution,
    members: &BTreeSet<MeasurementId>,
    target: &BTreeSet<MeasurementId>,
) -> Result<Distribution, Error> {
    if target.is_empty() || !target.is_subset(members) {
        return Err(Error::NotASubset {
            target: render_members(target),
            members: render_members(members),
        });
    }
    let member_list: Vec<&MeasurementId> = members.iter().collect();
    let positions: Vec<usize> = member_list
        .iter()
        .enumerate()
        .filter(|(_, id)| target.contains(**id))
        .map(|(i, _)| i)
        .collect();
    Ok(Distribution::from_weights(dist.weights().iter().map(
        |(outcome, w)| {
            let projected: JointOutcome = positions.iter().map(|&i| outcome[i].clone()).collect();
            (projected, w.clone())
        },
    )))
}

pub(crate) fn render_members(members: &BTreeSet<MeasurementId>) -> String {
    members.iter().cloned().collect::<Vec<_>>().join("&")
}

/// Key of a response function: a measurement subset and an ontic state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResponseKey {
    pub members: BTreeSet<MeasurementId>,
    pub state: OnticId,
}

impl ResponseKey {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(members: I, state: &str) -> Self {
        ResponseKey {
            members: members.into_iter().map(Into::into).collect(),
            state: state.to_string(),
        }
    }

    pub fn singleton(measurement: &str, state: &str) -> Self {
        ResponseKey::new([measurement], state)
    }
}

/// A finite ontological (hidden-variable) model over a theory skeleton.
///
/// Priors do not depend on the measurement performed and responses do not
/// depend on the preparation; models violating those assumptions are not
/// representable here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologicalModel {
    pub skeleton: Skeleton,
    pub ontic_states: Vec<OnticId>,
    pub priors: BTreeMap<PrepId, BTreeMap<OnticId, Rational>>,
    pub responses: BTreeMap<ResponseKey, Distribution>,
}

impl OntologicalModel {
    pub fn response(&self, members: &BTreeSet<MeasurementId>, state: &str) -> Result<&Distribution, Error> {
        let key = ResponseKey {
            members: members.clone(),
            state: state.to_string(),
        };
        self.responses.get(&key).ok_or_else(|| Error::MissingResponse {
            members: render_members(members),
            state: state.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Declared,
    Discovered,
}

/// A claim that two measurements are operationally equivalent under an
/// outcome bijection: same statistics in every preparation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EquivalenceClaim {
    pub first: MeasurementId,
    pub second: MeasurementId,
    pub bijection: BTreeMap<OutcomeLabel, OutcomeLabel>,
    pub provenance: Provenance,
}

impl EquivalenceClaim {
    pub fn identity(first: &str, second: &str, outcomes: &[OutcomeLabel], provenance: Provenance) -> Self {
        EquivalenceClaim {
            first: first.to_string(),
            second: second.to_string(),
            bijection: outcomes.iter().map(|o| (o.clone(), o.clone())).collect(),
            provenance,
        }
    }
}

/// A single violation record. Which fields are populated depends on the
/// check; `detail` always says what went wrong. The derived ordering is the
/// canonical witness order (subset, related subsets, scope, outcome).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    /// Measurement ids the violation is about.
    pub measurements: Vec<MeasurementId>,
    /// Related measurement subsets (a containing context, the other cover
    /// element, ...), when the violation compares against one.
    pub related: Vec<Vec<MeasurementId>>,
    /// Preparation or ontic state, when the violation is scoped to one.
    pub scope: Option<String>,
    /// Rendered outcome, when the violation is about one.
    pub outcome: Option<String>,
    pub lhs: Option<Rational>,
    pub rhs: Option<Rational>,
    pub detail: String,
}

impl Witness {
    pub fn new(detail: impl Into<String>) -> Self {
        Witness {
            measurements: Vec::new(),
            related: Vec::new(),
            scope: None,
            outcome: None,
            lhs: None,
            rhs: None,
            detail: detail.into(),
        }
    }

    pub fn measurements<I: IntoIterator<Item = S>, S: Into<String>>(mut self, ids: I) -> Self {
        self.measurements = ids.into_iter().map(Into::into).collect();
        self
    }

    pub fn related(mut self, subset: &BTreeSet<MeasurementId>) -> Self {
        self.related.push(subset.iter().cloned().collect());
        self
    }

    pub fn scope(mut self, scope: &str) -> Self {
        self.scope = Some(scope.to_string());
        self
    }

    pub fn outcome(mut self, outcome: &str) -> Self {
        self.outcome = Some(outcome.to_string());
        self
    }

    pub fn values(mut self, lhs: Rational, rhs: Rational) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub fn lhs_only(mut self, lhs: Rational) -> Self {
        self.lhs = Some(lhs);
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.detail)?;
        if !self.measurements.is_empty() {
            write!(f, " [{}]", self.measurements.join(", "))?;
        }
        for related in &self.related {
            write!(f, " vs [{}]", related.join(", "))?;
        }
        if let Some(scope) = &self.scope {
            write!(f, " @ {scope}")?;
        }
        if let Some(outcome) = &self.outcome {
            write!(f, " outcome {outcome}")?;
        }
        match (&self.lhs, &self.rhs) {
            (Some(l), Some(r)) => write!(f, ": {l} != {r}")?,
            (Some(l), None) => write!(f, ": {l}")?,
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictFlag {
    /// The property holds because there is nothing to check.
    Vacuous,
    /// The model's reconstructed theory is disturbing, so noncontextuality
    /// verdicts about it carry little meaning.
    TheoryIsDisturbing,
}

impl fmt::Display for VerdictFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictFlag::Vacuous => write!(f, "vacuous"),
            VerdictFlag::TheoryIsDisturbing => write!(f, "theory-is-disturbing"),
        }
    }
}

/// The outcome of a check: holds iff there are no witnesses. Witnesses are
/// sorted canonically so identical inputs always produce identical output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub flags: Vec<VerdictFlag>,
    pub witnesses: Vec<Witness>,
}

impl Verdict {
    pub fn from_witnesses(mut witnesses: Vec<Witness>, flags: Vec<VerdictFlag>) -> Self {
        witnesses.sort();
        witnesses.dedup();
        Verdict {
            holds: witnesses.is_empty(),
            flags,
            witnesses,
        }
    }

    pub fn pass() -> Self {
        Verdict::from_witnesses(Vec::new(), Vec::new())
    }

    pub fn is_flagged(&self, flag: VerdictFlag) -> bool {
        self.flags.contains(&flag)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            write!(f, "holds")?;
        } else {
            write!(f, "violated ({} witnesses)", self.witnesses.len())?;
        }
        if !self.flags.is_empty() {
            let flags: Vec<String> = self.flags.iter().map(|x| x.to_string()).collect();
            write!(f, " [{}]", flags.join(", "))?;
        }
        Ok(())
    }
}
