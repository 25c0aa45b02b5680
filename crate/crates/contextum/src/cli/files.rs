//! JSON file formats.
//!
//! Every file is a UTF-8 JSON document whose top-level `kind` selects the
//! payload: `theory`, `model`, `ks_scenario`, `vector_scenario`, `empirical`
//! or `representation`. Probabilities and matrix entries are strings: exact
//! rationals `p/q` or Gaussian rationals `a/b+c/di`. Decimal strings are
//! accepted only when the document carries an explicit `snap_tolerance`
//! (itself an exact rational): a decimal snaps to the closest rational with
//! denominator at most 10^6 provided it lies within the tolerance, otherwise
//! parsing fails. Exports are canonical (sorted keys, reduced fractions) and
//! round-trip byte-identically.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::Payload;
use crate::kosp::VectorScenario;
use crate::operational::{
    Context, Distribution, EquivalenceClaim, Measurement, OntologicalModel, OperationalTheory,
    Provenance, ResponseKey, Skeleton, TableKey,
};
use crate::quantum::{
    DensityOperator, GaussianRational, Matrix, QuantumRepresentation, SpectralObservable,
};
use crate::rational::{parse_rational_snapped, ParseRationalError, Rational};

/// Largest denominator a snapped decimal may take.
pub const SNAP_MAX_DENOM: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write `{path}`: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad number: {0}")]
    Rational(#[from] ParseRationalError),
    #[error("duplicate entry: {0}")]
    Duplicate(String),
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("bad state `{id}`: {source}")]
    BadState {
        id: String,
        source: crate::quantum::Error,
    },
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind")]
pub enum ScenarioFile {
    #[serde(rename = "theory")]
    Theory(TheoryBody),
    #[serde(rename = "model")]
    Model(ModelBody),
    #[serde(rename = "ks_scenario")]
    KsScenario(KsBody),
    #[serde(rename = "vector_scenario")]
    VectorScenario(VectorBody),
    #[serde(rename = "empirical")]
    Empirical(EmpiricalBody),
    #[serde(rename = "representation")]
    Representation(RepresentationBody),
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TheoryBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snap_tolerance: Option<String>,
    pub measurements: Vec<MeasurementDto>,
    pub contexts: Vec<Vec<String>>,
    pub preparations: Vec<String>,
    pub tables: Vec<TableDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<ClaimDto>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModelBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snap_tolerance: Option<String>,
    pub measurements: Vec<MeasurementDto>,
    pub contexts: Vec<Vec<String>>,
    pub preparations: Vec<String>,
    pub ontic_states: Vec<String>,
    pub priors: Vec<PriorDto>,
    pub responses: Vec<ResponseDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<ClaimDto>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct KsBody {
    pub dim: usize,
    pub observables: Vec<ObservableDto>,
    pub contexts: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VectorBody {
    pub dim: usize,
    pub vectors: Vec<Vec<String>>,
    pub bases: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EmpiricalBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snap_tolerance: Option<String>,
    pub measurements: Vec<MeasurementDto>,
    pub cover: Vec<CoverDto>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RepresentationBody {
    pub dim: usize,
    pub observables: Vec<ObservableDto>,
    pub states: Vec<StateDto>,
    pub contexts: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MeasurementDto {
    pub id: String,
    pub outcomes: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableDto {
    pub members: Vec<String>,
    pub preparation: String,
    pub weights: Vec<WeightDto>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WeightDto {
    pub outcome: Vec<String>,
    pub p: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PriorDto {
    pub preparation: String,
    pub weights: Vec<StateWeightDto>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StateWeightDto {
    pub state: String,
    pub p: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResponseDto {
    pub members: Vec<String>,
    pub state: String,
    pub weights: Vec<WeightDto>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClaimDto {
    pub first: String,
    pub second: String,
    pub bijection: Vec<(String, String)>,
    pub provenance: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ObservableDto {
    pub id: String,
    pub eigenvalues: Vec<String>,
    /// One matrix per eigenvalue, rows of entry strings.
    pub projections: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StateDto {
    pub id: String,
    pub matrix: Vec<Vec<String>>,
    pub factor: Vec<Vec<String>>,
}

/// A parsed file turned into domain objects. Kochen-Specker and
/// representation payloads stay in parts so that validation can report
/// witnesses instead of failing construction.
#[derive(Debug)]
pub enum DomainObject {
    Theory {
        theory: OperationalTheory,
        claims: Vec<EquivalenceClaim>,
    },
    Model {
        model: OntologicalModel,
        claims: Vec<EquivalenceClaim>,
    },
    Ks {
        observables: Vec<SpectralObservable>,
        contexts: Vec<BTreeSet<String>>,
    },
    Vectors(VectorScenario),
    Empirical(crate::sheaf::EmpiricalModel),
    Representation(QuantumRepresentation),
}

impl DomainObject {
    pub fn kind(&self) -> &'static str {
        match self {
            DomainObject::Theory { .. } => "theory",
            DomainObject::Model { .. } => "model",
            DomainObject::Ks { .. } => "ks_scenario",
            DomainObject::Vectors(_) => "vector_scenario",
            DomainObject::Empirical(_) => "empirical",
            DomainObject::Representation(_) => "representation",
        }
    }
}

struct NumberParser {
    snap: Option<Rational>,
}

impl NumberParser {
    fn from_tolerance(tolerance: &Option<String>) -> Result<Self, FileError> {
        let snap = match tolerance {
            Some(text) => Some(text.parse::<Rational>().map_err(FileError::Rational)?),
            None => None,
        };
        Ok(NumberParser { snap })
    }

    fn rational(&self, s: &str) -> Result<Rational, FileError> {
        Ok(parse_rational_snapped(s, self.snap.as_ref(), SNAP_MAX_DENOM)?)
    }

    fn gaussian(&self, s: &str) -> Result<GaussianRational, FileError> {
        GaussianRational::parse_with(s, |part| self.rational(part))
    }

    fn matrix(&self, rows: &[Vec<String>], what: &str) -> Result<Matrix, FileError> {
        let parsed: Vec<Vec<GaussianRational>> = rows
            .iter()
            .map(|row| row.iter().map(|e| self.gaussian(e)).collect())
            .collect::<Result<_, _>>()?;
        Matrix::from_rows(parsed).map_err(|e| FileError::BadMatrix(format!("{what}: {e}")))
    }
}

pub fn parse_str(text: &str) -> Result<DomainObject, FileError> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    from_dto(file)
}

pub fn read_file(path: &Path) -> Result<DomainObject, FileError> {
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text)
}

fn from_dto(file: ScenarioFile) -> Result<DomainObject, FileError> {
    match file {
        ScenarioFile::Theory(body) => {
            let numbers = NumberParser::from_tolerance(&body.snap_tolerance)?;
            let skeleton = skeleton_from_parts(&body.measurements, &body.contexts, &body.preparations);
            let mut tables = BTreeMap::new();
            for table in &body.tables {
                let key = TableKey {
                    members: table.members.iter().cloned().collect(),
                    preparation: table.preparation.clone(),
                };
                let dist = distribution_from_weights(&table.weights, &numbers)?;
                if tables.insert(key, dist).is_some() {
                    return Err(FileError::Duplicate(format!(
                        "table for [{}] in `{}`",
                        table.members.join(", "),
                        table.preparation
                    )));
                }
            }
            Ok(DomainObject::Theory {
                theory: OperationalTheory { skeleton, tables },
                claims: claims_from_dto(&body.claims)?,
            })
        }
        ScenarioFile::Model(body) => {
            let numbers = NumberParser::from_tolerance(&body.snap_tolerance)?;
            let skeleton = skeleton_from_parts(&body.measurements, &body.contexts, &body.preparations);
            let mut priors = BTreeMap::new();
            for prior in &body.priors {
                let mut weights = BTreeMap::new();
                for w in &prior.weights {
                    if weights
                        .insert(w.state.clone(), numbers.rational(&w.p)?)
                        .is_some()
                    {
                        return Err(FileError::Duplicate(format!(
                            "prior weight for `{}` in `{}`",
                            w.state, prior.preparation
                        )));
                    }
                }
                if priors.insert(prior.preparation.clone(), weights).is_some() {
                    return Err(FileError::Duplicate(format!(
                        "prior for `{}`",
                        prior.preparation
                    )));
                }
            }
            let mut responses = BTreeMap::new();
            for response in &body.responses {
                let key = ResponseKey {
                    members: response.members.iter().cloned().collect(),
                    state: response.state.clone(),
                };
                let dist = distribution_from_weights(&response.weights, &numbers)?;
                if responses.insert(key, dist).is_some() {
                    return Err(FileError::Duplicate(format!(
                        "response for [{}] in `{}`",
                        response.members.join(", "),
                        response.state
                    )));
                }
            }
            Ok(DomainObject::Model {
                model: OntologicalModel {
                    skeleton,
                    ontic_states: body.ontic_states.clone(),
                    priors,
                    responses,
                },
                claims: claims_from_dto(&body.claims)?,
            })
        }
        ScenarioFile::KsScenario(body) => {
            let numbers = NumberParser { snap: None };
            let observables = observables_from_dto(&body.observables, &numbers)?;
            let contexts = body
                .contexts
                .iter()
                .map(|c| c.iter().cloned().collect())
                .collect();
            Ok(DomainObject::Ks {
                observables,
                contexts,
            })
        }
        ScenarioFile::VectorScenario(body) => {
            let numbers = NumberParser { snap: None };
            let vectors = body
                .vectors
                .iter()
                .map(|v| v.iter().map(|x| numbers.rational(x)).collect())
                .collect::<Result<Vec<Vec<Rational>>, _>>()?;
            Ok(DomainObject::Vectors(VectorScenario {
                dim: body.dim,
                vectors,
                bases: body.bases.clone(),
            }))
        }
        ScenarioFile::Empirical(body) => {
            let numbers = NumberParser::from_tolerance(&body.snap_tolerance)?;
            let measurements = body
                .measurements
                .iter()
                .map(|m| Measurement {
                    id: m.id.clone(),
                    outcomes: m.outcomes.clone(),
                })
                .collect();
            let mut cover = Vec::new();
            for element in &body.cover {
                cover.push(crate::sheaf::CoverElement {
                    members: element.members.iter().cloned().collect(),
                    distribution: distribution_from_weights(&element.weights, &numbers)?,
                });
            }
            Ok(DomainObject::Empirical(crate::sheaf::EmpiricalModel::new(
                measurements,
                cover,
            )))
        }
        ScenarioFile::Representation(body) => {
            let numbers = NumberParser { snap: None };
            let observables = observables_from_dto(&body.observables, &numbers)?;
            let mut states = BTreeMap::new();
            for state in &body.states {
                let matrix = numbers.matrix(&state.matrix, &format!("state `{}`", state.id))?;
                let factor = numbers.matrix(&state.factor, &format!("factor of `{}`", state.id))?;
                let density =
                    DensityOperator::new(matrix, factor).map_err(|source| FileError::BadState {
                        id: state.id.clone(),
                        source,
                    })?;
                if states.insert(state.id.clone(), density).is_some() {
                    return Err(FileError::Duplicate(format!("state `{}`", state.id)));
                }
            }
            Ok(DomainObject::Representation(QuantumRepresentation {
                dim: body.dim,
                observables: observables.into_iter().map(|o| (o.id.clone(), o)).collect(),
                states,
                contexts: body
                    .contexts
                    .iter()
                    .map(|c| c.iter().cloned().collect())
                    .collect(),
            }))
        }
    }
}

fn skeleton_from_parts(
    measurements: &[MeasurementDto],
    contexts: &[Vec<String>],
    preparations: &[String],
) -> Skeleton {
    Skeleton::new(
        measurements
            .iter()
            .map(|m| Measurement {
                id: m.id.clone(),
                outcomes: m.outcomes.clone(),
            })
            .collect(),
        contexts
            .iter()
            .map(|c| Context {
                members: c.iter().cloned().collect(),
            })
            .collect(),
        preparations.to_vec(),
    )
}

fn distribution_from_weights(
    weights: &[WeightDto],
    numbers: &NumberParser,
) -> Result<Distribution, FileError> {
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::new();
    for w in weights {
        if !seen.insert(w.outcome.clone()) {
            return Err(FileError::Duplicate(format!(
                "weight for outcome [{}]",
                w.outcome.join(", ")
            )));
        }
        pairs.push((w.outcome.clone(), numbers.rational(&w.p)?));
    }
    Ok(Distribution::from_weights(pairs))
}

fn claims_from_dto(claims: &[ClaimDto]) -> Result<Vec<EquivalenceClaim>, FileError> {
    claims
        .iter()
        .map(|c| {
            let mut bijection = BTreeMap::new();
            for (from, to) in &c.bijection {
                if bijection.insert(from.clone(), to.clone()).is_some() {
                    return Err(FileError::Duplicate(format!(
                        "bijection entry for `{from}` in claim {} ~ {}",
                        c.first, c.second
                    )));
                }
            }
            Ok(EquivalenceClaim {
                first: c.first.clone(),
                second: c.second.clone(),
                bijection,
                provenance: if c.provenance == "declared" {
                    Provenance::Declared
                } else {
                    Provenance::Discovered
                },
            })
        })
        .collect()
}

fn observables_from_dto(
    observables: &[ObservableDto],
    numbers: &NumberParser,
) -> Result<Vec<SpectralObservable>, FileError> {
    observables
        .iter()
        .map(|o| {
            let eigenvalues = o
                .eigenvalues
                .iter()
                .map(|x| numbers.rational(x))
                .collect::<Result<Vec<_>, _>>()?;
            let projections = o
                .projections
                .iter()
                .enumerate()
                .map(|(i, rows)| numbers.matrix(rows, &format!("projection {i} of `{}`", o.id)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SpectralObservable::new(o.id.clone(), eigenvalues, projections))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Canonical export
// ---------------------------------------------------------------------------

fn measurement_dtos(measurements: &[Measurement]) -> Vec<MeasurementDto> {
    measurements
        .iter()
        .map(|m| MeasurementDto {
            id: m.id.clone(),
            outcomes: m.outcomes.clone(),
        })
        .collect()
}

fn context_dtos(contexts: &[Context]) -> Vec<Vec<String>> {
    contexts
        .iter()
        .map(|c| c.members.iter().cloned().collect())
        .collect()
}

fn weight_dtos(dist: &Distribution) -> Vec<WeightDto> {
    dist.weights()
        .iter()
        .map(|(outcome, p)| WeightDto {
            outcome: outcome.clone(),
            p: p.to_string(),
        })
        .collect()
}

fn claim_dtos(claims: &[EquivalenceClaim]) -> Vec<ClaimDto> {
    claims
        .iter()
        .map(|c| ClaimDto {
            first: c.first.clone(),
            second: c.second.clone(),
            bijection: c
                .bijection
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            provenance: match c.provenance {
                Provenance::Declared => "declared".to_string(),
                Provenance::Discovered => "discovered".to_string(),
            },
        })
        .collect()
}

fn matrix_dto(matrix: &Matrix) -> Vec<Vec<String>> {
    matrix
        .rows()
        .map(|row| row.iter().map(|e| e.to_string()).collect())
        .collect()
}

pub fn theory_to_dto(theory: &OperationalTheory, claims: &[EquivalenceClaim]) -> ScenarioFile {
    ScenarioFile::Theory(TheoryBody {
        snap_tolerance: None,
        measurements: measurement_dtos(&theory.skeleton.measurements),
        contexts: context_dtos(&theory.skeleton.contexts),
        preparations: theory.skeleton.preparations.clone(),
        tables: theory
            .tables
            .iter()
            .map(|(key, dist)| TableDto {
                members: key.members.iter().cloned().collect(),
                preparation: key.preparation.clone(),
                weights: weight_dtos(dist),
            })
            .collect(),
        claims: claim_dtos(claims),
    })
}

pub fn model_to_dto(model: &OntologicalModel, claims: &[EquivalenceClaim]) -> ScenarioFile {
    ScenarioFile::Model(ModelBody {
        snap_tolerance: None,
        measurements: measurement_dtos(&model.skeleton.measurements),
        contexts: context_dtos(&model.skeleton.contexts),
        preparations: model.skeleton.preparations.clone(),
        ontic_states: model.ontic_states.clone(),
        priors: model
            .priors
            .iter()
            .map(|(prep, weights)| PriorDto {
                preparation: prep.clone(),
                weights: weights
                    .iter()
                    .map(|(state, p)| StateWeightDto {
                        state: state.clone(),
                        p: p.to_string(),
                    })
                    .collect(),
            })
            .collect(),
        responses: model
            .responses
            .iter()
            .map(|(key, dist)| ResponseDto {
                members: key.members.iter().cloned().collect(),
                state: key.state.clone(),
                weights: weight_dtos(dist),
            })
            .collect(),
        claims: claim_dtos(claims),
    })
}

pub fn ks_to_dto(scenario: &crate::kosp::KsScenario) -> ScenarioFile {
    ScenarioFile::KsScenario(KsBody {
        dim: scenario.dim(),
        observables: scenario
            .observables()
            .iter()
            .map(|o| ObservableDto {
                id: o.id.clone(),
                eigenvalues: o.eigenvalues.iter().map(|x| x.to_string()).collect(),
                projections: o.projections.iter().map(matrix_dto).collect(),
            })
            .collect(),
        contexts: scenario
            .contexts()
            .iter()
            .map(|c| c.iter().cloned().collect())
            .collect(),
    })
}

pub fn vectors_to_dto(vs: &VectorScenario) -> ScenarioFile {
    ScenarioFile::VectorScenario(VectorBody {
        dim: vs.dim,
        vectors: vs
            .vectors
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect(),
        bases: vs.bases.clone(),
    })
}

pub fn empirical_to_dto(em: &crate::sheaf::EmpiricalModel) -> ScenarioFile {
    ScenarioFile::Empirical(EmpiricalBody {
        snap_tolerance: None,
        measurements: measurement_dtos(&em.measurements),
        cover: em
            .cover
            .iter()
            .map(|element| CoverDto {
                members: element.members.iter().cloned().collect(),
                weights: weight_dtos(&element.distribution),
            })
            .collect(),
    })
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoverDto {
    pub members: Vec<String>,
    pub weights: Vec<WeightDto>,
}

pub fn payload_to_dto(payload: &Payload) -> ScenarioFile {
    match payload {
        Payload::Theory { theory, claims } => theory_to_dto(theory, claims),
        Payload::Model { model, claims } => model_to_dto(model, claims),
        Payload::Scenario(scenario) => ks_to_dto(scenario),
        Payload::Vectors(vs) => vectors_to_dto(vs),
        Payload::Empirical(em) => empirical_to_dto(em),
    }
}

/// Canonical serialization: pretty JSON plus a trailing newline.
pub fn to_canonical_json(file: &ScenarioFile) -> String {
    let mut text = serde_json::to_string_pretty(file).expect("serializable DTO");
    text.push('\n');
    text
}

pub fn write_file(path: &Path, file: &ScenarioFile) -> Result<(), FileError> {
    std::fs::write(path, to_canonical_json(file)).map_err(|source| FileError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_entries_roundtrip_byte_identically() {
        for entry in catalog::entries() {
            let payload = catalog::build(entry.key).unwrap();
            let dto = payload_to_dto(&payload);
            let first = to_canonical_json(&dto);
            let parsed = parse_str(&first).unwrap_or_else(|e| panic!("{}: {e}", entry.key));
            let second = to_canonical_json(&domain_to_dto(&parsed));
            assert_eq!(first, second, "round trip for `{}`", entry.key);
        }
    }

    fn domain_to_dto(object: &DomainObject) -> ScenarioFile {
        match object {
            DomainObject::Theory { theory, claims } => theory_to_dto(theory, claims),
            DomainObject::Model { model, claims } => model_to_dto(model, claims),
            DomainObject::Ks {
                observables,
                contexts,
            } => ks_to_dto(
                &crate::kosp::KsScenario::new(observables.clone(), contexts.clone())
                    .expect("catalog scenarios validate"),
            ),
            DomainObject::Vectors(vs) => vectors_to_dto(vs),
            DomainObject::Empirical(em) => empirical_to_dto(em),
            DomainObject::Representation(_) => unreachable!("no representation catalog entries"),
        }
    }

    #[test]
    fn snapped_decimals_parse_only_with_tolerance() {
        let with_tolerance = r#"{
            "kind": "empirical",
            "snap_tolerance": "1/1000000000",
            "measurements": [
                {"id": "a", "outcomes": ["0", "1"]}
            ],
            "cover": [
                {"members": ["a"], "weights": [
                    {"outcome": ["0"], "p": "0.25"},
                    {"outcome": ["1"], "p": "3/4"}
                ]}
            ]
        }"#;
        match parse_str(with_tolerance).unwrap() {
            DomainObject::Empirical(em) => {
                assert_eq!(
                    em.cover[0].distribution.weight(&vec!["0".to_string()]),
                    Rational::new(1, 4)
                );
            }
            other => panic!("unexpected {other:?}"),
        }

        let without = with_tolerance.replace("\"snap_tolerance\": \"1/1000000000\",", "");
        assert!(matches!(
            parse_str(&without),
            Err(FileError::Rational(ParseRationalError::DecimalNotAllowed(_)))
        ));
    }

    #[test]
    fn duplicate_tables_are_rejected() {
        let text = r#"{
            "kind": "theory",
            "measurements": [{"id": "m", "outcomes": ["0"]}],
            "contexts": [],
            "preparations": ["s"],
            "tables": [
                {"members": ["m"], "preparation": "s", "weights": [{"outcome": ["0"], "p": "1"}]},
                {"members": ["m"], "preparation": "s", "weights": [{"outcome": ["0"], "p": "1"}]}
            ]
        }"#;
        assert!(matches!(parse_str(text), Err(FileError::Duplicate(_))));
    }

    #[test]
    fn truncated_json_is_a_parse_error() {
        assert!(matches!(
            parse_str("{\"kind\": \"theory\""),
            Err(FileError::Json(_))
        ));
    }
}
