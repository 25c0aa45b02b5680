//! Built-in, exactly constructed scenarios and models.
//!
//! Everything here is assembled from integer and small-rational data, checked
//! against its module's validator at construction time, and cached. The
//! entries double as regression anchors for the checkers and as export
//! sources for the file formats.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::kosp::{interpret_fine_grained, interpret_one_to_one, KsScenario, VectorScenario};
use crate::operational::{
    deterministic_decomposition, validate_model, validate_theory, Distribution, EquivalenceClaim,
    Measurement, OntologicalModel, OperationalTheory, Provenance, ResponseKey, Skeleton, TableKey,
};
use crate::quantum::{
    dichotomic_observable, pauli_pair, Matrix, Pauli, QuantumRepresentation, SpectralObservable,
};
use crate::rational::Rational;
use crate::sheaf::{validate_empirical, CoverElement, EmpiricalModel};

/// The nine Peres-Mermin observables as (id, tensor factors), in grid order.
const PM_GRID: [(&str, Pauli, Pauli); 9] = [
    ("A11", Pauli::Z, Pauli::I),
    ("A12", Pauli::I, Pauli::Z),
    ("A13", Pauli::Z, Pauli::Z),
    ("A21", Pauli::I, Pauli::X),
    ("A22", Pauli::X, Pauli::I),
    ("A23", Pauli::X, Pauli::X),
    ("A31", Pauli::Z, Pauli::X),
    ("A32", Pauli::X, Pauli::Z),
    ("A33", Pauli::Y, Pauli::Y),
];

const PM_CONTEXTS: [[&str; 3]; 6] = [
    ["A11", "A12", "A13"],
    ["A21", "A22", "A23"],
    ["A31", "A32", "A33"],
    ["A11", "A21", "A31"],
    ["A12", "A22", "A32"],
    ["A13", "A23", "A33"],
];

fn pm_observables() -> Vec<SpectralObservable> {
    PM_GRID
        .iter()
        .map(|(id, a, b)| {
            dichotomic_observable(*id, &pauli_pair(*a, *b)).expect("Pauli tensors are involutions")
        })
        .collect()
}

/// The Peres-Mermin square: nine two-qubit observables whose six row and
/// column contexts admit no value assignment compatible with every joint
/// spectrum. Row products and the first two column products are the identity;
/// the last column's product is minus the identity — re-verified by exact
/// matrix arithmetic on every construction.
pub fn peres_mermin_scenario() -> KsScenario {
    static CACHE: OnceLock<KsScenario> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let observables = pm_observables();
            let by_id: BTreeMap<&str, &SpectralObservable> =
                observables.iter().map(|o| (o.id.as_str(), o)).collect();
            for (i, context) in PM_CONTEXTS.iter().enumerate() {
                let product = context
                    .iter()
                    .map(|id| by_id[id].operator())
                    .fold(Matrix::identity(4), |acc, op| &acc * &op);
                let expected = if i == 5 {
                    -&Matrix::identity(4)
                } else {
                    Matrix::identity(4)
                };
                assert_eq!(
                    product, expected,
                    "Peres-Mermin context product invariant broken"
                );
            }
            let contexts: Vec<BTreeSet<String>> = PM_CONTEXTS
                .iter()
                .map(|c| c.iter().map(|s| s.to_string()).collect())
                .collect();
            KsScenario::new(observables, contexts).expect("Peres-Mermin square validates")
        })
        .clone()
}

/// The quantum representation behind the one-to-one reading: nine dichotomic
/// measurements at the maximally mixed two-qubit state.
pub fn peres_mermin_representation() -> QuantumRepresentation {
    QuantumRepresentation {
        dim: 4,
        observables: pm_observables()
            .into_iter()
            .map(|o| (o.id.clone(), o))
            .collect(),
        states: BTreeMap::from([(
            "mixed".to_string(),
            crate::quantum::DensityOperator::maximally_mixed(4).expect("dim 4 factorizes"),
        )]),
        contexts: PM_CONTEXTS
            .iter()
            .map(|c| c.iter().map(|s| s.to_string()).collect())
            .collect(),
    }
}

/// One-to-one reading of the square at the maximally mixed preparation: nine
/// measurements, six contexts, uniform tables.
pub fn peres_mermin_theory() -> OperationalTheory {
    static CACHE: OnceLock<OperationalTheory> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let theory = interpret_one_to_one(&peres_mermin_scenario(), &BTreeMap::new())
                .expect("one-to-one interpretation of the square");
            assert!(validate_theory(&theory).holds);
            theory
        })
        .clone()
}

/// Fine-grained reading of the square: six four-outcome context measurements,
/// eighteen derived coarse-grainings, and nine equivalence claims pairing the
/// two realizations of each observable.
pub fn peres_mermin_fine() -> (OperationalTheory, Vec<EquivalenceClaim>) {
    static CACHE: OnceLock<(OperationalTheory, Vec<EquivalenceClaim>)> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let result = interpret_fine_grained(&peres_mermin_scenario(), &BTreeMap::new())
                .expect("fine-grained interpretation of the square");
            assert!(validate_theory(&result.0).holds);
            result
        })
        .clone()
}

/// Albert's two-magnet spin toy model: two measurements that differ only in
/// the magnet polarity, statistically indistinguishable in the one
/// preparation, yet answering oppositely in every ontic state. Returns the
/// theory, the model, and the declared identity claim whose violation
/// exhibits measurement contextuality.
pub fn albert_toy_model() -> (OperationalTheory, OntologicalModel, EquivalenceClaim) {
    static CACHE: OnceLock<(OperationalTheory, OntologicalModel, EquivalenceClaim)> =
        OnceLock::new();
    CACHE
        .get_or_init(|| {
            let half = Rational::new(1, 2);
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
                        (vec!["1".to_string()], half.clone()),
                        (vec!["-1".to_string()], half.clone()),
                    ]),
                );
            }
            let theory = OperationalTheory {
                skeleton: skeleton.clone(),
                tables,
            };
            assert!(validate_theory(&theory).holds);

            // Electrons starting above the symmetry plane stay above it in
            // both arrangements, so the two measurements answer oppositely
            // for a fixed ontic state.
            let mut responses = BTreeMap::new();
            for (state, m1_outcome, m2_outcome) in [("above", "1", "-1"), ("below", "-1", "1")] {
                responses.insert(
                    ResponseKey::singleton("m1", state),
                    Distribution::point(vec![m1_outcome.to_string()]),
                );
                responses.insert(
                    ResponseKey::singleton("m2", state),
                    Distribution::point(vec![m2_outcome.to_string()]),
                );
            }
            let model = OntologicalModel {
                skeleton,
                ontic_states: vec!["above".to_string(), "below".to_string()],
                priors: BTreeMap::from([(
                    "psi".to_string(),
                    BTreeMap::from([
                        ("above".to_string(), half.clone()),
                        ("below".to_string(), half),
                    ]),
                )]),
                responses,
            };
            assert!(validate_model(&model).holds);

            // The physical identification: outcome labels name the same
            // detector in both arrangements.
            let claim = EquivalenceClaim::identity(
                "m1",
                "m2",
                &["1".to_string(), "-1".to_string()],
                Provenance::Declared,
            );
            (theory, model, claim)
        })
        .clone()
}

/// An outcome-deterministic model that reproduces the Peres-Mermin statistics
/// exactly and is simultaneous contextual: one ontic state per way of
/// assigning each of the six contexts one of its four supported joint
/// outcomes (4^6 = 4096 states, uniform prior), with singleton responses read
/// off the lexicographically first containing context.
pub fn pm_contextual_model() -> OntologicalModel {
    static CACHE: OnceLock<OntologicalModel> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let model = deterministic_decomposition(&peres_mermin_theory())
                .expect("decomposition of the square's theory");
            assert_eq!(model.ontic_states.len(), 4096);
            assert!(validate_model(&model).holds);
            model
        })
        .clone()
}

/// Two perfectly correlated coins in a single context; the minimal positive
/// control for the global-section machinery.
pub fn classical_coins_empirical() -> EmpiricalModel {
    static CACHE: OnceLock<EmpiricalModel> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let half = Rational::new(1, 2);
            let em = EmpiricalModel::new(
                vec![
                    Measurement::new("a", &["0", "1"]),
                    Measurement::new("b", &["0", "1"]),
                ],
                vec![CoverElement {
                    members: ["a", "b"].iter().map(|s| s.to_string()).collect(),
                    distribution: Distribution::from_weights([
                        (vec!["0".to_string(), "0".to_string()], half.clone()),
                        (vec!["1".to_string(), "1".to_string()], half),
                    ]),
                }],
            );
            assert!(validate_empirical(&em).holds);
            em
        })
        .clone()
}

/// Eighteen rational vectors in dimension four with nine complete orthogonal
/// bases, each vector appearing in exactly two bases. The parity mismatch
/// (nine bases needing one marked vector each, every vector counted twice)
/// rules out any sum-rule coloring; the exhaustive search confirms it.
pub fn ks18_vectors() -> VectorScenario {
    static CACHE: OnceLock<VectorScenario> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let raw: [[i64; 4]; 18] = [
                [0, 0, 0, 1],
                [0, 0, 1, 0],
                [1, 1, 0, 0],
                [1, -1, 0, 0],
                [0, 1, 0, 0],
                [1, 0, 1, 0],
                [1, 0, -1, 0],
                [1, -1, 1, -1],
                [1, -1, -1, 1],
                [0, 0, 1, 1],
                [1, 1, 1, 1],
                [0, 1, 0, -1],
                [1, 0, 0, 1],
                [1, 0, 0, -1],
                [0, 1, -1, 0],
                [1, 1, -1, 1],
                [1, 1, 1, -1],
                [-1, 1, 1, 1],
            ];
            let bases: Vec<Vec<usize>> = vec![
                vec![0, 1, 2, 3],
                vec![0, 4, 5, 6],
                vec![7, 8, 2, 9],
                vec![7, 10, 6, 11],
                vec![1, 4, 12, 13],
                vec![8, 10, 13, 14],
                vec![15, 16, 3, 9],
                vec![15, 17, 5, 11],
                vec![16, 17, 12, 14],
            ];
            let vs = VectorScenario {
                dim: 4,
                vectors: raw
                    .iter()
                    .map(|v| v.iter().map(|&x| Rational::int(x)).collect())
                    .collect(),
                bases,
            };
            assert!(crate::kosp::validate_vectors(&vs).holds);
            // Each vector sits in exactly two bases.
            for i in 0..vs.vectors.len() {
                let count = vs.bases.iter().filter(|b| b.contains(&i)).count();
                assert_eq!(count, 2, "vector {i} must appear in exactly two bases");
            }
            vs
        })
        .clone()
}

/// A constructed catalog payload.
#[derive(Debug, Clone)]
pub enum Payload {
    Theory {
        theory: OperationalTheory,
        claims: Vec<EquivalenceClaim>,
    },
    Model {
        model: OntologicalModel,
        claims: Vec<EquivalenceClaim>,
    },
    Scenario(KsScenario),
    Vectors(VectorScenario),
    Empirical(EmpiricalModel),
}

/// Catalog listing: key, payload kind, and a one-line description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub kind: &'static str,
    pub notes: &'static str,
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            key: "peres_mermin",
            kind: "ks_scenario",
            notes: "nine two-qubit observables, six row/column contexts, no admissible value assignment",
        },
        CatalogEntry {
            key: "peres_mermin_theory",
            kind: "theory",
            notes: "one-to-one reading of the square at the maximally mixed preparation",
        },
        CatalogEntry {
            key: "peres_mermin_fine_theory",
            kind: "theory",
            notes: "fine-grained reading: six context measurements, eighteen coarse-grainings, nine claims",
        },
        CatalogEntry {
            key: "albert_theory",
            kind: "theory",
            notes: "two statistically identical spin measurements differing only in magnet polarity",
        },
        CatalogEntry {
            key: "albert_model",
            kind: "model",
            notes: "mirrored deterministic responses over {above, below}; violates the declared identity claim",
        },
        CatalogEntry {
            key: "pm_contextual_model",
            kind: "model",
            notes: "outcome-deterministic, reproduces the square's statistics, simultaneous contextual (4096 states)",
        },
        CatalogEntry {
            key: "classical_coins",
            kind: "empirical",
            notes: "two perfectly correlated coins; a two-atom global section exists",
        },
        CatalogEntry {
            key: "ks18",
            kind: "vector_scenario",
            notes: "18 vectors / 9 complete orthogonal bases in dimension 4; zero sum-rule colorings",
        },
    ]
}

pub fn build(key: &str) -> Option<Payload> {
    match key {
        "peres_mermin" => Some(Payload::Scenario(peres_mermin_scenario())),
        "peres_mermin_theory" => Some(Payload::Theory {
            theory: peres_mermin_theory(),
            claims: Vec::new(),
        }),
        "peres_mermin_fine_theory" => {
            let (theory, claims) = peres_mermin_fine();
            Some(Payload::Theory { theory, claims })
        }
        "albert_theory" => Some(Payload::Theory {
            theory: albert_toy_model().0,
            claims: Vec::new(),
        }),
        "albert_model" => {
            let (_, model, claim) = albert_toy_model();
            Some(Payload::Model {
                model,
                claims: vec![claim],
            })
        }
        "pm_contextual_model" => Some(Payload::Model {
            model: pm_contextual_model(),
            claims: Vec::new(),
        }),
        "classical_coins" => Some(Payload::Empirical(classical_coins_empirical())),
        "ks18" => Some(Payload::Vectors(ks18_vectors())),
        _ => None,
    }
}
