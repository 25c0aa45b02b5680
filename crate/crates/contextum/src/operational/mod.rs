//! Operational theories, ontological models, and the noncontextuality checks.
//!
//! An operational theory is a finite table of exact conditional probabilities
//! `p(outcome | measurements ∧ preparation)`, with a declared commeasurability
//! structure (which measurements can be performed together). An ontological
//! model explains such a theory through a finite set of ontic states, one
//! prior per preparation and one response function per measurement (or
//! commeasurable subset) and ontic state.
//!
//! Everything in this module compares exact rationals; there are no
//! tolerances anywhere.

mod checks;
mod types;

pub use checks::{
    check_measurement_nc, check_nondisturbance, check_reproduction, check_simultaneous_nc,
    deterministic_decomposition, deterministic_decomposition_with, find_operational_equivalences,
    is_outcome_deterministic, marginalize, model_eigenstates, reconstruct_theory,
    theory_eigenstates, validate_model, validate_theory, ContextChoice,
};
pub use types::{
    joint_outcome_label, Context, Distribution, EquivalenceClaim, Error, JointOutcome,
    Measurement, MeasurementId, OnticId, OntologicalModel, OperationalTheory, OutcomeLabel,
    PrepId, Provenance, ResponseKey, Skeleton, TableKey, Verdict, VerdictFlag, Witness,
};
