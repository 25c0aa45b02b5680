//! Exact finite-dimensional quantum layer.
//!
//! Observables are supplied *with* their spectral decompositions (there is no
//! eigensolver here: exact eigendecomposition over the Gaussian rationals is
//! not possible in general), density operators carry an exact factorization
//! `rho = B† B` certifying positive semidefiniteness, and Born-rule
//! probabilities are exact rationals.

mod complex;
mod matrix;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::operational::{
    Context, Distribution, Measurement, MeasurementId, OperationalTheory, Skeleton, TableKey,
    Verdict, Witness,
};
use crate::rational::Rational;

pub use complex::GaussianRational;
pub use matrix::{pauli, pauli_pair, Matrix, Pauli};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not a projection")]
    NotAProjection,
    #[error("projections do not commute")]
    NonCommutingProjections,
    #[error("operator is not an involution (square is not the identity)")]
    NotAnInvolution,
    #[error("trace has a nonzero imaginary part: {0}")]
    NonRealTrace(String),
    #[error("Born probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("state vector is not normalized (norm^2 = {0})")]
    UnnormalizedState(String),
    #[error("density operator does not match its factorization")]
    FactorizationMismatch,
    #[error("density operator trace is {0}, not 1")]
    BadTrace(String),
    #[error("no exact maximally mixed factorization in dimension {0}")]
    UnsupportedMixedDimension(usize),
    #[error("invalid {kind}: {verdict}")]
    Invalid { kind: &'static str, verdict: String },
    #[error("{0}")]
    Shape(String),
}

/// A self-adjoint observable given by its spectral decomposition: distinct
/// rational eigenvalues and one projection per eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralObservable {
    pub id: String,
    pub eigenvalues: Vec<Rational>,
    pub projections: Vec<Matrix>,
}

impl SpectralObservable {
    pub fn new(id: impl Into<String>, eigenvalues: Vec<Rational>, projections: Vec<Matrix>) -> Self {
        SpectralObservable {
            id: id.into(),
            eigenvalues,
            projections,
        }
    }

    pub fn dim(&self) -> usize {
        self.projections.first().map(|p| p.dim()).unwrap_or(0)
    }

    /// The operator itself, reassembled as `sum_i x_i P_i`.
    pub fn operator(&self) -> Matrix {
        let dim = self.dim();
        let mut out = Matrix::zeros(dim);
        for (x, p) in self.eigenvalues.iter().zip(&self.projections) {
            out = &out + &p.scale(x);
        }
        out
    }

    /// Outcome labels are the rendered eigenvalues.
    pub fn outcome_labels(&self) -> Vec<String> {
        self.eigenvalues.iter().map(|x| x.to_string()).collect()
    }

    pub fn projection_for(&self, eigenvalue: &Rational) -> Option<&Matrix> {
        self.eigenvalues
            .iter()
            .position(|x| x == eigenvalue)
            .map(|i| &self.projections[i])
    }
}

/// A dichotomic (+1/-1) observable built from an involution: the projections
/// are `(I ± O)/2`.
pub fn dichotomic_observable(id: impl Into<String>, op: &Matrix) -> Result<SpectralObservable, Error> {
    if !op.is_hermitian() {
        return Err(Error::Shape("dichotomic operator must be hermitian".into()));
    }
    if op * op != Matrix::identity(op.dim()) {
        return Err(Error::NotAnInvolution);
    }
    let half = Rational::new(1, 2);
    let identity = Matrix::identity(op.dim());
    Ok(SpectralObservable::new(
        id,
        vec![Rational::int(1), Rational::int(-1)],
        vec![(&identity + op).scale(&half), (&identity - op).scale(&half)],
    ))
}

/// Checks the spectral invariants by exact matrix arithmetic: each projection
/// is hermitian and idempotent, projections are mutually orthogonal, they sum
/// to the identity, and eigenvalues are distinct.
pub fn validate_spectral(obs: &SpectralObservable) -> Verdict {
    let mut witnesses = Vec::new();
    if obs.eigenvalues.len() != obs.projections.len() {
        witnesses.push(
            Witness::new("eigenvalue and projection counts differ").measurements([obs.id.clone()]),
        );
        return Verdict::from_witnesses(witnesses, Vec::new());
    }
    if obs.projections.is_empty() {
        witnesses.push(Witness::new("empty spectral decomposition").measurements([obs.id.clone()]));
        return Verdict::from_witnesses(witnesses, Vec::new());
    }
    let dim = obs.dim();
    if obs.projections.iter().any(|p| p.dim() != dim) {
        witnesses.push(
            Witness::new("projections have mixed dimensions").measurements([obs.id.clone()]),
        );
        return Verdict::from_witnesses(witnesses, Vec::new());
    }
    let distinct: BTreeSet<&Rational> = obs.eigenvalues.iter().collect();
    if distinct.len() != obs.eigenvalues.len() {
        witnesses.push(Witness::new("repeated eigenvalue").measurements([obs.id.clone()]));
    }
    for (x, p) in obs.eigenvalues.iter().zip(&obs.projections) {
        if !p.is_projection() {
            witnesses.push(
                Witness::new("spectral component is not a projection")
                    .measurements([obs.id.clone()])
                    .outcome(&x.to_string()),
            );
        }
    }
    for i in 0..obs.projections.len() {
        for j in (i + 1)..obs.projections.len() {
            if !(&obs.projections[i] * &obs.projections[j]).is_zero() {
                witnesses.push(
                    Witness::new("projections are not mutually orthogonal")
                        .measurements([obs.id.clone()])
                        .outcome(&format!(
                            "{},{}",
                            obs.eigenvalues[i], obs.eigenvalues[j]
                        )),
                );
            }
        }
    }
    let mut sum = Matrix::zeros(dim);
    for p in &obs.projections {
        sum = &sum + p;
    }
    if sum != Matrix::identity(dim) {
        witnesses.push(
            Witness::new("projections do not sum to the identity").measurements([obs.id.clone()]),
        );
    }
    Verdict::from_witnesses(witnesses, Vec::new())
}

/// Exact commutation test on the reassembled operators.
pub fn commute(a: &SpectralObservable, b: &SpectralObservable) -> Result<bool, Error> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let oa = a.operator();
    let ob = b.operator();
    Ok(&oa * &ob == &ob * &oa)
}

/// A density operator together with an exact factorization `rho = B† B`
/// certifying positive semidefiniteness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityOperator {
    pub matrix: Matrix,
    pub factor: Matrix,
}

impl DensityOperator {
    pub fn new(matrix: Matrix, factor: Matrix) -> Result<Self, Error> {
        if matrix.dim() != factor.dim() {
            return Err(Error::DimensionMismatch(matrix.dim(), factor.dim()));
        }
        if &factor.adjoint() * &factor != matrix {
            return Err(Error::FactorizationMismatch);
        }
        let trace = matrix.trace();
        if !trace.is_real() {
            return Err(Error::NonRealTrace(trace.to_string()));
        }
        if !trace.re.is_one() {
            return Err(Error::BadTrace(trace.to_string()));
        }
        Ok(DensityOperator { matrix, factor })
    }

    /// Pure state from rational amplitudes; the squared norm must be exactly 1.
    pub fn pure(amplitudes: &[GaussianRational]) -> Result<Self, Error> {
        let dim = amplitudes.len();
        let norm: GaussianRational = amplitudes
            .iter()
            .fold(GaussianRational::zero(), |mut acc, a| {
                acc += &(&a.conj() * a);
                acc
            });
        if !norm.is_real() || !norm.re.is_one() {
            return Err(Error::UnnormalizedState(norm.to_string()));
        }
        let mut matrix = Matrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                matrix.set(i, j, &amplitudes[i] * &amplitudes[j].conj());
            }
        }
        // B with first row <psi| satisfies B†B = |psi><psi|.
        let mut factor = Matrix::zeros(dim);
        for j in 0..dim {
            factor.set(0, j, amplitudes[j].conj());
        }
        DensityOperator::new(matrix, factor)
    }

    /// A rank-1 rational projection is itself a pure density operator, and is
    /// its own factorization.
    pub fn from_projection(p: Matrix) -> Result<Self, Error> {
        if !p.is_projection() {
            return Err(Error::NotAProjection);
        }
        DensityOperator::new(p.clone(), p)
    }

    /// The maximally mixed state `I/d`, for dimensions of the form
    /// `2^a * s^2` where an exact rational factorization exists.
    pub fn maximally_mixed(dim: usize) -> Result<Self, Error> {
        let mut square = 1usize;
        for s in 1..=dim {
            if s * s > dim {
                break;
            }
            if dim % (s * s) == 0 {
                square = s;
            }
        }
        let mut rest = dim / (square * square);
        // Pull factors of two out of the remainder.
        let mut twos = 0usize;
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        if rest != 1 {
            return Err(Error::UnsupportedMixedDimension(dim));
        }
        let half = Rational::new(1, 2);
        let hadamard_half = Matrix::from_int_rows(&[&[1, 1], &[-1, 1]]).scale(&half);
        let mut factor =
            Matrix::identity(square * square).scale(&Rational::new(1, square as i64));
        for _ in 0..twos {
            factor = hadamard_half.kron(&factor);
        }
        let matrix = Matrix::identity(dim).scale(&Rational::new(1, dim as i64));
        DensityOperator::new(matrix, factor)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Born rule: `Tr(rho P)` as an exact rational. The trace of a density
/// operator against a projection is always real and in [0, 1]; both facts are
/// verified on every call.
pub fn born(state: &DensityOperator, proj: &Matrix) -> Result<Rational, Error> {
    if state.dim() != proj.dim() {
        return Err(Error::DimensionMismatch(state.dim(), proj.dim()));
    }
    if !proj.is_projection() {
        return Err(Error::NotAProjection);
    }
    trace_probability(&state.matrix, proj)
}

/// Joint Born rule for pairwise commuting projections:
/// `Tr(rho P_1 P_2 ... P_k)`.
pub fn joint_born(state: &DensityOperator, projs: &[Matrix]) -> Result<Rational, Error> {
    if projs.is_empty() {
        return Err(Error::Shape("joint Born rule needs at least one projection".into()));
    }
    for p in projs {
        if p.dim() != state.dim() {
            return Err(Error::DimensionMismatch(state.dim(), p.dim()));
        }
        if !p.is_projection() {
            return Err(Error::NotAProjection);
        }
    }
    for i in 0..projs.len() {
        for j in (i + 1)..projs.len() {
            if !projs[i].commutes_with(&projs[j]) {
                return Err(Error::NonCommutingProjections);
            }
        }
    }
    let mut product = projs[0].clone();
    for p in &projs[1..] {
        product = &product * p;
    }
    trace_probability(&state.matrix, &product)
}

fn trace_probability(rho: &Matrix, op: &Matrix) -> Result<Rational, Error> {
    let trace = (rho * op).trace();
    if !trace.is_real() {
        return Err(Error::NonRealTrace(trace.to_string()));
    }
    let p = trace.re;
    if p.is_negative() || p > Rational::one() {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(p)
}

/// A quantum representation: observables, states and the declared contexts of
/// pairwise commuting observables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumRepresentation {
    pub dim: usize,
    pub observables: BTreeMap<String, SpectralObservable>,
    pub states: BTreeMap<String, DensityOperator>,
    pub contexts: Vec<BTreeSet<String>>,
}

impl QuantumRepresentation {
    pub fn validate(&self) -> Verdict {
        let mut witnesses = Vec::new();
        for (key, obs) in &self.observables {
            if key != &obs.id {
                witnesses.push(
                    Witness::new("observable key differs from its id")
                        .measurements([key.clone(), obs.id.clone()]),
                );
            }
            if obs.dim() != self.dim {
                witnesses.push(
                    Witness::new("observable dimension differs from the representation")
                        .measurements([key.clone()]),
                );
                continue;
            }
            witnesses.extend(validate_spectral(obs).witnesses);
        }
        for (key, state) in &self.states {
            if state.dim() != self.dim {
                witnesses.push(
                    Witness::new("state dimension differs from the representation").scope(key),
                );
            }
        }
        for context in &self.contexts {
            for id in context {
                if !self.observables.contains_key(id) {
                    witnesses.push(
                        Witness::new("context references unknown observable")
                            .measurements([id.clone()]),
                    );
                }
            }
            let members: Vec<&SpectralObservable> = context
                .iter()
                .filter_map(|id| self.observables.get(id))
                .collect();
            for i in 0..members.len() {
                for j in (i + 1)..members.len() {
                    match commute(members[i], members[j]) {
                        Ok(true) => {}
                        _ => witnesses.push(
                            Witness::new("declared context contains non-commuting observables")
                                .measurements([members[i].id.clone(), members[j].id.clone()]),
                        ),
                    }
                }
            }
        }
        Verdict::from_witnesses(witnesses, Vec::new())
    }
}

/// Generates the operational theory of a representation: singleton tables
/// from the Born rule, context tables from the joint Born rule. The output is
/// non-disturbing by construction.
pub fn generate_theory(rep: &QuantumRepresentation) -> Result<OperationalTheory, Error> {
    let verdict = rep.validate();
    if !verdict.holds {
        return Err(Error::Invalid {
            kind: "quantum representation",
            verdict: verdict.to_string(),
        });
    }

    let measurements: Vec<Measurement> = rep
        .observables
        .values()
        .map(|obs| Measurement {
            id: obs.id.clone(),
            outcomes: obs.outcome_labels(),
        })
        .collect();
    let contexts: Vec<Context> = rep
        .contexts
        .iter()
        .map(|members| Context {
            members: members.clone(),
        })
        .collect();
    let preparations: Vec<String> = rep.states.keys().cloned().collect();
    let skeleton = Skeleton::new(measurements, contexts, preparations);

    let mut tables = BTreeMap::new();
    for (prep, state) in &rep.states {
        for obs in rep.observables.values() {
            let mut weights = Vec::new();
            let mut total = Rational::zero();
            for (x, p) in obs.eigenvalues.iter().zip(&obs.projections) {
                let w = born(state, p)?;
                total += &w;
                weights.push((vec![x.to_string()], w));
            }
            if !total.is_one() {
                return Err(Error::ProbabilityOutOfRange(total.to_string()));
            }
            tables.insert(
                TableKey::singleton(&obs.id, prep),
                Distribution::from_weights(weights),
            );
        }
        for members in &rep.contexts {
            let dist = context_table(rep, members, state)?;
            tables.insert(
                TableKey {
                    members: members.clone(),
                    preparation: prep.clone(),
                },
                dist,
            );
        }
    }
    Ok(OperationalTheory { skeleton, tables })
}

/// The joint outcome table of a commuting context in the given state.
pub fn context_table(
    rep: &QuantumRepresentation,
    members: &BTreeSet<MeasurementId>,
    state: &DensityOperator,
) -> Result<Distribution, Error> {
    let observables: Vec<&SpectralObservable> = members
        .iter()
        .map(|id| {
            rep.observables
                .get(id)
                .ok_or_else(|| Error::Shape(format!("unknown observable `{id}`")))
        })
        .collect::<Result<_, _>>()?;
    let mut weights = Vec::new();
    let mut total = Rational::zero();
    let mut stack: Vec<(Vec<String>, Vec<Matrix>)> = vec![(Vec::new(), Vec::new())];
    for obs in &observables {
        let mut next = Vec::new();
        for (labels, projs) in stack {
            for (x, p) in obs.eigenvalues.iter().zip(&obs.projections) {
                let mut labels = labels.clone();
                labels.push(x.to_string());
                let mut projs = projs.clone();
                projs.push(p.clone());
                next.push((labels, projs));
            }
        }
        stack = next;
    }
    for (labels, projs) in stack {
        let w = joint_born(state, &projs)?;
        total += &w;
        if !w.is_zero() {
            weights.push((labels, w));
        }
    }
    if !total.is_one() {
        return Err(Error::ProbabilityOutOfRange(total.to_string()));
    }
    Ok(Distribution::from_weights(weights))
}
