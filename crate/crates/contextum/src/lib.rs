//! Exact model checking for quantum contextuality.
//!
//! `contextum` mechanizes finite operational theories and their ontological
//! (hidden-variable) models over exact rational arithmetic, and decides — by
//! exhaustive search or exact linear feasibility, never by floating point —
//! the questions that separate the two notions of noncontextuality:
//!
//! * **Simultaneous noncontextuality**: does every ontic state respond to a
//!   measurement independently of which compatible measurements are performed
//!   alongside it?
//! * **Measurement noncontextuality**: do operationally equivalent
//!   measurements (same statistics in every preparation, up to an outcome
//!   bijection) share response functions in every ontic state?
//!
//! On top of that sit the Kochen-Specker machinery (value assignments under
//! the functional composition principle, the one-to-one and fine-grained
//! readings of a scenario, sum-rule vector colorings) and the sheaf-style
//! global-section test for empirical models, with machine-checkable Farkas
//! certificates of infeasibility.
//!
//! # Layout
//!
//! * [`rational`] — exact arithmetic carrier.
//! * [`operational`] — theories, models, and every noncontextuality check.
//! * [`quantum`] — Gaussian-rational matrices, spectral observables, Born rule.
//! * [`kosp`] — Kochen-Specker scenarios, interpretations, vector coloring.
//! * [`sheaf`] — empirical models, global sections, exact simplex + Farkas.
//! * [`catalog`] — built-in scenarios (Peres-Mermin square, Albert's toy
//!   model, a deterministic contextual model, classical coins).
//! * [`cli`] — JSON file formats and the `contextum` command-line front end.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example peres_mermin_no_go      # value-assignment search + parity argument
//! cargo run --example quantum_statistics     # Born-rule tables, non-disturbance
//! cargo run --example two_interpretations    # one-to-one vs fine-grained reading
//! cargo run --example albert_toy_model       # measurement contextuality from mirrored responses
//! cargo run --example contextual_but_adequate # deterministic, statistically perfect, contextual
//! cargo run --example sheaf_global_section   # global sections and Farkas certificates
//! cargo run --example vector_coloring        # sum-rule colorings of projection vectors
//! ```
//!
//! The same functionality is scriptable through the thin `contextum` binary;
//! see the repository README for the file formats and exit-code contract.

pub mod catalog;
pub mod cli;
pub mod kosp;
pub mod operational;
pub mod quantum;
pub mod rational;
pub mod sheaf;

pub use rational::Rational;
