//! Command-line front end.
//!
//! One command per invocation, a stable exit-code contract across all of
//! them (0 = holds/success, 1 = violation/infeasible, 2 = input error,
//! 3 = capacity exceeded), a text report on stdout and optionally the same
//! report as JSON via `--json`. The only environment variable read is
//! `CONTEXTUM_CAP`, which overrides the enumeration caps.

pub mod files;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog;
use crate::kosp::{
    color_vectors, enumerate_value_assignments, interpret_custom, interpret_fine_grained,
    interpret_one_to_one, no_go_report, Interpretation, KsScenario, Treatment,
    DEFAULT_ENUMERATION_CAP,
};
use crate::operational::{
    check_measurement_nc, check_nondisturbance, check_reproduction, check_simultaneous_nc,
    find_operational_equivalences, reconstruct_theory, validate_model, validate_theory,
    EquivalenceClaim, OntologicalModel, OperationalTheory,
};
use crate::sheaf::{
    check_consistency, find_global_section, to_empirical, validate_empirical, verify_certificate,
    EmpiricalModel, SectionOutcome, DEFAULT_SECTION_CAP,
};

use files::{read_file, write_file, DomainObject, ScenarioFile};
use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser)]
#[command(
    name = "contextum",
    version,
    about = "Exact noncontextuality checks for finite operational theories"
)]
struct Cli {
    /// Write the machine-readable report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and check the invariants of its payload.
    Validate { path: PathBuf },
    /// Run a property check on a theory or model file.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        path: PathBuf,
        /// Theory file to reproduce (required for `reproduce`).
        #[arg(long)]
        theory: Option<PathBuf>,
        /// For `mnc`: also check discovered equivalences of the model's
        /// reconstructed theory.
        #[arg(long)]
        discover: bool,
        /// Largest outcome count considered when discovering equivalences.
        #[arg(long, default_value_t = 6)]
        max_outcomes: usize,
    },
    /// Kochen-Specker scenarios: search assignments, interpret, report no-go.
    Ks {
        #[arg(value_enum)]
        action: KsAction,
        path: PathBuf,
        /// Interpretation mode for `interpret`.
        #[arg(long, value_enum, default_value_t = ModeArg::OneToOne)]
        mode: ModeArg,
        /// Representation file whose states become extra preparations.
        #[arg(long)]
        states: Option<PathBuf>,
        /// Output path for generated theory files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Custom mode: comma-separated indices of fine-grained contexts.
        #[arg(long)]
        fine_contexts: Option<String>,
        /// Custom mode: comma-separated indices of one-to-one contexts.
        #[arg(long)]
        one_to_one_contexts: Option<String>,
    },
    /// Empirical models: consistency and global sections.
    Sheaf {
        #[arg(value_enum)]
        action: SheafAction,
        path: PathBuf,
        /// With a theory file: the preparation to restrict to.
        #[arg(long)]
        preparation: Option<String>,
    },
    /// Built-in scenarios: list them or export one to a file.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Nondisturb,
    Snc,
    Mnc,
    Reproduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum KsAction {
    Search,
    Interpret,
    Nogo,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    OneToOne,
    FineGrained,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum SheafAction {
    Check,
    Section,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print every catalog key with its kind and description.
    List,
    /// Write a catalog entry to a canonical file.
    Export { key: String, path: PathBuf },
}

/// Runs the CLI on the given arguments and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are not input errors.
            let code = if err.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    let started = Instant::now();
    let mut report = match &cli.command {
        Command::Validate { .. } => Report::new("validate"),
        Command::Check { which, .. } => Report::new(format!("check {}", check_name(*which))),
        Command::Ks { action, .. } => Report::new(format!("ks {}", ks_name(*action))),
        Command::Sheaf { action, .. } => Report::new(format!("sheaf {}", sheaf_name(*action))),
        Command::Catalog { .. } => Report::new("catalog"),
    };
    dispatch(&cli.command, &mut report);
    report.wall_time_ms = started.elapsed().as_millis();
    print!("{}", report.render_text());
    if let Some(path) = &cli.json {
        if let Err(err) = report.write_json(path) {
            eprintln!("cannot write report to {}: {err}", path.display());
            return EXIT_INPUT_ERROR;
        }
    }
    report.exit_code
}

fn check_name(which: CheckKind) -> &'static str {
    match which {
        CheckKind::Nondisturb => "nondisturb",
        CheckKind::Snc => "snc",
        CheckKind::Mnc => "mnc",
        CheckKind::Reproduce => "reproduce",
    }
}

fn ks_name(action: KsAction) -> &'static str {
    match action {
        KsAction::Search => "search",
        KsAction::Interpret => "interpret",
        KsAction::Nogo => "nogo",
    }
}

fn sheaf_name(action: SheafAction) -> &'static str {
    match action {
        SheafAction::Check => "check",
        SheafAction::Section => "section",
    }
}

fn enumeration_cap() -> u64 {
    cap_from_env(DEFAULT_ENUMERATION_CAP)
}

fn section_cap() -> u64 {
    cap_from_env(DEFAULT_SECTION_CAP)
}

fn cap_from_env(default: u64) -> u64 {
    std::env::var("CONTEXTUM_CAP")
        .ok()
        .and_then(|value| value.parse().ok())
        .unwrap_or(default)
}

fn dispatch(command: &Command, report: &mut Report) {
    match command {
        Command::Validate { path } => cmd_validate(path, report),
        Command::Check {
            which,
            path,
            theory,
            discover,
            max_outcomes,
        } => cmd_check(*which, path, theory.as_deref(), *discover, *max_outcomes, report),
        Command::Ks {
            action,
            path,
            mode,
            states,
            out,
            fine_contexts,
            one_to_one_contexts,
        } => cmd_ks(
            *action,
            path,
            *mode,
            states.as_deref(),
            out.as_deref(),
            fine_contexts.as_deref(),
            one_to_one_contexts.as_deref(),
            report,
        ),
        Command::Sheaf {
            action,
            path,
            preparation,
        } => cmd_sheaf(*action, path, preparation.as_deref(), report),
        Command::Catalog { action } => cmd_catalog(action, report),
    }
}

fn load(path: &Path, report: &mut Report) -> Option<DomainObject> {
    report.add_input(path);
    match read_file(path) {
        Ok(object) => Some(object),
        Err(err) => {
            report.fail(EXIT_INPUT_ERROR, "error", err.to_string());
            None
        }
    }
}

fn cmd_validate(path: &Path, report: &mut Report) {
    let Some(object) = load(path, report) else {
        return;
    };
    report.counts.insert("kind".to_string(), 0);
    report.counts.remove("kind");
    report.message = Some(format!("kind: {}", object.kind()));
    let verdict = match &object {
        DomainObject::Theory { theory, .. } => validate_theory(theory),
        DomainObject::Model { model, .. } => validate_model(model),
        DomainObject::Ks {
            observables,
            contexts,
        } => match KsScenario::new(observables.clone(), contexts.clone()) {
            Ok(_) => crate::operational::Verdict::pass(),
            Err(crate::kosp::Error::Invalid { verdict, .. }) => verdict,
            Err(err) => {
                report.fail(EXIT_INPUT_ERROR, "error", err.to_string());
                return;
            }
        },
        DomainObject::Vectors(vs) => crate::kosp::validate_vectors(vs),
        DomainObject::Empirical(em) => validate_empirical(em),
        DomainObject::Representation(rep) => rep.validate(),
    };
    report.set_verdict(&verdict);
}

fn require_theory(object: DomainObject, report: &mut Report) -> Option<(OperationalTheory, Vec<EquivalenceClaim>)> {
    match object {
        DomainObject::Theory { theory, claims } => Some((theory, claims)),
        other => {
            report.fail(
                EXIT_INPUT_ERROR,
                "error",
                format!("expected a theory file, got kind `{}`", other.kind()),
            );
            None
        }
    }
}

fn require_model(object: DomainObject, report: &mut Report) -> Option<(OntologicalModel, Vec<EquivalenceClaim>)> {
    match object {
        DomainObject::Model { model, claims } => Some((model, claims)),
        other => {
            report.fail(
                EXIT_INPUT_ERROR,
                "error",
                format!("expected a model file, got kind `{}`", other.kind()),
            );
            None
        }
    }
}

fn validated_model(model: OntologicalModel, report: &mut Report) -> Option<OntologicalModel> {
    let verdict = validate_model(&model);
    if !verdict.holds {
        report.set_verdict(&verdict);
        report.fail(EXIT_INPUT_ERROR, "error", "model fails validation");
        return None;
    }
    Some(model)
}

fn cmd_check(
    which: CheckKind,
    path: &Path,
    theory_path: Option<&Path>,
    discover: bool,
    max_outcomes: usize,
    report: &mut Report,
) {
    let Some(object) = load(path, report) else {
        return;
    };
    match which {
        CheckKind::Nondisturb => {
            let Some((theory, _)) = require_theory(object, report) else {
                return;
            };
            let validation = validate_theory(&theory);
            if !validation.holds {
                report.set_verdict(&validation);
                report.fail(EXIT_INPUT_ERROR, "error", "theory fails validation");
                return;
            }
            report.set_verdict(&check_nondisturbance(&theory));
        }
        CheckKind::Snc => {
            let Some((model, _)) = require_model(object, report) else {
                return;
            };
            let Some(model) = validated_model(model, report) else {
                return;
            };
            report.set_verdict(&check_simultaneous_nc(&model));
        }
        CheckKind::Mnc => {
            let Some((model, mut claims)) = require_model(object, report) else {
                return;
            };
            let Some(model) = validated_model(model, report) else {
                return;
            };
            if discover {
                match reconstruct_theory(&model, &model.skeleton) {
                    Ok(reconstructed) => {
                        claims.extend(find_operational_equivalences(&reconstructed, max_outcomes));
                        claims.sort();
                        claims.dedup_by(|a, b| {
                            a.first == b.first && a.second == b.second && a.bijection == b.bijection
                        });
                    }
                    Err(err) => {
                        report.fail(EXIT_INPUT_ERROR, "error", err.to_string());
                        return;
                    }
                }
            }
            report
                .counts
                .insert("claims".to_string(), claims.len() as u64);
            match check_measurement_nc(&model, &claims) {
                Ok(verdict) => report.set_verdict(&verdict),
                Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
            }
        }
        CheckKind::Reproduce => {
            let Some((model, _)) = require_model(object, report) else {
                return;
            };
            let Some(theory_path) = theory_path else {
                report.fail(
                    EXIT_INPUT_ERROR,
                    "error",
                    "check reproduce needs --theory <file>",
                );
                return;
            };
            let Some(theory_object) = load(theory_path, report) else {
                return;
            };
            let Some((theory, _)) = require_theory(theory_object, report) else {
                return;
            };
            match check_reproduction(&model, &theory) {
                Ok(verdict) => report.set_verdict(&verdict),
                Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
            }
        }
    }
}

fn scenario_from_object(object: DomainObject, report: &mut Report) -> Option<KsScenario> {
    match object {
        DomainObject::Ks {
            observables,
            contexts,
        } => match KsScenario::new(observables, contexts) {
            Ok(scenario) => Some(scenario),
            Err(err) => {
                report.fail(EXIT_INPUT_ERROR, "error", err.to_string());
                None
            }
        },
        other => {
            report.fail(
                EXIT_INPUT_ERROR,
                "error",
                format!("expected a ks_scenario file, got kind `{}`", other.kind()),
            );
            None
        }
    }
}

fn parse_indices(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad context index `{part}`"))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_ks(
    action: KsAction,
    path: &Path,
    mode: ModeArg,
    states_path: Option<&Path>,
    out: Option<&Path>,
    fine_contexts: Option<&str>,
    one_to_one_contexts: Option<&str>,
    report: &mut Report,
) {
    let Some(object) = load(path, report) else {
        return;
    };
    match action {
        KsAction::Search => match object {
            DomainObject::Ks { .. } => {
                let Some(scenario) = scenario_from_object(object, report) else {
                    return;
                };
                let candidates: u128 = scenario
                    .observables()
                    .iter()
                    .map(|o| o.eigenvalues.len() as u128)
                    .product();
                report
                    .counts
                    .insert("candidates".to_string(), candidates.min(u64::MAX as u128) as u64);
                match enumerate_value_assignments(&scenario, enumeration_cap()) {
                    Ok(assignments) => {
                        report
                            .counts
                            .insert("assignments".to_string(), assignments.len() as u64);
                        report.listing = assignments
                            .iter()
                            .take(report::LISTING_CAP)
                            .map(|a| serde_json::to_value(a).expect("serializable assignment"))
                            .collect();
                        report.outcome = "ok".to_string();
                    }
                    Err(crate::kosp::Error::Capacity(n, cap)) => {
                        report.fail(
                            EXIT_CAPACITY,
                            "capacity",
                            format!("{n} candidates exceed the cap of {cap}"),
                        );
                    }
                    Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
                }
            }
            DomainObject::Vectors(vs) => {
                match color_vectors(&vs, enumeration_cap()) {
                    Ok(colorings) => {
                        report
                            .counts
                            .insert("candidates".to_string(), 1u64 << vs.vectors.len().min(63));
                        report
                            .counts
                            .insert("colorings".to_string(), colorings.len() as u64);
                        report.listing = colorings
                            .iter()
                            .take(report::LISTING_CAP)
                            .map(|c| serde_json::to_value(c).expect("serializable coloring"))
                            .collect();
                        report.outcome = "ok".to_string();
                    }
                    Err(crate::kosp::Error::Capacity(n, cap)) => {
                        report.fail(
                            EXIT_CAPACITY,
                            "capacity",
                            format!("{n} candidates exceed the cap of {cap}"),
                        );
                    }
                    Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
                }
            }
            other => report.fail(
                EXIT_INPUT_ERROR,
                "error",
                format!(
                    "expected a ks_scenario or vector_scenario file, got kind `{}`",
                    other.kind()
                ),
            ),
        },
        KsAction::Nogo => {
            let Some(scenario) = scenario_from_object(object, report) else {
                return;
            };
            match no_go_report(&scenario, enumeration_cap()) {
                Ok(no_go) => {
                    report
                        .counts
                        .insert("assignments".to_string(), no_go.assignment_count as u64);
                    report.no_go = Some(no_go);
                    report.outcome = "ok".to_string();
                }
                Err(crate::kosp::Error::Capacity(n, cap)) => {
                    report.fail(
                        EXIT_CAPACITY,
                        "capacity",
                        format!("{n} candidates exceed the cap of {cap}"),
                    );
                }
                Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
            }
        }
        KsAction::Interpret => {
            let Some(scenario) = scenario_from_object(object, report) else {
                return;
            };
            let mut states = BTreeMap::new();
            if let Some(states_path) = states_path {
                let Some(states_object) = load(states_path, report) else {
                    return;
                };
                match states_object {
                    DomainObject::Representation(rep) => states = rep.states,
                    other => {
                        report.fail(
                            EXIT_INPUT_ERROR,
                            "error",
                            format!(
                                "expected a representation file for --states, got kind `{}`",
                                other.kind()
                            ),
                        );
                        return;
                    }
                }
            }
            let Some(out) = out else {
                report.fail(EXIT_INPUT_ERROR, "error", "ks interpret needs --out <file>");
                return;
            };
            let result = match mode {
                ModeArg::OneToOne => interpret_one_to_one(&scenario, &states)
                    .map(|theory| (theory, Vec::new())),
                ModeArg::FineGrained => interpret_fine_grained(&scenario, &states),
                ModeArg::Custom => {
                    let mut treatments = BTreeMap::new();
                    if let Some(text) = fine_contexts {
                        match parse_indices(text) {
                            Ok(indices) => {
                                for idx in indices {
                                    treatments.insert(idx, Treatment::FineGrained);
                                }
                            }
                            Err(message) => {
                                report.fail(EXIT_INPUT_ERROR, "error", message);
                                return;
                            }
                        }
                    }
                    if let Some(text) = one_to_one_contexts {
                        match parse_indices(text) {
                            Ok(indices) => {
                                for idx in indices {
                                    treatments.insert(idx, Treatment::OneToOne);
                                }
                            }
                            Err(message) => {
                                report.fail(EXIT_INPUT_ERROR, "error", message);
                                return;
                            }
                        }
                    }
                    interpret_custom(&scenario, &Interpretation { treatments }, &states)
                }
            };
            match result {
                Ok((theory, claims)) => {
                    report.counts.insert(
                        "measurements".to_string(),
                        theory.skeleton.measurements.len() as u64,
                    );
                    report
                        .counts
                        .insert("claims".to_string(), claims.len() as u64);
                    let dto = files::theory_to_dto(&theory, &claims);
                    match write_file(out, &dto) {
                        Ok(()) => {
                            report.written.push(out.display().to_string());
                            report.outcome = "ok".to_string();
                        }
                        Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
                    }
                }
                Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
            }
        }
    }
}

fn empirical_from_object(
    object: DomainObject,
    preparation: Option<&str>,
    report: &mut Report,
) -> Option<EmpiricalModel> {
    match object {
        DomainObject::Empirical(em) => {
            let structural = validate_empirical(&em);
            if !structural.holds {
                report.set_verdict(&structural);
                report.fail(EXIT_INPUT_ERROR, "error", "empirical model fails validation");
                return None;
            }
            Some(em)
        }
        DomainObject::Theory { theory, .. } => {
            let Some(preparation) = preparation else {
                report.fail(
                    EXIT_INPUT_ERROR,
                    "error",
                    "a theory file needs --preparation <id>",
                );
                return None;
            };
            match to_empirical(&theory, preparation) {
                Ok(em) => Some(em),
                Err(crate::sheaf::Error::Disturbing(verdict)) => {
                    report.set_verdict(&verdict);
                    report.fail(
                        EXIT_INPUT_ERROR,
                        "error",
                        "theory is disturbing; no well-defined empirical model",
                    );
                    None
                }
                Err(err) => {
                    report.fail(EXIT_INPUT_ERROR, "error", err.to_string());
                    None
                }
            }
        }
        other => {
            report.fail(
                EXIT_INPUT_ERROR,
                "error",
                format!(
                    "expected an empirical or theory file, got kind `{}`",
                    other.kind()
                ),
            );
            None
        }
    }
}

fn cmd_sheaf(action: SheafAction, path: &Path, preparation: Option<&str>, report: &mut Report) {
    let Some(object) = load(path, report) else {
        return;
    };
    let Some(em) = empirical_from_object(object, preparation, report) else {
        return;
    };
    match action {
        SheafAction::Check => {
            report.set_verdict(&check_consistency(&em));
        }
        SheafAction::Section => match find_global_section(&em, section_cap()) {
            Ok(SectionOutcome::Section(section)) => {
                report
                    .counts
                    .insert("atoms".to_string(), section.weights.len() as u64);
                report.section = Some(section);
                report.outcome = "section-found".to_string();
                report.exit_code = EXIT_OK;
            }
            Ok(SectionOutcome::Infeasible(certificate)) => {
                let verified = verify_certificate(&em, &certificate, section_cap())
                    .unwrap_or(false);
                report.certificate = Some(certificate);
                report.certificate_verified = Some(verified);
                report.outcome = "infeasible".to_string();
                report.exit_code = EXIT_VIOLATION;
            }
            Err(crate::sheaf::Error::Inconsistent(verdict)) => {
                report.set_verdict(&verdict);
                report.fail(
                    EXIT_INPUT_ERROR,
                    "error",
                    "empirical model is inconsistent on overlaps",
                );
            }
            Err(crate::sheaf::Error::Capacity(n, cap)) => {
                report.fail(
                    EXIT_CAPACITY,
                    "capacity",
                    format!("{n} global assignments exceed the cap of {cap}"),
                );
            }
            Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
        },
    }
}

fn cmd_catalog(action: &CatalogAction, report: &mut Report) {
    match action {
        CatalogAction::List => {
            let mut message = String::new();
            for entry in catalog::entries() {
                message.push_str(&format!(
                    "{:<26} {:<16} {}\n",
                    entry.key, entry.kind, entry.notes
                ));
            }
            report
                .counts
                .insert("entries".to_string(), catalog::entries().len() as u64);
            report.message = Some(message);
            report.outcome = "ok".to_string();
        }
        CatalogAction::Export { key, path } => match catalog::build(key) {
            Some(payload) => {
                let dto: ScenarioFile = files::payload_to_dto(&payload);
                match write_file(path, &dto) {
                    Ok(()) => {
                        report.written.push(path.display().to_string());
                        report.outcome = "ok".to_string();
                    }
                    Err(err) => report.fail(EXIT_INPUT_ERROR, "error", err.to_string()),
                }
            }
            None => report.fail(EXIT_INPUT_ERROR, "error", format!("unknown catalog key `{key}`")),
        },
    }
}
