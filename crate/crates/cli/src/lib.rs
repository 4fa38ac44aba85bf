//! Command-line front end for `plumbhf`.
//!
//! [`run`] executes one parsed command and returns the report together with
//! the exit status; the binary only prints.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgAction, Parser, Subcommand};
use plumbhf_core::families::{self, BundleKind, CertificateBundle};
use plumbhf_core::{
    fullpath, hf_decomposition_with, Certificate, CharVector, Cond13Box, ExplorationParams,
    HfOptions, PlumbingGraph,
};
use thiserror::Error;

pub mod graphfile;
pub mod report;

pub use graphfile::{parse_graph, GraphJson};
pub use report::{GraphSummary, ParamsEcho, Payload, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] plumbhf_core::Error),
    #[error("{}: {source}", .path.display())]
    InFile {
        path: PathBuf,
        source: plumbhf_core::Error,
    },
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Precondition(String),
    #[error("cannot start thread pool: {0}")]
    Pool(String),
}

impl CliError {
    fn core(&self) -> Option<&plumbhf_core::Error> {
        match self {
            CliError::Core(e) | CliError::InFile { source: e, .. } => Some(e),
            _ => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_PARSE,
            CliError::Pool(_) => EXIT_RESOURCE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            _ => match self.core() {
                Some(e) if e.is_parse() => EXIT_PARSE,
                Some(e) if e.is_resource_cap() => EXIT_RESOURCE,
                _ => EXIT_PRECONDITION,
            },
        }
    }

    /// A remediation hint for resource-cap failures.
    pub fn hint(&self) -> Option<&'static str> {
        use plumbhf_core::Error as E;
        match self.core()? {
            E::NotStabilized { .. } => Some("raise --max-level (PLUMBHF_MAX_LEVEL)"),
            E::StateCapExceeded { .. } => {
                Some("raise --state-cap (PLUMBHF_STATE_CAP) or lower --slack (PLUMBHF_SLACK)")
            }
            E::Unstable(_) => Some("raise --slack and --max-level until the result settles"),
            E::StepLimitExceeded { .. } => {
                Some("the graph may not be negative definite; check it or raise --step-limit")
            }
            E::NotNegativeDefinite { .. } | E::TooManyBadVertices { .. } => {
                Some("pass --force to run anyway")
            }
            _ => None,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "plumbhf", version, about = "HF+ of negative-definite plumbed homology spheres")]
pub struct Cli {
    /// Print the machine-readable report.
    #[arg(long, global = true)]
    pub json: bool,

    /// Run even if the graph hypotheses fail.
    #[arg(long, global = true)]
    pub force: bool,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "PLUMBHF_JOBS", default_value_t = 0)]
    pub jobs: usize,

    #[arg(long, global = true, env = "PLUMBHF_SLACK", default_value_t = ExplorationParams::default().slack)]
    pub slack: u32,

    /// Highest U-level explored.
    #[arg(long, global = true, env = "PLUMBHF_MAX_LEVEL", default_value_t = ExplorationParams::default().level_cap)]
    pub max_level: u64,

    #[arg(long, global = true, env = "PLUMBHF_STATE_CAP", default_value_t = ExplorationParams::default().state_cap)]
    pub state_cap: usize,

    /// Pushes allowed per full path (default 16·s·max|m|²).
    #[arg(long, global = true, env = "PLUMBHF_STEP_LIMIT")]
    pub step_limit: Option<usize>,

    /// Recompute with an enlarged box and require the same answer.
    #[arg(
        long,
        global = true,
        env = "PLUMBHF_STABILITY_CHECK",
        default_value_t = true,
        action = ArgAction::Set,
        value_name = "BOOL"
    )]
    pub stability_check: bool,

    /// Check grading constancy on every explored edge.
    #[arg(long, global = true, env = "PLUMBHF_VERIFY_EDGES")]
    pub verify_edges: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Report definiteness, determinant and bad vertices.
    Check { file: PathBuf },
    /// List the basic vectors.
    Basics { file: PathBuf },
    /// Compute HF+.
    Hf { file: PathBuf },
    /// Follow or replay a full path.
    Path {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Write the Σ(2,3,6n+1) graph and its certificates.
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub json: bool,
    pub force: bool,
    pub jobs: usize,
    pub params: ExplorationParams,
    pub stability_check: bool,
    pub step_limit: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            json: false,
            force: false,
            jobs: 0,
            params: ExplorationParams::default(),
            stability_check: true,
            step_limit: None,
        }
    }
}

impl Cli {
    pub fn settings(&self) -> Settings {
        Settings {
            json: self.json,
            force: self.force,
            jobs: self.jobs,
            params: ExplorationParams {
                slack: self.slack,
                level_cap: self.max_level,
                state_cap: self.state_cap,
                verify_edges: self.verify_edges,
            },
            stability_check: self.stability_check,
            step_limit: self.step_limit,
        }
    }
}

/// A finished command: the report and the exit status it implies.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub status: i32,
}

impl Outcome {
    pub fn render(&self, json: bool) -> String {
        if json {
            self.report.to_json()
        } else {
            self.report.to_text()
        }
    }
}

/// Runs `command` on a pool of `settings.jobs` threads.
pub fn run(settings: &Settings, command: &Command) -> CliResult<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let started = Instant::now();
    let mut outcome = pool.install(|| dispatch(settings, command))?;
    outcome.report.elapsed = started.elapsed();
    Ok(outcome)
}

fn dispatch(settings: &Settings, command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Check { file } => cmd_check(settings, &load_graph(file)?),
        Command::Basics { file } => cmd_basics(settings, &load_graph(file)?),
        Command::Hf { file } => cmd_hf(settings, &load_graph(file)?),
        Command::Path {
            file,
            vector,
            certificate,
        } => {
            let graph = load_graph(file)?;
            let vector = vector
                .as_deref()
                .map(|v| v.parse::<CharVector>().map_err(CliError::from))
                .transpose()?;
            let cert = match certificate {
                Some(p) => Some(
                    Certificate::parse_parts(&read(p)?)
                        .map_err(|source| CliError::InFile { path: p.clone(), source })?,
                ),
                None => None,
            };
            cmd_path(settings, &graph, vector, cert)
        }
        Command::Family { n, out, verify } => cmd_family(settings, *n, out, *verify),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a graph file in either the text or the JSON format.
pub fn load_graph(path: &Path) -> CliResult<PlumbingGraph> {
    parse_graph(&read(path)?).map_err(|source| CliError::InFile {
        path: path.to_path_buf(),
        source,
    })
}

fn report(command: &str, graph: Option<&PlumbingGraph>, params: Option<ParamsEcho>, result: Payload) -> RunReport {
    RunReport {
        schema: report::SCHEMA,
        command: command.into(),
        graph: graph.map(GraphSummary::of),
        params,
        result,
        elapsed: Default::default(),
    }
}

fn params_echo(settings: &Settings, graph: &PlumbingGraph) -> ParamsEcho {
    ParamsEcho::new(
        &settings.params,
        step_limit(settings, graph),
        settings.stability_check,
        settings.force,
    )
}

fn step_limit(settings: &Settings, graph: &PlumbingGraph) -> usize {
    settings
        .step_limit
        .unwrap_or_else(|| fullpath::default_step_limit(graph))
}

fn require_graph(settings: &Settings, graph: &PlumbingGraph) -> CliResult<()> {
    if !settings.force {
        graph.hypotheses().require_graph()?;
    }
    Ok(())
}

pub fn cmd_check(settings: &Settings, graph: &PlumbingGraph) -> CliResult<Outcome> {
    let h = graph.hypotheses();
    let mut problems = Vec::new();
    if let Some(minor) = h.definiteness.first_violation {
        problems.push(plumbhf_core::Error::NotNegativeDefinite { minor }.to_string());
    }
    if h.bad_vertices.len() > 1 {
        let vertices = h.bad_vertices.clone();
        problems.push(plumbhf_core::Error::TooManyBadVertices { vertices }.to_string());
    }
    let unimodular = graph
        .intersection_form()
        .map(|f| f.is_unimodular())
        .unwrap_or(false);
    let ok = problems.is_empty();
    let status = if ok || settings.force { EXIT_OK } else { EXIT_PRECONDITION };
    Ok(Outcome {
        report: report(
            "check",
            Some(graph),
            None,
            Payload::Check {
                hypotheses_ok: ok,
                unimodular,
                problems,
            },
        ),
        status,
    })
}

pub fn cmd_basics(settings: &Settings, graph: &PlumbingGraph) -> CliResult<Outcome> {
    require_graph(settings, graph)?;
    let form = graph.intersection_form()?;
    let candidates = Cond13Box::new(graph).len().unwrap_or(u64::MAX);
    let basics = fullpath::basic_vectors_unchecked(graph, &form, step_limit(settings, graph))?;
    Ok(Outcome {
        report: report(
            "basics",
            Some(graph),
            Some(params_echo(settings, graph)),
            Payload::Basics {
                candidates,
                count: basics.len(),
                basics: basics.iter().map(Into::into).collect(),
            },
        ),
        status: EXIT_OK,
    })
}

pub fn cmd_hf(settings: &Settings, graph: &PlumbingGraph) -> CliResult<Outcome> {
    let options = HfOptions {
        params: settings.params,
        stability_check: settings.stability_check,
        force: settings.force,
        step_limit: settings.step_limit,
    };
    let hf = hf_decomposition_with(graph, &options)?;
    Ok(Outcome {
        report: report(
            "hf",
            Some(graph),
            Some(params_echo(settings, graph)),
            Payload::Hf {
                summary: hf.to_string(),
                d: hf.d.to_string(),
                reduced: report::Ranked::list(&hf.reduced),
                total: report::Ranked::list(&hf.total),
                class_counts: hf.class_counts.clone(),
                stabilization_level: hf.stabilization_level,
                stability: hf.stability.to_string(),
                states_visited: hf.states_visited,
                edges_verified: hf.edges_verified,
                basics: hf.basics.iter().map(Into::into).collect(),
            },
        ),
        status: EXIT_OK,
    })
}

/// Follows the full path from `vector`, or replays a certificate.
///
/// A certificate's own `start:` line is used when `vector` is absent; if
/// both are given they must agree.
pub fn cmd_path(
    settings: &Settings,
    graph: &PlumbingGraph,
    vector: Option<CharVector>,
    certificate: Option<(Option<CharVector>, Vec<usize>)>,
) -> CliResult<Outcome> {
    let (mode, outcome) = match certificate {
        Some((cert_start, pushes)) => {
            let start = match (vector, cert_start) {
                (Some(v), Some(c)) if v != c => {
                    return Err(CliError::Precondition(format!(
                        "--vector {v} differs from the certificate start {c}"
                    )))
                }
                (Some(v), _) | (None, Some(v)) => v,
                (None, None) => {
                    return Err(CliError::Precondition(
                        "no start vector: pass --vector or add a `start:` line".into(),
                    ))
                }
            };
            ("replay", fullpath::replay_certificate(graph, &start, &pushes)?)
        }
        None => {
            let start = vector
                .ok_or_else(|| CliError::Precondition("--vector is required without --certificate".into()))?;
            require_graph(settings, graph)?;
            let limit = step_limit(settings, graph);
            ("full path", fullpath::classify_with(graph, &start, limit, |e| e[0])?)
        }
    };
    Ok(Outcome {
        report: report(
            "path",
            Some(graph),
            Some(params_echo(settings, graph)),
            Payload::path(mode, graph, &outcome),
        ),
        status: EXIT_OK,
    })
}

/// File names written by [`cmd_family`] for member `n`.
pub fn family_file_names(n: usize, json: bool) -> Vec<String> {
    let stem = format!("sigma_2_3_n{n}");
    let mut names = vec![format!("{stem}.graph"), format!("{stem}.certs")];
    if json {
        names.push(format!("{stem}.json"));
    }
    names
}

pub fn cmd_family(settings: &Settings, n: usize, out: &Path, verify: bool) -> CliResult<Outcome> {
    let family = families::sigma_2_3(n)?;
    let bundle = CertificateBundle::for_family(n)?;
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let names = family_file_names(n, settings.json);
    write(&out.join(&names[0]), &family.graph.to_string())?;
    write(&out.join(&names[1]), &bundle.to_string())?;
    if settings.json {
        write(&out.join(&names[2]), &graphfile::to_json(&family.graph))?;
    }

    let verification = verify.then(|| {
        let checks: Vec<_> = bundle
            .entries
            .iter()
            .map(|e| families::check_entry(&family.graph, e))
            .collect();
        let passed = checks.iter().filter(|c| c.passed).count();
        report::VerificationEntry {
            passed,
            failed: checks.len() - passed,
            checks: checks
                .into_iter()
                .map(|c| report::CheckEntry {
                    kind: kind_name(c.kind).into(),
                    index: c.index,
                    passed: c.passed,
                    detail: c.detail,
                })
                .collect(),
        }
    });
    let status = match &verification {
        Some(v) if v.failed > 0 => EXIT_PRECONDITION,
        _ => EXIT_OK,
    };
    let count = |k: BundleKind| bundle.entries.iter().filter(|e| e.kind == k).count();
    Ok(Outcome {
        report: report(
            "family",
            Some(&family.graph),
            None,
            Payload::Family {
                n,
                files: names,
                good_certificates: count(BundleKind::Good),
                u_chains: count(BundleKind::UChain),
                verification,
            },
        ),
        status,
    })
}

fn kind_name(kind: BundleKind) -> &'static str {
    match kind {
        BundleKind::Good => "good",
        BundleKind::UChain => "uchain",
    }
}
