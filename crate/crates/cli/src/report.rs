//! The run report printed by every command, as text or as JSON.
//!
//! The JSON form carries `"schema": 1` and contains nothing that depends on
//! the thread count or the clock, so identical inputs give identical bytes.

use std::fmt::Write as _;
use std::time::Duration;

use num_rational::BigRational;
use plumbhf_core::{fullpath::TraceStep, BasicVector, ExplorationParams, PathOutcome, PlumbingGraph};
use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsEcho>,
    pub result: Payload,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub weights: Vec<i64>,
    pub edges: Vec<[usize; 2]>,
    pub det: String,
    pub negative_definite: bool,
    pub leading_minors: Vec<String>,
    pub bad_vertices: Vec<usize>,
}

impl GraphSummary {
    pub fn of(graph: &PlumbingGraph) -> Self {
        let h = graph.hypotheses();
        Self {
            vertices: graph.len(),
            weights: graph.weights().to_vec(),
            edges: graph.edges().map(|(a, b)| [a, b]).collect(),
            det: h.det.to_string(),
            negative_definite: h.definiteness.is_negative_definite(),
            leading_minors: h.definiteness.minors.iter().map(|m| m.to_string()).collect(),
            bad_vertices: h.bad_vertices,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamsEcho {
    pub slack: u32,
    pub level_cap: u64,
    pub state_cap: usize,
    pub step_limit: usize,
    pub stability_check: bool,
    pub verify_edges: bool,
    pub force: bool,
}

impl ParamsEcho {
    pub fn new(params: &ExplorationParams, step_limit: usize, stability_check: bool, force: bool) -> Self {
        Self {
            slack: params.slack,
            level_cap: params.level_cap,
            state_cap: params.state_cap,
            step_limit,
            stability_check,
            verify_edges: params.verify_edges,
            force,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicEntry {
    pub vector: String,
    pub renormalized_length: String,
}

impl From<&BasicVector> for BasicEntry {
    fn from(b: &BasicVector) -> Self {
        Self {
            vector: b.vector.to_string(),
            renormalized_length: b.renormalized_length.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ranked {
    pub grading: String,
    pub rank: usize,
}

impl Ranked {
    pub fn list(pairs: &[(BigRational, usize)]) -> Vec<Self> {
        pairs
            .iter()
            .map(|(g, r)| Self {
                grading: g.to_string(),
                rank: *r,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub before: String,
    pub vertex: usize,
    pub level_delta: i64,
}

impl From<&TraceStep> for TraceEntry {
    fn from(t: &TraceStep) -> Self {
        Self {
            before: t.before.to_string(),
            vertex: t.vertex,
            level_delta: t.level_delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationEntry {
    pub step: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub kind: String,
    pub index: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationEntry {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Check {
        hypotheses_ok: bool,
        unimodular: bool,
        problems: Vec<String>,
    },
    Basics {
        candidates: u64,
        count: usize,
        basics: Vec<BasicEntry>,
    },
    Hf {
        summary: String,
        d: String,
        reduced: Vec<Ranked>,
        total: Vec<Ranked>,
        class_counts: Vec<usize>,
        stabilization_level: u64,
        stability: String,
        states_visited: usize,
        edges_verified: u64,
        basics: Vec<BasicEntry>,
    },
    Path {
        mode: String,
        verdict: String,
        start: String,
        pushes: Vec<usize>,
        terminal: String,
        violation: Option<ViolationEntry>,
        trace: Vec<TraceEntry>,
    },
    Family {
        n: usize,
        files: Vec<String>,
        good_certificates: usize,
        u_chains: usize,
        verification: Option<VerificationEntry>,
    },
}

impl Payload {
    pub fn path(mode: &str, graph: &PlumbingGraph, out: &PathOutcome) -> Self {
        Payload::Path {
            mode: mode.into(),
            verdict: out.verdict.to_string(),
            start: out.start.to_string(),
            pushes: out.pushes.clone(),
            terminal: out.terminal.to_string(),
            violation: out.violation.map(|v| ViolationEntry {
                step: v.step,
                vertex: v.vertex,
            }),
            trace: out.trace(graph).iter().map(TraceEntry::from).collect(),
        }
    }
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(g) = &self.graph {
            let _ = writeln!(
                s,
                "graph: {} vertices, det {}, {}, bad vertices {:?}",
                g.vertices,
                g.det,
                if g.negative_definite { "negative definite" } else { "not negative definite" },
                g.bad_vertices
            );
        }
        match &self.result {
            Payload::Check {
                hypotheses_ok,
                unimodular,
                problems,
            } => {
                if let Some(g) = &self.graph {
                    let _ = writeln!(s, "leading minors: {}", g.leading_minors.join(" "));
                }
                let _ = writeln!(s, "unimodular: {}", if *unimodular { "yes" } else { "no" });
                if *hypotheses_ok {
                    let _ = writeln!(s, "hypotheses: ok");
                } else {
                    for p in problems {
                        let _ = writeln!(s, "hypotheses: {p}");
                    }
                }
            }
            Payload::Basics {
                candidates,
                count,
                basics,
            } => {
                let _ = writeln!(s, "{count} basic vectors of {candidates} candidates");
                for b in basics {
                    let _ = writeln!(s, "  {}  length {}", b.vector, b.renormalized_length);
                }
            }
            Payload::Hf {
                summary,
                class_counts,
                stabilization_level,
                stability,
                states_visited,
                basics,
                ..
            } => {
                let _ = writeln!(s, "{summary}");
                let _ = writeln!(s, "basic vectors: {}", basics.len());
                let _ = writeln!(
                    s,
                    "class counts: {class_counts:?}, stable from level {stabilization_level}"
                );
                let _ = writeln!(s, "states visited: {states_visited}, stability {stability}");
            }
            Payload::Path {
                mode,
                verdict,
                start,
                pushes,
                terminal,
                violation,
                trace,
            } => {
                let _ = writeln!(s, "{mode} from {start}");
                for (k, t) in trace.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "  {:>3}  {}  push {}  level {:+}",
                        k + 1,
                        t.before,
                        t.vertex,
                        t.level_delta
                    );
                }
                let _ = writeln!(s, "  end  {terminal}");
                let _ = write!(s, "verdict: {verdict} after {} pushes", pushes.len());
                if let Some(v) = violation {
                    let _ = write!(s, " (overshoot at vertex {} after step {})", v.vertex, v.step);
                }
                s.push('\n');
            }
            Payload::Family {
                n,
                files,
                good_certificates,
                u_chains,
                verification,
            } => {
                let _ = writeln!(
                    s,
                    "family n = {n}: {good_certificates} good certificates, {u_chains} U-chains"
                );
                for f in files {
                    let _ = writeln!(s, "wrote {f}");
                }
                if let Some(v) = verification {
                    for c in v.checks.iter().filter(|c| !c.passed) {
                        let _ = writeln!(s, "FAIL {} i={}: {}", c.kind, c.index, c.detail);
                    }
                    let _ = writeln!(s, "verify: {} passed, {} failed", v.passed, v.failed);
                }
            }
        }
        if let Some(p) = &self.params {
            if matches!(self.result, Payload::Hf { .. }) {
                let _ = writeln!(
                    s,
                    "params: slack {}, level cap {}, state cap {}",
                    p.slack, p.level_cap, p.state_cap
                );
            }
        }
        let _ = writeln!(s, "elapsed: {:.3}s", self.elapsed.as_secs_f64());
        s
    }
}
