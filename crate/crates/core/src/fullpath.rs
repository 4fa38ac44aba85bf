//! Full paths: classification of candidate vectors, certificate replay and
//! the search for basic vectors.
//!
//! A full path starts at a vector in the candidate box and repeatedly pushes
//! at a vertex with `ξ_v = -m_v` (a level-preserving move). It is *bad* as
//! soon as some `ξ_v > -m_v`, and *good* once `-ξ` is back in the box. The
//! terminal vector does not depend on which eligible vertex is pushed, so the
//! engine always takes the smallest one.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::charvec::{self, CharVector, Cond13Box};
use crate::error::{Error, Result};
use crate::plumbing::{IntersectionForm, PlumbingGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Good,
    Bad,
    /// Only produced by certificate replay: the pushes ran out before the
    /// path terminated.
    Incomplete,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Good => "good",
            Verdict::Bad => "bad",
            Verdict::Incomplete => "incomplete",
        })
    }
}

/// Where a bad path overshot: after `step` pushes, `ξ_vertex > -m_vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Violation {
    pub step: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathOutcome {
    pub verdict: Verdict,
    pub start: CharVector,
    /// 1-based vertices actually pushed, in order.
    pub pushes: Vec<usize>,
    /// The last vector reached.
    pub terminal: CharVector,
    pub violation: Option<Violation>,
}

/// One step of a replayed path: the vector before the push, the vertex and
/// the level change (always zero along a legal full path).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub before: CharVector,
    pub vertex: usize,
    pub level_delta: i64,
}

impl PathOutcome {
    pub fn is_good(&self) -> bool {
        self.verdict == Verdict::Good
    }

    /// Re-applies the recorded pushes from the start vector.
    pub fn trace(&self, graph: &PlumbingGraph) -> Vec<TraceStep> {
        let mut xi = self.start.coords().to_vec();
        self.pushes
            .iter()
            .map(|&vertex| {
                let before = CharVector::from(xi.clone());
                let level_delta = charvec::push_in_place(graph, &mut xi, vertex - 1);
                TraceStep {
                    before,
                    vertex,
                    level_delta,
                }
            })
            .collect()
    }
}

/// `16 · s · max|m_i|²`. Termination is guaranteed for negative-definite
/// forms; the limit turns anything else into an error.
pub fn default_step_limit(graph: &PlumbingGraph) -> usize {
    let max_weight = graph
        .weights()
        .iter()
        .map(|m| m.unsigned_abs() as usize)
        .max()
        .unwrap_or(1)
        .max(1);
    16 * graph.len() * max_weight * max_weight
}

fn overshoot(graph: &PlumbingGraph, xi: &[i64]) -> Option<usize> {
    xi.iter()
        .zip(graph.weights())
        .position(|(&x, &m)| x > -m)
}

fn check_start(graph: &PlumbingGraph, xi: &CharVector) -> Result<()> {
    charvec::check_characteristic(graph, xi)?;
    if let Some(v) = charvec::first_cond13_failure(graph, xi.coords()) {
        return Err(Error::OutsideCandidateBox { vertex: v + 1 });
    }
    Ok(())
}

/// Follows the full path from `xi`, pushing at the smallest eligible vertex.
pub fn classify(graph: &PlumbingGraph, xi: &CharVector) -> Result<PathOutcome> {
    classify_with(graph, xi, default_step_limit(graph), |eligible| eligible[0])
}

/// Follows a full path from `xi`, letting `choose` pick the next push among
/// the eligible vertices (1-based, ascending, never empty).
pub fn classify_with<F>(
    graph: &PlumbingGraph,
    xi: &CharVector,
    step_limit: usize,
    mut choose: F,
) -> Result<PathOutcome>
where
    F: FnMut(&[usize]) -> usize,
{
    check_start(graph, xi)?;
    let weights = graph.weights();
    let mut cur = xi.coords().to_vec();
    let mut pushes = Vec::new();
    let mut eligible = Vec::with_capacity(cur.len());
    loop {
        // overshoot takes priority over eligibility
        if let Some(v) = overshoot(graph, &cur) {
            return Ok(PathOutcome {
                verdict: Verdict::Bad,
                start: xi.clone(),
                violation: Some(Violation {
                    step: pushes.len(),
                    vertex: v + 1,
                }),
                pushes,
                terminal: CharVector::from(cur),
            });
        }
        if charvec::is_terminal(graph, &cur) {
            return Ok(PathOutcome {
                verdict: Verdict::Good,
                start: xi.clone(),
                pushes,
                terminal: CharVector::from(cur),
                violation: None,
            });
        }
        if pushes.len() >= step_limit {
            return Err(Error::StepLimitExceeded { limit: step_limit });
        }
        eligible.clear();
        eligible.extend(
            cur.iter()
                .zip(weights)
                .enumerate()
                .filter(|(_, (&x, &m))| x == -m)
                .map(|(v, _)| v + 1),
        );
        // not terminal and no overshoot means some ξ_v = -m_v
        debug_assert!(!eligible.is_empty());
        let vertex = choose(&eligible);
        debug_assert!(eligible.contains(&vertex));
        charvec::push_in_place(graph, &mut cur, vertex - 1);
        pushes.push(vertex);
    }
}

/// Replays an externally supplied push sequence from `xi`.
///
/// Every push must be legal when reached (`ξ_v = -m_v`). An overshoot at any
/// point ends the replay as bad; running out of pushes before reaching a
/// terminal vector gives [`Verdict::Incomplete`].
pub fn replay_certificate(
    graph: &PlumbingGraph,
    xi: &CharVector,
    pushes: &[usize],
) -> Result<PathOutcome> {
    charvec::check_characteristic(graph, xi)?;
    let weights = graph.weights();
    let mut cur = xi.coords().to_vec();
    let mut applied = Vec::with_capacity(pushes.len());
    for (step, &vertex) in pushes.iter().enumerate() {
        graph.check_vertex(vertex)?;
        if let Some(v) = overshoot(graph, &cur) {
            return Ok(PathOutcome {
                verdict: Verdict::Bad,
                start: xi.clone(),
                pushes: applied,
                terminal: CharVector::from(cur),
                violation: Some(Violation {
                    step,
                    vertex: v + 1,
                }),
            });
        }
        if cur[vertex - 1] != -weights[vertex - 1] {
            return Err(Error::IllegalPush {
                step: step + 1,
                vertex,
            });
        }
        charvec::push_in_place(graph, &mut cur, vertex - 1);
        applied.push(vertex);
    }
    let (verdict, violation) = match overshoot(graph, &cur) {
        Some(v) => (
            Verdict::Bad,
            Some(Violation {
                step: applied.len(),
                vertex: v + 1,
            }),
        ),
        None if charvec::is_terminal(graph, &cur) => (Verdict::Good, None),
        None => (Verdict::Incomplete, None),
    };
    Ok(PathOutcome {
        verdict,
        start: xi.clone(),
        pushes: applied,
        terminal: CharVector::from(cur),
        violation,
    })
}

/// A start vector plus the pushes to replay from it.
///
/// Text form is two lines, `start: (…)` and `pushes: i1 i2 …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub start: CharVector,
    pub pushes: Vec<usize>,
}

impl Certificate {
    pub fn replay(&self, graph: &PlumbingGraph) -> Result<PathOutcome> {
        replay_certificate(graph, &self.start, &self.pushes)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start)?;
        write!(f, "pushes:")?;
        for p in &self.pushes {
            write!(f, " {p}")?;
        }
        writeln!(f)
    }
}

pub(crate) fn parse_index_list(text: &str, line: usize) -> Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("bad vertex index {t:?}"),
            })
        })
        .collect()
}

impl Certificate {
    /// Parses a certificate file whose `start:` line may be missing.
    pub fn parse_parts(s: &str) -> Result<(Option<CharVector>, Vec<usize>)> {
        let mut start = None;
        let mut pushes = None;
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            if let Some(rest) = text.strip_prefix("start:") {
                let v = rest.trim().parse::<CharVector>().map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
                start = Some(v);
            } else if let Some(rest) = text.strip_prefix("pushes:") {
                pushes = Some(parse_index_list(rest, line)?);
            } else {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `start:` or `pushes:`, found {text:?}"),
                });
            }
        }
        Ok((start, pushes.unwrap_or_default()))
    }
}

impl FromStr for Certificate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (start, pushes) = Self::parse_parts(s)?;
        let start = start.ok_or(Error::Parse {
            line: 0,
            message: "missing `start:` line".into(),
        })?;
        Ok(Self { start, pushes })
    }
}

/// A basic vector together with its renormalized length `(K·K + |G|) / 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicVector {
    pub vector: CharVector,
    pub renormalized_length: BigRational,
}

pub fn renormalized_length(form: &IntersectionForm, xi: &CharVector) -> Result<BigRational> {
    let sq = form.square(xi)?;
    Ok((sq + BigRational::from_integer(xi.len().into())) / BigRational::from_integer(4.into()))
}

/// Every candidate-box vector supporting a good full path, in enumeration
/// order. Requires a negative-definite graph with at most one bad vertex.
pub fn basic_vectors(graph: &PlumbingGraph) -> Result<Vec<BasicVector>> {
    graph.hypotheses().require_graph()?;
    let form = graph.intersection_form()?;
    basic_vectors_unchecked(graph, &form, default_step_limit(graph))
}

/// [`basic_vectors`] without the hypothesis check. Candidates are classified
/// in parallel on the current rayon pool and merged by enumeration index.
pub fn basic_vectors_unchecked(
    graph: &PlumbingGraph,
    form: &IntersectionForm,
    step_limit: usize,
) -> Result<Vec<BasicVector>> {
    let candidates = Cond13Box::new(graph);
    let total = candidates.len().ok_or_else(|| {
        Error::MalformedInput("candidate box is too large to enumerate".into())
    })?;
    let verdicts: Vec<Option<CharVector>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let xi = candidates.get(idx).expect("index below len");
            let outcome = classify_with(graph, &xi, step_limit, |e| e[0])?;
            Ok(outcome.is_good().then_some(xi))
        })
        .collect::<Result<_>>()?;
    verdicts
        .into_iter()
        .flatten()
        .map(|vector| {
            let renormalized_length = renormalized_length(form, &vector)?;
            Ok(BasicVector {
                vector,
                renormalized_length,
            })
        })
        .collect()
}
