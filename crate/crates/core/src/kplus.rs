//! The equivalence `(u, K) ~ (u + n, K + 2PD[v])` on levelled characteristic
//! vectors, decided by bounded breadth-first exploration, and the graded
//! decomposition of `HF+` assembled from per-level class counts.
//!
//! Exploration only ever *finds* equivalences, so a box that is too small can
//! over-count classes but never merge distinct ones. The stability check
//! reruns everything in a larger box to catch the former.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use crate::charvec::{self, CharVector};
use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::fullpath::{self, BasicVector};
use crate::plumbing::{IntersectionForm, PlumbingGraph};

/// A representative `(u, K)` of `U^u ⊗ K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KState {
    pub level: u64,
    pub vector: CharVector,
}

impl KState {
    pub fn new(level: u64, vector: CharVector) -> Self {
        Self { level, vector }
    }
}

impl fmt::Display for KState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U^{} ⊗ {}", self.level, self.vector)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorationParams {
    /// Extra half-width of the box beyond the candidate box, in steps of 2:
    /// coordinates stay within `[m_i - 2·slack, -m_i + 2·slack]`.
    pub slack: u32,
    pub level_cap: u64,
    pub state_cap: usize,
    /// Recompute the grading of both endpoints of every explored edge.
    pub verify_edges: bool,
}

impl Default for ExplorationParams {
    fn default() -> Self {
        Self {
            slack: 4,
            level_cap: 32,
            state_cap: 10_000_000,
            verify_edges: false,
        }
    }
}

impl ExplorationParams {
    /// The enlarged box used for the stability rerun.
    pub fn enlarged(&self) -> Self {
        Self {
            slack: self.slack + 2,
            level_cap: self.level_cap + 8,
            ..*self
        }
    }

    fn in_box(&self, graph: &PlumbingGraph, xi: &[i64]) -> bool {
        let slack = 2 * self.slack as i64;
        xi.iter()
            .zip(graph.weights())
            .all(|(&x, &m)| m - slack <= x && x <= -m + slack)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Neighbors {
    pub states: Vec<KState>,
    pub pruned_by_box: usize,
    pub pruned_by_level: usize,
}

/// Forward and reverse elementary moves out of `state`, vertex by vertex.
fn for_each_neighbor<F>(
    graph: &PlumbingGraph,
    params: &ExplorationParams,
    level: u64,
    xi: &mut [i64],
    counts: &mut (usize, usize),
    mut visit: F,
) -> Result<()>
where
    F: FnMut(u64, &[i64]) -> Result<()>,
{
    let level = level as i64;
    for v in 0..xi.len() {
        // (u, ξ) -> (u + n, ξ + 2Qe_v), legal when u + n >= 0
        let n = charvec::push_in_place(graph, xi, v);
        let result = visit_move(graph, params, level + n, xi, counts, &mut visit);
        charvec::unpush_in_place(graph, xi, v);
        result?;

        // (u, ξ) -> (u - n', ξ - 2Qe_v), the inverse of a forward move
        let n_rev = charvec::unpush_in_place(graph, xi, v);
        let result = visit_move(graph, params, level - n_rev, xi, counts, &mut visit);
        charvec::push_in_place(graph, xi, v);
        result?;
    }
    Ok(())
}

fn visit_move<F>(
    graph: &PlumbingGraph,
    params: &ExplorationParams,
    level: i64,
    xi: &[i64],
    counts: &mut (usize, usize),
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(u64, &[i64]) -> Result<()>,
{
    if level < 0 {
        return Ok(());
    }
    if level as u64 > params.level_cap {
        counts.1 += 1;
        return Ok(());
    }
    if !params.in_box(graph, xi) {
        counts.0 += 1;
        return Ok(());
    }
    visit(level as u64, xi)
}

fn check_state(graph: &PlumbingGraph, params: &ExplorationParams, state: &KState) -> Result<()> {
    charvec::check_characteristic(graph, &state.vector)?;
    if state.level > params.level_cap || !params.in_box(graph, state.vector.coords()) {
        return Err(Error::SeedOutsideBox);
    }
    Ok(())
}

/// All states one elementary move away from `state` that stay inside the
/// exploration box and below the level cap.
pub fn neighbors(
    graph: &PlumbingGraph,
    state: &KState,
    params: &ExplorationParams,
) -> Result<Neighbors> {
    check_state(graph, params, state)?;
    let mut xi = state.vector.coords().to_vec();
    let mut counts = (0, 0);
    let mut states = Vec::new();
    for_each_neighbor(graph, params, state.level, &mut xi, &mut counts, |level, v| {
        states.push(KState::new(level, CharVector::from(v.to_vec())));
        Ok(())
    })?;
    Ok(Neighbors {
        states,
        pruned_by_box: counts.0,
        pruned_by_level: counts.1,
    })
}

/// `h(u, K) = 2u - (K·K + |G|) / 4`; constant along every move.
pub fn grading(form: &IntersectionForm, state: &KState) -> Result<BigRational> {
    let length = fullpath::renormalized_length(form, &state.vector)?;
    Ok(BigRational::from_integer((2 * state.level).into()) - length)
}

fn grading_coords(form: &IntersectionForm, level: u64, xi: &[i64]) -> BigRational {
    let sq = form.square_coords(xi);
    BigRational::from_integer((2 * level).into())
        - (sq + BigRational::from_integer(xi.len().into())) / BigRational::from_integer(4.into())
}

/// Result of exploring the closure of a set of seeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exploration {
    /// Per seed, the index of the first seed in the same component.
    pub components: Vec<usize>,
    pub states_visited: usize,
    pub edges_explored: u64,
    /// Edges whose endpoint gradings were recomputed and compared.
    pub edges_verified: u64,
    pub pruned_by_box: usize,
    pub pruned_by_level: usize,
    pub truncated_by_box: bool,
    pub truncated_by_level: bool,
    pub truncated_by_states: bool,
}

impl Exploration {
    pub fn component_count(&self) -> usize {
        self.components
            .iter()
            .enumerate()
            .filter(|(i, c)| i == *c)
            .count()
    }
}

/// Breadth-first closure of `seeds` under [`neighbors`], with a disjoint-set
/// forest over visited states. Deterministic for a fixed seed order.
pub fn explore(
    graph: &PlumbingGraph,
    form: &IntersectionForm,
    seeds: &[KState],
    params: &ExplorationParams,
) -> Result<Exploration> {
    for seed in seeds {
        check_state(graph, params, seed)?;
    }
    let s = graph.len();
    // states stored flat as [level, ξ_1, …, ξ_s]
    let mut index: HashMap<Box<[i64]>, u32> = HashMap::new();
    let mut store: Vec<i64> = Vec::new();
    let mut gradings: Vec<BigRational> = Vec::new();
    let mut uf = UnionFind::new();
    let mut seed_ids = Vec::with_capacity(seeds.len());

    let mut intern = |key: Box<[i64]>,
                      uf: &mut UnionFind,
                      store: &mut Vec<i64>,
                      gradings: &mut Vec<BigRational>|
     -> Result<(u32, bool)> {
        if let Some(&id) = index.get(&key) {
            return Ok((id, false));
        }
        if uf.len() >= params.state_cap {
            return Err(Error::StateCapExceeded {
                cap: params.state_cap,
            });
        }
        let id = uf.push();
        if params.verify_edges {
            gradings.push(grading_coords(form, key[0] as u64, &key[1..]));
        }
        store.extend_from_slice(&key);
        index.insert(key, id);
        Ok((id, true))
    };

    for seed in seeds {
        let mut key = Vec::with_capacity(s + 1);
        key.push(seed.level as i64);
        key.extend_from_slice(seed.vector.coords());
        let (id, _) = intern(key.into_boxed_slice(), &mut uf, &mut store, &mut gradings)?;
        seed_ids.push(id);
    }

    let mut counts = (0usize, 0usize);
    let mut edges_explored = 0u64;
    let mut edges_verified = 0u64;
    let mut cursor = 0usize;
    let mut xi = vec![0i64; s];
    while cursor < uf.len() {
        let from = cursor as u32;
        let base = cursor * (s + 1);
        let level = store[base] as u64;
        xi.copy_from_slice(&store[base + 1..base + 1 + s]);
        cursor += 1;

        let mut found: Vec<u32> = Vec::with_capacity(4 * s);
        for_each_neighbor(graph, params, level, &mut xi, &mut counts, |lvl, v| {
            let mut key = Vec::with_capacity(s + 1);
            key.push(lvl as i64);
            key.extend_from_slice(v);
            let (id, _) = intern(key.into_boxed_slice(), &mut uf, &mut store, &mut gradings)?;
            found.push(id);
            Ok(())
        })?;
        for to in found {
            edges_explored += 1;
            if params.verify_edges {
                if gradings[from as usize] != gradings[to as usize] {
                    return Err(Error::GradingMismatch(format!(
                        "edge between explored states {from} and {to} changes the grading"
                    )));
                }
                edges_verified += 1;
            }
            uf.union(from, to);
        }
    }

    let roots: Vec<u32> = seed_ids.iter().map(|&id| uf.find(id)).collect();
    let components = roots
        .iter()
        .map(|r| roots.iter().position(|x| x == r).expect("own root present"))
        .collect();
    Ok(Exploration {
        components,
        states_visited: uf.len(),
        edges_explored,
        edges_verified,
        pruned_by_box: counts.0,
        pruned_by_level: counts.1,
        truncated_by_box: counts.0 > 0,
        truncated_by_level: counts.1 > 0,
        truncated_by_states: false,
    })
}

/// Replays a sequence of forward moves from `start`, returning every state
/// visited (including `start`). A move that would take the level below zero
/// is an error.
pub fn replay_moves(graph: &PlumbingGraph, start: &KState, moves: &[usize]) -> Result<Vec<KState>> {
    charvec::check_characteristic(graph, &start.vector)?;
    let mut xi = start.vector.coords().to_vec();
    let mut level = start.level as i64;
    let mut out = vec![start.clone()];
    for (step, &vertex) in moves.iter().enumerate() {
        graph.check_vertex(vertex)?;
        let n = charvec::push_in_place(graph, &mut xi, vertex - 1);
        if level + n < 0 {
            return Err(Error::IllegalMove {
                step: step + 1,
                vertex,
                level: level + n,
            });
        }
        level += n;
        out.push(KState::new(level as u64, CharVector::from(xi.clone())));
    }
    Ok(out)
}

/// Number of classes among `{(m, K_i)}` for each level `m` up to the first
/// level where everything has merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCounts {
    /// `counts[m] = c(m)`.
    pub counts: Vec<usize>,
    pub stabilization_level: u64,
    /// Common grading of the level-0 classes.
    pub base_grading: BigRational,
    pub explorations: Vec<Exploration>,
}

impl ClassCounts {
    /// The part that must agree between a run and its stability rerun.
    fn signature(&self) -> (&[usize], u64, &BigRational) {
        (&self.counts, self.stabilization_level, &self.base_grading)
    }
}

pub fn class_counts(
    graph: &PlumbingGraph,
    form: &IntersectionForm,
    basics: &[CharVector],
    params: &ExplorationParams,
) -> Result<ClassCounts> {
    if basics.is_empty() {
        return Err(Error::Inconsistent("no basic vectors".into()));
    }
    let mut gradings = Vec::with_capacity(basics.len());
    for k in basics {
        gradings.push(grading(form, &KState::new(0, k.clone()))?);
    }
    let base_grading = gradings[0].clone();
    if let Some(other) = gradings.iter().find(|g| **g != base_grading) {
        return Err(Error::GradingMismatch(format!(
            "level-0 classes sit at gradings {base_grading} and {other}"
        )));
    }

    let mut counts = Vec::new();
    let mut explorations = Vec::new();
    for level in 0..=params.level_cap {
        let seeds: Vec<KState> = basics
            .iter()
            .map(|k| KState::new(level, k.clone()))
            .collect();
        let exploration = explore(graph, form, &seeds, params)?;
        let c = exploration.component_count();
        if level == 0 && c != basics.len() {
            return Err(Error::Inconsistent(format!(
                "{} basic vectors but only {c} level-0 classes",
                basics.len()
            )));
        }
        if let Some(&prev) = counts.last() {
            if c > prev {
                return Err(Error::Inconsistent(format!(
                    "class count rose from {prev} to {c} at level {level}"
                )));
            }
        }
        counts.push(c);
        explorations.push(exploration);
        if c == 1 {
            return Ok(ClassCounts {
                counts,
                stabilization_level: level,
                base_grading,
                explorations,
            });
        }
    }
    Err(Error::NotStabilized {
        level_cap: params.level_cap,
        count: counts.last().copied().unwrap_or(0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Checked,
    Unchecked,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Checked => "checked",
            Stability::Unchecked => "unchecked",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HfOptions {
    pub params: ExplorationParams,
    /// Rerun with [`ExplorationParams::enlarged`] and require equal results.
    pub stability_check: bool,
    /// Proceed even when the graph is not negative definite or has several
    /// bad vertices. `|det| = 1` is still required.
    pub force: bool,
    pub step_limit: Option<usize>,
}

impl Default for HfOptions {
    fn default() -> Self {
        Self {
            params: ExplorationParams::default(),
            stability_check: true,
            force: false,
            step_limit: None,
        }
    }
}

/// `HF+ = T+_d ⊕ ⊕_g Z^{r(g)}_(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfDecomposition {
    /// Bottom grading of the tower.
    pub d: BigRational,
    /// `(grading, reduced rank)` with nonzero ranks, ascending.
    pub reduced: Vec<(BigRational, usize)>,
    /// `(grading, total rank)` at each level below stabilization.
    pub total: Vec<(BigRational, usize)>,
    pub class_counts: Vec<usize>,
    pub stabilization_level: u64,
    pub basics: Vec<BasicVector>,
    pub params: ExplorationParams,
    pub stability: Stability,
    pub states_visited: usize,
    pub edges_verified: u64,
}

impl HfDecomposition {
    pub fn reduced_rank(&self) -> usize {
        self.reduced.iter().map(|(_, r)| r).sum()
    }
}

impl fmt::Display for HfDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HF+ = T+_{}", self.d)?;
        for (g, r) in &self.reduced {
            write!(f, " (+) Z^{r}_({g})")?;
        }
        Ok(())
    }
}

/// Computes the decomposition with default options and no stability rerun.
pub fn hf_decomposition(graph: &PlumbingGraph, params: &ExplorationParams) -> Result<HfDecomposition> {
    hf_decomposition_with(
        graph,
        &HfOptions {
            params: *params,
            stability_check: false,
            ..HfOptions::default()
        },
    )
}

pub fn hf_decomposition_with(graph: &PlumbingGraph, options: &HfOptions) -> Result<HfDecomposition> {
    let hypotheses = graph.hypotheses();
    if !options.force {
        hypotheses.require_graph()?;
    }
    let form = graph.intersection_form()?;
    if !form.is_unimodular() {
        return Err(Error::NotUnimodular {
            det: form.det().clone(),
        });
    }
    let step_limit = options
        .step_limit
        .unwrap_or_else(|| fullpath::default_step_limit(graph));
    let basics = fullpath::basic_vectors_unchecked(graph, &form, step_limit)?;
    let vectors: Vec<CharVector> = basics.iter().map(|b| b.vector.clone()).collect();

    let (counts, stability) = if options.stability_check {
        let enlarged = options.params.enlarged();
        let (base, wide) = rayon::join(
            || class_counts(graph, &form, &vectors, &options.params),
            || class_counts(graph, &form, &vectors, &enlarged),
        );
        let (base, wide) = (base?, wide?);
        if base.signature() != wide.signature() {
            return Err(Error::Unstable(format!(
                "counts {:?} at slack {} but {:?} at slack {}",
                base.counts, options.params.slack, wide.counts, enlarged.slack
            )));
        }
        (base, Stability::Checked)
    } else {
        (
            class_counts(graph, &form, &vectors, &options.params)?,
            Stability::Unchecked,
        )
    };

    let d = counts.base_grading.clone();
    let at = |m: usize| d.clone() + BigRational::from_integer((2 * m).into());
    let total: Vec<_> = counts
        .counts
        .iter()
        .enumerate()
        .take(counts.stabilization_level as usize)
        .map(|(m, &c)| (at(m), c))
        .collect();
    let reduced = total
        .iter()
        .filter(|(_, c)| *c > 1)
        .map(|(g, c)| (g.clone(), c - 1))
        .collect();
    let states_visited = counts.explorations.iter().map(|e| e.states_visited).sum();
    let edges_verified = counts.explorations.iter().map(|e| e.edges_verified).sum();
    Ok(HfDecomposition {
        d,
        reduced,
        total,
        class_counts: counts.counts,
        stabilization_level: counts.stabilization_level,
        basics,
        params: options.params,
        stability,
        states_visited,
        edges_verified,
    })
}
