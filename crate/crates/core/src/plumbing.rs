//! Plumbing graphs and their intersection forms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::charvec::CharVector;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, RatMatrix};

/// A weighted simple connected graph. Vertex order is the coordinate order
/// for every vector and every push certificate.
///
/// Public indices are 1-based; the adjacency lists are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl PlumbingGraph {
    /// Validates and builds a graph from weights and 1-based edge pairs.
    pub fn new<I>(weights: Vec<i64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let s = weights.len();
        if s == 0 {
            return Err(Error::MalformedInput("graph has no vertices".into()));
        }
        if let Some(v) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidWeight { vertex: v + 1, weight: 0 });
        }
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); s];
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > s {
                    return Err(Error::MalformedInput(format!(
                        "edge {a}-{b} references vertex {v} outside 1..={s}"
                    )));
                }
            }
            if a == b {
                return Err(Error::MalformedInput(format!("self-loop at vertex {a}")));
            }
            let key = (a.min(b) - 1, a.max(b) - 1);
            if !seen.insert(key) {
                return Err(Error::MalformedInput(format!("duplicate edge {a}-{b}")));
            }
            adjacency[key.0].push(key.1);
            adjacency[key.1].push(key.0);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = Self {
            weights,
            edges: seen.into_iter().collect(),
            adjacency,
        };
        let components = graph.component_count();
        if components != 1 {
            return Err(Error::DisconnectedGraph { components });
        }
        Ok(graph)
    }

    fn component_count(&self) -> usize {
        let s = self.len();
        let mut label = vec![usize::MAX; s];
        let mut count = 0;
        for root in 0..s {
            if label[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            label[root] = count;
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        count
    }

    /// Number of vertices, `|G|`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Edges as sorted 1-based pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a + 1, b + 1))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 0-based neighbours of the 0-based vertex `v`.
    pub(crate) fn adjacent(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, vertex: usize) -> Result<usize> {
        self.check_vertex(vertex)?;
        Ok(self.adjacency[vertex - 1].len())
    }

    pub(crate) fn check_vertex(&self, vertex: usize) -> Result<()> {
        if vertex == 0 || vertex > self.len() {
            Err(Error::IndexOutOfRange {
                vertex,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Vertices with `degree(v) > -v·v`, 1-based and in index order.
    pub fn bad_vertices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.adjacency[v].len() as i64 > -self.weights[v])
            .map(|v| v + 1)
            .collect()
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let s = self.len();
        let mut q = vec![vec![0i64; s]; s];
        for (v, row) in q.iter_mut().enumerate() {
            row[v] = self.weights[v];
            for &w in &self.adjacency[v] {
                row[w] = 1;
            }
        }
        q
    }

    pub fn intersection_form(&self) -> Result<IntersectionForm> {
        IntersectionForm::new(self)
    }

    /// Sign pattern of the leading principal minors.
    pub fn definiteness(&self) -> Definiteness {
        let minors = linalg::leading_minors(&linalg::to_big(&self.matrix()));
        let first_violation = minors.iter().enumerate().find_map(|(k, minor)| {
            // minor_k · (-1)^k > 0 with k 1-based
            let ok = if k % 2 == 0 {
                minor.is_negative()
            } else {
                minor.is_positive()
            };
            (!ok).then_some(k + 1)
        });
        Definiteness {
            minors,
            first_violation,
        }
    }

    pub fn is_negative_definite(&self) -> bool {
        self.definiteness().is_negative_definite()
    }

    /// Evaluates the algorithm's hypotheses without failing.
    pub fn hypotheses(&self) -> Hypotheses {
        let definiteness = self.definiteness();
        let det = linalg::determinant(&linalg::to_big(&self.matrix()));
        Hypotheses {
            definiteness,
            bad_vertices: self.bad_vertices(),
            det,
        }
    }
}

impl fmt::Display for PlumbingGraph {
    /// The plain-text graph file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices:")?;
        for w in &self.weights {
            write!(f, " {w}")?;
        }
        writeln!(f)?;
        writeln!(f, "edges:")?;
        for (a, b) in self.edges() {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

impl FromStr for PlumbingGraph {
    type Err = Error;

    /// Parses the plain-text graph format:
    ///
    /// ```text
    /// vertices: -1 -2 -3 -7
    /// edges:
    /// 1 2
    /// 1 3
    /// 1 4
    /// ```
    ///
    /// Weights may continue over several lines; `#` starts a comment.
    fn from_str(s: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Vertices,
            Edges,
        }
        let mut section = Section::None;
        let mut weights = Vec::new();
        let mut edges = Vec::new();
        let mut saw_vertices = false;
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let mut text = raw.split('#').next().unwrap_or("").trim();
            if let Some(rest) = text.strip_prefix("vertices:") {
                if saw_vertices {
                    return Err(Error::Parse {
                        line,
                        message: "duplicate `vertices:` section".into(),
                    });
                }
                saw_vertices = true;
                section = Section::Vertices;
                text = rest.trim();
            } else if let Some(rest) = text.strip_prefix("edges:") {
                section = Section::Edges;
                text = rest.trim();
            }
            if text.is_empty() {
                continue;
            }
            let numbers = text
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("expected an integer, found {t:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match section {
                Section::None => {
                    return Err(Error::Parse {
                        line,
                        message: "data before the `vertices:` section".into(),
                    })
                }
                Section::Vertices => weights.extend(numbers),
                Section::Edges => {
                    let [a, b] = numbers[..] else {
                        return Err(Error::Parse {
                            line,
                            message: format!("expected one `i j` pair, found {} numbers", numbers.len()),
                        });
                    };
                    if a < 1 || b < 1 {
                        return Err(Error::Parse {
                            line,
                            message: "vertex indices are 1-based".into(),
                        });
                    }
                    edges.push((a as usize, b as usize));
                }
            }
        }
        if !saw_vertices {
            return Err(Error::Parse {
                line: 0,
                message: "missing `vertices:` section".into(),
            });
        }
        Self::new(weights, edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definiteness {
    pub minors: Vec<BigInt>,
    /// 1-based index of the first minor with the wrong sign.
    pub first_violation: Option<usize>,
}

impl Definiteness {
    pub fn is_negative_definite(&self) -> bool {
        self.first_violation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypotheses {
    pub definiteness: Definiteness,
    pub bad_vertices: Vec<usize>,
    pub det: BigInt,
}

impl Hypotheses {
    /// Negative definite with at most one bad vertex.
    pub fn require_graph(&self) -> Result<()> {
        if let Some(minor) = self.definiteness.first_violation {
            return Err(Error::NotNegativeDefinite { minor });
        }
        if self.bad_vertices.len() > 1 {
            return Err(Error::TooManyBadVertices {
                vertices: self.bad_vertices.clone(),
            });
        }
        Ok(())
    }

    /// As [`Hypotheses::require_graph`], and additionally `|det| = 1`.
    pub fn require_homology_sphere(&self) -> Result<()> {
        self.require_graph()?;
        if !linalg::is_unit(&self.det) {
            return Err(Error::NotUnimodular {
                det: self.det.clone(),
            });
        }
        Ok(())
    }
}

/// The intersection form `Q` together with its exact inverse.
#[derive(Debug, Clone)]
pub struct IntersectionForm {
    q: Vec<Vec<i64>>,
    det: BigInt,
    inverse: RatMatrix,
    /// `Q⁻¹` as machine integers when it is integral and fits.
    inverse_i64: Option<Vec<Vec<i64>>>,
}

impl IntersectionForm {
    pub fn new(graph: &PlumbingGraph) -> Result<Self> {
        let q = graph.matrix();
        let big: IntMatrix = linalg::to_big(&q);
        let (det, inverse) = linalg::inverse(&big).ok_or(Error::SingularForm)?;
        if !linalg::is_identity(&linalg::mul_int_rat(&big, &inverse)) {
            return Err(Error::Inconsistent("Q·Q⁻¹ is not the identity".into()));
        }
        let inverse_i64 = linalg::integral_i64(&inverse);
        Ok(Self {
            q,
            det,
            inverse,
            inverse_i64,
        })
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.q
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn is_unimodular(&self) -> bool {
        linalg::is_unit(&self.det)
    }

    pub fn inverse(&self) -> &RatMatrix {
        &self.inverse
    }

    /// Exact check of `Q·Q⁻¹ = I`.
    pub fn verify_inverse(&self) -> bool {
        linalg::is_identity(&linalg::mul_int_rat(&linalg::to_big(&self.q), &self.inverse))
    }

    /// `K·K = ξᵀ Q⁻¹ ξ` for a vector in evaluation coordinates.
    pub fn square(&self, xi: &CharVector) -> Result<BigRational> {
        if xi.len() != self.q.len() {
            return Err(Error::LengthMismatch {
                expected: self.q.len(),
                got: xi.len(),
            });
        }
        Ok(self.square_coords(xi.coords()))
    }

    pub(crate) fn square_coords(&self, xi: &[i64]) -> BigRational {
        if let Some(value) = self.square_fast(xi) {
            return BigRational::from_integer(value.into());
        }
        let mut total = BigRational::zero();
        for (i, row) in self.inverse.iter().enumerate() {
            if xi[i] == 0 {
                continue;
            }
            let mut acc = BigRational::zero();
            for (j, entry) in row.iter().enumerate() {
                if xi[j] != 0 {
                    acc += entry * BigRational::from_integer(xi[j].into());
                }
            }
            total += acc * BigRational::from_integer(xi[i].into());
        }
        total
    }

    /// Checked machine-integer evaluation; `None` on overflow or a
    /// non-integral inverse.
    fn square_fast(&self, xi: &[i64]) -> Option<i128> {
        let inv = self.inverse_i64.as_ref()?;
        let mut total: i128 = 0;
        for (i, row) in inv.iter().enumerate() {
            let mut acc: i128 = 0;
            for (j, &entry) in row.iter().enumerate() {
                acc = acc.checked_add((entry as i128).checked_mul(xi[j] as i128)?)?;
            }
            total = total.checked_add(acc.checked_mul(xi[i] as i128)?)?;
        }
        Some(total)
    }
}
