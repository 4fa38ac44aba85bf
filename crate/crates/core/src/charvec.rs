//! Characteristic vectors in evaluation coordinates `(K·v_1, …, K·v_s)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::plumbing::PlumbingGraph;

/// A vector `K` stored by its evaluations `ξ_i = K·v_i`.
///
/// Construction does not check parity; use [`CharVector::characteristic`]
/// or [`is_characteristic`] where that matters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharVector(Vec<i64>);

impl CharVector {
    /// Builds a vector and checks the parity condition against `graph`.
    pub fn characteristic(graph: &PlumbingGraph, coords: Vec<i64>) -> Result<Self> {
        let xi = Self(coords);
        check_characteristic(graph, &xi)?;
        Ok(xi)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, vertex: usize) -> Option<i64> {
        vertex.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

impl From<Vec<i64>> for CharVector {
    fn from(coords: Vec<i64>) -> Self {
        Self(coords)
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for CharVector {
    type Err = Error;

    /// Parses `(1,0,-1,-5)`; whitespace is ignored and the parentheses are
    /// optional.
    fn from_str(s: &str) -> Result<Self> {
        let body: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = body
            .strip_prefix('(')
            .map(|b| b.strip_suffix(')'))
            .unwrap_or(Some(body.as_str()))
            .ok_or_else(|| Error::MalformedInput(format!("unbalanced parentheses in {s:?}")))?;
        if body.is_empty() {
            return Err(Error::MalformedInput("empty vector".into()));
        }
        body.split(',')
            .map(|part| {
                part.parse::<i64>()
                    .map_err(|_| Error::MalformedInput(format!("bad vector entry {part:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

fn check_len(graph: &PlumbingGraph, xi: &CharVector) -> Result<()> {
    if xi.len() != graph.len() {
        Err(Error::LengthMismatch {
            expected: graph.len(),
            got: xi.len(),
        })
    } else {
        Ok(())
    }
}

/// `ξ_i ≡ m_i (mod 2)` for every vertex.
pub fn is_characteristic(graph: &PlumbingGraph, xi: &CharVector) -> Result<bool> {
    check_len(graph, xi)?;
    Ok(first_parity_failure(graph, xi.coords()).is_none())
}

pub(crate) fn check_characteristic(graph: &PlumbingGraph, xi: &CharVector) -> Result<()> {
    check_len(graph, xi)?;
    match first_parity_failure(graph, xi.coords()) {
        Some(v) => Err(Error::NotCharacteristic { vertex: v + 1 }),
        None => Ok(()),
    }
}

fn first_parity_failure(graph: &PlumbingGraph, xi: &[i64]) -> Option<usize> {
    xi.iter()
        .zip(graph.weights())
        .position(|(x, m)| (x - m).rem_euclid(2) != 0)
}

/// The candidate box `m_i + 2 ≤ ξ_i ≤ -m_i`.
pub fn satisfies_cond13(graph: &PlumbingGraph, xi: &CharVector) -> bool {
    xi.len() == graph.len() && first_cond13_failure(graph, xi.coords()).is_none()
}

pub(crate) fn first_cond13_failure(graph: &PlumbingGraph, xi: &[i64]) -> Option<usize> {
    xi.iter()
        .zip(graph.weights())
        .position(|(&x, &m)| !(m + 2 <= x && x <= -m))
}

/// `-ξ` lies in the candidate box, i.e. `m_i ≤ ξ_i ≤ -m_i - 2`.
pub fn satisfies_terminal(graph: &PlumbingGraph, xi: &CharVector) -> bool {
    xi.len() == graph.len() && is_terminal(graph, xi.coords())
}

pub(crate) fn is_terminal(graph: &PlumbingGraph, xi: &[i64]) -> bool {
    xi.iter()
        .zip(graph.weights())
        .all(|(&x, &m)| m <= x && x <= -m - 2)
}

/// `ξ + 2·Q·e_v` and the level change `n = (ξ_v + m_v) / 2`.
///
/// `vertex` is 1-based.
pub fn push(graph: &PlumbingGraph, xi: &CharVector, vertex: usize) -> Result<(CharVector, i64)> {
    graph.check_vertex(vertex)?;
    check_len(graph, xi)?;
    let mut out = xi.0.clone();
    let n = push_in_place(graph, &mut out, vertex - 1);
    Ok((CharVector(out), n))
}

/// 0-based in-place push; returns the level change.
pub(crate) fn push_in_place(graph: &PlumbingGraph, xi: &mut [i64], v: usize) -> i64 {
    let m = graph.weights()[v];
    let n = (xi[v] + m).div_euclid(2);
    xi[v] += 2 * m;
    for &w in graph.adjacent(v) {
        xi[w] += 2;
    }
    n
}

/// Inverse of [`push_in_place`]: `ξ - 2·Q·e_v`. Returns `n'` such that the
/// forward push from the result changes the level by `n'`.
pub(crate) fn unpush_in_place(graph: &PlumbingGraph, xi: &mut [i64], v: usize) -> i64 {
    let m = graph.weights()[v];
    let n = (xi[v] - m).div_euclid(2);
    xi[v] -= 2 * m;
    for &w in graph.adjacent(v) {
        xi[w] -= 2;
    }
    n
}

/// The finite set of characteristic vectors satisfying the candidate box,
/// in lexicographic order (vertex 1 most significant, values ascending).
///
/// Indexable, so the set splits cleanly into ranges for parallel workers.
#[derive(Debug, Clone)]
pub struct Cond13Box {
    lows: Vec<i64>,
    radices: Vec<u64>,
    len: Option<u64>,
}

impl Cond13Box {
    pub fn new(graph: &PlumbingGraph) -> Self {
        let lows: Vec<i64> = graph.weights().iter().map(|m| m + 2).collect();
        // values m+2, m+4, …, -m: that is -m of them (none for positive m)
        let radices: Vec<u64> = graph
            .weights()
            .iter()
            .map(|&m| if m < 0 { m.unsigned_abs() } else { 0 })
            .collect();
        let len = radices
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r));
        Self { lows, radices, len }
    }

    /// Number of vectors, or `None` if it does not fit in a `u64`.
    pub fn len(&self) -> Option<u64> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    /// The `index`-th vector in enumeration order.
    pub fn get(&self, index: u64) -> Option<CharVector> {
        if index >= self.len? {
            return None;
        }
        let mut rest = index;
        let mut coords = vec![0i64; self.lows.len()];
        for i in (0..self.lows.len()).rev() {
            let r = self.radices[i];
            coords[i] = self.lows[i] + 2 * (rest % r) as i64;
            rest /= r;
        }
        Some(CharVector(coords))
    }

    pub fn iter(&self) -> Cond13Iter<'_> {
        let current = if self.radices.contains(&0) {
            None
        } else {
            Some(self.lows.clone())
        };
        Cond13Iter { owner: self, current }
    }
}

/// Odometer over [`Cond13Box`].
#[derive(Debug, Clone)]
pub struct Cond13Iter<'a> {
    owner: &'a Cond13Box,
    current: Option<Vec<i64>>,
}

impl Iterator for Cond13Iter<'_> {
    type Item = CharVector;

    fn next(&mut self) -> Option<CharVector> {
        let cur = self.current.as_mut()?;
        let out = CharVector(cur.clone());
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            let high = self.owner.lows[i] + 2 * (self.owner.radices[i] as i64 - 1);
            if cur[i] < high {
                cur[i] += 2;
                break;
            }
            cur[i] = self.owner.lows[i];
        }
        Some(out)
    }
}

/// All candidate vectors of `graph` in lexicographic order.
pub fn enumerate_cond13(graph: &PlumbingGraph) -> Vec<CharVector> {
    Cond13Box::new(graph).iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sigma237() -> PlumbingGraph {
        PlumbingGraph::new(vec![-1, -2, -3, -7], [(1, 2), (1, 3), (1, 4)]).unwrap()
    }

    fn a(s: usize) -> PlumbingGraph {
        PlumbingGraph::new(vec![-2; s], (1..s).map(|i| (i, i + 1))).unwrap()
    }

    fn v(c: &[i64]) -> CharVector {
        CharVector::from(c.to_vec())
    }

    #[test]
    fn parity() {
        let g = sigma237();
        assert!(is_characteristic(&g, &v(&[1, 0, -1, -5])).unwrap());
        assert!(!is_characteristic(&g, &v(&[0, 0, -1, -5])).unwrap());
        assert!(is_characteristic(&a(2), &v(&[2, 0])).unwrap());
        assert_eq!(
            is_characteristic(&g, &v(&[1])),
            Err(Error::LengthMismatch { expected: 4, got: 1 })
        );
        assert_eq!(
            CharVector::characteristic(&g, vec![0, 0, -1, -5]),
            Err(Error::NotCharacteristic { vertex: 1 })
        );
    }

    #[test]
    fn cond13_examples() {
        let g = sigma237();
        assert!(satisfies_cond13(&g, &v(&[1, 0, -1, -5])));
        assert!(!satisfies_cond13(&g, &v(&[-3, 2, 5, 1])));
        let single = PlumbingGraph::new(vec![-1], []).unwrap();
        assert!(satisfies_cond13(&single, &v(&[1])));
        assert!(!satisfies_cond13(&single, &v(&[-1])));
        assert!(!satisfies_cond13(&single, &v(&[3])));
    }

    #[test]
    fn terminal_examples() {
        let g = sigma237();
        assert!(satisfies_terminal(&g, &v(&[-1, 0, 1, 3])));
        assert!(!satisfies_terminal(&g, &v(&[1, 0, -1, -5])));
        assert!(satisfies_terminal(&a(1), &v(&[0])));
    }

    #[test]
    fn enumeration_counts() {
        let g = sigma237();
        let all = enumerate_cond13(&g);
        assert_eq!(all.len(), 42);
        assert_eq!(Cond13Box::new(&g).len(), Some(42));
        assert_eq!(all[0], v(&[1, 0, -1, -5]));
        assert_eq!(enumerate_cond13(&a(1)), vec![v(&[0]), v(&[2])]);

        let positive = PlumbingGraph::new(vec![-2, 1], [(1, 2)]).unwrap();
        assert!(enumerate_cond13(&positive).is_empty());
        assert!(Cond13Box::new(&positive).is_empty());
    }

    #[test]
    fn enumeration_is_sorted_and_indexable() {
        let g = sigma237();
        let bx = Cond13Box::new(&g);
        let all: Vec<_> = bx.iter().collect();
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
        for (i, xi) in all.iter().enumerate() {
            assert_eq!(bx.get(i as u64).as_ref(), Some(xi));
            assert!(satisfies_cond13(&g, xi));
            assert!(is_characteristic(&g, xi).unwrap());
        }
        assert!(bx.get(42).is_none());
    }

    #[test]
    fn push_examples() {
        let g = sigma237();
        let (p, n) = push(&g, &v(&[1, 0, -1, -5]), 1).unwrap();
        assert_eq!((p, n), (v(&[-1, 2, 1, -3]), 0));
        let (p, n) = push(&g, &v(&[-1, 2, 1, -3]), 1).unwrap();
        assert_eq!((p, n), (v(&[-3, 4, 3, -1]), -1));
        let (p, n) = push(&a(1), &v(&[2]), 1).unwrap();
        assert_eq!((p, n), (v(&[-2]), 0));
        assert_eq!(
            push(&g, &v(&[1, 0, -1, -5]), 5),
            Err(Error::IndexOutOfRange { vertex: 5, len: 4 })
        );
        assert!(push(&g, &v(&[1, 0, -1, -5]), 0).is_err());
    }

    #[test]
    fn text_syntax() {
        let xi: CharVector = "(1, 0,-1,-5)".parse().unwrap();
        assert_eq!(xi, v(&[1, 0, -1, -5]));
        assert_eq!(xi.to_string(), "(1,0,-1,-5)");
        assert_eq!("2,2".parse::<CharVector>().unwrap(), v(&[2, 2]));
        assert!("(1,x)".parse::<CharVector>().is_err());
        assert!("()".parse::<CharVector>().is_err());
        assert!("(1,2".parse::<CharVector>().is_err());
    }

    fn graph_and_vector() -> impl Strategy<Value = (PlumbingGraph, Vec<i64>)> {
        (1usize..=6)
            .prop_flat_map(|s| {
                (
                    proptest::collection::vec(-9i64..=-1, s),
                    proptest::collection::vec(any::<prop::sample::Index>(), s),
                    proptest::collection::vec(-10i64..=10, s),
                )
            })
            .prop_map(|(weights, parents, raw)| {
                // random tree: vertex k attaches to some earlier vertex
                let edges: Vec<_> = (1..weights.len())
                    .map(|k| (parents[k].index(k) + 1, k + 1))
                    .collect();
                let g = PlumbingGraph::new(weights.clone(), edges).unwrap();
                let xi = raw
                    .iter()
                    .zip(&weights)
                    .map(|(x, m)| if (x - m) % 2 == 0 { *x } else { x + 1 })
                    .collect();
                (g, xi)
            })
    }

    proptest! {
        #[test]
        fn push_preserves_parity_and_shifts_square((g, xi) in graph_and_vector(), pick in any::<prop::sample::Index>()) {
            let xi = CharVector::from(xi);
            prop_assert!(is_characteristic(&g, &xi).unwrap());
            let vtx = pick.index(g.len()) + 1;
            let (next, n) = push(&g, &xi, vtx).unwrap();
            prop_assert!(is_characteristic(&g, &next).unwrap());
            if let Ok(form) = g.intersection_form() {
                let before = form.square(&xi).unwrap();
                let after = form.square(&next).unwrap();
                // K'·K' - K·K = 4(ξ_v + m_v) = 8n
                let m = g.weights()[vtx - 1];
                let shift = num_rational::BigRational::from_integer((4 * (xi.coords()[vtx - 1] + m)).into());
                prop_assert_eq!(&after - &before, shift.clone());
                prop_assert_eq!(shift, num_rational::BigRational::from_integer((8 * n).into()));
            }
            let mut back = next.coords().to_vec();
            let n_rev = unpush_in_place(&g, &mut back, vtx - 1);
            prop_assert_eq!(back.as_slice(), xi.coords());
            prop_assert_eq!(n_rev, n);
        }
    }
}
