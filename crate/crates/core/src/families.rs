//! Generators for the Brieskorn family Σ(2,3,6n+1), the `A_s` chains, and
//! the explicit push certificates that witness their structure.
//!
//! Vertex numbering for Σ(2,3,6n+1): 1 is the central `-1`, then `-2`, `-3`,
//! `-7`, then the `-2` chain `5, …, n+3` hanging off vertex 4.
//!
//! The certificates are plain data. Nothing here is trusted; every sequence
//! is checked by the replay engines in [`verify_family`] and the tests.

use std::fmt;
use std::str::FromStr;

use crate::charvec::CharVector;
use crate::error::{Error, Result};
use crate::fullpath::{self, Certificate, Verdict};
use crate::kplus::{self, KState};
use crate::plumbing::PlumbingGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    pub n: usize,
    pub graph: PlumbingGraph,
    /// `K_1, …, K_{n+1}`.
    pub basics: Vec<CharVector>,
    /// The common target `L = (-3, 2, 5, 1, 0, …, 0)` of the U-chains.
    pub target: CharVector,
}

/// The plumbing of Σ(2,3,6n+1): `n + 3` vertices.
pub fn sigma_2_3(n: usize) -> Result<FamilyInstance> {
    if n == 0 {
        return Err(Error::InvalidN(n));
    }
    let mut weights = vec![-1, -2, -3, -7];
    weights.extend(std::iter::repeat_n(-2, n - 1));
    let mut edges = vec![(1, 2), (1, 3), (1, 4)];
    edges.extend((4..n + 3).map(|k| (k, k + 1)));
    let graph = PlumbingGraph::new(weights, edges)?;
    let basics = (1..=n + 1).map(|i| basic_vector(n, i)).collect::<Result<_>>()?;
    Ok(FamilyInstance {
        n,
        graph,
        basics,
        target: target_vector(n),
    })
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidN(n));
    }
    if i == 0 || i > n + 1 {
        return Err(Error::InvalidIndex { n, i });
    }
    Ok(())
}

/// `K_i` for Σ(2,3,6n+1).
pub fn basic_vector(n: usize, i: usize) -> Result<CharVector> {
    check_index(n, i)?;
    let mut k = vec![0i64; n + 3];
    k[..4].copy_from_slice(&[1, 0, -1, -5]);
    match i {
        1 => {}
        2 => k[3] = -3,
        // the 2 sits on vertex i + 2
        _ => k[i + 1] = 2,
    }
    Ok(CharVector::from(k))
}

pub fn target_vector(n: usize) -> CharVector {
    let mut l = vec![0i64; n.max(1) + 3];
    l[..4].copy_from_slice(&[-3, 2, 5, 1]);
    CharVector::from(l)
}

/// The linear graph `A_s` with all weights `-2`.
pub fn a_chain(s: usize) -> Result<PlumbingGraph> {
    PlumbingGraph::new(vec![-2; s], (1..s).map(|i| (i, i + 1)))
}

const GOOD_PREFIX: [usize; 7] = [1, 2, 1, 3, 1, 2, 1];

/// A good full path from `K_i`.
///
/// `K_1` and `K_2` share the seven-push prefix. For `i ≥ 3` the prefix is
/// followed by descending windows of width `i - 2` whose tops run from
/// `i + 2` to `n + 3`: `5, 6, …` for `K_3`, `6,5, 7,6, …` for `K_4`, and a
/// single run `n+3, …, 5` for `K_{n+1}`.
pub fn good_path_certificate(n: usize, i: usize) -> Result<Vec<usize>> {
    check_index(n, i)?;
    let mut path = GOOD_PREFIX.to_vec();
    if i >= 3 {
        let width = i - 2;
        for top in i + 2..=n + 3 {
            path.extend((top + 1 - width..=top).rev());
        }
    }
    Ok(path)
}

const CHAIN_PREFIX: [usize; 7] = [1, 1, 2, 1, 2, 3, 1];
const CHAIN_CORE: [usize; 12] = [1, 2, 3, 1, 4, 1, 2, 1, 3, 1, 2, 1];
const CHAIN_TRANSFER: [usize; 12] = [1, 2, 3, 1, 4, 1, 1, 2, 1, 2, 3, 1];

/// Block `C_k` of the U-chain for a given `n`; empty for `k = 0`.
///
/// Its tail runs `5, 6, …, 4 + r` with `r = n - 1 - k`. When that run is
/// empty the block is the transfer block that carries `K_2` across to the
/// `K_3` chain.
fn c_block(n: usize, k: usize) -> Vec<usize> {
    if k == 0 {
        return Vec::new();
    }
    let run = n - 1 - k;
    if run == 0 {
        return CHAIN_TRANSFER.to_vec();
    }
    let mut block = CHAIN_CORE.to_vec();
    block.extend(5..=4 + run);
    block
}

/// `A_{n,i} = C_{n-i+1}, C_{n-i}, …, C_1, C_0`.
fn a_block(n: usize, i: usize) -> Vec<usize> {
    (0..=n + 1 - i).rev().flat_map(|k| c_block(n, k)).collect()
}

/// `B_n = 1,2,3,1,4,1,2,1, 5, 6, …, n+3, 1`.
fn b_block(n: usize) -> Vec<usize> {
    let mut block = vec![1, 2, 3, 1, 4, 1, 2, 1];
    block.extend(5..=n + 3);
    block.push(1);
    block
}

/// Moves taking `(1, K_i)` to `(0, L)` without leaving levels 0 and 1.
pub fn u_chain_certificate(n: usize, i: usize) -> Result<Vec<usize>> {
    check_index(n, i)?;
    if i == 1 {
        return Ok(vec![1, 1, 2, 1]);
    }
    let mut moves = CHAIN_PREFIX.to_vec();
    moves.extend(a_block(n, i));
    moves.extend(b_block(n));
    Ok(moves)
}

/// On Σ(2,3,13), a bad path from `(1,0,-1,-3,2)`; by heredity no vector
/// starting `(1,0,-1,-3)` with a nonzero tail is basic.
pub fn claim_certificate() -> Certificate {
    Certificate {
        start: CharVector::from(vec![1, 0, -1, -3, 2]),
        pushes: vec![1, 2, 1, 3, 1, 2, 1, 5, 4, 1, 2, 1],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BundleKind {
    Good,
    UChain,
}

/// One line of a certificate bundle.
///
/// ```text
/// good i=3 start=(1,0,-1,-5,2): 1 2 1 3 1 2 1 5
/// uchain i=1 level=1 start=(1,0,-1,-5) target=(-3,2,5,1): 1 1 2 1
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleEntry {
    pub kind: BundleKind,
    pub index: usize,
    pub start: KState,
    pub target: Option<CharVector>,
    pub moves: Vec<usize>,
}

impl fmt::Display for BundleEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BundleKind::Good => write!(f, "good i={} start={}", self.index, self.start.vector)?,
            BundleKind::UChain => write!(
                f,
                "uchain i={} level={} start={}",
                self.index, self.start.level, self.start.vector
            )?,
        }
        if let Some(t) = &self.target {
            write!(f, " target={t}")?;
        }
        write!(f, ":")?;
        for m in &self.moves {
            write!(f, " {m}")?;
        }
        Ok(())
    }
}

impl BundleEntry {
    fn parse_line(text: &str, line: usize) -> Result<Self> {
        let err = |message: String| Error::Parse { line, message };
        let (head, tail) = text
            .split_once(':')
            .ok_or_else(|| err("missing `:` before the move list".into()))?;
        let mut tokens = head.split_whitespace();
        let kind = match tokens.next() {
            Some("good") => BundleKind::Good,
            Some("uchain") => BundleKind::UChain,
            other => return Err(err(format!("unknown certificate kind {other:?}"))),
        };
        let mut index = None;
        let mut level = 0u64;
        let mut start = None;
        let mut target = None;
        for token in tokens {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found {token:?}")))?;
            match key {
                "i" => index = Some(value.parse().map_err(|_| err(format!("bad index {value:?}")))?),
                "level" => level = value.parse().map_err(|_| err(format!("bad level {value:?}")))?,
                "start" => start = Some(value.parse().map_err(|e: Error| err(e.to_string()))?),
                "target" => target = Some(value.parse().map_err(|e: Error| err(e.to_string()))?),
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        Ok(Self {
            kind,
            index: index.ok_or_else(|| err("missing i=".into()))?,
            start: KState::new(level, start.ok_or_else(|| err("missing start=".into()))?),
            target,
            moves: fullpath::parse_index_list(tail, line)?,
        })
    }
}

/// The good-path certificates and U-chains of one family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateBundle {
    pub entries: Vec<BundleEntry>,
}

impl CertificateBundle {
    pub fn for_family(n: usize) -> Result<Self> {
        let target = target_vector(n);
        let mut entries = Vec::with_capacity(2 * (n + 1));
        for i in 1..=n + 1 {
            entries.push(BundleEntry {
                kind: BundleKind::Good,
                index: i,
                start: KState::new(0, basic_vector(n, i)?),
                target: None,
                moves: good_path_certificate(n, i)?,
            });
        }
        for i in 1..=n + 1 {
            entries.push(BundleEntry {
                kind: BundleKind::UChain,
                index: i,
                start: KState::new(1, basic_vector(n, i)?),
                target: Some(target.clone()),
                moves: u_chain_certificate(n, i)?,
            });
        }
        Ok(Self { entries })
    }
}

impl fmt::Display for CertificateBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for CertificateBundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .lines()
            .enumerate()
            .filter_map(|(idx, raw)| {
                let text = raw.split('#').next().unwrap_or("").trim();
                (!text.is_empty()).then(|| BundleEntry::parse_line(text, idx + 1))
            })
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }
}

/// Outcome of replaying one bundle entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryCheck {
    pub kind: BundleKind,
    pub index: usize,
    pub passed: bool,
    pub detail: String,
}

/// Replays a bundle entry: good paths must end good, U-chains must reach
/// their target at level 0 while staying within levels 0 and 1.
pub fn check_entry(graph: &PlumbingGraph, entry: &BundleEntry) -> EntryCheck {
    let (passed, detail) = match entry.kind {
        BundleKind::Good => match fullpath::replay_certificate(graph, &entry.start.vector, &entry.moves) {
            Ok(out) if out.verdict == Verdict::Good => (true, format!("good, terminal {}", out.terminal)),
            Ok(out) => (false, format!("verdict {} at {}", out.verdict, out.terminal)),
            Err(e) => (false, e.to_string()),
        },
        BundleKind::UChain => match kplus::replay_moves(graph, &entry.start, &entry.moves) {
            Ok(states) => {
                let last = states.last().expect("start state present");
                let max_level = states.iter().map(|s| s.level).max().unwrap_or(0);
                let reached = entry.target.as_ref().is_none_or(|t| &last.vector == t);
                if reached && last.level == 0 && max_level <= 1 {
                    (true, format!("reached {} after {} moves", last, entry.moves.len()))
                } else {
                    (false, format!("ended at {last}, max level {max_level}"))
                }
            }
            Err(e) => (false, e.to_string()),
        },
    };
    EntryCheck {
        kind: entry.kind,
        index: entry.index,
        passed,
        detail,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyVerification {
    pub n: usize,
    pub checks: Vec<EntryCheck>,
}

impl FamilyVerification {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

/// Replays every certificate of Σ(2,3,6n+1).
pub fn verify_family(n: usize) -> Result<FamilyVerification> {
    let family = sigma_2_3(n)?;
    let bundle = CertificateBundle::for_family(n)?;
    let checks = bundle
        .entries
        .iter()
        .map(|e| check_entry(&family.graph, e))
        .collect();
    Ok(FamilyVerification { n, checks })
}

/// Small named graphs used by the regression and property suites.
pub fn corpus() -> Vec<(String, PlumbingGraph)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push((format!("sigma_2_3_n{n}"), sigma_2_3(n).expect("n >= 1").graph));
    }
    for s in 1..=6 {
        out.push((format!("a{s}"), a_chain(s).expect("s >= 1")));
    }
    type Named = (&'static str, Vec<i64>, Vec<(usize, usize)>);
    let extra: [Named; 6] = [
        ("s3_unknot", vec![-1], vec![]),
        ("d4", vec![-2; 4], vec![(1, 2), (1, 3), (1, 4)]),
        ("e8", vec![-2; 8], vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 8)]),
        ("tree_y6", vec![-2, -2, -2, -3, -2, -2], vec![(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]),
        ("star_1_3_4_5", vec![-1, -3, -4, -5], vec![(1, 2), (1, 3), (1, 4)]),
        ("star_2_2_3_5", vec![-2, -2, -3, -5], vec![(1, 2), (1, 3), (1, 4)]),
    ];
    for (name, weights, edges) in extra {
        out.push((name.to_string(), PlumbingGraph::new(weights, edges).expect("valid corpus graph")));
    }
    out
}
