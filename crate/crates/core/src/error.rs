use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the core library.
///
/// Vertex indices carried by variants are 1-based, matching the graph file
/// format and the push certificates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },

    #[error("vertex {vertex} has invalid weight {weight}")]
    InvalidWeight { vertex: usize, weight: i64 },

    #[error("intersection form is singular")]
    SingularForm,

    #[error("vector has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vertex index {vertex} out of range 1..={len}")]
    IndexOutOfRange { vertex: usize, len: usize },

    #[error("vector is not characteristic at vertex {vertex}")]
    NotCharacteristic { vertex: usize },

    #[error("vector violates the candidate box at vertex {vertex}")]
    OutsideCandidateBox { vertex: usize },

    #[error("full path exceeded the step limit of {limit} pushes")]
    StepLimitExceeded { limit: usize },

    #[error("illegal push of vertex {vertex} at step {step}")]
    IllegalPush { step: usize, vertex: usize },

    #[error("move of vertex {vertex} at step {step} would leave level {level} below zero")]
    IllegalMove { step: usize, vertex: usize, level: i64 },

    #[error("graph is not negative definite (leading minor {minor} has the wrong sign)")]
    NotNegativeDefinite { minor: usize },

    #[error("graph has {} bad vertices {:?}, at most one is supported", .vertices.len(), .vertices)]
    TooManyBadVertices { vertices: Vec<usize> },

    #[error("determinant is {det}; only |det| = 1 (integral homology spheres) is supported here")]
    NotUnimodular { det: BigInt },

    #[error("exploration visited more than {cap} states; raise the state cap or lower the slack")]
    StateCapExceeded { cap: usize },

    #[error("seed state lies outside the exploration box or above the level cap")]
    SeedOutsideBox,

    #[error("class count did not reach 1 by level {level_cap} (last count {count}); raise the level cap")]
    NotStabilized { level_cap: u64, count: usize },

    #[error("grading mismatch: {0}")]
    GradingMismatch(String),

    #[error("inconsistent class structure: {0}")]
    Inconsistent(String),

    #[error("result changed when the exploration box was enlarged: {0}")]
    Unstable(String),

    #[error("invalid family parameter n = {0} (need n >= 1)")]
    InvalidN(usize),

    #[error("invalid basic-vector index i = {i} for n = {n} (need 1 <= i <= n + 1)")]
    InvalidIndex { n: usize, i: usize },
}

impl Error {
    /// True for violations of the algorithm's hypotheses on the input graph.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            Error::NotNegativeDefinite { .. }
                | Error::TooManyBadVertices { .. }
                | Error::NotUnimodular { .. }
                | Error::SingularForm
        )
    }

    /// True for errors caused by a configurable resource bound.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::StateCapExceeded { .. }
                | Error::StepLimitExceeded { .. }
                | Error::NotStabilized { .. }
                | Error::Unstable(_)
        )
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::MalformedInput(_))
    }
}
