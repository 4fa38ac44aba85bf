//! Heegaard-Floer homology `HF+(-Y(G))` of plumbed 3-manifolds, computed
//! from characteristic vectors and full paths on a negative-definite
//! plumbing graph `G` with at most one bad vertex.
//!
//! The pipeline is:
//!
//! 1. [`plumbing`]: validate the graph, build the intersection form `Q` and
//!    its exact inverse.
//! 2. [`charvec`]: characteristic vectors in evaluation coordinates, the
//!    candidate box and the elementary push.
//! 3. [`fullpath`]: classify candidates by their full paths; the good ones
//!    are the basic vectors.
//! 4. [`kplus`]: decide which levelled vectors are equivalent by bounded
//!    exploration, count classes per level and assemble the decomposition.
//!
//! [`families`] generates the Σ(2,3,6n+1) plumbings and their certificates.

pub mod charvec;
mod dsu;
pub mod error;
pub mod families;
pub mod fullpath;
pub mod kplus;
pub mod linalg;
pub mod plumbing;

pub use charvec::{enumerate_cond13, is_characteristic, push, satisfies_cond13, satisfies_terminal, CharVector, Cond13Box};
pub use error::{Error, Result};
pub use fullpath::{basic_vectors, classify, classify_with, replay_certificate, BasicVector, Certificate, PathOutcome, Verdict, Violation};
pub use kplus::{
    class_counts, explore, grading, hf_decomposition, hf_decomposition_with, neighbors, ExplorationParams, HfDecomposition,
    HfOptions, KState, Stability,
};
pub use plumbing::{Hypotheses, IntersectionForm, PlumbingGraph};
