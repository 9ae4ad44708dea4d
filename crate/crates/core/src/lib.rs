//! Constructive {P2, P2k+1}-factor tools.
//!
//! Given a graph, the builders either return a verified path factor whose
//! components are paths of order 2 or 2k+1 (k = 3 or 4), or a vertex set `X`
//! whose component census violates the corresponding sufficient condition.
//! Around them sit the supporting pieces: maximum matchings and barrier
//! selection, ear decompositions and recognition of the excluded
//! factor-critical families, a bipartite path-system engine, weighted
//! component-counting conditions, family generators, and brute-force oracles.

pub mod error;
pub mod factor;
pub mod bipartite_paths;
pub mod conditions;
pub mod generators;
pub mod graph;
pub mod hypomatchable;
pub mod io;
pub mod matching;
pub mod par;

pub use conditions::{ConditionCertificate, ConditionReport, ConditionSpec, Mode, Verdict};
pub use error::{Error, Result};
pub use factor::{BuildOutcome, PathSystem};
pub use graph::{ComponentCensus, Graph, VertexSet};
pub use matching::{BarrierResult, Matching};
pub use par::Execution;
