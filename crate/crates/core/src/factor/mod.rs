//! {P2, P(2k+1)}-factors: verification, normalisation, the certificate-or-
//! factor builders for k = 3 and 4, and an exhaustive oracle.

mod builder;
mod oracle;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use crate::conditions::ConditionCertificate;
pub use builder::{
    build, build_p2p7, build_p2p9, component_factor, BuildOutcome, ComponentRole, Outcome, Route,
    Trace, DIRECT_SEARCH_BUDGET,
};
pub use oracle::{brute_force_factor, brute_force_factor_within};

/// Vertex-disjoint paths, each an ordered vertex sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub paths: Vec<Vec<usize>>,
}

impl PathSystem {
    pub fn new(paths: Vec<Vec<usize>>) -> Self {
        PathSystem { paths }
    }

    /// Orients each path to start at its smaller end and sorts paths by
    /// first vertex.
    pub fn canonical(mut self) -> Self {
        for p in &mut self.paths {
            if p.first() > p.last() {
                p.reverse();
            }
        }
        self.paths.sort();
        self
    }

    pub fn orders(&self) -> Vec<usize> {
        self.paths.iter().map(Vec::len).collect()
    }
}

/// Checks that `f` is a spanning set of disjoint paths of `g`, ignoring
/// path orders.
fn check_paths(g: &Graph, f: &PathSystem) -> std::result::Result<(), String> {
    let n = g.order();
    let mut seen = vec![false; n];
    for p in &f.paths {
        if p.is_empty() {
            return Err("empty path".into());
        }
        for &v in p {
            if v >= n {
                return Err(format!("vertex {v} out of range"));
            }
            if seen[v] {
                return Err(format!("vertex {v} repeated"));
            }
            seen[v] = true;
        }
        for w in p.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(format!("{}-{} is not an edge", w[0], w[1]));
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(v) => Err(format!("vertex {v} uncovered")),
        None => Ok(()),
    }
}

/// Accepts exactly the spanning path systems whose paths have order 2 or
/// `2k + 1`; otherwise names the first problem found.
pub fn verify_factor(g: &Graph, f: &PathSystem, k: usize) -> std::result::Result<(), String> {
    check_paths(g, f)?;
    let long = 2 * k + 1;
    match f.paths.iter().map(Vec::len).find(|&o| o != 2 && o != long) {
        Some(o) => Err(format!("order {o} not allowed")),
        None => Ok(()),
    }
}

/// Splits a path-factor without odd paths of order `3..2k-1` into a
/// {P2, P(2k+1)}-factor: even paths into edges, longer odd paths into a
/// `P(2k+1)` prefix followed by edges.
pub fn normalize_factor(g: &Graph, f: &PathSystem, k: usize) -> Result<PathSystem> {
    check_paths(g, f).map_err(|e| Error::Input(format!("not a path system: {e}")))?;
    let long = 2 * k + 1;
    let mut out = Vec::new();
    for p in &f.paths {
        let o = p.len();
        if o == 1 {
            return Err(Error::Input("a path-factor has no single-vertex paths".into()));
        }
        let cut = if o % 2 == 0 {
            0
        } else if o >= long {
            long
        } else {
            return Err(Error::Domain(format!("odd order {o} cannot be split for k = {k}")));
        };
        if cut > 0 {
            out.push(p[..cut].to_vec());
        }
        out.extend(p[cut..].chunks(2).map(<[usize]>::to_vec));
    }
    Ok(PathSystem::new(out).canonical())
}

/// Pairs of `m` not touching any vertex of `used`.
pub(crate) fn residual_pairs(pairs: &[(usize, usize)], used: &[usize]) -> Vec<Vec<usize>> {
    let used: HashSet<usize> = used.iter().copied().collect();
    pairs
        .iter()
        .filter(|(a, b)| !used.contains(a) && !used.contains(b))
        .map(|&(a, b)| vec![a, b])
        .collect()
}
