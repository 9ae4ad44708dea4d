use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{has_hamiltonian_path, Graph, VertexSet};
use crate::matching::{is_factor_critical, perfect_matching_avoiding, Matching};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EarKind {
    Cycle,
    Path,
}

/// One ear. A cycle lists each vertex once (the closing edge is implicit)
/// and, after the first ear, starts at its single old vertex. A path lists
/// its vertices from one end to the other.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ear {
    pub kind: EarKind,
    pub vertices: Vec<usize>,
}

impl Ear {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let v = &self.vertices;
        let mut out: Vec<(usize, usize)> = v.windows(2).map(|w| (w[0], w[1])).collect();
        if self.kind == EarKind::Cycle && v.len() >= 2 {
            out.push((v[v.len() - 1], v[0]));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        match self.kind {
            EarKind::Cycle if self.vertices.len() < 2 => 0,
            EarKind::Cycle => self.vertices.len(),
            EarKind::Path => self.vertices.len().saturating_sub(1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarDecomposition {
    pub ears: Vec<Ear>,
}

impl EarDecomposition {
    /// New vertices contributed by each ear, in ear order.
    pub fn residues(&self) -> Vec<Vec<usize>> {
        let mut seen = HashSet::new();
        self.ears
            .iter()
            .map(|ear| ear.vertices.iter().copied().filter(|&v| seen.insert(v)).collect())
            .collect()
    }
}

/// The axiom (or structural requirement) an ear sequence breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// The ears do not cover every vertex.
    E1,
    /// An ear has an even number of edges, or fewer than three.
    E2,
    /// The first ear is not a cycle.
    E3,
    /// A later ear meets the earlier ones in the wrong place.
    E4,
    /// An ear repeats a vertex, names a missing vertex, or uses a non-edge.
    Subgraph,
    /// Two ears share an edge.
    EdgeDisjoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarViolation {
    pub axiom: Axiom,
    /// Index of the offending ear, if the violation is local to one.
    pub ear: Option<usize>,
    pub detail: String,
}

impl fmt::Display for EarViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ear {
            Some(i) => write!(f, "{:?} (ear {i}): {}", self.axiom, self.detail),
            None => write!(f, "{:?}: {}", self.axiom, self.detail),
        }
    }
}

/// Checks a proposed ear decomposition. Ears are checked in order, each
/// first for its edge count, then for its shape, then for how it attaches;
/// coverage is checked last.
pub fn validate_ears(g: &Graph, d: &EarDecomposition) -> std::result::Result<(), EarViolation> {
    let fail = |axiom, ear, detail: String| Err(EarViolation { axiom, ear, detail });
    let mut old = vec![false; g.order()];
    let mut used_edges: HashSet<(usize, usize)> = HashSet::new();
    for (i, ear) in d.ears.iter().enumerate() {
        let e = ear.edge_count();
        if e % 2 == 0 || e < 3 {
            return fail(Axiom::E2, Some(i), format!("ear has {e} edges"));
        }
        if i == 0 && ear.kind != EarKind::Cycle {
            return fail(Axiom::E3, Some(0), "first ear is a path".into());
        }
        let mut distinct = HashSet::new();
        for &v in &ear.vertices {
            if v >= g.order() {
                return fail(Axiom::Subgraph, Some(i), format!("vertex {v} out of range"));
            }
            if !distinct.insert(v) {
                return fail(Axiom::Subgraph, Some(i), format!("vertex {v} repeats"));
            }
        }
        for (a, b) in ear.edges() {
            if !g.has_edge(a, b) {
                return fail(Axiom::Subgraph, Some(i), format!("{a}-{b} is not an edge"));
            }
            if !used_edges.insert((a.min(b), a.max(b))) {
                return fail(Axiom::EdgeDisjoint, Some(i), format!("edge {a}-{b} reused"));
            }
        }
        if i > 0 {
            let touching: Vec<usize> = ear.vertices.iter().copied().filter(|&v| old[v]).collect();
            let ok = match ear.kind {
                EarKind::Path => {
                    let ends = [ear.vertices[0], *ear.vertices.last().expect("non-empty")];
                    touching.len() == 2 && touching.iter().all(|v| ends.contains(v))
                }
                EarKind::Cycle => touching.len() == 1,
            };
            if !ok {
                return fail(
                    Axiom::E4,
                    Some(i),
                    format!("ear meets earlier ears in {touching:?}"),
                );
            }
        }
        for &v in &ear.vertices {
            old[v] = true;
        }
    }
    if let Some(v) = old.iter().position(|&seen| !seen) {
        return fail(Axiom::E1, None, format!("vertex {v} is not covered"));
    }
    Ok(())
}

fn edge_between(g: &Graph, inside: &[bool]) -> Option<(usize, usize)> {
    g.edges().find_map(|(a, b)| match (inside[a], inside[b]) {
        (true, false) => Some((a, b)),
        (false, true) => Some((b, a)),
        _ => None,
    })
}

fn mate_in(m: &Matching, v: usize) -> Result<usize> {
    m.mate(v)
        .ok_or_else(|| Error::Internal(format!("vertex {v} unexpectedly exposed")))
}

/// Builds an ear decomposition of a factor-critical graph whose first ear
/// contains `root_edge` (default: the least edge).
///
/// The first ear closes `root_edge` with the alternating path found in the
/// symmetric difference of perfect matchings of `G - a` and `G - b`. Each
/// later ear starts with an edge `xy` leaving the covered set `W` and then
/// alternates between a perfect matching of `G - W` and one of `G - y` until
/// it returns to `W`. Together with any perfect matching of `G[W] - x` the
/// first matching is perfect on `G - x`, so the walk is a piece of a path
/// in a symmetric difference and must come back.
pub fn ear_decomposition(g: &Graph, root_edge: Option<(usize, usize)>) -> Result<EarDecomposition> {
    let n = g.order();
    if n < 3 {
        return Err(Error::Domain(format!(
            "ear decompositions need at least 3 vertices, got {n}"
        )));
    }
    if !is_factor_critical(g) {
        return Err(Error::Domain("graph is not factor-critical".into()));
    }
    let (a, b) = match root_edge {
        Some((a, b)) => {
            g.check_vertex(a)?;
            g.check_vertex(b)?;
            if !g.has_edge(a, b) {
                return Err(Error::Input(format!("root edge {a}-{b} is not an edge")));
            }
            (a, b)
        }
        None => g.edges().next().expect("a factor-critical graph of order >= 3 has edges"),
    };
    let all = VertexSet::new(0..n);
    let pm = |set: &VertexSet, avoid: usize| {
        perfect_matching_avoiding(g, set, avoid)
            .ok_or_else(|| Error::Internal(format!("no perfect matching avoiding {avoid}")))
    };
    let ma = pm(&all, a)?;
    let mb = pm(&all, b)?;

    // a is exposed in ma, so walk mb, ma, mb, ... until b.
    let mut cycle = vec![a];
    let mut cur = a;
    let mut use_b = true;
    while cur != b {
        cur = if use_b { mate_in(&mb, cur)? } else { mate_in(&ma, cur)? };
        cycle.push(cur);
        use_b = !use_b;
    }
    let mut inside = vec![false; n];
    for &v in &cycle {
        inside[v] = true;
    }
    // ma pairs everything off the cycle among itself.
    let mut outer = ma;
    for &v in &cycle {
        outer.unmatch(v);
    }
    let mut ears = vec![Ear {
        kind: EarKind::Cycle,
        vertices: cycle,
    }];
    let mut covered = ears[0].vertices.len();

    while covered < n {
        let (x, y) = edge_between(g, &inside).ok_or_else(|| {
            Error::Internal("factor-critical graph is disconnected".into())
        })?;
        let other = pm(&all, y)?;
        // Walk from y: outer edge, then an edge of `other`, and so on, until
        // the walk re-enters W.
        let mut fresh = vec![y];
        let mut cur = y;
        let end = loop {
            let partner = mate_in(&outer, cur)?;
            fresh.push(partner);
            let next = mate_in(&other, partner)?;
            if inside[next] {
                break next;
            }
            fresh.push(next);
            cur = next;
        };
        for &v in &fresh {
            outer.unmatch(v);
            inside[v] = true;
        }
        covered += fresh.len();
        let mut vertices = vec![x];
        vertices.extend(&fresh);
        let kind = if end == x {
            EarKind::Cycle
        } else {
            vertices.push(end);
            EarKind::Path
        };
        ears.push(Ear { kind, vertices });
    }
    let d = EarDecomposition { ears };
    validate_ears(g, &d).map_err(|v| Error::Internal(format!("constructed ears are invalid: {v}")))?;
    Ok(d)
}

/// Whether the ears with the given (0-based) indices contribute at least `s`
/// new vertices that induce a graph with a spanning path. Index 0 must be
/// present.
pub fn is_s_large(g: &Graph, d: &EarDecomposition, indices: &[usize], s: usize) -> Result<bool> {
    if s < 5 || s % 2 == 0 {
        return Err(Error::Input(format!("s must be odd and at least 5, got {s}")));
    }
    if !indices.contains(&0) {
        return Err(Error::Input("the index set must contain the first ear".into()));
    }
    if let Some(&i) = indices.iter().find(|&&i| i >= d.ears.len()) {
        return Err(Error::Input(format!(
            "ear index {i} out of range for {} ears",
            d.ears.len()
        )));
    }
    let residues = d.residues();
    let chosen = VertexSet::new(indices.iter().flat_map(|&i| residues[i].iter().copied()));
    if chosen.len() < s {
        return Ok(false);
    }
    g.check_set(&chosen)?;
    Ok(has_hamiltonian_path(&g.induced(&chosen)?.graph))
}
