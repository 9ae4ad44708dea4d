//! Simple undirected graphs on dense vertex ids `0..n`, vertex sets, and the
//! component census `c_i(G - X)` that every counting condition is built on.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order for which bitmask adjacency is maintained.
pub const MASK_LIMIT: usize = 64;

/// A finite simple undirected graph. Immutable once built.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    size: usize,
    masks: Option<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    order: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.order, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            order: g.order(),
            edges: g.edges().collect(),
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, repeated edges and endpoints
    /// outside `0..order`.
    pub fn new<I>(order: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); order];
        let mut size = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= order {
                    return Err(Error::VertexOutOfRange { vertex: w, order });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            size += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self::from_sorted_adjacency(adj, size))
    }

    /// Like [`Graph::new`] but silently drops repeated edges.
    pub fn from_edge_set<I>(order: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let set: std::collections::BTreeSet<(usize, usize)> =
            edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Self::new(order, set)
    }

    pub fn empty(order: usize) -> Self {
        Self::from_sorted_adjacency(vec![Vec::new(); order], 0)
    }

    fn from_sorted_adjacency(adj: Vec<Vec<usize>>, size: usize) -> Self {
        let masks = (adj.len() <= MASK_LIMIT).then(|| {
            adj.iter()
                .map(|list| list.iter().fold(0u64, |m, &w| m | (1u64 << w)))
                .collect()
        });
        Graph { adj, size, masks }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.masks {
            Some(m) => u < m.len() && v < m.len() && m[u] >> v & 1 == 1,
            None => u < self.adj.len() && self.adj[u].binary_search(&v).is_ok(),
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Bitmask adjacency rows, present when the order is at most [`MASK_LIMIT`].
    pub fn masks(&self) -> Option<&[u64]> {
        self.masks.as_deref()
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.order())
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.order(),
            })
        }
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<()> {
        match set.max() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// Components of `G - removed`, each sorted, listed by smallest vertex.
    pub fn components(&self, removed: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_set(removed)?;
        let mut blocked = vec![false; self.order()];
        for v in removed.iter() {
            blocked[v] = true;
        }
        Ok(self.components_excluding(&mut blocked))
    }

    /// Components of the graph with `blocked` vertices deleted. `blocked` is
    /// consumed as scratch space.
    pub(crate) fn components_excluding(&self, blocked: &mut [bool]) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.order() {
            if blocked[start] {
                continue;
            }
            blocked[start] = true;
            stack.push(start);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !blocked[w] {
                        blocked[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(VertexSet::new(comp));
        }
        out
    }

    pub fn census(&self, removed: &VertexSet) -> Result<ComponentCensus> {
        Ok(ComponentCensus::from_components(&self.components(removed)?))
    }

    /// Calls `visit(order, component_mask)` for each component of
    /// `G - removed`; stops early when `visit` returns `false`.
    /// Requires bitmask adjacency.
    pub(crate) fn for_each_component_mask<F>(&self, removed: u64, mut visit: F)
    where
        F: FnMut(u32, u64) -> bool,
    {
        let masks = self.masks.as_ref().expect("bitmask adjacency required");
        let mut rest = self.full_mask() & !removed;
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = masks[v] & rest & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            rest &= !comp;
            if !visit(comp.count_ones(), comp) {
                return;
            }
        }
    }

    pub fn is_connected(&self) -> bool {
        self.order() <= 1 || self.components(&VertexSet::empty()).is_ok_and(|c| c.len() == 1)
    }

    /// The subgraph induced by `keep`, with new ids `0..|keep|` assigned in
    /// ascending order of the original ids.
    pub fn induced(&self, keep: &VertexSet) -> Result<Induced> {
        self.check_set(keep)?;
        let mut local = vec![usize::MAX; self.order()];
        for (i, v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let adj = keep
            .iter()
            .map(|v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let size = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(Induced {
            graph: Graph::from_sorted_adjacency(adj, size),
            original: keep.as_slice().to_vec(),
        })
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + shift, v + shift)));
        Graph::new(self.order() + other.order(), edges).expect("union of simple graphs is simple")
    }

    /// Join: disjoint union plus every edge between the two sides.
    pub fn join(&self, other: &Graph) -> Graph {
        let shift = self.order();
        let cross = (0..self.order()).flat_map(|u| (0..other.order()).map(move |v| (u, v + shift)));
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + shift, v + shift)))
            .chain(cross);
        Graph::new(self.order() + other.order(), edges).expect("join of simple graphs is simple")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.order())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An induced subgraph together with the map from its ids to the host's ids.
#[derive(Clone, Debug)]
pub struct Induced {
    pub graph: Graph,
    /// `original[i]` is the host vertex behind local vertex `i`.
    pub original: Vec<usize>,
}

impl Induced {
    pub fn to_host(&self, local: usize) -> usize {
        self.original[local]
    }

    pub fn to_local(&self, host: usize) -> Option<usize> {
        self.original.binary_search(&host).ok()
    }
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        let mut v: Vec<usize> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet(MaskIter(mask).collect())
    }

    /// Bitmask form; `None` if some id is 64 or larger.
    pub fn to_mask(&self) -> Option<u64> {
        self.0
            .iter()
            .try_fold(0u64, |m, &v| (v < 64).then(|| m | (1u64 << v)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        !self.iter().any(|v| other.contains(v))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Iterates the set bits of a mask in increasing order.
#[derive(Clone, Copy, Debug)]
pub struct MaskIter(pub u64);

impl Iterator for MaskIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Number of components of each order after deleting a vertex set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCensus {
    pub counts: BTreeMap<usize, usize>,
}

impl ComponentCensus {
    pub fn from_components(components: &[VertexSet]) -> Self {
        let mut counts = BTreeMap::new();
        for c in components {
            *counts.entry(c.len()).or_insert(0) += 1;
        }
        ComponentCensus { counts }
    }

    /// `c_i`: the number of components of order exactly `i`.
    pub fn count(&self, order: usize) -> usize {
        self.counts.get(&order).copied().unwrap_or(0)
    }

    pub fn c1(&self) -> usize {
        self.count(1)
    }

    pub fn c3(&self) -> usize {
        self.count(3)
    }

    pub fn c5(&self) -> usize {
        self.count(5)
    }

    pub fn c7(&self) -> usize {
        self.count(7)
    }

    pub fn c_odd(&self) -> usize {
        self.counts
            .iter()
            .filter(|(order, _)| *order % 2 == 1)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Total number of vertices across all components.
    pub fn vertices(&self) -> usize {
        self.counts.iter().map(|(order, c)| order * c).sum()
    }
}

/// Spanning-path search by backtracking. `budget` caps the number of search
/// nodes; exceeding it is a resource error.
///
/// Intended for oracles and small blocks (roughly `n <= 20`).
pub fn hamiltonian_path(g: &Graph, budget: Option<u64>) -> Result<Option<Vec<usize>>> {
    let n = g.order();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if !g.is_connected() {
        return Ok(None);
    }
    let leaves: Vec<usize> = (0..n).filter(|&v| g.degree(v) == 1).collect();
    if leaves.len() > 2 {
        return Ok(None);
    }
    let starts: Vec<usize> = if leaves.is_empty() {
        (0..n).collect()
    } else {
        vec![leaves[0]]
    };
    let mut search = HamSearch {
        g,
        visited: vec![false; n],
        path: Vec::with_capacity(n),
        nodes: 0,
        budget: budget.unwrap_or(u64::MAX),
    };
    for s in starts {
        search.visited[s] = true;
        search.path.push(s);
        if search.extend()? {
            return Ok(Some(search.path));
        }
        search.path.pop();
        search.visited[s] = false;
    }
    Ok(None)
}

/// Whether `g` has a spanning path. Unbounded; callers keep `n` small.
pub fn has_hamiltonian_path(g: &Graph) -> bool {
    hamiltonian_path(g, None)
        .expect("unbounded search cannot exceed its budget")
        .is_some()
}

struct HamSearch<'a> {
    g: &'a Graph,
    visited: Vec<bool>,
    path: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl HamSearch<'_> {
    fn extend(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Resource(format!(
                "spanning-path search exceeded {} nodes",
                self.budget
            )));
        }
        let n = self.g.order();
        if self.path.len() == n {
            return Ok(true);
        }
        let end = *self.path.last().expect("path is non-empty");
        // Every unvisited vertex except the final one needs two usable
        // neighbours (unvisited or the current end).
        let mut tight = 0;
        for x in 0..n {
            if self.visited[x] {
                continue;
            }
            let avail = self
                .g
                .neighbors(x)
                .iter()
                .filter(|&&w| !self.visited[w] || w == end)
                .count();
            if avail == 0 {
                return Ok(false);
            }
            if avail == 1 {
                tight += 1;
                if tight > 1 {
                    return Ok(false);
                }
            }
        }
        for i in 0..self.g.degree(end) {
            let w = self.g.neighbors(end)[i];
            if self.visited[w] {
                continue;
            }
            self.visited[w] = true;
            self.path.push(w);
            if self.extend()? {
                return Ok(true);
            }
            self.path.pop();
            self.visited[w] = false;
        }
        Ok(false)
    }
}
