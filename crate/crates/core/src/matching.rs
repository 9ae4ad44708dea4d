//! Maximum matchings in general graphs (Edmonds' blossom search), factor
//! criticality, Tutte witnesses and barrier selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::par::{map_chunks, Execution};

const NONE: usize = usize::MAX;

/// A set of vertex-disjoint edges, stored as a mate table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatchingRepr", into = "MatchingRepr")]
pub struct Matching {
    mate: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MatchingRepr {
    order: usize,
    pairs: Vec<(usize, usize)>,
}

impl TryFrom<MatchingRepr> for Matching {
    type Error = Error;
    fn try_from(r: MatchingRepr) -> Result<Self> {
        Matching::from_pairs_unchecked(r.order, r.pairs)
    }
}

impl From<Matching> for MatchingRepr {
    fn from(m: Matching) -> Self {
        MatchingRepr {
            order: m.mate.len(),
            pairs: m.pairs(),
        }
    }
}

impl Matching {
    pub fn empty(order: usize) -> Self {
        Matching {
            mate: vec![NONE; order],
        }
    }

    /// Builds a matching of `g`, checking that the pairs are edges and are
    /// pairwise disjoint.
    pub fn from_pairs<I>(g: &Graph, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let pairs: Vec<_> = pairs.into_iter().collect();
        for &(u, v) in &pairs {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if !g.has_edge(u, v) {
                return Err(Error::Input(format!("{u}-{v} is not an edge")));
            }
        }
        Self::from_pairs_unchecked(g.order(), pairs)
    }

    fn from_pairs_unchecked(order: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut m = Matching::empty(order);
        for (u, v) in pairs {
            if u >= order || v >= order || u == v {
                return Err(Error::Input(format!("bad matching pair {u}-{v}")));
            }
            if m.mate[u] != NONE || m.mate[v] != NONE {
                return Err(Error::Input(format!("matching pairs overlap at {u}-{v}")));
            }
            m.mate[u] = v;
            m.mate[v] = u;
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.mate.len()
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        (self.mate[v] != NONE).then_some(self.mate[v])
    }

    pub fn is_covered(&self, v: usize) -> bool {
        self.mate[v] != NONE
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.mate.iter().filter(|&&w| w != NONE).count() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.mate.len())
            .filter(|&u| self.mate[u] != NONE && u < self.mate[u])
            .map(|u| (u, self.mate[u]))
            .collect()
    }

    /// Removes the edge covering `v`, if any.
    pub fn unmatch(&mut self, v: usize) {
        let w = self.mate[v];
        if w != NONE {
            self.mate[v] = NONE;
            self.mate[w] = NONE;
        }
    }

    /// Adds the edge `uv`; both ends must be exposed.
    pub fn join(&mut self, u: usize, v: usize) {
        debug_assert!(self.mate[u] == NONE && self.mate[v] == NONE);
        self.mate[u] = v;
        self.mate[v] = u;
    }

    /// Whether the covered vertices are exactly `set`.
    pub fn is_perfect_on(&self, set: &VertexSet) -> bool {
        let covered = (0..self.mate.len()).filter(|&v| self.mate[v] != NONE).count();
        covered == set.len() && set.iter().all(|v| v < self.mate.len() && self.mate[v] != NONE)
    }
}

/// Edmonds' blossom search restricted to an active vertex subset.
struct Blossom<'a> {
    g: &'a Graph,
    active: &'a [bool],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph, active: &'a [bool]) -> Self {
        let n = g.order();
        Blossom {
            g,
            active,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: Vec::with_capacity(n),
        }
    }

    fn greedy(&mut self) {
        for v in 0..self.g.order() {
            if !self.active[v] || self.mate[v] != NONE {
                continue;
            }
            if let Some(&w) = self
                .g
                .neighbors(v)
                .iter()
                .find(|&&w| self.active[w] && self.mate[w] == NONE)
            {
                self.mate[v] = w;
                self.mate[w] = v;
            }
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.order()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Searches for an augmenting path from `root`; returns its other end.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.order();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for i in 0..self.g.degree(v) {
                let to = self.g.neighbors(v)[i];
                if !self.active[to] || self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for u in 0..n {
                        if self.active[u] && self.in_blossom[self.base[u]] {
                            self.base[u] = cur;
                            if !self.used[u] {
                                self.used[u] = true;
                                self.queue.push(u);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    fn run(mut self) -> Matching {
        self.greedy();
        for root in 0..self.g.order() {
            if self.active[root] && self.mate[root] == NONE {
                if let Some(end) = self.find_path(root) {
                    self.augment(end);
                }
            }
        }
        Matching { mate: self.mate }
    }
}

/// A maximum matching of `g`.
pub fn maximum_matching(g: &Graph) -> Matching {
    let active = vec![true; g.order()];
    Blossom::new(g, &active).run()
}

/// A maximum matching of the subgraph induced by the `true` entries of
/// `active` (host ids are kept).
pub fn maximum_matching_within(g: &Graph, active: &[bool]) -> Matching {
    assert_eq!(active.len(), g.order(), "activity mask has the wrong length");
    Blossom::new(g, active).run()
}

/// A perfect matching of `G[set]`, if one exists.
pub fn perfect_matching_on(g: &Graph, set: &VertexSet) -> Option<Matching> {
    if set.len() % 2 == 1 {
        return None;
    }
    let mut active = vec![false; g.order()];
    for v in set {
        active[v] = true;
    }
    let m = maximum_matching_within(g, &active);
    (2 * m.size() == set.len()).then_some(m)
}

/// A perfect matching of `G[set] - v`, if one exists.
pub fn perfect_matching_avoiding(g: &Graph, set: &VertexSet, v: usize) -> Option<Matching> {
    let rest = VertexSet::new(set.iter().filter(|&w| w != v));
    perfect_matching_on(g, &rest)
}

/// True iff the order is odd and `G - x` has a perfect matching for every `x`.
pub fn is_factor_critical(g: &Graph) -> bool {
    let n = g.order();
    if n % 2 == 0 {
        return false;
    }
    if !g.is_connected() {
        return false;
    }
    let mut active = vec![true; n];
    (0..n).all(|x| {
        active[x] = false;
        let ok = 2 * maximum_matching_within(g, &active).size() == n - 1;
        active[x] = true;
        ok
    })
}

/// Factor criticality of the induced subgraph on `set`.
pub fn is_factor_critical_on(g: &Graph, set: &VertexSet) -> bool {
    if set.len() % 2 == 0 {
        return false;
    }
    let mut active = vec![false; g.order()];
    for v in set {
        active[v] = true;
    }
    for x in set {
        active[x] = false;
        let ok = 2 * maximum_matching_within(g, &active).size() == set.len() - 1;
        active[x] = true;
        if !ok {
            return false;
        }
    }
    // Perfect matchings after every deletion force connectivity, except for
    // a single vertex where there is nothing to check.
    true
}

/// The Gallai-Edmonds sets: `d` are vertices missed by some maximum
/// matching, `a` their neighbours outside `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GallaiEdmonds {
    pub d: VertexSet,
    pub a: VertexSet,
    pub matching_size: usize,
}

pub fn gallai_edmonds(g: &Graph) -> GallaiEdmonds {
    let n = g.order();
    let nu = maximum_matching(g).size();
    let mut active = vec![true; n];
    let mut in_d = vec![false; n];
    for x in 0..n {
        active[x] = false;
        in_d[x] = maximum_matching_within(g, &active).size() == nu;
        active[x] = true;
    }
    let d = VertexSet::new((0..n).filter(|&v| in_d[v]));
    let a = VertexSet::new(
        d.iter()
            .flat_map(|v| g.neighbors(v).iter().copied())
            .filter(|&w| !in_d[w]),
    );
    GallaiEdmonds {
        d,
        a,
        matching_size: nu,
    }
}

/// Outcome of [`tutte_witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TutteOutcome {
    HasPerfectMatching(Matching),
    /// A set `S` with `c_odd(G - S) >= |S| + 2`.
    Barrier(VertexSet),
}

/// For a graph of even order: a perfect matching, or a set whose deletion
/// leaves at least `|S| + 2` odd components.
pub fn tutte_witness(g: &Graph) -> Result<TutteOutcome> {
    if g.order() % 2 == 1 {
        return Err(Error::Input(format!(
            "a Tutte witness needs even order, got {}",
            g.order()
        )));
    }
    let m = maximum_matching(g);
    if 2 * m.size() == g.order() {
        return Ok(TutteOutcome::HasPerfectMatching(m));
    }
    let s = gallai_edmonds(g).a;
    let odd = g.census(&s)?.c_odd();
    if odd < s.len() + 2 {
        return Err(Error::Internal(format!(
            "Gallai-Edmonds set {s:?} leaves only {odd} odd components"
        )));
    }
    Ok(TutteOutcome::Barrier(s))
}

/// A maximum-deficiency set `S` after which every component of `G - S` is
/// odd and factor-critical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrierResult {
    pub s: VertexSet,
    /// Components of `G - S`, ordered by smallest vertex.
    pub components: Vec<VertexSet>,
    /// `c_odd(G - S) - |S|`.
    pub deficiency: usize,
}

fn odd_minus(odd: usize, s: usize) -> Result<usize> {
    odd.checked_sub(s)
        .ok_or_else(|| Error::Internal("barrier with negative deficiency".into()))
}

/// Selects a barrier: starts from the Gallai-Edmonds set (which already
/// maximises `c_odd(G - S) - |S|`) and grows it until every component is odd
/// and factor-critical. Ties go to the lowest-indexed component and its
/// lowest vertex.
pub fn select_barrier(g: &Graph) -> BarrierResult {
    select_barrier_checked(g).expect("barrier repair keeps the deficiency maximal")
}

fn select_barrier_checked(g: &Graph) -> Result<BarrierResult> {
    let ge = gallai_edmonds(g);
    let target = g.order() - 2 * ge.matching_size;
    let mut s: Vec<usize> = ge.a.as_slice().to_vec();
    loop {
        let sv = VertexSet::new(s.iter().copied());
        let components = g.components(&sv)?;
        let odd = components.iter().filter(|c| c.len() % 2 == 1).count();
        if odd_minus(odd, sv.len())? != target {
            return Err(Error::Internal(format!(
                "barrier {sv:?} has deficiency {} instead of {target}",
                odd as i64 - sv.len() as i64
            )));
        }
        if let Some(c) = components.iter().find(|c| c.len() % 2 == 0) {
            s.push(c.min().expect("components are non-empty"));
            continue;
        }
        let mut repaired = false;
        for c in &components {
            if c.len() == 1 {
                continue;
            }
            let Some(v) = c.iter().find(|&v| perfect_matching_avoiding(g, c, v).is_none()) else {
                continue;
            };
            let rest = VertexSet::new(c.iter().filter(|&w| w != v));
            let local = g.induced(&rest)?;
            match tutte_witness(&local.graph)? {
                TutteOutcome::Barrier(sp) => {
                    s.push(v);
                    s.extend(sp.iter().map(|w| local.to_host(w)));
                }
                TutteOutcome::HasPerfectMatching(_) => {
                    return Err(Error::Internal(format!(
                        "component {c:?} minus {v} has a perfect matching after all"
                    )));
                }
            }
            repaired = true;
            break;
        }
        if !repaired {
            return Ok(BarrierResult {
                s: sv,
                components,
                deficiency: target,
            });
        }
    }
}

/// Exhaustive deficiency: the maximum of `c_odd(G - X) - |X|` over all `X`,
/// with a maximiser of largest size (lexicographically least among those).
pub fn deficiency_oracle(g: &Graph) -> Result<(usize, VertexSet)> {
    deficiency_oracle_with(g, Execution::default())
}

/// Largest order the exhaustive oracles accept.
pub const ORACLE_LIMIT: usize = 26;

pub fn deficiency_oracle_with(g: &Graph, exec: Execution) -> Result<(usize, VertexSet)> {
    let n = g.order();
    if n > ORACLE_LIMIT {
        return Err(Error::Resource(format!(
            "exhaustive deficiency needs order at most {ORACLE_LIMIT}, got {n}"
        )));
    }
    let total = 1u64 << n;
    let best = map_chunks(exec, 0..total, 1 << 12, |range| {
        let mut best: Option<(i64, u64)> = None;
        for x in range {
            let mut odd = 0i64;
            g.for_each_component_mask(x, |order, _| {
                odd += (order % 2) as i64;
                true
            });
            let value = odd - x.count_ones() as i64;
            best = Some(match best {
                Some(b) if !better_deficiency((value, x), b) => b,
                _ => (value, x),
            });
        }
        best
    })
    .into_iter()
    .flatten()
    .reduce(|a, b| if better_deficiency(b, a) { b } else { a })
    .expect("at least the empty set is scanned");
    Ok((best.0 as usize, VertexSet::from_mask(best.1)))
}

fn better_deficiency(a: (i64, u64), b: (i64, u64)) -> bool {
    if a.0 != b.0 {
        return a.0 > b.0;
    }
    let (pa, pb) = (a.1.count_ones(), b.1.count_ones());
    if pa != pb {
        return pa > pb;
    }
    lex_less(a.1, b.1)
}

/// Lexicographic order on equal-size sets given as masks.
pub(crate) fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & diff & diff.wrapping_neg() != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }
    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }
    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
    }
    fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }
    fn windmill(s: usize) -> Graph {
        Graph::new(
            2 * s + 1,
            (0..s).flat_map(|j| [(0, 1 + 2 * j), (0, 2 + 2 * j), (1 + 2 * j, 2 + 2 * j)]),
        )
        .unwrap()
    }

    fn brute_matching_size(g: &Graph) -> usize {
        fn go(g: &Graph, used: &mut Vec<bool>, v: usize) -> usize {
            if v == g.order() {
                return 0;
            }
            if used[v] {
                return go(g, used, v + 1);
            }
            let mut best = go(g, used, v + 1);
            used[v] = true;
            for &w in g.neighbors(v) {
                if !used[w] {
                    used[w] = true;
                    best = best.max(1 + go(g, used, v + 1));
                    used[w] = false;
                }
            }
            used[v] = false;
            best
        }
        go(g, &mut vec![false; g.order()], 0)
    }

    #[test]
    fn matching_sizes() {
        assert_eq!(maximum_matching(&path(4)).size(), 2);
        assert_eq!(maximum_matching(&cycle(5)).size(), 2);
        // K1 + (K4 u 2K2) minus the centre: K4 u 2K2 on 8 vertices.
        let k4 = complete(4);
        let k2 = complete(2);
        let rest = k4.disjoint_union(&k2).disjoint_union(&k2);
        assert_eq!(maximum_matching(&rest).size(), 4);
        assert_eq!(brute_matching_size(&rest), 4);
    }

    #[test]
    fn matching_is_valid() {
        let g = windmill(4);
        let m = maximum_matching(&g);
        for (u, v) in m.pairs() {
            assert!(g.has_edge(u, v));
        }
        assert_eq!(m.size(), 4);
    }

    #[test]
    fn blossoms_are_handled() {
        // Two triangles joined by a path: needs blossom shrinking.
        let g = Graph::new(8, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 7)])
            .unwrap();
        assert_eq!(maximum_matching(&g).size(), brute_matching_size(&g));
        let petersen = Graph::new(
            10,
            [
                (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
            ],
        )
        .unwrap();
        assert_eq!(maximum_matching(&petersen).size(), 5);
    }

    #[test]
    fn factor_critical_examples() {
        assert!(is_factor_critical(&complete(3)));
        assert!(is_factor_critical(&windmill(3)));
        assert!(!is_factor_critical(&path(3)));
        assert!(is_factor_critical(&Graph::empty(1)));
        assert!(!is_factor_critical(&complete(4)));
        // Two disjoint triangles have even order; a triangle plus K2 is odd
        // but disconnected.
        assert!(!is_factor_critical(&complete(3).disjoint_union(&complete(2))));
    }

    #[test]
    fn tutte_examples() {
        assert!(matches!(tutte_witness(&complete(2)), Ok(TutteOutcome::HasPerfectMatching(_))));
        assert_eq!(tutte_witness(&Graph::empty(2)), Ok(TutteOutcome::Barrier(VertexSet::empty())));
        let g = path(3).disjoint_union(&Graph::empty(1));
        let TutteOutcome::Barrier(s) = tutte_witness(&g).unwrap() else {
            panic!("P3 u K1 has no perfect matching");
        };
        assert!(g.census(&s).unwrap().c_odd() >= s.len() + 2);
        assert!(tutte_witness(&complete(3)).is_err());
    }

    #[test]
    fn barrier_examples() {
        let b = select_barrier(&star(3));
        assert_eq!(b.s, VertexSet::new([0]));
        assert_eq!(b.components.len(), 3);
        assert_eq!(b.deficiency, 2);

        let b = select_barrier(&windmill(3));
        assert!(b.s.is_empty());
        assert_eq!(b.components.len(), 1);
        assert_eq!(b.deficiency, 1);

        let b = select_barrier(&complete(2));
        assert_eq!(b.s, VertexSet::new([0]));
        assert_eq!(b.components, vec![VertexSet::new([1])]);
        assert_eq!(b.deficiency, 0);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(deficiency_oracle(&cycle(5)).unwrap().0, 1);
        assert_eq!(deficiency_oracle(&complete(4)).unwrap().0, 0);
        assert_eq!(deficiency_oracle(&Graph::empty(3)).unwrap(), (3, VertexSet::empty()));
    }

    #[test]
    fn lex_order_on_masks() {
        // {0,3} < {1,2}
        assert!(lex_less(0b1001, 0b0110));
        assert!(!lex_less(0b0110, 0b1001));
        assert!(!lex_less(0b11, 0b11));
    }
}
