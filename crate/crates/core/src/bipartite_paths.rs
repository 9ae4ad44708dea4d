//! Path systems in a bipartite graph `(S, T)` with two marked classes
//! `T1`, `T2 ⊆ T` and a forbidden edge set `L`.
//!
//! [`construct`] looks for vertex-disjoint paths covering `S ∪ T1 ∪ T2`
//! where every path is either a single edge (shape I) or avoids `L`, has all
//! its `T`-nodes in `T1 ∪ T2`, and has exactly two `T2`-nodes, which are its
//! ends (shape II). It succeeds whenever
//!
//! * `|N(X)| >= |X|` for every `X ⊆ S`, and
//! * `|N_{G-L}(Y)| >= |Y ∩ T1| + |Y ∩ T2| / 2` for every `Y ⊆ T1 ∪ T2`,
//!
//! and otherwise may return a set violating one of these inequalities.
//!
//! The search runs in two phases. The first works in `G - L` restricted to
//! `T1 ∪ T2`: it matches `T1` into `S` and then absorbs the uncovered
//! `T2`-nodes one at a time through a layered search over the current
//! paths. The second covers the remaining `S`-nodes with alternating
//! searches in the full graph.

use std::collections::HashSet;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bipartite instance. Nodes are referred to by index into `s_side` and
/// `t_side`; the labels are payload ids chosen by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxiliaryBipartite {
    pub s_side: Vec<usize>,
    pub t_side: Vec<usize>,
    /// `(s, t)` index pairs.
    pub adjacency: Vec<(usize, usize)>,
    /// Subset of `adjacency` that shape-II paths may not use.
    pub forbidden: Vec<(usize, usize)>,
    pub t1: Vec<usize>,
    pub t2: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    S(usize),
    T(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxPath {
    pub shape: Shape,
    pub nodes: Vec<Node>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxPathSystem {
    pub paths: Vec<AuxPath>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessSide {
    /// A set `X ⊆ S` with `|N(X)| < |X|`.
    #[serde(rename = "S_SIDE")]
    S,
    /// A set `Y ⊆ T1 ∪ T2` with `|N_{G-L}(Y)| < |Y ∩ T1| + |Y ∩ T2| / 2`.
    #[serde(rename = "T_SIDE")]
    T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallWitness {
    pub side: WitnessSide,
    /// Sorted node indices on the witness side.
    pub nodes: Vec<usize>,
    pub neighborhood: usize,
    pub bound: Rational64,
}

impl HallWitness {
    /// Recounts the neighbourhood and bound from `aux` and checks the strict
    /// inequality.
    pub fn verify(&self, aux: &AuxiliaryBipartite) -> bool {
        let Ok(idx) = Index::new(aux) else {
            return false;
        };
        let (nb, bound) = match self.side {
            WitnessSide::S => {
                if self.nodes.iter().any(|&s| s >= aux.s_side.len()) {
                    return false;
                }
                let nb: HashSet<usize> = self
                    .nodes
                    .iter()
                    .flat_map(|&s| idx.s_adj[s].iter().copied())
                    .collect();
                (nb.len(), Rational64::from_integer(self.nodes.len() as i64))
            }
            WitnessSide::T => {
                if self.nodes.iter().any(|&t| t >= aux.t_side.len() || idx.class[t] == 0) {
                    return false;
                }
                let nb: HashSet<usize> = self
                    .nodes
                    .iter()
                    .flat_map(|&t| allowed_s(&idx, t))
                    .collect();
                (nb.len(), t_side_bound(&idx, &self.nodes))
            }
        };
        nb == self.neighborhood && bound == self.bound && Rational64::from_integer(nb as i64) < bound
    }
}

fn t_side_bound(idx: &Index, ys: &[usize]) -> Rational64 {
    let t1 = ys.iter().filter(|&&t| idx.class[t] == 1).count() as i64;
    let t2 = ys.iter().filter(|&&t| idx.class[t] == 2).count() as i64;
    Rational64::new(2 * t1 + t2, 2)
}

/// Outcome of [`construct`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    System(AuxPathSystem),
    Witness(HallWitness),
}

/// First clause of the path-system contract that a system breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxViolation {
    pub clause: &'static str,
    pub path: Option<usize>,
}

impl fmt::Display for AuxViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.path {
            Some(p) => write!(f, "path {p}: {}", self.clause),
            None => f.write_str(self.clause),
        }
    }
}

/// Adjacency lookups for an instance.
struct Index {
    s_adj: Vec<Vec<usize>>,
    t_adj: Vec<Vec<usize>>,
    edges: HashSet<(usize, usize)>,
    forbidden: HashSet<(usize, usize)>,
    /// 0 = plain T, 1 = T1, 2 = T2.
    class: Vec<u8>,
}

impl Index {
    fn new(aux: &AuxiliaryBipartite) -> Result<Self> {
        let (ns, nt) = (aux.s_side.len(), aux.t_side.len());
        let mut s_adj = vec![Vec::new(); ns];
        let mut t_adj = vec![Vec::new(); nt];
        let mut edges = HashSet::new();
        for &(s, t) in &aux.adjacency {
            if s >= ns || t >= nt {
                return Err(Error::Input(format!("edge ({s}, {t}) out of range")));
            }
            if !edges.insert((s, t)) {
                return Err(Error::Input(format!("edge ({s}, {t}) listed twice")));
            }
            s_adj[s].push(t);
            t_adj[t].push(s);
        }
        for list in s_adj.iter_mut().chain(t_adj.iter_mut()) {
            list.sort_unstable();
        }
        let mut forbidden = HashSet::new();
        for &e in &aux.forbidden {
            if !edges.contains(&e) {
                return Err(Error::Input(format!("forbidden pair {e:?} is not an edge")));
            }
            forbidden.insert(e);
        }
        let mut class = vec![0u8; nt];
        for (list, c) in [(&aux.t1, 1u8), (&aux.t2, 2u8)] {
            for &t in list {
                if t >= nt {
                    return Err(Error::Input(format!("marked node {t} out of range")));
                }
                if class[t] != 0 {
                    return Err(Error::Input(format!("node {t} marked twice")));
                }
                class[t] = c;
            }
        }
        Ok(Index {
            s_adj,
            t_adj,
            edges,
            forbidden,
            class,
        })
    }

    fn is_forbidden(&self, s: usize, t: usize) -> bool {
        self.forbidden.contains(&(s, t))
    }

    fn adjacent(&self, a: Node, b: Node) -> Option<(usize, usize)> {
        match (a, b) {
            (Node::S(s), Node::T(t)) | (Node::T(t), Node::S(s)) => {
                self.edges.contains(&(s, t)).then_some((s, t))
            }
            _ => None,
        }
    }
}

/// Checks every clause of the path-system contract.
pub fn verify_aux_system(
    aux: &AuxiliaryBipartite,
    sys: &AuxPathSystem,
) -> std::result::Result<(), AuxViolation> {
    let fail = |clause, path| Err(AuxViolation { clause, path });
    let Ok(idx) = Index::new(aux) else {
        return fail("instance is well formed", None);
    };
    let mut seen = HashSet::new();
    for (p, path) in sys.paths.iter().enumerate() {
        if path.nodes.len() < 2 {
            return fail("every path has at least two nodes", Some(p));
        }
        for &node in &path.nodes {
            let ok = match node {
                Node::S(s) => s < aux.s_side.len(),
                Node::T(t) => t < aux.t_side.len(),
            };
            if !ok {
                return fail("nodes are in range", Some(p));
            }
            if !seen.insert(node) {
                return fail("paths are node-disjoint", Some(p));
            }
        }
        let mut pairs = Vec::new();
        for w in path.nodes.windows(2) {
            match idx.adjacent(w[0], w[1]) {
                Some(e) => pairs.push(e),
                None => return fail("E(A) ⊆ E(G)", Some(p)),
            }
        }
        match path.shape {
            Shape::I => {
                if path.nodes.len() != 2 {
                    return fail("|V(A)| = 2", Some(p));
                }
            }
            Shape::II => {
                if pairs.iter().any(|&(s, t)| idx.is_forbidden(s, t)) {
                    return fail("E(A) ⊆ E(G)−L", Some(p));
                }
                let ts: Vec<usize> = path
                    .nodes
                    .iter()
                    .filter_map(|n| match n {
                        Node::T(t) => Some(*t),
                        Node::S(_) => None,
                    })
                    .collect();
                if ts.iter().any(|&t| idx.class[t] == 0) {
                    return fail("V(A) ∩ T ⊆ T1 ∪ T2", Some(p));
                }
                let t2: Vec<usize> = ts.iter().copied().filter(|&t| idx.class[t] == 2).collect();
                if t2.len() != 2 {
                    return fail("|V(A) ∩ T2| = 2", Some(p));
                }
                let ends = [path.nodes[0], *path.nodes.last().expect("non-empty")];
                if !t2.iter().all(|&t| ends.contains(&Node::T(t))) {
                    return fail("T2 nodes are the endvertices", Some(p));
                }
            }
        }
    }
    if (0..aux.s_side.len()).any(|s| !seen.contains(&Node::S(s))) {
        return fail("covers S", None);
    }
    if aux.t1.iter().any(|&t| !seen.contains(&Node::T(t))) {
        return fail("covers T1", None);
    }
    if aux.t2.iter().any(|&t| !seen.contains(&Node::T(t))) {
        return fail("covers T2", None);
    }
    Ok(())
}

/// The current path system during the search. Slots of removed paths are
/// left empty.
struct Forest {
    paths: Vec<Vec<Node>>,
    of_s: Vec<Option<usize>>,
    of_t: Vec<Option<usize>>,
}

impl Forest {
    fn new(ns: usize, nt: usize) -> Self {
        Forest {
            paths: Vec::new(),
            of_s: vec![None; ns],
            of_t: vec![None; nt],
        }
    }

    fn add(&mut self, nodes: Vec<Node>) {
        let id = self.paths.len();
        for &n in &nodes {
            match n {
                Node::S(s) => self.of_s[s] = Some(id),
                Node::T(t) => self.of_t[t] = Some(id),
            }
        }
        self.paths.push(nodes);
    }

    fn remove(&mut self, id: usize) -> Vec<Node> {
        let nodes = std::mem::take(&mut self.paths[id]);
        for &n in &nodes {
            match n {
                Node::S(s) => self.of_s[s] = None,
                Node::T(t) => self.of_t[t] = None,
            }
        }
        nodes
    }

    fn system(&self) -> AuxPathSystem {
        let mut paths: Vec<AuxPath> = self
            .paths
            .iter()
            .filter(|p| !p.is_empty())
            .map(|p| {
                let mut nodes = p.clone();
                // Shape I reads S then T; shape II starts at its smaller end.
                if nodes[0] > nodes[nodes.len() - 1] {
                    nodes.reverse();
                }
                AuxPath {
                    shape: if nodes.len() == 2 { Shape::I } else { Shape::II },
                    nodes,
                }
            })
            .collect();
        paths.sort_by(|a, b| a.nodes.iter().min().cmp(&b.nodes.iter().min()));
        AuxPathSystem { paths }
    }
}

/// A member of the layered search: an uncovered root node or a path of the
/// current system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    Root(Node),
    Path(usize),
}

/// How an item was reached: its parent item and the edge `(entry, exit)`
/// with `entry` in the item and `exit` in the parent.
#[derive(Clone, Copy, Debug)]
struct Link {
    parent: usize,
    entry: Node,
    exit: Node,
}

fn nodes_of(forest: &Forest, item: Item) -> Vec<Node> {
    match item {
        Item::Root(n) => vec![n],
        Item::Path(id) => forest.paths[id].clone(),
    }
}

/// Walks the links back to a root. Returns items `A_0 .. A_i` and, for each
/// `j < i`, the pair `(entry node of A_{j+1}, exit node of A_j)`.
fn chain(items: &[(Item, Option<Link>)], last: usize) -> (Vec<Item>, Vec<(Node, Node)>) {
    let mut order = vec![last];
    let mut cur = last;
    while let Some(link) = items[cur].1 {
        cur = link.parent;
        order.push(cur);
    }
    order.reverse();
    let seq: Vec<Item> = order.iter().map(|&k| items[k].0).collect();
    let links = order[1..]
        .iter()
        .map(|&k| {
            let l = items[k].1.expect("non-root items have links");
            (l.entry, l.exit)
        })
        .collect();
    (seq, links)
}

/// Pairs up consecutive nodes of a path with one node removed; both sides
/// have even length when the removed node sits at an even index.
fn pair_around(nodes: &[Node], removed: Node) -> Result<Vec<(Node, Node)>> {
    let pos = nodes
        .iter()
        .position(|&n| n == removed)
        .ok_or_else(|| Error::Internal("removed node not on its path".into()))?;
    if pos % 2 == 1 {
        return Err(Error::Internal("odd-position node removed from an odd path".into()));
    }
    let mut out = Vec::new();
    for side in [&nodes[..pos], &nodes[pos + 1..]] {
        for pair in side.chunks(2) {
            out.push((pair[0], pair[1]));
        }
    }
    Ok(out)
}

fn t_of(n: Node) -> usize {
    match n {
        Node::T(t) => t,
        Node::S(_) => panic!("expected a T node"),
    }
}

/// Runs both phases. On success the returned system has passed
/// [`verify_aux_system`]; a returned witness has passed
/// [`HallWitness::verify`].
pub fn construct(aux: &AuxiliaryBipartite) -> Result<Construction> {
    let idx = Index::new(aux)?;
    let (ns, nt) = (aux.s_side.len(), aux.t_side.len());
    let mut forest = Forest::new(ns, nt);

    if let Some(w) = match_t1(aux, &idx, &mut forest) {
        return checked_witness(aux, w);
    }
    if let Some(w) = absorb_t2(aux, &idx, &mut forest)? {
        return checked_witness(aux, w);
    }
    if let Some(w) = cover_s(&idx, &mut forest)? {
        return checked_witness(aux, w);
    }
    let sys = forest.system();
    verify_aux_system(aux, &sys)
        .map_err(|v| Error::Internal(format!("constructed path system fails: {v}")))?;
    Ok(Construction::System(sys))
}

fn checked_witness(aux: &AuxiliaryBipartite, w: HallWitness) -> Result<Construction> {
    if !w.verify(aux) {
        return Err(Error::Internal(format!("Hall witness does not verify: {w:?}")));
    }
    Ok(Construction::Witness(w))
}

fn allowed_s(idx: &Index, t: usize) -> impl Iterator<Item = usize> + '_ {
    idx.t_adj[t].iter().copied().filter(move |&s| !idx.is_forbidden(s, t))
}

/// Matches every `T1` node into `S` along allowed edges, or returns a
/// deficient subset of `T1`.
fn match_t1(aux: &AuxiliaryBipartite, idx: &Index, forest: &mut Forest) -> Option<HallWitness> {
    let ns = aux.s_side.len();
    let mut mate_s: Vec<Option<usize>> = vec![None; ns];
    let mut t1 = aux.t1.clone();
    t1.sort_unstable();

    fn kuhn(
        idx: &Index,
        t: usize,
        seen_s: &mut [bool],
        seen_t: &mut Vec<usize>,
        mate_s: &mut [Option<usize>],
    ) -> bool {
        seen_t.push(t);
        let options: Vec<usize> = allowed_s(idx, t).collect();
        for s in options {
            if seen_s[s] {
                continue;
            }
            seen_s[s] = true;
            let free = match mate_s[s] {
                None => true,
                Some(t2) => kuhn(idx, t2, seen_s, seen_t, mate_s),
            };
            if free {
                mate_s[s] = Some(t);
                return true;
            }
        }
        false
    }

    for &t in &t1 {
        let mut seen_s = vec![false; ns];
        let mut seen_t = Vec::new();
        if !kuhn(idx, t, &mut seen_s, &mut seen_t, &mut mate_s) {
            seen_t.sort_unstable();
            seen_t.dedup();
            let neighborhood = seen_s.iter().filter(|&&x| x).count();
            let bound = t_side_bound(idx, &seen_t);
            return Some(HallWitness {
                side: WitnessSide::T,
                nodes: seen_t,
                neighborhood,
                bound,
            });
        }
    }
    for (s, m) in mate_s.iter().enumerate() {
        if let Some(t) = m {
            forest.add(vec![Node::T(*t), Node::S(s)]);
        }
    }
    None
}

/// Absorbs the uncovered `T2` nodes one at a time.
fn absorb_t2(aux: &AuxiliaryBipartite, idx: &Index, forest: &mut Forest) -> Result<Option<HallWitness>> {
    loop {
        let mut roots: Vec<usize> = aux
            .t2
            .iter()
            .copied()
            .filter(|&t| forest.of_t[t].is_none())
            .collect();
        if roots.is_empty() {
            return Ok(None);
        }
        roots.sort_unstable();
        let mut items: Vec<(Item, Option<Link>)> =
            roots.iter().map(|&t| (Item::Root(Node::T(t)), None)).collect();
        let mut visited = vec![false; forest.paths.len()];
        let mut head = 0;
        let mut progressed = false;
        'search: while head < items.len() {
            let here = head;
            head += 1;
            let mut ts: Vec<usize> = nodes_of(forest, items[here].0)
                .into_iter()
                .filter_map(|n| match n {
                    Node::T(t) => Some(t),
                    Node::S(_) => None,
                })
                .collect();
            ts.sort_unstable();
            for t in ts {
                for s in allowed_s(idx, t).collect::<Vec<_>>() {
                    match forest.of_s[s] {
                        None => {
                            rematch_from_t(forest, &items, here, Node::T(t), s)?;
                            progressed = true;
                            break 'search;
                        }
                        Some(c) if !visited[c] => {
                            visited[c] = true;
                            items.push((
                                Item::Path(c),
                                Some(Link {
                                    parent: here,
                                    entry: Node::S(s),
                                    exit: Node::T(t),
                                }),
                            ));
                            let nodes = &forest.paths[c];
                            let is_t2_edge = nodes.len() == 2
                                && nodes.iter().any(|&n| matches!(n, Node::T(x) if idx.class[x] == 2));
                            if is_t2_edge {
                                splice(forest, &items, items.len() - 1)?;
                                progressed = true;
                                break 'search;
                            }
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        if !progressed {
            let mut ys: Vec<usize> = items
                .iter()
                .flat_map(|&(item, _)| nodes_of(forest, item))
                .filter_map(|n| match n {
                    Node::T(t) => Some(t),
                    Node::S(_) => None,
                })
                .collect();
            ys.sort_unstable();
            let nb: HashSet<usize> = ys.iter().flat_map(|&t| allowed_s(idx, t)).collect();
            let bound = t_side_bound(idx, &ys);
            return Ok(Some(HallWitness {
                side: WitnessSide::T,
                nodes: ys,
                neighborhood: nb.len(),
                bound,
            }));
        }
    }
}

/// An uncovered `S` node `s` sees the `T` node `exit` of item `last`:
/// re-match from the last odd item of the chain down to `s`.
fn rematch_from_t(
    forest: &mut Forest,
    items: &[(Item, Option<Link>)],
    last: usize,
    exit: Node,
    s: usize,
) -> Result<()> {
    let (seq, links) = chain(items, last);
    let len = |item: Item| match item {
        Item::Root(_) => 1,
        Item::Path(id) => forest.paths[id].len(),
    };
    let k = (0..seq.len())
        .rev()
        .find(|&j| len(seq[j]) % 2 == 1)
        .expect("the root has odd order");
    // Exit node of A_j for j >= k: links[j].1 for j < i, `exit` for A_i.
    let exit_of = |j: usize| if j + 1 < seq.len() { links[j].1 } else { exit };
    let mut pairs: Vec<(Node, Node)> = Vec::new();
    if let Item::Path(id) = seq[k] {
        pairs.extend(pair_around(&forest.paths[id], exit_of(k))?);
    }
    for j in k..seq.len() {
        let entry_next = if j + 1 < seq.len() { links[j].0 } else { Node::S(s) };
        pairs.push((exit_of(j), entry_next));
    }
    for item in &seq[k..] {
        if let Item::Path(id) = *item {
            forest.remove(id);
        }
    }
    for (a, b) in pairs {
        forest.add(vec![a, b]);
    }
    Ok(())
}

/// Item `last` is a single edge whose `T` node lies in `T2`: rebuild the
/// chain into shape-II paths and single edges, absorbing the root.
fn splice(forest: &mut Forest, items: &[(Item, Option<Link>)], last: usize) -> Result<()> {
    let (seq, links) = chain(items, last);
    let i = seq.len() - 1;
    // Oriented node sequences and cut positions for each chain member.
    // prefix[j] = Q'_j (ends at the exit T node), suffix[j] = Q''_j (starts
    // at the entry S node), middle[j] = what lies between.
    let mut prefix: Vec<Vec<Node>> = vec![Vec::new(); i + 1];
    let mut suffix: Vec<Vec<Node>> = vec![Vec::new(); i + 1];
    let mut middle: Vec<Vec<Node>> = vec![Vec::new(); i + 1];
    let mut long = vec![false; i + 1];
    for j in 0..=i {
        let mut nodes = nodes_of(forest, seq[j]);
        if j == 0 {
            prefix[0] = nodes;
            continue;
        }
        let entry = links[j - 1].0;
        if j == i {
            if nodes[0] != entry {
                nodes.reverse();
            }
            suffix[i] = nodes;
            continue;
        }
        let exit = links[j].1;
        let pos = |nodes: &[Node], n: Node| nodes.iter().position(|&x| x == n).expect("on path");
        if pos(&nodes, exit) > pos(&nodes, entry) {
            nodes.reverse();
        }
        let (pt, ps) = (pos(&nodes, exit), pos(&nodes, entry));
        prefix[j] = nodes[..=pt].to_vec();
        middle[j] = nodes[pt + 1..ps].to_vec();
        suffix[j] = nodes[ps..].to_vec();
        long[j] = nodes.len() >= 3;
    }
    let mut cuts = vec![0];
    cuts.extend((1..i).filter(|&j| long[j]));
    cuts.push(i);
    let mut new_paths: Vec<Vec<Node>> = Vec::new();
    for h in 1..cuts.len() {
        let (a, b) = (cuts[h - 1], cuts[h]);
        let mut q = prefix[a].clone();
        for j in a + 1..b {
            // A single edge entered at its S node and left at its T node.
            q.push(links[j - 1].0);
            q.push(links[j].1);
        }
        q.extend(&suffix[b]);
        new_paths.push(q);
    }
    for &j in &cuts[1..cuts.len() - 1] {
        if middle[j].len() % 2 == 1 {
            return Err(Error::Internal("odd middle segment in splice".into()));
        }
        for pair in middle[j].chunks(2) {
            new_paths.push(pair.to_vec());
        }
    }
    for item in &seq[1..] {
        if let Item::Path(id) = *item {
            forest.remove(id);
        }
    }
    for p in new_paths {
        forest.add(p);
    }
    Ok(())
}

/// Covers the remaining `S` nodes using the full edge set.
fn cover_s(idx: &Index, forest: &mut Forest) -> Result<Option<HallWitness>> {
    let ns = forest.of_s.len();
    loop {
        let roots: Vec<usize> = (0..ns).filter(|&s| forest.of_s[s].is_none()).collect();
        if roots.is_empty() {
            return Ok(None);
        }
        let mut items: Vec<(Item, Option<Link>)> =
            roots.iter().map(|&s| (Item::Root(Node::S(s)), None)).collect();
        let mut seen_path = vec![false; forest.paths.len()];
        let mut seen_free = vec![false; forest.of_t.len()];
        let mut head = 0;
        let mut found: Option<(usize, Node)> = None;
        'search: while head < items.len() {
            let here = head;
            head += 1;
            let ss: Vec<usize> = nodes_of(forest, items[here].0)
                .into_iter()
                .filter_map(|n| match n {
                    Node::S(s) => Some(s),
                    Node::T(_) => None,
                })
                .collect();
            for s in ss {
                for &t in &idx.s_adj[s] {
                    let link = Link {
                        parent: here,
                        entry: Node::T(t),
                        exit: Node::S(s),
                    };
                    match forest.of_t[t] {
                        None if !seen_free[t] => {
                            seen_free[t] = true;
                            items.push((Item::Root(Node::T(t)), Some(link)));
                            found = Some((items.len() - 1, Node::T(t)));
                            break 'search;
                        }
                        Some(c) if !seen_path[c] => {
                            seen_path[c] = true;
                            items.push((Item::Path(c), Some(link)));
                            if forest.paths[c].len() % 2 == 1 {
                                found = Some((items.len() - 1, Node::T(t)));
                                break 'search;
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        let Some((last, hit)) = found else {
            let mut xs: Vec<usize> = items
                .iter()
                .flat_map(|&(item, _)| nodes_of(forest, item))
                .filter_map(|n| match n {
                    Node::S(s) => Some(s),
                    Node::T(_) => None,
                })
                .collect();
            xs.sort_unstable();
            let nb: HashSet<usize> = xs.iter().flat_map(|&s| idx.s_adj[s].iter().copied()).collect();
            return Ok(Some(HallWitness {
                side: WitnessSide::S,
                neighborhood: nb.len(),
                bound: Rational64::from_integer(xs.len() as i64),
                nodes: xs,
            }));
        };
        let (seq, links) = chain(&items, last);
        let mut pairs: Vec<(Node, Node)> = links.iter().map(|&(entry, exit)| (exit, entry)).collect();
        if let Item::Path(id) = seq[seq.len() - 1] {
            pairs.extend(pair_around(&forest.paths[id], hit)?);
        }
        for item in &seq[1..] {
            if let Item::Path(id) = *item {
                forest.remove(id);
            }
        }
        for (a, b) in pairs {
            forest.add(vec![a, b]);
        }
    }
}

/// Largest side the exhaustive hypothesis check accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Checks both hypotheses over all subsets.
pub fn brute_force_hypotheses(aux: &AuxiliaryBipartite) -> Result<bool> {
    let idx = Index::new(aux)?;
    let ns = aux.s_side.len();
    let marked: Vec<usize> = aux.t1.iter().chain(&aux.t2).copied().collect();
    if ns > BRUTE_FORCE_LIMIT || marked.len() > BRUTE_FORCE_LIMIT || aux.t_side.len() > 64 {
        return Err(Error::Resource(format!(
            "exhaustive hypothesis check allows at most {BRUTE_FORCE_LIMIT} nodes per side"
        )));
    }
    let s_masks: Vec<u64> = (0..ns)
        .map(|s| idx.s_adj[s].iter().fold(0u64, |m, &t| m | 1 << t))
        .collect();
    for x in 1u64..(1u64 << ns) {
        let mut nb = 0u64;
        let mut rest = x;
        while rest != 0 {
            nb |= s_masks[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        if nb.count_ones() < x.count_ones() {
            return Ok(false);
        }
    }
    let t_masks: Vec<u32> = marked
        .iter()
        .map(|&t| allowed_s(&idx, t).fold(0u32, |m, s| m | 1 << s))
        .collect();
    for y in 1u64..(1u64 << marked.len()) {
        let (mut nb, mut weight, mut rest) = (0u32, 0u32, y);
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            nb |= t_masks[i];
            weight += if idx.class[marked[i]] == 1 { 2 } else { 1 };
            rest &= rest - 1;
        }
        if 2 * nb.count_ones() < weight {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The marked `T` node at either end of a shape-II path.
pub fn t2_ends(path: &AuxPath) -> Option<(usize, usize)> {
    (path.shape == Shape::II).then(|| (t_of(path.nodes[0]), t_of(*path.nodes.last().expect("non-empty"))))
}
