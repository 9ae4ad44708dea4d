//! The certificate-or-factor pipeline.
//!
//! A barrier `S` splits `G` into odd factor-critical components. Components
//! that cannot carry their own factor are marked (`T1` small, `T2` large) and
//! a bipartite path system between `S` and the components decides how `S`
//! is absorbed. Each shape-I path becomes an edge into a component plus a
//! perfect matching of the rest; each shape-II path threads one long path
//! through its components. A Hall violation in the bipartite graph is lifted
//! to a set violating the sufficient condition.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bipartite_paths::{construct, AuxiliaryBipartite, Construction, HallWitness, Node, Shape, WitnessSide};
use crate::conditions::{ConditionCertificate, ConditionSpec};
use crate::error::{Error, Result};
use crate::graph::{Graph, Induced, VertexSet};
use crate::hypomatchable::{
    alternating_path_to, classify_no_factor, crush_set, is_windmill, long_alternating_path, FamilyTag,
};
use crate::matching::{is_factor_critical, perfect_matching_avoiding, select_barrier, Matching};

use super::oracle::brute_force_factor_within;
use super::{normalize_factor, residual_pairs, verify_factor, PathSystem};

/// Step budget of the exhaustive search tried when the pipeline ends in a
/// certificate, and of the last-resort search inside a component.
pub const DIRECT_SEARCH_BUDGET: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentRole {
    /// Too small to carry a factor.
    T1,
    /// Factor-critical without a factor, absorbed at the end of a long path.
    T2,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// Assembled from the bipartite path system.
    Pipeline,
    /// The pipeline produced a certificate, but exhaustive search found a
    /// factor anyway (the condition is sufficient, not necessary).
    DirectSearch,
    /// The pipeline's Hall violation, lifted.
    Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub vertices: VertexSet,
    pub role: ComponentRole,
    pub tag: Option<FamilyTag>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub k: usize,
    pub barrier: VertexSet,
    pub components: Vec<ComponentInfo>,
    pub aux: AuxiliaryBipartite,
    pub construction: Option<Construction>,
    /// Vertex set read off a Hall witness before lifting.
    pub hall_set: Option<VertexSet>,
    pub route: Route,
    pub steps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Factor(PathSystem),
    Certificate(ConditionCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOutcome {
    pub outcome: Outcome,
    pub trace: Trace,
}

impl BuildOutcome {
    pub fn factor(&self) -> Option<&PathSystem> {
        match &self.outcome {
            Outcome::Factor(f) => Some(f),
            Outcome::Certificate(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&ConditionCertificate> {
        match &self.outcome {
            Outcome::Certificate(c) => Some(c),
            Outcome::Factor(_) => None,
        }
    }
}

/// Either a verified {P2, P7}-factor or a set violating
/// `c1 + c3/3 + c5/3 <= 2|X|/3`.
pub fn build_p2p7(g: &Graph) -> Result<BuildOutcome> {
    build(g, 3)
}

/// Either a verified {P2, P9}-factor or a set violating
/// `c1 + c3 + 2c5/3 + c7/3 <= 2|X|/3`.
pub fn build_p2p9(g: &Graph) -> Result<BuildOutcome> {
    build(g, 4)
}

/// Runs the builder for `k = 3` or `k = 4`.
pub fn build(g: &Graph, k: usize) -> Result<BuildOutcome> {
    if k != 3 && k != 4 {
        return Err(Error::Input(format!("k must be 3 or 4, got {k}")));
    }
    let mut b = Builder::new(g, k)?;
    let construction = construct(&b.aux)?;
    b.trace.construction = Some(construction.clone());
    let outcome = match construction {
        Construction::System(sys) => {
            let mut paths = Vec::new();
            let mut covered = vec![false; b.comps.len()];
            for path in &sys.paths {
                for node in &path.nodes {
                    if let Node::T(t) = node {
                        covered[*t] = true;
                    }
                }
                match path.shape {
                    Shape::I => paths.extend(b.single_edge(&path.nodes)?),
                    Shape::II => paths.extend(b.long_path(&path.nodes)?),
                }
            }
            for (t, comp) in b.comps.iter().enumerate() {
                if !covered[t] {
                    let local = component_factor(&comp.local.graph, k)?;
                    b.trace.steps.push(format!("component {t} carries its own factor"));
                    paths.extend(local.paths.into_iter().map(|p| to_host(&comp.local, &p)));
                }
            }
            let f = normalize_factor(g, &PathSystem::new(paths), k)?;
            Outcome::Factor(f)
        }
        Construction::Witness(w) => {
            let cert = b.lift(&w)?;
            b.trace.route = Route::Certificate;
            match brute_force_factor_within(g, k, DIRECT_SEARCH_BUDGET) {
                Ok(Some(f)) => {
                    b.trace.route = Route::DirectSearch;
                    b.trace.steps.push(format!(
                        "condition fails at {:?}, exhaustive search found a factor",
                        cert.x
                    ));
                    Outcome::Factor(f)
                }
                _ => Outcome::Certificate(cert),
            }
        }
    };
    match &outcome {
        Outcome::Factor(f) => verify_factor(g, f, k)
            .map_err(|e| Error::Internal(format!("assembled factor fails verification: {e}")))?,
        Outcome::Certificate(c) => {
            if !c.recompute(g) {
                return Err(Error::Internal("certificate fails recomputation".into()));
            }
        }
    }
    Ok(BuildOutcome {
        outcome,
        trace: b.trace,
    })
}

fn to_host(local: &Induced, path: &[usize]) -> Vec<usize> {
    path.iter().map(|&v| local.to_host(v)).collect()
}

struct Comp {
    local: Induced,
    role: ComponentRole,
    /// Centre of a windmill `K1 + sK2` with `s >= 3`.
    windmill_centre: Option<usize>,
}

struct Builder<'a> {
    g: &'a Graph,
    k: usize,
    s: Vec<usize>,
    comps: Vec<Comp>,
    aux: AuxiliaryBipartite,
    trace: Trace,
}

/// Role of a factor-critical component: `T1`/`T2` when it has no factor of
/// its own, split by order at 1 (k = 3) or 5 (k = 4).
fn role_of(local: &Graph, k: usize) -> Result<(ComponentRole, Option<FamilyTag>)> {
    let n = local.order();
    let small = if k == 3 { 1 } else { 5 };
    if n <= small {
        return Ok((ComponentRole::T1, None));
    }
    if n < 2 * k + 1 {
        return Ok((ComponentRole::T2, None));
    }
    let tag = classify_no_factor(local, k)?.tag;
    let role = if tag.is_family() { ComponentRole::T2 } else { ComponentRole::Other };
    Ok((role, Some(tag)))
}

impl<'a> Builder<'a> {
    fn new(g: &'a Graph, k: usize) -> Result<Self> {
        let barrier = select_barrier(g);
        let s: Vec<usize> = barrier.s.as_slice().to_vec();
        let mut comps = Vec::new();
        let mut infos = Vec::new();
        for c in &barrier.components {
            let local = g.induced(c)?;
            let (role, tag) = role_of(&local.graph, k)?;
            let windmill_centre = is_windmill(&local.graph).filter(|_| local.graph.order() >= 7);
            infos.push(ComponentInfo {
                vertices: c.clone(),
                role,
                tag,
            });
            comps.push(Comp {
                local,
                role,
                windmill_centre,
            });
        }
        let mut aux = AuxiliaryBipartite {
            s_side: s.clone(),
            t_side: (0..comps.len()).collect(),
            ..Default::default()
        };
        let mut owner = vec![usize::MAX; g.order()];
        for (t, c) in barrier.components.iter().enumerate() {
            for v in c.iter() {
                owner[v] = t;
            }
        }
        for (i, &u) in s.iter().enumerate() {
            let mut seen: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &w in g.neighbors(u) {
                if owner[w] != usize::MAX {
                    seen.entry(owner[w]).or_default().push(w);
                }
            }
            for (t, hits) in seen {
                aux.adjacency.push((i, t));
                let comp = &comps[t];
                if k == 4 && comp.role == ComponentRole::T2 {
                    if let Some(c) = comp.windmill_centre {
                        if hits == [comp.local.to_host(c)] {
                            aux.forbidden.push((i, t));
                        }
                    }
                }
            }
        }
        for (t, c) in comps.iter().enumerate() {
            match c.role {
                ComponentRole::T1 => aux.t1.push(t),
                ComponentRole::T2 => aux.t2.push(t),
                ComponentRole::Other => {}
            }
        }
        let trace = Trace {
            k,
            barrier: barrier.s.clone(),
            components: infos,
            aux: aux.clone(),
            construction: None,
            hall_set: None,
            route: Route::Pipeline,
            steps: Vec::new(),
        };
        Ok(Builder {
            g,
            k,
            s,
            comps,
            aux,
            trace,
        })
    }

    /// Local neighbours of host vertex `u` inside component `t`, ascending.
    fn hits(&self, u: usize, t: usize) -> Vec<usize> {
        let local = &self.comps[t].local;
        self.g
            .neighbors(u)
            .iter()
            .filter_map(|&w| local.to_local(w))
            .collect()
    }

    /// A perfect matching of component `t` minus local vertex `v`.
    fn matching_avoiding(&self, t: usize, v: usize) -> Result<Matching> {
        let local = &self.comps[t].local.graph;
        perfect_matching_avoiding(local, &VertexSet::new(0..local.order()), v)
            .ok_or_else(|| Error::Internal(format!("component {t} is not factor-critical at {v}")))
    }

    fn single_edge(&mut self, nodes: &[Node]) -> Result<Vec<Vec<usize>>> {
        let (i, t) = match nodes {
            [Node::S(i), Node::T(t)] | [Node::T(t), Node::S(i)] => (*i, *t),
            _ => return Err(Error::Internal("malformed shape-I path".into())),
        };
        let u = self.s[i];
        let v = *self.hits(u, t).first().ok_or_else(|| Error::Internal("aux edge without a graph edge".into()))?;
        let m = self.matching_avoiding(t, v)?;
        let local = &self.comps[t].local;
        let mut out = vec![vec![u, local.to_host(v)]];
        out.extend(m.pairs().into_iter().map(|(a, b)| vec![local.to_host(a), local.to_host(b)]));
        self.trace.steps.push(format!("edge {u}-{} into component {t}", local.to_host(v)));
        Ok(out)
    }

    /// Splits a shape-II node sequence into its components `D_1..D_{l+1}`
    /// and connectors `u_1..u_l`.
    fn unpack(&self, nodes: &[Node]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut ts = Vec::new();
        let mut us = Vec::new();
        for (j, node) in nodes.iter().enumerate() {
            match (j % 2, node) {
                (0, Node::T(t)) => ts.push(*t),
                (1, Node::S(i)) => us.push(self.s[*i]),
                _ => return Err(Error::Internal("shape-II path does not alternate".into())),
            }
        }
        if ts.len() != us.len() + 1 || us.is_empty() {
            return Err(Error::Internal("shape-II path has the wrong ends".into()));
        }
        Ok((ts, us))
    }

    fn long_path(&mut self, nodes: &[Node]) -> Result<Vec<Vec<usize>>> {
        let (ts, us) = self.unpack(nodes)?;
        let out = if self.k == 3 {
            self.long_path_p7(&ts, &us)?
        } else {
            self.long_path_p9(&ts, &us)?
        };
        self.trace.steps.push(format!(
            "long path through components {ts:?} via {us:?}, order {}",
            out[0].len()
        ));
        Ok(out)
    }

    /// Interior components are single vertices. Each end component `D`
    /// entered at `v` contributes `v' u' v` where `u'` is a neighbour of `v`
    /// and `v'` its partner in a perfect matching of `D - v`.
    fn long_path_p7(&self, ts: &[usize], us: &[usize]) -> Result<Vec<Vec<usize>>> {
        let l = us.len();
        let last = ts[l];
        let mut out = Vec::new();
        let mut end = |t: usize, u: usize| -> Result<Vec<usize>> {
            let v = self.hits(u, t)[0];
            let m = self.matching_avoiding(t, v)?;
            let local = &self.comps[t].local;
            let up = *local.graph.neighbors(v).first().ok_or_else(|| Error::Internal("isolated end vertex".into()))?;
            let vp = m.mate(up).expect("perfect on D - v");
            out.extend(residual_pairs(&m.pairs(), &[up, vp]).into_iter().map(|p| to_host(local, &p)));
            Ok(to_host(local, &[vp, up, v]))
        };
        let head = end(ts[0], us[0])?;
        let mut tail = end(last, us[l - 1])?;
        tail.reverse();
        let mut path = head;
        for j in 0..l {
            if j > 0 {
                let only = &self.comps[ts[j]].local;
                if only.graph.order() != 1 {
                    return Err(Error::Internal("interior component is not a single vertex".into()));
                }
                path.push(only.to_host(0));
            }
            path.push(us[j]);
        }
        path.extend(tail);
        out.insert(0, path);
        Ok(out)
    }

    /// End components contribute alternating paths of order at least five
    /// ending where the path leaves them; interior components contribute
    /// alternating paths between their two attachment vertices.
    fn long_path_p9(&self, ts: &[usize], us: &[usize]) -> Result<Vec<Vec<usize>>> {
        let l = us.len();
        let mut out = Vec::new();
        let entry = |t: usize, u: usize| -> Result<usize> {
            let centre = self.comps[t].windmill_centre;
            self.hits(u, t)
                .into_iter()
                .find(|&v| Some(v) != centre)
                .ok_or_else(|| Error::Internal(format!("end component {t} is reached only at its centre")))
        };
        let mut end_piece = |t: usize, u: usize| -> Result<Vec<usize>> {
            let v = entry(t, u)?;
            let m = self.matching_avoiding(t, v)?;
            let local = &self.comps[t].local;
            let q = long_alternating_path(&local.graph, v, &m)?;
            out.extend(residual_pairs(&m.pairs(), &q).into_iter().map(|p| to_host(local, &p)));
            Ok(to_host(local, &q))
        };
        let mut head = end_piece(ts[0], us[0])?;
        head.reverse();
        let tail = end_piece(ts[l], us[l - 1])?;
        let mut path = head;
        for j in 0..l {
            if j > 0 {
                let t = ts[j];
                let w = self.hits(us[j - 1], t)[0];
                let v = self.hits(us[j], t)[0];
                let m = self.matching_avoiding(t, w)?;
                let local = &self.comps[t].local;
                let q = alternating_path_to(&local.graph, w, &m, v)?;
                out.extend(residual_pairs(&m.pairs(), &q).into_iter().map(|p| to_host(local, &p)));
                path.extend(to_host(local, &q));
            }
            path.push(us[j]);
        }
        path.extend(tail);
        out.insert(0, path);
        Ok(out)
    }

    /// Turns a Hall witness into a set violating the sufficient condition.
    fn lift(&mut self, w: &HallWitness) -> Result<ConditionCertificate> {
        if w.side != WitnessSide::T {
            return Err(Error::Internal(format!(
                "S-side Hall violation {:?} at a maximum-deficiency barrier",
                w.nodes
            )));
        }
        let allowed: BTreeSet<(usize, usize)> = self
            .aux
            .adjacency
            .iter()
            .copied()
            .filter(|e| !self.aux.forbidden.contains(e))
            .collect();
        let ys: BTreeSet<usize> = w.nodes.iter().copied().collect();
        let x_prime = VertexSet::new(
            allowed
                .iter()
                .filter(|(_, t)| ys.contains(t))
                .map(|&(i, _)| self.s[i]),
        );
        self.trace.hall_set = Some(x_prime.clone());
        let mut x0 = x_prime.clone();
        if self.k == 3 {
            self.check_hall_bound(&x_prime)?;
            // Every large windmill left by X' is crushed.
            for comp in self.g.components(&x_prime)? {
                if comp.len() < 7 {
                    continue;
                }
                let local = self.g.induced(&comp)?;
                if is_windmill(&local.graph).is_some() {
                    x0 = x0.union(&self.crush(&local)?);
                }
            }
        } else {
            for &t in &ys {
                let comp = &self.comps[t];
                let n = comp.local.graph.order();
                if comp.role != ComponentRole::T2 || (n == 7 && comp.windmill_centre.is_none()) {
                    continue;
                }
                x0 = x0.union(&self.crush(&comp.local)?);
            }
        }
        let spec = ConditionSpec::sufficient(self.k)?;
        let cert = spec.certificate(self.g, &x0)?.ok_or_else(|| {
            Error::Internal(format!("lifted set {x0:?} does not violate the condition"))
        })?;
        self.trace
            .steps
            .push(format!("Hall set {x_prime:?} lifted to {x0:?}"));
        Ok(cert)
    }

    fn crush(&self, local: &Induced) -> Result<VertexSet> {
        let cls = classify_no_factor(&local.graph, self.k)?;
        let x = crush_set(&local.graph, &cls)?;
        Ok(VertexSet::new(x.iter().map(|v| local.to_host(v))))
    }

    /// `c1(G - X) + c'(G - X) / 2 > |X|`, where `c'` counts components of
    /// order at least 3 that are factor-critical without a {P2, P7}-factor.
    fn check_hall_bound(&self, x: &VertexSet) -> Result<()> {
        let mut c1 = 0;
        let mut cp = 0;
        for comp in self.g.components(x)? {
            if comp.len() == 1 {
                c1 += 1;
                continue;
            }
            if comp.len() % 2 == 0 {
                continue;
            }
            let local = self.g.induced(&comp)?;
            if is_factor_critical(&local.graph) && (comp.len() < 7 || is_windmill(&local.graph).is_some()) {
                cp += 1;
            }
        }
        if 2 * c1 + cp <= 2 * x.len() {
            return Err(Error::Internal(format!(
                "Hall set {x:?} gives c1 = {c1}, c' = {cp}, no violation"
            )));
        }
        Ok(())
    }
}

/// A {P2, P(2k+1)}-factor of a factor-critical graph that has one: tries
/// alternating paths of order at least `2k + 1` from every vertex (the rest
/// is covered by the matching), then exhaustive search.
pub fn component_factor(g: &Graph, k: usize) -> Result<PathSystem> {
    let n = g.order();
    let long = 2 * k + 1;
    let all = VertexSet::new(0..n);
    if n >= long {
        for v in 0..n {
            let Some(m) = perfect_matching_avoiding(g, &all, v) else {
                continue;
            };
            for w in 0..n {
                let Ok(q) = alternating_path_to(g, v, &m, w) else {
                    continue;
                };
                if q.len() >= long {
                    let mut paths = residual_pairs(&m.pairs(), &q);
                    paths.push(q);
                    return normalize_factor(g, &PathSystem::new(paths), k);
                }
            }
            if let Some(q) = long_alternating_dfs(g, v, &m, long) {
                let mut paths = residual_pairs(&m.pairs(), &q);
                paths.push(q);
                return normalize_factor(g, &PathSystem::new(paths), k);
            }
        }
    }
    match brute_force_factor_within(g, k, DIRECT_SEARCH_BUDGET) {
        Ok(Some(f)) => Ok(f),
        Ok(None) => Err(Error::Domain(format!("component of order {n} has no factor"))),
        Err(e) => Err(Error::Internal(format!("no factor constructed for a component of order {n}: {e}"))),
    }
}

/// Depth-first search for an alternating path from `v` (first edge outside
/// `m`, then alternating) with at least `min` vertices, within a step
/// budget.
fn long_alternating_dfs(g: &Graph, v: usize, m: &Matching, min: usize) -> Option<Vec<usize>> {
    fn go(g: &Graph, m: &Matching, path: &mut Vec<usize>, on: &mut [bool], min: usize, steps: &mut u64) -> bool {
        if path.len() >= min {
            return true;
        }
        *steps += 1;
        if *steps > DIRECT_SEARCH_BUDGET {
            return false;
        }
        let end = *path.last().expect("non-empty");
        for &x in g.neighbors(end) {
            let Some(y) = m.mate(x) else { continue };
            if on[x] || on[y] || m.mate(end) == Some(x) {
                continue;
            }
            on[x] = true;
            on[y] = true;
            path.extend([x, y]);
            if go(g, m, path, on, min, steps) {
                return true;
            }
            path.truncate(path.len() - 2);
            on[x] = false;
            on[y] = false;
        }
        false
    }
    let mut on = vec![false; g.order()];
    on[v] = true;
    let mut path = vec![v];
    let mut steps = 0;
    go(g, m, &mut path, &mut on, min, &mut steps).then_some(path)
}

#[cfg(test)]
mod tests {
    use num_rational::Rational64;

    use super::*;
    use crate::generators::{generate, FamilySpec};

    fn gen(s: &str) -> Graph {
        generate(&s.parse::<FamilySpec>().unwrap()).unwrap().graph
    }

    #[test]
    fn cycle_seven_is_its_own_factor() {
        let out = build_p2p7(&gen("cn:7")).unwrap();
        assert_eq!(out.factor().unwrap().orders(), vec![7]);
        assert_eq!(out.trace.route, Route::Pipeline);
    }

    #[test]
    fn windmill_gets_its_crush_set() {
        let out = build_p2p7(&gen("k1_sk2:3")).unwrap();
        let c = out.certificate().unwrap();
        assert_eq!(c.x.len(), 4);
        assert_eq!(c.lhs, Rational64::from_integer(3));
    }

    #[test]
    fn star_certificate() {
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let out = build_p2p7(&star).unwrap();
        let c = out.certificate().unwrap();
        assert_eq!(c.x, VertexSet::new([0]));
        assert_eq!((c.lhs, c.rhs), (Rational64::from_integer(3), Rational64::new(2, 3)));
    }

    #[test]
    fn path_nine() {
        let out = build_p2p9(&gen("pn:9")).unwrap();
        assert_eq!(out.factor().unwrap().orders(), vec![9]);
        assert_eq!(out.trace.route, Route::DirectSearch);
    }

    #[test]
    fn sharp_block() {
        let out = build_p2p9(&gen("join(kn:1,union(kn:4,kn:2,kn:2))")).unwrap();
        let c = out.certificate().unwrap();
        assert_eq!(c.x.len(), 4);
        let census = gen("join(kn:1,union(kn:4,kn:2,kn:2))").census(&c.x).unwrap();
        assert_eq!((census.c1(), census.c3()), (2, 1));
    }

    #[test]
    fn rejects_other_k() {
        assert!(matches!(build(&gen("cn:7"), 5), Err(Error::Input(_))));
    }
}
