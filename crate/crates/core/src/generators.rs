//! Deterministic constructors for the named graphs and families, plus a
//! seeded generator of random factor-critical graphs.
//!
//! The three-vertex core families share one labelling: `u1 = 0`, `u2 = 1`,
//! `u3 = 2`, then the pairs of the second blade class `(v1j, v3j)`, then the
//! first class, then the third. Blocks built from `K_n` plus copies of a
//! gadget put the clique first and each gadget after it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matching::is_factor_critical;

/// Which vertices play the structural roles of a family member.
///
/// For the windmill `K1 + sK2` the core is the single cutvertex and every
/// blade sits in class 0. For the three-vertex core families the core is
/// `[u1, u2, u3]` and `blades[i]` lists the pairs attached to `u(i+1)`;
/// second-class pairs are oriented `(v1j, v3j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleMap {
    pub core: Vec<usize>,
    pub blades: [Vec<(usize, usize)>; 3],
}

impl RoleMap {
    /// `(name, vertex)` pairs in the order they are written out.
    pub fn named(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        if self.core.len() == 1 {
            out.push(("cut".to_string(), self.core[0]));
        } else {
            for (i, &u) in self.core.iter().enumerate() {
                out.push((format!("u{}", i + 1), u));
            }
        }
        for (class, pairs) in self.blades.iter().enumerate() {
            for (j, &(a, b)) in pairs.iter().enumerate() {
                out.push((format!("L{}_{}a", class + 1, j + 1), a));
                out.push((format!("L{}_{}b", class + 1, j + 1), b));
            }
        }
        out
    }
}

/// The three-vertex core families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoreFamily {
    A1,
    A2,
    A3,
    A4,
}

/// How much of an edge range to include.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extra {
    /// Only the required edges (the lower end of the range).
    Lower,
    /// Every optional edge (the upper end).
    Upper,
    /// Each optional edge independently with probability 1/2.
    Seeded(u64),
}

/// Edge template of a core-family member in canonical labels.
#[derive(Clone, Debug)]
pub struct Template {
    pub order: usize,
    pub required: Vec<(usize, usize)>,
    pub optional: Vec<(usize, usize)>,
    pub roles: RoleMap,
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Builds the template for a core family with blade counts `s = [s1, s2, s3]`.
/// Parameter ranges are not checked here.
pub fn core_template(family: CoreFamily, s: [usize; 3]) -> Template {
    let [s1, s2, s3] = s;
    let order = 3 + 2 * (s1 + s2 + s3);
    let mut next = 3;
    let mut take = |count: usize| {
        let pairs: Vec<(usize, usize)> = (0..count).map(|j| (next + 2 * j, next + 2 * j + 1)).collect();
        next += 2 * count;
        pairs
    };
    let l2 = take(s2);
    let l1 = take(s1);
    let l3 = take(s3);
    let (u1, u2, u3) = (0, 1, 2);

    let mut required = vec![(u1, u2), (u2, u3)];
    let mut optional = Vec::new();
    for &(a, b) in l1.iter().chain(&l2).chain(&l3) {
        required.push((a, b));
    }
    for &(a, b) in &l1 {
        required.extend([(u1, a), (u1, b)]);
    }
    for &(a, b) in &l3 {
        required.extend([(u3, a), (u3, b)]);
    }
    match family {
        CoreFamily::A1 => {
            required.push((u1, u3));
            for &(a, b) in &l2 {
                required.extend([(u2, a), (u2, b)]);
            }
        }
        CoreFamily::A2 | CoreFamily::A3 | CoreFamily::A4 => {
            for &(v1, v3) in &l2 {
                required.extend([(u1, v1), (u3, v3)]);
            }
            match family {
                CoreFamily::A2 => {
                    optional.push((u1, u3));
                    for &(v1, v3) in &l2 {
                        optional.extend([(u1, v3), (u3, v1)]);
                    }
                }
                CoreFamily::A3 => {
                    let core: Vec<usize> = vec![u1, u2, u3, l2[0].0, l2[0].1];
                    for (i, &a) in core.iter().enumerate() {
                        for &b in &core[i + 1..] {
                            let e = ordered(a, b);
                            if !required.contains(&e) {
                                optional.push(e);
                            }
                        }
                    }
                }
                CoreFamily::A4 => {
                    let (v31, v32) = (l2[0].1, l2[1].1);
                    required.push(ordered(v31, v32));
                    optional.extend([(u1, u3), (u1, v31), (u1, v32)]);
                }
                CoreFamily::A1 => unreachable!(),
            }
        }
    }
    let required = required.into_iter().map(|(a, b)| ordered(a, b)).collect();
    let optional = optional.into_iter().map(|(a, b)| ordered(a, b)).collect();
    Template {
        order,
        required,
        optional,
        roles: RoleMap {
            core: vec![u1, u2, u3],
            blades: [l1, l2, l3],
        },
    }
}

/// A graph or family member to construct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilySpec {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    Join(Box<FamilySpec>, Box<FamilySpec>),
    Union(Vec<FamilySpec>),
    /// `K1 + sK2`.
    Windmill(usize),
    A1 { s1: usize, s2: usize, s3: usize },
    A2 { s1: usize, s2: usize, s3: usize, extra: Extra },
    A3 { s1: usize, extra: Extra },
    A4 { s1: usize, extra: Extra },
    /// `K_n` joined to `2n+1` copies of `K1 + (K4 u 2K2)`.
    Sharp(usize),
    /// `K_n` joined to `copies` disjoint copies of `block`.
    CliquePlusCopies { n: usize, copies: usize, block: Box<FamilySpec> },
}

/// A generated graph with its role annotations.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    pub roles: Vec<(String, usize)>,
    pub role_map: Option<RoleMap>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidFamily(msg.into())
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        use FamilySpec::*;
        match self {
            Complete(n) | Path(n) if *n == 0 => Err(invalid("order must be at least 1")),
            Cycle(n) if *n < 3 => Err(invalid(format!("a cycle needs at least 3 vertices, got {n}"))),
            Windmill(0) => Err(invalid("K1+sK2 needs s >= 1")),
            A1 { s1, s2, s3 } if s1 + s2 + s3 == 0 => Err(invalid("A1 needs s1+s2+s3 >= 1")),
            A2 { s1, s2, s3, .. } => {
                if *s2 == 0 {
                    Err(invalid("A2 needs s2 >= 1"))
                } else if s1 + s2 + s3 < 3 {
                    Err(invalid("A2 needs s1+s2+s3 >= 3"))
                } else if !((*s1 >= 1 && *s3 >= 1) || *s2 >= 2) {
                    Err(invalid("A2 needs s1 >= 1 and s3 >= 1, or s2 >= 2"))
                } else {
                    Ok(())
                }
            }
            A3 { s1, .. } if *s1 < 2 => Err(invalid("A3 needs s1 >= 2")),
            A4 { s1, .. } if *s1 < 1 => Err(invalid("A4 needs s1 >= 1")),
            Sharp(0) => Err(invalid("the sharpness construction needs n >= 1")),
            CliquePlusCopies { n, block, .. } => {
                if *n == 0 {
                    Err(invalid("the clique needs n >= 1"))
                } else {
                    block.validate()
                }
            }
            Join(a, b) => a.validate().and(b.validate()),
            Union(parts) => parts.iter().try_for_each(FamilySpec::validate),
            _ => Ok(()),
        }
    }
}

/// Builds the graph for `spec` with canonical labels.
pub fn generate(spec: &FamilySpec) -> Result<Generated> {
    spec.validate()?;
    Ok(build(spec))
}

fn plain(graph: Graph) -> Generated {
    Generated {
        graph,
        roles: Vec::new(),
        role_map: None,
    }
}

fn with_roles(graph: Graph, map: RoleMap) -> Generated {
    Generated {
        graph,
        roles: map.named(),
        role_map: Some(map),
    }
}

fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).expect("clique edges are simple")
}

fn windmill(s: usize) -> Generated {
    let blades: Vec<(usize, usize)> = (0..s).map(|j| (1 + 2 * j, 2 + 2 * j)).collect();
    let edges = blades.iter().flat_map(|&(a, b)| [(0, a), (0, b), (a, b)]);
    let graph = Graph::new(2 * s + 1, edges).expect("windmill edges are simple");
    with_roles(
        graph,
        RoleMap {
            core: vec![0],
            blades: [blades, Vec::new(), Vec::new()],
        },
    )
}

fn core_member(family: CoreFamily, s: [usize; 3], extra: Extra) -> Generated {
    let t = core_template(family, s);
    let mut edges = t.required.clone();
    match extra {
        Extra::Lower => {}
        Extra::Upper => edges.extend(&t.optional),
        Extra::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            edges.extend(t.optional.iter().filter(|_| rng.gen_bool(0.5)));
        }
    }
    let graph = Graph::new(t.order, edges).expect("template edges are simple");
    with_roles(graph, t.roles)
}

fn build(spec: &FamilySpec) -> Generated {
    use FamilySpec::*;
    match spec {
        Complete(n) => plain(complete(*n)),
        Path(n) => plain(Graph::new(*n, (1..*n).map(|i| (i - 1, i))).expect("path edges are simple")),
        Cycle(n) => plain(Graph::new(*n, (0..*n).map(|i| (i, (i + 1) % n))).expect("cycle edges are simple")),
        Join(a, b) => {
            let (ga, gb) = (build(a), build(b));
            let shift = ga.graph.order();
            let mut roles = ga.roles;
            roles.extend(gb.roles.into_iter().map(|(r, v)| (r, v + shift)));
            Generated {
                graph: ga.graph.join(&gb.graph),
                roles,
                role_map: None,
            }
        }
        Union(parts) => {
            let mut graph = Graph::empty(0);
            let mut roles = Vec::new();
            for p in parts {
                let gp = build(p);
                let shift = graph.order();
                roles.extend(gp.roles.into_iter().map(|(r, v)| (r, v + shift)));
                graph = graph.disjoint_union(&gp.graph);
            }
            Generated {
                graph,
                roles,
                role_map: None,
            }
        }
        Windmill(s) => windmill(*s),
        A1 { s1, s2, s3 } => core_member(CoreFamily::A1, [*s1, *s2, *s3], Extra::Lower),
        A2 { s1, s2, s3, extra } => core_member(CoreFamily::A2, [*s1, *s2, *s3], *extra),
        A3 { s1, extra } => core_member(CoreFamily::A3, [*s1, 1, 0], *extra),
        A4 { s1, extra } => core_member(CoreFamily::A4, [*s1, 2, 0], *extra),
        Sharp(n) => {
            let block = sharp_block();
            clique_plus_copies(*n, 2 * n + 1, &block)
        }
        CliquePlusCopies { n, copies, block } => clique_plus_copies(*n, *copies, &build(block)),
    }
}

/// `K1 + (K4 u 2K2)` with the cutvertex at 0, the `K4` on 1..=4 and the
/// blades (5,6), (7,8).
fn sharp_block() -> Generated {
    let k4 = complete(4);
    let k2 = complete(2);
    let graph = Graph::empty(1).join(&k4.disjoint_union(&k2).disjoint_union(&k2));
    let mut roles = vec![("cut".to_string(), 0)];
    for v in 1..=4 {
        roles.push((format!("K4_{v}"), v));
    }
    roles.extend([
        ("L1_1a".to_string(), 5),
        ("L1_1b".to_string(), 6),
        ("L1_2a".to_string(), 7),
        ("L1_2b".to_string(), 8),
    ]);
    Generated {
        graph,
        roles,
        role_map: None,
    }
}

fn clique_plus_copies(n: usize, copies: usize, block: &Generated) -> Generated {
    let mut roles: Vec<(String, usize)> = (0..n).map(|v| ("R0".to_string(), v)).collect();
    let mut rest = Graph::empty(0);
    for i in 0..copies {
        let shift = n + rest.order();
        roles.extend(
            block
                .roles
                .iter()
                .map(|(r, v)| (format!("R{}_{r}", i + 1), v + shift)),
        );
        rest = rest.disjoint_union(&block.graph);
    }
    Generated {
        graph: complete(n).join(&rest),
        roles,
        role_map: None,
    }
}

/// A random graph: each pair is an edge with probability `density`.
pub fn random_graph(order: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (0..order)
        .flat_map(|a| (a + 1..order).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(density.clamp(0.0, 1.0)))
        .collect();
    Graph::new(order, edges).expect("pairs are distinct")
}

/// A random connected graph: a random spanning tree plus each remaining
/// pair with probability `density`.
pub fn random_connected_graph(order: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..order).collect();
    perm.shuffle(&mut rng);
    let mut edges = BTreeSet::new();
    for i in 1..order {
        let j = rng.gen_range(0..i);
        edges.insert(ordered(perm[i], perm[j]));
    }
    for a in 0..order {
        for b in a + 1..order {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                edges.insert((a, b));
            }
        }
    }
    Graph::new(order, edges).expect("pairs are distinct")
}

/// A seeded factor-critical graph of the given odd order.
///
/// Starts from a random odd cycle, attaches random odd ears (paths between
/// two distinct old vertices, or cycles through one old vertex) until the
/// order is reached, sprinkles in extra edges, and finally relabels the
/// vertices at random. The result is re-checked before it is returned.
pub fn random_factor_critical(order: usize, seed: u64) -> Result<Graph> {
    if order % 2 == 0 {
        return Err(Error::Input(format!(
            "factor-critical graphs have odd order, got {order}"
        )));
    }
    if order == 1 {
        return Ok(Graph::empty(1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    let add = |edges: &mut BTreeSet<(usize, usize)>, a: usize, b: usize| {
        edges.insert(ordered(a, b));
    };

    let first = 3 + 2 * rng.gen_range(0..=(order - 3) / 2);
    for i in 0..first {
        add(&mut edges, i, (i + 1) % first);
    }
    let mut count = first;
    while count < order {
        let room = (order - count) / 2;
        let fresh = if rng.gen_bool(0.5) { 2 } else { 2 * rng.gen_range(1..=room) };
        let x = rng.gen_range(0..count);
        let w = if count >= 2 && rng.gen_bool(0.5) {
            let mut w = rng.gen_range(0..count - 1);
            if w >= x {
                w += 1;
            }
            w
        } else {
            x
        };
        let mut prev = x;
        for v in count..count + fresh {
            add(&mut edges, prev, v);
            prev = v;
        }
        add(&mut edges, prev, w);
        count += fresh;
    }
    let density = match rng.gen_range(0..4) {
        0 => 0.0,
        1 => rng.gen_range(0.0..0.1),
        2 => rng.gen_range(0.1..0.3),
        _ => rng.gen_range(0.3..0.7),
    };
    for a in 0..order {
        for b in a + 1..order {
            if density > 0.0 && rng.gen_bool(density) {
                edges.insert((a, b));
            }
        }
    }
    let mut perm: Vec<usize> = (0..order).collect();
    perm.shuffle(&mut rng);
    let graph = Graph::new(order, edges.into_iter().map(|(a, b)| (perm[a], perm[b])))?;
    if !is_factor_critical(&graph) {
        return Err(Error::Internal(format!(
            "random ear construction (seed {seed}) is not factor-critical"
        )));
    }
    Ok(graph)
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        let range = |f: &mut fmt::Formatter<'_>, base: &str, params: String, extra: &Extra| match extra {
            Extra::Lower => write!(f, "{base}_prime:{params}"),
            Extra::Upper => write!(f, "{base}_dprime:{params}"),
            Extra::Seeded(seed) => write!(f, "{base}_prime:{params}@{seed}"),
        };
        match self {
            Complete(n) => write!(f, "kn:{n}"),
            Path(n) => write!(f, "pn:{n}"),
            Cycle(n) => write!(f, "cn:{n}"),
            Join(a, b) => write!(f, "join({a},{b})"),
            Union(parts) => {
                write!(f, "union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Windmill(s) => write!(f, "k1_sk2:{s}"),
            A1 { s1, s2, s3 } => write!(f, "a1:{s1},{s2},{s3}"),
            A2 { s1, s2, s3, extra } => range(f, "a2", format!("{s1},{s2},{s3}"), extra),
            A3 { s1, extra } => range(f, "a3", s1.to_string(), extra),
            A4 { s1, extra } => range(f, "a4", s1.to_string(), extra),
            Sharp(n) => write!(f, "hn_sharp:{n}"),
            CliquePlusCopies { n, copies, block } => write!(f, "kn_plus_copies({n},{copies},{block})"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Parses the compact text form, e.g. `a1:2,2,2`, `a2_prime:1,1,1@7`,
    /// `join(kn:1,union(kn:4,kn:2,kn:2))`, `kn_plus_copies(1,3,k1_sk2:3)`.
    /// Tags are case-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = SpecParser { text: s.trim(), pos: 0 };
        let spec = p.spec()?;
        if p.pos != p.text.len() {
            return Err(invalid(format!("trailing input in family spec {s:?}")));
        }
        Ok(spec)
    }
}

struct SpecParser<'a> {
    text: &'a str,
    pos: usize,
}

impl SpecParser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> String {
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        let w = self.rest()[..len].to_ascii_lowercase();
        self.pos += len;
        w
    }

    fn number(&mut self) -> Result<u64> {
        let w = self.word();
        w.parse()
            .map_err(|_| invalid(format!("expected a number, got {w:?}")))
    }

    fn numbers(&mut self) -> Result<Vec<usize>> {
        let mut out = vec![self.number()? as usize];
        while self.rest().starts_with(',')
            && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit())
        {
            self.eat(',');
            out.push(self.number()? as usize);
        }
        Ok(out)
    }

    fn spec(&mut self) -> Result<FamilySpec> {
        use FamilySpec::*;
        let tag = self.word();
        if self.eat('(') {
            let spec = match tag.as_str() {
                "join" => {
                    let a = self.spec()?;
                    if !self.eat(',') {
                        return Err(invalid("join takes two arguments"));
                    }
                    Join(Box::new(a), Box::new(self.spec()?))
                }
                "union" => {
                    let mut parts = vec![self.spec()?];
                    while self.eat(',') {
                        parts.push(self.spec()?);
                    }
                    Union(parts)
                }
                "kn_plus_copies" => {
                    let n = self.number()? as usize;
                    let mut copies = 2 * n + 1;
                    if !self.eat(',') {
                        return Err(invalid("kn_plus_copies takes n, [copies,] block"));
                    }
                    if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
                        copies = self.number()? as usize;
                        if !self.eat(',') {
                            return Err(invalid("kn_plus_copies takes n, [copies,] block"));
                        }
                    }
                    CliquePlusCopies {
                        n,
                        copies,
                        block: Box::new(self.spec()?),
                    }
                }
                other => return Err(invalid(format!("unknown composite family {other:?}"))),
            };
            if !self.eat(')') {
                return Err(invalid("missing ')'"));
            }
            return Ok(spec);
        }
        if !self.eat(':') {
            return Err(invalid(format!("expected ':' or '(' after {tag:?}")));
        }
        let params = self.numbers()?;
        let seed = if self.eat('@') { Some(self.number()?) } else { None };
        let arity = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(invalid(format!("{tag} takes {k} parameter(s), got {}", params.len())))
            }
        };
        let extra = |upper: bool| match seed {
            Some(s) => Extra::Seeded(s),
            None if upper => Extra::Upper,
            None => Extra::Lower,
        };
        let ranged = ["a2_", "a3_", "a4_"].iter().any(|p| tag.starts_with(p));
        if seed.is_some() && !ranged {
            return Err(invalid(format!("{tag} does not take a seed")));
        }
        let spec = match tag.as_str() {
            "kn" => arity(1).map(|_| Complete(params[0]))?,
            "pn" => arity(1).map(|_| Path(params[0]))?,
            "cn" => arity(1).map(|_| Cycle(params[0]))?,
            "k1_sk2" => arity(1).map(|_| Windmill(params[0]))?,
            "hn_sharp" => arity(1).map(|_| Sharp(params[0]))?,
            "a1" => arity(3).map(|_| A1 {
                s1: params[0],
                s2: params[1],
                s3: params[2],
            })?,
            "a2_prime" | "a2_dprime" => arity(3).map(|_| A2 {
                s1: params[0],
                s2: params[1],
                s3: params[2],
                extra: extra(tag.ends_with("dprime")),
            })?,
            "a3_prime" | "a3_dprime" => arity(1).map(|_| A3 {
                s1: params[0],
                extra: extra(tag.ends_with("dprime")),
            })?,
            "a4_prime" | "a4_dprime" => arity(1).map(|_| A4 {
                s1: params[0],
                extra: extra(tag.ends_with("dprime")),
            })?,
            other => return Err(invalid(format!("unknown family tag {other:?}"))),
        };
        Ok(spec)
    }
}
