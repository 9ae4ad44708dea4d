use std::collections::HashSet;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{core_template, CoreFamily, RoleMap};
use crate::graph::{Graph, VertexSet};
use crate::matching::is_factor_critical;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    /// `K1 + sK2`.
    #[serde(rename = "G0")]
    G0,
    #[serde(rename = "G1_MIN_LE1")]
    G1MinLe1,
    #[serde(rename = "G1_MIN_EQ2")]
    G1MinEq2,
    #[serde(rename = "G1_MIN_GE3")]
    G1MinGe3,
    #[serde(rename = "G2")]
    G2,
    #[serde(rename = "G3")]
    G3,
    #[serde(rename = "G4")]
    G4,
    /// Odd order below 7: no path of order 7 or 9 fits.
    #[serde(rename = "SMALL_3_5")]
    Small35,
    /// Order 7 with k = 4 and not a windmill.
    #[serde(rename = "ORDER7_NONSPECIAL")]
    Order7Nonspecial,
    #[serde(rename = "HAS_FACTOR")]
    HasFactor,
}

impl FamilyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::G0 => "G0",
            FamilyTag::G1MinLe1 => "G1_MIN_LE1",
            FamilyTag::G1MinEq2 => "G1_MIN_EQ2",
            FamilyTag::G1MinGe3 => "G1_MIN_GE3",
            FamilyTag::G2 => "G2",
            FamilyTag::G3 => "G3",
            FamilyTag::G4 => "G4",
            FamilyTag::Small35 => "SMALL_3_5",
            FamilyTag::Order7Nonspecial => "ORDER7_NONSPECIAL",
            FamilyTag::HasFactor => "HAS_FACTOR",
        }
    }

    /// Whether the tag names one of the excluded families (and so carries a
    /// role map and a crush set).
    pub fn is_family(self) -> bool {
        !matches!(
            self,
            FamilyTag::Small35 | FamilyTag::Order7Nonspecial | FamilyTag::HasFactor
        )
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of [`classify_no_factor`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyClass {
    pub tag: FamilyTag,
    /// `[s]` for windmills, `[s1, s2, s3]` for the first two core families,
    /// `[s1]` for the last two; empty otherwise.
    pub params: Vec<usize>,
    pub roles: Option<RoleMap>,
}

impl FamilyClass {
    fn bare(tag: FamilyTag) -> Self {
        FamilyClass {
            tag,
            params: Vec::new(),
            roles: None,
        }
    }
}

/// The centre of `g` if `g` is `K1 + sK2` with `s >= 2`.
pub fn is_windmill(g: &Graph) -> Option<usize> {
    let n = g.order();
    if n < 5 || n % 2 == 0 {
        return None;
    }
    let c = (0..n).find(|&v| g.degree(v) == n - 1)?;
    (0..n)
        .all(|v| v == c || g.degree(v) == 2)
        .then_some(c)
}

fn windmill_class(g: &Graph, c: usize) -> FamilyClass {
    let mut blades = Vec::new();
    for v in 0..g.order() {
        if v == c {
            continue;
        }
        let w = *g
            .neighbors(v)
            .iter()
            .find(|&&w| w != c)
            .expect("blade vertices have one other neighbour");
        if v < w {
            blades.push((v, w));
        }
    }
    FamilyClass {
        tag: FamilyTag::G0,
        params: vec![blades.len()],
        roles: Some(RoleMap {
            core: vec![c],
            blades: [blades, Vec::new(), Vec::new()],
        }),
    }
}

/// Decides whether a factor-critical graph lacks a {P2, P(2k+1)}-factor,
/// naming the excluded family it belongs to.
///
/// Orders 1, 3 and 5 are always `SMALL_3_5`. For `k = 3` a larger graph
/// lacks a factor exactly when it is a windmill `K1 + sK2` (`s >= 3`). For
/// `k = 4` every order-7 graph lacks one (windmills are still tagged `G0`),
/// and from order 9 on the graph must match one of the core-family
/// templates. Recognition enumerates the candidate core path `u1 u2 u3`,
/// assigns the remaining pairs to blade classes by their neighbourhood in the
/// core, and compares the relabelled edge set with the template range.
pub fn classify_no_factor(g: &Graph, k: usize) -> Result<FamilyClass> {
    if k != 3 && k != 4 {
        return Err(Error::Input(format!("k must be 3 or 4, got {k}")));
    }
    if !is_factor_critical(g) {
        return Err(Error::Domain("graph is not factor-critical".into()));
    }
    let n = g.order();
    if n <= 5 {
        return Ok(FamilyClass::bare(FamilyTag::Small35));
    }
    if let Some(c) = is_windmill(g) {
        if k == 3 || n == 7 {
            return Ok(windmill_class(g, c));
        }
    }
    if k == 3 {
        return Ok(FamilyClass::bare(FamilyTag::HasFactor));
    }
    if n == 7 {
        return Ok(FamilyClass::bare(FamilyTag::Order7Nonspecial));
    }
    Ok(recognize_core(g).unwrap_or_else(|| FamilyClass::bare(FamilyTag::HasFactor)))
}

fn recognize_core(g: &Graph) -> Option<FamilyClass> {
    for family in [CoreFamily::A1, CoreFamily::A2, CoreFamily::A3, CoreFamily::A4] {
        for u2 in 0..g.order() {
            for &u1 in g.neighbors(u2) {
                for &u3 in g.neighbors(u2) {
                    if u1 == u3 {
                        continue;
                    }
                    if let Some(found) = match_core(g, family, [u1, u2, u3]) {
                        return Some(found);
                    }
                }
            }
        }
    }
    None
}

/// Bitmask of the core positions adjacent to `v`.
fn core_adjacency(g: &Graph, core: [usize; 3], v: usize) -> u8 {
    core.iter()
        .enumerate()
        .fold(0, |m, (i, &u)| if g.has_edge(u, v) { m | 1 << i } else { m })
}

fn match_core(g: &Graph, family: CoreFamily, core: [usize; 3]) -> Option<FamilyClass> {
    const U1: u8 = 1;
    const U2: u8 = 2;
    const U3: u8 = 4;
    let rest = g.components(&VertexSet::new(core)).ok()?;
    let mut pairs = Vec::new();
    let mut long = Vec::new();
    for c in &rest {
        match c.len() {
            2 => pairs.push((c.as_slice()[0], c.as_slice()[1])),
            4 if family == CoreFamily::A4 => long.push(c.clone()),
            _ => return None,
        }
    }
    let adj = |v| core_adjacency(g, core, v);
    let mut l1 = Vec::new();
    let mut l3 = Vec::new();
    // Candidate orientations for the second class; several only for the
    // ambiguous cases below.
    let mut l2_options: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    match family {
        CoreFamily::A1 => {
            if !g.has_edge(core[0], core[2]) {
                return None;
            }
            let mut l2 = Vec::new();
            for &(a, b) in &pairs {
                match (adj(a), adj(b)) {
                    (U1, U1) => l1.push((a, b)),
                    (U2, U2) => l2.push((a, b)),
                    (U3, U3) => l3.push((a, b)),
                    _ => return None,
                }
            }
            if !(l1.len() >= l2.len() && l2.len() >= l3.len()) {
                return None;
            }
            l2_options = vec![l2];
        }
        CoreFamily::A2 => {
            let mut l2 = Vec::new();
            for &(a, b) in &pairs {
                let (na, nb) = (adj(a), adj(b));
                if (na | nb) & U2 != 0 {
                    return None;
                }
                match (na, nb) {
                    (U1, U1) => l1.push((a, b)),
                    (U3, U3) => l3.push((a, b)),
                    _ if na & U1 != 0 && nb & U3 != 0 => l2.push((a, b)),
                    _ if nb & U1 != 0 && na & U3 != 0 => l2.push((b, a)),
                    _ => return None,
                }
            }
            let (s1, s2, s3) = (l1.len(), l2.len(), l3.len());
            if s2 == 0 || s1 + s2 + s3 < 3 || !((s1 >= 1 && s3 >= 1) || s2 >= 2) {
                return None;
            }
            l2_options = vec![l2];
        }
        CoreFamily::A3 => {
            let mut special = Vec::new();
            for &(a, b) in &pairs {
                if (adj(a), adj(b)) == (U1, U1) {
                    l1.push((a, b));
                } else {
                    special.push((a, b));
                }
            }
            if special.len() != 1 || l1.len() < 2 {
                return None;
            }
            let (a, b) = special[0];
            l2_options = [(a, b), (b, a)]
                .into_iter()
                .filter(|&(v1, v3)| adj(v1) & U1 != 0 && adj(v3) & U3 != 0)
                .map(|p| vec![p])
                .collect();
        }
        CoreFamily::A4 => {
            if long.len() != 1 {
                return None;
            }
            for &(a, b) in &pairs {
                if (adj(a), adj(b)) != (U1, U1) {
                    return None;
                }
                l1.push((a, b));
            }
            if l1.is_empty() {
                return None;
            }
            let order = induced_path_order(g, &long[0])?;
            let (p, q) = (order.clone(), order.into_iter().rev().collect::<Vec<_>>());
            l2_options = [p, q]
                .into_iter()
                .map(|o| vec![(o[0], o[1]), (o[3], o[2])])
                .collect();
        }
    }
    l1.sort_unstable();
    l3.sort_unstable();
    for mut l2 in l2_options {
        if family != CoreFamily::A4 {
            l2.sort_unstable();
        }
        let s = [l1.len(), l2.len(), l3.len()];
        let roles = RoleMap {
            core: core.to_vec(),
            blades: [l1.clone(), l2, l3.clone()],
        };
        if fits_template(g, family, s, &roles) {
            let (tag, params) = match family {
                CoreFamily::A1 => {
                    let tag = match s[2] {
                        0 | 1 => FamilyTag::G1MinLe1,
                        2 => FamilyTag::G1MinEq2,
                        _ => FamilyTag::G1MinGe3,
                    };
                    (tag, s.to_vec())
                }
                CoreFamily::A2 => (FamilyTag::G2, s.to_vec()),
                CoreFamily::A3 => (FamilyTag::G3, vec![s[0]]),
                CoreFamily::A4 => (FamilyTag::G4, vec![s[0]]),
            };
            return Some(FamilyClass {
                tag,
                params,
                roles: Some(roles),
            });
        }
    }
    None
}

/// The vertices of `set` in path order if they induce a path.
fn induced_path_order(g: &Graph, set: &VertexSet) -> Option<Vec<usize>> {
    let inner = |v: usize| g.neighbors(v).iter().filter(|&&w| set.contains(w)).count();
    let start = set.iter().find(|&v| inner(v) == 1)?;
    let mut order = vec![start];
    while order.len() < set.len() {
        let last = *order.last().expect("non-empty");
        let next = g
            .neighbors(last)
            .iter()
            .copied()
            .find(|&w| set.contains(w) && !order.contains(&w))?;
        order.push(next);
    }
    let edges = set
        .iter()
        .map(inner)
        .sum::<usize>();
    (edges == 2 * (set.len() - 1)).then_some(order)
}

/// Compares `g`, relabelled through `roles`, with the template range.
fn fits_template(g: &Graph, family: CoreFamily, s: [usize; 3], roles: &RoleMap) -> bool {
    let t = core_template(family, s);
    if t.order != g.order() {
        return false;
    }
    let mut to_canon = vec![usize::MAX; g.order()];
    let host_of = |canon: &RoleMap| -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = canon.core.iter().copied().zip(0..).collect();
        for class in 0..3 {
            for (&(a, b), &(ca, cb)) in canon.blades[class].iter().zip(&t.roles.blades[class]) {
                out.extend([(a, ca), (b, cb)]);
            }
        }
        out
    };
    for (host, canon) in host_of(roles) {
        if to_canon[host] != usize::MAX {
            return false;
        }
        to_canon[host] = canon;
    }
    if to_canon.contains(&usize::MAX) {
        return false;
    }
    let allowed: HashSet<(usize, usize)> = t.required.iter().chain(&t.optional).copied().collect();
    let mut required_seen = 0;
    let required: HashSet<(usize, usize)> = t.required.iter().copied().collect();
    for (x, y) in g.edges() {
        let (a, b) = (to_canon[x], to_canon[y]);
        let e = (a.min(b), a.max(b));
        if !allowed.contains(&e) {
            return false;
        }
        if required.contains(&e) {
            required_seen += 1;
        }
    }
    required_seen == required.len()
}

/// The deficit in `c1 + c3 + (2/3)c5 = |X| - deficit` and the least crush
/// set size, per family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrushBound {
    pub deficit: Rational64,
    pub min_size: usize,
}

impl CrushBound {
    pub fn for_tag(tag: FamilyTag) -> Option<CrushBound> {
        let (deficit, min_size) = match tag {
            FamilyTag::G0 | FamilyTag::G1MinLe1 | FamilyTag::G2 | FamilyTag::G3 | FamilyTag::G4 => {
                (Rational64::from_integer(1), 4)
            }
            FamilyTag::G1MinEq2 => (Rational64::new(4, 3), 6),
            FamilyTag::G1MinGe3 => (Rational64::from_integer(3), 12),
            _ => return None,
        };
        Some(CrushBound { deficit, min_size })
    }
}

/// A crush set for a classified family member, read off its role map. One
/// vertex is taken from each blade: the first of the pair (`v1j` for
/// second-class pairs).
pub fn crush_set(g: &Graph, cls: &FamilyClass) -> Result<VertexSet> {
    let roles = cls
        .roles
        .as_ref()
        .ok_or_else(|| Error::Domain(format!("{} carries no role map", cls.tag)))?;
    let first = |class: usize| roles.blades[class].iter().map(|&(a, _)| a).collect::<Vec<_>>();
    let core = &roles.core;
    let mut x: Vec<usize> = match cls.tag {
        FamilyTag::G0 => vec![core[0]],
        FamilyTag::G1MinLe1 | FamilyTag::G1MinEq2 => vec![core[0], core[1]],
        FamilyTag::G1MinGe3 => core.clone(),
        FamilyTag::G2 | FamilyTag::G3 => vec![core[0], core[2]],
        FamilyTag::G4 => {
            let l2 = &roles.blades[1];
            vec![core[0], core[2], l2[0].1, l2[1].1]
        }
        other => return Err(Error::Domain(format!("{other} has no crush set"))),
    };
    match cls.tag {
        FamilyTag::G0 | FamilyTag::G3 | FamilyTag::G4 => x.extend(first(0)),
        FamilyTag::G1MinLe1 | FamilyTag::G1MinEq2 => {
            x.extend(first(0));
            x.extend(first(1));
        }
        _ => {
            x.extend(first(0));
            x.extend(first(1));
            x.extend(first(2));
        }
    }
    let x = VertexSet::new(x);
    g.check_set(&x)?;
    Ok(x)
}

/// `c1 + c3 + (2/3)c5` of `G - x`.
pub fn crush_value(g: &Graph, x: &VertexSet) -> Result<Rational64> {
    let c = g.census(x)?;
    Ok(Rational64::from_integer((c.c1() + c.c3()) as i64) + Rational64::new(2 * c.c5() as i64, 3))
}
