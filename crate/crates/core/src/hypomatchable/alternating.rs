use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::matching::{perfect_matching_avoiding, Matching};

use super::classify::is_windmill;

fn check_near_perfect(g: &Graph, v: usize, m: &Matching) -> Result<()> {
    g.check_vertex(v)?;
    if m.order() != g.order() {
        return Err(Error::Input("matching belongs to a graph of another order".into()));
    }
    for (a, b) in m.pairs() {
        if !g.has_edge(a, b) {
            return Err(Error::Input(format!("matching pair {a}-{b} is not an edge")));
        }
    }
    let rest = VertexSet::new((0..g.order()).filter(|&u| u != v));
    if !m.is_perfect_on(&rest) {
        return Err(Error::Input(format!(
            "matching is not a perfect matching of G - {v}"
        )));
    }
    Ok(())
}

/// An odd alternating path from `v` to `w`: it starts with a non-matching
/// edge, every second edge (positions 1, 3, ...) lies in `m`, and `m`
/// minus the path's edges is perfect on the remaining vertices.
///
/// Found by following the symmetric difference of `m` with a perfect
/// matching of `G - w` from `v`.
pub fn alternating_path_to(g: &Graph, v: usize, m: &Matching, w: usize) -> Result<Vec<usize>> {
    check_near_perfect(g, v, m)?;
    g.check_vertex(w)?;
    if w == v {
        return Ok(vec![v]);
    }
    let all = VertexSet::new(0..g.order());
    let other = perfect_matching_avoiding(g, &all, w)
        .ok_or_else(|| Error::Domain(format!("G - {w} has no perfect matching")))?;
    let mut path = vec![v];
    let mut cur = v;
    loop {
        let next = other
            .mate(cur)
            .ok_or_else(|| Error::Internal(format!("{cur} exposed in a matching of G - {w}")))?;
        path.push(next);
        let back = m
            .mate(next)
            .ok_or_else(|| Error::Internal(format!("{next} exposed in a near-perfect matching")))?;
        path.push(back);
        if back == w {
            return Ok(path);
        }
        cur = back;
    }
}

/// An odd alternating path from `v` with at least five vertices.
///
/// Needs at least five vertices and excludes the windmill `K1 + sK2` rooted
/// at its centre, where no such path exists.
pub fn long_alternating_path(g: &Graph, v: usize, m: &Matching) -> Result<Vec<usize>> {
    check_near_perfect(g, v, m)?;
    let n = g.order();
    if n < 5 {
        return Err(Error::Domain(format!(
            "a long alternating path needs at least 5 vertices, got {n}"
        )));
    }
    if is_windmill(g) == Some(v) {
        return Err(Error::Domain(format!(
            "{v} is the unique cutvertex of a K1+sK2"
        )));
    }
    if g.degree(v) == n - 1 {
        // Some edge joins two different matching edges, else G would be the
        // windmill rooted at v.
        let (x, y) = g
            .edges()
            .find(|&(x, y)| x != v && y != v && m.mate(x) != Some(y))
            .ok_or_else(|| Error::Internal("no edge between matching edges".into()))?;
        let (xp, yp) = (m.mate(x).expect("covered"), m.mate(y).expect("covered"));
        return Ok(vec![v, xp, x, y, yp]);
    }
    let u = (0..n)
        .find(|&u| u != v && !g.has_edge(u, v))
        .expect("v is not universal");
    let w = m.mate(u).expect("covered");
    let path = alternating_path_to(g, v, m, w)?;
    if path.len() < 5 {
        return Err(Error::Internal(format!(
            "alternating path {path:?} ending at a non-neighbour's mate is short"
        )));
    }
    Ok(path)
}
