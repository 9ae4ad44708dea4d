use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, MASK_LIMIT};

use super::PathSystem;

/// Some {P2, P(2k+1)}-factor of `g` if one exists, found by exhaustive
/// search. Meant for small graphs (order 14 or so); the order must fit a
/// bitmask.
pub fn brute_force_factor(g: &Graph, k: usize) -> Option<PathSystem> {
    brute_force_factor_within(g, k, u64::MAX).expect("unbounded search on a mask-sized graph")
}

/// As [`brute_force_factor`], giving up with a resource error after
/// `budget` search steps.
///
/// The lowest uncovered vertex is always placed next, either on an edge or
/// on a path of order `2k + 1` through it. Branches die when some component
/// of the uncovered part has an order that is neither even nor at least
/// `2k + 1`; dead uncovered sets are remembered.
pub fn brute_force_factor_within(g: &Graph, k: usize, budget: u64) -> Result<Option<PathSystem>> {
    if k == 0 {
        return Err(Error::Input("k must be positive".into()));
    }
    if g.order() > MASK_LIMIT {
        return Err(Error::Resource(format!(
            "exhaustive factor search needs at most {MASK_LIMIT} vertices"
        )));
    }
    let mut search = Search {
        g,
        masks: g.masks().expect("mask-sized graph"),
        long: 2 * k + 1,
        dead: HashSet::new(),
        steps: 0,
        budget,
        chosen: Vec::new(),
    };
    if search.cover(g.full_mask())? {
        Ok(Some(PathSystem::new(search.chosen).canonical()))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    g: &'a Graph,
    masks: &'a [u64],
    long: usize,
    dead: HashSet<u64>,
    steps: u64,
    budget: u64,
    chosen: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::Resource(format!(
                "factor search exceeded {} steps",
                self.budget
            )));
        }
        Ok(())
    }

    fn feasible(&self, open: u64) -> bool {
        let mut ok = true;
        self.g.for_each_component_mask(!open, |order, _| {
            ok = order % 2 == 0 || order as usize >= self.long;
            ok
        });
        ok
    }

    fn cover(&mut self, open: u64) -> Result<bool> {
        if open == 0 {
            return Ok(true);
        }
        if self.dead.contains(&open) {
            return Ok(false);
        }
        self.tick()?;
        if !self.feasible(open) {
            self.dead.insert(open);
            return Ok(false);
        }
        let v = open.trailing_zeros() as usize;
        let rest = open & !(1u64 << v);
        let mut nbrs = self.masks[v] & rest;
        while nbrs != 0 {
            let w = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            self.chosen.push(vec![v, w]);
            if self.cover(rest & !(1u64 << w))? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        // v sits at position p of a long path: p vertices on one side and
        // long - 1 - p on the other. Taking p <= (long - 1) / 2 covers every
        // path up to reversal.
        for left in 0..=(self.long - 1) / 2 {
            let right = self.long - 1 - left;
            let mut arm = Vec::with_capacity(right);
            if self.right_arm(open, v, rest, left, right, &mut arm)? {
                return Ok(true);
            }
        }
        self.dead.insert(open);
        Ok(false)
    }

    fn right_arm(
        &mut self,
        open: u64,
        end: usize,
        avail: u64,
        left: usize,
        right: usize,
        arm: &mut Vec<usize>,
    ) -> Result<bool> {
        if arm.len() == right {
            let start = open.trailing_zeros() as usize;
            let mut other = Vec::with_capacity(left);
            return self.left_arm(open, start, avail, left, arm, &mut other);
        }
        self.tick()?;
        let mut next = self.masks[end] & avail;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            arm.push(w);
            if self.right_arm(open, w, avail & !(1u64 << w), left, right, arm)? {
                return Ok(true);
            }
            arm.pop();
        }
        Ok(false)
    }

    fn left_arm(
        &mut self,
        open: u64,
        end: usize,
        avail: u64,
        left: usize,
        right: &[usize],
        other: &mut Vec<usize>,
    ) -> Result<bool> {
        if other.len() == left {
            // Symmetric placements would be tried twice; keep one.
            if left == right.len() && left > 0 && other[0] > right[0] {
                return Ok(false);
            }
            let v = open.trailing_zeros() as usize;
            let mut path: Vec<usize> = other.iter().rev().copied().collect();
            path.push(v);
            path.extend_from_slice(right);
            self.chosen.push(path);
            if self.cover(avail)? {
                return Ok(true);
            }
            self.chosen.pop();
            return Ok(false);
        }
        self.tick()?;
        let mut next = self.masks[end] & avail;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            other.push(w);
            if self.left_arm(open, w, avail & !(1u64 << w), left, right, other)? {
                return Ok(true);
            }
            other.pop();
        }
        Ok(false)
    }
}
