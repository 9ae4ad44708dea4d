//! Weighted component-counting conditions of the form
//! `sum_i w_i * c_i(G - X) <= a|X| + b` for all `X ⊆ V(G)`, where `c_i`
//! counts components of order `i`.
//!
//! [`check_condition`] scans all subsets (up to a configured order) or a
//! reproducible random sample plus structured candidates. Scans work in
//! integers after scaling every coefficient by a common denominator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{brute_force_factor, build};
use crate::graph::{ComponentCensus, Graph, VertexSet, MASK_LIMIT};
use crate::hypomatchable::{classify_no_factor, crush_set};
use crate::matching::{is_factor_critical, lex_less, select_barrier};
use crate::par::{map_chunks, Execution};

/// Coefficients of a condition. Weights are keyed by odd component order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionSpec {
    pub weights: BTreeMap<usize, Rational64>,
    pub slope: Rational64,
    pub offset: Rational64,
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

impl ConditionSpec {
    pub fn new(weights: BTreeMap<usize, Rational64>, slope: Rational64, offset: Rational64) -> Result<Self> {
        for (&order, w) in &weights {
            if order % 2 == 0 {
                return Err(Error::Input(format!("weight on even order {order}")));
            }
            if w.is_negative() {
                return Err(Error::Input(format!("negative weight {w} on order {order}")));
            }
        }
        Ok(ConditionSpec {
            weights,
            slope,
            offset,
        })
    }

    fn from_parts(weights: &[(usize, Rational64)], slope: Rational64, offset: Rational64) -> Self {
        ConditionSpec {
            weights: weights.iter().copied().collect(),
            slope,
            offset,
        }
    }

    /// `i(G - X) <= 2|X|`: exactly the graphs with a path-factor.
    pub fn path_factor() -> Self {
        Self::from_parts(&[(1, r(1, 1))], r(2, 1), r(0, 1))
    }

    /// `c1 + 2/3 c3 <= 4/3 |X| + 1/3`, sufficient for a {P2, P5}-factor.
    pub fn p2p5() -> Self {
        Self::from_parts(&[(1, r(1, 1)), (3, r(2, 3))], r(4, 3), r(1, 3))
    }

    /// `c1 + 1/3 c3 + 1/3 c5 <= 2/3 |X|`, sufficient for a {P2, P7}-factor.
    pub fn p2p7() -> Self {
        Self::from_parts(&[(1, r(1, 1)), (3, r(1, 3)), (5, r(1, 3))], r(2, 3), r(0, 1))
    }

    /// `c1 + c3 + 2/3 c5 + 1/3 c7 <= 2/3 |X|`, sufficient for a
    /// {P2, P9}-factor.
    pub fn p2p9() -> Self {
        Self::from_parts(
            &[(1, r(1, 1)), (3, r(1, 1)), (5, r(2, 3)), (7, r(1, 3))],
            r(2, 3),
            r(0, 1),
        )
    }

    /// `c1 + c3 + c5 + c7 <= 2/3 |X| + 1/3`, which the sharpness
    /// construction satisfies although it has no {P2, P9}-factor.
    pub fn sharpness() -> Self {
        Self::from_parts(
            &[(1, r(1, 1)), (3, r(1, 1)), (5, r(1, 1)), (7, r(1, 1))],
            r(2, 3),
            r(1, 3),
        )
    }

    /// `sum_{i<k} c_{2i+1} <= (4k+6)/(8k+3) |X|`.
    pub fn conjecture(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("k must be positive".into()));
        }
        let k = k as i64;
        let weights: Vec<(usize, Rational64)> = (0..k).map(|i| ((2 * i + 1) as usize, r(1, 1))).collect();
        Ok(Self::from_parts(&weights, r(4 * k + 6, 8 * k + 3), r(0, 1)))
    }

    /// `sum_{i<k} (k-i) c_{2i+1} <= (k+1)|X|`, which every graph with a
    /// {P2, P(2k+1)}-factor satisfies.
    pub fn necessary(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("k must be positive".into()));
        }
        let k = k as i64;
        let weights: Vec<(usize, Rational64)> =
            (0..k).map(|i| ((2 * i + 1) as usize, r(k - i, 1))).collect();
        Ok(Self::from_parts(&weights, r(k + 1, 1), r(0, 1)))
    }

    /// The sufficient condition used by the builder for `k`.
    pub fn sufficient(k: usize) -> Result<Self> {
        match k {
            3 => Ok(Self::p2p7()),
            4 => Ok(Self::p2p9()),
            _ => Err(Error::Input(format!("k must be 3 or 4, got {k}"))),
        }
    }

    /// Looks up a named condition: `path-factor`, `p2p5`, `p2p7`, `p2p9`,
    /// `sharpness`, `conjecture:k` or `necessary:k`. The short names
    /// `thmA`, `thmB`, `thm13`, `thm14` and `lemma61` are accepted for the
    /// first five.
    pub fn preset(name: &str) -> Result<Self> {
        let param = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Input(format!("bad preset parameter {s:?}")))
        };
        match name.split_once(':') {
            Some(("conjecture", k)) => Self::conjecture(param(k)?),
            Some(("necessary", k)) => Self::necessary(param(k)?),
            None => match name {
                "path-factor" | "thmA" => Ok(Self::path_factor()),
                "p2p5" | "thmB" => Ok(Self::p2p5()),
                "p2p7" | "thm13" => Ok(Self::p2p7()),
                "p2p9" | "thm14" => Ok(Self::p2p9()),
                "sharpness" | "lemma61" => Ok(Self::sharpness()),
                _ => Err(Error::Input(format!("unknown preset {name:?}"))),
            },
            _ => Err(Error::Input(format!("unknown preset {name:?}"))),
        }
    }

    pub fn lhs(&self, census: &ComponentCensus) -> Rational64 {
        self.weights
            .iter()
            .map(|(&order, &w)| w * Rational64::from_integer(census.count(order) as i64))
            .sum()
    }

    pub fn rhs(&self, size: usize) -> Rational64 {
        self.slope * Rational64::from_integer(size as i64) + self.offset
    }

    pub fn evaluate(&self, g: &Graph, x: &VertexSet) -> Result<(Rational64, Rational64)> {
        let census = g.census(x)?;
        Ok((self.lhs(&census), self.rhs(x.len())))
    }

    /// A certificate for `x` if it violates the condition.
    pub fn certificate(&self, g: &Graph, x: &VertexSet) -> Result<Option<ConditionCertificate>> {
        let (lhs, rhs) = self.evaluate(g, x)?;
        Ok((lhs > rhs).then(|| ConditionCertificate {
            x: x.clone(),
            weights: self.weights.clone(),
            slope: self.slope,
            offset: self.offset,
            lhs,
            rhs,
        }))
    }

    /// Integer form: weights indexed by order, slope and offset, all scaled
    /// by the least common denominator.
    fn scaled(&self, max_order: usize) -> Scaled {
        let denom = self
            .weights
            .values()
            .chain([&self.slope, &self.offset])
            .fold(1i64, |acc, q| acc.lcm(q.denom()));
        let scale = |q: &Rational64| (q * Rational64::from_integer(denom)).to_integer();
        let mut weight = vec![0i64; max_order + 1];
        for (&order, w) in &self.weights {
            if order <= max_order {
                weight[order] = scale(w);
            }
        }
        Scaled {
            weight,
            slope: scale(&self.slope),
            offset: scale(&self.offset),
        }
    }
}

impl fmt::Display for ConditionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.weights.iter().map(|(o, w)| format!("{w}*c{o}")).collect();
        write!(f, "{} <= {}*|X|", terms.join(" + "), self.slope)?;
        match self.offset.cmp(&Rational64::from_integer(0)) {
            std::cmp::Ordering::Less => write!(f, " - {}", -self.offset),
            std::cmp::Ordering::Equal => Ok(()),
            std::cmp::Ordering::Greater => write!(f, " + {}", self.offset),
        }
    }
}

struct Scaled {
    weight: Vec<i64>,
    slope: i64,
    offset: i64,
}

impl Scaled {
    /// `lhs - rhs` for the removed set `mask`.
    fn slack(&self, g: &Graph, mask: u64) -> i64 {
        let mut lhs = 0i64;
        g.for_each_component_mask(mask, |order, _| {
            lhs += self.weight.get(order as usize).copied().unwrap_or(0);
            true
        });
        lhs - self.slope * i64::from(mask.count_ones()) - self.offset
    }
}

/// An explicit set `x` with `lhs > rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCertificate {
    pub x: VertexSet,
    pub weights: BTreeMap<usize, Rational64>,
    pub slope: Rational64,
    pub offset: Rational64,
    pub lhs: Rational64,
    pub rhs: Rational64,
}

impl ConditionCertificate {
    /// Recounts the components of `G - x` with a plain search and checks
    /// the stored sides and the strict inequality.
    pub fn recompute(&self, g: &Graph) -> bool {
        let n = g.order();
        if self.x.iter().any(|v| v >= n) {
            return false;
        }
        let mut seen = vec![false; n];
        for v in self.x.iter() {
            seen[v] = true;
        }
        let mut sizes: BTreeMap<usize, i64> = BTreeMap::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut size = 0;
            while let Some(v) = stack.pop() {
                size += 1;
                for &w in g.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            *sizes.entry(size).or_default() += 1;
        }
        let lhs: Rational64 = self
            .weights
            .iter()
            .map(|(o, w)| w * Rational64::from_integer(sizes.get(o).copied().unwrap_or(0)))
            .sum();
        let rhs = self.slope * Rational64::from_integer(self.x.len() as i64) + self.offset;
        lhs == self.lhs && rhs == self.rhs && lhs > rhs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exhaustive { max_order: usize },
    Sampled { trials: u64, seed: u64 },
}

impl Mode {
    pub const DEFAULT_MAX_ORDER: usize = 22;

    pub fn exhaustive() -> Self {
        Mode::Exhaustive {
            max_order: Self::DEFAULT_MAX_ORDER,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    /// `exhaustive`, `exhaustive:N` or `sampled:TRIALS:SEED`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("bad mode {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["exhaustive"] => Ok(Mode::exhaustive()),
            ["exhaustive", n] => Ok(Mode::Exhaustive {
                max_order: n.parse().map_err(|_| bad())?,
            }),
            ["sampled", t, seed] => Ok(Mode::Sampled {
                trials: t.parse().map_err(|_| bad())?,
                seed: seed.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "HOLDS_EXHAUSTIVE")]
    HoldsExhaustive,
    #[serde(rename = "VIOLATED")]
    Violated,
    #[serde(rename = "HOLDS_SAMPLED")]
    HoldsSampled,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::HoldsExhaustive => "HOLDS_EXHAUSTIVE",
            Verdict::Violated => "VIOLATED",
            Verdict::HoldsSampled => "HOLDS_SAMPLED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The checked set with the largest `lhs - rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tightest {
    pub x: VertexSet,
    pub lhs: Rational64,
    pub rhs: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// Smallest violating set found, ties broken lexicographically.
    pub witness: Option<ConditionCertificate>,
    pub subsets_checked: u64,
    pub tightest: Option<Tightest>,
}

/// Best sets seen in one part of a scan.
#[derive(Clone, Copy, Default)]
struct Partial {
    violation: Option<u64>,
    tight: Option<(i64, u64)>,
    checked: u64,
}

fn smaller(a: u64, b: u64) -> bool {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    ca < cb || (ca == cb && lex_less(a, b))
}

impl Partial {
    fn offer(&mut self, mask: u64, slack: i64) {
        self.checked += 1;
        if slack > 0 && self.violation.is_none_or(|v| smaller(mask, v)) {
            self.violation = Some(mask);
        }
        let better = match self.tight {
            None => true,
            Some((s, m)) => slack > s || (slack == s && smaller(mask, m)),
        };
        if better {
            self.tight = Some((slack, mask));
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.checked += other.checked;
        if let Some(v) = other.violation {
            if self.violation.is_none_or(|w| smaller(v, w)) {
                self.violation = Some(v);
            }
        }
        if let Some((s, m)) = other.tight {
            let better = match self.tight {
                None => true,
                Some((t, w)) => s > t || (s == t && smaller(m, w)),
            };
            if better {
                self.tight = Some((s, m));
            }
        }
        self
    }
}

const CHUNK: u64 = 1 << 14;

pub fn check_condition(g: &Graph, spec: &ConditionSpec, mode: Mode) -> Result<ConditionReport> {
    check_condition_with(g, spec, mode, Execution::default())
}

pub fn check_condition_with(
    g: &Graph,
    spec: &ConditionSpec,
    mode: Mode,
    exec: Execution,
) -> Result<ConditionReport> {
    let n = g.order();
    match mode {
        Mode::Exhaustive { max_order } => {
            let limit = max_order.min(MASK_LIMIT - 1);
            if n > limit {
                return Err(Error::Resource(format!(
                    "exhaustive scan allows at most {limit} vertices, got {n}"
                )));
            }
            let scaled = spec.scaled(n);
            let parts = map_chunks(exec, 0..1u64 << n, CHUNK, |range| {
                let mut p = Partial::default();
                for mask in range {
                    p.offer(mask, scaled.slack(g, mask));
                }
                p
            });
            let total = parts.into_iter().fold(Partial::default(), Partial::merge);
            report(g, spec, total, Verdict::HoldsExhaustive)
        }
        Mode::Sampled { trials, seed } => {
            if n > MASK_LIMIT {
                return sampled_large(g, spec, trials, seed, exec);
            }
            let scaled = spec.scaled(n);
            let full = g.full_mask();
            let chunks = trials.div_ceil(CHUNK);
            let parts = map_chunks(exec, 0..chunks, 1, |range| {
                let mut p = Partial::default();
                for chunk in range {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(chunk);
                    let count = CHUNK.min(trials - chunk * CHUNK);
                    for _ in 0..count {
                        let mask = rng.gen::<u64>() & full;
                        p.offer(mask, scaled.slack(g, mask));
                    }
                }
                p
            });
            let mut total = parts.into_iter().fold(Partial::default(), Partial::merge);
            for x in structured_candidates(g)? {
                let mask = x.to_mask().expect("order fits a mask");
                total.offer(mask, scaled.slack(g, mask));
            }
            report(g, spec, total, Verdict::HoldsSampled)
        }
    }
}

fn report(g: &Graph, spec: &ConditionSpec, total: Partial, holds: Verdict) -> Result<ConditionReport> {
    let witness = match total.violation {
        Some(mask) => Some(
            spec.certificate(g, &VertexSet::from_mask(mask))?
                .ok_or_else(|| Error::Internal("scaled scan disagrees with exact recount".into()))?,
        ),
        None => None,
    };
    let tightest = match total.tight {
        Some((_, mask)) => {
            let x = VertexSet::from_mask(mask);
            let (lhs, rhs) = spec.evaluate(g, &x)?;
            Some(Tightest { x, lhs, rhs })
        }
        None => None,
    };
    Ok(ConditionReport {
        verdict: if witness.is_some() { Verdict::Violated } else { holds },
        witness,
        subsets_checked: total.checked,
        tightest,
    })
}

/// Sampling on graphs too large for bitmask components.
fn sampled_large(g: &Graph, spec: &ConditionSpec, trials: u64, seed: u64, exec: Execution) -> Result<ConditionReport> {
    let n = g.order();
    let chunks = trials.div_ceil(CHUNK);
    let better = |a: &(Rational64, VertexSet), b: &(Rational64, VertexSet)| {
        a.0 > b.0 || (a.0 == b.0 && (a.1.len(), &a.1) < (b.1.len(), &b.1))
    };
    let parts = map_chunks(exec, 0..chunks, 1, |range| -> Result<(Vec<(Rational64, VertexSet)>, u64)> {
        let mut best: Option<(Rational64, VertexSet)> = None;
        let mut violation: Option<(Rational64, VertexSet)> = None;
        let mut checked = 0;
        for chunk in range {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            for _ in 0..CHUNK.min(trials - chunk * CHUNK) {
                let x = VertexSet::new((0..n).filter(|_| rng.gen_bool(0.5)));
                let (lhs, rhs) = spec.evaluate(g, &x)?;
                checked += 1;
                let cand = (lhs - rhs, x);
                if cand.0 > Rational64::zero()
                    && violation.as_ref().is_none_or(|v| (cand.1.len(), &cand.1) < (v.1.len(), &v.1))
                {
                    violation = Some(cand.clone());
                }
                if best.as_ref().is_none_or(|b| better(&cand, b)) {
                    best = Some(cand);
                }
            }
        }
        Ok((best.into_iter().chain(violation).collect(), checked))
    });
    let mut pool = Vec::new();
    let mut checked = 0;
    for p in parts {
        let (found, count) = p?;
        pool.extend(found);
        checked += count;
    }
    for x in structured_candidates(g)? {
        checked += 1;
        let (lhs, rhs) = spec.evaluate(g, &x)?;
        pool.push((lhs - rhs, x));
    }
    let violation = pool
        .iter()
        .filter(|c| c.0 > Rational64::zero())
        .min_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
    let tight = pool.iter().fold(None::<&(Rational64, VertexSet)>, |acc, c| match acc {
        Some(b) if !better(c, b) => Some(b),
        _ => Some(c),
    });
    let witness = match violation {
        Some((_, x)) => spec.certificate(g, x)?,
        None => None,
    };
    let tightest = match tight {
        Some((_, x)) => {
            let (lhs, rhs) = spec.evaluate(g, x)?;
            Some(Tightest { x: x.clone(), lhs, rhs })
        }
        None => None,
    };
    Ok(ConditionReport {
        verdict: if witness.is_some() { Verdict::Violated } else { Verdict::HoldsSampled },
        witness,
        subsets_checked: checked,
        tightest,
    })
}

/// Sets that random sampling rarely hits: the empty set, the whole vertex
/// set, a barrier, every `{v}`, `N(v)` and `N[v]`, and each of these
/// extended by crush sets of the large factor-critical components left
/// behind.
pub fn structured_candidates(g: &Graph) -> Result<Vec<VertexSet>> {
    let n = g.order();
    let mut bases: BTreeSet<VertexSet> = BTreeSet::new();
    bases.insert(VertexSet::empty());
    bases.insert(VertexSet::new(0..n));
    bases.insert(select_barrier(g).s);
    for v in 0..n {
        let open = VertexSet::new(g.neighbors(v).iter().copied());
        bases.insert(VertexSet::new([v]));
        bases.insert(open.union(&VertexSet::new([v])));
        bases.insert(open);
    }
    let mut out = bases.clone();
    for base in &bases {
        for k in [3, 4] {
            let mut x = base.clone();
            for comp in g.components(base)? {
                if comp.len() < 7 || comp.len() % 2 == 0 {
                    continue;
                }
                let local = g.induced(&comp)?;
                if !is_factor_critical(&local.graph) {
                    continue;
                }
                let cls = classify_no_factor(&local.graph, k)?;
                if cls.tag.is_family() {
                    let crush = crush_set(&local.graph, &cls)?;
                    x = x.union(&VertexSet::new(crush.iter().map(|w| local.to_host(w))));
                }
            }
            out.insert(x);
        }
    }
    Ok(out.into_iter().collect())
}

/// Checks the condition every graph with a {P2, P(2k+1)}-factor satisfies;
/// a violation proves there is none.
pub fn check_necessary(g: &Graph, k: usize, mode: Mode) -> Result<ConditionReport> {
    check_condition(g, &ConditionSpec::necessary(k)?, mode)
}

/// Largest order [`cross_check`] accepts.
pub const CROSS_CHECK_LIMIT: usize = 14;

/// The implication chain on one graph: sufficient condition ⟹ builder
/// factor ⟹ oracle factor ⟹ necessary condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub sufficient: Verdict,
    pub builder_factor: bool,
    pub oracle_factor: bool,
    pub necessary: Verdict,
    /// Names of the failed implications.
    pub broken: Vec<String>,
}

pub fn cross_check(g: &Graph, k: usize) -> Result<CrossCheck> {
    if g.order() > CROSS_CHECK_LIMIT {
        return Err(Error::Resource(format!(
            "cross check allows at most {CROSS_CHECK_LIMIT} vertices, got {}",
            g.order()
        )));
    }
    let sufficient = check_condition(g, &ConditionSpec::sufficient(k)?, Mode::exhaustive())?.verdict;
    let builder_factor = build(g, k)?.factor().is_some();
    let oracle_factor = brute_force_factor(g, k).is_some();
    let necessary = check_necessary(g, k, Mode::exhaustive())?.verdict;
    let mut broken = Vec::new();
    if sufficient == Verdict::HoldsExhaustive && !builder_factor {
        broken.push("sufficient condition holds but the builder found no factor".to_string());
    }
    if builder_factor && !oracle_factor {
        broken.push("builder factor but the oracle found none".to_string());
    }
    if oracle_factor && necessary != Verdict::HoldsExhaustive {
        broken.push("factor exists but the necessary condition fails".to_string());
    }
    Ok(CrossCheck {
        sufficient,
        builder_factor,
        oracle_factor,
        necessary,
        broken,
    })
}
