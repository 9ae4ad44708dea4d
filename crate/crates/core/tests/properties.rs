use std::collections::BTreeMap;

use num_rational::Rational64;
use proptest::prelude::*;

use pathfactor::conditions::{check_condition_with, ConditionSpec, Mode, Verdict};
use pathfactor::factor::{brute_force_factor, build, normalize_factor, verify_factor};
use pathfactor::generators::random_factor_critical;
use pathfactor::hypomatchable::alternating_path_to;
use pathfactor::io::{parse_graph, write_graph};
use pathfactor::matching::{maximum_matching, perfect_matching_avoiding, select_barrier};
use pathfactor::{Execution, Graph, PathSystem, VertexSet};

fn graph(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
    })
}

/// Component orders of `g` minus the vertices in `mask`, by union-find.
fn orders(g: &Graph, mask: u64) -> Vec<usize> {
    let n = g.order();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while p[r] != r {
            r = p[r];
        }
        p[v] = r;
        r
    }
    for (u, v) in g.edges() {
        if mask >> u & 1 == 0 && mask >> v & 1 == 0 {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut size = BTreeMap::new();
    for v in (0..n).filter(|&v| mask >> v & 1 == 0) {
        *size.entry(find(&mut parent, v)).or_insert(0) += 1;
    }
    size.into_values().collect()
}

fn naive_holds(g: &Graph, spec: &ConditionSpec) -> bool {
    (0..1u64 << g.order()).all(|mask| {
        let lhs: Rational64 = orders(g, mask)
            .into_iter()
            .filter_map(|o| spec.weights.get(&o).copied())
            .sum();
        lhs <= spec.slope * Rational64::from_integer(mask.count_ones() as i64) + spec.offset
    })
}

fn spec() -> impl Strategy<Value = ConditionSpec> {
    (
        proptest::collection::btree_map((0usize..5).prop_map(|i| 2 * i + 1), (0i64..4, 1i64..4), 1..4),
        (0i64..5, 1i64..4),
        (-2i64..3, 1i64..4),
    )
        .prop_map(|(w, (a, b), (c, d))| {
            let weights = w.into_iter().map(|(o, (p, q))| (o, Rational64::new(p, q))).collect();
            ConditionSpec::new(weights, Rational64::new(a, b), Rational64::new(c, d)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_format_round_trips(g in graph(12)) {
        let back = parse_graph(&write_graph(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn census_partitions_the_rest(g in graph(12), mask in any::<u64>()) {
        let mask = mask & g.full_mask();
        let x = VertexSet::from_mask(mask);
        let cs = g.census(&x).unwrap();
        prop_assert_eq!(cs.vertices() + x.len(), g.order());
        let mut expect = orders(&g, mask);
        let mut got: Vec<usize> = g.components(&x).unwrap().iter().map(VertexSet::len).collect();
        expect.sort();
        got.sort();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn barrier_deficiency_is_tutte_berge(g in graph(12)) {
        let b = select_barrier(&g);
        let m = maximum_matching(&g);
        prop_assert_eq!(b.deficiency, g.order() - 2 * m.size());
        let odd = orders(&g, b.s.to_mask().unwrap()).into_iter().filter(|o| o % 2 == 1).count();
        prop_assert_eq!(odd - b.s.len(), b.deficiency);
    }

    #[test]
    fn exhaustive_scan_matches_naive(g in graph(9), spec in spec()) {
        let seq = check_condition_with(&g, &spec, Mode::exhaustive(), Execution::Sequential).unwrap();
        let par = check_condition_with(&g, &spec, Mode::exhaustive(), Execution::Parallel).unwrap();
        prop_assert_eq!(&seq, &par);
        prop_assert_eq!(seq.verdict == Verdict::HoldsExhaustive, naive_holds(&g, &spec));
        prop_assert_eq!(seq.subsets_checked, 1u64 << g.order());
        if let Some(w) = &seq.witness {
            prop_assert!(w.lhs > w.rhs);
            prop_assert!(w.recompute(&g));
        }
    }

    #[test]
    fn sampling_is_reproducible(g in graph(20), seed in any::<u64>()) {
        let spec = ConditionSpec::p2p9();
        let mode = Mode::Sampled { trials: 3_000, seed };
        let a = check_condition_with(&g, &spec, mode, Execution::Parallel).unwrap();
        let b = check_condition_with(&g, &spec, mode, Execution::Sequential).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normalised_factors_verify(n in 2usize..30, k in 3usize..5) {
        let g = Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap();
        let whole = PathSystem::new(vec![(0..n).collect()]);
        match normalize_factor(&g, &whole, k) {
            Ok(f) => prop_assert_eq!(verify_factor(&g, &f, k), Ok(())),
            Err(_) => prop_assert!(n % 2 == 1 && n < 2 * k + 1),
        }
    }

    #[test]
    fn builder_is_sound(g in graph(10), k in 3usize..5) {
        let out = build(&g, k).unwrap();
        let oracle = brute_force_factor(&g, k);
        match (out.factor(), out.certificate()) {
            (Some(f), None) => {
                prop_assert_eq!(verify_factor(&g, f, k), Ok(()));
                prop_assert!(oracle.is_some());
            }
            (None, Some(c)) => {
                let spec = ConditionSpec::sufficient(k).unwrap();
                let lhs: Rational64 = orders(&g, c.x.to_mask().unwrap())
                    .into_iter()
                    .filter_map(|o| spec.weights.get(&o).copied())
                    .sum();
                prop_assert_eq!(lhs, c.lhs);
                prop_assert!(c.lhs > c.rhs);
            }
            _ => prop_assert!(false, "exactly one outcome"),
        }
    }

    #[test]
    fn alternating_paths_reach_every_vertex(half in 1usize..6, seed in any::<u64>()) {
        let n = 2 * half + 1;
        let g = random_factor_critical(n, seed).unwrap();
        let all = VertexSet::new(0..n);
        for v in 0..n {
            let m = perfect_matching_avoiding(&g, &all, v).unwrap();
            for w in 0..n {
                let p = alternating_path_to(&g, v, &m, w).unwrap();
                prop_assert_eq!(p.len() % 2, 1);
                prop_assert_eq!((p[0], p[p.len() - 1]), (v, w));
                for (i, e) in p.windows(2).enumerate() {
                    prop_assert!(g.has_edge(e[0], e[1]));
                    prop_assert_eq!(m.mate(e[0]) == Some(e[1]), i % 2 == 1);
                }
            }
        }
    }
}
