//! Small worked cases for each public module.

use num_rational::Rational64;

use pathfactor::bipartite_paths::{
    brute_force_hypotheses, construct, verify_aux_system, AuxPath, AuxPathSystem, AuxiliaryBipartite,
    Construction, Node, Shape, WitnessSide,
};
use pathfactor::conditions::{check_condition, check_necessary, cross_check, ConditionSpec, Mode, Verdict};
use pathfactor::factor::{brute_force_factor, build, build_p2p7, build_p2p9, normalize_factor, verify_factor, Route};
use pathfactor::generators::{generate, random_factor_critical, FamilySpec};
use pathfactor::graph::{has_hamiltonian_path, hamiltonian_path};
use pathfactor::hypomatchable::{
    alternating_path_to, classify_no_factor, crush_set, crush_value, ear_decomposition, is_s_large,
    long_alternating_path, validate_ears, Axiom, Ear, EarDecomposition, EarKind, FamilyTag,
};
use pathfactor::matching::{
    deficiency_oracle, is_factor_critical, maximum_matching, perfect_matching_on, select_barrier,
    tutte_witness, Matching, TutteOutcome,
};
use pathfactor::{Error, Graph, PathSystem, VertexSet};

fn gen(s: &str) -> Graph {
    generate(&s.parse::<FamilySpec>().unwrap()).unwrap().graph
}

fn set(v: &[usize]) -> VertexSet {
    VertexSet::new(v.iter().copied())
}

fn star() -> Graph {
    Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
}

fn frac(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

/// Whether some relabelling maps `a` onto `b`.
fn isomorphic(a: &Graph, b: &Graph) -> bool {
    fn extend(a: &Graph, b: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let v = map.len();
        if v == a.order() {
            return true;
        }
        for w in 0..b.order() {
            if used[w] || a.degree(v) != b.degree(w) {
                continue;
            }
            if (0..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u], w)) {
                map.push(w);
                used[w] = true;
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    a.order() == b.order()
        && a.size() == b.size()
        && extend(a, b, &mut Vec::new(), &mut vec![false; b.order()])
}

#[test]
fn graph_components_and_census() {
    let p4 = gen("pn:4");
    assert_eq!(p4.components(&set(&[1])).unwrap(), vec![set(&[0]), set(&[2, 3])]);
    let w3 = gen("k1_sk2:3");
    let parts = w3.components(&set(&[0])).unwrap();
    assert_eq!(parts.len(), 3);
    assert!(parts.iter().all(|c| c.len() == 2));
    assert_eq!(gen("cn:7").components(&VertexSet::empty()).unwrap(), vec![set(&[0, 1, 2, 3, 4, 5, 6])]);
    assert!(matches!(p4.components(&set(&[4])), Err(Error::VertexOutOfRange { .. })));

    assert_eq!(star().census(&set(&[0])).unwrap().c1(), 3);
    let cs = w3.census(&set(&[0, 1, 3, 5])).unwrap();
    assert_eq!((cs.c1(), cs.c3(), cs.c5(), cs.c7()), (3, 0, 0, 0));
    let cs = gen("pn:9").census(&set(&[2])).unwrap();
    assert_eq!((cs.count(2), cs.count(6), cs.c_odd()), (1, 1, 0));
}

#[test]
fn graph_induced_and_hamiltonian() {
    assert_eq!(gen("kn:3").induced(&set(&[0, 2])).unwrap().graph.size(), 1);
    let block = gen("join(kn:1,union(kn:4,kn:2,kn:2))");
    let k4 = block.induced(&set(&[1, 2, 3, 4])).unwrap().graph;
    assert!(isomorphic(&k4, &gen("kn:4")));
    assert_eq!(block.induced(&VertexSet::empty()).unwrap().graph.order(), 0);

    assert!(has_hamiltonian_path(&gen("cn:7")));
    assert!(!has_hamiltonian_path(&block));
    assert!(!has_hamiltonian_path(&star()));
    let p = hamiltonian_path(&gen("cn:7"), None).unwrap().unwrap();
    assert_eq!(p.len(), 7);
}

#[test]
fn generators() {
    let w3 = gen("k1_sk2:3");
    assert_eq!((w3.order(), w3.size()), (7, 9));
    assert_eq!(w3.degree(0), 6);
    assert!(isomorphic(&gen("a1:1,0,0"), &gen("k1_sk2:2")));

    let h1 = generate(&FamilySpec::Sharp(1)).unwrap();
    assert_eq!(h1.graph.order(), 28);
    let r0: Vec<usize> = h1.roles.iter().filter(|(n, _)| n == "R0").map(|&(_, v)| v).collect();
    assert_eq!(r0.len(), 1);
    let blocks = h1.graph.components(&VertexSet::new(r0)).unwrap();
    assert_eq!(blocks.iter().map(VertexSet::len).collect::<Vec<_>>(), vec![9, 9, 9]);

    assert!(isomorphic(&random_factor_critical(3, 11).unwrap(), &gen("kn:3")));
    assert_eq!(random_factor_critical(1, 0).unwrap().order(), 1);
    assert!(is_factor_critical(&random_factor_critical(9, 7).unwrap()));
    assert!(matches!(random_factor_critical(8, 0), Err(Error::Input(_))));
    assert!(matches!("a4_prime:0".parse::<FamilySpec>().and_then(|s| generate(&s)), Err(Error::InvalidFamily(_))));
}

#[test]
fn matching_examples() {
    assert_eq!(maximum_matching(&gen("pn:4")).size(), 2);
    assert_eq!(maximum_matching(&gen("cn:5")).size(), 2);
    let block = gen("join(kn:1,union(kn:4,kn:2,kn:2))");
    let rest = set(&[1, 2, 3, 4, 5, 6, 7, 8]);
    assert_eq!(perfect_matching_on(&block, &rest).unwrap().size(), 4);

    assert!(is_factor_critical(&gen("kn:3")));
    assert!(is_factor_critical(&gen("k1_sk2:3")));
    assert!(!is_factor_critical(&gen("pn:3")));

    assert!(matches!(tutte_witness(&gen("kn:2")).unwrap(), TutteOutcome::HasPerfectMatching(_)));
    assert_eq!(tutte_witness(&Graph::empty(2)).unwrap(), TutteOutcome::Barrier(VertexSet::empty()));
    let p3k1 = gen("union(pn:3,kn:1)");
    match tutte_witness(&p3k1).unwrap() {
        TutteOutcome::Barrier(s) => assert!(p3k1.census(&s).unwrap().c_odd() >= s.len() + 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(tutte_witness(&gen("kn:3")), Err(Error::Input(_))));
}

#[test]
fn barrier_examples() {
    let b = select_barrier(&star());
    assert_eq!((b.s.clone(), b.deficiency), (set(&[0]), 2));
    assert_eq!(b.components, vec![set(&[1]), set(&[2]), set(&[3])]);

    let b = select_barrier(&gen("k1_sk2:3"));
    assert!(b.s.is_empty());
    assert_eq!((b.components.len(), b.deficiency), (1, 1));

    let b = select_barrier(&gen("kn:2"));
    assert_eq!((b.s.clone(), b.components.clone(), b.deficiency), (set(&[0]), vec![set(&[1])], 0));

    assert_eq!(deficiency_oracle(&gen("cn:5")).unwrap().0, 1);
    assert_eq!(deficiency_oracle(&gen("kn:4")).unwrap().0, 0);
    assert_eq!(deficiency_oracle(&Graph::empty(3)).unwrap(), (3, VertexSet::empty()));
}

#[test]
fn ear_examples() {
    let c5 = gen("cn:5");
    let d = ear_decomposition(&c5, None).unwrap();
    assert_eq!(d.ears.len(), 1);
    assert_eq!((d.ears[0].kind, d.ears[0].vertices.len()), (EarKind::Cycle, 5));
    assert_eq!(validate_ears(&c5, &d), Ok(()));
    let prefix = EarDecomposition {
        ears: vec![Ear { kind: EarKind::Cycle, vertices: vec![0, 1, 2, 3] }],
    };
    assert!(validate_ears(&c5, &prefix).is_err());
    let even = EarDecomposition {
        ears: vec![Ear { kind: EarKind::Path, vertices: vec![0, 1, 2, 3, 4] }],
    };
    assert!(validate_ears(&c5, &even).is_err());

    let w2 = gen("k1_sk2:2");
    let d = ear_decomposition(&w2, None).unwrap();
    assert_eq!(d.ears.len(), 2);
    assert!(d.ears.iter().all(|e| e.edge_count() == 3 && e.vertices.contains(&0)));
    assert_eq!(validate_ears(&w2, &d), Ok(()));

    let k3 = gen("kn:3");
    let d = ear_decomposition(&k3, Some((0, 1))).unwrap();
    assert!(d.ears[0].edges().iter().any(|&(a, b)| (a, b) == (0, 1) || (a, b) == (1, 0)));
    assert!(matches!(ear_decomposition(&gen("pn:3"), None), Err(Error::Domain(_))));

    let c7 = gen("cn:7");
    assert!(is_s_large(&c7, &ear_decomposition(&c7, None).unwrap(), &[0], 7).unwrap());
    assert!(!is_s_large(&c5, &ear_decomposition(&c5, None).unwrap(), &[0], 7).unwrap());
    let w3 = gen("k1_sk2:3");
    assert!(!is_s_large(&w3, &ear_decomposition(&w3, None).unwrap(), &[0, 1, 2], 7).unwrap());
}

#[test]
fn ear_violation_names_an_axiom() {
    let c5 = gen("cn:5");
    let bad = EarDecomposition {
        ears: vec![Ear { kind: EarKind::Path, vertices: vec![0, 1, 2, 3, 4] }],
    };
    let v = validate_ears(&c5, &bad).unwrap_err();
    assert!(matches!(v.axiom, Axiom::E1 | Axiom::E2), "{v}");
}

#[test]
fn classification_and_crush_sets() {
    let cls = classify_no_factor(&gen("k1_sk2:3"), 3).unwrap();
    assert_eq!((cls.tag, cls.params.clone()), (FamilyTag::G0, vec![3]));

    let block = gen("join(kn:1,union(kn:4,kn:2,kn:2))");
    let cls = classify_no_factor(&block, 4).unwrap();
    assert_eq!((cls.tag, cls.params.clone()), (FamilyTag::G3, vec![2]));
    let x = crush_set(&block, &cls).unwrap();
    assert_eq!(x.len(), 4);
    let cs = block.census(&x).unwrap();
    assert_eq!((cs.c1(), cs.c3()), (2, 1));
    assert_eq!(crush_value(&block, &x).unwrap(), frac(3, 1));

    assert_eq!(classify_no_factor(&gen("cn:9"), 4).unwrap().tag, FamilyTag::HasFactor);
    assert_eq!(classify_no_factor(&gen("cn:5"), 3).unwrap().tag, FamilyTag::Small35);
    assert_eq!(classify_no_factor(&gen("cn:7"), 4).unwrap().tag, FamilyTag::Order7Nonspecial);
    assert!(matches!(classify_no_factor(&gen("pn:3"), 3), Err(Error::Domain(_))));

    let w4 = gen("k1_sk2:4");
    let x = crush_set(&w4, &classify_no_factor(&w4, 3).unwrap()).unwrap();
    assert_eq!((x.len(), w4.census(&x).unwrap().c1()), (5, 4));

    let a1 = gen("a1:2,2,2");
    let cls = classify_no_factor(&a1, 4).unwrap();
    assert_eq!(cls.tag, FamilyTag::G1MinEq2);
    let x = crush_set(&a1, &cls).unwrap();
    assert!(x.len() >= 6);
    assert_eq!(crush_value(&a1, &x).unwrap(), Rational64::from_integer(x.len() as i64) - frac(4, 3));

    let bare = classify_no_factor(&gen("cn:9"), 4).unwrap();
    assert!(matches!(crush_set(&gen("cn:9"), &bare), Err(Error::Domain(_))));
}

#[test]
fn alternating_paths() {
    let k3 = gen("kn:3");
    let m = Matching::from_pairs(&k3, [(1, 2)]).unwrap();
    assert_eq!(alternating_path_to(&k3, 0, &m, 0).unwrap(), vec![0]);
    assert_eq!(alternating_path_to(&k3, 0, &m, 1).unwrap(), vec![0, 2, 1]);

    let w2 = gen("k1_sk2:2");
    let m = Matching::from_pairs(&w2, [(1, 2), (3, 4)]).unwrap();
    assert_eq!(alternating_path_to(&w2, 0, &m, 1).unwrap(), vec![0, 2, 1]);
    assert!(matches!(long_alternating_path(&w2, 0, &m), Err(Error::Domain(_))));

    let c5 = gen("cn:5");
    let m = Matching::from_pairs(&c5, [(1, 2), (3, 4)]).unwrap();
    let p = long_alternating_path(&c5, 0, &m).unwrap();
    assert_eq!((p.len(), p[0]), (5, 0));

    let k5 = gen("kn:5");
    let m = Matching::from_pairs(&k5, [(1, 2), (3, 4)]).unwrap();
    let p = long_alternating_path(&k5, 0, &m).unwrap();
    assert_eq!((p.len(), p[0]), (5, 0));
    assert!(p.windows(2).skip(1).step_by(2).all(|e| m.mate(e[0]) == Some(e[1])));

    let bad = Matching::from_pairs(&k3, [(0, 1)]).unwrap();
    assert!(matches!(alternating_path_to(&k3, 0, &bad, 1), Err(Error::Input(_))));
}

fn aux(t1: &[usize], t2: &[usize], nt: usize, forbidden: &[(usize, usize)]) -> AuxiliaryBipartite {
    AuxiliaryBipartite {
        s_side: vec![0],
        t_side: (0..nt).map(|t| 10 + t).collect(),
        adjacency: (0..nt).map(|t| (0, t)).collect(),
        forbidden: forbidden.to_vec(),
        t1: t1.to_vec(),
        t2: t2.to_vec(),
    }
}

#[test]
fn bipartite_engine() {
    let one = aux(&[0], &[], 1, &[]);
    match construct(&one).unwrap() {
        Construction::System(sys) => {
            assert_eq!(sys.paths.len(), 1);
            assert_eq!((sys.paths[0].shape, sys.paths[0].nodes.clone()), (Shape::I, vec![Node::S(0), Node::T(0)]));
            assert_eq!(verify_aux_system(&one, &sys), Ok(()));
        }
        other => panic!("{other:?}"),
    }

    let pair = aux(&[], &[0, 1], 2, &[]);
    let Construction::System(sys) = construct(&pair).unwrap() else {
        panic!("expected a system");
    };
    assert_eq!(sys.paths[0].shape, Shape::II);
    assert_eq!(sys.paths[0].nodes, vec![Node::T(0), Node::S(0), Node::T(1)]);
    assert!(brute_force_hypotheses(&pair).unwrap());

    let hall = aux(&[0, 1], &[], 2, &[]);
    let Construction::Witness(w) = construct(&hall).unwrap() else {
        panic!("expected a witness");
    };
    assert_eq!((w.side, w.nodes.clone(), w.neighborhood), (WitnessSide::T, vec![0, 1], 1));
    assert!(w.verify(&hall));
    assert!(!brute_force_hypotheses(&hall).unwrap());
    assert!(brute_force_hypotheses(&AuxiliaryBipartite::default()).unwrap());

    let forbidden = aux(&[], &[0, 1], 2, &[(0, 0)]);
    let bad = AuxPathSystem {
        paths: vec![AuxPath { shape: Shape::II, nodes: vec![Node::T(0), Node::S(0), Node::T(1)] }],
    };
    assert_eq!(verify_aux_system(&forbidden, &bad).unwrap_err().clause, "E(A) ⊆ E(G)−L");
    let plain = aux(&[], &[], 1, &[]);
    let empty = AuxPathSystem { paths: vec![] };
    assert_eq!(verify_aux_system(&plain, &empty).unwrap_err().clause, "covers S");

    let overlap = aux(&[0], &[0], 1, &[]);
    assert!(matches!(construct(&overlap), Err(Error::Input(_))));
}

#[test]
fn factor_verification_and_normalisation() {
    let p7 = gen("pn:7");
    assert_eq!(verify_factor(&p7, &PathSystem::new(vec![(0..7).collect()]), 3), Ok(()));
    let split = PathSystem::new(vec![vec![0, 1, 2], vec![3, 4, 5, 6]]);
    assert_eq!(verify_factor(&p7, &split, 3).unwrap_err(), "order 3 not allowed");
    let c9 = gen("cn:9");
    assert_eq!(verify_factor(&c9, &PathSystem::new(vec![(0..9).collect()]), 4), Ok(()));

    let p4 = gen("pn:4");
    assert_eq!(normalize_factor(&p4, &PathSystem::new(vec![(0..4).collect()]), 3).unwrap().orders(), vec![2, 2]);
    let p9 = gen("pn:9");
    let mut orders = normalize_factor(&p9, &PathSystem::new(vec![(0..9).collect()]), 3).unwrap().orders();
    orders.sort();
    assert_eq!(orders, vec![2, 7]);
    let p11 = gen("pn:11");
    let mut orders = normalize_factor(&p11, &PathSystem::new(vec![(0..11).collect()]), 4).unwrap().orders();
    orders.sort();
    assert_eq!(orders, vec![2, 9]);
}

#[test]
fn builder_examples() {
    let c7 = gen("cn:7");
    let out = build_p2p7(&c7).unwrap();
    assert_eq!(out.factor().unwrap().orders(), vec![7]);

    let w3 = gen("k1_sk2:3");
    let cert = build_p2p7(&w3).unwrap().certificate().cloned().unwrap();
    assert_eq!(cert.x.len(), 4);
    assert_eq!(w3.census(&cert.x).unwrap().c1(), 3);
    assert!(cert.lhs > cert.rhs);

    let cert = build_p2p7(&star()).unwrap().certificate().cloned().unwrap();
    assert_eq!((cert.x.clone(), cert.lhs, cert.rhs), (set(&[0]), frac(3, 1), frac(2, 3)));

    let p9 = gen("pn:9");
    let out = build_p2p9(&p9).unwrap();
    assert_eq!(out.factor().unwrap().orders(), vec![9]);
    assert_eq!(out.trace.route, Route::DirectSearch);

    let h1 = gen("hn_sharp:1");
    let cert = build_p2p9(&h1).unwrap().certificate().cloned().unwrap();
    assert!(cert.lhs > cert.rhs);
    assert!(cert.recompute(&h1));

    let block = gen("join(kn:1,union(kn:4,kn:2,kn:2))");
    let cert = build_p2p9(&block).unwrap().certificate().cloned().unwrap();
    let cs = block.census(&cert.x).unwrap();
    assert_eq!((cert.x.len(), cs.c1(), cs.c3()), (4, 2, 1));

    assert!(matches!(build(&c7, 5), Err(Error::Input(_))));
}

#[test]
fn brute_force_oracle() {
    assert!(brute_force_factor(&gen("k1_sk2:3"), 3).is_none());
    assert!(brute_force_factor(&gen("cn:9"), 4).is_some());
    assert!(brute_force_factor(&gen("join(kn:1,union(kn:4,kn:2,kn:2))"), 4).is_none());
}

#[test]
fn condition_examples() {
    // c1 + c3/3 + c5/3 <= 2|X|/3 fails on C7: dropping 0, 1, 3, 5 isolates 2, 4 and 6.
    let c7 = gen("cn:7");
    let rep = check_condition(&c7, &ConditionSpec::p2p7(), Mode::exhaustive()).unwrap();
    assert_eq!(rep.verdict, Verdict::Violated);
    let w = rep.witness.unwrap();
    assert_eq!((w.x, w.lhs, w.rhs), (set(&[0, 1, 3, 5]), frac(3, 1), frac(8, 3)));

    let k7 = gen("kn:7");
    let rep = check_condition(&k7, &ConditionSpec::p2p7(), Mode::exhaustive()).unwrap();
    assert_eq!((rep.verdict, rep.subsets_checked), (Verdict::HoldsExhaustive, 128));

    let rep = check_condition(&star(), &ConditionSpec::p2p7(), Mode::exhaustive()).unwrap();
    let w = rep.witness.unwrap();
    assert_eq!((rep.verdict, w.x, w.lhs, w.rhs), (Verdict::Violated, set(&[0]), frac(3, 1), frac(2, 3)));

    let h1 = gen("hn_sharp:1");
    let rep = check_condition(&h1, &ConditionSpec::sharpness(), Mode::Sampled { trials: 20_000, seed: 3 }).unwrap();
    assert_eq!(rep.verdict, Verdict::HoldsSampled);

    assert!(matches!(check_condition(&h1, &ConditionSpec::p2p9(), Mode::exhaustive()), Err(Error::Resource(_))));
}

#[test]
fn preset_names() {
    for (name, short) in [("path-factor", "thmA"), ("p2p5", "thmB"), ("p2p7", "thm13"), ("p2p9", "thm14"), ("sharpness", "lemma61")] {
        assert_eq!(ConditionSpec::preset(name).unwrap(), ConditionSpec::preset(short).unwrap());
    }
    assert_eq!(ConditionSpec::preset("p2p9").unwrap(), ConditionSpec::p2p9());
    assert!(matches!(ConditionSpec::preset("thm99"), Err(Error::Input(_))));
}

#[test]
fn necessary_condition_examples() {
    assert_eq!(check_necessary(&gen("pn:7"), 3, Mode::exhaustive()).unwrap().verdict, Verdict::HoldsExhaustive);
    let rep = check_necessary(&star(), 3, Mode::exhaustive()).unwrap();
    let w = rep.witness.unwrap();
    assert_eq!((rep.verdict, w.x, w.lhs, w.rhs), (Verdict::Violated, set(&[0]), frac(9, 1), frac(4, 1)));
    assert_eq!(check_necessary(&gen("kn:2"), 3, Mode::exhaustive()).unwrap().verdict, Verdict::HoldsExhaustive);
}

#[test]
fn cross_check_examples() {
    let c9 = cross_check(&gen("cn:9"), 4).unwrap();
    assert!(c9.broken.is_empty());
    assert!(c9.builder_factor && c9.oracle_factor);
    assert_eq!(c9.necessary, Verdict::HoldsExhaustive);

    let w3 = cross_check(&gen("k1_sk2:3"), 3).unwrap();
    assert_eq!(w3.sufficient, Verdict::Violated);
    assert!(!w3.oracle_factor && w3.broken.is_empty());

    let s = cross_check(&star(), 3).unwrap();
    assert_eq!(s.necessary, Verdict::Violated);
    assert!(!s.oracle_factor && s.broken.is_empty());

    assert!(matches!(cross_check(&gen("pn:15"), 3), Err(Error::Resource(_))));
}
