mod common;

use arq_core::quiver::{build_quiver, Dir, OrientationWord, Quiver, QuiverSpec, Vertex, Window};
use arq_core::Error;
use common::{load, v};
use std::collections::{BTreeSet, VecDeque};

const SAMPLES: [&str; 16] = [
    "qc",
    "qf",
    "qb",
    "q7",
    "a3",
    "kronecker",
    "ainf_out",
    "ainf_left",
    "ainf_zigzag",
    "ainf_hooks",
    "biinf_path",
    "biinf_split",
    "dinf_noinf",
    "dinf_left",
    "dinf_right",
    "wild_right",
];

fn word(prefix: &[Dir], period: &[Dir]) -> OrientationWord {
    OrientationWord::new(prefix.to_vec(), period.to_vec())
}

#[test]
fn shorthand_all_out_is_a_right_infinite_path() {
    let q = build_quiver(&QuiverSpec::a_inf(word(&[], &[Dir::Out]))).unwrap();
    for i in 0..5 {
        let (x, y) = (q.vertex_at(i).unwrap(), q.vertex_at(i + 1).unwrap());
        assert_eq!(q.out_arrows(x).iter().map(|&a| q.target(a)).collect::<Vec<_>>(), vec![y]);
    }
    let p = q.infinite_path_profile();
    assert!(p.has_right_infinite && !p.has_left_infinite);
    assert_eq!(q.paths_between(v(&q, "0"), v(&q, "3")).len(), 1);
    assert_eq!(q.paths_between(v(&q, "0"), v(&q, "3"))[0].len(), 3);
}

#[test]
fn tail_pointing_in_is_a_left_infinite_path() {
    let q =
        Quiver::from_json(r#"{"core": {"vertices": ["a"]}, "tails": [{"attach": "a", "period": ["in"]}]}"#).unwrap();
    let p = q.infinite_path_profile();
    assert!(p.has_left_infinite && !p.has_right_infinite);
    assert!(q.is_single_path().is_some());
    assert!(q.q_plus().is_empty());
}

#[test]
fn rejects_malformed_specs() {
    let cyc = r#"{"core": {"vertices": ["a", "b"], "arrows": [{"from": "a", "to": "b"}, {"from": "b", "to": "a"}]}}"#;
    assert!(matches!(Quiver::from_json(cyc), Err(Error::CoreCycle(_))));
    let dangling = r#"{"core": {"vertices": ["a"], "arrows": [{"from": "a", "to": "z"}]}}"#;
    assert!(matches!(Quiver::from_json(dangling), Err(Error::DanglingArrow(_))));
    let empty = r#"{"core": {"vertices": ["a"]}, "tails": [{"attach": "a", "period": []}]}"#;
    assert!(matches!(Quiver::from_json(empty), Err(Error::EmptyPeriod(_))));
    let apart = r#"{"core": {"vertices": ["a", "b"]}}"#;
    assert!(matches!(Quiver::from_json(apart).unwrap().classify(), Err(Error::Disconnected)));
}

#[test]
fn path_enumeration_basics() {
    let k = load("kronecker");
    assert_eq!(k.paths_between(v(&k, "a"), v(&k, "b")).len(), 2);
    assert!(k.paths_between(v(&k, "b"), v(&k, "a")).is_empty());
    for name in SAMPLES {
        let q = load(name);
        for x in Window::uniform(&q, 3).vertices(&q) {
            let ps = q.paths_between(x, x);
            assert_eq!(ps.len(), 1, "{name}");
            assert!(ps[0].is_empty());
        }
    }
}

#[test]
fn paths_are_composable_and_acyclic() {
    for name in SAMPLES {
        let q = load(name);
        let verts = Window::uniform(&q, 3).vertices(&q);
        for &x in &verts {
            for &y in &verts {
                for p in q.paths_between(x, y) {
                    let mut cur = x;
                    let mut seen = BTreeSet::from([format!("{cur:?}")]);
                    for &a in &p.arrows {
                        assert_eq!(q.source(a), cur);
                        cur = q.target(a);
                        assert!(seen.insert(format!("{cur:?}")), "{name}: repeated vertex");
                    }
                    assert_eq!(cur, y);
                }
            }
        }
    }
}

#[test]
fn path_counts_agree_with_the_opposite_quiver() {
    for name in ["qf", "qc", "kronecker", "dinf_noinf", "wild_right"] {
        let q = load(name);
        let op = q.opposite();
        let verts = Window::uniform(&q, 3).vertices(&q);
        for &x in &verts {
            for &y in &verts {
                assert_eq!(q.path_count(x, y), op.path_count(y, x), "{name} {x:?} {y:?}");
            }
        }
    }
}

#[test]
fn opposite_is_an_involution() {
    for name in SAMPLES {
        let q = load(name);
        assert_eq!(q.opposite().opposite().to_spec(), q.to_spec(), "{name}");
    }
    let q = load("ainf_out").opposite();
    let p = q.infinite_path_profile();
    assert!(p.has_left_infinite && !p.has_right_infinite);
}

#[test]
fn infinite_path_profiles() {
    let cases = [
        ("ainf_out", false, true),
        ("ainf_zigzag", false, false),
        ("ainf_left", true, false),
        ("qc", true, true),
        ("qf", true, false),
        ("biinf_path", true, true),
        ("dinf_noinf", false, false),
        ("a3", false, false),
    ];
    for (name, left, right) in cases {
        let p = load(name).infinite_path_profile();
        assert_eq!((p.has_left_infinite, p.has_right_infinite), (left, right), "{name}");
    }
}

#[test]
fn right_infinite_profile_matches_long_paths() {
    for name in SAMPLES {
        let q = load(name);
        let p = q.infinite_path_profile();
        let d = (0..q.tails().len()).map(|t| q.settled_depth(t)).max().unwrap_or(0);
        let near = Window::uniform(&q, d).vertices(&q);
        let reach = |n: u64| {
            (0..q.tails().len()).any(|t| {
                let far = q.tail_vertex(t, n);
                near.iter().any(|&x| q.path_count(x, far) > 0)
            })
        };
        let long = [10, 50, 200].iter().all(|&n| reach(n));
        assert_eq!(long, p.has_right_infinite, "{name}");
    }
}

#[test]
fn classification() {
    let cases = [
        ("dinf_noinf", "InfDynkin(D_inf)"),
        ("ainf_out", "InfDynkin(A_inf)"),
        ("qc", "InfDynkin(A_biinf)"),
        ("a3", "FiniteDynkin(A_3)"),
        ("kronecker", "FiniteEuclidean"),
        ("qf", "InfiniteGeneral"),
        ("wild_right", "InfiniteGeneral"),
    ];
    for (name, want) in cases {
        assert_eq!(load(name).classify().unwrap().to_string(), want, "{name}");
    }
    let kt = r#"{"core": {"vertices": ["a", "b"], "arrows": [{"from": "a", "to": "b"}, {"from": "a", "to": "b"}]},
                "tails": [{"attach": "b", "period": ["out"]}]}"#;
    assert_eq!(Quiver::from_json(kt).unwrap().classify().unwrap().to_string(), "InfiniteGeneral");
}

#[test]
fn q_plus_of_the_preinjective_example() {
    let q = load("qf");
    let comps: Vec<Vec<String>> =
        q.q_plus().components.iter().map(|c| c.vertices.iter().map(|&x| q.vertex_name(x)).collect()).collect();
    assert_eq!(comps, vec![vec!["0".to_string()], vec!["2".into(), "3".into(), "4".into()]]);
    let a = load("ainf_out");
    assert_eq!(a.q_plus().components.len(), 1);
    assert!(Window::uniform(&a, 6).vertices(&a).iter().all(|&x| a.q_plus().contains(x)));
    assert!(load("ainf_left").q_plus().is_empty());
}

/// Predecessors of `x` inside the window of radius `r`.
fn predecessors(q: &Quiver, x: Vertex, r: u64) -> usize {
    let w = Window::uniform(q, r);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for a in q.in_arrows(y) {
            let s = q.source(a);
            if w.contains(s) && seen.insert(format!("{s:?}")) {
                queue.push_back(s);
            }
        }
    }
    seen.len()
}

#[test]
fn q_plus_agrees_with_predecessor_counts() {
    for name in SAMPLES {
        let q = load(name);
        let r =
            q.tails().iter().enumerate().map(|(t, _)| q.settled_depth(t)).max().unwrap_or(0) * 3 + q.core_len() as u64;
        let qp = q.q_plus();
        for x in Window::uniform(&q, r / 2).vertices(&q) {
            let finite = predecessors(&q, x, r) == predecessors(&q, x, 2 * r);
            assert_eq!(qp.contains(x), finite, "{name} {}", q.vertex_name(x));
        }
    }
}
