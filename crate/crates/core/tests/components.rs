mod common;

use arq_core::ar::{dtr_window, hom_ext_dims};
use arq_core::batch::Mode;
use arq_core::components::*;
use arq_core::hom::{hom_dim, is_isomorphic_window};
use arq_core::linalg::Field;
use arq_core::notation::parse_rep;
use arq_core::rep::{Rep, StringSpec};
use common::{load, v};

#[test]
fn qf_preinjective_components() {
    let q = load("qf");
    let qp = q.q_plus();
    let comps: Vec<Vec<String>> =
        qp.components.iter().map(|c| c.vertices.iter().map(|&v| q.vertex_name(v)).collect()).collect();
    assert_eq!(comps, vec![vec!["0"], vec!["2", "3", "4"]]);

    let w = knit_component(&q, &Seed::Preinjective(0), 6).unwrap();
    assert_eq!(w.names(), vec!["I(0)"]);
    assert_eq!(w.shape, ShapeTag::Trivial);
    let c = w.cells.values().next().unwrap();
    assert!(c.flags.injective && c.flags.pseudo_projective);

    let w = knit_component(&q, &Seed::Preinjective(1), 6).unwrap();
    assert_eq!(w.names(), vec!["I(2)", "I(3)", "τI(3)", "I(4)"]);
    assert!(w.closed);
    assert_eq!(w.arrows.len(), 4);
    assert_eq!(w.tau_links, vec![(CellId::new("I3", 0), CellId::new("I3", 1))]);
    assert!(w.additivity_violations().is_empty());
    let dot = w.to_dot();
    assert_eq!(dot.matches("style=dashed").count(), 1);
    assert_eq!(dot.lines().filter(|l| l.contains("->") && !l.contains("dashed")).count(), 4);
    // the mesh at I(3): τI(3) → I(2) ⊕ I(4) → I(3)
    let dims: Vec<_> = w.cells.values().map(|c| c.dim).collect();
    assert_eq!(dims, vec![Some(2), Some(1), Some(3), Some(2)]);
}

#[test]
fn qb_preprojective() {
    let q = load("qb");
    let w = knit_component(&q, &Seed::Preprojective, 3).unwrap();
    let p = |o: &str, k| w.cells.get(&CellId::new(o, k)).unwrap();
    assert_eq!(p("P0", 0).name, "P(0)");
    assert_eq!(p("P1", 0).dim, Some(2));
    assert_eq!(p("P0", -1).name, "S(1)");
    assert!(p("P2", 0).flags.infinite_dimensional);
    assert!(p("P0", 0).flags.projective);
    assert!(w.additivity_violations().is_empty());
}

#[test]
fn preprojective_parallel_matches_sequential() {
    for name in ["qb", "qf", "dinf_noinf", "a3"] {
        let q = load(name);
        let a = knit_component_with(Mode::Sequential, &q, &Seed::Preprojective, 4).unwrap();
        let b = knit_component_with(Mode::Parallel, &q, &Seed::Preprojective, 4).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{name}");
    }
}

#[test]
fn qc_regular_components() {
    let q = load("qc");
    let r = component_shape(&q, &Rep::String(StringSpec::interval(3, 4)), 6).unwrap();
    assert_eq!(r.kind, ComponentKind::Regular);
    assert_eq!(r.shape, ShapeTag::Wing(3));
    let w = r.window.unwrap();
    assert_eq!(w.len(), 6);
    let mut names = w.names();
    names.sort();
    assert_eq!(names, vec!["M(p_{4,3})", "M(p_∞)", "M[-inf,4]", "M[-inf,5]", "M[3,5]", "S(5)"]);
    assert!(w.closed);

    let r = component_shape(&q, &Rep::String(StringSpec::trivial(0)), 3).unwrap();
    assert_eq!(r.kind, ComponentKind::Regular);
    assert_eq!(r.shape, ShapeTag::ZAinf);

    let c = regular_census(&q).unwrap();
    assert_eq!(c.regular_count, Count::Finite(2));
    assert_eq!(c.breakdown, vec![(ShapeTag::ZAinf, Count::Finite(1)), (ShapeTag::Wing(3), Count::Finite(1))]);
}

#[test]
fn census_table() {
    let one = |s| vec![(s, Count::Finite(1))];
    for (name, count, breakdown) in [
        ("qc", Count::Finite(2), vec![(ShapeTag::ZAinf, Count::Finite(1)), (ShapeTag::Wing(3), Count::Finite(1))]),
        ("biinf_path", Count::Finite(1), one(ShapeTag::ZAinf)),
        (
            "biinf_split",
            Count::Finite(2),
            vec![(ShapeTag::ZAinf, Count::Finite(1)), (ShapeTag::Trivial, Count::Finite(1))],
        ),
        ("dinf_noinf", Count::Finite(1), one(ShapeTag::ZAinf)),
        ("dinf_left", Count::Finite(1), one(ShapeTag::NAinf)),
        ("dinf_right", Count::Finite(1), one(ShapeTag::NminusAinf)),
        ("ainf_out", Count::Finite(0), vec![]),
        ("ainf_zigzag", Count::Finite(0), vec![]),
        ("qb", Count::Finite(0), vec![]),
        ("a3", Count::Finite(0), vec![]),
        ("qf", Count::Infinite, vec![(ShapeTag::NAinf, Count::Infinite)]),
        ("wild_right", Count::Infinite, vec![(ShapeTag::NminusAinf, Count::Infinite)]),
    ] {
        let c = regular_census(&load(name)).unwrap();
        assert_eq!(c.regular_count, count, "{name}");
        assert_eq!(c.breakdown, breakdown, "{name}");
    }
}

#[test]
fn capability_table() {
    for (name, left, right) in [
        ("ainf_zigzag", true, true),
        ("dinf_noinf", true, true),
        ("ainf_out", false, true),
        ("qb", false, true),
        ("wild_right", false, true),
        ("dinf_right", false, true),
        ("dinf_left", true, false),
        ("qf", true, false),
        ("ainf_left", true, true),
        ("biinf_path", false, true),
        ("biinf_split", false, false),
        ("qc", false, false),
    ] {
        let c = ar_capabilities(&load(name)).unwrap();
        assert_eq!((c.left, c.right), (left, right), "{name}");
    }
}

#[test]
fn kronecker_tubes() {
    let q = load("kronecker");
    let r = regular_census(&q).unwrap();
    assert_eq!(r.breakdown, vec![(ShapeTag::Tube(1), Count::Infinite)]);
    for (field, polys) in [(Field::Rational, vec!["x", "x-1", "x+1"]), (Field::Prime(2), vec!["x", "x+1", "x^2+x+1"])] {
        let q = q.with_field(field);
        let reps: Vec<Rep> = polys.iter().map(|p| parse_rep(&q, &format!("K({p})")).unwrap()).collect();
        for (i, m) in reps.iter().enumerate() {
            let w = m.realize(&q).unwrap();
            let t = dtr_window(&q, &w).unwrap().value.unwrap();
            assert_eq!(t.dims, w.dims);
            assert!(is_isomorphic_window(&q, &t, &w).unwrap(), "τM ≅ M for {}", polys[i]);
            assert_eq!(hom_dim(&q, &t, &w), w.dims[0]);
            for (j, n) in reps.iter().enumerate() {
                if i != j {
                    assert_eq!(hom_ext_dims(&q, m, n).unwrap(), (0, 0), "{} vs {}", polys[i], polys[j]);
                }
            }
        }
    }
}

#[test]
fn empty_window_dot() {
    let w = ComponentWindow {
        kind: ComponentKind::Regular,
        cells: Default::default(),
        arrows: vec![],
        tau_links: vec![],
        shape: ShapeTag::UndeterminedBeyondDepth,
        certificate: String::new(),
        closed: true,
    };
    assert_eq!(w.to_dot(), "digraph component {\n  rankdir=LR;\n  node [shape=box];\n}\n");
    let q = load("qf");
    let single = knit_component(&q, &Seed::Preinjective(0), 2).unwrap().to_dot();
    assert_eq!(single.lines().filter(|l| l.contains("label=")).count(), 1);
    assert!(!single.contains("->"));
    assert_eq!(v(&q, "0"), q.q_plus().components[0].vertices[0]);
}
