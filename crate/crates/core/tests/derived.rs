mod common;

use arq_core::ar::{dtr_window, Side};
use arq_core::batch::Mode;
use arq_core::derived::*;
use arq_core::hom::is_isomorphic_window;
use arq_core::notation::parse_rep;
use arq_core::quiver::Quiver;
use arq_core::rep::{Rep, WindowRep};
use arq_core::Error;
use common::{load, v};

fn rep(q: &Quiver, s: &str) -> WindowRep {
    parse_rep(q, s).unwrap().realize(q).unwrap()
}

fn names(q: &Quiver, t: &Triangle) -> String {
    let mid: Vec<String> = t.middle.iter().map(|m| m.name(q)).collect();
    format!("{} → {} → {}", t.start.name(q), mid.join(" ⊕ "), t.end.name(q))
}

#[test]
fn a3_connecting_triangle() {
    let q = load("a3");
    let t = derived_ar_triangle(&q, &DerivedObject::new(rep(&q, "P(1)"), 0), Side::EndingAt).unwrap();
    assert_eq!(t.family, TriangleFamily::Connecting);
    assert_eq!(names(&q, &t), "S(1)[-1] → M[2,3] → M[1,3]");
    assert_eq!(t.jump(), 1);
    assert!(t.euler_balanced());
    // I_1 = S_1 on 1 → 2 → 3, so I_1/S_1 = 0 and the middle is rad P_1 = P_2
    let (quot, rad) = connecting_middle(&q, v(&q, "1")).unwrap();
    assert!(quot.is_empty());
    assert_eq!(rad.len(), 1);
    assert!(is_isomorphic_window(&q, &rad[0], &rep(&q, "P(2)")).unwrap());
}

#[test]
fn connecting_middle_dims() {
    for name in ["a3", "qf", "q7", "dinf_noinf", "ainf_zigzag"] {
        let q = load(name);
        let qp = q.q_plus();
        for c in &qp.components {
            for &x in &c.vertices {
                let i = Rep::Inj(x).realize(&q).unwrap();
                let Some(di) = i.total_dim() else { continue };
                let (quot, rad) = connecting_middle(&q, x).unwrap();
                let dq: usize = quot.iter().map(|m| m.total_dim().unwrap()).sum();
                assert_eq!(dq, di - 1, "{name} I({})", q.vertex_name(x));
                let want = Rep::Sum(q.out_arrows(x).into_iter().map(|a| Rep::Proj(q.target(a))).collect());
                let sum = WindowRep::direct_sum(&q, &rad);
                assert!(is_isomorphic_window(&q, &sum, &want.realize(&q).unwrap()).unwrap());
                assert!(connecting_triangle(&q, x, 0).unwrap().euler_balanced());
            }
        }
    }
}

#[test]
fn shift_invariance() {
    let q = load("qc");
    for s in ["M(p_inf)", "M[3,4]", "S(7)"] {
        let m = rep(&q, s);
        let base = derived_ar_triangle(&q, &DerivedObject::new(m.clone(), 0), Side::EndingAt).unwrap();
        assert_eq!(base.family, TriangleFamily::FromASS);
        assert!(base.sequence.as_ref().unwrap().audit().passed());
        for k in -2..=2 {
            let t = derived_ar_triangle(&q, &DerivedObject::new(m.clone(), k), Side::EndingAt).unwrap();
            assert_eq!(t.start.shift, base.start.shift + k);
            assert_eq!(t.end.shift, k);
            assert_eq!(t.start.rep, base.start.rep);
            assert_eq!(t.middle.len(), base.middle.len());
        }
    }
    let q = load("a3");
    let p = rep(&q, "P(2)");
    for k in -2..=2 {
        let t = derived_ar_triangle(&q, &DerivedObject::new(p.clone(), k), Side::EndingAt).unwrap();
        assert_eq!((t.start.shift, t.end.shift), (k - 1, k));
        assert_eq!(t.family, TriangleFamily::Connecting);
    }
}

#[test]
fn unavailable_cases() {
    let name = |e: Error| e.name().to_string();
    let q = load("q7");
    let e = derived_ar_triangle(&q, &DerivedObject::new(rep(&q, "P(1)"), 0), Side::EndingAt).unwrap_err();
    assert!(e.to_string().contains("NotInQPlus"), "{e}");
    assert_eq!(name(e), "Unavailable");
    let ok = derived_ar_triangle(&q, &DerivedObject::new(rep(&q, "P(0)"), 0), Side::EndingAt).unwrap();
    assert_eq!(ok.family, TriangleFamily::Connecting);

    let q = load("qc");
    let e = derived_ar_triangle(&q, &DerivedObject::new(rep(&q, "M(p_inf)"), 0), Side::StartingAt).unwrap_err();
    assert!(e.to_string().contains("InfiniteDimStart"), "{e}");
    let e = derived_ar_triangle(&q, &DerivedObject::new(rep(&q, "S(5)"), 0), Side::EndingAt).unwrap_err();
    assert!(e.to_string().contains("PseudoProjective"), "{e}");
}

#[test]
fn irreducible_across_shift() {
    let q = load("a3");
    let irr = |m: &str, n: &str| derived_irr_shift(&q, &rep(&q, m), &rep(&q, n)).unwrap();
    assert!(irr("I(1)", "P(2)"));
    assert!(!irr("P(1)", "P(2)"));
    assert!(!irr("I(1)", "S(2)"));
    assert!(!irr("I(2)", "P(2)"));
    assert!(irr("I(2)", "P(3)"));
    let q = load("qc");
    assert!(!derived_irr_shift(&q, &rep(&q, "S(0)"), &rep(&q, "S(1)")).unwrap());
}

#[test]
fn capabilities() {
    for (name, left, right) in [
        ("ainf_out", false, true),
        ("ainf_zigzag", true, true),
        ("biinf_path", false, false),
        ("qc", false, false),
        ("ainf_left", true, false),
        ("qf", true, false),
        ("dinf_noinf", true, true),
        ("a3", true, true),
    ] {
        let c = derived_capabilities(&load(name)).unwrap();
        assert_eq!((c.left, c.right), (left, right), "{name}");
    }
}

#[test]
fn q7_window() {
    let q = load("q7");
    let w = connecting_window(&q, 3).unwrap();
    let arrow = |a: &str, pa, b: &str, pb| {
        w.arrows.iter().any(|(x, y, _)| x.orbit == a && x.power == pa && y.orbit == b && y.power == pb)
    };
    // I_0[−1] → P_1, P_1 → P_0 and P_1 → P_{−1}
    assert!(arrow("0", 1, "1", 0));
    assert!(arrow("1", 0, "0", 0));
    assert!(arrow("1", 0, "-1", 0));
    let i0 = w.cells.iter().find(|(id, _)| id.orbit == "0" && id.power == 1).unwrap().1;
    assert_eq!(i0.shift, -1);
    assert_eq!(i0.name, "I(0)");
    assert_eq!(i0.label(), "I(0)[-1] (1)");
}

#[test]
fn window_cells_are_translates() {
    for name in ["q7", "a3", "qf", "ainf_zigzag"] {
        let q = load(name);
        let w = connecting_window_with(Mode::Sequential, &q, 3).unwrap();
        let par = connecting_window_with(Mode::Parallel, &q, 3).unwrap();
        assert_eq!(w.to_json(), par.to_json(), "{name}");
        for (x, tx) in &w.tau_links {
            let (cx, ctx) = (&w.cells[x], &w.cells[tx]);
            if cx.shift != ctx.shift {
                // τ_D P_x = I_x[−1]
                assert!(cx.flags.projective && ctx.flags.injective, "{name} {x}");
                continue;
            }
            let Some(t) = dtr_window(&q, &cx.rep).unwrap().value else { continue };
            assert!(is_isomorphic_window(&q, &t, &ctx.rep).unwrap(), "{name} {x}");
        }
        // no regular cell: every cell is a τ-translate of a projective or of a shifted injective
        for (id, c) in &w.cells {
            let base = match c.shift {
                0 => &w.cells[&arq_core::components::CellId::new(id.orbit.clone(), 0)],
                -1 => &w.cells[&arq_core::components::CellId::new(id.orbit.clone(), 1)],
                s => panic!("{name} {id}: shift {s}"),
            };
            assert!(if c.shift == 0 { base.flags.projective } else { base.flags.injective }, "{name} {id}");
        }
    }
}
