//! One PASS/FAIL line per acceptance criterion. Each check is a closure that
//! panics on the first discrepancy; panics are caught and reported.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use arq_core::ar::{ar_translate, dtr_window, ending_at, hom_ext_dims, Direction, Side};
use arq_core::batch;
use arq_core::components::*;
use arq_core::derived::*;
use arq_core::hom::{hom_dim, is_indecomposable, is_isomorphic, is_isomorphic_window};
use arq_core::linalg::Field;
use arq_core::notation::parse_rep;
use arq_core::quiver::{Quiver, Window};
use arq_core::rep::{random_finite, settle, Rep, StringSpec, WindowRep};
use arq_core::strings::{qr_ql_sets, tau_string, Line, Tau};
use common::{a_n, cross_check, d4, load, positive_roots, random_line_specs};

static LAST_PANIC: Mutex<String> = Mutex::new(String::new());

fn ensure(cond: bool, msg: impl FnOnce() -> String) {
    if !cond {
        panic!("{}", msg());
    }
}

fn same<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str) {
    ensure(got == want, || format!("{what}: got {got:?}, want {want:?}"));
}

fn run(n: usize, title: &str, budget: Option<Duration>, f: impl FnOnce() -> String) -> bool {
    let t0 = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f));
    let dt = t0.elapsed();
    let (ok, detail) = match out {
        Ok(detail) => match budget {
            Some(b) if dt > b => (false, format!("{detail}; over budget {b:?}")),
            _ => (true, detail),
        },
        Err(_) => (false, LAST_PANIC.lock().unwrap().clone()),
    };
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("{verdict} [{n}] {title} ({:.3}s): {detail}", dt.as_secs_f64());
    ok
}

fn c1() -> String {
    let q = load("qc");
    let line = Line::new(&q).unwrap();
    let (r, l) = qr_ql_sets(&q, -1, 8).unwrap();
    same(l.render(&line).as_str(), "ε_5 ⇢ p_{4,3} ⇢ p_∞", "Q_L");
    same(r.render(&line).as_str(), "⋯ ⇠ ε_{-1} ⇠ ε_0 ⇠ ε_1 ⇠ p_{2,3} ⇠ p_{4,6} ⇠ ε_7 ⇠ ε_8 ⇠ ⋯", "Q_R");
    let s = |x| Rep::String(StringSpec::trivial(x));
    let iv = |a, b| Rep::String(StringSpec::interval(a, b));
    // τ along both systems, by the combinatorial rule and by the engine
    for (m, t) in [
        (StringSpec::ray_down(2), iv(3, 4)),
        (StringSpec::interval(3, 4), s(5)),
        (StringSpec::trivial(7), iv(4, 6)),
        (StringSpec::interval(4, 6), iv(2, 3)),
        (StringSpec::interval(2, 3), s(1)),
        (StringSpec::trivial(1), s(0)),
    ] {
        same(tau_string(&q, &m, Tau::Tau).unwrap(), Ok(t.clone()), &format!("τ{m}"));
        let e = ar_translate(&q, &Rep::String(m), Direction::DTr).unwrap().value.unwrap();
        ensure(is_isomorphic(&q, &Rep::Window(e), &t).unwrap(), || format!("engine τ{m}"));
    }
    let wing = component_shape(&q, &iv(3, 4), 6).unwrap();
    same(wing.shape, ShapeTag::Wing(3), "O_L component");
    same(wing.window.as_ref().map(|w| w.len()), Some(6), "wing cells");
    let z = component_shape(&q, &s(0), 3).unwrap();
    same(z.shape, ShapeTag::ZAinf, "O_R component");
    "Q_L, Q_R, τ-chains, Wing(3) with 6 cells and ZAinf match".into()
}

fn c2() -> String {
    let q = load("qf");
    let qp = q.q_plus();
    let comps: Vec<Vec<String>> =
        qp.components.iter().map(|c| c.vertices.iter().map(|&x| q.vertex_name(x)).collect()).collect();
    same(comps, vec![vec!["0".to_string()], vec!["2".into(), "3".into(), "4".into()]], "Q⁺ components");
    let a = knit_component(&q, &Seed::Preinjective(0), 6).unwrap();
    same(a.names(), vec!["I(0)".to_string()], "first preinjective component");
    let b = knit_component(&q, &Seed::Preinjective(1), 6).unwrap();
    same(b.names(), ["I(2)", "I(3)", "τI(3)", "I(4)"].map(String::from).to_vec(), "second component");
    ensure(b.closed, || "wing not closed".into());
    let mut arrows: Vec<(String, String)> =
        b.arrows.iter().map(|(x, y, _)| (b.cells[x].name.clone(), b.cells[y].name.clone())).collect();
    arrows.sort();
    let want = [("I(2)", "I(3)"), ("I(4)", "I(3)"), ("τI(3)", "I(2)"), ("τI(3)", "I(4)")];
    same(arrows, want.map(|(a, b)| (a.to_string(), b.to_string())).to_vec(), "wing arrows");
    same(b.tau_links.len(), 1, "τ links");
    "{0} ∪ {2,3,4}; {I(0)} and the 4-cell component τI(3) → I(2), I(4) → I(3)".into()
}

fn c3() -> String {
    let specs = random_line_specs(7, 200);
    let results = batch::map(&specs, |s| cross_check(s, 30));
    let members: usize = results.iter().map(|r| r.0).sum();
    let bad: Vec<&String> = results.iter().flat_map(|r| &r.1).collect();
    ensure(bad.is_empty(), || format!("{} mismatches, first: {}", bad.len(), bad[0]));
    format!("200 quivers, {members} members, 0 mismatches")
}

fn dynkin_case(q: &Quiver, bound: usize, expect: usize) {
    let roots = positive_roots(q, bound);
    same(roots.len(), expect, "root census");
    let w = knit_component(q, &Seed::Preprojective, 2 * q.core_len() + 2).unwrap();
    ensure(w.closed, || "component not closed".into());
    let dims: BTreeSet<Vec<usize>> = w.cells.values().map(|c| c.rep.dims.clone()).collect();
    same(w.len(), expect, "knitted indecomposables");
    same(dims, roots, "dimension vectors vs roots");
    for c in w.cells.values() {
        ensure(is_indecomposable(q, &c.rep).unwrap(), || format!("{} decomposes", c.name));
        if c.flags.projective {
            continue;
        }
        let s = ending_at(q, &c.rep).unwrap();
        ensure(s.audit().passed(), || format!("audit {} {:?}", c.name, s.audit()));
        let t = dtr_window(q, &c.rep).unwrap().value.unwrap();
        ensure(is_isomorphic_window(q, &s.left, &t).unwrap(), || format!("left ≠ DTr {}", c.name));
    }
}

fn c4() -> String {
    let mut cases = 0;
    for n in 2..=3 {
        for mask in 0..1u32 << (n - 1) {
            dynkin_case(&a_n(n, mask), 1, n * (n + 1) / 2);
            cases += 1;
        }
    }
    for n in 4..=5 {
        for mask in [0u32, 0b0101, 0b0110] {
            dynkin_case(&a_n(n, mask & ((1 << (n - 1)) - 1)), 1, n * (n + 1) / 2);
            cases += 1;
        }
    }
    for mask in [0, 0b111, 0b010] {
        dynkin_case(&d4(mask), 2, 12);
        cases += 1;
    }
    format!("{cases} orientations, counts and dimension vectors match the root census")
}

fn c5() -> String {
    let names = ["a3", "qf", "qc", "dinf_noinf", "qb"];
    let quivers: Vec<Quiver> = names.iter().map(|n| load(n)).collect();
    let mut checks = 0;
    for seed in 0..100u64 {
        let base = &quivers[seed as usize % names.len()];
        for field in [Field::Rational, Field::Prime(3)] {
            let q = base.with_field(field);
            let w = settle(&q, &Window::uniform(&q, 2));
            let m = random_finite(&q, &w, 2, seed);
            for a in w.vertices(&q) {
                let pa = Rep::Proj(a).materialize(&q, &w).unwrap();
                let ia = Rep::Inj(a).materialize(&q, &w).unwrap();
                let want = m.dim(a);
                same(hom_dim(&q, &pa, &m), want, &format!("Hom(P_a, M) seed {seed}"));
                same(hom_dim(&q, &m, &ia), want, &format!("Hom(M, I_a) seed {seed}"));
                checks += 2;
            }
        }
    }
    format!("100 reps × 2 fields, {checks} identities, 0 violations")
}

fn c6() -> String {
    let census = |n: &str| regular_census(&load(n)).unwrap();
    // A∞: 0 regular components; inventory by path profile
    for n in ["ainf_out", "ainf_zigzag", "ainf_hooks", "qb"] {
        let q = load(n);
        same(census(n).regular_count, Count::Finite(0), n);
        same(q.q_plus().components.len(), 1, n);
        let pi = knit_component(&q, &Seed::Preinjective(0), 4).unwrap();
        ensure(!pi.closed, || format!("{n}: preinjective component should be infinite"));
    }
    let q = load("ainf_left");
    same(census("ainf_left").regular_count, Count::Finite(0), "ainf_left");
    ensure(q.q_plus().is_empty(), || "left infinite path: no preinjective component".into());
    let q = load("ainf_sink");
    same(census("ainf_sink").regular_count, Count::Finite(0), "ainf_sink");
    same(q.q_plus().components.len(), 1, "ainf_sink");
    ensure(knit_component(&q, &Seed::Preinjective(0), 4).unwrap().closed, || "finite preinjective".into());
    for (n, s) in
        [("dinf_noinf", ShapeTag::ZAinf), ("dinf_left", ShapeTag::NAinf), ("dinf_right", ShapeTag::NminusAinf)]
    {
        same(census(n).breakdown, vec![(s, Count::Finite(1))], n);
    }
    same(
        census("qc").breakdown,
        vec![(ShapeTag::ZAinf, Count::Finite(1)), (ShapeTag::Wing(3), Count::Finite(1))],
        "qc",
    );
    same(census("wild_right").breakdown, vec![(ShapeTag::NminusAinf, Count::Infinite)], "wild_right");
    same(census("qf").breakdown, vec![(ShapeTag::NAinf, Count::Infinite)], "qf");
    "6 A∞ orientations, 3 D∞ profiles, QC and 2 wild samples match".into()
}

fn c7() -> String {
    let mut triangles = 0;
    for n in ["a3", "qf", "q7", "dinf_noinf", "ainf_zigzag"] {
        let q = load(n);
        for c in &q.q_plus().components {
            for &x in &c.vertices {
                let i = Rep::Inj(x).realize(&q).unwrap();
                if !i.is_finite_dim() {
                    continue;
                }
                let t = connecting_triangle(&q, x, 0).unwrap();
                let quot: Vec<&WindowRep> = t.middle.iter().filter(|m| m.shift == 0).map(|m| &m.rep).collect();
                let rad: Vec<WindowRep> = t.middle.iter().filter(|m| m.shift == 1).map(|m| m.rep.clone()).collect();
                let iw = i.extend(&q, &t.start.rep.window().clone());
                for y in iw.support() {
                    let want = iw.dim(y) - usize::from(y == x);
                    let got: usize = quot.iter().map(|m| m.dim(y)).sum();
                    same(got, want, &format!("{n} dim(I_x/S_x)({})", q.vertex_name(y)));
                }
                let want = Rep::Sum(q.out_arrows(x).into_iter().map(|a| Rep::Proj(q.target(a))).collect());
                let sum = WindowRep::direct_sum(&q, &rad);
                ensure(is_isomorphic_window(&q, &sum, &want.realize(&q).unwrap()).unwrap(), || {
                    format!("{n}: shifted summand ≠ rad P_{}", q.vertex_name(x))
                });
                triangles += 1;
            }
        }
    }
    for (n, l, r) in [
        ("ainf_zigzag", true, true),
        ("ainf_out", false, true),
        ("dinf_left", true, false),
        ("ainf_left", true, false),
        ("biinf_path", false, false),
        ("qc", false, false),
    ] {
        let c = derived_capabilities(&load(n)).unwrap();
        same((c.left, c.right), (l, r), n);
    }
    let q = load("qc");
    for s in ["M(p_inf)", "M[3,4]", "S(7)"] {
        let m = parse_rep(&q, s).unwrap().realize(&q).unwrap();
        let base = derived_ar_triangle(&q, &DerivedObject::new(m.clone(), 0), Side::EndingAt).unwrap();
        for k in -2..=2 {
            let t = derived_ar_triangle(&q, &DerivedObject::new(m.clone(), k), Side::EndingAt).unwrap();
            same((t.start.shift, t.end.shift), (base.start.shift + k, base.end.shift + k), s);
            same(&t.start.rep, &base.start.rep, s);
            same(t.middle.len(), base.middle.len(), s);
        }
    }
    format!("{triangles} connecting triangles, 6-quiver table and shift invariance hold")
}

fn c8() -> String {
    let kq = load("kronecker");
    let mut reps: Vec<(String, Quiver, Rep)> = vec![];
    for (p, f) in [("x", Field::Rational), ("x-1", Field::Rational), ("x^2+x+1", Field::Prime(2))] {
        let q = kq.with_field(f);
        let m = parse_rep(&q, &format!("K({p})")).unwrap();
        let w = m.realize(&q).unwrap();
        let t = dtr_window(&q, &w).unwrap().value.unwrap();
        ensure(is_isomorphic_window(&q, &t, &w).unwrap(), || format!("DTr M_{p} ≇ M_{p}"));
        reps.push((p.into(), q, m));
    }
    // cross terms over a common field: x, x−1 over Q and x, x+1, x²+x+1 over F_2
    let f2 = kq.with_field(Field::Prime(2));
    let f2reps: Vec<(String, Rep)> =
        ["x", "x+1", "x^2+x+1"].iter().map(|p| (p.to_string(), parse_rep(&f2, &format!("K({p})")).unwrap())).collect();
    let mut pairs = 0;
    same(hom_ext_dims(&reps[0].1, &reps[0].2, &reps[1].2).unwrap(), (0, 0), "x vs x-1");
    same(hom_ext_dims(&reps[1].1, &reps[1].2, &reps[0].2).unwrap(), (0, 0), "x-1 vs x");
    pairs += 2;
    for (i, (p, m)) in f2reps.iter().enumerate() {
        for (j, (r, n)) in f2reps.iter().enumerate() {
            if i != j {
                same(hom_ext_dims(&f2, m, n).unwrap(), (0, 0), &format!("{p} vs {r}"));
                pairs += 1;
            }
        }
    }
    format!("3 tubes of rank 1, {pairs} orthogonal pairs")
}

fn c9() -> String {
    for (n, l, r) in [
        ("ainf_zigzag", true, true),
        ("ainf_out", false, true),
        ("dinf_left", true, false),
        ("ainf_left", true, true),
        ("biinf_path", false, true),
        ("qc", false, false),
    ] {
        let c = ar_capabilities(&load(n)).unwrap();
        same((c.left, c.right), (l, r), n);
    }
    "6-quiver flag table matches".into()
}

fn main() {
    std::panic::set_hook(Box::new(|info| {
        let msg = info
            .payload()
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| info.payload().downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        let at = info.location().map(|l| format!(" at {}:{}", l.file(), l.line())).unwrap_or_default();
        *LAST_PANIC.lock().unwrap() = format!("{msg}{at}");
    }));
    let s = |x: u64| Some(Duration::from_secs(x));
    let results = [
        run(1, "two-sided line golden example", s(1), c1),
        run(2, "preinjective example", s(1), c2),
        run(3, "DTr vs σ cross-oracle", s(60), c3),
        run(4, "finite Dynkin oracle", s(30), c4),
        run(5, "Hom from projectives / into injectives", None, c5),
        run(6, "regular component census", None, c6),
        run(7, "derived layer", None, c7),
        run(8, "Kronecker homogeneous tubes", None, c8),
        run(9, "rep⁺ capability table", None, c9),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
