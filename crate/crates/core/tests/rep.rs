mod common;

use arq_core::ar::{ar_translate, hom_ext_dims, Direction};
use arq_core::hom::{decompose, hom_dim, is_isomorphic, is_isomorphic_window};
use arq_core::linalg::{Field, Matrix};
use arq_core::notation::parse_rep;
use arq_core::quiver::{Quiver, Window};
use arq_core::rep::*;
use common::{load, v};
use proptest::prelude::*;

const SAMPLES: [&str; 5] = ["a3", "qf", "qc", "dinf_noinf", "qb"];

fn fields() -> [Field; 3] {
    [Field::Rational, Field::Prime(2), Field::Prime(3)]
}

/// `dim Hom(P_a, M) = dim M(a)` and `dim Hom(M, I_a) = dim M(a)`.
fn check_standard_homs(q: &Quiver, seed: u64) {
    let w = settle(q, &Window::uniform(q, 2));
    let m = random_finite(q, &w, 2, seed);
    for a in w.vertices(q) {
        let pa = Rep::Proj(a).materialize(q, &w).unwrap();
        let ia = Rep::Inj(a).materialize(q, &w).unwrap();
        assert_eq!(hom_dim(q, &pa, &m), m.dim(a), "Hom(P_{}, M) seed {seed}", q.vertex_name(a));
        assert_eq!(hom_dim(q, &m, &ia), m.dim(a), "Hom(M, I_{}) seed {seed}", q.vertex_name(a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hom_from_projective_and_into_injective(seed in any::<u64>(), qi in 0usize..5, fi in 0usize..3) {
        let q = load(SAMPLES[qi]).with_field(fields()[fi]);
        check_standard_homs(&q, seed);
    }

    #[test]
    fn euler_identity(seed in any::<u64>(), qi in 0usize..3, fi in 0usize..3) {
        let name = ["a3", "kronecker", "qf"][qi];
        let q = load(name).with_field(fields()[fi]);
        let w = settle(&q, &Window::uniform(&q, 2));
        let m = random_finite(&q, &w, 2, seed);
        let n = random_finite(&q, &w, 2, seed ^ 0x9e37);
        let (h, e) = hom_ext_dims(&q, &Rep::Window(m.clone()), &Rep::Window(n.clone())).unwrap();
        let diag: i64 = m.dims.iter().zip(&n.dims).map(|(a, b)| (a * b) as i64).sum();
        let off: i64 = m.wq().arrows.iter().map(|&(_, s, t)| (m.dims[s] * n.dims[t]) as i64).sum();
        prop_assert_eq!(h as i64 - e as i64, diag - off);
        prop_assert_eq!(h, hom_dim(&q, &m, &n));
    }

    #[test]
    fn dualize_twice_is_identity(seed in any::<u64>(), qi in 0usize..5) {
        let q = load(SAMPLES[qi]);
        let w = settle(&q, &Window::uniform(&q, 2));
        let m = random_finite(&q, &w, 3, seed);
        let qop = q.opposite();
        let back = dualize_window(&qop, &dualize_window(&q, &m));
        prop_assert_eq!(back, m);
    }

    #[test]
    fn decompose_sums_back(seed in any::<u64>(), qi in 0usize..3) {
        let q = load(["a3", "qf", "qc"][qi]);
        let w = settle(&q, &Window::uniform(&q, 1));
        let m = random_finite(&q, &w, 2, seed);
        let parts = decompose(&q, &m);
        let total: usize = parts.iter().map(|p| p.total_dim().unwrap()).sum();
        prop_assert_eq!(total, m.total_dim().unwrap());
        let again = decompose(&q, &WindowRep::direct_sum(&q, &parts));
        prop_assert_eq!(again.len(), parts.len());
        for (a, b) in again.iter().zip(&parts) {
            prop_assert!(is_isomorphic_window(&q, a, b).unwrap());
        }
    }
}

#[test]
fn standard_reps_on_ainf() {
    let q = load("ainf_out");
    let p0 = Rep::Proj(v(&q, "0"));
    let dv = p0.dim_vector(&q, &Window::uniform(&q, 5)).unwrap();
    for n in 0..12 {
        assert_eq!(dv.at(v(&q, &n.to_string())), 1);
    }
    assert_eq!(dv.stable, vec![1]);
    let i0 = Rep::Inj(v(&q, "0"));
    assert!(is_isomorphic(&q, &i0, &Rep::Simple(v(&q, "0"))).unwrap());
    let (rad, top, _) = rad_top_soc(&q, &p0).unwrap();
    assert!(is_isomorphic(&q, &rad, &Rep::Proj(v(&q, "1"))).unwrap());
    assert!(is_isomorphic(&q, &top, &Rep::Simple(v(&q, "0"))).unwrap());
}

#[test]
fn qf_injective_at_source_is_simple() {
    let q = load("qf");
    assert!(is_isomorphic(&q, &Rep::Inj(v(&q, "0")), &Rep::Simple(v(&q, "0"))).unwrap());
}

#[test]
fn qb_projective() {
    let q = load("qb");
    let p1 = Rep::Proj(v(&q, "1")).realize(&q).unwrap();
    assert_eq!(p1.total_dim(), Some(2));
    assert_eq!(p1.dim(v(&q, "0")), 1);
    assert_eq!(p1.dim(v(&q, "1")), 1);
    assert_eq!(p1.stable, vec![0]);
    let cert = fp_certificate(&q, &Rep::Proj(v(&q, "0")).realize(&q).unwrap()).unwrap();
    assert!(cert.tops.is_empty());
}

#[test]
fn qb_restriction_of_projective() {
    let q = load("qb");
    let w = settle(&q, &Window::uniform(&q, 6));
    let p2 = Rep::Proj(v(&q, "2")).materialize(&q, &w).unwrap();
    let labels = |x| q.label_of(x).unwrap();
    let sigma = Subquiver::from_predicate(&q, &w, |x| labels(x) >= 3);
    let r = p2.restrict(&q, &sigma);
    let p3 = Rep::Proj(v(&q, "3")).materialize(&q, &w).unwrap();
    assert!(is_isomorphic_window(&q, &r, &p3).unwrap());
    assert!(is_isomorphic_window(&q, &p2.restrict(&q, &Subquiver::whole(&q)), &p2).unwrap());
    let s1 = Rep::Simple(v(&q, "1")).materialize(&q, &w).unwrap();
    assert!(s1.restrict(&q, &sigma).is_zero());
}

#[test]
fn qc_strings() {
    let q = load("qc");
    let m = parse_rep(&q, "M(p_{4,3})").unwrap().realize(&q).unwrap();
    assert_eq!(m.total_dim(), Some(2));
    assert_eq!((m.dim(v(&q, "3")), m.dim(v(&q, "4"))), (1, 1));
    assert!(!is_isomorphic(&q, &parse_rep(&q, "M(p_{4,3})").unwrap(), &Rep::Simple(v(&q, "5"))).unwrap());
    assert!(is_isomorphic(&q, &parse_rep(&q, "M[4,3]").unwrap(), &parse_rep(&q, "M[3,4]").unwrap()).unwrap());

    let pinf = parse_rep(&q, "M(p_inf)").unwrap();
    let dv = pinf.dim_vector(&q, &Window::uniform(&q, 4)).unwrap();
    assert_eq!(dv.total(), None);
    for l in -6..=2 {
        assert_eq!(dv.at(q.vertex_at(l).unwrap()), 1, "label {l}");
    }
    assert_eq!(dv.at(v(&q, "3")), 0);

    // beyond the first tail vertex the ray is the projective at the cut
    let pw = pinf.realize(&q).unwrap();
    let cert = fp_certificate(&q, &pw).unwrap();
    assert_eq!(cert.tops.len(), 1);
    assert_eq!(cert.tops[0].1, 1);

    let s = Rep::String(StringSpec::trivial(5));
    assert!(is_isomorphic(&q, &s, &Rep::Simple(v(&q, "5"))).unwrap());
}

#[test]
fn dinf_family() {
    let q = load("dinf_noinf");
    let w = Window::uniform(&q, 12);
    for i in 0..4u64 {
        for j in 1..5u64 {
            let n = Rep::DInf { i, j: Some(j) };
            assert_eq!(n.dim_vector(&q, &w).unwrap().total(), Some((2 + 2 * i + j) as usize), "N({i},{j})");
        }
    }
    let n01 = Rep::DInf { i: 0, j: Some(1) }.realize(&q).unwrap();
    assert_eq!(decompose(&q, &n01).len(), 1);
    let a = Rep::DInf { i: 1, j: Some(2) };
    let b = Rep::DInf { i: 2, j: Some(1) };
    assert!(!is_isomorphic(&q, &a, &b).unwrap());
    assert_eq!(decompose(&q, &b.realize(&q).unwrap()).len(), 1);

    let r = load("dinf_right");
    let ninf = Rep::DInf { i: 0, j: None }.dim_vector(&r, &Window::uniform(&r, 6)).unwrap();
    assert_eq!(ninf.total(), None);
    assert!(ninf.values.values().all(|&d| d == 1));
    assert!(Rep::DInf { i: 0, j: None }.realize(&q).is_err());
}

#[test]
fn dinf_radical_of_source() {
    let q = load("dinf_noinf");
    // the branch vertex 2 sends arrows to both fork vertices and to 3
    let x = v(&q, "2");
    let targets: Vec<String> = q.out_arrows(x).into_iter().map(|a| q.vertex_name(q.target(a))).collect();
    assert_eq!(targets.len(), 3);
    let rad = radical(&q, &Rep::Proj(x).realize(&q).unwrap()).0;
    let expect = parse_rep(&q, &targets.iter().map(|t| format!("P({t})")).collect::<Vec<_>>().join(" + ")).unwrap();
    assert!(is_isomorphic_window(&q, &rad, &expect.realize(&q).unwrap()).unwrap());
    assert_eq!(decompose(&q, &rad).len(), 3);
    let (rad_sink, _, _) = rad_top_soc(&q, &Rep::Proj(v(&q, "0"))).unwrap();
    assert!(rad_sink.realize(&q).unwrap().is_zero());
}

#[test]
fn kronecker_regulars() {
    let q = load("kronecker");
    let m = parse_rep(&q, "K(x)").unwrap().realize(&q).unwrap();
    assert_eq!(m.dims, vec![1, 1]);
    assert!(m.maps.iter().any(|a| a.is_zero()));
    let m = parse_rep(&q, "K(x-1)").unwrap().realize(&q).unwrap();
    assert_eq!(m.dims, vec![1, 1]);
    assert!(m.maps.iter().all(|a| !a.is_zero()));
    let f2 = q.with_field(Field::Prime(2));
    let m = parse_rep(&f2, "K(x^2+x+1)").unwrap().realize(&f2).unwrap();
    assert_eq!(m.dims, vec![2, 2]);
    let companion = Matrix::from_i64_rows(Field::Prime(2), &[vec![0, 1], vec![1, 1]]);
    assert!(m.maps.contains(&Matrix::identity(Field::Prime(2), 2)));
    assert!(m.maps.contains(&companion));
    assert!(parse_rep(&f2, "K(x^2+1)").is_err());
}

#[test]
fn a3_examples() {
    let q = load("a3");
    let s = |x| Rep::Simple(v(&q, x));
    assert_eq!(hom_ext_dims(&q, &s("1"), &s("2")).unwrap(), (0, 1));
    let t = ar_translate(&q, &s("1"), Direction::DTr).unwrap().value.unwrap();
    assert_eq!(t.dims, vec![0, 1, 0]);
    let p2 = Rep::Proj(v(&q, "2")).realize(&q).unwrap();
    assert_eq!(decompose(&q, &p2).len(), 1);
    let ss = Rep::Sum(vec![s("2"), s("2")]).realize(&q).unwrap();
    let parts = decompose(&q, &ss);
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|p| is_isomorphic(&q, &Rep::Window(p.clone()), &s("2")).unwrap()));
}

#[test]
fn a4_sum_of_strings() {
    let q = Quiver::from_json(
        r#"{"core": {"vertices": [1, 2, 3, 4], "arrows": [{"from": 2, "to": 1}, {"from": 2, "to": 3}, {"from": 4, "to": 3}]}}"#,
    )
    .unwrap();
    let strings = [StringSpec::interval(1, 3), StringSpec::interval(2, 4), StringSpec::trivial(3)];
    let parts: Vec<WindowRep> = strings.iter().map(|s| Rep::String(*s).realize(&q).unwrap()).collect();
    let sum = WindowRep::direct_sum(&q, &parts);
    let got = decompose(&q, &sum);
    assert_eq!(got.len(), 3);
    for want in &parts {
        assert_eq!(got.iter().filter(|g| g.dims == want.dims).count(), 1);
    }
}

#[test]
fn duality_on_standard_reps() {
    let q = load("ainf_out");
    let x = v(&q, "0");
    assert_eq!(dualize(&Rep::Inj(x)), Rep::Proj(x));
    assert_eq!(dualize(&Rep::Proj(x)), Rep::Inj(x));
    assert_eq!(dualize(&Rep::Simple(x)), Rep::Simple(x));
    let qop = q.opposite();
    let di = dualize_window(&q, &Rep::Inj(x).realize(&q).unwrap());
    assert!(is_isomorphic_window(&qop, &di, &Rep::Proj(x).realize(&qop).unwrap()).unwrap());
}
