mod common;

use arq_core::ar::{ar_translate, Direction};
use arq_core::hom::is_isomorphic;
use arq_core::rep::{End, Rep, StringSpec};
use arq_core::strings::*;
use common::load;

#[test]
fn qc_systems() {
    let q = load("qc");
    let line = Line::new(&q).unwrap();
    let (r, l) = qr_ql_sets(&q, -1, 8).unwrap();
    assert_eq!(r.render(&line), "⋯ ⇠ ε_{-1} ⇠ ε_0 ⇠ ε_1 ⇠ p_{2,3} ⇠ p_{4,6} ⇠ ε_7 ⇠ ε_8 ⇠ ⋯");
    assert_eq!(l.render(&line), "ε_5 ⇢ p_{4,3} ⇢ p_∞");
}

#[test]
fn qc_tau() {
    let q = load("qc");
    let tau = |s: StringSpec| tau_string(&q, &s, Tau::Tau).unwrap();
    assert_eq!(tau(StringSpec::ray_down(2)), Ok(Rep::String(StringSpec::interval(3, 4))));
    assert_eq!(tau(StringSpec::interval(3, 4)), Ok(Rep::String(StringSpec::trivial(5))));
    assert_eq!(tau(StringSpec::interval(2, 3)), Ok(Rep::String(StringSpec::trivial(1))));
    assert_eq!(tau(StringSpec::trivial(7)), Ok(Rep::String(StringSpec::interval(4, 6))));
    assert_eq!(tau(StringSpec::trivial(5)), Err(Undefined::PseudoProjective));
    assert_eq!(tau_string(&q, &StringSpec::ray_down(2), Tau::TauInv).unwrap(), Err(Undefined::InfiniteDimensional));
}

#[test]
fn qc_engine_agrees() {
    let q = load("qc");
    for (m, t) in [
        (StringSpec::ray_down(2), StringSpec::interval(3, 4)),
        (StringSpec::interval(3, 4), StringSpec::trivial(5)),
        (StringSpec::interval(2, 3), StringSpec::trivial(1)),
        (StringSpec::trivial(7), StringSpec::interval(4, 6)),
    ] {
        let r = ar_translate(&q, &Rep::String(m), Direction::DTr).unwrap();
        let v = r.value.expect("translate exists");
        assert!(is_isomorphic(&q, &Rep::Window(v), &Rep::String(t)).unwrap(), "{m}");
    }
}

#[test]
fn qc_orbits() {
    let q = load("qc");
    assert_eq!(orbit_classify(&q, &StringSpec::ray_down(2)).unwrap(), OrbitTag::OrbitL);
    assert_eq!(orbit_classify(&q, &StringSpec::trivial(0)).unwrap(), OrbitTag::OrbitR);
}

#[test]
fn hooks_on_ainf() {
    // 0 → 1 → 2 ← 3 → 4 → ⋯
    let q = load("ainf_hooks");
    let h = double_hook(&q, 2).unwrap();
    assert_eq!(h.alpha, (3, 2));
    assert_eq!(h.q, (End::At(0), 2));
    assert_eq!(h.p, (3, End::Infinite));
    let h = double_hook(&q, 0).unwrap();
    assert_eq!(h.q, (End::At(1), 1));
    assert_eq!(h.p, (0, End::At(0)));
}

#[test]
fn hooks_agree_with_engine() {
    let mut total = 0;
    for spec in common::random_line_specs(11, 24) {
        let (n, bad) = common::cross_check(&spec, 12);
        assert!(bad.is_empty(), "{bad:?}");
        total += n;
    }
    assert!(total > 100);
}

#[test]
fn tau_inverse_round_trip() {
    for spec in common::random_line_specs(5, 16) {
        let q = arq_core::quiver::build_quiver(&spec).unwrap();
        let line = Line::new(&q).unwrap();
        for side in [PathSide::R, PathSide::L] {
            for s in -15..=15 {
                let Some(m) = line.member_at(side, s) else { continue };
                if let Ok(t) = tau_member(&line, &m, Tau::Tau) {
                    assert_eq!(tau_member(&line, &t, Tau::TauInv), Ok(m), "{}", line.name(&m));
                }
            }
        }
    }
}
