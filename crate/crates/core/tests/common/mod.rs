#![allow(dead_code)]

use std::collections::BTreeSet;

use arq_core::quiver::Quiver;

pub fn load(name: &str) -> Quiver {
    let path = format!("{}/../../quivers/{name}.json", env!("CARGO_MANIFEST_DIR"));
    Quiver::from_json(&std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))).unwrap()
}

pub fn v(q: &Quiver, name: &str) -> arq_core::quiver::Vertex {
    q.parse_vertex(name).unwrap()
}

use arq_core::ar::{ar_translate, Direction};
use arq_core::hom::is_isomorphic;
use arq_core::quiver::{build_quiver, Dir, OrientationWord, QuiverSpec};
use arq_core::rep::Rep;
use arq_core::strings::{engine_tau, tau_member, Line, PathSide, Tau, Undefined};
use rand::{Rng, SeedableRng};

fn random_word(rng: &mut impl Rng) -> OrientationWord {
    let mut d = || if rng.gen_bool(0.5) { Dir::Out } else { Dir::In };
    let prefix = (0..6).map(|_| d()).collect::<Vec<_>>();
    let period = (0..3).map(|_| d()).collect::<Vec<_>>();
    let (np, nq) = (rng.gen_range(0..=6), rng.gen_range(1..=3));
    OrientationWord::new(prefix[..np].to_vec(), period[..nq].to_vec())
}

/// Random eventually periodic `A_∞` / `A_∞^∞` quivers, alternating.
pub fn random_line_specs(seed: u64, count: usize) -> Vec<QuiverSpec> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            if k % 2 == 0 {
                QuiverSpec::a_inf(random_word(&mut rng))
            } else {
                let l = random_word(&mut rng);
                QuiverSpec::a_biinf(l, random_word(&mut rng))
            }
        })
        .collect()
}

/// Compares the hook/`Q_R`/`Q_L` translate against the DTr engine on every
/// maximal-path member starting in `[-span, span]`. Returns `(members, mismatches)`.
pub fn cross_check(spec: &QuiverSpec, span: i64) -> (usize, Vec<String>) {
    let q = build_quiver(spec).unwrap();
    let line = Line::new(&q).unwrap();
    let mut n = 0;
    let mut bad = vec![];
    for side in [PathSide::R, PathSide::L] {
        for s in -span..=span {
            let Some(m) = line.member_at(side, s) else { continue };
            n += 1;
            let want = tau_member(&line, &m, Tau::Tau);
            let got = ar_translate(&q, &m.rep(), Direction::DTr).unwrap();
            let ok = match (want, got.value) {
                (Ok(t), Some(v)) => is_isomorphic(&q, &Rep::Window(v), &t.rep()).unwrap(),
                (Err(Undefined::Projective), None) => true,
                (Err(Undefined::PseudoProjective), Some(v)) => !v.is_finite_dim(),
                _ => false,
            };
            let inv_ok = match (tau_member(&line, &m, Tau::TauInv), engine_tau(&q, &m.rep(), Tau::TauInv).unwrap()) {
                (Ok(t), Ok(v)) => is_isomorphic(&q, &v, &t.rep()).unwrap(),
                (Err(a), Err(b)) => a == b,
                _ => false,
            };
            if !ok || !inv_ok {
                bad.push(format!("{} on {spec:?}", line.name(&m)));
            }
        }
    }
    (n, bad)
}

/// Type-A quiver on `1..=n`; bit `i` of `mask` reverses the arrow between `i+1` and `i+2`.
pub fn a_n(n: usize, mask: u32) -> Quiver {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<(&str, &str)> = (0..n - 1)
        .map(|i| if mask >> i & 1 == 0 { (&*names[i], &*names[i + 1]) } else { (&*names[i + 1], &*names[i]) })
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    build_quiver(&QuiverSpec::finite(&refs, &arrows)).unwrap()
}

pub fn d4(mask: u32) -> Quiver {
    let legs = ["a", "b", "d"];
    let arrows: Vec<(&str, &str)> =
        legs.iter().enumerate().map(|(i, &l)| if mask >> i & 1 == 0 { (l, "c") } else { ("c", l) }).collect();
    build_quiver(&QuiverSpec::finite(&["a", "b", "c", "d"], &arrows)).unwrap()
}

/// Positive roots by brute force: `d ≠ 0` with Tits form `Σ d_i² − Σ_{i→j} d_i d_j = 1`.
pub fn positive_roots(q: &Quiver, bound: usize) -> BTreeSet<Vec<usize>> {
    let n = q.core_len();
    let arrows: Vec<(usize, usize)> = q.core_arrows().iter().map(|a| (a.from, a.to)).collect();
    let mut out = BTreeSet::new();
    let mut d = vec![0usize; n];
    loop {
        let mut i = 0;
        while i < n && d[i] == bound {
            d[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        d[i] += 1;
        let sq: i64 = d.iter().map(|&x| (x * x) as i64).sum();
        let off: i64 = arrows.iter().map(|&(s, t)| (d[s] * d[t]) as i64).sum();
        if sq - off == 1 {
            out.insert(d.clone());
        }
    }
    out
}
