use std::hint::black_box;

use arq_core::batch::{self, Mode};
use arq_core::components::{knit_component_with, Seed};
use arq_core::derived::connecting_window_with;
use arq_core::quiver::Quiver;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn load(name: &str) -> Quiver {
    let path = format!("{}/../../quivers/{name}.json", env!("CARGO_MANIFEST_DIR"));
    Quiver::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn modes() -> [(&'static str, Mode); 2] {
    [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)]
}

fn preprojective(c: &mut Criterion) {
    let mut g = c.benchmark_group("knit_preprojective");
    g.sample_size(10);
    for name in ["qb", "dinf_noinf", "qc"] {
        let q = load(name);
        for (label, mode) in modes() {
            g.bench_with_input(BenchmarkId::new(label, name), &q, |b, q| {
                b.iter(|| knit_component_with(mode, q, &Seed::Preprojective, black_box(4)).unwrap())
            });
        }
    }
    g.finish();
}

fn connecting(c: &mut Criterion) {
    let mut g = c.benchmark_group("connecting_window");
    g.sample_size(10);
    for name in ["q7", "ainf_zigzag"] {
        let q = load(name);
        for (label, mode) in modes() {
            g.bench_with_input(BenchmarkId::new(label, name), &q, |b, q| {
                b.iter(|| connecting_window_with(mode, q, black_box(4)).unwrap())
            });
        }
    }
    g.finish();
}

/// Independent quivers knitted side by side: the coarse-grained case.
fn many_quivers(c: &mut Criterion) {
    let names =
        ["qb", "qc", "qf", "dinf_noinf", "dinf_left", "dinf_right", "ainf_out", "ainf_zigzag", "ainf_hooks", "q7"];
    let qs: Vec<Quiver> = names.iter().map(|n| load(n)).collect();
    let mut g = c.benchmark_group("knit_many");
    g.sample_size(10);
    for (label, mode) in modes() {
        g.bench_function(label, |b| {
            b.iter(|| {
                batch::map_with(mode, &qs, |q| {
                    knit_component_with(Mode::Sequential, q, &Seed::Preprojective, 4).unwrap().len()
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, preprojective, connecting, many_quivers);
criterion_main!(benches);
