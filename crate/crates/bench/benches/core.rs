use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use omq_core::commutator::verify_commutator_equivalence;
use omq_core::formula::{parse, EvalContext};
use omq_core::hf::stage;
use omq_core::implication::{check_axioms, ImplSpec};
use omq_core::lattice::{sweep, GeneratorSpec};
use omq_core::matrix::verify_twisted_relations;
use omq_core::transfer::{run_suite, Suite, SuiteConfig};
use omq_core::universe::{build_fragment, FragmentParams, NodeStore};
use omq_core::{ElemSet, Logic};

fn lattices(c: &mut Criterion) {
    let spec: GeneratorSpec = "prod:(hsum:boolean:2,mo:3),boolean:1".parse().unwrap();
    c.bench_function("build prod(hsum(boolean:2, mo:3), boolean:1)", |b| b.iter(|| spec.build().unwrap()));
    let l = Logic::mo(3).unwrap();
    let pairs: Vec<ElemSet> = l
        .elements()
        .flat_map(|a| l.elements().map(move |b| [a, b].into_iter().collect()))
        .collect();
    c.bench_function("commutator routes, all pairs of mo:3", |b| {
        b.iter(|| pairs.iter().all(|&s| verify_commutator_equivalence(&l, s).unwrap().agree()))
    });
    let sasaki = ImplSpec::poly(3).resolve(&l).unwrap();
    c.bench_function("check_axioms poly:3 on mo:3", |b| b.iter(|| check_axioms(&l, black_box(&sasaki))));
}

fn universe(c: &mut Criterion) {
    let l = Logic::mo(2).unwrap();
    c.bench_function("fragment mo:2 rank 3 cap 2", |b| {
        b.iter(|| {
            let mut s = NodeStore::new();
            build_fragment(&mut s, &l, FragmentParams::new(3, 2)).unwrap().len()
        })
    });
    c.bench_function("hf stage 5", |b| b.iter(|| stage(black_box(5)).len()));

    let imp = ImplSpec::poly(0).resolve(&l).unwrap();
    let mut s = NodeStore::new();
    let frag = build_fragment(&mut s, &l, FragmentParams::new(2, 2)).unwrap();
    let f = parse("forall t in x (exists s in y (t = s)) and com(x, y)", &["x", "y"]).unwrap();
    c.bench_function("eval over all pairs, mo:2 rank 2", |b| {
        b.iter(|| {
            let mut cx = EvalContext::new(&l, &imp, &s, &[]);
            let mut n = 0;
            for &u in frag.nodes() {
                for &v in frag.nodes() {
                    n += cx.value(&f, &[("x", u), ("y", v)]).unwrap().index();
                }
            }
            n
        })
    });
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    let cfg = SuiteConfig::default();
    for (name, l) in sweep().into_iter().filter(|(n, _)| n == "mo:2" || n == "mo:3") {
        for suite in [Suite::Restriction, Suite::Transfer, Suite::Demonstrator] {
            g.bench_function(format!("{suite} {name}"), |b| b.iter(|| run_suite(suite, &name, &l, &cfg).unwrap()));
        }
    }
    g.bench_function("twisted relations dim 2..4, 20 samples", |b| {
        b.iter(|| verify_twisted_relations(1, &[2, 3, 4], 20, 1e-9).unwrap())
    });
    g.finish();
}

criterion_group!(benches, lattices, universe, suites);
criterion_main!(benches);
