use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use listlogic::benchlab::{random, regex_ineq_formula};
use listlogic::{batch, check, parse_formula, EvalConfig, Evaluator, Structure};

fn quantifier_expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("quantifier_expansion");
    group.sample_size(20);
    let s = Structure::empty();
    for n in [4u32, 6, 8] {
        // 2^n candidates in each of two nested quantifiers
        let f = parse_formula(&format!(
            "forall $x sub iter<{n},u>(['a]; $y. conc($y, $y)) . exists $z in iter<{n},u>(['a]; $y. conc($y, $y)) . $z in $x"
        ))
        .unwrap();
        for (label, cfg) in [
            ("sequential", EvalConfig::sequential()),
            ("parallel", EvalConfig::default()),
        ] {
            let ev = Evaluator::new(&s).with_config(cfg);
            group.bench_with_input(BenchmarkId::new(label, 1u64 << n), &f, |b, f| {
                b.iter(|| black_box(ev.check(f).unwrap().verdict))
            });
        }
    }
    group.finish();
}

fn batch_of_instances(c: &mut Criterion) {
    let mut group = c.benchmark_group("regex_inequality_batch");
    group.sample_size(10);
    let mut r = random::rng(1);
    let formulas: Vec<_> = (0..64)
        .map(|_| {
            let (a, b) = random::regex_pair(&mut r, &["a", "b"], 6, 3);
            regex_ineq_formula(&a, &b).unwrap()
        })
        .collect();
    let s = Structure::empty();
    group.bench_function("map_seq", |b| {
        b.iter(|| batch::map_seq(&formulas, |f| check(f, &s).unwrap().verdict))
    });
    group.bench_function("map", |b| {
        b.iter(|| batch::map(&formulas, |f| check(f, &s).unwrap().verdict))
    });
    group.finish();
}

criterion_group!(benches, quantifier_expansion, batch_of_instances);
criterion_main!(benches);
