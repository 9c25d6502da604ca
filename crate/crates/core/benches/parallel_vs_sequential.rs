use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcodes_core::exec::Exec;
use qcodes_core::linear_code::LinearCode;
use qcodes_core::poly_code;
use qcodes_core::quantum;

fn modes() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", Exec::Parallel));
    v
}

fn code(q: u64, m: u64, reps: usize) -> LinearCode {
    let ctx = poly_code::make_context(q, m).unwrap();
    let chosen: Vec<u64> = ctx.family.reps[..reps].to_vec();
    let sel = ctx.family.selection(&chosen).unwrap();
    poly_code::build_code(&ctx, &sel, Exec::Sequential).unwrap()
}

fn min_distance(c: &mut Criterion) {
    // [120, 10] over F_4: about 3.5e5 projective codewords.
    let small = code(4, 255, 5);
    let mut g = c.benchmark_group("min_distance");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| small.min_distance(1 << 24, e).unwrap())
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let ctx = poly_code::make_context(16, 255).unwrap();
    let sel = ctx.selection_from_cutoff(203).unwrap();
    let big = poly_code::build_code(&ctx, &sel, Exec::Sequential).unwrap();
    let mut g = c.benchmark_group("sample_weights_50k");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| big.sample_weights(50_000, 0, e).unwrap())
        });
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("table_search_9_728");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| quantum::table_search(9, 728, e).unwrap())
        });
    }
    g.finish();
}

fn construction(c: &mut Criterion) {
    let ctx = poly_code::make_context(9, 728).unwrap();
    let sel = ctx.selection_from_cutoff(716).unwrap();
    let mut g = c.benchmark_group("build_code_9_728");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| poly_code::build_code(&ctx, &sel, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, min_distance, sampling, search, construction);
criterion_main!(benches);
