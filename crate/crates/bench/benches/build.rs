use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use lbkd::random::uniform_points;
use lbkd::verify::reference_build;
use lbkd::{Builder, SplitMode};

fn builders(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    group.sample_size(10);
    for n in [1_000usize, 10_000, 100_000] {
        let points = uniform_points(n, 4, 7);
        group.throughput(Throughput::Elements(n as u64));
        for mode in [SplitMode::RoundRobin, SplitMode::Widest] {
            let builder = Builder::new(mode);
            group.bench_with_input(BenchmarkId::new(mode.name(), n), &points, |b, points| {
                b.iter_batched(
                    || points.clone(),
                    |p| builder.build(p).unwrap(),
                    BatchSize::LargeInput,
                )
            });
        }
        group.bench_with_input(
            BenchmarkId::new("recursive-reference", n),
            &points,
            |b, points| b.iter(|| reference_build(points, SplitMode::RoundRobin).unwrap()),
        );
    }
    group.finish();
}

fn tree_math(c: &mut Criterion) {
    use lbkd::tree_math::{pivot_pos, segment_begin, subtree_size};
    let n = 1_000_003u32;
    c.bench_function("tree_math/pivot_pos sweep 1M", |b| {
        b.iter(|| {
            (0..n)
                .map(|s| pivot_pos(std::hint::black_box(s), n) as u64)
                .sum::<u64>()
        })
    });
    c.bench_function("tree_math/subtree_size+segment_begin 1M", |b| {
        b.iter(|| {
            (0..n)
                .map(|s| (subtree_size(s, n) + segment_begin(std::hint::black_box(s), n)) as u64)
                .sum::<u64>()
        })
    });
}

criterion_group!(benches, builders, tree_math);
criterion_main!(benches);
