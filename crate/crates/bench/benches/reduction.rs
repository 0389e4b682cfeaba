use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nodal::reduction::{default_cap, reduce};
use nodal::HilbertClass;

fn bench_reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    for (r, d, h) in [(6, 4, 1), (37, 25, 1), (12, 7, 3), (50, 31, 4)] {
        let input = HilbertClass::new(r, d);
        let cap = default_cap(input, h);
        group.bench_function(format!("r{r}_d{d}_h{h}"), |b| {
            b.iter(|| reduce(black_box(input), black_box(h), black_box(cap)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_reduce);
criterion_main!(benches);
