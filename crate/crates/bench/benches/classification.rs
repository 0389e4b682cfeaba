use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_rational::Rational64;

use nodal::curves::ChainMap;
use nodal::sheaves::{graded_degree0, line_bundle_stability, IndecomposableSheaf, SheafDescriptor};
use nodal::{ChainLineBundle, CycleCurve, CycleLineBundle, LineBundle};

fn alternating(n: usize, amplitude: i64) -> Vec<i64> {
    (0..n)
        .map(|i| if i % 2 == 0 { amplitude } else { -amplitude })
        .collect()
}

fn bench_classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classification");
    for n in [4usize, 8, 16] {
        let lb = LineBundle::Cycle(
            CycleLineBundle::new(alternating(n, 3), Rational64::new(1, 1)).unwrap(),
        );
        let pol = vec![1i64; n];
        group.bench_function(format!("line_bundle_stability_n{n}"), |b| {
            b.iter(|| line_bundle_stability(black_box(&lb), black_box(&pol)).unwrap())
        });
    }

    let n = 6;
    let curve = CycleCurve::with_unit_polarization(n).unwrap();
    let mut summands: Vec<IndecomposableSheaf> = (0..n)
        .map(|i| {
            IndecomposableSheaf::nlf(
                ChainMap::new(1, i, n).unwrap(),
                ChainLineBundle::new(vec![-1]),
            )
            .unwrap()
        })
        .collect();
    summands.push(
        IndecomposableSheaf::vb(
            1,
            3,
            CycleLineBundle::new(vec![0; n], Rational64::new(2, 1)).unwrap(),
        )
        .unwrap(),
    );
    let descriptor = SheafDescriptor::new(curve, summands).unwrap();
    group.bench_function("graded_degree0_mixed6", |b| {
        b.iter(|| graded_degree0(black_box(&descriptor)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_classification);
criterion_main!(benches);
