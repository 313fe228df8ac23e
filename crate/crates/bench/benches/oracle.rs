use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabshare_core::gv::random_scheme;
use stabshare_core::oracle::{compare_all, Simulator};
use stabshare_core::{Field, Limits, SubsetA};

fn oracle(c: &mut Criterion) {
    let lim = Limits::default();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for (p, n) in [(2u32, 4usize), (2, 6), (3, 4)] {
        let f = Field::prime(p).unwrap();
        let s = random_scheme(&f, n, 2, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("simulator_p{p}"), n), &s, |b, s| {
            b.iter(|| Simulator::new(s, &lim).unwrap())
        });
        let sim = Simulator::new(&s, &lim).unwrap();
        let half = SubsetA::new(n, &(0..n / 2).collect::<Vec<_>>()).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("classify_half_p{p}"), n), &half, |b, a| {
            b.iter(|| sim.classify_by_density(a).unwrap())
        });
        g.bench_with_input(BenchmarkId::new(format!("compare_all_p{p}"), n), &s, |b, s| {
            b.iter(|| compare_all(s, &lim).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, oracle);
criterion_main!(benches);
