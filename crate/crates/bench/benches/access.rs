use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabshare_core::constructions::{rs_scheme, RsParams};
use stabshare_core::gv::{gv_asymptotic, gv_check, random_scheme, GvQuery};
use stabshare_core::weights::distance_profile;
use stabshare_core::{Field, Limits, Scheme};

fn random(p: u32, n: usize, k: usize) -> Scheme {
    let f = Field::prime(p).unwrap();
    random_scheme(&f, n, k, &mut ChaCha8Rng::seed_from_u64(7)).unwrap()
}

fn thresholds(c: &mut Criterion) {
    let lim = Limits::default();
    let mut g = c.benchmark_group("exact_thresholds");
    for n in [6usize, 10, 14] {
        let s = random(2, n, n / 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| s.exact_thresholds(black_box(&lim)).unwrap())
        });
    }
    let f16 = Field::of_order(16).unwrap();
    let rs = rs_scheme(&f16, &RsParams::new(&f16, 8)).unwrap();
    g.bench_function("rs_q16_k8", |b| b.iter(|| rs.exact_thresholds(&lim).unwrap()));
    g.finish();
}

fn distances(c: &mut Criterion) {
    let lim = Limits::default();
    let mut g = c.benchmark_group("distance_profile");
    for (p, n) in [(2u32, 6usize), (2, 8), (3, 5)] {
        let s = random(p, n, 2);
        g.bench_with_input(BenchmarkId::new(format!("p{p}"), n), &s, |b, s| {
            b.iter(|| distance_profile(black_box(s), &lim).unwrap())
        });
    }
    g.finish();
}

fn gv(c: &mut Criterion) {
    let q = GvQuery { q: 2, n: 60, k: 20, delta_t: 8, delta_r: 6 };
    c.bench_function("gv_check_n60", |b| b.iter(|| gv_check(black_box(&q)).unwrap()));
    c.bench_function("gv_asymptotic_q2", |b| b.iter(|| gv_asymptotic(black_box(2), 0.5).unwrap()));
}

criterion_group!(benches, thresholds, distances, gv);
criterion_main!(benches);
