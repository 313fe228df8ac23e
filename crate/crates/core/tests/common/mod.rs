#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabshare_core::constructions::{css_scheme, euclidean_scheme, hermitian_scheme, rs_generator, rs_scheme, RsParams};
use stabshare_core::gv::random_scheme;
use stabshare_core::{Felt, Field, Scheme, Subspace};

pub fn rows(r: &[&[u32]]) -> Vec<Vec<Felt>> {
    r.iter().map(|v| v.iter().map(|&x| Felt(x)).collect()).collect()
}

pub fn span(f: &Field, m: usize, r: &[&[u32]]) -> Subspace {
    Subspace::from_rows(f, m, rows(r)).unwrap()
}

pub fn superdense() -> Scheme {
    let f2 = Field::prime(2).unwrap();
    let cmax = span(&f2, 4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
    let reps = rows(&[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
    Scheme::build(&f2, Subspace::zero(4), Some(cmax), Some(reps)).unwrap()
}

pub fn product_state() -> Scheme {
    let f2 = Field::prime(2).unwrap();
    let cmax = span(&f2, 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
    Scheme::build(&f2, Subspace::zero(4), Some(cmax), None).unwrap()
}

pub fn rs_q4(k: usize) -> Scheme {
    let f4 = Field::of_order(4).unwrap();
    rs_scheme(&f4, &RsParams::new(&f4, k)).unwrap()
}

/// Named schemes: worked examples, constructions, and seeded random schemes
/// with p in {2, 3} and n <= 5.
pub fn corpus() -> Vec<(String, Scheme)> {
    let f2 = Field::prime(2).unwrap();
    let f3 = Field::prime(3).unwrap();
    let f4 = Field::of_order(4).unwrap();
    let mut out: Vec<(String, Scheme)> = vec![
        ("superdense".into(), superdense()),
        ("product".into(), product_state()),
        ("rs q=4 k=2".into(), rs_q4(2)),
        ("rs q=4 k=4".into(), rs_q4(4)),
        ("rs q=2 k=2".into(), rs_scheme(&f2, &RsParams::new(&f2, 2)).unwrap()),
        (
            "euclidean f2 n=2".into(),
            euclidean_scheme(&f2, &Subspace::zero(2), &span(&f2, 2, &[&[1, 1]])).unwrap(),
        ),
        (
            "hermitian f4 n=2".into(),
            hermitian_scheme(&f4, &Subspace::zero(2), &span(&f4, 2, &[&[1, 1]])).unwrap(),
        ),
        (
            "euclidean f4 rs(4,1)".into(),
            {
                let alphas: Vec<Felt> = f4.elements().collect();
                euclidean_scheme(
                    &f4,
                    &rs_generator(&f4, 1, &alphas).unwrap(),
                    &rs_generator(&f4, 2, &alphas).unwrap(),
                )
                .unwrap()
            },
        ),
        (
            "css repetition f2 n=3".into(),
            css_scheme(&f2, &span(&f2, 3, &[&[1, 1, 1]]), &span(&f2, 3, &[&[1, 1, 1], &[0, 1, 1]])).unwrap(),
        ),
        (
            "css f3 n=3".into(),
            css_scheme(&f3, &span(&f3, 3, &[&[1, 2, 0]]), &Subspace::full(&f3, 3)).unwrap(),
        ),
        (
            "css f2 n=4".into(),
            css_scheme(&f2, &Subspace::zero(4), &span(&f2, 4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]])).unwrap(),
        ),
        ("degenerate f2 n=2".into(), Scheme::build(&f2, superdense().cmax().clone(), None, None).unwrap()),
    ];
    let mut seed = 1000u64;
    for (field, max_n) in [(&f2, 5usize), (&f3, 5)] {
        for n in 1..=max_n {
            for k in 1..=n {
                if field.p() == 3 && n == 5 && k > 2 {
                    continue;
                }
                let copies = if field.p() == 2 { 2 } else { 1 };
                for c in 0..copies {
                    seed += 1;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let s = random_scheme(field, n, k, &mut rng).unwrap();
                    out.push((format!("random p={} n={n} k={k} #{c}", field.p()), s));
                }
            }
        }
    }
    out
}
