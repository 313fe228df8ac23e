//! Gilbert–Varshamov existence bound for scheme pairs, its asymptotic form,
//! and a seeded random search for witnesses.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gf::{Felt, Field};
use crate::limits::Limits;
use crate::linalg::Subspace;
use crate::scheme::Scheme;
use crate::symplectic::{symp_dual, symp_inner_concat};
use crate::weights::coset_distance;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GvQuery {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub delta_t: usize,
    pub delta_r: usize,
}

impl GvQuery {
    pub fn validate(&self) -> Result<()> {
        if self.q < 2 || self.n == 0 || self.k > self.n || self.delta_t == 0 || self.delta_r == 0 {
            return Err(Error::BadParams(format!(
                "need q >= 2, n >= 1, k <= n, deltas >= 1; got {self:?}"
            )));
        }
        Ok(())
    }
}

/// `sum_{i=1}^{delta-1} C(n, i) (q^2 - 1)^i`: nonzero vectors of symplectic
/// weight below `delta`.
pub fn sphere_sum(n: usize, q: u32, delta: usize) -> BigUint {
    let base = BigUint::from(q) * BigUint::from(q) - 1u32;
    let mut binom = BigUint::one();
    let mut power = BigUint::one();
    let mut total = BigUint::zero();
    for i in 1..delta.min(n + 1) {
        binom = binom * BigUint::from(n + 1 - i) / BigUint::from(i);
        power *= &base;
        total += &binom * &power;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GvResult {
    pub holds: bool,
    /// The left side in lowest terms.
    pub lhs: BigRational,
    /// Unreduced numerator over the denominator `q^{2n} - 1`.
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl GvResult {
    /// `numerator/denominator` over `q^{2n} - 1`, without reduction.
    pub fn lhs_string(&self) -> String {
        format!("{}/{}", self.numerator, self.denominator)
    }

    pub fn reduced_string(&self) -> String {
        format!("{}/{}", self.lhs.numer(), self.lhs.denom())
    }
}

/// Exact left side of the existence condition; a pair exists when it is below 1.
pub fn gv_check(query: &GvQuery) -> Result<GvResult> {
    query.validate()?;
    let q = BigUint::from(query.q);
    let n = query.n as u32;
    let k = query.k as u32;
    let total = q.pow(2 * n) - 1u32;
    let r_weight = q.pow(n + k) - q.pow(n);
    let t_weight = q.pow(n) - q.pow(n - k);
    let num = r_weight * sphere_sum(query.n, query.q, query.delta_r)
        + t_weight * sphere_sum(query.n, query.q, query.delta_t);
    let lhs = BigRational::new(num.clone().into(), total.clone().into());
    Ok(GvResult { holds: lhs < BigRational::one(), lhs, numerator: num, denominator: total })
}

/// `h_q(x) = -x log_q x - (1-x) log_q (1-x)`.
pub fn entropy_hq(q: u32, x: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::BadParams(format!("q = {q}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("x = {x} outside [0, 1]")));
    }
    let lq = (q as f64).ln();
    let term = |t: f64| if t <= 0.0 { 0.0 } else { -t * t.ln() / lq };
    Ok(term(x) + term(1.0 - x))
}

fn gv_exponent(q: u32, eps: f64) -> f64 {
    let lq = (q as f64).ln();
    entropy_hq(q, eps).expect("eps in range") + eps * ((q * q - 1) as f64).ln() / lq
}

/// Largest `eps` with `h_q(eps) + eps log_q(q^2 - 1) < target` on the increasing branch.
fn root_below(q: u32, target: f64, tol: f64) -> f64 {
    if target <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1.0 / (q as f64 * q as f64));
    if gv_exponent(q, hi) < target {
        return hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if gv_exponent(q, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GvAsymptotic {
    pub eps_t: f64,
    pub eps_r: f64,
}

pub const BISECTION_TOL: f64 = 1e-9;

/// Supremum relative distances `eps_t` (target 1) and `eps_r` (target `1 - R`).
pub fn gv_asymptotic(q: u32, rate: f64) -> Result<GvAsymptotic> {
    if q < 2 {
        return Err(Error::BadParams(format!("q = {q}")));
    }
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::DomainError(format!("R = {rate} outside [0, 1]")));
    }
    Ok(GvAsymptotic {
        eps_t: root_below(q, 1.0, BISECTION_TOL),
        eps_r: root_below(q, 1.0 - rate, BISECTION_TOL),
    })
}

fn random_vector(field: &Field, len: usize, rng: &mut impl Rng) -> Vec<Felt> {
    (0..len).map(|_| Felt(rng.random_range(0..field.q()))).collect()
}

/// Extends an isotropic `s` by random isotropic vectors up to dimension `target`.
pub fn random_isotropic_extension(
    field: &Field,
    s: &Subspace,
    target: usize,
    rng: &mut impl Rng,
) -> Result<Subspace> {
    let m = s.ambient_dim();
    if 2 * target > m {
        return Err(Error::BadParams(format!("isotropic dimension {target} exceeds {}", m / 2)));
    }
    let mut current = s.clone();
    while current.dim() < target {
        let v = random_vector(field, m, rng);
        if current.contains(field, &v)
            || current.rows().iter().any(|r| !symp_inner_concat(field, r, &v).is_zero())
        {
            continue;
        }
        current = Subspace::from_rows(field, m, current.rows().iter().cloned().chain([v]))?;
    }
    Ok(current)
}

/// Random scheme with `n` shares and secret length `k`, default coset reps.
pub fn random_scheme(field: &Field, n: usize, k: usize, rng: &mut impl Rng) -> Result<Scheme> {
    if k > n || n == 0 {
        return Err(Error::BadParams(format!("n = {n}, k = {k}")));
    }
    let c = random_isotropic_extension(field, &Subspace::zero(2 * n), n - k, rng)?;
    let cmax = random_isotropic_extension(field, &c, n, rng)?;
    Scheme::build(field, c, Some(cmax), None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: u64,
    pub c: Subspace,
    pub cmax: Subspace,
    pub ds_t: usize,
    pub ds_r: usize,
}

fn certify(field: &Field, c: &Subspace, cmax: &Subspace, query: &GvQuery, limits: &Limits) -> Result<Option<(usize, usize)>> {
    let cdual = symp_dual(field, c)?;
    let ds_t = coset_distance(field, cmax, c, limits)?;
    let ds_r = coset_distance(field, &cdual, cmax, limits)?;
    Ok((ds_t >= query.delta_t && ds_r >= query.delta_r).then_some((ds_t, ds_r)))
}

fn check_search_size(query: &GvQuery) -> Result<()> {
    if query.n > 6 || query.q > 3 {
        return Err(Error::TooLarge {
            what: "witness search".into(),
            needed: format!("q = {}, n = {}", query.q, query.n),
            limit: "q <= 3, n <= 6".into(),
        });
    }
    if query.k == 0 {
        return Err(Error::BadParams("k must be positive".into()));
    }
    Ok(())
}

/// Samples `(C, C_max)` pairs with per-trial seeds `seed + trial` and returns
/// the lowest-index trial meeting both distance targets.
pub fn witness_search(query: &GvQuery, trials: u64, seed: u64, limits: &Limits) -> Result<Option<Witness>> {
    query.validate()?;
    check_search_size(query)?;
    let field = Field::of_order(query.q as u64)?;
    let (n, k) = (query.n, query.k);
    let attempt = |trial: u64| -> Result<Option<Witness>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
        let c = random_isotropic_extension(&field, &Subspace::zero(2 * n), n - k, &mut rng)?;
        let cmax = random_isotropic_extension(&field, &c, n, &mut rng)?;
        Ok(certify(&field, &c, &cmax, query, limits)?
            .map(|(ds_t, ds_r)| Witness { trial, c, cmax, ds_t, ds_r }))
    };
    (0..trials)
        .into_par_iter()
        .map(attempt)
        .find_first(|r| !matches!(r, Ok(None)))
        .transpose()
        .map(Option::flatten)
}

/// Every Lagrangian subspace of `F_q^{2n}`.
pub fn all_lagrangians(field: &Field, n: usize, limits: &Limits) -> Result<Vec<Subspace>> {
    limits.check_vectors(field.q(), 2 * n, "Lagrangian enumeration")?;
    let all: Vec<Vec<Felt>> = Subspace::full(field, 2 * n).vectors(field).collect();
    let mut layer: HashSet<Subspace> = HashSet::from([Subspace::zero(2 * n)]);
    for _ in 0..n {
        let mut next = HashSet::new();
        for s in &layer {
            let dual = symp_dual(field, s)?;
            for v in all.iter().filter(|v| dual.contains(field, v) && !s.contains(field, v)) {
                next.insert(Subspace::from_rows(field, 2 * n, s.rows().iter().cloned().chain([v.clone()]))?);
            }
        }
        layer = next;
    }
    let mut out: Vec<Subspace> = layer.into_iter().collect();
    out.sort_by(|a, b| a.rows().cmp(b.rows()));
    Ok(out)
}

/// Every subspace of `space` of the given dimension.
pub fn subspaces_of_dim(field: &Field, space: &Subspace, dim: usize) -> Result<Vec<Subspace>> {
    let m = space.ambient_dim();
    let vectors: Vec<Vec<Felt>> = space.vectors(field).collect();
    let mut layer: HashSet<Subspace> = HashSet::from([Subspace::zero(m)]);
    for _ in 0..dim {
        let mut next = HashSet::new();
        for s in &layer {
            for v in vectors.iter().filter(|v| !s.contains(field, v)) {
                next.insert(Subspace::from_rows(field, m, s.rows().iter().cloned().chain([v.clone()]))?);
            }
        }
        layer = next;
    }
    let mut out: Vec<Subspace> = layer.into_iter().collect();
    out.sort_by(|a, b| a.rows().cmp(b.rows()));
    Ok(out)
}

/// Exhaustively checks all `(C, C_max)` pairs; returns the first meeting the targets.
pub fn exhaustive_witness(query: &GvQuery, limits: &Limits) -> Result<Option<Witness>> {
    query.validate()?;
    check_search_size(query)?;
    let field = Field::of_order(query.q as u64)?;
    let mut index = 0u64;
    for cmax in all_lagrangians(&field, query.n, limits)? {
        for c in subspaces_of_dim(&field, &cmax, query.n - query.k)? {
            if let Some((ds_t, ds_r)) = certify(&field, &c, &cmax, query, limits)? {
                return Ok(Some(Witness { trial: index, c, cmax, ds_t, ds_r }));
            }
            index += 1;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn query(q: u32, n: usize, k: usize, delta_t: usize, delta_r: usize) -> GvQuery {
        GvQuery { q, n, k, delta_t, delta_r }
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn sphere_sums() {
        assert_eq!(sphere_sum(5, 2, 1), BigUint::zero());
        assert_eq!(sphere_sum(5, 2, 2), BigUint::from(15u32));
        assert_eq!(sphere_sum(2, 2, 3), BigUint::from(15u32));
        // Saturates at weight n.
        assert_eq!(sphere_sum(2, 2, 10), BigUint::from(15u32));
        assert_eq!(sphere_sum(3, 3, 4), BigUint::from(3u32.pow(6) - 1));
    }

    #[test]
    fn gv_values() {
        let r = gv_check(&query(2, 2, 2, 1, 1)).unwrap();
        assert!(r.holds);
        assert!(r.lhs.is_zero());
        let r = gv_check(&query(2, 5, 1, 2, 2)).unwrap();
        assert_eq!(r.lhs, ratio(720, 1023));
        assert_eq!(r.lhs_string(), "720/1023");
        assert_eq!(r.reduced_string(), "240/341");
        assert!(r.holds);
        assert_eq!(gv_check(&query(2, 4, 2, 2, 1)).unwrap().lhs, ratio(144, 255));
        assert!(!gv_check(&query(2, 5, 5, 1, 6)).unwrap().holds);
        assert!(gv_check(&query(2, 5, 6, 1, 1)).is_err());
    }

    #[test]
    fn gv_monotone_on_grid() {
        for n in 1..=5 {
            for k in 0..=n {
                for dt in 1..=n + 1 {
                    for dr in 1..=n + 1 {
                        let base = gv_check(&query(2, n, k, dt, dr)).unwrap().lhs;
                        assert!(gv_check(&query(2, n, k, dt + 1, dr)).unwrap().lhs >= base);
                        assert!(gv_check(&query(2, n, k, dt, dr + 1)).unwrap().lhs >= base);
                        if k < n {
                            assert!(gv_check(&query(2, n, k + 1, dt, dr)).unwrap().lhs >= base);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn entropy_values() {
        assert!((entropy_hq(2, 0.5).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(entropy_hq(3, 0.0).unwrap(), 0.0);
        assert_eq!(entropy_hq(3, 1.0).unwrap(), 0.0);
        assert!((entropy_hq(2, 0.11).unwrap() - 0.4999).abs() < 1e-3);
        assert!(matches!(entropy_hq(2, 1.5), Err(Error::DomainError(_))));
    }

    #[test]
    fn entropy_concave_and_symmetric() {
        let h = 1e-3;
        for i in 1..100 {
            let x = i as f64 / 100.0;
            let second = entropy_hq(2, x + h).unwrap() - 2.0 * entropy_hq(2, x).unwrap()
                + entropy_hq(2, (x - h).max(0.0)).unwrap();
            assert!(second <= 1e-12);
            assert!((entropy_hq(2, x).unwrap() - entropy_hq(2, 1.0 - x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_threshold() {
        let a = gv_asymptotic(2, 0.5).unwrap();
        assert!((0.185..=0.195).contains(&a.eps_t), "{}", a.eps_t);
        assert!((gv_exponent(2, a.eps_t) - 1.0).abs() < 1e-8);
        assert!((gv_exponent(2, a.eps_r) - 0.5).abs() < 1e-8);
        assert_eq!(gv_asymptotic(2, 1.0).unwrap().eps_r, 0.0);
        let zero = gv_asymptotic(3, 0.0).unwrap();
        assert_eq!(zero.eps_r, zero.eps_t);
    }

    #[test]
    fn finite_n_trend() {
        let eps = gv_asymptotic(2, 0.5).unwrap().eps_r;
        for n in [50usize, 100, 200] {
            let below = ((eps - 0.02) * n as f64).floor() as usize;
            let r = gv_check(&query(2, n, n / 2, 1, below.max(1))).unwrap();
            assert!(r.holds, "n = {n}");
        }
        let above = |n: usize| {
            let d = ((eps + 0.05) * n as f64).floor() as usize;
            gv_check(&query(2, n, n / 2, 1, d)).unwrap().holds
        };
        assert!(!above(200));
    }

    #[test]
    fn trivial_witness_is_first_trial() {
        let w = witness_search(&query(2, 3, 1, 1, 1), 10, 7, &Limits::default()).unwrap().unwrap();
        assert_eq!(w.trial, 0);
    }

    #[test]
    fn witness_found_and_deterministic() {
        let q = query(2, 4, 2, 2, 1);
        let a = witness_search(&q, 10_000, 42, &Limits::default()).unwrap().unwrap();
        let b = witness_search(&q, 10_000, 42, &Limits::default()).unwrap().unwrap();
        assert_eq!(a, b);
        assert!(a.ds_t >= 2);
    }

    #[test]
    fn impossible_query_exhausts() {
        let q = query(2, 2, 2, 3, 1);
        assert_eq!(witness_search(&q, 200, 1, &Limits::default()).unwrap(), None);
        assert_eq!(exhaustive_witness(&q, &Limits::default()).unwrap(), None);
    }

    #[test]
    fn search_size_guard() {
        assert!(witness_search(&query(5, 2, 1, 1, 1), 1, 0, &Limits::default())
            .unwrap_err()
            .is_too_large());
    }

    #[test]
    fn lagrangian_counts() {
        let f2 = Field::prime(2).unwrap();
        let lim = Limits::default();
        assert_eq!(all_lagrangians(&f2, 1, &lim).unwrap().len(), 3);
        assert_eq!(all_lagrangians(&f2, 2, &lim).unwrap().len(), 15);
        let three = all_lagrangians(&f2, 3, &lim).unwrap();
        assert_eq!(three.len(), 135);
        assert_eq!(subspaces_of_dim(&f2, &three[0], 2).unwrap().len(), 7);
    }

    #[test]
    fn random_schemes_are_valid() {
        let f3 = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for k in 1..=n {
                let s = random_scheme(&f3, n, k, &mut rng).unwrap();
                assert_eq!((s.n(), s.k()), (n, k));
            }
        }
    }
}
