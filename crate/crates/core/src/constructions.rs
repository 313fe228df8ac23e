//! Scheme builders from classical codes: CSS and Euclidean pairs, hermitian
//! pairs over `F_{q^2}`, and Reed–Solomon codes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::gf::{Felt, Field};
use crate::linalg::{null_space, Subspace};
use crate::scheme::Scheme;
use crate::symplectic::{symp_dual, SubsetA};
use crate::{Error, Result};

pub fn euclidean_dual(field: &Field, s: &Subspace) -> Subspace {
    s.euclidean_dual(field)
}

/// `{y : sum_i x_i^q y_i = 0 for all x in S}` over `F_{q^2}`.
pub fn hermitian_dual(big: &Field, s: &Subspace) -> Result<Subspace> {
    let q = sqrt_order(big)?;
    let conj: Vec<Vec<Felt>> = s
        .rows()
        .iter()
        .map(|r| r.iter().map(|&x| big.pow(x, q as u64)).collect())
        .collect();
    Ok(null_space(big, &conj, s.ambient_dim()))
}

fn sqrt_order(big: &Field) -> Result<u32> {
    if !big.mu().is_multiple_of(2) {
        return Err(Error::InvalidField(format!(
            "field of order {} is not a square",
            big.q()
        )));
    }
    Ok(big.p().pow(big.mu() / 2))
}

fn stack(first: &Subspace, second: &Subspace) -> Vec<Vec<Felt>> {
    let n = first.ambient_dim();
    let a = first.rows().iter().map(|r| [r.as_slice(), &vec![Felt::ZERO; n]].concat());
    let b = second.rows().iter().map(|r| [&vec![Felt::ZERO; n], r.as_slice()].concat());
    a.chain(b).collect()
}

/// `{(a | b) : a in A, b in B}`.
pub fn product_space(field: &Field, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "lengths {} and {}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    Subspace::from_rows(field, 2 * a.ambient_dim(), stack(a, b))
}

fn check_nested(field: &Field, inner: &Subspace, outer: &Subspace, what: &str) -> Result<()> {
    if inner.ambient_dim() != outer.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: lengths {} and {}",
            inner.ambient_dim(),
            outer.ambient_dim()
        )));
    }
    if !inner.is_subspace_of(field, outer) {
        return Err(Error::NotNested(what.to_string()));
    }
    Ok(())
}

/// For `C2 <= C1`, the symplectic self-orthogonal `C = {(a|b) : a in C2, b in C1^perp}`
/// and its symplectic dual `{(a|b) : a in C1, b in C2^perp}`.
pub fn css_pair_to_symplectic(
    field: &Field,
    c2: &Subspace,
    c1: &Subspace,
) -> Result<(Subspace, Subspace)> {
    check_nested(field, c2, c1, "C2 is not contained in C1")?;
    let c = product_space(field, c2, &c1.euclidean_dual(field))?;
    let dual = product_space(field, c1, &c2.euclidean_dual(field))?;
    debug_assert_eq!(symp_dual(field, &c)?, dual);
    Ok((c, dual))
}

/// CSS scheme with the standard encoding `C_max = {(a|b) : a in C2, b in C2^perp}`.
/// Secret length is `dim C1 - dim C2`.
pub fn css_scheme(field: &Field, c2: &Subspace, c1: &Subspace) -> Result<Scheme> {
    let (c, _) = css_pair_to_symplectic(field, c2, c1)?;
    let cmax = product_space(field, c2, &c2.euclidean_dual(field))?;
    Scheme::build(field, c, Some(cmax), None)
}

/// `dim P_A(C1) - dim P_A(C2)`: what `A` learns under the classical CSS encoding.
pub fn css_classical_leak(field: &Field, c2: &Subspace, c1: &Subspace, a: &SubsetA) -> Result<usize> {
    check_nested(field, c2, c1, "C2 is not contained in C1")?;
    if a.n() != c1.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "subset over {} participants, code length {}",
            a.n(),
            c1.ambient_dim()
        )));
    }
    let cols = a.members();
    Ok(c1.rank_of_columns(field, &cols) - c2.rank_of_columns(field, &cols))
}

fn check_self_dual(space: &Subspace, dual: &Subspace, name: &str) -> Result<()> {
    if space != dual {
        return Err(Error::BadPair(format!("{name} is not self-dual")));
    }
    Ok(())
}

/// `C = {(a|b) : a, b in E}`, `C_max = {(a|b) : a, b in E_max}` for
/// `E <= E_max = E_max^perp`. Secret length is `n - 2 dim E`.
pub fn euclidean_scheme(field: &Field, e: &Subspace, emax: &Subspace) -> Result<Scheme> {
    let n = emax.ambient_dim();
    if !n.is_multiple_of(2) {
        return Err(Error::BadPair(format!("code length {n} is odd")));
    }
    check_nested(field, e, emax, "E is not contained in E_max")
        .map_err(|err| Error::BadPair(err.to_string()))?;
    check_self_dual(emax, &emax.euclidean_dual(field), "E_max")?;
    let c = product_space(field, e, e)?;
    let cmax = product_space(field, emax, emax)?;
    Scheme::build(field, c, Some(cmax), None)
}

/// The map `F_{q^2}^n -> F_q^{2n}` sending `a_i beta + b_i beta^q` to `(a | b)`,
/// where `{beta, beta^q}` is a basis of `F_{q^2}` over `F_q`. Under it the
/// symplectic form is a fixed multiple of `h - h^q` for the hermitian form `h`.
#[derive(Clone, Debug)]
pub struct HermitianMap {
    big: Field,
    small: Field,
    q: u32,
    beta: Felt,
    beta_q: Felt,
    denom_inv: Felt,
    embed: Vec<Felt>,
    restrict: HashMap<Felt, Felt>,
}

impl HermitianMap {
    /// Uses the default-modulus field of order `sqrt(|big|)` as `F_q`.
    pub fn new(big: &Field) -> Result<Self> {
        let q = sqrt_order(big)?;
        let small = Field::with_default_modulus(big.p(), big.mu() / 2)?;
        // A root of the small modulus realizes F_q inside F_{q^2}.
        let modulus = &small.spec().modulus;
        let theta = big
            .elements()
            .find(|&t| {
                let mut acc = Felt::ZERO;
                for &c in modulus.iter().rev() {
                    acc = big.add(big.mul(acc, t), big.from_int(c as i64));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::InvalidField("no root of the subfield modulus".into()))?;
        let embed: Vec<Felt> = small
            .elements()
            .map(|x| {
                let mut acc = Felt::ZERO;
                for &c in small.coeffs(x).iter().rev() {
                    acc = big.add(big.mul(acc, theta), big.from_int(c as i64));
                }
                acc
            })
            .collect();
        let restrict = embed.iter().enumerate().map(|(i, &e)| (e, Felt(i as u32))).collect();
        let (beta, beta_q, denom) = big
            .elements()
            .find_map(|b| {
                let bq = big.pow(b, q as u64);
                let d = big.sub(big.mul(b, b), big.mul(bq, bq));
                (!d.is_zero()).then_some((b, bq, d))
            })
            .ok_or_else(|| Error::InvalidField("no normal basis element".into()))?;
        Ok(HermitianMap {
            big: big.clone(),
            small,
            q,
            beta,
            beta_q,
            denom_inv: big.inv(denom),
            embed,
            restrict,
        })
    }

    pub fn small_field(&self) -> &Field {
        &self.small
    }

    pub fn big_field(&self) -> &Field {
        &self.big
    }

    pub fn beta(&self) -> Felt {
        self.beta
    }

    /// Embeds an element of `F_q` into `F_{q^2}`.
    pub fn embed(&self, x: Felt) -> Felt {
        self.embed[x.0 as usize]
    }

    fn restrict(&self, x: Felt) -> Felt {
        *self.restrict.get(&x).expect("value lies in the subfield")
    }

    /// Coordinates `(a, b)` of `x = a beta + b beta^q`.
    pub fn split(&self, x: Felt) -> (Felt, Felt) {
        let f = &self.big;
        let xq = f.pow(x, self.q as u64);
        let a = f.mul(f.sub(f.mul(x, self.beta), f.mul(xq, self.beta_q)), self.denom_inv);
        let b = f.mul(f.sub(f.mul(xq, self.beta), f.mul(x, self.beta_q)), self.denom_inv);
        (self.restrict(a), self.restrict(b))
    }

    pub fn join(&self, a: Felt, b: Felt) -> Felt {
        let f = &self.big;
        f.add(f.mul(self.embed(a), self.beta), f.mul(self.embed(b), self.beta_q))
    }

    pub fn map_vector(&self, x: &[Felt]) -> Vec<Felt> {
        let (a, b): (Vec<Felt>, Vec<Felt>) = x.iter().map(|&v| self.split(v)).unzip();
        [a, b].concat()
    }

    /// The `F_q`-space image of an `F_{q^2}`-space, of twice its dimension.
    pub fn map_space(&self, d: &Subspace) -> Result<Subspace> {
        let n = d.ambient_dim();
        let rows = d.rows().iter().flat_map(|r| {
            [self.beta, self.beta_q].map(|w| self.map_vector(&self.big.scale(w, r)))
        });
        Subspace::from_rows(&self.small, 2 * n, rows)
    }
}

fn check_hermitian_pair(big: &Field, d: &Subspace, dmax: &Subspace) -> Result<()> {
    let n = dmax.ambient_dim();
    if !n.is_multiple_of(2) {
        return Err(Error::BadPair(format!("code length {n} is odd")));
    }
    check_nested(big, d, dmax, "D is not contained in D_max")
        .map_err(|err| Error::BadPair(err.to_string()))?;
    check_self_dual(dmax, &hermitian_dual(big, dmax)?, "D_max")
}

/// Scheme over `F_q` from `D <= D_max = D_max^{perp_h}` in `F_{q^2}^n`.
/// Secret length is `n - 2 dim D` symbols of `F_q`.
pub fn hermitian_scheme(big: &Field, d: &Subspace, dmax: &Subspace) -> Result<Scheme> {
    check_hermitian_pair(big, d, dmax)?;
    let map = HermitianMap::new(big)?;
    let c = map.map_space(d)?;
    let cmax = map.map_space(dmax)?;
    Scheme::build(map.small_field(), c, Some(cmax), None)
}

/// `dim_{F_{q^2}} (D_max cap F^A) / (D cap F^A)` with Hamming supports.
pub fn hermitian_leaked_dim(big: &Field, d: &Subspace, dmax: &Subspace, a: &SubsetA) -> Result<usize> {
    check_nested(big, d, dmax, "D is not contained in D_max")?;
    if a.n() != dmax.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "subset over {} participants, code length {}",
            a.n(),
            dmax.ambient_dim()
        )));
    }
    let outside = a.complement().members();
    Ok(dmax.dim_with_zero_columns(big, &outside) - d.dim_with_zero_columns(big, &outside))
}

/// `RS(n, k)`: evaluations of polynomials of degree below `k` at `alphas`.
pub fn rs_generator(field: &Field, k: usize, alphas: &[Felt]) -> Result<Subspace> {
    let n = alphas.len();
    if k > n {
        return Err(Error::BadParams(format!("k = {k} exceeds n = {n}")));
    }
    field.check_vector(alphas)?;
    let mut seen = std::collections::HashSet::new();
    if !alphas.iter().all(|a| seen.insert(*a)) {
        return Err(Error::DuplicatePoints);
    }
    let rows = (0..k).map(|j| alphas.iter().map(|&a| field.pow(a, j as u64)).collect());
    Subspace::from_rows(field, n, rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsParams {
    pub q: u32,
    pub k: usize,
    pub alphas: Vec<Felt>,
}

impl RsParams {
    /// All of `F_q` in canonical order as evaluation points.
    pub fn new(field: &Field, k: usize) -> Self {
        RsParams { q: field.q(), k, alphas: field.elements().collect() }
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    fn validate(&self, field: &Field) -> Result<()> {
        let n = self.n();
        if self.q != field.q() {
            return Err(Error::BadParams(format!("q = {} but field has order {}", self.q, field.q())));
        }
        if n != self.q as usize {
            return Err(Error::BadParams(format!("n = {n} must equal q = {}", self.q)));
        }
        if !n.is_multiple_of(2) || !self.k.is_multiple_of(2) || self.k == 0 || self.k > n {
            return Err(Error::BadParams(format!(
                "n = {n} and k = {} must be even with 0 < k <= n",
                self.k
            )));
        }
        Ok(())
    }
}

/// `E = RS(n, (n-k)/2)`, `E_max = RS(n, n/2)` fed to [`euclidean_scheme`].
pub fn rs_scheme(field: &Field, params: &RsParams) -> Result<Scheme> {
    params.validate(field)?;
    let n = params.n();
    let e = rs_generator(field, (n - params.k) / 2, &params.alphas)?;
    let emax = rs_generator(field, n / 2, &params.alphas)?;
    euclidean_scheme(field, &e, &emax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::descend_space;
    use crate::limits::Limits;
    use crate::scheme::tests::superdense;
    use crate::scheme::Status;
    use crate::symplectic::all_subsets;
    use crate::weights::{distance_profile, hamming_rghw};

    fn f(rows: &[&[u32]]) -> Vec<Vec<Felt>> {
        rows.iter().map(|r| r.iter().map(|&x| Felt(x)).collect()).collect()
    }

    fn span(field: &Field, m: usize, rows: &[&[u32]]) -> Subspace {
        Subspace::from_rows(field, m, f(rows)).unwrap()
    }

    #[test]
    fn euclidean_dual_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(euclidean_dual(&f2, &Subspace::zero(3)), Subspace::full(&f2, 3));
        let emax = span(&f2, 2, &[&[1, 1]]);
        assert_eq!(euclidean_dual(&f2, &emax), emax);
    }

    #[test]
    fn hermitian_dual_of_all_ones() {
        let f4 = Field::of_order(4).unwrap();
        let dmax = span(&f4, 2, &[&[1, 1]]);
        assert_eq!(hermitian_dual(&f4, &dmax).unwrap(), dmax);
        assert!(hermitian_dual(&Field::prime(2).unwrap(), &dmax).is_err());
    }

    #[test]
    fn trivial_css_pair() {
        let f2 = Field::prime(2).unwrap();
        let (c, dual) =
            css_pair_to_symplectic(&f2, &Subspace::zero(2), &Subspace::full(&f2, 2)).unwrap();
        assert!(c.is_zero());
        assert_eq!(dual, Subspace::full(&f2, 4));
        assert!(matches!(
            css_pair_to_symplectic(&f2, &Subspace::full(&f2, 2), &Subspace::zero(2)),
            Err(Error::NotNested(_))
        ));
    }

    #[test]
    fn self_dual_css_pair_is_lagrangian() {
        let f2 = Field::prime(2).unwrap();
        let sd = span(&f2, 2, &[&[1, 1]]);
        let (c, dual) = css_pair_to_symplectic(&f2, &sd, &sd).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c, dual);
    }

    #[test]
    fn css_closed_form_dual_exhaustive() {
        let f2 = Field::prime(2).unwrap();
        let spaces: Vec<Subspace> = (0u32..1 << 9)
            .map(|bits| {
                let rows = (0..3).map(|r| (0..3).map(|c| Felt(bits >> (3 * r + c) & 1)).collect());
                Subspace::from_rows(&f2, 3, rows).unwrap()
            })
            .collect();
        for c1 in &spaces {
            for c2 in spaces.iter().filter(|s| s.is_subspace_of(&f2, c1)) {
                let (c, dual) = css_pair_to_symplectic(&f2, c2, c1).unwrap();
                assert_eq!(symp_dual(&f2, &c).unwrap(), dual);
            }
        }
    }

    #[test]
    fn css_standard_encoding_matches_classical_leak() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let cases = [
            (f2.clone(), Subspace::zero(2), Subspace::full(&f2, 2)),
            (f2.clone(), span(&f2, 3, &[&[1, 1, 1]]), span(&f2, 3, &[&[1, 1, 1], &[0, 1, 1]])),
            (f2.clone(), Subspace::zero(4), span(&f2, 4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]])),
            (f3.clone(), span(&f3, 3, &[&[1, 2, 0]]), Subspace::full(&f3, 3)),
        ];
        for (field, c2, c1) in cases {
            let s = css_scheme(&field, &c2, &c1).unwrap();
            assert_eq!(s.k(), c1.dim() - c2.dim());
            for a in all_subsets(s.n()) {
                let leak = css_classical_leak(&field, &c2, &c1, &a).unwrap();
                assert_eq!(s.leaked_dim(&a).unwrap(), leak, "{a}");
            }
        }
    }

    #[test]
    fn euclidean_restores_superdense() {
        let f2 = Field::prime(2).unwrap();
        let s = euclidean_scheme(&f2, &Subspace::zero(2), &span(&f2, 2, &[&[1, 1]])).unwrap();
        let reference = superdense();
        assert_eq!(s.c(), reference.c());
        assert_eq!(s.cmax(), reference.cmax());
        let emax = span(&f2, 2, &[&[1, 1]]);
        assert!(euclidean_scheme(&f2, &emax, &emax).unwrap().is_degenerate());
        assert!(matches!(
            euclidean_scheme(&f2, &Subspace::zero(2), &Subspace::full(&f2, 2)),
            Err(Error::BadPair(_))
        ));
    }

    #[test]
    fn hermitian_map_round_trips() {
        for q2 in [4u64, 9, 16] {
            let big = Field::of_order(q2).unwrap();
            let map = HermitianMap::new(&big).unwrap();
            for x in big.elements() {
                let (a, b) = map.split(x);
                assert_eq!(map.join(a, b), x);
            }
        }
    }

    #[test]
    fn hermitian_superdense() {
        let f4 = Field::of_order(4).unwrap();
        let dmax = span(&f4, 2, &[&[1, 1]]);
        let s = hermitian_scheme(&f4, &Subspace::zero(2), &dmax).unwrap();
        assert_eq!((s.n(), s.k()), (2, 2));
        assert_eq!(s.cmax(), superdense().cmax());
        assert!(hermitian_scheme(&f4, &dmax, &dmax).unwrap().is_degenerate());
    }

    #[test]
    fn hermitian_criterion_agrees_on_self_dual_lines() {
        for q2 in [4u64, 9] {
            let big = Field::of_order(q2).unwrap();
            let mut found = 0;
            for x in big.elements() {
                for y in big.elements() {
                    let Ok(dmax) = Subspace::from_rows(&big, 2, [vec![x, y]]) else { continue };
                    if dmax.dim() != 1 || hermitian_dual(&big, &dmax).unwrap() != dmax {
                        continue;
                    }
                    found += 1;
                    let d = Subspace::zero(2);
                    let s = hermitian_scheme(&big, &d, &dmax).unwrap();
                    for a in all_subsets(2) {
                        let h = hermitian_leaked_dim(&big, &d, &dmax, &a).unwrap();
                        assert_eq!(s.leaked_dim(&a).unwrap(), 2 * h);
                    }
                }
            }
            assert!(found > 0);
        }
    }

    #[test]
    fn rs_generator_edges() {
        let f4 = Field::of_order(4).unwrap();
        let alphas: Vec<Felt> = f4.elements().collect();
        assert!(rs_generator(&f4, 0, &alphas).unwrap().is_zero());
        assert_eq!(rs_generator(&f4, 4, &alphas).unwrap(), Subspace::full(&f4, 4));
        let rs42 = rs_generator(&f4, 2, &alphas).unwrap();
        assert_eq!(euclidean_dual(&f4, &rs42), rs42);
        assert_eq!(
            rs_generator(&f4, 1, &[Felt(1), Felt(1)]),
            Err(Error::DuplicatePoints)
        );
    }

    #[test]
    fn rs_hamming_weights() {
        let f4 = Field::of_order(4).unwrap();
        let alphas: Vec<Felt> = f4.elements().collect();
        let rs = rs_generator(&f4, 2, &alphas).unwrap();
        let lim = Limits::default();
        let d: Vec<usize> = (1..=2)
            .map(|j| hamming_rghw(&f4, &rs, &Subspace::zero(4), j, &lim).unwrap())
            .collect();
        assert_eq!(d, vec![3, 4]);
    }

    #[test]
    fn rs_scheme_q4() {
        let f4 = Field::of_order(4).unwrap();
        let s = rs_scheme(&f4, &RsParams::new(&f4, 2)).unwrap();
        assert_eq!((s.n(), s.k(), s.c().dim()), (4, 2, 2));
        for a in all_subsets(4) {
            let status = s.classify(&a).unwrap().status;
            assert_eq!(status == Status::Forbidden, a.len() <= 2);
            assert_eq!(status == Status::Qualified, a.len() >= 3);
        }
        let d = distance_profile(&s, &Limits::default()).unwrap();
        assert_eq!(d.dsi_t, vec![3, 3]);
        assert_eq!(d.dsi_r, vec![2, 2]);
    }

    #[test]
    fn rs_q2_is_superdense() {
        let f2 = Field::prime(2).unwrap();
        let s = rs_scheme(&f2, &RsParams::new(&f2, 2)).unwrap();
        assert_eq!(s.cmax(), superdense().cmax());
        assert!(s.c().is_zero());
    }

    #[test]
    fn rs_params_rejected() {
        let f4 = Field::of_order(4).unwrap();
        assert!(matches!(rs_scheme(&f4, &RsParams::new(&f4, 1)), Err(Error::BadParams(_))));
        let mut p = RsParams::new(&f4, 2);
        p.alphas.pop();
        assert!(matches!(rs_scheme(&f4, &p), Err(Error::BadParams(_))));
        let f3 = Field::prime(3).unwrap();
        assert!(matches!(rs_scheme(&f3, &RsParams::new(&f3, 2)), Err(Error::BadParams(_))));
    }

    #[test]
    fn rs_point_order_does_not_matter() {
        let f4 = Field::of_order(4).unwrap();
        let base = rs_scheme(&f4, &RsParams::new(&f4, 2)).unwrap();
        let mut p = RsParams::new(&f4, 2);
        p.alphas.reverse();
        let rev = rs_scheme(&f4, &p).unwrap();
        for a in all_subsets(4) {
            assert_eq!(base.leaked_dim(&a).unwrap(), rev.leaked_dim(&a).unwrap());
        }
    }

    #[test]
    fn descent_scales_leak_by_mu() {
        let f4 = Field::of_order(4).unwrap();
        let alphas: Vec<Felt> = f4.elements().collect();
        let cases = [
            (Subspace::zero(2), span(&f4, 2, &[&[1, 1]])),
            (rs_generator(&f4, 1, &alphas).unwrap(), rs_generator(&f4, 2, &alphas).unwrap()),
        ];
        for (e, emax) in cases {
            let n = emax.ambient_dim();
            let s = euclidean_scheme(&f4, &e, &emax).unwrap();
            let f2 = Field::prime(2).unwrap();
            let c = descend_space(&f4, s.c()).unwrap();
            let cmax = descend_space(&f4, s.cmax()).unwrap();
            let low = Scheme::build(&f2, c, Some(cmax), None).unwrap();
            assert_eq!(low.k(), 2 * s.k());
            // Participant i holds qudits 2i and 2i + 1 after descent.
            for a in all_subsets(n) {
                let members: Vec<usize> = a.members().iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
                let b = SubsetA::new(2 * n, &members).unwrap();
                assert_eq!(low.leaked_dim(&b).unwrap(), 2 * s.leaked_dim(&a).unwrap());
                assert_eq!(low.classify(&b).unwrap().status, s.classify(&a).unwrap().status);
            }
        }
    }
}
