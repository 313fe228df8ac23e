//! Arithmetic in `F_p` and `F_{p^mu}`, the trace map, and the field-descent
//! expansion that turns a symplectic space over `F_q` into one over `F_p`.
//!
//! Elements are stored as integers in `[0, q)` whose base-`p` digits are the
//! coefficients of the polynomial-basis representation, constant term first.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg::Subspace;
use crate::{Error, Result};

/// Largest extension field for which full operation tables are built.
pub const MAX_EXTENSION_ORDER: u64 = 1024;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;

/// A field element, encoded as base-`p` polynomial coefficients (little-endian).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parameters of `F_q`, `q = p^mu`: the characteristic, the degree and the
/// monic irreducible modulus (constant term first, leading 1 included).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub mu: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(p: u32, mu: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if mu == 0 || mu > MAX_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree {mu} outside 1..={MAX_DEGREE}"
            )));
        }
        if modulus.len() != mu as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus has {} coefficients, expected {}",
                modulus.len(),
                mu + 1
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient not reduced mod p".into()));
        }
        if modulus[mu as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let poly: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !is_irreducible(&poly, p as u64) {
            return Err(Error::NotIrreducible(modulus));
        }
        let q = (p as u64).checked_pow(mu).unwrap_or(u64::MAX);
        if mu > 1 && q > MAX_EXTENSION_ORDER {
            return Err(Error::InvalidField(format!(
                "extension field of order {q} exceeds the supported {MAX_EXTENSION_ORDER}"
            )));
        }
        Ok(FieldSpec { p, mu, modulus })
    }

    /// The prime field `F_p`, with modulus `x`.
    pub fn prime(p: u32) -> Result<Self> {
        FieldSpec::new(p, 1, vec![0, 1])
    }

    /// `F_{p^mu}` with the shipped modulus for q in {4, 8, 9, 16, 25, 27}, or
    /// the lexicographically smallest monic irreducible polynomial otherwise.
    pub fn with_default_modulus(p: u32, mu: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let modulus = match (p, mu) {
            (_, 1) => vec![0, 1],
            (2, 2) => vec![1, 1, 1],
            (2, 3) => vec![1, 1, 0, 1],
            (3, 2) => vec![1, 0, 1],
            (2, 4) => vec![1, 1, 0, 0, 1],
            (5, 2) => vec![2, 0, 1],
            (3, 3) => vec![1, 2, 0, 1],
            _ => smallest_irreducible(p, mu)?,
        };
        FieldSpec::new(p, mu, modulus)
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.mu)
    }
}

/// The `mu x mu` matrix over `F_p` with entries `Tr(gamma_i gamma_j)` for the
/// polynomial basis, and its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub entries: Vec<Vec<u32>>,
    pub inverse: Vec<Vec<u32>>,
}

#[derive(Debug)]
struct ExtTables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// A concrete finite field. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    q: u32,
    ext: Option<Arc<ExtTables>>,
    gram: Arc<GramMatrix>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        // Re-validate: the struct has public fields.
        let spec = FieldSpec::new(spec.p, spec.mu, spec.modulus)?;
        let q = spec.q();
        if q > u32::MAX as u64 / 2 {
            return Err(Error::InvalidField(format!("field order {q} too large")));
        }
        let q = q as u32;
        let ext = if spec.mu > 1 {
            Some(Arc::new(build_tables(&spec, q)))
        } else {
            None
        };
        let mut field = Field {
            spec,
            q,
            ext,
            gram: Arc::new(GramMatrix { entries: vec![vec![1]], inverse: vec![vec![1]] }),
        };
        field.gram = Arc::new(field.compute_gram()?);
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Field::new(FieldSpec::prime(p)?)
    }

    pub fn with_default_modulus(p: u32, mu: u32) -> Result<Self> {
        Field::new(FieldSpec::with_default_modulus(p, mu)?)
    }

    /// Field of order `q`, using the default modulus when `q` is a proper power.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, mu) = prime_power(q).ok_or_else(|| {
            Error::InvalidField(format!("{q} is not a prime power"))
        })?;
        Field::with_default_modulus(p, mu)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.spec.p
    }

    #[inline]
    pub fn mu(&self) -> u32 {
        self.spec.mu
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.spec.mu == 1
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    #[inline]
    pub fn zero(&self) -> Felt {
        Felt::ZERO
    }

    #[inline]
    pub fn one(&self) -> Felt {
        Felt::ONE
    }

    pub fn element(&self, value: u32) -> Result<Felt> {
        if value < self.q {
            Ok(Felt(value))
        } else {
            Err(Error::InvalidElement { value, q: self.q })
        }
    }

    /// All elements in canonical (encoding) order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.q).map(Felt)
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        match &self.ext {
            None => Felt(((a.0 as u64 + b.0 as u64) % self.q as u64) as u32),
            Some(t) => Felt(t.add[(a.0 * self.q + b.0) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        match &self.ext {
            None => {
                if a.0 == 0 {
                    a
                } else {
                    Felt(self.q - a.0)
                }
            }
            Some(t) => Felt(t.neg[a.0 as usize]),
        }
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        match &self.ext {
            None => Felt(((a.0 as u64 * b.0 as u64) % self.q as u64) as u32),
            Some(t) => Felt(t.mul[(a.0 * self.q + b.0) as usize]),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Felt) -> Felt {
        assert!(!a.is_zero(), "inverse of zero");
        match &self.ext {
            None => Felt(pow_mod(a.0 as u64, self.q as u64 - 2, self.q as u64) as u32),
            Some(t) => Felt(t.inv[a.0 as usize]),
        }
    }

    pub fn div(&self, a: Felt, b: Felt) -> Felt {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Felt, mut e: u64) -> Felt {
        let mut base = a;
        let mut acc = Felt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: Felt) -> Felt {
        self.pow(a, self.spec.p as u64)
    }

    /// Coefficients of `a` in the basis `{1, gamma, ..., gamma^(mu-1)}`.
    pub fn coeffs(&self, a: Felt) -> Vec<u32> {
        let p = self.spec.p;
        let mut v = a.0;
        (0..self.spec.mu)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Felt {
        debug_assert!(coeffs.len() <= self.spec.mu as usize);
        let p = self.spec.p;
        Felt(coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c % p))
    }

    /// The `j`-th polynomial basis element `gamma^j`.
    pub fn basis_element(&self, j: u32) -> Felt {
        debug_assert!(j < self.spec.mu);
        Felt(self.spec.p.pow(j))
    }

    /// The prime-subfield element `c mod p`.
    pub fn from_int(&self, c: i64) -> Felt {
        Felt(c.rem_euclid(self.spec.p as i64) as u32)
    }

    /// `Tr_{q/p}(a) = a + a^p + ... + a^(p^(mu-1))`, returned as an integer in `[0, p)`.
    pub fn trace(&self, a: Felt) -> u32 {
        let mut acc = Felt::ZERO;
        let mut cur = a;
        for _ in 0..self.spec.mu {
            acc = self.add(acc, cur);
            cur = self.frobenius(cur);
        }
        debug_assert!(acc.0 < self.spec.p, "trace left the prime subfield");
        acc.0
    }

    pub fn dot(&self, u: &[Felt], v: &[Felt]) -> Felt {
        u.iter()
            .zip(v)
            .fold(Felt::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn scale(&self, c: Felt, v: &[Felt]) -> Vec<Felt> {
        v.iter().map(|&x| self.mul(c, x)).collect()
    }

    /// `u += c * v`
    pub fn axpy(&self, u: &mut [Felt], c: Felt, v: &[Felt]) {
        if c.is_zero() {
            return;
        }
        for (x, &y) in u.iter_mut().zip(v) {
            if !y.is_zero() {
                *x = self.add(*x, self.mul(c, y));
            }
        }
    }

    pub fn add_vec(&self, u: &[Felt], v: &[Felt]) -> Vec<Felt> {
        u.iter().zip(v).map(|(&x, &y)| self.add(x, y)).collect()
    }

    pub fn check_vector(&self, v: &[Felt]) -> Result<()> {
        match v.iter().find(|x| x.0 >= self.q) {
            Some(x) => Err(Error::InvalidElement { value: x.0, q: self.q }),
            None => Ok(()),
        }
    }

    fn compute_gram(&self) -> Result<GramMatrix> {
        let mu = self.spec.mu;
        let p = self.spec.p as u64;
        let entries: Vec<Vec<u32>> = (0..mu)
            .map(|i| {
                (0..mu)
                    .map(|j| {
                        self.trace(self.mul(self.basis_element(i), self.basis_element(j)))
                    })
                    .collect()
            })
            .collect();
        let inverse = invert_mod_p(&entries, p).ok_or_else(|| {
            Error::InvalidField("trace Gram matrix is singular".into())
        })?;
        Ok(GramMatrix { entries, inverse })
    }
}

/// Expands a vector `(a | b)` over `F_q` of length `2n` into the unique
/// vector over `F_p` of length `2 mu n` that the descent map sends to it.
///
/// The `a`-block takes the basis coefficients of each `a_i`; the `b`-block
/// takes the coefficients of each `b_i` multiplied by the trace Gram matrix.
/// With this twist the `F_p` symplectic form of two expansions equals the
/// trace of the `F_q` symplectic form of the originals.
pub fn descend(field: &Field, v: &[Felt]) -> Result<Vec<Felt>> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "symplectic vector has odd length {}",
            v.len()
        )));
    }
    field.check_vector(v)?;
    let n = v.len() / 2;
    let mu = field.mu() as usize;
    let p = field.p() as u64;
    let gram = &field.gram().entries;
    let mut out = Vec::with_capacity(2 * mu * n);
    for &x in &v[..n] {
        out.extend(field.coeffs(x).into_iter().map(Felt));
    }
    for &x in &v[n..] {
        let c = field.coeffs(x);
        for j in 0..mu {
            let s: u64 = c.iter().zip(gram).map(|(&ci, row)| ci as u64 * row[j] as u64).sum();
            out.push(Felt((s % p) as u32));
        }
    }
    Ok(out)
}

/// Inverse of [`descend`].
pub fn ascend(field: &Field, u: &[Felt]) -> Result<Vec<Felt>> {
    let mu = field.mu() as usize;
    if !u.len().is_multiple_of(2 * mu) {
        return Err(Error::DimensionMismatch(format!(
            "length {} is not a multiple of 2*mu = {}",
            u.len(),
            2 * mu
        )));
    }
    let p = field.p();
    if let Some(x) = u.iter().find(|x| x.0 >= p) {
        return Err(Error::InvalidElement { value: x.0, q: p });
    }
    let n = u.len() / (2 * mu);
    let inv = &field.gram().inverse;
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let c: Vec<u32> = u[i * mu..(i + 1) * mu].iter().map(|x| x.0).collect();
        out.push(field.from_coeffs(&c));
    }
    let base = n * mu;
    for i in 0..n {
        let row = &u[base + i * mu..base + (i + 1) * mu];
        let c: Vec<u32> = (0..mu)
            .map(|j| {
                let s: u64 = (0..mu).map(|t| row[t].0 as u64 * inv[t][j] as u64).sum();
                (s % p as u64) as u32
            })
            .collect();
        out.push(field.from_coeffs(&c));
    }
    Ok(out)
}

/// Preimage of an `F_q`-subspace of `F_q^{2n}` under the descent map, as an
/// `F_p`-subspace of `F_p^{2 mu n}`. Spanned by the expansions of
/// `gamma_j * s` over basis vectors `s` and basis elements `gamma_j`.
pub fn descend_space(field: &Field, space: &Subspace) -> Result<Subspace> {
    let m = space.ambient_dim();
    if !m.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "symplectic ambient dimension {m} is odd"
        )));
    }
    let prime = Field::prime(field.p())?;
    let mu = field.mu();
    let mut rows = Vec::with_capacity(space.dim() * mu as usize);
    for s in space.rows() {
        for j in 0..mu {
            rows.push(descend(field, &field.scale(field.basis_element(j), s))?);
        }
    }
    Subspace::from_rows(&prime, m * mu as usize, rows)
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `q = p^mu` decomposition, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 || q > u32::MAX as u64 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut mu = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        mu += 1;
    }
    (rest == 1).then_some((p as u32, mu))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn build_tables(spec: &FieldSpec, q: u32) -> ExtTables {
    let p = spec.p as u64;
    let mu = spec.mu as usize;
    let modulus: Vec<u64> = spec.modulus.iter().map(|&c| c as u64).collect();
    let digits = |mut v: u32| -> Vec<u64> {
        (0..mu)
            .map(|_| {
                let d = v % spec.p;
                v /= spec.p;
                d as u64
            })
            .collect()
    };
    let encode = |c: &[u64]| -> u32 {
        c.iter().rev().fold(0u32, |acc, &d| acc * spec.p + d as u32)
    };
    let all: Vec<Vec<u64>> = (0..q).map(digits).collect();
    let qs = q as usize;
    let mut add = vec![0u32; qs * qs];
    let mut mul = vec![0u32; qs * qs];
    for a in 0..qs {
        for b in 0..qs {
            let s: Vec<u64> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p).collect();
            add[a * qs + b] = encode(&s);
            let prod = poly_mulmod(&all[a], &all[b], &modulus, p);
            let mut padded = prod;
            padded.resize(mu, 0);
            mul[a * qs + b] = encode(&padded);
        }
    }
    let neg = (0..qs)
        .map(|a| encode(&all[a].iter().map(|&x| (p - x) % p).collect::<Vec<_>>()))
        .collect();
    let mut inv = vec![0u32; qs];
    for a in 1..qs {
        for b in 1..qs {
            if mul[a * qs + b] == 1 {
                inv[a] = b as u32;
                break;
            }
        }
    }
    ExtTables { add, mul, neg, inv }
}

// ---- polynomials over F_p, little-endian u64 coefficients ----

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm && !r.is_empty() {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mc % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// Ben-Or test: a monic `f` of degree `d` is irreducible over `F_p` iff
/// `gcd(f, x^(p^i) - x) = 1` for every `1 <= i <= d/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let d = f.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = poly_powmod(&h, p, &f, p);
        let g = poly_gcd(&f, &poly_sub(&h, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, mu: u32) -> Result<Vec<u32>> {
    let total = (p as u64).checked_pow(mu).filter(|&t| t <= MAX_EXTENSION_ORDER);
    let total = total.ok_or_else(|| {
        Error::InvalidField(format!("no default modulus for p = {p}, mu = {mu}"))
    })?;
    for code in 0..total {
        let mut c = code;
        let mut poly: Vec<u64> = (0..mu)
            .map(|_| {
                let d = c % p as u64;
                c /= p as u64;
                d
            })
            .collect();
        poly.push(1);
        if is_irreducible(&poly, p as u64) {
            return Ok(poly.into_iter().map(|c| c as u32).collect());
        }
    }
    Err(Error::InvalidField(format!("no irreducible of degree {mu} over F_{p}")))
}

fn invert_mod_p(m: &[Vec<u32>], p: u64) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|&x| x as u64 % p).collect();
            r.extend((0..n).map(|j| (i == j) as u64));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let inv = pow_mod(a[col][col], p - 2, p);
        for x in a[col].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].iter().map(|&x| x as u32).collect()).collect())
}
