//! Symplectic geometry on `F_q^{2n}`: the alternating form, symplectic weight,
//! duals, support restriction, projection onto share sets, and completion of a
//! self-orthogonal space to a maximal self-dual (Lagrangian) one.
//!
//! Vectors are stored concatenated as `(a_1, ..., a_n | b_1, ..., b_n)`;
//! participant `i` owns columns `i` and `n + i`.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::gf::{Felt, Field};
use crate::linalg::{null_space, Subspace};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SympVector {
    a: Vec<Felt>,
    b: Vec<Felt>,
}

impl SympVector {
    pub fn new(a: Vec<Felt>, b: Vec<Felt>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "a has length {}, b has length {}",
                a.len(),
                b.len()
            )));
        }
        Ok(SympVector { a, b })
    }

    pub fn zero(n: usize) -> Self {
        SympVector { a: vec![Felt::ZERO; n], b: vec![Felt::ZERO; n] }
    }

    /// Splits a concatenated `(a | b)` vector.
    pub fn from_concat(v: &[Felt]) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!("odd length {}", v.len())));
        }
        let n = v.len() / 2;
        Ok(SympVector { a: v[..n].to_vec(), b: v[n..].to_vec() })
    }

    pub fn to_concat(&self) -> Vec<Felt> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Felt] {
        &self.a
    }

    pub fn b(&self) -> &[Felt] {
        &self.b
    }
}

impl fmt::Display for SympVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.a.iter().join(","), self.b.iter().join(","))
    }
}

/// `<(a|b), (a'|b')>_s = <a, b'> - <a', b>`.
pub fn symp_inner(field: &Field, u: &SympVector, v: &SympVector) -> Result<Felt> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", u.n(), v.n())));
    }
    Ok(field.sub(field.dot(&u.a, &v.b), field.dot(&v.a, &u.b)))
}

/// Symplectic form on concatenated vectors of equal even length.
pub fn symp_inner_concat(field: &Field, u: &[Felt], v: &[Felt]) -> Felt {
    debug_assert_eq!(u.len(), v.len());
    let n = u.len() / 2;
    field.sub(field.dot(&u[..n], &v[n..]), field.dot(&v[..n], &u[n..]))
}

/// Number of positions `i` with `(a_i, b_i) != (0, 0)`.
pub fn swt(v: &SympVector) -> usize {
    v.a.iter().zip(&v.b).filter(|(x, y)| !x.is_zero() || !y.is_zero()).count()
}

pub fn swt_concat(v: &[Felt]) -> usize {
    let n = v.len() / 2;
    (0..n).filter(|&i| !v[i].is_zero() || !v[n + i].is_zero()).count()
}

/// A set of participants, stored as a bitmask over `0..n` (`n <= 64`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetA {
    n: usize,
    mask: u64,
}

pub const MAX_PARTICIPANTS: usize = 64;

impl SubsetA {
    /// Builds a subset from 0-based member indices.
    pub fn new(n: usize, members: &[usize]) -> Result<Self> {
        if n > MAX_PARTICIPANTS {
            return Err(Error::OutOfRange(format!("n = {n} exceeds {MAX_PARTICIPANTS}")));
        }
        let mut mask = 0u64;
        for &i in members {
            if i >= n {
                return Err(Error::OutOfRange(format!("participant {} not in 1..={n}", i + 1)));
            }
            if mask >> i & 1 == 1 {
                return Err(Error::OutOfRange(format!("participant {} listed twice", i + 1)));
            }
            mask |= 1 << i;
        }
        Ok(SubsetA { n, mask })
    }

    /// Builds a subset from 1-based participant labels, as used in all I/O.
    pub fn from_one_based(n: usize, labels: &[usize]) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l == 0) {
            return Err(Error::OutOfRange(format!("participant {bad} not in 1..={n}")));
        }
        let members: Vec<usize> = labels.iter().map(|l| l - 1).collect();
        SubsetA::new(n, &members)
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= MAX_PARTICIPANTS);
        debug_assert!(n == 64 || mask >> n == 0);
        SubsetA { n, mask }
    }

    pub fn empty(n: usize) -> Self {
        SubsetA { n, mask: 0 }
    }

    pub fn full(n: usize) -> Self {
        SubsetA { n, mask: full_mask(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.mask >> i & 1 == 1
    }

    /// Sorted 0-based members.
    pub fn members(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.contains(i)).collect()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.members().into_iter().map(|i| i + 1).collect()
    }

    pub fn complement(&self) -> SubsetA {
        SubsetA { n: self.n, mask: !self.mask & full_mask(self.n) }
    }

    pub fn is_subset_of(&self, other: &SubsetA) -> bool {
        self.mask & !other.mask == 0
    }

    /// Columns of `F^{2n}` owned by the members.
    pub fn symplectic_columns(&self) -> Vec<usize> {
        let m = self.members();
        m.iter().copied().chain(m.iter().map(|i| i + self.n)).collect()
    }

    /// Columns that must vanish for a vector to be supported on this set.
    pub fn outside_columns(&self) -> Vec<usize> {
        self.complement().symplectic_columns()
    }

    /// `(|A|, sorted members)` order used for every table.
    pub fn sort_key(&self) -> (usize, Vec<usize>) {
        (self.len(), self.members())
    }
}

impl fmt::Display for SubsetA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.one_based().iter().join(","))
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Every subset of `{0, ..., n-1}` of size `size`, in lexicographic order.
pub fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = SubsetA> {
    (0..n).combinations(size).map(move |c| {
        SubsetA::from_mask(n, c.iter().fold(0u64, |m, &i| m | 1 << i))
    })
}

/// Every subset, ordered by size and then lexicographically.
pub fn all_subsets(n: usize) -> impl Iterator<Item = SubsetA> {
    (0..=n).flat_map(move |s| subsets_of_size(n, s))
}

fn check_symplectic_ambient(space: &Subspace) -> Result<usize> {
    let m = space.ambient_dim();
    if !m.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!("ambient dimension {m} is odd")));
    }
    Ok(m / 2)
}

/// `S^{perp_s}`.
pub fn symp_dual(field: &Field, space: &Subspace) -> Result<Subspace> {
    let n = check_symplectic_ambient(space)?;
    // <v, s>_s = <v_a, s_b> - <s_a, v_b> = v . (s_b | -s_a)
    let rows: Vec<Vec<Felt>> = space
        .rows()
        .iter()
        .map(|s| {
            s[n..].iter().copied().chain(s[..n].iter().map(|&x| field.neg(x))).collect()
        })
        .collect();
    Ok(null_space(field, &rows, 2 * n))
}

/// Finds the first pair of basis rows (1-based) that are not symplectically
/// orthogonal.
pub fn first_non_orthogonal_pair(field: &Field, rows: &[Vec<Felt>]) -> Option<(usize, usize)> {
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if !symp_inner_concat(field, &rows[i], &rows[j]).is_zero() {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

pub fn is_self_orthogonal(field: &Field, space: &Subspace) -> bool {
    first_non_orthogonal_pair(field, space.rows()).is_none()
}

fn check_subset(space: &Subspace, subset: &SubsetA) -> Result<()> {
    if space.ambient_dim() != 2 * subset.n() {
        return Err(Error::DimensionMismatch(format!(
            "subset over {} participants, space in dimension {}",
            subset.n(),
            space.ambient_dim()
        )));
    }
    Ok(())
}

/// `S cap F^A`: the vectors of `S` supported on `A`.
pub fn restrict_support(field: &Field, space: &Subspace, subset: &SubsetA) -> Result<Subspace> {
    check_subset(space, subset)?;
    Ok(space.with_zero_columns(field, &subset.outside_columns()))
}

/// `dim(S cap F^A)`.
pub fn restricted_dim(field: &Field, space: &Subspace, subset: &SubsetA) -> Result<usize> {
    check_subset(space, subset)?;
    Ok(space.dim_with_zero_columns(field, &subset.outside_columns()))
}

/// `P_A(a|b) = (a_i | b_i)_{i in A}`.
pub fn project(v: &SympVector, subset: &SubsetA) -> Result<SympVector> {
    if v.n() != subset.n() {
        return Err(Error::DimensionMismatch(format!(
            "vector over {} positions, subset over {}",
            v.n(),
            subset.n()
        )));
    }
    let m = subset.members();
    Ok(SympVector { a: m.iter().map(|&i| v.a[i]).collect(), b: m.iter().map(|&i| v.b[i]).collect() })
}

/// `P_A(S)` as a subspace of `F^{2|A|}`.
pub fn project_space(field: &Field, space: &Subspace, subset: &SubsetA) -> Result<Subspace> {
    check_subset(space, subset)?;
    Ok(space.project_columns(field, &subset.symplectic_columns()))
}

/// Greedily extends a self-orthogonal `C` to a Lagrangian `C_max` with
/// `C <= C_max = C_max^{perp_s} <= C^{perp_s}`. At each step the added vector
/// is the smallest nonzero reduced representative of `S^{perp_s} / S`.
pub fn complete_to_lagrangian(field: &Field, c: &Subspace) -> Result<Subspace> {
    let n = check_symplectic_ambient(c)?;
    if let Some((row_a, row_b)) = first_non_orthogonal_pair(field, c.rows()) {
        return Err(Error::NotSelfOrthogonal { row_a, row_b });
    }
    let mut current = c.clone();
    while current.dim() < n {
        let dual = symp_dual(field, &current)?;
        let reps = dual.complement_reps(field, &current)?;
        let next = reps.last().expect("a proper isotropic space has a nonzero complement").clone();
        current = Subspace::from_rows(
            field,
            2 * n,
            current.rows().iter().cloned().chain(std::iter::once(next)),
        )?;
    }
    Ok(current)
}

/// True when `S = S^{perp_s}`.
pub fn is_lagrangian(field: &Field, space: &Subspace) -> bool {
    space.ambient_dim().is_multiple_of(2)
        && 2 * space.dim() == space.ambient_dim()
        && is_self_orthogonal(field, space)
}
