//! Row reduction and subspaces of `F_q^m` in canonical (reduced row-echelon) form.

use serde::{Deserialize, Serialize};

use crate::gf::{Felt, Field};
use crate::{Error, Result};

/// Brings `rows` to reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Felt>>, m: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        if r == rows.len() {
            break;
        }
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = field.inv(rows[r][col]);
        if inv != Felt::ONE {
            for x in rows[r].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (prow, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let c = other[col];
            if !c.is_zero() {
                field.axpy(other, field.neg(c), prow);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<Felt>], m: usize) -> usize {
    let mut rows = rows.to_vec();
    rref(field, &mut rows, m).len()
}

/// `{x in F_q^m : <row, x> = 0 for every row}` (Euclidean annihilator).
pub fn null_space(field: &Field, rows: &[Vec<Felt>], m: usize) -> Subspace {
    let mut rows = rows.to_vec();
    let pivots = rref(field, &mut rows, m);
    let mut is_pivot = vec![false; m];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let basis: Vec<Vec<Felt>> = (0..m)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![Felt::ZERO; m];
            x[free] = Felt::ONE;
            for (row, &pc) in rows.iter().zip(&pivots) {
                x[pc] = field.neg(row[free]);
            }
            x
        })
        .collect();
    Subspace::from_rows(field, m, basis).expect("null space basis is well formed")
}

/// A linear subspace of `F_q^m`, stored as its unique reduced row-echelon basis,
/// so two subspaces are equal iff their representations are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Felt>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(m: usize) -> Self {
        Subspace { ambient: m, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &Field, m: usize) -> Self {
        let rows = (0..m)
            .map(|i| {
                let mut e = vec![Felt::ZERO; m];
                e[i] = field.one();
                e
            })
            .collect();
        Subspace { ambient: m, rows, pivots: (0..m).collect() }
    }

    /// Span of `rows`. Rows may be dependent.
    pub fn from_rows<I>(field: &Field, m: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Felt>>,
    {
        let mut rows: Vec<Vec<Felt>> = rows.into_iter().collect();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {m}",
                    i + 1,
                    r.len()
                )));
            }
            field.check_vector(r)?;
        }
        let pivots = rref(field, &mut rows, m);
        Ok(Subspace { ambient: m, rows, pivots })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Felt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Residue of `v` after eliminating the pivot columns. This is the
    /// lexicographically smallest element of the coset `v + self`.
    pub fn reduce(&self, field: &Field, v: &[Felt]) -> Vec<Felt> {
        let mut out = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = out[pc];
            if !c.is_zero() {
                field.axpy(&mut out, field.neg(c), row);
            }
        }
        out
    }

    pub fn contains(&self, field: &Field, v: &[Felt]) -> bool {
        v.len() == self.ambient && self.reduce(field, v).iter().all(|x| x.is_zero())
    }

    pub fn is_subspace_of(&self, field: &Field, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(field, r))
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {} differ",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Subspace::from_rows(field, self.ambient, self.rows.iter().chain(&other.rows).cloned())
    }

    /// Intersection via `(S cap T)^perp = S^perp + T^perp` for the Euclidean form.
    pub fn intersect(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let sd = self.euclidean_dual(field);
        let td = other.euclidean_dual(field);
        let both = sd.sum(field, &td)?;
        Ok(both.euclidean_dual(field))
    }

    /// `dim self - dim sub`, requiring `sub` to be contained in `self`.
    pub fn quotient_dim(&self, field: &Field, sub: &Subspace) -> Result<usize> {
        self.check_same_ambient(sub)?;
        if !sub.is_subspace_of(field, self) {
            return Err(Error::NotASubspace(
                "quotient denominator is not contained in the numerator".into(),
            ));
        }
        Ok(self.dim() - sub.dim())
    }

    pub fn euclidean_dual(&self, field: &Field) -> Subspace {
        null_space(field, &self.rows, self.ambient)
    }

    /// `self cap {v : v_j = 0 for j in zero_cols}`.
    pub fn with_zero_columns(&self, field: &Field, zero_cols: &[usize]) -> Subspace {
        if zero_cols.is_empty() || self.is_zero() {
            return self.clone();
        }
        // Coefficient vectors x with sum_r x_r row_r[j] = 0 on every listed column.
        let constraints: Vec<Vec<Felt>> = zero_cols
            .iter()
            .map(|&j| self.rows.iter().map(|r| r[j]).collect())
            .collect();
        let coeffs = null_space(field, &constraints, self.dim());
        let vectors = coeffs.rows.iter().map(|x| {
            let mut v = vec![Felt::ZERO; self.ambient];
            for (&c, row) in x.iter().zip(&self.rows) {
                field.axpy(&mut v, c, row);
            }
            v
        });
        Subspace::from_rows(field, self.ambient, vectors).expect("combination of rows")
    }

    /// `dim(self cap {v : v_j = 0 for j in zero_cols})`, from a single rank computation.
    pub fn dim_with_zero_columns(&self, field: &Field, zero_cols: &[usize]) -> usize {
        if zero_cols.is_empty() || self.is_zero() {
            return self.dim();
        }
        let mut cols: Vec<Vec<Felt>> =
            self.rows.iter().map(|r| zero_cols.iter().map(|&j| r[j]).collect()).collect();
        self.dim() - rref(field, &mut cols, zero_cols.len()).len()
    }

    /// Image under the coordinate projection onto `keep_cols` (in that order).
    pub fn project_columns(&self, field: &Field, keep_cols: &[usize]) -> Subspace {
        let rows = self.rows.iter().map(|r| keep_cols.iter().map(|&j| r[j]).collect());
        Subspace::from_rows(field, keep_cols.len(), rows).expect("projected rows")
    }

    pub fn rank_of_columns(&self, field: &Field, cols: &[usize]) -> usize {
        let mut m: Vec<Vec<Felt>> =
            self.rows.iter().map(|r| cols.iter().map(|&j| r[j]).collect()).collect();
        rref(field, &mut m, cols.len()).len()
    }

    /// Number of vectors, `q^dim`, if it fits in a `u64`.
    pub fn size(&self, field: &Field) -> Option<u64> {
        (field.q() as u64).checked_pow(self.dim() as u32)
    }

    /// Iterates every vector of the space, ordered by the coefficient tuple.
    pub fn vectors<'a>(&'a self, field: &'a Field) -> impl Iterator<Item = Vec<Felt>> + 'a {
        let total = self.size(field).expect("space too large to enumerate");
        let q = field.q() as u64;
        (0..total).map(move |mut code| {
            let mut v = vec![Felt::ZERO; self.ambient];
            for row in &self.rows {
                let c = Felt((code % q) as u32);
                code /= q;
                field.axpy(&mut v, c, row);
            }
            v
        })
    }

    /// The vector `sum_r coeffs[r] * row_r`.
    pub fn combine(&self, field: &Field, coeffs: &[Felt]) -> Vec<Felt> {
        let mut v = vec![Felt::ZERO; self.ambient];
        for (&c, row) in coeffs.iter().zip(&self.rows) {
            field.axpy(&mut v, c, row);
        }
        v
    }

    /// Canonical basis of a complement of `sub` inside `self`: the residues of
    /// `self`'s basis modulo `sub`, row-reduced. Each row is the
    /// lexicographically least element of its coset.
    pub fn complement_reps(&self, field: &Field, sub: &Subspace) -> Result<Vec<Vec<Felt>>> {
        self.quotient_dim(field, sub)?;
        let residues = self.rows.iter().map(|r| sub.reduce(field, r));
        let reps = Subspace::from_rows(field, self.ambient, residues)?;
        Ok(reps.rows)
    }
}
