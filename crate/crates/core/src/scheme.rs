//! The secret-sharing scheme `(C, C_max, f)` and its classical access structure.
//!
//! A share set `A` learns `l(A) = dim (C_max cap F^A) / (C cap F^A)` symbols
//! of the secret: it is qualified when `l(A) = k`, forbidden when `l(A) = 0`,
//! and intermediate otherwise.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gf::{Felt, Field};
use crate::limits::Limits;
use crate::linalg::Subspace;
use crate::symplectic::{
    all_subsets, complete_to_lagrangian, first_non_orthogonal_pair, is_self_orthogonal,
    project_space, restricted_dim, symp_dual, SubsetA,
};
use crate::weights::{self, DistanceProfile};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Qualified,
    Forbidden,
    Intermediate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumStatus {
    QQualified,
    QForbidden,
    QIntermediate,
}

/// Whether a component of the scheme was given by the caller or chosen by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Supplied,
    Default,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub status: Status,
    pub leaked_dim: usize,
    pub leaked_bits: f64,
}

#[derive(Clone, Debug)]
pub struct Scheme {
    field: Field,
    n: usize,
    k: usize,
    c: Subspace,
    cmax: Subspace,
    cdual: Subspace,
    reps: Vec<Vec<Felt>>,
    cmax_provenance: Provenance,
    reps_provenance: Provenance,
}

impl Scheme {
    /// Builds a scheme from a self-orthogonal `C`. Without `cmax` the greedy
    /// Lagrangian completion is used; without `reps` the canonical reduced
    /// coset representatives of `C^{perp_s} / C_max` are used.
    pub fn build(
        field: &Field,
        c: Subspace,
        cmax: Option<Subspace>,
        reps: Option<Vec<Vec<Felt>>>,
    ) -> Result<Scheme> {
        let m = c.ambient_dim();
        if !m.is_multiple_of(2) || m == 0 {
            return Err(Error::DimensionMismatch(format!("ambient dimension {m} must be even and positive")));
        }
        let n = m / 2;
        if let Some((row_a, row_b)) = first_non_orthogonal_pair(field, c.rows()) {
            return Err(Error::NotSelfOrthogonal { row_a, row_b });
        }
        let k = n - c.dim();
        let cdual = symp_dual(field, &c)?;

        let (cmax, cmax_provenance) = match cmax {
            Some(cmax) => {
                if cmax.ambient_dim() != m {
                    return Err(Error::BadLagrangian(format!(
                        "ambient dimension {} differs from {m}",
                        cmax.ambient_dim()
                    )));
                }
                if cmax.dim() != n {
                    return Err(Error::BadLagrangian(format!(
                        "dimension {} but n = {n}",
                        cmax.dim()
                    )));
                }
                if !is_self_orthogonal(field, &cmax) {
                    return Err(Error::BadLagrangian("not self-orthogonal".into()));
                }
                if !c.is_subspace_of(field, &cmax) {
                    return Err(Error::BadLagrangian("does not contain C".into()));
                }
                (cmax, Provenance::Supplied)
            }
            None => (complete_to_lagrangian(field, &c)?, Provenance::Default),
        };

        let (reps, reps_provenance) = match reps {
            Some(reps) => {
                if reps.len() != k {
                    return Err(Error::BadReps(format!("{} given, k = {k}", reps.len())));
                }
                for (i, r) in reps.iter().enumerate() {
                    if r.len() != m {
                        return Err(Error::BadReps(format!("row {} has length {}", i + 1, r.len())));
                    }
                    field.check_vector(r)?;
                    if !cdual.contains(field, r) {
                        return Err(Error::BadReps(format!(
                            "row {} is not in the symplectic dual of C",
                            i + 1
                        )));
                    }
                }
                let span = Subspace::from_rows(field, m, cmax.rows().iter().chain(&reps).cloned())?;
                if span.dim() != n + k {
                    return Err(Error::BadReps("dependent modulo C_max".into()));
                }
                (reps, Provenance::Supplied)
            }
            None => (cdual.complement_reps(field, &cmax)?, Provenance::Default),
        };

        Ok(Scheme {
            field: field.clone(),
            n,
            k,
            c,
            cmax,
            cdual,
            reps,
            cmax_provenance,
            reps_provenance,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> &Subspace {
        &self.c
    }

    pub fn cmax(&self) -> &Subspace {
        &self.cmax
    }

    pub fn cdual(&self) -> &Subspace {
        &self.cdual
    }

    pub fn reps(&self) -> &[Vec<Felt>] {
        &self.reps
    }

    pub fn cmax_provenance(&self) -> Provenance {
        self.cmax_provenance
    }

    pub fn reps_provenance(&self) -> Provenance {
        self.reps_provenance
    }

    /// `k = 0`: the scheme shares nothing and every set is trivially both
    /// qualified and forbidden.
    pub fn is_degenerate(&self) -> bool {
        self.k == 0
    }

    /// A representative of the coset `f(m) = sum m_i v_i + C_max`.
    pub fn encode_coset(&self, secret: &[Felt]) -> Result<Vec<Felt>> {
        if secret.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "secret has {} symbols, k = {}",
                secret.len(),
                self.k
            )));
        }
        self.field.check_vector(secret)?;
        let mut v = vec![Felt::ZERO; 2 * self.n];
        for (&m, rep) in secret.iter().zip(&self.reps) {
            self.field.axpy(&mut v, m, rep);
        }
        Ok(v)
    }

    fn check_subset(&self, a: &SubsetA) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "subset over {} participants, scheme has n = {}",
                a.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// `dim (C_max cap F^A) - dim (C cap F^A)`.
    pub fn leaked_dim(&self, a: &SubsetA) -> Result<usize> {
        self.check_subset(a)?;
        let upper = restricted_dim(&self.field, &self.cmax, a)?;
        let lower = restricted_dim(&self.field, &self.c, a)?;
        Ok(upper - lower)
    }

    /// The same quantity computed on the projection side:
    /// `dim P_A(C^{perp_s}) - dim P_A(C_max)`.
    pub fn leaked_dim_by_projection(&self, a: &SubsetA) -> Result<usize> {
        self.check_subset(a)?;
        let upper = project_space(&self.field, &self.cdual, a)?.dim();
        let lower = project_space(&self.field, &self.cmax, a)?.dim();
        Ok(upper - lower)
    }

    fn status_of(&self, leaked: usize) -> Status {
        if leaked == 0 {
            Status::Forbidden
        } else if leaked == self.k {
            Status::Qualified
        } else {
            Status::Intermediate
        }
    }

    pub fn classify(&self, a: &SubsetA) -> Result<Classification> {
        let leaked_dim = self.leaked_dim(a)?;
        Ok(Classification {
            status: self.status_of(leaked_dim),
            leaked_dim,
            leaked_bits: leaked_dim as f64 * (self.field.q() as f64).log2(),
        })
    }

    /// Quantum-secret access structure: q-forbidden when
    /// `C^{perp_s} cap F^A = C cap F^A` and q-qualified when the same holds on
    /// the complement of `A`.
    pub fn classify_quantum(&self, a: &SubsetA) -> Result<QuantumStatus> {
        self.check_subset(a)?;
        let f = &self.field;
        let flat = |s: &SubsetA| -> Result<bool> {
            Ok(restricted_dim(f, &self.cdual, s)? == restricted_dim(f, &self.c, s)?)
        };
        if flat(a)? {
            Ok(QuantumStatus::QForbidden)
        } else if flat(&a.complement())? {
            Ok(QuantumStatus::QQualified)
        } else {
            Ok(QuantumStatus::QIntermediate)
        }
    }

    /// Information held by `A`, in bits: `l(A) log2 q`.
    pub fn info_bits(&self, a: &SubsetA) -> Result<f64> {
        Ok(self.classify(a)?.leaked_bits)
    }

    /// `(q^l, q^(k-l))`: the number of distinct reduced states seen by `A`
    /// and how many secrets share each one.
    pub fn count_density_classes(&self, a: &SubsetA) -> Result<(BigUint, BigUint)> {
        let l = self.leaked_dim(a)?;
        let q = BigUint::from(self.field.q());
        Ok((q.pow(l as u32), q.pow((self.k - l) as u32)))
    }

    /// Minimum and maximum leaked dimension over all subsets of each size.
    pub fn leak_by_size(&self, limits: &Limits) -> Result<Vec<LeakRange>> {
        limits.check_subsets(self.n, "leak profile")?;
        let n = self.n;
        let cmax_cols = |mask: u64| outside(n, mask);
        let init = || vec![(usize::MAX, 0usize); n + 1];
        let per_size = (0..1u64 << n)
            .into_par_iter()
            .fold(init, |mut acc, mask| {
                let cols = cmax_cols(mask);
                let l = self.cmax.dim_with_zero_columns(&self.field, &cols)
                    - self.c.dim_with_zero_columns(&self.field, &cols);
                let s = mask.count_ones() as usize;
                acc[s].0 = acc[s].0.min(l);
                acc[s].1 = acc[s].1.max(l);
                acc
            })
            .reduce(init, |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.0 = x.0.min(y.0);
                    x.1 = x.1.max(y.1);
                }
                a
            });
        Ok(per_size
            .into_iter()
            .enumerate()
            .map(|(size, (min, max))| LeakRange { size, min_leaked: min, max_leaked: max })
            .collect())
    }

    /// Exact privacy and reconstruction thresholds `t_i`, `r_i` for `i = 1..k`.
    pub fn exact_thresholds(&self, limits: &Limits) -> Result<Thresholds> {
        let profile = self.leak_by_size(limits)?;
        Ok(thresholds_from_profile(self.k, &profile))
    }

    /// Classification of every subset plus the threshold and distance summaries.
    pub fn full_access_report(&self, limits: &Limits) -> Result<AccessReport> {
        limits.check_subsets(self.n, "access report")?;
        let rows = if self.n as u32 <= limits.max_table_log2 {
            let mut rows: Vec<SubsetRow> = all_subsets(self.n)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|a| -> Result<SubsetRow> {
                    let c = self.classify(a)?;
                    Ok(SubsetRow {
                        subset: a.one_based(),
                        status: c.status,
                        leaked_dim: c.leaked_dim,
                        leaked_bits: c.leaked_bits,
                        quantum_status: self.classify_quantum(a)?,
                    })
                })
                .collect::<Result<_>>()?;
            rows.sort_by(|x, y| (x.subset.len(), &x.subset).cmp(&(y.subset.len(), &y.subset)));
            Some(rows)
        } else {
            None
        };
        let leak_by_size = self.leak_by_size(limits)?;
        let thresholds = thresholds_from_profile(self.k, &leak_by_size);
        let distances = if self.is_degenerate() {
            None
        } else {
            Some(weights::distance_profile(self, limits)?)
        };
        Ok(AccessReport {
            n: self.n,
            k: self.k,
            q: self.field.q(),
            degenerate: self.is_degenerate(),
            subsets: rows,
            leak_by_size,
            thresholds,
            distances,
        })
    }
}

pub(crate) fn outside(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 0).flat_map(|i| [i, i + n]).collect()
}

fn thresholds_from_profile(k: usize, profile: &[LeakRange]) -> Thresholds {
    let n = profile.len() - 1;
    let t = (1..=k)
        .map(|i| {
            // Largest t such that every set of size <= t leaks fewer than i symbols.
            let mut t = 0;
            while t < n && profile[..=t + 1].iter().all(|r| r.max_leaked < i) {
                t += 1;
            }
            t
        })
        .collect();
    let r = (1..=k)
        .map(|i| {
            // Smallest r such that every set of size >= r leaks at least i symbols.
            (0..=n).find(|&r| profile[r..].iter().all(|x| x.min_leaked >= i)).unwrap_or(n)
        })
        .collect();
    Thresholds { t, r }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakRange {
    pub size: usize,
    pub min_leaked: usize,
    pub max_leaked: usize,
}

/// `t[i-1] = t_i` and `r[i-1] = r_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub t: Vec<usize>,
    pub r: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetRow {
    pub subset: Vec<usize>,
    pub status: Status,
    pub leaked_dim: usize,
    pub leaked_bits: f64,
    pub quantum_status: QuantumStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccessReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub degenerate: bool,
    /// Absent when `2^n` exceeds the table cap.
    pub subsets: Option<Vec<SubsetRow>>,
    pub leak_by_size: Vec<LeakRange>,
    pub thresholds: Thresholds,
    pub distances: Option<DistanceProfile>,
}
