//! Coset distances and relative generalized weights.
//!
//! For nested spaces `V2 <= V1` the gap of a support set `A` is
//! `dim(V1 cap F^A) - dim(V2 cap F^A)`. It is monotone in `A`, so the
//! `i`-th relative weight is the first subset size whose largest gap reaches `i`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gf::Field;
use crate::limits::Limits;
use crate::linalg::Subspace;
use crate::scheme::{Scheme, Status};
use crate::symplectic::{all_subsets, subsets_of_size, swt_concat, SubsetA};
use crate::{Error, Result};

/// How support positions map to coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Position `i` owns columns `i` and `n + i` of `F^{2n}`.
    Symplectic,
    /// Position `i` owns column `i`.
    Hamming,
}

impl Layout {
    fn positions(self, ambient: usize) -> Result<usize> {
        match self {
            Layout::Symplectic if ambient.is_multiple_of(2) => Ok(ambient / 2),
            Layout::Symplectic => {
                Err(Error::DimensionMismatch(format!("ambient dimension {ambient} is odd")))
            }
            Layout::Hamming => Ok(ambient),
        }
    }

    fn outside(self, n: usize, mask: u64) -> Vec<usize> {
        let out = (0..n).filter(move |&i| mask >> i & 1 == 0);
        match self {
            Layout::Symplectic => out.flat_map(|i| [i, i + n]).collect(),
            Layout::Hamming => out.collect(),
        }
    }

    fn weight(self, v: &[crate::Felt]) -> usize {
        match self {
            Layout::Symplectic => swt_concat(v),
            Layout::Hamming => v.iter().filter(|x| !x.is_zero()).count(),
        }
    }
}

fn check_pair(field: &Field, v1: &Subspace, v2: &Subspace) -> Result<()> {
    if v1.ambient_dim() != v2.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            v1.ambient_dim(),
            v2.ambient_dim()
        )));
    }
    if !v2.is_subspace_of(field, v1) {
        return Err(Error::NotASubspace("V2 is not contained in V1".into()));
    }
    Ok(())
}

fn gap(field: &Field, v1: &Subspace, v2: &Subspace, layout: Layout, n: usize, mask: u64) -> usize {
    let cols = layout.outside(n, mask);
    v1.dim_with_zero_columns(field, &cols) - v2.dim_with_zero_columns(field, &cols)
}

/// Largest gap among all subsets of each size `0..=n`.
pub fn gap_profile(
    field: &Field,
    v1: &Subspace,
    v2: &Subspace,
    layout: Layout,
    limits: &Limits,
) -> Result<Vec<usize>> {
    check_pair(field, v1, v2)?;
    let n = layout.positions(v1.ambient_dim())?;
    limits.check_subsets(n, "gap profile")?;
    let init = || vec![0usize; n + 1];
    Ok((0..1u64 << n)
        .into_par_iter()
        .fold(init, |mut acc, mask| {
            let s = mask.count_ones() as usize;
            acc[s] = acc[s].max(gap(field, v1, v2, layout, n, mask));
            acc
        })
        .reduce(init, |a, b| a.into_iter().zip(b).map(|(x, y)| x.max(y)).collect()))
}

/// Smallest `|A|` with gap at least `i`, scanning sizes upward.
pub fn min_support(
    field: &Field,
    v1: &Subspace,
    v2: &Subspace,
    i: usize,
    layout: Layout,
    limits: &Limits,
) -> Result<usize> {
    check_pair(field, v1, v2)?;
    let codim = v1.dim() - v2.dim();
    if i == 0 || i > codim {
        return Err(Error::OutOfRange(format!("index {i} outside 1..={codim}")));
    }
    let n = layout.positions(v1.ambient_dim())?;
    limits.check_subsets(n, "support search")?;
    for size in 0..=n {
        let masks: Vec<u64> = subsets_of_size(n, size).map(|a| a.mask()).collect();
        if masks.par_iter().any(|&m| gap(field, v1, v2, layout, n, m) >= i) {
            return Ok(size);
        }
    }
    unreachable!("the full support has gap dim V1 - dim V2")
}

/// `d_s(V1, V2) = min swt(v)` over `v in V1 \ V2`, by support search.
pub fn coset_distance(field: &Field, v1: &Subspace, v2: &Subspace, limits: &Limits) -> Result<usize> {
    check_pair(field, v1, v2)?;
    if v1.dim() == v2.dim() {
        return Err(Error::EqualSpaces);
    }
    min_support(field, v1, v2, 1, Layout::Symplectic, limits)
}

/// `d_s(V1, V2)` by enumerating every vector of `V1`.
pub fn coset_distance_by_enumeration(
    field: &Field,
    v1: &Subspace,
    v2: &Subspace,
    limits: &Limits,
) -> Result<usize> {
    check_pair(field, v1, v2)?;
    if v1.dim() == v2.dim() {
        return Err(Error::EqualSpaces);
    }
    Layout::Symplectic.positions(v1.ambient_dim())?;
    limits.check_vectors(field.q(), v1.dim(), "coset distance enumeration")?;
    Ok(min_weight_outside(field, v1, v2, Layout::Symplectic))
}

/// Hamming analogue of [`coset_distance_by_enumeration`].
pub fn hamming_coset_distance_by_enumeration(
    field: &Field,
    v1: &Subspace,
    v2: &Subspace,
    limits: &Limits,
) -> Result<usize> {
    check_pair(field, v1, v2)?;
    if v1.dim() == v2.dim() {
        return Err(Error::EqualSpaces);
    }
    limits.check_vectors(field.q(), v1.dim(), "coset distance enumeration")?;
    Ok(min_weight_outside(field, v1, v2, Layout::Hamming))
}

fn min_weight_outside(field: &Field, v1: &Subspace, v2: &Subspace, layout: Layout) -> usize {
    v1.vectors(field)
        .filter(|v| !v2.contains(field, v))
        .map(|v| layout.weight(&v))
        .min()
        .expect("V1 is strictly larger than V2")
}

/// Relative generalized symplectic weight `d_s^i(V1, V2)`.
pub fn rgsw(field: &Field, v1: &Subspace, v2: &Subspace, i: usize, limits: &Limits) -> Result<usize> {
    min_support(field, v1, v2, i, Layout::Symplectic, limits)
}

/// Relative generalized Hamming weight `d_H^j(V1, V2)`; `V2 = {0}` gives the
/// plain generalized Hamming weight.
pub fn hamming_rghw(
    field: &Field,
    v1: &Subspace,
    v2: &Subspace,
    j: usize,
    limits: &Limits,
) -> Result<usize> {
    min_support(field, v1, v2, j, Layout::Hamming, limits)
}

/// `d^1, ..., d^codim` from a single gap-profile sweep.
pub fn weight_hierarchy(
    field: &Field,
    v1: &Subspace,
    v2: &Subspace,
    layout: Layout,
    limits: &Limits,
) -> Result<Vec<usize>> {
    let profile = gap_profile(field, v1, v2, layout, limits)?;
    let codim = v1.dim() - v2.dim();
    Ok((1..=codim)
        .map(|i| profile.iter().position(|&g| g >= i).expect("full support reaches codim"))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceProfile {
    /// `d_s(C_max, C)`.
    pub ds_t: usize,
    /// `d_s(C^{perp_s}, C_max)`.
    pub ds_r: usize,
    /// `d_s^i(C_max, C)` for `i = 1..=k`.
    pub dsi_t: Vec<usize>,
    /// `d_s^i(C^{perp_s}, C_max)` for `i = 1..=k`.
    pub dsi_r: Vec<usize>,
}

pub fn distance_profile(s: &Scheme, limits: &Limits) -> Result<DistanceProfile> {
    if s.is_degenerate() {
        return Err(Error::EqualSpaces);
    }
    let f = s.field();
    let dsi_t = weight_hierarchy(f, s.cmax(), s.c(), Layout::Symplectic, limits)?;
    let dsi_r = weight_hierarchy(f, s.cdual(), s.cmax(), Layout::Symplectic, limits)?;
    Ok(DistanceProfile { ds_t: dsi_t[0], ds_r: dsi_r[0], dsi_t, dsi_r })
}

/// Outcome of checking that small sets are forbidden and large sets qualified
/// according to the two coset distances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBoundReport {
    pub ds_t: usize,
    pub ds_r: usize,
    /// Every set of at most this size must be forbidden.
    pub forbidden_up_to: usize,
    /// Every set of at least this size must be qualified.
    pub qualified_from: usize,
    pub passed: bool,
    /// First violating subset (1-based labels).
    pub counterexample: Option<Vec<usize>>,
}

pub fn check_distance_bounds(s: &Scheme, limits: &Limits) -> Result<DistanceBoundReport> {
    if s.is_degenerate() {
        return Err(Error::EqualSpaces);
    }
    let n = s.n();
    limits.check_subsets(n, "distance bound check")?;
    let ds_t = coset_distance(s.field(), s.cmax(), s.c(), limits)?;
    let ds_r = coset_distance(s.field(), s.cdual(), s.cmax(), limits)?;
    let forbidden_up_to = ds_t - 1;
    let qualified_from = n + 1 - ds_r;
    let mut counterexample = None;
    for a in all_subsets(n) {
        let status = s.classify(&a)?.status;
        let bad = (a.len() <= forbidden_up_to && status != Status::Forbidden)
            || (a.len() >= qualified_from && status != Status::Qualified);
        if bad {
            counterexample = Some(a.one_based());
            break;
        }
    }
    Ok(DistanceBoundReport {
        ds_t,
        ds_r,
        forbidden_up_to,
        qualified_from,
        passed: counterexample.is_none(),
        counterexample,
    })
}

/// Exact thresholds against the weight-hierarchy bounds
/// `t_i >= d_s^i(C_max, C) - 1` and `r_{k+1-i} <= n - d_s^i(C^{perp_s}, C_max) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdBoundReport {
    pub t: Vec<usize>,
    pub r: Vec<usize>,
    pub distances: DistanceProfile,
    /// `t_i - (d_s^i(C_max, C) - 1)`.
    pub t_margins: Vec<i64>,
    /// `(n - d_s^i(C^{perp_s}, C_max) + 1) - r_{k+1-i}`.
    pub r_margins: Vec<i64>,
    pub passed: bool,
}

pub fn check_threshold_bounds(s: &Scheme, limits: &Limits) -> Result<ThresholdBoundReport> {
    let th = s.exact_thresholds(limits)?;
    let d = distance_profile(s, limits)?;
    let (n, k) = (s.n() as i64, s.k());
    let t_margins: Vec<i64> =
        (0..k).map(|i| th.t[i] as i64 - (d.dsi_t[i] as i64 - 1)).collect();
    let r_margins: Vec<i64> =
        (0..k).map(|i| (n - d.dsi_r[i] as i64 + 1) - th.r[k - 1 - i] as i64).collect();
    let passed = t_margins.iter().chain(&r_margins).all(|&m| m >= 0);
    Ok(ThresholdBoundReport { t: th.t, r: th.r, distances: d, t_margins, r_margins, passed })
}

/// A smallest support set whose gap reaches `i`.
pub fn support_witness(
    field: &Field,
    v1: &Subspace,
    v2: &Subspace,
    i: usize,
    limits: &Limits,
) -> Result<SubsetA> {
    let size = rgsw(field, v1, v2, i, limits)?;
    let n = v1.ambient_dim() / 2;
    Ok(subsets_of_size(n, size)
        .find(|a| gap(field, v1, v2, Layout::Symplectic, n, a.mask()) >= i)
        .expect("rgsw found a subset of this size"))
}
