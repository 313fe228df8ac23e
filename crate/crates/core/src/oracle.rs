//! Dense state-vector simulator used as ground truth for the algebraic
//! classification.
//!
//! Conventions: basis states are indexed big-endian, `idx = sum u_i p^(N-1-i)`;
//! `X(a)|u> = |u + a>` and `Z(b)|u> = w^<b,u> |u>` with `w = exp(-2 pi i / p)`,
//! composed as `X(a) Z(b)`. With this choice
//! `P(u) P(v) = exp(2 pi i <u,v>_s / p) P(v) P(u)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gf::{descend, descend_space, Felt, Field};
use crate::limits::Limits;
use crate::linalg::Subspace;
use crate::scheme::{Scheme, Status};
use crate::symplectic::{all_subsets, SubsetA};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Frobenius tolerance for equality and orthogonality of density matrices.
pub const DENSITY_TOL: f64 = 1e-9;
const FINGERPRINT_TOL: f64 = 1e-7;

fn roots(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|t| match t {
            0 => ONE,
            t if 2 * t == p => Complex64::new(-1.0, 0.0),
            t => Complex64::from_polar(1.0, -2.0 * PI * t as f64 / p as f64),
        })
        .collect()
}

fn check_dim(p: u32, n: usize, limits: &Limits) -> Result<usize> {
    let dim = (p as u64).checked_pow(n as u32).filter(|&d| d <= limits.max_oracle_dim);
    dim.map(|d| d as usize).ok_or_else(|| Error::TooLarge {
        what: "state space".into(),
        needed: format!("{p}^{n} amplitudes"),
        limit: limits.max_oracle_dim.to_string(),
    })
}

fn digits(p: u32, n: usize, mut idx: usize) -> Vec<u32> {
    let mut d = vec![0u32; n];
    for slot in d.iter_mut().rev() {
        *slot = (idx % p as usize) as u32;
        idx /= p as usize;
    }
    d
}

fn index(p: u32, d: &[u32]) -> usize {
    d.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        DenseOperator { dim, entries }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        DenseOperator { dim: d, entries }
    }

    pub fn scale(&self, c: Complex64) -> DenseOperator {
        DenseOperator { dim: self.dim, entries: self.entries.iter().map(|&x| x * c).collect() }
    }

    pub fn adjoint(&self) -> DenseOperator {
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        DenseOperator { dim: d, entries }
    }

    pub fn frobenius_distance(&self, other: &DenseOperator) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entries[i * self.dim + j] * v[j]).sum())
            .collect()
    }
}

/// `X(a) Z(b)` on `n` qudits of prime dimension `p`, for `v = (a | b)`.
pub fn pauli_op(field: &Field, v: &[Felt], limits: &Limits) -> Result<DenseOperator> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField(field.q()));
    }
    if !v.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!("odd length {}", v.len())));
    }
    field.check_vector(v)?;
    let n = v.len() / 2;
    let p = field.p();
    let dim = check_dim(p, n, limits)?;
    let w = roots(p);
    let mut op = DenseOperator { dim, entries: vec![ZERO; dim * dim] };
    for col in 0..dim {
        let u = digits(p, n, col);
        let (row, phase) = pauli_action(p, v, &u);
        op.entries[index(p, &row) * dim + col] = w[phase as usize];
    }
    Ok(op)
}

/// Image basis state and phase exponent of `X(a) Z(b) |u>`.
fn pauli_action(p: u32, v: &[Felt], u: &[u32]) -> (Vec<u32>, u32) {
    let n = u.len();
    let phase = (0..n).map(|i| v[n + i].0 * u[i]).sum::<u32>() % p;
    let row = (0..n).map(|i| (u[i] + v[i].0) % p).collect();
    (row, phase)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }
}

/// Applies `X(a) Z(b)` (times `scale`) to a state.
fn apply_pauli(p: u32, n: usize, v: &[Felt], scale: Complex64, psi: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; psi.len()];
    for (idx, &amp) in psi.iter().enumerate() {
        if amp == ZERO {
            continue;
        }
        let u = digits(p, n, idx);
        let (row, phase) = pauli_action(p, v, &u);
        out[index(p, &row)] = scale * w[phase as usize] * amp;
    }
    out
}

/// The joint `+1` eigenvector of the Paulis of a Lagrangian `C_max` over `F_p`,
/// with its first nonzero amplitude real and positive. For `p = 2` each
/// generator with odd `<a,b>` is multiplied by `i` so that it squares to `I`.
pub fn stabilizer_state(field: &Field, cmax: &Subspace, limits: &Limits) -> Result<StateVector> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField(field.q()));
    }
    let m = cmax.ambient_dim();
    if !m.is_multiple_of(2) || 2 * cmax.dim() != m {
        return Err(Error::BadLagrangian(format!("dimension {} in F^{m}", cmax.dim())));
    }
    let n = m / 2;
    let p = field.p();
    let dim = check_dim(p, n, limits)?;
    let w = roots(p);
    // A fixed generic start vector has nonzero overlap with the target.
    let mut psi: Vec<Complex64> = (0..dim)
        .map(|i| Complex64::new(1.0 + (i as f64 * 0.731).sin(), (i as f64 * 1.379).cos()))
        .collect();
    for g in cmax.rows() {
        let ab: u32 = (0..n).map(|i| g[i].0 * g[n + i].0).sum();
        let scale = if p == 2 && ab % 2 == 1 { Complex64::new(0.0, 1.0) } else { ONE };
        let mut acc = psi.clone();
        let mut power = psi.clone();
        for _ in 1..p {
            power = apply_pauli(p, n, g, scale, &power, &w);
            for (a, b) in acc.iter_mut().zip(&power) {
                *a += b;
            }
        }
        psi = acc.into_iter().map(|x| x / p as f64).collect();
    }
    let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-8 {
        return Err(Error::EmptyEigenspace);
    }
    let lead = psi.iter().find(|a| a.norm() > 1e-8 * norm).copied().ok_or(Error::EmptyEigenspace)?;
    let phase = lead.conj() / lead.norm();
    Ok(StateVector { amplitudes: psi.into_iter().map(|a| a * phase / norm).collect() })
}

/// `Tr_{A-bar} |psi><psi|` for a set `A` of qudits.
pub fn reduced_density(psi: &StateVector, p: u32, subset: &SubsetA) -> Result<DensityMatrix> {
    let layout = SplitLayout::new(p, subset, psi.amplitudes.len())?;
    let mat = layout.reshape(&psi.amplitudes);
    Ok(layout.density(&mat))
}

/// Index maps for viewing a state as a `d_A x d_Abar` matrix.
struct SplitLayout {
    rows: usize,
    cols: usize,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
}

impl SplitLayout {
    fn new(p: u32, subset: &SubsetA, dim: usize) -> Result<Self> {
        let n = subset.n();
        if (p as u64).checked_pow(n as u32) != Some(dim as u64) {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {dim} is not {p}^{n}"
            )));
        }
        let inside = subset.members();
        let outside = subset.complement().members();
        let mut row_of = vec![0; dim];
        let mut col_of = vec![0; dim];
        for idx in 0..dim {
            let d = digits(p, n, idx);
            row_of[idx] = inside.iter().fold(0, |acc, &i| acc * p as usize + d[i] as usize);
            col_of[idx] = outside.iter().fold(0, |acc, &i| acc * p as usize + d[i] as usize);
        }
        Ok(SplitLayout {
            rows: (p as usize).pow(inside.len() as u32),
            cols: (p as usize).pow(outside.len() as u32),
            row_of,
            col_of,
        })
    }

    fn reshape(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut m = vec![ZERO; self.rows * self.cols];
        for (idx, &a) in amps.iter().enumerate() {
            m[self.row_of[idx] * self.cols + self.col_of[idx]] = a;
        }
        m
    }

    fn density(&self, mat: &[Complex64]) -> DensityMatrix {
        let (r, c) = (self.rows, self.cols);
        let mut entries = vec![ZERO; r * r];
        for i in 0..r {
            for j in 0..r {
                entries[i * r + j] = (0..c).map(|y| mat[i * c + y] * mat[j * c + y].conj()).sum();
            }
        }
        DensityMatrix { dim: r, entries }
    }

    /// Diagonal of the reduced density matrix.
    fn fingerprint(&self, mat: &[Complex64]) -> Vec<f64> {
        let c = self.cols;
        (0..self.rows).map(|i| mat[i * c..(i + 1) * c].iter().map(|a| a.norm_sqr()).sum()).collect()
    }

    /// `|| rho_1 - rho_2 ||_F`, streamed entry by entry.
    fn density_distance(&self, m1: &[Complex64], m2: &[Complex64]) -> f64 {
        let (r, c) = (self.rows, self.cols);
        let mut total = 0.0;
        for i in 0..r {
            for j in 0..r {
                let e: Complex64 = (0..c)
                    .map(|y| m1[i * c + y] * m1[j * c + y].conj() - m2[i * c + y] * m2[j * c + y].conj())
                    .sum();
                total += e.norm_sqr();
            }
        }
        total.sqrt()
    }

    /// `|| Psi_1^dagger Psi_2 ||_F`; zero exactly when `rho_1 rho_2 = 0`.
    fn overlap(&self, m1: &[Complex64], m2: &[Complex64]) -> f64 {
        let (r, c) = (self.rows, self.cols);
        let mut total = 0.0;
        for y in 0..c {
            for z in 0..c {
                let e: Complex64 = (0..r).map(|x| m1[x * c + y].conj() * m2[x * c + z]).sum();
                total += e.norm_sqr();
            }
        }
        total.sqrt()
    }
}

/// A scheme lowered to prime-field qudits, with all encoded states prepared.
#[derive(Clone, Debug)]
pub struct Simulator {
    p: u32,
    mu: usize,
    n: usize,
    k: usize,
    qudits: usize,
    phi: StateVector,
    encoded: Vec<StateVector>,
    cmax: Subspace,
    reps: Vec<Vec<Felt>>,
}

/// Largest number of stored amplitudes across all encoded states.
const MAX_ENCODED_AMPLITUDES: u64 = 1 << 22;

impl Simulator {
    /// Descends extension-field schemes to `F_p` first: share `i` becomes
    /// qudits `i*mu .. i*mu + mu`.
    pub fn new(scheme: &Scheme, limits: &Limits) -> Result<Self> {
        let field = scheme.field();
        let p = field.p();
        let mu = field.mu() as usize;
        let qudits = scheme.n() * mu;
        let dim = check_dim(p, qudits, limits)?;
        let kp = scheme.k() * mu;
        let secrets = (p as u64).checked_pow(kp as u32);
        if secrets.and_then(|s| s.checked_mul(dim as u64)).is_none_or(|t| t > MAX_ENCODED_AMPLITUDES) {
            return Err(Error::TooLarge {
                what: "encoded states".into(),
                needed: format!("{p}^{kp} states of dimension {dim}"),
                limit: format!("{MAX_ENCODED_AMPLITUDES} amplitudes"),
            });
        }
        let prime = Field::prime(p)?;
        let (cmax, reps) = if mu == 1 {
            (scheme.cmax().clone(), scheme.reps().to_vec())
        } else {
            let cmax = descend_space(field, scheme.cmax())?;
            let mut reps = Vec::with_capacity(kp);
            for r in scheme.reps() {
                for j in 0..mu as u32 {
                    reps.push(descend(field, &field.scale(field.basis_element(j), r))?);
                }
            }
            (cmax, reps)
        };
        let phi = stabilizer_state(&prime, &cmax, limits)?;
        let w = roots(p);
        let encoded = (0..secrets.unwrap_or(1))
            .into_par_iter()
            .map(|s| {
                let m = digits(p, kp, s as usize);
                let v = combine(&prime, &m, &reps, 2 * qudits);
                StateVector { amplitudes: apply_pauli(p, qudits, &v, ONE, &phi.amplitudes, &w) }
            })
            .collect();
        Ok(Simulator { p, mu, n: scheme.n(), k: scheme.k(), qudits, phi, encoded, cmax, reps })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn qudits(&self) -> usize {
        self.qudits
    }

    pub fn stabilizer_state(&self) -> &StateVector {
        &self.phi
    }

    /// The prime-field Lagrangian actually simulated.
    pub fn cmax(&self) -> &Subspace {
        &self.cmax
    }

    /// The prime-field coset representatives actually simulated.
    pub fn reps(&self) -> &[Vec<Felt>] {
        &self.reps
    }

    /// Encoded states in big-endian secret order over `F_p^{k mu}`.
    pub fn encoded_states(&self) -> &[StateVector] {
        &self.encoded
    }

    /// `X(a) Z(b) |phi>` for `(a|b) = sum m_i v_i`, with `m` over `F_p^{k mu}`.
    pub fn encode(&self, m: &[Felt]) -> Result<&StateVector> {
        if m.len() != self.k * self.mu || m.iter().any(|x| x.0 >= self.p) {
            return Err(Error::DimensionMismatch(format!(
                "secret must have {} symbols in [0, {})",
                self.k * self.mu,
                self.p
            )));
        }
        let digits: Vec<u32> = m.iter().map(|x| x.0).collect();
        Ok(&self.encoded[index(self.p, &digits)])
    }

    fn qudit_subset(&self, a: &SubsetA) -> Result<SubsetA> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "subset over {} participants, scheme has n = {}",
                a.n(),
                self.n
            )));
        }
        let members: Vec<usize> =
            a.members().iter().flat_map(|&i| (0..self.mu).map(move |j| i * self.mu + j)).collect();
        SubsetA::new(self.qudits, &members)
    }

    /// Reduced state of share set `A` for an encoded secret index.
    pub fn reduced_density(&self, secret: usize, a: &SubsetA) -> Result<DensityMatrix> {
        let qa = self.qudit_subset(a)?;
        let state = self.encoded.get(secret).ok_or_else(|| Error::OutOfRange(format!("secret {secret}")))?;
        reduced_density(state, self.p, &qa)
    }

    /// Groups secrets by their reduced state on `A`.
    pub fn density_classes(&self, a: &SubsetA) -> Result<DensityClasses> {
        let qa = self.qudit_subset(a)?;
        let layout = SplitLayout::new(self.p, &qa, self.encoded[0].amplitudes.len())?;
        let mut reps: Vec<(Vec<f64>, Vec<Complex64>)> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (s, state) in self.encoded.iter().enumerate() {
            let mat = layout.reshape(&state.amplitudes);
            let fp = layout.fingerprint(&mat);
            let hit = reps.iter().position(|(rfp, rmat)| {
                rfp.iter().zip(&fp).all(|(x, y)| (x - y).abs() < FINGERPRINT_TOL)
                    && layout.density_distance(rmat, &mat) < DENSITY_TOL
            });
            match hit {
                Some(c) => members[c].push(s),
                None => {
                    reps.push((fp, mat));
                    members.push(vec![s]);
                }
            }
        }
        let mut orthogonal = true;
        'outer: for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if layout.overlap(&reps[i].1, &reps[j].1) >= DENSITY_TOL {
                    orthogonal = false;
                    break 'outer;
                }
            }
        }
        Ok(DensityClasses { members, mutually_orthogonal: orthogonal })
    }

    /// Classification straight from the reduced density matrices.
    pub fn classify_by_density(&self, a: &SubsetA) -> Result<DensityClassification> {
        let classes = self.density_classes(a)?;
        let count = classes.members.len();
        let total = self.encoded.len();
        let leaked_p = (count as f64).log(self.p as f64).round() as usize;
        let status = if count == 1 {
            Status::Forbidden
        } else if count == total && classes.mutually_orthogonal {
            Status::Qualified
        } else {
            Status::Intermediate
        };
        let fibers: Vec<usize> = classes.members.iter().map(Vec::len).collect();
        Ok(DensityClassification {
            status,
            leaked_dim: leaked_p / self.mu,
            num_classes: count,
            fiber_sizes_equal: fibers.iter().all(|&f| f == fibers[0]),
            fiber_size: fibers[0],
            mutually_orthogonal: classes.mutually_orthogonal,
            holevo_bits: (count as f64).log2(),
        })
    }

    pub fn holevo_bits(&self, a: &SubsetA) -> Result<f64> {
        Ok(self.classify_by_density(a)?.holevo_bits)
    }
}

fn combine(field: &Field, m: &[u32], reps: &[Vec<Felt>], len: usize) -> Vec<Felt> {
    let mut v = vec![Felt::ZERO; len];
    for (&c, r) in m.iter().zip(reps) {
        field.axpy(&mut v, Felt(c), r);
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityClasses {
    /// Secret indices per distinct reduced state, in order of first appearance.
    pub members: Vec<Vec<usize>>,
    pub mutually_orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityClassification {
    pub status: Status,
    pub leaked_dim: usize,
    pub num_classes: usize,
    pub fiber_size: usize,
    pub fiber_sizes_equal: bool,
    pub mutually_orthogonal: bool,
    pub holevo_bits: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub subset: Vec<usize>,
    pub algebraic_status: Status,
    pub algebraic_leaked_dim: usize,
    pub density_status: Status,
    pub density_leaked_dim: usize,
    pub num_classes: usize,
    pub holevo_bits: f64,
    pub agree: bool,
}

/// Algebraic versus density-matrix classification for every subset.
pub fn compare_all(scheme: &Scheme, limits: &Limits) -> Result<Vec<OracleRow>> {
    limits.check_subsets(scheme.n(), "oracle comparison")?;
    let sim = Simulator::new(scheme, limits)?;
    let subsets: Vec<SubsetA> = all_subsets(scheme.n()).collect();
    subsets
        .par_iter()
        .map(|a| {
            let alg = scheme.classify(a)?;
            let den = sim.classify_by_density(a)?;
            Ok(OracleRow {
                subset: a.one_based(),
                algebraic_status: alg.status,
                algebraic_leaked_dim: alg.leaked_dim,
                density_status: den.status,
                density_leaked_dim: den.leaked_dim,
                num_classes: den.num_classes,
                holevo_bits: den.holevo_bits,
                agree: alg.status == den.status && alg.leaked_dim == den.leaked_dim,
            })
        })
        .collect()
}
