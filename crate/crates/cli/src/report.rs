//! JSON report bodies and their plain-text renderings.

use serde::Serialize;
use stabshare_core::gv::{GvAsymptotic, GvQuery};
use stabshare_core::oracle::OracleRow;
use stabshare_core::scheme::{LeakRange, Provenance, SubsetRow};
use stabshare_core::weights::{DistanceBoundReport, ThresholdBoundReport};
use stabshare_core::{DistanceProfile, Felt, QuantumStatus, Scheme, Status, Thresholds};

use crate::codefile::format_row;

pub const TOOL: &str = "stabshare";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fields shared by every JSON report.
#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &'static str, seed: Option<u64>, body: T) -> Self {
        Envelope { tool: TOOL, version: VERSION, command, seed, body }
    }
}

#[derive(Serialize)]
pub struct SchemeEcho {
    pub p: u32,
    pub mu: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub n: usize,
    pub k: usize,
    pub degenerate: bool,
    pub c: Vec<Vec<Felt>>,
    pub cmax: Vec<Vec<Felt>>,
    pub reps: Vec<Vec<Felt>>,
    pub cmax_source: Provenance,
    pub reps_source: Provenance,
}

impl SchemeEcho {
    pub fn of(s: &Scheme) -> Self {
        let spec = s.field().spec();
        SchemeEcho {
            p: spec.p,
            mu: spec.mu,
            q: s.field().q(),
            modulus: spec.modulus.clone(),
            n: s.n(),
            k: s.k(),
            degenerate: s.is_degenerate(),
            c: s.c().rows().to_vec(),
            cmax: s.cmax().rows().to_vec(),
            reps: s.reps().to_vec(),
            cmax_source: s.cmax_provenance(),
            reps_source: s.reps_provenance(),
        }
    }
}

#[derive(Serialize)]
pub struct Bounds {
    pub distance: Option<DistanceBoundReport>,
    pub threshold: Option<ThresholdBoundReport>,
}

impl Bounds {
    pub fn passed(&self) -> bool {
        self.distance.as_ref().is_none_or(|d| d.passed) && self.threshold.as_ref().is_none_or(|t| t.passed)
    }
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub scheme: SchemeEcho,
    pub subsets: Option<Vec<SubsetRow>>,
    pub leak_by_size: Vec<LeakRange>,
    pub thresholds: Thresholds,
    pub distances: Option<DistanceProfile>,
    pub bounds: Bounds,
    pub oracle: Option<Vec<OracleRow>>,
}

#[derive(Serialize)]
pub struct DistancesReport {
    pub scheme: SchemeEcho,
    pub max_i: usize,
    pub distances: DistanceProfile,
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub scheme: SchemeEcho,
    pub mismatches: usize,
    pub oracle: Vec<OracleRow>,
}

#[derive(Serialize)]
pub struct GvReport {
    pub query: GvQuery,
    pub holds: bool,
    pub lhs: String,
    pub lhs_reduced: String,
}

#[derive(Serialize)]
pub struct GvAsymReport {
    pub q: u32,
    pub rate: f64,
    pub tolerance: f64,
    #[serde(flatten)]
    pub result: GvAsymptotic,
}

#[derive(Serialize)]
pub struct WitnessReport {
    pub trial: u64,
    pub ds_t: usize,
    pub ds_r: usize,
    pub code_file: String,
}

#[derive(Serialize)]
pub struct SearchReport {
    pub query: GvQuery,
    pub trials: u64,
    pub witness: Option<WitnessReport>,
}

#[derive(Serialize)]
pub struct ConstructReport {
    pub scheme: SchemeEcho,
    pub code_file: String,
    pub output: Option<String>,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

pub fn status_label(s: Status) -> &'static str {
    match s {
        Status::Qualified => "qualified",
        Status::Forbidden => "forbidden",
        Status::Intermediate => "intermediate",
    }
}

pub fn quantum_label(s: QuantumStatus) -> &'static str {
    match s {
        QuantumStatus::QQualified => "q_qualified",
        QuantumStatus::QForbidden => "q_forbidden",
        QuantumStatus::QIntermediate => "q_intermediate",
    }
}

fn set_label(labels: &[usize]) -> String {
    let inner: Vec<String> = labels.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn list(xs: &[usize]) -> String {
    let inner: Vec<String> = xs.iter().map(usize::to_string).collect();
    format!("[{}]", inner.join(", "))
}

fn provenance_label(p: Provenance) -> &'static str {
    match p {
        Provenance::Supplied => "supplied",
        Provenance::Default => "default",
    }
}

pub fn render_scheme(e: &SchemeEcho) -> String {
    let mut out = format!(
        "scheme: q={} n={} k={} (C_max {}, reps {}){}\n",
        e.q,
        e.n,
        e.k,
        provenance_label(e.cmax_source),
        provenance_label(e.reps_source),
        if e.degenerate { ", degenerate" } else { "" }
    );
    for (name, rows) in [("C", &e.c), ("C_max", &e.cmax), ("reps", &e.reps)] {
        out += &format!("  {name}:\n");
        for r in rows.iter() {
            out += &format!("    {}\n", format_row(r));
        }
    }
    out
}

pub fn render_distances(d: &DistanceProfile) -> String {
    format!(
        "distances: d_s(C_max, C) = {}, d_s(C^perp, C_max) = {}\n  d_s^i(C_max, C) = {}\n  d_s^i(C^perp, C_max) = {}\n",
        d.ds_t,
        d.ds_r,
        list(&d.dsi_t),
        list(&d.dsi_r)
    )
}

pub fn render_analyze(r: &AnalyzeReport) -> String {
    let mut out = render_scheme(&r.scheme);
    if let Some(rows) = &r.subsets {
        out += &format!("{:<16} {:<13} {:>6} {:>8}  {}\n", "subset", "status", "leaked", "bits", "quantum");
        for row in rows {
            out += &format!(
                "{:<16} {:<13} {:>6} {:>8.3}  {}\n",
                set_label(&row.subset),
                status_label(row.status),
                row.leaked_dim,
                row.leaked_bits,
                quantum_label(row.quantum_status)
            );
        }
    }
    out += "leak by size:";
    for l in &r.leak_by_size {
        out += &format!(" |A|={}: {}..{}", l.size, l.min_leaked, l.max_leaked);
    }
    out.push('\n');
    out += &format!("thresholds: t = {}, r = {}\n", list(&r.thresholds.t), list(&r.thresholds.r));
    match &r.distances {
        Some(d) => out += &render_distances(d),
        None => out += "distances: undefined (C = C_max)\n",
    }
    let verdict = |p: bool| if p { "pass" } else { "FAIL" };
    if let Some(d) = &r.bounds.distance {
        out += &format!(
            "distance bounds: {} (forbidden up to {}, qualified from {})\n",
            verdict(d.passed),
            d.forbidden_up_to,
            d.qualified_from
        );
    }
    if let Some(t) = &r.bounds.threshold {
        out += &format!("threshold bounds: {}\n", verdict(t.passed));
    }
    if let Some(rows) = &r.oracle {
        out += &render_oracle(rows);
    }
    out
}

pub fn render_oracle(rows: &[OracleRow]) -> String {
    let mut out = format!(
        "{:<16} {:<13} {:<13} {:>6} {:>7} {:>8}  {}\n",
        "subset", "algebraic", "density", "leaked", "classes", "holevo", "agree"
    );
    for row in rows {
        out += &format!(
            "{:<16} {:<13} {:<13} {:>6} {:>7} {:>8.3}  {}\n",
            set_label(&row.subset),
            status_label(row.algebraic_status),
            status_label(row.density_status),
            row.algebraic_leaked_dim,
            row.num_classes,
            row.holevo_bits,
            if row.agree { "yes" } else { "NO" }
        );
    }
    out
}
