//! Command-line front end: code-file parsing, subcommand dispatch and reports.
//!
//! Exit codes: 0 success, 1 parse or validation failure, 2 resource limit
//! exceeded, 64 usage error.

pub mod codefile;
pub mod error;
pub mod report;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use stabshare_core::constructions::{css_scheme, euclidean_scheme, hermitian_scheme, rs_scheme, RsParams};
use stabshare_core::gv::{gv_asymptotic, gv_check, witness_search, GvQuery, BISECTION_TOL};
use stabshare_core::oracle::compare_all;
use stabshare_core::weights::{check_distance_bounds, check_threshold_bounds, distance_profile};
use stabshare_core::{Error as CoreError, Field, Limits, Scheme, SubsetA};

use codefile::{parse_css, parse_hermitian, CodeFile, CssInput};
use error::CliError;
use report::*;

pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "stabshare", version, about = "Access structures of stabilizer-code secret sharing schemes")]
struct Cli {
    /// Emit the JSON report instead of plain tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct InputArg {
    /// Code file, or `-` for standard input.
    #[arg(long, short)]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct OutputArg {
    /// Write the code file here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GvArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Target d_s(C_max, C).
    #[arg(long)]
    dt: usize,
    /// Target d_s(C^perp, C_max).
    #[arg(long)]
    dr: usize,
}

impl GvArgs {
    fn query(&self) -> GvQuery {
        GvQuery { q: self.q, n: self.n, k: self.k, delta_t: self.dt, delta_r: self.dr }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify share sets and compute thresholds, distances and bound checks.
    Analyze {
        #[command(flatten)]
        input: InputArg,
        /// One share set as 1-based labels, e.g. `1,3`.
        #[arg(long, value_delimiter = ',', conflicts_with = "all_subsets")]
        subset: Option<Vec<usize>>,
        /// Tabulate every share set (the default when it fits).
        #[arg(long)]
        all_subsets: bool,
        /// Also run the density-matrix comparison.
        #[arg(long)]
        oracle: bool,
    },
    /// Relative generalized symplectic weights of both coset pairs.
    Distances {
        #[command(flatten)]
        input: InputArg,
        /// Report d_s^i for i up to this value.
        #[arg(long)]
        max_i: Option<usize>,
    },
    /// Exact finite-length existence check.
    Gv(GvArgs),
    /// Asymptotic relative distances for rate R.
    GvAsym {
        #[arg(long)]
        q: u32,
        #[arg(long = "R", alias = "rate")]
        rate: f64,
    },
    /// Seeded random search for a pair meeting both distance targets.
    Search {
        #[command(flatten)]
        gv: GvArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reed-Solomon scheme with n = q.
    Rs {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: OutputArg,
    },
    /// CSS scheme from [C1]/[C2] or a Euclidean pair [E]/[EMAX].
    Css {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Scheme over F_q from a hermitian pair [D]/[DMAX] over F_{q^2}.
    Hermitian {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Compare algebraic and density-matrix classifications of every share set.
    Simulate {
        #[command(flatten)]
        input: InputArg,
    },
}

/// Standard streams for one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs with the process streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (mut stdin, mut stdout, mut stderr) = (std::io::stdin(), std::io::stdout(), std::io::stderr());
    run_with(argv, Io { stdin: &mut stdin, stdout: &mut stdout, stderr: &mut stderr })
}

pub fn run_with<I, T>(argv: I, io: Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(io.stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(io.stdout, "{text}");
                0
            };
        }
    };
    let json = cli.json;
    match execute(cli, io.stdin) {
        Ok(out) => {
            let _ = io.stdout.write_all(out.text.as_bytes());
            if let Some(e) = out.failure {
                let _ = writeln!(io.stderr, "error[{}]: {e}", e.code());
                return e.exit_code();
            }
            0
        }
        Err(e) => {
            let _ = writeln!(io.stderr, "error[{}]: {e}", e.code());
            if json {
                let body = ErrorReport { error: ErrorBody { code: e.code(), message: e.to_string() } };
                let _ = io.stdout.write_all(to_json(&Envelope::new("error", None, body)).as_bytes());
            }
            e.exit_code()
        }
    }
}

/// Report text plus a failure to signal after it is printed.
struct Outcome {
    text: String,
    failure: Option<CliError>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failure: None }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<String, CliError> {
    let io_err = |e: std::io::Error| CliError::Io { what: path.display().to_string(), message: e.to_string() };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn load_scheme(input: &InputArg, stdin: &mut dyn Read) -> Result<Scheme, CliError> {
    CodeFile::parse(&read_input(&input.input, stdin)?)?.to_scheme()
}

/// `Ok(None)` when the spaces coincide and the quantity is undefined.
fn unless_degenerate<T>(r: stabshare_core::Result<T>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(CoreError::EqualSpaces) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Builds the `analyze` report for `scheme`.
pub fn analyze_report(
    scheme: &Scheme,
    subset: Option<&[usize]>,
    all_subsets: bool,
    oracle: bool,
    limits: &Limits,
) -> Result<AnalyzeReport, CliError> {
    let full = scheme.full_access_report(limits)?;
    let subsets = match subset {
        Some(labels) => {
            let a = SubsetA::from_one_based(scheme.n(), labels)?;
            let c = scheme.classify(&a)?;
            Some(vec![stabshare_core::scheme::SubsetRow {
                subset: a.one_based(),
                status: c.status,
                leaked_dim: c.leaked_dim,
                leaked_bits: c.leaked_bits,
                quantum_status: scheme.classify_quantum(&a)?,
            }])
        }
        None if all_subsets && full.subsets.is_none() => {
            return Err(CoreError::TooLarge {
                what: "subset table".into(),
                needed: format!("2^{} rows", scheme.n()),
                limit: format!("2^{}", limits.max_table_log2),
            }
            .into())
        }
        None => full.subsets,
    };
    let bounds = Bounds {
        distance: unless_degenerate(check_distance_bounds(scheme, limits))?,
        threshold: unless_degenerate(check_threshold_bounds(scheme, limits))?,
    };
    let oracle = if oracle { Some(compare_all(scheme, limits)?) } else { None };
    Ok(AnalyzeReport {
        scheme: SchemeEcho::of(scheme),
        subsets,
        leak_by_size: full.leak_by_size,
        thresholds: full.thresholds,
        distances: full.distances,
        bounds,
        oracle,
    })
}

fn construct_outcome(
    scheme: &Scheme,
    output: &OutputArg,
    json: bool,
) -> Result<Outcome, CliError> {
    let code_file = CodeFile::from_scheme(scheme).emit();
    if let Some(path) = &output.output {
        std::fs::write(path, &code_file)
            .map_err(|e| CliError::Io { what: path.display().to_string(), message: e.to_string() })?;
    }
    let text = if json {
        to_json(&Envelope::new(
            "construct",
            None,
            ConstructReport {
                scheme: SchemeEcho::of(scheme),
                code_file: code_file.clone(),
                output: output.output.as_ref().map(|p| p.display().to_string()),
            },
        ))
    } else {
        match &output.output {
            Some(p) => format!("wrote {} (n={}, k={})\n", p.display(), scheme.n(), scheme.k()),
            None => code_file,
        }
    };
    Ok(Outcome::ok(text))
}

fn execute(cli: Cli, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let limits = Limits::default();
    let json = cli.json;
    match cli.command {
        Command::Analyze { input, subset, all_subsets, oracle } => {
            let scheme = load_scheme(&input, stdin)?;
            let report = analyze_report(&scheme, subset.as_deref(), all_subsets, oracle, &limits)?;
            let mut failure = None;
            if !report.bounds.passed() {
                failure = Some(CliError::Check("distance or threshold bound violated".into()));
            }
            if report.oracle.as_ref().is_some_and(|rows| rows.iter().any(|r| !r.agree)) {
                failure = Some(CliError::Check("oracle disagrees with the algebraic classification".into()));
            }
            let text = if json { to_json(&Envelope::new("analyze", None, report)) } else { render_analyze(&report) };
            Ok(Outcome { text, failure })
        }
        Command::Distances { input, max_i } => {
            let scheme = load_scheme(&input, stdin)?;
            let mut d = distance_profile(&scheme, &limits)?;
            let max_i = max_i.unwrap_or(scheme.k()).min(scheme.k());
            d.dsi_t.truncate(max_i);
            d.dsi_r.truncate(max_i);
            let text = if json {
                to_json(&Envelope::new(
                    "distances",
                    None,
                    DistancesReport { scheme: SchemeEcho::of(&scheme), max_i, distances: d },
                ))
            } else {
                render_distances(&d)
            };
            Ok(Outcome::ok(text))
        }
        Command::Gv(args) => {
            let query = args.query();
            let r = gv_check(&query)?;
            let report = GvReport { query, holds: r.holds, lhs: r.lhs_string(), lhs_reduced: r.reduced_string() };
            let text = if json {
                to_json(&Envelope::new("gv", None, report))
            } else {
                format!(
                    "{}, LHS = {}\nreduced: {}\n",
                    if report.holds { "holds" } else { "does not hold" },
                    report.lhs,
                    report.lhs_reduced
                )
            };
            Ok(Outcome::ok(text))
        }
        Command::GvAsym { q, rate } => {
            let result = gv_asymptotic(q, rate)?;
            let text = if json {
                to_json(&Envelope::new("gv-asym", None, GvAsymReport { q, rate, tolerance: BISECTION_TOL, result }))
            } else {
                format!("eps_t = {:.9}\neps_r = {:.9}\n", result.eps_t, result.eps_r)
            };
            Ok(Outcome::ok(text))
        }
        Command::Search { gv, trials, seed } => {
            let query = gv.query();
            let found = witness_search(&query, trials, seed, &limits)?;
            let witness = match found {
                Some(w) => {
                    let field = Field::of_order(query.q as u64)?;
                    let scheme = Scheme::build(&field, w.c, Some(w.cmax), None)?;
                    Some(WitnessReport {
                        trial: w.trial,
                        ds_t: w.ds_t,
                        ds_r: w.ds_r,
                        code_file: CodeFile::from_scheme(&scheme).emit(),
                    })
                }
                None => None,
            };
            let text = if json {
                to_json(&Envelope::new("search", Some(seed), SearchReport { query, trials, witness }))
            } else {
                match &witness {
                    Some(w) => format!(
                        "found at trial {} (seed {seed}): d_s(C_max, C) = {}, d_s(C^perp, C_max) = {}\n{}",
                        w.trial, w.ds_t, w.ds_r, w.code_file
                    ),
                    None => format!("no witness in {trials} trials (seed {seed})\n"),
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Rs { q, k, output } => {
            let field = Field::of_order(q as u64)?;
            let scheme = rs_scheme(&field, &RsParams::new(&field, k))?;
            construct_outcome(&scheme, &output, json)
        }
        Command::Css { input, output } => {
            let (field, pair) = parse_css(&read_input(&input.input, stdin)?)?;
            let scheme = match pair {
                CssInput::Nested { c2, c1 } => css_scheme(&field, &c2, &c1)?,
                CssInput::Euclidean { e, emax } => euclidean_scheme(&field, &e, &emax)?,
            };
            construct_outcome(&scheme, &output, json)
        }
        Command::Hermitian { input, output } => {
            let (big, d, dmax) = parse_hermitian(&read_input(&input.input, stdin)?)?;
            let scheme = hermitian_scheme(&big, &d, &dmax)?;
            construct_outcome(&scheme, &output, json)
        }
        Command::Simulate { input } => {
            let scheme = load_scheme(&input, stdin)?;
            let rows = compare_all(&scheme, &limits)?;
            let mismatches = rows.iter().filter(|r| !r.agree).count();
            let text = if json {
                to_json(&Envelope::new(
                    "simulate",
                    None,
                    SimulateReport { scheme: SchemeEcho::of(&scheme), mismatches, oracle: rows },
                ))
            } else {
                format!("{}{}mismatches: {mismatches}\n", render_scheme(&SchemeEcho::of(&scheme)), render_oracle(&rows))
            };
            let failure = (mismatches > 0)
                .then(|| CliError::Check(format!("{mismatches} share sets disagree with the oracle")));
            Ok(Outcome { text, failure })
        }
    }
}
