//! Plain-text code files.
//!
//! ```text
//! # superdense coding
//! p=2 mu=1 n=2 k=2
//! [C]
//! [CMAX]
//! 1 1 | 0 0
//! 0 0 | 1 1
//! ```
//!
//! The header carries `p`, `mu`, `n`, `k` and an optional `modulus=c0,c1,...`
//! (constant term first). Each section lists one vector per line as
//! space-separated symbols in `[0, q)`. A `|` between the halves is ignored
//! and `#` starts a comment.
//!
//! Symplectic files use `[C]`, `[CMAX]` and `[REPS]`. Construction inputs
//! use `[C1]`/`[C2]` or `[E]`/`[EMAX]` (CSS) and `[D]`/`[DMAX]` (hermitian).

use stabshare_core::scheme::Provenance;
use stabshare_core::{Felt, Field, FieldSpec, Scheme, Subspace};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub p: u32,
    pub mu: u32,
    pub n: usize,
    pub k: Option<usize>,
    pub modulus: Option<Vec<u32>>,
    pub line: usize,
}

impl Header {
    pub fn field_spec(&self) -> Result<FieldSpec, CliError> {
        let spec = match &self.modulus {
            Some(m) => FieldSpec::new(self.p, self.mu, m.clone()),
            None => FieldSpec::with_default_modulus(self.p, self.mu),
        };
        spec.map_err(|e| CliError::parse(self.line, e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    /// Each row with the line it came from.
    pub rows: Vec<(usize, Vec<u32>)>,
}

/// A header plus named sections, before any field-level validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFile {
    pub header: Header,
    pub sections: Vec<Section>,
}

impl RawFile {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    fn check_names(&self, allowed: &[&str]) -> Result<(), CliError> {
        for s in &self.sections {
            if !allowed.contains(&s.name.as_str()) {
                return Err(CliError::parse(
                    s.line,
                    format!("unexpected section [{}], expected one of {allowed:?}", s.name),
                ));
            }
        }
        Ok(())
    }
}

fn parse_header(line_no: usize, text: &str) -> Result<Header, CliError> {
    let (mut p, mut mu, mut n, mut k, mut modulus) = (None, None, None, None, None);
    for token in text.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| CliError::parse(line_no, format!("expected key=value, got `{token}`")))?;
        let int = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| CliError::parse(line_no, format!("`{key}` needs a non-negative integer, got `{v}`")))
        };
        match key {
            "p" => p = Some(int(value)? as u32),
            "mu" => mu = Some(int(value)? as u32),
            "n" => n = Some(int(value)? as usize),
            "k" => k = Some(int(value)? as usize),
            "modulus" => {
                modulus = Some(
                    value
                        .split(',')
                        .map(|c| int(c).map(|c| c as u32))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            _ => return Err(CliError::parse(line_no, format!("unknown header key `{key}`"))),
        }
    }
    let lacks = |key: &str| CliError::parse(line_no, format!("header lacks `{key}`"));
    Ok(Header {
        p: p.ok_or_else(|| lacks("p"))?,
        mu: mu.unwrap_or(1),
        n: n.ok_or_else(|| lacks("n"))?,
        k,
        modulus,
        line: line_no,
    })
}

/// Splits text into a header and sections; symbols are only checked to be integers.
pub fn parse_raw(text: &str) -> Result<RawFile, CliError> {
    let mut header = None;
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(line_no, line)?);
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| CliError::parse(line_no, "unterminated section name"))?
                .trim()
                .to_ascii_uppercase();
            if sections.iter().any(|s| s.name == name) {
                return Err(CliError::parse(line_no, format!("duplicate section [{name}]")));
            }
            sections.push(Section { name, line: line_no, rows: Vec::new() });
            continue;
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| CliError::parse(line_no, "vector outside of a section"))?;
        let row = line
            .split_whitespace()
            .filter(|t| *t != "|")
            .flat_map(|t| t.split('|'))
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| CliError::parse(line_no, format!("`{t}` is not a field symbol")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        section.rows.push((line_no, row));
    }
    let header = header.ok_or_else(|| CliError::parse(1, "missing header line"))?;
    Ok(RawFile { header, sections })
}

fn read_rows(field: &Field, section: &Section, len: usize) -> Result<Vec<Vec<Felt>>, CliError> {
    section
        .rows
        .iter()
        .map(|(line, row)| {
            if row.len() != len {
                return Err(CliError::parse(*line, format!("expected {len} symbols, found {}", row.len())));
            }
            row.iter()
                .map(|&x| field.element(x).map_err(|e| CliError::parse(*line, e.to_string())))
                .collect()
        })
        .collect()
}

fn expect_rows(section: &Section, count: usize) -> Result<(), CliError> {
    if section.rows.len() != count {
        return Err(CliError::parse(
            section.line,
            format!("[{}] has {} rows, expected {count}", section.name, section.rows.len()),
        ));
    }
    Ok(())
}

/// A parsed symplectic code file.
#[derive(Clone, Debug)]
pub struct CodeFile {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub c: Vec<Vec<Felt>>,
    pub cmax: Option<Vec<Vec<Felt>>>,
    pub reps: Option<Vec<Vec<Felt>>>,
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<CodeFile, CliError> {
        let raw = parse_raw(text)?;
        raw.check_names(&["C", "CMAX", "REPS"])?;
        let h = &raw.header;
        let k = h.k.ok_or_else(|| CliError::parse(h.line, "header lacks `k`"))?;
        if h.n == 0 || k > h.n {
            return Err(CliError::parse(h.line, format!("need 0 <= k <= n and n >= 1, got n = {}, k = {k}", h.n)));
        }
        let field = Field::new(h.field_spec()?).map_err(|e| CliError::parse(h.line, e.to_string()))?;
        let m = 2 * h.n;
        let c_sec = raw
            .section("C")
            .ok_or_else(|| CliError::parse(h.line, "missing [C] section"))?;
        expect_rows(c_sec, h.n - k)?;
        let c = read_rows(&field, c_sec, m)?;
        let cmax = match raw.section("CMAX") {
            Some(s) => {
                expect_rows(s, h.n)?;
                Some(read_rows(&field, s, m)?)
            }
            None => None,
        };
        let reps = match raw.section("REPS") {
            Some(s) => {
                expect_rows(s, k)?;
                Some(read_rows(&field, s, m)?)
            }
            None => None,
        };
        Ok(CodeFile { field, n: h.n, k, c, cmax, reps })
    }

    /// Validates the scheme invariants.
    pub fn to_scheme(&self) -> Result<Scheme, CliError> {
        let m = 2 * self.n;
        if let Some((a, b)) = stabshare_core::symplectic::first_non_orthogonal_pair(&self.field, &self.c) {
            return Err(stabshare_core::Error::NotSelfOrthogonal { row_a: a, row_b: b }.into());
        }
        let c = Subspace::from_rows(&self.field, m, self.c.iter().cloned())?;
        if c.dim() != self.n - self.k {
            return Err(stabshare_core::Error::DimensionMismatch(format!(
                "[C] rows span dimension {}, header needs n - k = {}",
                c.dim(),
                self.n - self.k
            ))
            .into());
        }
        let cmax = match &self.cmax {
            Some(rows) => Some(Subspace::from_rows(&self.field, m, rows.iter().cloned())?),
            None => None,
        };
        Ok(Scheme::build(&self.field, c, cmax, self.reps.clone())?)
    }

    /// The file form of `scheme`. Default coset representatives are left out
    /// so that re-parsing reproduces them and their provenance.
    pub fn from_scheme(scheme: &Scheme) -> CodeFile {
        CodeFile {
            field: scheme.field().clone(),
            n: scheme.n(),
            k: scheme.k(),
            c: scheme.c().rows().to_vec(),
            cmax: (scheme.cmax_provenance() == Provenance::Supplied).then(|| scheme.cmax().rows().to_vec()),
            reps: (scheme.reps_provenance() == Provenance::Supplied).then(|| scheme.reps().to_vec()),
        }
    }

    pub fn emit(&self) -> String {
        let spec = self.field.spec();
        let mut out = format!("p={} mu={} n={} k={}", spec.p, spec.mu, self.n, self.k);
        if spec.mu > 1 {
            let coeffs: Vec<String> = spec.modulus.iter().map(u32::to_string).collect();
            out += &format!(" modulus={}", coeffs.join(","));
        }
        out.push('\n');
        let mut block = |name: &str, rows: &[Vec<Felt>]| {
            out += &format!("[{name}]\n");
            for r in rows {
                out += &format_row(r);
                out.push('\n');
            }
        };
        block("C", &self.c);
        if let Some(rows) = &self.cmax {
            block("CMAX", rows);
        }
        if let Some(rows) = &self.reps {
            block("REPS", rows);
        }
        out
    }
}

/// `a_1 .. a_n | b_1 .. b_n`.
pub fn format_row(v: &[Felt]) -> String {
    let half = v.len() / 2;
    let join = |xs: &[Felt]| xs.iter().map(Felt::to_string).collect::<Vec<_>>().join(" ");
    format!("{} | {}", join(&v[..half]), join(&v[half..]))
}

/// Input to the `css` subcommand.
#[derive(Clone, Debug)]
pub enum CssInput {
    /// `C2 <= C1` in `F_q^n`.
    Nested { c2: Subspace, c1: Subspace },
    /// `E <= E_max` with `E_max` Euclidean self-dual.
    Euclidean { e: Subspace, emax: Subspace },
}

fn linear_space(field: &Field, raw: &RawFile, name: &str) -> Result<Subspace, CliError> {
    let n = raw.header.n;
    let sec = raw
        .section(name)
        .ok_or_else(|| CliError::parse(raw.header.line, format!("missing [{name}] section")))?;
    let rows = read_rows(field, sec, n)?;
    Ok(Subspace::from_rows(field, n, rows)?)
}

fn header_field(raw: &RawFile) -> Result<Field, CliError> {
    if raw.header.n == 0 {
        return Err(CliError::parse(raw.header.line, "n must be positive"));
    }
    Field::new(raw.header.field_spec()?).map_err(|e| CliError::parse(raw.header.line, e.to_string()))
}

pub fn parse_css(text: &str) -> Result<(Field, CssInput), CliError> {
    let raw = parse_raw(text)?;
    raw.check_names(&["C1", "C2", "E", "EMAX"])?;
    let field = header_field(&raw)?;
    let has = |n: &str| raw.section(n).is_some();
    let input = match (has("C1") || has("C2"), has("E") || has("EMAX")) {
        (true, false) => CssInput::Nested {
            c2: linear_space(&field, &raw, "C2")?,
            c1: linear_space(&field, &raw, "C1")?,
        },
        (false, true) => CssInput::Euclidean {
            e: linear_space(&field, &raw, "E")?,
            emax: linear_space(&field, &raw, "EMAX")?,
        },
        _ => {
            return Err(CliError::parse(
                raw.header.line,
                "give either [C1] and [C2] or [E] and [EMAX]",
            ))
        }
    };
    Ok((field, input))
}

/// `(F_{q^2}, D, D_max)` for the `hermitian` subcommand.
pub fn parse_hermitian(text: &str) -> Result<(Field, Subspace, Subspace), CliError> {
    let raw = parse_raw(text)?;
    raw.check_names(&["D", "DMAX"])?;
    let field = header_field(&raw)?;
    let d = linear_space(&field, &raw, "D")?;
    let dmax = linear_space(&field, &raw, "DMAX")?;
    Ok((field, d, dmax))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUPERDENSE: &str = "# superdense\np=2 mu=1 n=2 k=2\n[C]\n[CMAX]\n1 1 | 0 0\n0 0 1 1 # second\n";

    #[test]
    fn parses_superdense_file() {
        let f = CodeFile::parse(SUPERDENSE).unwrap();
        assert_eq!((f.n, f.k), (2, 2));
        assert!(f.c.is_empty());
        let s = f.to_scheme().unwrap();
        assert_eq!(s.cmax().dim(), 2);
        assert_eq!(s.cmax_provenance(), Provenance::Supplied);
        assert_eq!(s.reps_provenance(), Provenance::Default);
    }

    #[test]
    fn orthogonal_rows_are_accepted() {
        let f = CodeFile::parse("p=2 n=2 k=0\n[C]\n1 0 0 0\n0 1 0 0\n").unwrap();
        assert!(f.to_scheme().unwrap().is_degenerate());
    }

    #[test]
    fn non_orthogonal_rows_are_named() {
        let f = CodeFile::parse("p=2 n=2 k=0\n[C]\n1 0 0 0\n0 0 1 0\n").unwrap();
        let err = f.to_scheme().unwrap_err();
        assert_eq!(err.code(), "not_self_orthogonal");
        assert!(err.to_string().contains("rows 1 and 2"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("p=2 n=2 k=1\n[C]\n1 0 x 0\n", 3),
            ("p=2 n=2 k=1\n[C]\n1 0 0\n", 3),
            ("p=2 n=2 k=1\n\n[C]\n1 0 2 0\n", 4),
            ("p=2 n=2 k=1\n1 0 0 0\n", 2),
            ("p=2 n=2 k=1\n[C]\n1 0 0 0\n[Q]\n", 4),
            ("p=2 n=2 k=1\n[C]\n", 2),
            ("p=4 n=2 k=1\n", 1),
            ("n=2 k=1\n", 1),
        ];
        for (text, line) in cases {
            match CodeFile::parse(text).unwrap_err() {
                CliError::Parse { line: l, .. } => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other}"),
            }
        }
    }

    #[test]
    fn extension_field_round_trip() {
        let text = "p=2 mu=2 n=1 k=1 modulus=1,1,1\n[C]\n[CMAX]\n1 | 3\n";
        let f = CodeFile::parse(text).unwrap();
        assert_eq!(f.field.q(), 4);
        assert_eq!(f.emit(), "p=2 mu=2 n=1 k=1 modulus=1,1,1\n[C]\n[CMAX]\n1 | 3\n");
    }

    #[test]
    fn emit_then_parse_is_identity() {
        let s = CodeFile::parse(SUPERDENSE).unwrap().to_scheme().unwrap();
        let text = CodeFile::from_scheme(&s).emit();
        let back = CodeFile::parse(&text).unwrap().to_scheme().unwrap();
        assert_eq!(back.cmax(), s.cmax());
        assert_eq!(back.reps(), s.reps());
        assert_eq!(CodeFile::from_scheme(&back).emit(), text);
    }

    #[test]
    fn css_inputs() {
        let (_, input) = parse_css("p=2 n=2\n[C2]\n[C1]\n1 0\n0 1\n").unwrap();
        assert!(matches!(input, CssInput::Nested { .. }));
        let (_, input) = parse_css("p=2 n=2\n[E]\n[EMAX]\n1 1\n").unwrap();
        assert!(matches!(input, CssInput::Euclidean { .. }));
        assert!(parse_css("p=2 n=2\n[E]\n[C1]\n").is_err());
    }
}
