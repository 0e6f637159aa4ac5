//! The `sinelcm` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 network or b-file parse failure.

pub mod args;
pub mod bfile;
pub mod oeis;
pub mod render;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::error::ErrorKind;
use clap::Parser;
use serde::{Deserialize, Serialize};
use sinelcm::cyclotomic::{cyclotomic_poly, eval_int};
use sinelcm::farey::{farey_half, farey_sequence, Fraction};
use sinelcm::identities::{self, verify_range, EquationId, IdentityReport, PrecisionPlan, Status};
use sinelcm::numtheory::lcm_upto;

use args::{Cli, Command, Format, Method};
use bfile::BFile;
use oeis::{Comparison, Sequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_EXTERNAL: i32 = 3;

enum Failure {
    Usage(String),
    External(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::External(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_EXTERNAL
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: writing output: {e}");
            EXIT_EXTERNAL
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Lcm { n, method, bits } => cmd_lcm(cli, *n, *method, *bits, out),
        Command::Verify { equation, from, to } => cmd_verify(cli, *equation, *from, *to, out),
        Command::Farey { n, half } => cmd_farey(cli, *n, *half, out),
        Command::Cyclo { n, at } => cmd_cyclo(cli, *n, *at, out),
        Command::OeisCheck {
            sequence,
            upto,
            offline,
            refresh,
        } => cmd_oeis_check(cli, sequence, *upto, *offline, *refresh, out, err),
        Command::Bench { eq, from, to } => cmd_bench(cli, *eq, *from, *to, out),
    }
}

fn plan(cli: &Cli, fixed: Option<u32>) -> Result<PrecisionPlan, Failure> {
    let base = match fixed {
        Some(b) => PrecisionPlan::fixed(b),
        None => Ok(PrecisionPlan::adaptive()),
    };
    let p = match (base, cli.max_bits) {
        (Ok(p), Some(m)) if fixed.is_none() => p.with_max_bits(m),
        (p, _) => p,
    };
    p.map_err(|e| Failure::Usage(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcmOutput {
    pub n: u64,
    pub method: String,
    pub value: Option<String>,
    pub status: Status,
    pub detail: String,
    pub bits_used: Option<u32>,
    pub factor_count: Option<u64>,
    pub retries: Option<u32>,
}

const LCM_HEADERS: &[&str] = &["n", "method", "value", "status", "detail", "bits_used", "factor_count", "retries"];

fn cmd_lcm(cli: &Cli, n: u64, method: Method, bits: Option<u32>, out: &mut dyn Write) -> Outcome {
    let row = match method {
        Method::Oracle => LcmOutput {
            n,
            method: "oracle".into(),
            value: Some(lcm_upto(n).to_string()),
            status: Status::Verified,
            detail: "exact".into(),
            bits_used: None,
            factor_count: None,
            retries: None,
        },
        Method::Sine | Method::Gamma => {
            let (eq, name) = if method == Method::Sine {
                (EquationId::E3, "sine")
            } else {
                (EquationId::E2, "gamma")
            };
            if n < 2 {
                return Err(Failure::Usage(format!("the {name} method needs n >= 2, got {n}")));
            }
            let r = identities::verify(eq, n, &plan(cli, bits)?);
            LcmOutput {
                n,
                method: name.into(),
                value: r.value,
                status: r.status,
                detail: r.detail,
                bits_used: Some(r.bits_used),
                factor_count: Some(r.factor_count),
                retries: Some(r.retries),
            }
        }
    };
    match cli.format {
        Format::Text => {
            writeln!(out, "{}", row.value.as_deref().unwrap_or("uncertified"))?;
            if let (Some(b), Some(f), Some(t)) = (row.bits_used, row.factor_count, row.retries) {
                writeln!(
                    out,
                    "status: {:?}, bits: {b}, factors: {f}, retries: {t} ({})",
                    row.status, row.detail
                )?;
            }
        }
        Format::Json => render::json(out, &row)?,
        Format::Csv => render::csv(out, LCM_HEADERS, std::slice::from_ref(&row))?,
    }
    Ok(if row.status == Status::Failed { EXIT_FAILED } else { EXIT_OK })
}

/// The JSON document printed by `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyTable {
    pub equation: EquationId,
    pub statement: String,
    pub from: u64,
    pub to: u64,
    pub reports: Vec<IdentityReport>,
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    n: u64,
    status: Status,
    value: Option<&'a str>,
    expected: &'a str,
    bits: u32,
    retries: u32,
    factors: u64,
    ms: String,
    detail: &'a str,
}

const VERIFY_HEADERS: &[&str] = &["n", "status", "value", "expected", "bits", "retries", "factors", "ms", "detail"];

fn millis(us: u64) -> String {
    format!("{:.3}", us as f64 / 1000.0)
}

fn range_of(eq: EquationId, from: Option<u64>, to: u64) -> (u64, u64) {
    (from.unwrap_or(eq.window().min_n), to)
}

fn cmd_verify(cli: &Cli, eq: EquationId, from: Option<u64>, to: u64, out: &mut dyn Write) -> Outcome {
    let (lo, hi) = range_of(eq, from, to);
    let reports = verify_range(eq, lo, hi, &plan(cli, None)?, cli.workers);
    let failed = reports.iter().any(IdentityReport::is_failed);
    match cli.format {
        Format::Json => render::json(
            out,
            &VerifyTable {
                equation: eq,
                statement: eq.statement().into(),
                from: lo,
                to: hi,
                reports,
            },
        )?,
        Format::Csv => {
            let rows: Vec<VerifyRow> = reports.iter().map(verify_row).collect();
            render::csv(out, VERIFY_HEADERS, &rows)?;
        }
        Format::Text => {
            writeln!(out, "{eq}: {}", eq.statement())?;
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        format!("{:?}", r.status),
                        r.value.clone().unwrap_or_else(|| "-".into()),
                        r.bits_used.to_string(),
                        r.factor_count.to_string(),
                        millis(r.elapsed_us),
                    ]
                })
                .collect();
            render::table(out, &["n", "status", "value", "bits", "factors", "ms"], &rows)?;
            for r in reports.iter().filter(|r| r.is_failed()) {
                writeln!(out, "n = {}: {}", r.n, r.detail)?;
            }
            let count = |s| reports.iter().filter(|r| r.status == s).count();
            writeln!(
                out,
                "verified {}, failed {}, skipped {}",
                count(Status::Verified),
                count(Status::Failed),
                count(Status::Skipped)
            )?;
        }
    }
    Ok(if failed { EXIT_FAILED } else { EXIT_OK })
}

fn verify_row(r: &IdentityReport) -> VerifyRow<'_> {
    VerifyRow {
        n: r.n,
        status: r.status,
        value: r.value.as_deref(),
        expected: &r.expected,
        bits: r.bits_used,
        retries: r.retries,
        factors: r.factor_count,
        ms: millis(r.elapsed_us),
        detail: &r.detail,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareyOutput {
    pub order: u64,
    pub half: bool,
    pub count: u64,
    pub fractions: Vec<String>,
}

#[derive(Serialize)]
struct FareyRow {
    numerator: u64,
    denominator: u64,
}

fn cmd_farey(cli: &Cli, n: u64, half: bool, out: &mut dyn Write) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("the Farey order must be at least 1".into()));
    }
    let seq: Vec<Fraction> = if half {
        farey_half(n, true).expect("n >= 1").collect()
    } else {
        farey_sequence(n).expect("n >= 1").collect()
    };
    match cli.format {
        Format::Text => {
            let terms: Vec<String> = seq.iter().map(Fraction::to_string).collect();
            writeln!(out, "{}", terms.join(" "))?;
            writeln!(out, "count: {}", seq.len())?;
        }
        Format::Json => render::json(
            out,
            &FareyOutput {
                order: n,
                half,
                count: seq.len() as u64,
                fractions: seq.iter().map(Fraction::to_string).collect(),
            },
        )?,
        Format::Csv => {
            let rows: Vec<FareyRow> = seq
                .iter()
                .map(|r| FareyRow {
                    numerator: r.numerator(),
                    denominator: r.denominator(),
                })
                .collect();
            render::csv(out, &["numerator", "denominator"], &rows)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloOutput {
    pub n: u64,
    pub coefficients: Vec<String>,
    pub at: Option<i64>,
    pub value: Option<String>,
}

#[derive(Serialize)]
struct CoefficientRow {
    degree: usize,
    coefficient: String,
}

#[derive(Serialize)]
struct ValueRow {
    n: u64,
    at: i64,
    value: String,
}

fn cmd_cyclo(cli: &Cli, n: u64, at: Option<i64>, out: &mut dyn Write) -> Outcome {
    let poly = cyclotomic_poly(n).map_err(|e| Failure::Usage(e.to_string()))?;
    let coefficients: Vec<String> = poly.coefficients().iter().map(|c| c.to_string()).collect();
    let value = at.map(|x| eval_int(&poly, x).to_string());
    match (cli.format, at) {
        (Format::Text, None) => writeln!(out, "{}", coefficients.join(" "))?,
        (Format::Text, Some(_)) => writeln!(out, "{}", value.as_deref().unwrap_or_default())?,
        (Format::Json, _) => render::json(
            out,
            &CycloOutput {
                n,
                coefficients,
                at,
                value,
            },
        )?,
        (Format::Csv, None) => {
            let rows: Vec<CoefficientRow> = coefficients
                .into_iter()
                .enumerate()
                .map(|(degree, coefficient)| CoefficientRow { degree, coefficient })
                .collect();
            render::csv(out, &["degree", "coefficient"], &rows)?;
        }
        (Format::Csv, Some(x)) => render::csv(
            out,
            &["n", "at", "value"],
            &[ValueRow {
                n,
                at: x,
                value: value.unwrap_or_default(),
            }],
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_oeis_check(
    cli: &Cli,
    id: &str,
    upto: u64,
    offline: bool,
    refresh: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let Some(seq) = Sequence::from_id(id) else {
        return Err(Failure::Usage(format!(
            "unsupported sequence `{id}` (supported: A003418, A048671)"
        )));
    };
    let cache_dir = cli.cache_dir.clone().unwrap_or_else(oeis::default_cache_dir);
    let mut warnings = Vec::new();
    let (body, source) = oeis::load(seq, offline, refresh, &cli.oeis_base, &cache_dir, &mut |w| {
        warnings.push(w)
    })
    .map_err(|e| Failure::External(e.to_string()))?;
    for w in warnings {
        writeln!(err, "warning: {w}")?;
    }
    let b = BFile::parse(seq.id(), &body).map_err(|e| Failure::External(format!("{}: {e}", seq.id())))?;
    let cmp = oeis::compare(seq, &b, upto, source);
    match cli.format {
        Format::Json => render::json(out, &cmp)?,
        Format::Csv => render::csv(out, &["index", "expected", "found"], &cmp.mismatches)?,
        Format::Text => write_comparison(out, &cmp)?,
    }
    if cmp.missing > 0 {
        writeln!(
            err,
            "warning: {} indices up to {upto} are not in the b-file",
            cmp.missing
        )?;
    }
    Ok(if cmp.mismatches.is_empty() { EXIT_OK } else { EXIT_FAILED })
}

fn write_comparison(out: &mut dyn Write, c: &Comparison) -> io::Result<()> {
    for m in &c.mismatches {
        writeln!(out, "mismatch at {}: b-file {}, oracle {}", m.index, m.found, m.expected)?;
    }
    writeln!(
        out,
        "{} ({:?}): {} terms checked up to {}, {} mismatches",
        c.sequence,
        c.source,
        c.checked,
        c.upto,
        c.mismatches.len()
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: u64,
    pub status: Status,
    pub factor_count: u64,
    pub bits_used: u32,
    pub retries: u32,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub equation: EquationId,
    pub from: u64,
    pub to: u64,
    pub rows: Vec<BenchRow>,
}

const BENCH_HEADERS: &[&str] = &["n", "status", "factor_count", "bits_used", "retries", "wall_ms"];

fn cmd_bench(cli: &Cli, eq: EquationId, from: Option<u64>, to: u64, out: &mut dyn Write) -> Outcome {
    let (lo, hi) = range_of(eq, from, to);
    let reports = verify_range(eq, lo, hi, &plan(cli, None)?, cli.workers);
    let rows: Vec<BenchRow> = reports
        .iter()
        .map(|r| BenchRow {
            n: r.n,
            status: r.status,
            factor_count: r.factor_count,
            bits_used: r.bits_used,
            retries: r.retries,
            wall_ms: r.elapsed_us as f64 / 1000.0,
        })
        .collect();
    let failed = reports.iter().any(IdentityReport::is_failed);
    match cli.format {
        Format::Json => render::json(
            out,
            &BenchTable {
                equation: eq,
                from: lo,
                to: hi,
                rows,
            },
        )?,
        Format::Csv => render::csv(out, BENCH_HEADERS, &rows)?,
        Format::Text => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        format!("{:?}", r.status),
                        r.factor_count.to_string(),
                        r.bits_used.to_string(),
                        r.retries.to_string(),
                        format!("{:.3}", r.wall_ms),
                    ]
                })
                .collect();
            render::table(out, BENCH_HEADERS, &cells)?;
        }
    }
    Ok(if failed { EXIT_FAILED } else { EXIT_OK })
}
