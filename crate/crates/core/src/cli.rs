//! Command-line front end.
//!
//! Exit codes: 0 success or proved, 1 refuted, indeterminate or failed
//! computation, 2 usage error (nothing is emitted), 3 I/O error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde::Serialize;

use crate::certify::{
    f_remainder_maxima, paper_constants, remainder_max, verify_ladder, verify_statement1,
    verify_statement1_endpoint, verify_statement2_improvement, verify_theorem3_chain,
    CertificateReport, Endpoint, MaxSearchResult, Verdict,
};
use crate::error::Error;
use crate::numeric::{enc_pi, parse_rational, to_decimal_string, to_f64, Enclosure, Precision, Rational};
use crate::paperfns::{build, FunctionId};
use crate::taylor::{build_ladder, Approximation, RemainderKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

const DECIMALS: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "twin-taylor", version, about = "Certified double-sided Taylor bounds")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
    /// Precision budget in bits (target enclosure width 2^-N).
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,
    /// Series truncation order.
    #[arg(long, global = true, default_value_t = 64)]
    truncation: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Upper end of the domain of g, g1, g2 (q*pi + r).
    #[arg(long, global = true, default_value = "pi")]
    beta: String,
}

#[derive(Subcommand, Debug)]
enum CommandArgs {
    /// Certify one of the built-in claims.
    Verify {
        #[arg(value_enum)]
        claim: Claim,
        #[arg(long, default_value = "pi/2")]
        endpoint: String,
        #[arg(long, default_value = "0,2")]
        orders: String,
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
    /// Certify and tabulate the double-sided ladder of one function.
    Ladder {
        #[arg(long, default_value = "f")]
        function: String,
        #[arg(long, default_value = "0,2")]
        orders: String,
        #[arg(long, default_value = "pi/2")]
        endpoint: String,
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
    /// Reproduce every published constant.
    Constants,
    /// Locate the maximum of a remainder on [0, endpoint].
    RemainderMax {
        #[arg(long, default_value = "f")]
        function: String,
        #[arg(long, value_enum, default_value_t = KindArg::First)]
        kind: KindArg,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value = "pi/2")]
        endpoint: String,
        #[arg(long, default_value = "1e-6")]
        tol: String,
    },
    /// Dump the exact series coefficients of a function.
    Export {
        #[arg(long, default_value = "f")]
        function: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Statement1,
    Theorem3,
    Statement2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Verify(Claim),
    Ladder,
    Constants,
    RemainderMax { kind: RemainderKind, order: usize, tol: Rational },
    Export,
}

/// Validated invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub function: FunctionId,
    pub endpoint: Endpoint,
    pub orders: Vec<usize>,
    pub grid: usize,
    pub precision: Precision,
    pub truncation: usize,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub beta: Endpoint,
}

#[derive(Debug)]
pub enum CliError {
    /// Help or version text; printed to stdout, exit 0.
    Info(String),
    Usage(String),
    Failed(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => EXIT_OK,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAILED,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

fn usage(flag: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("--{flag}: {detail}"))
}

fn parse_orders(s: &str) -> Result<Vec<usize>, CliError> {
    let orders = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage("orders", format!("{s:?} is not a comma-separated list of integers ({e})")))?;
    if orders.is_empty() || orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("orders", format!("{s:?} must be strictly ascending")));
    }
    Ok(orders)
}

fn parse_function(s: &str) -> Result<FunctionId, CliError> {
    s.parse().map_err(|e: Error| usage("function", e))
}

fn parse_endpoint(flag: &str, s: &str) -> Result<Endpoint, CliError> {
    s.parse().map_err(|e: Error| usage(flag, e))
}

/// Parses and validates `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Info(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    let precision = Precision::new(cli.precision).map_err(|e| usage("precision", e))?;
    let beta = parse_endpoint("beta", &cli.beta)?;
    let (command, function, endpoint, orders, grid) = match cli.command {
        CommandArgs::Verify { claim, endpoint, orders, grid } => {
            let function = if claim == Claim::Statement2 { FunctionId::G } else { FunctionId::F };
            let orders = if claim == Claim::Theorem3 { parse_orders(&orders)? } else { vec![0] };
            (Command::Verify(claim), function, endpoint, orders, grid)
        }
        CommandArgs::Ladder { function, orders, endpoint, grid } => {
            (Command::Ladder, parse_function(&function)?, endpoint, parse_orders(&orders)?, grid)
        }
        CommandArgs::Constants => (Command::Constants, FunctionId::F, "pi/2".into(), vec![0], 3),
        CommandArgs::RemainderMax { function, kind, order, endpoint, tol } => {
            let tol = parse_rational(&tol).map_err(|e| usage("tol", e))?;
            if tol <= Rational::from_integer(0.into()) {
                return Err(usage("tol", "must be positive"));
            }
            if order == 0 {
                return Err(usage("order", "remainders are indexed from 1"));
            }
            let kind = match kind {
                KindArg::First => RemainderKind::First,
                KindArg::Second => RemainderKind::Second,
            };
            let orders = vec![order];
            (Command::RemainderMax { kind, order, tol }, parse_function(&function)?, endpoint, orders, 3)
        }
        CommandArgs::Export { function } => (Command::Export, parse_function(&function)?, "pi/2".into(), vec![0], 3),
    };
    let endpoint = parse_endpoint("endpoint", &endpoint)?;
    if grid < 3 {
        return Err(usage("grid", format!("must be >= 3, got {grid}")));
    }
    let max_order = *orders.last().expect("orders are nonempty");
    if cli.truncation < max_order + 2 {
        return Err(usage(
            "truncation",
            format!("{} must be >= max order + 2 = {}", cli.truncation, max_order + 2),
        ));
    }
    if function == FunctionId::F && cli.truncation % 2 != 0 {
        return Err(usage("truncation", format!("f needs an even truncation, got {}", cli.truncation)));
    }
    if function != FunctionId::F && cli.truncation % 4 != 0 {
        return Err(usage(
            "truncation",
            format!("g, g1, g2 need a multiple of 4, got {}", cli.truncation),
        ));
    }
    if command == Command::Verify(Claim::Theorem3) && orders.iter().any(|n| n % 2 == 1) {
        return Err(usage("orders", "the f ladder uses even orders only"));
    }
    let p = precision;
    let pi = enc_pi(p);
    let beta_enc = beta.enclosure(p);
    if !beta_enc.lo().is_positive() || beta_enc.lo() > pi.hi() {
        return Err(usage("beta", format!("{beta} must lie in (0, pi]")));
    }
    if matches!(command, Command::Verify(_) | Command::Ladder | Command::RemainderMax { .. }) {
        let hi = if function == FunctionId::F { pi } else { beta_enc };
        let c = endpoint.enclosure(p);
        if !c.lo().is_positive() || !c.certainly_lt(&hi) {
            return Err(usage("endpoint", format!("{endpoint} must lie in (0, {})", hi.to_f64_mid())));
        }
    }
    Ok(RunConfig {
        command,
        function,
        endpoint,
        orders,
        grid,
        precision,
        truncation: cli.truncation,
        output_format: cli.format,
        output_path: cli.out,
        beta,
    })
}

/// Rendered output plus whether the run counts as a success.
pub struct Outcome {
    pub body: String,
    pub success: bool,
}

fn decimal(r: &Rational) -> String {
    to_decimal_string(r, DECIMALS)
}

fn width_cell(e: &Enclosure) -> String {
    format!("{:e}", to_f64(&e.width()))
}

fn csv_report(report: &CertificateReport) -> String {
    let mut out = String::from("kind,name,value,width\n");
    out.push_str(&format!("verdict,{},{},\n", report.claim_id, report.verdict));
    for h in &report.hypotheses {
        out.push_str(&format!("hypothesis,{},{},\n", csv_field(&h.name), h.passed));
    }
    for (name, rec) in &report.enclosures {
        if let Ok(e) = rec.to_enclosure() {
            out.push_str(&format!("enclosure,{},{},{}\n", csv_field(name), decimal(&e.midpoint()), width_cell(&e)));
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_report(report: &CertificateReport, extra_text: &[&CertificateReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => format!("{}\n", report.to_json()),
        OutputFormat::Csv => csv_report(report),
        OutputFormat::Text => {
            let mut out = report.to_string();
            for r in extra_text {
                out.push('\n');
                out.push_str(&r.to_string());
            }
            out
        }
    }
}

fn verify(config: &RunConfig, claim: Claim) -> Result<Outcome, CliError> {
    let (p, n) = (config.precision, config.truncation);
    let (report, extra) = match claim {
        Claim::Statement1 => {
            let open = verify_statement1(&config.endpoint, p, n)?;
            let closed = verify_statement1_endpoint(&config.endpoint, p, n)?;
            (open, vec![closed])
        }
        Claim::Theorem3 => (verify_theorem3_chain(&config.endpoint, &config.orders, config.grid, p, n)?, vec![]),
        Claim::Statement2 => {
            let cert = verify_statement2_improvement(p, n, config.grid)?;
            let parts = vec![cert.part_a.clone(), cert.part_b.clone(), cert.part_c.clone()];
            (cert.combined, parts)
        }
    };
    let refs: Vec<&CertificateReport> = extra.iter().collect();
    Ok(Outcome {
        success: report.verdict.is_proved(),
        body: render_report(&report, &refs, config.output_format),
    })
}

fn ladder(config: &RunConfig) -> Result<Outcome, CliError> {
    let (p, n) = (config.precision, config.truncation);
    let report = verify_ladder(config.function, &config.endpoint, &config.orders, config.grid, &config.beta, p, n)?;
    let success = report.verdict.is_proved();
    if config.output_format == OutputFormat::Json {
        return Ok(Outcome { body: render_report(&report, &[], OutputFormat::Json), success });
    }
    let func = build(config.function, n, &config.beta.enclosure(p))?;
    let c = config.endpoint.enclosure(p);
    let lad = build_ladder(&func.series, &c, &config.orders, p)?;
    let mut header = vec!["x".to_string()];
    header.extend(config.orders.iter().map(|k| format!("T_{k}")));
    header.push("f".into());
    header.extend(config.orders.iter().rev().map(|k| format!("𝕋_{k}")));
    header.push("width".into());
    let mut rows = Vec::new();
    let last = config.grid - 1;
    for i in 0..config.grid {
        // grid on [0, c]; the last point is c itself
        let x = if i == last {
            c.clone()
        } else {
            Enclosure::point(c.lo() * Rational::new((i as i64).into(), (last as i64).into()))
        };
        let mut cells = vec![x.clone()];
        cells.extend(lad.lower().iter().map(|q| q.eval(&x, p)));
        cells.push(func.series.eval_with_tail(&x, p)?);
        cells.extend(lad.upper().iter().rev().map(|q| q.eval(&x, p)));
        rows.push(cells);
    }
    let body = match config.output_format {
        OutputFormat::Csv => {
            let mut out = header.join(",");
            out.push('\n');
            for cells in &rows {
                let width = cells.iter().map(Enclosure::width).max().unwrap_or_default();
                let mut line: Vec<String> = cells.iter().map(|e| decimal(&e.midpoint())).collect();
                line.push(format!("{:e}", to_f64(&width)));
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        _ => {
            let mut out = report.to_string();
            out.push('\n');
            let cols = &header[..header.len() - 1];
            let _ = writeln!(out, "{}", cols.iter().map(|h| format!("{h:>14}")).collect::<String>());
            for cells in &rows {
                let line: String = cells.iter().map(|e| format!("{:>14.10}", e.to_f64_mid())).collect();
                let _ = writeln!(out, "{line}");
            }
            out
        }
    };
    Ok(Outcome { body, success })
}

fn constants(config: &RunConfig) -> Result<Outcome, CliError> {
    let (p, n) = (config.precision, config.truncation);
    let rows = paper_constants(p, n)?;
    let success = rows.iter().all(|r| r.matches);
    let body = match config.output_format {
        OutputFormat::Text => {
            let mut out = format!(
                "{:<14} {:>24} {:>24}  {:<36} {}\n",
                "name", "lo", "hi", "published", "match"
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:<14} {:>24} {:>24}  {:<36} {}",
                    r.name,
                    decimal(r.value.lo()),
                    decimal(r.value.hi()),
                    r.reference,
                    if r.matches { "yes" } else { "NO" }
                );
            }
            out
        }
        OutputFormat::Csv => {
            let mut out = String::from("name,midpoint,width,published,match\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_field(&r.name),
                    decimal(&r.value.midpoint()),
                    width_cell(&r.value),
                    csv_field(&r.reference),
                    r.matches
                );
            }
            out
        }
        OutputFormat::Json => {
            let report = CertificateReport {
                claim_id: "constants".into(),
                verdict: if success { Verdict::Proved } else { Verdict::Refuted },
                hypotheses: rows
                    .iter()
                    .map(|r| crate::certify::HypothesisCheck {
                        name: format!("{}~{}", r.name, r.reference),
                        passed: r.matches,
                    })
                    .collect(),
                enclosures: rows.iter().map(|r| (r.name.clone(), (&r.value).into())).collect(),
                precision_used: p.budget(),
                truncation_used: n,
            };
            format!("{}\n", report.to_json())
        }
    };
    Ok(Outcome { body, success })
}

fn remainder(config: &RunConfig, kind: RemainderKind, order: usize, tol: &Rational) -> Result<Outcome, CliError> {
    let (p, n) = (config.precision, config.truncation);
    let result: MaxSearchResult = if config.function == FunctionId::F && config.endpoint == Endpoint::half_pi() {
        let (first, second) = f_remainder_maxima(&config.endpoint, order, tol, p, n)?;
        if kind == RemainderKind::First { first } else { second }
    } else {
        let func = build(config.function, n, &config.beta.enclosure(p))?;
        let c = config.endpoint.enclosure(p);
        let b = (kind == RemainderKind::Second).then_some(&c);
        remainder_max(&func, kind, order, b, (&Enclosure::zero(), &c), tol, p)?
    };
    let kind_name = if kind == RemainderKind::First { "first" } else { "second" };
    let report = CertificateReport {
        claim_id: format!("remainder_max.{}.{kind_name}.{order}", config.function),
        verdict: Verdict::Proved,
        hypotheses: vec![crate::certify::HypothesisCheck {
            name: format!("bracket<tol:{} samples, depth {}", result.samples_used, result.refinement_depth),
            passed: result.argmax.width() <= *tol,
        }],
        enclosures: [("argmax", &result.argmax), ("max_value", &result.max_value)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.into()))
            .collect(),
        precision_used: p.budget(),
        truncation_used: n,
    };
    let body = match config.output_format {
        OutputFormat::Text => format!(
            "max |{}_{order}| of {} on [0, {}]\n  argmax     {:.12}\n  max value  {:.12}\n  samples    {}\n  depth      {}\n",
            if kind == RemainderKind::First { "R" } else { "RR" },
            config.function,
            config.endpoint,
            result.argmax,
            result.max_value,
            result.samples_used,
            result.refinement_depth
        ),
        _ => render_report(&report, &[], config.output_format),
    };
    Ok(Outcome { body, success: true })
}

#[derive(Serialize)]
struct SeriesExport<'a> {
    function: &'a str,
    truncation: usize,
    tail: &'a str,
    coefficients: Vec<String>,
}

fn export(config: &RunConfig) -> Result<Outcome, CliError> {
    let (p, n) = (config.precision, config.truncation);
    let func = build(config.function, n, &config.beta.enclosure(p))?;
    let coeffs = func.series.coeffs();
    let body = match config.output_format {
        OutputFormat::Text => format!("{} = {}\ntail: {}\n", func.id, func.series, func.series.tail().label()),
        OutputFormat::Csv => {
            let mut out = String::from("k,coefficient,decimal\n");
            for (k, c) in coeffs.iter().enumerate() {
                let _ = writeln!(out, "{k},{}/{},{}", c.numer(), c.denom(), decimal(c));
            }
            out
        }
        OutputFormat::Json => {
            let doc = SeriesExport {
                function: func.id.name(),
                truncation: n,
                tail: func.series.tail().label(),
                coefficients: coeffs.iter().map(crate::numeric::to_fraction_string).collect(),
            };
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("export serialises"))
        }
    };
    Ok(Outcome { body, success: true })
}

/// Executes a validated configuration; the caller decides where the body
/// goes.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    match &config.command {
        Command::Verify(claim) => verify(config, *claim),
        Command::Ladder => ladder(config),
        Command::Constants => constants(config),
        Command::RemainderMax { kind, order, tol } => remainder(config, *kind, *order, tol),
        Command::Export => export(config),
    }
}

/// Executes and writes the artifact to `--out` or `stdout`; returns the
/// exit code.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = match execute(config) {
        Ok(o) => o,
        Err(e) => return report_error(e, stdout, stderr),
    };
    let written = match &config.output_path {
        Some(path) => std::fs::write(path, &outcome.body),
        None => stdout.write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "twin-taylor: cannot write output: {e}");
        return EXIT_IO;
    }
    if outcome.success {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn report_error(e: CliError, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let code = e.exit_code();
    match e {
        CliError::Info(text) => {
            let _ = write!(stdout, "{text}");
        }
        CliError::Usage(msg) => {
            let _ = writeln!(stderr, "{}", msg.trim_end());
        }
        CliError::Failed(msg) | CliError::Io(msg) => {
            let _ = writeln!(stderr, "twin-taylor: {msg}");
        }
    }
    code
}

/// Full entry point: parse, run, and map every failure to its exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => run(&config, stdout, stderr),
        Err(e) => report_error(e, stdout, stderr),
    }
}
