//! `hypercert` command-line front end.
//!
//! Exit codes: 0 when the result is proved, 2 when it is undetermined or a
//! certificate does not validate, 1 on usage or domain errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hypercert::certfile::{self, Body};
use hypercert::corpus::{self, ItemStatus, RunOptions};
use hypercert::expr::Expr;
use hypercert::interval::{Interval, Scalar};
use hypercert::minimize::{certified_infimum, check_minimization, scan};
use hypercert::prover::{certificate_check, verify_strict, InequalityStatement, ProverConfig, Region};
use hypercert::rug::float::Round;

#[derive(Parser)]
#[command(name = "hypercert", version, about = "Certify inequalities with interval arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Working precision in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Maximum bisection depth.
    #[arg(long, global = true)]
    max_depth: Option<u32>,
    /// Maximum number of boxes the search may examine.
    #[arg(long, global = true)]
    leaf_budget: Option<u64>,
    /// Target width of the infimum enclosure.
    #[arg(long, global = true, default_value = "1e-4")]
    target_width: String,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for property-test sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (for corpus, a directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify `lhs < rhs` on a box.
    Verify {
        statement: String,
        /// Variable range `name=lo:hi`; repeat for each variable.
        #[arg(long = "var", required = true)]
        vars: Vec<String>,
    },
    /// Run a corpus item, or `all`.
    Corpus { id: String },
    /// Certified infimum of a univariate expression.
    Infimum {
        expression: String,
        #[arg(long = "var")]
        var: String,
    },
    /// Tabulate enclosures at equally spaced points as CSV.
    Scan {
        expression: String,
        #[arg(long = "var")]
        var: String,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Re-check a certificate file.
    Validate { path: PathBuf },
}

/// A failure that maps to exit code 1.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

const PROVED: u8 = 0;
const UNDETERMINED: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(e)) => {
            let mut message = String::new();
            for cause in e.chain().map(|c| c.to_string()) {
                if !message.contains(&cause) {
                    message += if message.is_empty() { "" } else { ": " };
                    message += &cause;
                }
            }
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Usage> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(anyhow!("--threads must be positive").into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let common = &cli.common;
    match &cli.command {
        Command::Verify { statement, vars } => verify(common, statement, vars),
        Command::Corpus { id } => run_corpus(common, id),
        Command::Infimum { expression, var } => infimum(common, expression, var),
        Command::Scan { expression, var, points } => run_scan(common, expression, var, *points),
        Command::Validate { path } => validate(path),
    }
}

impl Common {
    fn prover(&self) -> Result<ProverConfig> {
        let mut cfg = ProverConfig::default();
        if let Some(p) = self.precision {
            cfg.start_precision = p;
            cfg.max_precision = cfg.max_precision.max(p);
        }
        if let Some(d) = self.max_depth {
            cfg.max_depth = d;
        }
        if let Some(b) = self.leaf_budget {
            cfg.leaf_budget = b;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn target_width(&self) -> Result<Scalar> {
        let w = Scalar::from_decimal(&self.target_width, 64, Round::Down)
            .map_err(|e| anyhow!("--target-width {:?}: {e}", self.target_width))?;
        if w.is_zero() || w.is_sign_negative() {
            bail!("--target-width must be positive");
        }
        Ok(w)
    }
}

/// Parses `name=lo:hi`.
fn parse_var(text: &str) -> Result<(String, String, String)> {
    let (name, range) = text.split_once('=').ok_or_else(|| anyhow!("expected name=lo:hi, got {text:?}"))?;
    let (lo, hi) = range.split_once(':').ok_or_else(|| anyhow!("expected lo:hi, got {range:?}"))?;
    Ok((name.trim().to_string(), lo.trim().to_string(), hi.trim().to_string()))
}

fn region(vars: &[String]) -> Result<Region> {
    let mut out = Vec::new();
    for v in vars {
        let (name, lo, hi) = parse_var(v)?;
        let iv = Interval::from_decimal_bounds(&lo, &hi, 64).map_err(|e| anyhow!("range for {name}: {e}"))?;
        out.push((name, iv));
    }
    Ok(Region::new(out)?)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn verify(common: &Common, statement: &str, vars: &[String]) -> Result<u8, Usage> {
    let cfg = common.prover()?;
    let stmt = InequalityStatement::parse(statement, region(vars)?)?;
    let cert = verify_strict(&stmt, &cfg)?;
    let proved = cert.is_proved() && certificate_check(&cert, &stmt).is_ok();
    println!("{}", stmt.render());
    println!("domain: {}", stmt.domain);
    println!("{} leaves, {} boxes examined", cert.leaves.len(), cert.boxes_examined);
    if proved {
        println!("status: proved");
    } else {
        println!("status: undetermined ({} open boxes)", cert.frontier().len());
    }
    if let Some(out) = &common.out {
        write(out, &certfile::render(&Body::Bisection(cert)))?;
    }
    Ok(if proved { PROVED } else { UNDETERMINED })
}

fn run_corpus(common: &Common, id: &str) -> Result<u8, Usage> {
    let items = if id == "all" { corpus::builtin_items() } else { vec![corpus::item(id)?] };
    let mut opts = RunOptions { prover: common.prover()?, seed: common.seed, ..RunOptions::default() };
    opts.target_width = common.target_width()?;
    if let Some(p) = common.precision {
        opts.precision = p;
    }
    if let Some(dir) = &common.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut code = PROVED;
    println!("{:<14} {:<13} status", "item", "expected");
    for item in &items {
        let outcome = corpus::run_item(item, &opts)?;
        let status = match &outcome.status {
            ItemStatus::Proved => "proved".to_string(),
            ItemStatus::Passed => "passed".to_string(),
            ItemStatus::Undetermined(why) => format!("undetermined: {why}"),
            ItemStatus::Failed(why) => format!("FAILED: {why}"),
        };
        println!("{:<14} {:<13} {status}", outcome.id, item.expected());
        for d in &outcome.details {
            println!("    {d}");
        }
        if !outcome.status.is_success() {
            code = UNDETERMINED;
        }
        if let Some(dir) = &common.out {
            for body in &outcome.artifacts {
                if let Body::Composite(c) = body {
                    for comp in &c.components {
                        write(&dir.join(format!("{}.cert", comp.sha256)), &certfile::render(&comp.body))?;
                    }
                }
                write(&dir.join(format!("{}.cert", outcome.id)), &certfile::render(body))?;
            }
        }
    }
    Ok(code)
}

fn univariate(expression: &str, var: &str) -> Result<(Expr, Region)> {
    let e: Expr = expression.parse()?;
    let domain = region(&[var.to_string()])?;
    Ok((e, domain))
}

fn infimum(common: &Common, expression: &str, var: &str) -> Result<u8, Usage> {
    let (e, domain) = univariate(expression, var)?;
    let cfg = common.prover()?;
    let result = certified_infimum(&e, &domain, &common.target_width()?, &cfg)?;
    let ok = result.converged && check_minimization(&result).is_ok();
    println!("{} on {}", result.expression, result.domain);
    println!("inf in {}", corpus::decimal_interval(&result.inf_enclosure, 12));
    for b in &result.argmin_boxes {
        println!("argmin candidate {}", corpus::decimal_interval(b, 6));
    }
    println!("status: {}", if ok { "converged" } else { "not converged" });
    if let Some(out) = &common.out {
        write(out, &certfile::render(&Body::Minimization(result)))?;
    }
    Ok(if ok { PROVED } else { UNDETERMINED })
}

fn run_scan(common: &Common, expression: &str, var: &str, points: usize) -> Result<u8, Usage> {
    let (e, domain) = univariate(expression, var)?;
    let table = scan(&e, &domain, points, common.precision.unwrap_or(128))?;
    let csv = table.to_csv();
    match &common.out {
        Some(out) => write(out, &csv)?,
        None => print!("{csv}"),
    }
    let invalid = table.invalid_rows();
    if invalid > 0 {
        eprintln!("{invalid} points outside the expression's domain");
    }
    Ok(PROVED)
}

fn validate(path: &Path) -> Result<u8, Usage> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let verdict = certfile::parse(&text).map_err(|e| e.to_string()).and_then(|body| {
        let kind = body.kind();
        certfile::validate(&body).map(|()| kind)
    });
    match verdict {
        Ok(kind) => {
            println!("valid {kind} certificate");
            Ok(PROVED)
        }
        Err(why) => {
            println!("rejected: {why}");
            Ok(UNDETERMINED)
        }
    }
}
