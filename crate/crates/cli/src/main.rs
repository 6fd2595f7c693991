//! `nonassoc`: graded dimensions, identity checks, derived-algebra identities
//! and the reproducible check suites.
//!
//! Exit codes: 0 when everything passed, 1 when a check failed, 2 on usage,
//! parse or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nonassoc::derived::{
    derived_kernel, generates_with_kernel, linearize, render_bracket_polynomial, Sign,
};
use nonassoc::parser::{parse_identity, BracketMode, Identity};
use nonassoc::registry::{derived_identity, Registry, DERIVED_IDENTITIES};
use nonassoc::repro::{self, Context, ENGINE_VERSION};
use nonassoc::variety::{ComponentReport, Engine};
use nonassoc::MultiDegree;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "nonassoc",
    version,
    about = "Identities and graded dimensions of nonassociative algebras"
)]
struct Cli {
    /// Worker threads for row generation and elimination.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Extra variety definitions to load.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// Directory caching dimension reports.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Largest degree accepted without complaint.
    #[arg(long, global = true, default_value_t = 6)]
    max_degree: u32,
    /// Also write line-delimited JSON records to this path (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension of a graded component of a variety's free algebra.
    Dim {
        variety: String,
        /// A multidegree such as `2,1`, or a degree with --multilinear or --alphabet.
        multidegree: String,
        /// Read the argument as a degree and use the multilinear component.
        #[arg(long)]
        multilinear: bool,
        /// Read the argument as a degree and sweep every multidegree over N letters.
        #[arg(long, value_name = "N")]
        alphabet: Option<usize>,
        /// Print the canonical quotient basis.
        #[arg(long)]
        basis: bool,
    },
    /// Test whether an identity holds in a variety.
    Check { variety: String, identity: String },
    /// Identities of the derived algebra `host(-)` or `host(+)`.
    Derived {
        host: String,
        /// `minus` or `plus`.
        sign: String,
        /// Multilinear degree.
        degree: u32,
        /// Comma-separated identity names, or a file with one name or identity per line.
        #[arg(long)]
        candidates: Option<String>,
    },
    /// Run check suites.
    Repro {
        suite: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// List varieties, named derived identities and suites.
    List,
}

/// Usage or input error; exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<bool> {
    let threads = cli.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?;
    let mut registry = Registry::builtin();
    if let Some(path) = &cli.registry {
        let text =
            fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        registry.extend(&text)?;
    }
    let mut out = Output::new(cli.json.as_deref());
    let result = pool.install(|| match &cli.cmd {
        Cmd::Dim {
            variety,
            multidegree,
            multilinear,
            alphabet,
            basis,
        } => {
            let ds = component_list(multidegree, *multilinear, *alphabet)?;
            cmd_dim(&cli, &registry, variety, &ds, *basis, &mut out)
        }
        Cmd::Check { variety, identity } => cmd_check(&cli, &registry, variety, identity, &mut out),
        Cmd::Derived {
            host,
            sign,
            degree,
            candidates,
        } => cmd_derived(
            &cli,
            &registry,
            host,
            sign,
            *degree,
            candidates.as_deref(),
            &mut out,
        ),
        Cmd::Repro { suite, all } => cmd_repro(registry, suite.as_deref(), *all, &mut out),
        Cmd::List => cmd_list(&registry),
    });
    out.finish()?;
    result
}

/// Text goes to stdout; JSON records are collected for `--json`.
struct Output {
    json_path: Option<PathBuf>,
    records: String,
}

impl Output {
    fn new(json_path: Option<&Path>) -> Self {
        Output {
            json_path: json_path.map(Path::to_path_buf),
            records: String::new(),
        }
    }

    fn record(&mut self, line: &str) {
        self.records.push_str(line);
        self.records.push('\n');
    }

    fn finish(&self) -> CliResult<()> {
        match &self.json_path {
            None => {}
            Some(p) if p.as_os_str() == "-" => print!("{}", self.records),
            Some(p) => fs::write(p, &self.records)
                .map_err(|e| UsageError(format!("{}: {e}", p.display())))?,
        }
        Ok(())
    }
}

fn component_list(
    arg: &str,
    multilinear: bool,
    alphabet: Option<usize>,
) -> CliResult<Vec<MultiDegree>> {
    if multilinear && alphabet.is_some() {
        return Err(UsageError(
            "--multilinear and --alphabet exclude each other".into(),
        ));
    }
    if !multilinear && alphabet.is_none() {
        return Ok(vec![arg.parse::<MultiDegree>()?]);
    }
    let n: u32 = arg
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("expected a degree, got `{arg}`")))?;
    if n == 0 {
        return Err(UsageError("degree must be positive".into()));
    }
    Ok(match alphabet {
        None => vec![MultiDegree::multilinear(n as usize)],
        Some(k) => weak_compositions(n, k),
    })
}

/// Multidegrees of degree `n` over `k` letters, lexicographic in the counts.
fn weak_compositions(n: u32, k: usize) -> Vec<MultiDegree> {
    fn rec(n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
        if cur.len() + 1 == k {
            cur.push(n);
            out.push(MultiDegree::new(cur.clone()));
            cur.pop();
            return;
        }
        for c in 0..=n {
            cur.push(c);
            rec(n - c, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn guard(cli: &Cli, degree: u32) -> CliResult<()> {
    if degree > cli.max_degree {
        return Err(UsageError(format!(
            "degree {degree} exceeds --max-degree {}",
            cli.max_degree
        )));
    }
    Ok(())
}

fn cache_file(dir: &Path, engine: &Engine, d: &MultiDegree, basis: bool) -> PathBuf {
    let counts: Vec<String> = d.counts().iter().map(u32::to_string).collect();
    dir.join(format!(
        "{ENGINE_VERSION}-{}-{}{}.json",
        engine.variety().fingerprint(),
        counts.join("_"),
        if basis { "-basis" } else { "" }
    ))
}

fn cmd_dim(
    cli: &Cli,
    registry: &Registry,
    variety: &str,
    ds: &[MultiDegree],
    basis: bool,
    out: &mut Output,
) -> CliResult<bool> {
    let engine = Engine::new(registry.variety(variety)?);
    for d in ds {
        guard(cli, d.degree())?;
    }
    for d in ds {
        let path = cli
            .cache
            .as_ref()
            .map(|dir| cache_file(dir, &engine, d, basis));
        let cached: Option<ComponentReport> = path
            .as_ref()
            .and_then(|p| fs::read_to_string(p).ok())
            .and_then(|s| serde_json::from_str(&s).ok());
        let report = match cached {
            Some(r) => r,
            None => {
                let r = engine.dimension(d, basis);
                if let Some(p) = &path {
                    fs::create_dir_all(p.parent().expect("cache file has a directory"))?;
                    fs::write(p, r.json_line())?;
                }
                r
            }
        };
        println!("{}", report.text());
        out.record(&report.json_line());
    }
    Ok(true)
}

fn cmd_check(
    cli: &Cli,
    registry: &Registry,
    variety: &str,
    text: &str,
    out: &mut Output,
) -> CliResult<bool> {
    let engine = Engine::new(registry.variety(variety)?);
    let f = parse_identity(text, BracketMode::Expand)?;
    guard(cli, f.degree())?;
    let pieces = if f.multilinear {
        vec![f.clone()]
    } else {
        linearize(&f)
    };
    let mut residues = Vec::new();
    for g in &pieces {
        let Some(d) = g.poly.multidegree()? else {
            continue;
        };
        let r = engine.consequences(&d).reduce(&g.poly)?;
        if !r.is_zero() {
            residues.push(r.render_with(&g.vars));
        }
    }
    let holds = residues.is_empty();
    if holds {
        println!("holds in {variety}");
    } else {
        println!("fails in {variety}");
        for r in &residues {
            println!("  residue: {r}");
        }
    }
    out.record(
        &json!({
            "variety": variety,
            "identity": text,
            "linearized": !f.multilinear,
            "holds": holds,
            "residues": residues,
        })
        .to_string(),
    );
    Ok(holds)
}

/// Names from the built-in table, or a file holding one name or derived
/// identity per line (`#` starts a comment).
fn load_candidates(spec: &str) -> CliResult<Vec<Identity>> {
    let path = Path::new(spec);
    let items: Vec<String> = if path.is_file() {
        fs::read_to_string(path)?
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
            .filter(|l| !l.is_empty())
            .collect()
    } else {
        spec.split(',').map(|s| s.trim().to_string()).collect()
    };
    let mut out = Vec::new();
    for item in items {
        if DERIVED_IDENTITIES.iter().any(|(n, _)| *n == item) {
            out.extend(derived_identity(&item)?);
        } else if item.contains('=') {
            out.push(parse_identity(&item, BracketMode::Derived)?);
        } else {
            let names: Vec<&str> = DERIVED_IDENTITIES.iter().map(|(n, _)| *n).collect();
            return Err(UsageError(format!(
                "unknown identity `{item}`; named identities: {}",
                names.join(", ")
            )));
        }
    }
    Ok(out)
}

fn cmd_derived(
    cli: &Cli,
    registry: &Registry,
    host: &str,
    sign: &str,
    degree: u32,
    candidates: Option<&str>,
    out: &mut Output,
) -> CliResult<bool> {
    let sign: Sign = sign.parse()?;
    guard(cli, degree)?;
    if degree == 0 {
        return Err(UsageError("degree must be positive".into()));
    }
    let candidates = candidates.map(load_candidates).transpose()?;
    let engine = Engine::new(registry.variety(host)?);
    let d = MultiDegree::multilinear(degree as usize);
    let kernel = derived_kernel(&engine, sign, &d);
    match candidates {
        None => {
            println!(
                "{host}({sign}) degree {degree}: {} words, evaluation rank {}, kernel dimension {}",
                kernel.total(),
                kernel.eval_rank(),
                kernel.dimension()
            );
            let basis: Vec<String> = kernel
                .basis()
                .iter()
                .map(|p| render_bracket_polynomial(p, sign))
                .collect();
            for b in &basis {
                println!("  {b} = 0");
            }
            out.record(
                &json!({
                    "host": host,
                    "sign": sign,
                    "multidegree": d,
                    "total": kernel.total(),
                    "eval_rank": kernel.eval_rank(),
                    "kernel_dim": kernel.dimension(),
                    "kernel": basis,
                })
                .to_string(),
            );
            Ok(true)
        }
        Some(ids) => {
            let v = generates_with_kernel(&ids, &kernel);
            println!(
                "{host}({sign}) degree {degree}: kernel {}, closure {}, sound {}, gap {}, generates: {}",
                v.kernel_dim,
                v.closure_dim,
                v.sound,
                v.gap(),
                v.generates
            );
            let mut rec = serde_json::to_value(&v)?;
            rec["host"] = json!(host);
            rec["sign"] = json!(sign);
            rec["gap"] = json!(v.gap());
            out.record(&rec.to_string());
            Ok(v.generates)
        }
    }
}

fn cmd_repro(
    registry: Registry,
    suite: Option<&str>,
    all: bool,
    out: &mut Output,
) -> CliResult<bool> {
    let names: Vec<&str> = match (suite, all) {
        (Some(_), true) => return Err(UsageError("give a suite name or --all, not both".into())),
        (None, false) => {
            return Err(UsageError(format!(
                "give a suite name or --all; available: {}",
                repro::suite_names().join(", ")
            )))
        }
        (Some(s), false) => vec![s],
        (None, true) => repro::suite_names(),
    };
    let ctx = Context::new(registry);
    let report = repro::run_suites(&ctx, &names)?;
    print!("{}", report.text());
    std::io::stdout().flush()?;
    for line in report.json_lines().lines() {
        out.record(line);
    }
    Ok(report.all_passed())
}

fn cmd_list(registry: &Registry) -> CliResult<bool> {
    println!("varieties: {}", registry.names().join(", "));
    let ids: Vec<&str> = DERIVED_IDENTITIES.iter().map(|(n, _)| *n).collect();
    println!("derived identities: {}", ids.join(", "));
    println!("suites: {}", repro::suite_names().join(", "));
    Ok(true)
}
