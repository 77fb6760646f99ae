//! `hypermono`: verify maximal Galois images of hyperelliptic Jacobians.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypermono::arith::BigInt;
use hypermono::config::{Config, OutputFormat};
use hypermono::criteria::{
    detect_type, galois_certificate, maximality_pipeline, AnniChoices, CriteriaError, TypeFailure,
    TypeSpec,
};
use hypermono::curve::{CurveError, CurveSpec};
use hypermono::matgrp::{schreier_sims, GeneratorFile, MatGrpError, SchreierSimsOptions};
use hypermono::{data, selftest};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "hypermono",
    version,
    about = "Certify maximal Galois images for hyperelliptic Jacobians"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Seed for every randomized step
    #[arg(long, global = true, env = "HYPERMONO_SEED", default_value_t = 1)]
    seed: u64,
    /// Upper bound for prime searches
    #[arg(
        long,
        global = true,
        env = "HYPERMONO_PRIME_BOUND",
        default_value_t = 10_000
    )]
    prime_bound: u64,
    /// Largest field size p^d enumerated when counting points
    #[arg(
        long,
        global = true,
        env = "HYPERMONO_ENUM_CAP",
        default_value_t = 10_000_000
    )]
    enum_cap: u64,
    /// Include the expensive checks
    #[arg(long, global = true, env = "HYPERMONO_LONG", value_parser = clap::builder::BoolishValueParser::new())]
    long: bool,
    /// Worker threads for point counting
    #[arg(long, global = true, env = "HYPERMONO_WORKERS", default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, env = "HYPERMONO_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full certification for a curve and its choices file
    Verify {
        curve: PathBuf,
        choices: PathBuf,
        /// Odd primes to treat individually (default: from the choices file)
        #[arg(long, value_delimiter = ',')]
        small_primes: Option<Vec<u64>>,
    },
    /// Run the group-theory suite
    Selftest {
        /// Restrict to one genus
        #[arg(long)]
        g: Option<usize>,
    },
    /// Frobenius characteristic polynomial at p
    Charpoly { curve: PathBuf, p: u64 },
    /// Number of points over F_{p^d}
    Count { curve: PathBuf, p: u64, d: usize },
    /// Detect the type t-{q...} at p
    Type {
        curve: PathBuf,
        p: u64,
        t: u32,
        #[arg(required = true)]
        q: Vec<u64>,
    },
    /// Certificate that the Galois group of f is S_n
    Galois { curve: PathBuf },
    /// Order of the group generated by a generator file (default: bundled mod-8 generators)
    GroupOrder { generators: Option<PathBuf> },
}

/// Exit codes: 0 success, 1 negative result, 2 bad input, 3 internal error.
#[derive(Debug)]
enum Failure {
    Negative(String),
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CriteriaError> for Failure {
    fn from(e: CriteriaError) -> Self {
        match e {
            CriteriaError::Internal(_) => Failure::Internal(e.to_string()),
            CriteriaError::GaloisInconclusive { .. } => Failure::Negative(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<MatGrpError> for Failure {
    fn from(e: MatGrpError) -> Self {
        match e {
            MatGrpError::Unverified => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Output {
    format: Format,
}

impl Output {
    fn emit(&self, value: serde_json::Value, text: String) {
        match self.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
            Format::Text => print!("{text}"),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<CurveSpec, Failure> {
    Ok(CurveSpec::from_json(&read(path)?)?)
}

fn config(args: &GlobalArgs) -> Result<Config, Failure> {
    let config = Config {
        seed: args.seed,
        prime_bound: args.prime_bound,
        enum_cap: args.enum_cap,
        long: args.long,
        workers: args.workers,
        format: match args.format {
            Format::Json => OutputFormat::Json,
            Format::Text => OutputFormat::Text,
        },
    };
    config
        .validate()
        .map_err(|e| Failure::Input(e.to_string()))?;
    Ok(config)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = config(&cli.global)?;
    let out = Output {
        format: cli.global.format,
    };
    match cli.command {
        Command::Verify {
            curve,
            choices,
            small_primes,
        } => {
            let curve = load_curve(&curve)?;
            let choices = AnniChoices::from_json(&read(&choices)?)?;
            let small = small_primes.unwrap_or_else(|| choices.small_primes_or(curve.genus));
            let report = maximality_pipeline(&curve, &choices, &small, &cfg)?;
            out.emit(
                serde_json::to_value(&report).expect("json"),
                report.to_text(),
            );
            if report.verdict.exit_ok() {
                Ok(())
            } else {
                Err(Failure::Negative(format!(
                    "not certified: {}",
                    report.unmet.join(", ")
                )))
            }
        }
        Command::Selftest { g } => {
            let genera: Vec<usize> = match g {
                Some(g) if (2..=6).contains(&g) => vec![g],
                Some(g) => return Err(Failure::Input(format!("genus {g} outside 2..=6"))),
                None => (2..=6).collect(),
            };
            let results = selftest::run_suite(&genera, cfg.long, cfg.seed);
            let mut text = String::new();
            for r in &results {
                let _ = writeln!(
                    text,
                    "{} {:<48} {:>8.2}s  {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.seconds,
                    r.detail
                );
            }
            out.emit(json!({ "seed": cfg.seed, "results": results }), text);
            let failed: Vec<&str> = results
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.name.as_str())
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Negative(format!("failed: {}", failed.join(", "))))
            }
        }
        Command::Charpoly { curve, p } => {
            let curve = load_curve(&curve)?;
            let data = curve.frobenius_charpoly(p, &cfg.count_options())?;
            let rec = data.to_record();
            let text = format!(
                "p        {}\ncounts   {:?}\ncharpoly {}\ntrace    {}\n",
                rec.p, rec.counts, rec.charpoly, rec.trace
            );
            out.emit(serde_json::to_value(&rec).expect("json"), text);
            Ok(())
        }
        Command::Count { curve, p, d } => {
            let curve = load_curve(&curve)?;
            let n = curve.count_points(p, d, &cfg.count_options())?;
            out.emit(json!({ "p": p, "d": d, "count": n }), format!("{n}\n"));
            Ok(())
        }
        Command::Type { curve, p, t, q } => {
            let curve = load_curve(&curve)?;
            let spec = TypeSpec::new(t, q, p);
            match detect_type(&curve.f, &spec) {
                Ok(w) => {
                    let text = format!("type {}: {}\n", spec.label(), w.display());
                    let mut value = serde_json::to_value(&w).expect("json");
                    value["display"] = json!(w.display());
                    out.emit(value, text);
                    Ok(())
                }
                Err(
                    e @ (TypeFailure::NotPrime(_)
                    | TypeFailure::Parameters(_)
                    | TypeFailure::NotSquarefree),
                ) => Err(Failure::Input(e.to_string())),
                Err(e) => {
                    out.emit(
                        json!({ "spec": spec, "failure": e.to_string() }),
                        format!("type {}: not detected ({e})\n", spec.label()),
                    );
                    Err(Failure::Negative(e.to_string()))
                }
            }
        }
        Command::Galois { curve } => {
            let curve = load_curve(&curve)?;
            let cert = galois_certificate(&curve.f, cfg.prime_bound, cfg.seed)?;
            let mut text = format!("Gal(f) = S_{}\n", cert.degree);
            for w in &cert.witnesses {
                let _ = writeln!(
                    text,
                    "  {:<18} p = {:<6} degrees {:?}",
                    format!("{:?}", w.kind),
                    w.p,
                    w.pattern
                );
            }
            out.emit(serde_json::to_value(&cert).expect("json"), text);
            Ok(())
        }
        Command::GroupOrder { generators } => {
            let file = match generators {
                Some(path) => GeneratorFile::from_json(&read(&path)?)?,
                None => data::mod8_generators(),
            };
            let gens = file.matrices()?;
            let opts = SchreierSimsOptions {
                verify: true,
                ..SchreierSimsOptions::default()
            };
            let chain = schreier_sims(&gens, cfg.seed, &opts)?;
            let order = chain.order()?;
            let text = format!(
                "order          {}\n               = {}\norbit lengths  {:?}\n",
                order,
                factor_display(&BigInt::from(order.clone())),
                chain.orbit_lengths()
            );
            out.emit(
                json!({ "modulus": file.modulus, "dimension": file.dimension, "order": order.to_string(), "orbit_lengths": chain.orbit_lengths() }),
                text,
            );
            Ok(())
        }
    }
}

/// `n` as `m·2^k` with `m` odd.
fn factor_display(n: &BigInt) -> String {
    let k = n.trailing_zeros().unwrap_or(0);
    let m: BigInt = n >> k;
    format!("{m}·2^{k}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Negative(m) | Failure::Input(m) | Failure::Internal(m) => m,
            };
            eprintln!("hypermono: {msg}");
            ExitCode::from(f.code())
        }
    }
}
