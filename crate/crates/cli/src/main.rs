//! `brauer`: batch front end over the core library.
//!
//! Every command prints one JSON document. Failures print `{"error": …}` and
//! exit with status 1; a failed comparison (`decomp --method both`, `selftest`)
//! exits with status 2.

use std::path::PathBuf;
use std::process::ExitCode;

use brauer_core::acceptance;
use brauer_core::algebra::{jm_element, mult, Element};
use brauer_core::cells::CellModule;
use brauer_core::diagrams::enumerate;
use brauer_core::gtheory::{blocks, op_matrix, partitions_up_to, path_character, phi_index, xi, OpKind};
use brauer_core::klmod::{decomposition_matrix_kl, default_rank, kl_multiplicity, KLContext};
use brauer_core::oracle::decomp_oracle;
use brauer_core::scalar::{fmt_q, parse_q, Scalar, Q};
use brauer_core::symgrp::Partition;
use brauer_core::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "brauer", version, about = "Brauer algebra computations with JSON output")]
struct Cli {
    /// Loop parameter: a rational such as "0" or "1/2", or "delta" for the symbolic parameter.
    #[arg(long, global = true, default_value = "delta", allow_hyphen_values = true)]
    delta0: String,
    /// Characteristic for the combinatorial commands: 0 or an odd prime.
    #[arg(long, global = true, default_value_t = 0)]
    p: u64,
    /// Largest m for which structure tables may be built.
    #[arg(long, global = true, default_value_t = 5)]
    max_m: usize,
    /// Confirm every KL multiplicity at rank n + 2.
    #[arg(long, global = true)]
    rank_check: bool,
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All (m, s)-diagrams in canonical order.
    Enumerate { m: usize, s: usize },
    /// Product `a ∘ b` of two elements read from JSON files (`b` acts first).
    Mult { a: PathBuf, b: PathBuf },
    /// The Jucys–Murphy element X_i of B_m.
    Jm { i: usize, m: usize },
    /// Dimension, Gram matrix and JM character of a cell module.
    Cell { m: usize, lambda: String },
    /// Character predicted by colored up-down paths.
    CharacterPaths { lambda: String, m: usize },
    /// Blocks of Λ⁺(m) by weight class.
    Blocks { m: usize },
    /// Matrix of ẽ_i on partitions of size at most N.
    Etilde {
        #[arg(allow_hyphen_values = true)]
        i: String,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
    },
    /// Wedge encoding ξ and the index φ of a partition.
    Fock { lambda: String },
    /// Multiplicity [M(μ) : L(λ)] from KL polynomials.
    Kl {
        lambda: String,
        mu: String,
        /// Rank n; defaults to |λ| + |μ| + 2.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Decomposition matrix [Δ(μ) : L(λ)] of B_m.
    Decomp {
        m: usize,
        #[arg(long, value_enum, default_value_t = Method::Kl)]
        method: Method,
    },
    /// Runs the acceptance suite.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Kl,
    Oracle,
    Both,
}

struct Config {
    delta: Scalar,
    p: u64,
    max_m: usize,
    rank_check: bool,
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Self> {
        let delta: Scalar = cli.delta0.parse()?;
        if cli.p == 2 {
            return Err(Error::OutOfRange("p = 2 is not supported".into()));
        }
        if cli.p != 0 && !brauer_core::linalg::is_prime(cli.p) {
            return Err(Error::OutOfRange(format!("p = {} is not prime", cli.p)));
        }
        Ok(Config { delta, p: cli.p, max_m: cli.max_m, rank_check: cli.rank_check })
    }

    fn numeric(&self) -> Result<Q> {
        self.delta.as_constant().ok_or_else(|| Error::Symbolic("pass a numeric --delta0".into()))
    }

    fn integral(&self) -> Result<i64> {
        let d = self.numeric()?;
        if !d.is_integer() {
            return Err(Error::OutOfRange(format!("--delta0 {} must be an integer here", fmt_q(&d))));
        }
        i64::try_from(d.to_integer()).map_err(|_| Error::OutOfRange("--delta0 is too large".into()))
    }

    fn characteristic_zero(&self, what: &str) -> Result<()> {
        if self.p != 0 {
            return Err(Error::OutOfRange(format!("{what} works in characteristic 0 only")));
        }
        Ok(())
    }

    fn within_bound(&self, m: usize) -> Result<()> {
        if m > self.max_m {
            return Err(Error::ResourceBound(format!("m = {m} exceeds --max-m {}", self.max_m)));
        }
        Ok(())
    }
}

/// Integers as JSON numbers, other rationals as strings.
fn qv(x: &Q) -> Value {
    if x.is_integer() {
        if let Ok(n) = i64::try_from(x.to_integer()) {
            return json!(n);
        }
    }
    json!(fmt_q(x))
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Parse(e.to_string()))
}

fn partition(s: &str) -> Result<Partition> {
    s.parse()
}

fn read_element(path: &PathBuf) -> Result<Element> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn character_json(ch: &std::collections::BTreeMap<Vec<Q>, usize>) -> Value {
    Value::Array(ch.iter().map(|(k, v)| json!({"contents": k.iter().map(qv).collect::<Vec<_>>(), "multiplicity": v})).collect())
}

/// Result document plus whether every check it carries passed.
fn execute(cmd: &Command, cfg: &Config) -> Result<(Value, bool)> {
    let ok = |v: Value| Ok((v, true));
    match cmd {
        Command::Enumerate { m, s } => {
            if m + s > 2 * cfg.max_m + 2 {
                return Err(Error::ResourceBound(format!("m + s = {} exceeds 2·(--max-m) + 2", m + s)));
            }
            ok(to_value(&enumerate(*m, *s))?)
        }
        Command::Mult { a, b } => {
            let (x, y) = (read_element(a)?, read_element(b)?);
            if x.hom_space().0 != y.hom_space().1 {
                return Err(Error::ArityMismatch(format!("{:?} after {:?}", x.hom_space(), y.hom_space())));
            }
            ok(to_value(&mult(&x, &y, &cfg.delta))?)
        }
        Command::Jm { i, m } => ok(to_value(&jm_element(*i, *m, &cfg.delta)?)?),
        Command::Cell { m, lambda } => {
            let lambda = partition(lambda)?;
            cfg.within_bound(*m)?;
            let module = CellModule::new(*m, cfg.delta.clone(), &lambda)?;
            let gram = module.gram_matrix()?.to_rows();
            let character = match cfg.delta.as_constant() {
                Some(_) => character_json(&module.character()?),
                None => Value::Null,
            };
            ok(json!({
                "m": m,
                "lambda": to_value(&lambda)?,
                "delta0": cfg.delta.to_string(),
                "dim": module.dim(),
                "expected_dim": CellModule::expected_dim(*m, &lambda).to_string(),
                "gram": to_value(&gram)?,
                "character": character,
            }))
        }
        Command::CharacterPaths { lambda, m } => {
            let lambda = partition(lambda)?;
            ok(character_json(&path_character(&lambda, *m, &cfg.numeric()?)))
        }
        Command::Blocks { m } => ok(to_value(&blocks(*m, &cfg.numeric()?, cfg.p)?)?),
        Command::Etilde { i, max_size } => {
            let mat = op_matrix(&OpKind::ETilde(parse_q(i)?), &partitions_up_to(*max_size), &cfg.numeric()?, cfg.p)?;
            ok(to_value(&mat)?)
        }
        Command::Fock { lambda } => {
            let lambda = partition(lambda)?;
            let (conj, d) = phi_index(&lambda, &cfg.numeric()?)?;
            let mut seq: Vec<Value> = xi(&conj, &d, conj.len() + 1).iter().map(qv).collect();
            seq.push(json!("..."));
            ok(json!({"xi": seq, "phi": {"lambda_conj": to_value(&conj)?, "d": qv(&d)}}))
        }
        Command::Kl { lambda, mu, rank } => {
            cfg.characteristic_zero("kl")?;
            let (lambda, mu) = (partition(lambda)?, partition(mu)?);
            let n = rank.unwrap_or_else(|| default_rank(&lambda, &mu));
            let ctx = KLContext::default();
            let value = kl_multiplicity(&ctx, &lambda, &mu, cfg.integral()?, n, cfg.rank_check)?;
            ok(json!({"lambda": to_value(&lambda)?, "mu": to_value(&mu)?, "rank": n, "multiplicity": value}))
        }
        Command::Decomp { m, method } => {
            cfg.characteristic_zero("decomp")?;
            let delta = cfg.numeric()?;
            let kl = || decomposition_matrix_kl(&KLContext::default(), *m, &delta, cfg.rank_check);
            let oracle = || {
                cfg.within_bound(*m)?;
                decomp_oracle(*m, &delta, cfg.max_m)
            };
            match method {
                Method::Kl => ok(to_value(&kl()?)?),
                Method::Oracle => ok(to_value(&oracle()?)?),
                Method::Both => {
                    let (a, b) = (oracle()?, kl()?);
                    let same = a == b;
                    Ok((json!({"oracle": to_value(&a)?, "kl": to_value(&b)?, "match": same}), same))
                }
            }
        }
        Command::Selftest => {
            let results = acceptance::run_all();
            for r in &results {
                eprintln!("{r}");
            }
            let all = results.iter().all(|r| r.passed);
            let rows: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "name": r.name,
                        "passed": r.passed,
                        "detail": r.detail,
                        "seconds": r.elapsed.as_secs_f64(),
                        "budget_seconds": r.budget.as_secs(),
                    })
                })
                .collect();
            Ok((json!({"criteria": rows, "passed": all}), all))
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::OutOfRange(_) => "out_of_range",
        Error::ArityMismatch(_) => "arity_mismatch",
        Error::InvalidDiagram(_) => "invalid_diagram",
        Error::Parse(_) => "parse",
        Error::ResourceBound(_) => "resource_bound",
        Error::Symbolic(_) => "symbolic",
        Error::BadLabel(_) => "bad_label",
        Error::RankTooSmall(_) => "rank_too_small",
        Error::Audit(_) => "audit",
        Error::NotClosed(_) => "not_closed",
    }
}

fn emit(doc: &Value, out: Option<&PathBuf>) -> std::io::Result<()> {
    let text = serde_json::to_string(doc).expect("JSON values serialize");
    match out {
        Some(path) => std::fs::write(path, text + "\n"),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Config::from_cli(&cli).and_then(|cfg| execute(&cli.command, &cfg));
    let (doc, code) = match result {
        Ok((doc, true)) => (doc, 0),
        Ok((doc, false)) => (doc, 2),
        Err(e) => (json!({"error": {"kind": error_kind(&e), "message": e.to_string()}}), 1),
    };
    // Errors always go to standard output so a caller never loses them to a bad path.
    let target = if code == 1 { None } else { cli.out.as_ref() };
    if let Err(e) = emit(&doc, target) {
        println!("{}", json!({"error": {"kind": "io", "message": e.to_string()}}));
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
