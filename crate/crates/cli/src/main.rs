use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use tworep::analysis::{isogeny_report, ReportOptions, DEFAULT_K_MAX};
use tworep::cubic::{load_family, CubicFamily};
use tworep::document::TestSetDocument;
use tworep::oracle::{
    dump, make_ec_oracle_q, make_synthetic_oracle, make_table_oracle, parse_curve, write_table, Oracle, QueryLog,
};
use tworep::selmer::{selmer_group, unramified_subgroup, SelmerBasis};
use tworep::sets::{SearchConfig, DEFAULT_NORM_CAP};
use tworep::{BaseField, Error, Prime};

#[derive(Parser)]
#[command(name = "tworep", version, about = "Test-prime sets and black-box analysis of 2-adic Galois representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute (or load) and verify the test sets for (K, S).
    Sets(SetsArgs),
    /// Run the full analysis of an oracle against a test-set document.
    Analyze(AnalyzeArgs),
    /// Write an oracle's answers up to a norm bound as a table.
    OracleDump(DumpArgs),
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Base field: Q or Qi.
    #[arg(long)]
    field: Option<String>,
    /// Primes of S, comma separated (e.g. "2,37" or "1+i,1+2*i").
    #[arg(long = "bad-set", allow_hyphen_values = true)]
    bad_set: Option<String>,
}

#[derive(Args, Clone)]
struct OracleArgs {
    /// Table of `prime trace [det] [2^n]` rows.
    #[arg(long = "oracle-table", group = "oracle")]
    oracle_table: Option<PathBuf>,
    /// Weierstrass coefficients "a1 a2 a3 a4 a6" of a curve over Q.
    #[arg(long, group = "oracle", allow_hyphen_values = true)]
    curve: Option<String>,
    /// Diagonal representation "Δ1;Δ2".
    #[arg(long, group = "oracle", allow_hyphen_values = true)]
    synthetic: Option<String>,
}

#[derive(Args)]
struct SetsArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Cubic family file, one `c2 c1 c0` per line.
    #[arg(long)]
    cubics: Option<PathBuf>,
    /// Existing document to load instead of computing.
    #[arg(long)]
    sets: Option<PathBuf>,
    #[arg(long = "norm-cap", default_value_t = DEFAULT_NORM_CAP)]
    norm_cap: u64,
    /// Over Q(i), only search primes of degree 1.
    #[arg(long = "degree-one")]
    degree_one: bool,
    /// Check every set against its defining property.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    oracle: OracleArgs,
    /// Test-set document.
    #[arg(long)]
    sets: PathBuf,
    #[arg(long = "kmax", default_value_t = DEFAULT_K_MAX)]
    k_max: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long = "max-norm")]
    max_norm: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchExhausted { .. } => 2,
            Error::PrecisionInsufficient { .. } | Error::UnknownPrime(_) => 3,
            Error::InconsistentData(_) | Error::NoSignatureMatch(_) | Error::NotTrivialModLevel { .. } => 4,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Sets(a) => cmd_sets(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::OracleDump(a) => cmd_oracle_dump(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tworep: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_field(args: &FieldArgs) -> CliResult<Option<(BaseField, Vec<Prime>)>> {
    let Some(tag) = &args.field else {
        return if args.bad_set.is_some() { Err(input_error("--bad-set needs --field")) } else { Ok(None) };
    };
    let field = BaseField::from_tag(tag).ok_or_else(|| input_error(format!("unknown field {tag:?}; use Q or Qi")))?;
    let s = match &args.bad_set {
        Some(s) if !s.trim().is_empty() => field.parse_prime_list(s)?,
        _ => Vec::new(),
    };
    Ok(Some((field, s)))
}

fn require_field(args: &FieldArgs) -> CliResult<(BaseField, Vec<Prime>)> {
    parse_field(args)?.ok_or_else(|| input_error("--field is required"))
}

fn print_verdicts(doc: &TestSetDocument) -> bool {
    let mut all = true;
    for (kind, v) in doc.verify() {
        if kind == tworep::sets::SetKind::T0 && doc.family.is_empty() {
            eprintln!("{kind:?}: not checked (no cubic family)");
            continue;
        }
        eprintln!("{kind:?}: {}", if v.ok { "ok" } else { "FAILED" });
        for d in &v.diagnostics {
            eprintln!("  {d}");
        }
        all &= v.ok;
    }
    all
}

fn norms(ps: &[Prime]) -> String {
    ps.iter().map(|p| p.norm().to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_sets(a: SetsArgs) -> CliResult<()> {
    let doc = match &a.sets {
        Some(path) => TestSetDocument::from_json(&read(path)?)?,
        None => {
            let (field, s) = require_field(&a.field)?;
            let family = match &a.cubics {
                Some(p) => load_family(field, &s, &read(p)?)?,
                None => CubicFamily::empty(field, &s),
            };
            for w in &family.warnings {
                eprintln!("warning: {w}");
            }
            let cfg = SearchConfig { norm_cap: a.norm_cap, degree_one_only: a.degree_one };
            TestSetDocument::compute(field, &s, family, &cfg)?
        }
    };
    eprintln!("K(S,2)_u has rank {}", doc.basis.rank());
    eprintln!("T0: {} primes, norms {}", doc.t0.primes.len(), norms(&doc.t0.primes));
    eprintln!("T1: {} primes, norms {}", doc.t1.primes.len(), norms(&doc.t1.primes));
    eprintln!("T2: {} primes, norms {}", doc.t2.primes.len(), norms(&doc.t2.primes));
    if a.verify && !print_verdicts(&doc) {
        return Err(input_error("test-set verification failed"));
    }
    write_out(a.out.as_deref(), &doc.to_json())
}

struct Source {
    oracle: Box<dyn Oracle>,
    hashes: Vec<(String, String)>,
}

fn build_oracle(args: &OracleArgs, field: BaseField, s: &[Prime], basis: Option<&SelmerBasis>) -> CliResult<Source> {
    if let Some(path) = &args.oracle_table {
        let text = read(path)?;
        let o = make_table_oracle(field, s, &text)?;
        return Ok(Source { oracle: Box::new(o), hashes: vec![(path.display().to_string(), sha256_hex(text.as_bytes()))] });
    }
    if let Some(c) = &args.curve {
        if field != BaseField::Rationals {
            return Err(input_error("--curve is only available over Q"));
        }
        let o = make_ec_oracle_q(parse_curve(c)?, s)?;
        return Ok(Source { oracle: Box::new(o), hashes: vec![("curve".into(), sha256_hex(c.as_bytes()))] });
    }
    if let Some(chars) = &args.synthetic {
        let owned;
        let basis = match basis {
            Some(b) => b,
            None => {
                owned = unramified_subgroup(&selmer_group(field, s))?;
                &owned
            }
        };
        let parts: Vec<&str> = chars.split(';').map(str::trim).collect();
        let [d1, d2] = parts.as_slice() else {
            return Err(input_error("--synthetic expects \"Δ1;Δ2\""));
        };
        let d1 = basis.discriminant_of(field.parse_integer(d1)?)?;
        let d2 = basis.discriminant_of(field.parse_integer(d2)?)?;
        let o = make_synthetic_oracle(basis, d1, d2, [[1, 0], [0, 1]])?;
        return Ok(Source { oracle: Box::new(o), hashes: vec![("synthetic".into(), sha256_hex(chars.as_bytes()))] });
    }
    Err(input_error("one of --oracle-table, --curve or --synthetic is required"))
}

fn cmd_analyze(a: AnalyzeArgs) -> CliResult<()> {
    let doc_text = read(&a.sets)?;
    let doc = TestSetDocument::from_json(&doc_text)?;
    if let Some((field, s)) = parse_field(&a.field)? {
        let mut s = s;
        s.sort();
        if field != doc.field() || s != doc.bad_set() {
            return Err(input_error("--field/--bad-set disagree with the test-set document"));
        }
    }
    if !print_verdicts(&doc) {
        return Err(input_error("test-set verification failed"));
    }
    let src = build_oracle(&a.oracle, doc.field(), doc.bad_set(), Some(&doc.t1.dual_basis))?;
    let missing: Vec<String> = doc
        .all_primes()
        .iter()
        .filter(|p| matches!(src.oracle.query(p), Err(Error::UnknownPrime(_))))
        .map(|p| p.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Failure { code: 3, msg: format!("oracle has no answer for: {}", missing.join(", ")) });
    }
    let log = QueryLog::new(src.oracle);
    let report = isogeny_report(&log, &doc.family, &doc.t0, &doc.t1, &doc.t2, &ReportOptions { k_max: a.k_max })?;
    let mut out = report.to_json();
    let mut inputs = serde_json::Map::new();
    inputs.insert(a.sets.display().to_string(), Value::String(sha256_hex(doc_text.as_bytes())));
    for (k, h) in src.hashes {
        inputs.insert(k, Value::String(h));
    }
    out["queries"] = serde_json::to_value(log.records()).expect("serializable");
    out["meta"] = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "oracle": log.describe(),
        "inputs": inputs,
    });
    let text = serde_json::to_string_pretty(&out).expect("serializable") + "\n";
    write_out(a.out.as_deref(), &text)
}

fn cmd_oracle_dump(a: DumpArgs) -> CliResult<()> {
    let (field, s) = require_field(&a.field)?;
    let src = build_oracle(&a.oracle, field, &s, None)?;
    let rows = dump(&*src.oracle, a.max_norm)?;
    write_out(a.out.as_deref(), &write_table(&rows))
}
