//! Batch front end: catalog listing, expansions, norm-relation certificates,
//! oracle comparisons and a seeded self test.
//!
//! Exit codes: 0 valid, 1 invalid verdict, 2 usage or configuration error.

pub mod opspec;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use tamenorm_core::catalog::{shipped_catalog_dir, Catalog, CatalogEntry, LoadError};
use tamenorm_core::coeffs::{canonical_point, GroupAlgebraElement, Point, QLaurent};
use tamenorm_core::euler::{
    check_wall_divisibility, combined_expansion, norm_relation_certificate, CrossCheck, QMode,
};
use tamenorm_core::rootdata::WeightOrbitRep;
use tamenorm_core::satake::{inverse_satake_expand, restrict_to_x};
use tamenorm_core::spherical::type_t_walls;
use tamenorm_oracle::compare::{compare_with_symbolic, default_precision, model_datum, upstairs_element};
use tamenorm_oracle::{GradedOperator, RankOneModel};

use crate::opspec::{parse_operator, ungraded};

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest prime the oracle accepts.
pub const MAX_ORACLE_PRIME: u64 = 7;

/// Oracle cross-checks inside `certify` stop at this window.
pub const CERTIFY_ORACLE_WINDOW: i64 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Parser, Debug)]
#[command(name = "tamenorm", version, about = "Exact inverse relative Satake expansions and tame norm-relation certificates")]
pub struct Cli {
    /// Catalog files or directories (default: the shipped catalog).
    #[arg(long, global = true)]
    pub catalog: Vec<PathBuf>,
    /// Output format for tables; certificates are always canonical.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Canonical,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Print the restricted series of an operator with wall annotations.
    Expand(ExpandArgs),
    /// Emit a norm-relation certificate for an entry and its bundle.
    Certify(CertifyArgs),
    /// Brute-force oracle operations.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Run quick seeded self checks.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    /// One row per entry with its validation verdict.
    List,
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// Compare symbolic coefficients with brute-force counts.
    Compare(CompareArgs),
}

fn parse_q(s: &str) -> Result<QMode, String> {
    if s == "symbolic" {
        return Ok(QMode::Symbolic);
    }
    match s.parse::<u64>() {
        Ok(q) if q >= 2 => Ok(QMode::Integer(q)),
        _ => Err(format!("expected `symbolic` or an integer >= 2, got `{s}`")),
    }
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long)]
    pub entry: String,
    /// identity | zero | heckepoly(NAME,K) | heckepoly(NAME), joined by `*`.
    #[arg(long, default_value = "identity")]
    pub operator: String,
    #[arg(long, default_value_t = 6)]
    pub window: i64,
    #[arg(long, value_parser = parse_q, default_value = "symbolic")]
    pub q: QMode,
    /// Expand on the bundle extension, with `T` on the fiber coordinate.
    #[arg(long)]
    pub bundle: bool,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub entry: String,
    /// NAME or heckepoly(NAME) of a shipped minuscule representation.
    #[arg(long)]
    pub operator: String,
    #[arg(long, default_value_t = 6)]
    pub window: i64,
    #[arg(long, value_parser = parse_q, default_value = "symbolic")]
    pub q: QMode,
    /// Cross-check the combined series against the oracle at these primes.
    #[arg(long, value_delimiter = ',')]
    pub oracle_primes: Vec<u64>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub entry: String,
    #[arg(long, default_value = "identity")]
    pub operator: String,
    #[arg(long, default_value_t = 3)]
    pub window: i64,
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub oracle_primes: Vec<u64>,
    #[arg(long)]
    pub bundle: bool,
    /// Relative p-adic precision (default 2 (window + 2) + 8).
    #[arg(long)]
    pub precision: Option<i64>,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[arg(long, default_value_t = 2_000)]
    pub cases: u32,
}

/// The text a command produced and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit: i32,
}

fn load(paths: &[PathBuf]) -> Result<Catalog, CliError> {
    let paths = if paths.is_empty() { vec![shipped_catalog_dir()] } else { paths.to_vec() };
    Ok(Catalog::load(&paths)?)
}

fn entry<'a>(cat: &'a Catalog, id: &str) -> Result<&'a CatalogEntry, CliError> {
    cat.get(id).ok_or_else(|| {
        let ids: Vec<&str> = cat.entries.iter().map(|e| e.id()).collect();
        CliError::Usage(format!("no entry `{id}` (known: {})", ids.join(", ")))
    })
}

fn check_window(n: i64) -> Result<(), CliError> {
    if n < 1 {
        return Err(CliError::Usage(format!("window must be at least 1, got {n}")));
    }
    Ok(())
}

fn check_primes(primes: &[u64]) -> Result<(), CliError> {
    for &p in primes {
        if ![2, 3, 5, 7].contains(&p) {
            return Err(CliError::Usage(format!("oracle primes must be primes <= {MAX_ORACLE_PRIME}, got {p}")));
        }
    }
    Ok(())
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{s:<w$}", w = if i + 1 == r.len() { 0 } else { widths[i] }))
            .collect();
        let _ = writeln!(out, "{}", cells.join("  "));
    }
    out
}

pub fn catalog_list(cat: &Catalog, format: Format) -> Outcome {
    let mut all_pass = true;
    let mut rows = vec![["id", "rank", "branch", "type-T", "bundle", "validation"].map(String::from).to_vec()];
    let mut canonical = String::new();
    for e in &cat.entries {
        let report = e.validate();
        all_pass &= report.passed();
        let fields = [
            e.id().to_string(),
            e.datum.rank_x().to_string(),
            e.datum.branch.to_string(),
            e.datum.type_t_roots().count().to_string(),
            if e.bundle.is_some() { "yes" } else { "no" }.to_string(),
            if report.passed() { "PASS" } else { "FAIL" }.to_string(),
        ];
        let _ = writeln!(
            canonical,
            "entry {} rank={} branch={} type_t={} bundle={} validation={}",
            fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]
        );
        for c in report.failures() {
            let _ = writeln!(canonical, "failure {} {} {}", e.id(), c.name, c.detail);
        }
        rows.push(fields.to_vec());
    }
    let text = match format {
        Format::Canonical => canonical,
        Format::Human => table(&rows),
    };
    Outcome { text, exit: if all_pass { EXIT_VALID } else { EXIT_INVALID } }
}

fn value_text(c: &QLaurent, q: QMode) -> String {
    match q {
        QMode::Symbolic => c.to_string(),
        QMode::Integer(n) => c.specialize_surd(n).to_string(),
    }
}

pub fn expand(cat: &Catalog, args: &ExpandArgs, format: Format) -> Result<Outcome, CliError> {
    check_window(args.window)?;
    let e = entry(cat, &args.entry)?;
    let op = parse_operator(&args.operator, e)?;
    let op = if args.bundle { op } else { ungraded(&op, &args.operator)? };
    let datum = model_datum(e, args.bundle).map_err(|err| CliError::Config(err.to_string()))?;
    let upstairs = upstairs_element(&datum, &op, args.bundle);
    let lx = restrict_to_x(&datum, &upstairs);
    let expansion =
        inverse_satake_expand(&datum, &lx, args.window).map_err(|err| CliError::Config(err.to_string()))?;
    let report = check_wall_divisibility(&datum, &expansion.restricted);
    let mut text = String::new();
    match format {
        Format::Canonical => {
            let _ = writeln!(text, "expand tamenorm/1");
            let _ = writeln!(text, "entry {}", e.id());
            let _ = writeln!(text, "bundle {}", if args.bundle { "yes" } else { "no" });
            let _ = writeln!(text, "operator {}", args.operator);
            let _ = writeln!(text, "window {}", args.window);
            let _ = writeln!(text, "q {}", args.q);
            for r in &report.records {
                let walls: Vec<String> = r.walls.iter().map(|w| w.to_string()).collect();
                let value = match args.q {
                    QMode::Symbolic => format!("coeff={}", r.coefficient.to_canonical()),
                    QMode::Integer(_) => format!("value={}", value_text(&r.coefficient, args.q)),
                };
                let _ = writeln!(text, "point {} walls=[{}] {value}", canonical_point(&r.point), walls.join(","));
            }
        }
        Format::Human => {
            let _ = writeln!(
                text,
                "entry {}{}  operator {}  window {}  q {}",
                e.id(),
                if args.bundle { " (bundle)" } else { "" },
                args.operator,
                args.window,
                args.q
            );
            let mut rows = vec![vec!["point".to_string(), "walls".to_string(), "coefficient".to_string()]];
            for r in &report.records {
                let walls = if r.walls.is_empty() {
                    "-".to_string()
                } else {
                    r.walls.iter().map(|w| format!("T{w}")).collect::<Vec<_>>().join(",")
                };
                rows.push(vec![canonical_point(&r.point), walls, value_text(&r.coefficient, args.q)]);
            }
            text.push_str(&table(&rows));
        }
    }
    Ok(Outcome { text, exit: EXIT_VALID })
}

fn operator_name(spec: &str) -> &str {
    let s = spec.trim();
    s.strip_prefix("heckepoly(").and_then(|r| r.strip_suffix(')')).map_or(s, str::trim)
}

fn graded_hecke(e: &CatalogEntry, name: &str) -> Result<GradedOperator, CliError> {
    parse_operator(&format!("heckepoly({name})"), e)
}

/// Orbit counts from the oracle at the wall points of the combined series.
fn oracle_orbit_sizes(
    e: &CatalogEntry,
    v: &WeightOrbitRep,
    window: i64,
    q: u64,
) -> Result<Option<BTreeMap<Point, u64>>, CliError> {
    let (Some(model_id), Some(bundle)) = (e.oracle_model.as_deref(), e.bundle.as_ref()) else {
        return Ok(None);
    };
    if ![2, 3, 5, 7].contains(&q) {
        return Ok(None);
    }
    let (ext, _, expansion) =
        combined_expansion(&e.datum, bundle, v, window).map_err(|err| CliError::Config(err.to_string()))?;
    let model = RankOneModel::new(&format!("{model_id}-bundle"), q, default_precision(window, 2))
        .map_err(|err| CliError::Config(err.to_string()))?;
    let mut sizes = BTreeMap::new();
    for (pt, _) in expansion.restricted.terms() {
        if !type_t_walls(&ext, pt).is_empty() {
            let n = model.k1_orbit_count(pt).map_err(|err| CliError::Config(err.to_string()))?;
            sizes.insert(pt.clone(), n);
        }
    }
    Ok(Some(sizes))
}

pub fn certify(cat: &Catalog, args: &CertifyArgs) -> Result<Outcome, CliError> {
    check_window(args.window)?;
    check_primes(&args.oracle_primes)?;
    let e = entry(cat, &args.entry)?;
    let bundle = e.bundle.as_ref().ok_or_else(|| {
        CliError::Config(format!(
            "entry {} has no bundle block; a combinatorially trivial bundle is required",
            e.id()
        ))
    })?;
    if !bundle.is_combinatorially_trivial() {
        return Err(CliError::Config(format!("bundle {} is not combinatorially trivial", bundle.id)));
    }
    let name = operator_name(&args.operator);
    let def = e.operator(name).ok_or_else(|| CliError::Usage(format!("entry {} has no operator `{name}`", e.id())))?;
    let v = WeightOrbitRep::new(&e.datum.group, def.highest_weight.clone())
        .map_err(|err| CliError::Config(err.to_string()))?;
    let sizes = match args.q {
        QMode::Integer(q) => oracle_orbit_sizes(e, &v, args.window, q)?,
        QMode::Symbolic => None,
    };
    let mut cert = norm_relation_certificate(&e.datum, bundle, name, &v, args.window, args.q, sizes.as_ref())
        .map_err(|err| CliError::Config(err.to_string()))?;
    if !args.oracle_primes.is_empty() {
        let op = graded_hecke(e, name)?;
        let window = args.window.min(CERTIFY_ORACLE_WINDOW);
        let mut lines = Vec::new();
        let mut passed = true;
        for &p in &args.oracle_primes {
            let r = compare_with_symbolic(e, &op, true, window, p, default_precision(window, 2))
                .map_err(|err| CliError::Config(err.to_string()))?;
            passed &= r.passed();
            lines.extend(r.lines().into_iter().filter(|l| !l.ends_with(" OK")));
        }
        cert.oracle = Some(CrossCheck { lines, passed });
    }
    let exit = if cert.is_valid() { EXIT_VALID } else { EXIT_INVALID };
    Ok(Outcome { text: cert.to_canonical(), exit })
}

pub fn oracle_compare(cat: &Catalog, args: &CompareArgs, format: Format) -> Result<Outcome, CliError> {
    check_window(args.window)?;
    check_primes(&args.oracle_primes)?;
    if args.oracle_primes.is_empty() {
        return Err(CliError::Usage("at least one oracle prime is required".into()));
    }
    let e = entry(cat, &args.entry)?;
    let op = parse_operator(&args.operator, e)?;
    let op = if args.bundle { op } else { ungraded(&op, &args.operator)? };
    let precision = args.precision.unwrap_or_else(|| default_precision(args.window, 2));
    let mut text = String::new();
    let mut passed = true;
    for &p in &args.oracle_primes {
        let r = compare_with_symbolic(e, &op, args.bundle, args.window, p, precision)
            .map_err(|err| CliError::Config(err.to_string()))?;
        passed &= r.passed();
        for line in r.lines() {
            match format {
                Format::Canonical => {
                    let _ = writeln!(text, "oracle {line}");
                }
                Format::Human => {
                    let _ = writeln!(text, "{line}");
                }
            }
        }
    }
    let _ = writeln!(text, "{}verdict {}", if format == Format::Canonical { "oracle " } else { "" }, if passed { "PASS" } else { "FAIL" });
    Ok(Outcome { text, exit: if passed { EXIT_VALID } else { EXIT_INVALID } })
}

fn random_laurent(rng: &mut ChaCha8Rng) -> QLaurent {
    let n = rng.gen_range(0..5);
    QLaurent::from_terms((0..n).map(|_| (rng.gen_range(-6..=6), BigInt::from(rng.gen_range(-5..=5)))))
}

pub fn selftest(cat: &Catalog, args: &SelftestArgs) -> Result<Outcome, CliError> {
    let mut text = String::new();
    let mut passed = true;
    let mut record = |name: String, ok: bool, text: &mut String| {
        passed &= ok;
        let _ = writeln!(text, "selftest {name} {}", if ok { "PASS" } else { "FAIL" });
    };
    for e in &cat.entries {
        for bundle in [false, true] {
            if bundle && e.bundle.is_none() {
                continue;
            }
            let d = model_datum(e, bundle).map_err(|err| CliError::Config(err.to_string()))?;
            let one = GroupAlgebraElement::one(&d.lattice_x);
            let ok = inverse_satake_expand(&d, &one, 6).is_ok_and(|x| x.restricted.to_element() == one);
            record(format!("basic-function {}{}", e.id(), if bundle { "+bundle" } else { "" }), ok, &mut text);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut ok = true;
    for _ in 0..args.cases {
        let (a, b, c) = (random_laurent(&mut rng), random_laurent(&mut rng), random_laurent(&mut rng));
        ok &= &(&a * &b) * &c == &a * &(&b * &c);
        ok &= &a * &(&b + &c) == &(&a * &b) + &(&a * &c);
        ok &= QLaurent::from_canonical(&a.to_canonical()).is_ok_and(|x| x == a);
    }
    record(format!("laurent-ring seed={} cases={}", args.seed, args.cases), ok, &mut text);
    for e in &cat.entries {
        if e.oracle_model.is_none() || e.operators.is_empty() {
            continue;
        }
        let op = graded_hecke(e, &e.operators[0].name)?;
        let flat: GradedOperator = op.iter().filter(|(k, _)| *k == 1).map(|(_, c)| (0, c.clone())).collect();
        let base = compare_with_symbolic(e, &flat, false, 2, 3, default_precision(2, 2));
        record(format!("oracle {} p=3", e.id()), base.is_ok_and(|r| r.passed()), &mut text);
        if e.bundle.is_some() {
            let r = compare_with_symbolic(e, &op, true, 2, 3, default_precision(2, 2));
            record(format!("oracle {}+bundle p=3", e.id()), r.is_ok_and(|r| r.passed()), &mut text);
        }
    }
    Ok(Outcome { text, exit: if passed { EXIT_VALID } else { EXIT_INVALID } })
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cat = load(&cli.catalog)?;
    match &cli.command {
        Command::Catalog { cmd: CatalogCmd::List } => Ok(catalog_list(&cat, cli.format)),
        Command::Expand(a) => expand(&cat, a, cli.format),
        Command::Certify(a) => certify(&cat, a),
        Command::Oracle { cmd: OracleCmd::Compare(a) } => oracle_compare(&cat, a, cli.format),
        Command::Selftest(a) => selftest(&cat, a),
    }
}
