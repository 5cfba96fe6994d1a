//! Command-line driver: parses a [`RunConfig`] from flags and an optional
//! TOML file, runs one command and produces its report.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on a
//! usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use superinv::action::{build_arena, CopySpec};
use superinv::algebras::{basis_of, Family, FamilySpec};
use superinv::combinatorics::{cauchy_check, Partition};
use superinv::invariants::{self, fixtures_version, BlockDet, NamedInvariant, PiProduct};
use superinv::report::{self, OutputFormat, ReportDocument};
use superinv::solver::{verify_basic_set, CheckConfig, Member, DEFAULT_MAX_DEGREE};
use superinv::supermatrix::QBlockMatrix;
use superinv::superpoly::{LocalizedElement, Polynomial, VarTable};
use superinv::{sampling, Error};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Directory used for reports when `--out` is not given.
pub const OUT_DIR_ENV: &str = "SUPERINV_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "superinv",
    version,
    about = "Exact invariant checks for classical Lie superalgebras"
)]
pub struct Cli {
    /// TOML file with the same fields as the flags; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the basis of a family with parities.
    Basis(RunConfig),
    /// Print a named invariant polynomial.
    Invariant(RunConfig),
    /// Compare the closure of the basic set with the invariant space by degree.
    Check(RunConfig),
    /// Dimension check of the super Cauchy decomposition.
    Decompose(RunConfig),
    /// Seeded checks of the queer determinant.
    QetDemo(RunConfig),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Basis,
    Invariant,
    Check,
    Decompose,
    QetDemo,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    pub command: Option<CommandKind>,
    #[arg(long)]
    pub family: Option<Family>,
    /// `n,m`
    #[arg(long, value_delimiter = ',')]
    pub dim: Option<Vec<usize>>,
    /// `k,l,p,q`
    #[arg(long, value_delimiter = ',')]
    pub copies: Option<Vec<usize>>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Basic-set members to leave out: f, omega, p, qlambda.
    #[arg(long, value_delimiter = ',')]
    pub omit: Vec<Member>,
    #[arg(long)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Refuse to run unless the built-in fixtures carry this version.
    #[arg(long)]
    pub fixtures_version: Option<String>,
    /// Invariant tag for `invariant`.
    #[arg(long)]
    pub name: Option<String>,
    /// `key=value` parameters for `invariant`.
    #[arg(long, num_args = 1..)]
    pub params: Vec<String>,
    #[arg(long = "dimU", value_delimiter = ',')]
    #[serde(rename = "dimU")]
    pub dim_u: Option<Vec<usize>>,
    #[arg(long = "dimV", value_delimiter = ',')]
    #[serde(rename = "dimV")]
    pub dim_v: Option<Vec<usize>>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Sample count for `qet-demo`.
    #[arg(long)]
    pub samples: Option<usize>,
}

impl RunConfig {
    /// Fields set in `over` win.
    pub fn merge(self, over: RunConfig) -> RunConfig {
        fn pick<T>(base: Vec<T>, over: Vec<T>) -> Vec<T> {
            if over.is_empty() {
                base
            } else {
                over
            }
        }
        RunConfig {
            command: over.command.or(self.command),
            family: over.family.or(self.family),
            dim: over.dim.or(self.dim),
            copies: over.copies.or(self.copies),
            max_degree: over.max_degree.or(self.max_degree),
            omit: pick(self.omit, over.omit),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
            seed: over.seed.or(self.seed),
            fixtures_version: over.fixtures_version.or(self.fixtures_version),
            name: over.name.or(self.name),
            params: pick(self.params, over.params),
            dim_u: over.dim_u.or(self.dim_u),
            dim_v: over.dim_v.or(self.dim_v),
            k: over.k.or(self.k),
            samples: over.samples.or(self.samples),
        }
    }

    pub fn from_toml(text: &str) -> Result<RunConfig, String> {
        toml::from_str(text).map_err(|e| format!("config file: {e}"))
    }
}

/// Result of [`run_command`]: what to print and how to exit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    /// Where the report was written, when it went to a file.
    pub artifact: Option<PathBuf>,
}

impl RunOutcome {
    fn usage(msg: impl Into<String>) -> RunOutcome {
        RunOutcome {
            code: EXIT_USAGE,
            stderr: format!("error: {}\n", msg.into()),
            ..Default::default()
        }
    }
}

/// Combines a parsed command line with its optional config file.
pub fn resolve(cli: Cli) -> Result<RunConfig, String> {
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::default(),
    };
    let over = match cli.command {
        None => RunConfig::default(),
        Some(cmd) => {
            let (kind, mut cfg) = match cmd {
                Command::Basis(c) => (CommandKind::Basis, c),
                Command::Invariant(c) => (CommandKind::Invariant, c),
                Command::Check(c) => (CommandKind::Check, c),
                Command::Decompose(c) => (CommandKind::Decompose, c),
                Command::QetDemo(c) => (CommandKind::QetDemo, c),
            };
            cfg.command = Some(kind);
            cfg
        }
    };
    let merged = base.merge(over);
    if merged.command.is_none() {
        return Err("no command given (flags or `command` in the config file)".into());
    }
    Ok(merged)
}

/// What a command produced, before it is written anywhere.
struct Produced {
    body: String,
    stem: String,
    /// Failure summary; `None` means every check passed.
    failure: Option<String>,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::UnsupportedConfig(_)
            | Error::InvalidDims(_)
            | Error::BadIndex(_)
            | Error::Parse(_)
            | Error::WrongArena(_)
            | Error::InsufficientCopies(_)
            | Error::NoForm(_)
            | Error::EmptyArena => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Runs one command. The report goes to `--out`, else to
/// `$SUPERINV_OUT_DIR/<stem>.<ext>`, else to stdout.
pub fn run_command(config: &RunConfig) -> RunOutcome {
    if let Some(v) = &config.fixtures_version {
        if *v != fixtures_version() {
            return RunOutcome::usage(format!(
                "fixtures version {v} requested, built with {}",
                fixtures_version()
            ));
        }
    }
    let default_format = if config.command == Some(CommandKind::Check) {
        OutputFormat::Json
    } else {
        OutputFormat::Text
    };
    let format = config.format.unwrap_or(default_format);
    let produced = match config.command {
        Some(CommandKind::Basis) => basis(config, format),
        Some(CommandKind::Invariant) => invariant(config, format),
        Some(CommandKind::Check) => check(config, format),
        Some(CommandKind::Decompose) => decompose(config, format),
        Some(CommandKind::QetDemo) => qet_demo(config, format),
        None => usage("no command given"),
    };
    let produced = match produced {
        Ok(p) => p,
        Err(Failure::Usage(msg)) => return RunOutcome::usage(msg),
        Err(Failure::Run(msg)) => {
            return RunOutcome {
                code: EXIT_FAIL,
                stderr: format!("error: {msg}\n"),
                ..Default::default()
            }
        }
    };
    let target = config.out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .map(|d| Path::new(&d).join(format!("{}.{}", produced.stem, format.extension())))
    });
    let mut outcome = RunOutcome::default();
    match target {
        Some(path) => {
            if let Err(e) = report::write_atomic(&path, &produced.body) {
                return RunOutcome {
                    code: EXIT_FAIL,
                    stderr: format!("error: writing {}: {e}\n", path.display()),
                    ..Default::default()
                };
            }
            outcome.stdout = format!("wrote {}\n", path.display());
            outcome.artifact = Some(path);
        }
        None => outcome.stdout = produced.body,
    }
    if let Some(msg) = produced.failure {
        outcome.code = EXIT_FAIL;
        outcome.stderr = format!("{msg}\n");
    }
    outcome
}

fn pair(v: &Option<Vec<usize>>, what: &str) -> Result<Option<(usize, usize)>, Failure> {
    match v.as_deref() {
        None => Ok(None),
        Some(&[a, b]) => Ok(Some((a, b))),
        Some(_) => usage(format!("--{what} takes two numbers a,b")),
    }
}

fn family_spec(config: &RunConfig) -> Result<FamilySpec, Failure> {
    let family = config.family.unwrap_or(Family::Gl);
    let (n, m) = pair(&config.dim, "dim")?.unwrap_or((1, 1));
    Ok(FamilySpec::new(family, n, m)?)
}

/// Copy counts from the flags, or the smallest ones `check` accepts.
fn copy_spec(config: &RunConfig, spec: &FamilySpec) -> Result<CopySpec, Failure> {
    match config.copies.as_deref() {
        Some(&[k, l, p, q]) => Ok(CopySpec::new(k, l, p, q)),
        Some(_) => usage("--copies takes four numbers k,l,p,q"),
        None => {
            let (n, m) = (spec.n, spec.m);
            Ok(match spec.family {
                Family::Gl | Family::Sl => CopySpec::new(n, m, n, m),
                Family::Osp | Family::Pe | Family::Spe => CopySpec::new(0, 0, n, m),
                Family::Q | Family::Sq => CopySpec::new(n, 0, n, 0),
            })
        }
    }
}

fn only_text_or_json(format: OutputFormat) -> Result<(), Failure> {
    if format == OutputFormat::Csv {
        return usage("csv output is available for check and decompose only");
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Run(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct BasisEntry {
    index: usize,
    parity: String,
    rows: Vec<Vec<String>>,
}

fn basis(config: &RunConfig, format: OutputFormat) -> Result<Produced, Failure> {
    only_text_or_json(format)?;
    let spec = family_spec(config)?;
    let entries: Vec<BasisEntry> = basis_of(&spec)?
        .iter()
        .enumerate()
        .map(|(index, x)| BasisEntry {
            index,
            parity: x.parity().map_or("mixed".into(), |p| p.to_string()),
            rows: (0..x.size())
                .map(|i| {
                    (0..x.size())
                        .map(|j| x.get(i, j).canonical_text())
                        .collect()
                })
                .collect(),
        })
        .collect();
    let body = match format {
        OutputFormat::Json => json(&entries)?,
        _ => {
            let mut out = format!("{spec}: {} basis elements\n", entries.len());
            for e in &entries {
                writeln!(out, "[{}] {}", e.index, e.parity).unwrap();
                for row in &e.rows {
                    writeln!(out, "  {}", row.join(" ")).unwrap();
                }
            }
            out
        }
    };
    Ok(Produced {
        body,
        stem: format!("basis-{}-{}-{}", spec.family, spec.n, spec.m),
        failure: None,
    })
}

fn params(config: &RunConfig) -> Result<Vec<(String, String)>, Failure> {
    config
        .params
        .iter()
        .map(|p| match p.split_once('=') {
            Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
            None => usage(format!("parameter {p:?} is not key=value")),
        })
        .collect()
}

fn param<T: std::str::FromStr>(ps: &[(String, String)], key: &str) -> Result<T, Failure> {
    let Some((_, v)) = ps.iter().find(|(k, _)| k == key) else {
        return usage(format!("missing parameter {key}"));
    };
    v.parse()
        .map_err(|_| Failure::Usage(format!("bad value {v:?} for {key}")))
}

/// Copy indices in the text are 1-based.
fn index_param(ps: &[(String, String)], key: &str) -> Result<usize, Failure> {
    let i: usize = param(ps, key)?;
    if i == 0 {
        return usage(format!("{key} is 1-based"));
    }
    Ok(i - 1)
}

const INVARIANT_TAGS: &str = "scalar, qbracket, form, f, p, omega, gram, block-det, pi, qlambda";

fn invariant(config: &RunConfig, format: OutputFormat) -> Result<Produced, Failure> {
    only_text_or_json(format)?;
    let spec = family_spec(config)?;
    let copies = copy_spec(config, &spec)?;
    let arena = build_arena(spec.n, spec.m, copies)?;
    let ps = params(config)?;
    let Some(tag) = config.name.as_deref() else {
        return usage(format!("--name is required; one of {INVARIANT_TAGS}"));
    };
    let (name, value): (String, Polynomial) = match tag {
        "scalar" | "qbracket" => {
            let (t, s) = (index_param(&ps, "t")?, index_param(&ps, "s")?);
            let v = if tag == "scalar" {
                invariants::scalar_product(&arena, t, s)?
            } else {
                invariants::q_bracket(&arena, t, s)?
            };
            (format!("{tag}({},{})", t + 1, s + 1), v)
        }
        "form" => {
            let (s, t) = (index_param(&ps, "s")?, index_param(&ps, "t")?);
            (
                format!("(v{},v{})", s + 1, t + 1),
                invariants::form_inner(&arena, &spec, s, t)?,
            )
        }
        "f" | "p" => {
            let k: i64 = param(&ps, "k")?;
            let v = if tag == "f" {
                invariants::f_invariant(&arena, k)?
            } else {
                invariants::p_invariant(&arena, k)?
            };
            (format!("{tag}_{k}"), v)
        }
        "omega" => ("Omega".into(), invariants::omega_invariant(&arena)?),
        "gram" => ("det(v_s,v_t)".into(), invariants::osp_gram_det(&arena)?),
        "block-det" => {
            let which: String = param(&ps, "which")?;
            let w = match which.as_str() {
                "delta" => BlockDet::Delta,
                "delta-star" => BlockDet::DeltaStar,
                "omega" => BlockDet::Omega,
                "omega-star" => BlockDet::OmegaStar,
                _ => return usage("which is one of delta, delta-star, omega, omega-star"),
            };
            (which, invariants::block_det(&arena, w)?)
        }
        "pi" => {
            let which: String = param(&ps, "which")?;
            let w = match which.as_str() {
                "10" => PiProduct::Pi10,
                "10-star" => PiProduct::Pi10Star,
                "plus" => PiProduct::PiPlus,
                "minus" => PiProduct::PiMinus,
                _ => return usage("which is one of 10, 10-star, plus, minus"),
            };
            (format!("pi_{which}"), invariants::pi_product(&arena, w)?)
        }
        "qlambda" => {
            let raw: String = param(&ps, "lambda")?;
            let parts: Vec<usize> = raw
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::Usage(format!("bad partition {raw:?}")))?;
            let lambda = Partition::new(parts)
                .ok_or_else(|| Failure::Usage(format!("{raw} is not a partition")))?;
            (
                format!("q_{lambda}"),
                invariants::q_lambda(&arena, &lambda)?,
            )
        }
        other => {
            return usage(format!(
                "unknown invariant {other:?}; one of {INVARIANT_TAGS}"
            ))
        }
    };
    let named = NamedInvariant { name, value };
    let body = match format {
        OutputFormat::Json => {
            json(&serde_json::json!({ "name": named.name, "text": named.value.canonical_text() }))?
        }
        _ => format!("{named}\n"),
    };
    Ok(Produced {
        body,
        stem: format!("invariant-{tag}"),
        failure: None,
    })
}

fn check(config: &RunConfig, format: OutputFormat) -> Result<Produced, Failure> {
    let spec = family_spec(config)?;
    let copies = copy_spec(config, &spec)?;
    let mut cfg = CheckConfig::new(
        spec,
        copies,
        config.max_degree.unwrap_or(DEFAULT_MAX_DEGREE),
    );
    for &m in &config.omit {
        cfg = cfg.omitting(m);
    }
    let doc = ReportDocument::new(&verify_basic_set(&cfg)?);
    let failure = doc.rows.iter().find(|r| !r.pass).map(|r| {
        format!(
            "check failed at degree {}: closure dimension {} < invariant dimension {}",
            r.degree, r.dim_closure, r.dim_invariants
        )
    });
    let [k, l, p, q] = copies.as_array();
    Ok(Produced {
        body: report::render(&doc, format)?,
        stem: format!(
            "check-{}-{}-{}-c{k}{l}{p}{q}-d{}",
            spec.family, spec.n, spec.m, cfg.max_degree
        ),
        failure,
    })
}

fn decompose(config: &RunConfig, format: OutputFormat) -> Result<Produced, Failure> {
    let Some(du) = pair(&config.dim_u, "dimU")? else {
        return usage("--dimU is required");
    };
    let Some(dv) = pair(&config.dim_v, "dimV")? else {
        return usage("--dimV is required");
    };
    let Some(k) = config.k else {
        return usage("--k is required");
    };
    let r = cauchy_check(du, dv, k);
    let body = match format {
        OutputFormat::Json => json(&r)?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["lambda", "dim_u", "dim_v", "product"])
                .map_err(|e| Failure::Run(e.to_string()))?;
            for row in &r.table {
                w.write_record([
                    row.lambda.to_string(),
                    row.dim_u.to_string(),
                    row.dim_v.to_string(),
                    row.product.to_string(),
                ])
                .map_err(|e| Failure::Run(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::Run(e.to_string()))?)
                .expect("utf-8")
        }
        OutputFormat::Text => {
            let mut out = format!(
                "S^{k}(U ⊗ V) with U = ({}|{}), V = ({}|{})\n",
                du.0, du.1, dv.0, dv.1
            );
            writeln!(
                out,
                "{:<12} {:>8} {:>8} {:>8}",
                "lambda", "dim U^λ", "dim V^λ", "product"
            )
            .unwrap();
            for row in &r.table {
                writeln!(
                    out,
                    "{:<12} {:>8} {:>8} {:>8}",
                    row.lambda.to_string(),
                    row.dim_u,
                    row.dim_v,
                    row.product
                )
                .unwrap();
            }
            writeln!(
                out,
                "total {} vs dim S^{k} = {}: {}",
                r.rhs,
                r.lhs,
                if r.holds() { "PASS" } else { "FAIL" }
            )
            .unwrap();
            out
        }
    };
    let failure = (!r.holds()).then(|| format!("decomposition mismatch: {} ≠ {}", r.lhs, r.rhs));
    Ok(Produced {
        body,
        stem: format!("decompose-{}{}-{}{}-k{k}", du.0, du.1, dv.0, dv.1),
        failure,
    })
}

#[derive(Serialize)]
struct QetDemo {
    n: usize,
    seed: u64,
    samples: usize,
    additivity_failures: usize,
    exp_failures: usize,
    pass: bool,
}

fn poly(e: LocalizedElement) -> Result<Polynomial, Failure> {
    Ok(e.into_polynomial()?)
}

fn qet_demo(config: &RunConfig, format: OutputFormat) -> Result<Produced, Failure> {
    only_text_or_json(format)?;
    let n = match pair(&config.dim, "dim")? {
        Some((n, m)) if n == m && (1..=3).contains(&n) => n,
        Some(_) => return usage("qet-demo needs --dim n,n with 1 ≤ n ≤ 3"),
        None => 1,
    };
    let seed = config.seed.unwrap_or(0);
    let samples = config.samples.unwrap_or(100);
    let table = VarTable::grassmann(5);
    let mut rng = sampling::rng(seed);
    let (mut additivity_failures, mut exp_failures) = (0, 0);
    for _ in 0..samples {
        let x = sampling::q_point(&mut rng, &table, n);
        let y = sampling::q_point(&mut rng, &table, n);
        let xy = QBlockMatrix::from_supermatrix(&x.to_supermatrix().matmul(&y.to_supermatrix())?)?;
        if poly(xy.qet()?)? != &poly(x.qet()?)? + &poly(y.qet()?)? {
            additivity_failures += 1;
        }
        let m = sampling::nilpotent_q(&mut rng, &table, n);
        let e = QBlockMatrix::from_supermatrix(&m.to_supermatrix().exp_nilpotent()?)?;
        if poly(e.qet()?)? != m.qtr() {
            exp_failures += 1;
        }
    }
    let pass = additivity_failures == 0 && exp_failures == 0;
    let demo = QetDemo {
        n,
        seed,
        samples,
        additivity_failures,
        exp_failures,
        pass,
    };
    let body = match format {
        OutputFormat::Json => json(&demo)?,
        _ => format!(
            "qet on q({n}), seed {seed}, {samples} samples\nqet(XY) = qet X + qet Y: {} failures\nqet(exp M) = qtr M: {} failures\n{}\n",
            additivity_failures,
            exp_failures,
            if pass { "PASS" } else { "FAIL" }
        ),
    };
    let failure = (!pass).then(|| "qet identities failed on some samples".to_string());
    Ok(Produced {
        body,
        stem: format!("qet-demo-{n}-s{seed}"),
        failure,
    })
}
