//! `scheme-lab`: generate construction schemes, verify their lemmas, search
//! for captured families and check the entangledness kernels from the shell.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 the type sequence is
//! invalid or too large, 3 malformed input, 4 a precondition failed.

mod out;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use schemelab::analyzer::{
    avoidance_width, best_stepped_family, increasing_sweep, realization_sweep, spectrum,
    spectrum_matrix_csv, stepped_starts, verify_avoidance, OrdinalTupleFamily,
};
use schemelab::capture::{find_captures, CaptureKind, CaptureQuery, DEFAULT_SEARCH_CAP};
use schemelab::coding::{delta_transfer_check, CodeKind, CodedFamily, SubsetEnumeration};
use schemelab::report::render_checks;
use schemelab::scheme::verify::{
    verify_metric_lemmas, verify_scheme_axioms, AxiomOptions, MetricOptions,
};
use schemelab::scheme::{generate_type_seq, Growth, OrdSet, DEFAULT_DOMAIN_CAP};
use schemelab::{Error, MetricProfile, Scheme, SchemeTypeSeq};

#[derive(Parser)]
#[command(
    name = "scheme-lab",
    version,
    about = "Construction schemes, captured families and entangled codings at finite rank"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a scheme and write it as JSON (or DOT).
    Gen(GenArgs),
    /// Check the scheme axioms, the metric lemmas and the Δ-transfer identity.
    Verify(VerifyArgs),
    /// Search a pool of sets for captured families.
    Capture(CaptureArgs),
    /// Dump the coded sequences of every ordinal.
    Code(CodeArgs),
    /// Realized type classes of a tuple family under a coding.
    Spectrum(SpectrumArgs),
    /// Realization, avoidance and increasing-set checks.
    Entangle(EntangleArgs),
}

#[derive(Args)]
struct Source {
    /// Load the scheme from a JSON file.
    #[arg(long, conflicts_with_all = ["type_seq", "rank"])]
    scheme: Option<PathBuf>,
    /// Type sequence `[[m,n,r],...]`, inline or as a file path.
    #[arg(long = "type-seq", conflicts_with = "rank")]
    type_seq: Option<String>,
    /// Rank of the generated scheme.
    #[arg(short = 'K', long = "rank")]
    rank: Option<usize>,
    #[command(flatten)]
    growth: GrowthArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tail width for --coding (default 2N+1).
    #[arg(long, value_name = "T", requires = "coding")]
    tail: Option<usize>,
    /// Largest domain the generator may produce.
    #[arg(long = "max-domain", default_value_t = DEFAULT_DOMAIN_CAP)]
    max_domain: usize,
}

#[derive(Args)]
#[group(multiple = false)]
struct GrowthArgs {
    /// Two pieces over the largest possible root at every level (default).
    #[arg(long)]
    minimal: bool,
    /// Widths for the arity-N subset enumeration.
    #[arg(long, value_name = "N")]
    coding: Option<usize>,
    /// Seeded random steps (see --seed).
    #[arg(long)]
    random: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Args)]
struct Output {
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout (atomically).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    /// Also write the decomposition tree as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Axioms,
    Om,
    Transfer,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Arity of the codings used by the transfer suite.
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Args)]
struct CaptureArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    /// Levels to search (default: all).
    #[arg(long, value_delimiter = ',')]
    level: Vec<usize>,
    /// Family sizes (default: 2 and n_l).
    #[arg(long, value_delimiter = ',')]
    size: Vec<usize>,
    /// `singletons`, `pairs`, `tails` or a JSON file of sets.
    #[arg(long, default_value = "singletons")]
    pool: String,
    /// Search for Δ-captured rather than captured families.
    #[arg(long)]
    delta: bool,
    /// Tuples examined per level and size before sampling.
    #[arg(long, env = "SCHEME_LAB_CAP", default_value_t = DEFAULT_SEARCH_CAP)]
    cap: usize,
}

#[derive(Args)]
struct CodingArgs {
    #[arg(long, default_value = "e")]
    kind: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Accept enumerations too narrow to cover every subset.
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    coding: CodingArgs,
    /// One CSV row per ordinal.
    #[arg(long)]
    dump: bool,
    /// Order rows by the coded sequences instead of by ordinal.
    #[arg(long)]
    sorted: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    coding: CodingArgs,
    /// Tuple arity of the default interval family (default 2n).
    #[arg(long)]
    size: Option<usize>,
    /// JSON file with the tuple family to analyze.
    #[arg(long)]
    family: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EntangleCheck {
    Realization,
    Avoidance,
    Increasing,
}

#[derive(Args)]
struct EntangleArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    coding: CodingArgs,
    #[arg(long, value_enum)]
    check: EntangleCheck,
    /// Tuple arity for the increasing check.
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(long, env = "SCHEME_LAB_CAP", default_value_t = DEFAULT_SEARCH_CAP)]
    cap: usize,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure {
            code,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::AxiomViolation(_) | Error::Overflow { .. } => 2,
            Error::Malformed(_)
            | Error::Json(_)
            | Error::IllFormedScheme(_)
            | Error::OutOfDomain { .. }
            | Error::NotDisjoint(_)
            | Error::NotIncreasing
            | Error::LengthMismatch { .. }
            | Error::InvalidBox(_) => 3,
            _ => 4,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::new(3, format!("{e:#}"))
    }
}

type Run = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(3, format!("cannot read {}: {e}", path.display())))
}

fn load(src: &Source) -> Result<Scheme, Failure> {
    if let Some(path) = &src.scheme {
        return Scheme::from_json(&read(path)?)
            .map_err(|e| Failure::new(3, format!("{}: {e}", path.display())));
    }
    if let Some(ts) = &src.type_seq {
        let text = if Path::new(ts).is_file() {
            read(Path::new(ts))?
        } else {
            ts.clone()
        };
        let entries: Vec<[usize; 3]> = serde_json::from_str(&text)
            .map_err(|e| Failure::new(3, format!("type sequence: {e}")))?;
        let t = SchemeTypeSeq::from_entries(&entries, None)?;
        if t.top_size() > src.max_domain {
            return Err(Error::Overflow {
                size: t.top_size() as u128,
                cap: src.max_domain,
            }
            .into());
        }
        return Ok(Scheme::build(&t));
    }
    let rank = src
        .rank
        .ok_or_else(|| Failure::new(4, "give --scheme, --type-seq or -K"))?;
    let g = &src.growth;
    let growth = match (g.coding, g.random) {
        (Some(n), _) => match src.tail {
            Some(tail) => Growth::CodingTail { n, tail },
            None => Growth::Coding(n),
        },
        (None, true) => Growth::Random(src.seed),
        _ => Growth::Minimal,
    };
    Ok(Scheme::build(&generate_type_seq(
        rank,
        growth,
        src.max_domain,
    )?))
}

fn enumeration(s: &Scheme, c: &CodingArgs, kind: CodeKind) -> Result<SubsetEnumeration, Failure> {
    if c.lenient || kind == CodeKind::Xi {
        Ok(SubsetEnumeration::build_truncated(s.type_seq(), c.n))
    } else {
        Ok(SubsetEnumeration::build(s.type_seq(), c.n)?)
    }
}

fn kind_of(c: &CodingArgs) -> Result<CodeKind, Failure> {
    Ok(c.kind.parse::<CodeKind>()?)
}

fn summary(s: &Scheme) -> String {
    let sets: Vec<usize> = s.levels().iter().map(Vec::len).collect();
    format!(
        "rank {}, m_K {}, level sizes {:?}, sets per level {:?}",
        s.rank(),
        s.domain(),
        s.type_seq().sizes(),
        sets
    )
}

fn with_seed<T: Serialize>(command: &str, seed: u64, body: &T) -> String {
    out::json(&json!({ "command": command, "seed": seed, "report": body }))
}

fn cmd_gen(a: &GenArgs) -> Run {
    let s = load(&a.source)?;
    eprintln!("{}", summary(&s));
    let body = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => s.to_json() + "\n",
        Format::Dot => s.to_dot(),
        Format::Text => summary(&s) + "\n",
        Format::Csv => return Err(Failure::new(4, "gen writes json, dot or text")),
    };
    if let Some(dot) = &a.dot {
        out::emit(Some(dot), &s.to_dot())?;
    }
    out::emit(a.output.out.as_deref(), &body)?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs) -> Run {
    let s = load(&a.source)?;
    let seed = a.source.seed;
    let want = |x: Suite| a.suite == Suite::All || a.suite == x;
    let mut text = format!("# scheme-lab verify, seed {seed}\n");
    let mut body = serde_json::Map::new();
    let mut first_failure: Option<String> = None;
    if want(Suite::Axioms) {
        let r = verify_scheme_axioms(
            &s,
            &AxiomOptions {
                seed,
                ..Default::default()
            },
        );
        text.push_str(&r.to_text());
        if let Some(c) = r.first_failure() {
            first_failure.get_or_insert(c.name.clone());
        }
        body.insert(
            "axioms".into(),
            serde_json::to_value(&r).expect("serializes"),
        );
    }
    // the metric suites need a well-formed profile
    let profile = if want(Suite::Om) || want(Suite::Transfer) {
        match MetricProfile::new(&s) {
            Ok(p) => Some(p),
            Err(e) => {
                first_failure.get_or_insert(e.to_string());
                text.push_str(&format!("metric profile unavailable: {e}\n"));
                None
            }
        }
    } else {
        None
    };
    if let Some(p) = &profile {
        if want(Suite::Om) {
            let r = verify_metric_lemmas(
                &s,
                &MetricOptions {
                    seed,
                    ..Default::default()
                },
            );
            text.push_str(&r.to_text());
            if let Some(c) = r.checks.iter().find(|c| !c.passed()) {
                first_failure.get_or_insert(c.name.clone());
            }
            body.insert(
                "metric".into(),
                serde_json::to_value(&r).expect("serializes"),
            );
        }
        if want(Suite::Transfer) {
            let en = SubsetEnumeration::build_truncated(s.type_seq(), a.n);
            let mut c = delta_transfer_check(p, &en)?;
            if !en.is_complete() {
                c = c.with_note("enumeration truncated on narrow levels; the identity does not depend on coverage");
            }
            text.push_str(&render_checks("Δ-transfer", std::slice::from_ref(&c)));
            if !c.passed() {
                first_failure.get_or_insert(c.name.clone());
            }
            body.insert(
                "transfer".into(),
                serde_json::to_value(&c).expect("serializes"),
            );
        }
    }
    body.insert("passed".into(), first_failure.is_none().into());
    let rendered = match a.output.format.unwrap_or(Format::Text) {
        Format::Json => with_seed("verify", seed, &body),
        _ => text,
    };
    out::emit(a.output.out.as_deref(), &rendered)?;
    match first_failure {
        None => Ok(0),
        Some(name) => {
            eprintln!("verification failed: {name}");
            Ok(1)
        }
    }
}

fn pool_for(s: &Scheme, spec: &str, levels: &[usize]) -> Result<Vec<OrdSet>, Failure> {
    match spec {
        "singletons" => Ok((0..s.domain()).map(|a| vec![a]).collect()),
        "pairs" => Ok((0..s.domain() / 2)
            .map(|i| vec![2 * i, 2 * i + 1])
            .collect()),
        "tails" => {
            let &[l] = levels else {
                return Err(Failure::new(4, "the tails pool needs exactly one --level"));
            };
            if l == 0 || l > s.rank() {
                return Err(Error::LevelOutOfRange {
                    level: l,
                    rank: s.rank(),
                }
                .into());
            }
            let mut v: Vec<OrdSet> = s
                .level(l)
                .iter()
                .flat_map(|f| {
                    s.decomposition(l, f)
                        .expect("stored sets decompose")
                        .tails()
                })
                .collect();
            v.sort();
            v.dedup();
            Ok(v)
        }
        path => {
            let text = read(Path::new(path))?;
            serde_json::from_str(&text).map_err(|e| Failure::new(3, format!("pool {path}: {e}")))
        }
    }
}

fn cmd_capture(a: &CaptureArgs) -> Run {
    let s = load(&a.source)?;
    let p = MetricProfile::new(&s)?;
    let pool = pool_for(&s, &a.pool, &a.level)?;
    let kind = if a.delta {
        CaptureKind::DeltaCaptured
    } else {
        CaptureKind::Captured
    };
    let q = CaptureQuery {
        levels: a.level.clone(),
        sizes: a.size.clone(),
        kind,
        cap: a.cap,
        seed: a.source.seed,
    };
    let res = find_captures(&p, &pool, &q)?;
    let rendered = match a.output.format.unwrap_or(Format::Json) {
        Format::Text => {
            let mut t = format!(
                "# scheme-lab capture, seed {}, pool {} ({} sets), kind {kind}\n",
                a.source.seed,
                a.pool,
                pool.len()
            );
            for c in &res.coverage {
                t.push_str(&format!(
                    "level {} size {}: {} of {} tuples examined\n",
                    c.level, c.size, c.examined, c.total
                ));
            }
            for w in &res.witnesses {
                t.push_str(&format!(
                    "level {}: root {:?} family {:?}\n",
                    w.level, w.root, w.family
                ));
            }
            t
        }
        _ => with_seed(
            "capture",
            a.source.seed,
            &json!({ "kind": kind, "pool_size": pool.len(), "search": res }),
        ),
    };
    out::emit(a.output.out.as_deref(), &rendered)?;
    Ok(0)
}

fn cmd_code(a: &CodeArgs) -> Run {
    let s = load(&a.source)?;
    let p = MetricProfile::new(&s)?;
    let kind = kind_of(&a.coding)?;
    let en = enumeration(&s, &a.coding, kind)?;
    let fam = CodedFamily::new(&p, &en, kind)?;
    let order: Vec<usize> = if a.sorted {
        fam.lex_sorted()
    } else {
        (0..s.domain()).collect()
    };
    let format = a
        .output
        .format
        .unwrap_or(if a.dump { Format::Csv } else { Format::Json });
    let rendered = match format {
        Format::Csv => fam.to_csv(&order),
        Format::Text => {
            let mut t = format!("# scheme-lab code, kind {kind}, n {}\n", fam.n);
            for &x in &order {
                t.push_str(&format!("{x}: {:?}\n", fam.seq(x)));
            }
            t
        }
        Format::Json => {
            let points: Vec<_> = order.iter().map(|&x| &fam.points[x]).collect();
            with_seed(
                "code",
                a.source.seed,
                &json!({ "kind": kind, "n": fam.n, "complete": en.is_complete(), "points": points }),
            )
        }
        Format::Dot => return Err(Failure::new(4, "code writes csv, json or text")),
    };
    out::emit(a.output.out.as_deref(), &rendered)?;
    Ok(0)
}

fn cmd_spectrum(a: &SpectrumArgs) -> Run {
    let s = load(&a.source)?;
    let p = MetricProfile::new(&s)?;
    let kind = kind_of(&a.coding)?;
    let en = enumeration(&s, &a.coding, kind)?;
    let codes = CodedFamily::new(&p, &en, kind)?;
    let fam = match &a.family {
        Some(path) => {
            let members: Vec<OrdSet> = serde_json::from_str(&read(path)?)
                .map_err(|e| Failure::new(3, format!("{}: {e}", path.display())))?;
            OrdinalTupleFamily::new(members)?
        }
        None => {
            let w = a.size.unwrap_or(2 * a.coding.n);
            if w == 0 {
                return Err(Failure::new(4, "tuple arity must be positive"));
            }
            OrdinalTupleFamily::new(
                stepped_starts(s.domain(), w)
                    .into_iter()
                    .map(|g| (g..g + w).collect())
                    .collect(),
            )?
        }
    };
    let rendered = match a.output.format.unwrap_or(Format::Text) {
        Format::Csv => spectrum_matrix_csv(&codes, &fam)?,
        Format::Json => with_seed("spectrum", a.source.seed, &spectrum(&codes, &fam)?),
        _ => format!(
            "# scheme-lab spectrum, {kind} coding, n {}\n{}",
            a.coding.n,
            spectrum(&codes, &fam)?.to_text()
        ),
    };
    out::emit(a.output.out.as_deref(), &rendered)?;
    Ok(0)
}

fn cmd_entangle(a: &EntangleArgs) -> Run {
    let s = load(&a.source)?;
    let p = MetricProfile::new(&s)?;
    let kind = kind_of(&a.coding)?;
    let n = a.coding.n;
    let json_out = a.output.format == Some(Format::Json);
    let seed = a.source.seed;
    let (passed, rendered) = match a.check {
        EntangleCheck::Realization => {
            let arity = match kind {
                CodeKind::E => 2 * n,
                CodeKind::O => 2 * n + 1,
                CodeKind::Xi => {
                    return Err(Failure::new(
                        4,
                        "realization is checked for the e and o codings",
                    ))
                }
            };
            let en = enumeration(&s, &a.coding, kind)?;
            let codes = CodedFamily::new(&p, &en, kind)?;
            let r = realization_sweep(&p, &en, &codes, arity)?;
            (
                r.passed(),
                if json_out {
                    with_seed("entangle", seed, &r)
                } else {
                    r.to_text()
                },
            )
        }
        EntangleCheck::Avoidance => {
            let en = enumeration(&s, &a.coding, kind)?;
            let codes = CodedFamily::new(&p, &en, kind)?;
            let w = avoidance_width(kind, n);
            let (offset, fam) = best_stepped_family(&p, w)?;
            let r = verify_avoidance(&p, &codes, &fam)?;
            let rendered = if json_out {
                with_seed(
                    "entangle",
                    seed,
                    &json!({ "offset": offset, "avoidance": r }),
                )
            } else {
                format!("# intervals start at {offset} mod {w}\n{}", r.to_text())
            };
            (r.passed(), rendered)
        }
        EntangleCheck::Increasing => {
            let en = SubsetEnumeration::build_truncated(s.type_seq(), n);
            let codes = CodedFamily::new(&p, &en, CodeKind::Xi)?;
            let r = increasing_sweep(&p, &codes, a.size, a.cap, seed)?;
            (
                r.passed(),
                if json_out {
                    with_seed("entangle", seed, &r)
                } else {
                    r.to_text()
                },
            )
        }
    };
    out::emit(a.output.out.as_deref(), &rendered)?;
    Ok(if passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Capture(a) => cmd_capture(a),
        Cmd::Code(a) => cmd_code(a),
        Cmd::Spectrum(a) => cmd_spectrum(a),
        Cmd::Entangle(a) => cmd_entangle(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
