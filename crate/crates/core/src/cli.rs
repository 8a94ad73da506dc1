//! Command-line surface: `analyze`, `verify`, `enumerate`, `search`, and
//! `catalog`.
//!
//! Exit codes: 0 success, 1 an applicable claim was falsified, 2 bad input.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::catalog;
use crate::enumerate::{counterexample_search, enumerate, EnumerationJob, Filter};
use crate::error::LoopError;
use crate::format::{emit, parse, sha256_hex};
use crate::identities::{
    is_alternative, is_associative, is_cc, is_diassociative, is_moufang, IdentityVerdict,
    MoufangVariant,
};
use crate::probability::{
    cc_bound_value, moufang_bound_value, p_assoc, p_assoc_decomposed, p_comm, ExactFraction,
    TripleCountBreakdown,
};
use crate::structure::{cosets, nucleus, ElementSet, NucleusKind, Side};
use crate::table::{Classification, LoopTable};
use crate::theorems::{verify_with, ClaimId, LoopFacts, TheoremVerdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "LOOPLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "looplab",
    version,
    about = "Finite loop analysis from Cayley tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full structural and probabilistic report for one table.
    Analyze {
        /// Table file, `-` for stdin, or `catalog:<name>`.
        input: String,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Check theorem claims; exits 1 if an applicable claim fails.
    Verify {
        input: String,
        /// Comma-separated claim ids (default: all).
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
    },
    /// Stream loops of a given order.
    Enumerate(EnumerateArgs),
    /// Look for nonassociative Moufang loops above an association bound.
    Search {
        #[arg(long)]
        order: usize,
        /// Reduced fraction `p/q`.
        #[arg(long, default_value = "43/64")]
        bound: String,
    },
    /// Built-in loops.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub order: usize,
    /// Comma-separated filters: moufang, cc, nonassociative, nuclear_commutators.
    #[arg(long, value_delimiter = ',')]
    pub filter: Vec<String>,
    #[arg(long)]
    pub up_to_iso: bool,
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Print an entry in the Cayley-table text format.
    Emit { name: String },
    /// List entry names.
    List,
}

/// Everything `run` needs from the process environment.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// A resolved input: where it came from and its raw bytes.
#[derive(Clone, Debug)]
pub struct Input {
    pub source: String,
    pub bytes: Vec<u8>,
}

pub fn read_input(arg: &str, stdin: &mut dyn Read) -> Result<Input, String> {
    if let Some(name) = arg.strip_prefix("catalog:") {
        let entry = catalog::lookup(name).map_err(|e| e.to_string())?;
        return Ok(Input {
            source: arg.to_string(),
            bytes: emit(entry.table.magma()).into_bytes(),
        });
    }
    let mut bytes = Vec::new();
    if arg == "-" {
        stdin
            .read_to_end(&mut bytes)
            .map_err(|e| format!("stdin: {e}"))?;
    } else {
        bytes = std::fs::read(arg).map_err(|e| format!("{arg}: {e}"))?;
    }
    Ok(Input {
        source: arg.to_string(),
        bytes,
    })
}

/// Parses an input that must be a loop; the error carries the diagnostic.
pub fn load_loop(input: &Input) -> Result<LoopTable, String> {
    let text = std::str::from_utf8(&input.bytes)
        .map_err(|_| format!("{}: input is not valid UTF-8", input.source))?;
    let parsed = parse(text).map_err(|e| format!("{}: {e}", input.source))?;
    match parsed.validation.loop_table {
        Some(t) => Ok(t),
        None => Err(format!(
            "{}: {} is not a loop: {}",
            input.source,
            parsed.validation.classification,
            parsed
                .validation
                .defect
                .map(|d| d.to_string())
                .unwrap_or_default()
        )),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub source: String,
    /// SHA-256 of the raw input bytes.
    pub sha256: String,
    /// SHA-256 of the canonical text emission in `table`.
    pub table_sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NucleusReport {
    pub left: ElementSet,
    pub middle: ElementSet,
    pub right: ElementSet,
    pub full: ElementSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputInfo,
    pub classification: Classification,
    pub order: usize,
    pub identity: usize,
    /// The table in canonical text format.
    pub table: String,
    pub identities: Vec<IdentityVerdict>,
    pub commutative: bool,
    pub nuclear_commutators: bool,
    pub nucleus: NucleusReport,
    pub nucleus_size: usize,
    /// `[G : 𝔑]`, present when the nucleus cosets partition the loop.
    pub index: Option<usize>,
    pub p_comm: ExactFraction,
    pub p_assoc: ExactFraction,
    pub decomposition: TripleCountBreakdown,
    pub moufang_bound_value: ExactFraction,
    pub cc_bound_value: ExactFraction,
    pub claims: Vec<TheoremVerdict>,
}

pub fn analyze(t: &LoopTable, input: &Input) -> AnalysisReport {
    let table = emit(t.magma());
    let facts = LoopFacts::of(t);
    let full = facts.nucleus.clone();
    let index = cosets(t, &full, Side::Left).ok().and_then(|c| c.index);
    let (decomposition, _) = p_assoc_decomposed(t);
    let claims = ClaimId::ALL
        .iter()
        .map(|&c| verdict_or_skip(t, &facts, c))
        .collect();
    AnalysisReport {
        input: InputInfo {
            source: input.source.clone(),
            sha256: sha256_hex(&input.bytes),
            table_sha256: sha256_hex(table.as_bytes()),
        },
        classification: Classification::Loop,
        order: t.order(),
        identity: t.identity(),
        identities: vec![
            is_associative(t),
            is_moufang(t, MoufangVariant::All),
            is_cc(t),
            is_alternative(t),
            is_diassociative(t),
        ],
        table,
        commutative: t.is_commutative(),
        nuclear_commutators: facts.nuclear_commutators,
        nucleus: NucleusReport {
            left: nucleus(t, NucleusKind::Left),
            middle: nucleus(t, NucleusKind::Middle),
            right: nucleus(t, NucleusKind::Right),
            full: full.clone(),
        },
        nucleus_size: full.len(),
        index,
        p_comm: p_comm(t),
        p_assoc: p_assoc(t),
        decomposition,
        moufang_bound_value: moufang_bound_value(t),
        cc_bound_value: cc_bound_value(t),
        claims,
    }
}

fn verdict_or_skip(t: &LoopTable, facts: &LoopFacts, claim: ClaimId) -> TheoremVerdict {
    match verify_with(t, facts, claim) {
        Ok(v) => v,
        Err(e) => TheoremVerdict {
            claim,
            applicable: false,
            verified: false,
            evidence: [("reason", format!("skipped: {e}"))].into_iter().collect(),
            counterexample: None,
        },
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict_line(v: &TheoremVerdict) -> String {
    let status = match (v.applicable, v.verified) {
        (false, _) => "not applicable",
        (true, true) => "verified",
        (true, false) => "FALSIFIED",
    };
    let mut details: Vec<String> = v.evidence.iter().map(|(k, x)| format!("{k}={x}")).collect();
    if v.evidence.get("attains_bound").map(String::as_str) == Some("true") {
        details.push("equality with the bound".into());
    }
    if let Some(c) = &v.counterexample {
        details.push(format!("counterexample: {c}"));
    }
    format!("{:<13} {status} ({})", v.claim.id(), details.join(", "))
}

pub fn render_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let mut line = |l: String| {
        s.push_str(&l);
        s.push('\n');
    };
    line(format!("source:         {}", r.input.source));
    line(format!("sha256:         {}", r.input.sha256));
    line(format!(
        "classification: {} of order {} (identity {})",
        r.classification, r.order, r.identity
    ));
    for v in &r.identities {
        let w = v
            .witness
            .as_ref()
            .map(|w| format!(" (fails {} at {:?})", w.law.label(), w.elements))
            .unwrap_or_default();
        line(format!(
            "{:<15} {}{w}",
            format!("{}:", v.name),
            yes_no(v.holds)
        ));
    }
    line(format!("commutative:    {}", yes_no(r.commutative)));
    line(format!(
        "nuclear commutators: {}",
        yes_no(r.nuclear_commutators)
    ));
    line(format!(
        "nucleus:        {{{}}} (size {}, index {})",
        r.nucleus.full,
        r.nucleus_size,
        r.index.map_or("n/a".to_string(), |i| i.to_string())
    ));
    line(format!(
        "  left {{{}}} middle {{{}}} right {{{}}}",
        r.nucleus.left, r.nucleus.middle, r.nucleus.right
    ));
    line(format!(
        "p_comm:         {}",
        r.p_comm.display_with_approx()
    ));
    line(format!(
        "p_assoc:        {}",
        r.p_assoc.display_with_approx()
    ));
    line(format!(
        "decomposition:  case1={} case2={} case3={} total={}",
        r.decomposition.case1, r.decomposition.case2, r.decomposition.case3, r.decomposition.total
    ));
    line(format!("moufang bound:  {}", r.moufang_bound_value));
    line(format!("cc bound:       {}", r.cc_bound_value));
    line("claims:".to_string());
    for v in &r.claims {
        line(format!("  {}", verdict_line(v)));
    }
    s
}

fn init_threads() {
    if let Some(k) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
    {
        // fails only if the global pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, io: Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(io.err, "{e}");
            return code;
        }
    };
    init_threads();
    match execute(cli.command, io.stdin, io.out, io.err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn execute(
    cmd: Command,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, String> {
    let io_err = |e: std::io::Error| e.to_string();
    match cmd {
        Command::Analyze { input, json } => {
            let input = read_input(&input, stdin)?;
            let t = load_loop(&input)?;
            let report = analyze(&t, &input);
            if json {
                let doc = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
                writeln!(out, "{doc}").map_err(io_err)?;
            } else {
                write!(out, "{}", render_text(&report)).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { input, claims } => {
            let ids: Vec<ClaimId> = if claims.is_empty() {
                ClaimId::ALL.to_vec()
            } else {
                claims
                    .iter()
                    .map(|c| c.parse::<ClaimId>())
                    .collect::<Result<_, LoopError>>()
                    .map_err(|e| e.to_string())?
            };
            let input = read_input(&input, stdin)?;
            let t = load_loop(&input)?;
            let facts = LoopFacts::of(&t);
            let mut code = EXIT_OK;
            for id in ids {
                let v = verify_with(&t, &facts, id).map_err(|e| e.to_string())?;
                if v.falsified() {
                    code = EXIT_FALSIFIED;
                }
                writeln!(out, "{}", verdict_line(&v)).map_err(io_err)?;
            }
            Ok(code)
        }
        Command::Enumerate(args) => {
            let filters = args
                .filter
                .iter()
                .filter(|f| !f.trim().is_empty())
                .map(|f| f.parse::<Filter>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let job = EnumerationJob {
                order: args.order,
                filters,
                up_to_iso: args.up_to_iso,
                limit: args.limit,
            };
            let (tables, summary) = enumerate(&job).map_err(|e| e.to_string())?;
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(out).map_err(io_err)?;
                }
                write!(out, "{}", emit(t.magma())).map_err(io_err)?;
            }
            writeln!(err, "# summary: order={} {summary}", job.order).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Search { order, bound } => {
            let bound: ExactFraction = bound.parse().map_err(|e: LoopError| e.to_string())?;
            let found = counterexample_search(order, bound).map_err(|e| e.to_string())?;
            if found.is_empty() {
                writeln!(
                    out,
                    "no counterexample found at order {order} (bound {bound})"
                )
                .map_err(io_err)?;
            }
            for (t, p) in &found {
                writeln!(out, "# p_assoc = {p}").map_err(io_err)?;
                write!(out, "{}", emit(t.magma())).map_err(io_err)?;
                writeln!(out).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Catalog { action } => match action {
            CatalogAction::Emit { name } => {
                let entry = catalog::lookup(&name).map_err(|e| e.to_string())?;
                write!(out, "{}", emit(entry.table.magma())).map_err(io_err)?;
                Ok(EXIT_OK)
            }
            CatalogAction::List => {
                for name in catalog::NAMES {
                    writeln!(out, "{name}").map_err(io_err)?;
                }
                writeln!(out, "cyclic<N>").map_err(io_err)?;
                writeln!(out, "elementary_abelian<N>").map_err(io_err)?;
                Ok(EXIT_OK)
            }
        },
    }
}
