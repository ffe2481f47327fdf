//! Command implementations for the `braceforge` binary.
//!
//! Every command writes its normal output to `out` and diagnostics to
//! `err`, and returns an [`Exit`] code: 0 on success, 1 when the
//! mathematics fails (a law, identity or claim does not hold), 2 on I/O,
//! format or parameter errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use braceforge::catalog::{self, BraceDocument};
use braceforge::constructions::{self, ConstructionError};
use braceforge::enumeration::{self, small_group_name};
use braceforge::harness::{self, Subject};
use braceforge::ybe::{Degeneracy, YbeMap};
use braceforge::{BraceReport, SkewBrace, Strategy};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success,
    Failure,
    Error,
}

impl Exit {
    pub fn code(self) -> u8 {
        match self {
            Exit::Success => 0,
            Exit::Failure => 1,
            Exit::Error => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "braceforge", version, about = "Finite skew braces: construct, verify, enumerate")]
pub struct Cli {
    /// Run all scans on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a brace from a named construction and emit its document.
    Construct {
        #[command(subcommand)]
        kind: Construction,
        /// Write the document here instead of stdout.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Validate a brace document and scan every identity.
    Verify {
        path: PathBuf,
        /// Write a JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print structural invariants of a brace.
    Analyze {
        path: PathBuf,
        /// Write the report as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate every brace up to an order and write a catalog.
    Enumerate {
        /// Largest order to enumerate (at most 8).
        #[arg(long)]
        max: usize,
        /// Catalog directory.
        #[arg(long)]
        out: PathBuf,
        /// Compare against the raw table oracle for orders up to 6.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Check the Yang-Baxter map of a brace.
    Ybe {
        path: PathBuf,
        /// Write the tabulated solution here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Run every registered claim over a catalog.
    Theorems {
        catalog: PathBuf,
        /// Also check the built-in constructed examples.
        #[arg(long)]
        with_examples: bool,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construction {
    /// Z_2m with a + b = a + (-1)^a b and the cyclic multiplication.
    Example1 {
        #[arg(long)]
        m: usize,
    },
    /// Strictly upper triangular n x n matrices mod m with A.B = A + B + AB.
    Example2 {
        #[arg(long)]
        n: usize,
        #[arg(long = "mod")]
        modulus: usize,
    },
    /// Pairs of a strictly upper triangular matrix and a sign diagonal, m >= 3.
    Example3 {
        #[arg(long)]
        n: usize,
        #[arg(long = "mod")]
        modulus: usize,
    },
    /// The trivial brace on a named group (Z4, S3, D4, Q8, Z2xZ2, ...).
    Trivial {
        #[arg(long)]
        group: String,
    },
    /// Componentwise sum of braces read from documents.
    DirectSum {
        #[arg(required = true, num_args = 1..)]
        paths: Vec<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                Exit::Error
            } else {
                let _ = write!(out, "{}", e.render());
                Exit::Success
            }
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let strategy = if cli.sequential {
        Strategy::Sequential
    } else {
        Strategy::default()
    };
    let result = match cli.command {
        Command::Construct { kind, out: path } => construct(kind, path.as_deref(), out, err),
        Command::Verify { path, out: report } => verify(&path, report.as_deref(), strategy, out),
        Command::Analyze { path, out: report } => analyze(&path, report.as_deref(), out),
        Command::Enumerate {
            max,
            out: dir,
            oracle_check,
        } => enumerate(max, &dir, oracle_check, strategy, out),
        Command::Ybe { path, emit } => ybe(&path, emit.as_deref(), strategy, out),
        Command::Theorems {
            catalog,
            with_examples,
            out: report,
        } => theorems(&catalog, with_examples, report.as_deref(), strategy, out),
    };
    match result {
        Ok(exit) => exit,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            Exit::Error
        }
    }
}

type CmdResult = anyhow::Result<Exit>;

/// Reads and validates a document. Mathematical rejection is reported on
/// `out` and returned as `Ok(Err(Exit::Failure))`.
fn load_brace(path: &Path, out: &mut dyn Write) -> anyhow::Result<Result<SkewBrace, Exit>> {
    let doc = BraceDocument::read(path)?;
    match doc.validate() {
        Ok(b) => Ok(Ok(b)),
        Err(e) if e.is_mathematical() => {
            writeln!(out, "FAIL: {e}")?;
            Ok(Err(Exit::Failure))
        }
        Err(e) => Err(e.into()),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn construct(
    kind: Construction,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let usage = |e: ConstructionError, usage: &str| anyhow!("{e}\nusage: braceforge construct {usage}");
    let (brace, name, params) = match kind {
        Construction::Example1 { m } => (
            constructions::example1(m).map_err(|e| usage(e, "example1 --m <M>  (M >= 1)"))?,
            "example1",
            serde_json::json!({ "m": m }),
        ),
        Construction::Example2 { n, modulus } => (
            constructions::example2(n, modulus)
                .map_err(|e| usage(e, "example2 --n <N> --mod <M>  (N >= 2, M >= 2)"))?,
            "example2",
            serde_json::json!({ "n": n, "mod": modulus }),
        ),
        Construction::Example3 { n, modulus } => (
            constructions::example3(n, modulus)
                .map_err(|e| usage(e, "example3 --n <N> --mod <M>  (N >= 2, M >= 3)"))?,
            "example3",
            serde_json::json!({ "n": n, "mod": modulus }),
        ),
        Construction::Trivial { group } => {
            let g = enumeration::named_group(&group).ok_or_else(|| {
                anyhow!(
                    "unknown group {group:?}\nusage: braceforge construct trivial --group <NAME>  \
                     (Zn, Z2xZ2, Z2xZ4, Z2xZ2xZ2, S3, D4, Q8, V4)"
                )
            })?;
            (
                constructions::trivial_brace(&g),
                "trivial",
                serde_json::json!({ "group": group }),
            )
        }
        Construction::DirectSum { paths } => {
            let mut parts = Vec::new();
            for p in &paths {
                match load_brace(p, out)? {
                    Ok(b) => parts.push(b),
                    Err(exit) => return Ok(exit),
                }
            }
            let refs: Vec<&SkewBrace> = parts.iter().collect();
            let names: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
            (
                SkewBrace::direct_sum(&refs)?,
                "direct-sum",
                serde_json::json!({ "summands": names }),
            )
        }
    };
    let doc = BraceDocument::from_brace(&brace)
        .with_meta("construction", name)
        .with_meta("parameters", params)
        .with_flags(&brace);
    let summary = format!(
        "{name}: order {}, two-sided: {}, classical: {}, trivial: {}",
        brace.order(),
        brace.is_two_sided(),
        brace.is_classical(),
        brace.is_trivial()
    );
    match path {
        Some(p) => {
            doc.write(p)?;
            writeln!(out, "{summary}")?;
        }
        None => {
            out.write_all(doc.to_canonical()?.as_bytes())?;
            writeln!(err, "{summary}")?;
        }
    }
    Ok(Exit::Success)
}

#[derive(Serialize)]
struct VerifyReport {
    path: String,
    valid: bool,
    error: Option<String>,
    identities: Option<braceforge::brace::IdentityReport>,
}

fn verify(path: &Path, report: Option<&Path>, strategy: Strategy, out: &mut dyn Write) -> CmdResult {
    let doc = BraceDocument::read(path)?;
    let mut record = VerifyReport {
        path: path.display().to_string(),
        valid: false,
        error: None,
        identities: None,
    };
    let exit = match doc.validate() {
        Err(e) if !e.is_mathematical() => return Err(e.into()),
        Err(e) => {
            writeln!(out, "FAIL: {e}")?;
            record.error = Some(e.to_string());
            Exit::Failure
        }
        Ok(brace) => {
            let ids = brace.check_identities_with(strategy);
            writeln!(out, "order: {}", brace.order())?;
            writeln!(out, "two-sided: {}", ids.two_sided)?;
            for c in &ids.checks {
                let tag = if c.mandatory { "" } else { " (informational)" };
                writeln!(out, "{}: {}{tag}", c.name, c.outcome)?;
            }
            let ok = ids.all_hold();
            writeln!(out, "{}", if ok { "PASS" } else { "FAIL" })?;
            record.valid = ok;
            record.identities = Some(ids);
            if ok {
                Exit::Success
            } else {
                Exit::Failure
            }
        }
    };
    if let Some(p) = report {
        write_json(p, &record)?;
    }
    Ok(exit)
}

fn print_report(r: &BraceReport, out: &mut dyn Write) -> std::io::Result<()> {
    let class = |v: Option<usize>, none: &str| v.map_or(none.to_string(), |c| c.to_string());
    writeln!(out, "order: {}", r.order)?;
    writeln!(out, "two_sided: {}", r.is_two_sided)?;
    writeln!(out, "classical: {}", r.is_classical)?;
    writeln!(out, "trivial: {}", r.is_trivial)?;
    writeln!(out, "add_solv_class: {}", class(r.add_solv_class, "not solvable"))?;
    writeln!(out, "mul_solv_class: {}", class(r.mul_solv_class, "not solvable"))?;
    writeln!(out, "add_nilp_class: {}", class(r.add_nilp_class, "not nilpotent"))?;
    writeln!(out, "mul_nilp_class: {}", class(r.mul_nilp_class, "not nilpotent"))?;
    writeln!(out, "star_series_lengths: {:?}", r.star_series_lengths)?;
    let skipped = format!("skipped (order > {})", braceforge::brace::IDEAL_GUARD);
    writeln!(out, "ideal_count: {}", class(r.ideal_count, &skipped))?;
    let simple = r.is_simple.map_or(skipped, |s| s.to_string());
    writeln!(out, "is_simple: {simple}")
}

fn analyze(path: &Path, report: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let brace = match load_brace(path, out)? {
        Ok(b) => b,
        Err(exit) => return Ok(exit),
    };
    let r = brace.report();
    for (label, g) in [("additive", brace.additive()), ("multiplicative", brace.multiplicative())] {
        let name = small_group_name(g).unwrap_or_else(|| "-".into());
        writeln!(out, "{label}: {name} [{}]", g.signature())?;
    }
    print_report(&r, out)?;
    if let Some(p) = report {
        write_json(p, &r)?;
    }
    Ok(Exit::Success)
}

fn enumerate(
    max: usize,
    dir: &Path,
    oracle_check: bool,
    strategy: Strategy,
    out: &mut dyn Write,
) -> CmdResult {
    let corpora = enumeration::corpus_with(max, strategy)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let index = catalog::write_corpus(dir, &corpora)?;
    for c in &corpora {
        writeln!(
            out,
            "order {}: {} braces in {} buckets",
            c.order,
            c.len(),
            c.buckets.len()
        )?;
    }
    writeln!(out, "total: {} braces written to {}", index.entries.len(), dir.display())?;
    if !oracle_check {
        return Ok(Exit::Success);
    }
    let top = max.min(enumeration::MAX_ORACLE_ORDER);
    for n in 1..=top {
        for g in enumeration::all_groups_with(n, strategy)? {
            let fast = enumeration::braces_on_with(&g, strategy)?;
            let slow = enumeration::braces_raw_oracle_with(&g, strategy)?;
            if fast != slow {
                let name = small_group_name(&g).unwrap_or_default();
                writeln!(
                    out,
                    "oracle agreement: MISMATCH on {name} ({} vs {} braces)",
                    fast.len(),
                    slow.len()
                )?;
                return Ok(Exit::Failure);
            }
        }
    }
    let note = if max > top {
        format!(" (oracle limited to orders 1..={top})")
    } else {
        String::new()
    };
    writeln!(out, "oracle agreement: OK{note}")?;
    Ok(Exit::Success)
}

fn ybe(path: &Path, emit: Option<&Path>, strategy: Strategy, out: &mut dyn Write) -> CmdResult {
    let brace = match load_brace(path, out)? {
        Ok(b) => b,
        Err(exit) => return Ok(exit),
    };
    let r = match YbeMap::from_brace(&brace) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "bijective: FAILS ({e})")?;
            return Ok(Exit::Failure);
        }
    };
    let braid = r.braid_witness(strategy);
    let degenerate = r.degeneracy_witness();
    match braid {
        None => writeln!(out, "braid: OK")?,
        Some((x, y, z)) => writeln!(out, "braid: FAILS at (x, y, z) = ({x}, {y}, {z})")?,
    }
    match degenerate {
        None => writeln!(out, "nondegenerate: OK")?,
        Some(Degeneracy::Sigma(x)) => writeln!(out, "nondegenerate: FAILS (sigma at x = {x})")?,
        Some(Degeneracy::Tau(y)) => writeln!(out, "nondegenerate: FAILS (tau at y = {y})")?,
    }
    match r.involution_witness() {
        None => writeln!(out, "involutive: YES")?,
        Some((x, y)) => writeln!(out, "involutive: NO (r^2 moves ({x}, {y}))")?,
    }
    if let Some(p) = emit {
        write_json(p, &r.to_document())?;
    }
    Ok(if braid.is_none() && degenerate.is_none() {
        Exit::Success
    } else {
        Exit::Failure
    })
}

#[derive(Serialize)]
struct Rejection {
    id: String,
    path: String,
    error: String,
}

#[derive(Serialize)]
struct TheoremReport {
    catalog: String,
    rejected: Vec<Rejection>,
    #[serde(flatten)]
    report: harness::VerificationReport,
}

fn theorems(
    dir: &Path,
    with_examples: bool,
    report: Option<&Path>,
    strategy: Strategy,
    out: &mut dyn Write,
) -> CmdResult {
    let loaded = catalog::load_catalog(dir)?;
    let rejected: Vec<Rejection> = loaded
        .rejected
        .iter()
        .map(|(e, err)| Rejection {
            id: e.id.clone(),
            path: e.path.clone(),
            error: err.to_string(),
        })
        .collect();
    for r in &rejected {
        writeln!(out, "rejected: {} ({}): {}", r.id, r.path, r.error)?;
    }
    let mut subjects: Vec<Subject> = loaded
        .braces
        .into_iter()
        .map(|(e, b)| Subject::new(e.id, b))
        .collect();
    if with_examples {
        subjects.extend(harness::constructed_examples());
    }
    writeln!(out, "subjects: {}", subjects.len())?;
    let result = harness::run(&harness::registry(), &subjects, strategy);
    write!(out, "{}", result.table())?;
    let passed = result.passed() && rejected.is_empty();
    writeln!(
        out,
        "{}",
        if passed {
            "all claims verified"
        } else {
            "NOT all claims verified"
        }
    )?;
    if let Some(p) = report {
        write_json(
            p,
            &TheoremReport {
                catalog: dir.display().to_string(),
                rejected,
                report: result,
            },
        )?;
    }
    Ok(if passed { Exit::Success } else { Exit::Failure })
}
