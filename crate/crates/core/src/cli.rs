//! Command-line front end.
//!
//! Exit status: 0 when the check holds, 1 when it does not (or a file being
//! validated has errors), 2 for input and usage errors, 3 when the search
//! budget ran out.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::compliance::{
    find_compliance_with, minimal_witnesses, ComplianceMode, ComplianceReport, SearchOptions,
    DEFAULT_BUDGET,
};
use crate::graphtext::{emit_report, parse_class_graph_named, parse_object_graph_named, ParseOutcome};
use crate::membership::Membership;
use crate::model::{ClassGraph, ObjectGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Passed,
    Failed,
    InputError,
    Undecided,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Passed => 0,
            ExitStatus::Failed => 1,
            ExitStatus::InputError => 2,
            ExitStatus::Undecided => 3,
        }
    }

    fn from_verdict(holds: bool) -> Self {
        if holds {
            ExitStatus::Passed
        } else {
            ExitStatus::Failed
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "graphcomply", version, about = "Check object graphs against class graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse `.og` and `.cg` files and report diagnostics.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Test one membership relation between a node or arc and a class.
    Member {
        graph: PathBuf,
        schema: PathBuf,
        #[arg(long, conflicts_with = "arc", required_unless_present = "arc")]
        node: Option<String>,
        #[arg(long)]
        arc: Option<String>,
        /// Class id, or class arc id together with --arc.
        #[arg(long)]
        class: String,
        #[arg(long, value_enum, default_value_t = Kind::Strict)]
        kind: Kind,
    },
    /// Search for a compliance relation.
    Check {
        graph: PathBuf,
        schema: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Normal)]
        mode: Mode,
        /// Write the JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Maximum number of search-node expansions.
        #[arg(long, env = "GRAPHCOMPLY_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// List every minimal witness.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Strict,
    Left,
    Right,
    Full,
    Relational,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Partial,
    Normal,
    Full,
}

impl From<Mode> for ComplianceMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Partial => ComplianceMode::Partial,
            Mode::Normal => ComplianceMode::Normal,
            Mode::Full => ComplianceMode::Full,
        }
    }
}

/// Runs the CLI on `args` (including the program name). Write errors on
/// `out` and `err` are ignored.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                ExitStatus::InputError
            } else {
                let _ = write!(out, "{text}");
                ExitStatus::Passed
            };
        }
    };
    let result = match cli.command {
        Command::Validate { paths } => validate(&paths, out, err),
        Command::Member {
            graph,
            schema,
            node,
            arc,
            class,
            kind,
        } => member(&graph, &schema, node, arc, &class, kind, out, err),
        Command::Check {
            graph,
            schema,
            mode,
            report,
            budget,
            all,
        } => check(&graph, &schema, mode.into(), report.as_deref(), budget, all, out, err),
    };
    result.unwrap_or_else(|message| {
        let _ = writeln!(err, "error: {message}");
        ExitStatus::InputError
    })
}

type CmdResult = Result<ExitStatus, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn report_outcome<T>(outcome: ParseOutcome<T>, err: &mut dyn Write) -> Option<T> {
    let _ = write!(err, "{}", outcome.diagnostics);
    outcome.value
}

fn load(graph: &Path, schema: &Path, err: &mut dyn Write) -> Result<(ObjectGraph, ClassGraph), String> {
    let g = parse_object_graph_named(&read(graph)?, &graph.display().to_string());
    let g = report_outcome(g, err).ok_or_else(|| format!("{} does not parse", graph.display()))?;
    let s = parse_class_graph_named(&read(schema)?, &schema.display().to_string());
    let s = report_outcome(s, err).ok_or_else(|| format!("{} does not parse", schema.display()))?;
    Ok((g, s))
}

fn validate(paths: &[PathBuf], out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mut ok = true;
    for path in paths {
        let name = path.display().to_string();
        let source = read(path)?;
        let parsed = match path.extension().and_then(|e| e.to_str()) {
            Some("og") => report_outcome(parse_object_graph_named(&source, &name), err).is_some(),
            Some("cg") => report_outcome(parse_class_graph_named(&source, &name), err).is_some(),
            _ => return Err(format!("{name}: expected a .og or .cg file")),
        };
        let _ = writeln!(out, "{name}: {}", if parsed { "ok" } else { "invalid" });
        ok &= parsed;
    }
    Ok(ExitStatus::from_verdict(ok))
}

#[allow(clippy::too_many_arguments)]
fn member(
    graph: &Path,
    schema: &Path,
    node: Option<String>,
    arc: Option<String>,
    class: &str,
    kind: Kind,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let (g, s) = load(graph, schema, err)?;
    let m = Membership::new(&g, &s);
    let check = match (node, arc) {
        (Some(id), _) => {
            let n = g.node(&id).ok_or_else(|| format!("unknown node `{id}`"))?;
            let c = s.class(class).ok_or_else(|| format!("unknown class `{class}`"))?;
            match kind {
                Kind::Strict => m.check_node_strict(n, c),
                Kind::Relational => m.check_node_relational(n, c),
                Kind::Left | Kind::Right | Kind::Full => {
                    return Err("--kind left, right and full apply to arcs only".into())
                }
            }
        }
        (None, Some(id)) => {
            let a = g.arc(&id).ok_or_else(|| format!("unknown arc `{id}`"))?;
            let ca = s.arc(class).ok_or_else(|| format!("unknown class arc `{class}`"))?;
            match kind {
                Kind::Strict => m.check_arc_strict(a, ca),
                Kind::Left => m.check_arc_left(a, ca),
                Kind::Right => m.check_arc_right(a, ca),
                Kind::Full => m.check_arc_full(a, ca),
                Kind::Relational => return Err("--kind relational applies to nodes only".into()),
            }
        }
        (None, None) => return Err("one of --node or --arc is required".into()),
    };
    match &check {
        Ok(()) => {
            let _ = writeln!(out, "true");
        }
        Err(why) => {
            let _ = writeln!(out, "false: {why}");
        }
    }
    Ok(ExitStatus::from_verdict(check.is_ok()))
}

#[allow(clippy::too_many_arguments)]
fn check(
    graph: &Path,
    schema: &Path,
    mode: ComplianceMode,
    report_path: Option<&Path>,
    budget: u64,
    all: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let (g, s) = load(graph, schema, err)?;
    let options = SearchOptions { budget };
    let report = find_compliance_with(&g, &s, mode, options);
    if let Some(path) = report_path {
        fs::write(path, emit_report(&report))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    print_report(&report, budget, out);
    if report.undecided {
        return Ok(ExitStatus::Undecided);
    }
    if all && report.compliant {
        match minimal_witnesses(&g, &s, mode, options) {
            Ok(witnesses) => {
                let _ = writeln!(out, "minimal witnesses: {}", witnesses.len());
                for (i, w) in witnesses.iter().enumerate() {
                    let pairs: Vec<String> = w.iter().map(|p| format!("{} -> {}", p.node, p.class)).collect();
                    let _ = writeln!(out, "  {}. {}", i + 1, pairs.join(", "));
                }
            }
            Err(_) => {
                let _ = writeln!(out, "undecided: search budget of {budget} expansions exhausted while enumerating");
                return Ok(ExitStatus::Undecided);
            }
        }
    }
    Ok(ExitStatus::from_verdict(report.compliant))
}

fn print_report(report: &ComplianceReport, budget: u64, out: &mut dyn Write) {
    let mode = report.mode;
    let verdict = if report.undecided {
        format!("undecided ({mode}): search budget of {budget} expansions exhausted")
    } else if report.compliant {
        match mode {
            ComplianceMode::Partial => "partially compliant".to_owned(),
            ComplianceMode::Normal => "compliant".to_owned(),
            ComplianceMode::Full => "fully compliant".to_owned(),
        }
    } else {
        match mode {
            ComplianceMode::Partial => "not partially compliant".to_owned(),
            ComplianceMode::Normal => "not compliant".to_owned(),
            ComplianceMode::Full => "not fully compliant".to_owned(),
        }
    };
    let _ = writeln!(out, "{verdict}");
    if report.compliant {
        let _ = writeln!(out, "witness:");
        for p in &report.witness {
            let _ = writeln!(out, "  {} -> {}", p.node, p.class);
        }
        if mode == ComplianceMode::Partial {
            let _ = writeln!(out, "covered classes: {}", join(&report.covered_classes));
        }
    }
    for c in &report.uncovered_classes {
        let _ = writeln!(out, "uncovered class: {c}");
    }
    for n in &report.uncovered_nodes {
        let _ = writeln!(out, "uncovered node: {n}");
    }
    for c in &report.conflicts {
        let _ = writeln!(out, "{c}");
    }
    if mode == ComplianceMode::Partial && !report.compliant && report.raw_compliant && !report.undecided {
        let _ = writeln!(out, "note: only the empty relation qualifies");
    }
}

fn join(ids: &[crate::model::Ident]) -> String {
    if ids.is_empty() {
        return "(none)".to_owned();
    }
    ids.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(", ")
}
