//! The `fil` command line.
//!
//! Exit codes: 0 success, 1 logical failure (rejected derivation, budget
//! exceeded), 2 input error (unreadable file, bad syntax, bad arguments).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::formula::{parse, print, Formula};
use crate::kernel::{check, parse_derivation, print_derivation, to_ilp, Derivation, Mode, ToIlpError};
use crate::series;
use crate::synth;
use crate::veltman::{countermodel_search, print_model, SearchBudget, SearchOutcome};

#[derive(Parser, Debug)]
#[command(
    name = "fil",
    version,
    about = "Check, build and test derivations in the labeled interpretability logic FIL"
)]
struct Cli {
    /// Report style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for parallel phases.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Audit derivation files.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Synthesize a derivation, check it, and write it out.
    Prove {
        #[arg(long, value_enum, ignore_case = true)]
        target: Target,
        /// Series index; for `j5`, 1 gives `<>a |> a` and 2 gives `b |> <>c -> b |> c`.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print members of a formula family.
    Series {
        #[arg(long, value_enum, ignore_case = true)]
        kind: Kind,
        #[arg(long, conflicts_with = "upto")]
        n: Option<usize>,
        /// Print every member from the first up to this index.
        #[arg(long)]
        upto: Option<usize>,
        /// Keep the literal `& true` conjunct at the bottom of slim, X and Z.
        #[arg(long)]
        keep_top: bool,
    },
    /// Translate an accepted FIL derivation into ILP.
    Erase {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a finite Veltman countermodel.
    Search {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = SearchBudget::default().max_worlds)]
        max_worlds: usize,
        #[arg(long, default_value_t = SearchBudget::default().max_letters)]
        max_letters: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    W,
    M0,
    R,
    Slim,
    Broad,
    J5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Slim,
    Broad,
    Original,
    X,
    Y,
    Z,
    U,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Serialize)]
struct Record {
    item: String,
    status: Status,
    ms: u128,
    detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    digest: Option<String>,
}

/// What a command produced: one record per item plus free text for humans.
struct Outcome {
    records: Vec<Record>,
    text: String,
    digest: Sha256,
}

impl Outcome {
    fn new() -> Self {
        Outcome { records: Vec::new(), text: String::new(), digest: Sha256::new() }
    }

    fn item(&mut self, item: impl Into<String>, status: Status, started: Instant, detail: impl Into<String>) {
        self.records.push(Record {
            item: item.into(),
            status,
            ms: started.elapsed().as_millis(),
            detail: detail.into(),
            digest: None,
        });
    }

    fn say(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        if !self.text.ends_with('\n') {
            self.text.push('\n');
        }
    }

    fn feed(&mut self, bytes: impl AsRef<[u8]>) {
        self.digest.update((bytes.as_ref().len() as u64).to_le_bytes());
        self.digest.update(bytes);
    }

    fn status(&self) -> Status {
        self.records.iter().map(|r| r.status).max().unwrap_or(Status::Ok)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let started = Instant::now();
    let command = format!("{:?}", cli.command);
    let outcome = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, cli.format)),
            Err(e) => {
                let _ = writeln!(err, "cannot start {j} workers: {e}");
                return 2;
            }
        },
        None => dispatch(&cli.command, cli.format),
    };
    let status = outcome.status();
    let digest = hex::encode(outcome.digest.clone().finalize());
    match cli.format {
        Format::Text => {
            let _ = out.write_all(outcome.text.as_bytes());
        }
        Format::Records => {
            for r in &outcome.records {
                let _ = writeln!(out, "{}", serde_json::to_string(r).expect("records serialize"));
            }
            let summary = Record {
                item: "summary".into(),
                status,
                ms: started.elapsed().as_millis(),
                detail: command,
                digest: Some(digest),
            };
            let _ = writeln!(out, "{}", serde_json::to_string(&summary).expect("records serialize"));
        }
    }
    status.code()
}

fn dispatch(command: &Command, format: Format) -> Outcome {
    match command {
        Command::Check { paths } => cmd_check(paths),
        Command::Prove { target, n, out } => cmd_prove(*target, *n, out.as_deref(), format),
        Command::Series { kind, n, upto, keep_top } => cmd_series(*kind, *n, *upto, *keep_top),
        Command::Erase { path, out } => cmd_erase(path, out.as_deref(), format),
        Command::Search { formula, max_worlds, max_letters } => {
            cmd_search(formula, SearchBudget { max_worlds: *max_worlds, max_letters: *max_letters })
        }
    }
}

enum Loaded {
    Ok(Derivation),
    Unreadable(String),
}

fn load(path: &Path, o: &mut Outcome) -> Loaded {
    match std::fs::read_to_string(path) {
        Err(e) => Loaded::Unreadable(format!("cannot read: {e}")),
        Ok(text) => {
            o.feed(path.display().to_string());
            o.feed(&text);
            match parse_derivation(&text) {
                Ok(d) => Loaded::Ok(d),
                Err(e) => Loaded::Unreadable(e.to_string()),
            }
        }
    }
}

fn cmd_check(paths: &[PathBuf]) -> Outcome {
    let results: Vec<Outcome> = paths
        .par_iter()
        .map(|path| {
            let started = Instant::now();
            let mut o = Outcome::new();
            let item = path.display().to_string();
            match load(path, &mut o) {
                Loaded::Unreadable(msg) => {
                    o.say(format!("{item}: error: {msg}"));
                    o.item(item, Status::Error, started, msg);
                }
                Loaded::Ok(d) => {
                    let report = check(&d);
                    if report.accepted {
                        let t = report.theorem.expect("accepted derivations have a theorem");
                        let detail = format!("accepted ({} mode, {} lines): {t}", d.mode, d.lines.len());
                        o.say(format!("{item}: {detail}"));
                        o.item(item, Status::Ok, started, detail);
                    } else {
                        let e = &report.errors[0];
                        let at = e.line.map_or("-".to_string(), |l| l.to_string());
                        let detail = format!("{} at line {at}: {}", e.error.kind(), e.error);
                        o.say(format!("{item}: rejected: {detail}"));
                        o.item(item, Status::Fail, started, detail);
                    }
                }
            }
            o
        })
        .collect();
    let mut all = Outcome::new();
    for o in results {
        all.text.push_str(&o.text);
        all.records.extend(o.records);
        all.digest.update(o.digest.finalize());
    }
    all
}

fn write_or_print(
    o: &mut Outcome,
    item: &str,
    started: Instant,
    d: &Derivation,
    out: Option<&Path>,
    format: Format,
) {
    let text = print_derivation(d);
    let theorem = d.theorem().map(|t| t.to_string()).unwrap_or_default();
    match out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => {
                let detail = format!("wrote {} ({} lines): {theorem}", path.display(), d.lines.len());
                o.say(&detail);
                o.item(item, Status::Ok, started, detail);
            }
            Err(e) => {
                let detail = format!("cannot write {}: {e}", path.display());
                o.say(&detail);
                o.item(item, Status::Error, started, detail);
            }
        },
        None if format == Format::Records => {
            o.item(item, Status::Error, started, "records output needs --out for the derivation");
        }
        None => {
            o.say(&text);
            o.item(item, Status::Ok, started, theorem);
        }
    }
}

fn cmd_prove(target: Target, n: Option<usize>, out: Option<&Path>, format: Format) -> Outcome {
    let started = Instant::now();
    let mut o = Outcome::new();
    o.feed(format!("{target:?} {n:?}"));
    let item = match n {
        Some(n) => format!("{target:?}({n})"),
        None => format!("{target:?}"),
    };
    let built = match (target, n) {
        (Target::Slim | Target::Broad, None) => {
            let msg = "--n is required for series targets";
            o.say(format!("error: {msg}"));
            o.item(item, Status::Error, started, msg);
            return o;
        }
        (Target::W, _) => synth::derive_w(),
        (Target::M0, _) => synth::derive_m0(),
        (Target::R, _) => synth::derive_r(),
        (Target::Slim, Some(n)) => synth::derive_slim(n),
        (Target::Broad, Some(n)) => synth::derive_broad(n),
        (Target::J5, None | Some(1)) => synth::derive_j5_equivalence().map(|p| p.0),
        (Target::J5, Some(2)) => synth::derive_j5_equivalence().map(|p| p.1),
        (Target::J5, Some(_)) => {
            let msg = "j5 takes --n 1 or --n 2";
            o.say(format!("error: {msg}"));
            o.item(item, Status::Error, started, msg);
            return o;
        }
    };
    match built {
        Err(e) => {
            o.say(format!("{item}: synthesis failed: {e}"));
            o.item(item, Status::Fail, started, e.to_string());
        }
        Ok(d) => {
            let report = check(&d);
            if report.accepted {
                write_or_print(&mut o, &item, started, &d, out, format);
            } else {
                let detail = format!("kernel rejected output, not written: {}", report.errors[0]);
                o.say(&detail);
                o.item(item, Status::Fail, started, detail);
            }
        }
    }
    o
}

fn cmd_series(kind: Kind, n: Option<usize>, upto: Option<usize>, keep_top: bool) -> Outcome {
    let started = Instant::now();
    let mut o = Outcome::new();
    o.feed(format!("{kind:?} {n:?} {upto:?} {keep_top}"));
    let first = if matches!(kind, Kind::U | Kind::V) { 1 } else { 0 };
    let range = match (n, upto) {
        (Some(n), None) => n..=n,
        (None, Some(m)) => first..=m,
        _ => {
            let msg = "give exactly one of --n and --upto";
            o.say(format!("error: {msg}"));
            o.item(format!("{kind:?}"), Status::Error, started, msg);
            return o;
        }
    };
    for i in range {
        let item = format!("{kind:?}({i})");
        let f: Result<Formula, series::SeriesError> = match kind {
            Kind::Slim => Ok(series::gen_slim_with(i, keep_top)),
            Kind::Broad => Ok(series::gen_broad(i)),
            Kind::Original => Ok(series::gen_original_r(i)),
            Kind::X => Ok(series::gen_x_with(i, keep_top)),
            Kind::Y => Ok(series::gen_y(i)),
            Kind::Z => Ok(series::gen_z_with(i, keep_top)),
            Kind::U => series::gen_u(i),
            Kind::V => series::gen_v(i),
        };
        match f {
            Ok(f) => {
                let s = print(&f);
                o.say(&s);
                o.item(item, Status::Ok, started, s);
            }
            Err(e) => {
                o.say(format!("error: {e}"));
                o.item(item, Status::Error, started, e.to_string());
            }
        }
    }
    o
}

fn cmd_erase(path: &Path, out: Option<&Path>, format: Format) -> Outcome {
    let started = Instant::now();
    let mut o = Outcome::new();
    let item = path.display().to_string();
    let d = match load(path, &mut o) {
        Loaded::Unreadable(msg) => {
            o.say(format!("{item}: error: {msg}"));
            o.item(item, Status::Error, started, msg);
            return o;
        }
        Loaded::Ok(d) => d,
    };
    let ilp = match to_ilp(&d) {
        Ok(ilp) => ilp,
        Err(e) => {
            let detail = match &e {
                ToIlpError::NotAccepted(errs) => format!(
                    "input not accepted: {} at line {}",
                    errs[0].error.kind(),
                    errs[0].line.map_or("-".to_string(), |l| l.to_string())
                ),
                ToIlpError::WrongMode => e.to_string(),
            };
            o.say(format!("{item}: {detail}"));
            o.item(item, Status::Fail, started, detail);
            return o;
        }
    };
    let report = check(&ilp);
    let expected = d.theorem().map(|t| t.erase_labels());
    if ilp.mode != Mode::Ilp || !report.accepted || report.theorem != expected {
        let detail = "ILP re-check failed; nothing written".to_string();
        o.say(format!("{item}: {detail}"));
        o.item(item, Status::Fail, started, detail);
        return o;
    }
    write_or_print(&mut o, &item, started, &ilp, out, format);
    o
}

fn cmd_search(formula: &str, budget: SearchBudget) -> Outcome {
    let started = Instant::now();
    let mut o = Outcome::new();
    o.feed(format!("{formula}\n{} {}", budget.max_worlds, budget.max_letters));
    let item = formula.to_string();
    let f = match parse(formula) {
        Ok(f) => f,
        Err(e) => {
            o.say(format!("error: {e}"));
            o.item(item, Status::Error, started, e.to_string());
            return o;
        }
    };
    match countermodel_search(&f, budget) {
        Err(e) => {
            o.say(format!("error: {e}"));
            o.item(item, Status::Error, started, e.to_string());
        }
        Ok(SearchOutcome::Found(cm)) => {
            let model = print_model(&cm.model);
            o.say(format!("COUNTERMODEL world {}", cm.world));
            o.say(&model);
            o.item(
                item,
                Status::Ok,
                started,
                format!("countermodel at world {}: {}", cm.world, model.trim_end().replace('\n', "; ")),
            );
        }
        Ok(SearchOutcome::ValidWithinBudget) => {
            o.say("VALID-WITHIN-BUDGET");
            o.item(item, Status::Ok, started, "VALID-WITHIN-BUDGET");
        }
        Ok(SearchOutcome::BudgetExceeded(why)) => {
            o.say(format!("BUDGET-EXCEEDED ({why})"));
            o.item(item, Status::Fail, started, format!("BUDGET-EXCEEDED: {why}"));
        }
    }
    o
}
