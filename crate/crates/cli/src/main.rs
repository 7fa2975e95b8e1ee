use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use khpos::batch::{cmd_compute, cmd_test, Config, MirrorMode, RecordResult, Status, Wants};
use khpos::ingest::{ingest_csv, parse_diagram_line, parse_text_input, ColumnMap, LinkRecord};
use khpos::survey::{cmd_survey, SurveyReport, SurveySpec};

#[derive(Parser)]
#[command(name = "khpos", version, about = "Jones, Conway and Khovanov invariants of links, and positivity obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariants of the given diagrams.
    Compute(RunArgs),
    /// Compute invariants and run the positivity obstruction tests.
    Test(RunArgs),
    /// Read a CSV table of invariants and cross-check it.
    Ingest(IngestArgs),
    /// Enumerate positive braid closures and check the obstruction laws on them.
    Survey(SurveyArgs),
}

#[derive(Args)]
struct Input {
    /// A PD code, e.g. "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]".
    #[arg(long, value_name = "CODE")]
    pd: Vec<String>,
    /// A braid word, e.g. "strands=2; 1 1 1".
    #[arg(long, value_name = "WORD")]
    braid: Vec<String>,
    /// A file with one diagram per line (optionally "name: ..."), or a .csv table.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Column mapping for CSV input, e.g. "name=Name,jones=Jones".
    #[arg(long, value_name = "MAP")]
    columns: Option<String>,
}

#[derive(Args)]
struct Common {
    /// Compute everything (the default when no invariant is selected).
    #[arg(long)]
    all: bool,
    #[arg(long)]
    jones: bool,
    #[arg(long)]
    conway: bool,
    #[arg(long)]
    kh: bool,
    /// Crossing cap for Khovanov homology.
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    /// Crossing count above which the bracket state sum logs a warning.
    #[arg(long, value_name = "N")]
    bracket_cap: Option<usize>,
    /// Node budget for the Conway skein recursion.
    #[arg(long, value_name = "N")]
    skein_budget: Option<usize>,
    /// Mirror normalization for ingested invariants.
    #[arg(long, value_enum, default_value_t = Mirror::Auto)]
    mirror: Mirror,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct IngestArgs {
    /// CSV file to read.
    path: PathBuf,
    /// Column mapping, e.g. "name=Name,jones=Jones,kh=Khovanov".
    #[arg(long, value_name = "MAP")]
    columns: Option<String>,
    /// Also run the obstruction tests.
    #[arg(long)]
    test: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SurveyArgs {
    /// Bounds, e.g. "strands=3,length=8".
    #[arg(long = "survey", value_name = "SPEC", default_value = "strands=3,length=6")]
    spec: String,
    /// Compute Khovanov homology for every diagram, not once per fingerprint class.
    #[arg(long)]
    kh_per_diagram: bool,
    /// Crossing cap for Khovanov homology.
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Record,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mirror {
    Auto,
    Never,
    Always,
}

enum Failure {
    Usage(String),
    Hard(String),
}

fn config(c: &Common) -> Config {
    let mut cfg = Config::default();
    if !c.all && (c.jones || c.conway || c.kh) {
        cfg.wants = Wants { jones: c.jones, conway: c.conway, kh: c.kh };
    }
    if let Some(n) = c.cap {
        cfg.kh_cap = n;
    }
    if let Some(n) = c.bracket_cap {
        cfg.bracket_cap = n;
    }
    if let Some(n) = c.skein_budget {
        cfg.skein_budget = n;
    }
    cfg.mirror = match c.mirror {
        Mirror::Auto => MirrorMode::Auto,
        Mirror::Never => MirrorMode::Never,
        Mirror::Always => MirrorMode::Always,
    };
    cfg
}

fn column_map(spec: Option<&str>) -> Result<ColumnMap, Failure> {
    match spec {
        Some(s) => ColumnMap::parse(s).map_err(|e| Failure::Usage(e.to_string())),
        None => Ok(ColumnMap::default()),
    }
}

fn read_csv(path: &Path, columns: Option<&str>) -> Result<Vec<LinkRecord>, Failure> {
    let map = column_map(columns)?;
    ingest_csv(path, &map).map_err(|e| Failure::Hard(e.to_string()))
}

fn records(input: &Input) -> Result<Vec<LinkRecord>, Failure> {
    let mut out = Vec::new();
    for (k, pd) in input.pd.iter().enumerate() {
        out.push(parse_diagram_line(pd, &format!("pd {}", k + 1)));
    }
    for (k, b) in input.braid.iter().enumerate() {
        let line = if b.trim_start().starts_with("strands") { b.clone() } else { format!("strands={b}") };
        out.push(parse_diagram_line(&line, &format!("braid {}", k + 1)));
    }
    if let Some(path) = &input.file {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            out.extend(read_csv(path, input.columns.as_deref())?);
        } else {
            let text = fs::read_to_string(path).map_err(|e| Failure::Hard(format!("{}: {e}", path.display())))?;
            out.extend(parse_text_input(&text));
        }
    } else if input.columns.is_some() {
        return Err(Failure::Usage("--columns needs a CSV --file".into()));
    }
    if out.is_empty() {
        return Err(Failure::Usage("no input: give --pd, --braid or --file".into()));
    }
    Ok(out)
}

fn render_results(results: &[RecordResult], format: Format) -> String {
    let mut s = String::new();
    for r in results {
        match format {
            Format::Text => s.push_str(&r.to_text()),
            Format::Record => {
                s.push_str(&r.to_json());
                s.push('\n');
            }
        }
    }
    s
}

fn render_survey(r: &SurveyReport, format: Format) -> String {
    if let Format::Record = format {
        return serde_json::to_string(r).expect("survey serializes") + "\n";
    }
    let mut s = format!(
        "words {}, distinct diagrams {}, fingerprint classes {}, skipped {}, violations {}\n",
        r.words,
        r.diagrams,
        r.classes,
        r.skipped.len(),
        r.violations.len()
    );
    for v in &r.violations {
        s.push_str(&format!("violation {:?} on {}: {}\n", v.law, v.word, v.detail));
    }
    for k in &r.skipped {
        s.push_str(&format!("skipped {k}\n"));
    }
    for rec in r.equality_cases() {
        let tests: Vec<String> = rec.equality.iter().map(|t| t.to_string()).collect();
        s.push_str(&format!("equality {} (c = {}, V = {}): {}\n", rec.word, rec.crossings, rec.jones, tests.join(", ")));
    }
    s
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Hard(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Hard(e.to_string())),
    }
}

fn finish(results: &[RecordResult], c: &Common) -> Result<bool, Failure> {
    emit(&render_results(results, c.format), c.out.as_deref())?;
    Ok(results.iter().all(|r| r.status == Status::Ok))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Compute(a) => finish(&cmd_compute(&records(&a.input)?, &config(&a.common)), &a.common),
        Command::Test(a) => finish(&cmd_test(&records(&a.input)?, &config(&a.common)), &a.common),
        Command::Ingest(a) => {
            let recs = read_csv(&a.path, a.columns.as_deref())?;
            let cfg = config(&a.common);
            let results = if a.test { cmd_test(&recs, &cfg) } else { cmd_compute(&recs, &cfg) };
            finish(&results, &a.common)
        }
        Command::Survey(a) => {
            let mut spec = SurveySpec::parse(&a.spec).map_err(Failure::Usage)?;
            spec.kh_per_diagram = a.kh_per_diagram;
            if let Some(n) = a.cap {
                spec.kh_cap = n;
            }
            let report = cmd_survey(&spec);
            emit(&render_survey(&report, a.format), a.out.as_deref())?;
            Ok(report.violations.is_empty())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Hard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
