// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cdgl::dgl::builtins::BUILTIN_NAMES;
use cdgl::workbench::{parse_model_ref, parse_range, run_batch, run_task, Command, ModelRef, Report, Task};

#[derive(Parser)]
#[command(name = "cdgl", version, about = "Exact computations with truncated complete dgl models")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a model: d² = 0, MC elements, morphisms and homotopies.
    Check(TaskArgs),
    /// Homology in a degree window, optionally of the twist by an MC element.
    Homology(TaskArgs),
    /// BCH product of two degree-0 elements.
    Bch(TaskArgs),
    /// Gauge action x𝒢a.
    Gauge(TaskArgs),
    /// Search for x with x𝒢a = b.
    GaugeEquiv(TaskArgs),
    /// Exponential of a degree-0 derivation.
    Exp(TaskArgs),
    /// Logarithm of an automorphism.
    Log(TaskArgs),
    /// H₀ as a nilpotent group under BCH.
    H0(TaskArgs),
    /// Rational homotopy groups of a mapping space component.
    PiMap(TaskArgs),
    /// Invariants of B aut_G(X).
    Baut(TaskArgs),
    /// Invariants of B aut*_G(X).
    Bautstar(TaskArgs),
    /// Check an explicit homotopy between two morphisms.
    Witness(TaskArgs),
    /// Run one task per line of a file; tasks run concurrently, reports keep file order.
    Batch {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Canonical,
}

#[derive(Args)]
struct TaskArgs {
    /// Model file, or a built-in such as `sphere(2)`.
    input: Option<String>,
    /// Model of the file, or a built-in.
    #[arg(long)]
    model: Option<String>,
    /// Degree window a..b.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: Option<(i64, i64)>,
    /// Bracket-length cap; overrides every truncation in the file.
    #[arg(long = "truncate")]
    cap: Option<usize>,
    #[arg(long)]
    word_cap: Option<usize>,
    #[arg(long, default_value_t = 6)]
    poly_cap: usize,
    /// identity | stabilizer:<filtration> | span:<derivation>,...
    #[arg(long)]
    gspec: Option<String>,
    /// Bracket expression; repeat for commands taking several.
    #[arg(long = "expr", allow_hyphen_values = true)]
    exprs: Vec<String>,
    #[arg(long)]
    morphism: Option<String>,
    #[arg(long)]
    derivation: Option<String>,
    #[arg(long)]
    homotopy: Option<String>,
    /// Postnikov stage to report (baut, bautstar).
    #[arg(long)]
    postnikov: Option<i64>,
    /// Skip the rerun at cap + 1.
    #[arg(long)]
    no_stability: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn is_builtin(text: &str) -> bool {
    match parse_model_ref(text) {
        Ok(ModelRef::Named(id)) => BUILTIN_NAMES.contains(&id.name.as_str()),
        Ok(ModelRef::Builtin { name, .. }) => BUILTIN_NAMES.contains(&name.name.as_str()),
        Err(_) => false,
    }
}

fn task(command: Command, a: TaskArgs) -> Result<(Task, Format), String> {
    let mut t = Task::new(command);
    t.model = a.model;
    if let Some(input) = a.input {
        if Path::new(&input).is_file() {
            t.source = Some(std::fs::read_to_string(&input).map_err(|e| format!("{input}: {e}"))?);
            t.file = Some(input);
        } else if is_builtin(&input) {
            if t.model.is_some() {
                return Err(format!("both a built-in `{input}` and --model were given"));
            }
            t.model = Some(input);
        } else {
            return Err(format!("{input}: no such file or built-in model"));
        }
    }
    t.range = a.range;
    t.cap = a.cap;
    t.word_cap = a.word_cap;
    t.poly_cap = a.poly_cap;
    t.gspec = a.gspec;
    t.exprs = a.exprs;
    t.morphism = a.morphism;
    t.derivation = a.derivation;
    t.homotopy = a.homotopy;
    t.postnikov = a.postnikov;
    t.stability = !a.no_stability;
    Ok((t, a.format))
}

fn split(cmd: Cmd) -> Result<(Task, Format), String> {
    let (c, a) = match cmd {
        Cmd::Check(a) => (Command::Check, a),
        Cmd::Homology(a) => (Command::Homology, a),
        Cmd::Bch(a) => (Command::Bch, a),
        Cmd::Gauge(a) => (Command::Gauge, a),
        Cmd::GaugeEquiv(a) => (Command::GaugeEquiv, a),
        Cmd::Exp(a) => (Command::Exp, a),
        Cmd::Log(a) => (Command::Log, a),
        Cmd::H0(a) => (Command::H0, a),
        Cmd::PiMap(a) => (Command::PiMap, a),
        Cmd::Baut(a) => (Command::Baut, a),
        Cmd::Bautstar(a) => (Command::Bautstar, a),
        Cmd::Witness(a) => (Command::Witness, a),
        Cmd::Batch { .. } => return Err("batch files cannot nest".into()),
    };
    task(c, a)
}

fn emit(reports: &[Report], format: Format) {
    match format {
        Format::Table => {
            let tables: Vec<String> = reports.iter().map(Report::table).collect();
            print!("{}", tables.join("\n"));
        }
        Format::Canonical if reports.len() == 1 => print!("{}", reports[0].canonical()),
        Format::Canonical => {
            let all = serde_json::Value::Array(reports.iter().map(Report::to_value).collect());
            println!("{}", serde_json::to_string_pretty(&all).expect("reports serialize"));
        }
    }
}

fn batch(file: &str) -> Result<Vec<Task>, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?;
    let mut tasks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words = shlex::split(line).ok_or_else(|| format!("{file}:{}: unbalanced quotes", i + 1))?;
        let words = std::iter::once("cdgl".to_string()).chain(words.into_iter().skip_while(|w| w == "cdgl"));
        let cli = Cli::try_parse_from(words).map_err(|e| format!("{file}:{}: {}", i + 1, e.to_string().lines().next().unwrap_or("")))?;
        tasks.push(split(cli.command)?.0);
    }
    Ok(tasks)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (reports, format) = match cli.command {
        Cmd::Batch { file, format } => match batch(&file) {
            Ok(tasks) => (run_batch(&tasks), format),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        cmd => match split(cmd) {
            Ok((t, format)) => (vec![run_task(&t)], format),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    emit(&reports, format);
    ExitCode::from(reports.iter().map(|r| r.exit_code()).max().unwrap_or(0) as u8)
}
