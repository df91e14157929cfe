use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use khc::dsl::ast::Stmt;
use khc::dsl::{parse_program, pretty, DslError, Evaluation, Trace, Value};
use khc::katz_reduce;

#[derive(Parser)]
#[command(
    name = "khc",
    version,
    about = "Hodge data of local systems on the punctured line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program and print the emitted values.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Print every binding, not only the emitted ones.
        #[arg(long)]
        emit_intermediate: bool,
        /// Log each binding to stderr as it is evaluated.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate a program and report its checks.
    Check { file: PathBuf },
    /// Print the reduction trace of the last binding.
    Katz {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("khc: {message}");
    ExitCode::from(code)
}

fn load(file: &PathBuf) -> Result<(khc::dsl::ast::Program, Evaluation), ExitCode> {
    let src =
        std::fs::read_to_string(file).map_err(|e| fail(2, format!("{}: {e}", file.display())))?;
    let report = |e: DslError| fail(e.exit_code() as u8, format!("{}:{e}", file.display()));
    let program = parse_program(&src).map_err(|e| report(e.into()))?;
    let ev = khc::dsl::eval_program(&program).map_err(report)?;
    Ok((program, ev))
}

fn report_failed_checks(ev: &Evaluation) -> bool {
    let mut ok = true;
    for c in ev.checks.iter().filter(|c| !c.passed) {
        eprintln!(
            "check failed at {}: {} (actual {})",
            c.pos, c.source, c.actual
        );
        ok = false;
    }
    ok
}

fn print_values(values: &[(&str, &Value)], ev: &Evaluation, format: Format) {
    match format {
        Format::Table => {
            for (i, (name, v)) in values.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                println!("== {name} ==");
                print!("{}", v.render_text());
            }
        }
        Format::Json => {
            let values: Vec<_> = values
                .iter()
                .map(|(name, v)| json!({ "name": name, "value": v.to_json() }))
                .collect();
            let checks: Vec<_> = ev
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "pos": c.pos.to_string(),
                        "check": c.source,
                        "passed": c.passed,
                        "actual": c.actual,
                    })
                })
                .collect();
            let doc = json!({ "values": values, "checks": checks });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("json output")
            );
        }
    }
}

fn run(file: PathBuf, format: Format, emit_intermediate: bool, trace: bool) -> ExitCode {
    let (program, ev) = match load(&file) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if trace {
        let lets = program
            .stmts
            .iter()
            .filter(|s| matches!(s, Stmt::Let { .. }));
        for (stmt, (_, v)) in lets.zip(&ev.bindings) {
            let rank = match v {
                Value::System(s) => format!(", rank {}", s.rank()),
                Value::Monodromy(m) => format!(", rank {}", m.rank()),
                Value::Line(_) => ", rank 1".to_string(),
                Value::Trace(_) => String::new(),
            };
            eprintln!(
                "{} {}  [{}{rank}]",
                stmt.pos(),
                pretty::pretty_stmt(stmt),
                v.kind()
            );
        }
    }
    let values: Vec<(&str, &Value)> = if emit_intermediate {
        ev.bindings.iter().map(|(n, v)| (n.as_str(), v)).collect()
    } else {
        ev.emits
            .iter()
            .map(|n| (n.as_str(), ev.get(n).expect("emits are bound")))
            .collect()
    };
    print_values(&values, &ev, format);
    if report_failed_checks(&ev) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check(file: PathBuf) -> ExitCode {
    let (_, ev) = match load(&file) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let failed = ev.checks.iter().filter(|c| !c.passed).count();
    for c in &ev.checks {
        if c.passed {
            println!("ok    {:>6}  {}", c.pos.to_string(), c.source);
        } else {
            println!(
                "FAIL  {:>6}  {}  (actual {})",
                c.pos.to_string(),
                c.source,
                c.actual
            );
        }
    }
    println!("{} checks, {} failed", ev.checks.len(), failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn katz(file: PathBuf, format: Format) -> ExitCode {
    let (_, ev) = match load(&file) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let Some((name, last)) = ev.bindings.last() else {
        return fail(2, "the program has no bindings");
    };
    let traced = match last {
        Value::Trace(_) => Ok(last.clone()),
        Value::System(s) => katz_reduce(s).map(|t| Value::Trace(Box::new(Trace::Hodge(t)))),
        Value::Line(l) => {
            katz_reduce(&l.to_system()).map(|t| Value::Trace(Box::new(Trace::Hodge(t))))
        }
        Value::Monodromy(m) => katz_reduce(m).map(|t| Value::Trace(Box::new(Trace::Monodromy(t)))),
    };
    match traced {
        Ok(v) => {
            print_values(&[(name.as_str(), &v)], &ev, format);
            ExitCode::SUCCESS
        }
        Err(e) => fail(if e.is_internal() { 3 } else { 2 }, format!("{name}: {e}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run {
            file,
            format,
            emit_intermediate,
            trace,
        } => run(file, format, emit_intermediate, trace),
        Command::Check { file } => check(file),
        Command::Katz { file, format } => katz(file, format),
    }
}
