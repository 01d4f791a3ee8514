use std::process::ExitCode;

use clap::Parser;
use zhu_cli::{exit_code, render, run, Command, RunConfig, UsageError, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "zhu", version, about = "Exact twisted Zhu bimodule computations with JSON reports")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

fn threads() -> Result<(), UsageError> {
    let Ok(text) = std::env::var("ZHU_THREADS") else {
        return Ok(());
    };
    let n: usize = text.trim().parse().map_err(|_| UsageError(format!("ZHU_THREADS: not a count: {text}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError(format!("ZHU_THREADS: {e}")))
}

fn main_inner() -> Result<i32, UsageError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return Ok(if usage { EXIT_USAGE } else { 0 });
        }
    };
    threads()?;
    let cfg = cli.config.resolve()?;
    let (report, model) = run(cli.command, &cfg)?;
    let json = render(&report, &model, cfg.certificates);
    match &cfg.out {
        Some(path) => std::fs::write(path, json).map_err(|e| UsageError(format!("{}: {e}", path.display())))?,
        None => print!("{json}"),
    }
    Ok(exit_code(report.outcome()))
}

fn main() -> ExitCode {
    let code = main_inner().unwrap_or_else(|e| {
        eprintln!("zhu: {e}");
        EXIT_USAGE
    });
    ExitCode::from(code as u8)
}
