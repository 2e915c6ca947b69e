use std::process::ExitCode;

use clap::Parser;

use bcow_harness::cli::{output_path, Cli, OUT_DIR_ENV};
use bcow_harness::emit::{emit_csv, summary, to_csv_string};
use bcow_harness::run::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<u8> {
    let cfg = cli.experiment()?;
    let record = run(&cfg, cli.jobs)?;
    let env_dir = std::env::var(OUT_DIR_ENV).ok();
    match output_path(&cfg, env_dir.as_deref()) {
        Some(path) => {
            emit_csv(&record, &path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", to_csv_string(&record)),
    }
    eprint!("{}", summary(&record));
    Ok(record.exit_code() as u8)
}
