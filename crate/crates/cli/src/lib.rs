//! The `grepo` command line: drill, mine, export and bench.
//!
//! Exit codes: 0 success, 1 failure while drilling or writing, 2 invalid
//! usage or configuration, 3 unknown query target.

pub mod args;
pub mod bench;
pub mod commands;
mod error;

use std::io::Write;

pub use args::Cli;
pub use bench::{run_bench, BenchReport};
pub use error::CliError;

use args::Command;

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Drill(a) => commands::cmd_drill(a, stdout),
        Command::Mine(a) => commands::cmd_mine(a, stdout),
        Command::Export(a) => commands::cmd_export(a, stdout),
        Command::Bench(a) => {
            let config = commands::load_config(&a.config, &args::DbArg { db: None })?;
            let (report, _) = run_bench(&config, a.repeats)?;
            let json = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?;
            std::fs::write(&a.out, format!("{json}\n"))?;
            writeln!(stdout, "bench report written to {}", a.out.display())?;
            Ok(())
        }
    }
}
