//! Command-line front end: argument parsing, file formats, reports and the
//! acceptance suite.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod regress;
pub mod report;

pub use error::{CliError, CliResult, ExitStatus};
pub use report::Report;

use args::{Cli, Command};
use std::path::PathBuf;

/// Runs one parsed invocation and writes its report.
pub fn execute(cli: &Cli) -> CliResult<ExitStatus> {
    let seed = cli.seed;
    let (report, path): (Report, Option<PathBuf>) = match &cli.command {
        Command::Kahan(a) => (commands::kahan(a, seed)?, a.report.clone()),
        Command::Distance(a) => (commands::distance(a, seed)?, a.report.clone()),
        Command::Boxes(a) => (commands::boxes(a, seed)?, a.report.clone()),
        Command::Polar(a) => (commands::polar(a, seed)?, a.report.clone()),
        Command::Tower(a) => (commands::tower(a, seed)?, a.report.clone()),
        Command::Obstruct(c) => commands::obstruct(c, seed)?,
        Command::Tensor(a) => (commands::tensor(a, seed)?, a.report.clone()),
        Command::Regress(a) => {
            let selected = regress::select(&a.suite)?;
            let cfg = regress::SuiteConfig { seed, quick: cli.quick };
            let results = regress::run(&selected, cfg, |r| eprintln!("{}", r.line()));
            regress::summary(&results, cfg).emit(a.report.as_deref())?;
            return Ok(regress::exit_status(&results));
        }
    };
    report.emit(path.as_deref())?;
    Ok(report.status())
}
