use anyhow::Context;
use clap::Parser;
use nilprox_cli::args::Cli;
use nilprox_cli::{execute, ExitStatus};

/// Caps the rayon pool when `NILPROX_THREADS` is set.
fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("NILPROX_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("NILPROX_THREADS={v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        std::process::exit(ExitStatus::Validation.code());
    }
    let status = match execute(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    };
    std::process::exit(status.code());
}
