use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use zollspec_cli::{load_config, run, CliError, Command};

/// Spectral computations for Schrodinger operators with complex potentials on
/// the 2-sphere.
#[derive(Debug, Parser)]
#[command(name = "zollspec", version)]
struct Args {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` from the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "ZOLLSPEC_THREADS")]
    threads: Option<usize>,
}

fn execute(args: &Args) -> Result<Vec<PathBuf>, CliError> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::ThreadPool(e.to_string()))?;
    }
    let cfg = load_config(&args.config)?;
    let out = args.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    run(args.command, &cfg, &out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match execute(&args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
