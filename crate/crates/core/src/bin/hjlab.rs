use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hjlab::entropy::EnvelopeMode;
use hjlab::scenario::{bundled, list_builtins, run_scenario, Check, ScenarioConfig};

/// Runs Hamilton–Jacobi scenario files.
#[derive(Parser)]
#[command(name = "hjlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a bundled scenario by name.
    Run {
        scenario: String,
        /// Exit with status 1 when this check fails (`ordering`, `entropy-pass`).
        #[arg(long = "assert", value_name = "CHECK")]
        checks: Vec<Check>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List built-in Hamiltonians, initial conditions and scenarios.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::List => {
            print!("{}", list_builtins());
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            checks,
            out,
        } => run(&scenario, &checks, out.as_deref()),
    }
}

fn run(scenario: &str, checks: &[Check], out: Option<&Path>) -> ExitCode {
    let path = Path::new(scenario);
    let loaded = if path.exists() {
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        ScenarioConfig::from_path(path).map(|c| (c, base))
    } else if let Some(text) = bundled(scenario) {
        ScenarioConfig::from_toml(text).map(|c| (c, PathBuf::from(".")))
    } else {
        eprintln!("error: `{scenario}` is neither a file nor a bundled scenario");
        return ExitCode::from(2);
    };
    let (cfg, base) = match loaded {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: config: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run_scenario(&cfg, &base, out) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for r in &outcome.ordering {
        println!(
            "t = {}: ordering max violation {:.3e} ({})",
            r.t,
            r.max_violation,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    for s in &outcome.entropy {
        println!(
            "t = {}: entropy ({} envelope) {} nonsmooth nodes, {} failing",
            s.t,
            match s.mode {
                EnvelopeMode::Convex => "convex",
                EnvelopeMode::Concave => "concave",
            },
            s.reports.len(),
            s.failures
        );
    }
    println!(
        "wrote {} files to {}",
        outcome.files.len(),
        outcome.output_dir.display()
    );
    let failed = outcome.failed_checks(checks);
    for f in &failed {
        eprintln!("assertion failed: {f}");
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
