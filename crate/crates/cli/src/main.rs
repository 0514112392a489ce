use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bautin_cli::{
    cmd_ak, cmd_ak_essential, cmd_closures, cmd_dulac, cmd_melnikov, cmd_order, cmd_tables,
    cmd_zoladek, parse_float_list, samples_csv, threads_from_env, ArcInput, CliError, CliResult,
    Outcome,
};
use bautin_core::numeric::{DEFAULT_H_LIST, DEFAULT_ZOLADEK_H};

/// Orders of arcs for Bautin ideals, exceptional divisors of their blow-ups,
/// and return-map checks for quadratic centers.
#[derive(Parser)]
#[command(name = "bautin-arcs", version)]
struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ArcArgs {
    /// Arc file: {"truncation": N, "vars": {"l1": ["c0", "c1", ...], ...}}.
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with = "family",
        required_unless_present = "family"
    )]
    arc: Option<PathBuf>,
    /// Family spec file: {"family": "I13_A", "base": [...], "symbols": {...}}.
    #[arg(long, value_name = "FILE")]
    family: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Order of an arc and its point on the exceptional divisor.
    Order {
        /// Ideal file: {"vars": [...], "generators": [...]}. Defaults to the
        /// generators localized at the base point of a --family arc.
        #[arg(long, value_name = "FILE")]
        ideal: Option<PathBuf>,
        #[command(flatten)]
        arc: ArcArgs,
    },
    /// Sampled dimensions of the exceptional fibers over every stratum.
    Tables {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        trials: usize,
    },
    /// Closure relations between arc families, with a tampered control.
    Closures {
        #[arg(long)]
        seed: u64,
        /// Random members per witness.
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Arc components for the ideal (x, y^{k+1}); without --arc, the
    /// essential set from sampled components.
    Ak {
        #[arg(long)]
        k: u32,
        #[arg(long, value_name = "FILE")]
        arc: Option<PathBuf>,
        #[arg(long, required_unless_present = "arc")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 32)]
        trials: usize,
    },
    /// Numerical ε-order of the displacement map along a Kapteyn arc.
    Melnikov {
        #[command(flatten)]
        arc: ArcArgs,
        /// Comma-separated ε values; by default ε = 2^-3, 2^-4, ... is
        /// scanned down to the noise floor.
        #[arg(long, value_name = "LIST")]
        eps_list: Option<String>,
        /// Comma-separated h values.
        #[arg(long, value_name = "LIST")]
        h_list: Option<String>,
        /// Integrate in double-double; needed for orders 5 and 6.
        #[arg(long)]
        quad: bool,
        /// Write the return-map samples as CSV.
        #[arg(long, value_name = "OUT")]
        csv: Option<PathBuf>,
    },
    /// Fit c1 h + c2 h^2 + c3 h^3 + c4 h^4 to the leading displacement
    /// coefficient of an arc through the linear center.
    Zoladek {
        #[command(flatten)]
        arc: ArcArgs,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, value_name = "LIST")]
        h_list: Option<String>,
        #[arg(long)]
        quad: bool,
    },
    /// Exactness, the Q4 form degree, and the limit constructions for
    /// Darboux first integrals.
    Dulac,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn arc_input(a: &ArcArgs) -> CliResult<ArcInput> {
    match (&a.arc, &a.family) {
        (Some(p), _) => Ok(ArcInput::Arc(read(p)?)),
        (None, Some(p)) => Ok(ArcInput::Family(read(p)?)),
        (None, None) => Err(CliError::input("either --arc or --family is required")),
    }
}

fn run(cli: &Cli) -> CliResult<(Outcome, Option<PathBuf>)> {
    let mut csv = None;
    let out = match &cli.command {
        Command::Order { ideal, arc } => {
            let ideal = ideal.as_deref().map(read).transpose()?;
            cmd_order(ideal.as_deref(), &arc_input(arc)?)?
        }
        Command::Tables { seed, trials } => cmd_tables(*seed, *trials)?,
        Command::Closures { seed, trials } => cmd_closures(*seed, *trials)?,
        Command::Ak {
            k,
            arc,
            seed,
            trials,
        } => match (arc, seed) {
            (Some(p), _) => cmd_ak(*k, &read(p)?)?,
            (None, Some(s)) => cmd_ak_essential(*k, *trials, *s)?,
            (None, None) => return Err(CliError::input("`ak` needs --arc or --seed")),
        },
        Command::Melnikov {
            arc,
            eps_list,
            h_list,
            quad,
            csv: c,
        } => {
            csv = c.clone();
            let eps = eps_list
                .as_deref()
                .map(|s| parse_float_list(s, "--eps-list"))
                .transpose()?;
            let h = match h_list {
                Some(s) => parse_float_list(s, "--h-list")?,
                None => DEFAULT_H_LIST.to_vec(),
            };
            cmd_melnikov(&arc_input(arc)?, eps.as_deref(), &h, *quad)?
        }
        Command::Zoladek {
            arc,
            eps,
            h_list,
            quad,
        } => {
            let h = match h_list {
                Some(s) => parse_float_list(s, "--h-list")?,
                None => DEFAULT_ZOLADEK_H.to_vec(),
            };
            cmd_zoladek(&arc_input(arc)?, *eps, &h, *quad)?
        }
        Command::Dulac => cmd_dulac()?,
    };
    Ok((out, csv))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn fail(e: &CliError) -> ExitCode {
    println!(
        "{}",
        serde_json::to_string_pretty(&e.to_json()).expect("error serializes")
    );
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            eprint!("{msg}");
            println!(
                "{}",
                serde_json::to_string_pretty(&CliError::usage(first).to_json())
                    .expect("error serializes")
            );
            return ExitCode::from(1);
        }
    };
    let result = threads_from_env()
        .and_then(|n| {
            if let Some(n) = n {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
            }
            run(&cli)
        })
        .and_then(|(out, csv)| {
            let text = serde_json::to_string_pretty(&out.report).expect("reports serialize");
            if let Some(p) = &cli.json {
                write(p, &format!("{text}\n"))?;
            }
            if let Some(p) = csv {
                write(&p, &samples_csv(&out.samples))?;
            }
            println!("{text}");
            Ok(out.status.exit_code())
        });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => fail(&e),
    }
}
