use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;

use netcert::io::{self, NetworkStrategy, StrategyKind, StrategySpec};
use netcert::network::decompose_into_chains_and_stars;
use netcert::report::{certify_network, witness_report, EvalReport, NetworkInput};
use netcert::sweep::{run_sweep, SweepParameter, SweepSpec};
use netcert::witness::{bound_lookup, brute_force_classical_max, Family, Model, OracleConfig};
use netcert::{set_tolerance, tolerance, Error, Result};

#[derive(Parser)]
#[command(name = "netcert", version, about = "Network nonlocality witnesses and certification")]
struct Cli {
    /// Numerical tolerance for every tolerance-sensitive check.
    #[arg(long, global = true, env = "NETCERT_TOL", default_value_t = 1e-9)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a witness on a behavior file.
    Eval {
        file: PathBuf,
        #[arg(long)]
        family: Family,
        /// Witness size; inferred from the party count when omitted.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Write the behavior of a canonical strategy.
    Generate {
        #[arg(long)]
        family: StrategyKind,
        /// Source angles, comma separated; `pi/4` style values are accepted.
        #[arg(long, value_delimiter = ',', value_parser = parse_angle, required = true)]
        thetas: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        visibilities: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_angle)]
        vartheta: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sweep one parameter of a canonical strategy and write CSV.
    Sweep {
        #[arg(long)]
        family: StrategyKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        parameter: SweepParameter,
        #[arg(long, value_parser = parse_angle)]
        start: f64,
        #[arg(long, value_parser = parse_angle)]
        stop: f64,
        #[arg(long)]
        steps: usize,
        /// Source angle when the angle is not swept.
        #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
        theta: f64,
        /// Visibility when the visibility is not swept.
        #[arg(long, default_value_t = 1.0)]
        visibility: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose a topology and certify every subnetwork.
    #[command(group(ArgGroup::new("input").required(true).args(["strategy", "behavior"])))]
    Certify {
        #[arg(long)]
        topology: PathBuf,
        /// `{"sources": [...]}` with one source model per topology source.
        #[arg(long)]
        strategy: Option<PathBuf>,
        /// Behavior over all parties, in topology order.
        #[arg(long)]
        behavior: Option<PathBuf>,
    },
    /// Print the chain and star cover of a topology.
    Decompose {
        #[arg(long)]
        topology: PathBuf,
    },
    /// Brute-force classical maximum of a witness.
    Oracle {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 9)]
        grid: usize,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
}

fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let pi = std::f64::consts::PI;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad number {x:?}: {e}"));
    let factor = |x: &str| match x.trim().strip_suffix("pi").map(str::trim) {
        Some("") => Ok(pi),
        Some("-") => Ok(-pi),
        Some(k) => Ok(num(k.trim_end_matches('*'))? * pi),
        None => num(x),
    };
    match t.split_once('/') {
        Some((a, b)) => Ok(factor(a)? / num(b)?),
        None => factor(t),
    }
}

#[derive(Serialize)]
struct OracleOutput {
    family: Family,
    n: usize,
    alphabet: usize,
    grid: usize,
    classical_max: f64,
    all_classical_bound: f64,
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("--tol must be positive, got {}", cli.tol)));
    }
    set_tolerance(cli.tol);
    match cli.command {
        Command::Eval { file, family, n } => {
            let behavior = io::read_behavior(&file)?;
            let report = EvalReport::new(witness_report(&behavior, family, n)?, &file.display().to_string());
            print!("{}", io::to_json(&report)?);
        }
        Command::Generate { family, thetas, visibilities, vartheta, output } => {
            let spec = StrategySpec { family, thetas, visibilities, vartheta };
            let behavior = spec.build()?.behavior()?;
            emit(&io::behavior_to_json(&behavior)?, output.as_ref())?;
        }
        Command::Sweep { family, n, parameter, start, stop, steps, theta, visibility, output } => {
            let spec = SweepSpec { family, n, parameter, start, stop, steps, theta, visibility };
            emit(&run_sweep(&spec)?.to_csv(), output.as_ref())?;
        }
        Command::Certify { topology, strategy, behavior } => {
            let topo = io::read_topology(&topology)?;
            let (input, path) = match (strategy, behavior) {
                (Some(s), _) => (NetworkInput::Strategy(io::read_json::<NetworkStrategy>(&s)?), s),
                (None, Some(b)) => (NetworkInput::Behavior(io::read_behavior(&b)?), b),
                (None, None) => unreachable!("clap requires one input"),
            };
            let description = format!("{} with {}", topology.display(), path.display());
            print!("{}", io::to_json(&certify_network(&topo, &input, &description)?)?);
        }
        Command::Decompose { topology } => {
            let cover = decompose_into_chains_and_stars(&io::read_topology(&topology)?)?;
            print!("{}", io::to_json(&cover)?);
        }
        Command::Oracle { family, n, alphabet, grid, budget } => {
            let config = OracleConfig { alphabet, grid, budget };
            let classical_max = brute_force_classical_max(family, n, &config)?;
            let bound = bound_lookup(family, n, Model::AllClassical, None)?.threshold;
            let out = OracleOutput { family, n, alphabet, grid, classical_max, all_classical_bound: bound };
            print!("{}", io::to_json(&out)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("netcert: {e} (tolerance {:e})", tolerance());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
