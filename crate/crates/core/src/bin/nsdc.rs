use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nsdc::io::{self, GroupSpec, Outcome};

#[derive(Parser)]
#[command(
    name = "nsdc",
    version,
    about = "Certify and explore planar families of discrete Moebius groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the non-separating disjoint circle property.
    Certify(Common),
    /// Build the family member reached by a set of moves.
    Family(WithMoves),
    /// Trace coordinates over a grid of moves, as CSV.
    Sweep(Common),
    /// Draw the circle configuration as SVG.
    Render(WithOptionalMoves),
    /// Trace coordinates and Jacobian rank at one set of moves.
    Traces(WithMoves),
}

#[derive(Args)]
struct Common {
    /// Input document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Pull-back angles θA,θ,θB (overrides the input).
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// Grid size: angle search for certify, points per axis for sweep.
    #[arg(long)]
    grid: Option<usize>,
    /// Output file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override NAME=VALUE (class, eq, det, tan); repeatable.
    #[arg(long = "tol")]
    tol: Vec<String>,
}

#[derive(Args)]
struct WithMoves {
    #[command(flatten)]
    common: Common,
    /// d_a,tau_a,d,tau,d_b,tau_b
    #[arg(long, allow_hyphen_values = true)]
    moves: String,
}

#[derive(Args)]
struct WithOptionalMoves {
    #[command(flatten)]
    common: Common,
    /// d_a,tau_a,d,tau,d_b,tau_b
    #[arg(long, allow_hyphen_values = true)]
    moves: Option<String>,
}

fn load(common: &Common) -> nsdc::Result<GroupSpec> {
    let mut spec = GroupSpec::read(&common.input)?;
    if let Some(a) = &common.angles {
        spec.set_angles(io::parse_reals::<3>(a)?);
    }
    for t in &common.tol {
        let (name, value) = t
            .split_once('=')
            .ok_or_else(|| nsdc::Error::Input(format!("expected NAME=VALUE, got `{t}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| nsdc::Error::Input(format!("bad tolerance `{t}`")))?;
        spec.tolerances.insert(name.trim().to_string(), value);
    }
    spec.tolerances()?;
    Ok(spec)
}

fn run(cli: Cli) -> Outcome {
    let common = match &cli.command {
        Command::Certify(c) | Command::Sweep(c) => c,
        Command::Family(m) | Command::Traces(m) => &m.common,
        Command::Render(m) => &m.common,
    };
    let spec = match load(common) {
        Ok(s) => s,
        Err(e) => return Outcome::from_error(&e),
    };
    let moves = |text: &str| io::parse_reals::<6>(text);
    match &cli.command {
        Command::Certify(c) => io::cmd_certify(&spec, c.grid),
        Command::Sweep(c) => io::cmd_sweep(&spec, c.grid, c.out.as_deref(), None),
        Command::Family(m) => match moves(&m.moves) {
            Ok(v) => io::cmd_family(&spec, v, None),
            Err(e) => Outcome::from_error(&e),
        },
        Command::Traces(m) => match moves(&m.moves) {
            Ok(v) => io::cmd_traces(&spec, v, None),
            Err(e) => Outcome::from_error(&e),
        },
        Command::Render(m) => match m.moves.as_deref().map(moves).transpose() {
            Ok(v) => io::cmd_render(&spec, v, m.common.out.as_deref(), None),
            Err(e) => Outcome::from_error(&e),
        },
    }
}

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
