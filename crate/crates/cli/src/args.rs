use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "minres", version, about = "Minimal-resistance bodies of revolution: solve, verify, classify")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem and write the report, profile CSV and SVG.
    Solve(SolveArgs),
    /// Solve, then certify the solution with the maximality and brute-force oracles.
    Verify(VerifyArgs),
    /// Print the case label and thresholds without building profiles.
    Classify(ProblemArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Dimension d >= 2 of the ambient space.
    #[arg(long)]
    pub dim: u32,

    /// Body radius T > 0.
    #[arg(long = "T", value_name = "REAL")]
    pub radius: f64,

    /// Body height H >= 0.
    #[arg(long = "H", value_name = "REAL")]
    pub height: f64,

    /// Front pressure law: an expression in u, or newton:SCALE,OFFSET.
    #[arg(long, value_name = "LAW", allow_hyphen_values = true)]
    pub p_plus: String,

    /// Rear pressure law: an expression in u, newton:SCALE,OFFSET, or zero.
    #[arg(long, value_name = "LAW", allow_hyphen_values = true)]
    pub p_minus: String,

    /// Multiply resistances by the volume of the unit (d-1)-ball.
    #[arg(long)]
    pub ball_volume: bool,

    /// Number of samples on each curved arc (d >= 3).
    #[arg(long, default_value_t = 256)]
    pub samples: usize,

    /// Treat any failed pressure-law condition as an error.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Profile table (t, x_front, x_rear, u_front, u_rear).
    #[arg(long, value_name = "PATH")]
    pub out_profile: Option<PathBuf>,

    /// Silhouette plot.
    #[arg(long, value_name = "PATH")]
    pub out_svg: Option<PathBuf>,

    /// JSON report; printed to standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out_report: Option<PathBuf>,

    /// Record wall-clock time in the report (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,

    /// Brute-force grid, cells x heights.
    #[arg(long, value_name = "CxH", default_value = "200x400", value_parser = parse_pair)]
    pub grid: (usize, usize),

    /// Maximality scan, radii x slopes.
    #[arg(long, value_name = "NTxNU", default_value = "400x2000", value_parser = parse_pair)]
    pub maximality_samples: (usize, usize),

    /// Allowed brute-force slack relative to the total resistance.
    #[arg(long, default_value_t = 0.01)]
    pub gap_tol: f64,

    /// Certify this profile CSV instead of the solver's own profiles.
    #[arg(long, value_name = "PATH")]
    pub check_profile: Option<PathBuf>,
}

/// Parses `AxB` into two positive integers.
pub fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected <int>x<int>, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if a == 0 || b == 0 {
        return Err("grid sizes must be positive".into());
    }
    Ok((a, b))
}
