use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "barrierlab", version, about = "Universal barrier checks and path-following LP")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Polytope or problem JSON.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Sample count (meaning depends on the command).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Directions per evaluation point (certify).
    #[arg(long, global = true)]
    pub dirs: Option<usize>,
    /// RNG seed, decimal or 0x-prefixed hex.
    #[arg(long, global = true, value_parser = parse_seed, default_value = "0xC0FFEE")]
    pub seed: u64,
    /// Judging tolerance (command-specific default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads; defaults to the logical core count.
    #[arg(long, global = true, env = "BARRIERLAB_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Exact rational arithmetic where supported.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Also write a CSV (solver trace or certifier ratios) to this path.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// phi, gradient and Hessian at a point, plus derivatives along a direction.
    BarrierEval {
        /// Comma-separated coordinates.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        point: Coords,
        /// Comma-separated direction for d1, d2, d3.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        direction: Option<Coords>,
    },
    /// Sampled self-concordance certificate for a polytope.
    Certify,
    /// Sharpness of the moment inequalities, and the bounds on polar marginals.
    MomentsCheck {
        /// Largest k for the sharpness table.
        #[arg(long, default_value_t = 12)]
        max_k: u32,
    },
    /// Exact verification of both derivative chains.
    CascadeVerify,
    /// Heuristic falsification search for the induction step.
    ImplicationSample,
    /// Path-following solve of `min c·x` over a polytope.
    LpSolve,
    /// Scan of the profile l(t) for n = 1..max_n.
    EllProfile {
        #[arg(long, default_value_t = 50)]
        max_n: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BarrierEval { .. } => "barrier-eval",
            Command::Certify => "certify",
            Command::MomentsCheck { .. } => "moments-check",
            Command::CascadeVerify => "cascade-verify",
            Command::ImplicationSample => "implication-sample",
            Command::LpSolve => "lp-solve",
            Command::EllProfile { .. } => "ell-profile",
        }
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

/// Comma-separated coordinate list.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Coords(pub Vec<f64>);

fn parse_vector(s: &str) -> Result<Coords, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("invalid number {p:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_and_vectors() {
        assert_eq!(parse_seed("0xC0FFEE"), Ok(0xC0FFEE));
        assert_eq!(parse_seed("42"), Ok(42));
        assert!(parse_seed("x").is_err());
        assert_eq!(parse_vector("0.5,-1"), Ok(Coords(vec![0.5, -1.0])));
        assert!(parse_vector("1,,2").is_err());
    }

    #[test]
    fn unknown_flags_are_rejected() {
        assert!(Cli::try_parse_from(["barrierlab", "certify", "--bogus"]).is_err());
        let cli = Cli::try_parse_from(["barrierlab", "cascade-verify", "--format", "json"]).unwrap();
        assert_eq!(cli.global.seed, barrierlab::DEFAULT_SEED);
        assert_eq!(cli.global.format, Format::Json);
    }
}
