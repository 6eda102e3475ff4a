use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symcorr_core::OracleConfig;

#[derive(Debug, Parser)]
#[command(name = "symcorr", version, about = "Correlation and nonlocality measures of symmetric n-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate measures for one state and print them.
    Single(SingleArgs),
    /// Sweep the family's noise or population parameter and write a CSV.
    Sweep(SweepArgs),
    /// Print the Svetlichny reference values for n parties.
    Bounds {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Thermal-like symmetric state, parameter p0.
    Thermo,
    /// GHZ state after amplitude damping, parameters alpha1 and lambda.
    #[value(name = "ghz_ad")]
    GhzAd,
    /// GHZ state after phase damping, parameters alpha1 and gamma.
    #[value(name = "ghz_pd")]
    GhzPd,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Thermo => "thermo",
            Family::GhzAd => "ghz_ad",
            Family::GhzPd => "ghz_pd",
        }
    }

    /// Name of the parameter a sweep varies.
    pub fn swept(self) -> &'static str {
        match self {
            Family::Thermo => "p0",
            Family::GhzAd => "lambda",
            Family::GhzPd => "gamma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Measure {
    /// Minimum discord over bipartitions.
    GenuineDiscord,
    /// Genuine total minus genuine discord.
    GenuineClassical,
    GlobalDiscord,
    /// Maximal Svetlichny value over equatorial settings.
    Svetlichny,
    /// Genuine total correlations (minimum mutual information over cuts).
    MutualInfo,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::GenuineDiscord,
        Measure::GenuineClassical,
        Measure::GlobalDiscord,
        Measure::Svetlichny,
        Measure::MutualInfo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::GenuineDiscord => "genuine_discord",
            Measure::GenuineClassical => "genuine_classical",
            Measure::GlobalDiscord => "global_discord",
            Measure::Svetlichny => "svetlichny",
            Measure::MutualInfo => "mutual_info",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Symmetric,
    General,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p0: Option<f64>,
    /// GHZ amplitude of |1...1>; defaults to 1/sqrt(2).
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Reject alpha1 above 1/sqrt(2) instead of warning.
    #[arg(long)]
    pub strict_alpha: bool,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Repeatable; all measures when omitted.
    #[arg(long = "measure", value_enum)]
    pub measures: Vec<Measure>,
    #[arg(long, value_enum, default_value = "symmetric")]
    pub mode: ModeArg,
    /// Seed of the general-mode searches.
    #[arg(long, default_value_t = OracleConfig::default().seed)]
    pub seed: u64,
}

impl MeasureArgs {
    /// Requested measures in command-line order, without repeats.
    pub fn selected(&self) -> Vec<Measure> {
        if self.measures.is_empty() {
            return Measure::ALL.to_vec();
        }
        let mut out = Vec::new();
        for &m in &self.measures {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    }
}

#[derive(Debug, Args)]
pub struct SingleArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Number of parameter values, endpoints included.
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// First parameter value (default 0).
    #[arg(long)]
    pub start: Option<f64>,
    /// Last parameter value (default 1).
    #[arg(long)]
    pub stop: Option<f64>,
    /// CSV destination; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: PathBuf,
}
