mod args;
mod eval;
mod format;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use symcorr_core::{bounds, svetlichny_expansion};

use args::{Cli, Command, ModeArg, SingleArgs, SweepArgs};
use eval::{Evaluation, Evaluator, Optimum, StateSpec};
use format::sig12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Io(_) => 4,
            CliError::Compute(_) => 1,
        }
    }
}

impl From<symcorr_core::Error> for CliError {
    fn from(e: symcorr_core::Error) -> Self {
        use symcorr_core::Error as E;
        match e {
            E::InvalidArgument(_) | E::NotSymmetric(_) => CliError::Usage(e.to_string()),
            E::SizeCap { .. } => CliError::Guard(e.to_string()),
            E::InvariantViolation(_) | E::RankTooHigh { .. } => CliError::Compute(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn print_aligned(rows: &[(String, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
}

fn run_single(args: SingleArgs) -> Result<(), CliError> {
    let spec = StateSpec::from_args(&args.state, false)?;
    let rho = spec.build()?;
    let evaluator = Evaluator::new(args.measure.mode, args.measure.seed);
    let results = evaluator.evaluate(&rho, &args.measure.selected())?;
    let mut rows = vec![
        ("family".to_string(), spec.family.name().to_string()),
        ("n".to_string(), spec.n.to_string()),
    ];
    rows.extend(spec.parameters().into_iter().map(|(k, v)| (k.to_string(), sig12(v))));
    rows.extend(results.iter().map(|e| (e.measure.to_string(), sig12(e.value))));
    print_aligned(&rows);
    Ok(())
}

#[derive(Serialize)]
struct PointMeta {
    parameter: f64,
    optima: BTreeMap<&'static str, Optimum>,
}

#[derive(Serialize)]
struct SweepMeta<'a> {
    tool: &'static str,
    version: &'static str,
    family: &'static str,
    n: usize,
    mode: &'static str,
    seed: u64,
    swept: &'static str,
    start: f64,
    stop: f64,
    steps: usize,
    fixed: BTreeMap<&'static str, f64>,
    measures: Vec<&'static str>,
    angle_unit: &'static str,
    points: &'a [PointMeta],
}

fn sweep_values(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                stop
            } else {
                start + (stop - start) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let spec = StateSpec::from_args(&args.state, true)?;
    if args.steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {}", args.steps)));
    }
    let (start, stop) = (args.start.unwrap_or(0.0), args.stop.unwrap_or(1.0));
    for (flag, v) in [("--start", start), ("--stop", stop)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::Usage(format!("{flag} = {v} outside [0, 1]")));
        }
    }
    let measures = args.measure.selected();
    let swept = spec.family.swept();

    // Open the destination before the (possibly long) computation.
    let file = File::create(&args.out).map_err(|e| io_error(&args.out, e))?;
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file));

    let evaluator = Evaluator::new(args.measure.mode, args.measure.seed);
    let values = sweep_values(start, stop, args.steps);
    let results: Vec<Result<Vec<Evaluation>, CliError>> = values
        .par_iter()
        .map(|&v| {
            let rho = spec.with_swept(v).build()?;
            Ok(evaluator.evaluate(&rho, &measures)?)
        })
        .collect();

    let header: Vec<&str> = std::iter::once(swept)
        .chain(measures.iter().map(|m| m.name()))
        .collect();
    csv.write_record(&header).map_err(|e| io_error(&args.out, e))?;
    let mut points = Vec::with_capacity(values.len());
    for (&v, result) in values.iter().zip(results) {
        let evals = result?;
        let row: Vec<String> = std::iter::once(sig12(v))
            .chain(evals.iter().map(|e| sig12(e.value)))
            .collect();
        csv.write_record(&row).map_err(|e| io_error(&args.out, e))?;
        points.push(PointMeta {
            parameter: v,
            optima: evals.into_iter().map(|e| (e.measure, e.optimum)).collect(),
        });
    }
    csv.flush().map_err(|e| io_error(&args.out, e))?;

    let meta = SweepMeta {
        tool: "symcorr",
        version: env!("CARGO_PKG_VERSION"),
        family: spec.family.name(),
        n: spec.n,
        mode: match args.measure.mode {
            ModeArg::Symmetric => "symmetric",
            ModeArg::General => "general",
        },
        seed: args.measure.seed,
        swept,
        start,
        stop,
        steps: args.steps,
        fixed: spec
            .parameters()
            .into_iter()
            .filter(|(k, _)| *k != swept)
            .collect(),
        measures: measures.iter().map(|m| m.name()).collect(),
        angle_unit: "radians",
        points: &points,
    };
    let path = meta_path(&args.out);
    let mut json = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Compute(e.to_string()))?;
    json.push('\n');
    std::fs::write(&path, json).map_err(|e| io_error(&path, e))?;
    Ok(())
}

fn run_bounds(n: usize) -> Result<(), CliError> {
    let b = bounds(n)?;
    let thresholds = if b.separability_thresholds.is_empty() {
        "none".to_string()
    } else {
        b.separability_thresholds
            .iter()
            .map(|&t| sig12(t))
            .collect::<Vec<_>>()
            .join(", ")
    };
    print_aligned(&[
        ("n".into(), n.to_string()),
        ("lhv".into(), sig12(b.lhv)),
        ("quantum_max".into(), sig12(b.quantum_max)),
        ("separability".into(), thresholds),
        ("expansion".into(), svetlichny_expansion(n)?.to_string()),
    ]);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Single(a) => run_single(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Bounds { n } => run_bounds(n),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
