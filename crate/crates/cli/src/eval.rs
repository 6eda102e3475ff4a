//! Builds states from command-line parameters and evaluates measures.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;
use symcorr_core::genuine::genuine_correlations_with;
use symcorr_core::global::global_discord_with;
use symcorr_core::nonlocality::search_violation;
use symcorr_core::{
    ghz_ad_closed, ghz_pd_closed, max_violation, thermo_state, DensityMatrix, Error, GenuineReport,
    GhzParams, MeasuredSide, Mode, OracleConfig,
};

use crate::args::{Family, Measure, ModeArg, StateArgs};
use crate::CliError;

/// Fully resolved state parameters.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StateSpec {
    #[serde(skip)]
    pub family: Family,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl StateSpec {
    /// Resolves the arguments. `swept` marks the parameter a sweep will
    /// supply, which must then be absent on the command line.
    pub fn from_args(args: &StateArgs, swept: bool) -> Result<Self, CliError> {
        let fam = args.family;
        let require = |name: &str, value: Option<f64>| -> Result<f64, CliError> {
            match (value, swept && name == fam.swept()) {
                (Some(_), true) => Err(CliError::Usage(format!(
                    "--{name} is swept; set the range with --start/--stop"
                ))),
                (Some(v), false) => Ok(v),
                (None, true) => Ok(0.0),
                (None, false) => Err(CliError::Usage(format!("{} needs --{name}", fam.name()))),
            }
        };
        let reject = |name: &str, value: Option<f64>| match value {
            Some(_) => Err(CliError::Usage(format!("--{name} does not apply to {}", fam.name()))),
            None => Ok(()),
        };
        let mut spec = StateSpec {
            family: fam,
            n: args.n,
            p0: None,
            alpha1: None,
            lambda: None,
            gamma: None,
        };
        match fam {
            Family::Thermo => {
                reject("alpha1", args.alpha1)?;
                reject("lambda", args.lambda)?;
                reject("gamma", args.gamma)?;
                spec.p0 = Some(require("p0", args.p0)?);
            }
            Family::GhzAd | Family::GhzPd => {
                reject("p0", args.p0)?;
                let alpha1 = args.alpha1.unwrap_or(FRAC_1_SQRT_2);
                if args.strict_alpha {
                    GhzParams::strict(args.n, alpha1)?;
                }
                spec.alpha1 = Some(alpha1);
                if fam == Family::GhzAd {
                    reject("gamma", args.gamma)?;
                    spec.lambda = Some(require("lambda", args.lambda)?);
                } else {
                    reject("lambda", args.lambda)?;
                    spec.gamma = Some(require("gamma", args.gamma)?);
                }
            }
        }
        Ok(spec)
    }

    pub fn with_swept(mut self, value: f64) -> Self {
        match self.family {
            Family::Thermo => self.p0 = Some(value),
            Family::GhzAd => self.lambda = Some(value),
            Family::GhzPd => self.gamma = Some(value),
        }
        self
    }

    pub fn build(&self) -> Result<DensityMatrix, Error> {
        let get = |v: Option<f64>| v.expect("resolved by from_args");
        match self.family {
            Family::Thermo => thermo_state(self.n, get(self.p0)),
            Family::GhzAd => ghz_ad_closed(self.n, get(self.alpha1), get(self.lambda)),
            Family::GhzPd => ghz_pd_closed(self.n, get(self.alpha1), get(self.gamma)),
        }
    }

    /// `(name, value)` pairs of the parameters that are set.
    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        [
            ("p0", self.p0),
            ("alpha1", self.alpha1),
            ("lambda", self.lambda),
            ("gamma", self.gamma),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}

/// Where an optimum was found, for the metadata file.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Optimum {
    Cut {
        cut: String,
        measured_side: MeasuredSide,
        /// Symmetric-basis angle in radians; absent in general mode.
        #[serde(skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    /// `(θ, φ)` per qubit.
    Rotations { rotations: Vec<(f64, f64)> },
    /// Two equatorial angles per party.
    Settings { settings: Vec<[f64; 2]> },
    TotalCut { cut: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub measure: &'static str,
    pub value: f64,
    pub optimum: Optimum,
}

pub struct Evaluator {
    mode: Mode,
    config: OracleConfig,
}

impl Evaluator {
    pub fn new(mode: ModeArg, seed: u64) -> Self {
        Self {
            mode: match mode {
                ModeArg::Symmetric => Mode::Symmetric,
                ModeArg::General => Mode::General,
            },
            config: OracleConfig::default().with_seed(seed),
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix, measures: &[Measure]) -> Result<Vec<Evaluation>, Error> {
        let mut genuine: Option<GenuineReport> = None;
        let mut out = Vec::with_capacity(measures.len());
        for &m in measures {
            let eval = match m {
                Measure::GenuineDiscord | Measure::GenuineClassical | Measure::MutualInfo => {
                    if genuine.is_none() {
                        genuine = Some(genuine_correlations_with(rho, self.mode, &self.config)?);
                    }
                    let report = genuine.as_ref().expect("just computed");
                    let best = report.optimal();
                    let at_best = Optimum::Cut {
                        cut: best.cut.to_string(),
                        measured_side: best.measured_side,
                        theta: best.optimal_theta,
                    };
                    let (value, optimum) = match m {
                        Measure::GenuineDiscord => (report.quantum, at_best),
                        Measure::GenuineClassical => (report.classical, at_best),
                        _ => (
                            report.total,
                            Optimum::TotalCut {
                                cut: report.total_cut.to_string(),
                            },
                        ),
                    };
                    Evaluation {
                        measure: m.name(),
                        value,
                        optimum,
                    }
                }
                Measure::GlobalDiscord => {
                    let g = global_discord_with(rho, self.mode, &self.config)?;
                    Evaluation {
                        measure: m.name(),
                        value: g.value,
                        optimum: Optimum::Rotations {
                            rotations: g.angles.pairs().to_vec(),
                        },
                    }
                }
                Measure::Svetlichny => {
                    let v = match self.mode {
                        Mode::Symmetric => max_violation(rho)?,
                        Mode::General => search_violation(rho)?,
                    };
                    Evaluation {
                        measure: m.name(),
                        value: v.value,
                        optimum: Optimum::Settings {
                            settings: v.settings.angles().to_vec(),
                        },
                    }
                }
            };
            out.push(eval);
        }
        Ok(out)
    }
}
