//! Brute-force validators for the optimized quantities.
//!
//! Nothing here relies on the symmetry of the input: bases and angles are
//! searched over their full parameter spaces, channels are built from an
//! explicit environment qubit, and Bell bounds are found by enumeration.
//! All searches are deterministic for a given [`OracleConfig::seed`].

use std::f64::consts::TAU;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{ChannelKind, ChannelSpec};
use crate::error::{invalid, Error, Result};
use crate::global::{GlobalDiscord, GlobalObjective, RotationAngles};
use crate::genuine::outcome_entropy;
use crate::nonlocality::SvetlichnyExpansion;
use crate::optimize::{bfgs, nelder_mead, BfgsOptions, NelderMeadOptions};
use crate::qstate::{
    check_cut, check_qubits, partial_trace, snap_nonnegative, von_neumann_entropy, BlockLayout, Cut, DensityMatrix,
};
use crate::CMatrix;

/// Hard ceiling on [`OracleConfig::max_qubits`].
pub const ORACLE_QUBIT_CEILING: usize = 5;
/// Largest register [`oracle_lhv_bound`] will enumerate.
pub const LHV_MAX_QUBITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Independent local searches; the best result wins.
    pub restarts: usize,
    /// Random points screened per restart before the local search starts
    /// from the best of them.
    pub grid_density: usize,
    pub seed: u64,
    /// Largest register accepted; at most [`ORACLE_QUBIT_CEILING`].
    pub max_qubits: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            grid_density: 16,
            seed: 0x5eed,
            max_qubits: 4,
        }
    }
}

impl OracleConfig {
    pub fn new(restarts: usize, grid_density: usize, seed: u64, max_qubits: usize) -> Result<Self> {
        let config = Self {
            restarts,
            grid_density,
            seed,
            max_qubits,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_qubits > ORACLE_QUBIT_CEILING {
            return Err(invalid(format!(
                "oracle max_qubits {} exceeds the ceiling {ORACLE_QUBIT_CEILING}",
                self.max_qubits
            )));
        }
        if self.restarts == 0 || self.grid_density == 0 {
            return Err(invalid("oracle needs at least one restart and one screening point"));
        }
        Ok(())
    }

    fn guard(&self, what: &'static str, n: usize) -> Result<()> {
        self.validate()?;
        if n > self.max_qubits {
            return Err(Error::SizeCap {
                what,
                n,
                cap: self.max_qubits,
            });
        }
        Ok(())
    }
}

/// Runs one screened, seeded local search per restart and returns the best
/// `(x, value)`; restarts use independent ChaCha streams, so the result does
/// not depend on scheduling.
fn multistart<F>(f: F, dim: usize, config: &OracleConfig) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let results: Vec<(Vec<f64>, f64)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let mut start = Vec::new();
            let mut start_value = f64::INFINITY;
            for _ in 0..config.grid_density {
                let x: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * TAU).collect();
                let v = f(&x);
                if v < start_value {
                    start_value = v;
                    start = x;
                }
            }
            let coarse = bfgs(&f, &start, BfgsOptions::default());
            let fine = nelder_mead(
                &f,
                &coarse.x,
                NelderMeadOptions {
                    initial_step: 0.05,
                    ..NelderMeadOptions::default()
                },
            );
            if fine.value < coarse.value {
                (fine.x, fine.value)
            } else {
                (coarse.x, coarse.value)
            }
        })
        .collect();
    results
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one restart")
}

/// Unitary on `d` levels from `d(d−1)` angles: one two-level rotation with
/// a phase per pair `i < j`. Column phases are irrelevant to projective
/// measurements and are left out.
pub fn givens_unitary(d: usize, params: &[f64]) -> Result<CMatrix> {
    if params.len() != d * (d - 1) {
        return Err(invalid(format!(
            "{} parameters for a {d}-level unitary, need {}",
            params.len(),
            d * (d - 1)
        )));
    }
    Ok(givens_unchecked(d, params))
}

fn givens_unchecked(d: usize, params: &[f64]) -> CMatrix {
    let mut u = CMatrix::identity(d, d);
    let mut p = params.chunks_exact(2);
    for i in 0..d {
        for j in i + 1..d {
            let pair = p.next().expect("parameter count checked");
            let (s, c) = pair[0].sin_cos();
            let e = Complex64::from_polar(s, pair[1]);
            for col in 0..d {
                let (a, b) = (u[(i, col)], u[(j, col)]);
                u[(i, col)] = a * c - e.conj() * b;
                u[(j, col)] = e * a + b * c;
            }
        }
    }
    u
}

/// Discord across `cut` with the measured block searched over every
/// orthonormal basis.
pub fn oracle_bipartite_discord(rho: &DensityMatrix, cut: &Cut, config: &OracleConfig) -> Result<f64> {
    check_cut(rho, cut)?;
    config.guard("general-basis discord oracle", rho.n_qubits())?;
    let d = 1usize << cut.measured().len();
    let layout = BlockLayout::new(rho.n_qubits(), cut.remainder(), cut.measured());
    let m = rho.matrix();
    let objective = |x: &[f64]| {
        let u = givens_unchecked(d, x);
        (0..d)
            .map(|i| {
                let v: DVector<Complex64> = u.column(i).into_owned();
                outcome_entropy(&layout, m, &v)
            })
            .sum::<f64>()
    };
    let (_, best) = multistart(objective, d * (d - 1), config);
    let s_measured = von_neumann_entropy(&partial_trace(rho, cut.measured())?)?;
    Ok(snap_nonnegative(s_measured - von_neumann_entropy(rho)? + best))
}

/// Global discord with an independent rotation on every qubit.
pub fn oracle_global_discord(rho: &DensityMatrix, config: &OracleConfig) -> Result<GlobalDiscord> {
    let n = rho.n_qubits();
    if n < 2 {
        return Err(invalid("global discord needs at least two qubits"));
    }
    config.guard("full-angle global discord oracle", n)?;
    let objective = GlobalObjective::new(rho, false)?;
    debug_assert_eq!(objective.n(), n);
    let f = |x: &[f64]| {
        let pairs: Vec<(f64, f64)> = x.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        objective.eval(&pairs)
    };
    let (x, value) = multistart(f, 2 * n, config);
    Ok(GlobalDiscord {
        value: snap_nonnegative(value),
        angles: RotationAngles::new(x.chunks_exact(2).map(|c| (c[0], c[1])).collect()),
    })
}

/// The channel built from its system–environment isometry: a fresh
/// environment qubit is attached next to each system qubit, coupled, and
/// traced out again.
pub fn oracle_channel_dilation(rho: &DensityMatrix, spec: &ChannelSpec) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    check_qubits("channel dilation", n + 1)?;
    let r = spec.rate();
    let (keep, jump) = ((1.0 - r).sqrt(), r.sqrt());
    // Rows |s e⟩ = 2s + e, columns |s⟩.
    let mut v = CMatrix::zeros(4, 2);
    v[(0, 0)] = Complex64::new(1.0, 0.0);
    v[(2, 1)] = Complex64::new(keep, 0.0);
    match spec.kind() {
        ChannelKind::AmplitudeDamping => v[(1, 1)] = Complex64::new(jump, 0.0),
        ChannelKind::PhaseDamping => v[(3, 1)] = Complex64::new(jump, 0.0),
    }
    let mut current = rho.clone();
    for q in 0..n {
        let left = CMatrix::identity(1 << q, 1 << q);
        let right = CMatrix::identity(1 << (n - 1 - q), 1 << (n - 1 - q));
        let iso = left.kronecker(&v).kronecker(&right);
        let dilated = DensityMatrix::from_trusted(n + 1, &iso * current.matrix() * iso.adjoint());
        let keep: Vec<usize> = (0..=n).filter(|&x| x != q + 1).collect();
        current = partial_trace(&dilated, &keep)?;
    }
    Ok(current)
}

/// Largest Svetlichny value reachable by deterministic local strategies,
/// found by trying all `2^{2n}` assignments of `±1` outcomes.
pub fn oracle_lhv_bound(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid("the Svetlichny expression needs at least two parties"));
    }
    if n > LHV_MAX_QUBITS {
        return Err(Error::SizeCap {
            what: "deterministic-strategy enumeration",
            n,
            cap: LHV_MAX_QUBITS,
        });
    }
    let expansion = SvetlichnyExpansion::new(n)?;
    let terms: Vec<(usize, f64)> = expansion.terms().collect();
    let best = (0u64..1 << (2 * n))
        .into_par_iter()
        .map(|assignment| {
            // Bits 2j and 2j+1 give party j's outcomes for its two settings.
            terms
                .iter()
                .map(|&(q, w)| {
                    let flips = (0..n)
                        .filter(|&j| {
                            let setting = (q >> (n - 1 - j)) & 1;
                            assignment >> (2 * j + setting) & 1 == 1
                        })
                        .count();
                    if flips % 2 == 0 {
                        w
                    } else {
                        -w
                    }
                })
                .sum::<f64>()
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(best)
}
