//! Global discord under collective local projective measurements.
//!
//! Measurements are product bases `R_1|k_1⟩ ⊗ … ⊗ R_n|k_n⟩` with
//! `R(θ, φ) = cos θ·1 + i sin θ cos φ·σ_y + i sin θ sin φ·σ_x`. For the
//! dephasing map `Π` in such a basis, `S(ρ‖Π(ρ)) = S(Π(ρ)) − S(ρ)`, and the
//! global discord is the minimum over angles of
//! `[S(Π(ρ)) − S(ρ)] − Σ_j [S(Π_j(ρ_j)) − S(ρ_j)]`.
//!
//! `R(θ, φ)|0⟩` sits at polar angle `2θ` on the Bloch sphere, so `(θ, φ)`,
//! `(θ + π/2, φ)` and `(π/2 − θ, φ + π)` all give the same projectors.
//! Angles are therefore reported with `θ ∈ [π/4, π/2]`, `φ ∈ [0, 2π)`; the
//! computational basis is `θ = π/2`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::genuine::require_permutation_invariant;
use crate::optimize::golden_section;
use crate::oracle::{self, OracleConfig};
use crate::qstate::{
    adjoint2, apply_left, apply_right, partial_trace, shannon_entropy, snap_nonnegative,
    von_neumann_entropy, DensityMatrix,
};
use crate::{CMatrix, Mode};

/// Nodes per axis of the symmetric-mode `(θ, φ)` grid.
pub const ANGLE_GRID: usize = 64;
const REFINE_TOL: f64 = 1e-10;
const REFINE_SWEEPS: usize = 30;

/// Per-qubit rotation angles `(θ_i, φ_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationAngles {
    pairs: Vec<(f64, f64)>,
}

/// Maps `(θ, φ)` to the representative with `θ ∈ [π/4, π/2]`,
/// `φ ∈ [0, 2π)` describing the same measurement.
pub fn canonical_angle(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(FRAC_PI_2);
    let mut p = phi;
    if t < FRAC_PI_4 {
        t = FRAC_PI_2 - t;
        p += PI;
    }
    (t, p.rem_euclid(TAU))
}

impl RotationAngles {
    /// Stores the canonical representative of every pair.
    pub fn new(pairs: Vec<(f64, f64)>) -> Self {
        Self {
            pairs: pairs
                .into_iter()
                .map(|(t, p)| canonical_angle(t, p))
                .collect(),
        }
    }

    pub fn uniform(n: usize, theta: f64, phi: f64) -> Self {
        Self::new(vec![(theta, phi); n])
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// `R(θ, φ)` as a 2×2 array.
pub fn rotation(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (c, s) = (theta.cos(), theta.sin());
    let e = Complex64::from_polar(s, phi);
    [
        [Complex64::new(c, 0.0), e],
        [-e.conj(), Complex64::new(c, 0.0)],
    ]
}

/// `R†^{⊗} ρ R^{⊗}`: `ρ` expressed in the rotated product basis.
fn to_rotated_frame(rho: &CMatrix, n: usize, pairs: &[(f64, f64)]) -> CMatrix {
    let mut m = rho.clone();
    for (q, &(t, p)) in pairs.iter().enumerate() {
        let r = rotation(t, p);
        apply_left(&mut m, n, q, &adjoint2(&r));
        apply_right(&mut m, n, q, &r);
    }
    m
}

/// Populations of `ρ` in the rotated product basis.
fn rotated_populations(rho: &CMatrix, n: usize, pairs: &[(f64, f64)]) -> Vec<f64> {
    let m = to_rotated_frame(rho, n, pairs);
    (0..m.nrows()).map(|i| m[(i, i)].re.max(0.0)).collect()
}

/// `Π(ρ)`: drops every coherence in the rotated product basis.
pub fn dephase_in_rotated_basis(rho: &DensityMatrix, angles: &RotationAngles) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if angles.len() != n {
        return Err(invalid(format!(
            "{} angle pairs for {n} qubits",
            angles.len()
        )));
    }
    let rotated = to_rotated_frame(rho.matrix(), n, angles.pairs());
    let mut m = CMatrix::from_diagonal(&rotated.diagonal());
    for (q, &(t, p)) in angles.pairs().iter().enumerate() {
        let r = rotation(t, p);
        apply_left(&mut m, n, q, &r);
        apply_right(&mut m, n, q, &adjoint2(&r));
    }
    DensityMatrix::new(n, m)
}

/// Global-discord objective with the angle-independent entropies cached.
pub(crate) struct GlobalObjective<'a> {
    rho: &'a CMatrix,
    n: usize,
    s_total: f64,
    marginals: Vec<(CMatrix, f64)>,
}

impl<'a> GlobalObjective<'a> {
    /// `shared_marginal` computes one single-qubit marginal and reuses it
    /// for every qubit, valid for permutation-invariant states.
    pub(crate) fn new(rho: &'a DensityMatrix, shared_marginal: bool) -> Result<Self> {
        let n = rho.n_qubits();
        let count = if shared_marginal { 1 } else { n };
        let marginals = (0..count)
            .map(|q| {
                let r = partial_trace(rho, &[q])?;
                let s = von_neumann_entropy(&r)?;
                Ok((r.into_matrix(), s))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rho: rho.matrix(),
            n,
            s_total: von_neumann_entropy(rho)?,
            marginals,
        })
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn eval(&self, pairs: &[(f64, f64)]) -> f64 {
        let global = shannon_entropy(rotated_populations(self.rho, self.n, pairs)) - self.s_total;
        let local: f64 = (0..self.n)
            .map(|q| {
                let (m, s) = &self.marginals[q.min(self.marginals.len() - 1)];
                shannon_entropy(rotated_populations(m, 1, &pairs[q..=q])) - s
            })
            .sum();
        global - local
    }

    fn eval_uniform(&self, theta: f64, phi: f64) -> f64 {
        self.eval(&vec![(theta, phi); self.n])
    }
}

/// Global discord and the angles attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalDiscord {
    pub value: f64,
    pub angles: RotationAngles,
}

fn symmetric_search(rho: &DensityMatrix) -> Result<GlobalDiscord> {
    let objective = GlobalObjective::new(rho, true)?;
    let theta_step = FRAC_PI_4 / (ANGLE_GRID - 1) as f64;
    let phi_step = TAU / ANGLE_GRID as f64;
    let nodes: Vec<(f64, f64)> = (0..ANGLE_GRID)
        .flat_map(|i| {
            let t = if i == ANGLE_GRID - 1 {
                FRAC_PI_2
            } else {
                FRAC_PI_4 + theta_step * i as f64
            };
            (0..ANGLE_GRID).map(move |j| (t, phi_step * j as f64))
        })
        .collect();
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|&(t, p)| objective.eval_uniform(t, p))
        .collect();
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    let (mut theta, mut phi) = nodes[best];
    let mut value = values[best];

    // Coordinate-wise golden refinement inside the neighbouring cells.
    for _ in 0..REFINE_SWEEPS {
        let before = value;
        let lo = (theta - theta_step).max(FRAC_PI_4);
        let hi = (theta + theta_step).min(FRAC_PI_2);
        let m = golden_section(|t| objective.eval_uniform(t, phi), lo, hi, REFINE_TOL);
        if m.value < value {
            theta = m.x;
            value = m.value;
        }
        let m = golden_section(
            |p| objective.eval_uniform(theta, p),
            phi - phi_step,
            phi + phi_step,
            REFINE_TOL,
        );
        if m.value < value {
            phi = m.x;
            value = m.value;
        }
        if before - value < 1e-15 {
            break;
        }
    }
    Ok(GlobalDiscord {
        value: snap_nonnegative(value),
        angles: RotationAngles::uniform(rho.n_qubits(), theta, phi),
    })
}

/// Global discord. Symmetric mode applies one rotation to every qubit and
/// requires a permutation-invariant state; general mode runs the oracle
/// over all `2n` angles with default settings.
pub fn global_discord(rho: &DensityMatrix, mode: Mode) -> Result<GlobalDiscord> {
    global_discord_with(rho, mode, &OracleConfig::default())
}

pub fn global_discord_with(
    rho: &DensityMatrix,
    mode: Mode,
    config: &OracleConfig,
) -> Result<GlobalDiscord> {
    if rho.n_qubits() < 2 {
        return Err(invalid("global discord needs at least two qubits"));
    }
    match mode {
        Mode::Symmetric => {
            require_permutation_invariant(rho)?;
            symmetric_search(rho)
        }
        Mode::General => oracle::oracle_global_discord(rho, config),
    }
}

/// Closed form for [`crate::thermo_state`], attained in the computational
/// basis:
/// `a log2 a + b log2 b − (a + b) log2((a + b)/2)` with `a = p0^n`,
/// `b = p1^n` and `0 log 0 = 0`.
pub fn global_discord_thermo_analytic(n: usize, p0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(invalid(format!("p0 = {p0} outside [0, 1]")));
    }
    if n < 2 {
        return Err(invalid("global discord needs at least two qubits"));
    }
    let xlog = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    let a = p0.powi(n as i32);
    let b = (1.0 - p0).powi(n as i32);
    Ok(xlog(a) + xlog(b) - xlog(a + b) + (a + b))
}
