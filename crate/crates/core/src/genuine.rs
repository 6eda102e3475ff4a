//! Genuine multipartite total, quantum and classical correlations.
//!
//! For a bipartition with measured block `B` and remainder `A`, the discord
//! is `S(ρ_B) − S(ρ) + min Σ_i b_i S(ρ_A|i)`, the minimum running over
//! complete rank-one projective measurements `{|ψ_i⟩⟨ψ_i|}` on `B`.
//!
//! When `ρ` is invariant under qubit permutations and under the parity-phase
//! operator of the measured block, the optimal measurement may be taken from
//! [`symmetric_basis`], which leaves a single angle to search. General
//! states go through the brute-force search in [`crate::oracle`].

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::optimize::grid_golden;
use crate::oracle::{self, OracleConfig};
use crate::qstate::{
    check_cut, clamped_entropy, snap_nonnegative, is_invariant_under_permutation, mutual_information, partial_trace,
    von_neumann_entropy, BlockLayout, Cut, DensityMatrix, DEGENERATE_PROBABILITY,
};
use crate::states::symmetric_basis;
use crate::{CMatrix, Mode};

/// Coarse grid on `θ ∈ [0, π/2]` seeding the golden-section refinement.
pub const THETA_GRID: usize = 64;
/// Final bracket width of the angle search.
pub const THETA_TOL: f64 = 1e-6;

/// Which block of a cut the optimal measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasuredSide {
    /// `cut.measured()`
    Measured,
    /// `cut.remainder()`
    Remainder,
}

/// Correlations across one `{n−k : k}` cut.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CutReport {
    /// The cut with its `k`-qubit block as `measured`.
    pub cut: Cut,
    pub mutual_info: f64,
    /// Minimum of the discord over the two measurement directions.
    pub discord: f64,
    /// `mutual_info − discord`
    pub classical: f64,
    /// Angle of the rotated extremal pair at the optimum; `None` when the
    /// value came from the unrestricted search.
    pub optimal_theta: Option<f64>,
    pub measured_side: MeasuredSide,
}

/// Genuine n-partite correlations.
///
/// `total` is the smallest bipartite mutual information. `quantum` is the
/// smallest discord over all cuts and measurement directions, and
/// `classical = total − quantum`. The discord evaluated at the cut that
/// minimizes the mutual information is available through
/// [`GenuineReport::discord_at_total_cut`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenuineReport {
    pub total: f64,
    pub quantum: f64,
    pub classical: f64,
    /// Cut attaining `quantum`.
    pub optimal_cut: Cut,
    /// Cut attaining `total`.
    pub total_cut: Cut,
    pub per_cut: Vec<CutReport>,
}

impl GenuineReport {
    pub fn optimal(&self) -> &CutReport {
        self.per_cut
            .iter()
            .find(|c| c.cut == self.optimal_cut)
            .expect("optimal cut is one of the reported cuts")
    }

    pub fn discord_at_total_cut(&self) -> f64 {
        self.per_cut
            .iter()
            .find(|c| c.cut == self.total_cut)
            .map(|c| c.discord)
            .expect("total cut is one of the reported cuts")
    }
}

/// Discord value with the optimal angle of the symmetric search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteDiscord {
    pub value: f64,
    pub theta: Option<f64>,
}

/// `Σ_i b_i S(⟨ψ|ρ|ψ⟩ / b_i)` for one vector of a measurement.
pub(crate) fn outcome_entropy(layout: &BlockLayout, rho: &CMatrix, v: &DVector<Complex64>) -> f64 {
    let op = layout.contract_second(rho, v);
    let p = op.trace().re;
    if p < DEGENERATE_PROBABILITY {
        return 0.0;
    }
    // PSD whenever ρ is, so clamping only absorbs rounding.
    p * clamped_entropy(&op.unscale(p))
}

/// Conditional entropy of the remainder after measuring `cut.measured()` in
/// `basis`.
pub fn conditional_entropy(
    rho: &DensityMatrix,
    cut: &Cut,
    basis: &crate::states::MeasurementBasis,
) -> Result<f64> {
    check_cut(rho, cut)?;
    if basis.block_size() != cut.measured().len() {
        return Err(invalid(format!(
            "basis acts on {} qubits, measured block has {}",
            basis.block_size(),
            cut.measured().len()
        )));
    }
    let layout = BlockLayout::new(rho.n_qubits(), cut.remainder(), cut.measured());
    Ok(basis
        .vectors()
        .iter()
        .map(|v| outcome_entropy(&layout, rho.matrix(), v.amplitudes()))
        .sum())
}

/// Conditional entropy as a function of the symmetric-basis angle, with the
/// `θ`-independent Fourier sectors evaluated once.
pub(crate) struct SymmetricObjective<'a> {
    rho: &'a CMatrix,
    layout: BlockLayout,
    fixed: f64,
    dim: usize,
}

impl<'a> SymmetricObjective<'a> {
    pub(crate) fn new(rho: &'a DensityMatrix, cut: &Cut) -> Result<Self> {
        let k = cut.measured().len();
        let layout = BlockLayout::new(rho.n_qubits(), cut.remainder(), cut.measured());
        let basis = symmetric_basis(k, 0.0)?;
        let fixed = basis.vectors()[2..]
            .iter()
            .map(|v| outcome_entropy(&layout, rho.matrix(), v.amplitudes()))
            .sum();
        Ok(Self {
            rho: rho.matrix(),
            layout,
            fixed,
            dim: 1 << k,
        })
    }

    pub(crate) fn eval(&self, theta: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        let mut v = DVector::zeros(self.dim);
        let mut total = self.fixed;
        for (a, b) in [(c, s), (-s, c)] {
            v[0] = Complex64::new(a, 0.0);
            v[self.dim - 1] = Complex64::new(b, 0.0);
            total += outcome_entropy(&self.layout, self.rho, &v);
        }
        total
    }
}

/// Conditional entropy of [`symmetric_basis`] at angle `theta`.
pub fn symmetric_conditional_entropy(rho: &DensityMatrix, cut: &Cut, theta: f64) -> Result<f64> {
    check_cut(rho, cut)?;
    Ok(SymmetricObjective::new(rho, cut)?.eval(theta))
}

/// Errors unless `rho` is invariant under every qubit permutation (checked
/// on the transposition of qubits 0, 1 and the full cyclic shift, which
/// generate the symmetric group).
pub fn require_permutation_invariant(rho: &DensityMatrix) -> Result<()> {
    let n = rho.n_qubits();
    if n < 2 {
        return Ok(());
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    if !is_invariant_under_permutation(rho, &swap)? {
        return Err(Error::NotSymmetric("qubits 0 and 1 are not exchangeable".into()));
    }
    let shift: Vec<usize> = (0..n).map(|q| (q + 1) % n).collect();
    if !is_invariant_under_permutation(rho, &shift)? {
        return Err(Error::NotSymmetric("not invariant under cyclic shifts".into()));
    }
    Ok(())
}

fn symmetric_search(rho: &DensityMatrix, cut: &Cut) -> Result<BipartiteDiscord> {
    let objective = SymmetricObjective::new(rho, cut)?;
    let best = grid_golden(|t| objective.eval(t), 0.0, FRAC_PI_2, THETA_GRID, THETA_TOL);
    let s_measured = von_neumann_entropy(&partial_trace(rho, cut.measured())?)?;
    let s_total = von_neumann_entropy(rho)?;
    Ok(BipartiteDiscord {
        value: snap_nonnegative(s_measured - s_total + best.value),
        theta: Some(best.x),
    })
}

/// Discord across `cut` with the measurement on `cut.measured()`, using the
/// default oracle settings for [`Mode::General`].
pub fn bipartite_discord(rho: &DensityMatrix, cut: &Cut, mode: Mode) -> Result<BipartiteDiscord> {
    bipartite_discord_with(rho, cut, mode, &OracleConfig::default())
}

pub fn bipartite_discord_with(
    rho: &DensityMatrix,
    cut: &Cut,
    mode: Mode,
    config: &OracleConfig,
) -> Result<BipartiteDiscord> {
    check_cut(rho, cut)?;
    match mode {
        Mode::Symmetric => {
            require_permutation_invariant(rho)?;
            symmetric_search(rho, cut)
        }
        Mode::General => Ok(BipartiteDiscord {
            value: oracle::oracle_bipartite_discord(rho, cut, config)?,
            theta: None,
        }),
    }
}

/// Genuine correlations of a permutation-invariant state.
pub fn genuine_correlations(rho: &DensityMatrix) -> Result<GenuineReport> {
    genuine_correlations_with(rho, Mode::Symmetric, &OracleConfig::default())
}

/// Symmetric mode visits one cut per block size `k = 1 … ⌊n/2⌋` and both
/// measurement directions. General mode visits every bipartition and runs
/// the oracle in both directions.
pub fn genuine_correlations_with(
    rho: &DensityMatrix,
    mode: Mode,
    config: &OracleConfig,
) -> Result<GenuineReport> {
    let n = rho.n_qubits();
    if n < 2 {
        return Err(invalid("genuine correlations need at least two qubits"));
    }
    let cuts: Vec<Cut> = match mode {
        Mode::Symmetric => {
            require_permutation_invariant(rho)?;
            (1..=n / 2).map(|k| Cut::last(n, k)).collect::<Result<_>>()?
        }
        // Subsets containing the last qubit, excluding the full register,
        // list every bipartition once.
        Mode::General => (1..(1usize << (n - 1)))
            .map(|mask| {
                let measured: Vec<usize> = (0..n - 1)
                    .filter(|q| mask & (1 << q) != 0)
                    .collect();
                Cut::new(n, &measured)
            })
            .collect::<Result<_>>()?,
    };

    let mut per_cut = Vec::with_capacity(cuts.len());
    for cut in cuts {
        let mi = mutual_information(rho, &cut)?;
        let forward = match mode {
            Mode::Symmetric => symmetric_search(rho, &cut)?,
            Mode::General => bipartite_discord_with(rho, &cut, mode, config)?,
        };
        let same_size = cut.measured().len() == cut.remainder().len();
        let (discord, side) = if mode == Mode::Symmetric && same_size {
            (forward, MeasuredSide::Measured)
        } else {
            let swapped = cut.swapped();
            let backward = match mode {
                Mode::Symmetric => symmetric_search(rho, &swapped)?,
                Mode::General => bipartite_discord_with(rho, &swapped, mode, config)?,
            };
            if backward.value < forward.value {
                (backward, MeasuredSide::Remainder)
            } else {
                (forward, MeasuredSide::Measured)
            }
        };
        per_cut.push(CutReport {
            cut,
            mutual_info: mi,
            discord: discord.value,
            classical: mi - discord.value,
            optimal_theta: discord.theta,
            measured_side: side,
        });
    }

    let argmin = |key: fn(&CutReport) -> f64| {
        per_cut
            .iter()
            .min_by(|a, b| key(a).total_cmp(&key(b)))
            .expect("at least one cut")
    };
    let t_min = argmin(|c| c.mutual_info);
    let d_min = argmin(|c| c.discord);
    let (total, quantum) = (t_min.mutual_info, d_min.discord);
    Ok(GenuineReport {
        total,
        quantum,
        classical: total - quantum,
        optimal_cut: d_min.cut.clone(),
        total_cut: t_min.cut.clone(),
        per_cut,
    })
}

/// Binary entropy in bits.
pub(crate) fn binary_entropy(x: f64) -> f64 {
    crate::qstate::shannon_entropy([x, 1.0 - x])
}

fn hermitian_sqrt(m: &CMatrix) -> CMatrix {
    let eig = SymmetricEigen::new(m.clone());
    let roots = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    &eig.eigenvectors * CMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// Two-qubit concurrence `max(0, l1 − l2 − l3 − l4)`, where the `l_i` are
/// the decreasing square roots of the eigenvalues of `√ρ ρ̃ √ρ` and
/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(invalid("concurrence needs a two-qubit (4x4) state"));
    }
    // σ_y⊗σ_y is real: it maps |x⟩ to sign·|3−x⟩ with sign −1 for x = 1, 2.
    let sign = [1.0, -1.0, -1.0, 1.0];
    let flipped = CMatrix::from_fn(4, 4, |i, j| rho[(3 - i, 3 - j)].conj() * sign[i] * sign[j]);
    let root = hermitian_sqrt(rho);
    let m = &root * flipped * &root;
    let mut l: Vec<f64> = crate::qstate::hermitian_eigenvalues(&m)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Entanglement of formation of a two-qubit state, from its concurrence.
pub fn entanglement_of_formation(rho: &CMatrix) -> Result<f64> {
    let c = concurrence(rho)?.min(1.0);
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt())))
}

/// Threshold on the third eigenvalue for the rank-2 purification route.
pub const RANK_TWO_TOL: f64 = 1e-9;

/// Discord of a rank ≤ 2 state through the Koashi–Winter relation.
///
/// `ρ` is purified with one ancilla qubit. The discord with the measurement
/// on `cut.measured()` is `S(ρ_measured) − S(ρ) + E(ρ_{remainder,ancilla})`.
/// The remainder is first compressed onto the (at most two-dimensional)
/// support of its reduced state so the two-qubit entanglement of formation
/// applies.
pub fn koashi_winter_discord(rho: &DensityMatrix, cut: &Cut) -> Result<f64> {
    check_cut(rho, cut)?;
    let eig = SymmetricEigen::new(rho.matrix().clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let rank = order
        .iter()
        .filter(|&&i| eig.eigenvalues[i] > RANK_TWO_TOL)
        .count();
    if rank > 2 {
        return Err(Error::RankTooHigh { rank });
    }
    let weights: Vec<f64> = order[..2]
        .iter()
        .map(|&i| eig.eigenvalues[i].max(0.0).sqrt())
        .collect();
    let vecs: Vec<DVector<Complex64>> = order[..2]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();

    // State of (remainder, ancilla), index 2·a + m.
    let layout = BlockLayout::new(rho.n_qubits(), cut.remainder(), cut.measured());
    let da = 1usize << cut.remainder().len();
    let db = 1usize << cut.measured().len();
    let mut joint = CMatrix::zeros(2 * da, 2 * da);
    for a1 in 0..da {
        for m1 in 0..2 {
            for a2 in 0..da {
                for m2 in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..db {
                        acc += vecs[m1][layout.index(a1, b)] * vecs[m2][layout.index(a2, b)].conj();
                    }
                    joint[(2 * a1 + m1, 2 * a2 + m2)] = acc * weights[m1] * weights[m2];
                }
            }
        }
    }

    let reduced = CMatrix::from_fn(da, da, |a1, a2| {
        joint[(2 * a1, 2 * a2)] + joint[(2 * a1 + 1, 2 * a2 + 1)]
    });
    let red_eig = SymmetricEigen::new(reduced);
    let mut red_order: Vec<usize> = (0..da).collect();
    red_order.sort_by(|&a, &b| red_eig.eigenvalues[b].total_cmp(&red_eig.eigenvalues[a]));
    let support = red_order
        .iter()
        .filter(|&&i| red_eig.eigenvalues[i] > RANK_TWO_TOL)
        .count();
    if support > 2 {
        return Err(invalid(format!(
            "remainder support has dimension {support}; a qubit encoding needs at most 2"
        )));
    }
    // Isometry from the two-level support into the remainder space; a
    // one-qubit remainder needs no compression.
    let iso = if da == 2 {
        CMatrix::identity(2, 2)
    } else {
        CMatrix::from_fn(da, 2, |a, j| red_eig.eigenvectors[(a, red_order[j])])
    };
    let mut compressed = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for m1 in 0..2 {
            for j in 0..2 {
                for m2 in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a1 in 0..da {
                        for a2 in 0..da {
                            acc += iso[(a1, i)].conj()
                                * joint[(2 * a1 + m1, 2 * a2 + m2)]
                                * iso[(a2, j)];
                        }
                    }
                    compressed[(2 * i + m1, 2 * j + m2)] = acc;
                }
            }
        }
    }
    let eof = entanglement_of_formation(&compressed)?;
    let s_measured = von_neumann_entropy(&partial_trace(rho, cut.measured())?)?;
    Ok(snap_nonnegative(s_measured - von_neumann_entropy(rho)? + eof))
}
