//! State families and the symmetry-adapted measurement bases.
//!
//! # Excitation counting in the thermodynamic state
//!
//! [`thermo_state`] weights every computational basis state with `j` qubits
//! in `|0⟩` (other than the two extremal ones) by `p0^j p1^(n-j)`, i.e. the
//! diagonal of `(p0|0⟩⟨0| + p1|1⟩⟨1|)^{⊗n}`. Counting ones instead gives the
//! state at `p0 ↔ p1`, which is related by the global bit flip and has the
//! same correlations.
//!
//! # `|GHZ±⟩` normalization
//!
//! The rotated extremal pair of [`symmetric_basis`] is normalized with
//! `1/√2`, the only factor that makes `|0…0⟩ ± |1…1⟩` a unit vector.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::qstate::{check_qubits, DensityMatrix, LocalUnitary, PureState};
use crate::CMatrix;

const ORTHONORMAL_TOL: f64 = 1e-10;

fn check_register(n: usize) -> Result<()> {
    check_qubits("state family", n)?;
    if n < 2 {
        return Err(invalid(format!("state families need n >= 2, got {n}")));
    }
    Ok(())
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

fn popcount(x: usize) -> usize {
    x.count_ones() as usize
}

/// Thermodynamic-cycle state: the extremal pair `|0…0⟩, |1…1⟩` carries
/// populations `(p0^n + p1^n)/2` and coherence `(p0^n − p1^n)/2`, every other
/// basis state with `j` zeros carries `p0^j p1^(n−j)`.
pub fn thermo_state(n: usize, p0: f64) -> Result<DensityMatrix> {
    check_register(n)?;
    check_unit("p0", p0)?;
    let p1 = 1.0 - p0;
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for x in 1..dim - 1 {
        let zeros = n - popcount(x);
        m[(x, x)] = Complex64::new(p0.powi(zeros as i32) * p1.powi((n - zeros) as i32), 0.0);
    }
    let (a, b) = (p0.powi(n as i32), p1.powi(n as i32));
    let pop = Complex64::new(0.5 * (a + b), 0.0);
    let coh = Complex64::new(0.5 * (a - b), 0.0);
    m[(0, 0)] = pop;
    m[(dim - 1, dim - 1)] = pop;
    m[(0, dim - 1)] = coh;
    m[(dim - 1, 0)] = coh;
    Ok(DensityMatrix::from_trusted(n, m))
}

/// Parameters of `α1|0…0⟩ + α2|1…1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzParams {
    pub n_qubits: usize,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl GhzParams {
    /// Requires `α1 ∈ [0, 1/√2]`.
    pub fn strict(n_qubits: usize, alpha1: f64) -> Result<Self> {
        if !(0.0..=FRAC_1_SQRT_2 + 1e-12).contains(&alpha1) {
            return Err(invalid(format!(
                "alpha1 = {alpha1} outside [0, 1/sqrt(2)]"
            )));
        }
        Self::lenient(n_qubits, alpha1)
    }

    /// Accepts `α1 ∈ [0, 1]`. Above `1/√2` the weight moves onto `|0…0⟩`;
    /// for the pure state that is a local relabelling, but amplitude damping
    /// treats the two branches differently, so a warning is logged.
    pub fn lenient(n_qubits: usize, alpha1: f64) -> Result<Self> {
        check_register(n_qubits)?;
        check_unit("alpha1", alpha1)?;
        if alpha1 > FRAC_1_SQRT_2 + 1e-12 {
            log::warn!("alpha1 = {alpha1} exceeds 1/sqrt(2); the |0...0> branch now dominates");
        }
        Ok(Self {
            n_qubits,
            alpha1,
            alpha2: (1.0 - alpha1 * alpha1).max(0.0).sqrt(),
        })
    }

    pub fn state(&self) -> PureState {
        let dim = 1usize << self.n_qubits;
        let mut v = DVector::zeros(dim);
        v[0] = Complex64::new(self.alpha1, 0.0);
        v[dim - 1] = Complex64::new(self.alpha2, 0.0);
        PureState::normalized(self.n_qubits, v).expect("two nonzero-norm amplitudes")
    }
}

/// Generalized GHZ state; rejects `α1 > 1/√2` (see [`GhzParams::lenient`]).
pub fn ghz_state(n: usize, alpha1: f64) -> Result<PureState> {
    Ok(GhzParams::strict(n, alpha1)?.state())
}

/// Closed form of a generalized GHZ state after amplitude damping with rate
/// `lambda` on every qubit. `alpha1` may be anywhere in `[0, 1]`.
pub fn ghz_ad_closed(n: usize, alpha1: f64, lambda: f64) -> Result<DensityMatrix> {
    check_unit("lambda", lambda)?;
    let g = GhzParams::lenient(n, alpha1)?;
    let (a1s, a2s) = (g.alpha1 * g.alpha1, g.alpha2 * g.alpha2);
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    // Basis states other than |0…0⟩ holding k excitations.
    for x in 1..dim {
        let k = popcount(x);
        m[(x, x)] = Complex64::new(
            a2s * (1.0 - lambda).powi(k as i32) * lambda.powi((n - k) as i32),
            0.0,
        );
    }
    m[(0, 0)] = Complex64::new(a1s + a2s * lambda.powi(n as i32), 0.0);
    let coh = Complex64::new(g.alpha1 * g.alpha2 * (1.0 - lambda).powf(n as f64 / 2.0), 0.0);
    m[(0, dim - 1)] = coh;
    m[(dim - 1, 0)] = coh;
    Ok(DensityMatrix::from_trusted(n, m))
}

/// Closed form of a generalized GHZ state after phase damping with rate
/// `gamma` on every qubit: populations untouched, coherence scaled by
/// `(1−γ)^(n/2)`.
pub fn ghz_pd_closed(n: usize, alpha1: f64, gamma: f64) -> Result<DensityMatrix> {
    check_unit("gamma", gamma)?;
    let g = GhzParams::lenient(n, alpha1)?;
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    m[(0, 0)] = Complex64::new(g.alpha1 * g.alpha1, 0.0);
    m[(dim - 1, dim - 1)] = Complex64::new(g.alpha2 * g.alpha2, 0.0);
    let coh = Complex64::new(g.alpha1 * g.alpha2 * (1.0 - gamma).powf(n as f64 / 2.0), 0.0);
    m[(0, dim - 1)] = coh;
    m[(dim - 1, 0)] = coh;
    Ok(DensityMatrix::from_trusted(n, m))
}

/// Complete orthonormal basis of a `k`-qubit block.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    block_size: usize,
    vectors: Vec<PureState>,
}

impl MeasurementBasis {
    /// Checks pairwise orthonormality (1e-10) and completeness.
    pub fn new(block_size: usize, vectors: Vec<PureState>) -> Result<Self> {
        let dim = 1usize << block_size;
        if vectors.len() != dim {
            return Err(invalid(format!(
                "{} vectors cannot span a {dim}-dimensional block",
                vectors.len()
            )));
        }
        if let Some(v) = vectors.iter().find(|v| v.n_qubits() != block_size) {
            return Err(invalid(format!(
                "vector on {} qubits in a {block_size}-qubit basis",
                v.n_qubits()
            )));
        }
        for i in 0..dim {
            for j in i..dim {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = vectors[i].inner(&vectors[j]);
                if (got - Complex64::new(want, 0.0)).norm() > ORTHONORMAL_TOL {
                    return Err(invalid(format!(
                        "basis vectors {i} and {j} have overlap {got}"
                    )));
                }
            }
        }
        Ok(Self {
            block_size,
            vectors,
        })
    }

    /// Columns of a unitary as a basis.
    pub fn from_unitary(block_size: usize, u: &CMatrix) -> Result<Self> {
        let vectors = (0..u.ncols())
            .map(|c| PureState::new(block_size, u.column(c).into_owned()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(block_size, vectors)
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }
}

/// Symmetry-adapted basis of a `k`-qubit block.
///
/// The first two vectors are the rotated extremal pair
/// `cos θ|0…0⟩ + sin θ|1…1⟩` and `−sin θ|0…0⟩ + cos θ|1…1⟩` (the `|GHZ±⟩`
/// pair at `θ = π/4`). For every excitation number `j = 1 … k−1` the
/// `C(k, j)` basis states with `j` ones, in ascending index order, are
/// combined into discrete Fourier modes `Σ_q e^{2πi l q / C(k,j)} |x_q⟩`; the
/// `l = 0` mode is the generalized W state. For `k = 1` only the rotated
/// pair remains.
pub fn symmetric_basis(k: usize, theta: f64) -> Result<MeasurementBasis> {
    check_qubits("symmetric basis", k)?;
    let dim = 1usize << k;
    let (c, s) = (theta.cos(), theta.sin());
    let mut vectors = Vec::with_capacity(dim);
    let pair = |a: f64, b: f64| {
        let mut v = DVector::zeros(dim);
        v[0] = Complex64::new(a, 0.0);
        v[dim - 1] = Complex64::new(b, 0.0);
        v
    };
    let first = pair(c, s);
    let second = pair(-s, c);
    vectors.push(first);
    vectors.push(second);
    for j in 1..k {
        let members: Vec<usize> = (0..dim).filter(|&x| popcount(x) == j).collect();
        let m = members.len();
        let norm = 1.0 / (m as f64).sqrt();
        for l in 0..m {
            let mut v = DVector::zeros(dim);
            for (q, &x) in members.iter().enumerate() {
                let phase = 2.0 * PI * ((l * q) % m) as f64 / m as f64;
                v[x] = Complex64::from_polar(norm, phase);
            }
            vectors.push(v);
        }
    }
    let vectors = vectors
        .into_iter()
        .map(|v| PureState::new(k, v))
        .collect::<Result<Vec<_>>>()?;
    MeasurementBasis::new(k, vectors)
}

/// Symmetry operators that leave the permutation-invariant families fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// Cyclic shift of the block: the content of `block[i]` moves to
    /// `block[i+1 mod k]`.
    Translation,
    /// `P^(k)`: `σ_z^{⊗k}` times the local phase `|1⟩ → ω|1⟩` on every qubit,
    /// with `ω = e^{iπ/k}` for odd `k` and `e^{2iπ/k}` for even `k`.
    ParityPhase(usize),
}

pub fn symmetry_generator(kind: Symmetry, block: &[usize]) -> Result<LocalUnitary> {
    let k = block.len();
    check_qubits("symmetry generator", k)?;
    let dim = 1usize << k;
    let mut u = CMatrix::zeros(dim, dim);
    match kind {
        Symmetry::Translation => {
            for x in 0..dim {
                // Bit i (from the most significant end) of x belongs to block[i].
                let mut y = 0usize;
                for i in 0..k {
                    let bit = (x >> (k - 1 - i)) & 1;
                    let target = (i + 1) % k;
                    y |= bit << (k - 1 - target);
                }
                u[(y, x)] = Complex64::new(1.0, 0.0);
            }
        }
        Symmetry::ParityPhase(order) => {
            if order != k {
                return Err(invalid(format!(
                    "P^({order}) needs a block of {order} qubits, got {k}"
                )));
            }
            let omega = if k % 2 == 1 {
                Complex64::from_polar(1.0, PI / k as f64)
            } else {
                Complex64::from_polar(1.0, 2.0 * PI / k as f64)
            };
            let per_one = -omega;
            for x in 0..dim {
                u[(x, x)] = per_one.powu(popcount(x) as u32);
            }
        }
    }
    LocalUnitary::new(block.to_vec(), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::is_invariant_under;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn thermo_at_unit_p0_is_ghz_plus() {
        for n in 2..=5 {
            let r = thermo_state(n, 1.0).unwrap();
            let ghz = ghz_state(n, FRAC_1_SQRT_2).unwrap().projector();
            assert!(r.max_abs_diff(&ghz) < 1e-15);
        }
    }

    #[test]
    fn thermo_trace_and_validity_on_grid() {
        for n in 2..=6 {
            for i in 0..=10 {
                let r = thermo_state(n, i as f64 / 10.0).unwrap();
                assert_abs_diff_eq!(r.trace().re, 1.0, epsilon = 1e-12);
                DensityMatrix::new(n, r.matrix().clone()).unwrap();
            }
        }
        assert!(thermo_state(1, 0.5).is_err());
        assert!(thermo_state(13, 0.5).is_err());
        assert!(thermo_state(3, 1.2).is_err());
    }

    #[test]
    fn thermo_counts_zeros_as_p0() {
        // |001⟩ has two zeros: weight p0² p1.
        let r = thermo_state(3, 0.7).unwrap();
        assert_abs_diff_eq!(r.matrix()[(1, 1)].re, 0.49 * 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix()[(6, 6)].re, 0.7 * 0.09, epsilon = 1e-15);
    }

    #[test]
    fn thermo_half_is_maximally_mixed() {
        let r = thermo_state(4, 0.5).unwrap();
        assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(4).unwrap()) < 1e-15);
    }

    #[test]
    fn ghz_examples() {
        let g = ghz_state(3, FRAC_1_SQRT_2).unwrap();
        assert_abs_diff_eq!(g.amplitudes()[0].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(g.amplitudes()[7].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        let ones = ghz_state(4, 0.0).unwrap();
        assert_eq!(ones.amplitudes()[15], c(1.0));
        let large_alpha = (2.0 + 3f64.sqrt()).sqrt() / 2.0;
        assert!(ghz_state(3, large_alpha).is_err());
        let lenient = GhzParams::lenient(3, large_alpha).unwrap();
        assert_abs_diff_eq!(lenient.alpha1.powi(2) + lenient.alpha2.powi(2), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn damped_ghz_endpoints() {
        let a = 0.4;
        let pure = ghz_state(3, a).unwrap().projector();
        assert!(ghz_ad_closed(3, a, 0.0).unwrap().max_abs_diff(&pure) < 1e-15);
        assert!(ghz_pd_closed(3, a, 0.0).unwrap().max_abs_diff(&pure) < 1e-15);
        let ground = PureState::basis(3, 0).unwrap().projector();
        assert!(ghz_ad_closed(3, a, 1.0).unwrap().max_abs_diff(&ground) < 1e-15);
        let b2 = 1.0 - a * a;
        let mixture = DensityMatrix::diagonal(3, &[a * a, 0., 0., 0., 0., 0., 0., b2]).unwrap();
        assert!(ghz_pd_closed(3, a, 1.0).unwrap().max_abs_diff(&mixture) < 1e-15);
        assert!(ghz_ad_closed(3, a, 1.5).is_err());
        assert!(ghz_pd_closed(3, a, -0.1).is_err());
    }

    #[test]
    fn damped_ghz_are_valid_states_and_pd_has_rank_two() {
        for n in 2..=5 {
            for i in 0..=4 {
                let r = i as f64 / 4.0;
                let ad = ghz_ad_closed(n, 0.5, r).unwrap();
                DensityMatrix::new(n, ad.matrix().clone()).unwrap();
                let pd = ghz_pd_closed(n, 0.5, r).unwrap();
                let ev = pd.eigenvalues();
                assert!(ev[2].abs() < 1e-10);
            }
        }
    }

    #[test]
    fn symmetric_basis_k2_is_bell_basis() {
        let b = symmetric_basis(2, PI / 4.0).unwrap();
        let s = FRAC_1_SQRT_2;
        let expect = [
            [s, 0.0, 0.0, s],
            [-s, 0.0, 0.0, s],
            [0.0, s, s, 0.0],
            [0.0, s, -s, 0.0],
        ];
        for (v, e) in b.vectors().iter().zip(expect) {
            for (a, w) in v.amplitudes().iter().zip(e) {
                assert_abs_diff_eq!(a.re, w, epsilon = 1e-15);
                assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn symmetric_basis_k3_contains_w_states() {
        let b = symmetric_basis(3, 0.37).unwrap();
        let t = 1.0 / 3f64.sqrt();
        let w = [0.0, t, t, 0.0, t, 0.0, 0.0, 0.0];
        let wbar = [0.0, 0.0, 0.0, t, 0.0, t, t, 0.0];
        let has = |target: [f64; 8]| {
            b.vectors().iter().any(|v| {
                v.amplitudes()
                    .iter()
                    .zip(target)
                    .all(|(a, x)| (a - c(x)).norm() < 1e-14)
            })
        };
        assert!(has(w));
        assert!(has(wbar));
    }

    #[test]
    fn symmetric_basis_is_orthonormal_and_complete() {
        // `MeasurementBasis::new` performs the Gram check; a failure would panic.
        for k in 1..=5 {
            for &theta in &[0.0, 0.3, 1.1, 2.9] {
                let b = symmetric_basis(k, theta).unwrap();
                assert_eq!(b.vectors().len(), 1 << k);
            }
        }
    }

    #[test]
    fn symmetric_basis_vectors_are_parity_phase_eigenvectors() {
        for k in 2..=5 {
            let block: Vec<usize> = (0..k).collect();
            let p = symmetry_generator(Symmetry::ParityPhase(k), &block).unwrap();
            for v in symmetric_basis(k, 0.77).unwrap().vectors() {
                let w = p.matrix() * v.amplitudes();
                let lambda = v.amplitudes().dotc(&w);
                assert_abs_diff_eq!(lambda.norm(), 1.0, epsilon = 1e-10);
                let residual = (w - v.amplitudes() * lambda).norm();
                assert!(residual < 1e-10);
            }
        }
    }

    #[test]
    fn parity_phase_eigenvalues_k3() {
        let p = symmetry_generator(Symmetry::ParityPhase(3), &[0, 1, 2]).unwrap();
        assert!((p.matrix()[(0, 0)] - c(1.0)).norm() < 1e-15);
        assert!((p.matrix()[(7, 7)] - c(1.0)).norm() < 1e-14);
        let w = -Complex64::from_polar(1.0, PI / 3.0);
        for x in [1, 2, 4] {
            assert!((p.matrix()[(x, x)] - w).norm() < 1e-15);
        }
        let wbar = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        for x in [3, 5, 6] {
            assert!((p.matrix()[(x, x)] - wbar).norm() < 1e-14);
        }
        assert!(symmetry_generator(Symmetry::ParityPhase(3), &[0, 1]).is_err());
    }

    #[test]
    fn translation_shifts_qubits() {
        let t = symmetry_generator(Symmetry::Translation, &[0, 1, 2]).unwrap();
        // |100⟩ → |010⟩
        assert_eq!(t.matrix()[(0b010, 0b100)], c(1.0));
        assert_eq!(t.matrix()[(0b100, 0b001)], c(1.0));
    }

    #[test]
    fn families_are_invariant_under_their_symmetries() {
        let r = thermo_state(4, 0.7).unwrap();
        let all: Vec<usize> = (0..4).collect();
        let t = symmetry_generator(Symmetry::Translation, &all).unwrap();
        assert!(is_invariant_under(&r, &t).unwrap());
        for k in 1..=4 {
            let block: Vec<usize> = (4 - k..4).collect();
            let p = symmetry_generator(Symmetry::ParityPhase(k), &block).unwrap();
            assert!(is_invariant_under(&r, &p).unwrap());
            let ad = ghz_ad_closed(4, 0.3, 0.2).unwrap();
            assert!(is_invariant_under(&ad, &p).unwrap());
        }
    }

    #[test]
    fn families_are_invariant_under_every_transposition() {
        let states = [
            thermo_state(4, 0.3).unwrap(),
            ghz_ad_closed(4, 0.6, 0.35).unwrap(),
            ghz_pd_closed(4, 0.6, 0.35).unwrap(),
        ];
        for a in 0..4 {
            for b in (a + 1)..4 {
                let swap = symmetry_generator(Symmetry::Translation, &[a, b]).unwrap();
                for s in &states {
                    assert!(is_invariant_under(s, &swap).unwrap());
                }
            }
        }
    }

    #[test]
    fn bit_flip_relates_p0_and_one_minus_p0() {
        let x = CMatrix::from_row_slice(2, 2, &[c(0.), c(1.), c(1.), c(0.)]);
        let z = CMatrix::from_row_slice(2, 2, &[c(1.), c(0.), c(0.), c(-1.)]);
        let n = 3;
        let mut flip = CMatrix::identity(1, 1);
        for _ in 0..n {
            flip = flip.kronecker(&x);
        }
        let zfirst = z.kronecker(&CMatrix::identity(4, 4));
        let u = zfirst * flip;
        let a = thermo_state(n, 0.8).unwrap().conjugate_by(&u);
        let b = thermo_state(n, 0.2).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn bit_flip_single_qubit_breaks_invariance() {
        let r = thermo_state(3, 0.8).unwrap();
        let x = CMatrix::from_row_slice(2, 2, &[c(0.), c(1.), c(1.), c(0.)]);
        let flip = LocalUnitary::new(vec![1], x).unwrap();
        assert!(!is_invariant_under(&r, &flip).unwrap());
    }
}
