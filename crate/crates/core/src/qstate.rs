//! Dense n-qubit states: construction, partial traces, entropies,
//! measurement conditioning and symmetry checks.
//!
//! Qubit 0 is the most significant bit of a computational-basis index, so
//! `|q0 q1 … q(n-1)⟩` has index `Σ q_i 2^(n-1-i)`. Every constructor and
//! reduction in the crate follows this ordering.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::CMatrix;

/// Largest supported register. Dense matrices beyond 4096×4096 are not
/// practical.
pub const MAX_QUBITS: usize = 12;

pub(crate) const HERMITIAN_TOL: f64 = 1e-10;
pub(crate) const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_TOL` are treated as numerical zeros.
pub(crate) const PSD_TOL: f64 = 1e-9;
pub(crate) const NORM_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;
const INVARIANCE_TOL: f64 = 1e-9;
/// Outcome probabilities below this are dropped from conditional sums.
pub const DEGENERATE_PROBABILITY: f64 = 1e-12;

pub(crate) fn check_qubits(what: &'static str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid(format!("{what} needs at least one qubit")));
    }
    if n > MAX_QUBITS {
        return Err(Error::SizeCap {
            what,
            n,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Normalized state vector on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(n_qubits: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        check_qubits("PureState", n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(invalid(format!(
                "{} amplitudes given for {} qubits",
                amplitudes.len(),
                n_qubits
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before validation.
    pub fn normalized(n_qubits: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(invalid("zero vector cannot be normalized"));
        }
        Self::new(n_qubits, amplitudes.unscale(norm))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits("PureState", n_qubits)?;
        let dim = 1 << n_qubits;
        if index >= dim {
            return Err(invalid(format!("basis index {index} out of range")));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes: amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn projector(&self) -> DensityMatrix {
        let data = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::from_trusted(self.n_qubits, data)
    }
}

/// Hermitian, unit-trace, positive semidefinite operator on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), trace (1e-10) and positivity (-1e-9).
    pub fn new(n_qubits: usize, data: CMatrix) -> Result<Self> {
        check_qubits("DensityMatrix", n_qubits)?;
        let dim = 1 << n_qubits;
        if data.nrows() != dim || data.ncols() != dim {
            return Err(invalid(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                data.nrows(),
                data.ncols()
            )));
        }
        let herm = max_abs_diff(&data, &data.adjoint());
        if herm > HERMITIAN_TOL {
            return Err(Error::InvariantViolation(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = data.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvariantViolation(format!("trace is {tr}")));
        }
        let rho = Self { n_qubits, data };
        let min = rho.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvariantViolation(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }

    /// Skips validation. Only for matrices that are density operators by
    /// construction.
    pub(crate) fn from_trusted(n_qubits: usize, data: CMatrix) -> Self {
        debug_assert_eq!(data.nrows(), 1 << n_qubits);
        Self { n_qubits, data }
    }

    /// Builds a diagonal state from real populations.
    pub fn diagonal(n_qubits: usize, populations: &[f64]) -> Result<Self> {
        let data = CMatrix::from_diagonal(&DVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| Complex64::new(p, 0.0)),
        ));
        Self::new(n_qubits, data)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_qubits("DensityMatrix", n_qubits)?;
        let dim = 1 << n_qubits;
        Ok(Self::from_trusted(
            n_qubits,
            CMatrix::identity(dim, dim).unscale(dim as f64),
        ))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Real eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > tol).count()
    }

    /// `U ρ U†` for a unitary on the full register.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::from_trusted(self.n_qubits, u * &self.data * u.adjoint())
    }

    /// Largest elementwise deviation from `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }
}

/// Bipartition of the register into a measured block and the remainder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Cut {
    measured: Vec<usize>,
    remainder: Vec<usize>,
}

impl Cut {
    /// Both blocks must be nonempty; indices are sorted.
    pub fn new(n_qubits: usize, measured: &[usize]) -> Result<Self> {
        let measured = sorted_subset(n_qubits, measured)?;
        if measured.len() == n_qubits {
            return Err(invalid("cut leaves the remainder empty"));
        }
        let remainder = (0..n_qubits).filter(|q| !measured.contains(q)).collect();
        Ok(Self {
            measured,
            remainder,
        })
    }

    /// The `{n-k : k}` cut that measures the last `k` qubits.
    pub fn last(n_qubits: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n_qubits {
            return Err(invalid(format!(
                "measured block size {k} invalid for {n_qubits} qubits"
            )));
        }
        Self::new(n_qubits, &((n_qubits - k)..n_qubits).collect::<Vec<_>>())
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn remainder(&self) -> &[usize] {
        &self.remainder
    }

    pub fn n_qubits(&self) -> usize {
        self.measured.len() + self.remainder.len()
    }

    /// Same partition with the roles of the blocks exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            measured: self.remainder.clone(),
            remainder: self.measured.clone(),
        }
    }
}

impl std::fmt::Display for Cut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{}}}|{{{}}}", join(&self.remainder), join(&self.measured))
    }
}

/// Unitary acting on a subset of qubits, in the order given by `qubits`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    qubits: Vec<usize>,
    matrix: CMatrix,
}

impl LocalUnitary {
    pub fn new(qubits: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        if qubits.is_empty() {
            return Err(invalid("unitary acts on no qubits"));
        }
        let mut seen = qubits.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != qubits.len() {
            return Err(invalid("repeated qubit in unitary support"));
        }
        let dim = 1 << qubits.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(invalid(format!(
                "{}x{} matrix cannot act on {} qubits",
                matrix.nrows(),
                matrix.ncols(),
                qubits.len()
            )));
        }
        let dev = max_abs_diff(&(matrix.adjoint() * &matrix), &CMatrix::identity(dim, dim));
        if dev > UNITARY_TOL {
            return Err(invalid(format!("matrix is not unitary (deviation {dev:e})")));
        }
        Ok(Self { qubits, matrix })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Full `2^n × 2^n` operator, identity on the other qubits.
    pub fn embed(&self, n_qubits: usize) -> Result<CMatrix> {
        if let Some(&q) = self.qubits.iter().find(|&&q| q >= n_qubits) {
            return Err(invalid(format!("qubit {q} outside a {n_qubits}-qubit register")));
        }
        let dim = 1usize << n_qubits;
        let mask: usize = self
            .qubits
            .iter()
            .map(|&q| 1usize << (n_qubits - 1 - q))
            .sum();
        let local = |x: usize| -> usize {
            self.qubits
                .iter()
                .fold(0, |acc, &q| (acc << 1) | ((x >> (n_qubits - 1 - q)) & 1))
        };
        let mut full = CMatrix::zeros(dim, dim);
        for x in 0..dim {
            let lx = local(x);
            for y in 0..dim {
                if x & !mask == y & !mask {
                    full[(x, y)] = self.matrix[(lx, local(y))];
                }
            }
        }
        Ok(full)
    }
}

/// Index bookkeeping for splitting the register into two ordered blocks.
///
/// `index(a, b)` is the full-register index whose `first` qubits read `a`
/// and whose `second` qubits read `b`.
#[derive(Debug, Clone)]
pub(crate) struct BlockLayout {
    d_first: usize,
    d_second: usize,
    table: Vec<usize>,
}

impl BlockLayout {
    pub(crate) fn new(n_qubits: usize, first: &[usize], second: &[usize]) -> Self {
        let d_first = 1 << first.len();
        let d_second = 1 << second.len();
        let spread = |block: &[usize], v: usize| -> usize {
            let k = block.len();
            block
                .iter()
                .enumerate()
                .map(|(i, &q)| ((v >> (k - 1 - i)) & 1) << (n_qubits - 1 - q))
                .sum()
        };
        let mut table = Vec::with_capacity(d_first * d_second);
        for a in 0..d_first {
            let xa = spread(first, a);
            for b in 0..d_second {
                table.push(xa | spread(second, b));
            }
        }
        Self {
            d_first,
            d_second,
            table,
        }
    }

    #[inline]
    pub(crate) fn index(&self, a: usize, b: usize) -> usize {
        self.table[a * self.d_second + b]
    }

    /// Unnormalized `⟨v|ρ|v⟩` with `v` on the second block; result lives on
    /// the first block.
    pub(crate) fn contract_second(&self, rho: &CMatrix, v: &DVector<Complex64>) -> CMatrix {
        let (da, db) = (self.d_first, self.d_second);
        let support: Vec<(usize, Complex64)> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(b, &c)| (b, c))
            .collect();
        let mut out = CMatrix::zeros(da, da);
        for a in 0..da {
            for a2 in a..da {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(b, vb) in &support {
                    let row = self.index(a, b);
                    let mut inner = Complex64::new(0.0, 0.0);
                    for &(b2, vb2) in &support {
                        inner += rho[(row, self.index(a2, b2))] * vb2;
                    }
                    acc += vb.conj() * inner;
                }
                out[(a, a2)] = acc;
                if a != a2 {
                    out[(a2, a)] = acc.conj();
                }
            }
        }
        debug_assert!(db == v.len());
        out
    }

    /// Trace over the second block.
    pub(crate) fn trace_second(&self, rho: &CMatrix) -> CMatrix {
        let (da, db) = (self.d_first, self.d_second);
        CMatrix::from_fn(da, da, |a, a2| {
            (0..db).map(|b| rho[(self.index(a, b), self.index(a2, b))]).sum()
        })
    }
}

fn sorted_subset(n_qubits: usize, qubits: &[usize]) -> Result<Vec<usize>> {
    if qubits.is_empty() {
        return Err(invalid("empty qubit set"));
    }
    let mut v = qubits.to_vec();
    v.sort_unstable();
    let len = v.len();
    v.dedup();
    if v.len() != len {
        return Err(invalid("repeated qubit index"));
    }
    if let Some(&q) = v.iter().find(|&&q| q >= n_qubits) {
        return Err(invalid(format!(
            "qubit {q} outside a {n_qubits}-qubit register"
        )));
    }
    Ok(v)
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = match m.nrows() {
        1 => vec![m[(0, 0)].re],
        2 => {
            let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
            let b = m[(0, 1)];
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean + r, mean - r]
        }
        _ => m.clone().symmetric_eigenvalues().iter().copied().collect(),
    };
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// `-Σ p log2 p` with `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Entropy of an operator's spectrum, with the PSD clamp applied.
pub(crate) fn spectrum_entropy(m: &CMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(m);
    if let Some(&min) = ev.last() {
        if min < -PSD_TOL {
            return Err(Error::InvariantViolation(format!(
                "negative eigenvalue {min:e}"
            )));
        }
    }
    Ok(shannon_entropy(ev.into_iter().map(|l| l.clamp(0.0, 1.0))))
}

/// Entropy with every eigenvalue clamped to `[0, 1]`, no PSD check.
pub(crate) fn clamped_entropy(m: &CMatrix) -> f64 {
    shannon_entropy(hermitian_eigenvalues(m).into_iter().map(|l| l.clamp(0.0, 1.0)))
}

/// Kronecker product; qubits of `a` come first.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let n = a.n_qubits + b.n_qubits;
    check_qubits("tensor", n)?;
    Ok(DensityMatrix::from_trusted(n, a.data.kronecker(&b.data)))
}

/// Reduced state on `keep`, qubits in ascending order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let keep = sorted_subset(rho.n_qubits, keep)?;
    if keep.len() == rho.n_qubits {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..rho.n_qubits).filter(|q| !keep.contains(q)).collect();
    let layout = BlockLayout::new(rho.n_qubits, &keep, &traced);
    Ok(DensityMatrix::from_trusted(
        keep.len(),
        layout.trace_second(&rho.data),
    ))
}

/// Von Neumann entropy in bits.
///
/// Eigenvalues are clamped to `[0, 1]`; anything below `-1e-9` is reported
/// as an invariant violation rather than absorbed.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&rho.data)
}

/// `Σ_j S(ρ_j) − S(ρ)` over single-qubit marginals.
pub fn total_correlations(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits < 2 {
        return Err(invalid("total correlations need at least two qubits"));
    }
    let mut sum = 0.0;
    for q in 0..rho.n_qubits {
        sum += von_neumann_entropy(&partial_trace(rho, &[q])?)?;
    }
    Ok(snap_nonnegative(sum - von_neumann_entropy(rho)?))
}

/// Rounding can push quantities that are nonnegative by construction
/// (mutual information, discord) slightly below zero; values down to
/// `-NEGATIVE_NOISE` are reported as `0`.
pub const NEGATIVE_NOISE: f64 = 1e-12;

pub(crate) fn snap_nonnegative(x: f64) -> f64 {
    if x < 0.0 && x > -NEGATIVE_NOISE {
        0.0
    } else {
        x
    }
}

/// `S(ρ_A) + S(ρ_B) − S(ρ)` across the cut.
pub fn mutual_information(rho: &DensityMatrix, cut: &Cut) -> Result<f64> {
    check_cut(rho, cut)?;
    let sa = von_neumann_entropy(&partial_trace(rho, cut.remainder())?)?;
    let sb = von_neumann_entropy(&partial_trace(rho, cut.measured())?)?;
    Ok(snap_nonnegative(sa + sb - von_neumann_entropy(rho)?))
}

pub(crate) fn check_cut(rho: &DensityMatrix, cut: &Cut) -> Result<()> {
    if cut.n_qubits() != rho.n_qubits {
        return Err(invalid(format!(
            "cut covers {} qubits, state has {}",
            cut.n_qubits(),
            rho.n_qubits
        )));
    }
    Ok(())
}

/// Outcome of projecting the measured block onto one probe vector.
#[derive(Debug, Clone)]
pub struct Conditional {
    pub probability: f64,
    /// Normalized post-measurement state of the remainder, or `None` when
    /// the outcome probability is below [`DEGENERATE_PROBABILITY`].
    pub state: Option<DensityMatrix>,
}

/// Probability `b = tr⟨ψ|ρ|ψ⟩` and the state `⟨ψ|ρ|ψ⟩ / b` left on the
/// remainder after the measured block is found in `probe`.
pub fn conditional_state(rho: &DensityMatrix, cut: &Cut, probe: &PureState) -> Result<Conditional> {
    check_cut(rho, cut)?;
    if probe.n_qubits() != cut.measured().len() {
        return Err(invalid(format!(
            "probe has {} qubits, measured block has {}",
            probe.n_qubits(),
            cut.measured().len()
        )));
    }
    let layout = BlockLayout::new(rho.n_qubits, cut.remainder(), cut.measured());
    let op = layout.contract_second(&rho.data, probe.amplitudes());
    let p = op.trace().re;
    if p < DEGENERATE_PROBABILITY {
        return Ok(Conditional {
            probability: 0.0,
            state: None,
        });
    }
    Ok(Conditional {
        probability: p,
        state: Some(DensityMatrix::from_trusted(cut.remainder().len(), op.unscale(p))),
    })
}

/// True iff `‖U†ρU − ρ‖_max ≤ 1e-9`.
pub fn is_invariant_under(rho: &DensityMatrix, u: &LocalUnitary) -> Result<bool> {
    let full = u.embed(rho.n_qubits)?;
    let rotated = full.adjoint() * &rho.data * &full;
    Ok(max_abs_diff(&rotated, &rho.data) <= INVARIANCE_TOL)
}

/// True iff relabelling qubit `q` as `perm[q]` leaves `ρ` unchanged within
/// the invariance tolerance. Works directly on indices, without building the
/// permutation matrix.
pub fn is_invariant_under_permutation(rho: &DensityMatrix, perm: &[usize]) -> Result<bool> {
    let n = rho.n_qubits;
    let mut seen = perm.to_vec();
    seen.sort_unstable();
    if perm.len() != n || seen.iter().enumerate().any(|(i, &q)| i != q) {
        return Err(invalid(format!("{perm:?} is not a permutation of {n} qubits")));
    }
    let dim = rho.dim();
    let map: Vec<usize> = (0..dim)
        .map(|x| {
            (0..n)
                .map(|q| ((x >> (n - 1 - q)) & 1) << (n - 1 - perm[q]))
                .sum()
        })
        .collect();
    for x in 0..dim {
        for y in 0..dim {
            if (rho.data[(map[x], map[y])] - rho.data[(x, y)]).norm() > INVARIANCE_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Applies a 2×2 operator to qubit `q` from the left: `M ← (1⊗op⊗1) M`.
pub(crate) fn apply_left(m: &mut CMatrix, n_qubits: usize, q: usize, op: &[[Complex64; 2]; 2]) {
    let stride = 1 << (n_qubits - 1 - q);
    let dim = m.nrows();
    for col in 0..m.ncols() {
        for x in 0..dim {
            if x & stride != 0 {
                continue;
            }
            let (a, b) = (m[(x, col)], m[(x | stride, col)]);
            m[(x, col)] = op[0][0] * a + op[0][1] * b;
            m[(x | stride, col)] = op[1][0] * a + op[1][1] * b;
        }
    }
}

/// Applies a 2×2 operator to qubit `q` from the right: `M ← M (1⊗op⊗1)`.
pub(crate) fn apply_right(m: &mut CMatrix, n_qubits: usize, q: usize, op: &[[Complex64; 2]; 2]) {
    let stride = 1 << (n_qubits - 1 - q);
    let dim = m.ncols();
    for y in 0..dim {
        if y & stride != 0 {
            continue;
        }
        for row in 0..m.nrows() {
            let (a, b) = (m[(row, y)], m[(row, y | stride)]);
            m[(row, y)] = a * op[0][0] + b * op[1][0];
            m[(row, y | stride)] = a * op[0][1] + b * op[1][1];
        }
    }
}

pub(crate) fn adjoint2(op: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [op[0][0].conj(), op[1][0].conj()],
        [op[0][1].conj(), op[1][1].conj()],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(2, DVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)])).unwrap()
    }

    fn ghz3() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = DVector::zeros(8);
        v[0] = c(s);
        v[7] = c(s);
        PureState::new(3, v).unwrap().projector()
    }

    fn qubit(p0: f64, coh: Complex64) -> DensityMatrix {
        let m = CMatrix::from_row_slice(2, 2, &[c(p0), coh, coh.conj(), c(1.0 - p0)]);
        DensityMatrix::new(1, m).unwrap()
    }

    #[test]
    fn tensor_of_mixed_qubits_is_quarter_identity() {
        let half = DensityMatrix::maximally_mixed(1).unwrap();
        let t = tensor(&half, &half).unwrap();
        assert_eq!(t.n_qubits(), 2);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(t.matrix()[(i, j)].re, want, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn tensor_of_basis_projectors() {
        let zero = PureState::basis(1, 0).unwrap().projector();
        let one = PureState::basis(1, 1).unwrap().projector();
        let t = tensor(&zero, &one).unwrap();
        let want = PureState::basis(2, 0b01).unwrap().projector();
        assert_eq!(t.max_abs_diff(&want), 0.0);
    }

    #[test]
    fn partial_trace_examples() {
        let r = partial_trace(&bell().projector(), &[0]).unwrap();
        assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(1).unwrap()) < 1e-15);

        let a = qubit(0.3, Complex64::new(0.1, 0.2));
        let b = qubit(0.9, c(0.05));
        let ab = tensor(&a, &b).unwrap();
        assert!(partial_trace(&ab, &[0]).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&ab, &[1]).unwrap().max_abs_diff(&b) < 1e-15);

        let r = partial_trace(&ghz3(), &[0, 1]).unwrap();
        let want = DensityMatrix::diagonal(2, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(r.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let g = ghz3();
        assert!(matches!(partial_trace(&g, &[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(partial_trace(&g, &[3]), Err(Error::InvalidArgument(_))));
        assert!(matches!(partial_trace(&g, &[1, 1]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn partial_trace_keeps_qubit_order() {
        // |0⟩⊗|+⟩⊗|1⟩, keep {2, 0} must give |0⟩⊗|1⟩ (ascending order).
        let zero = PureState::basis(1, 0).unwrap().projector();
        let one = PureState::basis(1, 1).unwrap().projector();
        let plus = qubit(0.5, c(0.5));
        let s = tensor(&tensor(&zero, &plus).unwrap(), &one).unwrap();
        let r = partial_trace(&s, &[2, 0]).unwrap();
        assert!(r.max_abs_diff(&tensor(&zero, &one).unwrap()) < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let half = DensityMatrix::maximally_mixed(1).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&half).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(von_neumann_entropy(&ghz3()).unwrap(), 0.0, epsilon = 1e-12);
        // Frozen from a direct evaluation of ¾log2(4/3) + ¼log2(4).
        let d = DensityMatrix::diagonal(1, &[0.75, 0.25]).unwrap();
        assert_abs_diff_eq!(
            von_neumann_entropy(&d).unwrap(),
            0.8112781244591328,
            epsilon = 1e-14
        );
    }

    #[test]
    fn construction_rejects_invalid_matrices() {
        let neg = CMatrix::from_diagonal(&DVector::from_vec(vec![c(1.1), c(-0.1)]));
        assert!(matches!(
            DensityMatrix::new(1, neg),
            Err(Error::InvariantViolation(_))
        ));
        let non_herm = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(matches!(
            DensityMatrix::new(1, non_herm),
            Err(Error::InvariantViolation(_))
        ));
        let bad_trace = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(1, bad_trace).is_err());
        assert!(matches!(
            DensityMatrix::maximally_mixed(13),
            Err(Error::SizeCap { n: 13, .. })
        ));
    }

    #[test]
    fn total_and_mutual_information() {
        let a = qubit(1.0, c(0.0));
        let b = qubit(0.5, c(0.5));
        let prod = tensor(&tensor(&a, &b).unwrap(), &b).unwrap();
        assert_abs_diff_eq!(total_correlations(&prod).unwrap(), 0.0, epsilon = 1e-12);
        let cut = Cut::last(3, 1).unwrap();
        assert_abs_diff_eq!(mutual_information(&prod, &cut).unwrap(), 0.0, epsilon = 1e-12);

        let g = ghz3();
        assert_abs_diff_eq!(total_correlations(&g).unwrap(), 3.0, epsilon = 1e-12);
        for k in 1..3 {
            let cut = Cut::last(3, k).unwrap();
            assert_abs_diff_eq!(mutual_information(&g, &cut).unwrap(), 2.0, epsilon = 1e-12);
        }
        assert!(total_correlations(&a).is_err());
    }

    #[test]
    fn conditional_state_examples() {
        let cut = Cut::new(2, &[1]).unwrap();
        let probe = PureState::basis(1, 0).unwrap();
        let out = conditional_state(&bell().projector(), &cut, &probe).unwrap();
        assert_abs_diff_eq!(out.probability, 0.5, epsilon = 1e-15);
        let zero = PureState::basis(1, 0).unwrap().projector();
        assert!(out.state.unwrap().max_abs_diff(&zero) < 1e-15);

        // Product a⊗b measured on qubit 0 leaves b behind.
        let a = qubit(0.3, Complex64::new(0.1, -0.2));
        let b = qubit(0.8, c(0.1));
        let ab = tensor(&a, &b).unwrap();
        let cut = Cut::new(2, &[0]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let probe = PureState::new(1, DVector::from_vec(vec![c(s), Complex64::new(0.0, s)])).unwrap();
        let out = conditional_state(&ab, &cut, &probe).unwrap();
        let expect = (probe.amplitudes().adjoint() * a.matrix() * probe.amplitudes())[(0, 0)].re;
        assert_abs_diff_eq!(out.probability, expect, epsilon = 1e-15);
        assert!(out.state.unwrap().max_abs_diff(&b) < 1e-14);

        // Zero-probability outcome is flagged.
        let one = PureState::basis(1, 1).unwrap();
        let z = tensor(&zero, &zero).unwrap();
        let out = conditional_state(&z, &Cut::new(2, &[1]).unwrap(), &one).unwrap();
        assert_eq!(out.probability, 0.0);
        assert!(out.state.is_none());

        assert!(conditional_state(&z, &Cut::new(2, &[1]).unwrap(), &bell()).is_err());
    }

    #[test]
    fn invariance_checks() {
        let g = ghz3();
        let id = LocalUnitary::new(vec![1], CMatrix::identity(2, 2)).unwrap();
        assert!(is_invariant_under(&g, &id).unwrap());
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let flip = LocalUnitary::new(vec![0], x).unwrap();
        assert!(!is_invariant_under(&g, &flip).unwrap());
        let not_unitary = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(LocalUnitary::new(vec![0], not_unitary).is_err());
    }

    #[test]
    fn permutation_check_agrees_with_unitary_check() {
        let a = qubit(0.3, Complex64::new(0.1, 0.2));
        let b = qubit(0.9, c(0.05));
        let aab = tensor(&tensor(&a, &a).unwrap(), &b).unwrap();
        assert!(is_invariant_under_permutation(&aab, &[1, 0, 2]).unwrap());
        assert!(!is_invariant_under_permutation(&aab, &[0, 2, 1]).unwrap());
        assert!(is_invariant_under_permutation(&aab, &[0, 0, 1]).is_err());
        let swap = CMatrix::from_fn(4, 4, |i, j| {
            let swapped = ((j & 1) << 1) | (j >> 1);
            if i == swapped { c(1.0) } else { c(0.0) }
        });
        let u = LocalUnitary::new(vec![1, 2], swap).unwrap();
        assert!(!is_invariant_under(&aab, &u).unwrap());
        assert!(is_invariant_under(&tensor(&a, &tensor(&b, &b).unwrap()).unwrap(), &u).unwrap());
    }

    #[test]
    fn embed_matches_kronecker() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = CMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)]);
        let u = LocalUnitary::new(vec![1], had.clone()).unwrap();
        let want = CMatrix::identity(2, 2).kronecker(&had).kronecker(&CMatrix::identity(2, 2));
        assert_eq!(max_abs_diff(&u.embed(3).unwrap(), &want), 0.0);
    }

    #[test]
    fn single_qubit_application_matches_embedding() {
        let op = [
            [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)],
            [Complex64::new(0.5, 0.0), Complex64::new(0.1, -0.7)],
        ];
        let opm = CMatrix::from_row_slice(2, 2, &[op[0][0], op[0][1], op[1][0], op[1][1]]);
        let m = ghz3().into_matrix();
        for q in 0..3 {
            let mut full = CMatrix::identity(1, 1);
            for p in 0..3 {
                full = full.kronecker(&if p == q { opm.clone() } else { CMatrix::identity(2, 2) });
            }
            let mut l = m.clone();
            apply_left(&mut l, 3, q, &op);
            assert!(max_abs_diff(&l, &(&full * &m)) < 1e-15);
            let mut r = m.clone();
            apply_right(&mut r, 3, q, &op);
            assert!(max_abs_diff(&r, &(&m * &full)) < 1e-15);
        }
    }
}
