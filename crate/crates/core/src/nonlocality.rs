//! Svetlichny-type Bell expressions for `n` parties with two equatorial
//! settings each.
//!
//! Party `j` measures `cos θ σ_x + sin θ σ_y` with `θ = θ_j^1` or `θ_j^2`.
//! The expression is built from `m_1 = o_1`, `M_1 = O_1` and
//!
//! ```text
//! m_j = ½ m_{j-1}(o_j + O_j) + ½ M_{j-1}(o_j − O_j)
//! M_j = ½ M_{j-1}(o_j + O_j) + ½ m_{j-1}(O_j − o_j)
//! ```
//!
//! and equals `m_n` for even `n`, `(m_n + M_n)/2` for odd `n`. Local hidden
//! variables keep it at or below 1.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::ChannelKind;
use crate::error::{invalid, Error, Result};
use crate::qstate::DensityMatrix;
use crate::states::{ghz_ad_closed, ghz_pd_closed};

/// Coherences `ρ_{x, x̄}` below this count as absent when deciding whether a
/// state has GHZ form.
pub const GHZ_FORM_TOL: f64 = 1e-12;
/// Random starts of the generic settings search.
pub const MULTI_STARTS: usize = 64;
/// Largest register the generic settings search accepts.
pub const SEARCH_MAX_QUBITS: usize = 10;
const SEARCH_SEED: u64 = 0x5e77;
const MAX_SWEEPS: usize = 500;

/// The expression as a sum of `2^n` monomials with weights
/// `numerator / denominator`.
///
/// Monomial `q` picks setting 2 for party `j` when bit `n−1−j` of `q` is
/// set, so party 0 is the most significant bit, as for qubit indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvetlichnyExpansion {
    n: usize,
    numerators: Vec<i64>,
    denominator: u64,
}

impl SvetlichnyExpansion {
    /// Expands the recursion with exact integer arithmetic.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("the Svetlichny expression needs at least two parties"));
        }
        if n > 62 {
            return Err(invalid(format!("{n} parties overflow the weight denominator")));
        }
        // Numerators over a common denominator 2^(j−1) after party j.
        let mut m = vec![1i64, 0];
        let mut big_m = vec![0i64, 1];
        for _ in 1..n {
            let len = m.len() * 2;
            let (mut m2, mut big_m2) = (vec![0i64; len], vec![0i64; len]);
            for q in 0..m.len() {
                let (a, b) = (m[q], big_m[q]);
                m2[q << 1] = a + b;
                m2[(q << 1) | 1] = a - b;
                big_m2[q << 1] = b - a;
                big_m2[(q << 1) | 1] = b + a;
            }
            m = m2;
            big_m = big_m2;
        }
        let (mut numerators, mut denominator) = if n.is_multiple_of(2) {
            (m, 1u64 << (n - 1))
        } else {
            (m.iter().zip(&big_m).map(|(a, b)| a + b).collect(), 1u64 << n)
        };
        let g = numerators.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs()));
        let g = gcd(g, denominator);
        if g > 1 {
            numerators.iter_mut().for_each(|x| *x /= g as i64);
            denominator /= g;
        }
        Ok(Self {
            n,
            numerators,
            denominator,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn numerator(&self, q: usize) -> i64 {
        self.numerators[q]
    }

    pub fn weight(&self, q: usize) -> f64 {
        self.numerators[q] as f64 / self.denominator as f64
    }

    /// Nonzero monomials as `(q, weight)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.numerators
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(q, &c)| (q, c as f64 / self.denominator as f64))
    }

    /// Value for given per-party outcomes `(o_j, O_j)`.
    pub fn evaluate(&self, outcomes: &[(f64, f64)]) -> Result<f64> {
        if outcomes.len() != self.n {
            return Err(invalid(format!(
                "{} outcome pairs for {} parties",
                outcomes.len(),
                self.n
            )));
        }
        Ok(self
            .terms()
            .map(|(q, w)| {
                w * (0..self.n)
                    .map(|j| {
                        let (o, big_o) = outcomes[j];
                        if (q >> (self.n - 1 - j)) & 1 == 0 {
                            o
                        } else {
                            big_o
                        }
                    })
                    .product::<f64>()
            })
            .sum())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for SvetlichnyExpansion {
    /// Renders e.g. `1/2 (+o1o2 +o1O2 +O1o2 -O1O2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{} (", self.denominator)?;
        let mut first = true;
        for (q, &c) in self.numerators.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let sign = if c > 0 { '+' } else { '-' };
            write!(f, "{sign}")?;
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            for j in 0..self.n {
                let name = if (q >> (self.n - 1 - j)) & 1 == 0 { 'o' } else { 'O' };
                write!(f, "{name}{}", j + 1)?;
            }
        }
        write!(f, ")")
    }
}

pub fn svetlichny_expansion(n: usize) -> Result<SvetlichnyExpansion> {
    SvetlichnyExpansion::new(n)
}

/// Two equatorial angles per party, stored in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingsTable {
    angles: Vec<[f64; 2]>,
}

impl SettingsTable {
    pub fn new(angles: Vec<[f64; 2]>) -> Self {
        Self {
            angles: angles
                .into_iter()
                .map(|[a, b]| [a.rem_euclid(TAU), b.rem_euclid(TAU)])
                .collect(),
        }
    }

    pub fn angles(&self) -> &[[f64; 2]] {
        &self.angles
    }

    pub fn n_parties(&self) -> usize {
        self.angles.len()
    }

    /// One angle per party for monomial `q`.
    pub fn choose(&self, q: usize) -> Vec<f64> {
        let n = self.angles.len();
        (0..n)
            .map(|j| self.angles[j][(q >> (n - 1 - j)) & 1])
            .collect()
    }
}

/// Nonzero `(x, ρ_{x̄, x})` pairs, the only entries the equatorial
/// observables see.
fn antidiagonal(rho: &DensityMatrix) -> Vec<(usize, Complex64)> {
    let d = rho.dim();
    let m = rho.matrix();
    (0..d)
        .map(|x| (x, m[(d - 1 - x, x)]))
        .filter(|(_, c)| c.norm() > 0.0)
        .collect()
}

/// `tr[(⊗_i (cos θ_i σ_x + sin θ_i σ_y)) ρ]`.
pub fn correlation(rho: &DensityMatrix, angles: &[f64]) -> Result<f64> {
    let n = rho.n_qubits();
    if angles.len() != n {
        return Err(invalid(format!("{} angles for {n} qubits", angles.len())));
    }
    let total: Complex64 = antidiagonal(rho)
        .into_iter()
        .map(|(x, c)| {
            let phase: f64 = (0..n)
                .map(|j| {
                    if (x >> (n - 1 - j)) & 1 == 0 {
                        -angles[j]
                    } else {
                        angles[j]
                    }
                })
                .sum();
            Complex64::from_polar(1.0, phase) * c
        })
        .sum();
    if total.im.abs() > 1e-10 {
        return Err(Error::InvariantViolation(format!(
            "correlation has imaginary part {}",
            total.im
        )));
    }
    Ok(total.re)
}

/// Evaluates the recursion directly on complex per-party values; linear in
/// the number of parties.
fn recursive_value(values: impl Iterator<Item = (Complex64, Complex64)>, n: usize) -> Complex64 {
    let mut values = values;
    let (mut m, mut big_m) = values.next().expect("at least one party");
    for (o, big_o) in values {
        let (sum, diff) = ((o + big_o) * 0.5, (o - big_o) * 0.5);
        (m, big_m) = (m * sum + big_m * diff, big_m * sum - m * diff);
    }
    if n.is_multiple_of(2) {
        m
    } else {
        (m + big_m) * 0.5
    }
}

/// Svetlichny objective over the antidiagonal of a state.
struct Objective {
    n: usize,
    entries: Vec<(usize, Complex64)>,
}

impl Objective {
    fn new(rho: &DensityMatrix) -> Self {
        Self {
            n: rho.n_qubits(),
            entries: antidiagonal(rho),
        }
    }

    /// `angles[2j + s]` is party `j`'s setting `s`.
    fn eval(&self, angles: &[f64]) -> f64 {
        let n = self.n;
        let units: Vec<Complex64> = angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        self.entries
            .iter()
            .map(|&(x, c)| {
                let per_party = (0..n).map(|j| {
                    let (a, b) = (units[2 * j], units[2 * j + 1]);
                    if (x >> (n - 1 - j)) & 1 == 0 {
                        (a.conj(), b.conj())
                    } else {
                        (a, b)
                    }
                });
                (recursive_value(per_party, n) * c).re
            })
            .sum()
    }
}

/// Value of the expression for `rho` at the given settings.
pub fn svetlichny_value(rho: &DensityMatrix, settings: &SettingsTable) -> Result<f64> {
    if settings.n_parties() != rho.n_qubits() {
        return Err(invalid(format!(
            "settings for {} parties, state has {} qubits",
            settings.n_parties(),
            rho.n_qubits()
        )));
    }
    let flat: Vec<f64> = settings.angles().iter().flatten().copied().collect();
    Ok(Objective::new(rho).eval(&flat))
}

/// Largest value and the settings reaching it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub value: f64,
    pub settings: SettingsTable,
    /// Whether the closed-form route for GHZ-form states was taken.
    pub closed_form: bool,
}

/// True when the only antidiagonal coherence is `ρ_{0, 2^n−1}`.
pub fn has_ghz_form(rho: &DensityMatrix) -> bool {
    let d = rho.dim();
    let m = rho.matrix();
    (1..d - 1).all(|x| m[(d - 1 - x, x)].norm() <= GHZ_FORM_TOL)
}

/// Correlations of a GHZ-form state are `2|c| cos(Σθ + arg c)` with
/// `c = ρ_{0, 2^n−1}`. With every party on `(0, π/2)` the expression
/// becomes `2|c| Re(e^{i arg c} S)`, `S = Σ_q w_q i^{|q|}`; shifting both of
/// party 0's angles by `−arg c − arg S` aligns the phases.
fn closed_form(rho: &DensityMatrix) -> Result<Violation> {
    let n = rho.n_qubits();
    let c = rho.matrix()[(0, rho.dim() - 1)];
    let i = Complex64::new(0.0, 1.0);
    let s = recursive_value(std::iter::repeat_n((Complex64::new(1.0, 0.0), i), n), n);
    let shift = if c.norm() > 0.0 { -c.arg() - s.arg() } else { 0.0 };
    let mut angles = vec![[0.0, FRAC_PI_2]; n];
    angles[0] = [shift, FRAC_PI_2 + shift];
    let settings = SettingsTable::new(angles);
    Ok(Violation {
        value: svetlichny_value(rho, &settings)?,
        settings,
        closed_form: true,
    })
}

/// Maximizes `A cos t + B sin t + C` for one coordinate; the objective has
/// exactly this form in every angle.
fn best_coordinate(f: &Objective, x: &mut [f64], k: usize) -> f64 {
    let mut at = |t: f64| {
        x[k] = t;
        f.eval(x)
    };
    let (f0, f1, f2) = (at(0.0), at(FRAC_PI_2), at(std::f64::consts::PI));
    let c = 0.5 * (f0 + f2);
    let (a, b) = (0.5 * (f0 - f2), f1 - c);
    x[k] = b.atan2(a);
    c + a.hypot(b)
}

/// Multi-start coordinate ascent over all `2n` angles.
pub fn search_violation(rho: &DensityMatrix) -> Result<Violation> {
    let n = rho.n_qubits();
    if n > SEARCH_MAX_QUBITS {
        return Err(Error::SizeCap {
            what: "generic Svetlichny settings search",
            n,
            cap: SEARCH_MAX_QUBITS,
        });
    }
    let f = Objective::new(rho);
    let results: Vec<(Vec<f64>, f64)> = (0..MULTI_STARTS)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
            rng.set_stream(r as u64);
            let mut x: Vec<f64> = (0..2 * n).map(|_| rng.random::<f64>() * TAU).collect();
            let mut value = f.eval(&x);
            for _ in 0..MAX_SWEEPS {
                let before = value;
                for k in 0..2 * n {
                    value = best_coordinate(&f, &mut x, k);
                }
                if value - before < 1e-14 {
                    break;
                }
            }
            (x, value)
        })
        .collect();
    let (x, value) = results
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1).then(std::cmp::Ordering::Greater))
        .expect("at least one start");
    Ok(Violation {
        value,
        settings: SettingsTable::new(x.chunks_exact(2).map(|c| [c[0], c[1]]).collect()),
        closed_form: false,
    })
}

/// Largest value of the expression over equatorial settings.
pub fn max_violation(rho: &DensityMatrix) -> Result<Violation> {
    if rho.n_qubits() < 2 {
        return Err(invalid("the Svetlichny expression needs at least two parties"));
    }
    if has_ghz_form(rho) {
        closed_form(rho)
    } else {
        search_violation(rho)
    }
}

/// Reference values for `n` parties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lhv: f64,
    pub quantum_max: f64,
    /// Values above which the state cannot be 1:(n−1) separable.
    pub separability_thresholds: Vec<f64>,
}

/// `√(2^{n−1})` for even `n`, `√(2^{n−2})` for odd `n`.
pub fn quantum_max(n: usize) -> f64 {
    let e = if n.is_multiple_of(2) { n - 1 } else { n - 2 };
    2f64.powf(e as f64 / 2.0)
}

pub fn bounds(n: usize) -> Result<Bounds> {
    if n < 2 {
        return Err(invalid("the Svetlichny expression needs at least two parties"));
    }
    let separability_thresholds = if n >= 4 {
        vec![2f64.powi(((n - 2) / 2) as i32)]
    } else {
        Vec::new()
    };
    Ok(Bounds {
        lhv: 1.0,
        quantum_max: quantum_max(n),
        separability_thresholds,
    })
}

/// Smallest damping rate at which the maximal violation of the damped GHZ
/// state drops to 1, located by bisection on [`max_violation`]. `None` when
/// the undamped state does not exceed 1.
pub fn violation_loss_rate(n: usize, alpha1: f64, kind: ChannelKind) -> Result<Option<f64>> {
    let value = |r: f64| -> Result<f64> {
        let rho = match kind {
            ChannelKind::AmplitudeDamping => ghz_ad_closed(n, alpha1, r)?,
            ChannelKind::PhaseDamping => ghz_pd_closed(n, alpha1, r)?,
        };
        Ok(max_violation(&rho)?.value)
    };
    if value(0.0)? <= 1.0 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if value(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
