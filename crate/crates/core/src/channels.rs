//! Identical single-qubit noise applied independently to every qubit.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::qstate::{adjoint2, apply_left, apply_right, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// `|1⟩` decays to `|0⟩` with probability `λ`.
    AmplitudeDamping,
    /// Coherences shrink by `√(1−γ)` per qubit; populations are untouched.
    PhaseDamping,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    rate: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(invalid(format!("damping rate {rate} outside [0, 1]")));
        }
        Ok(Self { kind, rate })
    }

    pub fn amplitude_damping(lambda: f64) -> Result<Self> {
        Self::new(ChannelKind::AmplitudeDamping, lambda)
    }

    pub fn phase_damping(gamma: f64) -> Result<Self> {
        Self::new(ChannelKind::PhaseDamping, gamma)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// The two Kraus operators, obtained from the system–environment maps
    /// `|0,0⟩ → |0,0⟩` and `|1,0⟩ → √(1−r)|1,0⟩ + √r|·,1⟩` by reading off the
    /// environment components.
    pub fn kraus(&self) -> [[[Complex64; 2]; 2]; 2] {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let keep = Complex64::new((1.0 - self.rate).sqrt(), 0.0);
        let jump = Complex64::new(self.rate.sqrt(), 0.0);
        let k0 = [[one, z], [z, keep]];
        let k1 = match self.kind {
            ChannelKind::AmplitudeDamping => [[z, jump], [z, z]],
            ChannelKind::PhaseDamping => [[z, z], [z, jump]],
        };
        [k0, k1]
    }
}

/// Applies the channel of `spec` to one qubit.
pub fn apply_to_qubit(rho: &DensityMatrix, spec: &ChannelSpec, qubit: usize) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if qubit >= n {
        return Err(invalid(format!("qubit {qubit} outside a {n}-qubit register")));
    }
    let mut out = crate::CMatrix::zeros(rho.dim(), rho.dim());
    for k in spec.kraus() {
        let mut term = rho.matrix().clone();
        apply_left(&mut term, n, qubit, &k);
        apply_right(&mut term, n, qubit, &adjoint2(&k));
        out += term;
    }
    Ok(DensityMatrix::from_trusted(n, out))
}

/// Applies the channel to every qubit in turn, `0` first.
pub fn apply_local_channel(rho: &DensityMatrix, spec: &ChannelSpec) -> Result<DensityMatrix> {
    apply_in_order(rho, spec, 0..rho.n_qubits())
}

/// Same as [`apply_local_channel`] with an explicit qubit order.
pub fn apply_in_order(
    rho: &DensityMatrix,
    spec: &ChannelSpec,
    order: impl IntoIterator<Item = usize>,
) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    for q in order {
        out = apply_to_qubit(&out, spec, q)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PureState;
    use crate::states::{ghz_ad_closed, ghz_pd_closed, ghz_state, thermo_state};

    fn random_state(n: usize, seed: u64) -> DensityMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = 1 << n;
        let a = crate::CMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let m = &a * a.adjoint();
        let tr = m.trace();
        DensityMatrix::new(n, m.unscale(tr.re)).unwrap()
    }

    #[test]
    fn kraus_sets_are_complete() {
        for kind in [ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping] {
            for r in [0.0, 0.2, 0.77, 1.0] {
                let ks = ChannelSpec::new(kind, r).unwrap().kraus();
                for i in 0..2 {
                    for j in 0..2 {
                        let s: Complex64 = ks
                            .iter()
                            .map(|k| k[0][i].conj() * k[0][j] + k[1][i].conj() * k[1][j])
                            .sum();
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((s - Complex64::new(want, 0.0)).norm() < 1e-12);
                    }
                }
            }
        }
        assert!(ChannelSpec::amplitude_damping(1.01).is_err());
        assert!(ChannelSpec::phase_damping(-0.01).is_err());
    }

    #[test]
    fn full_relaxation_reaches_ground_state() {
        let rho = random_state(3, 4);
        let out = apply_local_channel(&rho, &ChannelSpec::amplitude_damping(1.0).unwrap()).unwrap();
        let ground = PureState::basis(3, 0).unwrap().projector();
        assert!(out.max_abs_diff(&ground) < 1e-12);
    }

    #[test]
    fn phase_damping_keeps_populations() {
        let rho = random_state(3, 9);
        for g in [0.1, 0.5, 1.0] {
            let out = apply_local_channel(&rho, &ChannelSpec::phase_damping(g).unwrap()).unwrap();
            for i in 0..8 {
                assert!((out.matrix()[(i, i)] - rho.matrix()[(i, i)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn kraus_matches_closed_forms() {
        for n in 2..=5 {
            for &a in &[0.0, 0.3, std::f64::consts::FRAC_1_SQRT_2] {
                let ghz = ghz_state(n, a).unwrap().projector();
                for i in 0..=10 {
                    let r = i as f64 / 10.0;
                    let ad = apply_local_channel(&ghz, &ChannelSpec::amplitude_damping(r).unwrap()).unwrap();
                    assert!(ad.max_abs_diff(&ghz_ad_closed(n, a, r).unwrap()) < 1e-12);
                    let pd = apply_local_channel(&ghz, &ChannelSpec::phase_damping(r).unwrap()).unwrap();
                    assert!(pd.max_abs_diff(&ghz_pd_closed(n, a, r).unwrap()) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn output_is_a_valid_state() {
        for seed in 0..5 {
            let rho = random_state(3, seed);
            for spec in [
                ChannelSpec::amplitude_damping(0.37).unwrap(),
                ChannelSpec::phase_damping(0.61).unwrap(),
            ] {
                let out = apply_local_channel(&rho, &spec).unwrap();
                DensityMatrix::new(3, out.matrix().clone()).unwrap();
            }
        }
    }

    #[test]
    fn order_of_qubits_is_irrelevant() {
        let rho = thermo_state(4, 0.3).unwrap();
        let rho = apply_to_qubit(&rho, &ChannelSpec::phase_damping(0.4).unwrap(), 2).unwrap();
        let spec = ChannelSpec::amplitude_damping(0.23).unwrap();
        let a = apply_in_order(&rho, &spec, [0, 1, 2, 3]).unwrap();
        let b = apply_in_order(&rho, &spec, [3, 1, 0, 2]).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn amplitude_damping_composes() {
        let rho = random_state(1, 11);
        let (l1, l2) = (0.3, 0.45);
        let twice = apply_local_channel(
            &apply_local_channel(&rho, &ChannelSpec::amplitude_damping(l1).unwrap()).unwrap(),
            &ChannelSpec::amplitude_damping(l2).unwrap(),
        )
        .unwrap();
        let once = apply_local_channel(
            &rho,
            &ChannelSpec::amplitude_damping(1.0 - (1.0 - l1) * (1.0 - l2)).unwrap(),
        )
        .unwrap();
        assert!(twice.max_abs_diff(&once) < 1e-12);
    }
}
