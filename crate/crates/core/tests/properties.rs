use proptest::prelude::*;
use symcorr_core::*;

fn hermitian_psd(n: usize, entries: &[(f64, f64)]) -> DensityMatrix {
    let d = 1 << n;
    let a = CMatrix::from_fn(d, d, |i, j| {
        let (re, im) = entries[(i * d + j) % entries.len()];
        Complex64::new(re + 0.01 * (i as f64 + 1.0), im - 0.02 * j as f64)
    });
    let m = &a * a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(n, m.unscale(tr)).unwrap()
}

fn qubit_unitary(theta: f64, phi: f64, lambda: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            -Complex64::from_polar(s, lambda),
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, phi + lambda),
        ],
    )
}

fn entries() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_is_unitarily_invariant(e in entries(), t in 0.0..3.0f64, p in 0.0..6.0f64, l in 0.0..6.0f64) {
        let rho = hermitian_psd(3, &e);
        let u = LocalUnitary::new(vec![1], qubit_unitary(t, p, l)).unwrap();
        let rotated = rho.conjugate_by(&u.embed(3).unwrap());
        let (a, b) = (von_neumann_entropy(&rho).unwrap(), von_neumann_entropy(&rotated).unwrap());
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn partial_traces_compose(e in entries()) {
        let rho = hermitian_psd(3, &e);
        let direct = partial_trace(&rho, &[2]).unwrap();
        let staged = partial_trace(&partial_trace(&rho, &[0, 2]).unwrap(), &[1]).unwrap();
        prop_assert!(direct.max_abs_diff(&staged) < 1e-12);
    }

    #[test]
    fn mutual_information_ignores_labels(e in entries()) {
        let rho = hermitian_psd(3, &e);
        let cut = Cut::new(3, &[0, 2]).unwrap();
        let a = mutual_information(&rho, &cut).unwrap();
        let b = mutual_information(&rho, &cut.swapped()).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!(a >= -1e-10);
    }

    #[test]
    fn channels_keep_states_valid(e in entries(), r in 0.0..=1.0f64) {
        let rho = hermitian_psd(3, &e);
        for spec in [ChannelSpec::amplitude_damping(r).unwrap(), ChannelSpec::phase_damping(r).unwrap()] {
            let out = apply_local_channel(&rho, &spec).unwrap();
            prop_assert!(DensityMatrix::new(3, out.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn discord_stays_between_zero_and_mutual_information(p0 in 0.0..=1.0f64, a in 0.0..=std::f64::consts::FRAC_1_SQRT_2, r in 0.0..=1.0f64) {
        for rho in [thermo_state(3, p0).unwrap(), ghz_ad_closed(3, a, r).unwrap(), ghz_pd_closed(4, a, r).unwrap()] {
            let report = genuine_correlations(&rho).unwrap();
            for c in &report.per_cut {
                prop_assert!(c.discord >= -1e-9 && c.discord <= c.mutual_info + 1e-9);
                prop_assert!((c.discord + c.classical - c.mutual_info).abs() < 1e-12);
            }
            prop_assert!(global_discord(&rho, Mode::Symmetric).unwrap().value >= -1e-9);
        }
    }

    #[test]
    fn thermo_measures_are_mirror_symmetric(p0 in 0.0..=1.0f64) {
        let (a, b) = (thermo_state(4, p0).unwrap(), thermo_state(4, 1.0 - p0).unwrap());
        let (ga, gb) = (genuine_correlations(&a).unwrap(), genuine_correlations(&b).unwrap());
        prop_assert!((ga.quantum - gb.quantum).abs() < 1e-9);
        prop_assert!((ga.total - gb.total).abs() < 1e-9);
        let (g1, g2) = (
            global_discord(&a, Mode::Symmetric).unwrap().value,
            global_discord(&b, Mode::Symmetric).unwrap().value,
        );
        prop_assert!((g1 - g2).abs() < 1e-9);
    }

    #[test]
    fn svetlichny_value_is_periodic(a in 0.0..=std::f64::consts::FRAC_1_SQRT_2, r in 0.0..=1.0f64, angles in prop::collection::vec(0.0..6.3f64, 6)) {
        let rho = ghz_ad_closed(3, a, r).unwrap();
        let base: Vec<[f64; 2]> = angles.chunks(2).map(|c| [c[0], c[1]]).collect();
        let mut shifted = base.clone();
        shifted[1][0] += std::f64::consts::TAU;
        let v1 = svetlichny_value(&rho, &SettingsTable::new(base)).unwrap();
        let v2 = svetlichny_value(&rho, &SettingsTable::new(shifted)).unwrap();
        prop_assert!((v1 - v2).abs() < 1e-12);
        prop_assert!(v1.abs() <= nonlocality::quantum_max(3) + 1e-12);
    }
}

#[test]
fn same_size_cuts_agree() {
    let rho = ghz_ad_closed(4, 0.55, 0.35).unwrap();
    let reference = Cut::last(4, 2).unwrap();
    let d0 = bipartite_discord(&rho, &reference, Mode::Symmetric).unwrap().value;
    let m0 = mutual_information(&rho, &reference).unwrap();
    for measured in [[0, 1], [0, 2], [1, 3], [0, 3]] {
        let cut = Cut::new(4, &measured).unwrap();
        let d = bipartite_discord(&rho, &cut, Mode::Symmetric).unwrap().value;
        assert!((d - d0).abs() < 1e-9);
        assert!((mutual_information(&rho, &cut).unwrap() - m0).abs() < 1e-9);
    }
}
