//! Inputs shared by the benchmarks.

use std::f64::consts::FRAC_1_SQRT_2;

use symcorr_core::{ghz_ad_closed, ghz_state, thermo_state, DensityMatrix};

pub fn thermo(n: usize) -> DensityMatrix {
    thermo_state(n, 0.8).expect("valid parameters")
}

pub fn damped_ghz(n: usize) -> DensityMatrix {
    ghz_ad_closed(n, 0.6, 0.25).expect("valid parameters")
}

pub fn pure_ghz(n: usize) -> DensityMatrix {
    ghz_state(n, FRAC_1_SQRT_2).expect("valid parameters").projector()
}
