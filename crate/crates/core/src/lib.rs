//! Multipartite correlations of permutation-symmetric n-qubit states.
//!
//! The crate computes, for dense n-qubit density matrices:
//!
//! * genuine total, quantum and classical correlations (minimum over
//!   bipartite cuts of the mutual information, and its discord/classical
//!   split) in [`genuine`],
//! * global discord under collective local projective measurements in
//!   [`global`],
//! * the generalized Svetlichny polynomial and its maximal violation in
//!   [`nonlocality`].
//!
//! For permutation-invariant states the measurement optimizations collapse
//! to one (discord) or two (global discord) angles. Every reduced search
//! has a brute-force counterpart in [`oracle`] that searches the full
//! measurement space instead.
//!
//! Conventions: qubit 0 is the most significant bit of a computational
//! basis index, and all entropies are in bits.

pub mod channels;
pub mod error;
pub mod genuine;
pub mod global;
pub mod nonlocality;
pub mod optimize;
pub mod oracle;
pub mod qstate;
pub mod states;

pub use error::{Error, Result};
pub use genuine::{
    bipartite_discord, genuine_correlations, koashi_winter_discord, CutReport, GenuineReport,
    MeasuredSide,
};
pub use global::{
    dephase_in_rotated_basis, global_discord, global_discord_thermo_analytic, GlobalDiscord,
    RotationAngles,
};
pub use nonlocality::{
    bounds, correlation, max_violation, svetlichny_expansion, svetlichny_value, Bounds,
    SettingsTable, SvetlichnyExpansion, Violation,
};
pub use oracle::OracleConfig;
pub use qstate::{
    mutual_information, partial_trace, tensor, total_correlations, von_neumann_entropy, Cut,
    DensityMatrix, LocalUnitary, PureState, MAX_QUBITS,
};
pub use states::{
    ghz_ad_closed, ghz_pd_closed, ghz_state, symmetric_basis, symmetry_generator, thermo_state,
    GhzParams, MeasurementBasis, Symmetry,
};
pub use channels::{apply_local_channel, ChannelKind, ChannelSpec};

pub use num_complex::Complex64;

/// Dense complex matrix used for operators and density matrices.
pub type CMatrix = nalgebra::DMatrix<Complex64>;

/// Whether a measurement search may rely on permutation symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Single-angle (discord) or single-axis (global discord) search; the
    /// state must be invariant under qubit permutations.
    Symmetric,
    /// Unrestricted brute-force search, delegated to [`oracle`].
    General,
}
