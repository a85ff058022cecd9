//! kerrcat: exact simulation of coherent-superposition (cat) state
//! generation with weak cross-Kerr nonlinearities.
//!
//! States are finite superpositions of multimode coherent states tensored
//! with photon polarization/path qubits, so the strong-field regime
//! (|alpha| ~ 100) costs the same handful of branches as the weak one. Every
//! claim the pipelines make is cross-checked against an independent
//! truncated-Fock brute force at small amplitude.
//!
//! Module map:
//!
//! * [`mod@overlap`] - log-domain coherent overlap algebra
//! * [`state`] - layouts, branches, [`state::PureState`] and its Gram-sum
//!   operations
//! * [`mixed`] - Hermitian dyad operators and the field partial trace
//! * [`elements`] - beam splitters, cross-Kerr media, rotators, PBSs,
//!   Born-rule measurement
//! * [`protocols`] - the single-photon and twin-photon generation pipelines,
//!   the asymmetric-Kerr variant, cat construction
//! * [`fock`] - the truncated-Fock oracle
//! * [`wigner`] - displaced-parity Wigner evaluation and grids
//! * [`sweep`] - parameter sweeps with CSV export
//! * [`serial`] - JSON documents
//! * [`cliutil`] - CLI literal/range parsing

// `!(x > floor)` is used deliberately throughout: NaN must take the error
// path, which `x <= floor` would not guarantee.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cliutil;
pub mod elements;
pub mod error;
pub mod fock;
pub mod mixed;
pub mod overlap;
pub mod protocols;
pub mod serial;
pub mod state;
pub mod sweep;
pub mod wigner;

pub use elements::{
    apply_bs, apply_cross_kerr, apply_pbs, apply_pbs_merge, apply_pol_rotation,
    detector_pattern, measure_polarization, BsConvention, DetectorPattern,
};
pub use error::{Error, Result};
pub use mixed::{BranchKet, MixedOperator, MixedTerm};
pub use overlap::{overlap, overlap_exponent};
pub use protocols::{
    approximation_fidelity, build_cat, run_protocol1, run_protocol1_imperfect, run_protocol2,
    sample_protocol1, sample_protocol2, CatSpec, ImperfectionRun, Parity, ProtocolResult,
};
pub use state::{
    Branch, KerrSetting, ModeLayout, PhotonConfig, PhotonMode, Polarization, PureState,
};
pub use wigner::{wigner_grid, wigner_point, StateRef, WignerGrid};

/// Crate-wide complex scalar.
pub type Complex = num_complex::Complex64;
