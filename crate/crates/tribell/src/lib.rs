//! Three-qubit spin states from three-body fermion decays, entanglement
//! measures, and Bell-type nonlocality observables.
//!
//! A massive fermion decaying into three massless spin-1/2 particles through
//! a scalar, vector or tensor four-fermion contact interaction leaves the
//! daughters in a pure three-qubit spin state determined by two decay angles
//! and the parent polarization. This crate constructs those states and
//! analyzes them:
//!
//! - [`kinematics`]: physical-region checks and momentum solutions.
//! - [`states`]: spin-state construction, density matrices, partial traces
//!   and the Pauli correlation tensor.
//! - [`entanglement`]: pairwise and one-to-other concurrences, three-tangle
//!   and the concurrence-triangle measure F3.
//! - [`bell`]: evaluation and axis optimization of the Mermin, Svetlichny
//!   and tight 4x4x2 observables.
//! - [`nosignal`]: exact no-signalling boxes (PR boxes and their tripartite
//!   extension) and Bell functionals on probability tables.
//! - [`scan`]: phase-space grids and spin sweeps with CSV/JSON output.
//!
//! The `examples/` directory holds one runnable program per capability;
//! `tribell-cli` wraps the same entry points as a command-line tool.

// index loops mirror the tensor notation throughout
#![allow(clippy::needless_range_loop)]

pub mod bell;
pub mod entanglement;
pub mod kinematics;
mod la3;
pub mod nosignal;
pub mod scan;
pub mod states;

pub use bell::{
    evaluate, optimize_b442, optimize_b442_sym, optimize_mermin, optimize_svetlichny,
    reconstruct_b442_axes, AxisSet, BellError, ObservableKind, OptResult, OptimizerSettings,
    RoleAssignment,
};
pub use entanglement::{
    concurrence_one_other, concurrence_pair, f3, report, three_tangle, EntanglementReport, Pair,
};
pub use kinematics::{
    physical_region, solve_momenta, DecayAngles, KinematicsError, MomentumTriple,
};
pub use la3::{Mat3, Vec3};
pub use scan::{
    run_point, run_scan2d, run_spin_sweep, Interaction, ObservableSelection, RowStatus, ScanConfig,
    ScanError, ScanRow, SpinSpec, StateRecipe,
};
pub use states::{
    scalar_state, tensor_state, vector_state, CorrelationTensor, DensityMatrix, Party,
    QubitPermutation, RotAxis, ScalarCouplings, SpinDirection, SpinState, StateError, StateOrigin,
    TensorCouplings, VectorCouplings,
};
