//! Independent numerical oracles for the closed forms of `fridge-core`.
//!
//! Dense density matrices, explicit unitaries and bath resets replay each
//! protocol step by step. Haar sampling and degenerate-subspace sweeps probe
//! optimality claims, and [`verify`] bundles every comparison into one suite.

pub mod dense;
pub mod gradient;
pub mod haar;
pub mod simulate;
pub mod sweep;
pub mod verify;

pub use dense::{apply_and_measure, build_thermal_state, DenseState, UnitaryOp, UnitaryTag};
pub use haar::{haar_pareto_sweep, DominanceReport};
pub use sweep::degenerate_subspace_sweep;
pub use gradient::thermalization_gradient_check;
pub use verify::{run_suite, Check, VerifyOptions, VerifyReport};
