//! Closed-form theory of minimal quantum refrigerators.
//!
//! A target qubit of gap `E` is cooled by a small machine (one or two qubits)
//! either with energy-conserving unitaries powered by a hot bath
//! (incoherent control) or with arbitrary unitaries powered by a battery
//! (coherent control). Everything here is a pure closed-form evaluator; the
//! dense density-matrix cross-checks live in the `fridge-oracle` crate.
//!
//! Conventions: `k_B = ħ = 1`, ground energies are zero, and the product
//! basis `|a b c⟩` is indexed as `4a + 2b + c` with the target most
//! significant.

pub mod crossing;
pub mod curves;
pub mod error;
pub mod ladder;
pub mod majorization;
pub mod protocols;
pub mod thermal;
pub mod virtual_qubit;

pub use error::{FridgeError, Result};
pub use thermal::{
    boltzmann_population, resource_free_energy, temperature_from_population, MachineSpec,
    Population, QubitSpec, Temperature, WorkCost,
};
