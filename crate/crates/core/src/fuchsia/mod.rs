//! Direct numerics for the Fuchsian system
//! Φ' = (σ₃/2 + A₀/z + A_t/(z−t)) Φ: loop monodromies, connection
//! coefficients, the isomonodromic flow and the scalar reduction.

pub mod connection;
pub mod hamiltonian;
pub mod matrix;
pub mod monodromy;
pub mod ode;
pub mod scalar;
pub mod schlesinger;
pub mod system;
mod tableau;

pub use connection::{connection, connection_offdiag, Connection, FrobeniusSeries};
pub use hamiltonian::{hamiltonian, hamiltonian_check, hamiltonian_derivative};
pub use matrix::Matrix2C;
pub use monodromy::{
    circle, integrate_path, monodromy_pair, monodromy_pair_with, LoopGeometry, MonodromyPair,
};
pub use ode::{integrate, OdeOptions, OdeStats};
pub use scalar::{
    apparent_singularity_residual, pv_y, q_direct, reduce_to_scalar, PvY, ScalarReduction,
};
pub use schlesinger::{flow_to, schlesinger_flow};
pub use system::{system_from_rabi, SystemSpec};
