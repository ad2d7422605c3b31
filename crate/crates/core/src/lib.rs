//! Quantum Rabi spectrum by the isomonodromy method.
//!
//! The spectral problem of H = a†a + Δσᶻ + gσˣ(a† + a) maps to a 2×2
//! Fuchsian system with regular singularities at 0 and t = −4g² and an
//! irregular one at infinity. Levels are the energies for which the Painlevé V
//! tau function with composite monodromy σ_n = 2(E + g² + n) meets two initial
//! conditions at t. This crate evaluates that tau function as a sum over pairs
//! of Young diagrams, solves for the levels, and cross-checks them against a
//! truncated Fock-space diagonalization and direct numerics of the Fuchsian
//! system.

pub mod blocks;
pub mod constants;
pub mod error;
pub mod fuchsia;
pub mod oracle;
pub mod partitions;
pub mod rabi;
pub mod special;
pub mod tau;
pub mod validate;

pub use blocks::{block_coeff, block_series, BlockForm, BlockTruncation, ThetaTriple};
pub use constants::{constant_ratio, ConstantRatioTable};
pub use error::{Error, Result};
pub use fuchsia::{Matrix2C, MonodromyPair, OdeOptions, SystemSpec};
pub use num_complex::Complex64;
pub use oracle::FockTruncation;
pub use partitions::{partitions_of, Partition};
pub use rabi::{
    monodromy_from_rabi, residuals, solve_level, spectrum, LevelStatus, RabiParams, SolverConfig,
    SpectralResult,
};
pub use tau::{stokes_product, MonodromyData, TauSeries};
pub use validate::{CheckFamily, CheckResult, ValidateConfig};
