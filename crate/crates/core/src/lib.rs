//! Quantum particle in a one-dimensional box whose walls are held by a spring.
//!
//! The particle's zero-point force pushes the walls outward until it balances
//! the elastic restoring force. This crate computes the particle spectrum,
//! solves that strain equilibrium, evaluates the binding energy and the
//! stiffened wall spring, runs a finite-temperature self-consistent strain
//! model and integrates the breathing oscillation of the box.
//!
//! Everything internal is dimensionless: lengths in units of the unstrained
//! box size `d`, energies in the ground-state energy `ε₀ = h²/8md²`,
//! temperatures in `T₀ = ε₀/k_B` and time in `d·sqrt(m/ε₀)`. See [`units`]
//! for the conversion to SI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod equilibrium;
mod error;
pub mod numerics;
pub mod spectrum;
pub mod thermal;
pub mod units;

pub use dynamics::{
    energy_exchange_stats, integrate, measured_frequency, restoring_force, ExchangeStats,
    Trajectory,
};
pub use equilibrium::{minimize_oracle, solve_equilibrium, total_energy, StrainSolution};
pub use error::{Error, Result};
pub use thermal::{
    equilibrium_size_at_t, expansion_coefficient, mean_wall_force, occupancies, thermal_sweep,
    ThermalPoint,
};
pub use units::{Dimension, PhysicalInput, ReducedSystem};
