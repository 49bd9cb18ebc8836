//! Model-reduction chain and open-system dynamics for a driven Kerr-magnon /
//! microwave-cavity / NV-spin hybrid system.
//!
//! - [`quantum`]: dense operators on truncated tensor-product spaces.
//! - [`model`]: physical parameters, closed-form derived scales and
//!   Hamiltonian builders.
//! - [`dynamics`]: unitary and Lindblad evolution with observables.
//! - [`experiments`]: scenario runners that emit CSV tables.
//! - [`selftest`]: the invariant suite behind `polariton selftest`.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod model;
pub mod quantum;
pub mod selftest;
pub mod units;

pub use error::{Error, Result};
