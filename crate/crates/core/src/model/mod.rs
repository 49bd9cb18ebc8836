//! Parameters, closed-form derived scales and Hamiltonian builders for the
//! reduction chain
//! laboratory Hamiltonian → linearized Kerr → squeezed magnon → polaritons
//! → spin–LP Jaynes–Cummings → dispersive spin–spin exchange.

mod derive;
mod formulas;
mod hamiltonians;
mod hopfield;
mod params;
mod steady_state;

pub use derive::{derive, DerivedReport, DerivedScales, Overrides};
pub use formulas::*;
pub use hamiltonians::*;
pub use hopfield::{bogoliubov_spectrum, hopfield_matrix, BogoliubovSpectrum};
pub use params::{CouplingCalibration, PhysicalParams};
pub use steady_state::{steady_state_magnon, SteadyStateRoot};
