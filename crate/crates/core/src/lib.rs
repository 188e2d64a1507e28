//! One-dimensional quantum walks and their relativistic wave packets.
//!
//! The crate simulates three walk dynamics on a line:
//!
//! * the discrete-time walk (coin `exp(-i θ σx)` followed by a
//!   spin-conditional shift),
//! * the continuous-time walk generated by the lattice Laplacian,
//! * the one-dimensional Dirac equation on a periodic grid,
//!
//! and evaluates closed-form positive-frequency wave packets for each of them,
//! every closed form paired with a direct-quadrature oracle. Observables
//! (densities, moments, spreading fits, light-cone leakage and the spinor
//! entanglement entropy) live in [`observables`].

pub mod dispersion;
pub mod error;
pub mod lattice;
pub mod numerics;
pub mod observables;
mod spectral;
pub mod walks;
pub mod wavepackets;

pub use num_complex::Complex64 as C64;

pub use dispersion::{localization_correspondence, DispersionModel};
pub use error::{Error, Result};
pub use lattice::{ScalarLattice, SpinorLattice};
pub use numerics::QuadratureSpec;

/// Two-component amplitude `(ψ_R, ψ_L)` at a single site or point.
pub type Spinor = [C64; 2];
