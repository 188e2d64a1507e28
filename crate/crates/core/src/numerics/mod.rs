//! Trapezoid quadrature on periodic and half-line domains, and the Bessel
//! functions built on it.

mod bessel;
mod quadrature;

pub use bessel::{bessel_j, bessel_k, bessel_k01_scaled, bessel_k_scaled};
pub use quadrature::{
    halfline_quadrature, periodic_quadrature, periodic_quadrature_from, periodic_trapezoid,
    QuadratureSpec,
};

pub(crate) use bessel::oscillatory_start;
pub(crate) use quadrature::periodic_quadrature_n;
