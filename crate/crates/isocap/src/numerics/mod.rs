//! Shared numerical kernels: Gauss-Legendre rules, Legendre polynomials,
//! spectrally accurate profile interpolation, adaptive quadrature and small
//! derivative-free minimizers.

mod gauss;
mod interp;
mod optim;
mod quadrature;

pub use gauss::{gauss_legendre, legendre_p, legendre_p_deriv};
pub use interp::{BarycentricInterpolant, TrigInterpolant};
pub use optim::{golden_section_min, nelder_mead_2d};
pub use quadrature::adaptive_simpson;
