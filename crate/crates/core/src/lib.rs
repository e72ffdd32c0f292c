//! Global solution families of the Painlevé II equation, their regularized
//! total integrals, sine-kernel Fredholm determinants with the associated
//! Painlevé V functions, and an exact symbolic engine for the mKdV conserved
//! densities.
//!
//! The crate is organized around the objects it verifies:
//!
//! * [`numerics`] — Airy, complex gamma argument, pinned constants;
//! * [`monodromy`] / [`solve`] — classification of Stokes data and numerical
//!   Painlevé II solutions built from endpoint asymptotics;
//! * [`integrals`] — regularized total integrals against their closed forms;
//! * [`mkdv`] — exact conserved-density polynomials and antiderivatives;
//! * [`trace`] — trace formulae and vanishing principal-value integrals;
//! * [`sine`] — Nyström determinants, the Painlevé V connection and the
//!   asymptotic constants.

pub mod acceptance;
pub mod asym;
pub mod error;
pub mod integrals;
pub mod mkdv;
pub mod monodromy;
pub mod numerics;
pub mod ode;
pub mod quad;
pub mod sine;
pub mod solve;
pub mod trace;

pub use error::{Error, Result};
pub use num_complex::Complex64;
