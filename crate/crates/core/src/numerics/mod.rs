//! Scalar special-function and constant primitives.
//!
//! Everything here is a pure function of its inputs; the per-operation error
//! budgets are documented at the definitions.

pub mod airy;
pub mod constants;
pub mod dd;
pub mod gamma;

pub use airy::{airy_ai, airy_ai_prime};
pub use constants::{zeta_prime_minus_one, NamedConstant, GLAISHER, ZETA_PRIME_MINUS_ONE};
pub use gamma::{arg_gamma, gamma_complex};
