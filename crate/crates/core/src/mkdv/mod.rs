//! Exact symbolic engine for the mKdV conserved densities evaluated on
//! Painlevé II solutions: polynomials in (u, u_x, x) over Gaussian
//! rationals, reduced modulo u_xx = 2u^3 + xu.

pub mod pauli;
pub mod poly;
pub mod rational;
pub mod series;
pub mod tower;

pub use pauli::PauliPoly;
pub use poly::{DiffPoly, Monomial};
pub use rational::GaussianRational;
pub use series::PuiseuxSeries;
pub use tower::{DiagSeriesTerm, MkdvEngine};
