//! Sine-kernel Fredholm determinants, the associated Painlevé V functions,
//! and the resolvent route of the integrable-kernel representation.

pub mod det;
pub mod identities;
pub mod pv;
pub mod resolvent;

pub use det::{det_sine, DetReport};
pub use identities::{
    constants_extraction, sine_table, verify_identities, verify_resolvent, ConstantsReport,
    ConstantsRow, IdentityReport, ResolventReport,
};
pub use pv::{pv_solve, PVState};
pub use resolvent::{resolvent_solve, ResolventVectors};
