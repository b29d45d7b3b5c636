//! Covariant POVMs over finite groups.
//!
//! Finite groups and their actions, unitary representations with isotypic
//! decomposition and induction, covariance and imprimitivity systems with
//! their dilations and intertwiners, and quantum reference frames with
//! relative observables.

pub mod covariance;
pub mod error;
pub mod frames;
pub mod group;
pub mod io;
pub mod linalg;
pub mod report;
pub mod rep;
pub mod tolerance;

pub use error::{Error, Result};
pub use report::{AxiomCheck, Report};
pub use tolerance::Tolerances;
