//! Simulators for quantum information machines: approximate and
//! probabilistic cloners, two-state discriminators, and programmable
//! processors whose operation is selected by a quantum program state.
//!
//! Everything is dense linear algebra over small tensor-product spaces,
//! built on [`qcore`].

pub mod cloner;
pub mod discrimination;
pub mod error;
pub mod groverperm;
pub mod phasegate;
pub mod processor;
pub mod procfid;
pub mod progdisc;
pub mod qcore;
pub mod report;

pub use error::{QError, Result};
pub use qcore::{
    c64, CMatrix, CVector, DensityOperator, Operator, Povm, RngStream, StateVector, SubsystemShape,
};
