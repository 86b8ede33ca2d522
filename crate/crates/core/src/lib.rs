//! Tsallis-entropic Leggett-Garg tests for quantum work fluctuations.
//!
//! The crate evaluates two-point-measurement work statistics for a
//! three-time protocol, measures how strongly they violate the
//! `alpha`-entropic Leggett-Garg inequality, models lossy detectors, and
//! checks the same inequality against random hidden-variable models.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod inefficiency;
pub mod lg;
pub mod oracle;
pub mod plot;
pub mod quantum;
pub mod systems;

pub use entropy::{EntropicOrder, JointTable, ProbVector};
pub use error::{Error, Result};
pub use lg::{LgReport, ThetaGrid, ViolationDomain};
pub use quantum::{ProtocolSpec, UnitaryMatrix};
pub use systems::{SystemFamily, SystemKind};
