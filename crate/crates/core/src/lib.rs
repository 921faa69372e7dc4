//! Geometric, dynamical and total phases of harmonic-oscillator coherent
//! states and two-mode entangled coherent states.
//!
//! - [`phase`]: domain types and circle arithmetic shared by everything else.
//! - [`analytic`]: closed-form phases.
//! - [`oracle`]: an independent truncated Fock-space simulator that computes
//!   the same phases from their definitions.

pub mod analytic;
pub mod error;
pub mod oracle;
pub mod phase;

pub use analytic::{Analytic, CyclicSplit, DynamicalSplit, OverlapDecomposition};
pub use error::{PhaseError, Result};
pub use oracle::{Oracle, OracleConfig, OracleReport, TruncatedState};
pub use phase::{
    circle_distance, unwrap_sequence, wrap_principal, CoherentParam, EntangledSpec, ModePair, PhaseTriple,
    Thresholds,
};
