//! Design and characterization toolkit for trench-defined, shadow-evaporated
//! Josephson junctions and the transmon qubits built from them.
//!
//! * [`geometry`]: film coverage and junction overlap for double-angle
//!   deposition into an etched trench.
//! * [`junction`]: critical current and current density from resistance.
//! * [`transmon`]: E_J/E_C, quality factors and the residual-photon dephasing bound.
//! * [`fit`]: T1 and Hahn-echo decay fits.
//! * [`fluct`]: overlapping Allan deviation, Welch PSD and robust spread of
//!   coherence-time traces.
//! * [`io`]: config files, CSV ingestion and the batch pipeline.

pub mod error;
pub mod fit;
pub mod fluct;
pub mod geometry;
pub mod junction;
pub mod transmon;
pub mod units;

pub use error::{Error, Result};
pub mod cli;
pub mod io;
