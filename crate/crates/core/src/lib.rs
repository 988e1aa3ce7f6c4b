//! Reaction-coordinate polaron-transform (RCPT) treatment of a three-level
//! system coupled to a structured bosonic bath.
//!
//! The crate covers the effective Hamiltonian of the transformed model, its
//! analytic relaxation timescales, and Redfield/secular-Lindblad dynamics of
//! three levels of description: the bare system, the reaction-coordinate
//! (RC) enlarged system and the effective three-level model.

pub mod error;
pub mod linalg;
pub mod acceptance;
pub mod cli;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod rcpt;
pub mod redfield;
pub mod timescales;

pub use error::{Error, Result};
pub use model::{HermitianMatrix, ModelParams, SpectralDensity};
