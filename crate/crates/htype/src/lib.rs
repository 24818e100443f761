//! Sub-semi-Riemannian geometry on H-type groups.
//!
//! The crate builds Clifford generator families for admissible dimension
//! pairs, models the resulting two-step nilpotent group with an indefinite
//! horizontal metric, classifies the spectrum of the geodesic operator, and
//! produces closed-form geodesics together with an independent numerical
//! cross-check.

pub mod algebra;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod geodesic;
pub mod oracle;
pub mod spectral;
pub mod verify;

pub use algebra::{CausalType, GroupElement, HTypeAlgebra, Signature, Velocity};
pub use clifford::GeneratorSet;
pub use error::{Error, Result};
pub use geodesic::{solve_geodesic, GeodesicSolution, Trajectory};
pub use spectral::SpectralData;
