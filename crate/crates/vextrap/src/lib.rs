//! Acceleration of vector sequences against known asymptotic scale families.
//!
//! Given a sequence `x_m` that behaves like `s + sum_i a_i g_i(m)` for known
//! scale functions `g_i` and an unknown limit (or antilimit) `s`, the engine
//! removes the leading scale terms by solving small weighted linear systems
//! and tabulates the accelerated approximations `s_{n,k}`. The library also
//! measures the asymptotic quantities that govern how fast each table column
//! converges, and verifies a fixed registry of claims about that behavior.
//!
//! Entry points:
//!
//! - [`sequences::GeometricScale`] and [`sequences::ModelSequence`] build
//!   synthetic problems; [`sequences::TabulatedSequence`] wraps real data.
//! - [`engine::Extrapolator`] solves cells, applies the cell functional, and
//!   fills [`engine::ExtrapolationTable`]s.
//! - [`theory`] estimates node ratios, limiting directions, and acceleration
//!   constants, and runs the claim registry ([`theory::verify_claims`]).
//! - [`cli`] backs the `vextrap` binary; [`presets`] holds the named
//!   synthetic setups; [`io`] reads and writes the file formats.
//!
//! The `examples/` directory shows one runnable program per capability; see
//! the README for the tour.

pub mod cli;
pub mod engine;
pub mod error;
pub mod io;
pub mod linalg;
pub mod presets;
pub mod scalar;
pub mod sequences;
pub mod space;
pub mod theory;

pub use engine::{EngineOptions, ExtrapolationTable, Extrapolator};
pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
pub use sequences::{GeometricScale, ModelSequence, ScaleFamily, TabulatedSequence};
pub use space::{inner, Sequence, Vector, Weighting};
pub use theory::{AsymptoticProfile, VerificationReport, VerifyConfig};
