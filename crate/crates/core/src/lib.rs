//! Exactly solvable Schrödinger problems with a position-dependent mass.
//!
//! The operator `-d/dx (1/(2m)) d/dx + V` is mapped onto a constant-mass
//! problem by `ψ = (2m)^{1/4} φ` and `x̄ = ∫ √(2m)`. Choosing
//! `V(x) = V₂(x̄(x)) − V₁(x)` for a solvable `V₂` makes the spectrum known in
//! closed form. The [`eigen`] module checks that claim numerically.

pub mod coordinate;
pub mod discrepancy;
pub mod eigen;
pub mod error;
pub mod interp;
pub mod mass;
pub mod output;
pub mod problem;
pub mod quadrature;
pub mod reference;
pub mod verify;

pub use coordinate::{closed_form_map, CoordinateMap};
pub use eigen::{Grid, SpectrumReport, WavefunctionOnGrid};
pub use error::{PdmError, Result};
pub use mass::{MassKind, MassProfile, MassValue};
pub use problem::{ConstantMassProblem, EffectiveMassProblem, SturmLiouville};
pub use reference::{ExactSpectrum, ReferencePotential};
