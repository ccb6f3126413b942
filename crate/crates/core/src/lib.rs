//! Numerical toolkit for metallic-mean quasicrystal models.
//!
//! The crate covers the one-dimensional off-diagonal (Jacobi) model whose
//! hoppings follow the metallic-mean substitution sequence, and the
//! two-dimensional Labyrinth model built as its tensor square:
//!
//! - [`substitution`]: words of the substitution `a -> a^s b, b -> a`,
//!   circle codings and the odd/even twin combinatorics.
//! - [`jacobi1d`]: Dirichlet restrictions, Sturm counts, bisection
//!   eigenvalues and the integrated density of states.
//! - [`tracemap`]: the trace map `T_s = U^s ∘ P`, its Fricke–Vogt
//!   invariant, escape-time spectrum covers and the torus factor map.
//! - [`cantor`]: gaps, thickness, box dimension and interval-union
//!   arithmetic on [`BandCover`]s.
//! - [`labyrinth`]: the 2D operator, tensor eigenvalue law and the product
//!   density-of-states formulas.
//! - [`verify`]: the acceptance suite, shared by the test target and the CLI.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod cantor;
pub mod cover;
pub mod dense;
mod error;
pub mod jacobi1d;
pub mod labyrinth;
pub mod measure;
pub mod output;
pub mod substitution;
pub mod tracemap;
pub mod verify;

pub use cover::{BandCover, Interval};
pub use error::{Error, Result};
pub use jacobi1d::{HoppingWindow, ModelParams, WindowSource};
pub use labyrinth::LabyrinthParams;
pub use measure::EmpiricalMeasure;
pub use substitution::{Letter, Parity, TwinReport, Word};
pub use tracemap::{Escape, TraceVector};

/// Toolkit version embedded in every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
