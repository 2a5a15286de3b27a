//! Bi-free multiplicative convolution of two-faced pairs, computed with
//! truncated formal power series and checked against an exact free-product
//! moment oracle.
//!
//! The pieces, bottom up:
//!
//! - [`series`]: one- and two-variable truncated series, valuated series for
//!   reciprocals of germs, and `ζ`-linear upper-triangular matrix series.
//! - [`measures`]: finitely supported measures on `𝕋²` or `ℝ₊²` and their
//!   two-band moment tables.
//! - [`oracle`]: moments of words in two freely independent commutative
//!   algebras, from first principles.
//! - [`transforms`]: `Ψ`, `h`, `H`, `η`, `S`, partial `S`, `Σ`, subordination.
//! - [`biconv`]: the convolution by three transform routes.
//! - [`matrix_s`]: matrix-valued `Ψ_X` and `S_X` on upper-triangular `Γ`,
//!   the twisted multiplicativity test and matrix subordination.

pub mod biconv;
pub mod coeff;
pub mod error;
pub mod matrix_s;
pub mod measures;
pub mod oracle;
mod rational;
pub mod sampling;
pub mod series;
pub mod transforms;

pub use coeff::{Coefficient, Mode, Rational};
pub use error::{Error, Precondition, Result};
pub use measures::{AtomicPairMeasure, PairDistribution};
pub use num_complex::Complex64;
pub use series::{Series1, Series2, UTGammaSeries, ValuatedSeries2};

/// Extra truncation order carried through pipelines so that divisions by
/// `z`, `w` and `zw` still leave the requested order intact.
pub const WORKING_MARGIN: usize = 1;
