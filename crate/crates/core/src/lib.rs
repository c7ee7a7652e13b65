//! Convergence multipliers for general orthonormal series, made concrete.
//!
//! Three orthonormal systems on `[0, 1]` (trigonometric, Walsh–Paley, Haar)
//! come with exact antiderivatives. Piecewise-linear functions of bounded
//! variation have exact Fourier coefficients against them. On top of that
//! sit the weighted polynomial `P_n(d, a, x)`, its grid functional `G_n`,
//! the weighted norm `T_n`, the log-sums `Σ d_k² C_k² log²k`, and the
//! subsequence selection used for the `√n / log n` multipliers.

pub mod bv;
pub mod coeff;
pub mod error;
pub mod multiplier;
pub mod ons;
pub mod report;
pub mod sequence;
pub mod subseq;
pub mod sum;

pub use bv::{catalog, catalog_function, plateau, BVFunction};
pub use coeff::{coefficient_vector, fourier_coefficient, CoeffVector};
pub use error::{Error, Result};
pub use ons::{Basis, IndexMap, SystemId, SystemKind};
pub use report::DiagnosticsReport;
pub use sequence::{MultiplierSeq, SequenceA, WeightMode, Weighting};
