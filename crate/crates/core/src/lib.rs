//! Classically simulated block-encodings and the spectral estimation
//! algorithms built on them: correlation functions, densities of states,
//! linear response and kernel-polynomial sketches.
//!
//! Numeric code is generic over [`Real`]; the aliases below fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algo;
pub mod block;
pub mod cheb;
pub mod error;
pub mod estimate;
pub mod fmt;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod prep;
pub mod scalar;
pub mod transform;

pub use error::{Error, Result};
pub use estimate::{EstimationResult, Mode};
pub use scalar::{Real, C};

/// Complex `f64`.
pub type Complex64 = num_complex::Complex64;
pub type Matrix = linalg::ComplexMatrix<f64>;
pub type Pauli64 = pauli::PauliSum<f64>;
pub type Encoding = block::BlockEncoding<f64>;
pub type Preparation = prep::PreparationUnitary<f64>;
pub type Chebyshev = cheb::ChebyshevPoly<f64>;
pub type Window = cheb::WindowPoly<f64>;
pub type Sketch = algo::SketchRequest<f64>;
pub type Correlation = algo::CorrelationSpec<f64>;
