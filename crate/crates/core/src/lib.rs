//! Sampling and reconstruction across orthonormal function systems.
//!
//! Modules, bottom up:
//!
//! * [`basis`]: Fourier, Haar, periodic Daubechies and Legendre systems on an interval,
//!   with quadrature grids and evaluation.
//! * [`crossgram`]: finite sections of the change-of-basis matrix between two systems.
//! * [`gensamp`]: generalized sampling, consistent reconstruction and stable sampling rates.
//! * [`invreg`]: recovery through a compact operator with filtered or uneven-section regularization.
//! * [`csinf`]: coherence, sparsity in levels, multilevel sampling and ℓ¹ recovery.
//!
//! The `cli` feature adds the `sgs` experiment runner.

pub mod basis;
pub mod crossgram;
pub mod csinf;
pub mod error;
pub mod gensamp;
pub mod invreg;
pub mod linalg;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;
