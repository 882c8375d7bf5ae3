//! Closed-form spectral machinery for the anti-triangular Cesàro Markov matrix
//! and its companion kernels.
//!
//! The library is organized around a small set of named structured matrices
//! (the averaging matrix `P`, its inverse, the Pascal-type diagonalizers, the
//! Brownian-bridge kernel `[min(i,j)]`, the reciprocal-max kernel
//! `[1/max(i,j)]`, ...) together with their closed-form eigendecompositions,
//! positive-semidefiniteness certificates and operator-norm bounds.
//!
//! Everything that is an exact rational identity is checked in exact
//! arithmetic ([`ExactScalar`], arbitrary-precision rationals) with zero
//! tolerance; transcendental spectra and large orders run in `f64` with
//! explicit residual reporting. The [`oracle`] module holds the independent
//! verification machinery (exact similarity checks, a reference Jacobi
//! eigensolver, power iteration) and [`verify`] bundles the identity suites
//! consumed by the command-line `verify` subcommand.

pub mod bounds;
pub mod error;
pub mod kernels;
pub mod matrix;
pub mod oracle;
pub mod scalar;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{PsdCertificate, PsdVerdict};
pub use matrix::{make_matrix, DenseMatrix, MatrixKind};
pub use scalar::{binomial, harmonic, pochhammer, ExactScalar, Scalar, ScalarMode};
pub use spectra::{SpectralDecomposition, StationaryDistribution};
