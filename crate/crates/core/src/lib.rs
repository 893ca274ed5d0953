//! Simulation laboratory for quantum fingerprinting.
//!
//! The crate builds code-based fingerprint states, evaluates the SWAP test and
//! the symmetric-subspace permutation test (analytically, by explicit state
//! vector simulation, and by seeded sampling), runs the three-party equality
//! protocol against two classical baselines, and audits random sign-vector
//! fingerprint sets.
//!
//! Numerical code is generic over the scalar type. [`Scalar`] covers exact
//! rationals as well as floats, [`Real`] covers `f32` and `f64`. The aliases
//! at the crate root pick the usual concrete instantiations.

pub mod bits;
pub mod codes;
pub mod error;
pub mod nearset;
pub mod permtest;
pub mod protocols;
pub mod qstate;
pub mod rng;
pub mod scalar;
pub mod swaptest;

pub use bits::BitString;
pub use codes::{BinaryCode, CodeKind, CodeSpec, DistanceCertificate, Generator};
pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Exact fraction used for code agreement and distance bookkeeping.
pub type Rational = num_rational::Ratio<u64>;
/// Arbitrary-precision rational, the exact instantiation of [`Scalar`].
pub type BigRational = num_rational::BigRational;

/// Pure state with `f64` amplitudes.
pub type State = qstate::PureState<f64>;
/// Pure state with `f32` amplitudes.
pub type State32 = qstate::PureState<f32>;
/// Fingerprint state with `f64` amplitudes.
pub type Fingerprint = qstate::Fingerprint<f64>;
/// SWAP test result in double precision.
pub type SwapTestResult = swaptest::SwapTestResult<f64>;
/// Two-state hard instance in double precision.
pub type HardInstance = permtest::HardInstance<f64>;
