//! Certificates of positive (semi-)definiteness for even-order symmetric
//! tensors.
//!
//! A symmetric B0 tensor splits as `M + sum_k h_k E^{J_k}` where `M` is a
//! diagonally dominated Z tensor (an M tensor), every `h_k > 0` and `E^J` is
//! the tensor with ones exactly on the indices inside `J`. For even order
//! both parts are positive semi-definite, so B0 tensors are PSD and B
//! tensors (where `M` is strictly dominated) are PD. [`decompose`] builds
//! and checks that witness; [`classify`] holds the cheap membership tests;
//! [`spectra`] provides independent numerical cross-checks.
//!
//! Everything except [`spectra`] is generic over [`Scalar`], so the same
//! code runs in `f64`, `f32` or exact rational arithmetic.

pub mod classify;
pub mod decompose;
pub mod error;
pub mod gen;
pub mod io;
pub mod scalar;
pub mod spectra;
pub mod tensor;

pub use classify::{classify, Classification, GershgorinIntervals, RowStats};
pub use decompose::{
    certify_definiteness, decompose_b0, verify_cert, Certification, DecompCert, Verdict,
};
pub use error::{Error, Result};
pub use gen::{generate, GenKind, GenSpec};
pub use scalar::Scalar;
pub use spectra::{HEigenPair, SpectraOptions, SpectrumReport};
pub use tensor::{canonicalize, power_vec, MultiIndex, SymTensor};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type SymTensorF64 = SymTensor<f64>;
pub type SymTensorF32 = SymTensor<f32>;
pub type SymTensorQ = SymTensor<Rational>;

pub type DecompCertF64 = DecompCert<f64>;
pub type DecompCertQ = DecompCert<Rational>;
