//! Fractional Schrödinger means `S_t f = F^{-1}[e^{it|ξ|^a} f̂]`, their maximal
//! functions over time windows, sequences and translation-time sets, the
//! radial reduction to Hankel-type operators, and a blow-up family showing
//! where sequential maximal estimates fail.
//!
//! Conventions: `f̂(ξ) = ∫ e^{-iξx} f(x) dx`, inverse carries `(2π)^{-1}`.

pub mod counterexample;
pub mod error;
pub mod experiments;
pub mod harness;
pub mod maximal;
pub mod output;
pub mod quadrature;
pub mod radial;
pub mod sequences;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
