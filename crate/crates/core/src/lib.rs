//! Leading-order WKB quantization for spherically symmetric potentials.
//!
//! The angular problem is quantized on its own, which yields the squared
//! angular momentum `M² = (l + 1/2)² ħ²` (the Langer value, with a nonzero
//! minimum `ħ/2` at `l = 0`). That `M` then enters the radial action
//! integral, whose roots give the energy levels. The [`oracle`] module
//! supplies closed-form spectra and an independent shooting solver for
//! comparison.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angular;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod potentials;
pub mod quadrature;
pub mod radial;
pub mod roots;

pub use angular::{AngularSolution, QuantumNumbers};
pub use error::{Result, WkbError};
pub use potentials::{PhysicsContext, Potential};
pub use radial::{CentrifugalMode, PhaseIntegralResult, SpectrumEntry};
