//! Quantum statistics of superpositions of squeezed and displaced number
//! states, a three-boson squeeze operator, and three nonlinear-coupler
//! models, each implemented twice: as closed forms and as a truncated
//! Fock-space oracle that every closed form is tested against.
//!
//! Layout:
//! - [`numerics`]: special functions and quadrature shared by everything else
//! - [`fockspace`]: dense/truncated Fock-space oracle (matrices, density
//!   operators, numeric observables)
//! - [`ssdns`]: superposition of squeezed and displaced number states
//! - [`thermal`]: the same superposition embedded in thermal noise
//! - [`trisqueeze`]: three-mode squeeze operator and its derived states
//! - [`couplers`]: time-dependent Heisenberg solutions for three coupler
//!   models and their photon statistics

pub mod couplers;
pub mod distribution;
pub mod error;
pub mod fockspace;
pub mod numerics;
pub mod ssdns;
pub mod thermal;
pub mod trisqueeze;

pub use distribution::{Distribution, DistributionKind};
pub use error::{Error, Result};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
