//! Nonlinear feedback shift registers in the Fibonacci and Galois
//! configurations.
//!
//! * [`anf`]: Boolean polynomials in algebraic normal form.
//! * [`nlfsr`]: register states, stepping, terminal bit, uniformity, period.
//! * [`transform`]: guarded shifting of product-terms and staged
//!   Fibonacci-to-Galois lowering.
//! * [`statemap`]: initial states of a Galois register that reproduce the
//!   output of its Fibonacci counterpart.
//! * [`verify`]: exhaustive equivalence and cycle oracles.
//! * [`io`]: register and profile text files.

pub mod anf;
pub mod error;
pub mod io;
pub mod nlfsr;
pub mod samples;
pub mod statemap;
pub mod transform;
pub mod verify;

pub use anf::{AnfPolynomial, Monomial};
pub use error::{Error, ProfileError, Result, ShiftRejection, Violation};
pub use nlfsr::{Nlfsr, RegisterState};
pub use statemap::StateCorrection;
pub use transform::{GaloisProfile, ShiftMove};
