//! Exact-arithmetic library for the quaternionic half-Spin world of GSp6:
//! big-rational and cyclotomic scalars, Dirichlet characters and generalized
//! Bernoulli numbers, the cubic Jordan algebra H3(B) over a definite quaternion
//! algebra, the 32-dimensional module W with its symplectic and quartic forms,
//! closed-form local Fourier-coefficient polynomials for Eisenstein series
//! (verified against brute-force character-sum oracles), restriction of
//! q-expansions to Siegel modular forms, and degree-8 Spin Euler factors.
//!
//! Everything is exact: no floating point appears anywhere in the public API.

pub mod cyclo;
pub mod dirichlet;
pub mod eisen;
pub mod error;
pub mod graded;
pub mod groupw;
pub mod jordan;
pub mod local;
pub mod lseries;
pub mod quat;
pub mod rational;
pub mod restrict;
pub mod ring;
pub mod verify;

pub use cyclo::CycloValue;
pub use dirichlet::DirichletChar;
pub use error::Error;
pub use graded::GradedConstant;
pub use groupw::{GElement, WVector};
pub use jordan::{HermLattice, HermMatrix};
pub use quat::{GaussianRational, QuatAlgebra, QuatElement};
pub use rational::Rat;

pub type Result<T> = std::result::Result<T, Error>;
