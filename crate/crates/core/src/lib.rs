//! Conformable Gegenbauer (ultraspherical) polynomials.
//!
//! Polynomials live in the basis `x^(kα)` with exact rational coefficients
//! ([`alphapoly`]). They are built by three independent routes
//! ([`gegenbauer`]), checked against every identity they should satisfy
//! ([`verify`]) and integrated against the conformable measure
//! ([`quadrature`]). [`cli`] holds the command-line surface.

pub mod alphapoly;
pub mod cli;
pub mod error;
pub mod gegenbauer;
pub mod parallel;
pub mod quadrature;
pub mod suites;
pub mod verify;

pub use alphapoly::{Alpha, AlphaCoeff, AlphaPoly, ExactScalar, GammaRatio};
pub use error::{Error, Result};
