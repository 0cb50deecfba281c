//! Exact-arithmetic toolkit for congestion games whose players misperceive
//! congestion by a factor rho while welfare is measured at a factor sigma.
//!
//! Everything game-valued runs on `BigRational`: costs, potentials, equilibrium
//! enumeration, and the price-of-anarchy / price-of-stability ratios are exact.
//! Closed-form bounds containing square roots are evaluated in binary64 with a
//! documented tolerance, and the proof-level inequalities behind them are
//! certified on integer grids with exact rational arithmetic (irrational
//! comparisons are resolved by sign tests on conjugates, never by floats).

pub mod bounds;
pub mod equilibria;
pub mod error;
pub mod game;
pub mod generators;
pub mod jsonio;
pub mod network;
pub mod rational;
pub mod verifier;

pub use error::{Error, Result};
