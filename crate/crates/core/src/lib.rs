//! Exact-arithmetic kernel for verifying quasi-F-split obstructions on
//! log del Pezzo pairs.
//!
//! Everything here is computed over arbitrary-precision integers and
//! rationals; there is no floating point anywhere in the crate. The main
//! subsystems are:
//!
//! - [`rational`]: exact rationals, floor/fractional-part calculus and
//!   closed-form line-bundle cohomology on P1/P2,
//! - [`graph`]: dual graphs of curve configurations, exact intersection
//!   matrices, determinants, discrepancy solving,
//! - [`blowup`]: the stepwise blowup engine for curve germs with standard
//!   coefficients and the cusp-chain dual graphs,
//! - [`cone`]: toric data for orbifold cones over Q-divisors,
//! - [`witt`]: truncated Witt vectors with universal addition/multiplication
//!   polynomials and graded structure,
//! - [`ledger`]: the cohomology-dimension ledger certifying that specific
//!   del Pezzo pairs are not quasi-F-split.

pub mod blowup;
pub mod cone;
pub mod graph;
pub mod ledger;
pub mod rational;
pub mod witt;

pub use graph::{DualGraph, IntersectionMatrix, Vertex};
pub use ledger::{DelPezzoCase, DimLedger, Verdict};
pub use rational::{IBig, Rational};
