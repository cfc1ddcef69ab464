//! Classical simulation of a quantum search pipeline for square systems of
//! polynomial equations: fixed-point oracle marking of approximate roots on a
//! coarse grid, amplitude amplification of the marked branch, and
//! quantum-style gradient-descent refinement to a fine grid — together with
//! exact-rational reference oracles, a classical Newton baseline and a
//! closed-form resource estimator.
//!
//! Module map:
//! - [`polysys`] — exact polynomial systems: parser, printer, evaluation,
//!   analytic gradient of F = Σᵢfᵢ².
//! - [`fixedpoint`] — N-bit registers with m integer bits; truncating encode
//!   and the equation oracle U_f.
//! - [`statesim`] — dense state vectors over named registers: superposition
//!   prep, QFT, oracles, projection, seeded measurement.
//! - [`marking`] — the residual check oracle and the duality marking operator
//!   (circuit-faithful and collapsed forms).
//! - [`amplify`] — Grover reflections, iteration planning, the search loop.
//! - [`gradient`] — phase-kickback gradient estimation and descent
//!   refinement.
//! - [`resources`] — operation/qubit count formulas.
//! - [`baseline`] — damped Newton with exact residual confirmation.

pub mod amplify;
pub mod baseline;
pub mod fixedpoint;
pub mod gradient;
pub mod interval;
pub mod marking;
pub mod polysys;
pub mod rational;
pub mod resources;
pub mod statesim;

pub use fixedpoint::{encode, BitWord, FixedFormat, OracleMode, ResultFormat};
pub use polysys::{parse_system, Parsed, Polynomial, PolynomialSystem, Term};
pub use statesim::{QuantumState, RegisterLayout};
