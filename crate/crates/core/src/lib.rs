//! Exact analysis of ramification in iterated preimage towers of polynomials
//! over p-adic fields.
//!
//! The crate works entirely with exact rationals: valuations are elements of
//! `Q ∪ {+inf}`, residue fields are finite fields `F_{p^m}` grown on demand,
//! and every certificate it emits records which checks were proved and which
//! were only observed up to a horizon.

pub mod arith;
pub mod dynamics;
pub mod finitefield;
pub mod newton;
pub mod polynomial;
pub mod ramify;

pub use arith::{ExtVal, Prime, Rat};
pub use polynomial::QPoly;
