//! Sequent calculi, proof search, interpolation and neighbourhood semantics
//! for 14 classical non-normal modal logics and their 14 constructive
//! counterparts.

pub mod calculi;
pub mod interpolation;
pub mod prover;
pub mod semantics;
pub mod sequent;
pub mod suites;
pub mod syntax;
