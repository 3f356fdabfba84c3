//! Quivers with potential from decorated surfaces, braid twist group
//! presentations, and a small derivation checker for relations among them.

pub mod mutation_iso;
pub mod presentations;
pub mod qp;
pub mod surface;
pub mod verifier;
pub mod word;
