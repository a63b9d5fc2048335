//! Finite sparsity groups over finite fields: structure analysis, explicit
//! invariant generators by iterated polynomial gluing, and exact verification.

pub mod cli;
pub mod ffield;
pub mod invariants;
pub mod linalg;
pub mod matgroup;
pub mod poly;
pub mod sparsity;
mod text;
pub mod verify;

pub use text::TextError;
