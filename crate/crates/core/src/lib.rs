//! Numerical checks for Carleson embeddings and integration operators on
//! weighted Bergman-Zygmund spaces `A^p_{ω,Ψ}` of the unit disc.
//!
//! Radial quantities are computed in the gap `u = 1 - |z|` so that points a
//! few ulps from the boundary stay resolvable. Scale functions are stored as
//! `L ↦ ln Ψ(e^L)`, which keeps towers such as `2^{2^k}` finite.
//!
//! The runnable examples under `examples/` walk through each module; the
//! `bzcheck` binary runs scenario files through [`harness`].

pub mod carleson;
pub mod config;
pub mod error;
pub mod funcspace;
pub mod geometry;
pub mod harness;
pub mod measures;
pub mod operators;
pub mod quadrature;
pub mod scale;
pub mod stats;
pub mod sweep;
pub mod weights;

pub use error::{Error, Result};
