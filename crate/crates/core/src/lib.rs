//! Exact invariants and plumbing calculus for Brieskorn homology spheres.
//!
//! * [`arith`]: rationals, negative continued fractions, Bézout.
//! * [`seifert`]: Seifert invariants, star plumbings, lattice-point signature.
//! * [`lattice`]: linking matrices, determinant, signature, Wu class, μ̄.
//! * [`calculus`]: blow-downs, zero-pair cancellation, the S³ reducer.
//! * [`scan`]: the `rs(p+q)² + pq` surgery-coefficient search.
//! * [`io`], [`report`]: file formats and the command-line reports.

pub mod arith;
pub mod calculus;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod report;
pub mod scan;
pub mod seifert;

pub use error::{Error, Result};
pub use graph::{PlumbingGraph, VertexId};
