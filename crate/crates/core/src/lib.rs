//! Exact Minkowski decomposability analysis for convex polytopes.
//!
//! A polytope is given by exact rational vertex coordinates. The crate can
//! decide whether it is decomposable in two independent ways:
//!
//! * a combinatorial certificate engine ([`certificates`]) that assembles an
//!   auditable derivation from rules about the skeleton (simple extensions,
//!   independent cycles, unions of indecomposable subgraphs, Shephard facets,
//!   pyramid stacking), and
//! * a linear-algebra oracle ([`graph::oracle_verdict`]) that computes the
//!   dimension of the space of decomposing functions on the skeleton.
//!
//! The [`catalogue`] module collects constructively described polytopes with
//! their known statuses, and [`format`] / [`report`] provide the text file
//! format and report rendering used by the command-line tool.

pub mod catalogue;
pub mod certificates;
mod error;
pub mod format;
pub mod graph;
pub mod linalg;
pub mod polytope;
pub mod report;

pub use error::Error;
pub use linalg::{RMatrix, RVector, Rational};
pub use polytope::{FVector, Polytope};

use serde::Serialize;

/// Decomposability status of a polytope or geometric graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Decomposable,
    Indecomposable,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Decomposable => "Decomposable",
            Status::Indecomposable => "Indecomposable",
        })
    }
}
