//! Polyhedral toolkit for the Equitable Coloring Problem.
//!
//! Colorings are encoded as 0/1 vectors `(x, w)` of length `n² + n`, where
//! `x[v][j] = 1` when vertex `v` takes color `j` and `w[j] = 1` when color `j`
//! is used. This crate holds everything that does not need an operating
//! system:
//!
//! - [`graph`]: instances, neighborhoods, stable sets, cliques, matchings;
//! - [`oracle`]: exhaustive enumeration of equitable colorings;
//! - [`formulation`]: the 0/1 model and point feasibility;
//! - [`cuts`]: generators for every valid-inequality family;
//! - [`verify`]: affine ranks, face dimensions and facet-condition audits;
//! - [`text`]: one-line row syntax and LP-text export.
//!
//! Vertices and colors are 1-based throughout, matching DIMACS files.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cuts;
mod error;
pub mod formulation;
pub mod graph;
pub mod oracle;
pub mod row;
pub mod text;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
pub use oracle::{EqcolCatalog, EqcolVector, EquitableColoring};
pub use row::{CutRow, Family, Sense, VarId, Vars};
