//! Branch-and-cut for the equitable coloring problem.

pub mod bench;
pub mod engine;
pub mod lp;
pub mod record;
