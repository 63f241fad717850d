//! Exact counts of maximal subgroups and maximal submodules for metabelian
//! groups and finitely generated modules over polynomial rings.

pub mod arith;
pub mod engine;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod spec_file;

pub use error::{Error, Result};
