//! Toolchain for a GNN inference overlay: a compiler that lowers a
//! declarative model plus an input graph to a 128-bit instruction stream,
//! and a cycle-level simulator of the overlay microarchitecture that
//! executes that stream and checks it against a dense reference executor.

pub mod codegen;
pub mod error;
pub mod graph;
pub mod hw;
pub mod ir;
pub mod isa;
pub mod matrix;
pub mod model;
pub mod models;
pub mod oracle;
pub mod partition;
pub mod passes;
pub mod sim;

pub use error::{Error, Result};
