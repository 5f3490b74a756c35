//! Embedded property-graph engine.
//!
//! - [`store`]: arena-indexed mutable graph with columnar properties and indexes
//! - [`csr`]: immutable CSR projections for analytics
//! - [`algos`]: graph algorithm library over CSR views
//! - [`query`]: pattern-query parser, cost-based planner and batched executor
//! - [`vector`]: exact k-NN search over vector properties
//! - [`optim`]: metaheuristic solvers and graph problem binding
//! - [`bench`]: validation and benchmarking harness

pub mod algos;
pub mod bench;
pub mod csr;
pub mod optim;
pub mod query;
pub mod store;
pub mod vector;
