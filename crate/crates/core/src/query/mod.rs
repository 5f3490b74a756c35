//! Pattern-query engine.
//!
//! Text goes through [`parser::parse`], the cost-based [`planner`] builds a
//! linear operator pipeline and [`exec`] runs it batch at a time. [`Engine`]
//! ties these together with parse and plan caching, DDL and procedure calls.
//!
//! ```
//! use strata::query::{Engine, Params};
//! use strata::store::GraphStore;
//!
//! let engine = Engine::new(GraphStore::new().into_shared());
//! engine.run("CREATE (a:Person {name: 'Ada'})-[:KNOWS]->(b:Person {name: 'Bob'})", &Params::new()).unwrap();
//! let rows = engine.run("MATCH (a:Person)-[:KNOWS]->(b) RETURN b.name", &Params::new()).unwrap();
//! assert_eq!(rows.rows[0][0].as_str(), Some("Bob"));
//! ```

pub mod ast;
pub mod cost;
mod engine;
pub mod exec;
pub mod parser;
pub mod planner;
mod value;

use std::collections::HashMap;

use thiserror::Error;

use crate::optim::OptimError;
use crate::store::{PropertyValue, StoreError};
use crate::vector::VectorError;

pub use engine::{Engine, EngineCounters, QueryResult};
pub use exec::{Materialization, OperatorProfile, ProfileReport, BATCH_SIZE};
pub use parser::{parse, ExecMode, Parsed};
pub use planner::{PhysicalOp, PlanNode, PlannerOptions, Predicate};
pub use value::{NodeValue, Value};

/// Named query parameters (`$name`).
pub type Params = HashMap<String, PropertyValue>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("{0}")]
    Semantic(String),
    #[error("missing parameter ${0}")]
    MissingParameter(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("planning error: {0}")]
    Planning(String),
    #[error("unknown procedure {0}")]
    UnknownProcedure(String),
    #[error("procedure failed: {0}")]
    Procedure(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Vector(#[from] VectorError),
    #[error(transparent)]
    Optim(#[from] OptimError),
}
