//! Repository graph: schema, embedded property store, query miners and
//! result mappers.
//!
//! The driller crate fills a [`GraphStore`] with [`CommitBundle`]s; the
//! [`MineManager`] answers queries over it and [`mappers`] turn the
//! resulting [`QueryResult`]s into CSV, JSON or time series.

pub mod bundle;
pub mod error;
pub mod mappers;
pub mod miners;
pub mod model;
pub mod store;

#[cfg(test)]
pub(crate) mod testkit;

pub use bundle::{CommitBundle, FileChange, MethodChange};
pub use error::{MapperError, ModelError, QueryError, StoreError};
pub use mappers::MapperPipeline;
pub use miners::{
    Column, MineManager, Q3Mode, QueryResult, Scalar, ScalarType, WorstCase, WorstCaseQuery,
};
pub use model::{
    file_type_of, node_id, BranchNode, ChangeType, CommitNode, DeveloperNode, Edge, EdgeLabel,
    FileNode, MethodNode, Node, NodeId, NodeLabel, ProjectId, Props, UpdateFileProps,
    UpdateMethodProps, Value,
};
pub use store::{Direction, GraphStore, InsertClass, InsertOutcome, SharedStore, Upsert};
