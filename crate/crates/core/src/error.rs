use std::io;

use thiserror::Error;

use crate::model::{EdgeLabel, NodeId, NodeLabel};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("identity error: {0}")]
    Identity(String),
    #[error("invalid project id: {0}")]
    InvalidProjectId(String),
    #[error("invalid node id `{0}`")]
    InvalidNodeId(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("missing or mistyped property `{0}`")]
    MissingProperty(String),
    #[error("invalid file change: {0}")]
    InvalidChange(String),
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("schema error: node {id} is a {existing}, not a {attempted}")]
    LabelMismatch { id: NodeId, existing: NodeLabel, attempted: NodeLabel },
    #[error("schema error: {label} edge must run {expected_src} -> {expected_dst}, got {src} -> {dst}")]
    EndpointLabel {
        label: EdgeLabel,
        expected_src: NodeLabel,
        expected_dst: NodeLabel,
        src: NodeLabel,
        dst: NodeLabel,
    },
    #[error("integrity error: {label} edge endpoint {id} does not exist")]
    MissingEndpoint { label: EdgeLabel, id: NodeId },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("snapshot version mismatch: found {found:?}, expected {expected:?}")]
    Incompatible { found: String, expected: String },
    #[error("corrupt snapshot: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum MapperError {
    #[error("pipeline step {step}: unknown column `{column}`")]
    UnknownColumn { step: usize, column: String },
    #[error("pipeline step {step}: {message}")]
    InvalidStep { step: usize, message: String },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}
