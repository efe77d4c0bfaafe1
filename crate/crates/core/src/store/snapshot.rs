//! Snapshot files: `GREPO1\n`, then a little-endian u64 payload length, the
//! SHA-1 of the payload, and the payload itself (JSON, insertion order
//! preserved).

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha1::{Digest, Sha1};

use crate::error::StoreError;
use crate::model::{Edge, EdgeLabel, Node, NodeId, NodeLabel, ProjectId, Props};

use super::GraphStore;

pub const SNAPSHOT_MAGIC: &[u8; 7] = b"GREPO1\n";
const MAGIC_PREFIX: &[u8] = b"GREPO";
const HEADER_LEN: usize = SNAPSHOT_MAGIC.len() + 8 + 20;

#[derive(Serialize, Deserialize)]
struct Payload {
    nodes: Vec<(NodeId, NodeLabel, Props)>,
    edges: Vec<(EdgeLabel, NodeId, NodeId, Props)>,
    aliases: Vec<(String, String, NodeId)>,
}

impl GraphStore {
    pub fn snapshot_bytes(&self) -> Vec<u8> {
        let payload = Payload {
            nodes: self.nodes.iter().map(|(id, r)| (id.clone(), r.label, r.props.clone())).collect(),
            edges: self
                .edges
                .iter()
                .map(|(k, p)| (k.label, k.src.clone(), k.dst.clone(), p.clone()))
                .collect(),
            aliases: self
                .path_alias
                .iter()
                .map(|((project, path), id)| (project.clone(), path.clone(), id.clone()))
                .collect(),
        };
        let body = serde_json::to_vec(&payload).expect("snapshot payload serializes");
        let mut out = Vec::with_capacity(HEADER_LEN + body.len());
        out.extend_from_slice(SNAPSHOT_MAGIC);
        out.extend_from_slice(&(body.len() as u64).to_le_bytes());
        out.extend_from_slice(&Sha1::digest(&body));
        out.extend_from_slice(&body);
        out
    }

    /// Writes the snapshot next to `path` and renames it into place.
    pub fn snapshot_save(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        let path = path.as_ref();
        let tmp = path.with_extension("tmp-snapshot");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&self.snapshot_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn snapshot_load(path: impl AsRef<Path>) -> Result<GraphStore, StoreError> {
        let bytes = fs::read(path)?;
        Self::from_snapshot_bytes(&bytes)
    }

    pub fn from_snapshot_bytes(bytes: &[u8]) -> Result<GraphStore, StoreError> {
        if bytes.len() < SNAPSHOT_MAGIC.len() || !bytes.starts_with(MAGIC_PREFIX) {
            return Err(StoreError::Corrupt("missing snapshot magic".into()));
        }
        if &bytes[..SNAPSHOT_MAGIC.len()] != SNAPSHOT_MAGIC {
            let end = bytes.iter().position(|b| *b == b'\n').unwrap_or(bytes.len().min(16));
            return Err(StoreError::Incompatible {
                found: String::from_utf8_lossy(&bytes[..end]).into_owned(),
                expected: "GREPO1".into(),
            });
        }
        if bytes.len() < HEADER_LEN {
            return Err(StoreError::Corrupt("truncated header".into()));
        }
        let len_bytes: [u8; 8] = bytes[7..15].try_into().expect("8-byte slice");
        let len = u64::from_le_bytes(len_bytes) as usize;
        let body = &bytes[HEADER_LEN..];
        if body.len() != len {
            return Err(StoreError::Corrupt(format!(
                "payload is {} bytes, header says {len}",
                body.len()
            )));
        }
        if Sha1::digest(body).as_slice() != &bytes[15..35] {
            return Err(StoreError::Corrupt("payload checksum mismatch".into()));
        }
        let payload: Payload =
            serde_json::from_slice(body).map_err(|e| StoreError::Corrupt(e.to_string()))?;

        let corrupt = |e: StoreError| StoreError::Corrupt(e.to_string());
        let mut store = GraphStore::new();
        for (id, label, props) in payload.nodes {
            store.upsert_node(Node { id, label, props }).map_err(corrupt)?;
        }
        for (label, src, dst, props) in payload.edges {
            store.upsert_edge(Edge { label, src, dst, props }).map_err(corrupt)?;
        }
        for (project, path, id) in payload.aliases {
            let project = ProjectId::new(project).map_err(|e| corrupt(e.into()))?;
            if !store.contains(&id) {
                return Err(StoreError::Corrupt(format!("alias {path} points at missing node")));
            }
            store.register_path(&project, &path, &id);
        }
        Ok(store)
    }
}
