//! Crash-safe progress snapshots.
//!
//! The checkpoint records the index of the last fully processed work item
//! in the run's deterministic item sequence, plus the byte length of the
//! results file at that instant. Resume truncates the results file back to
//! that length and continues with the next item, so a kill at any point
//! neither re-emits a completed item nor skips an unprocessed one (a
//! partially appended final line is simply cut off).

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Cursor {
    /// Index of the last completed item in the work sequence.
    pub index: u64,
    /// Human-readable form of that item (a Delta, a w block, a round).
    pub last: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub strategy: String,
    pub cursor: Cursor,
    pub shard_id: u64,
    pub shard_count: u64,
    pub config_digest: String,
    pub timestamp: String,
    pub output_len: u64,
}

impl Checkpoint {
    /// Write-to-temporary then atomic rename; the file is either the old
    /// snapshot or the new one, never a partial state.
    pub fn store(&self, path: &Path) -> std::io::Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(self)?.as_bytes())?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)
    }

    pub fn load(path: &Path) -> std::io::Result<Checkpoint> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}
