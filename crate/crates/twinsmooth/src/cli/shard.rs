//! Range partitioning for multi-process runs.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShardError {
    #[error("shard id {id} out of range for {count} shards")]
    IdOutOfRange { id: u64, count: u64 },
    #[error("shard count must be positive")]
    ZeroCount,
    #[error("empty range: lo {lo} exceeds hi {hi}")]
    EmptyRange { lo: u64, hi: u64 },
}

/// Splits [lo, hi] into `shard_count` contiguous subranges whose sizes
/// differ by at most one; the first `len % shard_count` shards take the
/// extra element. Returns None when the shard gets no elements (more
/// shards than range members).
pub fn partition(
    lo: u64,
    hi: u64,
    shard_id: u64,
    shard_count: u64,
) -> Result<Option<(u64, u64)>, ShardError> {
    if shard_count == 0 {
        return Err(ShardError::ZeroCount);
    }
    if shard_id >= shard_count {
        return Err(ShardError::IdOutOfRange {
            id: shard_id,
            count: shard_count,
        });
    }
    if lo > hi {
        return Err(ShardError::EmptyRange { lo, hi });
    }
    let len = hi - lo + 1;
    let base = len / shard_count;
    let extra = len % shard_count;
    let my_len = base + u64::from(shard_id < extra);
    if my_len == 0 {
        return Ok(None);
    }
    let start = lo + shard_id * base + shard_id.min(extra);
    Ok(Some((start, start + my_len - 1)))
}
