//! On-disk formats: field snapshots, flat run configs and CSV tables.

mod config;
mod snapshot;

pub use config::{KeyKind, KeySpec, RunConfig, ENV_PREFIX, KEYS};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SnapshotData};

use std::fs;
use std::path::Path;

use crate::Result;

/// Writes a CSV body preceded by `# key=value` lines for the echo block.
pub fn write_csv(path: &Path, echo: &[(String, String)], body: &str) -> Result<()> {
    let mut out = String::new();
    for (k, v) in echo {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(body);
    fs::write(path, out)?;
    Ok(())
}
