//! Output plumbing shared by the pipelines and the command line: versioned
//! headers, manifest hashing and all-or-nothing file writes.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Bumped whenever a CSV or JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `sha256:<hex>` of the canonical TOML rendering of `value`.
pub fn manifest_hash<T: Serialize>(value: &T) -> String {
    let canonical = toml::to_string(value).expect("manifests serialize to TOML");
    let digest = Sha256::digest(canonical.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Comment line opening every CSV file.
pub fn csv_header(schema: &str, manifest_hash: &str) -> String {
    format!("# aixi-lab {TOOL_VERSION} schema={schema}/v{SCHEMA_VERSION} manifest={manifest_hash}\n")
}

/// Header line plus the CSV body produced by `body`.
pub fn csv_document(
    schema: &str,
    manifest_hash: &str,
    body: impl FnOnce(&mut Vec<u8>) -> Result<(), crate::Error>,
) -> Result<Vec<u8>, crate::Error> {
    let mut out = csv_header(schema, manifest_hash).into_bytes();
    body(&mut out)?;
    Ok(out)
}

/// Write `bytes` to `path` through a temporary file in the same directory
/// and an atomic rename: readers see the old file or the new one, never a
/// partial write.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
