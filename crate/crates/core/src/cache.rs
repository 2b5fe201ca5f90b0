//! On-disk cache of graph distributions.
//!
//! One file per (function spec, modulus): a text header line followed by the
//! dense multiplicity array as little-endian u32. A header mismatch (version
//! bump, different spec) is treated as a miss.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sidon::{ExcludeDistribution, PointSet};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "SIDON_CACHE_DIR";

/// Bumped whenever the stored layout or the computation changes.
pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '=' | '-' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `explicit`, else `$SIDON_CACHE_DIR`, else no cache.
    pub fn resolve(explicit: Option<&Path>) -> Option<Self> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn header(label: &str, modulus: u32) -> String {
        format!("sidon-cache v{CACHE_VERSION} {label} modulus={modulus:#x}\n")
    }

    pub fn path_for(&self, label: &str, modulus: u32) -> PathBuf {
        self.dir.join(format!(
            "{}_m{modulus:x}.v{CACHE_VERSION}.bin",
            sanitize(label)
        ))
    }

    pub fn load(&self, label: &str, modulus: u32, set: &PointSet) -> Result<Option<ExcludeDistribution>> {
        let path = self.path_for(label, modulus);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(path, e)),
        };
        let header = Self::header(label, modulus);
        let Some(body) = bytes.strip_prefix(header.as_bytes()) else {
            return Ok(None);
        };
        if body.len() != 4 * set.space_size() {
            return Ok(None);
        }
        let mult = body
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        ExcludeDistribution::from_mult(set.clone(), mult).map(Some)
    }

    pub fn store(&self, label: &str, modulus: u32, dist: &ExcludeDistribution) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let mut bytes = Self::header(label, modulus).into_bytes();
        bytes.reserve(4 * dist.mult_array().len());
        for &k in dist.mult_array() {
            bytes.extend_from_slice(&k.to_le_bytes());
        }
        let path = self.path_for(label, modulus);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &bytes).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
    }
}
