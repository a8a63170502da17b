use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{bundled_zeros, parse_zeros, sha256_hex, LoadOptions, ZeroError, ZeroSet, BUNDLED_SOURCE};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "LINNIK_ZEROS_CACHE";

const BUILTIN_REGISTRY: &str = r#"
[sources.odlyzko-zeros1]
url = "https://www-users.cse.umn.edu/~odlyzko/zeta_tables/zeros1"
description = "first 100,000 zeros, accurate to within 3e-9"

[sources.odlyzko-zeros2]
url = "https://www-users.cse.umn.edu/~odlyzko/zeta_tables/zeros2"
description = "first 2,001,052 zeros, accurate to within 4e-9"
"#;

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct SourceEntry {
    pub url: String,
    /// Expected SHA-256 of the downloaded bytes, lower-case hex.
    #[serde(default)]
    pub sha256: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
}

/// Maps source ids to download locations.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
pub struct Registry {
    #[serde(default)]
    pub sources: BTreeMap<String, SourceEntry>,
}

impl Registry {
    pub fn builtin() -> Self {
        Self::from_toml(BUILTIN_REGISTRY).expect("builtin registry parses")
    }

    pub fn from_toml(text: &str) -> Result<Self, ZeroError> {
        let reg: Registry = toml::from_str(text).map_err(|e| ZeroError::Registry(e.to_string()))?;
        for id in reg.sources.keys() {
            check_id(id)?;
        }
        Ok(reg)
    }

    pub fn load(path: &Path) -> Result<Self, ZeroError> {
        let text = fs::read_to_string(path)
            .map_err(|source| ZeroError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    /// Entries of `other` replace same-named entries here.
    pub fn merged(mut self, other: Registry) -> Self {
        self.sources.extend(other.sources);
        self
    }

    pub fn get(&self, id: &str) -> Option<&SourceEntry> {
        self.sources.get(id)
    }
}

fn check_id(id: &str) -> Result<(), ZeroError> {
    let ok = !id.is_empty()
        && id != BUNDLED_SOURCE
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        && !id.starts_with('.');
    if ok {
        Ok(())
    } else {
        Err(ZeroError::Registry(format!("invalid source id '{id}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Missing,
    Valid { sha256: String },
    Corrupt { recorded: String, actual: String },
}

/// Directory of downloaded tables, each with a `.sha256` sidecar.
#[derive(Clone, Debug)]
pub struct ZeroCache {
    dir: PathBuf,
}

impl ZeroCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$LINNIK_ZEROS_CACHE`, else `$XDG_CACHE_HOME/linnik/zeros`, else
    /// `$HOME/.cache/linnik/zeros`, else a directory under the system temp dir.
    pub fn from_env() -> Self {
        let var = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        let dir = var(CACHE_ENV)
            .or_else(|| var("XDG_CACHE_HOME").map(|p| p.join("linnik").join("zeros")))
            .or_else(|| var("HOME").map(|p| p.join(".cache").join("linnik").join("zeros")))
            .unwrap_or_else(|| std::env::temp_dir().join("linnik-zeros"));
        Self::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn data_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.txt"))
    }

    fn sum_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.txt.sha256"))
    }

    pub fn status(&self, id: &str) -> CacheStatus {
        let Ok(bytes) = fs::read(self.data_path(id)) else {
            return CacheStatus::Missing;
        };
        let actual = sha256_hex(&bytes);
        match fs::read_to_string(self.sum_path(id)) {
            Ok(recorded) if recorded.trim() == actual => CacheStatus::Valid { sha256: actual },
            Ok(recorded) => CacheStatus::Corrupt { recorded: recorded.trim().to_string(), actual },
            Err(_) => CacheStatus::Corrupt { recorded: String::new(), actual },
        }
    }

    fn read(&self, id: &str) -> Result<String, ZeroError> {
        let p = self.data_path(id);
        fs::read_to_string(&p).map_err(|source| ZeroError::Io { path: p, source })
    }

    fn store(&self, id: &str, bytes: &[u8], sha: &str) -> Result<(), ZeroError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| ZeroError::Io { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io(&self.dir))?;
        let data = self.data_path(id);
        let tmp = self.dir.join(format!(".{id}.partial"));
        fs::write(&tmp, bytes).map_err(io(&tmp))?;
        fs::rename(&tmp, &data).map_err(io(&data))?;
        let sum = self.sum_path(id);
        fs::write(&sum, format!("{sha}\n")).map_err(io(&sum))
    }

    /// Removes one cached table; returns whether anything was deleted.
    pub fn purge(&self, id: &str) -> Result<bool, ZeroError> {
        check_id(id)?;
        let mut removed = false;
        for p in [self.data_path(id), self.sum_path(id)] {
            match fs::remove_file(&p) {
                Ok(()) => removed = true,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(source) => return Err(ZeroError::Io { path: p, source }),
            }
        }
        Ok(removed)
    }

    /// Ids of the tables currently in the cache.
    pub fn entries(&self) -> Vec<String> {
        let Ok(rd) = fs::read_dir(&self.dir) else {
            return Vec::new();
        };
        let mut ids: Vec<String> = rd
            .filter_map(|e| e.ok())
            .filter_map(|e| e.file_name().to_str().map(str::to_string))
            .filter_map(|n| n.strip_suffix(".txt").map(str::to_string))
            .filter(|n| !n.starts_with('.'))
            .collect();
        ids.sort();
        ids
    }
}

fn download(url: &str) -> Result<Vec<u8>, ZeroError> {
    if let Some(path) = url.strip_prefix("file://") {
        return fs::read(path).map_err(|source| ZeroError::Io { path: path.into(), source });
    }
    http_get(url)
}

#[cfg(feature = "fetch")]
fn http_get(url: &str) -> Result<Vec<u8>, ZeroError> {
    const LIMIT: u64 = 512 * 1024 * 1024;
    let mut resp = ureq::get(url).call().map_err(|e| ZeroError::Fetch(format!("{url}: {e}")))?;
    resp.body_mut()
        .with_config()
        .limit(LIMIT)
        .read_to_vec()
        .map_err(|e| ZeroError::Fetch(format!("{url}: {e}")))
}

#[cfg(not(feature = "fetch"))]
fn http_get(_url: &str) -> Result<Vec<u8>, ZeroError> {
    Err(ZeroError::FetchDisabled)
}

/// Returns the zeros for `source_id`, downloading and caching them first if
/// needed. A cached copy is used only when its sidecar checksum matches and,
/// if the registry pins a checksum, that one too; otherwise it is fetched
/// again. Downloads that fail the pinned checksum or validation are not cached.
pub fn fetch_zeros(
    source_id: &str,
    registry: &Registry,
    cache: &ZeroCache,
    opts: LoadOptions,
) -> Result<ZeroSet, ZeroError> {
    if source_id == BUNDLED_SOURCE {
        return Ok(bundled_zeros());
    }
    check_id(source_id)?;
    let entry = registry.get(source_id).ok_or_else(|| ZeroError::UnknownSource(source_id.into()))?;
    let pinned = entry.sha256.as_deref().map(str::to_ascii_lowercase);
    if let CacheStatus::Valid { sha256 } = cache.status(source_id) {
        if pinned.as_deref().is_none_or(|p| p == sha256) {
            let text = cache.read(source_id)?;
            return parse_zeros(&text, source_id, opts);
        }
    }
    let bytes = download(&entry.url)?;
    let sha = sha256_hex(&bytes);
    if let Some(expected) = pinned {
        if expected != sha {
            return Err(ZeroError::ChecksumMismatch {
                source_id: source_id.into(),
                expected,
                found: sha,
            });
        }
    }
    let text = String::from_utf8(bytes)
        .map_err(|_| ZeroError::Parse { line: 0, msg: "table is not UTF-8 text".into() })?;
    let set = parse_zeros(&text, source_id, opts)?;
    cache.store(source_id, text.as_bytes(), &sha)?;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_registry() {
        let r = Registry::builtin();
        assert!(r.get("odlyzko-zeros1").unwrap().url.starts_with("https://"));
    }

    #[test]
    fn rejects_bad_ids() {
        assert!(Registry::from_toml("[sources.\"../x\"]\nurl = \"file:///x\"\n").is_err());
        assert!(Registry::from_toml("[sources.bundled]\nurl = \"file:///x\"\n").is_err());
        assert!(Registry::from_toml("sources = 3").is_err());
    }

    #[test]
    fn bundled_needs_no_registry() {
        let dir = tempfile::tempdir().unwrap();
        let z = fetch_zeros("bundled", &Registry::default(), &ZeroCache::new(dir.path()), LoadOptions::default())
            .unwrap();
        assert_eq!(z.len(), 100);
        assert!(ZeroCache::new(dir.path()).entries().is_empty());
    }
}
