//! Content-addressed cache of structure constants for Chevalley algebras.
//!
//! Entries are re-audited (Jacobi identity and Killing form) when loaded; a
//! damaged entry is rebuilt and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use spsym::liecore::chevalley::root_vector_index;
use spsym::liecore::matrix_forms::{build, AlgebraSpec, Presented};
use spsym::liecore::{ChevalleyOptions, LieAlgebra, StructureJson, CONVENTION_VERSION};
use spsym::rootsys::RootSystem;

use crate::CliError;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CacheStatus {
    Disabled,
    /// Matrix forms are built from their defining conditions.
    NotApplicable,
    Miss,
    Hit,
    Rebuilt(String),
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    structure: StructureJson,
}

pub fn cache_key(spec: &AlgebraSpec) -> String {
    let mut h = Sha256::new();
    h.update(format!("spsym-structure|{spec}|convention={CONVENTION_VERSION}").as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn entry_path(dir: &Path, spec: &AlgebraSpec) -> PathBuf {
    dir.join(format!("{}.json", cache_key(spec)))
}

fn load(path: &Path, key: &str) -> Result<LieAlgebra<spsym::Rational>, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let e: Entry = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    if e.key != key {
        return Err("key mismatch".into());
    }
    LieAlgebra::from_json(&e.structure).map_err(|e| e.to_string())
}

/// Builds the algebra, going through the cache for split forms.
pub fn presented(spec: &AlgebraSpec, dir: Option<&Path>) -> Result<(Presented, CacheStatus), CliError> {
    let opts = ChevalleyOptions::default();
    let (AlgebraSpec::Split(kind, rank), Some(dir)) = (spec, dir) else {
        let status = if dir.is_none() { CacheStatus::Disabled } else { CacheStatus::NotApplicable };
        return Ok((build(spec, opts)?, status));
    };
    let key = cache_key(spec);
    let path = entry_path(dir, spec);
    let status = if path.exists() {
        match load(&path, &key) {
            Ok(algebra) => {
                let rs = RootSystem::new(*kind, *rank)?;
                let idx = root_vector_index(&rs, &rs.highest_root())
                    .ok_or_else(|| CliError::Construction("highest root has no basis vector".into()))?;
                let seed = algebra.unit(idx);
                let p = Presented { spec: spec.clone(), algebra, seed, root_system: Some(rs) };
                return Ok((p, CacheStatus::Hit));
            }
            Err(e) => CacheStatus::Rebuilt(e),
        }
    } else {
        CacheStatus::Miss
    };
    let p = build(spec, opts)?;
    fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cache dir {}: {e}", dir.display())))?;
    let entry = Entry { key, structure: p.algebra.to_json() };
    let text = serde_json::to_string(&entry).map_err(|e| CliError::Construction(e.to_string()))?;
    fs::write(&path, text).map_err(|e| CliError::Config(format!("cache write {}: {e}", path.display())))?;
    Ok((p, status))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_after_miss_and_rebuild_after_damage() {
        let dir = tempfile::tempdir().unwrap();
        let spec: AlgebraSpec = "g2_split".parse().unwrap();
        let (p1, s1) = presented(&spec, Some(dir.path())).unwrap();
        assert_eq!(s1, CacheStatus::Miss);
        let (p2, s2) = presented(&spec, Some(dir.path())).unwrap();
        assert_eq!(s2, CacheStatus::Hit);
        assert_eq!(p1.algebra.to_json(), p2.algebra.to_json());
        assert_eq!(p1.seed, p2.seed);

        // flip one structure constant
        let path = entry_path(dir.path(), &spec);
        let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let num = &mut v["structure"]["c"][3][2][0][1];
        let flipped = if num.as_str().unwrap().starts_with('-') { "7" } else { "-7" };
        *num = serde_json::Value::String(flipped.into());
        fs::write(&path, v.to_string()).unwrap();
        let (p3, s3) = presented(&spec, Some(dir.path())).unwrap();
        assert!(matches!(s3, CacheStatus::Rebuilt(_)), "{s3:?}");
        assert_eq!(p3.algebra.to_json(), p1.algebra.to_json());
        assert_eq!(presented(&spec, Some(dir.path())).unwrap().1, CacheStatus::Hit);
    }

    #[test]
    fn keys_differ_by_algebra() {
        let a = cache_key(&"g2_split".parse().unwrap());
        let b = cache_key(&"f4_split".parse().unwrap());
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn matrix_forms_bypass_the_cache() {
        let dir = tempfile::tempdir().unwrap();
        let (_, s) = presented(&"sl_real:3".parse().unwrap(), Some(dir.path())).unwrap();
        assert_eq!(s, CacheStatus::NotApplicable);
    }
}
