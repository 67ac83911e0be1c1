//! On-disk cache of Hall bases, keyed by the generator parameters.
//!
//! Files are canonical JSON lists of bracket serializations with weights,
//! named by the parameter string and its content hash plus a format
//! version; a stale or damaged file is regenerated and overwritten.
//! Writers go through a temp file and rename, so concurrent readers see
//! either the old or the new file, never a torn one.

use std::fs;
use std::path::{Path, PathBuf};

use linkhom_core::hall::{generate, HallBasis};

use crate::formats::HallEntryJson;

const FORMAT_VERSION: u32 = 1;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn cache_file(dir: &Path, rank: u32, max_weight: u32, repeat_free: bool) -> PathBuf {
    let params = format!(
        "r{rank}-w{max_weight}-nr{}-v{FORMAT_VERSION}",
        u8::from(repeat_free)
    );
    dir.join(format!(
        "hall-{params}-{:016x}.json",
        fnv1a(params.as_bytes())
    ))
}

fn validate_entries(
    rank: u32,
    max_weight: u32,
    repeat_free: bool,
    entries: &[HallEntryJson],
) -> Option<HallBasis> {
    // from_serials re-validates against a fresh enumeration, which costs
    // milliseconds at desk scale; the cache is a stable artifact, not a
    // speed hack
    let serials: Vec<String> = entries.iter().map(|e| e.comm.clone()).collect();
    let basis = HallBasis::from_serials(rank, max_weight, repeat_free, &serials).ok()?;
    entries
        .iter()
        .zip(basis.elements())
        .all(|(e, c)| e.weight == c.weight())
        .then_some(basis)
}

/// Loads the basis from cache when present and valid, otherwise generates
/// and stores it.
pub fn load_or_generate(dir: &Path, rank: u32, max_weight: u32, repeat_free: bool) -> HallBasis {
    let path = cache_file(dir, rank, max_weight, repeat_free);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(entries) = serde_json::from_str::<Vec<HallEntryJson>>(&text) {
            if let Some(basis) = validate_entries(rank, max_weight, repeat_free, &entries) {
                return basis;
            }
        }
    }

    let basis = generate(rank, max_weight, repeat_free);
    let entries: Vec<HallEntryJson> = basis
        .elements()
        .iter()
        .map(|c| HallEntryJson {
            comm: c.serial(),
            weight: c.weight(),
        })
        .collect();
    if fs::create_dir_all(dir).is_ok() {
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if let Ok(json) = serde_json::to_string(&entries) {
            if fs::write(&tmp, json).is_ok() {
                let _ = fs::rename(&tmp, &path);
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_and_invalidation() {
        let dir = tempfile::tempdir().unwrap();
        let first = load_or_generate(dir.path(), 3, 3, true);
        assert_eq!(first, generate(3, 3, true));
        let path = cache_file(dir.path(), 3, 3, true);
        assert!(path.exists());

        // valid file round-trips
        let second = load_or_generate(dir.path(), 3, 3, true);
        assert_eq!(second, first);

        // corrupted file is regenerated
        fs::write(&path, "[{\"comm\": \"x1\", \"weight\": 9}]").unwrap();
        let third = load_or_generate(dir.path(), 3, 3, true);
        assert_eq!(third, first);
        let reloaded: Vec<HallEntryJson> =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(reloaded.len(), first.len());
    }
}
