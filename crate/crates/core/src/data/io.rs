//! On-disk feature stores.
//!
//! LFS1 layout (all integers little-endian):
//!
//! ```text
//! "LFS1" | u32 version = 1 | u32 N | u32 d | N*d f32 row-major
//! ```
//!
//! The manifest lives next to the binary as a JSON array of
//! `{"image_id", "concept_id", "class_id"}` objects, one per row.

use std::fs;
use std::path::{Path, PathBuf};

use crate::data::{FeatureStore, ManifestEntry};
use crate::error::{Error, Result};
use crate::numerics::Mat64;

pub const LFS1_MAGIC: &[u8; 4] = b"LFS1";
pub const LFS1_VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

/// `features.lfs1` -> `features.manifest.json`
pub fn manifest_path(store_path: &Path) -> PathBuf {
    store_path.with_extension("manifest.json")
}

pub fn encode_lfs1(store: &FeatureStore) -> Vec<u8> {
    let (n, d) = store.features().shape();
    let mut out = Vec::with_capacity(HEADER_LEN + n * d * 4);
    out.extend_from_slice(LFS1_MAGIC);
    out.extend_from_slice(&LFS1_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(d as u32).to_le_bytes());
    for &x in store.features().as_slice() {
        out.extend_from_slice(&(x as f32).to_le_bytes());
    }
    out
}

/// Decodes the binary part of a store; rows are not yet normalized.
pub fn decode_lfs1(bytes: &[u8]) -> Result<Mat64> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::format(format!(
            "file is {} bytes, shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[..4] != LFS1_MAGIC {
        return Err(Error::format(format!("bad magic {:?}", &bytes[..4])));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let version = word(4);
    if version != LFS1_VERSION as usize {
        return Err(Error::format(format!("unsupported LFS1 version {version}")));
    }
    let (n, d) = (word(8), word(12));
    if n == 0 || d == 0 {
        return Err(Error::format(format!("empty store shape {n}x{d}")));
    }
    let payload = &bytes[HEADER_LEN..];
    let row_bytes = d * 4;
    if payload.len() != n * row_bytes {
        let held = payload.len() / row_bytes;
        return Err(Error::format(format!(
            "header declares N={n} rows of d={d} but payload holds {held} rows ({} bytes)",
            payload.len()
        )));
    }
    let mut data = Vec::with_capacity(n * d);
    for (r, row) in payload.chunks_exact(row_bytes).enumerate() {
        for chunk in row.chunks_exact(4) {
            let v = f32::from_le_bytes(chunk.try_into().unwrap());
            if !v.is_finite() {
                return Err(Error::format_at(r, "non-finite feature value"));
            }
            data.push(v as f64);
        }
    }
    Mat64::from_vec(n, d, data)
}

pub fn save_feature_store(store: &FeatureStore, path: &Path) -> Result<()> {
    fs::write(path, encode_lfs1(store)).map_err(|e| Error::io(path, e))?;
    let mpath = manifest_path(path);
    let json = serde_json::to_vec_pretty(store.manifest())?;
    fs::write(&mpath, json).map_err(|e| Error::io(&mpath, e))
}

pub fn load_feature_store(path: &Path) -> Result<FeatureStore> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let features = decode_lfs1(&bytes)?;
    let mpath = manifest_path(path);
    let text = fs::read(&mpath).map_err(|e| Error::io(&mpath, e))?;
    let manifest: Vec<ManifestEntry> = serde_json::from_slice(&text)
        .map_err(|e| Error::format(format!("manifest {}: {e}", mpath.display())))?;
    FeatureStore::new(features, manifest)
}

/// Reads `image_id, concept_id, class_id, f_1, ..., f_d` records.
///
/// A header line is skipped when its second field is not an integer. An
/// empty `class_id` field means no class.
pub fn load_feature_csv(path: &Path) -> Result<FeatureStore> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::format(format!("{other:?}")),
        })?;

    let mut manifest = Vec::new();
    let mut data = Vec::new();
    let mut dim = None;
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::format(format!("csv: {e}")))?;
        if record.len() < 4 {
            return Err(Error::format_at(
                manifest.len(),
                format!("line {} has {} fields, need at least 4", line + 1, record.len()),
            ));
        }
        let concept_id: i64 = match record[1].parse() {
            Ok(c) => c,
            Err(_) if line == 0 => continue,
            Err(_) => {
                return Err(Error::format_at(
                    manifest.len(),
                    format!("bad concept_id {:?}", &record[1]),
                ))
            }
        };
        let class_id = match &record[2] {
            "" => None,
            s => Some(s.parse::<i64>().map_err(|_| {
                Error::format_at(manifest.len(), format!("bad class_id {s:?}"))
            })?),
        };
        let d = record.len() - 3;
        if *dim.get_or_insert(d) != d {
            return Err(Error::format_at(
                manifest.len(),
                format!("row has {d} features, expected {}", dim.unwrap()),
            ));
        }
        for field in record.iter().skip(3) {
            let v: f64 = field.parse().map_err(|_| {
                Error::format_at(manifest.len(), format!("bad feature value {field:?}"))
            })?;
            data.push(v);
        }
        manifest.push(ManifestEntry {
            image_id: record[0].to_string(),
            concept_id,
            class_id,
        });
    }
    let d = dim.ok_or_else(|| Error::format("csv holds no records"))?;
    let features = Mat64::from_vec(manifest.len(), d, data)
        .map_err(|e| Error::format(format!("csv features: {e}")))?;
    FeatureStore::new(features, manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> FeatureStore {
        let m = Mat64::from_vec(2, 3, vec![1.0, 2.0, 2.0, 0.0, -3.0, 4.0]).unwrap();
        let manifest = vec![
            ManifestEntry {
                image_id: "a".into(),
                concept_id: 0,
                class_id: Some(0),
            },
            ManifestEntry {
                image_id: "b".into(),
                concept_id: 1,
                class_id: None,
            },
        ];
        FeatureStore::new(m, manifest).unwrap()
    }

    #[test]
    fn minimal_file_loads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.lfs1");
        save_feature_store(&tiny(), &path).unwrap();
        let back = load_feature_store(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.dim(), 3);
        for r in 0..2 {
            let n: f64 = back.row(r).iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert_eq!(back.manifest(), tiny().manifest());
    }

    #[test]
    fn short_payload_is_rejected() {
        let store = tiny();
        let mut bytes = encode_lfs1(&store);
        // claim 5 rows while holding 2
        bytes[8..12].copy_from_slice(&5u32.to_le_bytes());
        let err = decode_lfs1(&bytes).unwrap_err();
        assert!(err.to_string().contains("N=5"), "{err}");
    }

    #[test]
    fn bad_magic_is_rejected() {
        let mut bytes = encode_lfs1(&tiny());
        bytes[0] = b'X';
        assert!(matches!(decode_lfs1(&bytes), Err(Error::Format { .. })));
    }

    #[test]
    fn zero_row_names_index() {
        let mut bytes = encode_lfs1(&tiny());
        let start = HEADER_LEN + 3 * 4;
        bytes[start..start + 12].fill(0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.lfs1");
        fs::write(&path, &bytes).unwrap();
        fs::write(
            manifest_path(&path),
            serde_json::to_vec(tiny().manifest()).unwrap(),
        )
        .unwrap();
        let err = load_feature_store(&path).unwrap_err();
        assert!(matches!(err, Error::Format { row: Some(1), .. }), "{err}");
    }

    #[test]
    fn csv_import() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        fs::write(
            &path,
            "image_id,concept_id,class_id,f0,f1\nimg0,3,1,3.0,4.0\nimg1,4,,0.0,2.0\n",
        )
        .unwrap();
        let s = load_feature_csv(&path).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.row(0), &[0.6, 0.8]);
        assert_eq!(s.entry(1).class_id, None);
        assert_eq!(s.concept(1), 4);
    }
}
