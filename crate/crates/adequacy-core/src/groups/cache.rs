//! On-disk cache for enumerated groups.
//!
//! Enumerating a large matrix group is the dominant cost of several scans, so
//! finished enumerations can be persisted and reloaded with their exact
//! element ordering. A cache file is keyed by the generator family (shape
//! descriptor plus the generators' canonical bytes) and holds a JSON header,
//! the fixed-width canonical byte stream of all elements (checksummed), and
//! the breadth-first tree arrays. Reloading reproduces an identical group:
//! same indices, same generator table.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::element::{GroupElement, ShapeDescriptor};
use super::group::FiniteGroup;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"ADQGRP01";

/// How `load_or_build` obtained its group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    /// Loaded from an existing cache file.
    Hit,
    /// Enumerated now and written to the cache directory.
    BuiltAndSaved,
    /// Enumerated now; not persisted (no directory, or an uncacheable shape).
    BuiltUncached,
}

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    shape: ShapeDescriptor,
    order: u64,
    generator_count: u32,
    element_size: u32,
    checksum: String,
}

/// Cache key for a generator list: hash of the shape descriptor and the
/// generators' canonical bytes. The enumeration cap is deliberately not part
/// of the key; a cached group is valid under any cap at least its order.
pub fn cache_key(generators: &[GroupElement]) -> Result<String> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidInput("a group needs at least one generator".into()))?;
    let shape = first
        .shape()
        .ok_or_else(|| Error::InvalidInput("quotient elements have no cacheable shape".into()))?;
    let shape_json = serde_json::to_vec(&shape)
        .map_err(|e| Error::CacheFormat(format!("shape serialization failed: {e}")))?;
    let mut hasher = Sha256::new();
    hasher.update(&shape_json);
    for g in generators {
        let bytes = g.canonical_bytes();
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(&bytes);
    }
    Ok(hex::encode(hasher.finalize()))
}

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.grp"))
}

fn push_u32s(buf: &mut Vec<u8>, values: &[u32]) {
    for &v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
}

fn read_u32s(bytes: &[u8], at: &mut usize, count: usize) -> Result<Vec<u32>> {
    let need = count * 4;
    if *at + need > bytes.len() {
        return Err(Error::CacheFormat("truncated index table".into()));
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let base = *at + 4 * k;
        out.push(u32::from_le_bytes([
            bytes[base],
            bytes[base + 1],
            bytes[base + 2],
            bytes[base + 3],
        ]));
    }
    *at += need;
    Ok(out)
}

fn save(path: &Path, group: &FiniteGroup) -> Result<()> {
    let shape = group.elements()[0]
        .shape()
        .ok_or_else(|| Error::InvalidInput("quotient elements have no cacheable shape".into()))?;
    let order = group.order();
    let mut stream = Vec::new();
    let mut element_size = 0u32;
    for (i, el) in group.elements().iter().enumerate() {
        let bytes = el.canonical_bytes();
        if i == 0 {
            element_size = bytes.len() as u32;
        } else if bytes.len() as u32 != element_size {
            return Err(Error::CacheFormat("variable element encoding size".into()));
        }
        stream.extend_from_slice(&bytes);
    }
    let checksum = hex::encode(Sha256::digest(&stream));
    let header = CacheHeader {
        shape,
        order,
        generator_count: group.generator_count() as u32,
        element_size,
        checksum,
    };
    let header_json = serde_json::to_vec(&header)
        .map_err(|e| Error::CacheFormat(format!("header serialization failed: {e}")))?;

    let mut buf = Vec::with_capacity(16 + header_json.len() + stream.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(header_json.len() as u32).to_le_bytes());
    buf.extend_from_slice(&header_json);
    buf.extend_from_slice(&stream);
    push_u32s(&mut buf, group.bfs_parent());
    push_u32s(&mut buf, group.bfs_gen());
    for row in group.gen_table() {
        push_u32s(&mut buf, row);
    }

    let tmp = path.with_extension("grp.tmp");
    fs::write(&tmp, &buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn load(path: &Path, generators: &[GroupElement], cap: u64) -> Result<FiniteGroup> {
    let bytes = fs::read(path)?;
    if bytes.len() < 12 || &bytes[0..8] != MAGIC {
        return Err(Error::CacheFormat("bad magic".into()));
    }
    let header_len =
        u32::from_le_bytes([bytes[8], bytes[9], bytes[10], bytes[11]]) as usize;
    let mut at = 12usize;
    if at + header_len > bytes.len() {
        return Err(Error::CacheFormat("truncated header".into()));
    }
    let header: CacheHeader = serde_json::from_slice(&bytes[at..at + header_len])
        .map_err(|e| Error::CacheFormat(format!("header parse failed: {e}")))?;
    at += header_len;

    let requested_shape = generators[0]
        .shape()
        .ok_or_else(|| Error::InvalidInput("quotient elements have no cacheable shape".into()))?;
    if header.shape != requested_shape {
        return Err(Error::CacheFormat("cached shape differs from request".into()));
    }
    if header.generator_count as usize != generators.len() {
        return Err(Error::CacheFormat("cached generator count differs".into()));
    }
    if header.order > cap {
        return Err(Error::CapExceeded { cap });
    }
    let n = header.order as usize;
    let esize = header.element_size as usize;
    let stream_len = n
        .checked_mul(esize)
        .ok_or_else(|| Error::CacheFormat("element stream overflows".into()))?;
    if at + stream_len > bytes.len() {
        return Err(Error::CacheFormat("truncated element stream".into()));
    }
    let stream = &bytes[at..at + stream_len];
    if hex::encode(Sha256::digest(stream)) != header.checksum {
        return Err(Error::CacheFormat("element stream checksum mismatch".into()));
    }
    let mut elements = Vec::with_capacity(n);
    for i in 0..n {
        let chunk = &stream[i * esize..(i + 1) * esize];
        elements.push(GroupElement::decode(&header.shape, chunk)?);
    }
    at += stream_len;

    let parent = read_u32s(&bytes, &mut at, n)?;
    let gen_of = read_u32s(&bytes, &mut at, n)?;
    let mut gen_table = Vec::with_capacity(generators.len());
    for _ in 0..generators.len() {
        gen_table.push(read_u32s(&bytes, &mut at, n)?);
    }
    if at != bytes.len() {
        return Err(Error::CacheFormat("trailing bytes".into()));
    }
    FiniteGroup::from_parts(generators.to_vec(), elements, parent, gen_of, gen_table)
}

/// Load the group generated by `generators` from `dir` if cached, otherwise
/// enumerate it (respecting `cap`) and persist it when possible.
pub fn load_or_build(
    dir: Option<&Path>,
    generators: Vec<GroupElement>,
    cap: u64,
) -> Result<(Arc<FiniteGroup>, CacheStatus)> {
    let cacheable = dir.is_some()
        && generators.first().map(|g| g.shape().is_some()).unwrap_or(false);
    if !cacheable {
        let group = FiniteGroup::enumerate(generators, cap)?;
        return Ok((Arc::new(group), CacheStatus::BuiltUncached));
    }
    let dir = dir.expect("checked above");
    let key = cache_key(&generators)?;
    let path = cache_path(dir, &key);
    if path.exists() {
        let group = load(&path, &generators, cap)?;
        return Ok((Arc::new(group), CacheStatus::Hit));
    }
    let group = FiniteGroup::enumerate(generators, cap)?;
    fs::create_dir_all(dir)?;
    save(&path, &group)?;
    Ok((Arc::new(group), CacheStatus::BuiltAndSaved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::Matrix;

    fn s4_gens() -> Vec<GroupElement> {
        vec![
            GroupElement::permutation(vec![1, 0, 2, 3]).unwrap(),
            GroupElement::permutation(vec![1, 2, 3, 0]).unwrap(),
        ]
    }

    #[test]
    fn roundtrip_reproduces_identical_ordering() {
        let dir = tempfile::tempdir().unwrap();
        let (built, st1) = load_or_build(Some(dir.path()), s4_gens(), 100).unwrap();
        assert_eq!(st1, CacheStatus::BuiltAndSaved);
        let (loaded, st2) = load_or_build(Some(dir.path()), s4_gens(), 100).unwrap();
        assert_eq!(st2, CacheStatus::Hit);
        assert_eq!(built.order(), 24);
        assert_eq!(loaded.order(), 24);
        assert_eq!(built.elements(), loaded.elements());
        for a in 0..24u32 {
            for b in 0..24u32 {
                assert_eq!(built.mul_indices(a, b), loaded.mul_indices(a, b));
            }
        }
    }

    #[test]
    fn matrix_group_roundtrip_over_extension_field() {
        let dir = tempfile::tempdir().unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let x = f4.element_of_order(3).unwrap();
        let gens = vec![GroupElement::matrix(
            Matrix::from_scalars(&f4, &[vec![x, f4.zero()], vec![f4.zero(), f4.one()]]).unwrap(),
        )
        .unwrap()];
        let (built, _) = load_or_build(Some(dir.path()), gens.clone(), 100).unwrap();
        let (loaded, st) = load_or_build(Some(dir.path()), gens, 100).unwrap();
        assert_eq!(st, CacheStatus::Hit);
        assert_eq!(built.order(), 3);
        assert_eq!(built.elements(), loaded.elements());
    }

    #[test]
    fn cap_applies_to_cached_groups_too() {
        let dir = tempfile::tempdir().unwrap();
        load_or_build(Some(dir.path()), s4_gens(), 100).unwrap();
        let err = load_or_build(Some(dir.path()), s4_gens(), 10).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 10 }));
    }

    #[test]
    fn tampered_stream_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        load_or_build(Some(dir.path()), s4_gens(), 100).unwrap();
        let key = cache_key(&s4_gens()).unwrap();
        let path = cache_path(dir.path(), &key);
        let mut bytes = fs::read(&path).unwrap();
        // Flip one bit inside the element stream (past magic + header).
        let hlen = u32::from_le_bytes([bytes[8], bytes[9], bytes[10], bytes[11]]) as usize;
        let target = 12 + hlen + 5;
        bytes[target] ^= 0x40;
        fs::write(&path, &bytes).unwrap();
        let err = load_or_build(Some(dir.path()), s4_gens(), 100).unwrap_err();
        assert!(matches!(err, Error::CacheFormat(_)));
    }

    #[test]
    fn missing_directory_just_builds() {
        let (group, st) = load_or_build(None, s4_gens(), 100).unwrap();
        assert_eq!(st, CacheStatus::BuiltUncached);
        assert_eq!(group.order(), 24);
    }

    #[test]
    fn key_depends_on_generator_order_and_values() {
        let a = cache_key(&s4_gens()).unwrap();
        let mut rev = s4_gens();
        rev.reverse();
        let b = cache_key(&rev).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, cache_key(&s4_gens()).unwrap());
    }
}
