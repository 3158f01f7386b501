//! UV map files.
//!
//! Layout: one line of JSON (the [`UvMapHeader`]) terminated by `\n`,
//! followed by `record_count` little-endian records of 24 bytes each:
//! `point index (u64) | u (f64) | v (f64)`, with `u` and `v` in pixels.
//! Only points carrying a UV coordinate are written, in index order.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GeometryError, UnfoldedSurface, UvBounds};

pub const UVMAP_FORMAT: &str = "fpforge-uvmap";
pub const UVMAP_VERSION: u32 = 1;
pub const RECORD_BYTES: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UvMapHeader {
    pub format: String,
    pub version: u32,
    /// Points in the source cloud.
    pub point_count: usize,
    /// Records that follow the header.
    pub record_count: usize,
    pub ppi: f64,
    pub bounds: UvBounds,
    pub skipped_sections: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UvRecord {
    pub index: u64,
    pub u: f64,
    pub v: f64,
}

pub fn encode_uvmap(surface: &UnfoldedSurface) -> Vec<u8> {
    let records: Vec<UvRecord> = surface
        .uv_of_point
        .iter()
        .enumerate()
        .filter_map(|(i, uv)| uv.map(|[u, v]| UvRecord { index: i as u64, u, v }))
        .collect();
    let header = UvMapHeader {
        format: UVMAP_FORMAT.into(),
        version: UVMAP_VERSION,
        point_count: surface.uv_of_point.len(),
        record_count: records.len(),
        ppi: surface.ppi,
        bounds: surface.bounds,
        skipped_sections: surface.skipped_sections,
    };
    let mut out = serde_json::to_vec(&header).expect("header serialises");
    out.push(b'\n');
    out.reserve(records.len() * RECORD_BYTES);
    for r in &records {
        out.extend_from_slice(&r.index.to_le_bytes());
        out.extend_from_slice(&r.u.to_le_bytes());
        out.extend_from_slice(&r.v.to_le_bytes());
    }
    out
}

pub fn decode_uvmap(bytes: &[u8]) -> Result<(UvMapHeader, Vec<UvRecord>), GeometryError> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| GeometryError::UvMap("missing header line".into()))?;
    let header: UvMapHeader =
        serde_json::from_slice(&bytes[..nl]).map_err(|e| GeometryError::UvMap(format!("header: {e}")))?;
    if header.format != UVMAP_FORMAT || header.version != UVMAP_VERSION {
        return Err(GeometryError::UvMap(format!(
            "unsupported format {} v{}",
            header.format, header.version
        )));
    }
    let body = &bytes[nl + 1..];
    if body.len() != header.record_count * RECORD_BYTES {
        return Err(GeometryError::UvMap(format!(
            "expected {} record bytes, found {}",
            header.record_count * RECORD_BYTES,
            body.len()
        )));
    }
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
    let records = body
        .chunks_exact(RECORD_BYTES)
        .map(|c| UvRecord {
            index: u64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
            u: f(&c[8..16]),
            v: f(&c[16..24]),
        })
        .collect();
    Ok((header, records))
}

pub fn write_uvmap(path: impl AsRef<Path>, surface: &UnfoldedSurface) -> Result<(), GeometryError> {
    let path = path.as_ref();
    fs::write(path, encode_uvmap(surface)).map_err(|e| GeometryError::io(path, e))?;
    Ok(())
}

pub fn read_uvmap(path: impl AsRef<Path>) -> Result<(UvMapHeader, Vec<UvRecord>), GeometryError> {
    let path = path.as_ref();
    decode_uvmap(&fs::read(path).map_err(|e| GeometryError::io(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_body_is_rejected() {
        let header = UvMapHeader {
            format: UVMAP_FORMAT.into(),
            version: 1,
            point_count: 2,
            record_count: 1,
            ppi: 500.0,
            bounds: UvBounds { u_min: 0.0, u_max: 0.0, v_min: 0.0, v_max: 0.0 },
            skipped_sections: 0,
        };
        let mut bytes = serde_json::to_vec(&header).unwrap();
        bytes.push(b'\n');
        bytes.extend([0u8; 23]);
        assert!(decode_uvmap(&bytes).is_err());
        bytes.push(0);
        let (_, recs) = decode_uvmap(&bytes).unwrap();
        assert_eq!(recs, vec![UvRecord { index: 0, u: 0.0, v: 0.0 }]);
    }
}
