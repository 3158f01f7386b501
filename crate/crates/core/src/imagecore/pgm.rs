//! Binary PGM (`P5`, maxval 255) codec.
//!
//! Writing always emits the canonical header `P5\n<w> <h>\n255\n`, so a file
//! written here decodes and re-encodes to identical bytes.

use std::fs;
use std::path::Path;

use super::{BinaryMap, GrayImage, ImageError};

struct Header {
    width: usize,
    height: usize,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header, ImageError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(ImageError::Pgm("missing P5 magic".into()));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(ImageError::Pgm("truncated header".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(ImageError::Pgm(format!("expected a number at byte {start}")));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .expect("ascii digits")
            .parse()
            .map_err(|e| ImageError::Pgm(format!("bad header number: {e}")))?;
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(ImageError::Pgm("header must end with one whitespace byte".into())),
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(ImageError::Pgm(format!("only maxval 255 is supported, got {maxval}")));
    }
    if width == 0 || height == 0 {
        return Err(ImageError::Pgm(format!("empty raster {width}x{height}")));
    }
    let need = width
        .checked_mul(height)
        .ok_or_else(|| ImageError::Pgm("raster too large".into()))?;
    if bytes.len() - pos < need {
        return Err(ImageError::Pgm(format!(
            "expected {need} pixel bytes, found {}",
            bytes.len() - pos
        )));
    }
    Ok(Header {
        width,
        height,
        data_start: pos,
    })
}

fn header(width: usize, height: usize) -> Vec<u8> {
    format!("P5\n{width} {height}\n255\n").into_bytes()
}

/// Rounds to the nearest 8-bit level.
#[inline]
pub fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

pub fn decode_gray(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    let h = parse_header(bytes)?;
    let px = &bytes[h.data_start..h.data_start + h.width * h.height];
    GrayImage::new(h.width, h.height, px.iter().map(|&b| f64::from(b)).collect())
}

pub fn encode_gray(img: &GrayImage) -> Vec<u8> {
    let mut out = header(img.width(), img.height());
    out.extend(img.data().iter().map(|&v| quantize(v)));
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<BinaryMap, ImageError> {
    let h = parse_header(bytes)?;
    let px = &bytes[h.data_start..h.data_start + h.width * h.height];
    BinaryMap::new(h.width, h.height, px.to_vec())
}

pub fn encode_binary(bm: &BinaryMap) -> Vec<u8> {
    let mut out = header(bm.width(), bm.height());
    out.extend_from_slice(bm.data());
    out
}

pub fn read_gray(path: impl AsRef<Path>) -> Result<GrayImage, ImageError> {
    let path = path.as_ref();
    decode_gray(&fs::read(path).map_err(|e| ImageError::io(path, e))?)
}

pub fn write_gray(path: impl AsRef<Path>, img: &GrayImage) -> Result<(), ImageError> {
    let path = path.as_ref();
    fs::write(path, encode_gray(img)).map_err(|e| ImageError::io(path, e))?;
    Ok(())
}

pub fn read_binary(path: impl AsRef<Path>) -> Result<BinaryMap, ImageError> {
    let path = path.as_ref();
    decode_binary(&fs::read(path).map_err(|e| ImageError::io(path, e))?)
}

pub fn write_binary(path: impl AsRef<Path>, bm: &BinaryMap) -> Result<(), ImageError> {
    let path = path.as_ref();
    fs::write(path, encode_binary(bm)).map_err(|e| ImageError::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments() {
        let mut bytes = b"P5 # comment\n2 # w\n1\n255\n".to_vec();
        bytes.extend([7, 200]);
        let img = decode_gray(&bytes).unwrap();
        assert_eq!(img.data(), &[7.0, 200.0]);
    }

    #[test]
    fn rejects_other_formats() {
        assert!(decode_gray(b"P2\n1 1\n255\n0").is_err());
        assert!(decode_gray(b"P5\n1 1\n65535\n\0\0").is_err());
        assert!(decode_gray(b"P5\n2 2\n255\n\0").is_err());
        let mut bytes = b"P5\n2 1\n255\n".to_vec();
        bytes.extend([0, 128]);
        assert!(decode_binary(&bytes).is_err());
    }

    proptest! {
        #[test]
        fn canonical_files_round_trip_bit_exact(
            w in 1usize..20, h in 1usize..20, seed in any::<u64>()
        ) {
            let mut state = seed;
            let mut bytes = header(w, h);
            for _ in 0..w * h {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                bytes.push((state >> 56) as u8);
            }
            let img = decode_gray(&bytes).unwrap();
            prop_assert_eq!(encode_gray(&img), bytes);
        }
    }
}
