//! Binary morphology with solid rectangular structuring elements.
//!
//! The element covers offsets `[0, se_width) x [0, se_height)` from its
//! anchor (top-left). Erosion keeps an anchor when the whole element fits
//! inside the foreground; pixels outside the image count as background.
//! Dilation paints the element at every surviving anchor, so opening is the
//! union of all element placements that fit inside the foreground.

use super::{BinaryMap, ImageError, BACKGROUND, FOREGROUND};

fn check_se(se_width: usize, se_height: usize) -> Result<(), ImageError> {
    if se_width == 0 || se_height == 0 {
        return Err(ImageError::Parameter(format!(
            "structuring element must be at least 1x1, got {se_width}x{se_height}"
        )));
    }
    Ok(())
}

/// `out[i] = all(src[i .. i + k])` along a strided line of `n` samples.
fn line_all(src: &[bool], dst: &mut [bool], n: usize, stride: usize, offset: usize, k: usize) {
    let mut run = 0usize;
    for i in (0..n).rev() {
        let idx = offset + i * stride;
        run = if src[idx] { run + 1 } else { 0 };
        dst[idx] = run >= k;
    }
}

/// `out[i] = any(src[i + 1 - k ..= i])` along a strided line.
fn line_any(src: &[bool], dst: &mut [bool], n: usize, stride: usize, offset: usize, k: usize) {
    let mut since = usize::MAX;
    for i in 0..n {
        let idx = offset + i * stride;
        since = if src[idx] { 0 } else { since.saturating_add(1) };
        dst[idx] = since < k;
    }
}

fn separable(
    bm: &BinaryMap,
    se_width: usize,
    se_height: usize,
    line: fn(&[bool], &mut [bool], usize, usize, usize, usize),
) -> BinaryMap {
    let (w, h) = bm.dims();
    let src: Vec<bool> = bm.data().iter().map(|&v| v == FOREGROUND).collect();
    let mut rows = vec![false; w * h];
    for y in 0..h {
        line(&src, &mut rows, w, 1, y * w, se_width);
    }
    let mut out = vec![false; w * h];
    for x in 0..w {
        line(&rows, &mut out, h, w, x, se_height);
    }
    BinaryMap::from_raw_unchecked(
        w,
        h,
        out.into_iter()
            .map(|fg| if fg { FOREGROUND } else { BACKGROUND })
            .collect(),
    )
}

pub fn erode(bm: &BinaryMap, se_width: usize, se_height: usize) -> Result<BinaryMap, ImageError> {
    check_se(se_width, se_height)?;
    Ok(separable(bm, se_width, se_height, line_all))
}

pub fn dilate(bm: &BinaryMap, se_width: usize, se_height: usize) -> Result<BinaryMap, ImageError> {
    check_se(se_width, se_height)?;
    Ok(separable(bm, se_width, se_height, line_any))
}

/// Erosion followed by dilation with the same element.
pub fn morph_open(bm: &BinaryMap, se_width: usize, se_height: usize) -> Result<BinaryMap, ImageError> {
    let eroded = erode(bm, se_width, se_height)?;
    dilate(&eroded, se_width, se_height)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn background_stays_background() {
        let bm = BinaryMap::background(7, 5).unwrap();
        assert_eq!(morph_open(&bm, 2, 2).unwrap(), bm);
    }

    #[test]
    fn isolated_pixel_is_removed() {
        let bm = BinaryMap::from_fn(6, 6, |x, y| x == 3 && y == 2).unwrap();
        assert_eq!(morph_open(&bm, 2, 2).unwrap().foreground_count(), 0);
    }

    #[test]
    fn solid_block_survives() {
        let bm = BinaryMap::from_fn(10, 10, |x, y| (3..7).contains(&x) && (2..6).contains(&y)).unwrap();
        assert_eq!(morph_open(&bm, 2, 2).unwrap(), bm);
    }

    #[test]
    fn thin_line_removed_by_square_but_kept_by_matching_bar() {
        let bm = BinaryMap::from_fn(8, 8, |x, y| y == 4 && (1..7).contains(&x)).unwrap();
        assert_eq!(morph_open(&bm, 2, 2).unwrap().foreground_count(), 0);
        assert_eq!(morph_open(&bm, 3, 1).unwrap(), bm);
    }

    #[test]
    fn zero_sized_element_is_rejected() {
        let bm = BinaryMap::background(3, 3).unwrap();
        assert!(morph_open(&bm, 0, 2).is_err());
    }
}
