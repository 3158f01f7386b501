use log::warn;
use nalgebra::Vector3;

use super::{slice_sections, CrossSection, FingerPointCloud, GeometryError};
use crate::imagecore::{GrayImage, BACKGROUND};
use crate::px_per_mm;

/// Minimum cloud size accepted for unfolding.
pub const MIN_UNFOLD_POINTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct UvBounds {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

/// UV parameterisation of a rectified cloud. `u` and `v` are in pixels at
/// [`UnfoldedSurface::ppi`]; `u` is the signed geodesic distance from the
/// `x = 0` plane and `v` equals `y`.
#[derive(Debug, Clone)]
pub struct UnfoldedSurface {
    pub ppi: f64,
    pub points: Vec<Vector3<f64>>,
    pub sections: Vec<CrossSection>,
    /// Per input point; `None` for points in dropped or skipped slabs.
    pub uv_of_point: Vec<Option<[f64; 2]>>,
    pub bounds: UvBounds,
    /// Slabs skipped because their arc never crosses `x = 0`.
    pub skipped_sections: usize,
}

impl UnfoldedSurface {
    pub fn scale(&self) -> f64 {
        px_per_mm(self.ppi)
    }

    pub fn uv(&self, point: usize) -> Option<[f64; 2]> {
        self.uv_of_point.get(point).copied().flatten()
    }

    /// Number of points carrying a UV coordinate.
    pub fn mapped_count(&self) -> usize {
        self.uv_of_point.iter().filter(|u| u.is_some()).count()
    }

    /// Index into `sections` of the slab whose centre is nearest `v = 0`.
    pub fn reference_section(&self) -> Option<usize> {
        self.sections
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.y_center.abs().total_cmp(&b.1.y_center.abs()))
            .map(|(i, _)| i)
    }
}

/// Unrolls every section crossing `x = 0`. Sections that never cross it are
/// skipped and counted in [`UnfoldedSurface::skipped_sections`].
pub fn unfold_to_uv(
    cloud: &FingerPointCloud,
    sections: &[CrossSection],
    ppi: f64,
) -> Result<UnfoldedSurface, GeometryError> {
    if cloud.len() < MIN_UNFOLD_POINTS {
        return Err(GeometryError::TooFewPoints {
            got: cloud.len(),
            need: MIN_UNFOLD_POINTS,
        });
    }
    if sections.is_empty() {
        return Err(GeometryError::EmptySections("(nothing to unfold)".into()));
    }
    if !(ppi > 0.0 && ppi.is_finite()) {
        return Err(GeometryError::Parameter(format!("ppi must be positive, got {ppi}")));
    }
    let scale = px_per_mm(ppi);
    let points = cloud.points();
    let mut uv_of_point = vec![None; cloud.len()];
    let mut kept = Vec::with_capacity(sections.len());
    let mut skipped = 0;
    for s in sections {
        if !s.crosses_reference() {
            skipped += 1;
            continue;
        }
        for &(idx, slot) in &s.members {
            let p = points.get(idx).ok_or_else(|| {
                GeometryError::Parameter(format!("section refers to point {idx} outside the cloud"))
            })?;
            uv_of_point[idx] = Some([s.cumulative_geodesic[slot] * scale, p.y * scale]);
        }
        kept.push(s.clone());
    }
    if skipped > 0 {
        warn!("{skipped} cross-sections never cross x = 0 and were skipped");
    }
    if kept.is_empty() {
        return Err(GeometryError::EmptySections("(no section crosses x = 0)".into()));
    }
    let mut b = UvBounds {
        u_min: f64::INFINITY,
        u_max: f64::NEG_INFINITY,
        v_min: f64::INFINITY,
        v_max: f64::NEG_INFINITY,
    };
    for [u, v] in uv_of_point.iter().flatten() {
        b.u_min = b.u_min.min(*u);
        b.u_max = b.u_max.max(*u);
        b.v_min = b.v_min.min(*v);
        b.v_max = b.v_max.max(*v);
    }
    Ok(UnfoldedSurface {
        ppi,
        points: points.to_vec(),
        sections: kept,
        uv_of_point,
        bounds: b,
        skipped_sections: skipped,
    })
}

/// Slices and unfolds an already rectified cloud.
pub fn unfold_cloud(cloud: &FingerPointCloud, slab: f64, ppi: f64) -> Result<UnfoldedSurface, GeometryError> {
    let sections = slice_sections(cloud, slab)?;
    unfold_to_uv(cloud, &sections, ppi)
}

/// Bilinear sample at continuous pixel coordinates, where pixel `(i, j)`
/// sits at `(i, j)`. Outside `[0, w-1] x [0, h-1]` returns background.
pub fn bilinear_sample(tex: &GrayImage, col: f64, row: f64) -> f64 {
    let (w, h) = tex.dims();
    if !(col >= 0.0 && row >= 0.0 && col <= (w - 1) as f64 && row <= (h - 1) as f64) {
        return f64::from(BACKGROUND);
    }
    let x0 = (col.floor() as usize).min(w.saturating_sub(2));
    let y0 = (row.floor() as usize).min(h.saturating_sub(2));
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let fx = col - x0 as f64;
    let fy = row - y0 as f64;
    let top = tex.get(x0, y0) * (1.0 - fx) + tex.get(x1, y0) * fx;
    let bottom = tex.get(x0, y1) * (1.0 - fx) + tex.get(x1, y1) * fx;
    top * (1.0 - fy) + bottom * fy
}

/// Texture intensity carried by one point. The texture centre
/// `(w / 2, h / 2)` sits at the UV origin and rows grow toward `-v`.
pub fn sample_texture(surface: &UnfoldedSurface, tex: &GrayImage, point: usize) -> f64 {
    match surface.uv(point) {
        Some([u, v]) => {
            let col = u + (tex.width() / 2) as f64;
            let row = (tex.height() / 2) as f64 - v;
            bilinear_sample(tex, col, row)
        }
        None => f64::from(BACKGROUND),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_slab(z: f64) -> FingerPointCloud {
        let mut pts = Vec::new();
        for j in 0..40 {
            for i in 0..41 {
                pts.push([-2.0 + 0.1 * i as f64, -1.0 + 0.05 * j as f64, z]);
            }
        }
        FingerPointCloud::from_xyz(pts).unwrap()
    }

    #[test]
    fn flat_limit_is_euclidean() {
        let c = flat_slab(3.0);
        let s = unfold_cloud(&c, 0.05, 25.4).unwrap();
        for (i, p) in c.points().iter().enumerate() {
            let [u, v] = s.uv(i).unwrap();
            assert!((u - p.x).abs() < 1e-9, "u={u} x={}", p.x);
            assert!((v - p.y).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_points() {
        let pts: Vec<[f64; 3]> = (0..100).map(|i| [i as f64 * 0.1 - 5.0, 0.0, 0.0]).collect();
        let c = FingerPointCloud::from_xyz(pts).unwrap();
        let sections = slice_sections(&c, 1.0).unwrap();
        assert!(matches!(unfold_to_uv(&c, &sections, 500.0), Err(GeometryError::TooFewPoints { .. })));
    }

    #[test]
    fn sections_off_the_plane_are_skipped() {
        let mut pts: Vec<[f64; 3]> = flat_slab(0.0).points().iter().map(|p| [p.x, p.y, p.z]).collect();
        // an extra slab entirely on the +x side
        for i in 0..50 {
            pts.push([1.0 + 0.02 * i as f64, 5.0, 0.0]);
        }
        let c = FingerPointCloud::from_xyz(pts).unwrap();
        let s = unfold_cloud(&c, 0.05, 500.0).unwrap();
        assert_eq!(s.skipped_sections, 1);
        assert!(s.uv(c.len() - 1).is_none());
    }

    #[test]
    fn bilinear_cases() {
        let tex = GrayImage::new(2, 2, vec![0.0, 255.0, 0.0, 255.0]).unwrap();
        assert_eq!(bilinear_sample(&tex, 0.5, 0.5), 127.5);
        assert_eq!(bilinear_sample(&tex, 1.0, 0.0), 255.0);
        assert_eq!(bilinear_sample(&tex, 0.0, 1.0), 0.0);
        assert_eq!(bilinear_sample(&tex, -0.1, 0.0), 255.0);
        let tex = GrayImage::from_fn(5, 4, |x, y| (x * 10 + y) as f64).unwrap();
        assert_eq!(bilinear_sample(&tex, 3.0, 2.0), 32.0);
    }
}
