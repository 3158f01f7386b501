//! Orthographic splatting with a z-buffer.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{compute_delta_u, rotate_cloud, ProjectError, RollPose};
use crate::finger3d::{sample_texture, FingerPointCloud, UnfoldedSurface};
use crate::imagecore::{ForegroundMask, GrayImage, BACKGROUND};
use crate::px_per_mm;

/// Holes are filled from rendered pixels at most this far away.
pub const HOLE_FILL_RADIUS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canvas {
    pub width: usize,
    pub height: usize,
}

impl Default for Canvas {
    fn default() -> Self {
        Self::square(512)
    }
}

impl Canvas {
    pub fn square(size: usize) -> Self {
        Self { width: size, height: size }
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.width / 2) as f64, (self.height / 2) as f64)
    }
}

/// Cloud with one intensity per point. Only points carrying a UV coordinate
/// are kept; `source` maps back to the surface's point indices.
#[derive(Debug, Clone)]
pub struct TexturedCloud {
    pub cloud: FingerPointCloud,
    pub intensity: Vec<f64>,
    pub source: Vec<usize>,
    pub ppi: f64,
}

impl TexturedCloud {
    pub fn new(cloud: FingerPointCloud, intensity: Vec<f64>, ppi: f64) -> Result<Self, ProjectError> {
        if cloud.len() != intensity.len() {
            return Err(ProjectError::Parameter(format!(
                "{} points but {} intensities",
                cloud.len(),
                intensity.len()
            )));
        }
        if !(ppi > 0.0 && ppi.is_finite()) {
            return Err(ProjectError::Parameter(format!("ppi must be positive, got {ppi}")));
        }
        let source = (0..cloud.len()).collect();
        Ok(Self { cloud, intensity, source, ppi })
    }

    pub fn from_surface(surface: &UnfoldedSurface, tex: &GrayImage) -> Result<Self, ProjectError> {
        let mut pts = Vec::with_capacity(surface.mapped_count());
        let mut intensity = Vec::with_capacity(pts.capacity());
        let mut source = Vec::with_capacity(pts.capacity());
        for (i, p) in surface.points.iter().enumerate() {
            if surface.uv(i).is_some() {
                pts.push(*p);
                intensity.push(sample_texture(surface, tex, i));
                source.push(i);
            }
        }
        Ok(Self {
            cloud: FingerPointCloud::new(pts)?,
            intensity,
            source,
            ppi: surface.ppi,
        })
    }

    pub fn rotated(&self, pose: RollPose) -> Self {
        Self {
            cloud: rotate_cloud(&self.cloud, pose),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProjectedImage {
    pub img: GrayImage,
    /// Rendered and hole-filled pixels.
    pub visibility_mask: ForegroundMask,
    /// Applied compensation, pixels.
    pub delta_u: f64,
    /// Pixels that received a point directly.
    pub rendered_count: usize,
    /// Index into the textured cloud of the point that won each pixel.
    pub winner: Vec<Option<usize>>,
}

impl ProjectedImage {
    pub fn winner_at(&self, col: usize, row: usize) -> Option<usize> {
        self.winner[row * self.img.width() + col]
    }
}

/// Pixel `(col, row)` that a point lands on.
pub fn splat_position(p: &Vector3<f64>, scale: f64, delta_u: f64, canvas: Canvas) -> (i64, i64) {
    let (cx, cy) = canvas.center();
    ((p.x * scale + delta_u + cx).round() as i64, (cy - p.y * scale).round() as i64)
}

/// Projects an already rotated textured cloud onto the `x-y` plane.
pub fn project(tc: &TexturedCloud, delta_u: f64, canvas: Canvas) -> Result<ProjectedImage, ProjectError> {
    if !delta_u.is_finite() {
        return Err(ProjectError::Parameter(format!("delta_u must be finite, got {delta_u}")));
    }
    if canvas.width == 0 || canvas.height == 0 {
        return Err(ProjectError::Parameter("canvas must be non-empty".into()));
    }
    let (w, h) = (canvas.width, canvas.height);
    let scale = px_per_mm(tc.ppi);
    let cells: Vec<(i64, i64)> = tc
        .cloud
        .points()
        .iter()
        .map(|p| splat_position(p, scale, delta_u, canvas))
        .collect();
    if let Some(&first) = cells.first() {
        let (mut c0, mut c1, mut r0, mut r1) = (first.0, first.0, first.1, first.1);
        for &(c, r) in &cells {
            c0 = c0.min(c);
            c1 = c1.max(c);
            r0 = r0.min(r);
            r1 = r1.max(r);
        }
        if c0 < 0 || r0 < 0 || c1 >= w as i64 || r1 >= h as i64 {
            return Err(ProjectError::Bounds {
                col_min: c0,
                col_max: c1,
                row_min: r0,
                row_max: r1,
                width: w,
                height: h,
            });
        }
    }

    let mut depth = vec![f64::NEG_INFINITY; w * h];
    let mut winner: Vec<Option<usize>> = vec![None; w * h];
    for (i, (&(c, r), p)) in cells.iter().zip(tc.cloud.points()).enumerate() {
        let k = r as usize * w + c as usize;
        if p.z >= depth[k] {
            depth[k] = p.z;
            winner[k] = Some(i);
        }
    }

    let mut data = vec![f64::from(BACKGROUND); w * h];
    let mut visible = vec![false; w * h];
    let mut rendered_count = 0;
    for (k, win) in winner.iter().enumerate() {
        if let Some(i) = *win {
            data[k] = tc.intensity[i];
            visible[k] = true;
            rendered_count += 1;
        }
    }

    // Hole filling reads only directly rendered pixels, so the result does
    // not depend on scan order.
    let rad = HOLE_FILL_RADIUS as i64;
    let is_rendered = |c: i64, r: i64| c >= 0 && r >= 0 && c < w as i64 && r < h as i64 && winner[r as usize * w + c as usize].is_some();
    let mut fills = Vec::new();
    for r in 0..h as i64 {
        for c in 0..w as i64 {
            if is_rendered(c, r) {
                continue;
            }
            let left = (1..=rad).any(|d| is_rendered(c - d, r));
            let right = (1..=rad).any(|d| is_rendered(c + d, r));
            let up = (1..=rad).any(|d| is_rendered(c, r - d));
            let down = (1..=rad).any(|d| is_rendered(c, r + d));
            if !((left && right) || (up && down)) {
                continue;
            }
            let mut best: Option<(i64, usize)> = None;
            for dr in -rad..=rad {
                for dc in -rad..=rad {
                    let d2 = dr * dr + dc * dc;
                    if d2 > rad * rad || !is_rendered(c + dc, r + dr) {
                        continue;
                    }
                    let k = (r + dr) as usize * w + (c + dc) as usize;
                    if best.is_none_or(|(bd, _)| d2 < bd) {
                        best = Some((d2, k));
                    }
                }
            }
            if let Some((_, k)) = best {
                fills.push((r as usize * w + c as usize, data[k]));
            }
        }
    }
    for (k, v) in fills {
        data[k] = v;
        visible[k] = true;
    }

    Ok(ProjectedImage {
        img: GrayImage::new(w, h, data)?.with_ppi(tc.ppi),
        visibility_mask: ForegroundMask::new(w, h, visible)?,
        delta_u,
        rendered_count,
        winner,
    })
}

/// Textures, rolls, compensates and rasterises one pose.
pub fn render_pose(
    surface: &UnfoldedSurface,
    tex: &GrayImage,
    pose: RollPose,
    canvas: Canvas,
) -> Result<ProjectedImage, ProjectError> {
    let delta_u = compute_delta_u(surface, pose)?;
    let tc = TexturedCloud::from_surface(surface, tex)?.rotated(pose);
    project(&tc, delta_u, canvas)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, spacing: f64, z: f64) -> Vec<Vector3<f64>> {
        let mut v = Vec::new();
        for j in 0..n {
            for i in 0..n {
                v.push(Vector3::new(i as f64 * spacing, j as f64 * spacing, z));
            }
        }
        v
    }

    #[test]
    fn nearer_point_wins() {
        let pts = vec![Vector3::new(0.0, 0.0, 2.0), Vector3::new(0.0, 0.0, 1.0), Vector3::new(0.0, 0.0, 2.0)];
        let tc = TexturedCloud::new(FingerPointCloud::new(pts).unwrap(), vec![10.0, 20.0, 30.0], 25.4).unwrap();
        let out = project(&tc, 0.0, Canvas::square(8)).unwrap();
        assert_eq!(out.img.get(4, 4), 30.0);
        assert_eq!(out.winner_at(4, 4), Some(2));
        assert_eq!(out.rendered_count, 1);
    }

    #[test]
    fn gaps_between_splats_are_filled() {
        // spacing of two pixels leaves single-pixel gaps
        let tc = TexturedCloud::new(FingerPointCloud::new(grid(5, 2.0, 0.0)).unwrap(), vec![7.0; 25], 25.4).unwrap();
        let out = project(&tc, -8.0, Canvas::square(16)).unwrap();
        assert_eq!(out.rendered_count, 25);
        // footprint is columns and rows 0..=8; gaps with rendered pixels on
        // two opposite sides are filled, diagonal-only gaps are not
        for r in 0..16 {
            for c in 0..16 {
                let inside = c <= 8 && r <= 8 && !(c % 2 == 1 && r % 2 == 1);
                assert_eq!(out.visibility_mask.get(c, r), inside, "({c},{r})");
                assert_eq!(out.img.get(c, r), if inside { 7.0 } else { 255.0 });
            }
        }
    }

    #[test]
    fn out_of_canvas_is_an_error() {
        let tc = TexturedCloud::new(FingerPointCloud::new(grid(3, 1.0, 0.0)).unwrap(), vec![0.0; 9], 25.4).unwrap();
        assert!(matches!(project(&tc, 5.0, Canvas::square(8)), Err(ProjectError::Bounds { .. })));
        assert!(project(&tc, 0.0, Canvas::square(8)).is_ok());
    }
}
