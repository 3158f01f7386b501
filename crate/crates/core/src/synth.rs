//! Analytic phantoms: cylinder and slab point clouds, ridge textures.
//!
//! All clouds are already rectified: `y` runs along the finger, the pad
//! faces `+z` and the crest sits on the `x = 0` plane.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Vector3;

use crate::finger3d::FingerPointCloud;
use crate::imagecore::{GrayImage, BACKGROUND};

/// Half cylinder `x = r sin(phi)`, `z = r cos(phi)`, `phi` in
/// `[-phi_max, phi_max]` on `n_phi` evenly spaced samples, one ring per
/// entry of `ys`.
pub fn cylinder_arc(radius: f64, phi_max: f64, n_phi: usize, ys: &[f64]) -> FingerPointCloud {
    let mut pts = Vec::with_capacity(n_phi * ys.len());
    for &y in ys {
        for i in 0..n_phi {
            let phi = if n_phi == 1 {
                0.0
            } else {
                -phi_max + 2.0 * phi_max * i as f64 / (n_phi - 1) as f64
            };
            pts.push(Vector3::new(radius * phi.sin(), y, radius * phi.cos()));
        }
    }
    FingerPointCloud::new(pts).expect("finite phantom")
}

/// Half cylinder over `phi` in `[-pi/2, pi/2]` with `n_y` rows spanning
/// `[-length/2, length/2]`.
pub fn half_cylinder(radius: f64, length: f64, n_phi: usize, n_y: usize) -> FingerPointCloud {
    let ys: Vec<f64> = (0..n_y)
        .map(|j| if n_y == 1 { 0.0 } else { -0.5 * length + length * j as f64 / (n_y - 1) as f64 })
        .collect();
    cylinder_arc(radius, FRAC_PI_2, n_phi, &ys)
}

/// `n_phi` giving an arc step of about `spacing` on a half cylinder.
pub fn samples_for_spacing(radius: f64, spacing: f64) -> usize {
    (PI * radius / spacing).round() as usize + 1
}

/// Rows `y = k / scale` for `k` in `-half_rows..=half_rows`, so every ring
/// lands on one pixel row at `scale` px/mm.
pub fn pixel_rows(half_rows: i64, scale: f64) -> Vec<f64> {
    (-half_rows..=half_rows).map(|k| k as f64 / scale).collect()
}

/// Flat rectangle at height `z`, centred on the origin.
pub fn flat_slab(width: f64, height: f64, spacing: f64, z: f64) -> FingerPointCloud {
    let nx = (width / spacing).round() as usize + 1;
    let ny = (height / spacing).round() as usize + 1;
    let mut pts = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            pts.push(Vector3::new(
                -0.5 * width + spacing * i as f64,
                -0.5 * height + spacing * j as f64,
                z,
            ));
        }
    }
    FingerPointCloud::new(pts).expect("finite phantom")
}

/// Finger-like half tube whose radius shrinks toward the tip at `+y`. Arcs
/// are sampled at constant `spacing`, so the tip is sparser than the base.
pub fn tapered_finger(base_radius: f64, length: f64, spacing: f64) -> FingerPointCloud {
    let n_y = (length / spacing).round() as usize + 1;
    let mut pts = Vec::new();
    for j in 0..n_y {
        let t = j as f64 / (n_y - 1) as f64;
        let y = -0.5 * length + length * t;
        let r = base_radius * (1.0 - 0.35 * t * t);
        let n_phi = samples_for_spacing(r, spacing);
        for i in 0..n_phi {
            let phi = -FRAC_PI_2 + PI * i as f64 / (n_phi - 1) as f64;
            pts.push(Vector3::new(r * phi.sin(), y, r * phi.cos()));
        }
    }
    FingerPointCloud::new(pts).expect("finite phantom")
}

/// Straight sinusoidal ridges, `period` pixels apart, at `angle` radians
/// from the columns. Values span `[0, 255]`.
pub fn sinusoid_ridges(width: usize, height: usize, period: f64, angle: f64) -> GrayImage {
    let (s, c) = angle.sin_cos();
    GrayImage::from_fn(width, height, |x, y| {
        let phase = TAU * (x as f64 * c + y as f64 * s) / period;
        127.5 + 127.5 * phase.cos()
    })
    .expect("non-empty texture")
}

/// Concentric ridges inside an ellipse with semi-axes `(ax, ay)` pixels,
/// plain background outside.
pub fn ridge_blob(width: usize, height: usize, period: f64, ax: f64, ay: f64) -> GrayImage {
    let (cx, cy) = (width as f64 / 2.0, height as f64 / 2.0);
    GrayImage::from_fn(width, height, |x, y| {
        let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
        if (dx / ax).powi(2) + (dy / ay).powi(2) > 1.0 {
            return f64::from(BACKGROUND);
        }
        let r = (dx * dx + 0.6 * dy * dy).sqrt();
        127.5 + 110.0 * (TAU * r / period).cos()
    })
    .expect("non-empty texture")
}
