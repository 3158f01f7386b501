//! Contact displacement `delta_u`.
//!
//! The reference arc keeps its unrolled `u` labels while it rolls. Samples
//! whose rotated outward normal faces the camera form the visible window,
//! and when both the frontal and the rolled windows end at a horizon on the
//! same side, `delta_u` is the shift of that edge: for the lower side,
//! `min(u | rolled, visible) - min(u | frontal, visible)`.
//!
//! Scans that stop short of the horizon (a half tube seen from the front)
//! pin the frontal window to the scan ends, and the edge shift then says
//! nothing about the roll. `delta_u` is then the shift of the contact line,
//! the `u` whose rotated normal points straight at the camera. On a
//! cylinder both readings give `-radius * theta`. A flat strip has neither
//! and falls back to the shift of its lowest visible `u`.

use serde::Serialize;

use super::{ProjectError, RollPose};
use crate::finger3d::{smoothed_normals, CrossSection, UnfoldedSurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaUMethod {
    LowerEdge,
    UpperEdge,
    ContactPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaUReport {
    pub delta_u_mm: f64,
    pub method: DeltaUMethod,
}

/// Half-width of the arc span over which section normals are estimated, mm.
pub const NORMAL_HALF_SPAN_MM: f64 = 0.25;

/// Visible window of an arc under a roll of `theta`, as `(u, is_horizon)`
/// for each edge.
struct Window {
    lower: (f64, bool),
    upper: (f64, bool),
}

/// Rotated normal components `(nx', nz')` per sample.
fn facing(normals: &[[f64; 2]], theta: f64) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = theta.sin_cos();
    normals
        .iter()
        .map(|&[nx, nz]| (nx * c + nz * s, -nx * s + nz * c))
        .unzip()
}

/// Position where the line through samples `a` and `b` of `f` reaches zero.
fn zero_crossing(at: &[f64], f: &[f64], a: usize, b: usize) -> f64 {
    let t = f[a] / (f[a] - f[b]);
    at[a] + t * (at[b] - at[a])
}

/// `at` holds the arc position of each normal. An edge is a horizon when a
/// hidden sample lies beyond it; otherwise the window runs into the end of
/// the scan.
fn window(at: &[f64], nz: &[f64]) -> Option<Window> {
    let lo = nz.iter().position(|&v| v >= 0.0)?;
    let hi = nz.iter().rposition(|&v| v >= 0.0)?;
    let lower = if lo > 0 { (zero_crossing(at, nz, lo - 1, lo), true) } else { (at[lo], false) };
    let upper = if hi + 1 < nz.len() { (zero_crossing(at, nz, hi + 1, hi), true) } else { (at[hi], false) };
    Some(Window { lower, upper })
}

/// Arc position of the sample facing the camera head-on (rotated `nx` = 0).
fn contact_u(at: &[f64], nx: &[f64], nz: &[f64]) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for i in 0..at.len().saturating_sub(1) {
        if nx[i] <= 0.0 && nx[i + 1] > 0.0 {
            let t = nx[i] / (nx[i] - nx[i + 1]);
            let z = nz[i] + t * (nz[i + 1] - nz[i]);
            if z > 0.0 && best.is_none_or(|(bz, _)| z > bz) {
                best = Some((z, zero_crossing(at, nx, i, i + 1)));
            }
        }
    }
    best.map(|(_, u)| u)
}

/// Contact displacement for one section, in millimetres, for a roll of
/// `theta` radians.
pub fn section_delta_u_mm(section: &CrossSection, theta: f64) -> Result<DeltaUReport, ProjectError> {
    let no_view = || ProjectError::Visibility {
        theta_deg: theta.to_degrees(),
    };
    let (normals, at): (Vec<[f64; 2]>, Vec<f64>) =
        smoothed_normals(section, NORMAL_HALF_SPAN_MM).into_iter().unzip();
    let (nx0, nz0) = facing(&normals, 0.0);
    let (nx1, nz1) = facing(&normals, theta);
    let front = window(&at, &nz0).ok_or_else(no_view)?;
    let rolled = window(&at, &nz1).ok_or_else(no_view)?;
    let report = if front.lower.1 && rolled.lower.1 {
        DeltaUReport {
            delta_u_mm: rolled.lower.0 - front.lower.0,
            method: DeltaUMethod::LowerEdge,
        }
    } else if front.upper.1 && rolled.upper.1 {
        DeltaUReport {
            delta_u_mm: rolled.upper.0 - front.upper.0,
            method: DeltaUMethod::UpperEdge,
        }
    } else if let (Some(c0), Some(c1)) = (contact_u(&at, &nx0, &nz0), contact_u(&at, &nx1, &nz1)) {
        DeltaUReport {
            delta_u_mm: c1 - c0,
            method: DeltaUMethod::ContactPoint,
        }
    } else {
        // no point faces the camera head-on (a flat strip): shift of the
        // lowest visible u
        DeltaUReport {
            delta_u_mm: rolled.lower.0 - front.lower.0,
            method: DeltaUMethod::LowerEdge,
        }
    };
    Ok(report)
}

/// Contact displacement on the reference section (nearest `v = 0`), in
/// pixels at the surface resolution.
pub fn compute_delta_u(surface: &UnfoldedSurface, pose: RollPose) -> Result<f64, ProjectError> {
    let idx = surface.reference_section().ok_or(ProjectError::NoReference)?;
    let report = section_delta_u_mm(&surface.sections[idx], pose.radians())?;
    Ok(report.delta_u_mm * surface.scale())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn arc_section(radius: f64, phi_lo: f64, phi_hi: f64, n: usize) -> CrossSection {
        let samples: Vec<_> = (0..n)
            .map(|i| {
                let phi = phi_lo + (phi_hi - phi_lo) * i as f64 / (n - 1) as f64;
                (i, radius * phi.sin(), 0.0, radius * phi.cos())
            })
            .collect();
        CrossSection::from_samples(&samples)
    }

    #[test]
    fn frontal_is_exactly_zero() {
        let s = arc_section(8.0, -PI / 2.0, PI / 2.0, 301);
        assert_eq!(section_delta_u_mm(&s, 0.0).unwrap().delta_u_mm, 0.0);
    }

    #[test]
    fn wrapped_scan_uses_lower_edge() {
        let s = arc_section(6.0, -2.6, 2.6, 801);
        for deg in [-40.0f64, -10.0, 15.0, 45.0] {
            let r = section_delta_u_mm(&s, deg.to_radians()).unwrap();
            assert_eq!(r.method, DeltaUMethod::LowerEdge);
            assert!((r.delta_u_mm + 6.0 * deg.to_radians()).abs() < 1e-3, "{deg}: {r:?}");
        }
    }

    #[test]
    fn narrow_scan_falls_back_to_contact_point() {
        let s = arc_section(6.0, -1.0, 1.0, 401);
        let r = section_delta_u_mm(&s, 0.2).unwrap();
        assert_eq!(r.method, DeltaUMethod::ContactPoint);
        assert!((r.delta_u_mm + 1.2).abs() < 1e-3);
    }

    #[test]
    fn flat_strip_keeps_its_edge() {
        let samples: Vec<_> = (0..20).map(|i| (i, i as f64 * 0.1 - 1.0, 0.0, 0.0)).collect();
        let s = CrossSection::from_samples(&samples);
        for theta in [0.0, 0.5, -1.0] {
            assert_eq!(section_delta_u_mm(&s, theta).unwrap().delta_u_mm, 0.0);
        }
    }

    #[test]
    fn flat_arc_too_steep_to_see() {
        // a flat strip rolled past 90 degrees from its normal has no visible samples
        let samples: Vec<_> = (0..20).map(|i| (i, i as f64 * 0.1 - 1.0, 0.0, 0.0)).collect();
        let s = CrossSection::from_samples(&samples);
        assert!(matches!(
            section_delta_u_mm(&s, 1.7),
            Err(ProjectError::Visibility { .. })
        ));
    }
}
