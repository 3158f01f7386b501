//! PCA pose rectification.
//!
//! The centroid moves to the origin, the dominant principal axis becomes
//! `y`, the second `x` and the least-variance axis `z`. Axis signs come from
//! the third central moment along each axis: the sparser fingertip end
//! (positive skew) points to `+y` and the bulging pad (negative skew of
//! depth) faces `+z`. `x` completes a right-handed frame.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use super::{FingerPointCloud, GeometryError};

/// Rigid map `p -> rotation * (p - centroid)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidTransform {
    pub rotation: Matrix3<f64>,
    pub centroid: Vector3<f64>,
}

impl RigidTransform {
    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * (p - self.centroid)
    }
}

const RANK_TOL: f64 = 1e-12;
const SKEW_TOL: f64 = 1e-9;

fn oriented(axis: Vector3<f64>, centered: &[Vector3<f64>], want_positive_skew: bool) -> Vector3<f64> {
    let n = centered.len() as f64;
    let (m2, m3) = centered.iter().fold((0.0, 0.0), |(a, b), p| {
        let t = axis.dot(p);
        (a + t * t, b + t * t * t)
    });
    let sigma = (m2 / n).sqrt();
    let skew = m3 / n;
    if skew.abs() > SKEW_TOL * sigma.powi(3) {
        if (skew > 0.0) == want_positive_skew {
            axis
        } else {
            -axis
        }
    } else {
        // no usable skew: make the dominant component positive
        let (i, _) = axis
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, v)| if v.abs() > acc.1.abs() + 1e-12 { (i, *v) } else { acc });
        if axis[i] >= 0.0 {
            axis
        } else {
            -axis
        }
    }
}

pub fn rectify_pose_with_transform(
    pc: &FingerPointCloud,
) -> Result<(FingerPointCloud, RigidTransform), GeometryError> {
    if pc.len() < 4 {
        return Err(GeometryError::Degenerate(format!("{} points", pc.len())));
    }
    let centroid = pc.centroid();
    let centered: Vec<Vector3<f64>> = pc.points().iter().map(|p| p - centroid).collect();
    let cov = centered
        .iter()
        .fold(Matrix3::zeros(), |acc: Matrix3<f64>, p| acc + p * p.transpose())
        / centered.len() as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let (l0, l2) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[2]]);
    if l0.is_nan() || l0 <= 0.0 || l2 <= RANK_TOL * l0 {
        return Err(GeometryError::Degenerate(format!(
            "covariance rank below 3 (eigenvalues {:.3e}, {:.3e}, {:.3e})",
            l0, eig.eigenvalues[order[1]], l2
        )));
    }
    let col = |i: usize| -> Vector3<f64> { eig.eigenvectors.column(order[i]).into_owned() };
    let ey = oriented(col(0), &centered, true);
    let ez = oriented(col(2), &centered, false);
    let ex = ey.cross(&ez).normalize();
    let ez = ex.cross(&ey).normalize();
    let rotation = Matrix3::from_rows(&[ex.transpose(), ey.transpose(), ez.transpose()]);
    let out = pc.transformed(&rotation, &(-(rotation * centroid)));
    Ok((out, RigidTransform { rotation, centroid }))
}

pub fn rectify_pose(pc: &FingerPointCloud) -> Result<FingerPointCloud, GeometryError> {
    rectify_pose_with_transform(pc).map(|(c, _)| c)
}
