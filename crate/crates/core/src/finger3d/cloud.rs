use nalgebra::Vector3;

use super::GeometryError;

/// Surface samples of a finger in millimetres, with optional normals.
#[derive(Debug, Clone, PartialEq)]
pub struct FingerPointCloud {
    points: Vec<Vector3<f64>>,
    normals: Option<Vec<Vector3<f64>>>,
}

impl FingerPointCloud {
    pub fn new(points: Vec<Vector3<f64>>) -> Result<Self, GeometryError> {
        if let Some(i) = points.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(GeometryError::NonFinite(i));
        }
        Ok(Self { points, normals: None })
    }

    pub fn with_normals(points: Vec<Vector3<f64>>, normals: Vec<Vector3<f64>>) -> Result<Self, GeometryError> {
        if normals.len() != points.len() {
            return Err(GeometryError::Parameter(format!(
                "{} normals for {} points",
                normals.len(),
                points.len()
            )));
        }
        let mut cloud = Self::new(points)?;
        if let Some(i) = normals.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(GeometryError::NonFinite(i));
        }
        cloud.normals = Some(normals);
        Ok(cloud)
    }

    pub fn from_xyz(points: impl IntoIterator<Item = [f64; 3]>) -> Result<Self, GeometryError> {
        Self::new(points.into_iter().map(Vector3::from).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector3<f64>] {
        &self.points
    }

    pub fn normals(&self) -> Option<&[Vector3<f64>]> {
        self.normals.as_deref()
    }

    pub fn centroid(&self) -> Vector3<f64> {
        if self.points.is_empty() {
            return Vector3::zeros();
        }
        self.points.iter().sum::<Vector3<f64>>() / self.points.len() as f64
    }

    /// Applies `p -> rot * p + shift` to points and `n -> rot * n` to normals.
    pub fn transformed(&self, rot: &nalgebra::Matrix3<f64>, shift: &Vector3<f64>) -> Self {
        Self {
            points: self.points.iter().map(|p| rot * p + shift).collect(),
            normals: self
                .normals
                .as_ref()
                .map(|ns| ns.iter().map(|n| rot * n).collect()),
        }
    }
}
