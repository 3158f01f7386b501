use rand::Rng;
use rand_distr::StandardNormal;

use super::DiffusionError;

/// Channel-major `channels x height x width` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentGrid {
    channels: usize,
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl LatentGrid {
    pub fn new(channels: usize, height: usize, width: usize, values: Vec<f64>) -> Result<Self, DiffusionError> {
        if channels == 0 || height == 0 || width == 0 {
            return Err(DiffusionError::Parameter(format!(
                "latent shape {channels}x{height}x{width} has a zero dimension"
            )));
        }
        if values.len() != channels * height * width {
            return Err(DiffusionError::Parameter(format!(
                "{} values for shape {channels}x{height}x{width}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(DiffusionError::NonFinite(i));
        }
        Ok(Self {
            channels,
            height,
            width,
            values,
        })
    }

    pub fn zeros(channels: usize, height: usize, width: usize) -> Result<Self, DiffusionError> {
        Self::new(channels, height, width, vec![0.0; channels * height * width])
    }

    /// Independent standard normal entries.
    pub fn standard_normal<R: Rng + ?Sized>(
        channels: usize,
        height: usize,
        width: usize,
        rng: &mut R,
    ) -> Result<Self, DiffusionError> {
        let n = channels * height * width;
        let values = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        Self::new(channels, height, width, values)
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.values[(c * self.height + y) * self.width + x]
    }

    /// Channel vector at one spatial location.
    pub fn vector_at(&self, y: usize, x: usize) -> Vec<f64> {
        (0..self.channels).map(|c| self.get(c, y, x)).collect()
    }

    pub fn ensure_same_shape(&self, other: &LatentGrid) -> Result<(), DiffusionError> {
        if self.shape() != other.shape() {
            return Err(DiffusionError::Shape {
                expected: self.shape(),
                got: other.shape(),
            });
        }
        Ok(())
    }

    /// Elementwise `a * self + b * other`.
    pub fn axpby(&self, a: f64, other: &LatentGrid, b: f64) -> Result<LatentGrid, DiffusionError> {
        self.ensure_same_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        LatentGrid::new(self.channels, self.height, self.width, values)
    }

    pub fn max_abs_diff(&self, other: &LatentGrid) -> Result<f64, DiffusionError> {
        self.ensure_same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn mean_squared_diff(&self, other: &LatentGrid) -> Result<f64, DiffusionError> {
        self.ensure_same_shape(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok(s / self.values.len() as f64)
    }

    pub(crate) fn from_parts_unchecked(channels: usize, height: usize, width: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), channels * height * width);
        Self {
            channels,
            height,
            width,
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_validation() {
        let g = LatentGrid::new(2, 2, 3, (0..12).map(f64::from).collect()).unwrap();
        assert_eq!(g.get(1, 0, 2), 8.0);
        assert_eq!(g.vector_at(1, 1), vec![4.0, 10.0]);
        assert!(LatentGrid::new(2, 2, 3, vec![0.0; 11]).is_err());
        assert!(matches!(
            LatentGrid::new(1, 1, 2, vec![0.0, f64::NAN]),
            Err(DiffusionError::NonFinite(1))
        ));
        let z = LatentGrid::zeros(2, 3, 2).unwrap();
        assert!(g.axpby(1.0, &z, 1.0).is_err());
    }
}
