use std::collections::HashMap;

use rand::Rng;

use super::{DiffusionError, LatentGrid};

pub const DEFAULT_CODEBOOK_SIZE: usize = 4096;
pub const LATENT_CHANNELS: usize = 3;

/// Finite set of distinct latent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    dim: usize,
    entries: Vec<f64>,
}

impl Codebook {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self, DiffusionError> {
        let dim = entries
            .first()
            .map(Vec::len)
            .ok_or_else(|| DiffusionError::Parameter("codebook is empty".into()))?;
        if dim == 0 {
            return Err(DiffusionError::Parameter("codebook entries have dimension 0".into()));
        }
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(entries.len());
        let mut flat = Vec::with_capacity(entries.len() * dim);
        for (i, e) in entries.iter().enumerate() {
            if e.len() != dim {
                return Err(DiffusionError::Parameter(format!(
                    "entry {i} has dimension {}, expected {dim}",
                    e.len()
                )));
            }
            if e.iter().any(|v| !v.is_finite()) {
                return Err(DiffusionError::NonFinite(i));
            }
            // adding 0.0 folds -0.0 into +0.0
            let key: Vec<u64> = e.iter().map(|v| (v + 0.0).to_bits()).collect();
            if let Some(&j) = seen.get(&key) {
                return Err(DiffusionError::Duplicate(j, i));
            }
            seen.insert(key, i);
            flat.extend_from_slice(e);
        }
        Ok(Self { dim, entries: flat })
    }

    /// `size` entries drawn uniformly from `[-1, 1]^dim`.
    pub fn random<R: Rng + ?Sized>(size: usize, dim: usize, rng: &mut R) -> Result<Self, DiffusionError> {
        if size == 0 || dim == 0 {
            return Err(DiffusionError::Parameter("codebook size and dimension must be positive".into()));
        }
        loop {
            let entries: Vec<Vec<f64>> = (0..size)
                .map(|_| (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect())
                .collect();
            match Self::new(entries) {
                Err(DiffusionError::Duplicate(..)) => continue,
                other => return other,
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Nearest entry by Euclidean distance; the smallest index wins ties.
    pub fn nearest(&self, v: &[f64]) -> usize {
        let mut best = (f64::INFINITY, 0);
        for i in 0..self.len() {
            let d: f64 = self.entry(i).iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantized {
    pub height: usize,
    pub width: usize,
    /// Row-major codebook index per spatial location.
    pub indices: Vec<usize>,
    pub grid: LatentGrid,
}

impl Quantized {
    pub fn index_at(&self, y: usize, x: usize) -> usize {
        self.indices[y * self.width + x]
    }
}

/// Snaps every spatial location of `z` to its nearest codebook entry.
pub fn vq_quantize(z: &LatentGrid, cb: &Codebook) -> Result<Quantized, DiffusionError> {
    let (c, h, w) = z.shape();
    if c != cb.dim() {
        return Err(DiffusionError::Dimension {
            codebook: cb.dim(),
            channels: c,
        });
    }
    let mut indices = Vec::with_capacity(h * w);
    let mut values = vec![0.0; c * h * w];
    for y in 0..h {
        for x in 0..w {
            let k = cb.nearest(&z.vector_at(y, x));
            for (ch, v) in cb.entry(k).iter().enumerate() {
                values[(ch * h + y) * w + x] = *v;
            }
            indices.push(k);
        }
    }
    Ok(Quantized {
        height: h,
        width: w,
        indices,
        grid: LatentGrid::from_parts_unchecked(c, h, w, values),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_rejected() {
        let e = vec![vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 1.0], vec![-0.0, 1.0, 2.0]];
        assert!(matches!(Codebook::new(e), Err(DiffusionError::Duplicate(0, 2))));
    }

    #[test]
    fn tie_goes_to_smaller_index() {
        let mut e: Vec<Vec<f64>> = (0..8).map(|i| vec![10.0 + i as f64, 0.0, 0.0]).collect();
        e[3] = vec![1.0, 0.0, 0.0];
        e[7] = vec![-1.0, 0.0, 0.0];
        let cb = Codebook::new(e).unwrap();
        assert_eq!(cb.nearest(&[0.0, 0.0, 0.0]), 3);
    }

    #[test]
    fn dimension_mismatch() {
        let cb = Codebook::new(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let z = LatentGrid::zeros(3, 2, 2).unwrap();
        assert!(matches!(vq_quantize(&z, &cb), Err(DiffusionError::Dimension { .. })));
    }
}
