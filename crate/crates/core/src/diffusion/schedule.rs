use super::DiffusionError;

pub const DEFAULT_STEPS: usize = 1000;
pub const DEFAULT_BETA_START: f64 = 1e-4;
pub const DEFAULT_BETA_END: f64 = 0.02;

/// Variance schedule over steps `1..=T`. Index 0 of every table holds the
/// clean-data convention `beta = 0`, `alpha = alpha_bar = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule {
    betas: Vec<f64>,
    alphas: Vec<f64>,
    alpha_bars: Vec<f64>,
}

impl NoiseSchedule {
    /// Builds a schedule from `betas[0..T]`, the values for steps `1..=T`.
    pub fn from_betas(betas: &[f64]) -> Result<Self, DiffusionError> {
        if betas.is_empty() {
            return Err(DiffusionError::Parameter("schedule needs at least one step".into()));
        }
        if let Some((i, b)) = betas.iter().enumerate().find(|(_, b)| !(**b > 0.0 && **b < 1.0)) {
            return Err(DiffusionError::Parameter(format!("beta_{} = {b} outside (0, 1)", i + 1)));
        }
        let mut all_betas = Vec::with_capacity(betas.len() + 1);
        all_betas.push(0.0);
        all_betas.extend_from_slice(betas);
        let alphas: Vec<f64> = all_betas.iter().map(|b| 1.0 - b).collect();
        let mut alpha_bars = Vec::with_capacity(alphas.len());
        alpha_bars.push(1.0);
        for a in &alphas[1..] {
            let prev = *alpha_bars.last().expect("non-empty");
            alpha_bars.push(prev * a);
        }
        Ok(Self {
            betas: all_betas,
            alphas,
            alpha_bars,
        })
    }

    /// Number of noising steps `T`.
    pub fn steps(&self) -> usize {
        self.betas.len() - 1
    }

    pub fn beta(&self, t: usize) -> f64 {
        self.betas[t]
    }

    pub fn alpha(&self, t: usize) -> f64 {
        self.alphas[t]
    }

    /// `alpha_bar_t` for `t` in `0..=T`, with `alpha_bar_0 = 1`.
    pub fn alpha_bar(&self, t: usize) -> f64 {
        self.alpha_bars[t]
    }

    pub fn alpha_bars(&self) -> &[f64] {
        &self.alpha_bars
    }

    pub(crate) fn check_step(&self, t: usize) -> Result<(), DiffusionError> {
        if t == 0 || t > self.steps() {
            return Err(DiffusionError::Timestep { t, max: self.steps() });
        }
        Ok(())
    }
}

impl Default for NoiseSchedule {
    fn default() -> Self {
        linear_schedule(DEFAULT_STEPS, DEFAULT_BETA_START, DEFAULT_BETA_END).expect("default schedule is valid")
    }
}

/// `T` betas spaced linearly from `beta_start` to `beta_end`.
pub fn linear_schedule(steps: usize, beta_start: f64, beta_end: f64) -> Result<NoiseSchedule, DiffusionError> {
    if steps == 0 {
        return Err(DiffusionError::Parameter("T must be at least 1".into()));
    }
    if !(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0) {
        return Err(DiffusionError::Parameter(format!(
            "need 0 < beta_start <= beta_end < 1, got {beta_start}, {beta_end}"
        )));
    }
    let betas: Vec<f64> = if steps == 1 {
        vec![beta_start]
    } else {
        let span = (beta_end - beta_start) / (steps - 1) as f64;
        (0..steps).map(|i| if i == steps - 1 { beta_end } else { beta_start + span * i as f64 }).collect()
    };
    NoiseSchedule::from_betas(&betas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_products() {
        let s = linear_schedule(1, 0.1, 0.1).unwrap();
        assert!((s.alpha_bar(1) - 0.9).abs() < 1e-15);
        let s = linear_schedule(2, 0.1, 0.2).unwrap();
        assert!((s.alpha_bar(1) - 0.9).abs() < 1e-15);
        assert!((s.alpha_bar(2) - 0.72).abs() < 1e-15);
        assert_eq!(s.alpha_bar(0), 1.0);
    }

    #[test]
    fn default_schedule_shape() {
        let s = NoiseSchedule::default();
        assert_eq!(s.steps(), 1000);
        assert_eq!(s.beta(1), 1e-4);
        assert_eq!(s.beta(1000), 0.02);
        assert!(s.alpha_bars().windows(2).all(|w| w[1] < w[0]));
        assert!(s.alpha_bar(1000) > 0.0 && s.alpha_bar(1000) < 1.0);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(linear_schedule(0, 0.1, 0.2).is_err());
        assert!(linear_schedule(10, 0.0, 0.2).is_err());
        assert!(linear_schedule(10, 0.3, 0.2).is_err());
        assert!(linear_schedule(10, 0.1, 1.0).is_err());
    }
}
