use super::{DiffusionError, LatentGrid, NoiseSchedule};

/// Noise estimator `eps(z_t, t, C)`.
pub trait NoisePredictor {
    fn predict(&self, zt: &LatentGrid, t: usize, cond: Option<&LatentGrid>) -> Result<LatentGrid, DiffusionError>;
}

/// Returns the exact noise that takes a known `z0` to `z_t`.
#[derive(Debug, Clone)]
pub struct AnalyticPredictor<'a> {
    pub z0: &'a LatentGrid,
    pub schedule: &'a NoiseSchedule,
}

impl NoisePredictor for AnalyticPredictor<'_> {
    fn predict(&self, zt: &LatentGrid, t: usize, _cond: Option<&LatentGrid>) -> Result<LatentGrid, DiffusionError> {
        self.schedule.check_step(t)?;
        let ab = self.schedule.alpha_bar(t);
        zt.axpby(1.0 / (1.0 - ab).sqrt(), self.z0, -(ab / (1.0 - ab)).sqrt())
    }
}

/// Predicts the same value everywhere.
#[derive(Debug, Clone, Copy)]
pub struct ConstantPredictor(pub f64);

impl NoisePredictor for ConstantPredictor {
    fn predict(&self, zt: &LatentGrid, _t: usize, _cond: Option<&LatentGrid>) -> Result<LatentGrid, DiffusionError> {
        let (c, h, w) = zt.shape();
        LatentGrid::new(c, h, w, vec![self.0; c * h * w])
    }
}

/// `sqrt(alpha_bar_t) z0 + sqrt(1 - alpha_bar_t) eps`.
pub fn forward_noise(
    z0: &LatentGrid,
    t: usize,
    eps: &LatentGrid,
    sched: &NoiseSchedule,
) -> Result<LatentGrid, DiffusionError> {
    sched.check_step(t)?;
    let ab = sched.alpha_bar(t);
    z0.axpby(ab.sqrt(), eps, (1.0 - ab).sqrt())
}

/// `(z_t - sqrt(1 - alpha_bar_t) eps) / sqrt(alpha_bar_t)`.
pub fn predict_z0(
    zt: &LatentGrid,
    t: usize,
    eps_pred: &LatentGrid,
    sched: &NoiseSchedule,
) -> Result<LatentGrid, DiffusionError> {
    sched.check_step(t)?;
    let ab = sched.alpha_bar(t);
    if ab <= 0.0 {
        return Err(DiffusionError::Singular(t));
    }
    let ra = ab.sqrt();
    zt.axpby(1.0 / ra, eps_pred, -(1.0 - ab).sqrt() / ra)
}

/// Deterministic update from step `t` to any earlier step `t_prev`.
pub fn ddim_step_to(
    zt: &LatentGrid,
    t: usize,
    t_prev: usize,
    predictor: &dyn NoisePredictor,
    cond: Option<&LatentGrid>,
    sched: &NoiseSchedule,
) -> Result<LatentGrid, DiffusionError> {
    sched.check_step(t)?;
    if t_prev >= t {
        return Err(DiffusionError::Parameter(format!("t_prev {t_prev} must precede t {t}")));
    }
    let eps = predictor.predict(zt, t, cond)?;
    zt.ensure_same_shape(&eps)?;
    let z0_hat = predict_z0(zt, t, &eps, sched)?;
    let ab_prev = sched.alpha_bar(t_prev);
    z0_hat.axpby(ab_prev.sqrt(), &eps, (1.0 - ab_prev).sqrt())
}

/// One reverse step `z_t -> z_{t-1}` with zero stochastic variance.
pub fn ddim_step(
    zt: &LatentGrid,
    t: usize,
    predictor: &dyn NoisePredictor,
    cond: Option<&LatentGrid>,
    sched: &NoiseSchedule,
) -> Result<LatentGrid, DiffusionError> {
    ddim_step_to(zt, t, t - 1, predictor, cond, sched)
}

/// `steps` evenly spaced timesteps of a `T`-step schedule, descending and
/// ending at `T / steps`.
pub fn strided_timesteps(total: usize, steps: usize) -> Result<Vec<usize>, DiffusionError> {
    if steps == 0 || steps > total {
        return Err(DiffusionError::Parameter(format!("steps must be in 1..={total}, got {steps}")));
    }
    Ok((1..=steps).rev().map(|i| i * total / steps).collect())
}

/// Runs the reverse process over strictly descending `timesteps` and a final
/// step to `t = 0`.
pub fn ddim_sample(
    z_start: &LatentGrid,
    timesteps: &[usize],
    predictor: &dyn NoisePredictor,
    cond: Option<&LatentGrid>,
    sched: &NoiseSchedule,
) -> Result<LatentGrid, DiffusionError> {
    if timesteps.is_empty() {
        return Err(DiffusionError::Parameter("no timesteps".into()));
    }
    if timesteps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(DiffusionError::Parameter("timesteps must be strictly descending".into()));
    }
    let mut z = z_start.clone();
    for (i, &t) in timesteps.iter().enumerate() {
        let t_prev = timesteps.get(i + 1).copied().unwrap_or(0);
        z = ddim_step_to(&z, t, t_prev, predictor, cond, sched)?;
    }
    Ok(z)
}

/// Mean squared error between the true noise and the prediction at `z_t`.
pub fn denoising_loss(
    predictor: &dyn NoisePredictor,
    z0: &LatentGrid,
    t: usize,
    eps: &LatentGrid,
    cond: Option<&LatentGrid>,
    sched: &NoiseSchedule,
) -> Result<f64, DiffusionError> {
    let zt = forward_noise(z0, t, eps, sched)?;
    let pred = predictor.predict(&zt, t, cond)?;
    eps.mean_squared_diff(&pred)
}

#[cfg(test)]
mod tests {
    use super::super::linear_schedule;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_predictor_recovers_z0_at_final_step() {
        let s = linear_schedule(20, 1e-3, 0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z0 = LatentGrid::standard_normal(3, 4, 4, &mut rng).unwrap();
        let eps = LatentGrid::standard_normal(3, 4, 4, &mut rng).unwrap();
        let z1 = forward_noise(&z0, 1, &eps, &s).unwrap();
        let p = AnalyticPredictor { z0: &z0, schedule: &s };
        let out = ddim_step(&z1, 1, &p, None, &s).unwrap();
        assert!(out.max_abs_diff(&z0).unwrap() < 1e-12);
        assert!(denoising_loss(&p, &z0, 7, &eps, None, &s).unwrap() < 1e-20);
    }

    #[test]
    fn zero_noise_paths() {
        let s = linear_schedule(5, 0.1, 0.3).unwrap();
        let z0 = LatentGrid::new(1, 1, 2, vec![1.0, -2.0]).unwrap();
        let zero = LatentGrid::zeros(1, 1, 2).unwrap();
        let zt = forward_noise(&z0, 3, &zero, &s).unwrap();
        let ra = s.alpha_bar(3).sqrt();
        assert_eq!(zt.values(), &[ra, -2.0 * ra]);
        let back = predict_z0(&zt, 3, &zero, &s).unwrap();
        assert!(back.max_abs_diff(&z0).unwrap() < 1e-15);
        assert!(forward_noise(&z0, 0, &zero, &s).is_err());
        assert!(forward_noise(&z0, 6, &zero, &s).is_err());
    }

    #[test]
    fn strides() {
        assert_eq!(strided_timesteps(10, 5).unwrap(), vec![10, 8, 6, 4, 2]);
        assert_eq!(strided_timesteps(1000, 50).unwrap()[49], 20);
        assert!(strided_timesteps(10, 11).is_err());
    }
}
