//! Euler–Maruyama Monte Carlo for the reduced SDE and for full smoothed systems.
//!
//! Path `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so a
//! run is reproducible and independent of the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reduced::ReducedSystem;
use crate::scalar::{pairwise_sum, Real};
use crate::system::{NoiseSpec, RegionKind, SmoothedSystem};

const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig<T> {
    pub step: T,
    pub n_paths: usize,
    pub seed: u64,
    /// Paths still inside at `t_max` are censored.
    pub t_max: T,
    /// Multiplies the noise amplitude; `0` gives the deterministic skeleton.
    pub noise_scale: T,
}

impl<T: Real> McConfig<T> {
    pub fn new(step: T, n_paths: usize, seed: u64, t_max: T) -> Result<Self> {
        let cfg = Self { step, n_paths, seed, t_max, noise_scale: T::one() };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `h = min(0.01, 0.01 κ̃²)`, 10⁴ paths, `t_max = 100 r̃/|a⁺|`.
    pub fn for_reduced(red: &ReducedSystem<T>, seed: u64) -> Self {
        let c = T::lit(0.01);
        let kt = red.kappa_tilde();
        let drift = red.a_plus().abs().max(T::lit(1e-3));
        Self {
            step: c.min(c * kt * kt),
            n_paths: 10_000,
            seed,
            t_max: T::lit(100.0) * red.r_tilde() / drift,
            noise_scale: T::one(),
        }
    }

    pub fn with_noise_scale(self, noise_scale: T) -> Self {
        Self { noise_scale, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > T::zero()) || !self.step.is_finite() {
            return Err(Error::InvalidParameter(format!("step must be positive, got {}", self.step)));
        }
        if !(self.t_max > T::zero()) || !self.t_max.is_finite() {
            return Err(Error::InvalidParameter(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidParameter("n_paths must be at least 1".into()));
        }
        if !(self.noise_scale >= T::zero()) {
            return Err(Error::InvalidParameter("noise_scale must be non-negative".into()));
        }
        Ok(())
    }

    fn n_steps(&self) -> usize {
        (self.t_max / self.step).ceil().to_usize().unwrap_or(usize::MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    pub stderr: T,
    pub ci95: (T, T),
    pub n_censored: usize,
    pub n_paths: usize,
    pub seed: u64,
}

impl<T: Real> McEstimate<T> {
    /// No path was censored.
    pub fn reliable(&self) -> bool {
        self.n_censored == 0
    }

    pub fn contains(&self, x: T) -> bool {
        self.ci95.0 <= x && x <= self.ci95.1
    }

    fn from_samples(samples: &[T], n_censored: usize, seed: u64) -> Self {
        let n = T::from_usize(samples.len()).unwrap();
        let mean = pairwise_sum(samples) / n;
        let var = if samples.len() > 1 {
            let dev: Vec<T> = samples.iter().map(|&x| (x - mean) * (x - mean)).collect();
            pairwise_sum(&dev) / (n - T::one())
        } else {
            T::zero()
        };
        let stderr = (var / n).sqrt();
        let half = T::lit(Z95) * stderr;
        Self { mean, stderr, ci95: (mean - half, mean + half), n_censored, n_paths: samples.len(), seed }
    }
}

/// A single reduced path sampled at every step.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPath<T> {
    pub times: Vec<T>,
    pub ys: Vec<T>,
    /// First time `|ỹ| ≥ r̃`, if reached before `t_max`.
    pub exit_time: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullPath<T> {
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    pub exit_time: Option<T>,
}

fn path_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn warn_step<T: Real>(red: &ReducedSystem<T>, step: T) {
    let kt = red.kappa_tilde();
    let limit = T::lit(0.01) * T::one().min(kt * kt);
    if step > limit * T::lit(1.0 + 1e-9) {
        log::warn!("step {step} exceeds 0.01·min(1, κ̃²) = {limit}; bias may be visible");
    }
}

/// Runs one reduced path from `y0`, calling `visit(t, y)` after every step.
/// Returns the exit time if `|ỹ| ≥ r̃` before `t_max`.
fn run_reduced<T: Real>(
    red: &ReducedSystem<T>,
    cfg: &McConfig<T>,
    y0: T,
    stream: usize,
    stop_at_exit: bool,
    mut visit: impl FnMut(T, T),
) -> Option<T>
where
    StandardNormal: Distribution<T>,
{
    let mut rng = path_rng(cfg.seed, stream);
    let h = cfg.step;
    let amp = red.kappa_tilde() * cfg.noise_scale * h.sqrt();
    let r = red.r_tilde();
    let mut y = y0;
    let mut exit = None;
    for k in 1..=cfg.n_steps() {
        let z: T = rng.sample(StandardNormal);
        y = y + red.phi(y) * h + amp * z;
        let t = T::from_usize(k).unwrap() * h;
        visit(t, y);
        if exit.is_none() && y.abs() >= r {
            exit = Some(t);
            if stop_at_exit {
                break;
            }
        }
    }
    exit
}

/// One reduced path from `y0` on stream 0, stopped at exit.
pub fn simulate_reduced<T: Real>(red: &ReducedSystem<T>, cfg: &McConfig<T>, y0: T) -> Result<ReducedPath<T>>
where
    StandardNormal: Distribution<T>,
{
    cfg.validate()?;
    warn_step(red, cfg.step);
    let mut times = vec![T::zero()];
    let mut ys = vec![y0];
    let exit_time = run_reduced(red, cfg, y0, 0, true, |t, y| {
        times.push(t);
        ys.push(y);
    });
    Ok(ReducedPath { times, ys, exit_time })
}

/// Mean first exit time of `|ỹ| ≥ r̃` from `ỹ = 0`, in scaled time.
/// Censored paths contribute `t_max`.
pub fn mc_escape_time<T: Real>(red: &ReducedSystem<T>, cfg: &McConfig<T>) -> Result<McEstimate<T>>
where
    StandardNormal: Distribution<T>,
{
    cfg.validate()?;
    warn_step(red, cfg.step);
    let samples: Vec<(T, bool)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| match run_reduced(red, cfg, T::zero(), i, true, |_, _| {}) {
            Some(t) => (t, false),
            None => (cfg.t_max, true),
        })
        .collect();
    Ok(collect(samples, cfg.seed))
}

fn collect<T: Real>(samples: Vec<(T, bool)>, seed: u64) -> McEstimate<T> {
    let censored = samples.iter().filter(|s| s.1).count();
    let values: Vec<T> = samples.into_iter().map(|s| s.0).collect();
    let est = McEstimate::from_samples(&values, censored, seed);
    if censored > 0 {
        log::warn!("{censored} of {} paths censored at t_max; estimate is a lower bound", est.n_paths);
    }
    est
}

/// Fraction of post-burn-in time spent in `|ỹ| ≤ 1`, averaged over paths
/// started at `ỹ = 0`. Requires attracting sliding and `t_burn ≥ 10 κ̃²`.
pub fn mc_occupation<T: Real>(red: &ReducedSystem<T>, cfg: &McConfig<T>, t_burn: T) -> Result<McEstimate<T>>
where
    StandardNormal: Distribution<T>,
{
    cfg.validate()?;
    if red.region() != RegionKind::AttractingSliding {
        return Err(Error::NotSliding {
            a_minus: red.a_minus().to_f64().unwrap_or(f64::NAN),
            a_plus: red.a_plus().to_f64().unwrap_or(f64::NAN),
        });
    }
    let kt2 = red.kappa_tilde() * red.kappa_tilde();
    if t_burn < T::lit(10.0) * kt2 {
        return Err(Error::InvalidParameter(format!(
            "burn-in {t_burn} shorter than 10·κ̃² = {}",
            T::lit(10.0) * kt2
        )));
    }
    if t_burn >= cfg.t_max {
        return Err(Error::InvalidParameter("t_burn must be below t_max".into()));
    }
    warn_step(red, cfg.step);
    let samples: Vec<(T, bool)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let (mut inside, mut total) = (0usize, 0usize);
            run_reduced(red, cfg, T::zero(), i, false, |t, y| {
                if t > t_burn {
                    total += 1;
                    if y.abs() <= T::one() {
                        inside += 1;
                    }
                }
            });
            (T::from_usize(inside).unwrap() / T::from_usize(total.max(1)).unwrap(), false)
        })
        .collect();
    Ok(collect(samples, cfg.seed))
}

fn run_full<T: Real>(
    sys: &SmoothedSystem<T>,
    noise: &NoiseSpec<T>,
    x0: &[T],
    exit_radius: Option<T>,
    cfg: &McConfig<T>,
    stream: usize,
    mut visit: impl FnMut(T, &[T]),
) -> Option<T>
where
    StandardNormal: Distribution<T>,
{
    let dim = x0.len();
    let idx = sys.base().switch_index();
    let mut rng = path_rng(cfg.seed, stream);
    let h = cfg.step;
    let amp = noise.kappa() * cfg.noise_scale * h.sqrt();
    let mut x = x0.to_vec();
    let mut dw = vec![T::zero(); dim];
    for k in 1..=cfg.n_steps() {
        for w in dw.iter_mut() {
            *w = rng.sample(StandardNormal);
        }
        let f = sys.rhs(&x);
        for i in 0..dim {
            let row = noise.row(i);
            let kick = row.iter().zip(&dw).fold(T::zero(), |s, (&d, &w)| s + d * w);
            x[i] = x[i] + f[i] * h + amp * kick;
        }
        let t = T::from_usize(k).unwrap() * h;
        visit(t, &x);
        if let Some(r) = exit_radius {
            if x[idx].abs() >= r {
                return Some(t);
            }
        }
    }
    None
}

fn check_full<T: Real>(sys: &SmoothedSystem<T>, noise: &NoiseSpec<T>, x0: &[T]) -> Result<()> {
    let dim = sys.base().dim();
    if x0.len() != dim || noise.dim() != dim {
        return Err(Error::Dimension(format!(
            "system has dimension {dim}, initial state {}, noise {}",
            x0.len(),
            noise.dim()
        )));
    }
    Ok(())
}

/// One path of the full system on stream 0, stopped when the switching
/// coordinate leaves `(−r, r)` if `exit_radius` is given.
pub fn simulate_full<T: Real>(
    sys: &SmoothedSystem<T>,
    noise: &NoiseSpec<T>,
    x0: &[T],
    exit_radius: Option<T>,
    cfg: &McConfig<T>,
) -> Result<FullPath<T>>
where
    StandardNormal: Distribution<T>,
{
    cfg.validate()?;
    check_full(sys, noise, x0)?;
    let mut times = vec![T::zero()];
    let mut states = vec![x0.to_vec()];
    let exit_time = run_full(sys, noise, x0, exit_radius, cfg, 0, |t, x| {
        times.push(t);
        states.push(x.to_vec());
    });
    Ok(FullPath { times, states, exit_time })
}

/// Mean first time the switching coordinate of the full system reaches `|x_i| ≥ r`,
/// in unscaled time.
pub fn mc_escape_time_full<T: Real>(
    sys: &SmoothedSystem<T>,
    noise: &NoiseSpec<T>,
    x0: &[T],
    r: T,
    cfg: &McConfig<T>,
) -> Result<McEstimate<T>>
where
    StandardNormal: Distribution<T>,
{
    cfg.validate()?;
    check_full(sys, noise, x0)?;
    if !(r > T::zero()) {
        return Err(Error::RadiusTooSmall(r.to_f64().unwrap_or(f64::NAN)));
    }
    let samples: Vec<(T, bool)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| match run_full(sys, noise, x0, Some(r), cfg, i, |_, _| {}) {
            Some(t) => (t, false),
            None => (cfg.t_max, true),
        })
        .collect();
    Ok(collect(samples, cfg.seed))
}
