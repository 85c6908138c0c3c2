//! Dry-friction oscillator with a cubic friction layer.
//!
//! With `y = ż + 1` the velocity relative to the belt and `z` the spring
//! extension,
//!
//! ```text
//! dz = (y − 1) dt
//! dy = (1 − z − y − F(y)) dt + κ dW
//! F(y) = α·sgn(y)                    for |y| ≥ ε
//!      = α (s + μ(s − s³)), s = y/ε   for |y| < ε
//! ```
//!
//! For `μ > 1/2` the layer produces a breakaway force `β > α`, and between
//! `z₀⁽⁺⁾ = 1 − β` and `1 − α` the reduced drift has a potential well where
//! Filippov's convention predicts crossing.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::escape::{escape_exact, escape_time_asymptotic, turning_points};
use crate::poly::Polynomial;
use crate::reduced::{Interior, ReducedSystem};
use crate::scalar::Real;
use crate::system::{NoiseSpec, PiecewiseSystem, SmoothedSystem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionParams<T> {
    pub alpha: T,
    pub mu: T,
    pub eps: T,
    pub kappa: T,
    pub r: T,
    pub z0: T,
}

impl<T: Real> FrictionParams<T> {
    pub fn new(alpha: T, mu: T, eps: T, kappa: T, r: T, z0: T) -> Result<Self> {
        let p = Self { alpha, mu, eps, kappa, r, z0 };
        p.validate()?;
        Ok(p)
    }

    /// `α = 1`, `ε = 0.01`, `r = 0.1`: the parameter set of the escape-time scans.
    pub fn reference(mu: T, kappa: T, z0: T) -> Self {
        Self { alpha: T::one(), mu, eps: T::lit(0.01), kappa, r: T::lit(0.1), z0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.mu >= T::zero()) {
            return Err(Error::InvalidParameter(format!("mu must be non-negative, got {}", self.mu)));
        }
        if !(self.eps > T::zero()) || !(self.eps < self.r) {
            return Err(Error::BadScales {
                eps: self.eps.to_f64().unwrap_or(f64::NAN),
                r: self.r.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !self.kappa.is_finite() || !self.z0.is_finite() {
            return Err(Error::InvalidParameter("kappa and z0 must be finite".into()));
        }
        Ok(())
    }

    pub fn with_z0(self, z0: T) -> Self {
        Self { z0, ..self }
    }

    pub fn with_kappa(self, kappa: T) -> Self {
        Self { kappa, ..self }
    }

    pub fn with_mu(self, mu: T) -> Self {
        Self { mu, ..self }
    }

    /// Normal drift below the layer, `1 − z₀ + α`.
    pub fn a_minus(&self) -> T {
        T::one() - self.z0 + self.alpha
    }

    /// Normal drift above the layer, `1 − z₀ − α`.
    pub fn a_plus(&self) -> T {
        T::one() - self.z0 - self.alpha
    }

    /// Layer drift `A(u) = 1 − z₀ − α(u + μ(u − u³))` as a polynomial in `u`.
    pub fn layer_polynomial(&self) -> Polynomial<T> {
        Polynomial::new(vec![
            T::one() - self.z0,
            -self.alpha * (T::one() + self.mu),
            T::zero(),
            self.alpha * self.mu,
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakawayInfo<T> {
    /// Largest friction force over the layer.
    pub beta: T,
    /// `±y_s`: extrema of the friction force (only for `μ > 1/2`).
    pub y_s: Option<T>,
    /// `±u`: the same in the scaled variable.
    pub u_pm: Option<T>,
    /// `z₀⁽⁺⁾ = 1 − β`.
    pub z0_plus: Option<T>,
    /// `z₀⁽⁻⁾ = 1 + β`.
    pub z0_minus: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrictionRegion {
    FilippovSliding,
    SpuriousSliding,
    Crossing,
}

impl FrictionRegion {
    pub fn name(self) -> &'static str {
        match self {
            FrictionRegion::FilippovSliding => "filippov-sliding",
            FrictionRegion::SpuriousSliding => "spurious-sliding",
            FrictionRegion::Crossing => "crossing",
        }
    }
}

pub fn friction_force<T: Real>(y: T, p: &FrictionParams<T>) -> T {
    if y <= -p.eps {
        -p.alpha
    } else if y >= p.eps {
        p.alpha
    } else {
        let s = y / p.eps;
        p.alpha * (s + p.mu * (s - s * s * s))
    }
}

pub fn breakaway<T: Real>(p: &FrictionParams<T>) -> BreakawayInfo<T> {
    let one = T::one();
    let three = T::lit(3.0);
    if p.mu > T::lit(0.5) {
        let u = ((one + p.mu) / (three * p.mu)).sqrt();
        let beta = p.alpha * T::lit(2.0) * (one + p.mu).powf(T::lit(1.5)) / (three * (three * p.mu).sqrt());
        BreakawayInfo {
            beta,
            y_s: Some(p.eps * u),
            u_pm: Some(u),
            z0_plus: Some(one - beta),
            z0_minus: Some(one + beta),
        }
    } else {
        BreakawayInfo { beta: p.alpha, y_s: None, u_pm: None, z0_plus: None, z0_minus: None }
    }
}

/// Dynamics on the switching surface at spring extension `z0`.
pub fn region_map<T: Real>(z0: T, p: &FrictionParams<T>) -> FrictionRegion {
    let one = T::one();
    if z0 > one - p.alpha && z0 < one + p.alpha {
        return FrictionRegion::FilippovSliding;
    }
    let b = breakaway(p);
    if let (Some(lo), Some(hi)) = (b.z0_plus, b.z0_minus) {
        if (z0 > lo && z0 < one - p.alpha) || (z0 > one + p.alpha && z0 < hi) {
            return FrictionRegion::SpuriousSliding;
        }
    }
    FrictionRegion::Crossing
}

/// Reduced system at `(y, z) = (0, z₀)`, with `a±` taken from the layer
/// polynomial at `u = ±1`.
pub fn reduced_from_friction<T: Real>(p: &FrictionParams<T>) -> Result<ReducedSystem<T>> {
    p.validate()?;
    ReducedSystem::from_unscaled(
        p.a_minus(),
        p.a_plus(),
        Interior::Polynomial(p.layer_polynomial()),
        p.eps,
        p.kappa,
        p.r,
    )
}

/// The oscillator as a smoothed two-dimensional system in `x = (y, z)`.
pub fn friction_system<T: Real>(p: &FrictionParams<T>) -> Result<SmoothedSystem<T>> {
    p.validate()?;
    let alpha = p.alpha;
    let mu = p.mu;
    let base = PiecewiseSystem::new(
        2,
        0,
        move |x: &[T]| vec![T::one() - x[1] - x[0] + alpha, x[0] - T::one()],
        move |x: &[T]| vec![T::one() - x[1] - x[0] - alpha, x[0] - T::one()],
    )?;
    SmoothedSystem::new(base, p.eps, move |s, x| {
        vec![T::one() - x[1] - x[0] - alpha * (s + mu * (s - s * s * s)), x[0] - T::one()]
    })
}

/// Noise on the velocity equation only.
pub fn friction_noise<T: Real>(p: &FrictionParams<T>) -> Result<NoiseSpec<T>> {
    NoiseSpec::on_coordinate(p.kappa, 2, 0)
}

/// 200 points on `[−1.5, −0.05]`.
pub fn default_z0_grid<T: Real>() -> Vec<T> {
    linspace(T::lit(-1.5), T::lit(-0.05), 200)
}

pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    let d = T::from_usize(n - 1).unwrap();
    (0..n).map(|i| lo + (hi - lo) * T::from_usize(i).unwrap() / d).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// Exact value present, asymptotic value missing.
    AsymptoticMissing(String),
    Rejected(String),
}

impl RowStatus {
    pub fn label(&self) -> String {
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::AsymptoticMissing(r) => format!("asym-missing:{r}"),
            RowStatus::Rejected(r) => format!("rejected:{r}"),
        }
    }

    pub fn succeeded(&self) -> bool {
        !matches!(self, RowStatus::Rejected(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow<T> {
    pub z0: T,
    pub kappa: T,
    pub mu: T,
    pub stokes: Option<u8>,
    pub t_exact: Option<T>,
    pub t_asym: Option<T>,
    pub log10_t_exact: Option<T>,
    pub log10_t_asym: Option<T>,
    pub well_depth: Option<T>,
    pub status: RowStatus,
}

fn scan_cell<T: Real>(p: FrictionParams<T>) -> ScanRow<T> {
    let mut row = ScanRow {
        z0: p.z0,
        kappa: p.kappa,
        mu: p.mu,
        stokes: None,
        t_exact: None,
        t_asym: None,
        log10_t_exact: None,
        log10_t_asym: None,
        well_depth: None,
        status: RowStatus::Ok,
    };
    if !(p.a_plus() > T::zero()) {
        row.status = RowStatus::Rejected("sliding band (a+ <= 0)".into());
        return row;
    }
    let red = match reduced_from_friction(&p) {
        Ok(r) => r,
        Err(e) => {
            row.status = RowStatus::Rejected(e.to_string().replace(',', ";"));
            return row;
        }
    };
    let well = match turning_points(&red) {
        Ok(w) => w,
        Err(e) => {
            row.status = RowStatus::Rejected(e.to_string().replace(',', ";"));
            return row;
        }
    };
    row.stokes = Some(well.stokes);
    row.well_depth = well.depth();
    match escape_exact(&red) {
        Ok(e) => {
            row.t_exact = Some(e.t_tilde);
            row.log10_t_exact = Some(e.ln_t_tilde / T::LN_10());
        }
        Err(e) => {
            row.status = RowStatus::Rejected(e.to_string().replace(',', ";"));
            return row;
        }
    }
    match escape_time_asymptotic(&red, &well) {
        Ok(a) => {
            row.t_asym = Some(a.value);
            row.log10_t_asym = Some(a.ln_value / T::LN_10());
        }
        Err(e) => row.status = RowStatus::AsymptoticMissing(e.to_string().replace(',', ";")),
    }
    row
}

/// Exact and asymptotic escape times over a `(z₀, κ)` grid, `z₀`-major.
///
/// Cells are evaluated in parallel; the row order is the grid order.
pub fn scan_escape_times<T: Real>(
    z0_grid: &[T],
    kappa_list: &[T],
    p: &FrictionParams<T>,
) -> Vec<ScanRow<T>> {
    let cells: Vec<FrictionParams<T>> = z0_grid
        .iter()
        .flat_map(|&z0| kappa_list.iter().map(move |&kappa| p.with_z0(z0).with_kappa(kappa)))
        .collect();
    cells.into_par_iter().map(scan_cell).collect()
}
