//! Piecewise-smooth, smoothed and noisy systems, the Filippov classification
//! of the switching surface, and reduction to the scaled 1-D problem.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::reduced::{Interior, ReducedSystem};
use crate::scalar::Real;

pub type VectorField<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;
pub type LayerField<T> = Arc<dyn Fn(T, &[T]) -> Vec<T> + Send + Sync>;

/// Relative threshold below which a normal drift counts as zero.
pub const TOL_ZERO: f64 = 1e-12;

/// `ẋ = f⁻(x)` for `y < 0`, `ẋ = f⁺(x)` for `y > 0`, where `y = x[switch_index]`.
#[derive(Clone)]
pub struct PiecewiseSystem<T> {
    dim: usize,
    f_minus: VectorField<T>,
    f_plus: VectorField<T>,
    switch_index: usize,
}

impl<T: Real> PiecewiseSystem<T> {
    pub fn new(
        dim: usize,
        switch_index: usize,
        f_minus: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
        f_plus: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 || switch_index >= dim {
            return Err(Error::Dimension(format!(
                "switch index {switch_index} out of range for dimension {dim}"
            )));
        }
        Ok(Self { dim, f_minus: Arc::new(f_minus), f_plus: Arc::new(f_plus), switch_index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn switch_index(&self) -> usize {
        self.switch_index
    }
    pub fn f_minus(&self, x: &[T]) -> Vec<T> {
        (self.f_minus)(x)
    }
    pub fn f_plus(&self, x: &[T]) -> Vec<T> {
        (self.f_plus)(x)
    }
}

impl<T> fmt::Debug for PiecewiseSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseSystem")
            .field("dim", &self.dim)
            .field("switch_index", &self.switch_index)
            .finish_non_exhaustive()
    }
}

/// The jump replaced by `F(y/ε, x)` across `|y| < ε`.
#[derive(Clone)]
pub struct SmoothedSystem<T> {
    base: PiecewiseSystem<T>,
    eps: T,
    layer: LayerField<T>,
}

impl<T: Real> SmoothedSystem<T> {
    pub fn new(
        base: PiecewiseSystem<T>,
        eps: T,
        layer: impl Fn(T, &[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(eps > T::zero()) || !eps.is_finite() {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        Ok(Self { base, eps, layer: Arc::new(layer) })
    }

    /// `F(s, x) = (1+s)/2 · f⁺(x) + (1−s)/2 · f⁻(x)`.
    pub fn linear(base: PiecewiseSystem<T>, eps: T) -> Result<Self> {
        let fm = Arc::clone(&base.f_minus);
        let fp = Arc::clone(&base.f_plus);
        Self::new(base, eps, move |s, x| {
            let (m, p) = (fm(x), fp(x));
            let half = T::lit(0.5);
            m.iter()
                .zip(&p)
                .map(|(&m, &p)| half * (T::one() + s) * p + half * (T::one() - s) * m)
                .collect()
        })
    }

    pub fn base(&self) -> &PiecewiseSystem<T> {
        &self.base
    }
    pub fn eps(&self) -> T {
        self.eps
    }

    /// `F(s, x)`.
    pub fn layer(&self, s: T, x: &[T]) -> Vec<T> {
        (self.layer)(s, x)
    }

    /// The three-branch right-hand side.
    pub fn rhs(&self, x: &[T]) -> Vec<T> {
        let y = x[self.base.switch_index];
        if y <= -self.eps {
            self.base.f_minus(x)
        } else if y >= self.eps {
            self.base.f_plus(x)
        } else {
            self.layer(y / self.eps, x)
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for SmoothedSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothedSystem")
            .field("base", &self.base)
            .field("eps", &self.eps)
            .finish_non_exhaustive()
    }
}

/// Additive noise `κ D dW` with a constant `n×n` direction matrix (row major).
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec<T> {
    kappa: T,
    dim: usize,
    diffusion: Vec<T>,
}

impl<T: Real> NoiseSpec<T> {
    pub fn new(kappa: T, dim: usize, diffusion: Vec<T>) -> Result<Self> {
        if diffusion.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "diffusion matrix has {} entries, expected {}",
                diffusion.len(),
                dim * dim
            )));
        }
        if !kappa.is_finite() || diffusion.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidParameter("noise entries must be finite".into()));
        }
        Ok(Self { kappa, dim, diffusion })
    }

    pub fn isotropic(kappa: T, dim: usize) -> Result<Self> {
        let mut d = vec![T::zero(); dim * dim];
        for i in 0..dim {
            d[i * dim + i] = T::one();
        }
        Self::new(kappa, dim, d)
    }

    /// Noise acting on the `index`-th coordinate only.
    pub fn on_coordinate(kappa: T, dim: usize, index: usize) -> Result<Self> {
        let mut d = vec![T::zero(); dim * dim];
        d[index * dim + index] = T::one();
        Self::new(kappa, dim, d)
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn row(&self, i: usize) -> &[T] {
        &self.diffusion[i * self.dim..(i + 1) * self.dim]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    Crossing,
    AttractingSliding,
    RepellingSliding,
    Degenerate,
}

impl RegionKind {
    pub fn name(self) -> &'static str {
        match self {
            RegionKind::Crossing => "crossing",
            RegionKind::AttractingSliding => "attracting-sliding",
            RegionKind::RepellingSliding => "repelling-sliding",
            RegionKind::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Filippov classification from the normal drifts on either side.
pub fn classify<T: Real>(a_minus: T, a_plus: T) -> RegionKind {
    let scale = a_minus.abs().max(a_plus.abs());
    let tol = T::lit(TOL_ZERO) * scale;
    if scale == T::zero() || a_minus.abs() <= tol || a_plus.abs() <= tol {
        return RegionKind::Degenerate;
    }
    match (a_minus > T::zero(), a_plus > T::zero()) {
        (true, true) | (false, false) => RegionKind::Crossing,
        (true, false) => RegionKind::AttractingSliding,
        (false, true) => RegionKind::RepellingSliding,
    }
}

/// Filippov sliding vector field `λ f⁺ + (1−λ) f⁻` with `λ = a⁻/(a⁻ − a⁺)`.
///
/// The switching component of the result is set to exactly zero.
pub fn filippov_sliding_field<T: Real>(
    f_minus: &[T],
    f_plus: &[T],
    switch_index: usize,
) -> Result<(Vec<T>, T)> {
    if f_minus.len() != f_plus.len() || switch_index >= f_minus.len() {
        return Err(Error::Dimension("field lengths or switch index inconsistent".into()));
    }
    let (am, ap) = (f_minus[switch_index], f_plus[switch_index]);
    if classify(am, ap) != RegionKind::AttractingSliding {
        return Err(Error::NotSliding {
            a_minus: am.to_f64().unwrap_or(f64::NAN),
            a_plus: ap.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lambda = am / (am - ap);
    let mut field: Vec<T> = f_minus
        .iter()
        .zip(f_plus)
        .map(|(&m, &p)| lambda * p + (T::one() - lambda) * m)
        .collect();
    field[switch_index] = T::zero();
    Ok((field, lambda))
}

/// Gaps `|F(±1, x) − f±(x)|` per component.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport<T> {
    pub gap_minus: Vec<T>,
    pub gap_plus: Vec<T>,
    pub tol: T,
    pub passed: bool,
}

impl<T: Real> ContinuityReport<T> {
    pub fn max_gap(&self) -> T {
        self.gap_minus.iter().chain(&self.gap_plus).fold(T::zero(), |m, &g| m.max(g))
    }
}

pub fn continuity_check<T: Real>(sys: &SmoothedSystem<T>, x0: &[T], tol: T) -> ContinuityReport<T> {
    let gaps = |layer: Vec<T>, outer: Vec<T>| -> Vec<T> {
        layer.iter().zip(&outer).map(|(&a, &b)| (a - b).abs()).collect()
    };
    let gap_minus = gaps(sys.layer(-T::one(), x0), sys.base.f_minus(x0));
    let gap_plus = gaps(sys.layer(T::one(), x0), sys.base.f_plus(x0));
    let passed = gap_minus.iter().chain(&gap_plus).all(|&g| g <= tol);
    ContinuityReport { gap_minus, gap_plus, tol, passed }
}

/// Reduces the smoothed noisy system at the surface point `at` to the scaled
/// 1-D problem with escape radius `r`.
///
/// The effective noise is `κ‖B‖₂` with `B` the switching row of `D`.
pub fn reduce<T: Real>(
    sys: &SmoothedSystem<T>,
    noise: &NoiseSpec<T>,
    at: &[T],
    r: T,
) -> Result<ReducedSystem<T>> {
    let base = sys.base();
    if at.len() != base.dim() || noise.dim() != base.dim() {
        return Err(Error::Dimension(format!(
            "system dimension {}, point {}, noise {}",
            base.dim(),
            at.len(),
            noise.dim()
        )));
    }
    let idx = base.switch_index();
    let eps = sys.eps();
    if eps >= r {
        return Err(Error::BadScales { eps: eps.to_f64().unwrap(), r: r.to_f64().unwrap() });
    }
    let b_norm = noise.row(idx).iter().fold(T::zero(), |s, &b| s + b * b).sqrt();
    let kappa_eff = noise.kappa().abs() * b_norm;
    if eps > r / T::lit(5.0) || kappa_eff > r / T::lit(2.0) {
        warn!(
            "weak scale separation: eps = {eps}, kappa = {kappa_eff}, r = {r} \
             (expected eps <= r/5 and kappa <= r/2)"
        );
    }
    let mut point = at.to_vec();
    point[idx] = T::zero();
    let a_minus = base.f_minus(&point)[idx];
    let a_plus = base.f_plus(&point)[idx];
    let layer = Arc::clone(&sys.layer);
    let interior = Interior::function(move |s| layer(s, &point)[idx]);
    ReducedSystem::from_unscaled(a_minus, a_plus, interior, eps, kappa_eff, r)
}

/// Named smoothing presets addressable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    CubicFriction,
    Linear,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::CubicFriction => "cubic-friction",
            Preset::Linear => "linear",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cubic-friction" => Ok(Preset::CubicFriction),
            "linear" => Ok(Preset::Linear),
            other => Err(Error::InvalidParameter(format!("unknown preset '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn classification_table() {
        assert_eq!(classify(1.0, -1.0), RegionKind::AttractingSliding);
        assert_eq!(classify(1.0, 1.0), RegionKind::Crossing);
        assert_eq!(classify(-1.0, -2.0), RegionKind::Crossing);
        assert_eq!(classify(-1.0, 1.0), RegionKind::RepellingSliding);
        assert_eq!(classify(0.0, 1.0), RegionKind::Degenerate);
        assert_eq!(classify(1.0, 1e-14), RegionKind::Degenerate);
        assert_eq!(classify(1.0f32, -1.0f32), RegionKind::AttractingSliding);
    }

    #[test]
    fn sliding_field_examples() {
        let (f, l) = filippov_sliding_field(&[2.0, 1.0], &[-2.0, 3.0], 0).unwrap();
        assert_eq!(l, 0.5);
        assert_eq!(f, vec![0.0, 2.0]);
        let (f, l) = filippov_sliding_field(&[1.0, 0.0], &[-3.0, 0.0], 0).unwrap();
        assert_eq!(l, 0.25);
        assert_eq!(f, vec![0.0, 0.0]);
        assert!(matches!(
            filippov_sliding_field(&[1.0, 5.0], &[1.0, 7.0], 0),
            Err(Error::NotSliding { .. })
        ));
    }

    fn demo_base() -> PiecewiseSystem<f64> {
        PiecewiseSystem::new(2, 0, |x: &[f64]| vec![1.0 + x[1], -x[0]], |x: &[f64]| {
            vec![-1.0 + x[1], 2.0]
        })
        .unwrap()
    }

    #[test]
    fn continuity_of_linear_and_mismatched_layers() {
        let lin = SmoothedSystem::linear(demo_base(), 0.1).unwrap();
        let rep = continuity_check(&lin, &[0.0, 0.3], 1e-12);
        assert!(rep.passed, "{rep:?}");
        let zero = SmoothedSystem::new(demo_base(), 0.1, |_, _| vec![0.0, 0.0]).unwrap();
        let rep = continuity_check(&zero, &[0.0, 0.0], 1e-6);
        assert!(!rep.passed);
        assert_eq!(rep.gap_minus[0], 1.0);
        assert_eq!(rep.max_gap(), 2.0);
    }

    #[test]
    fn reduce_uses_switching_row_norm() {
        let lin = SmoothedSystem::linear(demo_base(), 0.01).unwrap();
        let noise = NoiseSpec::isotropic(0.05, 2).unwrap();
        let red = reduce(&lin, &noise, &[0.0, 0.0], 0.1).unwrap();
        assert_relative_eq!(red.kappa_tilde(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(red.r_tilde(), 10.0, epsilon = 1e-12);
        assert_eq!(red.a_minus(), 1.0);
        assert_eq!(red.a_plus(), -1.0);
        // ‖(3, 4)‖ = 5
        let tilted = NoiseSpec::new(0.01, 2, vec![3.0, 4.0, 0.0, 0.0]).unwrap();
        let red = reduce(&lin, &tilted, &[0.0, 0.0], 0.1).unwrap();
        assert_relative_eq!(red.kappa_eff(), 0.05, epsilon = 1e-15);
        let silent = NoiseSpec::new(0.05, 2, vec![0.0; 4]).unwrap();
        assert!(matches!(reduce(&lin, &silent, &[0.0, 0.0], 0.1), Err(Error::NonPositiveNoise(_))));
        assert!(matches!(reduce(&lin, &noise, &[0.0, 0.0], 0.01), Err(Error::BadScales { .. })));
    }

    #[test]
    fn presets_parse() {
        assert_eq!("cubic-friction".parse::<Preset>().unwrap(), Preset::CubicFriction);
        assert_eq!("linear".parse::<Preset>().unwrap(), Preset::Linear);
        assert!("quintic".parse::<Preset>().is_err());
    }

    fn kind_code(k: RegionKind) -> u8 {
        match k {
            RegionKind::Crossing => 0,
            RegionKind::AttractingSliding => 1,
            RegionKind::RepellingSliding => 2,
            RegionKind::Degenerate => 3,
        }
    }

    proptest! {
        #[test]
        fn classification_is_reflection_symmetric(am in -10.0f64..10.0, ap in -10.0f64..10.0) {
            prop_assert_eq!(kind_code(classify(am, ap)), kind_code(classify(-ap, -am)));
        }

        #[test]
        fn sliding_field_has_zero_normal_component(
            am in 1e-3f64..10.0,
            ap in -10.0f64..-1e-3,
            tang in proptest::collection::vec(-5.0f64..5.0, 2),
            idx in 0usize..3,
        ) {
            let mut fm = tang.clone();
            let mut fp: Vec<f64> = tang.iter().map(|t| -t).collect();
            fm.insert(idx, am);
            fp.insert(idx, ap);
            let (f, l) = filippov_sliding_field(&fm, &fp, idx).unwrap();
            prop_assert_eq!(f[idx], 0.0);
            prop_assert!(l > 0.0 && l < 1.0);
        }
    }
}
