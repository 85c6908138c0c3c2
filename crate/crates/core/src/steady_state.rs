//! Stationary density `p_ss ∝ exp(−2V/κ̃²)` of the reduced SDE on an attracting
//! sliding surface, and the probability of lying inside the layer `|ỹ| ≤ 1`.

use crate::error::{Error, Result};
use crate::potential::PiecewisePotential;
use crate::quadrature::ln_integrate_exp_refined;
use crate::scalar::{log_sum_exp, Real};
use crate::system::RegionKind;

/// Regime boundary: `κ̃ ≥ KAPPA_SPLIT` is large noise, `κ̃ ≤ 1/KAPPA_SPLIT` small.
pub const KAPPA_SPLIT: f64 = 3.0;

const GRID_POINTS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OccupancyRegime {
    LargeKappa,
    SmallKappa,
    Intermediate,
}

impl OccupancyRegime {
    pub fn name(self) -> &'static str {
        match self {
            OccupancyRegime::LargeKappa => "large-kappa",
            OccupancyRegime::SmallKappa => "small-kappa",
            OccupancyRegime::Intermediate => "intermediate",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StationaryDensity<T> {
    pot: PiecewisePotential<T>,
    ln_norm: T,
    window: T,
    grid: Vec<(T, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationResult<T> {
    pub p_exact: T,
    pub p_asym: T,
    pub regime: OccupancyRegime,
}

/// Log-masses of the three pieces `(−∞,−1)`, `[−1,1]`, `(1,∞)` of `∫ e^{−2V/κ̃²}`.
struct Masses<T> {
    left: T,
    interior: T,
    right: T,
}

fn require_sliding<T: Real>(pot: &PiecewisePotential<T>) -> Result<()> {
    match pot.reduced().region() {
        RegionKind::AttractingSliding => Ok(()),
        other => Err(Error::NotNormalizable(other)),
    }
}

fn masses<T: Real>(pot: &PiecewisePotential<T>) -> Result<Masses<T>> {
    let red = pot.reduced();
    let k2 = red.kappa_tilde() * red.kappa_tilde();
    let k = T::lit(2.0) / k2;
    let two = T::lit(2.0);
    let left = (k2 / (two * red.a_minus())).ln();
    let right = (k2 / (-two * red.a_plus())).ln() - k * pot.v1();
    let interior = ln_integrate_exp_refined(
        &[-T::one(), T::zero(), T::one()],
        |u| -k * pot.eval(u),
        T::lit(1e-13),
    )?;
    Ok(Masses { left, interior, right })
}

/// Normalized stationary density; requires attracting sliding.
pub fn stationary_density<T: Real>(pot: &PiecewisePotential<T>) -> Result<StationaryDensity<T>> {
    require_sliding(pot)?;
    let m = masses(pot)?;
    let ln_norm = log_sum_exp([m.left, m.interior, m.right]);
    let red = pot.reduced();
    let spread = (T::one() / red.a_minus()).max(T::one() / -red.a_plus());
    let window = T::one() + T::lit(10.0) * red.kappa_tilde() * red.kappa_tilde() * spread;
    let mut dens = StationaryDensity { pot: pot.clone(), ln_norm, window, grid: Vec::new() };
    let n = T::from_usize(GRID_POINTS - 1).unwrap();
    dens.grid = (0..GRID_POINTS)
        .map(|i| {
            let y = -window + T::lit(2.0) * window * T::from_usize(i).unwrap() / n;
            (y, dens.density(y))
        })
        .collect();
    Ok(dens)
}

impl<T: Real> StationaryDensity<T> {
    pub fn density(&self, y: T) -> T {
        let k2 = self.pot.reduced().kappa_tilde() * self.pot.reduced().kappa_tilde();
        (-T::lit(2.0) * self.pot.eval(y) / k2 - self.ln_norm).exp()
    }

    /// Normalization constant `K`.
    pub fn norm(&self) -> T {
        (-self.ln_norm).exp()
    }

    pub fn ln_norm(&self) -> T {
        self.ln_norm
    }

    /// Half-width `w` of the tabulation window `[−w, w]`.
    pub fn window(&self) -> T {
        self.window
    }

    pub fn grid(&self) -> &[(T, T)] {
        &self.grid
    }

    pub fn potential(&self) -> &PiecewisePotential<T> {
        &self.pot
    }

    /// Analytic tails plus interior quadrature of the normalized density.
    pub fn total_mass(&self) -> Result<T> {
        let m = masses(&self.pot)?;
        Ok((log_sum_exp([m.left, m.interior, m.right]) - self.ln_norm).exp())
    }
}

/// `ℙ[|ỹ| ≤ 1]` under the stationary density.
pub fn occupation_probability_exact<T: Real>(pot: &PiecewisePotential<T>) -> Result<T> {
    require_sliding(pot)?;
    let m = masses(pot)?;
    let ratio = (log_sum_exp([m.left, m.right]) - m.interior).exp();
    Ok(T::one() / (T::one() + ratio))
}

/// Leading-order occupation probability in the large- and small-noise limits;
/// falls back to the exact value in between.
pub fn occupation_probability_asymptotic<T: Real>(
    pot: &PiecewisePotential<T>,
) -> Result<OccupationResult<T>> {
    let p_exact = occupation_probability_exact(pot)?;
    let red = pot.reduced();
    let kt = red.kappa_tilde();
    let split = T::lit(KAPPA_SPLIT);
    let (regime, p_asym) = if kt >= split {
        let harmonic = T::one() / red.a_minus() + T::one() / -red.a_plus();
        (OccupancyRegime::LargeKappa, T::lit(4.0) / (harmonic * kt * kt))
    } else if kt <= T::one() / split {
        (OccupancyRegime::SmallKappa, T::one())
    } else {
        (OccupancyRegime::Intermediate, p_exact)
    };
    Ok(OccupationResult { p_exact, p_asym, regime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::reduced::{Interior, ReducedSystem};
    use approx::assert_relative_eq;

    fn pot(am: f64, ap: f64, interior: Interior<f64>, kt: f64) -> PiecewisePotential<f64> {
        PiecewisePotential::new(&ReducedSystem::scaled(am, ap, interior, kt, 10.0).unwrap()).unwrap()
    }

    fn odd_linear(kt: f64) -> PiecewisePotential<f64> {
        pot(1.0, -1.0, Interior::Polynomial(Polynomial::new(vec![0.0, -1.0])), kt)
    }

    #[test]
    fn symmetric_density_peaks_at_origin() {
        let d = stationary_density(&odd_linear(1.0)).unwrap();
        for &y in &[0.3, 0.9, 2.0, 5.0] {
            assert_relative_eq!(d.density(y), d.density(-y), max_relative = 1e-12);
            assert!(d.density(0.0) > d.density(y));
        }
        let (argmax, _) = d
            .grid()
            .iter()
            .copied()
            .fold((0.0, 0.0), |best, (y, p)| if p > best.1 { (y, p) } else { best });
        assert!(argmax.abs() < 1e-12);
    }

    #[test]
    fn crossing_is_not_normalizable() {
        let p = pot(1.0, 1.0, Interior::linear(1.0, 1.0), 1.0);
        assert_eq!(stationary_density(&p).unwrap_err(), Error::NotNormalizable(RegionKind::Crossing));
        assert!(occupation_probability_exact(&p).is_err());
    }

    #[test]
    fn density_integrates_to_one_against_trapezoid_oracle() {
        let p = pot(2.0, -1.0, Interior::linear(2.0, -1.0), 0.5);
        let d = stationary_density(&p).unwrap();
        assert!((d.total_mass().unwrap() - 1.0).abs() < 1e-8);
        // trapezoid on a wide window; tails beyond carry < e^{-60}
        let (lo, hi, n) = (-9.0, 9.0, 360_000);
        let h = (hi - lo) / n as f64;
        let mut s = 0.5 * (d.density(lo) + d.density(hi));
        for i in 1..n {
            s += d.density(lo + h * i as f64);
        }
        assert!((s * h - 1.0).abs() < 1e-8, "trapezoid mass {}", s * h);
    }

    #[test]
    fn large_and_small_noise_limits() {
        let p_big = occupation_probability_exact(&odd_linear(10.0)).unwrap();
        assert!((p_big - 0.02).abs() < 0.1 * 0.02, "{p_big}");
        let p_small = occupation_probability_exact(&odd_linear(0.1)).unwrap();
        assert!(p_small >= 0.99);
        let r = occupation_probability_asymptotic(&odd_linear(10.0)).unwrap();
        assert_eq!(r.regime, OccupancyRegime::LargeKappa);
        assert_relative_eq!(r.p_asym, 0.02, epsilon = 1e-15);
        let r = occupation_probability_asymptotic(&odd_linear(0.05)).unwrap();
        assert_eq!((r.regime, r.p_asym), (OccupancyRegime::SmallKappa, 1.0));
        let r = occupation_probability_asymptotic(&odd_linear(1.0)).unwrap();
        assert_eq!(r.regime, OccupancyRegime::Intermediate);
        assert_eq!(r.p_asym, r.p_exact);
    }

    #[test]
    fn exact_probability_matches_dense_grid_oracle() {
        // a⁻ = 2, a⁺ = −3, linear A, κ̃ = 1: brute-force both integrals
        let p = pot(2.0, -3.0, Interior::linear(2.0, -3.0), 1.0);
        let exact = occupation_probability_exact(&p).unwrap();
        let w = |u: f64| (-2.0 * p.eval(u)).exp();
        let simpson = |a: f64, b: f64, n: usize| {
            let h = (b - a) / n as f64;
            let mut s = w(a) + w(b);
            for i in 1..n {
                s += w(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        let inner = simpson(-1.0, 1.0, 20_000);
        let total = simpson(-40.0, -1.0, 200_000) + inner + simpson(1.0, 40.0, 200_000);
        assert!(exact > 0.0 && exact < 1.0);
        assert_relative_eq!(exact, inner / total, max_relative = 1e-9);
    }
}
