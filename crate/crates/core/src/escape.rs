//! Mean escape time from `|ỹ| < r̃` starting at `ỹ = 0`, for a crossing surface.
//!
//! The exact value is the first-passage double integral
//!
//! ```text
//! T̃ = (2/κ̃²) ∫∫_{−r̃ ≤ u ≤ v ≤ r̃} (H(v) − C) exp(2(V(v) − V(u))/κ̃²) du dv
//! C  = ∫₀^r̃ e^{2V/κ̃²} / ∫_{−r̃}^r̃ e^{2V/κ̃²}
//! ```
//!
//! evaluated entirely in log space. On the outer branches `|ỹ| ≥ 1` the
//! potential is linear, so those parts of the triangle are integrated in
//! closed form; the layer `[−1, 1]` uses 32-point Gauss–Legendre panels split
//! at the roots of `A` and at 0, refined dyadically.
//!
//! The asymptotic value is `r̃/a⁺` for `κ̃ ≥ 1`, and for `κ̃ < 1` adds the
//! Laplace contribution of a potential well (minimum `ỹ₁`, maximum `ỹ₂`)
//! switched on by the Stokes multiplier `S`:
//! `2πS / √(−A'(ỹ₁)A'(ỹ₂)) · exp(2(V(ỹ₂) − V(ỹ₁))/κ̃²)`.
//!
//! Leftward crossings (`a± < 0`) are reflected to the rightward form first.

use crate::error::{Error, Result};
use crate::poly::{bisection_tol, bracket_roots};
use crate::potential::PiecewisePotential;
use crate::quadrature::{gl32, panels};
use crate::reduced::{Interior, ReducedSystem};
use crate::scalar::{
    ln_int_exp_linear, ln_one_minus_exp, ln_triangle_exp_linear, log_add_exp, log_sum_exp, Real,
};

/// `κ̃` at and above which the large-noise formula is used.
pub const REGIME_SPLIT: f64 = 1.0;
/// Smallest `|A'|` at a well root for which the Laplace prefactor is trusted.
pub const SLOPE_GUARD: f64 = 1e-6;
/// Convergence target of the dyadic refinement, on `ln T̃`.
pub const REFINE_TOL: f64 = 1e-9;

const START_PANELS: usize = 4;
const MAX_PANELS: usize = 4096;
const ROOT_PANELS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub y: T,
    pub slope: T,
}

/// A minimum `y1` of `V` followed by the maximum `y2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Well<T> {
    pub y1: T,
    pub y2: T,
    pub slope1: T,
    pub slope2: T,
    /// `V(y2) − V(y1)`.
    pub depth: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellAnalysis<T> {
    /// Roots of `A` in `(−1, 1)` with `A'` there, ascending.
    pub roots: Vec<Root<T>>,
    pub well: Option<Well<T>>,
    /// Stokes multiplier, 0 or 1.
    pub stokes: u8,
}

impl<T: Real> WellAnalysis<T> {
    pub fn depth(&self) -> Option<T> {
        self.well.map(|w| w.depth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscapeRegime {
    LargeKappa,
    SmallKappa,
}

impl EscapeRegime {
    pub fn of<T: Real>(kappa_tilde: T) -> Self {
        if kappa_tilde >= T::lit(REGIME_SPLIT) {
            EscapeRegime::LargeKappa
        } else {
            EscapeRegime::SmallKappa
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EscapeRegime::LargeKappa => "large-kappa",
            EscapeRegime::SmallKappa => "small-kappa",
        }
    }
}

/// `C` and its closed-form upper bound, with logarithms (both may underflow).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeC<T> {
    pub c: T,
    pub ln_c: T,
    pub c_bound: T,
    pub ln_c_bound: T,
}

impl<T: Real> EscapeC<T> {
    pub fn within_bound(&self) -> bool {
        self.ln_c <= self.ln_c_bound + T::lit(1e-9)
    }
}

/// One evaluation of the escape integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactEscape<T> {
    pub ln_t_tilde: T,
    pub t_tilde: T,
    /// `ln T̃` with `C` forced to zero.
    pub ln_t_tilde_c_zero: T,
    pub ln_c: T,
    /// Final panel count per layer segment.
    pub panels_per_segment: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEscape<T> {
    pub value: T,
    pub ln_value: T,
    pub regime: EscapeRegime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeResult<T> {
    pub t_tilde_exact: T,
    pub ln_t_tilde_exact: T,
    pub t_tilde_asym: T,
    pub ln_t_tilde_asym: T,
    /// `ε T̃` with the exact `T̃`.
    pub t_unscaled: T,
    pub c: T,
    pub ln_c: T,
    pub c_bound: T,
    pub ln_c_bound: T,
    pub well: WellAnalysis<T>,
    pub regime: EscapeRegime,
}

fn canonical<T: Real>(red: &ReducedSystem<T>) -> Result<ReducedSystem<T>> {
    red.canonical_crossing()
}

/// Roots of `A` in the layer, the dominant well and the Stokes multiplier.
///
/// Crossing systems are analysed in canonical (rightward) orientation; other
/// configurations are analysed as given.
pub fn turning_points<T: Real>(red: &ReducedSystem<T>) -> Result<WellAnalysis<T>> {
    let red = canonical(red).unwrap_or_else(|_| red.clone());
    let pot = PiecewisePotential::new(&red)?;
    well_analysis(&red, &pot)
}

fn well_analysis<T: Real>(red: &ReducedSystem<T>, pot: &PiecewisePotential<T>) -> Result<WellAnalysis<T>> {
    let interior = red.interior();
    let ys = match interior {
        Interior::Polynomial(p) => p.roots_in(-T::one(), T::one()),
        Interior::Function(f) => {
            bracket_roots(|s| f(s), -T::one(), T::one(), ROOT_PANELS, bisection_tol::<T>())
        }
    };
    let roots: Vec<Root<T>> = ys.into_iter().map(|y| Root { y, slope: interior.slope(y) }).collect();

    let located = |w: &Well<T>| {
        w.y1 > -T::one() && w.y1 < w.y2 && w.y2 > T::zero() && w.y2 < T::one() && w.depth > T::zero()
    };
    let mut best: Option<(bool, Well<T>)> = None;
    for pair in roots.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if !(lo.slope < T::zero() && hi.slope > T::zero()) {
            continue;
        }
        let w = Well {
            y1: lo.y,
            y2: hi.y,
            slope1: lo.slope,
            slope2: hi.slope,
            depth: pot.eval(hi.y) - pot.eval(lo.y),
        };
        let ok = located(&w);
        let better = match &best {
            None => true,
            Some((best_ok, b)) => (ok && !best_ok) || (ok == *best_ok && w.depth > b.depth),
        };
        if better {
            best = Some((ok, w));
        }
    }
    let stokes = u8::from(best.map(|(ok, _)| ok).unwrap_or(false));
    Ok(WellAnalysis { roots, well: best.map(|(_, w)| w), stokes })
}

/// Breakpoints of the layer: `−1`, roots of `A`, `0`, `1`.
fn layer_breaks<T: Real>(well: &WellAnalysis<T>) -> Vec<T> {
    let mut b = vec![-T::one(), T::zero(), T::one()];
    b.extend(well.roots.iter().map(|r| r.y));
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.dedup_by(|x, y| (*x - *y).abs() <= T::epsilon() * T::lit(8.0));
    b
}

struct Pieces<T> {
    ln_j_minus: T,
    ln_j_plus: T,
    ln_w_minus: T,
    ln_w_plus: T,
}

/// Log-integrals of the triangle and of `e^{2V/κ̃²}`, split at `v = 0`.
fn pieces<T: Real>(pot: &PiecewisePotential<T>, breaks: &[T], per_segment: usize) -> Pieces<T> {
    let red = pot.reduced();
    let k = T::lit(2.0) / (red.kappa_tilde() * red.kappa_tilde());
    let len = red.r_tilde() - T::one();
    let c_minus = k * red.a_minus();
    let c_plus = k * red.a_plus();
    let rule = gl32();

    // v ∈ [−r̃, −1]
    let ln_i_left = -c_minus * len + ln_int_exp_linear(c_minus, len);
    let mut j_minus = vec![ln_triangle_exp_linear(c_minus, len)];
    let mut w_minus = vec![ln_int_exp_linear(c_minus, len)];
    let mut j_plus = Vec::new();
    let mut w_plus = Vec::new();

    // v ∈ [−1, 1]
    let mut ln_i = ln_i_left;
    for (p0, p1) in panels(breaks, per_segment) {
        let positive = p0 >= T::zero();
        for (v, wt) in rule.mapped(p0, p1) {
            let kv = k * pot.eval(v);
            let partial = rule.ln_integrate_exp(p0, v, |u| -k * pot.eval(u));
            let ln_iv = log_add_exp(ln_i, partial);
            let (j, w) = if positive { (&mut j_plus, &mut w_plus) } else { (&mut j_minus, &mut w_minus) };
            j.push(wt.ln() + kv + ln_iv);
            w.push(wt.ln() + kv);
        }
        ln_i = log_add_exp(ln_i, rule.ln_integrate_exp(p0, p1, |u| -k * pot.eval(u)));
    }

    // v ∈ [1, r̃]
    let kv1 = k * pot.v1();
    let decay = ln_int_exp_linear(-c_plus, len);
    j_plus.push(log_add_exp(ln_i + kv1 + decay, ln_triangle_exp_linear(c_plus, len)));
    w_plus.push(kv1 + decay);

    Pieces {
        ln_j_minus: log_sum_exp(j_minus),
        ln_j_plus: log_sum_exp(j_plus),
        ln_w_minus: log_sum_exp(w_minus),
        ln_w_plus: log_sum_exp(w_plus),
    }
}

fn assemble<T: Real>(red: &ReducedSystem<T>, p: &Pieces<T>, per_segment: usize) -> Result<ExactEscape<T>> {
    let ln_k = (T::lit(2.0) / (red.kappa_tilde() * red.kappa_tilde())).ln();
    let ln_total = log_add_exp(p.ln_w_minus, p.ln_w_plus);
    let ln_c = p.ln_w_plus - ln_total;
    let ln_one_minus_c = p.ln_w_minus - ln_total;
    let ln_t_tilde_c_zero = ln_k + p.ln_j_plus;
    let x = ln_c + p.ln_j_minus - ln_one_minus_c - p.ln_j_plus;
    if !(x < T::zero()) {
        return Err(Error::QuadratureFailure(format!(
            "escape integral lost positivity (log ratio {x:?})"
        )));
    }
    let ln_t_tilde = ln_k + ln_one_minus_c + p.ln_j_plus + ln_one_minus_exp(x);
    if !ln_t_tilde.is_finite() {
        return Err(Error::QuadratureFailure(format!("non-finite log escape time {ln_t_tilde:?}")));
    }
    Ok(ExactEscape {
        ln_t_tilde,
        t_tilde: ln_t_tilde.exp(),
        ln_t_tilde_c_zero,
        ln_c,
        panels_per_segment: per_segment,
    })
}

/// Exact escape integrals at a fixed panel count per layer segment.
pub fn escape_quadrature<T: Real>(red: &ReducedSystem<T>, per_segment: usize) -> Result<ExactEscape<T>> {
    let red = canonical(red)?;
    let pot = PiecewisePotential::new(&red)?;
    let well = well_analysis(&red, &pot)?;
    let breaks = layer_breaks(&well);
    assemble(&red, &pieces(&pot, &breaks, per_segment), per_segment)
}

fn refined<T: Real>(
    red: &ReducedSystem<T>,
    pot: &PiecewisePotential<T>,
    well: &WellAnalysis<T>,
) -> Result<ExactEscape<T>> {
    let breaks = layer_breaks(well);
    let tol = T::lit(REFINE_TOL).max(T::tol_floor() * T::lit(16.0));
    let mut n = START_PANELS;
    let mut prev = assemble(red, &pieces(pot, &breaks, n), n)?;
    while n < MAX_PANELS {
        n *= 2;
        let next = assemble(red, &pieces(pot, &breaks, n), n)?;
        let scale = T::one().max(next.ln_t_tilde.abs());
        let c_settled = next.ln_c < T::lit(-27.6) || (next.ln_c - prev.ln_c).abs() <= tol * T::lit(100.0);
        if (next.ln_t_tilde - prev.ln_t_tilde).abs() <= tol * scale && c_settled {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureFailure(format!(
        "escape integral not converged with {MAX_PANELS} panels per segment"
    )))
}

/// Exact mean escape time, with the refinement record.
pub fn escape_exact<T: Real>(red: &ReducedSystem<T>) -> Result<ExactEscape<T>> {
    let red = canonical(red)?;
    let pot = PiecewisePotential::new(&red)?;
    let well = well_analysis(&red, &pot)?;
    refined(&red, &pot, &well)
}

/// Exact scaled mean escape time `T̃`.
pub fn escape_time_exact<T: Real>(red: &ReducedSystem<T>) -> Result<T> {
    escape_exact(red).map(|e| e.t_tilde)
}

/// `C` by quadrature, and the closed-form bound
/// `2a⁻(1/a⁺ + 2/κ̃²) exp(−r̃a⁻/κ̃²)`.
pub fn escape_c<T: Real>(red: &ReducedSystem<T>) -> Result<EscapeC<T>> {
    let red = canonical(red)?;
    let exact = escape_exact(&red)?;
    Ok(c_and_bound(&red, exact.ln_c))
}

fn c_and_bound<T: Real>(red: &ReducedSystem<T>, ln_c: T) -> EscapeC<T> {
    let k2 = red.kappa_tilde() * red.kappa_tilde();
    let am = red.a_minus();
    let ln_c_bound = (T::lit(2.0) * am).ln() + (T::one() / red.a_plus() + T::lit(2.0) / k2).ln()
        - red.r_tilde() * am / k2;
    EscapeC { c: ln_c.exp(), ln_c, c_bound: ln_c_bound.exp(), ln_c_bound }
}

/// Leading-order escape time for the noise regime of `red`.
pub fn escape_time_asymptotic<T: Real>(
    red: &ReducedSystem<T>,
    well: &WellAnalysis<T>,
) -> Result<AsymptoticEscape<T>> {
    let red = canonical(red)?;
    let regime = EscapeRegime::of(red.kappa_tilde());
    let drift = red.r_tilde() / red.a_plus();
    let ln_drift = drift.ln();
    let plain = AsymptoticEscape { value: drift, ln_value: ln_drift, regime };
    if regime == EscapeRegime::LargeKappa || well.stokes == 0 {
        return Ok(plain);
    }
    let w = well.well.expect("stokes multiplier set without a well");
    let guard = T::lit(SLOPE_GUARD);
    for s in [w.slope1, w.slope2] {
        if s.abs() < guard {
            return Err(Error::DegenerateWell { slope: s.to_f64().unwrap_or(f64::NAN) });
        }
    }
    let k = T::lit(2.0) / (red.kappa_tilde() * red.kappa_tilde());
    let ln_well = T::TAU().ln() - T::lit(0.5) * (-w.slope1 * w.slope2).ln() + k * w.depth;
    let ln_value = log_add_exp(ln_well, ln_drift);
    Ok(AsymptoticEscape { value: ln_value.exp(), ln_value, regime })
}

/// Well analysis, `C`, exact and asymptotic `T̃`, and `T = εT̃`.
pub fn escape_pipeline<T: Real>(red: &ReducedSystem<T>) -> Result<EscapeResult<T>> {
    let red = canonical(red)?;
    let pot = PiecewisePotential::new(&red)?;
    let well = well_analysis(&red, &pot)?;
    let exact = refined(&red, &pot, &well)?;
    let asym = escape_time_asymptotic(&red, &well)?;
    let cb = c_and_bound(&red, exact.ln_c);
    Ok(EscapeResult {
        t_tilde_exact: exact.t_tilde,
        ln_t_tilde_exact: exact.ln_t_tilde,
        t_tilde_asym: asym.value,
        ln_t_tilde_asym: asym.ln_value,
        t_unscaled: red.eps() * exact.t_tilde,
        c: cb.c,
        ln_c: cb.ln_c,
        c_bound: cb.c_bound,
        ln_c_bound: cb.ln_c_bound,
        well,
        regime: asym.regime,
    })
}
