//! The scaled one-dimensional problem `dỹ = φ(ỹ) dt̃ + κ̃ dW`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Real;
use crate::system::{classify, RegionKind};

/// Drift inside the smoothing layer, `A(s)` for `s ∈ [−1, 1]`.
#[derive(Clone)]
pub enum Interior<T> {
    Polynomial(Polynomial<T>),
    Function(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Real> Interior<T> {
    pub fn function(f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Interior::Function(Arc::new(f))
    }

    /// Straight line from `a_minus` at `s = −1` to `a_plus` at `s = 1`.
    pub fn linear(a_minus: T, a_plus: T) -> Self {
        let half = T::lit(0.5);
        Interior::Polynomial(Polynomial::new(vec![
            half * (a_plus + a_minus),
            half * (a_plus - a_minus),
        ]))
    }

    #[inline]
    pub fn eval(&self, s: T) -> T {
        match self {
            Interior::Polynomial(p) => p.eval(s),
            Interior::Function(f) => f(s),
        }
    }

    /// `A'(s)`; central differences when `A` is an opaque function.
    pub fn slope(&self, s: T) -> T {
        match self {
            Interior::Polynomial(p) => p.derivative().eval(s),
            Interior::Function(f) => {
                let h = T::epsilon().cbrt() * (T::one() + s.abs());
                (f(s + h) - f(s - h)) / (h + h)
            }
        }
    }

    /// `s ↦ −A(−s)`.
    pub fn reflected(&self) -> Self {
        match self {
            Interior::Polynomial(p) => Interior::Polynomial(p.reflected().scaled(-T::one())),
            Interior::Function(f) => {
                let f = Arc::clone(f);
                Interior::Function(Arc::new(move |s| -f(-s)))
            }
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial<T>> {
        match self {
            Interior::Polynomial(p) => Some(p),
            Interior::Function(_) => None,
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Interior<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interior::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            Interior::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// Reduced scalar system near the switching surface, in scaled variables
/// `ỹ = y/ε`, `t̃ = t/ε`, `κ̃ = κ/√ε`, `r̃ = r/ε`.
///
/// Immutable once built; clones share the interior drift.
#[derive(Debug, Clone)]
pub struct ReducedSystem<T> {
    a_minus: T,
    a_plus: T,
    interior: Interior<T>,
    kappa_tilde: T,
    r_tilde: T,
    eps: T,
    kappa_eff: T,
    r: T,
}

/// Relative mismatch allowed between `A(±1)` and `a±`.
pub const TOL_CONT: f64 = 1e-9;

impl<T: Real> ReducedSystem<T> {
    /// Builds from unscaled smoothing width, effective noise amplitude and
    /// escape radius.
    pub fn from_unscaled(
        a_minus: T,
        a_plus: T,
        interior: Interior<T>,
        eps: T,
        kappa_eff: T,
        r: T,
    ) -> Result<Self> {
        if !(eps > T::zero()) || !eps.is_finite() {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        if !(kappa_eff > T::zero()) || !kappa_eff.is_finite() {
            return Err(Error::NonPositiveNoise(kappa_eff.to_f64().unwrap_or(f64::NAN)));
        }
        if eps >= r {
            return Err(Error::BadScales {
                eps: eps.to_f64().unwrap(),
                r: r.to_f64().unwrap(),
            });
        }
        let sys = Self {
            a_minus,
            a_plus,
            interior,
            kappa_tilde: kappa_eff / eps.sqrt(),
            r_tilde: r / eps,
            eps,
            kappa_eff,
            r,
        };
        sys.check_continuity()?;
        Ok(sys)
    }

    /// Builds directly in scaled variables; the unscaled view is taken with `ε = 1`.
    pub fn scaled(
        a_minus: T,
        a_plus: T,
        interior: Interior<T>,
        kappa_tilde: T,
        r_tilde: T,
    ) -> Result<Self> {
        if !(kappa_tilde > T::zero()) || !kappa_tilde.is_finite() {
            return Err(Error::NonPositiveNoise(kappa_tilde.to_f64().unwrap_or(f64::NAN)));
        }
        if !(r_tilde > T::one()) {
            return Err(Error::RadiusTooSmall(r_tilde.to_f64().unwrap_or(f64::NAN)));
        }
        let sys = Self {
            a_minus,
            a_plus,
            interior,
            kappa_tilde,
            r_tilde,
            eps: T::one(),
            kappa_eff: kappa_tilde,
            r: r_tilde,
        };
        sys.check_continuity()?;
        Ok(sys)
    }

    fn check_continuity(&self) -> Result<()> {
        for (s, expected) in [(-T::one(), self.a_minus), (T::one(), self.a_plus)] {
            let v = self.interior.eval(s);
            let tol = T::lit(TOL_CONT) * (T::one() + expected.abs());
            if !((v - expected).abs() <= tol) {
                return Err(Error::Discontinuous {
                    at: s.to_f64().unwrap(),
                    value: v.to_f64().unwrap_or(f64::NAN),
                    expected: expected.to_f64().unwrap(),
                });
            }
        }
        Ok(())
    }

    /// Same system with a different scaled noise amplitude.
    pub fn with_kappa_tilde(&self, kappa_tilde: T) -> Result<Self> {
        if !(kappa_tilde > T::zero()) || !kappa_tilde.is_finite() {
            return Err(Error::NonPositiveNoise(kappa_tilde.to_f64().unwrap_or(f64::NAN)));
        }
        let mut out = self.clone();
        out.kappa_tilde = kappa_tilde;
        out.kappa_eff = kappa_tilde * self.eps.sqrt();
        Ok(out)
    }

    /// Same system under `ỹ ↦ −ỹ`: `a∓ ↦ −a±`, `A(s) ↦ −A(−s)`.
    pub fn reflected(&self) -> Self {
        Self {
            a_minus: -self.a_plus,
            a_plus: -self.a_minus,
            interior: self.interior.reflected(),
            ..self.clone()
        }
    }

    pub fn a_minus(&self) -> T {
        self.a_minus
    }
    pub fn a_plus(&self) -> T {
        self.a_plus
    }
    pub fn interior(&self) -> &Interior<T> {
        &self.interior
    }
    pub fn kappa_tilde(&self) -> T {
        self.kappa_tilde
    }
    pub fn r_tilde(&self) -> T {
        self.r_tilde
    }
    pub fn eps(&self) -> T {
        self.eps
    }
    pub fn kappa_eff(&self) -> T {
        self.kappa_eff
    }
    pub fn r(&self) -> T {
        self.r
    }

    pub fn region(&self) -> RegionKind {
        classify(self.a_minus, self.a_plus)
    }

    /// Piecewise drift `φ(ỹ)`.
    #[inline]
    pub fn phi(&self, y: T) -> T {
        if y <= -T::one() {
            self.a_minus
        } else if y >= T::one() {
            self.a_plus
        } else {
            self.interior.eval(y)
        }
    }

    /// Canonical rightward-crossing form: reflects a leftward crossing, errors
    /// for anything that is not crossing.
    pub fn canonical_crossing(&self) -> Result<Self> {
        match self.region() {
            RegionKind::Crossing if self.a_plus > T::zero() => Ok(self.clone()),
            RegionKind::Crossing => Ok(self.reflected()),
            other => Err(Error::NotCrossing(other)),
        }
    }
}
