//! The potential `V(ỹ) = −∫₋₁^ỹ φ(v) dv` with linear outer branches.

use std::sync::Arc;

use crate::error::Result;
use crate::poly::Polynomial;
use crate::quadrature::gauss_kronrod;
use crate::reduced::{Interior, ReducedSystem};
use crate::scalar::Real;

/// Absolute tolerance of the interior antiderivative when `A` has no closed form.
pub const TOL_QUAD: f64 = 1e-12;

const TABLE_PANELS: usize = 64;

#[derive(Clone)]
enum Antiderivative<T> {
    /// `W(s) = −(P(s) − P(−1))`, `P' = A`.
    Closed(Polynomial<T>),
    /// `W` at equally spaced knots on `[−1, 1]`; evaluated by adding one
    /// adaptive Gauss–Kronrod leg from the nearest knot below.
    Tabulated {
        f: Arc<dyn Fn(T) -> T + Send + Sync>,
        cumulative: Vec<T>,
    },
}

/// `V` for a given reduced system. Immutable.
#[derive(Clone)]
pub struct PiecewisePotential<T> {
    reduced: ReducedSystem<T>,
    anti: Antiderivative<T>,
    v1: T,
}

impl<T: std::fmt::Debug> std::fmt::Debug for PiecewisePotential<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PiecewisePotential")
            .field("reduced", &self.reduced)
            .field("v1", &self.v1)
            .finish_non_exhaustive()
    }
}

fn knot<T: Real>(k: usize) -> T {
    -T::one() + T::lit(2.0) * T::from_usize(k).unwrap() / T::from_usize(TABLE_PANELS).unwrap()
}

impl<T: Real> PiecewisePotential<T> {
    pub fn new(reduced: &ReducedSystem<T>) -> Result<Self> {
        let anti = match reduced.interior() {
            Interior::Polynomial(p) => {
                let prim = p.antiderivative();
                let at_lower = prim.eval(-T::one());
                Antiderivative::Closed(prim.add_constant(-at_lower).scaled(-T::one()))
            }
            Interior::Function(f) => {
                let mut cumulative = Vec::with_capacity(TABLE_PANELS + 1);
                cumulative.push(T::zero());
                let mut acc = T::zero();
                for k in 0..TABLE_PANELS {
                    let leg = gauss_kronrod(|s| f(s), knot(k), knot(k + 1), T::lit(TOL_QUAD) / T::lit(64.0), T::zero())?;
                    acc = acc - leg;
                    cumulative.push(acc);
                }
                Antiderivative::Tabulated { f: Arc::clone(f), cumulative }
            }
        };
        let mut pot = Self { reduced: reduced.clone(), anti, v1: T::zero() };
        pot.v1 = pot.interior(T::one());
        Ok(pot)
    }

    pub fn reduced(&self) -> &ReducedSystem<T> {
        &self.reduced
    }

    /// Cached `V(1)`.
    pub fn v1(&self) -> T {
        self.v1
    }

    fn interior(&self, s: T) -> T {
        match &self.anti {
            Antiderivative::Closed(w) => w.eval(s),
            Antiderivative::Tabulated { f, cumulative } => {
                let pos = (s + T::one()) * T::from_usize(TABLE_PANELS).unwrap() / T::lit(2.0);
                let k = pos.floor().to_usize().unwrap_or(0).min(TABLE_PANELS - 1);
                let lo = knot::<T>(k);
                if s == lo {
                    return cumulative[k];
                }
                // a smooth A on a 1/32-wide leg converges on the first 15-point pass
                let leg = gauss_kronrod(|v| f(v), lo, s, T::lit(TOL_QUAD) / T::lit(64.0), T::zero())
                    .unwrap_or_else(|_| crate::quadrature::gl32().integrate(lo, s, |v| f(v)));
                cumulative[k] - leg
            }
        }
    }

    /// `V(ỹ)`.
    pub fn eval(&self, y: T) -> T {
        if y <= -T::one() {
            -self.reduced.a_minus() * (y + T::one())
        } else if y >= T::one() {
            self.v1 - self.reduced.a_plus() * (y - T::one())
        } else {
            self.interior(y)
        }
    }
}
