//! Scalar abstraction and log-space helpers.
//!
//! Every numerical routine in the crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. Exponents of the form `2V/κ̃²` easily reach
//! `10⁴`, so integrals of `exp(..)` are always carried as logarithms.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumCast};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot hold it.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    /// Machine epsilon scaled to a usable tolerance floor for this type.
    fn tol_floor() -> Self {
        Self::epsilon() * Self::lit(64.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(eˣ + eʸ)` without overflow.
#[inline]
pub fn log_add_exp<T: Real>(x: T, y: T) -> T {
    if x == T::neg_infinity() {
        return y;
    }
    if y == T::neg_infinity() {
        return x;
    }
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(eˣ − eʸ)` for `x ≥ y`. Returns `-inf` when the two are equal.
#[inline]
pub fn log_sub_exp<T: Real>(x: T, y: T) -> T {
    if y == T::neg_infinity() {
        return x;
    }
    if y >= x {
        return T::neg_infinity();
    }
    x + ln_one_minus_exp(y - x)
}

/// `ln(1 − eᵗ)` for `t < 0`, accurate for `t` near zero and for very negative `t`.
#[inline]
pub fn ln_one_minus_exp<T: Real>(t: T) -> T {
    if t > -T::LN_2() {
        (-t.exp_m1()).ln()
    } else {
        (-t.exp()).ln_1p()
    }
}

/// `ln Σ eˣⁱ`, shifting by the maximum before exponentiating.
pub fn log_sum_exp<T: Real, I: IntoIterator<Item = T>>(terms: I) -> T {
    let terms: Vec<T> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() || !max.is_finite() {
        return max;
    }
    let sum = terms.iter().fold(T::zero(), |acc, &t| acc + (t - max).exp());
    max + sum.ln()
}

/// `ln ∫₀ᴸ e^{c·s} ds` for any sign of `c` and `L > 0`.
pub fn ln_int_exp_linear<T: Real>(c: T, len: T) -> T {
    let x = c * len;
    if x.abs() < T::lit(1e-8) {
        // ∫ ≈ L (1 + x/2)
        return len.ln() + (x / T::lit(2.0)).ln_1p();
    }
    if c > T::zero() {
        x + ln_one_minus_exp(-x) - c.ln()
    } else {
        ln_one_minus_exp(x) - (-c).ln()
    }
}

/// `ln ∫₀ᴸ (L − s) e^{−c·s} ds` for `c ≥ 0`: the closed form of a triangle of
/// linear exponents, `(cL − 1 + e^{−cL}) / c²`.
pub fn ln_triangle_exp_linear<T: Real>(c: T, len: T) -> T {
    let x = c * len;
    if x < T::lit(1e-2) {
        // L²(1/2 − x/6 + x²/24 − x³/120 + x⁴/720)
        let series = T::lit(0.5) - x / T::lit(6.0) + x * x / T::lit(24.0)
            - x * x * x / T::lit(120.0)
            + x * x * x * x / T::lit(720.0);
        return T::lit(2.0) * len.ln() + series.ln();
    }
    let num = x - (-(-x).exp_m1());
    num.ln() - T::lit(2.0) * c.ln()
}

/// Pairwise (cascade) summation; the result depends only on the order of `xs`.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().fold(T::zero(), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
