//! Dense univariate polynomials and real root finding.

use crate::scalar::Real;

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&T::zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(T::zero());
        }
        let d = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * T::from_usize(i).unwrap())
            .collect();
        Self::new(d)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(T::zero());
        for (i, &c) in self.coeffs.iter().enumerate() {
            out.push(c / T::from_usize(i + 1).unwrap());
        }
        Self::new(out)
    }

    /// `x ↦ p(−x)`.
    pub fn reflected(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
            .collect();
        Self::new(c)
    }

    pub fn scaled(&self, k: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn add_constant(&self, k: T) -> Self {
        let mut c = self.coeffs.clone();
        c[0] = c[0] + k;
        Self::new(c)
    }

    /// Real roots strictly inside `(lo, hi)`, ascending.
    ///
    /// Degrees up to three are solved in closed form and polished by Newton;
    /// higher degrees fall back to [`bracket_roots`].
    pub fn roots_in(&self, lo: T, hi: T) -> Vec<T> {
        let scale = self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()));
        if scale == T::zero() {
            return Vec::new();
        }
        let tiny = T::epsilon() * T::lit(16.0) * scale;
        let mut deg = self.degree();
        while deg > 0 && self.coeffs[deg].abs() <= tiny {
            deg -= 1;
        }
        let c = &self.coeffs;
        let raw: Vec<T> = match deg {
            0 => Vec::new(),
            1 => vec![-c[0] / c[1]],
            2 => quadratic_roots(c[2], c[1], c[0]),
            3 => cubic_roots(c[3], c[2], c[1], c[0]),
            _ => return bracket_roots(|x| self.eval(x), lo, hi, 512, bisection_tol::<T>()),
        };
        let d = self.derivative();
        let mut out: Vec<T> = raw
            .into_iter()
            .map(|r| self.polish(&d, r))
            .filter(|&r| r > lo && r < hi)
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * T::lit(4.0));
        out
    }

    fn polish(&self, d: &Self, mut x: T) -> T {
        for _ in 0..4 {
            let dv = d.eval(x);
            if dv == T::zero() {
                break;
            }
            let step = self.eval(x) / dv;
            if !step.is_finite() {
                break;
            }
            x = x - step;
        }
        x
    }
}

pub(crate) fn bisection_tol<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(4.0))
}

fn quadratic_roots<T: Real>(a: T, b: T, c: T) -> Vec<T> {
    let disc = b * b - T::lit(4.0) * a * c;
    if disc < T::zero() {
        return Vec::new();
    }
    if disc == T::zero() {
        return vec![-b / (T::lit(2.0) * a)];
    }
    let sq = disc.sqrt();
    let q = -(b + b.signum() * sq) / T::lit(2.0);
    if q == T::zero() {
        return vec![T::zero(), T::zero()];
    }
    vec![q / a, c / q]
}

/// Real roots of `a x³ + b x² + c x + d` via the depressed cubic.
pub fn cubic_roots<T: Real>(a: T, b: T, c: T, d: T) -> Vec<T> {
    let three = T::lit(3.0);
    let shift = b / (three * a);
    let p = (three * a * c - b * b) / (three * a * a);
    let q = (T::lit(2.0) * b * b * b - T::lit(9.0) * a * b * c + T::lit(27.0) * a * a * d)
        / (T::lit(27.0) * a * a * a);
    let disc = T::lit(4.0) * p * p * p + T::lit(27.0) * q * q;
    let ts: Vec<T> = if p == T::zero() && q == T::zero() {
        vec![T::zero()]
    } else if disc < T::zero() {
        let m = T::lit(2.0) * (-p / three).sqrt();
        let arg = (three * q / (T::lit(2.0) * p) * (-three / p).sqrt())
            .max(-T::one())
            .min(T::one());
        let theta = arg.acos() / three;
        let tau = T::TAU() / three;
        (0..3)
            .map(|k| m * (theta - tau * T::from_i32(k).unwrap()).cos())
            .collect()
    } else {
        let half_q = q / T::lit(2.0);
        let root = (half_q * half_q + p * p * p / T::lit(27.0)).max(T::zero()).sqrt();
        let t = (-half_q + root).cbrt() + (-half_q - root).cbrt();
        if disc == T::zero() {
            // double root at -t/2
            vec![t, -t / T::lit(2.0)]
        } else {
            vec![t]
        }
    };
    ts.into_iter().map(|t| t - shift).collect()
}

/// Sign-change bracketing on `n_panels` equal panels of `(lo, hi)` followed by
/// bisection to absolute width `tol`. Roots of even multiplicity are missed.
pub fn bracket_roots<T: Real>(
    f: impl Fn(T) -> T,
    lo: T,
    hi: T,
    n_panels: usize,
    tol: T,
) -> Vec<T> {
    let n = T::from_usize(n_panels).unwrap();
    let h = (hi - lo) / n;
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    for k in 1..=n_panels {
        let x1 = if k == n_panels { hi } else { lo + h * T::from_usize(k).unwrap() };
        let f1 = f(x1);
        if f1 == T::zero() && k < n_panels {
            roots.push(x1);
        } else if f0 != T::zero() && f0.signum() != f1.signum() && f1 != T::zero() {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            while b - a > tol {
                let m = (a + b) / T::lit(2.0);
                let fm = f(m);
                if fm == T::zero() {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push((a + b) / T::lit(2.0));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn calculus_and_reflection() {
        let p = Polynomial::new(vec![1.0f64, -4.0, 0.0, 3.0]);
        assert_eq!(p.derivative().coeffs(), &[-4.0, 0.0, 9.0]);
        let ip = p.antiderivative();
        assert_relative_eq!(ip.eval(1.0) - ip.eval(-1.0), 2.0, epsilon = 1e-15);
        assert_eq!(p.reflected().eval(0.3), p.eval(-0.3));
    }

    #[test]
    fn cubic_three_real_roots() {
        // 3u³ − 4u = 0: roots 0, ±2/√3
        let p = Polynomial::new(vec![0.0f64, -4.0, 0.0, 3.0]);
        let r = p.roots_in(-2.0, 2.0);
        assert_eq!(r.len(), 3);
        let s = (4.0f64 / 3.0).sqrt();
        assert_relative_eq!(r[0], -s, epsilon = 1e-14);
        assert!(r[1].abs() < 1e-15);
        assert_relative_eq!(r[2], s, epsilon = 1e-14);
        assert_eq!(p.roots_in(-1.0, 1.0).len(), 1);
    }

    #[test]
    fn cubic_single_real_root_and_quadratics() {
        let p = Polynomial::new(vec![-2.0f64, 0.0, 0.0, 1.0]);
        let r = p.roots_in(-5.0, 5.0);
        assert_eq!(r.len(), 1);
        assert_relative_eq!(r[0], 2f64.cbrt(), epsilon = 1e-14);
        let q = Polynomial::new(vec![2.0f64, -3.0, 1.0]);
        assert_eq!(q.roots_in(0.0, 3.0), vec![1.0, 2.0]);
        assert!(Polynomial::new(vec![1.0f64, 0.0, 1.0]).roots_in(-3.0, 3.0).is_empty());
    }

    #[test]
    fn bracketing_agrees_with_closed_form() {
        let p = Polynomial::new(vec![1.5f64, -4.0, 0.0, 3.0]);
        let closed = p.roots_in(-1.0, 1.0);
        let brack = bracket_roots(|x| p.eval(x), -1.0, 1.0, 512, 1e-13);
        assert_eq!(closed.len(), 2);
        assert_eq!(brack.len(), 2);
        for (a, b) in closed.iter().zip(&brack) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn quartic_uses_bracketing() {
        // (x² − 0.25)(x² − 0.81)
        let p = Polynomial::new(vec![0.2025f64, 0.0, -1.06, 0.0, 1.0]);
        let r = p.roots_in(-1.0, 1.0);
        assert_eq!(r.len(), 4);
        assert!((r[0] + 0.9).abs() < 1e-11 && (r[3] - 0.9).abs() < 1e-11);
    }
}
