//! Composite Gauss–Legendre and adaptive Gauss–Kronrod quadrature.
//!
//! Rules are tabulated once in `f64` and converted to the working scalar on
//! use. The log-space variants integrate `exp(g(x))` and return `ln ∫`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::{log_sum_exp, Real};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes an `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped<T: Real>(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * T::lit(x), half * T::lit(w)))
    }

    pub fn integrate<T: Real>(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        self.mapped(a, b).fold(T::zero(), |acc, (x, w)| acc + w * f(x))
    }

    /// `ln ∫ₐᵇ exp(g)`; requires `b > a`.
    pub fn ln_integrate_exp<T: Real>(&self, a: T, b: T, mut g: impl FnMut(T) -> T) -> T {
        log_sum_exp(self.mapped(a, b).map(|(x, w)| w.ln() + g(x)))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The 32-point rule used by the escape-time quadrature.
pub fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

/// Splits each `[breaks[i], breaks[i+1]]` into `per_segment` equal panels.
pub fn panels<T: Real>(breaks: &[T], per_segment: usize) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(breaks.len().saturating_sub(1) * per_segment);
    let n = T::from_usize(per_segment).unwrap();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let h = (b - a) / n;
        for k in 0..per_segment {
            let lo = a + h * T::from_usize(k).unwrap();
            let hi = if k + 1 == per_segment { b } else { lo + h };
            out.push((lo, hi));
        }
    }
    out
}

/// `ln ∫ exp(g)` over `[breaks[0], breaks.last()]` with 32-point panels,
/// doubling the panel count per segment until successive values differ by
/// less than `tol` (absolute in the log, i.e. relative in the integral).
pub fn ln_integrate_exp_refined<T: Real>(
    breaks: &[T],
    g: impl Fn(T) -> T,
    tol: T,
) -> Result<T> {
    const START: usize = 4;
    const MAX_LEVEL: usize = 12;
    let rule = gl32();
    let eval = |n: usize| {
        log_sum_exp(panels(breaks, n).into_iter().map(|(a, b)| rule.ln_integrate_exp(a, b, &g)))
    };
    let mut prev = eval(START);
    for level in 1..=MAX_LEVEL {
        let next = eval(START << level);
        if !next.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite log-integral {next:?}")));
        }
        if (next - prev).abs() <= tol.max(T::tol_floor()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureFailure(format!(
        "log-integral not converged after {MAX_LEVEL} refinements"
    )))
}

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

fn qk15<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let fc = f(mid);
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        kron = kron + T::lit(WGK[j]) * s;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * s;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod 7/15 on `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the total
/// estimate falls below `max(abs_tol, rel_tol·|I|)`.
pub fn gauss_kronrod<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
) -> Result<T> {
    const MAX_INTERVALS: usize = 2000;
    if a == b {
        return Ok(T::zero());
    }
    let (v, e) = qk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total = parts.iter().fold(T::zero(), |s, p| s + p.2);
        let err = parts.iter().fold(T::zero(), |s, p| s + p.3);
        if !total.is_finite() {
            return Err(Error::QuadratureFailure("non-finite integrand".into()));
        }
        let floor = T::tol_floor() * total.abs();
        if err <= abs_tol.max(rel_tol * total.abs()).max(floor) {
            return Ok(total);
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure(format!(
                "Gauss-Kronrod error estimate {err:?} after {MAX_INTERVALS} subintervals"
            )));
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, _) = parts.swap_remove(i);
        let m = (lo + hi) / T::lit(2.0);
        let (v1, e1) = qk15(&mut f, lo, m);
        let (v2, e2) = qk15(&mut f, m, hi);
        parts.push((lo, m, v1, e1));
        parts.push((m, hi, v2, e2));
    }
}
