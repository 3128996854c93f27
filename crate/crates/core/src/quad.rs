//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    err: T,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let center = T::half() * (a + b);
    let half = T::half() * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::c(WGK[7]);
    let mut gauss = fc * T::c(WG[3]);
    for j in 0..7 {
        let dx = half * T::c(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        kronrod += T::c(WGK[j]) * s;
        if j % 2 == 1 {
            gauss += T::c(WG[j / 2]) * s;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

/// Integrates `f` over a finite interval `[a, b]`.
///
/// Returns the estimate and the accumulated error estimate. Fails when the
/// subdivision budget is exhausted or the integrand produces non-finite
/// values.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, opts: QuadOptions) -> Result<(T, T)> {
    if a == b {
        return Ok((T::zero(), T::zero()));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate requires finite bounds; use integrate_semi_infinite"));
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut segs = vec![Segment { a, b, value: v, err: e }];
    let abs_tol = T::c(opts.abs_tol);
    let rel_tol = T::c(opts.rel_tol);
    loop {
        let total: T = segs.iter().fold(T::zero(), |s, g| s + g.value);
        let err: T = segs.iter().fold(T::zero(), |s, g| s + g.err);
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Numeric("non-finite integrand value".into()));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) || err <= T::epsilon() * T::c(50.0) * total.abs() {
            return Ok((total, err));
        }
        if segs.len() >= opts.max_intervals {
            return Err(Error::Convergence(format!(
                "quadrature budget exhausted ({} intervals, error {:?})",
                segs.len(),
                err
            )));
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, g)| if g.err > be { (i, g.err) } else { (bi, be) });
        let worst = segs.swap_remove(idx);
        let mid = T::half() * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval cannot be split further in this precision
            return Ok((total, err));
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        segs.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        segs.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
    }
}

/// Integrates `f` over `[a, ∞)` through the map `x = a + t/(1-t)`.
pub fn integrate_semi_infinite<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, opts: QuadOptions) -> Result<(T, T)> {
    let g = |t: T| {
        let one_minus = T::one() - t;
        if one_minus <= T::zero() {
            return T::zero();
        }
        let x = a + t / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    integrate(g, T::zero(), T::one(), opts)
}

/// Integrates `f` over the whole real line, split at `center`.
pub fn integrate_real_line<T: Real, F: FnMut(T) -> T>(mut f: F, center: T, opts: QuadOptions) -> Result<(T, T)> {
    let (right, e1) = integrate_semi_infinite(&mut f, center, opts)?;
    let (left, e2) = integrate_semi_infinite(|x: T| f(center + center - x), center, opts)?;
    Ok((left + right, e1 + e2))
}
