//! Derivative-free adaptive rejection sampling for log-concave densities.
//!
//! The envelope is built from secants through neighbouring abscissae, which
//! bound a concave log-density from above outside their chord.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_REFINEMENTS: usize = 50;
const MAX_EXPANSIONS: usize = 200;

#[derive(Clone, Copy)]
struct Line<T> {
    x: T,
    h: T,
    slope: T,
}

impl<T: Real> Line<T> {
    fn at(&self, x: T) -> T {
        self.h + self.slope * (x - self.x)
    }
}

#[derive(Clone, Copy)]
struct Piece<T> {
    lo: T,
    hi: T,
    line: Line<T>,
    log_mass: T,
}

/// `log ∫_lo^hi exp(line(x)) dx`; the bounds may be infinite when the slope
/// decays towards them.
fn log_mass<T: Real>(lo: T, hi: T, line: &Line<T>) -> T {
    let b = line.slope;
    if lo.is_infinite() {
        return line.at(hi) - b.ln();
    }
    if hi.is_infinite() {
        return line.at(lo) - (-b).ln();
    }
    let w = hi - lo;
    let bw = b * w;
    if bw.abs() < T::c(1e-12) {
        return line.at(lo) + w.ln();
    }
    if b > T::zero() {
        line.at(hi) + (-(-bw).exp_m1()).ln() - b.ln()
    } else {
        line.at(lo) + (-bw.exp_m1()).ln() - (-b).ln()
    }
}

fn sample_piece<T: Real, R: Rng + ?Sized>(p: &Piece<T>, rng: &mut R) -> T {
    let u = T::one() - T::unit(rng); // (0, 1]
    let b = p.line.slope;
    if p.lo.is_infinite() {
        return p.hi + u.ln() / b;
    }
    if p.hi.is_infinite() {
        return p.lo + u.ln() / b;
    }
    let w = p.hi - p.lo;
    let bw = b * w;
    if bw.abs() < T::c(1e-12) {
        return p.lo + (T::one() - u) * w;
    }
    let x = if b > T::zero() {
        p.hi + (u + (T::one() - u) * (-bw).exp()).ln() / b
    } else {
        p.lo + (u * bw.exp_m1()).ln_1p() / b
    };
    x.max(p.lo).min(p.hi)
}

fn secant<T: Real>(a: (T, T), b: (T, T)) -> Line<T> {
    Line {
        x: a.0,
        h: a.1,
        slope: (b.1 - a.1) / (b.0 - a.0),
    }
}

fn envelope<T: Real>(pts: &[(T, T)]) -> Vec<Piece<T>> {
    let n = pts.len();
    let sec: Vec<Line<T>> = pts.windows(2).map(|w| secant(w[0], w[1])).collect();
    let mut pieces = Vec::with_capacity(2 * n + 2);
    let mut push = |lo: T, hi: T, line: Line<T>| {
        if hi > lo {
            pieces.push(Piece {
                lo,
                hi,
                line,
                log_mass: log_mass(lo, hi, &line),
            });
        }
    };
    push(T::neg_infinity(), pts[0].0, sec[0]);
    for i in 0..n - 1 {
        let (lo, hi) = (pts[i].0, pts[i + 1].0);
        let left = if i >= 1 { Some(sec[i - 1]) } else { None };
        let right = sec.get(i + 1).copied();
        match (left, right) {
            (Some(l), Some(r)) if l.slope > r.slope => {
                let xc = (r.h - l.h + l.slope * l.x - r.slope * r.x) / (l.slope - r.slope);
                let xc = xc.max(lo).min(hi);
                push(lo, xc, l);
                push(xc, hi, r);
            }
            (Some(l), _) => push(lo, hi, l),
            (None, Some(r)) => push(lo, hi, r),
            (None, None) => unreachable!("envelope needs at least three abscissae"),
        }
    }
    push(pts[n - 1].0, T::infinity(), sec[n - 2]);
    pieces
}

fn squeeze<T: Real>(pts: &[(T, T)], x: T) -> T {
    if x < pts[0].0 || x > pts[pts.len() - 1].0 {
        return T::neg_infinity();
    }
    let i = pts.partition_point(|p| p.0 <= x).clamp(1, pts.len() - 1);
    secant(pts[i - 1], pts[i]).at(x)
}

fn eval<T: Real, F: FnMut(T) -> T>(f: &mut F, x: T) -> Result<T> {
    let h = -f(x);
    if h.is_nan() || h == T::infinity() {
        return Err(Error::domain(format!("log-density is not finite at {x:?}")));
    }
    Ok(h)
}

/// Exact draw from the density `∝ exp(−f(x))` for convex `f`.
///
/// Initial abscissae sit at `mode_hint − 1, mode_hint, mode_hint + 1`.
pub fn sample_log_concave_1d<T: Real, F: FnMut(T) -> T, R: Rng + ?Sized>(
    neg_log_density: F,
    mode_hint: T,
    rng: &mut R,
) -> Result<T> {
    sample_log_concave_1d_scaled(neg_log_density, mode_hint, T::one(), rng)
}

/// As [`sample_log_concave_1d`] with initial abscissae `mode_hint ± spacing`.
pub fn sample_log_concave_1d_scaled<T: Real, F: FnMut(T) -> T, R: Rng + ?Sized>(
    mut neg_log_density: F,
    mode_hint: T,
    spacing: T,
    rng: &mut R,
) -> Result<T> {
    if !mode_hint.is_finite() || !(spacing > T::zero()) {
        return Err(Error::domain("mode hint must be finite and spacing positive"));
    }
    let f = &mut neg_log_density;
    let mut pts = vec![
        (mode_hint - spacing, eval(f, mode_hint - spacing)?),
        (mode_hint, eval(f, mode_hint)?),
        (mode_hint + spacing, eval(f, mode_hint + spacing)?),
    ];
    if pts[1].1 == T::neg_infinity() {
        return Err(Error::domain("log-density is -inf at the mode hint"));
    }
    let mut step = spacing;
    let mut expansions = 0;
    while !(secant(pts[0], pts[1]).slope > T::zero()) {
        step *= T::two();
        let x = pts[0].0 - step;
        pts.insert(0, (x, eval(f, x)?));
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::Convergence("could not bracket the mode from the left".into()));
        }
    }
    step = spacing;
    while !(secant(pts[pts.len() - 2], pts[pts.len() - 1]).slope < T::zero()) {
        step *= T::two();
        let x = pts[pts.len() - 1].0 + step;
        pts.push((x, eval(f, x)?));
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::Convergence("could not bracket the mode from the right".into()));
        }
    }
    // points at -inf log-density carry no information for the hull
    pts.retain(|p| p.1.is_finite());
    if pts.len() < 3 {
        return Err(Error::Convergence("too few finite abscissae to build an envelope".into()));
    }

    let mut refinements = 0;
    loop {
        let pieces = envelope(&pts);
        let top = pieces.iter().fold(T::neg_infinity(), |m, p| m.max(p.log_mass));
        let weights: Vec<T> = pieces.iter().map(|p| (p.log_mass - top).exp()).collect();
        let total = weights.iter().fold(T::zero(), |a, &w| a + w);
        let mut target = T::unit(rng) * total;
        let mut k = pieces.len() - 1;
        for (i, &w) in weights.iter().enumerate() {
            if target < w {
                k = i;
                break;
            }
            target -= w;
        }
        let x = sample_piece(&pieces[k], rng);
        let upper = pieces[k].line.at(x);
        let log_u = (T::one() - T::unit(rng)).ln();
        if log_u <= squeeze(&pts, x) - upper {
            return Ok(x);
        }
        let hx = eval(f, x)?;
        if log_u <= hx - upper {
            return Ok(x);
        }
        refinements += 1;
        if refinements > MAX_REFINEMENTS {
            return Err(Error::Convergence(format!(
                "adaptive rejection exceeded {MAX_REFINEMENTS} refinements"
            )));
        }
        let pos = pts.partition_point(|p| p.0 < x);
        if pts.get(pos).is_none_or(|p| p.0 != x) && hx.is_finite() {
            pts.insert(pos, (x, hx));
        }
    }
}
