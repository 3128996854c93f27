#![allow(dead_code)]

/// Two-sided KS statistic of `samples` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at level 0.01.
pub fn ks_critical_01(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// CDF tabulated from a density by cumulative trapezoid on `[lo, hi]`,
/// with the mass left of `lo` given.
pub struct TabulatedCdf {
    lo: f64,
    step: f64,
    cum: Vec<f64>,
    left: f64,
}

impl TabulatedCdf {
    pub fn new<F: Fn(f64) -> f64>(density: F, lo: f64, hi: f64, n: usize, left_mass: f64) -> Self {
        let step = (hi - lo) / (n - 1) as f64;
        let vals: Vec<f64> = (0..n).map(|i| density(lo + step * i as f64)).collect();
        let mut cum = vec![0.0; n];
        for i in 1..n {
            cum[i] = cum[i - 1] + 0.5 * step * (vals[i - 1] + vals[i]);
        }
        Self { lo, step, cum, left: left_mass }
    }

    pub fn window_mass(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.lo) / self.step;
        if t <= 0.0 {
            return self.left;
        }
        let i = t.floor() as usize;
        if i + 1 >= self.cum.len() {
            return self.left + self.window_mass();
        }
        let f = t - i as f64;
        self.left + self.cum[i] * (1.0 - f) + self.cum[i + 1] * f
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}
