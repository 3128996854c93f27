//! Lipschitz losses `f(y; t)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LipschitzLoss {
    Hinge,
    Huber { delta: f64 },
    Logistic,
    Pinball { level: f64 },
    Absolute,
}

fn check_label(y: f64) -> Result<()> {
    if y == 1.0 || y == -1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("label must be -1 or +1, got {y}")))
    }
}

/// Loss value and its Lipschitz constant in `t`.
pub fn loss_eval(l: LipschitzLoss, y: f64, t: f64) -> Result<(f64, f64)> {
    let v = match l {
        LipschitzLoss::Hinge => {
            check_label(y)?;
            (1.0 - y * t).max(0.0)
        }
        LipschitzLoss::Huber { delta } => {
            if !(delta > 0.0) {
                return Err(Error::domain("huber threshold must be positive"));
            }
            let r = (y - t).abs();
            if r <= delta {
                r * r / (2.0 * delta)
            } else {
                r - delta / 2.0
            }
        }
        LipschitzLoss::Logistic => {
            check_label(y)?;
            let a = -y * t;
            a.max(0.0) + (-a.abs()).exp().ln_1p()
        }
        LipschitzLoss::Pinball { level } => {
            if !(level > 0.0 && level < 1.0) {
                return Err(Error::domain("pinball level must lie in (0, 1)"));
            }
            level * (t - y).max(0.0) + (1.0 - level) * (y - t).max(0.0)
        }
        LipschitzLoss::Absolute => (y - t).abs(),
    };
    Ok((v, 1.0))
}
