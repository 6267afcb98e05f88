//! Central finite differences refined by Richardson extrapolation.
//!
//! The largest step is `h = base_step^(1/order) * max(1, |x|)`; each Richardson
//! level halves it and cancels the next even power of `h` in the central
//! difference error series. Second differences use the square root of the base
//! step because their roundoff grows like `eps / h^2` rather than `eps / h`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    pub base_step: f64,
    pub richardson_levels: usize,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self {
            base_step: 1e-5,
            richardson_levels: 2,
        }
    }
}

impl DiffConfig {
    pub fn new(base_step: f64, richardson_levels: usize) -> Result<Self> {
        let cfg = Self {
            base_step,
            richardson_levels,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_step > 0.0 && self.base_step.is_finite()) {
            return Err(Error::input(format!(
                "base_step must be positive and finite, got {}",
                self.base_step
            )));
        }
        if self.richardson_levels < 1 {
            return Err(Error::input("richardson_levels must be at least 1"));
        }
        Ok(())
    }

    /// Largest step used around `x` for a derivative of the given order.
    pub fn step(&self, x: f64, order: u32) -> f64 {
        self.base_step.powf(1.0 / order as f64) * x.abs().max(1.0)
    }
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: x })
    }
}

/// Richardson tableau over a sequence of halved steps for an estimator whose
/// error expands in even powers of the step.
fn richardson<E>(h0: f64, levels: usize, mut estimate: E) -> Result<f64>
where
    E: FnMut(f64) -> Result<f64>,
{
    let mut prev: Vec<f64> = Vec::with_capacity(levels + 1);
    let mut h = h0;
    for i in 0..=levels {
        let mut row = Vec::with_capacity(i + 1);
        row.push(estimate(h)?);
        let mut factor = 1.0;
        for j in 1..=i {
            factor *= 4.0;
            let refined = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(refined);
        }
        prev = row;
        h *= 0.5;
    }
    Ok(prev[levels])
}

/// Derivative of order 1 or 2 of `f` at `x`.
pub fn derivative<F>(f: F, x: f64, order: u32, cfg: &DiffConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    let h0 = cfg.step(x, order.max(1));
    match order {
        1 => richardson(h0, cfg.richardson_levels, |h| {
            Ok((eval(&f, x + h)? - eval(&f, x - h)?) / (2.0 * h))
        }),
        2 => {
            let f0 = eval(&f, x)?;
            richardson(h0, cfg.richardson_levels, |h| {
                Ok((eval(&f, x + h)? - 2.0 * f0 + eval(&f, x - h)?) / (h * h))
            })
        }
        _ => Err(Error::input(format!(
            "derivative order must be 1 or 2, got {order}"
        ))),
    }
}

/// Partial derivative of a two-argument function along `axis` (0 or 1).
pub fn partial<F>(f: F, x1: f64, x2: f64, axis: usize, order: u32, cfg: &DiffConfig) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    match axis {
        0 => derivative(|t| f(t, x2), x1, order, cfg),
        1 => derivative(|t| f(x1, t), x2, order, cfg),
        _ => Err(Error::input(format!("axis must be 0 or 1, got {axis}"))),
    }
}

/// Mixed second partial `d2f / dx1 dx2` from the four-point cross stencil.
pub fn mixed_partial<F>(f: F, x1: f64, x2: f64, cfg: &DiffConfig) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    cfg.validate()?;
    let scale = x1.abs().max(x2.abs()).max(1.0);
    let h0 = cfg.base_step.sqrt() * scale;
    let g = |a: f64, b: f64| -> Result<f64> {
        let v = f(a, b);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: a.hypot(b) })
        }
    };
    richardson(h0, cfg.richardson_levels, |h| {
        let pp = g(x1 + h, x2 + h)?;
        let pm = g(x1 + h, x2 - h)?;
        let mp = g(x1 - h, x2 + h)?;
        let mm = g(x1 - h, x2 - h)?;
        Ok((pp - pm - mp + mm) / (4.0 * h * h))
    })
}
