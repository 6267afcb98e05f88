//! Least-squares fits of sequences sampled as the puncture radius `a` shrinks.
//!
//! The base model is `v(a) = A / a + B`. [`fit_singular_series`] appends the
//! regular powers `a, a^2, ...` so that sequences whose correction terms are
//! not negligible at the sampled radii still extrapolate cleanly.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// Coefficient `A` of `1/a`.
    pub singular_coeff: f64,
    /// Constant term `B`, the `a -> 0` limit once `A/a` is removed.
    pub constant_term: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// Coefficients of `a, a^2, ...` (empty for the two-term model).
    pub regular_coeffs: Vec<f64>,
}

impl LimitEstimate {
    pub fn evaluate(&self, a: f64) -> f64 {
        let mut v = self.singular_coeff / a + self.constant_term;
        let mut p = a;
        for c in &self.regular_coeffs {
            v += c * p;
            p *= a;
        }
        v
    }
}

fn validate(samples: &[(f64, f64)], params: usize) -> Result<()> {
    let needed = (params + 1).max(3);
    if samples.len() < needed {
        return Err(Error::input(format!(
            "need at least {needed} samples, got {}",
            samples.len()
        )));
    }
    for &(a, v) in samples {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::input(format!("sample radius must be positive, got {a}")));
        }
        if !v.is_finite() {
            return Err(Error::input(format!("non-finite sample value at a = {a}")));
        }
    }
    if samples.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::input("sample radii must be strictly decreasing"));
    }
    Ok(())
}

/// Ordinary least squares for `v(a) ~ A/a + B`.
pub fn fit_singular_limit(samples: &[(f64, f64)]) -> Result<LimitEstimate> {
    fit_singular_series(samples, 0)
}

/// Least squares for `v(a) ~ A/a + B + c_1 a + ... + c_m a^m`.
pub fn fit_singular_series(samples: &[(f64, f64)], regular_terms: usize) -> Result<LimitEstimate> {
    let params = 2 + regular_terms;
    validate(samples, params)?;
    let n = samples.len();
    let a_max = samples[0].0;

    // columns in the scaled variable s = a / a_max keep the design well conditioned
    let mut design = DMatrix::<f64>::zeros(n, params);
    let rhs = DVector::from_iterator(n, samples.iter().map(|s| s.1));
    for (i, &(a, _)) in samples.iter().enumerate() {
        let s = a / a_max;
        design[(i, 0)] = 1.0 / s;
        design[(i, 1)] = 1.0;
        let mut p = s;
        for j in 0..regular_terms {
            design[(i, 2 + j)] = p;
            p *= s;
        }
    }
    let norms: Vec<f64> = (0..params)
        .map(|j| design.column(j).norm().max(f64::MIN_POSITIVE))
        .collect();
    for (j, &nrm) in norms.iter().enumerate() {
        design.column_mut(j).scale_mut(1.0 / nrm);
    }

    let svd = design.clone().svd(true, true);
    let coeffs = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::input(format!("least-squares solve failed: {e}")))?;
    let fitted = &design * &coeffs;
    let residual = ((&rhs - fitted).norm_squared() / n as f64).sqrt();

    // undo column and variable scaling
    let raw: Vec<f64> = coeffs.iter().zip(&norms).map(|(c, nrm)| c / nrm).collect();
    let singular_coeff = raw[0] * a_max;
    let constant_term = raw[1];
    let mut scale = 1.0 / a_max;
    let regular_coeffs = raw[2..]
        .iter()
        .map(|c| {
            let v = c * scale;
            scale /= a_max;
            v
        })
        .collect();

    Ok(LimitEstimate {
        singular_coeff,
        constant_term,
        residual,
        regular_coeffs,
    })
}
