//! The code potential energy
//!
//! ```text
//! h(x) = alpha * sum_j (x_j^2 - 1)^2 + beta * sum_i (prod_{j in A(i)} x_j - 1)^2
//! ```
//!
//! and the total potential `f(x) = |x - y|^2 / 2 + h(x)` together with their
//! analytic gradients. The gradient uses leave-one-out products built from
//! prefix and suffix products, so it is defined (and division free) at
//! `x_k = 0`.

use crate::code::ParityCheckMatrix;
use crate::error::{Error, Result};

/// Weights of the bipolar term (`alpha`) and the parity term (`beta`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    alpha: f64,
    beta: f64,
}

impl PotentialParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    /// alpha = 1, beta = 2: the setting used for BER runs.
    pub fn ber_default() -> Self {
        Self { alpha: 1.0, beta: 2.0 }
    }

    /// alpha = beta = 1: the setting used for the dynamics diagnostics.
    pub fn unit() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for PotentialParams {
    fn default() -> Self {
        Self::ber_default()
    }
}

pub(crate) fn check_state(n: usize, x: &[f64]) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    if let Some(k) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(k));
    }
    Ok(())
}

/// `prod_{j in A(i)} x_j` for every check.
pub fn check_products(h: &ParityCheckMatrix, x: &[f64]) -> Vec<f64> {
    h.rows().iter().map(|row| row.iter().map(|&j| x[j]).product()).collect()
}

pub(crate) fn code_energy_unchecked(h: &ParityCheckMatrix, p: &PotentialParams, x: &[f64]) -> f64 {
    let bipolar: f64 = x.iter().map(|&v| (v * v - 1.0).powi(2)).sum();
    let parity: f64 = h
        .rows()
        .iter()
        .map(|row| {
            let z: f64 = row.iter().map(|&j| x[j]).product();
            (z - 1.0).powi(2)
        })
        .sum();
    p.alpha * bipolar + p.beta * parity
}

/// Writes the gradient of the code energy into `out`.
///
/// `scratch` is reused between calls to hold per-row prefix products.
pub(crate) fn code_gradient_into(
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    x: &[f64],
    out: &mut [f64],
    scratch: &mut Vec<f64>,
) {
    let four_alpha = 4.0 * p.alpha;
    for (o, &v) in out.iter_mut().zip(x) {
        *o = four_alpha * (v * v - 1.0) * v;
    }
    let two_beta = 2.0 * p.beta;
    for row in h.rows() {
        scratch.clear();
        scratch.push(1.0);
        let mut acc = 1.0;
        for &j in row {
            acc *= x[j];
            scratch.push(acc);
        }
        // acc is now z_i
        let coeff = two_beta * (acc - 1.0);
        let mut suffix = 1.0;
        for (t, &k) in row.iter().enumerate().rev() {
            out[k] += coeff * scratch[t] * suffix;
            suffix *= x[k];
        }
    }
}

/// Evaluates `h_{alpha,beta}(x)`.
pub fn code_energy(h: &ParityCheckMatrix, p: &PotentialParams, x: &[f64]) -> Result<f64> {
    check_state(h.n(), x)?;
    Ok(code_energy_unchecked(h, p, x))
}

/// Analytic gradient of [`code_energy`].
pub fn code_energy_gradient(
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    x: &[f64],
) -> Result<Vec<f64>> {
    check_state(h.n(), x)?;
    let mut out = vec![0.0; h.n()];
    code_gradient_into(h, p, x, &mut out, &mut Vec::with_capacity(h.max_row_degree() + 1));
    Ok(out)
}

pub(crate) fn total_energy_unchecked(
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    x: &[f64],
    y: &[f64],
) -> f64 {
    let fit: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    0.5 * fit + code_energy_unchecked(h, p, x)
}

pub(crate) fn total_gradient_into(
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    x: &[f64],
    y: &[f64],
    out: &mut [f64],
    scratch: &mut Vec<f64>,
) {
    code_gradient_into(h, p, x, out, scratch);
    for ((o, &a), &b) in out.iter_mut().zip(x).zip(y) {
        *o += a - b;
    }
}

/// Evaluates `f(x) = |x - y|^2 / 2 + h_{alpha,beta}(x)`.
pub fn total_energy(
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    check_state(h.n(), x)?;
    check_state(h.n(), y)?;
    Ok(total_energy_unchecked(h, p, x, y))
}

/// Analytic gradient of [`total_energy`]: `(x - y) + grad h(x)`.
pub fn total_gradient(
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    x: &[f64],
    y: &[f64],
) -> Result<Vec<f64>> {
    check_state(h.n(), x)?;
    check_state(h.n(), y)?;
    let mut out = vec![0.0; h.n()];
    total_gradient_into(h, p, x, y, &mut out, &mut Vec::with_capacity(h.max_row_degree() + 1));
    Ok(out)
}
