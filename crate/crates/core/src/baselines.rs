//! Reference decoders: sum-product belief propagation and multi-bit
//! gradient descent bit flipping (GDBF).

use crate::code::{is_codeword, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::flow::DecodeResult;

/// Clamp applied to every BP message magnitude.
pub const LLR_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BpParams {
    pub max_iterations: usize,
    pub early_stop: bool,
}

impl Default for BpParams {
    fn default() -> Self {
        Self { max_iterations: 100, early_stop: true }
    }
}

/// Flooding sum-product decoder with the tanh rule.
///
/// The returned `final_state` holds the posterior LLRs, so the usual sign
/// decision (`>= 0` gives bit 0) applies.
pub fn bp_decode(
    h: &ParityCheckMatrix,
    y: &[f64],
    sigma: f64,
    params: &BpParams,
) -> Result<DecodeResult> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    if params.max_iterations == 0 {
        return Err(Error::InvalidParameter("BP needs at least one iteration".into()));
    }
    crate::potential::check_state(h.n(), y)?;
    let clamp = |v: f64| v.clamp(-LLR_CLAMP, LLR_CLAMP);
    let channel: Vec<f64> = y.iter().map(|&v| clamp(2.0 * v / (sigma * sigma))).collect();

    // Edge messages are stored row-major, matching h.rows().
    let row_start: Vec<usize> = std::iter::once(0)
        .chain(h.rows().iter().scan(0, |acc, r| {
            *acc += r.len();
            Some(*acc)
        }))
        .collect();
    let edges = row_start[h.m()];
    // For each variable, the edge ids of its checks.
    let mut var_edges: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    for (i, row) in h.rows().iter().enumerate() {
        for (t, &j) in row.iter().enumerate() {
            var_edges[j].push(row_start[i] + t);
        }
    }

    let mut v2c = vec![0.0; edges];
    let mut c2v = vec![0.0; edges];
    for (j, es) in var_edges.iter().enumerate() {
        for &e in es {
            v2c[e] = channel[j];
        }
    }
    let mut posterior = channel.clone();
    let mut bits: Vec<u8> = posterior.iter().map(|&l| u8::from(l < 0.0)).collect();
    let mut iterations = 0;
    if !(params.early_stop && is_codeword(h, &bits)) {
        let mut tanhs = Vec::with_capacity(h.max_row_degree());
        for it in 0..params.max_iterations {
            // check update
            for (i, row) in h.rows().iter().enumerate() {
                let base = row_start[i];
                tanhs.clear();
                tanhs.extend((0..row.len()).map(|t| (0.5 * v2c[base + t]).tanh()));
                for t in 0..row.len() {
                    let prod: f64 = tanhs
                        .iter()
                        .enumerate()
                        .filter(|&(s, _)| s != t)
                        .map(|(_, v)| v)
                        .product();
                    c2v[base + t] = clamp(2.0 * prod.atanh());
                }
            }
            // variable update and posterior
            for (j, es) in var_edges.iter().enumerate() {
                let total = channel[j] + es.iter().map(|&e| c2v[e]).sum::<f64>();
                posterior[j] = total;
                for &e in es {
                    v2c[e] = clamp(total - c2v[e]);
                }
            }
            iterations = it + 1;
            bits = posterior.iter().map(|&l| u8::from(l < 0.0)).collect();
            if params.early_stop && is_codeword(h, &bits) {
                break;
            }
        }
    }
    Ok(DecodeResult::from_state(h, posterior, false, iterations, None))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdbfParams {
    pub max_iterations: usize,
    /// Bits whose inversion value falls below this are flipped together.
    pub theta: f64,
}

impl Default for GdbfParams {
    fn default() -> Self {
        Self { max_iterations: 100, theta: -0.6 }
    }
}

/// One iteration of a GDBF run, recorded for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct GdbfStep {
    /// Bits flipped in this iteration.
    pub flipped: Vec<usize>,
    /// `true` when no bit was below the threshold and the argmin was flipped.
    pub fallback: bool,
    /// Smallest inversion value before flipping.
    pub min_inversion: f64,
    pub objective_before: f64,
    pub objective_after: f64,
}

/// `sum_k x_k y_k + sum_i prod_{j in A(i)} x_j`.
pub fn gdbf_objective(h: &ParityCheckMatrix, x: &[i8], y: &[f64]) -> f64 {
    let corr: f64 = x.iter().zip(y).map(|(&a, &b)| f64::from(a) * b).sum();
    let checks: i64 = h.rows().iter().map(|row| i64::from(check_sign(row, x))).sum();
    corr + checks as f64
}

fn check_sign(row: &[usize], x: &[i8]) -> i8 {
    row.iter().fold(1i8, |acc, &j| acc * x[j])
}

/// GDBF decoding returning the per-iteration trace as well.
pub fn gdbf_decode_traced(
    h: &ParityCheckMatrix,
    y: &[f64],
    params: &GdbfParams,
) -> Result<(DecodeResult, Vec<GdbfStep>)> {
    if params.max_iterations == 0 {
        return Err(Error::InvalidParameter("GDBF needs at least one iteration".into()));
    }
    crate::potential::check_state(h.n(), y)?;
    let mut x: Vec<i8> = y.iter().map(|&v| if v >= 0.0 { 1 } else { -1 }).collect();
    let mut checks: Vec<i8> = h.rows().iter().map(|r| check_sign(r, &x)).collect();
    let mut delta = vec![0.0; h.n()];
    let mut trace = Vec::new();
    let mut iterations = 0;

    for it in 0..params.max_iterations {
        if checks.iter().all(|&c| c == 1) {
            break;
        }
        for (k, d) in delta.iter_mut().enumerate() {
            let sum: i32 = h.col(k).iter().map(|&i| i32::from(checks[i])).sum();
            *d = f64::from(x[k]) * y[k] + f64::from(sum);
        }
        let (argmin, &min_inversion) = delta
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("n >= 1");
        let mut flipped: Vec<usize> =
            (0..h.n()).filter(|&k| delta[k] < params.theta).collect();
        let fallback = flipped.is_empty();
        if fallback {
            flipped.push(argmin);
        }
        let objective_before = gdbf_objective(h, &x, y);
        for &k in &flipped {
            x[k] = -x[k];
        }
        for (i, c) in checks.iter_mut().enumerate() {
            *c = check_sign(h.row(i), &x);
        }
        trace.push(GdbfStep {
            flipped,
            fallback,
            min_inversion,
            objective_before,
            objective_after: gdbf_objective(h, &x, y),
        });
        iterations = it + 1;
    }
    let state: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
    Ok((DecodeResult::from_state(h, state, false, iterations, None), trace))
}

/// Multi-bit GDBF: start from the signs of `y`, flip every bit whose
/// inversion value `x_k y_k + sum_{i in B(k)} prod_{j in A(i)} x_j` is below
/// `theta`; when none is, flip the single smallest one.
pub fn gdbf_decode(h: &ParityCheckMatrix, y: &[f64], params: &GdbfParams) -> Result<DecodeResult> {
    gdbf_decode_traced(h, y, params).map(|(r, _)| r)
}
