//! Gradient-flow decoding: explicit Euler integration of
//! `dx/dt = -(x - y + grad h(x))` from a chosen start point, followed by a
//! sign decision on the state reached at `t = T`.

use std::fmt::Write as _;

use crate::code::{hard_decision_unchecked, is_codeword, BinaryWord, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::potential::{check_state, total_energy_unchecked, total_gradient_into, PotentialParams};

/// States with `|x|_inf` above this are treated as diverged.
pub const DEFAULT_GUARD: f64 = 1e3;

/// Where the integration starts.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum InitPolicy {
    /// `x(0) = 0`.
    #[default]
    Zero,
    /// `x(0) = delta * y`.
    ScaledReceived(f64),
    /// A caller-supplied start point.
    Explicit(Vec<f64>),
}

/// Time horizon, step count and start point of the integration.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerParams {
    t_end: f64,
    steps: usize,
    pub init: InitPolicy,
    /// Stop as soon as the sign pattern satisfies every check.
    pub early_stop: bool,
    pub guard: f64,
}

impl EulerParams {
    pub fn new(t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("T must be positive, got {t_end}")));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        Ok(Self { t_end, steps, init: InitPolicy::Zero, early_stop: false, guard: DEFAULT_GUARD })
    }

    /// T = 10, N = 1000, zero start.
    pub fn ber_default() -> Self {
        Self::new(10.0, 1000).expect("valid defaults")
    }

    pub fn with_init(mut self, init: InitPolicy) -> Self {
        self.init = init;
        self
    }

    pub fn with_early_stop(mut self, early_stop: bool) -> Self {
        self.early_stop = early_stop;
        self
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Bin width `T / N`.
    pub fn eta(&self) -> f64 {
        self.t_end / self.steps as f64
    }

    fn initial_state(&self, y: &[f64]) -> Result<Vec<f64>> {
        match &self.init {
            InitPolicy::Zero => Ok(vec![0.0; y.len()]),
            InitPolicy::ScaledReceived(delta) => Ok(y.iter().map(|v| delta * v).collect()),
            InitPolicy::Explicit(x0) => {
                if x0.len() != y.len() {
                    return Err(Error::LengthMismatch { expected: y.len(), got: x0.len() });
                }
                Ok(x0.clone())
            }
        }
    }
}

impl Default for EulerParams {
    fn default() -> Self {
        Self::ber_default()
    }
}

/// Which states to keep while integrating.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Capture {
    #[default]
    None,
    /// Every grid point `k * eta`, `k = 0..=N`.
    EveryStep,
    /// Every `stride`-th grid point, plus the last one.
    Stride(usize),
    /// Requested times, snapped to the nearest grid point.
    Times(Vec<f64>),
}

/// Sampled solution curve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub sample_times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.sample_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_times.is_empty()
    }

    /// One row per sample: time, energy, then the state coordinates.
    pub fn to_table(&self) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let mut out = String::from("t energy");
        for k in 0..n {
            let _ = write!(out, " x{k}");
        }
        out.push('\n');
        for ((t, e), x) in self.sample_times.iter().zip(&self.energies).zip(&self.states) {
            let _ = write!(out, "{t} {e}");
            for v in x {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    /// Time and energy columns only.
    pub fn energy_table(&self) -> String {
        let mut out = String::from("t energy\n");
        for (t, e) in self.sample_times.iter().zip(&self.energies) {
            let _ = writeln!(out, "{t} {e}");
        }
        out
    }
}

/// Output of any decoder in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub final_state: Vec<f64>,
    pub hard_word: BinaryWord,
    pub syndrome_ok: bool,
    pub diverged: bool,
    /// Euler steps or decoder iterations actually performed.
    pub iterations: usize,
    pub trajectory: Option<Trajectory>,
}

impl DecodeResult {
    pub(crate) fn from_state(
        h: &ParityCheckMatrix,
        final_state: Vec<f64>,
        diverged: bool,
        iterations: usize,
        trajectory: Option<Trajectory>,
    ) -> Self {
        let hard_word = hard_decision_unchecked(&final_state);
        let syndrome_ok = is_codeword(h, hard_word.bits());
        Self { final_state, hard_word, syndrome_ok, diverged, iterations, trajectory }
    }
}

/// Reusable buffers for repeated Euler steps on one code.
pub(crate) struct Stepper<'a> {
    h: &'a ParityCheckMatrix,
    p: PotentialParams,
    grad: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(h: &'a ParityCheckMatrix, p: PotentialParams) -> Self {
        Self {
            h,
            p,
            grad: vec![0.0; h.n()],
            scratch: Vec::with_capacity(h.max_row_degree() + 1),
        }
    }

    /// `next = x - eta * grad f(x)`; returns `false` if any entry is non-finite.
    pub(crate) fn step(&mut self, x: &[f64], y: &[f64], eta: f64, next: &mut [f64]) -> bool {
        total_gradient_into(self.h, &self.p, x, y, &mut self.grad, &mut self.scratch);
        let mut finite = true;
        for ((nx, &xv), &g) in next.iter_mut().zip(x).zip(&self.grad) {
            *nx = xv - eta * g;
            finite &= nx.is_finite();
        }
        finite
    }
}

/// One Euler step `x - eta * grad f(x)`.
pub fn euler_step(
    x: &[f64],
    y: &[f64],
    h: &ParityCheckMatrix,
    p: &PotentialParams,
    eta: f64,
) -> Result<Vec<f64>> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
    }
    check_state(h.n(), x)?;
    check_state(h.n(), y)?;
    let mut next = vec![0.0; h.n()];
    if !Stepper::new(h, *p).step(x, y, eta, &mut next) {
        let k = next.iter().position(|v| !v.is_finite()).unwrap_or(0);
        return Err(Error::NonFinite(k));
    }
    Ok(next)
}

fn sample_steps(capture: &Capture, e: &EulerParams) -> Result<Option<Vec<bool>>> {
    let n = e.steps();
    let mut mask = vec![false; n + 1];
    match capture {
        Capture::None => return Ok(None),
        Capture::EveryStep => mask.iter_mut().for_each(|m| *m = true),
        Capture::Stride(s) => {
            let s = (*s).max(1);
            for k in (0..=n).step_by(s) {
                mask[k] = true;
            }
            mask[n] = true;
        }
        Capture::Times(times) => {
            let eta = e.eta();
            for &t in times {
                let tol = 1e-9 * e.t_end();
                if !(t >= -tol && t <= e.t_end() + tol) {
                    return Err(Error::SampleTime(t));
                }
                let k = ((t / eta).round() as usize).min(n);
                mask[k] = true;
            }
        }
    }
    Ok(Some(mask))
}

fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Runs gradient-flow decoding on the received word `y`.
pub fn decode(
    h: &ParityCheckMatrix,
    y: &[f64],
    p: &PotentialParams,
    e: &EulerParams,
    capture: &Capture,
) -> Result<DecodeResult> {
    check_state(h.n(), y)?;
    let mask = sample_steps(capture, e)?;
    let eta = e.eta();
    let mut x = e.initial_state(y)?;
    if let Some(k) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(k));
    }
    let mut traj = mask.as_ref().map(|_| Trajectory::default());
    let record = |k: usize, x: &[f64], traj: &mut Option<Trajectory>| {
        if let (Some(m), Some(t)) = (&mask, traj.as_mut()) {
            if m[k] {
                t.sample_times.push(k as f64 * eta);
                t.states.push(x.to_vec());
                t.energies.push(total_energy_unchecked(h, p, x, y));
            }
        }
    };
    record(0, &x, &mut traj);

    let mut diverged = inf_norm(&x) > e.guard;
    let mut steps_done = 0;
    // Early stopping is only checked after a step: the zero start decides to
    // the all-zero word, which is always a codeword.
    if !diverged {
        let mut stepper = Stepper::new(h, *p);
        let mut next = vec![0.0; h.n()];
        for k in 0..e.steps() {
            if !stepper.step(&x, y, eta, &mut next) {
                diverged = true;
                break;
            }
            std::mem::swap(&mut x, &mut next);
            steps_done = k + 1;
            if inf_norm(&x) > e.guard {
                diverged = true;
                break;
            }
            record(k + 1, &x, &mut traj);
            if e.early_stop && is_codeword(h, hard_decision_unchecked(&x).bits()) {
                break;
            }
        }
    }
    Ok(DecodeResult::from_state(h, x, diverged, steps_done, traj))
}

/// Decodes and returns only the hard decision at `t = T`.
pub fn decode_word(
    h: &ParityCheckMatrix,
    y: &[f64],
    p: &PotentialParams,
    e: &EulerParams,
) -> Result<BinaryWord> {
    decode(h, y, p, e, &Capture::None).map(|r| r.hard_word)
}
