//! Single-word diagnostics: energy decay, state snapshots and full solution
//! curves of one gradient-flow run, written as plain-text tables.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::code::{BipolarWord, ParityCheckMatrix};
use crate::error::Result;
use crate::flow::{decode, Capture, DecodeResult, EulerParams, Trajectory};
use crate::potential::PotentialParams;

#[derive(Debug, Clone)]
pub struct Diagnostics {
    /// Every grid point of the run.
    pub trajectory: Trajectory,
    /// `(time, state)` at the requested snapshot times.
    pub snapshots: Vec<(f64, Vec<f64>)>,
    pub result: DecodeResult,
}

impl Diagnostics {
    /// Run the decoder once, keeping every step.
    pub fn collect(
        h: &ParityCheckMatrix,
        y: &[f64],
        p: &PotentialParams,
        e: &EulerParams,
        snapshot_times: &[f64],
    ) -> Result<Self> {
        // Validate snapshot times against [0, T] up front.
        decode(h, y, p, &EulerParams::new(e.t_end(), 1)?, &Capture::Times(snapshot_times.to_vec()))?;
        let mut result = decode(h, y, p, e, &Capture::EveryStep)?;
        let trajectory = result.trajectory.take().unwrap_or_default();
        let eta = e.eta();
        let snapshots = snapshot_times
            .iter()
            .map(|&t| {
                let k = ((t / eta).round() as usize).min(trajectory.len().saturating_sub(1));
                (trajectory.sample_times[k], trajectory.states[k].clone())
            })
            .collect();
        Ok(Self { trajectory, snapshots, result })
    }

    /// One row per code position: index, transmitted symbol (if known), then
    /// the state at each snapshot time.
    pub fn snapshot_table(&self, sent: Option<&BipolarWord>) -> String {
        let mut out = String::from("index");
        if sent.is_some() {
            out.push_str(" sent");
        }
        for (t, _) in &self.snapshots {
            let _ = write!(out, " t={t}");
        }
        out.push('\n');
        let n = self.result.final_state.len();
        for j in 0..n {
            let _ = write!(out, "{j}");
            if let Some(s) = sent {
                let _ = write!(out, " {}", s.symbols()[j]);
            }
            for (_, x) in &self.snapshots {
                let _ = write!(out, " {}", x[j]);
            }
            out.push('\n');
        }
        out
    }

    /// Writes `energy.txt`, `snapshots.txt` and `trajectory.txt` into `dir`.
    pub fn write_to(&self, dir: &Path, sent: Option<&BipolarWord>) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let files = [
            ("energy.txt", self.trajectory.energy_table()),
            ("snapshots.txt", self.snapshot_table(sent)),
            ("trajectory.txt", self.trajectory.to_table()),
        ];
        let mut written = Vec::new();
        for (name, body) in files {
            let path = dir.join(name);
            std::fs::write(&path, body)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Runs the diagnostics and writes the tables to `out_dir`.
pub fn emit_diagnostics(
    h: &ParityCheckMatrix,
    y: &[f64],
    p: &PotentialParams,
    e: &EulerParams,
    snapshot_times: &[f64],
    sent: Option<&BipolarWord>,
    out_dir: &Path,
) -> Result<Diagnostics> {
    let d = Diagnostics::collect(h, y, p, e, snapshot_times)?;
    d.write_to(out_dir, sent)?;
    Ok(d)
}
