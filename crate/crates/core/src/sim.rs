//! Monte-Carlo BER sweeps.
//!
//! Trial `k` always draws its codeword and its standard-normal noise from
//! [`trial_rng`]`(seed, k)`, whatever decoder or SNR point it runs under.
//! Trials are processed in fixed-size blocks; inside a block they run in
//! parallel, and the block results are folded in trial order, so totals
//! (including where an early-stop rule cuts a point off) do not depend on
//! the number of workers.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{bp_decode, gdbf_decode};
use crate::channel::{apply_noise, sigma_from_snr, standard_normals, trial_rng};
use crate::code::{read_alist_file, BinaryWord, BipolarWord, ParityCheckMatrix};
use crate::config::{DecoderId, DecoderParams, ExperimentConfig};
use crate::encoder::{random_codeword, Encoder};
use crate::error::{Error, Result};
use crate::flow::{decode, Capture, DecodeResult};

const BLOCK: u64 = 512;

pub const CSV_HEADER: &str = "decoder,snr_db,trials,bit_errors,word_errors,divergences,ber,wer,seconds";

/// Tallies for one (decoder, SNR) point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub decoder: DecoderId,
    pub snr_db: f64,
    pub trials: u64,
    pub n: usize,
    pub bit_errors: u64,
    pub word_errors: u64,
    pub divergences: u64,
    /// Wall time spent on this point, if measured.
    pub seconds: Option<f64>,
}

impl BerRecord {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / (self.trials as f64 * self.n as f64)
    }

    pub fn wer(&self) -> f64 {
        self.word_errors as f64 / self.trials as f64
    }

    pub fn csv_row(&self) -> String {
        let secs = self.seconds.map(|s| format!("{s:.3}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{:e},{:e},{}",
            self.decoder,
            self.snr_db,
            self.trials,
            self.bit_errors,
            self.word_errors,
            self.divergences,
            self.ber(),
            self.wer(),
            secs
        )
    }
}

/// Header plus one row per record.
pub fn to_csv(records: &[BerRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

/// Per-trial codeword and noise source shared by every decoder of a run.
pub struct TrialSource<'a> {
    encoder: &'a Encoder,
    seed: u64,
}

impl<'a> TrialSource<'a> {
    pub fn new(encoder: &'a Encoder, seed: u64) -> Self {
        Self { encoder, seed }
    }

    /// Transmitted word and received word of trial `k` at noise level `sigma`.
    pub fn draw(&self, trial: u64, sigma: f64) -> (BipolarWord, Vec<f64>) {
        let mut rng = trial_rng(self.seed, trial);
        let s = random_codeword(self.encoder, &mut rng);
        let g = standard_normals(s.len(), &mut rng);
        let y = apply_noise(&s, sigma, &g);
        (s, y)
    }
}

/// Runs one decoder on one received word.
pub fn run_decoder(
    id: DecoderId,
    h: &ParityCheckMatrix,
    y: &[f64],
    sigma: f64,
    params: &DecoderParams,
) -> Result<DecodeResult> {
    match id {
        DecoderId::Gf => decode(h, y, &params.potential, &params.euler, &Capture::None),
        // BP needs a positive sigma for its LLRs even on a noiseless channel.
        DecoderId::Bp => bp_decode(h, y, sigma.max(1e-3), &params.bp),
        DecoderId::Gdbf => gdbf_decode(h, y, &params.gdbf),
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Outcome {
    bit_errors: u64,
    word_error: bool,
    diverged: bool,
}

fn score(sent: &BinaryWord, r: &DecodeResult) -> Outcome {
    let d = sent.hamming_distance(&r.hard_word) as u64;
    Outcome { bit_errors: d, word_error: d > 0, diverged: r.diverged }
}

/// Received-word fingerprint recorded by [`run_ber_sweep_traced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialTrace {
    pub decoder: DecoderId,
    pub snr_index: usize,
    pub trial: u64,
    pub received_hash: u64,
}

fn fnv1a(y: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in y {
        for b in v.to_bits().to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

fn sweep(
    h: &ParityCheckMatrix,
    config: &ExperimentConfig,
    workers: usize,
    timing: bool,
    mut trace: Option<&mut Vec<TrialTrace>>,
) -> Result<Vec<BerRecord>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let encoder = Encoder::new(h);
    let source = TrialSource::new(&encoder, config.seed);
    let rate = config.rate.unwrap_or_else(|| h.design_rate());
    let nd = config.decoders.len();
    let mut records = Vec::with_capacity(config.snr_db.len() * nd);

    for (snr_index, &snr) in config.snr_db.iter().enumerate() {
        let sigma = sigma_from_snr(snr, rate)?;
        let mut recs: Vec<BerRecord> = config
            .decoders
            .iter()
            .map(|&decoder| BerRecord {
                decoder,
                snr_db: snr,
                trials: 0,
                n: h.n(),
                bit_errors: 0,
                word_errors: 0,
                divergences: 0,
                seconds: None,
            })
            .collect();
        let mut active = vec![true; nd];
        let mut elapsed = vec![0.0f64; nd];
        let mut start = 0u64;
        while start < config.trials && active.iter().any(|&a| a) {
            let end = (start + BLOCK).min(config.trials);
            for d in 0..nd {
                if !active[d] {
                    continue;
                }
                let id = config.decoders[d];
                let clock = Instant::now();
                let block: Vec<Result<(Outcome, u64)>> = pool.install(|| {
                    (start..end)
                        .into_par_iter()
                        .map(|trial| {
                            // Each decoder redraws its own copy of the trial.
                            let (s, y) = source.draw(trial, sigma);
                            let r = run_decoder(id, h, &y, sigma, &config.params)?;
                            Ok((score(&s.to_binary(), &r), fnv1a(&y)))
                        })
                        .collect()
                });
                elapsed[d] += clock.elapsed().as_secs_f64();
                for (offset, res) in block.into_iter().enumerate() {
                    let (o, hash) = res?;
                    let rec = &mut recs[d];
                    rec.trials += 1;
                    rec.bit_errors += o.bit_errors;
                    rec.word_errors += u64::from(o.word_error);
                    rec.divergences += u64::from(o.diverged);
                    if let Some(t) = trace.as_deref_mut() {
                        t.push(TrialTrace {
                            decoder: id,
                            snr_index,
                            trial: start + offset as u64,
                            received_hash: hash,
                        });
                    }
                    if config.min_errors.is_some_and(|m| rec.word_errors >= m) {
                        active[d] = false;
                        break;
                    }
                }
            }
            start = end;
        }
        for (rec, secs) in recs.iter_mut().zip(elapsed) {
            if timing {
                rec.seconds = Some(secs);
            }
        }
        records.extend(recs);
    }
    Ok(records)
}

/// Runs the sweep described by `config` on an already loaded matrix.
pub fn run_ber_sweep_with_code(
    h: &ParityCheckMatrix,
    config: &ExperimentConfig,
    workers: usize,
    timing: bool,
) -> Result<Vec<BerRecord>> {
    sweep(h, config, workers, timing, None)
}

/// Loads the matrix named in `config` and runs the sweep.
pub fn run_ber_sweep(
    config: &ExperimentConfig,
    workers: usize,
    timing: bool,
) -> Result<Vec<BerRecord>> {
    let h = read_alist_file(&config.code)?;
    sweep(&h, config, workers, timing, None)
}

/// Like [`run_ber_sweep_with_code`], also returning a fingerprint of the
/// received word each decoder saw on each trial.
pub fn run_ber_sweep_traced(
    h: &ParityCheckMatrix,
    config: &ExperimentConfig,
    workers: usize,
) -> Result<(Vec<BerRecord>, Vec<TrialTrace>)> {
    let mut trace = Vec::new();
    let recs = sweep(h, config, workers, false, Some(&mut trace))?;
    Ok((recs, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::tests::small_3x6;

    fn config(decoders: Vec<DecoderId>) -> ExperimentConfig {
        let mut c = ExperimentConfig::new("unused", decoders, vec![1.0, 3.0]);
        c.trials = 300;
        c.seed = 11;
        c
    }

    #[test]
    fn noiseless_runs_are_error_free() {
        let h = small_3x6();
        let mut c = config(vec![DecoderId::Gf, DecoderId::Bp, DecoderId::Gdbf]);
        c.snr_db = vec![200.0];
        c.trials = 100;
        let recs = run_ber_sweep_with_code(&h, &c, 2, false).unwrap();
        assert_eq!(recs.len(), 3);
        for r in &recs {
            assert_eq!((r.trials, r.bit_errors, r.word_errors), (100, 0, 0), "{r:?}");
        }
    }

    #[test]
    fn csv_is_independent_of_workers() {
        let h = small_3x6();
        let c = config(vec![DecoderId::Gf, DecoderId::Gdbf]);
        let a = to_csv(&run_ber_sweep_with_code(&h, &c, 1, false).unwrap());
        let b = to_csv(&run_ber_sweep_with_code(&h, &c, 4, false).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert_eq!(a.lines().count(), 5);
    }

    #[test]
    fn min_errors_cuts_points_deterministically() {
        let h = small_3x6();
        let mut c = config(vec![DecoderId::Gdbf]);
        c.snr_db = vec![-2.0];
        c.trials = 5000;
        c.min_errors = Some(25);
        let a = run_ber_sweep_with_code(&h, &c, 1, false).unwrap();
        let b = run_ber_sweep_with_code(&h, &c, 3, false).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].word_errors, 25);
        assert!(a[0].trials < 5000);
    }

    #[test]
    fn rates_follow_counts() {
        let r = BerRecord {
            decoder: DecoderId::Bp,
            snr_db: 2.5,
            trials: 10,
            n: 96,
            bit_errors: 12,
            word_errors: 3,
            divergences: 0,
            seconds: None,
        };
        assert_eq!(r.ber(), 12.0 / 960.0);
        assert_eq!(r.wer(), 0.3);
        assert!(r.csv_row().starts_with("bp,2.5,10,12,3,0,"));
        assert!(r.csv_row().ends_with(','));
    }
}
