//! BPSK over AWGN.
//!
//! Randomness for trial `k` of a run comes from a ChaCha8 generator seeded
//! with the run's master seed and switched to stream `k`. The decoder is not
//! part of the key, so every decoder sees the same codeword and the same
//! noise on a given trial. ChaCha8 output and the `rand_distr` ziggurat
//! normal sampler are platform independent, so runs replay bit-for-bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::code::BipolarWord;
use crate::error::{Error, Result};

/// Noise standard deviation for a given SNR (dB) and design rate:
/// `sqrt(0.5 * 10^(-snr/10) / rate)`.
pub fn sigma_from_snr(snr_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!("rate must lie in (0, 1], got {rate}")));
    }
    if snr_db.is_nan() {
        return Err(Error::InvalidParameter("SNR is NaN".into()));
    }
    Ok((0.5 * 10f64.powf(-snr_db / 10.0) / rate).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    snr_db: f64,
    rate: f64,
    sigma: f64,
}

impl ChannelParams {
    pub fn new(snr_db: f64, rate: f64) -> Result<Self> {
        let sigma = sigma_from_snr(snr_db, rate)?;
        Ok(Self { snr_db, rate, sigma })
    }

    pub fn snr_db(&self) -> f64 {
        self.snr_db
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Generator for one trial of a run.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// `n` independent standard normal draws.
pub fn standard_normals<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// `y = s + sigma * g` with `g` standard normal.
pub fn transmit<R: Rng + ?Sized>(s: &BipolarWord, sigma: f64, rng: &mut R) -> Vec<f64> {
    let g = standard_normals(s.len(), rng);
    apply_noise(s, sigma, &g)
}

/// `y = s + sigma * g` for a pre-drawn `g`.
pub fn apply_noise(s: &BipolarWord, sigma: f64, g: &[f64]) -> Vec<f64> {
    s.symbols().iter().zip(g).map(|(&sv, &gv)| f64::from(sv) + sigma * gv).collect()
}
