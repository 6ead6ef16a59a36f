use gfldpc::channel::{apply_noise, standard_normals};
use gfldpc::{sigma_from_snr, transmit, trial_rng, BipolarWord};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

const SAMPLES: usize = 100_000;

fn all_plus(n: usize) -> BipolarWord {
    gfldpc::binary_to_bipolar(&gfldpc::BinaryWord::zeros(n))
}

#[test]
fn sigma_matches_closed_form() {
    let s = sigma_from_snr(2.0, 0.5).unwrap();
    assert!((s - (10f64.powf(-0.2)).sqrt()).abs() < 1e-15);
    assert!((sigma_from_snr(0.0, 1.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(sigma_from_snr(1.0, 0.0).is_err());
}

#[test]
fn noise_has_the_requested_moments() {
    let sigma = sigma_from_snr(3.0, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let y = transmit(&all_plus(SAMPLES), sigma, &mut rng);
    let e: Vec<f64> = y.iter().map(|v| v - 1.0).collect();
    let mean = e.iter().sum::<f64>() / SAMPLES as f64;
    let var = e.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (SAMPLES - 1) as f64;
    // Five standard errors on each estimate.
    assert!(mean.abs() < 5.0 * sigma / (SAMPLES as f64).sqrt(), "mean {mean}");
    let var_se = sigma * sigma * (2.0 / (SAMPLES - 1) as f64).sqrt();
    assert!((var - sigma * sigma).abs() < 5.0 * var_se, "var {var} vs {}", sigma * sigma);
}

#[test]
fn normals_pass_kolmogorov_smirnov() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut g = standard_normals(SAMPLES, &mut rng);
    g.sort_by(f64::total_cmp);
    let phi = Normal::new(0.0, 1.0).unwrap();
    let n = SAMPLES as f64;
    let d = g
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let c = phi.cdf(v);
            (c - i as f64 / n).max((i + 1) as f64 / n - c)
        })
        .fold(0.0, f64::max);
    // 1% critical value of the one-sample statistic.
    assert!(d < 1.628 / n.sqrt(), "D = {d}");
}

#[test]
fn trial_streams_are_keyed_by_seed_and_trial() {
    let a = standard_normals(8, &mut trial_rng(5, 3));
    assert_eq!(a, standard_normals(8, &mut trial_rng(5, 3)));
    assert_ne!(a, standard_normals(8, &mut trial_rng(5, 4)));
    assert_ne!(a, standard_normals(8, &mut trial_rng(6, 3)));
}

#[test]
fn apply_noise_is_affine() {
    let s = all_plus(3);
    assert_eq!(apply_noise(&s, 0.5, &[1.0, -2.0, 0.0]), vec![1.5, 0.0, 1.0]);
}
