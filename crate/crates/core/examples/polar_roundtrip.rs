//! Shortened polar code over BPSK: noiseless round trip at every rate,
//! then block errors of the SC decoder at a few SNRs.
//!
//! Run with `cargo run --release --example polar_roundtrip`.

use gfdm_lab::channel::frame_rng;
use gfdm_lab::polar::{CodeRate, PolarCodeConfig, PolarSpec};
use rand::Rng;
use rand_distr::{Distribution, Normal};

fn main() -> gfdm_lab::Result<()> {
    let mut rng = frame_rng(11, 0, 0);
    for rate in [
        CodeRate::Half,
        CodeRate::TwoThirds,
        CodeRate::ThreeQuarters,
        CodeRate::FiveSixths,
    ] {
        let code = PolarCodeConfig::construct(&PolarSpec::standard(rate))?;
        let info: Vec<u8> = (0..code.info_length())
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let cw = code.encode(&info)?;
        let llr: Vec<f64> = cw
            .iter()
            .map(|&b| if b == 0 { 20.0 } else { -20.0 })
            .collect();
        println!(
            "{rate:?}: K = {}, N = {}, noiseless round trip {}",
            code.info_length(),
            code.sent_length(),
            if code.decode(&llr)? == info {
                "ok"
            } else {
                "FAILED"
            }
        );
    }

    let spec = PolarSpec::with_rate(256, 0, CodeRate::Half, 2.0);
    let code = PolarCodeConfig::construct(&spec)?;
    for ebn0_db in [1.0, 2.0, 3.0, 4.0] {
        let sigma = (1.0 / (2.0 * code.rate() * 10f64.powf(ebn0_db / 10.0))).sqrt();
        let noise = Normal::new(0.0, sigma).expect("positive sigma");
        let trials = 2000;
        let mut block_errors = 0;
        for _ in 0..trials {
            let info: Vec<u8> = (0..code.info_length())
                .map(|_| rng.random_range(0..2u8))
                .collect();
            let llr: Vec<f64> = code
                .encode(&info)?
                .iter()
                .map(|&b| {
                    let y = 1.0 - 2.0 * b as f64 + noise.sample(&mut rng);
                    2.0 * y / (sigma * sigma)
                })
                .collect();
            block_errors += usize::from(code.decode(&llr)? != info);
        }
        println!(
            "N = 256, R = 1/2, Eb/N0 {ebn0_db} dB: block error rate {:.4}",
            block_errors as f64 / trials as f64
        );
    }
    Ok(())
}
