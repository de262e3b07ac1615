//! GFDM modulation matrix of the reference waveform: conditioning, noise
//! enhancement and a zero-forcing round trip on random 64-QAM data.
//!
//! Run with `cargo run --release --example gfdm_modem`.

use gfdm_lab::channel::frame_rng;
use gfdm_lab::mapping::Constellation;
use gfdm_lab::waveform::{GfdmModem, GfdmParams, PulseKind};
use rand::Rng;

fn main() -> gfdm_lab::Result<()> {
    let c = Constellation::new(64)?;
    let mut rng = frame_rng(2, 0, 0);
    for roll_off in [0.1, 0.5, 0.9] {
        let params = GfdmParams::new(512, 3, PulseKind::RaisedCosine, roll_off)?;
        let modem = GfdmModem::from_params(&params)?;
        let bits: Vec<u8> = (0..params.symbols_per_block() * 6)
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let d = c.map(&bits)?;
        let back = modem.demodulate(&modem.modulate(&d)?)?;
        let err = d
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!(
            "roll-off {roll_off}: N = {}, cond {:.3}, xi {:.6}, round-trip error {err:.1e}",
            modem.block_len(),
            modem.condition_number(),
            modem.noise_enhancement_factor()
        );
    }
    Ok(())
}
