//! Writes one transmitted frame as interleaved f32 I/Q, reads it back and
//! checks the round trip.
//!
//! Run with `cargo run --example iq_export -- [path]`.

use gfdm_lab::channel::frame_rng;
use gfdm_lab::iq::{load_iq, save_iq, BYTES_PER_SAMPLE};
use gfdm_lab::link::{ChainConfig, Link};

fn main() -> gfdm_lab::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        std::env::temp_dir()
            .join("gfdm_frame.iq")
            .display()
            .to_string()
    });
    let link = Link::new(&ChainConfig::reference())?;
    let info = link.random_info(&mut frame_rng(1, 0, 0));
    let tx = link.transmit(&info)?;
    save_iq(&path, &tx[0])?;
    let back = load_iq(&path)?;
    let err = tx[0]
        .iter()
        .zip(&back)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!(
        "{} samples ({} bytes) written to {path}; max f32 rounding error {err:.2e}",
        back.len(),
        back.len() * BYTES_PER_SAMPLE
    );
    Ok(())
}
