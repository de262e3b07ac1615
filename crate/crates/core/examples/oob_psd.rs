//! Spectral notch of windowed GFDM next to plain CP-OFDM.
//!
//! Run with `cargo run --release --example oob_psd`.

use gfdm_lab::analysis::{oob_measure, OobRecipe, OobWaveform};

fn main() -> gfdm_lab::Result<()> {
    let recipe = OobRecipe::default();
    println!(
        "fs {:.1} MHz, span {:.1} MHz, notch {:.1} MHz, {} of {} subcarriers on",
        recipe.sample_rate / 1e6,
        recipe.span_hz / 1e6,
        recipe.notch_hz / 1e6,
        recipe.allocation().iter().filter(|&&a| a).count(),
        recipe.subcarriers()
    );
    for kind in [OobWaveform::Gfdm, OobWaveform::Ofdm] {
        let report = oob_measure(kind, &recipe)?;
        let psd = &report.psd;
        // Worst leakage just outside the span.
        let edge = psd
            .freq_hz
            .iter()
            .zip(&psd.power_dbc)
            .filter(|(f, _)| f.abs() > recipe.span_hz / 2.0 + 1e6)
            .map(|(_, p)| *p)
            .fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{kind:?}: notch {:.1} dBc, outside span {:.1} dBc ({} segments)",
            report.notch_dbc.unwrap_or(f64::NAN),
            edge,
            psd.segments
        );
    }
    Ok(())
}
