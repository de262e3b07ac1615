//! Frame accounting for the reference layout and a single-block frame.
//!
//! Run with `cargo run --example frame_layout`.

use gfdm_lab::framing::{FrameConfig, FrameLayout};
use gfdm_lab::link::{ChainConfig, Link};
use gfdm_lab::polar::{CodeRate, PolarSpec};

fn report(name: &str, chain: &ChainConfig) -> gfdm_lab::Result<()> {
    let link = Link::new(chain)?;
    let l = link.layout();
    println!(
        "{name}: T_F = {} samples, {} blocks, {} x ({} info / {} coded) bits, pad {} symbols, eta {:.4}, xi {:.4}",
        l.t_f,
        l.n_g,
        l.n_fec,
        l.k_l,
        l.n_l,
        l.pad_symbols,
        link.efficiency(),
        link.noise_enhancement_factor()
    );
    Ok(())
}

fn main() -> gfdm_lab::Result<()> {
    let uncoded = ChainConfig::reference();
    report("uncoded", &uncoded)?;
    let coded = uncoded
        .clone()
        .with_code(Some(PolarSpec::standard(CodeRate::ThreeQuarters)));
    report("coded 3/4", &coded)?;

    // One block, no preambles, no guard beyond the prefix.
    let n = uncoded.waveform.block_len();
    let single = FrameConfig::single_block(n);
    let layout = FrameLayout::new(&single, n, uncoded.waveform.symbols_per_block(), 6, None)?;
    println!(
        "single block: T_F = {} samples, eta {:.4}",
        layout.t_f,
        layout.frame_efficiency()
    );
    Ok(())
}
