//! Rate-3/4 polar-coded SISO chain around its waterfall.
//!
//! Each frame carries 82 codewords, so expect a few seconds per point.
//! Run with `cargo run --release --example coded_ber`.

use gfdm_lab::analysis::{run_ber_experiment, BerExperiment, StopRule};
use gfdm_lab::link::{ChainConfig, Link};
use gfdm_lab::polar::{CodeRate, PolarSpec};

fn main() -> gfdm_lab::Result<()> {
    let chain =
        ChainConfig::reference().with_code(Some(PolarSpec::standard(CodeRate::ThreeQuarters)));
    let link = Link::new(&chain)?;
    let l = link.layout();
    println!(
        "K_L = {}, n_L = {}, {} codewords per frame",
        l.k_l, l.n_l, l.n_fec
    );
    let mut exp = BerExperiment::new(chain, vec![10.0, 10.5, 11.0, 11.5]);
    exp.stop = StopRule {
        min_errors: 200,
        max_bits: 5_000_000,
        min_bits: 1_000_000,
    };
    for r in run_ber_experiment(&exp, 3)? {
        println!(
            "{:>5.1} dB  ber {:.3e}  ({} errors / {} bits)",
            r.ebn0_db, r.ber, r.bit_errors, r.bits_sent
        );
    }
    Ok(())
}
