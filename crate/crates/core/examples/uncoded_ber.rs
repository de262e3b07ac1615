//! Monte Carlo BER of the uncoded SISO chain against the closed form.
//!
//! Run with `cargo run --release --example uncoded_ber`.

use gfdm_lab::analysis::{
    ebn0_for_ber, run_ber_experiment, theoretical_ber_awgn, BerExperiment, StopRule,
    TheoreticalBerParams,
};
use gfdm_lab::link::ChainConfig;

fn main() -> gfdm_lab::Result<()> {
    let chain = ChainConfig::reference();
    let theory = TheoreticalBerParams::from_chain(&chain)?;
    let mut exp = BerExperiment::new(chain, vec![8.0, 10.0, 12.0, 14.0, 16.0]);
    exp.stop = StopRule {
        min_errors: 500,
        max_bits: 20_000_000,
        min_bits: 0,
    };
    for r in run_ber_experiment(&exp, 1)? {
        let th = theoretical_ber_awgn(r.ebn0_db, &theory);
        // Horizontal distance to the theory curve at the measured BER.
        let gap = ebn0_for_ber(|x| theoretical_ber_awgn(x, &theory), r.ber, -10.0, 40.0)
            .map(|x| r.ebn0_db - x);
        println!(
            "{:>5.1} dB  sim {:.3e}  theory {:.3e}  gap {:+.2} dB  ({} frames)",
            r.ebn0_db,
            r.ber,
            th,
            gap.unwrap_or(f64::NAN),
            r.frames
        );
    }
    Ok(())
}
