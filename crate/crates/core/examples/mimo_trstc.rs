//! Time-reversal space-time coding of two GFDM blocks over a random
//! unit-modulus 2x2 channel, then the uncoded 2x2 chain against the
//! 3 dB-shifted closed form.
//!
//! Run with `cargo run --release --example mimo_trstc`.

use gfdm_lab::analysis::{
    run_ber_experiment, theoretical_ber_awgn, BerExperiment, StopRule, TheoreticalBerParams,
};
use gfdm_lab::channel::{frame_rng, FlatChannel};
use gfdm_lab::dft::UnitaryDft;
use gfdm_lab::link::{Antennas, ChainConfig};
use gfdm_lab::mimo::{trstc_combine_equalize, trstc_encode, ChannelEstimate, CsiMode};
use gfdm_lab::Complex64;
use rand::Rng;

fn main() -> gfdm_lab::Result<()> {
    let n = 64;
    let mut rng = frame_rng(5, 0, 0);
    let mut block = || -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect()
    };
    let (x1, x2) = (block(), block());
    let h = FlatChannel::random_unit_phase_2x2(&mut frame_rng(5, 0, 1));
    let enc = trstc_encode(&x1, &x2)?;
    // Noiseless reception of both slots on both antennas.
    let rx = |slot: usize| -> Vec<Vec<Complex64>> {
        (0..2)
            .map(|r| {
                (0..n)
                    .map(|i| {
                        h.gain(r, 0) * enc.block(0, slot)[i] + h.gain(r, 1) * enc.block(1, slot)[i]
                    })
                    .collect()
            })
            .collect()
    };
    let est = ChannelEstimate::from_flat(&h, n, CsiMode::Noiseless);
    let eq = trstc_combine_equalize(&rx(0), &rx(1), &est, &UnitaryDft::new(n))?;
    let err = eq.blocks[0]
        .iter()
        .zip(&x1)
        .chain(eq.blocks[1].iter().zip(&x2))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("noiseless TR-STC recovery, max error {err:.2e}");

    let chain = ChainConfig::reference().with_antennas(Antennas::Mimo2x2);
    let theory = TheoreticalBerParams::from_chain(&chain)?;
    let mut exp = BerExperiment::new(chain, vec![6.0, 8.0, 10.0, 12.0]);
    exp.stop = StopRule {
        min_errors: 500,
        max_bits: 20_000_000,
        min_bits: 0,
    };
    for r in run_ber_experiment(&exp, 2)? {
        println!(
            "{:>5.1} dB  sim {:.3e}  theory {:.3e}",
            r.ebn0_db,
            r.ber,
            theoretical_ber_awgn(r.ebn0_db, &theory)
        );
    }
    Ok(())
}
