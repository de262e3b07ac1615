//! Closed-form BER of the reference 64-QAM setup, SISO and 2x2 TR-STC,
//! next to the exact Gray-coded QAM BER at the same effective SNR.
//!
//! Run with `cargo run --release --example theory_curve`.

use gfdm_lab::analysis::{
    theoretical_ber_awgn, theoretical_ber_exact, TheoreticalBerParams, TheoryMode,
};

fn main() -> gfdm_lab::Result<()> {
    let siso = TheoreticalBerParams::reference()?;
    let mimo = siso.with_mode(TheoryMode::Mimo2x2);
    println!("eta = {:.6}, xi = {:.6}", siso.eta, siso.xi);
    println!("ebn0_db  siso        siso_exact  mimo");
    for e in 0..=21 {
        let e = e as f64;
        println!(
            "{e:>7}  {:.4e}  {:.4e}  {:.4e}",
            theoretical_ber_awgn(e, &siso),
            theoretical_ber_exact(e, &siso),
            theoretical_ber_awgn(e, &mimo)
        );
    }
    Ok(())
}
