//! AWGN, Eb/N0 bookkeeping and flat MIMO channels.
//!
//! Convention: `SNR = mu * R_c * Eb/N0` per data symbol. The frame
//! efficiency does not enter the conversion; it appears in the theoretical
//! `Gamma` instead. For simulation the noise variance is set from the
//! nominal transmitted energy of a whole frame (preambles and guards
//! included) divided over its information bits, so overheads cost exactly
//! the factor `eta`.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_len, invalid, Result};
use crate::Complex64;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Linear symbol SNR for a given Eb/N0. `eta` is range-checked only.
pub fn ebn0_to_snr(ebn0_db: f64, bits_per_symbol: usize, code_rate: f64, eta: f64) -> Result<f64> {
    if bits_per_symbol == 0 {
        return Err(invalid("bits_per_symbol", "must be at least 1"));
    }
    if !(code_rate > 0.0 && code_rate <= 1.0) {
        return Err(invalid(
            "code_rate",
            format!("{code_rate} is outside (0, 1]"),
        ));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid("eta", format!("{eta} is outside (0, 1]")));
    }
    if !ebn0_db.is_finite() {
        return Err(invalid("ebn0_db", "must be finite"));
    }
    Ok(db_to_linear(ebn0_db) * bits_per_symbol as f64 * code_rate)
}

/// Complex noise variance giving `ebn0_db` when `frame_energy` is spread over
/// `info_bits` information bits.
pub fn noise_variance(frame_energy: f64, info_bits: usize, ebn0_db: f64) -> Result<f64> {
    if !(frame_energy > 0.0) || info_bits == 0 {
        return Err(invalid(
            "frame energy",
            "needs positive energy and at least one information bit",
        ));
    }
    Ok(frame_energy / (info_bits as f64 * db_to_linear(ebn0_db)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub ebn0_db: f64,
    pub snr_db: f64,
    /// Per complex sample; half in each quadrature.
    pub noise_variance: f64,
    /// When false, the channel-estimation preambles stay noise-free.
    pub preamble_noise: bool,
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        Self {
            ebn0_db: f64::INFINITY,
            snr_db: f64::INFINITY,
            noise_variance: 0.0,
            preamble_noise: true,
        }
    }
}

/// Adds circularly symmetric complex Gaussian noise in place.
pub fn add_awgn<R: Rng + ?Sized>(signal: &mut [Complex64], noise_variance: f64, rng: &mut R) {
    if noise_variance <= 0.0 {
        return;
    }
    let s = (noise_variance / 2.0).sqrt();
    for v in signal.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v += Complex64::new(re * s, im * s);
    }
}

pub fn awgn<R: Rng + ?Sized>(
    signal: &[Complex64],
    noise_variance: f64,
    rng: &mut R,
) -> Vec<Complex64> {
    let mut out = signal.to_vec();
    add_awgn(&mut out, noise_variance, rng);
    out
}

/// Frequency-flat channel, `h[rx][tx]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatChannel {
    h: Vec<Vec<Complex64>>,
}

impl FlatChannel {
    pub fn new(h: Vec<Vec<Complex64>>) -> Result<Self> {
        let n_tx = h.first().map_or(0, |r| r.len());
        if h.is_empty() || n_tx == 0 {
            return Err(invalid(
                "channel",
                "needs at least one rx and one tx antenna",
            ));
        }
        for row in &h {
            check_len("channel row (tx antennas)", n_tx, row.len())?;
        }
        Ok(Self { h })
    }

    pub fn siso(h: Complex64) -> Self {
        Self { h: vec![vec![h]] }
    }

    pub fn identity(n: usize) -> Self {
        let h = (0..n)
            .map(|r| {
                (0..n)
                    .map(|t| Complex64::new(if r == t { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        Self { h }
    }

    /// 2x2 channel with unit-modulus gains and independent uniform phases.
    pub fn random_unit_phase_2x2<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let h = (0..2)
            .map(|_| {
                (0..2)
                    .map(|_| {
                        Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
                    })
                    .collect()
            })
            .collect();
        Self { h }
    }

    pub fn n_rx(&self) -> usize {
        self.h.len()
    }

    pub fn n_tx(&self) -> usize {
        self.h[0].len()
    }

    pub fn gain(&self, rx: usize, tx: usize) -> Complex64 {
        self.h[rx][tx]
    }
}

/// Mixes the transmit streams through `h` and adds noise on every receive
/// antenna. Samples inside `quiet` get no noise unless
/// `noise.preamble_noise` is set.
pub fn apply_channel<R: Rng + ?Sized>(
    tx: &[Vec<Complex64>],
    h: &FlatChannel,
    noise: &NoiseSpec,
    quiet: Range<usize>,
    rng: &mut R,
) -> Result<Vec<Vec<Complex64>>> {
    check_len("transmit streams", h.n_tx(), tx.len())?;
    let len = tx[0].len();
    for s in tx {
        check_len("transmit stream", len, s.len())?;
    }
    let mut out = Vec::with_capacity(h.n_rx());
    for r in 0..h.n_rx() {
        let mut y = vec![Complex64::new(0.0, 0.0); len];
        for (t, s) in tx.iter().enumerate() {
            let g = h.gain(r, t);
            for (o, &v) in y.iter_mut().zip(s) {
                *o += g * v;
            }
        }
        if noise.preamble_noise || quiet.is_empty() {
            add_awgn(&mut y, noise.noise_variance, rng);
        } else {
            let q = quiet.start.min(len)..quiet.end.min(len);
            add_awgn(&mut y[..q.start], noise.noise_variance, rng);
            add_awgn(&mut y[q.end..], noise.noise_variance, rng);
        }
        out.push(y);
    }
    Ok(out)
}

/// Independent generator for frame `frame` of sweep point `point`.
pub fn frame_rng(master_seed: u64, point: u32, frame: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((point as u64) << 32) | frame as u64);
    rng
}
