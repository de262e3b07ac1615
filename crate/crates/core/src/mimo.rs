//! Time-reversal space-time coding (2x2), LS channel estimation and
//! frequency-domain equalization.
//!
//! Circular time reversal plus conjugation in time is conjugation per DFT
//! bin, so the block pair `(x1, x2)` sent as
//!
//! ```text
//! antenna 1:  x1                      x2
//! antenna 2: -conj(rev(x2))           conj(rev(x1))
//! ```
//!
//! is an Alamouti code on every bin. Both antennas are scaled by `1/sqrt(2)`
//! so the total transmit power matches a single antenna.

use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use crate::dft::UnitaryDft;
use crate::error::{check_len, invalid, Result};
use crate::framing::Prbs;
use crate::waveform::{GfdmParams, PrototypePulse};
use crate::{Complex64, Error};

/// Denominators below this erase the bin.
pub const ERASURE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CsiMode {
    /// Preambles are received without noise; the estimate equals the channel.
    #[default]
    Noiseless,
    /// Preambles see the same noise as the data.
    Noisy,
}

impl FromStr for CsiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "noiseless" | "perfect" => Ok(CsiMode::Noiseless),
            "noisy" => Ok(CsiMode::Noisy),
            other => Err(invalid(
                "csi",
                format!("`{other}` is not one of noiseless, perfect, noisy"),
            )),
        }
    }
}

/// `x[<-n>_N]`.
pub fn reverse_circular(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n).map(|i| x[(n - i) % n]).collect()
}

/// Two antenna streams covering a pair of block slots.
#[derive(Debug, Clone, PartialEq)]
pub struct StcFramePayload {
    pub ant1: Vec<Complex64>,
    pub ant2: Vec<Complex64>,
}

impl StcFramePayload {
    pub fn block_len(&self) -> usize {
        self.ant1.len() / 2
    }

    /// Block transmitted by `antenna` (0 or 1) in `slot` (0 or 1).
    pub fn block(&self, antenna: usize, slot: usize) -> &[Complex64] {
        let n = self.block_len();
        let s = if antenna == 0 { &self.ant1 } else { &self.ant2 };
        &s[slot * n..(slot + 1) * n]
    }
}

pub fn trstc_encode(x1: &[Complex64], x2: &[Complex64]) -> Result<StcFramePayload> {
    check_len("second TR-STC block", x1.len(), x2.len())?;
    let s = FRAC_1_SQRT_2;
    let ant1 = x1.iter().chain(x2).map(|v| v * s).collect();
    let ant2 = reverse_circular(x2)
        .into_iter()
        .map(|v| -v.conj() * s)
        .chain(reverse_circular(x1).into_iter().map(|v| v.conj() * s))
        .collect();
    Ok(StcFramePayload { ant1, ant2 })
}

/// Per-bin channel estimate, indexed `(rx, tx, bin)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    n_rx: usize,
    n_tx: usize,
    bins: usize,
    h: Vec<Complex64>,
    usable: Vec<bool>,
    pub mode: CsiMode,
}

impl ChannelEstimate {
    /// The flat channel `h[rx][tx]` repeated on every bin.
    pub fn from_flat(h: &crate::channel::FlatChannel, bins: usize, mode: CsiMode) -> Self {
        let (n_rx, n_tx) = (h.n_rx(), h.n_tx());
        let mut v = Vec::with_capacity(n_rx * n_tx * bins);
        for r in 0..n_rx {
            for t in 0..n_tx {
                v.extend(std::iter::repeat_n(h.gain(r, t), bins));
            }
        }
        Self {
            n_rx,
            n_tx,
            bins,
            h: v,
            usable: vec![true; bins],
            mode,
        }
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn get(&self, rx: usize, tx: usize, bin: usize) -> Complex64 {
        self.h[(rx * self.n_tx + tx) * self.bins + bin]
    }

    /// Bins the preamble actually measured.
    pub fn is_usable(&self, bin: usize) -> bool {
        self.usable[bin]
    }

    fn response(&self, rx: usize, tx: usize) -> &[Complex64] {
        let s = (rx * self.n_tx + tx) * self.bins;
        &self.h[s..s + self.bins]
    }
}

/// Bins where the active subcarriers put any energy.
pub fn occupied_bins(params: &GfdmParams) -> Result<Vec<bool>> {
    let pulse = PrototypePulse::new(params)?;
    let n = params.block_len();
    let m = params.subsymbols;
    let g = UnitaryDft::new(n).forward_vec(&pulse.samples);
    let peak = g.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let mut occ = vec![false; n];
    for k in (0..params.subcarriers).filter(|&k| params.is_active(k)) {
        for (q, v) in g.iter().enumerate() {
            if v.norm_sqr() > 1e-12 * peak {
                occ[(q + k * m) % n] = true;
            }
        }
    }
    Ok(occ)
}

/// Known preamble cores for one frame layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Preambles {
    /// Synchronization preambles, unused by the receiver.
    pub sync: Vec<Vec<Complex64>>,
    /// Channel-estimation preambles, time domain.
    pub chest: Vec<Vec<Complex64>>,
    /// Their unitary DFTs.
    pub chest_freq: Vec<Vec<Complex64>>,
}

impl Preambles {
    /// Pseudo-random QPSK on the occupied DFT bins, scaled so the mean sample
    /// power equals the data power of a block, `symbols_per_block / N`.
    pub fn new(params: &GfdmParams, n_sync: usize, n_chest: usize) -> Result<Self> {
        let n = params.block_len();
        let power = params.symbols_per_block() as f64 / n as f64;
        let occ = occupied_bins(params)?;
        let n_occ = occ.iter().filter(|&&o| o).count();
        let dft = UnitaryDft::new(n);
        let qpsk = |b0: u8, b1: u8| {
            Complex64::new(1.0 - 2.0 * b0 as f64, 1.0 - 2.0 * b1 as f64) * FRAC_1_SQRT_2
        };
        let mut prbs = Prbs::new(0x1D_2C3B)?;
        let amp = if n_occ == 0 {
            0.0
        } else {
            (power * n as f64 / n_occ as f64).sqrt()
        };
        let mut spectrum = || -> Vec<Complex64> {
            occ.iter()
                .map(|&o| {
                    let p = qpsk(prbs.next_bit(), prbs.next_bit());
                    if o {
                        p * amp
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        };
        let sync = (0..n_sync).map(|_| dft.inverse_vec(&spectrum())).collect();
        let chest_freq: Vec<Vec<Complex64>> = (0..n_chest).map(|_| spectrum()).collect();
        let chest = chest_freq.iter().map(|f| dft.inverse_vec(f)).collect();
        Ok(Self {
            sync,
            chest,
            chest_freq,
        })
    }
}

/// Transmit antenna that sends channel-estimation slot `slot`.
pub fn preamble_antenna(slot: usize, n_tx: usize) -> usize {
    slot % n_tx
}

/// Per-bin least squares from time-multiplexed preambles.
///
/// `received[slot][rx]` holds the received core of slot `slot`, which was
/// sent by antenna `slot % n_tx` with spectrum `known_freq[slot]`. Slots that
/// probe the same antenna are averaged. In noiseless mode the estimate is the
/// injected channel itself.
pub fn estimate_channel(
    received: &[Vec<Vec<Complex64>>],
    known_freq: &[Vec<Complex64>],
    n_tx: usize,
    mode: CsiMode,
    truth: &crate::channel::FlatChannel,
    dft: &UnitaryDft,
) -> Result<ChannelEstimate> {
    let bins = dft.len();
    check_len("channel-estimation slots", known_freq.len(), received.len())?;
    if n_tx == 0 || received.len() < n_tx {
        return Err(invalid(
            "channel estimation",
            format!("{} slots cannot probe {n_tx} antennas", received.len()),
        ));
    }
    let n_rx = received[0].len();
    check_len("channel receive antennas", truth.n_rx(), n_rx)?;
    check_len("channel transmit antennas", truth.n_tx(), n_tx)?;
    let usable: Vec<bool> = (0..bins)
        .map(|b| {
            (0..n_tx).all(|t| {
                known_freq.iter().enumerate().any(|(s, p)| {
                    preamble_antenna(s, n_tx) == t && p[b].norm_sqr() > ERASURE_THRESHOLD
                })
            })
        })
        .collect();
    if mode == CsiMode::Noiseless {
        let mut est = ChannelEstimate::from_flat(truth, bins, mode);
        est.usable = usable;
        return Ok(est);
    }
    let mut h = vec![Complex64::new(0.0, 0.0); n_rx * n_tx * bins];
    let mut count = vec![0usize; n_tx];
    for (s, (slot, p)) in received.iter().zip(known_freq).enumerate() {
        check_len("preamble receive antennas", n_rx, slot.len())?;
        check_len("known preamble", bins, p.len())?;
        let t = preamble_antenna(s, n_tx);
        count[t] += 1;
        for (r, y) in slot.iter().enumerate() {
            let yf = dft.forward_vec(y);
            let dst = &mut h[(r * n_tx + t) * bins..(r * n_tx + t + 1) * bins];
            for b in 0..bins {
                if p[b].norm_sqr() > ERASURE_THRESHOLD {
                    dst[b] += yf[b] / p[b];
                }
            }
        }
    }
    for r in 0..n_rx {
        for (t, &c) in count.iter().enumerate() {
            let scale = 1.0 / c as f64;
            for v in &mut h[(r * n_tx + t) * bins..(r * n_tx + t + 1) * bins] {
                *v *= scale;
            }
        }
    }
    Ok(ChannelEstimate {
        n_rx,
        n_tx,
        bins,
        h,
        usable,
        mode,
    })
}

/// Equalized blocks plus the bins that had to be erased.
#[derive(Debug, Clone, PartialEq)]
pub struct Equalized {
    pub blocks: Vec<Vec<Complex64>>,
    pub erased_bins: Vec<usize>,
}

/// Per-bin Alamouti combining over a block pair and every receive antenna.
///
/// `y1[rx]` and `y2[rx]` are the received cores of the first and second slot.
pub fn trstc_combine_equalize(
    y1: &[Vec<Complex64>],
    y2: &[Vec<Complex64>],
    est: &ChannelEstimate,
    dft: &UnitaryDft,
) -> Result<Equalized> {
    if est.n_tx() != 2 {
        return Err(invalid(
            "channel estimate",
            format!("TR-STC needs 2 transmit antennas, got {}", est.n_tx()),
        ));
    }
    check_len("slot-1 receive antennas", est.n_rx(), y1.len())?;
    check_len("slot-2 receive antennas", est.n_rx(), y2.len())?;
    let bins = est.bins();
    let mut num1 = vec![Complex64::new(0.0, 0.0); bins];
    let mut num2 = vec![Complex64::new(0.0, 0.0); bins];
    let mut den = vec![0.0; bins];
    for r in 0..est.n_rx() {
        check_len("received block", bins, y1[r].len())?;
        check_len("received block", bins, y2[r].len())?;
        let r1 = dft.forward_vec(&y1[r]);
        let r2 = dft.forward_vec(&y2[r]);
        let (h1, h2) = (est.response(r, 0), est.response(r, 1));
        for b in 0..bins {
            num1[b] += h1[b].conj() * r1[b] + h2[b] * r2[b].conj();
            num2[b] += h1[b].conj() * r2[b] - h2[b] * r1[b].conj();
            den[b] += h1[b].norm_sqr() + h2[b].norm_sqr();
        }
    }
    let mut erased = Vec::new();
    let s = std::f64::consts::SQRT_2;
    for b in 0..bins {
        if den[b] < ERASURE_THRESHOLD || !est.is_usable(b) {
            num1[b] = Complex64::new(0.0, 0.0);
            num2[b] = Complex64::new(0.0, 0.0);
            if den[b] < ERASURE_THRESHOLD {
                erased.push(b);
            }
        } else {
            num1[b] *= s / den[b];
            num2[b] *= s / den[b];
        }
    }
    dft.inverse(&mut num1);
    dft.inverse(&mut num2);
    Ok(Equalized {
        blocks: vec![num1, num2],
        erased_bins: erased,
    })
}

/// Single-antenna per-bin division `Y / H`.
pub fn siso_fde_equalize(
    y: &[Complex64],
    est: &ChannelEstimate,
    dft: &UnitaryDft,
) -> Result<Equalized> {
    if est.n_rx() != 1 || est.n_tx() != 1 {
        return Err(invalid(
            "channel estimate",
            "SISO equalization needs a 1x1 estimate",
        ));
    }
    check_len("received block", est.bins(), y.len())?;
    let h = est.response(0, 0);
    let mut f = dft.forward_vec(y);
    let mut erased = Vec::new();
    for (b, v) in f.iter_mut().enumerate() {
        if h[b].norm() < ERASURE_THRESHOLD {
            *v = Complex64::new(0.0, 0.0);
            erased.push(b);
        } else if !est.is_usable(b) {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v /= h[b];
        }
    }
    dft.inverse(&mut f);
    Ok(Equalized {
        blocks: vec![f],
        erased_bins: erased,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{frame_rng, FlatChannel};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn random_block(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn energy(x: &[Complex64]) -> f64 {
        x.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Passes a TR-STC pair through a flat 2x2 channel without noise.
    fn through(h: &FlatChannel, p: &StcFramePayload) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
        let n = p.block_len();
        let mut y = [vec![], vec![]];
        for (slot, ys) in y.iter_mut().enumerate() {
            for r in 0..2 {
                ys.push(
                    (0..n)
                        .map(|i| {
                            h.gain(r, 0) * p.block(0, slot)[i] + h.gain(r, 1) * p.block(1, slot)[i]
                        })
                        .collect(),
                );
            }
        }
        let [a, b] = y;
        (a, b)
    }

    #[test]
    fn zero_second_block() {
        let mut rng = frame_rng(1, 0, 0);
        let x1 = random_block(12, &mut rng);
        let x2 = vec![Complex64::new(0.0, 0.0); 12];
        let p = trstc_encode(&x1, &x2).unwrap();
        assert!(p.block(1, 0).iter().all(|v| v.norm() == 0.0));
        let expect: Vec<Complex64> = reverse_circular(&x1)
            .iter()
            .map(|v| v.conj() * FRAC_1_SQRT_2)
            .collect();
        assert_eq!(p.block(1, 1), &expect[..]);
        assert_eq!(reverse_circular(&x1)[0], x1[0]);
        assert_eq!(reverse_circular(&x1)[1], x1[11]);
    }

    #[test]
    fn power_split_conserves_energy() {
        let mut rng = frame_rng(2, 0, 0);
        let x1 = random_block(64, &mut rng);
        let x2 = random_block(64, &mut rng);
        let p = trstc_encode(&x1, &x2).unwrap();
        assert_abs_diff_eq!(
            energy(&p.ant1) + energy(&p.ant2),
            energy(&x1) + energy(&x2),
            epsilon = 1e-12
        );
        assert!(trstc_encode(&x1, &x2[..10]).is_err());
    }

    #[test]
    fn conj_reversal_is_bin_conjugation() {
        let mut rng = frame_rng(3, 0, 0);
        let dft = UnitaryDft::new(96);
        for _ in 0..10 {
            let x = random_block(96, &mut rng);
            let lhs = dft.forward_vec(
                &reverse_circular(&x)
                    .iter()
                    .map(|v| v.conj())
                    .collect::<Vec<_>>(),
            );
            let rhs: Vec<Complex64> = dft.forward_vec(&x).iter().map(|v| v.conj()).collect();
            assert!(max_err(&lhs, &rhs) < 1e-10);
        }
        let x1 = random_block(96, &mut rng);
        let x2 = random_block(96, &mut rng);
        let p = trstc_encode(&x1, &x2).unwrap();
        let a = dft.forward_vec(p.block(1, 0));
        let b: Vec<Complex64> = dft
            .forward_vec(&x2)
            .iter()
            .map(|v| -v.conj() * FRAC_1_SQRT_2)
            .collect();
        assert!(max_err(&a, &b) < 1e-10);
    }

    #[test]
    fn identity_channel_recovers_blocks() {
        let mut rng = frame_rng(4, 0, 0);
        let dft = UnitaryDft::new(48);
        let x1 = random_block(48, &mut rng);
        let x2 = random_block(48, &mut rng);
        let h = FlatChannel::identity(2);
        let (y1, y2) = through(&h, &trstc_encode(&x1, &x2).unwrap());
        let est = ChannelEstimate::from_flat(&h, 48, CsiMode::Noiseless);
        let eq = trstc_combine_equalize(&y1, &y2, &est, &dft).unwrap();
        assert!(max_err(&eq.blocks[0], &x1) < 1e-12);
        assert!(max_err(&eq.blocks[1], &x2) < 1e-12);
        assert!(eq.erased_bins.is_empty());
    }

    #[test]
    fn unit_modulus_channels_invert_cleanly() {
        let mut rng = frame_rng(5, 0, 0);
        let dft = UnitaryDft::new(64);
        for _ in 0..50 {
            let h = FlatChannel::random_unit_phase_2x2(&mut rng);
            let x1 = random_block(64, &mut rng);
            let x2 = random_block(64, &mut rng);
            let (y1, y2) = through(&h, &trstc_encode(&x1, &x2).unwrap());
            let est = ChannelEstimate::from_flat(&h, 64, CsiMode::Noiseless);
            let eq = trstc_combine_equalize(&y1, &y2, &est, &dft).unwrap();
            assert!(max_err(&eq.blocks[0], &x1) < 1e-9);
            assert!(max_err(&eq.blocks[1], &x2) < 1e-9);
        }
    }

    #[test]
    fn dead_channel_erases_every_bin() {
        let dft = UnitaryDft::new(8);
        let h = FlatChannel::new(vec![vec![Complex64::new(0.0, 0.0); 2]; 2]).unwrap();
        let est = ChannelEstimate::from_flat(&h, 8, CsiMode::Noiseless);
        let y = vec![vec![Complex64::new(1.0, 0.0); 8]; 2];
        let eq = trstc_combine_equalize(&y, &y, &est, &dft).unwrap();
        assert_eq!(eq.erased_bins.len(), 8);
        assert!(eq.blocks[0].iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn siso_unit_and_quarter_turn() {
        let mut rng = frame_rng(6, 0, 0);
        let dft = UnitaryDft::new(32);
        let y = random_block(32, &mut rng);
        let one = ChannelEstimate::from_flat(
            &FlatChannel::siso(Complex64::new(1.0, 0.0)),
            32,
            CsiMode::Noiseless,
        );
        assert!(max_err(&siso_fde_equalize(&y, &one, &dft).unwrap().blocks[0], &y) < 1e-12);
        let j = ChannelEstimate::from_flat(
            &FlatChannel::siso(Complex64::new(0.0, 1.0)),
            32,
            CsiMode::Noiseless,
        );
        let out = siso_fde_equalize(&y, &j, &dft).unwrap();
        let rotated: Vec<Complex64> = y.iter().map(|v| v * Complex64::new(0.0, -1.0)).collect();
        assert!(max_err(&out.blocks[0], &rotated) < 1e-12);
        let zero = ChannelEstimate::from_flat(
            &FlatChannel::siso(Complex64::new(0.0, 0.0)),
            32,
            CsiMode::Noiseless,
        );
        assert_eq!(
            siso_fde_equalize(&y, &zero, &dft)
                .unwrap()
                .erased_bins
                .len(),
            32
        );
    }

    fn small_params() -> GfdmParams {
        GfdmParams::new(16, 3, crate::waveform::PulseKind::RaisedCosine, 0.5).unwrap()
    }

    #[test]
    fn preambles_match_data_power() {
        let p = small_params();
        let pre = Preambles::new(&p, 1, 2).unwrap();
        assert_eq!(pre.chest.len(), 2);
        for c in pre.chest.iter().chain(&pre.sync) {
            assert_abs_diff_eq!(energy(c) / 48.0, 1.0, epsilon = 1e-12);
        }
        assert_ne!(pre.chest[0], pre.chest[1]);
        let notched = small_params().with_active_subcarriers(0..8).unwrap();
        let pre = Preambles::new(&notched, 1, 2).unwrap();
        assert_abs_diff_eq!(energy(&pre.chest[0]) / 48.0, 0.5, epsilon = 1e-12);
        let occ = occupied_bins(&notched).unwrap();
        assert!(occ[0] && occ[22] && !occ[30]);
    }

    #[test]
    fn ls_estimate_of_unit_channel_is_exact_without_noise() {
        let p = small_params();
        let dft = UnitaryDft::new(48);
        let pre = Preambles::new(&p, 0, 2).unwrap();
        let h = FlatChannel::siso(Complex64::new(1.0, 0.0));
        let rx: Vec<Vec<Vec<Complex64>>> = pre.chest.iter().map(|c| vec![c.clone()]).collect();
        let est = estimate_channel(&rx, &pre.chest_freq, 1, CsiMode::Noisy, &h, &dft).unwrap();
        for b in 0..48 {
            assert_abs_diff_eq!((est.get(0, 0, b) - 1.0).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn noiseless_mode_returns_the_injected_channel() {
        let p = small_params();
        let dft = UnitaryDft::new(48);
        let pre = Preambles::new(&p, 0, 2).unwrap();
        let mut rng = frame_rng(7, 0, 0);
        let h = FlatChannel::random_unit_phase_2x2(&mut rng);
        let garbage: Vec<Vec<Vec<Complex64>>> = (0..2)
            .map(|_| vec![random_block(48, &mut rng); 2])
            .collect();
        let est =
            estimate_channel(&garbage, &pre.chest_freq, 2, CsiMode::Noiseless, &h, &dft).unwrap();
        for r in 0..2 {
            for t in 0..2 {
                for b in 0..48 {
                    assert_eq!(est.get(r, t, b), h.gain(r, t));
                }
            }
        }
    }

    #[test]
    fn ls_error_variance_matches_noise_over_preamble_power() {
        let p = small_params();
        let dft = UnitaryDft::new(48);
        let pre = Preambles::new(&p, 0, 1).unwrap();
        let h = FlatChannel::siso(Complex64::new(0.6, -0.8));
        let sigma2 = 0.2;
        let mut rng = frame_rng(8, 0, 0);
        let trials = 10_000;
        let mut acc = vec![0.0; 48];
        for _ in 0..trials {
            let y: Vec<Complex64> = pre.chest[0].iter().map(|v| v * h.gain(0, 0)).collect();
            let y = crate::channel::awgn(&y, sigma2, &mut rng);
            let est =
                estimate_channel(&[vec![y]], &pre.chest_freq, 1, CsiMode::Noisy, &h, &dft).unwrap();
            for (b, a) in acc.iter_mut().enumerate() {
                *a += (est.get(0, 0, b) - h.gain(0, 0)).norm_sqr();
            }
        }
        for (b, a) in acc.iter().enumerate().take(48) {
            let expect = sigma2 / pre.chest_freq[0][b].norm_sqr();
            assert!((a / trials as f64 / expect - 1.0).abs() < 0.06, "bin {b}");
        }
    }
}
