//! Closed-form BER, the Monte Carlo runner and spectral measurements.

use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::channel::{db_to_linear, frame_rng};
use crate::error::{invalid, Result};
use crate::framing::{
    add_cp_cs_window, assemble_frame, FrameConfig, FrameLayout, TransferMode, WindowKind,
};
use crate::link::{Antennas, ChainConfig, Link};
use crate::mapping::Constellation;
use crate::waveform::{DataGrid, GfdmModem, GfdmParams, PulseKind};
use crate::{Complex64, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TheoryMode {
    #[default]
    Siso,
    /// Two transmit antennas at half power each: the SISO curve 3 dB earlier.
    Mimo2x2,
}

impl From<Antennas> for TheoryMode {
    fn from(a: Antennas) -> Self {
        match a {
            Antennas::Siso => TheoryMode::Siso,
            Antennas::Mimo2x2 => TheoryMode::Mimo2x2,
        }
    }
}

/// Inputs of the approximate ZF-GFDM BER under AWGN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoreticalBerParams {
    pub qam_order: usize,
    /// Frame efficiency.
    pub eta: f64,
    /// Noise enhancement factor.
    pub xi: f64,
    pub mode: TheoryMode,
}

impl TheoreticalBerParams {
    pub fn new(qam_order: usize, eta: f64, xi: f64, mode: TheoryMode) -> Result<Self> {
        let l = (qam_order as f64).sqrt().round() as usize;
        if l < 2 || l * l != qam_order || !l.is_power_of_two() {
            return Err(invalid(
                "qam_order",
                format!("{qam_order} is not a square power-of-two constellation"),
            ));
        }
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(invalid("eta", format!("{eta} is outside (0, 1]")));
        }
        if !(xi >= 1.0 - 1e-12) || !xi.is_finite() {
            return Err(invalid("xi", format!("{xi} is below 1")));
        }
        Ok(Self {
            qam_order,
            eta,
            xi,
            mode,
        })
    }

    /// Efficiency and NEF of a chain configuration.
    pub fn from_chain(cfg: &ChainConfig) -> Result<Self> {
        let modem = GfdmModem::from_params(&cfg.waveform)?;
        let c = Constellation::new(cfg.qam_order)?;
        let layout = FrameLayout::new(
            &cfg.frame,
            cfg.waveform.block_len(),
            cfg.waveform.symbols_per_block(),
            c.bits_per_symbol(),
            None,
        )?;
        Self::new(
            cfg.qam_order,
            layout.frame_efficiency(),
            modem.noise_enhancement_factor(),
            cfg.antennas.into(),
        )
    }

    /// 64-QAM with the default frame and waveform.
    pub fn reference() -> Result<Self> {
        Self::from_chain(&ChainConfig::reference())
    }

    pub fn with_mode(mut self, mode: TheoryMode) -> Self {
        self.mode = mode;
        self
    }

    fn side(&self) -> f64 {
        (self.qam_order as f64).sqrt()
    }

    fn bits_per_symbol(&self) -> f64 {
        (self.qam_order as f64).log2()
    }

    /// Effective Eb/N0 in dB seen by the SISO formula.
    fn siso_ebn0_db(&self, ebn0_db: f64) -> f64 {
        match self.mode {
            TheoryMode::Siso => ebn0_db,
            TheoryMode::Mimo2x2 => ebn0_db + 3.0,
        }
    }

    /// Symbol SNR after ZF, `eta * mu * Eb/N0 / xi`.
    pub fn effective_symbol_snr(&self, ebn0_db: f64) -> f64 {
        self.eta * self.bits_per_symbol() * db_to_linear(self.siso_ebn0_db(ebn0_db)) / self.xi
    }

    /// `Gamma = 3 eta SNR / (2 (L^2 - 1) xi)` with `SNR = mu Eb/N0`.
    pub fn gamma(&self, ebn0_db: f64) -> f64 {
        let l = self.side();
        3.0 * self.effective_symbol_snr(ebn0_db) / (2.0 * (l * l - 1.0))
    }
}

/// Approximate BER of Gray square QAM after ZF-GFDM in AWGN:
/// `2(L-1)/(mu L) erfc(sqrt(Gamma)) - ((L-1)/(sqrt(mu) L))^2 erfc^2(sqrt(Gamma))`.
pub fn theoretical_ber_awgn(ebn0_db: f64, params: &TheoreticalBerParams) -> f64 {
    let l = params.side();
    let mu = params.bits_per_symbol();
    let e = libm::erfc(params.gamma(ebn0_db).sqrt());
    let a = 2.0 * (l - 1.0) / (mu * l);
    let b = (l - 1.0) / (mu.sqrt() * l);
    a * e - b * b * e * e
}

/// Where the frame efficiency enters the SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaPlacement {
    Multiply,
    Ignore,
    Divide,
}

/// How the noise enhancement factor enters the SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiPlacement {
    Divide,
    Ignore,
    Multiply,
}

/// One way of turning Eb/N0 into `Gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoryConvention {
    pub eta: EtaPlacement,
    pub xi: XiPlacement,
}

impl TheoryConvention {
    /// The convention used by [`theoretical_ber_awgn`].
    pub const CALIBRATED: Self = Self {
        eta: EtaPlacement::Multiply,
        xi: XiPlacement::Divide,
    };

    pub fn all() -> Vec<Self> {
        let mut v = Vec::new();
        for eta in [
            EtaPlacement::Multiply,
            EtaPlacement::Ignore,
            EtaPlacement::Divide,
        ] {
            for xi in [
                XiPlacement::Divide,
                XiPlacement::Ignore,
                XiPlacement::Multiply,
            ] {
                v.push(Self { eta, xi });
            }
        }
        v
    }
}

/// The approximate BER under an arbitrary convention.
pub fn theoretical_ber_with(
    ebn0_db: f64,
    params: &TheoreticalBerParams,
    conv: TheoryConvention,
) -> f64 {
    let eta = match conv.eta {
        EtaPlacement::Multiply => params.eta,
        EtaPlacement::Ignore => 1.0,
        EtaPlacement::Divide => 1.0 / params.eta,
    };
    let xi = match conv.xi {
        XiPlacement::Divide => params.xi,
        XiPlacement::Ignore => 1.0,
        XiPlacement::Multiply => 1.0 / params.xi,
    };
    let p = TheoreticalBerParams { eta, xi, ..*params };
    theoretical_ber_awgn(ebn0_db, &p)
}

/// Result of fitting a convention to reference `(ebn0_db, ber)` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub convention: TheoryConvention,
    /// Root-mean-square of `log10(model / reference)`.
    pub rms_log_error: f64,
    pub max_relative_error: f64,
}

/// Picks the convention with the smallest log-domain error against
/// `reference`.
pub fn calibrate_convention(
    reference: &[(f64, f64)],
    params: &TheoreticalBerParams,
) -> Result<Calibration> {
    if reference.is_empty() {
        return Err(invalid("reference points", "none given"));
    }
    if reference.iter().any(|&(e, b)| !e.is_finite() || !(b > 0.0)) {
        return Err(invalid(
            "reference points",
            "need finite Eb/N0 and positive BER",
        ));
    }
    let score = |conv: TheoryConvention| {
        let (mut sq, mut worst) = (0.0, 0.0f64);
        for &(e, b) in reference {
            let m = theoretical_ber_with(e, params, conv);
            let d = if m > 0.0 {
                (m / b).log10()
            } else {
                f64::INFINITY
            };
            sq += d * d;
            worst = worst.max((m / b - 1.0).abs());
        }
        Calibration {
            convention: conv,
            rms_log_error: (sq / reference.len() as f64).sqrt(),
            max_relative_error: worst,
        }
    };
    Ok(TheoryConvention::all()
        .into_iter()
        .map(score)
        .min_by(|a, b| a.rms_log_error.total_cmp(&b.rms_log_error))
        .expect("at least one convention"))
}

/// Exact BER of Gray square `order`-QAM at symbol SNR `es_n0` (linear).
pub fn gray_qam_ber_exact(order: usize, es_n0: f64) -> f64 {
    let side = (order as f64).sqrt().round() as usize;
    let bits_axis = side.trailing_zeros() as usize;
    let arg = (3.0 * es_n0 / (2.0 * (order as f64 - 1.0))).sqrt();
    let mut total = 0.0;
    for k in 1..=bits_axis {
        let p = 1usize << (k - 1);
        let upper = side - side / (1 << k);
        let mut pk = 0.0;
        for i in 0..upper {
            let q = i * p / side;
            let sign = if q.is_multiple_of(2) { 1.0 } else { -1.0 };
            let w = p as f64 - ((i * p) as f64 / side as f64 + 0.5).floor();
            pk += sign * w * libm::erfc((2 * i + 1) as f64 * arg);
        }
        total += pk / side as f64;
    }
    total / bits_axis as f64
}

/// The exact Gray-QAM BER under the same SNR convention as
/// [`theoretical_ber_awgn`].
pub fn theoretical_ber_exact(ebn0_db: f64, params: &TheoreticalBerParams) -> f64 {
    gray_qam_ber_exact(params.qam_order, params.effective_symbol_snr(ebn0_db))
}

/// Eb/N0 at which `curve` falls to `ber`, by bisection over `[lo, hi]` dB.
pub fn ebn0_for_ber(curve: impl Fn(f64) -> f64, ber: f64, lo: f64, hi: f64) -> Option<f64> {
    let (mut a, mut b) = (lo, hi);
    if !(curve(a) >= ber && curve(b) <= ber) {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if curve(m) > ber {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Eb/N0 where a measured curve first falls through `ber`, interpolating
/// log10(BER) linearly between neighbouring points. `curve` is sorted by
/// Eb/N0; zero-BER points act as the floor of the plot and are skipped.
pub fn interpolate_crossing(curve: &[(f64, f64)], ber: f64) -> Option<f64> {
    if !(ber > 0.0) {
        return None;
    }
    let pts: Vec<(f64, f64)> = curve.iter().copied().filter(|p| p.1 > 0.0).collect();
    let t = ber.log10();
    for w in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= ber && y1 <= ber {
            let (l0, l1) = (y0.log10(), y1.log10());
            if l0 == l1 {
                return Some(x0);
            }
            return Some(x0 + (t - l0) / (l1 - l0) * (x1 - x0));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Enough errors were collected.
    Errors,
    /// The bit budget ran out first.
    Budget,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Errors => "errors",
            StopReason::Budget => "budget",
        }
    }
}

impl FromStr for StopReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "errors" => Ok(StopReason::Errors),
            "budget" => Ok(StopReason::Budget),
            other => Err(invalid("stop_reason", format!("`{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub ebn0_db: f64,
    pub bits_sent: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub frames: u64,
    pub stop_reason: StopReason,
}

/// A point stops at `min_errors` errors (once `min_bits` are in) or at
/// `max_bits`, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_bits: u64,
    pub min_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 100,
            max_bits: 100_000_000,
            min_bits: 0,
        }
    }
}

impl StopRule {
    pub fn validate(&self) -> Result<()> {
        if self.max_bits == 0 {
            return Err(invalid("max_bits", "must be positive"));
        }
        if self.min_bits > self.max_bits {
            return Err(invalid("min_bits", "exceeds max_bits"));
        }
        Ok(())
    }
}

/// A Monte Carlo sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BerExperiment {
    pub chain: ChainConfig,
    pub ebn0_db: Vec<f64>,
    pub stop: StopRule,
    /// Frames simulated per parallel batch. Results depend on this value but
    /// not on the number of worker threads.
    pub batch_frames: usize,
}

impl BerExperiment {
    pub fn new(chain: ChainConfig, ebn0_db: Vec<f64>) -> Self {
        Self {
            chain,
            ebn0_db,
            stop: StopRule::default(),
            batch_frames: 16,
        }
    }
}

/// Runs every sweep point; frame `f` of point `p` draws from substream
/// `(p, f)` of `seed`.
pub fn run_ber_experiment(exp: &BerExperiment, seed: u64) -> Result<Vec<BerRecord>> {
    exp.stop.validate()?;
    if exp.batch_frames == 0 {
        return Err(invalid("batch_frames", "must be positive"));
    }
    for &e in &exp.ebn0_db {
        if e.is_nan() || e == f64::NEG_INFINITY {
            return Err(invalid("ebn0_db", format!("{e} is not a usable Eb/N0")));
        }
    }
    let link = Link::new(&exp.chain)?;
    exp.ebn0_db
        .iter()
        .enumerate()
        .map(|(p, &e)| run_point(&link, e, p as u32, seed, &exp.stop, exp.batch_frames))
        .collect()
}

fn run_point(
    link: &Link,
    ebn0_db: f64,
    point: u32,
    seed: u64,
    stop: &StopRule,
    batch: usize,
) -> Result<BerRecord> {
    let noise = link.noise_spec(ebn0_db)?;
    let (mut bits, mut errors, mut frames) = (0u64, 0u64, 0u64);
    let mut next = 0u32;
    loop {
        let outcomes: Vec<_> = (next..next + batch as u32)
            .into_par_iter()
            .map(|f| link.simulate_frame(&noise, &mut frame_rng(seed, point, f)))
            .collect::<Result<_>>()?;
        next += batch as u32;
        for o in outcomes {
            bits += o.bits;
            errors += o.errors;
            frames += 1;
            let reason = if errors >= stop.min_errors && bits >= stop.min_bits {
                Some(StopReason::Errors)
            } else if bits >= stop.max_bits {
                Some(StopReason::Budget)
            } else {
                None
            };
            if let Some(stop_reason) = reason {
                return Ok(BerRecord {
                    ebn0_db,
                    bits_sent: bits,
                    bit_errors: errors,
                    ber: errors as f64 / bits as f64,
                    frames,
                    stop_reason,
                });
            }
        }
    }
}

/// Lowest PSD value reported, in dB relative to the reference.
pub const PSD_FLOOR_DB: f64 = -300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectralWindow {
    #[default]
    Hann,
    Rect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WelchConfig {
    pub sample_rate: f64,
    pub segment_len: usize,
    /// Samples shared by consecutive segments.
    pub overlap: usize,
    pub window: SpectralWindow,
}

impl WelchConfig {
    pub fn new(sample_rate: f64, segment_len: usize) -> Self {
        Self {
            sample_rate,
            segment_len,
            overlap: segment_len / 2,
            window: SpectralWindow::Hann,
        }
    }
}

/// What 0 dBc refers to.
#[derive(Debug, Clone, PartialEq)]
pub enum PsdReference {
    /// The largest bin.
    Peak,
    /// Mean linear PSD over the union of `(lo, hi)` Hz bands.
    BandMean(Vec<(f64, f64)>),
    /// A fixed absolute PSD level (power per Hz).
    Absolute(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    /// Ascending, from `-fs/2`.
    pub freq_hz: Vec<f64>,
    pub power_dbc: Vec<f64>,
    pub sample_rate: f64,
    pub segment_len: usize,
    pub segments: usize,
    /// Absolute PSD level (power per Hz) that maps to 0 dBc.
    pub reference: f64,
}

impl PsdEstimate {
    /// PSD in power per Hz.
    pub fn absolute(&self) -> Vec<f64> {
        self.power_dbc
            .iter()
            .map(|d| self.reference * 10f64.powf(d / 10.0))
            .collect()
    }

    /// Integral of the PSD over frequency.
    pub fn total_power(&self) -> f64 {
        let df = self.sample_rate / self.segment_len as f64;
        self.absolute().iter().sum::<f64>() * df
    }

    fn bins_in(&self, lo: f64, hi: f64) -> impl Iterator<Item = usize> + '_ {
        self.freq_hz
            .iter()
            .enumerate()
            .filter(move |(_, &f)| f >= lo && f <= hi)
            .map(|(i, _)| i)
    }
}

/// Welch periodogram, `|FFT(x w)|^2 / (fs sum w^2)` averaged over segments.
pub fn estimate_psd(
    signal: &[Complex64],
    cfg: &WelchConfig,
    reference: &PsdReference,
) -> Result<PsdEstimate> {
    let l = cfg.segment_len;
    if l < 2 {
        return Err(invalid("segment_len", "needs at least two samples"));
    }
    if cfg.overlap >= l {
        return Err(invalid(
            "overlap",
            format!("{} must be below the segment length {l}", cfg.overlap),
        ));
    }
    if signal.len() < l {
        return Err(invalid(
            "signal",
            format!(
                "{} samples is shorter than one segment of {l}",
                signal.len()
            ),
        ));
    }
    if !(cfg.sample_rate > 0.0) {
        return Err(invalid("sample_rate", "must be positive"));
    }
    let w: Vec<f64> = match cfg.window {
        SpectralWindow::Hann => (0..l)
            .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / l as f64).cos())
            .collect(),
        SpectralWindow::Rect => vec![1.0; l],
    };
    let wss: f64 = w.iter().map(|v| v * v).sum();
    let fft = FftPlanner::new().plan_fft_forward(l);
    let hop = l - cfg.overlap;
    let mut acc = vec![0.0; l];
    let mut segments = 0;
    let mut buf = vec![Complex64::new(0.0, 0.0); l];
    let mut start = 0;
    while start + l <= signal.len() {
        for (b, (x, wv)) in buf.iter_mut().zip(signal[start..start + l].iter().zip(&w)) {
            *b = x * wv;
        }
        fft.process(&mut buf);
        for (a, v) in acc.iter_mut().zip(&buf) {
            *a += v.norm_sqr();
        }
        segments += 1;
        start += hop;
    }
    let scale = 1.0 / (segments as f64 * cfg.sample_rate * wss);
    let mut freq_hz = Vec::with_capacity(l);
    let mut lin = Vec::with_capacity(l);
    for i in 0..l {
        let k = (i + l - l / 2) % l;
        let signed = k as f64 - if k >= l - l / 2 { l as f64 } else { 0.0 };
        freq_hz.push(signed * cfg.sample_rate / l as f64);
        lin.push(acc[k] * scale);
    }
    let reference = match reference {
        PsdReference::Peak => lin.iter().copied().fold(0.0, f64::max),
        PsdReference::Absolute(v) => *v,
        PsdReference::BandMean(bands) => {
            let mut sum = 0.0;
            let mut n = 0usize;
            for (i, &f) in freq_hz.iter().enumerate() {
                if bands.iter().any(|&(lo, hi)| f >= lo && f <= hi) {
                    sum += lin[i];
                    n += 1;
                }
            }
            if n == 0 {
                return Err(invalid("reference band", "contains no frequency bin"));
            }
            sum / n as f64
        }
    };
    if !(reference > 0.0) {
        return Err(invalid("reference", "the reference level has no power"));
    }
    let power_dbc = lin
        .iter()
        .map(|v| (10.0 * (v / reference).log10()).max(PSD_FLOOR_DB))
        .collect();
    Ok(PsdEstimate {
        freq_hz,
        power_dbc,
        sample_rate: cfg.sample_rate,
        segment_len: l,
        segments,
        reference,
    })
}

/// Linear mean of the PSD over the central 10% of `notch` (Hz), in dBc.
pub fn oob_notch_depth(psd: &PsdEstimate, notch: (f64, f64)) -> Result<f64> {
    let (lo, hi) = notch;
    if !(hi > lo) {
        return Err(invalid("notch band", "is empty"));
    }
    let fmax = psd.sample_rate / 2.0;
    if lo < -fmax || hi > fmax {
        return Err(invalid("notch band", "lies outside the measured range"));
    }
    let c = 0.5 * (lo + hi);
    let half = 0.05 * (hi - lo);
    let bins: Vec<usize> = psd.bins_in(c - half, c + half).collect();
    if bins.is_empty() {
        return Err(invalid(
            "notch band",
            "contains no frequency bin at this resolution",
        ));
    }
    let mean = bins
        .iter()
        .map(|&i| 10f64.powf(psd.power_dbc[i] / 10.0))
        .sum::<f64>()
        / bins.len() as f64;
    Ok((10.0 * mean.log10()).max(PSD_FLOOR_DB))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OobWaveform {
    Gfdm,
    Ofdm,
}

impl FromStr for OobWaveform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gfdm" => Ok(OobWaveform::Gfdm),
            "ofdm" => Ok(OobWaveform::Ofdm),
            other => Err(invalid(
                "waveform",
                format!("`{other}` is not one of gfdm, ofdm"),
            )),
        }
    }
}

/// A notched allocation measured with a Welch PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct OobRecipe {
    pub sample_rate: f64,
    /// Total occupied span, centred on DC.
    pub span_hz: f64,
    /// Switched-off centre of the span; zero for a full allocation.
    pub notch_hz: f64,
    /// GFDM geometry; its subcarrier count also sets the OFDM grid. The
    /// active mask is replaced by [`OobRecipe::allocation`].
    pub waveform: GfdmParams,
    /// GFDM guards and window.
    pub frame: FrameConfig,
    /// Core samples of signal to generate, rounded up to whole blocks.
    pub samples: usize,
    pub segment_len: usize,
    pub qam_order: usize,
    pub seed: u64,
}

impl Default for OobRecipe {
    fn default() -> Self {
        Self {
            sample_rate: 48e6,
            span_hz: 36e6,
            notch_hz: 12e6,
            waveform: GfdmParams::reference(),
            frame: FrameConfig::reference(GfdmParams::reference().block_len()),
            samples: 460_800,
            segment_len: 4096,
            qam_order: 64,
            seed: 1,
        }
    }
}

impl OobRecipe {
    pub fn subcarriers(&self) -> usize {
        self.waveform.subcarriers
    }

    pub fn spacing(&self) -> f64 {
        self.sample_rate / self.subcarriers() as f64
    }

    /// Subcarrier `k` (at `k` or `k - K` spacings) is on when its band lies
    /// inside the span and outside the notch.
    pub fn allocation(&self) -> Vec<bool> {
        let k = self.subcarriers() as f64;
        (0..self.subcarriers())
            .map(|i| {
                let c = if (i as f64) < k / 2.0 {
                    i as f64
                } else {
                    i as f64 - k
                };
                let f = (c + 0.5).abs() * self.spacing();
                f < self.span_hz / 2.0 && f > self.notch_hz / 2.0
            })
            .collect()
    }

    /// Occupied bands, four subcarriers away from every edge.
    pub fn reference_bands(&self) -> Vec<(f64, f64)> {
        let g = 4.0 * self.spacing();
        let (a, b) = (self.notch_hz / 2.0 + g, self.span_hz / 2.0 - g);
        if self.notch_hz > 0.0 {
            vec![(-b, -a), (a, b)]
        } else {
            vec![(-b, b)]
        }
    }

    pub fn notch_band(&self) -> Option<(f64, f64)> {
        (self.notch_hz > 0.0).then(|| (-self.notch_hz / 2.0, self.notch_hz / 2.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.span_hz > 0.0 && self.span_hz <= self.sample_rate) {
            return Err(invalid("span_hz", "must lie in (0, sample_rate]"));
        }
        if !(self.notch_hz >= 0.0 && self.notch_hz < self.span_hz) {
            return Err(invalid("notch_hz", "must lie in [0, span_hz)"));
        }
        if self.segment_len < 16 || self.samples < self.segment_len {
            return Err(invalid(
                "segment_len",
                "needs at least one full segment of signal",
            ));
        }
        if !self.allocation().iter().any(|&a| a) {
            return Err(invalid("allocation", "switches every subcarrier off"));
        }
        Ok(())
    }

    /// Waveform and framing used for `kind`: the configured GFDM with its
    /// windowed guards, or CP-OFDM on the same grid (one sub-symbol,
    /// rectangular pulse, CP 32, no CS, no window).
    pub fn chain(&self, kind: OobWaveform) -> Result<(GfdmParams, FrameConfig)> {
        let (params, frame) = match kind {
            OobWaveform::Gfdm => (self.waveform.clone(), self.frame.clone()),
            OobWaveform::Ofdm => {
                let p = GfdmParams::new(self.subcarriers(), 1, PulseKind::Rectangular, 0.0)?;
                let f = FrameConfig {
                    n_cp: 32,
                    n_cs: 0,
                    n_w: 0,
                    window_kind: WindowKind::Rect,
                    ..FrameConfig::reference(p.block_len())
                };
                (p, f)
            }
        };
        let params = params.with_active_mask(self.allocation())?;
        let blocks = self.samples.div_ceil(params.block_len());
        let frame = FrameConfig {
            n_g: blocks,
            n_sync: 0,
            n_chest: 0,
            mode: TransferMode::Continuous,
            ..frame
        };
        Ok((params, frame))
    }
}

/// A continuous stream of randomly loaded blocks.
pub fn oob_signal(kind: OobWaveform, recipe: &OobRecipe) -> Result<Vec<Complex64>> {
    recipe.validate()?;
    let (params, frame) = recipe.chain(kind)?;
    let modem = GfdmModem::from_params(&params)?;
    let c = Constellation::new(recipe.qam_order)?;
    let mu = c.bits_per_symbol();
    let mut rng = frame_rng(recipe.seed, 0, 0);
    let layout = FrameLayout::new(
        &frame,
        params.block_len(),
        params.symbols_per_block(),
        mu,
        None,
    )?;
    let blocks = (0..frame.n_g)
        .map(|_| {
            let bits: Vec<u8> = (0..params.symbols_per_block() * mu)
                .map(|_| rng.random_range(0..2u8))
                .collect();
            let grid = DataGrid::from_active_symbols(&params, &c.map(&bits)?)?;
            add_cp_cs_window(&modem.modulate(&grid.d)?, &frame)
        })
        .collect::<Result<Vec<_>>>()?;
    assemble_frame(&[], &blocks, &frame, &layout)
}

/// PSD normalized to the occupied band and the notch depth, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct OobReport {
    pub psd: PsdEstimate,
    pub notch_dbc: Option<f64>,
}

pub fn oob_measure(kind: OobWaveform, recipe: &OobRecipe) -> Result<OobReport> {
    let x = oob_signal(kind, recipe)?;
    let welch = WelchConfig::new(recipe.sample_rate, recipe.segment_len);
    let psd = estimate_psd(
        &x,
        &welch,
        &PsdReference::BandMean(recipe.reference_bands()),
    )?;
    let notch_dbc = match recipe.notch_band() {
        Some(b) => Some(oob_notch_depth(&psd, b)?),
        None => None,
    };
    Ok(OobReport { psd, notch_dbc })
}
