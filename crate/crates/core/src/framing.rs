//! Guard insertion, edge windowing, frame layout and PRBS stuffing.
//!
//! Every segment (preamble or GFDM block) goes on air as
//! `[n_w | CP | core | CS | n_w]`, the cyclic extension of the core from
//! `-(n_cp + n_w)` to `len + n_cs + n_w`. Each edge is tapered by a ramp that
//! spans `2 n_w` samples, so it covers the outer `n_w` extension and the first
//! `n_w` samples of the CP (or the last `n_w` of the CS). Adjacent segments
//! overlap-add across those `2 n_w` samples; the pitch between segment starts
//! is therefore `n_cp + len + n_cs` and the core samples are never touched.

use std::f64::consts::PI;
use std::str::FromStr;

use crate::error::{check_len, invalid, Result};
use crate::{Complex64, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowKind {
    /// Raised-cosine ramp to the fourth power.
    #[default]
    Rc4,
    /// Plain raised-cosine ramp.
    Rc,
    /// No taper: a hard switch at the middle of the ramp region.
    Rect,
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rc4" => Ok(WindowKind::Rc4),
            "rc" => Ok(WindowKind::Rc),
            "rect" | "none" => Ok(WindowKind::Rect),
            other => Err(invalid(
                "window_kind",
                format!("`{other}` is not one of rc4, rc, rect"),
            )),
        }
    }
}

/// Data transfer mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransferMode {
    /// Frames follow each other without gaps; idle capacity carries stuffing.
    #[default]
    Continuous,
    /// An isolated frame, including both outer ramps.
    Burst,
}

impl FromStr for TransferMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "continuous" | "cdtm" => Ok(TransferMode::Continuous),
            "burst" | "bdtm" => Ok(TransferMode::Burst),
            other => Err(invalid(
                "transfer_mode",
                format!("`{other}` is not one of continuous, burst"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameConfig {
    pub n_cp: usize,
    pub n_cs: usize,
    pub n_w: usize,
    pub window_kind: WindowKind,
    /// GFDM blocks per frame.
    pub n_g: usize,
    /// Core samples per preamble.
    pub preamble_len: usize,
    pub n_sync: usize,
    pub n_chest: usize,
    pub mode: TransferMode,
}

impl FrameConfig {
    /// CP 32, CS 16, 8-sample rc4 window, sync plus two channel-estimation
    /// preambles and 18 blocks of `block_len` samples.
    pub fn reference(block_len: usize) -> Self {
        Self {
            n_cp: 32,
            n_cs: 16,
            n_w: 8,
            window_kind: WindowKind::Rc4,
            n_g: 18,
            preamble_len: block_len,
            n_sync: 1,
            n_chest: 2,
            mode: TransferMode::Continuous,
        }
    }

    /// Guards and windows only; no preambles.
    pub fn single_block(block_len: usize) -> Self {
        Self {
            n_g: 1,
            n_sync: 0,
            n_chest: 0,
            mode: TransferMode::Burst,
            ..Self::reference(block_len)
        }
    }

    /// No CP, CS, window or preambles.
    pub fn bare(block_len: usize, n_g: usize) -> Self {
        Self {
            n_cp: 0,
            n_cs: 0,
            n_w: 0,
            window_kind: WindowKind::Rect,
            n_g,
            preamble_len: block_len,
            n_sync: 0,
            n_chest: 0,
            mode: TransferMode::Burst,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_w > self.n_cp {
            return Err(invalid(
                "n_w",
                format!("{} exceeds n_cp = {}", self.n_w, self.n_cp),
            ));
        }
        if self.n_w > self.n_cs {
            return Err(invalid(
                "n_w",
                format!("{} exceeds n_cs = {}", self.n_w, self.n_cs),
            ));
        }
        if self.n_sync + self.n_chest > 0 && self.preamble_len == 0 {
            return Err(invalid(
                "preamble_len",
                "must be positive when preambles are present",
            ));
        }
        Ok(())
    }

    pub fn preamble_count(&self) -> usize {
        self.n_sync + self.n_chest
    }

    /// Samples between the starts of consecutive segments with `core` samples.
    pub fn pitch(&self, core: usize) -> usize {
        self.n_cp + core + self.n_cs
    }

    /// On-air length of one segment, `n_w + n_cp + core + n_cs + n_w`.
    pub fn on_air_len(&self, core: usize) -> usize {
        self.pitch(core) + 2 * self.n_w
    }
}

/// Window value at `t` in `[0, 1]` along a rising ramp.
pub fn window_ramp(kind: WindowKind, t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    let rc = 0.5 * (1.0 - (PI * t).cos());
    match kind {
        WindowKind::Rc4 => rc.powi(4),
        WindowKind::Rc => rc,
        WindowKind::Rect => {
            if t >= 0.5 {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// The `2 n_w` rising-ramp samples, taken at `t = (i + 1/2) / (2 n_w)`.
pub fn ramp_samples(cfg: &FrameConfig) -> Vec<f64> {
    let len = 2 * cfg.n_w;
    (0..len)
        .map(|i| window_ramp(cfg.window_kind, (i as f64 + 0.5) / len as f64))
        .collect()
}

/// Cyclic extension plus windowing of one segment.
pub fn add_cp_cs_window(x: &[Complex64], cfg: &FrameConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let n = x.len();
    if n == 0 {
        return Err(invalid("block", "empty block"));
    }
    let lead = cfg.n_cp + cfg.n_w;
    let total = cfg.on_air_len(n);
    let mut out: Vec<Complex64> = (0..total)
        .map(|i| x[(i + n * (lead / n + 1) - lead) % n])
        .collect();
    let ramp = ramp_samples(cfg);
    for (i, &w) in ramp.iter().enumerate() {
        out[i] *= w;
        out[total - 1 - i] *= w;
    }
    Ok(out)
}

/// The central core samples of an on-air segment (ideal timing).
pub fn remove_cp_cs(block: &[Complex64], cfg: &FrameConfig, core: usize) -> Result<Vec<Complex64>> {
    check_len("on-air block", cfg.on_air_len(core), block.len())?;
    let start = cfg.n_w + cfg.n_cp;
    Ok(block[start..start + core].to_vec())
}

/// Frame durations and resource counts.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameLayout {
    /// Preamble segment duration (pitch), samples.
    pub t_p: usize,
    /// GFDM block duration (pitch), samples.
    pub t_g: usize,
    /// Frame duration, samples.
    pub t_f: usize,
    /// Information bits per codeword.
    pub k_l: usize,
    /// Coded bits per codeword.
    pub n_l: usize,
    /// QAM symbols per codeword.
    pub n_qam: usize,
    /// Codewords per frame.
    pub n_fec: usize,
    /// GFDM blocks per frame.
    pub n_g: usize,
    /// Span between resource-block starts; recorded only.
    pub n_on: usize,
    /// Data symbol slots per block.
    pub symbols_per_block: usize,
    /// Slots left over after the last codeword, filled with PRBS symbols.
    pub pad_symbols: usize,
    /// Core samples per block.
    pub block_len: usize,
    pub preamble_len: usize,
    pub n_preambles: usize,
    pub n_w: usize,
}

impl FrameLayout {
    /// `code` is `(K_L, n_L)`; `None` means uncoded, in which case each block
    /// is one "codeword" of `symbols_per_block * bits_per_symbol` bits.
    pub fn new(
        cfg: &FrameConfig,
        block_len: usize,
        symbols_per_block: usize,
        bits_per_symbol: usize,
        code: Option<(usize, usize)>,
    ) -> Result<Self> {
        cfg.validate()?;
        if block_len == 0 {
            return Err(invalid("block_len", "must be positive"));
        }
        if bits_per_symbol == 0 {
            return Err(invalid("bits_per_symbol", "must be positive"));
        }
        let capacity = cfg.n_g * symbols_per_block;
        let (k_l, n_l, n_qam, n_fec) = match code {
            None => {
                let n_l = symbols_per_block * bits_per_symbol;
                (n_l, n_l, symbols_per_block, cfg.n_g)
            }
            Some((k_l, n_l)) => {
                if k_l == 0 || k_l > n_l {
                    return Err(invalid("k_l", format!("{k_l} is outside (0, n_L = {n_l}]")));
                }
                if n_l % bits_per_symbol != 0 {
                    return Err(invalid(
                        "n_l",
                        format!("codeword length {n_l} is not a multiple of {bits_per_symbol} bits per symbol"),
                    ));
                }
                let n_qam = n_l / bits_per_symbol;
                (k_l, n_l, n_qam, capacity / n_qam)
            }
        };
        let t_p = cfg.pitch(cfg.preamble_len);
        let t_g = cfg.pitch(block_len);
        let n_pre = cfg.preamble_count();
        let mut t_f = n_pre * t_p + cfg.n_g * t_g;
        if cfg.mode == TransferMode::Burst {
            t_f += 2 * cfg.n_w;
        }
        Ok(Self {
            t_p,
            t_g,
            t_f,
            k_l,
            n_l,
            n_qam,
            n_fec,
            n_g: cfg.n_g,
            n_on: t_g,
            symbols_per_block,
            pad_symbols: capacity - n_qam * n_fec,
            block_len,
            preamble_len: cfg.preamble_len,
            n_preambles: n_pre,
            n_w: cfg.n_w,
        })
    }

    /// Information bits carried by one frame.
    pub fn info_bits(&self) -> usize {
        self.k_l * self.n_fec
    }

    /// Length of the stream produced by [`assemble_frame`]: the segments
    /// plus one outer ramp on each side.
    pub fn stream_len(&self) -> usize {
        let pitches = self.n_preambles * self.t_p + self.n_g * self.t_g;
        if self.n_preambles + self.n_g == 0 {
            0
        } else {
            pitches + 2 * self.n_w
        }
    }

    /// Sample index in the stream where segment `i` (preambles first) starts.
    pub fn segment_start(&self, i: usize) -> usize {
        if i < self.n_preambles {
            i * self.t_p
        } else {
            self.n_preambles * self.t_p + (i - self.n_preambles) * self.t_g
        }
    }

    pub fn frame_efficiency(&self) -> f64 {
        if self.t_f == 0 {
            return 1.0;
        }
        (self.n_g * self.block_len) as f64 / self.t_f as f64
    }
}

/// Expected energy of an [`assemble_frame`] stream whose segment cores have
/// mean sample power `power`, window losses included.
pub fn expected_stream_energy(cfg: &FrameConfig, layout: &FrameLayout, power: f64) -> f64 {
    let ramp: f64 = ramp_samples(cfg).iter().map(|w| w * w).sum();
    let seg = |pitch: usize| pitch as f64 - 2.0 * cfg.n_w as f64 + 2.0 * ramp;
    power * (layout.n_preambles as f64 * seg(layout.t_p) + layout.n_g as f64 * seg(layout.t_g))
}

/// Useful GFDM samples over total frame samples.
pub fn frame_efficiency(layout: &FrameLayout) -> f64 {
    layout.frame_efficiency()
}

/// Overlap-adds on-air segments (preambles first) into one stream.
pub fn assemble_frame(
    preambles: &[Vec<Complex64>],
    blocks: &[Vec<Complex64>],
    cfg: &FrameConfig,
    layout: &FrameLayout,
) -> Result<Vec<Complex64>> {
    check_len("preamble count", layout.n_preambles, preambles.len())?;
    check_len("block count", layout.n_g, blocks.len())?;
    let mut out = vec![Complex64::new(0.0, 0.0); layout.stream_len()];
    for (i, seg) in preambles.iter().chain(blocks).enumerate() {
        let core = if i < layout.n_preambles {
            layout.preamble_len
        } else {
            layout.block_len
        };
        check_len("on-air segment", cfg.on_air_len(core), seg.len())?;
        let start = layout.segment_start(i);
        for (o, &s) in out[start..start + seg.len()].iter_mut().zip(seg) {
            *o += s;
        }
    }
    Ok(out)
}

/// Received cores: preambles first, then GFDM blocks.
pub type FrameCores = (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>);

/// Core samples of every preamble and block, under ideal timing.
pub fn disassemble_frame(
    stream: &[Complex64],
    cfg: &FrameConfig,
    layout: &FrameLayout,
) -> Result<FrameCores> {
    check_len("frame stream", layout.stream_len(), stream.len())?;
    let off = cfg.n_w + cfg.n_cp;
    let mut pre = Vec::with_capacity(layout.n_preambles);
    let mut blocks = Vec::with_capacity(layout.n_g);
    for i in 0..layout.n_preambles + layout.n_g {
        let start = layout.segment_start(i) + off;
        if i < layout.n_preambles {
            pre.push(stream[start..start + layout.preamble_len].to_vec());
        } else {
            blocks.push(stream[start..start + layout.block_len].to_vec());
        }
    }
    Ok((pre, blocks))
}

/// Which stream samples belong to the channel-estimation preambles' cores
/// and guards (everything between the end of the sync preamble's core and the
/// start of the first block's CP).
pub fn chest_region(cfg: &FrameConfig, layout: &FrameLayout) -> std::ops::Range<usize> {
    if cfg.n_chest == 0 {
        return 0..0;
    }
    let start = layout.segment_start(cfg.n_sync) + cfg.n_w;
    let end = layout.segment_start(cfg.n_sync + cfg.n_chest) + cfg.n_w;
    start..end
}

/// Fibonacci LFSR `x^degree + x^tap + 1`; emits the oldest stage.
#[derive(Debug, Clone)]
pub struct Prbs {
    state: u64,
    degree: u32,
    tap: u32,
}

impl Prbs {
    pub const DEGREE: u32 = 23;
    pub const TAP: u32 = 18;

    /// The `x^23 + x^18 + 1` generator.
    pub fn new(seed: u64) -> Result<Self> {
        Self::with_polynomial(Self::DEGREE, Self::TAP, seed)
    }

    pub fn with_polynomial(degree: u32, tap: u32, seed: u64) -> Result<Self> {
        if !(2..=63).contains(&degree) || tap == 0 || tap >= degree {
            return Err(invalid(
                "prbs polynomial",
                format!("x^{degree} + x^{tap} + 1 is not supported"),
            ));
        }
        let state = seed & ((1u64 << degree) - 1);
        if state == 0 {
            return Err(invalid("prbs seed", "the LFSR state must be nonzero"));
        }
        Ok(Self { state, degree, tap })
    }

    pub fn next_bit(&mut self) -> u8 {
        let out = ((self.state >> (self.degree - 1)) & 1) as u8;
        let fb = ((self.state >> (self.degree - 1)) ^ (self.state >> (self.tap - 1))) & 1;
        self.state = ((self.state << 1) | fb) & ((1u64 << self.degree) - 1);
        out
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn bits(&mut self, len: usize) -> Vec<u8> {
        (0..len).map(|_| self.next_bit()).collect()
    }
}

pub fn prbs_generate(seed: u64, length: usize) -> Result<Vec<u8>> {
    Ok(Prbs::new(seed)?.bits(length))
}

/// Seed of the filler sequence used for stuffing.
pub const STUFFING_SEED: u64 = 0x5A_5A5A;

/// Payload followed by PRBS filler; only the first `payload_len` bits count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StuffedBits {
    pub bits: Vec<u8>,
    pub payload_len: usize,
}

impl StuffedBits {
    pub fn payload(&self) -> &[u8] {
        &self.bits[..self.payload_len]
    }

    pub fn is_filler(&self, i: usize) -> bool {
        i >= self.payload_len
    }
}

pub fn stuff_bits(payload: &[u8], target_len: usize) -> Result<StuffedBits> {
    if target_len < payload.len() {
        return Err(invalid(
            "target_len",
            format!(
                "{target_len} is shorter than the {}-bit payload",
                payload.len()
            ),
        ));
    }
    let mut bits = payload.to_vec();
    bits.extend(Prbs::new(STUFFING_SEED)?.bits(target_len - payload.len()));
    Ok(StuffedBits {
        bits,
        payload_len: payload.len(),
    })
}

pub fn unstuff_bits(stuffed: &StuffedBits) -> Vec<u8> {
    stuffed.payload().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_block(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn zero_overhead_is_identity() {
        let x = random_block(64, 1);
        let cfg = FrameConfig::bare(64, 1);
        assert_eq!(add_cp_cs_window(&x, &cfg).unwrap(), x);
        let layout = FrameLayout::new(&cfg, 64, 64, 2, None).unwrap();
        assert_eq!(layout.frame_efficiency(), 1.0);
    }

    #[test]
    fn rect_window_keeps_core_and_copies_cp() {
        let x = random_block(48, 2);
        let cfg = FrameConfig {
            window_kind: WindowKind::Rect,
            ..FrameConfig::single_block(48)
        };
        let y = add_cp_cs_window(&x, &cfg).unwrap();
        assert_eq!(y.len(), 8 + 32 + 48 + 16 + 8);
        assert_eq!(&y[40..88], &x[..]);
        // After the hard switch (middle of the 16-sample ramp) the CP is a verbatim tail copy.
        assert_eq!(&y[16..40], &x[48 - 24..]);
        assert_eq!(&y[88..96], &x[..8]);
        assert!(y[..8].iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn rc4_ramp_formula() {
        assert_abs_diff_eq!(
            window_ramp(WindowKind::Rc4, 0.5),
            0.5f64.powi(4),
            epsilon = 1e-15
        );
        assert_eq!(window_ramp(WindowKind::Rc4, 0.0), 0.0);
        assert_eq!(window_ramp(WindowKind::Rc4, 1.0), 1.0);
        let cfg = FrameConfig::reference(1536);
        let r = ramp_samples(&cfg);
        assert_eq!(r.len(), 16);
        for (i, &w) in r.iter().enumerate() {
            let t = (i as f64 + 0.5) / 16.0;
            let rc = (0.5 - 0.5 * (std::f64::consts::PI * t).cos()).powi(4);
            assert_abs_diff_eq!(w, rc, epsilon = 1e-15);
        }
        assert!(r.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn windowed_cp_tail_is_circular() {
        let x = random_block(1536, 3);
        let cfg = FrameConfig::reference(1536);
        let y = add_cp_cs_window(&x, &cfg).unwrap();
        assert_eq!(y.len(), 1600);
        // Past the ramp, CP and CS are exact cyclic copies.
        assert_eq!(&y[16..40], &x[1536 - 24..]);
        assert_eq!(&y[40 + 1536..40 + 1536 + 8], &x[..8]);
        assert_eq!(remove_cp_cs(&y, &cfg, 1536).unwrap(), x);
    }

    #[test]
    fn removal_is_exact_and_offset_breaks_it() {
        let x = random_block(96, 4);
        for kind in [WindowKind::Rc4, WindowKind::Rc, WindowKind::Rect] {
            let cfg = FrameConfig {
                window_kind: kind,
                ..FrameConfig::single_block(96)
            };
            let y = add_cp_cs_window(&x, &cfg).unwrap();
            assert_eq!(remove_cp_cs(&y, &cfg, 96).unwrap(), x);
            let shifted: Vec<Complex64> = y[1..]
                .iter()
                .copied()
                .chain([Complex64::new(0.0, 0.0)])
                .collect();
            assert_ne!(remove_cp_cs(&shifted, &cfg, 96).unwrap(), x);
        }
        let cfg = FrameConfig::single_block(96);
        assert!(remove_cp_cs(&x, &cfg, 96).is_err());
    }

    #[test]
    fn window_longer_than_guard_is_rejected() {
        let cfg = FrameConfig {
            n_w: 20,
            ..FrameConfig::reference(64)
        };
        assert!(add_cp_cs_window(&random_block(64, 5), &cfg).is_err());
    }

    #[test]
    fn reference_block_efficiency() {
        let cfg = FrameConfig::single_block(1536);
        let layout = FrameLayout::new(&cfg, 1536, 1536, 6, None).unwrap();
        assert_eq!(layout.t_f, 1600);
        assert_abs_diff_eq!(layout.frame_efficiency(), 0.96, epsilon = 1e-15);
    }

    #[test]
    fn default_frame_efficiency_is_64_over_77() {
        let cfg = FrameConfig::reference(1536);
        let layout = FrameLayout::new(&cfg, 1536, 1536, 6, Some((1512, 2016))).unwrap();
        assert_eq!(layout.t_g, 1584);
        assert_eq!(layout.t_f, 21 * 1584);
        assert_abs_diff_eq!(layout.frame_efficiency(), 64.0 / 77.0, epsilon = 1e-15);
        assert_eq!(layout.n_qam, 336);
        assert_eq!(layout.n_fec, 82);
        assert_eq!(layout.pad_symbols, 18 * 1536 - 82 * 336);
        assert_eq!(layout.info_bits(), 82 * 1512);
    }

    #[test]
    fn layout_additivity_for_ten_blocks() {
        let cfg = FrameConfig {
            n_g: 10,
            ..FrameConfig::reference(1536)
        };
        let l = FrameLayout::new(&cfg, 1536, 1536, 6, None).unwrap();
        assert_eq!(l.t_f, 3 * l.t_p + 10 * l.t_g);
    }

    #[test]
    fn assemble_disassemble_round_trip() {
        let cfg = FrameConfig {
            n_g: 3,
            ..FrameConfig::reference(96)
        };
        let layout = FrameLayout::new(&cfg, 96, 96, 2, None).unwrap();
        let cores: Vec<Vec<Complex64>> = (0..6).map(|i| random_block(96, 10 + i)).collect();
        let on_air: Vec<Vec<Complex64>> = cores
            .iter()
            .map(|c| add_cp_cs_window(c, &cfg).unwrap())
            .collect();
        let stream = assemble_frame(&on_air[..3], &on_air[3..], &cfg, &layout).unwrap();
        assert_eq!(stream.len(), layout.stream_len());
        assert_eq!(stream.len(), layout.t_f + 2 * cfg.n_w);
        let (pre, blocks) = disassemble_frame(&stream, &cfg, &layout).unwrap();
        assert_eq!(pre, cores[..3].to_vec());
        assert_eq!(blocks, cores[3..].to_vec());
        assert!(disassemble_frame(&stream[1..], &cfg, &layout).is_err());
    }

    #[test]
    fn burst_stream_length_equals_frame_duration() {
        let cfg = FrameConfig {
            mode: TransferMode::Burst,
            n_g: 4,
            ..FrameConfig::reference(96)
        };
        let layout = FrameLayout::new(&cfg, 96, 96, 2, None).unwrap();
        assert_eq!(layout.stream_len(), layout.t_f);
    }

    #[test]
    fn empty_payload_is_preambles_only() {
        let cfg = FrameConfig {
            n_g: 0,
            ..FrameConfig::reference(64)
        };
        let layout = FrameLayout::new(&cfg, 64, 64, 2, None).unwrap();
        assert_eq!(layout.t_f, 3 * layout.t_p);
        let pre: Vec<Vec<Complex64>> = (0..3)
            .map(|i| add_cp_cs_window(&random_block(64, i), &cfg).unwrap())
            .collect();
        let stream = assemble_frame(&pre, &[], &cfg, &layout).unwrap();
        assert_eq!(stream.len(), 3 * layout.t_p + 16);
        assert_eq!(layout.frame_efficiency(), 0.0);
    }

    #[test]
    fn chest_region_covers_both_estimation_preambles() {
        let cfg = FrameConfig::reference(64);
        let layout = FrameLayout::new(&cfg, 64, 64, 2, None).unwrap();
        let r = chest_region(&cfg, &layout);
        assert_eq!(r.len(), 2 * layout.t_p);
        assert_eq!(r.start, layout.t_p + 8);
    }

    #[test]
    fn expected_energy_accounts_for_ramps() {
        // Oracle: average energy of streams built from white unit-power cores.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for kind in [WindowKind::Rc4, WindowKind::Rc, WindowKind::Rect] {
            let cfg = FrameConfig {
                window_kind: kind,
                n_g: 3,
                ..FrameConfig::reference(64)
            };
            let layout = FrameLayout::new(&cfg, 64, 64, 2, None).unwrap();
            let trials = 2000;
            let mut acc = 0.0;
            for _ in 0..trials {
                let segs: Vec<Vec<Complex64>> = (0..6)
                    .map(|_| {
                        let core: Vec<Complex64> = (0..64)
                            .map(|_| {
                                Complex64::from_polar(
                                    1.0,
                                    rng.random_range(0.0..std::f64::consts::TAU),
                                )
                            })
                            .collect();
                        add_cp_cs_window(&core, &cfg).unwrap()
                    })
                    .collect();
                let st = assemble_frame(&segs[..3], &segs[3..], &cfg, &layout).unwrap();
                acc += st.iter().map(|v| v.norm_sqr()).sum::<f64>();
            }
            let expect = expected_stream_energy(&cfg, &layout, 1.0);
            assert!(
                (acc / trials as f64 / expect - 1.0).abs() < 0.01,
                "{kind:?}"
            );
            if kind == WindowKind::Rect {
                assert_abs_diff_eq!(expect, 6.0 * layout.t_g as f64, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn lfsr_degree_seven_period() {
        // Oracle: cycle detection on the raw state sequence.
        let mut g = Prbs::with_polynomial(7, 6, 1).unwrap();
        let start = g.state();
        let mut period = 0;
        loop {
            g.next_bit();
            period += 1;
            if g.state() == start {
                break;
            }
            assert!(period < 1000);
        }
        assert_eq!(period, 127);
    }

    #[test]
    fn degree_23_has_no_short_cycle() {
        let mut g = Prbs::new(1).unwrap();
        let start = g.state();
        for _ in 0..1_000_000 {
            g.next_bit();
            assert_ne!(g.state(), start);
        }
    }

    #[test]
    fn prbs_determinism_and_zero_seed() {
        assert_eq!(
            prbs_generate(77, 500).unwrap(),
            prbs_generate(77, 500).unwrap()
        );
        assert_ne!(
            prbs_generate(77, 500).unwrap(),
            prbs_generate(78, 500).unwrap()
        );
        assert!(prbs_generate(0, 10).is_err());
        assert!(Prbs::new(1 << 23).is_err());
        let ones = prbs_generate(3, 100_000)
            .unwrap()
            .iter()
            .filter(|&&b| b == 1)
            .count();
        assert!((ones as f64 / 100_000.0 - 0.5).abs() < 0.01);
    }

    #[test]
    fn stuffing_round_trip() {
        let payload = prbs_generate(9, 333).unwrap();
        let s = stuff_bits(&payload, 1000).unwrap();
        assert_eq!(s.bits.len(), 1000);
        assert!(s.is_filler(333) && !s.is_filler(332));
        assert_eq!(unstuff_bits(&s), payload);
        assert!(stuff_bits(&payload, 10).is_err());
    }
}
