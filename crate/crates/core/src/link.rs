//! One frame through the whole chain: coding, mapping, GFDM, framing,
//! TR-STC, channel, estimation, equalization, ZF demodulation and decoding.

use std::str::FromStr;

use rand::Rng;

use crate::channel::{apply_channel, noise_variance, FlatChannel, NoiseSpec};
use crate::dft::UnitaryDft;
use crate::error::{check_len, invalid, Result};
use crate::framing::{
    add_cp_cs_window, assemble_frame, chest_region, disassemble_frame, expected_stream_energy,
    FrameConfig, FrameLayout, Prbs, STUFFING_SEED,
};
use crate::mapping::{Constellation, LlrKind};
use crate::mimo::{
    estimate_channel, preamble_antenna, siso_fde_equalize, trstc_combine_equalize, trstc_encode,
    ChannelEstimate, CsiMode, Preambles,
};
use crate::polar::{llr_mean_for_capacity, CheckNode, PolarCodeConfig, PolarSpec};
use crate::waveform::{DataGrid, GfdmModem, GfdmParams};
use crate::{Complex64, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Antennas {
    #[default]
    Siso,
    Mimo2x2,
}

impl Antennas {
    pub fn count(self) -> usize {
        match self {
            Antennas::Siso => 1,
            Antennas::Mimo2x2 => 2,
        }
    }
}

impl FromStr for Antennas {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "siso" => Ok(Antennas::Siso),
            "mimo" | "mimo2x2" | "2x2" => Ok(Antennas::Mimo2x2),
            other => Err(invalid(
                "chain",
                format!("`{other}` is not one of siso, mimo"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub waveform: GfdmParams,
    pub frame: FrameConfig,
    pub qam_order: usize,
    /// `None` sends uncoded bits.
    pub code: Option<PolarSpec>,
    pub antennas: Antennas,
    pub csi: CsiMode,
    pub llr: LlrKind,
    pub check_node: CheckNode,
    pub construction: Construction,
}

impl ChainConfig {
    /// Uncoded 64-QAM SISO with noiseless channel estimation.
    pub fn reference() -> Self {
        let waveform = GfdmParams::reference();
        let frame = FrameConfig::reference(waveform.block_len());
        Self {
            waveform,
            frame,
            qam_order: 64,
            code: None,
            antennas: Antennas::Siso,
            csi: CsiMode::Noiseless,
            llr: LlrKind::Exact,
            check_node: CheckNode::MinSum,
            construction: Construction::default(),
        }
    }

    pub fn with_code(mut self, code: Option<PolarSpec>) -> Self {
        self.code = code;
        self
    }

    pub fn with_antennas(mut self, a: Antennas) -> Self {
        self.antennas = a;
        self
    }

    pub fn with_csi(mut self, csi: CsiMode) -> Self {
        self.csi = csi;
        self
    }
}

/// How the polar frozen set is chosen inside a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Construction {
    /// Every codeword bit sees the same BPSK-like channel at the code's
    /// `design_snr_db`.
    Uniform,
    /// Codeword bits fill symbols in order, so bit `i` sees QAM bit level
    /// `i mod mu`; each level gets the LLR mean matching its mutual
    /// information at symbol SNR `esn0_db` after equalization.
    QamBitLevel { esn0_db: f64 },
}

impl Default for Construction {
    fn default() -> Self {
        Construction::QamBitLevel { esn0_db: 15.7 }
    }
}

fn construct_code(
    spec: &PolarSpec,
    construction: Construction,
    c: &Constellation,
) -> Result<PolarCodeConfig> {
    match construction {
        Construction::Uniform => PolarCodeConfig::construct(spec),
        Construction::QamBitLevel { esn0_db } => {
            if !esn0_db.is_finite() {
                return Err(invalid("design_esn0_db", "must be finite"));
            }
            let mi = c.bit_mutual_information(10f64.powf(esn0_db / 10.0))?;
            let mu = c.bits_per_symbol();
            let sent = spec.mother_length.saturating_sub(spec.shortened);
            let means: Vec<f64> = (0..sent)
                .map(|i| llr_mean_for_capacity(mi[i % mu]))
                .collect();
            PolarCodeConfig::construct_for_channel(spec, &means)
        }
    }
}

/// Errors counted on one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameOutcome {
    pub bits: u64,
    pub errors: u64,
}

/// Precomputed transceiver for a chain configuration.
#[derive(Debug)]
pub struct Link {
    cfg: ChainConfig,
    modem: GfdmModem,
    constellation: Constellation,
    code: Option<PolarCodeConfig>,
    preambles: Preambles,
    layout: FrameLayout,
    dft: UnitaryDft,
    nef: f64,
    frame_energy: f64,
    pad_bits: Vec<u8>,
}

impl Link {
    pub fn new(cfg: &ChainConfig) -> Result<Self> {
        let params = &cfg.waveform;
        if params.active_count() == 0 {
            return Err(invalid("active_subcarriers", "no subcarrier is active"));
        }
        let modem = GfdmModem::from_params(params)?;
        let constellation = Constellation::new(cfg.qam_order)?;
        let mu = constellation.bits_per_symbol();
        let code = match &cfg.code {
            Some(spec) => Some(
                construct_code(spec, cfg.construction, &constellation)?
                    .with_check_node(cfg.check_node),
            ),
            None => None,
        };
        let n_tx = cfg.antennas.count();
        let f = &cfg.frame;
        if f.n_chest < n_tx {
            return Err(invalid(
                "n_chest",
                format!(
                    "{} channel-estimation preambles cannot probe {n_tx} antennas",
                    f.n_chest
                ),
            ));
        }
        if n_tx == 2 && !f.n_g.is_multiple_of(2) {
            return Err(invalid(
                "n_g",
                format!("TR-STC needs an even number of blocks, got {}", f.n_g),
            ));
        }
        if f.preamble_len != params.block_len() && f.preamble_count() > 0 {
            return Err(invalid(
                "preamble_len",
                format!(
                    "must equal the block length {} to share the DFT grid",
                    params.block_len()
                ),
            ));
        }
        let layout = FrameLayout::new(
            f,
            params.block_len(),
            params.symbols_per_block(),
            mu,
            code.as_ref().map(|c| (c.info_length(), c.sent_length())),
        )?;
        if layout.n_fec == 0 {
            return Err(invalid("n_g", "the frame cannot hold a single codeword"));
        }
        let preambles = Preambles::new(params, f.n_sync, f.n_chest)?;
        let power = params.symbols_per_block() as f64 / params.block_len() as f64;
        let frame_energy = expected_stream_energy(f, &layout, power);
        let pad_bits = Prbs::new(STUFFING_SEED)?.bits(layout.pad_symbols * mu);
        Ok(Self {
            cfg: cfg.clone(),
            nef: modem.noise_enhancement_factor(),
            modem,
            constellation,
            code,
            preambles,
            layout,
            dft: UnitaryDft::new(params.block_len()),
            frame_energy,
            pad_bits,
        })
    }

    pub fn config(&self) -> &ChainConfig {
        &self.cfg
    }

    pub fn layout(&self) -> &FrameLayout {
        &self.layout
    }

    pub fn efficiency(&self) -> f64 {
        self.layout.frame_efficiency()
    }

    pub fn noise_enhancement_factor(&self) -> f64 {
        self.nef
    }

    pub fn info_bits_per_frame(&self) -> usize {
        self.layout.info_bits()
    }

    /// Expected transmitted energy of one frame, all antennas together.
    pub fn frame_energy(&self) -> f64 {
        self.frame_energy
    }

    /// Noise for a given Eb/N0; `+inf` gives a noiseless channel.
    pub fn noise_spec(&self, ebn0_db: f64) -> Result<NoiseSpec> {
        let preamble_noise = self.cfg.csi == CsiMode::Noisy;
        if ebn0_db == f64::INFINITY {
            return Ok(NoiseSpec {
                preamble_noise,
                ..NoiseSpec::noiseless()
            });
        }
        let mu = self.constellation.bits_per_symbol();
        let rate = self.code.as_ref().map_or(1.0, |c| c.rate());
        let snr = crate::channel::ebn0_to_snr(
            ebn0_db,
            mu,
            rate,
            self.efficiency().clamp(f64::MIN_POSITIVE, 1.0),
        )?;
        Ok(NoiseSpec {
            ebn0_db,
            snr_db: crate::channel::linear_to_db(snr),
            noise_variance: noise_variance(self.frame_energy, self.info_bits_per_frame(), ebn0_db)?,
            preamble_noise,
        })
    }

    /// Random information bits for one frame.
    pub fn random_info<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u8> {
        (0..self.info_bits_per_frame())
            .map(|_| rng.random_range(0..2u8))
            .collect()
    }

    /// Transmit streams, one per antenna.
    pub fn transmit(&self, info: &[u8]) -> Result<Vec<Vec<Complex64>>> {
        check_len(
            "frame information bits",
            self.info_bits_per_frame(),
            info.len(),
        )?;
        let params = &self.cfg.waveform;
        let mut bits = match &self.code {
            Some(code) => {
                let mut v = Vec::with_capacity(self.layout.n_fec * code.sent_length());
                for chunk in info.chunks(code.info_length()) {
                    v.extend(code.encode(chunk)?);
                }
                v
            }
            None => info.to_vec(),
        };
        bits.extend_from_slice(&self.pad_bits);
        let symbols = self.constellation.map(&bits)?;
        let s = params.symbols_per_block();
        let blocks: Vec<Vec<Complex64>> = symbols
            .chunks(s)
            .map(|c| {
                self.modem
                    .modulate(&DataGrid::from_active_symbols(params, c)?.d)
            })
            .collect::<Result<_>>()?;
        let f = &self.cfg.frame;
        let n_tx = self.cfg.antennas.count();
        let zero = vec![Complex64::new(0.0, 0.0); params.block_len()];
        let mut streams = Vec::with_capacity(n_tx);
        for ant in 0..n_tx {
            let mut pre = Vec::with_capacity(f.preamble_count());
            for p in &self.preambles.sync {
                pre.push(add_cp_cs_window(if ant == 0 { p } else { &zero }, f)?);
            }
            for (slot, p) in self.preambles.chest.iter().enumerate() {
                let core = if preamble_antenna(slot, n_tx) == ant {
                    p
                } else {
                    &zero
                };
                pre.push(add_cp_cs_window(core, f)?);
            }
            let data: Vec<Vec<Complex64>> = if n_tx == 1 {
                blocks
                    .iter()
                    .map(|b| add_cp_cs_window(b, f))
                    .collect::<Result<_>>()?
            } else {
                let mut out = Vec::with_capacity(blocks.len());
                for pair in blocks.chunks(2) {
                    let enc = trstc_encode(&pair[0], &pair[1])?;
                    out.push(add_cp_cs_window(enc.block(ant, 0), f)?);
                    out.push(add_cp_cs_window(enc.block(ant, 1), f)?);
                }
                out
            };
            streams.push(assemble_frame(&pre, &data, f, &self.layout)?);
        }
        Ok(streams)
    }

    /// Recovers the information bits from the received streams.
    pub fn receive(
        &self,
        rx: &[Vec<Complex64>],
        truth: &FlatChannel,
        noise: &NoiseSpec,
    ) -> Result<Vec<u8>> {
        let f = &self.cfg.frame;
        let params = &self.cfg.waveform;
        let n_tx = self.cfg.antennas.count();
        check_len("receive streams", n_tx, rx.len())?;
        let mut pre_rx = Vec::with_capacity(rx.len());
        let mut blk_rx = Vec::with_capacity(rx.len());
        for stream in rx {
            let (p, b) = disassemble_frame(stream, f, &self.layout)?;
            pre_rx.push(p);
            blk_rx.push(b);
        }
        let slots: Vec<Vec<Vec<Complex64>>> = (0..f.n_chest)
            .map(|s| pre_rx.iter().map(|p| p[f.n_sync + s].clone()).collect())
            .collect();
        let est = estimate_channel(
            &slots,
            &self.preambles.chest_freq,
            n_tx,
            self.cfg.csi,
            truth,
            &self.dft,
        )?;
        let mut equalized = Vec::with_capacity(self.layout.n_g);
        if n_tx == 1 {
            for b in &blk_rx[0] {
                equalized.extend(siso_fde_equalize(b, &est, &self.dft)?.blocks);
            }
        } else {
            for i in (0..self.layout.n_g).step_by(2) {
                let y1: Vec<Vec<Complex64>> = blk_rx.iter().map(|b| b[i].clone()).collect();
                let y2: Vec<Vec<Complex64>> = blk_rx.iter().map(|b| b[i + 1].clone()).collect();
                equalized.extend(trstc_combine_equalize(&y1, &y2, &est, &self.dft)?.blocks);
            }
        }
        let mut symbols = Vec::with_capacity(self.layout.n_g * params.symbols_per_block());
        for y in &equalized {
            let d = self.modem.demodulate(y)?;
            let grid = DataGrid {
                subcarriers: params.subcarriers,
                subsymbols: params.subsymbols,
                d,
            };
            symbols.extend(grid.active_symbols(params));
        }
        symbols.truncate(self.layout.n_fec * self.layout.n_qam);
        match &self.code {
            None => Ok(self.constellation.hard_demap(&symbols)),
            Some(code) => {
                let var = self.symbol_noise_variance(&est, noise.noise_variance);
                let llr = self.constellation.soft_demap(&symbols, var, self.cfg.llr)?;
                let mut out = Vec::with_capacity(self.info_bits_per_frame());
                for cw in llr.chunks(code.sent_length()) {
                    out.extend(code.decode(cw)?);
                }
                Ok(out)
            }
        }
    }

    /// Noise variance per data symbol after equalization and ZF.
    fn symbol_noise_variance(&self, est: &ChannelEstimate, sigma2: f64) -> f64 {
        let n_tx = est.n_tx();
        let mut acc = 0.0;
        let mut used = 0usize;
        for b in (0..est.bins()).filter(|&b| est.is_usable(b)) {
            let mut g = 0.0;
            for r in 0..est.n_rx() {
                for t in 0..n_tx {
                    g += est.get(r, t, b).norm_sqr();
                }
            }
            if g > crate::mimo::ERASURE_THRESHOLD {
                acc += n_tx as f64 / g;
                used += 1;
            }
        }
        let per_bin = if used == 0 { 1.0 } else { acc / used as f64 };
        (self.nef * sigma2 * per_bin).max(1e-9)
    }

    /// The channel for one frame: unit gain for SISO, random unit-modulus
    /// phases for 2x2.
    pub fn draw_channel<R: Rng + ?Sized>(&self, rng: &mut R) -> FlatChannel {
        match self.cfg.antennas {
            Antennas::Siso => FlatChannel::siso(Complex64::new(1.0, 0.0)),
            Antennas::Mimo2x2 => FlatChannel::random_unit_phase_2x2(rng),
        }
    }

    pub fn simulate_frame<R: Rng + ?Sized>(
        &self,
        noise: &NoiseSpec,
        rng: &mut R,
    ) -> Result<FrameOutcome> {
        let info = self.random_info(rng);
        let h = self.draw_channel(rng);
        let tx = self.transmit(&info)?;
        let quiet = chest_region(&self.cfg.frame, &self.layout);
        let rx = apply_channel(&tx, &h, noise, quiet, rng)?;
        let out = self.receive(&rx, &h, noise)?;
        let errors = out.iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
        Ok(FrameOutcome {
            bits: info.len() as u64,
            errors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::frame_rng;
    use crate::polar::CodeRate;
    use crate::waveform::PulseKind;

    fn small(antennas: Antennas, coded: bool, csi: CsiMode) -> ChainConfig {
        let waveform = GfdmParams::new(32, 3, PulseKind::RaisedCosine, 0.5).unwrap();
        let frame = FrameConfig {
            n_g: 4,
            ..FrameConfig::reference(96)
        };
        ChainConfig {
            waveform,
            frame,
            qam_order: 16,
            code: coded.then(|| PolarSpec::with_rate(128, 8, CodeRate::Half, 4.0)),
            antennas,
            csi,
            llr: LlrKind::Exact,
            check_node: CheckNode::MinSum,
            construction: Construction::default(),
        }
    }

    #[test]
    fn noiseless_frames_are_error_free_in_every_mode() {
        for antennas in [Antennas::Siso, Antennas::Mimo2x2] {
            for coded in [false, true] {
                for csi in [CsiMode::Noiseless, CsiMode::Noisy] {
                    let link = Link::new(&small(antennas, coded, csi)).unwrap();
                    let noise = link.noise_spec(f64::INFINITY).unwrap();
                    let mut rng = frame_rng(1, 0, 0);
                    for _ in 0..3 {
                        let o = link.simulate_frame(&noise, &mut rng).unwrap();
                        assert_eq!(o.errors, 0, "{antennas:?} coded={coded} {csi:?}");
                        assert_eq!(o.bits as usize, link.info_bits_per_frame());
                    }
                }
            }
        }
    }

    #[test]
    fn notched_allocation_round_trips() {
        let mut cfg = small(Antennas::Mimo2x2, false, CsiMode::Noisy);
        cfg.waveform = cfg
            .waveform
            .clone()
            .with_active_subcarriers((0..32).filter(|k| !(12..20).contains(k)))
            .unwrap();
        let link = Link::new(&cfg).unwrap();
        let o = link
            .simulate_frame(
                &link.noise_spec(f64::INFINITY).unwrap(),
                &mut frame_rng(2, 0, 0),
            )
            .unwrap();
        assert_eq!(o.errors, 0);
    }

    #[test]
    fn reference_layout_and_energy() {
        let link = Link::new(&ChainConfig::reference()).unwrap();
        assert!((link.efficiency() - 64.0 / 77.0).abs() < 1e-15);
        assert_eq!(link.info_bits_per_frame(), 18 * 1536 * 6);
        // Nominal 21 * 1584 samples at unit power, less the crossfade dips.
        let loss = 1.0 - link.frame_energy() / (21.0 * 1584.0);
        assert!(loss > 0.0 && loss < 0.01, "{loss}");
    }

    #[test]
    fn measured_ebn0_matches_request() {
        let link = Link::new(&small(Antennas::Siso, false, CsiMode::Noisy)).unwrap();
        let noise = link.noise_spec(7.0).unwrap();
        let mut rng = frame_rng(3, 0, 0);
        let mut energy = 0.0;
        let frames = 400;
        for _ in 0..frames {
            let tx = link.transmit(&link.random_info(&mut rng)).unwrap();
            energy += tx[0].iter().map(|v| v.norm_sqr()).sum::<f64>();
        }
        let eb = energy / (frames as f64 * link.info_bits_per_frame() as f64);
        let measured = 10.0 * (eb / noise.noise_variance).log10();
        assert!((measured - 7.0).abs() < 0.05, "{measured}");
    }

    #[test]
    fn rejects_inconsistent_chains() {
        let mut cfg = small(Antennas::Mimo2x2, false, CsiMode::Noisy);
        cfg.frame.n_g = 3;
        assert!(Link::new(&cfg).is_err());
        let mut cfg = small(Antennas::Mimo2x2, false, CsiMode::Noisy);
        cfg.frame.n_chest = 1;
        assert!(Link::new(&cfg).is_err());
        let mut cfg = small(Antennas::Siso, true, CsiMode::Noisy);
        cfg.frame.n_g = 1;
        cfg.code = Some(PolarSpec::with_rate(1024, 0, CodeRate::Half, 4.0));
        assert!(Link::new(&cfg).is_err());
    }
}
