//! Configuration files and the commands behind the `gfdm-lab` binary.
//!
//! A configuration is a TOML file with `[waveform]`, `[polar]`, `[frame]`,
//! `[chain]`, `[sweep]`, `[run]`, `[psd]` and `[output]` sections. Every key
//! is optional and defaults to the reference setup, so an empty file runs
//! uncoded 64-QAM SISO over the default frame.
//!
//! Commands return their artifacts as strings; the binary decides where they
//! go. CSV is the contract and is byte-identical across runs with the same
//! configuration and seed.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::analysis::{
    oob_measure, run_ber_experiment, theoretical_ber_awgn, BerExperiment, BerRecord, OobRecipe,
    OobWaveform, StopRule, TheoreticalBerParams,
};
use crate::framing::{FrameConfig, FrameLayout, TransferMode, WindowKind};
use crate::link::{Antennas, ChainConfig, Construction, Link};
use crate::mapping::{Constellation, LlrKind};
use crate::mimo::CsiMode;
use crate::plot::{Plot, Series};
use crate::polar::{CheckNode, CodeRate, PolarCodeConfig, PolarSpec};
use crate::waveform::{GfdmModem, GfdmParams, PulseKind};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveformSection {
    pub subcarriers: usize,
    pub subsymbols: usize,
    pub pulse: String,
    pub roll_off: f64,
    pub qam_order: usize,
    /// Active subcarrier indices; all when absent.
    pub active: Option<Vec<usize>>,
}

impl Default for WaveformSection {
    fn default() -> Self {
        Self {
            subcarriers: 512,
            subsymbols: 3,
            pulse: "raised_cosine".into(),
            roll_off: 0.5,
            qam_order: 64,
            active: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolarSection {
    pub mother_length: usize,
    pub shortened: usize,
    pub rate: String,
    /// Design SNR of the uniform construction (BPSK Es/N0, dB).
    pub design_snr_db: f64,
    /// `qam` (per bit level) or `uniform`.
    pub construction: String,
    /// Symbol SNR after equalization used by the `qam` construction, dB.
    pub design_esn0_db: f64,
    pub check_node: String,
}

impl Default for PolarSection {
    fn default() -> Self {
        Self {
            mother_length: 2048,
            shortened: 32,
            rate: "3/4".into(),
            design_snr_db: 6.0,
            construction: "qam".into(),
            design_esn0_db: 15.7,
            check_node: "min_sum".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameSection {
    pub n_cp: usize,
    pub n_cs: usize,
    pub n_w: usize,
    pub window: String,
    pub n_g: usize,
    pub n_sync: usize,
    pub n_chest: usize,
    pub mode: String,
}

impl Default for FrameSection {
    fn default() -> Self {
        Self {
            n_cp: 32,
            n_cs: 16,
            n_w: 8,
            window: "rc4".into(),
            n_g: 18,
            n_sync: 1,
            n_chest: 2,
            mode: "continuous".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainSection {
    pub antennas: String,
    pub coded: bool,
    pub csi: String,
    pub llr: String,
}

impl Default for ChainSection {
    fn default() -> Self {
        Self {
            antennas: "siso".into(),
            coded: false,
            csi: "noiseless".into(),
            llr: "exact".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
    /// Explicit points; overrides start/stop/step.
    pub points: Option<Vec<f64>>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            start_db: 0.0,
            stop_db: 21.0,
            step_db: 1.0,
            points: None,
        }
    }
}

impl SweepSection {
    /// `start + i * step` up to `stop` inclusive; empty when `stop < start`.
    pub fn values(&self) -> Result<Vec<f64>> {
        if let Some(p) = &self.points {
            if p.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
                return Err(config_error(
                    "sweep",
                    "points",
                    "contains an unusable value",
                ));
            }
            return Ok(p.clone());
        }
        for (key, v) in [
            ("start_db", self.start_db),
            ("stop_db", self.stop_db),
            ("step_db", self.step_db),
        ] {
            if !v.is_finite() {
                return Err(config_error("sweep", key, "must be finite"));
            }
        }
        if self.stop_db < self.start_db {
            return Ok(Vec::new());
        }
        if !(self.step_db > 0.0) {
            return Err(config_error("sweep", "step_db", "must be positive"));
        }
        let n = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize + 1;
        if n > 100_000 {
            return Err(config_error(
                "sweep",
                "step_db",
                "gives more than 100000 points",
            ));
        }
        Ok((0..n)
            .map(|i| self.start_db + i as f64 * self.step_db)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    pub min_errors: u64,
    pub max_bits: u64,
    pub min_bits: u64,
    pub batch_frames: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        let stop = StopRule::default();
        Self {
            seed: 1,
            min_errors: stop.min_errors,
            max_bits: stop.max_bits,
            min_bits: stop.min_bits,
            batch_frames: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsdSection {
    /// `gfdm` or `ofdm`.
    pub waveform: String,
    pub sample_rate_hz: f64,
    pub span_hz: f64,
    /// Zero for a full allocation.
    pub notch_hz: f64,
    pub samples: usize,
    pub segment_len: usize,
}

impl Default for PsdSection {
    fn default() -> Self {
        let r = OobRecipe::default();
        Self {
            waveform: "gfdm".into(),
            sample_rate_hz: r.sample_rate,
            span_hz: r.span_hz,
            notch_hz: r.notch_hz,
            samples: r.samples,
            segment_len: r.segment_len,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub csv: Option<String>,
    pub svg: Option<String>,
}

/// The file as written; [`ExperimentConfig::resolve`] turns it into typed,
/// validated objects.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub waveform: WaveformSection,
    pub polar: PolarSection,
    pub frame: FrameSection,
    pub chain: ChainSection,
    pub sweep: SweepSection,
    pub run: RunSection,
    pub psd: PsdSection,
    pub output: OutputSection,
}

/// Everything a command needs, checked against every module invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub chain: ChainConfig,
    pub ebn0_db: Vec<f64>,
    pub stop: StopRule,
    pub batch_frames: usize,
    pub seed: u64,
    pub psd_waveform: OobWaveform,
    pub recipe: OobRecipe,
}

fn config_error(section: &str, key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        section: section.into(),
        key: key.into(),
        reason: reason.into(),
    }
}

/// Section that owns a parameter named by a module error.
fn section_of(field: &str) -> &'static str {
    match field {
        "subcarriers"
        | "subsymbols"
        | "pulse"
        | "roll_off"
        | "active_subcarriers"
        | "active subcarrier mask"
        | "qam order"
        | "qam_order" => "waveform",
        "mother_length" | "shortened" | "info_length" | "design_snr_db" | "design_esn0_db"
        | "code rate" | "check_node" | "bit-channel means" => "polar",
        "n_cp" | "n_cs" | "n_w" | "window" | "n_g" | "n_sync" | "n_chest" | "preamble_len"
        | "mode" => "frame",
        "chain" | "csi" | "llr" => "chain",
        "max_bits" | "min_bits" | "batch_frames" => "run",
        "ebn0_db" => "sweep",
        _ => "psd",
    }
}

fn in_section(e: Error) -> Error {
    match e {
        Error::InvalidParameter { field, reason } => config_error(section_of(field), field, reason),
        other => other,
    }
}

fn parse<T: FromStr<Err = Error>>(section: &str, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|e: Error| match e {
        Error::InvalidParameter { reason, .. } => config_error(section, key, reason),
        other => other,
    })
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config_error("file", "toml", e.message().to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn waveform_params(&self) -> Result<GfdmParams> {
        let w = &self.waveform;
        let pulse: PulseKind = parse("waveform", "pulse", &w.pulse)?;
        let mut p =
            GfdmParams::new(w.subcarriers, w.subsymbols, pulse, w.roll_off).map_err(in_section)?;
        if let Some(active) = &w.active {
            p = p
                .with_active_subcarriers(active.iter().copied())
                .map_err(in_section)?;
        }
        Ok(p)
    }

    pub fn frame_config(&self, block_len: usize) -> Result<FrameConfig> {
        let f = &self.frame;
        let cfg = FrameConfig {
            n_cp: f.n_cp,
            n_cs: f.n_cs,
            n_w: f.n_w,
            window_kind: parse::<WindowKind>("frame", "window", &f.window)?,
            n_g: f.n_g,
            preamble_len: block_len,
            n_sync: f.n_sync,
            n_chest: f.n_chest,
            mode: parse::<TransferMode>("frame", "mode", &f.mode)?,
        };
        cfg.validate().map_err(in_section)?;
        Ok(cfg)
    }

    pub fn polar_spec(&self) -> Result<PolarSpec> {
        let p = &self.polar;
        let rate: CodeRate = parse("polar", "rate", &p.rate)?;
        let spec = PolarSpec::with_rate(p.mother_length, p.shortened, rate, p.design_snr_db);
        PolarCodeConfig::construct(&spec).map_err(in_section)?;
        Ok(spec)
    }

    pub fn chain_config(&self) -> Result<ChainConfig> {
        let waveform = self.waveform_params()?;
        let frame = self.frame_config(waveform.block_len())?;
        Constellation::new(self.waveform.qam_order).map_err(|e| match e {
            Error::InvalidParameter { reason, .. } => config_error("waveform", "qam_order", reason),
            other => other,
        })?;
        let construction = match self.polar.construction.trim().to_ascii_lowercase().as_str() {
            "qam" => Construction::QamBitLevel {
                esn0_db: self.polar.design_esn0_db,
            },
            "uniform" => Construction::Uniform,
            other => {
                return Err(config_error(
                    "polar",
                    "construction",
                    format!("`{other}` is not one of qam, uniform"),
                ))
            }
        };
        let spec = self.polar_spec()?;
        let c = &self.chain;
        let cfg = ChainConfig {
            waveform,
            frame,
            qam_order: self.waveform.qam_order,
            code: c.coded.then_some(spec),
            antennas: parse::<Antennas>("chain", "antennas", &c.antennas)?,
            csi: parse::<CsiMode>("chain", "csi", &c.csi)?,
            llr: parse::<LlrKind>("chain", "llr", &c.llr)?,
            check_node: parse::<CheckNode>("polar", "check_node", &self.polar.check_node)?,
            construction,
        };
        Link::new(&cfg).map_err(in_section)?;
        Ok(cfg)
    }

    pub fn psd_recipe(&self) -> Result<(OobWaveform, OobRecipe)> {
        let kind: OobWaveform = parse("psd", "waveform", &self.psd.waveform)?;
        let waveform = self.waveform_params()?;
        let frame = self.frame_config(waveform.block_len())?;
        let p = &self.psd;
        let recipe = OobRecipe {
            sample_rate: p.sample_rate_hz,
            span_hz: p.span_hz,
            notch_hz: p.notch_hz,
            waveform,
            frame,
            samples: p.samples,
            segment_len: p.segment_len,
            qam_order: self.waveform.qam_order,
            seed: self.run.seed,
        };
        recipe.validate().map_err(|e| match e {
            Error::InvalidParameter { field, reason } => config_error("psd", field, reason),
            other => other,
        })?;
        Ok((kind, recipe))
    }

    /// Validates every section before any command runs.
    pub fn resolve(&self) -> Result<Resolved> {
        let chain = self.chain_config()?;
        let ebn0_db = self.sweep.values()?;
        let r = &self.run;
        let stop = StopRule {
            min_errors: r.min_errors,
            max_bits: r.max_bits,
            min_bits: r.min_bits,
        };
        stop.validate().map_err(in_section)?;
        if r.batch_frames == 0 {
            return Err(config_error("run", "batch_frames", "must be positive"));
        }
        let (psd_waveform, recipe) = self.psd_recipe()?;
        Ok(Resolved {
            chain,
            ebn0_db,
            stop,
            batch_frames: r.batch_frames,
            seed: r.seed,
            psd_waveform,
            recipe,
        })
    }
}

/// Artifacts of one command.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CommandOutput {
    pub csv: String,
    pub svg: Option<String>,
    /// Human-readable lines.
    pub summary: Vec<String>,
}

fn theory_params(r: &Resolved) -> Result<TheoreticalBerParams> {
    TheoreticalBerParams::from_chain(&r.chain).map_err(in_section)
}

/// `ebn0_db,ber_theory` over the sweep for the configured antenna mode.
pub fn cmd_theory(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let r = cfg.resolve()?;
    let params = theory_params(&r)?;
    let mut csv = String::from("ebn0_db,ber_theory\n");
    let mut pts = Vec::with_capacity(r.ebn0_db.len());
    for &e in &r.ebn0_db {
        let b = theoretical_ber_awgn(e, &params);
        let _ = writeln!(csv, "{e},{b}");
        pts.push((e, b));
    }
    let svg = Plot {
        title: format!(
            "Theoretical BER, {}-QAM {:?}",
            params.qam_order, params.mode
        ),
        x_label: "Eb/N0 (dB)".into(),
        y_label: "BER".into(),
        log_y: true,
        series: vec![Series::new("theory", pts)],
    }
    .to_svg();
    Ok(CommandOutput {
        csv,
        svg: Some(svg),
        summary: vec![format!(
            "eta = {:.6}, xi = {:.6}, {} points",
            params.eta,
            params.xi,
            r.ebn0_db.len()
        )],
    })
}

pub fn ber_csv(records: &[BerRecord]) -> String {
    let mut csv = String::from("ebn0_db,bits,errors,ber,frames,stop_reason\n");
    for r in records {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.ebn0_db,
            r.bits_sent,
            r.bit_errors,
            r.ber,
            r.frames,
            r.stop_reason.as_str()
        );
    }
    csv
}

/// Monte Carlo sweep; the SVG overlays the uncoded closed form.
pub fn cmd_ber(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let r = cfg.resolve()?;
    let exp = BerExperiment {
        chain: r.chain.clone(),
        ebn0_db: r.ebn0_db.clone(),
        stop: r.stop,
        batch_frames: r.batch_frames,
    };
    let records = run_ber_experiment(&exp, r.seed)?;
    let params = theory_params(&r)?;
    let finite: Vec<f64> = r
        .ebn0_db
        .iter()
        .copied()
        .filter(|e| e.is_finite())
        .collect();
    let theory = finite
        .iter()
        .map(|&e| (e, theoretical_ber_awgn(e, &params)))
        .collect();
    let sim = records.iter().map(|x| (x.ebn0_db, x.ber)).collect();
    let svg = Plot {
        title: format!(
            "{}-QAM {:?} {} {:?} CSI",
            r.chain.qam_order,
            r.chain.antennas,
            if r.chain.code.is_some() {
                "coded"
            } else {
                "uncoded"
            },
            r.chain.csi
        ),
        x_label: "Eb/N0 (dB)".into(),
        y_label: "BER".into(),
        log_y: true,
        series: vec![
            Series::new("uncoded theory", theory).dashed(),
            Series::new("simulated", sim),
        ],
    }
    .to_svg();
    let summary = records
        .iter()
        .map(|x| {
            format!(
                "{:>6} dB  ber {:.4e}  ({} errors / {} bits, {})",
                x.ebn0_db,
                x.ber,
                x.bit_errors,
                x.bits_sent,
                x.stop_reason.as_str()
            )
        })
        .collect();
    Ok(CommandOutput {
        csv: ber_csv(&records),
        svg: Some(svg),
        summary,
    })
}

/// Welch PSD of the configured recipe, `freq_hz,power_dbc`.
pub fn cmd_psd(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let (kind, recipe) = cfg.psd_recipe()?;
    let report = oob_measure(kind, &recipe)?;
    let mut csv = String::from("freq_hz,power_dbc\n");
    for (f, p) in report.psd.freq_hz.iter().zip(&report.psd.power_dbc) {
        let _ = writeln!(csv, "{f},{p}");
    }
    let summary = match report.notch_dbc {
        Some(d) => format!("{kind:?} notch depth: {d:.2} dBc"),
        None => format!("{kind:?}: full allocation, no notch"),
    };
    let pts = report
        .psd
        .freq_hz
        .iter()
        .map(|f| f / 1e6)
        .zip(report.psd.power_dbc.iter().copied())
        .collect();
    let svg = Plot {
        title: format!("{kind:?} PSD"),
        x_label: "Frequency (MHz)".into(),
        y_label: "PSD (dBc)".into(),
        log_y: false,
        series: vec![Series::new(format!("{kind:?}"), pts)],
    }
    .to_svg();
    Ok(CommandOutput {
        csv,
        svg: Some(svg),
        summary: vec![summary],
    })
}

/// Text report of the frame layout.
pub fn cmd_frame_info(cfg: &ExperimentConfig) -> Result<String> {
    // The layout needs no preambles, so only the option strings of a full
    // chain are checked here.
    let ch = &cfg.chain;
    parse::<Antennas>("chain", "antennas", &ch.antennas)?;
    parse::<CsiMode>("chain", "csi", &ch.csi)?;
    parse::<LlrKind>("chain", "llr", &ch.llr)?;
    parse::<CheckNode>("polar", "check_node", &cfg.polar.check_node)?;
    let waveform = cfg.waveform_params()?;
    let frame = cfg.frame_config(waveform.block_len())?;
    let c = Constellation::new(cfg.waveform.qam_order).map_err(in_section)?;
    let code = if ch.coded {
        let spec = cfg.polar_spec()?;
        let code = PolarCodeConfig::construct(&spec).map_err(in_section)?;
        Some((code.info_length(), code.sent_length()))
    } else {
        None
    };
    let layout = FrameLayout::new(
        &frame,
        waveform.block_len(),
        waveform.symbols_per_block(),
        c.bits_per_symbol(),
        code,
    )
    .map_err(in_section)?;
    let nef = GfdmModem::from_params(&waveform)
        .map_err(in_section)?
        .noise_enhancement_factor();
    let mut s = String::new();
    let _ = writeln!(s, "T_P   = {} samples", layout.t_p);
    let _ = writeln!(s, "T_G   = {} samples", layout.t_g);
    let _ = writeln!(s, "T_F   = {} samples", layout.t_f);
    let _ = writeln!(s, "eta   = {:.6}", layout.frame_efficiency());
    let _ = writeln!(s, "xi    = {nef:.6}");
    let _ = writeln!(s, "K_L   = {}", layout.k_l);
    let _ = writeln!(s, "n_L   = {}", layout.n_l);
    let _ = writeln!(s, "N_QAM = {}", layout.n_qam);
    let _ = writeln!(s, "N_FEC = {}", layout.n_fec);
    let _ = writeln!(s, "N_G   = {}", layout.n_g);
    let _ = writeln!(s, "pad   = {} symbols", layout.pad_symbols);
    let _ = writeln!(s, "info  = {} bits per frame", layout.info_bits());
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(text).unwrap()
    }

    #[test]
    fn empty_file_is_the_reference_setup() {
        let c = cfg("");
        assert_eq!(c, ExperimentConfig::default());
        let r = c.resolve().unwrap();
        assert_eq!(r.chain, ChainConfig::reference());
        assert_eq!(r.ebn0_db.len(), 22);
        assert_eq!(r.stop, StopRule::default());
    }

    #[test]
    fn theory_rows() {
        let out = cmd_theory(&cfg("")).unwrap();
        let mut lines = out.csv.lines();
        assert_eq!(lines.next(), Some("ebn0_db,ber_theory"));
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(first[0], 0.0);
        assert!((first[1] - 0.132835614246).abs() < 1e-12);
    }

    #[test]
    fn mimo_theory_is_siso_three_db_later() {
        let siso = cmd_theory(&cfg("[sweep]\nstart_db = 3\nstop_db = 15")).unwrap();
        let mimo = cmd_theory(&cfg(
            "[chain]\nantennas = \"mimo\"\n[sweep]\nstart_db = 0\nstop_db = 12",
        ))
        .unwrap();
        let col = |s: &str| {
            s.lines()
                .skip(1)
                .map(|l| l.split(',').nth(1).unwrap().to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(col(&siso.csv), col(&mimo.csv));
    }

    #[test]
    fn empty_sweep_gives_header_only() {
        let out = cmd_theory(&cfg("[sweep]\nstart_db = 5\nstop_db = 4")).unwrap();
        assert_eq!(out.csv, "ebn0_db,ber_theory\n");
        let out = cmd_theory(&cfg("[sweep]\npoints = []")).unwrap();
        assert_eq!(out.csv, "ebn0_db,ber_theory\n");
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            ("[waveform]\nroll_off = 2.0", "waveform", "roll_off"),
            ("[waveform]\nqam_order = 32", "waveform", "qam_order"),
            ("[frame]\nn_w = 40", "frame", "n_w"),
            (
                "[chain]\nantennas = \"mimo\"\n[frame]\nn_g = 17",
                "frame",
                "n_g",
            ),
            ("[chain]\ncsi = \"psychic\"", "chain", "csi"),
            ("[polar]\nrate = \"4/5\"", "polar", "rate"),
            ("[sweep]\nstep_db = 0\nstop_db = 3", "sweep", "step_db"),
            ("[run]\nmax_bits = 0", "run", "max_bits"),
            ("[psd]\nnotch_hz = 40e6", "psd", "notch_hz"),
        ];
        for (text, section, key) in cases {
            match cfg(text).resolve() {
                Err(Error::Config {
                    section: s, key: k, ..
                }) => {
                    assert_eq!((s.as_str(), k.as_str()), (section, key), "{text}")
                }
                Err(other) => panic!("{text}: {other}"),
                Ok(_) => panic!("{text}: accepted"),
            }
        }
        assert!(ExperimentConfig::from_toml_str("[waveform]\nsubcarrier = 3").is_err());
    }

    #[test]
    fn frame_info_reports_layout() {
        let full = cmd_frame_info(&cfg("")).unwrap();
        let eta = TheoreticalBerParams::reference().unwrap().eta;
        assert!(full.contains(&format!("eta   = {eta:.6}")));
        let block = cmd_frame_info(&cfg(
            "[frame]\nn_g = 1\nn_sync = 0\nn_chest = 0\nmode = \"burst\"",
        ))
        .unwrap();
        assert!(block.contains("eta   = 0.960000"), "{block}");
        let bare = cmd_frame_info(&cfg(
            "[frame]\nn_cp = 0\nn_cs = 0\nn_w = 0\nwindow = \"rect\"\nn_g = 1\nn_sync = 0\nn_chest = 0",
        ))
        .unwrap();
        assert!(bare.contains("eta   = 1.000000"), "{bare}");
        let coded = cmd_frame_info(&cfg("[chain]\ncoded = true")).unwrap();
        assert!(
            coded.contains("K_L   = 1512") && coded.contains("n_L   = 2016"),
            "{coded}"
        );
    }

    fn small_ber(extra: &str) -> ExperimentConfig {
        cfg(&format!(
            "[waveform]\nsubcarriers = 32\nqam_order = 16\n[frame]\nn_g = 4\n[run]\nmax_bits = 40000\nseed = 7\n{extra}"
        ))
    }

    #[test]
    fn ber_csv_is_reproducible() {
        let c = small_ber("[sweep]\npoints = [6.0, 9.0]");
        let a = cmd_ber(&c).unwrap();
        let b = cmd_ber(&c).unwrap();
        assert_eq!(a.csv, b.csv);
        assert!(a
            .csv
            .starts_with("ebn0_db,bits,errors,ber,frames,stop_reason\n"));
        assert_eq!(a.csv.lines().count(), 3);
    }

    #[test]
    fn noiseless_ber_has_no_errors() {
        let out = cmd_ber(&small_ber("[sweep]\npoints = [inf]")).unwrap();
        let row: Vec<&str> = out.csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[2], "0");
        assert_eq!(row[5], "budget");
    }

    #[test]
    fn psd_full_allocation_has_no_notch() {
        let c = cfg("[psd]\nnotch_hz = 0\nsamples = 40000\nsegment_len = 1024");
        let out = cmd_psd(&c).unwrap();
        assert!(out.summary[0].contains("no notch"));
        assert!(out.csv.starts_with("freq_hz,power_dbc\n"));
        let f: Vec<f64> = out
            .csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(f.windows(2).all(|w| w[0] < w[1]));
    }
}
