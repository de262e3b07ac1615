//! Gray-coded square QAM.
//!
//! Bit convention: within a symbol, even-indexed bits select the in-phase
//! level and odd-indexed bits the quadrature level, each axis Gray-coded
//! MSB first. Bit value 0 in the MSB of an axis maps to the positive half,
//! so 4-QAM `00` is `(1 + j)/sqrt(2)`. LLRs are positive when 0 is the more
//! likely bit value.

use num_complex::Complex64;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlrKind {
    /// Log-sum-exp over all levels of the axis.
    Exact,
    /// Nearest level per bit hypothesis.
    MaxLog,
}

impl std::str::FromStr for LlrKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(LlrKind::Exact),
            "max_log" | "maxlog" => Ok(LlrKind::MaxLog),
            other => Err(invalid(
                "llr",
                format!("`{other}` is not one of exact, max_log"),
            )),
        }
    }
}

/// Square Gray-mapped QAM with unit average energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    order: usize,
    bits_per_symbol: usize,
    side: usize,
    /// Amplitude of per-axis level `i` is `(side - 1 - 2 i) * scale`.
    scale: f64,
    /// Gray label of per-axis level `i`.
    level_labels: Vec<usize>,
    /// Per-axis level for a Gray label.
    label_levels: Vec<usize>,
    points: Vec<Complex64>,
}

impl Constellation {
    pub fn new(order: usize) -> Result<Self> {
        if !matches!(order, 4 | 16 | 64 | 256) {
            return Err(invalid(
                "qam order",
                format!("{order} is not one of 4, 16, 64, 256"),
            ));
        }
        let bits_per_symbol = order.trailing_zeros() as usize;
        let side = 1usize << (bits_per_symbol / 2);
        let scale = (3.0 / (2.0 * (order as f64 - 1.0))).sqrt();
        let level_labels: Vec<usize> = (0..side).map(|i| i ^ (i >> 1)).collect();
        let mut label_levels = vec![0; side];
        for (i, &g) in level_labels.iter().enumerate() {
            label_levels[g] = i;
        }
        let mut c = Self {
            order,
            bits_per_symbol,
            side,
            scale,
            level_labels,
            label_levels,
            points: Vec::new(),
        };
        c.points = (0..order)
            .map(|p| {
                let bits: Vec<u8> = (0..bits_per_symbol)
                    .map(|b| ((p >> (bits_per_symbol - 1 - b)) & 1) as u8)
                    .collect();
                c.map_symbol(&bits)
            })
            .collect();
        Ok(c)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Levels per axis, `L = sqrt(order)`.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Point `p` carries the bits of `p` written MSB first.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    fn amplitude(&self, level: usize) -> f64 {
        (self.side as f64 - 1.0 - 2.0 * level as f64) * self.scale
    }

    fn axis_label(bits: &[u8], offset: usize) -> usize {
        bits.iter()
            .skip(offset)
            .step_by(2)
            .fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    fn map_symbol(&self, bits: &[u8]) -> Complex64 {
        let i = self.label_levels[Self::axis_label(bits, 0)];
        let q = self.label_levels[Self::axis_label(bits, 1)];
        Complex64::new(self.amplitude(i), self.amplitude(q))
    }

    pub fn map(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        if !bits.len().is_multiple_of(self.bits_per_symbol) {
            return Err(invalid(
                "bits",
                format!(
                    "{} bits do not fill {}-bit symbols",
                    bits.len(),
                    self.bits_per_symbol
                ),
            ));
        }
        Ok(bits
            .chunks_exact(self.bits_per_symbol)
            .map(|c| self.map_symbol(c))
            .collect())
    }

    /// Nearest level on one axis; ties go to the smaller Gray label.
    fn decide_axis(&self, y: f64) -> usize {
        let u = ((self.side as f64 - 1.0) - y / self.scale) / 2.0;
        let top = self.side - 1;
        if u <= 0.0 {
            return 0;
        }
        if u >= top as f64 {
            return top;
        }
        let lo = u.floor() as usize;
        let frac = u - lo as f64;
        if (frac - 0.5).abs() < 1e-9 {
            let hi = lo + 1;
            if self.level_labels[lo] < self.level_labels[hi] {
                lo
            } else {
                hi
            }
        } else if frac < 0.5 {
            lo
        } else {
            lo + 1
        }
    }

    fn push_axis_bits(&self, level: usize, out: &mut [u8], offset: usize) {
        let label = self.level_labels[level];
        let half = self.bits_per_symbol / 2;
        for j in 0..half {
            out[offset + 2 * j] = ((label >> (half - 1 - j)) & 1) as u8;
        }
    }

    pub fn hard_demap(&self, symbols: &[Complex64]) -> Vec<u8> {
        let mut out = vec![0u8; symbols.len() * self.bits_per_symbol];
        for (s, chunk) in symbols
            .iter()
            .zip(out.chunks_exact_mut(self.bits_per_symbol))
        {
            self.push_axis_bits(self.decide_axis(s.re), chunk, 0);
            self.push_axis_bits(self.decide_axis(s.im), chunk, 1);
        }
        out
    }

    /// Per-bit LLRs for a complex noise variance `noise_variance`
    /// (`noise_variance / 2` per axis).
    pub fn soft_demap(
        &self,
        symbols: &[Complex64],
        noise_variance: f64,
        kind: LlrKind,
    ) -> Result<Vec<f64>> {
        if !(noise_variance > 0.0) || !noise_variance.is_finite() {
            return Err(invalid(
                "noise_variance",
                format!("{noise_variance} must be positive"),
            ));
        }
        let half = self.bits_per_symbol / 2;
        let mut out = vec![0.0; symbols.len() * self.bits_per_symbol];
        let mut metric = vec![0.0; self.side];
        for (s, chunk) in symbols
            .iter()
            .zip(out.chunks_exact_mut(self.bits_per_symbol))
        {
            for (axis, y) in [s.re, s.im].into_iter().enumerate() {
                for (i, m) in metric.iter_mut().enumerate() {
                    let d = y - self.amplitude(i);
                    *m = -d * d / noise_variance;
                }
                for j in 0..half {
                    let shift = half - 1 - j;
                    let (mut zero, mut one) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
                    for (i, &m) in metric.iter().enumerate() {
                        let slot = if (self.level_labels[i] >> shift) & 1 == 0 {
                            &mut zero
                        } else {
                            &mut one
                        };
                        *slot = match kind {
                            LlrKind::MaxLog => slot.max(m),
                            LlrKind::Exact => log_add(*slot, m),
                        };
                    }
                    chunk[axis + 2 * j] = zero - one;
                }
            }
        }
        Ok(out)
    }
}

impl Constellation {
    /// Mutual information between each bit of a symbol and the channel
    /// output at symbol SNR `es_n0` (linear), by numerical integration.
    pub fn bit_mutual_information(&self, es_n0: f64) -> Result<Vec<f64>> {
        if !(es_n0 > 0.0) || !es_n0.is_finite() {
            return Err(invalid(
                "es_n0",
                format!("{es_n0} must be positive and finite"),
            ));
        }
        let half = self.bits_per_symbol / 2;
        let s = (0.5 / es_n0).sqrt();
        let top = self.amplitude(0);
        let (lo, hi) = (-top - 12.0 * s, top + 12.0 * s);
        let steps = 4000;
        let dy = (hi - lo) / steps as f64;
        let mut info = vec![0.0; half];
        for step in 0..=steps {
            let y = lo + step as f64 * dy;
            let w = if step == 0 || step == steps { 0.5 } else { 1.0 } * dy;
            let lik: Vec<f64> = (0..self.side)
                .map(|i| {
                    let d = (y - self.amplitude(i)) / s;
                    (-0.5 * d * d).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
                })
                .collect();
            let total: f64 = lik.iter().sum();
            if total <= 0.0 {
                continue;
            }
            for (j, acc) in info.iter_mut().enumerate() {
                let shift = half - 1 - j;
                let zero: f64 = (0..self.side)
                    .filter(|&i| (self.level_labels[i] >> shift) & 1 == 0)
                    .map(|i| lik[i])
                    .sum();
                let one = total - zero;
                for (i, &l) in lik.iter().enumerate() {
                    let same = if (self.level_labels[i] >> shift) & 1 == 0 {
                        zero
                    } else {
                        one
                    };
                    if l > 0.0 && same > 0.0 {
                        *acc += w * l * (same / total).log2() / self.side as f64;
                    }
                }
            }
        }
        let mut out = vec![0.0; self.bits_per_symbol];
        for (j, v) in info.iter().enumerate() {
            let i = (1.0 + v).clamp(0.0, 1.0);
            out[2 * j] = i;
            out[2 * j + 1] = i;
        }
        Ok(out)
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

pub fn qam_map(bits: &[u8], c: &Constellation) -> Result<Vec<Complex64>> {
    c.map(bits)
}

pub fn qam_hard_demap(symbols: &[Complex64], c: &Constellation) -> Vec<u8> {
    c.hard_demap(symbols)
}

pub fn qam_soft_demap(
    symbols: &[Complex64],
    noise_variance: f64,
    c: &Constellation,
) -> Result<Vec<f64>> {
    c.soft_demap(symbols, noise_variance, LlrKind::Exact)
}
