//! GFDM block synthesis and zero-forcing demodulation.
//!
//! A block carries `N = K*M` symbols `d[k,m]` on `K` subcarriers and `M`
//! sub-symbols. Every symbol rides a copy of the prototype pulse that is
//! circularly shifted by `m*K` samples and modulated to subcarrier `k`:
//!
//! ```text
//! x[n] = sum_k sum_m d[k,m] * g[<n - m*K>_N] * exp(j*2*pi*k*n/K)
//! ```
//!
//! Two equivalent routes are provided. [`ModulationMatrix`] holds the dense
//! `N x N` matrix `A` (column `m*K + k` is the shifted pulse) together with
//! `B = A^-1`. [`GfdmModem`] computes the same maps in `O(N log N)` by
//! splitting the time index as `n + l*K`: for fixed `n` the block is a
//! length-`M` circular convolution, which is diagonal after an `M`-point DFT.
//! The diagonal entries (the Zak transform of the pulse) give the exact
//! inverse, the condition number and the noise enhancement factor.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, invalid, Error, Result};

/// Largest condition number accepted for the modulation matrix.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseKind {
    /// Raised-cosine transition defined on the `N` DFT bins, `roll_off * M`
    /// bins wide around each subcarrier edge.
    RaisedCosine,
    /// Time-domain raised-cosine (Nyquist) impulse response sampled on the
    /// circular block, centred on sample 0.
    RaisedCosineTime,
    /// `1/sqrt(K)` over the first `K` samples: plain OFDM per sub-symbol.
    Rectangular,
}

impl std::str::FromStr for PulseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raised_cosine" | "rc" => Ok(PulseKind::RaisedCosine),
            "raised_cosine_time" | "rc_time" => Ok(PulseKind::RaisedCosineTime),
            "rectangular" | "rect" => Ok(PulseKind::Rectangular),
            other => Err(invalid("pulse", format!("unknown pulse kind `{other}`"))),
        }
    }
}

/// Waveform geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct GfdmParams {
    pub subcarriers: usize,
    pub subsymbols: usize,
    pub pulse: PulseKind,
    pub roll_off: f64,
    active: Vec<bool>,
}

impl GfdmParams {
    /// All subcarriers active.
    pub fn new(
        subcarriers: usize,
        subsymbols: usize,
        pulse: PulseKind,
        roll_off: f64,
    ) -> Result<Self> {
        if subcarriers == 0 {
            return Err(invalid("subcarriers", "must be positive"));
        }
        if subsymbols == 0 {
            return Err(invalid("subsymbols", "must be positive"));
        }
        if !(0.0..=1.0).contains(&roll_off) {
            return Err(invalid("roll_off", format!("{roll_off} is outside [0, 1]")));
        }
        Ok(Self {
            subcarriers,
            subsymbols,
            pulse,
            roll_off,
            active: vec![true; subcarriers],
        })
    }

    /// K = 512, M = 3, raised-cosine pulse with roll-off 0.5, all subcarriers on.
    pub fn reference() -> Self {
        Self::new(512, 3, PulseKind::RaisedCosine, 0.5).expect("static parameters are valid")
    }

    pub fn with_active_subcarriers<I: IntoIterator<Item = usize>>(
        mut self,
        indices: I,
    ) -> Result<Self> {
        let mut mask = vec![false; self.subcarriers];
        for k in indices {
            if k >= self.subcarriers {
                return Err(invalid(
                    "active_subcarriers",
                    format!("index {k} is outside [0, {})", self.subcarriers),
                ));
            }
            mask[k] = true;
        }
        self.active = mask;
        Ok(self)
    }

    pub fn with_active_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        check_len("active subcarrier mask", self.subcarriers, mask.len())?;
        self.active = mask;
        Ok(self)
    }

    pub fn block_len(&self) -> usize {
        self.subcarriers * self.subsymbols
    }

    pub fn is_active(&self, k: usize) -> bool {
        self.active[k]
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    /// Data symbols carried by one block.
    pub fn symbols_per_block(&self) -> usize {
        self.active_count() * self.subsymbols
    }

    /// Index of `d[k,m]` in the stacked data vector (and column of `A`).
    pub fn column_index(&self, k: usize, m: usize) -> usize {
        m * self.subcarriers + k
    }
}

/// Unit-energy prototype pulse of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypePulse {
    pub samples: Vec<Complex64>,
    pub energy: f64,
}

impl PrototypePulse {
    pub fn new(params: &GfdmParams) -> Result<Self> {
        let raw = match params.pulse {
            PulseKind::RaisedCosine => raised_cosine_freq(params),
            PulseKind::RaisedCosineTime => raised_cosine_time(params),
            PulseKind::Rectangular => {
                let n = params.block_len();
                (0..n)
                    .map(|i| Complex64::new(if i < params.subcarriers { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            }
        };
        let energy: f64 = raw.iter().map(|v| v.norm_sqr()).sum();
        if energy <= 0.0 || !energy.is_finite() {
            return Err(invalid("pulse", "prototype pulse has no energy"));
        }
        let scale = energy.sqrt().recip();
        let samples: Vec<Complex64> = raw.into_iter().map(|v| v * scale).collect();
        let energy = samples.iter().map(|v| v.norm_sqr()).sum();
        Ok(Self { samples, energy })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

pub fn prototype_pulse(params: &GfdmParams) -> Result<PrototypePulse> {
    PrototypePulse::new(params)
}

/// Frequency response of the raised-cosine pulse on DFT bin `q` of `N`.
/// Frequencies are measured in subcarrier spacings (`M` bins each).
pub fn raised_cosine_response(q: usize, params: &GfdmParams) -> f64 {
    let n = params.block_len();
    let signed = if q <= n / 2 {
        q as f64
    } else {
        q as f64 - n as f64
    };
    let f = signed.abs() / params.subsymbols as f64;
    let a = params.roll_off;
    let lo = (1.0 - a) / 2.0;
    let hi = (1.0 + a) / 2.0;
    if f <= lo {
        1.0
    } else if f >= hi {
        0.0
    } else {
        0.5 * (1.0 + (PI / a * (f - lo)).cos())
    }
}

fn raised_cosine_freq(params: &GfdmParams) -> Vec<Complex64> {
    let n = params.block_len();
    let mut buf: Vec<Complex64> = (0..n)
        .map(|q| Complex64::new(raised_cosine_response(q, params), 0.0))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

fn raised_cosine_time(params: &GfdmParams) -> Vec<Complex64> {
    let n = params.block_len();
    let k = params.subcarriers as f64;
    let a = params.roll_off;
    (0..n)
        .map(|i| {
            let signed = if i <= n / 2 {
                i as f64
            } else {
                i as f64 - n as f64
            };
            let t = signed / k;
            let v = if a > 0.0 && ((2.0 * a * t).abs() - 1.0).abs() < 1e-12 {
                PI / 4.0 * sinc(1.0 / (2.0 * a))
            } else {
                sinc(t) * (PI * a * t).cos() / (1.0 - (2.0 * a * t).powi(2))
            };
            Complex64::new(v, 0.0)
        })
        .collect()
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

fn twiddle(num: usize, den: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (num % den) as f64 / den as f64)
}

/// FFT-based GFDM modulator and zero-forcing demodulator.
#[derive(Clone)]
pub struct GfdmModem {
    k: usize,
    m: usize,
    pulse: Vec<Complex64>,
    /// `G_n[q]`, stored at `n * M + q`.
    zak: Vec<Complex64>,
    fft_k: Arc<dyn Fft<f64>>,
    ifft_k: Arc<dyn Fft<f64>>,
    fft_m: Arc<dyn Fft<f64>>,
    ifft_m: Arc<dyn Fft<f64>>,
    condition: f64,
}

impl std::fmt::Debug for GfdmModem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GfdmModem")
            .field("subcarriers", &self.k)
            .field("subsymbols", &self.m)
            .field("condition", &self.condition)
            .finish()
    }
}

impl GfdmModem {
    pub fn new(pulse: &PrototypePulse, params: &GfdmParams) -> Result<Self> {
        let (k, m) = (params.subcarriers, params.subsymbols);
        check_len("prototype pulse", k * m, pulse.len())?;
        let mut planner = FftPlanner::new();
        let fft_m = planner.plan_fft_forward(m);
        let mut zak = vec![Complex64::new(0.0, 0.0); k * m];
        for n in 0..k {
            let row = &mut zak[n * m..(n + 1) * m];
            for (l, v) in row.iter_mut().enumerate() {
                *v = pulse.samples[n + l * k];
            }
            fft_m.process(row);
        }
        let (min, max) = zak
            .iter()
            .map(|v| v.norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        let condition = if min > 0.0 { max / min } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(Error::NonInvertible { condition });
        }
        Ok(Self {
            k,
            m,
            pulse: pulse.samples.clone(),
            zak,
            fft_k: planner.plan_fft_forward(k),
            ifft_k: planner.plan_fft_inverse(k),
            fft_m,
            ifft_m: planner.plan_fft_inverse(m),
            condition,
        })
    }

    pub fn from_params(params: &GfdmParams) -> Result<Self> {
        Self::new(&PrototypePulse::new(params)?, params)
    }

    pub fn block_len(&self) -> usize {
        self.k * self.m
    }

    /// Ratio of the largest to smallest singular value of `A`.
    pub fn condition_number(&self) -> f64 {
        self.condition
    }

    /// Squared norm of a row of `B`, from the singular values of `A`.
    pub fn noise_enhancement_factor(&self) -> f64 {
        let k = self.k as f64;
        let sum: f64 = self.zak.iter().map(|g| 1.0 / (k * g.norm_sqr())).sum();
        sum / self.block_len() as f64
    }

    pub fn modulate(&self, d: &[Complex64]) -> Result<Vec<Complex64>> {
        let (k, m, n_len) = (self.k, self.m, self.block_len());
        check_len("data grid", n_len, d.len())?;
        // D_m[n] = sum_k d[k,m] e^{j 2 pi k n / K}
        let mut sub = d.to_vec();
        for chunk in sub.chunks_mut(k) {
            self.ifft_k.process(chunk);
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n_len];
        for l in 0..m {
            for mm in 0..m {
                let shift = ((l + m - mm) % m) * k;
                let dm = &sub[mm * k..(mm + 1) * k];
                let out = &mut x[l * k..(l + 1) * k];
                for n in 0..k {
                    out[n] += self.pulse[n + shift] * dm[n];
                }
            }
        }
        Ok(x)
    }

    pub fn demodulate(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let (k, m, n_len) = (self.k, self.m, self.block_len());
        check_len("received block", n_len, y.len())?;
        let mut sub = vec![Complex64::new(0.0, 0.0); n_len];
        let mut col = vec![Complex64::new(0.0, 0.0); m];
        let inv_m = 1.0 / m as f64;
        for n in 0..k {
            for (l, v) in col.iter_mut().enumerate() {
                *v = y[n + l * k];
            }
            self.fft_m.process(&mut col);
            for (v, g) in col.iter_mut().zip(&self.zak[n * m..(n + 1) * m]) {
                *v /= *g;
            }
            self.ifft_m.process(&mut col);
            for (mm, v) in col.iter().enumerate() {
                sub[mm * k + n] = *v * inv_m;
            }
        }
        let inv_k = 1.0 / k as f64;
        for chunk in sub.chunks_mut(k) {
            self.fft_k.process(chunk);
            chunk.iter_mut().for_each(|v| *v *= inv_k);
        }
        Ok(sub)
    }
}

/// Stacked data vector `d = (d_0^T ... d_{M-1}^T)^T`, `d_m = (d[0,m] ... d[K-1,m])`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataGrid {
    pub subcarriers: usize,
    pub subsymbols: usize,
    pub d: Vec<Complex64>,
}

impl DataGrid {
    /// Transmit grid. Inactive subcarriers must carry exact zeros.
    pub fn new(params: &GfdmParams, d: Vec<Complex64>) -> Result<Self> {
        check_len("data grid", params.block_len(), d.len())?;
        for m in 0..params.subsymbols {
            for k in 0..params.subcarriers {
                let v = d[params.column_index(k, m)];
                if !params.is_active(k) && v != Complex64::new(0.0, 0.0) {
                    return Err(invalid(
                        "data grid",
                        format!("inactive subcarrier {k} carries a nonzero symbol"),
                    ));
                }
            }
        }
        Ok(Self {
            subcarriers: params.subcarriers,
            subsymbols: params.subsymbols,
            d,
        })
    }

    pub fn zeros(params: &GfdmParams) -> Self {
        Self {
            subcarriers: params.subcarriers,
            subsymbols: params.subsymbols,
            d: vec![Complex64::new(0.0, 0.0); params.block_len()],
        }
    }

    /// Fill active positions sub-symbol by sub-symbol, subcarrier by subcarrier.
    pub fn from_active_symbols(params: &GfdmParams, symbols: &[Complex64]) -> Result<Self> {
        check_len("active symbols", params.symbols_per_block(), symbols.len())?;
        let mut grid = Self::zeros(params);
        let mut it = symbols.iter();
        for m in 0..params.subsymbols {
            for k in (0..params.subcarriers).filter(|&k| params.is_active(k)) {
                grid.d[params.column_index(k, m)] = *it.next().expect("length checked");
            }
        }
        Ok(grid)
    }

    /// Active positions in the same order as [`DataGrid::from_active_symbols`].
    pub fn active_symbols(&self, params: &GfdmParams) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(params.symbols_per_block());
        for m in 0..params.subsymbols {
            for k in (0..params.subcarriers).filter(|&k| params.is_active(k)) {
                out.push(self.d[params.column_index(k, m)]);
            }
        }
        out
    }

    pub fn get(&self, k: usize, m: usize) -> Complex64 {
        self.d[m * self.subcarriers + k]
    }
}

/// Dense modulation matrix `A`, its inverse `B` and the resulting NEF.
#[derive(Debug, Clone)]
pub struct ModulationMatrix {
    n: usize,
    subcarriers: usize,
    /// Row-major `N x N`.
    a: Vec<Complex64>,
    /// Row-major `N x N`, `B = A^-1`.
    b: Vec<Complex64>,
    nef: f64,
    condition: f64,
}

impl ModulationMatrix {
    /// Builds `A` column by column from the shifted pulses; `B` is obtained
    /// from the diagonalised structure (exact inverse, checked in tests
    /// against `B * A = I` and an LU inverse).
    pub fn build(pulse: &PrototypePulse, params: &GfdmParams) -> Result<Self> {
        let modem = GfdmModem::new(pulse, params)?;
        let (k, m) = (params.subcarriers, params.subsymbols);
        let n = k * m;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for mm in 0..m {
            for kk in 0..k {
                let col = params.column_index(kk, mm);
                for row in 0..n {
                    let g = pulse.samples[(row + n - mm * k % n) % n];
                    a[row * n + col] = g * twiddle(kk * row, k);
                }
            }
        }
        let mut b = vec![Complex64::new(0.0, 0.0); n * n];
        let mut unit = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            unit[j] = Complex64::new(1.0, 0.0);
            let col = modem.demodulate(&unit)?;
            unit[j] = Complex64::new(0.0, 0.0);
            for (i, v) in col.into_iter().enumerate() {
                b[i * n + j] = v;
            }
        }
        let nef = b[..n].iter().map(|v| v.norm_sqr()).sum();
        Ok(Self {
            n,
            subcarriers: k,
            a,
            b,
            nef,
            condition: modem.condition_number(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn a(&self, row: usize, col: usize) -> Complex64 {
        self.a[row * self.n + col]
    }

    pub fn b(&self, row: usize, col: usize) -> Complex64 {
        self.b[row * self.n + col]
    }

    /// Column of `A` carrying `d[k,m]`.
    pub fn column(&self, k: usize, m: usize) -> Vec<Complex64> {
        let col = m * self.subcarriers + k;
        (0..self.n).map(|row| self.a(row, col)).collect()
    }

    /// Row 0 of `B`: the zero-forcing receive pulse.
    pub fn receive_pulse(&self) -> &[Complex64] {
        &self.b[..self.n]
    }

    pub fn nef(&self) -> f64 {
        self.nef
    }

    pub fn condition_number(&self) -> f64 {
        self.condition
    }

    pub fn modulate(&self, d: &DataGrid) -> Result<Vec<Complex64>> {
        mat_vec(&self.a, self.n, &d.d)
    }

    pub fn demodulate_zf(&self, y_eq: &[Complex64]) -> Result<DataGrid> {
        let d = mat_vec(&self.b, self.n, y_eq)?;
        Ok(DataGrid {
            subcarriers: self.subcarriers,
            subsymbols: self.n / self.subcarriers,
            d,
        })
    }
}

fn mat_vec(mat: &[Complex64], n: usize, v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len("vector", n, v.len())?;
    Ok(mat
        .chunks_exact(n)
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect())
}

pub fn build_modulation_matrix(
    pulse: &PrototypePulse,
    params: &GfdmParams,
) -> Result<ModulationMatrix> {
    ModulationMatrix::build(pulse, params)
}

pub fn gfdm_modulate(d: &DataGrid, mat: &ModulationMatrix) -> Result<Vec<Complex64>> {
    mat.modulate(d)
}

pub fn gfdm_demodulate_zf(y_eq: &[Complex64], mat: &ModulationMatrix) -> Result<DataGrid> {
    mat.demodulate_zf(y_eq)
}

pub fn noise_enhancement_factor(mat: &ModulationMatrix) -> f64 {
    mat.nef()
}
