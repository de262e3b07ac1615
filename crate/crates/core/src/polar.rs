//! Shortened polar codes with successive-cancellation decoding.
//!
//! Indexing is natural (no bit reversal): `x = u * F^{(x)n}` with
//! `F = [[1, 0], [1, 1]]`, so `x[i]` is the XOR of every `u[j]` whose index
//! bits contain those of `i`. The last `s` outputs depend only on the last
//! `s` inputs. Shortening therefore freezes the last `s` inputs to zero,
//! drops the last `s` outputs, and lets the decoder treat them as known
//! zeros.
//!
//! The information set is chosen by Gaussian-approximation density
//! evolution at a design SNR.

use crate::error::{check_len, invalid, Result};

/// LLR magnitude standing in for a known (shortened) bit.
pub const KNOWN_BIT_LLR: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeRate {
    Half,
    TwoThirds,
    ThreeQuarters,
    FiveSixths,
}

impl CodeRate {
    pub const ALL: [CodeRate; 4] = [
        CodeRate::Half,
        CodeRate::TwoThirds,
        CodeRate::ThreeQuarters,
        CodeRate::FiveSixths,
    ];

    pub fn ratio(self) -> (usize, usize) {
        match self {
            CodeRate::Half => (1, 2),
            CodeRate::TwoThirds => (2, 3),
            CodeRate::ThreeQuarters => (3, 4),
            CodeRate::FiveSixths => (5, 6),
        }
    }

    pub fn value(self) -> f64 {
        let (n, d) = self.ratio();
        n as f64 / d as f64
    }
}

impl std::str::FromStr for CodeRate {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1/2" => Ok(CodeRate::Half),
            "2/3" => Ok(CodeRate::TwoThirds),
            "3/4" => Ok(CodeRate::ThreeQuarters),
            "5/6" => Ok(CodeRate::FiveSixths),
            other => Err(invalid(
                "code rate",
                format!("`{other}` is not one of 1/2, 2/3, 3/4, 5/6"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitRole {
    Info,
    Frozen,
    /// Frozen input whose output is removed by shortening.
    Shortened,
}

/// SC check-node rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckNode {
    /// `sign * sign * min`, the usual hardware form.
    #[default]
    MinSum,
    /// `2 atanh(tanh(a/2) tanh(b/2))`.
    Exact,
}

impl std::str::FromStr for CheckNode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min_sum" | "minsum" => Ok(CheckNode::MinSum),
            "exact" | "tanh" => Ok(CheckNode::Exact),
            other => Err(invalid(
                "check_node",
                format!("`{other}` is not one of min_sum, exact"),
            )),
        }
    }
}

/// Construction inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarSpec {
    pub mother_length: usize,
    pub shortened: usize,
    pub info_length: usize,
    pub design_snr_db: f64,
}

impl PolarSpec {
    /// 2048-bit mother code, 32 shortened bits, at a standard rate.
    pub fn standard(rate: CodeRate) -> Self {
        Self::with_rate(2048, 32, rate, 6.0)
    }

    pub fn with_rate(
        mother_length: usize,
        shortened: usize,
        rate: CodeRate,
        design_snr_db: f64,
    ) -> Self {
        let (num, den) = rate.ratio();
        let sent = mother_length.saturating_sub(shortened);
        // round(sent * num / den), halves up
        let info_length = (2 * sent * num + den) / (2 * den);
        Self {
            mother_length,
            shortened,
            info_length,
            design_snr_db,
        }
    }
}

/// A constructed code: every mother-code input is info, frozen or shortened.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCodeConfig {
    mother_length: usize,
    shortened: usize,
    info_length: usize,
    design_snr_db: f64,
    roles: Vec<BitRole>,
    info_positions: Vec<usize>,
    check_node: CheckNode,
}

impl PolarCodeConfig {
    /// Gaussian-approximation construction for a BPSK-like channel whose
    /// LLR mean is `4 * 10^(design_snr_db / 10)` on every transmitted bit.
    pub fn construct(spec: &PolarSpec) -> Result<Self> {
        let sent = validate_spec(spec)?;
        let channel = vec![4.0 * 10f64.powf(spec.design_snr_db / 10.0); sent];
        Self::construct_for_channel(spec, &channel)
    }

    /// Construction for unequal transmitted bit channels: `means[i]` is the
    /// mean LLR of codeword bit `i`.
    pub fn construct_for_channel(spec: &PolarSpec, means: &[f64]) -> Result<Self> {
        let n = spec.mother_length;
        let sent = validate_spec(spec)?;
        check_len("bit-channel means", sent, means.len())?;
        if means.iter().any(|m| !(*m >= 0.0)) {
            return Err(invalid("bit-channel means", "must be non-negative"));
        }
        let mut channel = means.to_vec();
        channel.resize(n, f64::INFINITY);
        let reliab = ga_means(&channel);
        let mut order: Vec<usize> = (0..sent).collect();
        // Most reliable first; ties broken by the larger index.
        order.sort_by(|&a, &b| reliab[b].total_cmp(&reliab[a]).then(b.cmp(&a)));
        let mut roles = vec![BitRole::Frozen; n];
        for r in roles[sent..].iter_mut() {
            *r = BitRole::Shortened;
        }
        for &i in &order[..spec.info_length] {
            roles[i] = BitRole::Info;
        }
        let info_positions = (0..n).filter(|&i| roles[i] == BitRole::Info).collect();
        Ok(Self {
            mother_length: n,
            shortened: spec.shortened,
            info_length: spec.info_length,
            design_snr_db: spec.design_snr_db,
            roles,
            info_positions,
            check_node: CheckNode::default(),
        })
    }

    pub fn with_check_node(mut self, rule: CheckNode) -> Self {
        self.check_node = rule;
        self
    }

    pub fn mother_length(&self) -> usize {
        self.mother_length
    }

    /// `n_L`: transmitted codeword length.
    pub fn sent_length(&self) -> usize {
        self.mother_length - self.shortened
    }

    /// `K_L`: information bits per codeword.
    pub fn info_length(&self) -> usize {
        self.info_length
    }

    pub fn design_snr_db(&self) -> f64 {
        self.design_snr_db
    }

    pub fn rate(&self) -> f64 {
        self.info_length as f64 / self.sent_length() as f64
    }

    pub fn roles(&self) -> &[BitRole] {
        &self.roles
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn frozen_positions(&self) -> Vec<usize> {
        (0..self.mother_length)
            .filter(|&i| self.roles[i] == BitRole::Frozen)
            .collect()
    }

    /// Mother-code output indices removed before transmission.
    pub fn shortening_set(&self) -> std::ops::Range<usize> {
        self.sent_length()..self.mother_length
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        check_len("polar information word", self.info_length, info.len())?;
        let mut u = vec![0u8; self.mother_length];
        for (&pos, &b) in self.info_positions.iter().zip(info) {
            u[pos] = b & 1;
        }
        polar_transform(&mut u);
        u.truncate(self.sent_length());
        Ok(u)
    }

    /// Decodes `n_L` channel LLRs (positive favours 0).
    pub fn decode(&self, llrs: &[f64]) -> Result<Vec<u8>> {
        check_len("polar channel LLRs", self.sent_length(), llrs.len())?;
        let mut full = Vec::with_capacity(self.mother_length);
        full.extend_from_slice(llrs);
        full.resize(self.mother_length, KNOWN_BIT_LLR);
        self.decode_mother(&full)
    }

    /// Decodes a full mother-length LLR vector; shortened positions are
    /// overwritten with the known-zero LLR whatever they contain.
    pub fn decode_mother(&self, llrs: &[f64]) -> Result<Vec<u8>> {
        check_len("mother-code LLRs", self.mother_length, llrs.len())?;
        let n = self.mother_length;
        let mut l = llrs.to_vec();
        for v in l[self.sent_length()..].iter_mut() {
            *v = KNOWN_BIT_LLR;
        }
        let mut u = vec![0u8; n];
        let mut x = vec![0u8; n];
        let mut scratch = vec![0.0; n];
        sc_decode(
            &l,
            &self.roles,
            &mut u,
            &mut x,
            &mut scratch,
            self.check_node,
        );
        Ok(self.info_positions.iter().map(|&p| u[p]).collect())
    }
}

pub fn construct_frozen_set(spec: &PolarSpec) -> Result<PolarCodeConfig> {
    PolarCodeConfig::construct(spec)
}

pub fn polar_encode(info_bits: &[u8], config: &PolarCodeConfig) -> Result<Vec<u8>> {
    config.encode(info_bits)
}

pub fn polar_decode_sc(llrs: &[f64], config: &PolarCodeConfig) -> Result<Vec<u8>> {
    config.decode(llrs)
}

/// In-place `x = u * F^{(x)n}` over GF(2).
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (a, b) = block.split_at_mut(half);
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x ^= *y;
            }
        }
        half *= 2;
    }
}

/// Checks the sizes and returns the transmitted length.
fn validate_spec(spec: &PolarSpec) -> Result<usize> {
    let n = spec.mother_length;
    if n < 2 || !n.is_power_of_two() {
        return Err(invalid(
            "mother_length",
            format!("{n} is not a power of two >= 2"),
        ));
    }
    if spec.shortened >= n {
        return Err(invalid(
            "shortened",
            format!("{} leaves no transmitted bits", spec.shortened),
        ));
    }
    let sent = n - spec.shortened;
    if spec.info_length == 0 || spec.info_length > sent {
        return Err(invalid(
            "info_length",
            format!("{} is outside (0, {sent}]", spec.info_length),
        ));
    }
    if !spec.design_snr_db.is_finite() {
        return Err(invalid("design_snr_db", "must be finite"));
    }
    Ok(sent)
}

/// Mean of a consistent Gaussian LLR (`N(m, 2m)`) whose mutual information
/// with the bit is `capacity`, from the standard fit of the J function.
pub fn llr_mean_for_capacity(capacity: f64) -> f64 {
    const H1: f64 = 0.3073;
    const H2: f64 = 0.8935;
    const H3: f64 = 1.1064;
    let c = capacity.clamp(1e-9, 1.0 - 1e-12);
    let sigma = (-(1.0 - c.powf(1.0 / H3)).log2() / H1).powf(1.0 / (2.0 * H2));
    sigma * sigma / 2.0
}

fn check_node(a: f64, b: f64, rule: CheckNode) -> f64 {
    match rule {
        CheckNode::MinSum => {
            let m = a.abs().min(b.abs());
            if (a < 0.0) != (b < 0.0) {
                -m
            } else {
                m
            }
        }
        CheckNode::Exact => {
            let t = (a / 2.0).tanh() * (b / 2.0).tanh();
            let t = t.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
            2.0 * t.atanh()
        }
    }
}

fn sc_decode(
    llr: &[f64],
    roles: &[BitRole],
    u: &mut [u8],
    x: &mut [u8],
    scratch: &mut [f64],
    rule: CheckNode,
) {
    let n = llr.len();
    if n == 1 {
        let bit = match roles[0] {
            BitRole::Info => (llr[0] < 0.0) as u8,
            BitRole::Frozen | BitRole::Shortened => 0,
        };
        u[0] = bit;
        x[0] = bit;
        return;
    }
    let h = n / 2;
    let (child, rest) = scratch.split_at_mut(h);
    let (l1, l2) = llr.split_at(h);
    for i in 0..h {
        child[i] = check_node(l1[i], l2[i], rule);
    }
    let (ua, ub) = u.split_at_mut(h);
    let (xa, xb) = x.split_at_mut(h);
    let (ra, rb) = roles.split_at(h);
    sc_decode(child, ra, ua, xa, rest, rule);
    for i in 0..h {
        child[i] = if xa[i] == 0 {
            l2[i] + l1[i]
        } else {
            l2[i] - l1[i]
        };
    }
    sc_decode(child, rb, ub, xb, rest, rule);
    for i in 0..h {
        xa[i] ^= xb[i];
    }
}

/// `ln phi(x)` for the Gaussian-approximation `phi` (Chung's fit).
fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < 10.0 {
        -0.4527 * x.powf(0.86) + 0.0218
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

fn inv_ln_phi(target: f64) -> f64 {
    if target >= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while ln_phi(hi) > target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Check-node mean: `phi^-1(1 - (1 - phi(a)) (1 - phi(b)))`.
fn ga_check(a: f64, b: f64) -> f64 {
    if a.is_infinite() {
        return b;
    }
    if b.is_infinite() {
        return a;
    }
    let (la, lb) = (ln_phi(a), ln_phi(b));
    // phi_a + phi_b - phi_a phi_b, in the log domain
    let (hi, lo) = if la > lb { (la, lb) } else { (lb, la) };
    let sum = hi + (lo - hi).exp().ln_1p();
    let prod = la + lb;
    let v = sum + (-(prod - sum).exp()).ln_1p();
    inv_ln_phi(v.min(0.0))
}

/// Mean LLR of every input bit channel given per-output channel means.
fn ga_means(channel: &[f64]) -> Vec<f64> {
    let n = channel.len();
    if n == 1 {
        return channel.to_vec();
    }
    let h = n / 2;
    let (m1, m2) = channel.split_at(h);
    let upper: Vec<f64> = m1.iter().zip(m2).map(|(&a, &b)| ga_check(a, b)).collect();
    let lower: Vec<f64> = m1.iter().zip(m2).map(|(&a, &b)| a + b).collect();
    let mut out = ga_means(&upper);
    out.extend(ga_means(&lower));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bits(n: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
        (0..n).map(|_| rng.random_range(0..2u8)).collect()
    }

    fn bpsk_llrs(code: &[u8], magnitude: f64) -> Vec<f64> {
        code.iter()
            .map(|&b| if b == 0 { magnitude } else { -magnitude })
            .collect()
    }

    #[test]
    fn kernel_of_length_two() {
        for (u0, u1) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let mut v = [u0, u1];
            polar_transform(&mut v);
            assert_eq!(v, [u0 ^ u1, u1]);
        }
        let cfg = PolarCodeConfig::construct(&PolarSpec {
            mother_length: 2,
            shortened: 0,
            info_length: 2,
            design_snr_db: 0.0,
        })
        .unwrap();
        assert!(cfg.frozen_positions().is_empty());
        assert_eq!(cfg.encode(&[1, 0]).unwrap(), vec![1, 0]);
        assert_eq!(cfg.encode(&[1, 1]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn length_four_single_info_bit_is_last() {
        for snr in [-2.0, 0.0, 3.0, 6.0] {
            let cfg = PolarCodeConfig::construct(&PolarSpec {
                mother_length: 4,
                shortened: 0,
                info_length: 1,
                design_snr_db: snr,
            })
            .unwrap();
            assert_eq!(cfg.info_positions(), &[3]);
            assert_eq!(cfg.frozen_positions(), vec![0, 1, 2]);
        }
    }

    #[test]
    fn standard_sizes() {
        let cfg =
            PolarCodeConfig::construct(&PolarSpec::standard(CodeRate::ThreeQuarters)).unwrap();
        assert_eq!(cfg.sent_length(), 2016);
        assert_eq!(cfg.info_length(), 1512);
        assert_eq!(cfg.shortening_set().len(), 32);
        assert_eq!(cfg.frozen_positions().len() + 1512 + 32, 2048);
        for p in cfg.info_positions() {
            assert!(!cfg.shortening_set().contains(p));
        }
        let k: Vec<usize> = CodeRate::ALL
            .iter()
            .map(|&r| PolarSpec::standard(r).info_length)
            .collect();
        assert_eq!(k, vec![1008, 1344, 1512, 1680]);
    }

    #[test]
    fn rate_one_has_no_frozen_bits() {
        let cfg = PolarCodeConfig::construct(&PolarSpec {
            mother_length: 64,
            shortened: 0,
            info_length: 64,
            design_snr_db: 6.0,
        })
        .unwrap();
        assert!(cfg.frozen_positions().is_empty());
    }

    #[test]
    fn construction_is_deterministic() {
        let a = PolarCodeConfig::construct(&PolarSpec::standard(CodeRate::TwoThirds)).unwrap();
        let b = PolarCodeConfig::construct(&PolarSpec::standard(CodeRate::TwoThirds)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_infeasible_sizes() {
        let bad = [
            PolarSpec {
                mother_length: 12,
                shortened: 0,
                info_length: 4,
                design_snr_db: 6.0,
            },
            PolarSpec {
                mother_length: 16,
                shortened: 16,
                info_length: 4,
                design_snr_db: 6.0,
            },
            PolarSpec {
                mother_length: 16,
                shortened: 4,
                info_length: 13,
                design_snr_db: 6.0,
            },
            PolarSpec {
                mother_length: 16,
                shortened: 0,
                info_length: 0,
                design_snr_db: 6.0,
            },
        ];
        for spec in bad {
            assert!(PolarCodeConfig::construct(&spec).is_err(), "{spec:?}");
        }
        let cfg = PolarCodeConfig::construct(&PolarSpec::standard(CodeRate::Half)).unwrap();
        assert!(cfg.encode(&[0; 10]).is_err());
        assert!(cfg.decode(&[0.0; 2048]).is_err());
    }

    #[test]
    fn encoder_matches_generator_matrix_n8() {
        // Oracle: G = F (x) F (x) F written out; G[j][i] = 1 iff i's bits are a subset of j's.
        let g: Vec<[u8; 8]> = (0..8)
            .map(|j| {
                let mut row = [0u8; 8];
                for (i, r) in row.iter_mut().enumerate() {
                    *r = ((i & j) == i) as u8;
                }
                row
            })
            .collect();
        let cfg = PolarCodeConfig::construct(&PolarSpec {
            mother_length: 8,
            shortened: 0,
            info_length: 4,
            design_snr_db: 3.0,
        })
        .unwrap();
        assert_eq!(cfg.info_positions(), &[3, 5, 6, 7]);
        for msg in 0..16u8 {
            let info: Vec<u8> = (0..4).map(|b| (msg >> b) & 1).collect();
            let mut u = [0u8; 8];
            for (&p, &b) in cfg.info_positions().iter().zip(&info) {
                u[p] = b;
            }
            let expect: Vec<u8> = (0..8)
                .map(|i| (0..8).fold(0, |acc, j| acc ^ (u[j] & g[j][i])))
                .collect();
            assert_eq!(cfg.encode(&info).unwrap(), expect);
        }
    }

    #[test]
    fn shortened_outputs_are_zero_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = PolarSpec::with_rate(256, 24, CodeRate::TwoThirds, 4.0);
        let cfg = PolarCodeConfig::construct(&spec).unwrap();
        let a = random_bits(cfg.info_length(), &mut rng);
        let mut u = vec![0u8; 256];
        for (&p, &b) in cfg.info_positions().iter().zip(&a) {
            u[p] = b;
        }
        polar_transform(&mut u);
        assert!(u[232..].iter().all(|&b| b == 0));
        assert_eq!(cfg.encode(&a).unwrap(), u[..232].to_vec());
        assert!(cfg
            .encode(&vec![0; cfg.info_length()])
            .unwrap()
            .iter()
            .all(|&b| b == 0));
    }

    #[test]
    fn noiseless_round_trip_every_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for rate in CodeRate::ALL {
            let cfg = PolarCodeConfig::construct(&PolarSpec::standard(rate)).unwrap();
            for _ in 0..3 {
                let info = random_bits(cfg.info_length(), &mut rng);
                let code = cfg.encode(&info).unwrap();
                assert_eq!(cfg.decode(&bpsk_llrs(&code, 20.0)).unwrap(), info);
            }
        }
    }

    #[test]
    fn shortened_llrs_are_ignored() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = PolarCodeConfig::construct(&PolarSpec::with_rate(128, 16, CodeRate::Half, 3.0))
            .unwrap();
        let info = random_bits(cfg.info_length(), &mut rng);
        let mut llr = bpsk_llrs(&cfg.encode(&info).unwrap(), 2.0);
        for v in llr.iter_mut() {
            *v += rng.random_range(-2.5..2.5);
        }
        llr.resize(128, 3.0);
        let reference = cfg.decode_mother(&llr).unwrap();
        for v in llr[112..].iter_mut() {
            *v = -*v * 10.0;
        }
        assert_eq!(cfg.decode_mother(&llr).unwrap(), reference);
    }

    #[test]
    fn exact_check_node_also_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cfg = PolarCodeConfig::construct(&PolarSpec::standard(CodeRate::FiveSixths))
            .unwrap()
            .with_check_node(CheckNode::Exact);
        let info = random_bits(cfg.info_length(), &mut rng);
        let code = cfg.encode(&info).unwrap();
        assert_eq!(cfg.decode(&bpsk_llrs(&code, 20.0)).unwrap(), info);
    }

    #[test]
    fn uniform_channel_matches_plain_construction() {
        let spec = PolarSpec::standard(CodeRate::ThreeQuarters);
        let a = PolarCodeConfig::construct(&spec).unwrap();
        let means = vec![4.0 * 10f64.powf(spec.design_snr_db / 10.0); a.sent_length()];
        let b = PolarCodeConfig::construct_for_channel(&spec, &means).unwrap();
        assert_eq!(a, b);
        assert!(PolarCodeConfig::construct_for_channel(&spec, &means[1..]).is_err());
    }

    #[test]
    fn capacity_inverse_matches_quadrature() {
        // Oracle: J(m) = 1 - E[log2(1 + exp(-L))], L ~ N(m, 2m), trapezoid rule.
        let j = |m: f64| {
            let sd = (2.0 * m).sqrt();
            let steps = 20_000;
            let (lo, hi) = (m - 12.0 * sd, m + 12.0 * sd);
            let h = (hi - lo) / steps as f64;
            let mut acc = 0.0;
            for i in 0..=steps {
                let l = lo + i as f64 * h;
                let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
                let pdf = (-(l - m) * (l - m) / (4.0 * m)).exp()
                    / (sd * (2.0 * std::f64::consts::PI).sqrt());
                let loss = if l < -30.0 {
                    -l / std::f64::consts::LN_2
                } else {
                    (-l).exp().ln_1p() / std::f64::consts::LN_2
                };
                acc += w * h * pdf * loss;
            }
            1.0 - acc
        };
        for m in [0.3, 1.0, 4.0, 12.0, 30.0] {
            let back = llr_mean_for_capacity(j(m));
            assert!((back / m - 1.0).abs() < 0.05, "{m} -> {back}");
        }
        assert!(llr_mean_for_capacity(0.2) < llr_mean_for_capacity(0.8));
    }
}
