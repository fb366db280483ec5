//! Secret keys from the legal receiver's feedback. A random coloring of the
//! Y1 block gives the key; its entropy is measured given the other
//! receiver's block Y2, and the key pads the next message.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::{ChaCha8Rng, ChaChaRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::probcore::{entropy_of, SUM_TOL};

/// Largest |Y1|^N * |Y2|^N enumerated exactly.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 24;
pub const BOOTSTRAP_RESAMPLES: usize = 32;
const CHUNK: usize = 4096;
const MERSENNE61: u64 = (1 << 61) - 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KeySimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("exhaustive mode needs |Y1|^N * |Y2|^N <= 2^24, got {0}")]
    Mode(u128),
    #[error("message of {bits} bits is longer than the {key_bits}-bit key")]
    MessageTooLong { bits: usize, key_bits: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    Exhaustive,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColoringKind {
    /// independent uniform color for every sequence
    #[default]
    Random,
    /// ((a x + b) mod (2^61 - 1)) mod gamma
    Universal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeySimConfig {
    pub blocklength: usize,
    pub key_rate: f64,
    /// per-symbol P(y1, y2), rows indexed by y1
    pub channel: Vec<Vec<f64>>,
    pub trials: usize,
    pub seed: u64,
    pub mode: SimMode,
    #[serde(default)]
    pub coloring: ColoringKind,
}

impl KeySimConfig {
    pub fn new(channel: Vec<Vec<f64>>, blocklength: usize, key_rate: f64, seed: u64) -> Self {
        KeySimConfig {
            blocklength,
            key_rate,
            channel,
            trials: 10_000,
            seed,
            mode: SimMode::Exhaustive,
            coloring: ColoringKind::Random,
        }
    }

    pub fn y1_size(&self) -> usize {
        self.channel.len()
    }

    pub fn y2_size(&self) -> usize {
        self.channel.first().map_or(0, Vec::len)
    }

    /// round(2^(N R)), at least 1.
    pub fn gamma(&self) -> u64 {
        (self.blocklength as f64 * self.key_rate).exp2().round().max(1.0) as u64
    }

    pub fn validate(&self) -> Result<(), KeySimError> {
        let bad = |m: &str| Err(KeySimError::Config(m.to_string()));
        if self.blocklength == 0 {
            return bad("blocklength must be positive");
        }
        if !self.key_rate.is_finite() || self.key_rate < 0.0 {
            return bad("key rate must be a finite nonnegative number");
        }
        if self.blocklength as f64 * self.key_rate > 62.0 {
            return bad("N * R must not exceed 62 bits");
        }
        if self.y1_size() == 0 || self.y2_size() == 0 {
            return bad("channel table is empty");
        }
        if self.channel.iter().any(|r| r.len() != self.y2_size()) {
            return bad("channel rows differ in length");
        }
        let flat = self.channel.iter().flatten();
        if flat.clone().any(|&v| !v.is_finite() || v < 0.0) {
            return bad("channel entries must be finite and nonnegative");
        }
        if (flat.sum::<f64>() - 1.0).abs() > SUM_TOL {
            return bad("channel entries must sum to 1");
        }
        if self.mode == SimMode::MonteCarlo && self.trials == 0 {
            return bad("trials must be positive");
        }
        if seq_count(self.y1_size(), self.blocklength).is_none() || seq_count(self.y2_size(), self.blocklength).is_none() {
            return bad("sequence space does not fit in 128 bits");
        }
        Ok(())
    }

    fn exhaustive_size(&self) -> u128 {
        let a = seq_count(self.y1_size(), self.blocklength).unwrap_or(u128::MAX);
        let b = seq_count(self.y2_size(), self.blocklength).unwrap_or(u128::MAX);
        a.saturating_mul(b)
    }

    /// H(Y1|Y2) of one symbol.
    pub fn symbol_cond_entropy(&self) -> f64 {
        let joint: Vec<f64> = self.channel.iter().flatten().copied().collect();
        let y2: Vec<f64> = (0..self.y2_size()).map(|j| self.channel.iter().map(|r| r[j]).sum()).collect();
        entropy_of(&joint) - entropy_of(&y2)
    }

    /// min{log2 gamma, N H(Y1|Y2) + log2(N+1) |Y1|}.
    pub fn entropy_ceiling(&self) -> f64 {
        let n = self.blocklength as f64;
        let types = n * self.symbol_cond_entropy() + (n + 1.0).log2() * self.y1_size() as f64;
        (self.gamma() as f64).log2().min(types)
    }
}

fn seq_count(alphabet: usize, n: usize) -> Option<u128> {
    (alphabet as u128).checked_pow(u32::try_from(n).ok()?)
}

/// A reproducible map from Y1-sequence indices to colors 0..gamma.
#[derive(Debug, Clone)]
pub struct Coloring {
    pub gamma: u64,
    pub kind: ColoringKind,
    /// gamma exceeds the number of Y1 sequences
    pub degenerate: bool,
    rng: ChaChaRng,
    a: u64,
    b: u64,
}

impl Coloring {
    fn from_word(&self, w: u64) -> u64 {
        ((w as u128 * self.gamma as u128) >> 64) as u64
    }

    /// Color of the sequence with base-|Y1| index `idx` (first symbol most significant).
    pub fn color(&self, idx: u128) -> u64 {
        match self.kind {
            ColoringKind::Random => {
                let mut r = self.rng.clone();
                r.set_word_pos(2 * idx);
                self.from_word(r.next_u64())
            }
            ColoringKind::Universal => {
                let x = (idx % MERSENNE61 as u128) as u64;
                let v = (self.a as u128 * x as u128 + self.b as u128) % MERSENNE61 as u128;
                v as u64 % self.gamma
            }
        }
    }

    /// Colors of sequences 0..count in order.
    pub fn table(&self, count: usize) -> Vec<u64> {
        match self.kind {
            ColoringKind::Random => {
                let mut r = self.rng.clone();
                r.set_word_pos(0);
                (0..count).map(|_| self.from_word(r.next_u64())).collect()
            }
            ColoringKind::Universal => (0..count as u128).map(|i| self.color(i)).collect(),
        }
    }
}

pub fn draw_coloring(y1_size: usize, n: usize, gamma: u64, seed: u64, kind: ColoringKind) -> Result<Coloring, KeySimError> {
    if gamma == 0 {
        return Err(KeySimError::Config("gamma must be at least 1".into()));
    }
    let mut rng = ChaChaRng::seed_from_u64(seed);
    let a = rng.gen_range(1..MERSENNE61);
    let b = rng.gen_range(0..MERSENNE61);
    rng.set_word_pos(0);
    let degenerate = seq_count(y1_size, n).map_or(false, |m| gamma as u128 > m);
    Ok(Coloring { gamma, kind, degenerate, rng, a, b })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeySimReport {
    pub mode: SimMode,
    pub gamma: u64,
    pub key_bits: f64,
    pub empirical_key_entropy: f64,
    pub conditional_key_entropy: f64,
    pub uniformity_distance: f64,
    pub leakage: f64,
    /// bootstrap standard error of conditional_key_entropy; 0 when exact
    pub standard_error: f64,
    pub samples: usize,
    pub degenerate_coloring: bool,
}

impl KeySimReport {
    pub fn summary(&self) -> String {
        format!(
            "{:?}: gamma={} H(K)={:.6} H(K|Y2^N)={:.6} (log2 gamma {:.6}) leakage={:.6} tv={:.6} se={:.6}",
            self.mode,
            self.gamma,
            self.empirical_key_entropy,
            self.conditional_key_entropy,
            self.key_bits,
            self.leakage,
            self.uniformity_distance,
            self.standard_error
        )
    }
}

/// P(y1^N | ...) jointly with a fixed y2^N, as a table over y1 indices.
fn block_probs(channel: &[Vec<f64>], y2_digits: &[usize]) -> Vec<f64> {
    let mut cur = vec![1.0];
    for &y2 in y2_digits {
        let mut next = Vec::with_capacity(cur.len() * channel.len());
        for &c in &cur {
            for row in channel {
                next.push(c * row[y2]);
            }
        }
        cur = next;
    }
    cur
}

fn digits(mut idx: usize, base: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for slot in d.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    d
}

/// Per y2-block: P(y2^N), H(K|y2^N), TV(K|y2^N, uniform), and P(K = k, y2^N) folded into pk.
fn key_given_block(probs: &[f64], colors: &[u64], gamma: u64, dense: bool) -> (f64, f64, f64, Vec<(u64, f64)>) {
    let mut by_color: Vec<(u64, f64)> = if dense {
        let mut v = vec![0.0; gamma as usize];
        for (&p, &c) in probs.iter().zip(colors) {
            v[c as usize] += p;
        }
        v.into_iter().enumerate().filter(|e| e.1 > 0.0).map(|(c, p)| (c as u64, p)).collect()
    } else {
        let mut v: Vec<(u64, f64)> = colors.iter().copied().zip(probs.iter().copied()).filter(|e| e.1 > 0.0).collect();
        v.sort_by_key(|e| e.0);
        v.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        v
    };
    let py2: f64 = by_color.iter().map(|e| e.1).sum();
    if py2 <= 0.0 {
        return (0.0, 0.0, 0.0, Vec::new());
    }
    let cond: Vec<f64> = by_color.iter().map(|e| e.1 / py2).collect();
    let u = 1.0 / gamma as f64;
    let tv = 0.5 * (cond.iter().map(|&p| (p - u).abs()).sum::<f64>() + (gamma as f64 - cond.len() as f64) * u);
    by_color.shrink_to_fit();
    (py2, entropy_of(&cond), tv, by_color)
}

struct Exact {
    hk: f64,
    hk_y2: f64,
    tv: f64,
}

/// Exact statistics of K' = reduce(K) given Y2^N.
fn exact_stats(config: &KeySimConfig, coloring: &Coloring, reduce: impl Fn(u64) -> u64 + Sync, out_size: u64) -> Exact {
    let (a, b, n) = (config.y1_size(), config.y2_size(), config.blocklength);
    let m1 = a.pow(n as u32);
    let m2 = b.pow(n as u32);
    let colors: Vec<u64> = coloring.table(m1).into_iter().map(&reduce).collect();
    let dense = out_size <= 4 * m1 as u64;
    let per_block: Vec<_> = (0..m2)
        .into_par_iter()
        .map(|j| key_given_block(&block_probs(&config.channel, &digits(j, b, n)), &colors, out_size, dense))
        .collect();
    let mut pk: HashMap<u64, f64> = HashMap::new();
    let (mut hk_y2, mut tv) = (0.0, 0.0);
    for (py2, h, t, joint) in &per_block {
        hk_y2 += py2 * h;
        tv += py2 * t;
        for &(c, p) in joint {
            *pk.entry(c).or_insert(0.0) += p;
        }
    }
    let mut marg: Vec<(u64, f64)> = pk.into_iter().collect();
    marg.sort_by_key(|e| e.0);
    let hk = entropy_of(&marg.iter().map(|e| e.1).collect::<Vec<_>>());
    Exact { hk, hk_y2, tv }
}

/// Plug-in entropy with the Miller-Madow correction, from counts.
fn miller_madow<K: Ord + Copy>(counts: &HashMap<K, u64>, n: usize) -> f64 {
    let mut c: Vec<(K, u64)> = counts.iter().map(|(k, v)| (*k, *v)).collect();
    c.sort_by_key(|e| e.0);
    let p: Vec<f64> = c.iter().map(|e| e.1 as f64 / n as f64).collect();
    entropy_of(&p) + (c.len() as f64 - 1.0) / (2.0 * n as f64 * std::f64::consts::LN_2)
}

struct McEstimate {
    hk: f64,
    hk_y2: f64,
    tv: f64,
}

fn estimate(samples: &[(u64, u128)], gamma: u64) -> McEstimate {
    let n = samples.len();
    let mut ck: HashMap<u64, u64> = HashMap::new();
    let mut cy: HashMap<u128, u64> = HashMap::new();
    let mut cky: HashMap<(u128, u64), u64> = HashMap::new();
    for &(k, y) in samples {
        *ck.entry(k).or_insert(0) += 1;
        *cy.entry(y).or_insert(0) += 1;
        *cky.entry((y, k)).or_insert(0) += 1;
    }
    let hk = miller_madow(&ck, n);
    let hk_y2 = (miller_madow(&cky, n) - miller_madow(&cy, n)).clamp(0.0, hk.min((gamma as f64).log2()).max(0.0));
    // plug-in TV averaged over observed y2 blocks
    let mut by_y: Vec<((u128, u64), u64)> = cky.into_iter().collect();
    by_y.sort_by_key(|e| e.0);
    let u = 1.0 / gamma as f64;
    let mut tv = 0.0;
    let mut i = 0;
    while i < by_y.len() {
        let y = by_y[i].0 .0;
        let ny = cy[&y] as f64;
        let mut seen = 0.0;
        let mut dev = 0.0;
        while i < by_y.len() && by_y[i].0 .0 == y {
            dev += (by_y[i].1 as f64 / ny - u).abs();
            seen += 1.0;
            i += 1;
        }
        tv += ny / n as f64 * 0.5 * (dev + (gamma as f64 - seen).max(0.0) * u);
    }
    McEstimate { hk, hk_y2, tv }
}

fn seq_index(seq: &[usize], base: usize) -> u128 {
    seq.iter().fold(0u128, |acc, &d| acc * base as u128 + d as u128)
}

/// Draws `trials` blocks; each chunk of CHUNK trials has its own ChaCha stream.
fn sample_blocks(config: &KeySimConfig, coloring: &Coloring, stream_base: u64) -> Vec<(u64, u128, u128)> {
    let (a, b, n) = (config.y1_size(), config.y2_size(), config.blocklength);
    let weights: Vec<f64> = config.channel.iter().flatten().copied().collect();
    let dist = WeightedIndex::new(&weights).expect("validated channel");
    let chunks = config.trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(stream_base + c as u64);
            let len = CHUNK.min(config.trials - c * CHUNK);
            let mut s1 = vec![0; n];
            let mut s2 = vec![0; n];
            let dist = &dist;
            (0..len)
                .map(move |_| {
                    for t in 0..n {
                        let cell = dist.sample(&mut rng);
                        s1[t] = cell / b;
                        s2[t] = cell % b;
                    }
                    let i1 = seq_index(&s1, a);
                    (coloring.color(i1), i1, seq_index(&s2, b))
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn bootstrap_se(samples: &[(u64, u128)], gamma: u64, seed: u64) -> f64 {
    let n = samples.len();
    let est: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1 << 32 | r as u64);
            let re: Vec<(u64, u128)> = (0..n).map(|_| samples[rng.gen_range(0..n)]).collect();
            estimate(&re, gamma).hk_y2
        })
        .collect();
    let mean = est.iter().sum::<f64>() / est.len() as f64;
    (est.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (est.len() - 1) as f64).sqrt()
}

pub fn run_key_extraction(config: &KeySimConfig) -> Result<KeySimReport, KeySimError> {
    config.validate()?;
    let gamma = config.gamma();
    let coloring = draw_coloring(config.y1_size(), config.blocklength, gamma, config.seed, config.coloring)?;
    let key_bits = (gamma as f64).log2();
    let (hk, hk_y2, tv, se, samples) = match config.mode {
        SimMode::Exhaustive => {
            let size = config.exhaustive_size();
            if size > EXHAUSTIVE_LIMIT {
                return Err(KeySimError::Mode(size));
            }
            let e = exact_stats(config, &coloring, |k| k, gamma);
            (e.hk, e.hk_y2.min(e.hk), e.tv, 0.0, size as usize)
        }
        SimMode::MonteCarlo => {
            let blocks: Vec<(u64, u128)> = sample_blocks(config, &coloring, 0).into_iter().map(|s| (s.0, s.2)).collect();
            let e = estimate(&blocks, gamma);
            (e.hk, e.hk_y2, e.tv, bootstrap_se(&blocks, gamma, config.seed), blocks.len())
        }
    };
    Ok(KeySimReport {
        mode: config.mode,
        gamma,
        key_bits,
        empirical_key_entropy: hk,
        conditional_key_entropy: hk_y2,
        uniformity_distance: tv,
        leakage: hk - hk_y2,
        standard_error: se,
        samples,
        degenerate_coloring: coloring.degenerate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OtpReport {
    pub decode_ok: bool,
    pub message_bits: usize,
    /// I(W; W xor K, Y2^N) in bits
    pub message_leakage: f64,
    pub leakage_per_bit: f64,
    pub trials: usize,
}

/// Encrypts a uniform `message_bits`-bit W with the low bits of K and has
/// the legal receiver decrypt from its own Y1 block.
pub fn run_otp_roundtrip(config: &KeySimConfig, message_bits: usize) -> Result<OtpReport, KeySimError> {
    config.validate()?;
    let key_bits = (config.blocklength as f64 * config.key_rate + 1e-9).floor() as usize;
    if message_bits > key_bits {
        return Err(KeySimError::MessageTooLong { bits: message_bits, key_bits });
    }
    let gamma = config.gamma();
    let coloring = draw_coloring(config.y1_size(), config.blocklength, gamma, config.seed, config.coloring)?;
    let mask = (1u64 << message_bits) - 1;

    let blocks = sample_blocks(config, &coloring, 1 << 40);
    let mut wrng = ChaCha8Rng::seed_from_u64(config.seed);
    wrng.set_stream(1 << 48);
    let decode_ok = blocks.iter().all(|&(k, i1, _)| {
        let w = wrng.next_u64() & mask;
        let c = w ^ (k & mask);
        // the legal receiver recolors its own block
        c ^ (coloring.color(i1) & mask) == w
    });

    let leakage = if message_bits == 0 {
        0.0
    } else {
        let m = message_bits as f64;
        let cond = match config.mode {
            SimMode::Exhaustive => {
                let size = config.exhaustive_size();
                if size > EXHAUSTIVE_LIMIT {
                    return Err(KeySimError::Mode(size));
                }
                exact_stats(config, &coloring, |k| k & mask, mask + 1).hk_y2
            }
            SimMode::MonteCarlo => {
                let red: Vec<(u64, u128)> = blocks.iter().map(|s| (s.0 & mask, s.2)).collect();
                estimate(&red, mask + 1).hk_y2
            }
        };
        (m - cond).max(0.0)
    };
    Ok(OtpReport {
        decode_ok,
        message_bits,
        message_leakage: leakage,
        leakage_per_bit: if message_bits == 0 { 0.0 } else { leakage / message_bits as f64 },
        trials: blocks.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierRow {
    pub rate: f64,
    pub gamma: u64,
    pub conditional_key_entropy: f64,
    /// H(K|Y2^N) / (N R); 1 at R = 0
    pub normalized: f64,
}

/// Exhaustive H(K|Y2^N)/(N R) over a grid of key rates. When N R is not an
/// integer, gamma = round(2^(N R)) can exceed 2^(N R) and the ratio can pass 1.
pub fn key_rate_frontier(channel: &[Vec<f64>], n: usize, rates: &[f64], seed: u64) -> Result<Vec<FrontierRow>, KeySimError> {
    rates
        .iter()
        .map(|&rate| {
            let cfg = KeySimConfig::new(channel.to_vec(), n, rate, seed);
            let rep = run_key_extraction(&cfg)?;
            let nr = n as f64 * rate;
            let normalized = if rep.gamma == 1 { 1.0 } else { rep.conditional_key_entropy / nr };
            Ok(FrontierRow { rate, gamma: rep.gamma, conditional_key_entropy: rep.conditional_key_entropy, normalized })
        })
        .collect()
}

/// Binary Y1 uniform and independent of a uniform binary Y2.
pub fn independent_channel() -> Vec<Vec<f64>> {
    vec![vec![0.25, 0.25], vec![0.25, 0.25]]
}

/// Binary Y1 = Y2, uniform.
pub fn identical_channel() -> Vec<Vec<f64>> {
    vec![vec![0.5, 0.0], vec![0.0, 0.5]]
}

/// Y2 is Y1 through a binary symmetric channel with crossover `e`.
pub fn bsc_channel(e: f64) -> Vec<Vec<f64>> {
    vec![vec![0.5 * (1.0 - e), 0.5 * e], vec![0.5 * e, 0.5 * (1.0 - e)]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_rounding() {
        let c = KeySimConfig::new(independent_channel(), 8, 0.75, 1);
        assert_eq!(c.gamma(), 64);
        assert_eq!(KeySimConfig::new(independent_channel(), 8, 0.0, 1).gamma(), 1);
        assert_eq!(KeySimConfig::new(independent_channel(), 3, 0.2, 1).gamma(), 2);
    }

    #[test]
    fn coloring_table_matches_pointwise() {
        for kind in [ColoringKind::Random, ColoringKind::Universal] {
            let c = draw_coloring(2, 10, 37, 9, kind).unwrap();
            let t = c.table(1024);
            for i in [0usize, 1, 5, 511, 1023] {
                assert_eq!(t[i], c.color(i as u128));
            }
            assert!(t.iter().all(|&k| k < 37));
        }
        assert!(draw_coloring(2, 3, 9, 0, ColoringKind::Random).unwrap().degenerate);
        let one = draw_coloring(2, 6, 1, 3, ColoringKind::Random).unwrap();
        assert!(one.table(64).iter().all(|&k| k == 0));
    }

    #[test]
    fn zero_rate_is_all_zero() {
        let r = run_key_extraction(&KeySimConfig::new(bsc_channel(0.1), 6, 0.0, 5)).unwrap();
        assert_eq!((r.empirical_key_entropy, r.conditional_key_entropy, r.leakage), (0.0, 0.0, 0.0));
    }

    #[test]
    fn identical_channel_leaks_everything() {
        let cfg = KeySimConfig::new(identical_channel(), 8, 0.75, 11);
        let r = run_key_extraction(&cfg).unwrap();
        assert_eq!(r.conditional_key_entropy, 0.0);
        assert!((r.leakage - r.empirical_key_entropy).abs() < 1e-12);
        let o = run_otp_roundtrip(&cfg, 6).unwrap();
        assert!(o.decode_ok);
        assert!((o.message_leakage - 6.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let mut cfg = KeySimConfig::new(independent_channel(), 13, 0.5, 0);
        assert!(matches!(run_key_extraction(&cfg), Err(KeySimError::Mode(_))));
        cfg.blocklength = 4;
        assert!(matches!(run_otp_roundtrip(&cfg, 3), Err(KeySimError::MessageTooLong { .. })));
        assert_eq!(run_otp_roundtrip(&cfg, 0).unwrap().message_leakage, 0.0);
        cfg.channel = vec![vec![0.5, 0.6]];
        assert!(matches!(run_key_extraction(&cfg), Err(KeySimError::Config(_))));
    }

    #[test]
    fn ceiling_and_cond_entropy() {
        let c = KeySimConfig::new(bsc_channel(0.11), 10, 1.0, 0);
        assert!((c.symbol_cond_entropy() - crate::probcore::h(0.11)).abs() < 1e-12);
        let r = run_key_extraction(&c).unwrap();
        assert!(r.conditional_key_entropy <= c.entropy_ceiling() + 1e-9);
    }
}
