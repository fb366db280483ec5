//! The Dueck-type and Blackwell-type example channels: distribution
//! constructors, closed-form regions, sum-rate optimization and sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{BoundsError, RateRows, SchemeDistribution, EXT_VARS};
use crate::polyregion::{HalfSpaceSystem, PolyError};
use crate::probcore::{conv, h, xlog1x, Alphabet, JointPmf, ProbError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("closed forms are only defined at alpha1 = alpha2 = alpha3 = 1/2")]
    PinnedAlpha,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn check_range(name: &str, v: f64, lo: f64, hi: f64) -> Result<(), ChannelError> {
    if v.is_finite() && v >= lo && v <= hi {
        Ok(())
    } else {
        Err(ChannelError::Invalid(format!("{name} = {v} outside [{lo}, {hi}]")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseCase {
    /// Z0 -> Z1 -> Z2
    Chain,
    /// Z1 -> Z0 -> Z2
    Star,
}

impl NoiseCase {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(NoiseCase::Chain),
            2 => Some(NoiseCase::Star),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            NoiseCase::Chain => 1,
            NoiseCase::Star => 2,
        }
    }
}

/// Which noise pair forms V0 in the Dueck extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum V0Choice {
    #[default]
    Z0Z1,
    Z0Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DueckParams {
    pub case: NoiseCase,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub v0: V0Choice,
}

impl DueckParams {
    /// Uniform inputs, default V0 = (Z0, Z1).
    pub fn new(case: NoiseCase, p: f64, q: f64, r: f64) -> Self {
        DueckParams { case, p, q, r, alpha1: 0.5, alpha2: 0.5, alpha3: 0.5, v0: V0Choice::Z0Z1 }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        for (n, v) in [("p", self.p), ("q", self.q), ("r", self.r)] {
            check_range(n, v, 0.0, 0.5)?;
        }
        for (n, v) in [("alpha1", self.alpha1), ("alpha2", self.alpha2), ("alpha3", self.alpha3)] {
            check_range(n, v, 0.0, 1.0)?;
        }
        Ok(())
    }

    fn pinned(&self) -> Result<(), ChannelError> {
        self.validate()?;
        if [self.alpha1, self.alpha2, self.alpha3].iter().any(|a| (a - 0.5).abs() > 1e-12) {
            return Err(ChannelError::PinnedAlpha);
        }
        Ok(())
    }
}

/// P(z0,z1,z2) indexed z0*4 + z1*2 + z2.
pub fn dueck_noise(case: NoiseCase, p: f64, q: f64, r: f64) -> [f64; 8] {
    let flip = |a: usize, b: usize, e: f64| if a == b { 1.0 - e } else { e };
    let mut out = [0.0; 8];
    for (k, o) in out.iter_mut().enumerate() {
        let (z0, z1, z2) = (k >> 2, (k >> 1) & 1, k & 1);
        let p0 = if z0 == 1 { p } else { 1.0 - p };
        let parent2 = match case {
            NoiseCase::Chain => z1,
            NoiseCase::Star => z0,
        };
        *o = p0 * flip(z0, z1, q) * flip(parent2, z2, r);
    }
    out
}

/// Extended Dueck joint: Q = X0, U1 = X1, U2 = X2, X = (X0,X1,X2),
/// Y1 = (Y10,Y11), Y2 = (Y20,Y21), V1 = (X0,X1), V2 = (X0,X2), V0 per `v0`.
pub fn dueck_distribution(params: &DueckParams) -> Result<SchemeDistribution, ChannelError> {
    params.validate()?;
    let noise = dueck_noise(params.case, params.p, params.q, params.r);
    let bern = |a: f64, x: usize| if x == 0 { a } else { 1.0 - a };
    let sizes = [2, 2, 2, 8, 4, 4, 4, 4, 4];
    let vars = EXT_VARS.iter().zip(sizes).map(|(n, s)| Alphabet::new(*n, s)).collect();
    let v0 = params.v0;
    let ext = JointPmf::from_fn(vars, |i| {
        let (q, u1, u2, x, y1, y2, w0, w1, w2) = (i[0], i[1], i[2], i[3], i[4], i[5], i[6], i[7], i[8]);
        let (x0, x1, x2) = (x >> 2, (x >> 1) & 1, x & 1);
        if q != x0 || u1 != x1 || u2 != x2 {
            return 0.0;
        }
        let (y10, y11, y20, y21) = (y1 >> 1, y1 & 1, y2 >> 1, y2 & 1);
        if y10 != y20 {
            return 0.0;
        }
        let (z0, z1, z2) = (x0 ^ y10, x1 ^ y11, x2 ^ y21);
        let v0_val = match v0 {
            V0Choice::Z0Z1 => z0 * 2 + z1,
            V0Choice::Z0Z2 => z0 * 2 + z2,
        };
        if w0 != v0_val || w1 != x0 * 2 + x1 || w2 != x0 * 2 + x2 {
            return 0.0;
        }
        bern(params.alpha1, x0) * bern(params.alpha2, x1) * bern(params.alpha3, x2) * noise[z0 * 4 + z1 * 2 + z2]
    })?;
    Ok(SchemeDistribution::from_extended(ext)?)
}

fn rows(items: &[(&str, i64, i64, f64)]) -> RateRows {
    let mut r = RateRows::default();
    for &(l, a, b, v) in items {
        r.push(l, a, b, v);
    }
    r
}

/// Secret-key inner bound of the Dueck example (labels key1, key2, plain1, plain2, sum).
pub fn dueck_closed_inner1_rows(params: &DueckParams) -> Result<RateRows, ChannelError> {
    params.pinned()?;
    let (hp, hq, hr, hrq) = (h(params.p), h(params.q), h(params.r), h(conv(params.r, params.q)));
    Ok(match params.case {
        NoiseCase::Chain => rows(&[
            ("key1", 1, 0, 1.0 - hrq + hr),
            ("key2", 0, 1, 1.0 - hrq + hr),
            ("plain1", 1, 0, 2.0 - hp - hq),
            ("plain2", 0, 1, 2.0 - hp - hrq),
            ("sum", 1, 1, 3.0 - hq - hp - hrq),
        ]),
        NoiseCase::Star => rows(&[
            ("key1", 1, 0, 1.0),
            ("key2", 0, 1, 1.0),
            ("plain1", 1, 0, 2.0 - hp - hq),
            ("plain2", 0, 1, 2.0 - hp - hr),
            ("sum", 1, 1, 3.0 - hq - hp - hr),
        ]),
    })
}

/// Hybrid inner bound of the Dueck example (labels user1, user2, cap1, cap2, sum).
pub fn dueck_closed_inner2_rows(params: &DueckParams) -> Result<RateRows, ChannelError> {
    params.pinned()?;
    let (hp, hq, hr, hrq) = (h(params.p), h(params.q), h(params.r), h(conv(params.r, params.q)));
    Ok(match params.case {
        NoiseCase::Chain => rows(&[
            ("user1", 1, 0, 1.0 + hq - hrq + hr),
            ("user2", 0, 1, 1.0 + hr),
            ("cap1", 1, 0, 2.0 - hp - hq),
            ("cap2", 0, 1, 2.0 - hp - hrq),
            ("sum", 1, 1, 3.0 - hp - hq - hr),
        ]),
        NoiseCase::Star => rows(&[
            ("user1", 1, 0, 1.0 + hq),
            ("user2", 0, 1, 1.0 + hr),
            ("cap1", 1, 0, 2.0 - hp - hq),
            ("cap2", 0, 1, 2.0 - hp - hr),
            ("sum", 1, 1, 3.0 - hp - hq - hr),
        ]),
    })
}

/// Cut-set outer bound of the Dueck example (labels cap1, cap2, sum).
pub fn dueck_closed_outer_rows(params: &DueckParams) -> Result<RateRows, ChannelError> {
    params.pinned()?;
    let (hp, hq, hr, hrq) = (h(params.p), h(params.q), h(params.r), h(conv(params.r, params.q)));
    let h2 = match params.case {
        NoiseCase::Chain => hrq,
        NoiseCase::Star => hr,
    };
    Ok(rows(&[
        ("cap1", 1, 0, 2.0 - hp - hq),
        ("cap2", 0, 1, 2.0 - hp - h2),
        ("sum", 1, 1, 3.0 - hp - hq - hr),
    ]))
}

/// Non-feedback region of the Dueck example (labels nf1, nf2).
pub fn dueck_closed_nofeedback_rows(params: &DueckParams) -> Result<RateRows, ChannelError> {
    params.pinned()?;
    let h2 = match params.case {
        NoiseCase::Chain => h(conv(params.r, params.q)),
        NoiseCase::Star => h(params.r),
    };
    Ok(rows(&[("nf1", 1, 0, 1.0 - h(params.q)), ("nf2", 0, 1, 1.0 - h2)]))
}

pub fn dueck_closed_inner1(params: &DueckParams) -> Result<HalfSpaceSystem, ChannelError> {
    Ok(dueck_closed_inner1_rows(params)?.system())
}

pub fn dueck_closed_inner2(params: &DueckParams) -> Result<HalfSpaceSystem, ChannelError> {
    Ok(dueck_closed_inner2_rows(params)?.system())
}

pub fn dueck_closed_outer(params: &DueckParams) -> Result<HalfSpaceSystem, ChannelError> {
    Ok(dueck_closed_outer_rows(params)?.system())
}

pub fn dueck_closed_nofeedback(params: &DueckParams) -> Result<HalfSpaceSystem, ChannelError> {
    Ok(dueck_closed_nofeedback_rows(params)?.system())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlackwellParams {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl BlackwellParams {
    /// Outer-bound input law defaults to uniform over {0,1,2}.
    pub fn new(p: f64, alpha: f64, beta: f64) -> Self {
        BlackwellParams { p, alpha, beta, alpha1: 1.0 / 3.0, alpha2: 1.0 / 3.0 }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        check_range("p", self.p, 0.0, 0.5)?;
        for (n, v) in [("alpha", self.alpha), ("beta", self.beta), ("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            check_range(n, v, 0.0, 1.0)?;
        }
        if self.alpha + self.beta > 1.0 + 1e-12 {
            return Err(ChannelError::Invalid("alpha + beta > 1".into()));
        }
        if self.alpha1 + self.alpha2 > 1.0 + 1e-12 {
            return Err(ChannelError::Invalid("alpha1 + alpha2 > 1".into()));
        }
        Ok(())
    }
}

/// P(u1,u2|q) of the Blackwell scheme, indexed q*4 + u1*2 + u2.
fn blackwell_pu(alpha: f64, beta: f64) -> [f64; 8] {
    let mid = (1.0 - alpha - beta).max(0.0);
    [alpha, 0.0, mid, beta, beta, 0.0, mid, alpha]
}

fn blackwell_joint(params: &BlackwellParams, extended: bool) -> Result<SchemeDistribution, ChannelError> {
    params.validate()?;
    let pu = blackwell_pu(params.alpha, params.beta);
    let p = params.p;
    let bern = |z: usize| if z == 1 { p } else { 1.0 - p };
    let names: &[&str] = if extended { &EXT_VARS } else { &EXT_VARS[..6] };
    let sizes = [2, 2, 2, 3, 2, 2, 4, 2, 2];
    let vars = names.iter().zip(sizes).map(|(n, s)| Alphabet::new(*n, s)).collect();
    let pmf = JointPmf::from_fn(vars, |i| {
        let (q, u1, u2, x, y1, y2) = (i[0], i[1], i[2], i[3], i[4], i[5]);
        if x != u1 + u2 {
            return 0.0;
        }
        let (b1, b2) = (usize::from(x >= 1), usize::from(x == 2));
        let (z1, z2) = (y1 ^ b1, y2 ^ b2);
        if extended && (i[6] != z1 * 2 + z2 || i[7] != u1 || i[8] != u2) {
            return 0.0;
        }
        0.5 * pu[q * 4 + u1 * 2 + u2] * bern(z1) * bern(z2)
    })?;
    Ok(if extended { SchemeDistribution::from_extended(pmf)? } else { SchemeDistribution::new(pmf)? })
}

/// Q uniform, (U1,U2)|Q per the alpha/beta table, X = U1 + U2,
/// Y1 = [X >= 1] xor Z1, Y2 = [X = 2] xor Z2 with Z1, Z2 ~ Bern(p).
pub fn blackwell_distribution(params: &BlackwellParams) -> Result<SchemeDistribution, ChannelError> {
    blackwell_joint(params, false)
}

/// The same joint extended with V0 = (Z1, Z2), V1 = U1, V2 = U2.
pub fn blackwell_extended(params: &BlackwellParams) -> Result<SchemeDistribution, ChannelError> {
    blackwell_joint(params, true)
}

/// I(U1;U2|Q) of the alpha/beta table.
pub fn blackwell_tail(alpha: f64, beta: f64) -> f64 {
    xlog1x(1.0 - alpha) + xlog1x(1.0 - beta) - xlog1x((1.0 - alpha - beta).max(0.0))
}

fn tern(a: f64, b: f64) -> f64 {
    xlog1x(a) + xlog1x(b) + xlog1x((1.0 - a - b).max(0.0))
}

/// Secret-key inner bound, labels key1, key2, plain1, plain2, sum.
/// The per-user key rows carry the clamp [.]^+ before adding h(p).
pub fn blackwell_closed_inner1_rows(params: &BlackwellParams) -> Result<RateRows, ChannelError> {
    params.validate()?;
    Ok(bw_inner1(params.p, params.alpha, params.beta))
}

fn bw_inner1(p: f64, a: f64, b: f64) -> RateRows {
    let hp = h(p);
    let base = 0.5 * h(conv(a, p)) + 0.5 * h(conv(b, p));
    let tail = blackwell_tail(a, b);
    let key = (base - hp - tail).max(0.0) + hp;
    rows(&[
        ("key1", 1, 0, key),
        ("key2", 0, 1, key),
        ("plain1", 1, 0, base - hp),
        ("plain2", 0, 1, base - hp),
        ("sum", 1, 1, h(conv(a, p)) + h(conv(b, p)) - tail),
    ])
}

/// Hybrid inner bound, labels user1, user2, cap1, cap2, sum.
pub fn blackwell_closed_inner2_rows(params: &BlackwellParams) -> Result<RateRows, ChannelError> {
    params.validate()?;
    Ok(bw_inner2(params.p, params.alpha, params.beta))
}

fn bw_inner2(p: f64, a: f64, b: f64) -> RateRows {
    let hp = h(p);
    let half = 0.5 * h(a) + 0.5 * h(b);
    let user = half.min(tern(a, b) - half + hp);
    let m = 0.5 * (a + b);
    rows(&[
        ("user1", 1, 0, user),
        ("user2", 0, 1, user),
        ("cap1", 1, 0, h(conv(m, p)) - 2.0 * hp),
        ("cap2", 0, 1, h(conv(m, 1.0 - p)) - 2.0 * hp),
        ("sum", 1, 1, h(conv(m, p)) - 2.0 * hp - half + tern(a, b)),
    ])
}

/// H(Y1,Y2) for P(X) = (a1, a2, 1-a1-a2).
pub fn blackwell_a(p: f64, a1: f64, a2: f64) -> f64 {
    let pb = 1.0 - p;
    let a3 = (1.0 - a1 - a2).max(0.0);
    let cells = [
        a1 * pb * pb + a2 * p * pb + a3 * p * p,
        a1 * pb * p + a2 * p * p + a3 * p * pb,
        a1 * pb * p + a2 * pb * pb + a3 * p * pb,
        a1 * p * p + a2 * p * pb + a3 * pb * pb,
    ];
    cells.iter().map(|&c| xlog1x(c)).sum()
}

/// Outer bound, labels out1, out2.
pub fn blackwell_closed_outer_rows(params: &BlackwellParams) -> Result<RateRows, ChannelError> {
    params.validate()?;
    Ok(bw_outer(params.p, params.alpha1, params.alpha2))
}

fn bw_outer(p: f64, a1: f64, a2: f64) -> RateRows {
    let hp = h(p);
    let a = blackwell_a(p, a1, a2);
    let (h1, h12) = (h(conv(a1, p)), h(conv(a1 + a2, p)));
    rows(&[("out1", 1, 0, (h1 - hp).min(a - h12)), ("out2", 0, 1, (h12 - hp).min(a - h1))])
}

/// Non-feedback region, labels nf1, nf2.
pub fn blackwell_closed_nofeedback_rows(params: &BlackwellParams) -> Result<RateRows, ChannelError> {
    params.validate()?;
    Ok(bw_nofeedback(params.p, params.alpha, params.beta))
}

fn bw_nofeedback(p: f64, a: f64, b: f64) -> RateRows {
    let v = 0.5 * h(conv(a, p)) + 0.5 * h(conv(b, p)) - h(p) - blackwell_tail(a, b);
    rows(&[("nf1", 1, 0, v), ("nf2", 0, 1, v)])
}

pub fn blackwell_closed_inner1(params: &BlackwellParams) -> Result<HalfSpaceSystem, ChannelError> {
    Ok(blackwell_closed_inner1_rows(params)?.system())
}

pub fn blackwell_closed_inner2(params: &BlackwellParams) -> Result<HalfSpaceSystem, ChannelError> {
    Ok(blackwell_closed_inner2_rows(params)?.system())
}

pub fn blackwell_closed_outer(params: &BlackwellParams) -> Result<HalfSpaceSystem, ChannelError> {
    Ok(blackwell_closed_outer_rows(params)?.system())
}

pub fn blackwell_closed_nofeedback(params: &BlackwellParams) -> Result<HalfSpaceSystem, ChannelError> {
    Ok(blackwell_closed_nofeedback_rows(params)?.system())
}

/// Max of R1 + R2 over the vertices of a bounded 2-D region.
pub fn max_sum_rate(region: &HalfSpaceSystem) -> Result<f64, ChannelError> {
    let r = region.vertices2d()?;
    Ok(r.support(1.0, 1.0).unwrap_or(0.0))
}

/// Same value for rows that bound single rates or the sum, all with nonnegative
/// right-hand sides: min(cap1 + cap2, sum cap).
pub fn rows_max_sum(rows: &RateRows) -> f64 {
    let (mut c1, mut c2, mut cs) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for r in &rows.0 {
        match (r.r1, r.r2) {
            (1, 0) => c1 = c1.min(r.rhs),
            (0, 1) => c2 = c2.min(r.rhs),
            (1, 1) => cs = cs.min(r.rhs),
            _ => panic!("rows_max_sum handles only R1, R2 and R1 + R2 rows"),
        }
    }
    (c1 + c2).min(cs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub sum_in1: f64,
    pub sum_in2: f64,
    pub sum_out: f64,
    pub sum_nofb: f64,
}

/// Points (i/(n-1), j/(n-1)) with i + j <= n - 1.
pub fn simplex_grid(resolution: usize) -> Vec<(f64, f64)> {
    let n = resolution.max(2) - 1;
    let mut out = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for i in 0..=n {
        for j in 0..=n - i {
            out.push((i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    out
}

/// Best closed-form sum rate per bound at one noise level.
pub fn blackwell_best_sums(p: f64, grid: &[(f64, f64)]) -> SweepRow {
    let mut best = SweepRow { p, sum_in1: 0.0, sum_in2: 0.0, sum_out: 0.0, sum_nofb: 0.0 };
    for &(a, b) in grid {
        best.sum_in1 = best.sum_in1.max(rows_max_sum(&bw_inner1(p, a, b)));
        best.sum_in2 = best.sum_in2.max(rows_max_sum(&bw_inner2(p, a, b)));
        best.sum_out = best.sum_out.max(rows_max_sum(&bw_outer(p, a, b)));
        best.sum_nofb = best.sum_nofb.max(rows_max_sum(&bw_nofeedback(p, a, b)));
    }
    best
}

/// For each p, maximize each Blackwell bound's sum rate over a uniform
/// simplex grid of (alpha, beta) and, for the outer bound, (alpha1, alpha2).
pub fn sweep_blackwell_sumrate(p_grid: &[f64], grid_resolution: usize) -> Result<Vec<SweepRow>, ChannelError> {
    if grid_resolution < 2 {
        return Err(ChannelError::Invalid("grid resolution must be at least 2".into()));
    }
    for &p in p_grid {
        check_range("p", p, 0.0, 0.5)?;
    }
    let grid = simplex_grid(grid_resolution);
    Ok(p_grid.par_iter().map(|&p| blackwell_best_sums(p, &grid)).collect())
}

/// Dueck sum rates of the closed forms as p varies with q, r fixed.
pub fn sweep_dueck_sumrate(case: NoiseCase, p_grid: &[f64], q: f64, r: f64) -> Result<Vec<SweepRow>, ChannelError> {
    p_grid
        .iter()
        .map(|&p| {
            let d = DueckParams::new(case, p, q, r);
            Ok(SweepRow {
                p,
                sum_in1: rows_max_sum(&dueck_closed_inner1_rows(&d)?),
                sum_in2: rows_max_sum(&dueck_closed_inner2_rows(&d)?),
                sum_out: rows_max_sum(&dueck_closed_outer_rows(&d)?),
                sum_nofb: rows_max_sum(&dueck_closed_nofeedback_rows(&d)?),
            })
        })
        .collect()
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
