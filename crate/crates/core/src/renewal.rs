//! Partial sums `S_n` and renewal counts `N_t`.
//!
//! For the DST family the count process observed at integer times is the
//! pure-birth chain on levels `0, 1, 2, ...` that leaves level `k` with
//! probability `2^-k` per step, so every law here has an exact forward
//! recursion. Other families are handled by simulation only.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::lifetimes::{sample_lifetime, LifetimeFamily};
use crate::limit_law::limit_mixture;
use crate::metrics::ks_step_within;
use crate::pmf::IntPmf;
use crate::rng::{batches, stream_rng};

/// Largest number of chain steps the exact engine accepts.
pub const MAX_EXACT_STEPS: u64 = 1 << 26;

/// Levels kept above `ceil(log2(n + 1))`.
pub const STATE_SLACK: usize = 50;

/// Masses below this are removed from the recursion and accounted as dropped.
pub const MASS_FLOOR: f64 = 1e-300;

/// Forward recursion of the birth chain on levels `0..=cap`.
///
/// With `absorbing` set, level `cap` collects every path that reaches it
/// (it stands for "at least `cap`"). Otherwise mass leaving `cap` is dropped.
#[derive(Debug, Clone)]
struct BirthChain {
    probs: Vec<f64>,
    up: Vec<f64>,
    lo: usize,
    hi: usize,
    cap: usize,
    absorbing: bool,
    dropped: f64,
}

impl BirthChain {
    fn new(cap: usize, absorbing: bool) -> Self {
        let mut probs = vec![0.0; cap + 1];
        probs[0] = 1.0;
        let mut up: Vec<f64> = (0..=cap).map(|k| 2f64.powi(-(k as i32))).collect();
        if absorbing {
            up[cap] = 0.0;
        }
        Self {
            probs,
            up,
            lo: 0,
            hi: 0,
            cap,
            absorbing,
            dropped: 0.0,
        }
    }

    fn step(&mut self) {
        let p = &mut self.probs;
        let up = &self.up;
        let hi = self.hi;
        let spill = p[hi] * up[hi];
        if hi == self.cap {
            if !self.absorbing {
                self.dropped += spill;
            }
        } else if spill >= MASS_FLOOR {
            p[hi + 1] = spill;
            self.hi += 1;
        } else {
            self.dropped += spill;
        }
        for k in (self.lo + 1..=hi).rev() {
            p[k] = p[k] * (1.0 - up[k]) + p[k - 1] * up[k - 1];
        }
        p[self.lo] *= 1.0 - up[self.lo];
        while self.lo < self.hi && p[self.lo] < MASS_FLOOR {
            self.dropped += p[self.lo];
            p[self.lo] = 0.0;
            self.lo += 1;
        }
    }

    /// Mass on levels `>= k`.
    fn tail(&self, k: usize) -> f64 {
        if k > self.hi {
            return 0.0;
        }
        self.probs[k.max(self.lo)..=self.hi].iter().rev().sum()
    }

    /// Mass on levels `< k`.
    fn head(&self, k: usize) -> f64 {
        if k <= self.lo {
            return 0.0;
        }
        self.probs[self.lo..k.min(self.hi + 1)].iter().sum()
    }
}

/// Exact law of the level after `n` steps, with the mass removed by the
/// truncations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDepthLaw {
    pub pmf: IntPmf,
    pub dropped_mass: f64,
}

fn check_steps(n: i64) -> Result<u64> {
    if n < 0 {
        return Err(domain("step count", format!("n must be >= 0, got {n}")));
    }
    let n = n as u64;
    if n > MAX_EXACT_STEPS {
        return Err(domain("step count", format!("n = {n} exceeds 2^26")));
    }
    Ok(n)
}

/// Law of the DST depth chain `X_n` (equivalently the insertion depth of key
/// `n + 1`).
pub fn depth_distribution_exact(n: i64) -> Result<ExactDepthLaw> {
    let n = check_steps(n)?;
    let cap = (n + 1).next_power_of_two().trailing_zeros() as usize + STATE_SLACK;
    let mut chain = BirthChain::new(cap, false);
    for _ in 0..n {
        chain.step();
    }
    let masses = chain.probs[chain.lo..=chain.hi].to_vec();
    Ok(ExactDepthLaw {
        pmf: IntPmf::trimmed(chain.lo as i64, masses),
        dropped_mass: chain.dropped,
    })
}

/// `P(S_j <= t) = P(N_t >= j)` for the DST family at integer `t`.
pub fn partial_sum_cdf_exact(family: &LifetimeFamily, j: i64, t: i64) -> Result<f64> {
    if !family.is_dst() {
        return Err(Error::Unsupported("exact partial sums exist only for the DST family"));
    }
    if j < 0 {
        return Err(domain("renewal index", format!("j must be >= 0, got {j}")));
    }
    let t = check_steps(t)?;
    if j == 0 {
        return Ok(1.0);
    }
    let mut chain = BirthChain::new(j as usize, true);
    for _ in 0..t {
        chain.step();
    }
    Ok(chain.tail(j as usize))
}

/// `log2(n)` split into integer part and fractional part.
pub fn log2_split(n: u64) -> (i64, f64) {
    let k = n.ilog2();
    let eta = (n as f64 / 2f64.powi(k as i32)).log2();
    (k as i64, eta)
}

/// Exact law of `X_n - floor(log2 n)` together with `eta = {log2 n}`.
pub fn centered_count_distribution(n: i64) -> Result<(IntPmf, f64)> {
    if n <= 0 {
        return Err(domain("step count", format!("n must be >= 1, got {n}")));
    }
    let law = depth_distribution_exact(n)?;
    let (k, eta) = log2_split(n as u64);
    Ok((law.pmf.shifted(-k), eta))
}

/// Parameters of a renewal-count simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenewalConfig {
    pub family: LifetimeFamily,
    pub horizon: f64,
    pub samples: usize,
    pub seed: u64,
}

impl RenewalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(domain("horizon", format!("t must be > 0, got {}", self.horizon)));
        }
        if self.samples == 0 {
            return Err(domain("samples", "need at least one replicate"));
        }
        Ok(())
    }
}

/// `N_t` for one sequence of fresh lifetimes.
pub fn count_once<R: Rng + ?Sized>(family: &LifetimeFamily, t: f64, rng: &mut R) -> u64 {
    let mut sum = 0.0;
    let mut n = 0u64;
    loop {
        let y = sample_lifetime(family, n as u32 + 1, rng);
        if sum + y > t {
            return n;
        }
        sum += y;
        n += 1;
    }
}

/// `samples` independent copies of `N_t`, in replicate order. Replicates are
/// batched onto `(seed, batch)` streams, so the output does not depend on the
/// number of threads.
pub fn simulate_count(config: &RenewalConfig) -> Result<Vec<u64>> {
    config.validate()?;
    let work: Vec<(u64, usize)> = batches(config.samples).collect();
    let out: Vec<Vec<u64>> = work
        .par_iter()
        .map(|&(stream, len)| {
            let mut rng = stream_rng(config.seed, stream);
            (0..len)
                .map(|_| count_once(&config.family, config.horizon, &mut rng))
                .collect()
        })
        .collect();
    Ok(out.concat())
}

/// Draws of `alpha^-n S_n`.
pub fn scaled_sum_sample<R: Rng + ?Sized>(
    family: &LifetimeFamily,
    n: u32,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(domain("partial sum index", "n must be >= 1"));
    }
    let scale = family.rate().value().powi(-(n as i32));
    Ok((0..samples)
        .map(|_| {
            let s: f64 = (1..=n).map(|k| sample_lifetime(family, k, rng)).sum();
            s * scale
        })
        .collect())
}

/// Kolmogorov-Smirnov distance between `2^-n S_n` and its limit, evaluated
/// on `[0, cap]` where `cap = cap_multiplier * 2^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSumKs {
    pub n: u32,
    pub ks: f64,
    /// Bound on `|F_n - F| beyond the cap`: `max(1 - F_n(cap), 1 - F(cap 2^-n))`.
    pub truncation_bound: f64,
}

impl ScaledSumKs {
    /// Upper bound on the full distance.
    pub fn certified(&self) -> f64 {
        self.ks.max(self.truncation_bound)
    }
}

pub const DEFAULT_CAP_MULTIPLIER: u64 = 8;

pub fn ks_scaled_sum_exact(n: i64, cap_multiplier: u64) -> Result<ScaledSumKs> {
    if !(1..=22).contains(&n) {
        return Err(domain("partial sum index", format!("n must be in 1..=22, got {n}")));
    }
    if cap_multiplier < 2 {
        return Err(domain("cap multiplier", format!("must be >= 2, got {cap_multiplier}")));
    }
    let levels = n as usize;
    let cap = cap_multiplier << n;
    let scale = 2f64.powi(-(n as i32));

    // F_n(j) = P(S_n <= j) = P(X_j >= n), j = 0..=cap.
    let mut chain = BirthChain::new(levels, true);
    let mut jumps = Vec::with_capacity(cap as usize + 1);
    jumps.push((0.0, chain.tail(levels)));
    for j in 1..=cap {
        chain.step();
        jumps.push((j as f64 * scale, chain.tail(levels)));
    }
    let head = chain.head(levels);

    let limit = limit_mixture();
    let ks = ks_step_within(&jumps, |x| limit.cdf_f64(x))?;
    let limit_tail = limit.survival(cap as f64 * scale);
    Ok(ScaledSumKs {
        n: n as u32,
        ks,
        truncation_bound: head.max(limit_tail),
    })
}
