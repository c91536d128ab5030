//! Distances between laws and the convergence-rate harness.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::limit_law::LimitLaw;
use crate::output::{Cell, Table};
use crate::pmf::IntPmf;
use crate::renewal::{
    centered_count_distribution, depth_distribution_exact, ks_scaled_sum_exact, log2_split,
    DEFAULT_CAP_MULTIPLIER,
};

/// Half the l1 distance between two integer laws.
pub fn tv_distance(p: &IntPmf, q: &IntPmf) -> f64 {
    let lo = p.min().min(q.min());
    let hi = p.max().max(q.max());
    let s: f64 = (lo..=hi).map(|j| (p.get(j) - q.get(j)).abs()).sum();
    (0.5 * s).clamp(0.0, 1.0)
}

fn check_jumps(jumps: &[(f64, f64)]) -> Result<()> {
    let mut prev: Option<(f64, f64)> = None;
    for &(x, c) in jumps {
        if !(x.is_finite() && (0.0..=1.0 + 1e-12).contains(&c)) {
            return Err(domain("jump", format!("bad jump ({x}, {c})")));
        }
        if let Some((px, pc)) = prev {
            if x <= px {
                return Err(domain("jumps", format!("points not increasing at {x}")));
            }
            if c < pc - 1e-15 {
                return Err(domain("jumps", format!("cdf decreases at {x}")));
            }
        }
        prev = Some((x, c));
    }
    Ok(())
}

/// `sup |G - F|` over `x <= last jump`, where `G` is the step CDF taking value
/// `c_i` on `[x_i, x_{i+1})` and `0` before the first jump. `F` must be
/// continuous and nondecreasing, so the supremum sits at the jump points.
pub fn ks_step_within<F: Fn(f64) -> f64>(jumps: &[(f64, f64)], cdf: F) -> Result<f64> {
    check_jumps(jumps)?;
    let mut before = 0.0;
    let mut sup: f64 = 0.0;
    for &(x, after) in jumps {
        let f = cdf(x);
        sup = sup.max((after - f).abs()).max((before - f).abs());
        before = after;
    }
    Ok(sup)
}

/// Kolmogorov-Smirnov distance between a step CDF given by its jumps
/// `(x_i, G(x_i))` and a continuous CDF.
pub fn ks_discrete_vs_continuous<F: Fn(f64) -> f64>(jumps: &[(f64, f64)], cdf: F) -> Result<f64> {
    let within = ks_step_within(jumps, cdf)?;
    let last = jumps.last().map_or(0.0, |j| j.1);
    Ok(within.max(1.0 - last))
}

/// One-sample KS statistic of `samples` against a continuous CDF.
pub fn ks_sample_vs_cdf<F: Fn(f64) -> f64>(mut samples: Vec<f64>, cdf: F) -> f64 {
    samples.sort_unstable_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut sup: f64 = 0.0;
    let mut i = 0;
    while i < samples.len() {
        let x = samples[i];
        let mut k = i;
        while k < samples.len() && samples[k] == x {
            k += 1;
        }
        let f = cdf(x);
        sup = sup.max((i as f64 / n - f).abs()).max((k as f64 / n - f).abs());
        i = k;
    }
    sup
}

/// TV distance between the exact centered depth law after `n` steps and the
/// limit member `Q_eta`, `eta = {log2 n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvToLimit {
    pub n: u64,
    pub eta: f64,
    pub tv: f64,
    /// Half the mass dropped by the exact recursion.
    pub truncation_bound: f64,
}

pub const MAX_TV_STEPS: i64 = 1 << 22;

/// Tails of the limit law below this are folded in as lumps.
const LIMIT_TAIL_CUTOFF: f64 = 1e-14;

/// Smallest integer range holding the support of `exact` outside of which
/// both tails of `law` are below 1e-14.
pub fn comparison_range(exact: &IntPmf, law: &LimitLaw) -> (i64, i64) {
    let mut lo = exact.min();
    while law.cdf(lo - 1) >= LIMIT_TAIL_CUTOFF {
        lo -= 1;
    }
    let mut hi = exact.max();
    while law.tail(hi + 1) >= LIMIT_TAIL_CUTOFF {
        hi += 1;
    }
    (lo, hi)
}

pub fn tv_to_limit(n: i64) -> Result<TvToLimit> {
    if !(1..=MAX_TV_STEPS).contains(&n) {
        return Err(domain("step count", format!("n must be in 1..=2^22, got {n}")));
    }
    let exact = depth_distribution_exact(n)?;
    let (centered, eta) = centered_count_distribution(n)?;
    let law = LimitLaw::new(eta)?;
    let (lo, hi) = comparison_range(&centered, &law);
    let body: f64 = (lo..=hi)
        .map(|j| (centered.get(j) - law.pmf(j)).abs())
        .sum();
    // the exact law has no mass outside [lo, hi]; the limit law's is added whole
    let outside = law.cdf(lo - 1) + law.tail(hi + 1);
    Ok(TvToLimit {
        n: n as u64,
        eta,
        tv: (0.5 * (body + outside)).clamp(0.0, 1.0),
        truncation_bound: 0.5 * exact.dropped_mass,
    })
}

/// Both sides of `|P(N_t - k = j) - Q_eta{j}| <= phi(k + j) + phi(k + j + 1)`
/// with `k = floor(log2 t)` and `phi(m)` the KS distance between `2^-m S_m`
/// and its limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapCheck {
    pub t: u64,
    pub j: i64,
    pub lhs: f64,
    /// Sum of the two certified KS bounds, truncation included.
    pub rhs: f64,
}

impl GapCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack
    }
}

pub fn pmf_gap_bound_check(t: i64, j: i64) -> Result<GapCheck> {
    Ok(pmf_gap_bound_checks(t, &[j])?[0])
}

/// [`pmf_gap_bound_check`] for several `j`, sharing the KS evaluations.
pub fn pmf_gap_bound_checks(t: i64, js: &[i64]) -> Result<Vec<GapCheck>> {
    if !(1..=MAX_TV_STEPS).contains(&t) {
        return Err(domain("time", format!("t must be in 1..=2^22, got {t}")));
    }
    let (k, eta) = log2_split(t as u64);
    for &j in js {
        let m = k + j;
        if !(1..=21).contains(&m) {
            return Err(domain("index", format!("k(t) + j = {m} outside 1..=21")));
        }
    }
    let (centered, _) = centered_count_distribution(t)?;
    let law = LimitLaw::new(eta)?;

    let mut needed: Vec<i64> = js.iter().flat_map(|&j| [k + j, k + j + 1]).collect();
    needed.sort_unstable();
    needed.dedup();
    let phis: Vec<(i64, f64)> = needed
        .par_iter()
        .map(|&m| ks_scaled_sum_exact(m, DEFAULT_CAP_MULTIPLIER).map(|r| (m, r.certified())))
        .collect::<Result<_>>()?;
    let phi = |m: i64| phis.iter().find(|p| p.0 == m).map(|p| p.1).unwrap_or(f64::NAN);

    Ok(js
        .iter()
        .map(|&j| GapCheck {
            t: t as u64,
            j,
            lhs: (centered.get(j) - law.pmf(j)).abs(),
            rhs: phi(k + j) + phi(k + j + 1),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    /// [`tv_to_limit`] at step count `n`.
    TvLimit,
    /// [`ks_scaled_sum_exact`] at index `n`.
    KsScaled,
    /// Simulated centered count vs. its limit member at horizon `n`.
    TvSim,
}

impl DistanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TvLimit => "tv_limit",
            Self::KsScaled => "ks_scaled",
            Self::TvSim => "tv_sim",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceRow {
    pub n: u64,
    pub eta: f64,
    pub kind: DistanceKind,
    pub value: f64,
    pub trunc_bound: f64,
    pub ms: f64,
}

/// Rows of distances, `n` strictly increasing.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DistanceReport {
    pub rows: Vec<DistanceRow>,
}

pub const REPORT_COLUMNS: [&str; 6] = ["n", "eta", "kind", "value", "trunc_bound", "ms"];

impl DistanceReport {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Table view. Wall times are nondeterministic, so they are written as
    /// zero unless `timing` is set.
    pub fn to_table(&self, timing: bool) -> Table {
        let mut t = Table::new(REPORT_COLUMNS.to_vec());
        for r in &self.rows {
            t.push(vec![
                Cell::from(r.n),
                Cell::from(r.eta),
                Cell::from(r.kind.as_str()),
                Cell::from(r.value),
                Cell::from(r.trunc_bound),
                Cell::from(if timing { r.ms } else { 0.0 }),
            ]);
        }
        t
    }

    pub fn to_csv(&self, timing: bool) -> String {
        self.to_table(timing).to_csv()
    }

    pub fn to_json(&self, timing: bool) -> String {
        self.to_table(timing).to_json()
    }
}

pub(crate) fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("grid", "values must be strictly increasing"));
    }
    Ok(())
}

/// One row per grid point, computed in parallel and kept in grid order.
pub fn rate_report(n_grid: &[u64], kind: DistanceKind) -> Result<DistanceReport> {
    check_grid(n_grid)?;
    let rows = n_grid
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let (eta, value, trunc_bound) = match kind {
                DistanceKind::TvLimit => {
                    let r = tv_to_limit(n as i64)?;
                    (r.eta, r.tv, r.truncation_bound)
                }
                DistanceKind::KsScaled => {
                    let r = ks_scaled_sum_exact(n as i64, DEFAULT_CAP_MULTIPLIER)?;
                    (0.0, r.ks, r.truncation_bound)
                }
                DistanceKind::TvSim => {
                    return Err(domain("kind", "simulated rows come from the simulate command"))
                }
            };
            Ok(DistanceRow {
                n,
                eta,
                kind,
                value,
                trunc_bound,
                ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceReport { rows })
}

/// First row at which a finite-n rate proxy fails.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxyViolation {
    pub row: usize,
    pub n: u64,
    pub reason: String,
}

/// Exponent in the TV proxy `tv(n) * n^0.9`.
pub const TV_PROXY_EXPONENT: f64 = 0.9;
/// The TV proxy is checked from this `n` on.
pub const TV_PROXY_START: u64 = 1 << 8;

/// Finite-n proxies for the rate claims:
/// - `tv_limit`: values strictly decrease, and `value * n^0.9` decreases
///   between consecutive rows with `n >= 2^8`;
/// - `ks_scaled`: values strictly decrease, and `value * 2^n / n` never
///   exceeds its first-row value.
pub fn check_rate_proxy(report: &DistanceReport) -> std::result::Result<(), ProxyViolation> {
    let rows = &report.rows;
    let fail = |i: usize, reason: String| ProxyViolation {
        row: i,
        n: rows[i].n,
        reason,
    };
    for i in 1..rows.len() {
        if rows[i].value >= rows[i - 1].value {
            return Err(fail(i, format!("{} did not decrease", rows[i].kind.as_str())));
        }
    }
    match rows.first().map(|r| r.kind) {
        Some(DistanceKind::TvLimit) => {
            let scaled = |r: &DistanceRow| r.value * (r.n as f64).powf(TV_PROXY_EXPONENT);
            for i in 1..rows.len() {
                if rows[i - 1].n >= TV_PROXY_START && scaled(&rows[i]) >= scaled(&rows[i - 1]) {
                    return Err(fail(i, "tv * n^0.9 did not decrease".into()));
                }
            }
        }
        Some(DistanceKind::KsScaled) => {
            let scaled = |r: &DistanceRow| r.value * 2f64.powi(r.n as i32) / r.n as f64;
            let first = scaled(&rows[0]);
            for (i, r) in rows.iter().enumerate() {
                if scaled(r) > first {
                    return Err(fail(i, "ks * 2^n / n exceeds its first value".into()));
                }
            }
        }
        _ => {}
    }
    Ok(())
}
