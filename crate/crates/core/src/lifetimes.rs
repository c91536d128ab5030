//! Lifetime families whose k-th member grows like `alpha^k`.
//!
//! Two families ship. [`LifetimeFamily::GeometricDst`] is the holding-time
//! sequence of the digital-search-tree depth chain: `Y_1 = 1` and `Y_k` is
//! geometric with success probability `2^(1-k)`, so `2^-k Y_k` tends to an
//! exponential law with mean 1/2. [`LifetimeFamily::ScaledBase`] multiplies
//! i.i.d. exponential draws of a chosen mean by `alpha^k`; the exponential
//! base is a modelling choice, any atom-free law with a finite mean would do.

use rand::Rng;

use crate::error::{domain, Result};
use crate::rng::{exp1, uniform_open0};

/// Exponential growth factor of the lifetimes, strictly greater than one.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GrowthRate(f64);

impl GrowthRate {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 1.0 {
            Ok(Self(alpha))
        } else {
            Err(domain("growth rate", format!("alpha must exceed 1, got {alpha}")))
        }
    }

    pub const fn two() -> Self {
        Self(2.0)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `log_alpha(x)`.
    #[inline]
    pub fn log(self, x: f64) -> f64 {
        if self.0 == 2.0 {
            x.log2()
        } else {
            x.ln() / self.0.ln()
        }
    }

    /// `(k, eta)` with `alpha^k <= x < alpha^(k+1)` and `eta = log_alpha(x) - k`.
    /// `k` is checked against powers of `alpha` so exact powers land on
    /// `eta = 0` despite rounding in the logarithm.
    pub fn split(self, x: f64) -> (i64, f64) {
        let l = self.log(x);
        let mut k = l.floor();
        if self.0.powf(k + 1.0) <= x {
            k += 1.0;
        } else if self.0.powf(k) > x {
            k -= 1.0;
        }
        (k as i64, (l - k).clamp(0.0, 1.0 - f64::EPSILON))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LifetimeFamily {
    /// Holding times of the birth chain behind DST insertion depth.
    GeometricDst,
    /// `Y_k = alpha^k * W_k` with `W_k` i.i.d. exponential of mean `base_mean`.
    ScaledBase { rate: GrowthRate, base_mean: f64 },
}

impl LifetimeFamily {
    pub fn scaled_exponential(alpha: f64, base_mean: f64) -> Result<Self> {
        let rate = GrowthRate::new(alpha)?;
        if !(base_mean.is_finite() && base_mean > 0.0) {
            return Err(domain("base mean", format!("must be positive, got {base_mean}")));
        }
        Ok(Self::ScaledBase { rate, base_mean })
    }

    pub fn rate(&self) -> GrowthRate {
        match self {
            Self::GeometricDst => GrowthRate::two(),
            Self::ScaledBase { rate, .. } => *rate,
        }
    }

    pub fn is_dst(&self) -> bool {
        matches!(self, Self::GeometricDst)
    }

    /// Mean of the limit law of `alpha^-k Y_k`.
    pub fn limit_mean(&self) -> f64 {
        match self {
            Self::GeometricDst => 0.5,
            Self::ScaledBase { base_mean, .. } => *base_mean,
        }
    }

    /// One draw from the limit law of `alpha^-k Y_k`.
    pub fn sample_limit<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.limit_mean() * exp1(rng)
    }
}

fn check_index(k: i64) -> Result<u32> {
    if k < 1 {
        return Err(domain("lifetime index", format!("k must be >= 1, got {k}")));
    }
    u32::try_from(k).map_err(|_| domain("lifetime index", format!("k = {k} too large")))
}

/// Success probability `2^(1-k)` of the k-th DST lifetime.
#[inline]
fn success_probability(k: u32) -> f64 {
    2f64.powi(1 - k as i32)
}

/// `P(Y_k = j)` for the DST family: `(1 - 2^(1-k))^(j-1) * 2^(1-k)`.
pub fn geometric_pmf(k: i64, j: i64) -> Result<f64> {
    let k = check_index(k)?;
    if j < 1 {
        return Err(domain("lifetime value", format!("j must be >= 1, got {j}")));
    }
    let p = success_probability(k);
    if k == 1 {
        return Ok(if j == 1 { 1.0 } else { 0.0 });
    }
    let m = j - 1;
    let stay = match i32::try_from(m) {
        Ok(m) => (1.0 - p).powi(m),
        Err(_) => ((m as f64) * (-p).ln_1p()).exp(),
    };
    Ok(stay * p)
}

/// `E Y_k`. The DST path is exact and rejects `k > 60`.
pub fn lifetime_mean(family: &LifetimeFamily, k: i64) -> Result<f64> {
    let k = check_index(k)?;
    match family {
        LifetimeFamily::GeometricDst => {
            if k > 60 {
                return Err(domain("lifetime index", format!("k = {k} exceeds 60 for exact means")));
            }
            Ok((1u64 << (k - 1)) as f64)
        }
        LifetimeFamily::ScaledBase { rate, base_mean } => {
            let m = rate.value().powi(k as i32) * base_mean;
            if m.is_finite() {
                Ok(m)
            } else {
                Err(domain("lifetime index", format!("alpha^k overflows at k = {k}")))
            }
        }
    }
}

/// Geometric DST lifetime by inversion: `floor(ln U / ln(1 - p)) + 1`.
pub fn sample_geometric<R: Rng + ?Sized>(k: u32, rng: &mut R) -> u64 {
    debug_assert!(k >= 1);
    if k == 1 {
        return 1;
    }
    let p = success_probability(k);
    let u = uniform_open0(rng);
    (u.ln() / (-p).ln_1p()).floor() as u64 + 1
}

/// One draw of `Y_k` (`k >= 1`).
pub fn sample_lifetime<R: Rng + ?Sized>(family: &LifetimeFamily, k: u32, rng: &mut R) -> f64 {
    match family {
        LifetimeFamily::GeometricDst => sample_geometric(k, rng) as f64,
        LifetimeFamily::ScaledBase { rate, base_mean } => {
            rate.value().powi(k as i32) * base_mean * exp1(rng)
        }
    }
}

/// Scale `1 / -ln(1 - 2^(1-k))` that turns a unit exponential into the k-th
/// geometric lifetime via `floor(scale * z) + 1`; zero for `k = 1`.
pub fn coupling_alpha(k: u32) -> f64 {
    if k <= 1 {
        0.0
    } else {
        -1.0 / (-success_probability(k)).ln_1p()
    }
}

/// A geometric lifetime and its exponential partner built from one draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledPair {
    /// `floor(coupling_alpha(k) * z) + 1`, distributed as `Y_k`.
    pub discrete: u64,
    /// `2^(k-1) * z`.
    pub continuous: f64,
    pub index: u32,
}

pub fn sample_coupled_pair<R: Rng + ?Sized>(k: u32, rng: &mut R) -> CoupledPair {
    let z = exp1(rng);
    coupled_pair_from(k, z)
}

/// Deterministic part of [`sample_coupled_pair`] for a given unit exponential `z`.
pub fn coupled_pair_from(k: u32, z: f64) -> CoupledPair {
    let discrete = (coupling_alpha(k) * z).floor() as u64 + 1;
    CoupledPair {
        discrete,
        continuous: 2f64.powi(k as i32 - 1) * z,
        index: k,
    }
}
