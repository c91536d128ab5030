//! The limit variable `S = sum_{k>=1} 2^-k Z_k` (unit exponentials `Z_k`) and
//! the discretized family `Q_eta = law of floor(-log2 S + eta)`.
//!
//! `S` is a sum of independent `Exp(2^k)` variables. Its law has the signed
//! representation `sum_k a_k Exp(2^k)` with
//! `a_k = b * prod_{j<k} (1 - 2^j)^-1` and `b = prod_{j>=1} (1 - 2^-j)^-1`.
//! The coefficients alternate in sign, so this is not a probability mixture,
//! and the partial sums cancel heavily for small arguments. All series are
//! accumulated in double-double precision.
//!
//! The upper tail of `Q_eta` is `o(e^(-rho j^2))` for every `rho < ln(2)/2`.
//! That is asymptotic; the tests check it only as a finite-j proxy, with
//! `rho = 0.3` over `j = 4..9`.

use std::sync::OnceLock;

use rand::Rng;

use crate::dd::DoubleDouble as Dd;
use crate::error::{domain, Result};
use crate::lifetimes::LifetimeFamily;
use crate::rng::exp1;

/// Hard cap on the number of mixture terms.
pub const MAX_TERMS: usize = 64;

/// Default number of terms used when sampling `S`.
pub const DEFAULT_SAMPLE_TERMS: usize = 64;

fn euler_b_dd() -> Dd {
    // Factors closer to one than 1e-34 no longer move a double-double.
    let mut prod = Dd::ONE;
    let mut j = 1;
    loop {
        let eps = 2f64.powi(-j);
        if eps < 1e-34 {
            break;
        }
        prod = prod * (Dd::ONE - Dd::from_f64(eps));
        j += 1;
    }
    Dd::ONE / prod
}

/// `b = prod_{j>=1} (1 - 2^-j)^-1 = 3.46274661945506...`
pub fn euler_b() -> f64 {
    euler_b_dd().to_f64()
}

/// `sum_k a_k Exp(2^k)` with signed coefficients `a_1, ..., a_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedExpMixture {
    coeffs: Vec<Dd>,
}

impl SignedExpMixture {
    /// Truncation of the limit law after `terms` coefficients (`1..=64`).
    pub fn limit(terms: usize) -> Result<Self> {
        if !(1..=MAX_TERMS).contains(&terms) {
            return Err(domain("mixture order", format!("K must be in 1..=64, got {terms}")));
        }
        let mut coeffs = Vec::with_capacity(terms);
        let mut a = euler_b_dd();
        for k in 1..=terms {
            coeffs.push(a);
            a = a / (1.0 - 2f64.powi(k as i32));
        }
        Ok(Self { coeffs })
    }

    /// Law of `Exp(2) + Exp(4) + ... + Exp(2^n)` (`1..=32`), written as a
    /// signed combination of its summands.
    pub fn convolution(n: usize) -> Result<Self> {
        if !(1..=32).contains(&n) {
            return Err(domain("convolution order", format!("n must be in 1..=32, got {n}")));
        }
        // prod_{j<k} (1 - 2^j)^-1 and prod_{j<=n-k} (1 - 2^-j)^-1
        let mut up = vec![Dd::ONE; n + 1];
        for k in 2..=n {
            up[k] = up[k - 1] / (1.0 - 2f64.powi(k as i32 - 1));
        }
        let mut down = vec![Dd::ONE; n];
        for m in 1..n {
            down[m] = down[m - 1] / (Dd::ONE - Dd::from_f64(2f64.powi(-(m as i32))));
        }
        let coeffs = (1..=n).map(|k| up[k] * down[n - k]).collect();
        Ok(Self { coeffs })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients rounded to binary64, `a_1` first.
    pub fn coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    /// `a_k`, one-based.
    pub fn coefficient(&self, k: usize) -> f64 {
        self.coeffs[k - 1].to_f64()
    }

    /// Rate `2^k` of the k-th component.
    pub fn rate(k: usize) -> f64 {
        2f64.powi(k as i32)
    }

    fn terms(&self) -> impl Iterator<Item = (f64, Dd)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .take_while(|(_, a)| a.hi != 0.0)
            .map(|(i, a)| (Self::rate(i + 1), *a))
    }

    pub(crate) fn cdf_dd(&self, t: f64) -> Dd {
        if t <= 0.0 {
            return Dd::ZERO;
        }
        if t.is_infinite() {
            return self.terms().fold(Dd::ZERO, |acc, (_, a)| acc + a);
        }
        self.terms().fold(Dd::ZERO, |acc, (rate, a)| {
            let x = Dd::from_f64(-rate * t);
            acc - a * x.exp_m1()
        })
    }

    pub(crate) fn survival_dd(&self, t: f64) -> Dd {
        if t <= 0.0 {
            return self.terms().fold(Dd::ZERO, |acc, (_, a)| acc + a);
        }
        self.terms().fold(Dd::ZERO, |acc, (rate, a)| {
            acc + a * Dd::from_f64(-rate * t).exp()
        })
    }

    /// Binary64 evaluation of [`cdf`](Self::cdf), dropping terms with
    /// `|a_k| < 1e-20`. The absolute error is a few units of 1e-16, which is
    /// fine away from the lower tail and much cheaper in bulk.
    pub fn cdf_f64(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let mut s = 0.0;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.hi.abs() < 1e-20 {
                break;
            }
            s -= a.hi * (-Self::rate(i + 1) * t).exp_m1();
        }
        s.clamp(0.0, 1.0)
    }

    /// `sum_k a_k (1 - e^{-2^k t})`, clamped to `[0, 1]`.
    pub fn cdf(&self, t: f64) -> f64 {
        self.cdf_dd(t).to_f64().clamp(0.0, 1.0)
    }

    /// `sum_k a_k e^{-2^k t}`, clamped to `[0, 1]`.
    pub fn survival(&self, t: f64) -> f64 {
        self.survival_dd(t).to_f64().clamp(0.0, 1.0)
    }

    /// `sum_k a_k 2^k e^{-2^k t}`.
    pub fn density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.terms()
            .fold(Dd::ZERO, |acc, (rate, a)| {
                acc + a * rate * Dd::from_f64(-rate * t).exp()
            })
            .to_f64()
            .max(0.0)
    }
}

/// `a_1..a_K` of the limit law.
pub fn mixture_coefficients(terms: usize) -> Result<SignedExpMixture> {
    SignedExpMixture::limit(terms)
}

/// `a_{n,1}..a_{n,n}`: the partial-fraction weights of
/// `prod_{k<=n} (1 - 2^-k z)^-1`.
pub fn partial_fraction_coefficients(n: usize) -> Result<Vec<f64>> {
    Ok(SignedExpMixture::convolution(n)?.coeffs())
}

/// The full-length limit mixture, built once.
pub fn limit_mixture() -> &'static SignedExpMixture {
    static MIXTURE: OnceLock<SignedExpMixture> = OnceLock::new();
    MIXTURE.get_or_init(|| SignedExpMixture::limit(MAX_TERMS).expect("64 terms is in range"))
}

/// `P(S <= t)`.
pub fn s_infinity_cdf(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(domain("time", format!("t must be >= 0, got {t}")));
    }
    Ok(limit_mixture().cdf(t))
}

/// `P(S > t)`.
pub fn s_infinity_survival(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(domain("time", format!("t must be >= 0, got {t}")));
    }
    Ok(limit_mixture().survival(t))
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(domain("eta", format!("must lie in [0, 1], got {eta}")))
    }
}

/// One member `Q_eta` of the limit family, `eta` in `[0, 1]`.
///
/// `Q_1` is `Q_0` moved up by one; that member is evaluated through the
/// translate so the two ends of the interval agree exactly.
#[derive(Debug, Clone, Copy)]
pub struct LimitLaw {
    eta: f64,
    mixture: &'static SignedExpMixture,
}

impl LimitLaw {
    pub fn new(eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Ok(Self {
            eta,
            mixture: limit_mixture(),
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mixture(&self) -> &SignedExpMixture {
        self.mixture
    }

    // (eta, shift) with eta in [0, 1) and Q_eta(x) = Q_eta'(x - shift)
    fn reduced(&self) -> (f64, i64) {
        if self.eta >= 1.0 {
            (0.0, 1)
        } else {
            (self.eta, 0)
        }
    }

    /// Threshold `2^(eta - m)` on `S`: `Q_eta >= m` iff `S <= threshold`.
    fn threshold(eta: f64, m: i64) -> f64 {
        (eta - m as f64).exp2()
    }

    /// `P(Q_eta <= x) = P(S > 2^(eta - 1 - x))`.
    pub fn cdf(&self, x: i64) -> f64 {
        let (eta, shift) = self.reduced();
        let x = x.saturating_sub(shift);
        self.mixture
            .survival(Self::threshold(eta, x.saturating_add(1)))
    }

    /// [`cdf`](Self::cdf) at `floor(x)`.
    pub fn cdf_at(&self, x: f64) -> f64 {
        self.cdf(x.floor() as i64)
    }

    /// `P(Q_eta >= j) = P(S <= 2^(eta - j))`, accurate for deep tails.
    pub fn tail(&self, j: i64) -> f64 {
        let (eta, shift) = self.reduced();
        let j = j.saturating_sub(shift);
        self.mixture.cdf(Self::threshold(eta, j))
    }

    /// `P(Q_eta = j) = cdf(j) - cdf(j - 1)`.
    pub fn pmf(&self, j: i64) -> f64 {
        let (eta, shift) = self.reduced();
        let j = j.saturating_sub(shift);
        let upper = self.mixture.survival_dd(Self::threshold(eta, j.saturating_add(1)));
        let lower = self.mixture.survival_dd(Self::threshold(eta, j));
        (upper - lower).to_f64().clamp(0.0, 1.0)
    }

    /// `floor(-log2 S + eta)` for a fresh draw of `S`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        discretize(sample_s_infinity(rng, DEFAULT_SAMPLE_TERMS), self.eta)
    }
}

fn discretize(s: f64, eta: f64) -> i64 {
    let y = -s.log2();
    if eta >= 1.0 {
        y.floor() as i64 + 1
    } else {
        (y + eta).floor() as i64
    }
}

pub fn q_cdf(eta: f64, x: i64) -> Result<f64> {
    Ok(LimitLaw::new(eta)?.cdf(x))
}

pub fn q_pmf(eta: f64, j: i64) -> Result<f64> {
    Ok(LimitLaw::new(eta)?.pmf(j))
}

pub fn q_tail(eta: f64, j: i64) -> Result<f64> {
    Ok(LimitLaw::new(eta)?.tail(j))
}

/// `sum_{k<=terms} 2^-k Z_k`; the omitted remainder has mean `2^-terms`.
pub fn sample_s_infinity<R: Rng + ?Sized>(rng: &mut R, terms: usize) -> f64 {
    let terms = terms.max(1);
    let mut scale = 1.0;
    let mut s = 0.0;
    for _ in 0..terms {
        scale *= 0.5;
        s += scale * exp1(rng);
    }
    s
}

pub fn sample_q<R: Rng + ?Sized>(eta: f64, rng: &mut R) -> Result<i64> {
    Ok(LimitLaw::new(eta)?.sample(rng))
}

/// Number of series terms after which `alpha^-k` drops below `1e-18`.
pub fn series_terms(alpha: f64) -> usize {
    ((18.0 * std::f64::consts::LN_10) / alpha.ln()).ceil().clamp(1.0, 100_000.0) as usize
}

/// `sum_{k>=0} alpha^-k Y_k` with i.i.d. `Y_k` from the family's limit law,
/// truncated after [`series_terms`] terms.
pub fn sample_limit_series<R: Rng + ?Sized>(family: &LifetimeFamily, rng: &mut R) -> f64 {
    if family.is_dst() {
        return sample_s_infinity(rng, DEFAULT_SAMPLE_TERMS);
    }
    let inv = 1.0 / family.rate().value();
    let mut scale = 1.0;
    let mut s = 0.0;
    for _ in 0..series_terms(family.rate().value()) {
        s += scale * family.sample_limit(rng);
        scale *= inv;
    }
    s
}

/// `floor(-log_alpha S + eta)` for the family's limit series.
pub fn sample_q_family<R: Rng + ?Sized>(family: &LifetimeFamily, eta: f64, rng: &mut R) -> i64 {
    let s = sample_limit_series(family, rng);
    let y = -family.rate().log(s);
    if eta >= 1.0 {
        y.floor() as i64 + 1
    } else {
        (y + eta).floor() as i64
    }
}
