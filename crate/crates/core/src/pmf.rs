use serde::Serialize;

use crate::error::{domain, Result};

/// Finitely supported probability mass function on the integers.
///
/// `masses[i]` is the mass at `offset + i`. Leading and trailing zeros are
/// trimmed on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntPmf {
    offset: i64,
    masses: Vec<f64>,
}

/// Allowed deviation of the total mass from one.
pub const MASS_TOLERANCE: f64 = 1e-12;

impl IntPmf {
    pub fn new(offset: i64, masses: Vec<f64>) -> Result<Self> {
        if let Some(m) = masses.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(domain("mass", format!("masses must be finite and >= 0, got {m}")));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(domain("mass", format!("total mass {total} is not 1")));
        }
        Ok(Self::trimmed(offset, masses))
    }

    pub(crate) fn trimmed(mut offset: i64, mut masses: Vec<f64>) -> Self {
        while masses.last() == Some(&0.0) {
            masses.pop();
        }
        let lead = masses.iter().take_while(|&&m| m == 0.0).count();
        masses.drain(..lead);
        offset += lead as i64;
        Self { offset, masses }
    }

    pub fn point_mass(at: i64) -> Self {
        Self {
            offset: at,
            masses: vec![1.0],
        }
    }

    /// Empirical law of integer samples.
    pub fn from_samples<I: IntoIterator<Item = i64>>(samples: I) -> Result<Self> {
        let xs: Vec<i64> = samples.into_iter().collect();
        let (Some(&lo), Some(&hi)) = (xs.iter().min(), xs.iter().max()) else {
            return Err(domain("samples", "need at least one sample"));
        };
        let mut counts = vec![0u64; (hi - lo + 1) as usize];
        for x in &xs {
            counts[(x - lo) as usize] += 1;
        }
        let n = xs.len() as f64;
        Ok(Self::trimmed(lo, counts.into_iter().map(|c| c as f64 / n).collect()))
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Smallest point of the support.
    pub fn min(&self) -> i64 {
        self.offset
    }

    /// Largest point of the support.
    pub fn max(&self) -> i64 {
        self.offset + self.masses.len() as i64 - 1
    }

    pub fn get(&self, j: i64) -> f64 {
        let i = j - self.offset;
        if i < 0 {
            return 0.0;
        }
        self.masses.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .map(move |(i, &m)| (self.offset + i as i64, m))
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(j, m)| j as f64 * m).sum()
    }

    /// `P(X <= j)`.
    pub fn cdf(&self, j: i64) -> f64 {
        self.iter().take_while(|&(i, _)| i <= j).map(|(_, m)| m).sum()
    }

    /// `P(X >= j)`, summed from the top.
    pub fn tail(&self, j: i64) -> f64 {
        self.iter().rev().take_while(|&(i, _)| i >= j).map(|(_, m)| m).sum()
    }

    /// Law of `X + by`.
    pub fn shifted(&self, by: i64) -> Self {
        Self {
            offset: self.offset + by,
            masses: self.masses.clone(),
        }
    }
}
