//! Entropy functionals on spectra.
//!
//! All logarithms are natural. Power sums `Σ m_i p_i^q` are evaluated with
//! the largest eigenvalue factored out,
//!
//! ```text
//! ln Σ m_i p_i^q = q ln p_max + ln Σ m_i (p_i / p_max)^q,
//! ```
//!
//! so ratios of power sums stay accurate for `q` up to `10^6` even where the
//! individual sums underflow.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::Spectrum;

/// Eigenvalues at or below this are treated as exact zeros when `q < 1`.
pub const ZERO_CLAMP: f64 = 1e-9;

/// Entropic index `q > 0`; `q = 1` selects the von Neumann limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QParam(f64);

impl QParam {
    pub const VON_NEUMANN: QParam = QParam(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(Self(q))
        } else {
            Err(Error::OutOfRange {
                name: "q",
                value: q,
                expected: "finite q > 0",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_von_neumann(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;
    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

impl From<QParam> for f64 {
    fn from(q: QParam) -> f64 {
        q.0
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_null_level(p: f64, q: f64) -> bool {
    p <= 0.0 || (q < 1.0 && p <= ZERO_CLAMP)
}

/// `p^q` with `0^q = 0`; for `q < 1` eigenvalues within [`ZERO_CLAMP`] of
/// zero count as zero.
fn power(p: f64, q: f64) -> f64 {
    if is_null_level(p, q) {
        0.0
    } else {
        p.powf(q)
    }
}

/// `Σ m_i p_i^q`, evaluated directly.
pub fn power_sum(s: &Spectrum, q: QParam) -> f64 {
    s.levels()
        .iter()
        .map(|l| l.multiplicity as f64 * power(l.value, q.0))
        .sum()
}

/// `(p_max, Σ m_i (p_i/p_max)^q)`; the scaled sum lies in `[1, dim]`.
fn scaled_power_sum(s: &Spectrum, q: f64) -> Option<(f64, f64)> {
    let p_max = s.max_value();
    if is_null_level(p_max, q) {
        return None;
    }
    let sum = s
        .levels()
        .iter()
        .filter(|l| !is_null_level(l.value, q))
        .map(|l| l.multiplicity as f64 * (l.value / p_max).powf(q))
        .sum();
    Some((p_max, sum))
}

/// `ln Σ m_i p_i^q`, or `-∞` when the spectrum has no positive level.
pub fn ln_power_sum(s: &Spectrum, q: QParam) -> f64 {
    match scaled_power_sum(s, q.0) {
        Some((p_max, sum)) => q.0 * p_max.ln() + sum.ln(),
        None => f64::NEG_INFINITY,
    }
}

pub fn von_neumann_entropy(s: &Spectrum) -> f64 {
    -s.levels()
        .iter()
        .filter(|l| l.value > 0.0)
        .map(|l| l.multiplicity as f64 * l.value * l.value.ln())
        .sum::<f64>()
}

/// `(Tr ρ^q − 1)/(1 − q)`, the Shannon form at `q = 1`.
pub fn tsallis_entropy(s: &Spectrum, q: QParam) -> f64 {
    if q.is_von_neumann() {
        return von_neumann_entropy(s);
    }
    (power_sum(s, q) - 1.0) / (1.0 - q.0)
}

/// `ln(Tr ρ^q)/(1 − q)`, the Shannon form at `q = 1`.
pub fn renyi_entropy(s: &Spectrum, q: QParam) -> f64 {
    if q.is_von_neumann() {
        return von_neumann_entropy(s);
    }
    ln_power_sum(s, q) / (1.0 - q.0)
}

/// `ln(Tr ρ_AB^q / Tr ρ_A^q)` with both maxima factored out.
pub fn ln_power_sum_ratio(joint: &Spectrum, marginal: &Spectrum, q: QParam) -> Result<f64> {
    let Some((m_max, m_sum)) = scaled_power_sum(marginal, q.0) else {
        return Err(Error::NonFinite(
            "marginal power sum is zero".to_string(),
        ));
    };
    let Some((j_max, j_sum)) = scaled_power_sum(joint, q.0) else {
        return Ok(f64::NEG_INFINITY);
    };
    let ln_max_ratio = ((j_max - m_max) / m_max).ln_1p();
    Ok(q.0 * ln_max_ratio + j_sum.ln() - m_sum.ln())
}

/// `Tr ρ_AB^q / Tr ρ_A^q`. Overflows to `+∞` only when the true ratio
/// exceeds `f64::MAX`; use [`ln_power_sum_ratio`] in that regime.
pub fn power_sum_ratio(joint: &Spectrum, marginal: &Spectrum, q: QParam) -> Result<f64> {
    Ok(ln_power_sum_ratio(joint, marginal, q)?.exp())
}

/// Abe–Rajagopal conditional entropy `(1 − Tr ρ_AB^q / Tr ρ_A^q)/(q − 1)`.
///
/// At `q = 1` this is the von Neumann conditional entropy
/// `S(ρ_AB) − S(ρ_A)`. A negative value certifies entanglement. For very
/// large `q` the value may be `−∞`, but its sign is always meaningful.
pub fn ar_conditional_entropy(joint: &Spectrum, marginal: &Spectrum, q: QParam) -> Result<f64> {
    if q.is_von_neumann() {
        return Ok(von_neumann_entropy(joint) - von_neumann_entropy(marginal));
    }
    let ln_ratio = ln_power_sum_ratio(joint, marginal, q)?;
    if ln_ratio.is_nan() {
        return Err(Error::NonFinite(format!("ln power-sum ratio at q = {q}")));
    }
    Ok(-ln_ratio.exp_m1() / (q.0 - 1.0))
}
