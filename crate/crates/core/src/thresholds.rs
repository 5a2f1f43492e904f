//! Separability boundaries in the mixing parameter `x`.
//!
//! Three independent routes to a threshold:
//!
//! - [`solve_x_threshold`]: the root `x*(q)` of the q-conditional entropy,
//!   by bisection on `[0, 1]`.
//! - [`bound_w`], [`bound_ghz`] and [`asymptotic_threshold`]: the `q → ∞`
//!   limit, where only the largest joint and marginal eigenvalues matter and
//!   the boundary is where they cross.
//! - [`ppt_threshold`]: the largest `x` for which the partial transpose of the
//!   brute-force density matrix stays positive semidefinite.

use std::io::{self, Write};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{ar_conditional_entropy, QParam};
use crate::error::{Error, Result};
use crate::hermit::{eigenvalues, partial_transpose, PartitionSpec};
use crate::output::format_sig;
use crate::spectra::{Conditional, Mode};
use crate::states::{family_density, Family, FamilySpec};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Minimum eigenvalue above which a partial transpose counts as positive.
pub const PSD_TOL: f64 = 1e-12;

/// Entropy values this close to zero are treated as zero by the pre-scan.
pub const ZERO_BAND: f64 = 1e-12;

/// Uniform `x` samples checked for sign changes before bisecting.
pub const SCAN_POINTS: usize = 101;

/// Allowed increase of `x*` between consecutive `q` samples.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Outcome of a threshold solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "Option<f64>")]
pub enum Threshold {
    Root(f64),
    /// The conditional entropy stays positive on all of `[0, 1]`.
    NoRoot,
}

impl Threshold {
    pub fn root(self) -> Option<f64> {
        match self {
            Threshold::Root(x) => Some(x),
            Threshold::NoRoot => None,
        }
    }

    fn as_ordered(self) -> f64 {
        self.root().unwrap_or(f64::INFINITY)
    }
}

impl From<Threshold> for Option<f64> {
    fn from(t: Threshold) -> Self {
        t.root()
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Threshold::Root(x) => f.write_str(&format_sig(*x)),
            Threshold::NoRoot => f.write_str("no-root"),
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            expected: "finite tol > 0",
        })
    }
}

/// Bisection on `[lo, hi]` where `lower(x)` holds below the root and fails
/// above it. Returns the midpoint of the final bracket.
fn bisect<F>(mut lower: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lower(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn sign_class(v: f64) -> i8 {
    if v > ZERO_BAND {
        1
    } else if v < -ZERO_BAND {
        -1
    } else {
        0
    }
}

/// Conditional entropy of a split as a function of `x`.
pub fn conditional_entropy_at(cond: &Conditional, q: QParam, x: f64) -> Result<f64> {
    let pair = cond.spectra(x)?;
    ar_conditional_entropy(&pair.joint, &pair.marginal, q)
}

/// Root in `x` of the q-conditional entropy.
///
/// A pre-scan over [`SCAN_POINTS`] uniform points rejects brackets with more
/// than one sign change. If the entropy vanishes only at `x = 1` the root is
/// reported there.
pub fn solve_x_threshold(cond: &Conditional, q: QParam, tol: f64) -> Result<Threshold> {
    check_tol(tol)?;
    let f = |x: f64| conditional_entropy_at(cond, q, x);

    let scan: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| f(i as f64 / (SCAN_POINTS - 1) as f64))
        .collect::<Result<_>>()?;
    let (f_lo, f_hi) = (scan[0], scan[SCAN_POINTS - 1]);
    if sign_class(f_lo) <= 0 {
        return Err(Error::NoSignChange {
            lo: 0.0,
            hi: 1.0,
            f_lo,
            f_hi,
        });
    }
    let signs: Vec<i8> = scan.iter().map(|&v| sign_class(v)).filter(|&s| s != 0).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    if changes > 1 {
        return Err(Error::MultipleRoots {
            q: q.value(),
            count: changes,
        });
    }
    match sign_class(f_hi) {
        1 => Ok(Threshold::NoRoot),
        0 if changes == 0 => Ok(Threshold::Root(1.0)),
        _ => bisect(|x| Ok(f(x)? > 0.0), 0.0, 1.0, tol).map(Threshold::Root),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub q: f64,
    pub x_star: Threshold,
}

/// Samples of `x*(q)` with solver metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCurve {
    pub family: Family,
    pub marginal_qubits: usize,
    pub mode: Mode,
    pub tolerance: f64,
    pub bracket: (f64, f64),
    pub samples: Vec<CurveSample>,
}

impl ThresholdCurve {
    /// Header `q,x_star`, twelve significant digits, `no-root` marker.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "q,x_star")?;
        for s in &self.samples {
            writeln!(out, "{},{}", format_sig(s.q), s.x_star)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serialises")
    }

    pub fn last(&self) -> Option<&CurveSample> {
        self.samples.last()
    }
}

/// 60 log-spaced points on `[0.2, 1000]` plus `q = 1`.
pub fn default_q_grid() -> Vec<f64> {
    let (lo, hi) = (0.2f64.log10(), 3.0);
    let mut grid: Vec<f64> = (0..60)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / 59.0))
        .collect();
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// One threshold per `q` (ascending), computed in parallel. Fails if `x*`
/// increases by more than [`MONOTONE_SLACK`] anywhere along the grid.
pub fn threshold_curve(cond: &Conditional, q_grid: &[f64], tol: f64) -> Result<ThresholdCurve> {
    check_tol(tol)?;
    if q_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedGrid);
    }
    let qs: Vec<QParam> = q_grid.iter().map(|&q| QParam::new(q)).collect::<Result<_>>()?;
    let samples: Vec<CurveSample> = qs
        .par_iter()
        .map(|&q| {
            Ok(CurveSample {
                q: q.value(),
                x_star: solve_x_threshold(cond, q, tol)?,
            })
        })
        .collect::<Result<_>>()?;
    for w in samples.windows(2) {
        let (a, b) = (w[0].x_star.as_ordered(), w[1].x_star.as_ordered());
        if b > a + MONOTONE_SLACK {
            return Err(Error::NonMonotonic {
                q_prev: w[0].q,
                x_prev: a,
                q_next: w[1].q,
                x_next: b,
            });
        }
    }
    Ok(ThresholdCurve {
        family: cond.family,
        marginal_qubits: cond.marginal_qubits,
        mode: cond.mode,
        tolerance: tol,
        bracket: (0.0, 1.0),
        samples,
    })
}

/// `N / ((N − n)² + 2N − n)`, the crossing of the two W-state levels
/// `(1−x)/(N−n+1) + (N−n)x/N` and `(1−x)/(N−n) + (N−n−1)x/N`.
///
/// These are the largest joint and marginal eigenvalues only when
/// `2n + 2 <= N`; beyond that the `|↑…↑⟩` level dominates the marginal and
/// the conditional entropy has no root below `x = 1`.
pub fn bound_w_exact(qubits: usize, traced: usize) -> Result<Ratio<u64>> {
    Family::w(qubits, traced)?;
    let (n_total, n) = (qubits as u64, traced as u64);
    let kept = n_total - n;
    Ok(Ratio::new(n_total, kept * kept + 2 * n_total - n))
}

pub fn bound_w(qubits: usize, traced: usize) -> Result<f64> {
    bound_w_exact(qubits, traced).map(ratio_to_f64)
}

/// `2 / (N² + N + 2)`.
pub fn bound_ghz_exact(qubits: usize) -> Result<Ratio<u64>> {
    Family::ghz(qubits, 0)?;
    let n = qubits as u64;
    Ok(Ratio::new(2, n * n + n + 2))
}

pub fn bound_ghz(qubits: usize) -> Result<f64> {
    bound_ghz_exact(qubits).map(ratio_to_f64)
}

fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Crossing point of two eigenvalue maps: the `x` where `joint_max(x)`
/// first reaches `marginal_max(x)`.
pub fn asymptotic_threshold<J, M>(joint_max: J, marginal_max: M, tol: f64) -> Result<f64>
where
    J: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    check_tol(tol)?;
    let gap = |x: f64| joint_max(x) - marginal_max(x);
    let (f_lo, f_hi) = (gap(0.0), gap(1.0));
    if !(f_lo < 0.0 && f_hi >= 0.0) {
        return Err(Error::NoSignChange {
            lo: 0.0,
            hi: 1.0,
            f_lo,
            f_hi,
        });
    }
    bisect(|x| Ok(gap(x) < 0.0), 0.0, 1.0, tol)
}

/// [`asymptotic_threshold`] with the largest closed-form eigenvalues of a
/// split.
pub fn asymptotic_threshold_for(cond: &Conditional, tol: f64) -> Result<f64> {
    // Validate once so the closures below cannot fail.
    cond.spectra(0.0)?;
    let pair = |x: f64| cond.spectra(x).expect("validated split");
    asymptotic_threshold(
        |x| pair(x).joint.max_value(),
        |x| pair(x).marginal.max_value(),
        tol,
    )
}

/// Smallest eigenvalue of the partial transpose of a family member.
pub fn ppt_min_eigenvalue(spec: &FamilySpec, part: &PartitionSpec) -> Result<f64> {
    let rho = family_density(spec)?;
    let pt = partial_transpose(&rho, part)?;
    Ok(*eigenvalues(&pt)?
        .last()
        .expect("non-empty matrix"))
}

/// Largest `x` at which the partial transpose over `part` is still positive
/// semidefinite (minimum eigenvalue `>= -PSD_TOL`).
pub fn ppt_threshold(family: Family, part: &PartitionSpec, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let min_ev = |x: f64| ppt_min_eigenvalue(&FamilySpec::new(family, x)?, part);
    let (f_lo, f_hi) = (min_ev(0.0)?, min_ev(1.0)?);
    if f_lo < -PSD_TOL || f_hi >= -PSD_TOL {
        return Err(Error::NoSignChange {
            lo: 0.0,
            hi: 1.0,
            f_lo,
            f_hi,
        });
    }
    bisect(|x| Ok(min_ev(x)? >= -PSD_TOL), 0.0, 1.0, tol)
}

/// PPT threshold for one bipartition size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptCut {
    /// Number of transposed qubits.
    pub transposed: usize,
    pub threshold: f64,
}

/// PPT thresholds for every cut `k | m − k`, `k = 1..=m/2`, transposing the
/// last `k` qubits. Permutation symmetry makes the choice of qubits
/// irrelevant. Cuts that never turn negative are omitted.
pub fn ppt_cuts(family: Family, tol: f64) -> Result<Vec<PptCut>> {
    let kept = family.kept_qubits();
    let mut cuts = Vec::new();
    for k in 1..=kept / 2 {
        match ppt_threshold(family, &PartitionSpec::last(kept, k)?, tol) {
            Ok(threshold) => cuts.push(PptCut {
                transposed: k,
                threshold,
            }),
            Err(Error::NoSignChange { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(cuts)
}

/// The most restrictive PPT cut.
pub fn ppt_threshold_strongest(family: Family, tol: f64) -> Result<PptCut> {
    ppt_cuts(family, tol)?
        .into_iter()
        .min_by(|a, b| a.threshold.total_cmp(&b.threshold))
        .ok_or_else(|| Error::Unsupported(format!("{family}: no bipartition violates PPT")))
}
