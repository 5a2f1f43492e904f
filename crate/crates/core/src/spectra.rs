//! Closed-form spectra of the W, GHZ and Werner families and their
//! reductions.
//!
//! Every family state is diagonal in the symmetric (Dicke) basis, so the
//! non-zero eigenvalues are affine in `x`:
//!
//! | state | levels |
//! |-------|--------|
//! | W, `N` qubits, `n` traced | `b` ×(N−n−1), `b + n x/N`, `b + (N−n) x/N`, with `b = (1−x)/(N−n+1)` |
//! | GHZ, full | `(1−x)/(N+1)` ×N, `(1+N x)/(N+1)` |
//! | GHZ, one qubit traced | `(1−x)/N` ×(N−2), `(2 + x(N−2))/(2N)` ×2 |
//! | Werner | `(1+3x)/4`, `(1−x)/4` ×3 |
//!
//! Reducing a one-down state leaves `|↑…↑⟩` with probability `n/N`, which is
//! where the `n x/N` level comes from.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::format_sig;
use crate::states::{check_unit_interval, Family, FamilySpec};

/// Eigenvalues closer than this are reported as one degenerate level.
pub const MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalue multiset, stored as levels in non-increasing order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum {
    levels: Vec<Level>,
}

impl Spectrum {
    /// Sorts, drops empty levels and merges values within [`MERGE_TOL`]
    /// (merged value is the multiplicity-weighted mean).
    pub fn from_levels<I>(levels: I) -> Self
    where
        I: IntoIterator<Item = (f64, usize)>,
    {
        let mut raw: Vec<(f64, usize)> = levels.into_iter().filter(|&(_, m)| m > 0).collect();
        raw.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut merged: Vec<Level> = Vec::with_capacity(raw.len());
        for (value, multiplicity) in raw {
            match merged.last_mut() {
                Some(last) if (last.value - value).abs() <= MERGE_TOL => {
                    let total = last.multiplicity + multiplicity;
                    last.value = (last.value * last.multiplicity as f64
                        + value * multiplicity as f64)
                        / total as f64;
                    last.multiplicity = total;
                }
                _ => merged.push(Level {
                    value,
                    multiplicity,
                }),
            }
        }
        Self { levels: merged }
    }

    pub fn from_values(values: &[f64]) -> Self {
        Self::from_levels(values.iter().map(|&v| (v, 1)))
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Number of eigenvalues counted with multiplicity.
    pub fn dimension(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    /// Expanded eigenvalues, non-increasing.
    pub fn values(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity))
            .collect()
    }

    /// [`Self::values`] padded with zeros up to `dim` entries.
    pub fn padded_values(&self, dim: usize) -> Vec<f64> {
        let mut v = self.values();
        if v.len() < dim {
            v.resize(dim, 0.0);
        }
        v
    }

    pub fn total(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| l.value * l.multiplicity as f64)
            .sum()
    }

    pub fn max_value(&self) -> f64 {
        self.levels.first().map_or(0.0, |l| l.value)
    }

    pub fn min_value(&self) -> f64 {
        self.levels.last().map_or(0.0, |l| l.value)
    }

    /// All pairwise products, the spectrum of `ρ ⊗ σ`.
    pub fn tensor(&self, other: &Spectrum) -> Spectrum {
        Spectrum::from_levels(self.levels.iter().flat_map(|a| {
            other
                .levels
                .iter()
                .map(move |b| (a.value * b.value, a.multiplicity * b.multiplicity))
        }))
    }

    /// Header `value,multiplicity`, one row per level.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "value,multiplicity")?;
        for l in &self.levels {
            writeln!(out, "{},{}", format_sig(l.value), l.multiplicity)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum serialises")
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_sig(l.value))?;
            if l.multiplicity > 1 {
                write!(f, " ×{}", l.multiplicity)?;
            }
        }
        write!(f, "}}")
    }
}

/// W family on `qubits` qubits with `traced` of them removed. Valid for
/// `traced <= qubits - 1`; only non-zero levels of the symmetric block are
/// listed (apart from `x = 1`, where the flat level is zero).
pub fn w_spectrum(qubits: usize, traced: usize, x: f64) -> Result<Spectrum> {
    if qubits < 2 || traced >= qubits {
        return Err(Error::InvalidFamily(format!(
            "W spectrum needs N >= 2 and 0 <= n <= N - 1, got N = {qubits}, n = {traced}"
        )));
    }
    check_unit_interval("x", x)?;
    let n_total = qubits as f64;
    let kept = qubits - traced;
    let base = (1.0 - x) / (kept + 1) as f64;
    Ok(Spectrum::from_levels([
        (base, kept - 1),
        (base + traced as f64 * x / n_total, 1),
        (base + kept as f64 * x / n_total, 1),
    ]))
}

pub fn ghz_joint_spectrum(qubits: usize, x: f64) -> Result<Spectrum> {
    if qubits < 2 {
        return Err(Error::InvalidFamily(format!(
            "GHZ spectrum needs N >= 2, got {qubits}"
        )));
    }
    check_unit_interval("x", x)?;
    let n = qubits as f64;
    Ok(Spectrum::from_levels([
        ((1.0 - x) / (n + 1.0), qubits),
        ((1.0 + n * x) / (n + 1.0), 1),
    ]))
}

/// GHZ family with one qubit traced out. For `N = 2` only the doubled level
/// survives.
pub fn ghz_marginal_spectrum(qubits: usize, x: f64) -> Result<Spectrum> {
    if qubits < 2 {
        return Err(Error::InvalidFamily(format!(
            "GHZ spectrum needs N >= 2, got {qubits}"
        )));
    }
    check_unit_interval("x", x)?;
    let n = qubits as f64;
    Ok(Spectrum::from_levels([
        ((1.0 - x) / n, qubits - 2),
        ((2.0 + x * (n - 2.0)) / (2.0 * n), 2),
    ]))
}

pub fn werner_spectrum(x: f64) -> Result<Spectrum> {
    check_unit_interval("x", x)?;
    Ok(Spectrum::from_levels([
        ((1.0 + 3.0 * x) / 4.0, 1),
        ((1.0 - x) / 4.0, 3),
    ]))
}

/// `{1/2 ×2}`, the single-qubit maximally mixed state.
pub fn maximally_mixed_qubit() -> Spectrum {
    Spectrum::from_levels([(0.5, 2)])
}

/// Closed-form spectrum of a family member (no conditioning).
pub fn state_spectrum(spec: &FamilySpec) -> Result<Spectrum> {
    let x = spec.x;
    match spec.family {
        Family::W { qubits, traced } => w_spectrum(qubits, traced, x),
        Family::Ghz { qubits, traced: 0 } => ghz_joint_spectrum(qubits, x),
        Family::Ghz { qubits, .. } => ghz_marginal_spectrum(qubits, x),
        Family::Werner => werner_spectrum(x),
    }
}

/// Which marginal a conditional entropy divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// True reduced spectra.
    #[default]
    Default,
    /// Replaces every single-qubit W marginal with `I/2`, which is what the
    /// published three-qubit `S(AB|C)` curve was computed with. The true
    /// single-qubit marginal of the three-qubit W family is
    /// `{1/2 + x/6, 1/2 − x/6}`.
    AsPublished,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Default => "default",
            Mode::AsPublished => "as-published",
        })
    }
}

/// Joint state and the marginal it is conditioned on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPair {
    pub joint: Spectrum,
    pub marginal: Spectrum,
}

/// A bipartition `A_1…A_k | A_{k+1}…A_m` of a family member, identified by
/// the number of qubits kept in the marginal.
///
/// `S(A_1|A_2…A_m)` keeps `m − 1` qubits; `S(AB|C)` for three qubits keeps
/// one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Conditional {
    pub family: Family,
    pub marginal_qubits: usize,
    pub mode: Mode,
}

impl Conditional {
    pub fn new(family: Family, marginal_qubits: usize, mode: Mode) -> Result<Self> {
        family.validate()?;
        let kept = family.kept_qubits();
        if marginal_qubits == 0 || marginal_qubits >= kept {
            return Err(Error::InvalidFamily(format!(
                "{family}: marginal must keep 1..={} qubits, got {marginal_qubits}",
                kept - 1
            )));
        }
        let c = Self {
            family,
            marginal_qubits,
            mode,
        };
        // Reject unsupported reductions up front.
        c.spectra(0.0)?;
        Ok(c)
    }

    /// `S(A_1 | A_2 … A_m)`: condition on all but one kept qubit.
    pub fn single_qubit(family: Family) -> Result<Self> {
        family.validate()?;
        Self::new(family, family.kept_qubits() - 1, Mode::Default)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn spectra(&self, x: f64) -> Result<SpectrumPair> {
        let joint = state_spectrum(&FamilySpec::new(self.family, x)?)?;
        let marginal = self.marginal(x)?;
        Ok(SpectrumPair { joint, marginal })
    }

    fn marginal(&self, x: f64) -> Result<Spectrum> {
        let k = self.marginal_qubits;
        match self.family {
            Family::W { qubits, .. } => {
                if k == 1 && self.mode == Mode::AsPublished {
                    Ok(maximally_mixed_qubit())
                } else {
                    w_spectrum(qubits, qubits - k, x)
                }
            }
            Family::Ghz { qubits, traced: 0 } if k + 1 == qubits => {
                ghz_marginal_spectrum(qubits, x)
            }
            Family::Ghz { .. } => Err(Error::Unsupported(format!(
                "{}: closed-form GHZ spectra cover at most one traced qubit",
                self.family
            ))),
            Family::Werner => Ok(maximally_mixed_qubit()),
        }
    }
}

impl fmt::Display for Conditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kept = self.family.kept_qubits();
        write!(
            f,
            "{} split {}|{} ({})",
            self.family,
            kept - self.marginal_qubits,
            self.marginal_qubits,
            self.mode
        )
    }
}

/// Joint spectrum and its one-fewer-qubit marginal.
pub fn family_spectra(spec: &FamilySpec) -> Result<SpectrumPair> {
    Conditional::single_qubit(spec.family)?.spectra(spec.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_levels(s: &Spectrum, expect: &[(f64, usize)]) {
        assert_eq!(s.levels().len(), expect.len(), "{s}");
        for (l, &(v, m)) in s.levels().iter().zip(expect) {
            assert!((l.value - v).abs() < 1e-14, "{s} vs {expect:?}");
            assert_eq!(l.multiplicity, m, "{s}");
        }
    }

    #[test]
    fn three_qubit_w_joint() {
        let x = 0.4;
        assert_levels(
            &w_spectrum(3, 0, x).unwrap(),
            &[((1.0 + 3.0 * x) / 4.0, 1), ((1.0 - x) / 4.0, 3)],
        );
    }

    #[test]
    fn three_qubit_w_two_qubit_marginal() {
        let x = 0.25;
        assert_levels(
            &w_spectrum(3, 1, x).unwrap(),
            &[((1.0 + x) / 3.0, 1), (1.0 / 3.0, 1), ((1.0 - x) / 3.0, 1)],
        );
    }

    #[test]
    fn w_at_zero_is_flat() {
        for n_total in 2..=8 {
            for traced in 0..n_total {
                let s = w_spectrum(n_total, traced, 0.0).unwrap();
                let kept = n_total - traced;
                assert_levels(&s, &[(1.0 / (kept + 1) as f64, kept + 1)]);
            }
        }
    }

    #[test]
    fn w_bounds() {
        assert!(w_spectrum(3, 3, 0.1).is_err());
        assert!(w_spectrum(1, 0, 0.1).is_err());
        assert!(w_spectrum(3, 0, 1.5).is_err());
    }

    #[test]
    fn ghz_joint_cases() {
        let x = 0.3;
        assert_levels(
            &ghz_joint_spectrum(3, x).unwrap(),
            &[((1.0 + 3.0 * x) / 4.0, 1), ((1.0 - x) / 4.0, 3)],
        );
        assert_levels(&ghz_joint_spectrum(5, 0.0).unwrap(), &[(1.0 / 6.0, 6)]);
        assert_levels(&ghz_joint_spectrum(4, 1.0).unwrap(), &[(1.0, 1), (0.0, 4)]);
    }

    #[test]
    fn ghz_marginal_cases() {
        let x = 0.6;
        assert_levels(
            &ghz_marginal_spectrum(4, x).unwrap(),
            &[((1.0 + x) / 4.0, 2), ((1.0 - x) / 4.0, 2)],
        );
        assert_levels(&ghz_marginal_spectrum(5, 0.0).unwrap(), &[(0.2, 5)]);
        assert_levels(&ghz_marginal_spectrum(2, 0.7).unwrap(), &[(0.5, 2)]);
    }

    #[test]
    fn werner_endpoints() {
        assert_levels(&werner_spectrum(1.0).unwrap(), &[(1.0, 1), (0.0, 3)]);
        assert_levels(&werner_spectrum(0.0).unwrap(), &[(0.25, 4)]);
    }

    #[test]
    fn family_pairs() {
        let x = 0.35;
        let p = family_spectra(&Family::w(2, 0).unwrap().at(x).unwrap()).unwrap();
        assert_levels(&p.joint, &[((1.0 + 2.0 * x) / 3.0, 1), ((1.0 - x) / 3.0, 2)]);
        assert_levels(&p.marginal, &[(0.5, 2)]);

        let p = family_spectra(&Family::w(3, 0).unwrap().at(x).unwrap()).unwrap();
        assert_eq!(p.joint, w_spectrum(3, 0, x).unwrap());
        assert_eq!(p.marginal, w_spectrum(3, 1, x).unwrap());

        let p = family_spectra(&Family::ghz(3, 0).unwrap().at(x).unwrap()).unwrap();
        assert_eq!(p.joint, ghz_joint_spectrum(3, x).unwrap());
        assert_eq!(p.marginal, ghz_marginal_spectrum(3, x).unwrap());

        let p = family_spectra(&FamilySpec::new(Family::Werner, x).unwrap()).unwrap();
        assert_eq!(p.marginal, maximally_mixed_qubit());
    }

    #[test]
    fn as_published_single_qubit_marginal() {
        let fam = Family::w(3, 0).unwrap();
        let true_split = Conditional::new(fam, 1, Mode::Default).unwrap();
        let published = true_split.with_mode(Mode::AsPublished);
        let x = 0.3;
        assert_levels(
            &true_split.spectra(x).unwrap().marginal,
            &[(0.5 + x / 6.0, 1), (0.5 - x / 6.0, 1)],
        );
        assert_eq!(published.spectra(x).unwrap().marginal, maximally_mixed_qubit());
    }

    #[test]
    fn conditional_rejects_unsupported_splits() {
        assert!(Conditional::new(Family::ghz(4, 0).unwrap(), 2, Mode::Default).is_err());
        assert!(Conditional::single_qubit(Family::ghz(4, 1).unwrap()).is_err());
        assert!(Conditional::new(Family::w(3, 0).unwrap(), 3, Mode::Default).is_err());
        assert!(Conditional::new(Family::w(3, 0).unwrap(), 0, Mode::Default).is_err());
    }

    #[test]
    fn merging_collapses_near_degeneracies() {
        let s = Spectrum::from_values(&[0.25, 0.25 + 4e-10, 0.5, 0.0, 0.0]);
        assert_eq!(s.levels().len(), 3);
        assert_eq!(s.levels()[1].multiplicity, 2);
        assert_eq!(s.dimension(), 5);
        assert!((s.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_and_json() {
        let s = Spectrum::from_levels([(0.55, 1), (0.15, 3)]);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "value,multiplicity\n0.55,1\n0.15,3\n"
        );
        assert_eq!(
            s.to_json(),
            r#"[{"value":0.55,"multiplicity":1},{"value":0.15,"multiplicity":3}]"#
        );
        let back: Spectrum = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
