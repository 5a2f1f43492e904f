//! Oracle cross-check of the closed-form spectra.
//!
//! For every family, register size and mixing parameter on the grid, the
//! full density matrix is built in the computational basis, qubits are
//! traced out one at a time and each reduction is diagonalised. The sorted
//! eigenvalues must match the closed-form levels (padded with zeros) to
//! [`VERIFY_TOL`].

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::hermit::{eigenvalues, partial_trace, HermitianMatrix, PartitionSpec};
use crate::output::format_sig;
use crate::spectra::{
    ghz_joint_spectrum, ghz_marginal_spectrum, maximally_mixed_qubit, w_spectrum,
    werner_spectrum, Conditional, Mode, Spectrum,
};
use crate::states::{family_density, Family};

pub const VERIFY_TOL: f64 = 1e-10;

/// `x ∈ {0, 0.05, …, 1}`.
pub fn x_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCheck {
    pub label: String,
    pub qubits: usize,
    pub traced: usize,
    pub x: f64,
    pub max_abs_diff: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub checks: Vec<SpectrumCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SpectrumCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.checks.iter().map(|c| c.max_abs_diff).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "label,qubits,traced,x,max_abs_diff,passed")?;
        for c in &self.checks {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                c.label,
                c.qubits,
                c.traced,
                format_sig(c.x),
                format_sig(c.max_abs_diff),
                c.passed
            )?;
        }
        Ok(())
    }
}

/// Largest deviation between oracle eigenvalues and a closed-form spectrum.
pub fn compare_with_oracle(rho: &HermitianMatrix, closed: &Spectrum) -> Result<f64> {
    let oracle = eigenvalues(rho)?;
    let expected = closed.padded_values(oracle.len());
    if expected.len() != oracle.len() {
        return Ok(f64::INFINITY);
    }
    Ok(oracle
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

fn check(label: String, qubits: usize, traced: usize, x: f64, diff: f64) -> SpectrumCheck {
    SpectrumCheck {
        label,
        qubits,
        traced,
        x,
        max_abs_diff: diff,
        passed: diff <= VERIFY_TOL,
    }
}

fn trace_last(rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    let n = rho.n_qubits().expect("power-of-two register");
    partial_trace(rho, &PartitionSpec::last(n, 1)?)
}

fn checks_for(qubits: usize, x: f64) -> Result<Vec<SpectrumCheck>> {
    let mut out = Vec::new();

    let mut rho = family_density(&Family::w(qubits, 0)?.at(x)?)?;
    for traced in 0..qubits {
        let diff = compare_with_oracle(&rho, &w_spectrum(qubits, traced, x)?)?;
        out.push(check(format!("W N={qubits} n={traced}"), qubits, traced, x, diff));
        if traced + 1 < qubits {
            rho = trace_last(&rho)?;
        }
    }

    let rho = family_density(&Family::ghz(qubits, 0)?.at(x)?)?;
    let diff = compare_with_oracle(&rho, &ghz_joint_spectrum(qubits, x)?)?;
    out.push(check(format!("GHZ N={qubits} n=0"), qubits, 0, x, diff));
    let diff = compare_with_oracle(&trace_last(&rho)?, &ghz_marginal_spectrum(qubits, x)?)?;
    out.push(check(format!("GHZ N={qubits} n=1"), qubits, 1, x, diff));

    if qubits == 2 {
        let rho = family_density(&Family::Werner.at(x)?)?;
        let diff = compare_with_oracle(&rho, &werner_spectrum(x)?)?;
        out.push(check("Werner".into(), 2, 0, x, diff));
        let diff = compare_with_oracle(&trace_last(&rho)?, &maximally_mixed_qubit())?;
        out.push(check("Werner marginal".into(), 2, 1, x, diff));
    }
    Ok(out)
}

/// Runs the oracle comparison for `2..=max_qubits` qubits on [`x_grid`].
pub fn verify_closed_forms(max_qubits: usize) -> Result<VerifyReport> {
    let jobs: Vec<(usize, f64)> = (2..=max_qubits)
        .flat_map(|n| x_grid().into_iter().map(move |x| (n, x)))
        .collect();
    let nested: Vec<Vec<SpectrumCheck>> = jobs
        .par_iter()
        .map(|&(n, x)| checks_for(n, x))
        .collect::<Result<_>>()?;
    Ok(VerifyReport {
        tolerance: VERIFY_TOL,
        checks: nested.into_iter().flatten().collect(),
    })
}

/// Every conditional split studied: `S(A_1|rest)` for all W reductions, the
/// full GHZ states and the Werner state, plus the published three-qubit
/// `S(AB|C)` variant.
pub fn standard_conditionals(max_qubits: usize) -> Result<Vec<Conditional>> {
    let mut out = Vec::new();
    for n in 2..=max_qubits {
        for traced in 0..=n - 2 {
            out.push(Conditional::single_qubit(Family::w(n, traced)?)?);
        }
        out.push(Conditional::single_qubit(Family::ghz(n, 0)?)?);
    }
    out.push(Conditional::single_qubit(Family::Werner)?);
    if max_qubits >= 3 {
        out.push(Conditional::new(Family::w(3, 0)?, 1, Mode::AsPublished)?);
    }
    Ok(out)
}
