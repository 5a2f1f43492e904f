//! Computational-basis constructions: Dicke, W and GHZ vectors, the
//! symmetric projector and the one-parameter family density matrices.
//!
//! Everything here is the brute-force side of the crate; reduced states are
//! obtained only by partial trace of the full `N`-qubit matrix.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermit::{partial_trace, HermitianMatrix, PartitionSpec, MAX_QUBITS};

/// A one-parameter family of mixed states, without the mixing parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    /// `(1 − x)/(N + 1) P_N + x |W_N⟩⟨W_N|` with `traced` qubits removed.
    W { qubits: usize, traced: usize },
    /// `(1 − x)/(N + 1) P_N + x |GHZ_N⟩⟨GHZ_N|` with `traced ∈ {0, 1}`.
    Ghz { qubits: usize, traced: usize },
    /// Two-qubit Werner state `x |Φ⟩⟨Φ| + (1 − x) I/4`.
    Werner,
}

impl Family {
    pub fn w(qubits: usize, traced: usize) -> Result<Self> {
        let f = Family::W { qubits, traced };
        f.validate()?;
        Ok(f)
    }

    pub fn ghz(qubits: usize, traced: usize) -> Result<Self> {
        let f = Family::Ghz { qubits, traced };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::W { qubits, traced } => {
                check_qubits(qubits)?;
                if traced + 2 > qubits {
                    return Err(Error::InvalidFamily(format!(
                        "W family with N = {qubits} allows 0 <= n <= {}, got n = {traced}",
                        qubits - 2
                    )));
                }
            }
            Family::Ghz { qubits, traced } => {
                check_qubits(qubits)?;
                if traced > 1 {
                    return Err(Error::InvalidFamily(format!(
                        "GHZ family allows n in {{0, 1}}, got n = {traced}"
                    )));
                }
            }
            Family::Werner => {}
        }
        Ok(())
    }

    /// Size of the register the family is defined on before tracing.
    pub fn full_qubits(&self) -> usize {
        match *self {
            Family::W { qubits, .. } | Family::Ghz { qubits, .. } => qubits,
            Family::Werner => 2,
        }
    }

    pub fn traced(&self) -> usize {
        match *self {
            Family::W { traced, .. } | Family::Ghz { traced, .. } => traced,
            Family::Werner => 0,
        }
    }

    /// Qubits left after tracing.
    pub fn kept_qubits(&self) -> usize {
        self.full_qubits() - self.traced()
    }

    /// The same family with one more qubit traced out, if that is still a
    /// member of the family type.
    pub fn with_traced(&self, traced: usize) -> Result<Self> {
        let f = match *self {
            Family::W { qubits, .. } => Family::W { qubits, traced },
            Family::Ghz { qubits, .. } => Family::Ghz { qubits, traced },
            Family::Werner if traced == 0 => Family::Werner,
            Family::Werner => {
                return Err(Error::InvalidFamily(
                    "the Werner family has no traced variant".into(),
                ))
            }
        };
        f.validate()?;
        Ok(f)
    }

    pub fn at(self, x: f64) -> Result<FamilySpec> {
        FamilySpec::new(self, x)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::W { qubits, traced } => write!(f, "W(N={qubits}, n={traced})"),
            Family::Ghz { qubits, traced } => write!(f, "GHZ(N={qubits}, n={traced})"),
            Family::Werner => write!(f, "Werner"),
        }
    }
}

fn check_qubits(qubits: usize) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&qubits) {
        return Err(Error::InvalidFamily(format!(
            "number of qubits must lie in 2..={MAX_QUBITS}, got {qubits}"
        )));
    }
    Ok(())
}

pub(crate) fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange {
            name,
            value: x,
            expected: "0 <= x <= 1",
        });
    }
    Ok(())
}

/// A family member: family plus mixing parameter `x ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub x: f64,
}

impl FamilySpec {
    pub fn new(family: Family, x: f64) -> Result<Self> {
        family.validate()?;
        check_unit_interval("x", x)?;
        Ok(Self { family, x })
    }
}

/// Unit-norm pure state on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> HermitianMatrix {
        HermitianMatrix::outer(&self.amplitudes)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Symmetric state with `k_down` down spins, `|N/2, N/2 − k_down⟩`.
pub fn dicke_vector(n_qubits: usize, k_down: usize) -> Result<StateVector> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidFamily(format!(
            "number of qubits must lie in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    if k_down > n_qubits {
        return Err(Error::OutOfRange {
            name: "k_down",
            value: k_down as f64,
            expected: "0 <= k_down <= N",
        });
    }
    let amp = Complex64::new(binomial(n_qubits, k_down).sqrt().recip(), 0.0);
    let amplitudes = (0..1usize << n_qubits)
        .map(|i| {
            if i.count_ones() as usize == k_down {
                amp
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(StateVector {
        n_qubits,
        amplitudes,
    })
}

/// One-down Dicke state `|N/2, N/2 − 1⟩`.
pub fn w_vector(n_qubits: usize) -> Result<StateVector> {
    dicke_vector(n_qubits, 1)
}

/// `(|↑…↑⟩ + |↓…↓⟩)/√2`.
pub fn ghz_vector(n_qubits: usize) -> Result<StateVector> {
    if !(2..=MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::InvalidFamily(format!(
            "GHZ needs 2..={MAX_QUBITS} qubits, got {n_qubits}"
        )));
    }
    let dim = 1usize << n_qubits;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[0] = h;
    amplitudes[dim - 1] = h;
    Ok(StateVector {
        n_qubits,
        amplitudes,
    })
}

/// Projector onto the `N + 1` dimensional symmetric subspace.
pub fn sym_projector(n_qubits: usize) -> Result<HermitianMatrix> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidFamily(format!(
            "number of qubits must lie in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    let dim = 1usize << n_qubits;
    let weights: Vec<f64> = (0..=n_qubits)
        .map(|k| binomial(n_qubits, k).recip())
        .collect();
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        let wi = i.count_ones();
        for j in 0..dim {
            if j.count_ones() == wi {
                data[i * dim + j] = Complex64::new(weights[wi as usize], 0.0);
            }
        }
    }
    HermitianMatrix::from_row_major(dim, data)
}

/// Density matrix of a family member over `2^(N − n)` basis states.
pub fn family_density(spec: &FamilySpec) -> Result<HermitianMatrix> {
    spec.family.validate()?;
    check_unit_interval("x", spec.x)?;
    let x = spec.x;
    match spec.family {
        Family::Werner => {
            let bell = ghz_vector(2)?.projector();
            bell.combine(x, &HermitianMatrix::identity(4), (1.0 - x) / 4.0)
        }
        Family::W { qubits, traced } | Family::Ghz { qubits, traced } => {
            let pure = match spec.family {
                Family::W { .. } => w_vector(qubits)?,
                _ => ghz_vector(qubits)?,
            };
            let full = sym_projector(qubits)?.combine(
                (1.0 - x) / (qubits + 1) as f64,
                &pure.projector(),
                x,
            )?;
            if traced == 0 {
                Ok(full)
            } else {
                partial_trace(&full, &PartitionSpec::last(qubits, traced)?)
            }
        }
    }
}
