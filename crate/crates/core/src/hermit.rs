//! Dense complex Hermitian matrices over the qubit computational basis.
//!
//! Qubit `0` is the most significant bit of a basis index: for `n` qubits,
//! qubit `k` lives in bit `n - 1 - k`. Spin up is bit value `0`.
//!
//! Matrices here are small (at most `2^12` on a side) and very sparse for the
//! symmetric families, so the eigensolver is a cyclic complex Jacobi method
//! that skips exactly-zero couplings. Rotations only mix rows and columns that
//! are already coupled, which keeps the work proportional to the size of the
//! occupied blocks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectra::Spectrum;

/// Largest supported register.
pub const MAX_QUBITS: usize = 12;

/// Asymmetry accepted when building a [`HermitianMatrix`] from raw entries.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Off-diagonal magnitude (relative to the Frobenius norm) at which the
/// Jacobi sweeps stop.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

/// Sweep cap for the Jacobi solver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting inputs whose
    /// asymmetry exceeds [`HERMITIAN_TOL`]. The stored matrix is the
    /// Hermitian part of the input.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let mut m = Self { dim, data };
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        for i in 0..dim {
            for j in i..dim {
                let avg = (m.data[i * dim + j] + m.data[j * dim + i].conj()) * 0.5;
                m.data[i * dim + j] = avg;
                m.data[j * dim + i] = avg.conj();
            }
        }
        Ok(m)
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * m.dim + i] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|` for a column of amplitudes.
    pub fn outer(amplitudes: &[Complex64]) -> Self {
        let dim = amplitudes.len();
        let mut m = Self::zeros(dim);
        for (i, a) in amplitudes.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in amplitudes.iter().enumerate() {
                m.data[i * dim + j] = a * b.conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits when `dim` is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(u, v)| u * a + v * b)
                .collect(),
        })
    }

    /// Plain matrix product. The result is Hermitian only when the factors
    /// commute, so it is returned as raw row-major entries.
    pub fn matmul(&self, other: &Self) -> Result<Vec<Complex64>> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Relabels qubits `a` and `b`, i.e. returns `Π ρ Π` for the swap `Π`.
    pub fn swap_qubits(&self, a: usize, b: usize) -> Result<Self> {
        let n = self.n_qubits().ok_or(Error::DimensionMismatch {
            expected: self.dim.next_power_of_two(),
            found: self.dim,
        })?;
        if a >= n || b >= n {
            return Err(Error::InvalidPartition(format!(
                "qubit index out of range for {n} qubits"
            )));
        }
        let (ba, bb) = (n - 1 - a, n - 1 - b);
        let swap = |i: usize| {
            let (x, y) = ((i >> ba) & 1, (i >> bb) & 1);
            if x == y {
                i
            } else {
                i ^ (1 << ba) ^ (1 << bb)
            }
        };
        let dim = self.dim;
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.data[swap(i) * dim + swap(j)] = self.data[i * dim + j];
            }
        }
        Ok(out)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

/// A set of qubits singled out from an `n_qubits` register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    n_qubits: usize,
    subset: Vec<usize>,
}

impl PartitionSpec {
    /// `subset` must be a non-empty proper subset of `0..n_qubits`; it is
    /// sorted and deduplicated.
    pub fn new(n_qubits: usize, subset: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut subset: Vec<usize> = subset.into_iter().collect();
        subset.sort_unstable();
        subset.dedup();
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidPartition(format!(
                "register of {n_qubits} qubits (supported: 1..={MAX_QUBITS})"
            )));
        }
        if let Some(&q) = subset.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidPartition(format!(
                "qubit {q} outside register of {n_qubits}"
            )));
        }
        if subset.is_empty() || subset.len() == n_qubits {
            return Err(Error::InvalidPartition(format!(
                "subset must be non-empty and proper, got {} of {n_qubits} qubits",
                subset.len()
            )));
        }
        Ok(Self { n_qubits, subset })
    }

    /// The last `count` qubits.
    pub fn last(n_qubits: usize, count: usize) -> Result<Self> {
        Self::new(n_qubits, n_qubits.saturating_sub(count)..n_qubits)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    fn mask(&self) -> usize {
        self.subset
            .iter()
            .fold(0, |m, &q| m | (1 << (self.n_qubits - 1 - q)))
    }

    fn check(&self, rho: &HermitianMatrix) -> Result<()> {
        let expected = 1usize << self.n_qubits;
        if rho.dim != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: rho.dim,
            });
        }
        Ok(())
    }
}

/// Scatters the low bits of `compact` into the set bits of `mask`.
fn deposit(compact: usize, mask: usize) -> usize {
    let mut out = 0;
    let mut src = 0;
    let mut m = mask;
    while m != 0 {
        let bit = m & m.wrapping_neg();
        if (compact >> src) & 1 == 1 {
            out |= bit;
        }
        src += 1;
        m &= m - 1;
    }
    out
}

/// Traces out the qubits in `part`, keeping the rest in their original order.
pub fn partial_trace(rho: &HermitianMatrix, part: &PartitionSpec) -> Result<HermitianMatrix> {
    part.check(rho)?;
    let full_mask = (1usize << part.n_qubits) - 1;
    let traced_mask = part.mask();
    let kept_mask = full_mask & !traced_mask;
    let kept_dim = 1usize << (part.n_qubits - part.subset.len());
    let traced_dim = 1usize << part.subset.len();

    let kept_idx: Vec<usize> = (0..kept_dim).map(|k| deposit(k, kept_mask)).collect();
    let traced_idx: Vec<usize> = (0..traced_dim).map(|t| deposit(t, traced_mask)).collect();

    let dim = rho.dim;
    let mut out = HermitianMatrix::zeros(kept_dim);
    for (r, &kr) in kept_idx.iter().enumerate() {
        for (c, &kc) in kept_idx.iter().enumerate() {
            out.data[r * kept_dim + c] = traced_idx
                .iter()
                .map(|&t| rho.data[(kr | t) * dim + (kc | t)])
                .sum();
        }
    }
    Ok(out)
}

/// Transposes the qubits in `part`: `⟨a i|ρ^Γ|b j⟩ = ⟨a j|ρ|b i⟩` for `i, j`
/// ranging over the selected qubits.
pub fn partial_transpose(rho: &HermitianMatrix, part: &PartitionSpec) -> Result<HermitianMatrix> {
    part.check(rho)?;
    let mask = part.mask();
    let dim = rho.dim;
    let mut out = HermitianMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let src_r = (r & !mask) | (c & mask);
            let src_c = (c & !mask) | (r & mask);
            out.data[r * dim + c] = rho.data[src_r * dim + src_c];
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Eigenvalues in non-increasing order.
    pub values: Vec<f64>,
    /// Column `k` (row-major storage, `vectors[i * dim + k]`) is the
    /// eigenvector of `values[k]`.
    pub vectors: Vec<Complex64>,
    pub sweeps: usize,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.dim();
        let mut out = HermitianMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (0..n)
                    .map(|k| self.vectors[i * n + k] * self.values[k] * self.vectors[j * n + k].conj())
                    .sum();
            }
        }
        out
    }
}

/// Full eigen-decomposition by cyclic complex Jacobi rotations.
pub fn eigh(m: &HermitianMatrix) -> Result<Eigen> {
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.dim;
    let mut a = m.data.clone();
    let mut v = HermitianMatrix::identity(n).data;

    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = JACOBI_OFF_TOL * frob.max(f64::MIN_POSITIVE);

    let max_off = |a: &[Complex64]| {
        let mut worst = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                worst = worst.max(a[p * n + q].norm());
            }
        }
        worst
    };

    let mut sweeps = 0;
    let mut off = max_off(&a);
    while off > stop {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                rotate(&mut a, &mut v, n, p, q, apq, mag);
            }
        }
        sweeps += 1;
        off = max_off(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vectors = vec![ZERO; n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + col] = v[i * n + k];
        }
    }
    Ok(Eigen {
        values,
        vectors,
        sweeps,
    })
}

/// One Jacobi step annihilating `a[p][q]`.
///
/// The phase of `a_pq = |a_pq| e^{iφ}` is absorbed into column `q` first, after
/// which an ordinary real rotation diagonalises the 2×2 block. The combined
/// unitary on the `(p, q)` plane is `[[c, s], [-s e^{-iφ}, c e^{-iφ}]]`.
fn rotate(
    a: &mut [Complex64],
    v: &mut [Complex64],
    n: usize,
    p: usize,
    q: usize,
    apq: Complex64,
    mag: f64,
) {
    let phase = apq / mag; // e^{iφ}
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let conj_phase = phase.conj(); // e^{-iφ}

    // Columns: A ← A J
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        if akp == ZERO && akq == ZERO {
            continue;
        }
        a[k * n + p] = akp * c - akq * conj_phase * s;
        a[k * n + q] = akp * s + akq * conj_phase * c;
    }
    // Rows: A ← J† A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        if apk == ZERO && aqk == ZERO {
            continue;
        }
        a[p * n + k] = apk * c - aqk * phase * s;
        a[q * n + k] = apk * s + aqk * phase * c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = Complex64::new(app - t * mag, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        if vkp == ZERO && vkq == ZERO {
            continue;
        }
        v[k * n + p] = vkp * c - vkq * conj_phase * s;
        v[k * n + q] = vkp * s + vkq * conj_phase * c;
    }
}

/// Eigenvalues only, in non-increasing order with multiplicities.
pub fn eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eigh(m)?.values)
}

/// Eigenvalues merged into a [`Spectrum`] (degeneracies within
/// [`crate::spectra::MERGE_TOL`]).
pub fn eigvalsh(m: &HermitianMatrix) -> Result<Spectrum> {
    Ok(Spectrum::from_values(&eigenvalues(m)?))
}
