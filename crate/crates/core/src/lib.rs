//! Separability of one-parameter symmetric multiqubit mixed states.
//!
//! The crate studies the families
//!
//! ```text
//! ρ_W(x)   = (1 − x)/(N + 1) · P_N + x |W_N⟩⟨W_N|
//! ρ_GHZ(x) = (1 − x)/(N + 1) · P_N + x |GHZ_N⟩⟨GHZ_N|
//! ρ_Wer(x) = x |Φ⟩⟨Φ| + (1 − x) · I/4
//! ```
//!
//! where `P_N` projects onto the permutation-symmetric subspace, and asks for
//! which mixing parameter `x` the Abe–Rajagopal q-conditional entropy
//!
//! ```text
//! S_q(B|A) = (1 − Tr ρ_AB^q / Tr ρ_A^q) / (q − 1)
//! ```
//!
//! turns negative (a sufficient signature of entanglement).
//!
//! Two independent routes are provided:
//!
//! - [`spectra`] gives closed-form eigenvalue lists for every family and
//!   one-qubit reduction, which is all the entropy functionals need.
//! - [`states`] and [`hermit`] build the density matrices over the full
//!   `2^N` computational basis, trace qubits out and diagonalise them. This
//!   brute-force path is the oracle the closed forms are checked against,
//!   and it also carries the partial-transpose (PPT) comparison.
//!
//! [`thresholds`] solves for the boundary `x*(q)`, the `q → ∞` bounds and the
//! PPT thresholds; [`verify`] and [`reproduce`] package the cross-checks and
//! headline numbers for the command-line front end.

pub mod entropy;
pub mod error;
pub mod hermit;
pub mod output;
pub mod reproduce;
pub mod spectra;
pub mod states;
pub mod thresholds;
pub mod verify;

pub use entropy::{
    ar_conditional_entropy, ln_power_sum_ratio, power_sum_ratio, renyi_entropy, tsallis_entropy,
    von_neumann_entropy, QParam,
};
pub use error::{Error, Result};
pub use hermit::{
    eigh, eigvalsh, partial_trace, partial_transpose, HermitianMatrix, PartitionSpec,
};
pub use spectra::{Conditional, Level, Mode, Spectrum, SpectrumPair};
pub use states::{family_density, Family, FamilySpec};
pub use thresholds::{
    bound_ghz, bound_w, ppt_threshold, solve_x_threshold, threshold_curve, Threshold,
    ThresholdCurve,
};
