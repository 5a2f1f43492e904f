//! Cross-checks of closed forms and thresholds against brute-force density
//! matrices and independently derived values.

use num_complex::Complex64;
use qsep::entropy::power_sum;
use qsep::hermit::eigenvalues;
use qsep::spectra::{w_spectrum, Mode};
use qsep::states::{dicke_vector, sym_projector};
use qsep::thresholds::{ppt_cuts, ppt_threshold_strongest, DEFAULT_TOL};
use qsep::{
    ar_conditional_entropy, family_density, partial_trace, ppt_threshold, solve_x_threshold,
    Conditional, Family, PartitionSpec, QParam, Spectrum, Threshold,
};

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Conditional entropy of `S(first kept qubit | rest)` from full matrices.
fn oracle_conditional(family: Family, x: f64, q: f64) -> f64 {
    let rho = family_density(&family.at(x).unwrap()).unwrap();
    let kept = family.kept_qubits();
    let marg = partial_trace(&rho, &PartitionSpec::new(kept, [0]).unwrap()).unwrap();
    let joint = Spectrum::from_values(&eigenvalues(&rho).unwrap());
    let marginal = Spectrum::from_values(&eigenvalues(&marg).unwrap());
    let q = QParam::new(q).unwrap();
    if q.is_von_neumann() {
        return ar_conditional_entropy(&joint, &marginal, q).unwrap();
    }
    // Direct ratio, no log-domain factoring.
    (1.0 - power_sum(&joint, q) / power_sum(&marginal, q)) / (q.value() - 1.0)
}

fn oracle_root(family: Family, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if oracle_conditional(family, mid, q) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn root(cond: &Conditional, q: f64) -> Threshold {
    solve_x_threshold(cond, QParam::new(q).unwrap(), DEFAULT_TOL).unwrap()
}

#[test]
fn conditional_entropy_matches_full_matrices() {
    let families = [
        Family::w(2, 0).unwrap(),
        Family::w(4, 0).unwrap(),
        Family::w(5, 1).unwrap(),
        Family::ghz(3, 0).unwrap(),
        Family::ghz(5, 0).unwrap(),
        Family::Werner,
    ];
    for family in families {
        let cond = Conditional::single_qubit(family).unwrap();
        for &x in &[0.0, 0.2, 0.55, 0.9, 1.0] {
            for &q in &[0.3, 1.0, 2.0, 7.5] {
                let pair = cond.spectra(x).unwrap();
                let closed = ar_conditional_entropy(&pair.joint, &pair.marginal, QParam::new(q).unwrap()).unwrap();
                let brute = oracle_conditional(family, x, q);
                assert!((closed - brute).abs() < 1e-9, "{family} x={x} q={q}: {closed} vs {brute}");
            }
        }
    }
}

#[test]
fn thresholds_match_full_matrix_bisection() {
    for family in [Family::w(2, 0).unwrap(), Family::w(4, 0).unwrap(), Family::ghz(3, 0).unwrap(), Family::Werner] {
        let cond = Conditional::single_qubit(family).unwrap();
        for &q in &[0.5, 1.0, 3.0] {
            let x = root(&cond, q).root().unwrap();
            let brute = oracle_root(family, q);
            assert!((x - brute).abs() < 1e-8, "{family} q={q}: {x} vs {brute}");
        }
    }
}

#[test]
fn von_neumann_root_is_where_entropy_hits_ln2() {
    // Two-qubit W: S(AB) = ln 2 = S(A) at the q = 1 root.
    let x = root(&Conditional::single_qubit(Family::w(2, 0).unwrap()).unwrap(), 1.0)
        .root()
        .unwrap();
    let s = w_spectrum(2, 0, x).unwrap();
    let vn: f64 = s.levels().iter().map(|l| -(l.multiplicity as f64) * l.value * l.value.ln()).sum();
    assert!((vn - std::f64::consts::LN_2).abs() < 1e-9);
    assert!((x - 0.659362).abs() < 1e-6);
}

#[test]
fn symmetric_projector_reduces_to_smaller_projector() {
    for n in 2..=6 {
        let p = sym_projector(n).unwrap();
        let reduced = partial_trace(&p, &PartitionSpec::last(n, 1).unwrap()).unwrap();
        let expected = sym_projector(n - 1).unwrap().scale((n + 1) as f64 / n as f64);
        assert!(reduced.max_abs_diff(&expected).unwrap() < 1e-12, "N={n}");
    }
}

#[test]
fn dicke_vectors_are_orthonormal() {
    for n in 1..=7 {
        for a in 0..=n {
            for b in 0..=n {
                let ip = dicke_vector(n, a).unwrap().inner(&dicke_vector(n, b).unwrap());
                let want = if a == b { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                assert!((ip - want).norm() < 1e-12, "N={n} {a},{b}");
            }
        }
    }
}

#[test]
fn family_density_commutes_with_swaps() {
    for n in 2..=5 {
        for family in [Family::w(n, 0).unwrap(), Family::ghz(n, 0).unwrap()] {
            for &x in &[0.0, 0.3, 1.0] {
                let rho = family_density(&family.at(x).unwrap()).unwrap();
                for a in 0..n {
                    for b in a + 1..n {
                        let swapped = rho.swap_qubits(a, b).unwrap();
                        assert!(swapped.max_abs_diff(&rho).unwrap() < 1e-12, "{family} swap {a},{b}");
                    }
                }
            }
        }
    }
}

#[test]
fn ppt_three_qubit_w_closed_form() {
    let x = ppt_threshold(Family::w(3, 0).unwrap(), &PartitionSpec::last(3, 1).unwrap(), 1e-12).unwrap();
    assert!((x - 1.0 / (3.0 + 2.0 * 3f64.sqrt())).abs() < 1e-9);
}

#[test]
fn ppt_single_qubit_choice_is_irrelevant() {
    for family in [Family::w(4, 0).unwrap(), Family::ghz(4, 0).unwrap()] {
        let base = ppt_threshold(family, &PartitionSpec::new(4, [3]).unwrap(), DEFAULT_TOL).unwrap();
        for qubit in 0..3 {
            let x = ppt_threshold(family, &PartitionSpec::new(4, [qubit]).unwrap(), DEFAULT_TOL).unwrap();
            assert!((x - base).abs() < 1e-9);
        }
    }
}

#[test]
fn ghz_ppt_cuts_follow_binomial_formula() {
    // Transposing k of N qubits: x = 2 / ((N + 1) C(N, k) + 2).
    for n in 3..=6u64 {
        let cuts = ppt_cuts(Family::ghz(n as usize, 0).unwrap(), 1e-12).unwrap();
        assert_eq!(cuts.len(), (n / 2) as usize);
        for cut in cuts {
            let k = cut.transposed as u64;
            let want = 2.0 / ((n + 1) as f64 * binomial(n, k) as f64 + 2.0);
            assert!((cut.threshold - want).abs() < 1e-9, "N={n} k={k}: {}", cut.threshold);
        }
    }
    let strongest = ppt_threshold_strongest(Family::ghz(4, 0).unwrap(), DEFAULT_TOL).unwrap();
    assert_eq!(strongest.transposed, 2);
}

#[test]
fn true_three_qubit_ab_given_c_tail() {
    let cond = Conditional::new(Family::w(3, 0).unwrap(), 1, Mode::Default).unwrap();
    let x = root(&cond, 1000.0).root().unwrap();
    assert!((x - 3.0 / 7.0).abs() < 2e-3, "{x}");
    // The published variant sits at the Werner-like 1/3 instead.
    let published = cond.with_mode(Mode::AsPublished);
    assert!((root(&published, 1000.0).root().unwrap() - 1.0 / 3.0).abs() < 2e-3);
}

#[test]
fn heavily_reduced_w_states_stay_positive() {
    // 2n + 2 > N + 1: the reduction is too mixed for a negative entropy.
    for (n_total, traced) in [(3, 1), (4, 2), (5, 2), (5, 3), (6, 3)] {
        let cond = Conditional::single_qubit(Family::w(n_total, traced).unwrap()).unwrap();
        for &q in &[0.5, 1.0, 10.0, 1000.0] {
            match root(&cond, q) {
                Threshold::NoRoot => assert!(2 * traced + 2 > n_total + 1, "W({n_total},{traced}) q={q}"),
                Threshold::Root(x) => {
                    assert_eq!(2 * traced + 2, n_total + 1, "W({n_total},{traced}) q={q}");
                    assert_eq!(x, 1.0);
                }
            }
        }
    }
}

#[test]
fn closed_form_spectra_on_coarse_grid_up_to_eight_qubits() {
    for n in 2..=8 {
        for traced in 0..n {
            for i in 0..=10 {
                let x = i as f64 / 10.0;
                let mut rho = family_density(&Family::w(n, 0).unwrap().at(x).unwrap()).unwrap();
                if traced > 0 {
                    rho = partial_trace(&rho, &PartitionSpec::last(n, traced).unwrap()).unwrap();
                }
                let oracle = eigenvalues(&rho).unwrap();
                let closed = w_spectrum(n, traced, x).unwrap().padded_values(oracle.len());
                let worst = oracle.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(worst < 1e-10, "W N={n} n={traced} x={x}: {worst}");
            }
        }
    }
}

#[test]
fn multiplicities_are_exact_at_degenerate_points() {
    // x = 0: flat spectrum of N − n + 1 levels.
    let s = w_spectrum(6, 2, 0.0).unwrap();
    assert_eq!(s.levels().len(), 1);
    assert_eq!(s.levels()[0].multiplicity, 5);
    assert!((s.levels()[0].value - 0.2).abs() < 1e-15);
}
