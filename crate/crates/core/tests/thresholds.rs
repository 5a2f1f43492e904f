use qsep::spectra::Mode;
use qsep::thresholds::{
    asymptotic_threshold_for, bound_w_exact, default_q_grid, ppt_cuts, DEFAULT_TOL,
};
use qsep::verify::standard_conditionals;
use qsep::{
    ar_conditional_entropy, bound_ghz, bound_w, solve_x_threshold, threshold_curve, Conditional,
    Family, QParam, Threshold,
};

fn q(v: f64) -> QParam {
    QParam::new(v).unwrap()
}

fn entropy_at(cond: &Conditional, qv: f64, x: f64) -> f64 {
    let p = cond.spectra(x).unwrap();
    ar_conditional_entropy(&p.joint, &p.marginal, q(qv)).unwrap()
}

#[test]
fn residual_at_returned_root_is_small() {
    for cond in standard_conditionals(6).unwrap() {
        for &qv in &[0.3, 0.8, 1.0, 1.7, 4.0, 25.0] {
            if let Threshold::Root(x) = solve_x_threshold(&cond, q(qv), DEFAULT_TOL).unwrap() {
                if x < 1.0 {
                    let s = entropy_at(&cond, qv, x);
                    assert!(s.abs() < 1e-8, "{cond} q={qv}: S({x}) = {s}");
                }
            }
        }
    }
}

#[test]
fn entropy_positive_at_zero_mixing() {
    for cond in standard_conditionals(8).unwrap() {
        for &qv in &default_q_grid() {
            assert!(entropy_at(&cond, qv, 0.0) > 0.0, "{cond} q={qv}");
        }
    }
}

#[test]
fn every_curve_is_non_increasing() {
    let grid = default_q_grid();
    assert_eq!(grid.len(), 61);
    assert!(grid.contains(&1.0));
    for cond in standard_conditionals(8).unwrap() {
        let curve = threshold_curve(&cond, &grid, DEFAULT_TOL).unwrap();
        assert_eq!(curve.samples.len(), grid.len());
        for w in curve.samples.windows(2) {
            let a = w[0].x_star.root().unwrap_or(f64::INFINITY);
            let b = w[1].x_star.root().unwrap_or(f64::INFINITY);
            assert!(b <= a + 1e-9, "{cond}: {a} -> {b}");
        }
    }
}

#[test]
fn large_q_matches_closed_form_bounds() {
    for n in 2..=8 {
        let ghz = Conditional::single_qubit(Family::ghz(n, 0).unwrap()).unwrap();
        let x = solve_x_threshold(&ghz, q(1000.0), DEFAULT_TOL).unwrap().root().unwrap();
        assert!((x - bound_ghz(n).unwrap()).abs() < 5e-3, "GHZ N={n}: {x}");
        for traced in 0..=n - 2 {
            if 2 * traced + 2 > n {
                continue;
            }
            let w = Conditional::single_qubit(Family::w(n, traced).unwrap()).unwrap();
            let x = solve_x_threshold(&w, q(1000.0), DEFAULT_TOL).unwrap().root().unwrap();
            assert!((x - bound_w(n, traced).unwrap()).abs() < 5e-3, "W({n},{traced}): {x}");
        }
    }
}

#[test]
fn asymptotic_crossing_matches_bounds() {
    for n in 2..=10 {
        let ghz = Conditional::single_qubit(Family::ghz(n, 0).unwrap()).unwrap();
        assert!((asymptotic_threshold_for(&ghz, 1e-13).unwrap() - bound_ghz(n).unwrap()).abs() < 1e-10);
        for traced in 0..=n - 2 {
            if 2 * traced + 2 > n {
                continue;
            }
            let w = Conditional::single_qubit(Family::w(n, traced).unwrap()).unwrap();
            let numeric = asymptotic_threshold_for(&w, 1e-13).unwrap();
            assert!((numeric - bound_w(n, traced).unwrap()).abs() < 1e-10, "W({n},{traced})");
        }
    }
}

#[test]
fn exact_bounds() {
    assert_eq!(bound_w_exact(2, 0).unwrap().to_string(), "1/4");
    assert_eq!(bound_w_exact(3, 0).unwrap().to_string(), "1/5");
    assert_eq!(bound_w_exact(3, 1).unwrap().to_string(), "1/3");
    assert_eq!(bound_w(4, 0).unwrap(), 4.0 / 24.0);
    assert_eq!(bound_ghz(3).unwrap(), 1.0 / 7.0);
    assert_eq!(bound_ghz(4).unwrap(), 1.0 / 11.0);
}

#[test]
fn ppt_never_exceeds_entropic_threshold() {
    let grid = default_q_grid();
    let families = [
        Family::w(2, 0).unwrap(),
        Family::w(3, 0).unwrap(),
        Family::w(4, 0).unwrap(),
        Family::w(5, 0).unwrap(),
        Family::ghz(3, 0).unwrap(),
        Family::ghz(4, 0).unwrap(),
        Family::ghz(5, 0).unwrap(),
        Family::Werner,
    ];
    for family in families {
        let ppt = ppt_cuts(family, DEFAULT_TOL)
            .unwrap()
            .into_iter()
            .map(|c| c.threshold)
            .fold(f64::INFINITY, f64::min);
        let curve = threshold_curve(&Conditional::single_qubit(family).unwrap(), &grid, DEFAULT_TOL).unwrap();
        for s in &curve.samples {
            if let Threshold::Root(x) = s.x_star {
                assert!(ppt <= x + 1e-6, "{family} q={}: ppt {ppt} > {x}", s.q);
            }
        }
    }
}

#[test]
fn as_published_only_changes_single_qubit_w_marginals() {
    let default = Conditional::single_qubit(Family::w(4, 0).unwrap()).unwrap();
    let published = default.with_mode(Mode::AsPublished);
    for &x in &[0.0, 0.4, 1.0] {
        assert_eq!(default.spectra(x).unwrap(), published.spectra(x).unwrap());
    }
    let ab_c = Conditional::new(Family::w(3, 0).unwrap(), 1, Mode::Default).unwrap();
    let ab_c_published = ab_c.with_mode(Mode::AsPublished);
    assert_eq!(ab_c.spectra(0.0).unwrap(), ab_c_published.spectra(0.0).unwrap());
    assert_ne!(ab_c.spectra(0.5).unwrap().marginal, ab_c_published.spectra(0.5).unwrap().marginal);
    assert_eq!(ab_c.spectra(0.5).unwrap().joint, ab_c_published.spectra(0.5).unwrap().joint);
}

#[test]
fn rejects_bad_inputs() {
    let cond = Conditional::single_qubit(Family::w(2, 0).unwrap()).unwrap();
    assert!(QParam::new(0.0).is_err());
    assert!(QParam::new(f64::NAN).is_err());
    assert!(solve_x_threshold(&cond, q(1.0), 0.0).is_err());
    assert!(threshold_curve(&cond, &[2.0, 1.0], DEFAULT_TOL).is_err());
    assert!(Family::w(3, 2).is_err());
    assert!(Family::ghz(3, 2).is_err());
    assert!(Conditional::new(Family::w(3, 0).unwrap(), 3, Mode::Default).is_err());
}

#[test]
fn csv_output_is_deterministic() {
    let cond = Conditional::single_qubit(Family::ghz(4, 0).unwrap()).unwrap();
    let render = || {
        let mut buf = Vec::new();
        threshold_curve(&cond, &default_q_grid(), DEFAULT_TOL)
            .unwrap()
            .write_csv(&mut buf)
            .unwrap();
        String::from_utf8(buf).unwrap()
    };
    let first = render();
    assert_eq!(first, render());
    assert!(first.starts_with("q,x_star\n0.2,"));
    assert_eq!(first.lines().count(), 62);
}
