//! Acceptance gate: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p qsep-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qsep::entropy::{renyi_entropy, tsallis_entropy};
use qsep::output::format_sig;
use qsep::reproduce::{headline_rows, Relation, ReproRow};
use qsep::thresholds::DEFAULT_TOL;
use qsep::verify::verify_closed_forms;
use qsep::{solve_x_threshold, Conditional, Family, QParam, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Extra {
    criterion: u8,
    what: String,
    passed: bool,
}

fn random_spectrum(rng: &mut ChaCha8Rng) -> Spectrum {
    let len = rng.gen_range(2..=6);
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    Spectrum::from_values(&raw.iter().map(|v| v / total).collect::<Vec<_>>())
}

/// 100 seeded random pairs: Tsallis pseudo-additivity and Renyi additivity.
fn additivity_on_random_pairs() -> Extra {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let (s, t) = (random_spectrum(&mut rng), random_spectrum(&mut rng));
        let q = QParam::new(rng.gen_range(0.2..5.0)).unwrap();
        let st = s.tensor(&t);
        let (a, b) = (tsallis_entropy(&s, q), tsallis_entropy(&t, q));
        let pseudo = a + b + (1.0 - q.value()) * a * b;
        worst = worst.max((tsallis_entropy(&st, q) - pseudo).abs());
        let renyi = renyi_entropy(&s, q) + renyi_entropy(&t, q);
        worst = worst.max((renyi_entropy(&st, q) - renyi).abs());
    }
    Extra {
        criterion: 8,
        what: format!("random-pair additivity max dev {worst:.3e} (tol 1e-10)"),
        passed: worst <= 1e-10,
    }
}

fn timed_q1_solve() -> Extra {
    let cond = Conditional::single_qubit(Family::w(2, 0).unwrap()).unwrap();
    let start = Instant::now();
    let root = solve_x_threshold(&cond, QParam::VON_NEUMANN, DEFAULT_TOL).unwrap();
    let elapsed = start.elapsed();
    Extra {
        criterion: 1,
        what: format!("solve time {:.2} ms (limit 100 ms), root {root}", elapsed.as_secs_f64() * 1e3),
        passed: elapsed < Duration::from_millis(100),
    }
}

fn timed_oracle_sweep() -> Extra {
    let start = Instant::now();
    let report = verify_closed_forms(8).unwrap();
    let elapsed = start.elapsed();
    Extra {
        criterion: 7,
        what: format!(
            "full sweep {} spectra in {:.2} s (limit 60 s), {} failures",
            report.checks.len(),
            elapsed.as_secs_f64(),
            report.failures().count()
        ),
        passed: elapsed < Duration::from_secs(60) && report.passed(),
    }
}

fn describe(row: &ReproRow) -> String {
    let status = if row.passed { "ok" } else { "FAILED" };
    match row.relation {
        Relation::Within => format!(
            "{}: {} vs {} ±{} {status}",
            row.quantity,
            format_sig(row.computed),
            format_sig(row.expected),
            format_sig(row.tolerance)
        ),
        Relation::Exceeds => format!(
            "{}: {} > {} {status}",
            row.quantity,
            format_sig(row.computed),
            format_sig(row.expected)
        ),
    }
}

fn main() -> ExitCode {
    let rows = headline_rows(8).expect("headline computation");
    let extras = [timed_q1_solve(), timed_oracle_sweep(), additivity_on_random_pairs()];

    let mut all_passed = true;
    for criterion in 1..=8u8 {
        let mine: Vec<&ReproRow> = rows.iter().filter(|r| r.criterion == criterion).collect();
        let more: Vec<&Extra> = extras.iter().filter(|e| e.criterion == criterion).collect();
        let passed = mine.iter().all(|r| r.passed) && more.iter().all(|e| e.passed);
        all_passed &= passed;
        let details: Vec<String> = mine
            .iter()
            .map(|r| describe(r))
            .chain(more.iter().map(|e| e.what.clone()))
            .collect();
        println!(
            "criterion {criterion}: {} | {}",
            if passed { "PASS" } else { "FAIL" },
            details.join("; ")
        );
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
