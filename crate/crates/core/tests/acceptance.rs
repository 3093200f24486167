//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use structshift::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn series() -> SeriesReport {
    compare_series(&market_shares(), "I", &TestSettings::default()).expect("series runs")
}

fn ac1_similarity_indices() -> Outcome {
    let start = Instant::now();
    let s = series();
    let elapsed = start.elapsed();
    for (report, omega) in s.comparisons.iter().zip(OMEGA) {
        let got = report.similarity.omega_p;
        ensure!(
            (got - omega).abs() <= 1e-9,
            "{}: omega_p {got} != {omega}",
            report.compared
        );
    }
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("omega_p = {OMEGA:?} in {elapsed:?}"))
}

fn ac2_differences() -> Outcome {
    let s = series();
    for (report, (d, (lo, hi, g))) in s.comparisons.iter().zip(D.iter().zip(EXTREMES)) {
        let p = &report.profile;
        for (got, want) in p.d.iter().zip(d) {
            ensure!(
                (got - want).abs() <= 1e-12,
                "{}: d {got} != {want}",
                report.compared
            );
        }
        ensure!(
            (p.d_min - lo).abs() <= 1e-12
                && (p.d_max - hi).abs() <= 1e-12
                && (p.g_p - g).abs() <= 1e-12,
            "{}: (d_min, d_max, g_p) = ({}, {}, {}) != ({lo}, {hi}, {g})",
            report.compared,
            p.d_min,
            p.d_max,
            p.g_p
        );
    }
    Ok("d vectors and (d_min, d_max, g_p) within 1e-12".into())
}

fn ac3_relative_differences() -> Outcome {
    let s = series();
    for (report, (r, flagged)) in s.comparisons.iter().zip(R.iter().zip(DISTINCTIVE)) {
        let got = report.profile.r.as_ref().ok_or("r absent")?;
        for (got, want) in got.iter().zip(r) {
            ensure!(
                (got - want).abs() <= 0.005,
                "{}: r {got} != {want}",
                report.compared
            );
        }
        let names: Vec<String> = report
            .distinctive
            .distinctive
            .iter()
            .map(|c| c.to_string())
            .collect();
        ensure!(
            names == *flagged,
            "{}: flags {names:?} != {flagged:?}",
            report.compared
        );
    }
    Ok("r within 0.005; flags II {}, III {}, IV {D}, V {E}, VI {B, D}".into())
}

fn ac4_depth_labels() -> Outcome {
    let cases = [
        (2.5, DepthClass::Huge),
        (-4.0, DepthClass::Huge),
        (1.33, DepthClass::Moderately),
        (-1.0, DepthClass::NotDistinctive),
        (1.0, DepthClass::NotDistinctive),
    ];
    for (r, want) in cases {
        let got = classify_depth(r);
        ensure!(got == want, "classify_depth({r}) = {got}, want {want}");
    }
    Ok("2.5, -4 huge; 1.33 moderately; +-1 not distinctive".into())
}

fn ac5_asymmetry() -> Outcome {
    let s = series();
    let mut got = Vec::new();
    for (report, want) in s.comparisons.iter().zip(ASYMMETRY) {
        let a = report.diagnostics.asymmetry.ok_or("asymmetry absent")?;
        ensure!(
            (a - want).abs() <= 0.005,
            "{}: A {a} != {want}",
            report.compared
        );
        got.push(a);
    }
    ensure!(
        (got[3] + 1.5).abs() <= 1e-12,
        "V: A {} is not exactly -1.5",
        got[3]
    );
    Ok(format!(
        "A = {:?}",
        got.iter()
            .map(|a| (a * 100.0).round() / 100.0 + 0.0)
            .collect::<Vec<_>>()
    ))
}

fn ac6_decisions() -> Outcome {
    let s = series();
    for report in &s.comparisons {
        ensure!(
            report.test.critical.value == 0.8008,
            "critical value {}",
            report.test.critical.value
        );
        ensure!(
            report.test.decision == Decision::Similar,
            "{} not similar",
            report.compared
        );
    }
    let x =
        StructureVector::from_pairs(&[("A", 0.2), ("B", 0.2), ("C", 0.2), ("D", 0.2), ("E", 0.2)])
            .map_err(|e| e.to_string())?;
    let y =
        StructureVector::from_pairs(&[("A", 0.4), ("B", 0.1), ("C", 0.1), ("D", 0.2), ("E", 0.2)])
            .map_err(|e| e.to_string())?;
    let outcome = run_test(
        &align(&x, &y),
        0.05,
        &CriticalValueTable::embedded(),
        CvPolicy::EmbeddedOnly,
        &McConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        (outcome.omega_p_empirical - 0.80).abs() <= 1e-12,
        "synthetic omega {}",
        outcome.omega_p_empirical
    );
    ensure!(
        outcome.decision == Decision::NotSimilar,
        "omega 0.80 decided similar"
    );
    let at_boundary = decide(0.8008, outcome.critical.clone());
    ensure!(
        at_boundary.decision == Decision::NotSimilar,
        "omega = z decided similar"
    );
    Ok("II-VI similar at z = 0.8008; omega 0.80 and omega = z not similar".into())
}

fn ac7_interval_strings() -> Outcome {
    let s = series();
    let expected = [
        (2, "[-0.1, -0.04) ∪ (0.04, 0.1]"),
        (3, "[-0.12, -0.03) ∪ (0.03, 0.12]"),
        (4, "[-0.16, -0.06) ∪ (0.06, 0.16]"),
    ];
    for (i, want) in expected {
        let got = s.comparisons[i].profile.abs_interval.render(2);
        ensure!(
            got == want,
            "{}: {got} != {want}",
            s.comparisons[i].compared
        );
    }
    Ok("IV, V, VI areas reproduced".into())
}

fn ac8_dispersion() -> Outcome {
    let s = series();
    let v = &s.comparisons[3];
    let classes: Vec<Dispersion> = v.categories.iter().map(|c| c.dispersion).collect();
    let want = [
        Dispersion::Typical,
        Dispersion::Typical,
        Dispersion::Typical,
        Dispersion::Typical,
        Dispersion::Atypical,
    ];
    ensure!(classes == want, "I vs V dispersion {classes:?}");
    Ok(format!(
        "S = {}; A-D typical, E atypical, no outliers",
        v.diagnostics.s
    ))
}

/// Uniform point on the k-simplex.
fn simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

fn labelled(shares: &[f64]) -> StructureVector {
    let pairs: Vec<(String, f64)> = shares
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("c{i}"), *s))
        .collect();
    StructureVector::from_pairs(&pairs).expect("valid simplex point")
}

fn ac9_property_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ties = 0;
    for case in 0..10_000 {
        let k = rng.random_range(2..=12);
        let xs = simplex(&mut rng, k);
        let ys = if case % 10 == 0 {
            // Every tenth pair moves one slice of share: |d_min| = |d_max|.
            let mut ys = xs.clone();
            let i = rng.random_range(0..k);
            let j = (i + rng.random_range(1..k)) % k;
            let delta = ys[i] * rng.random::<f64>();
            ys[i] -= delta;
            ys[j] += delta;
            ys
        } else {
            simplex(&mut rng, k)
        };
        let x = labelled(&xs);
        let y = labelled(&ys);
        let pair = align(&x, &y);
        let sim = similarity_index(&pair);
        let p = difference_profile(&pair, sim.omega_p).map_err(|e| e.to_string())?;

        let sum: f64 = p.d.iter().sum();
        ensure!(sum.abs() <= 1e-12, "case {case}: sum d = {sum}");
        let max_abs = p.d.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        ensure!(
            max_abs <= 1.0 - sim.omega_p + 1e-12,
            "case {case}: max|d| {max_abs} > 1 - omega"
        );
        let reverse = similarity_index(&align(&y, &x)).omega_p;
        ensure!(reverse == sim.omega_p, "case {case}: asymmetric omega");
        let half_l1 = 0.5 * p.d.iter().map(|d| d.abs()).sum::<f64>();
        ensure!(
            (sim.bray_curtis - half_l1).abs() <= 1e-12,
            "case {case}: BC {} != {half_l1}",
            sim.bray_curtis
        );

        let changes = detect_distinctive(&p);
        if (p.d_min.abs() - p.d_max.abs()).abs() <= 1e-12 {
            ties += 1;
            ensure!(
                changes.distinctive.is_empty(),
                "case {case}: tied extremes but distinctive set"
            );
        }
        let mut signs =
            p.d.iter()
                .zip(&changes.flags)
                .filter(|(_, f)| **f)
                .map(|(d, _)| d.signum());
        if let Some(first) = signs.next() {
            ensure!(
                signs.all(|s| s == first),
                "case {case}: distinctive on both sides"
            );
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("10000 pairs ({ties} tied) in {elapsed:?}"))
}

fn ac10_monte_carlo() -> Outcome {
    let config = |threads| McConfig {
        replicates: 100_000,
        seed: 42,
        threads,
    };
    let run = |threads| {
        critical_value(0.05, 5, CvPolicy::McOnly, &config(threads)).map_err(|e| e.to_string())
    };
    let first = run(None)?;
    let second = run(None)?;
    let single = run(Some(1))?;
    let several = run(Some(4))?;
    for other in [&second, &single, &several] {
        ensure!(
            other.value.to_bits() == first.value.to_bits(),
            "{} != {}",
            other.value,
            first.value
        );
    }
    let sample = NullSample::simulate(5, &config(None)).map_err(|e| e.to_string())?;
    let z: Vec<f64> = [0.01, 0.05, 0.10]
        .iter()
        .map(|a| sample.critical_value(*a).unwrap())
        .collect();
    ensure!(z[0] >= z[1] && z[1] >= z[2], "not monotone: {z:?}");
    ensure!(
        z[1].to_bits() == first.value.to_bits(),
        "common sample disagrees"
    );
    Ok(format!(
        "z(0.05, 5) = {} bit-identical over 1/4/default threads; z(0.01, 0.05, 0.10) = {z:?}",
        first.value
    ))
}

fn ac11_round_trip() -> Outcome {
    let table = market_shares();
    let rendered = render_table_csv(&table);
    let again = parse_csv(rendered.as_bytes(), InputMode::Shares).map_err(|e| e.to_string())?;
    for population in table.populations() {
        let a = normalize(&table, population).map_err(|e| e.to_string())?;
        let b = normalize(&again, population).map_err(|e| e.to_string())?;
        for (x, y) in a.shares().iter().zip(b.shares()) {
            ensure!((x - y).abs() <= 1e-12, "{population}: {x} != {y}");
        }
    }
    let json_a = render_series(&series(), OutputFormat::Json);
    let json_b = render_series(&series(), OutputFormat::Json);
    ensure!(json_a == json_b, "json reports differ between runs");
    Ok(format!(
        "shares reproduced; {} byte json identical",
        json_a.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "similarity indices of markets II-VI",
            ac1_similarity_indices,
        ),
        ("absolute differences and thresholds", ac2_differences),
        (
            "relative differences and distinctive flags",
            ac3_relative_differences,
        ),
        ("depth labels", ac4_depth_labels),
        ("asymmetry coefficients", ac5_asymmetry),
        ("similarity test decisions", ac6_decisions),
        ("distinctive-area strings", ac7_interval_strings),
        ("dispersion classes for I vs V", ac8_dispersion),
        ("random simplex property suite", ac9_property_suite),
        ("Monte Carlo determinism and monotonicity", ac10_monte_carlo),
        ("CSV round trip and json determinism", ac11_round_trip),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS  AC{:<2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL  AC{:<2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
