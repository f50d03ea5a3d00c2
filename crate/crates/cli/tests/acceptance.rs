//! Acceptance suite for the bundled case study. Each test prints one
//! PASS/FAIL line; run with `--nocapture` to see them:
//!
//! ```text
//! cargo test -p riskprio-cli --test acceptance -- --nocapture
//! ```

use std::collections::HashMap;
use std::panic::AssertUnwindSafe;
use std::path::PathBuf;
use std::time::Instant;

use rand_core::RngCore;

use riskprio_cli::document::parse_document;
use riskprio_core::{
    matrix_rank, percentile, prioritize, project_cost, project_duration, run_scenario,
    validate_network, CategoryLevel, DurationAssignment, ExtraCosts, ProjectNetwork,
    RiskRegister, Scenario, ScoreLadder, SimulationConfig,
};

fn dataset_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/case_study.json")
}

fn load_case_study() -> (ProjectNetwork, RiskRegister, SimulationConfig) {
    parse_document(&dataset_path()).expect("bundled case study must parse")
}

/// Runs a criterion body and prints exactly one PASS/FAIL line for it.
fn criterion<F>(name: &str, body: F)
where
    F: FnOnce() -> String,
{
    match std::panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(detail) => println!("[PASS] {name}: {detail}"),
        Err(cause) => {
            println!("[FAIL] {name}");
            std::panic::resume_unwind(cause);
        }
    }
}

#[test]
fn acceptance_1_deterministic_plan() {
    criterion("criterion 1, deterministic plan", || {
        let started = Instant::now();
        let (net, _, _) = load_case_study();
        let order = validate_network(&net).unwrap();
        assert_eq!(order.len(), 34);
        assert_eq!(order[0].as_str(), "Ai");
        assert_eq!(order[1].as_str(), "A1");
        assert_eq!(order[32].as_str(), "A32");
        assert_eq!(order[33].as_str(), "Af");

        let assignment = DurationAssignment::most_likely(&net);
        let duration = project_duration(&net, &assignment).unwrap();
        let cost = project_cost(&net, &assignment, &ExtraCosts::new()).unwrap();
        assert_eq!(duration, 300.0, "planned duration must be exactly 300");
        assert_eq!(cost, 30_000.0, "planned cost must be exactly 30,000");

        let elapsed = started.elapsed();
        assert!(elapsed.as_secs_f64() < 1.0, "plan took {elapsed:?}");
        format!("duration 300, cost 30,000, {elapsed:?}")
    });
}

#[test]
fn acceptance_2_baseline_value_at_risk() {
    criterion("criterion 2, baseline VaR", || {
        let (net, register, mut config) = load_case_study();
        config.iterations = 20_000;
        config.percentile = 0.95;

        let mut in_band = 0;
        let mut worst_runtime = 0.0_f64;
        let mut readings = Vec::new();
        for seed in 1..=10u64 {
            config.seed = seed;
            let started = Instant::now();
            let result = run_scenario(&Scenario::baseline(&net, &register), &config).unwrap();
            let elapsed = started.elapsed().as_secs_f64();
            worst_runtime = worst_runtime.max(elapsed);

            let p95_duration = result.duration_percentile(0.95);
            let p95_cost = result.cost_percentile(0.95);
            let duration_ok = (p95_duration - 323.43).abs() <= 1.5;
            let cost_ok = (p95_cost - 30_339.0).abs() <= 60.0;
            if duration_ok && cost_ok {
                in_band += 1;
            }
            readings.push(format!("seed {seed}: {p95_duration:.2}/{p95_cost:.1}"));
        }
        assert!(
            in_band >= 9,
            "only {in_band}/10 seeds inside the band: {readings:?}"
        );
        assert!(
            worst_runtime < 5.0,
            "slowest baseline run took {worst_runtime:.2}s"
        );
        format!("{in_band}/10 seeds within 323.43±1.5 and 30,339±60; slowest run {worst_runtime:.2}s")
    });
}

#[test]
fn acceptance_3_zero_duration_deltas_for_cost_only_risks() {
    criterion("criterion 3, zero-delta exactness", || {
        let (net, register, mut config) = load_case_study();
        let cost_only = ["R10", "R11", "R12", "R13", "R14", "R15"];
        for seed in [42u64, 7, 123] {
            config.seed = seed;
            let report = prioritize(&net, &register, &config).unwrap();
            for id in cost_only {
                let row = report.row(&id.into()).unwrap();
                assert_eq!(
                    row.delta_duration, 0.0,
                    "seed {seed}: {id} duration delta must be exactly zero, got {}",
                    row.delta_duration
                );
                assert_eq!(row.duration_with_risk, report.baseline_duration);
            }
        }
        "R10-R15 duration deltas exactly 0.0 for seeds 42, 7, 123".to_string()
    });
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[test]
fn acceptance_4_matrix_reproduction() {
    criterion("criterion 4, matrix reproduction", || {
        let (_, register, _) = load_case_study();
        let ranking = matrix_rank(&register, &ScoreLadder::default()).unwrap();

        // Reference scoring of the case-study register: (risk, P x I to two
        // decimals, group rank). R14's raw product is 0.005 and prints as
        // 0.01 at two decimals.
        let expected_duration = [
            ("R1", 0.01, 9),
            ("R2", 0.14, 1),
            ("R3", 0.12, 2),
            ("R4", 0.05, 6),
            ("R5", 0.10, 3),
            ("R6", 0.03, 7),
            ("R7", 0.02, 8),
            ("R8", 0.10, 3),
            ("R9", 0.06, 5),
        ];
        let expected_cost = [
            ("R10", 0.07, 2),
            ("R11", 0.06, 3),
            ("R12", 0.03, 5),
            ("R13", 0.06, 3),
            ("R14", 0.01, 6),
            ("R15", 0.12, 1),
        ];

        for (entries, expected) in [
            (&ranking.duration, &expected_duration[..]),
            (&ranking.cost, &expected_cost[..]),
        ] {
            assert_eq!(entries.len(), expected.len());
            for (entry, &(id, score, rank)) in entries.iter().zip(expected) {
                assert_eq!(entry.risk_id.as_str(), id);
                assert!(
                    (round2(entry.score) - score).abs() < 1e-9,
                    "{id}: score {} rounds to {}, expected {score}",
                    entry.score,
                    round2(entry.score)
                );
                assert_eq!(entry.rank, rank, "{id}: rank {} != {rank}", entry.rank);
            }
        }
        // The tied pairs share their rank.
        assert_eq!(ranking.duration[4].rank, ranking.duration[7].rank); // R5, R8
        assert_eq!(ranking.cost[1].rank, ranking.cost[3].rank); // R11, R13
        "all P x I values and both group rankings match, ties included".to_string()
    });
}

/// Reference percentile deltas for the case study (duration in days, cost in
/// thousands), used for rank-order agreement of well-separated pairs.
const REFERENCE_DURATION_DELTAS: [(&str, f64); 15] = [
    ("R1", 0.33481),
    ("R2", 22.639),
    ("R3", 26.33),
    ("R4", 2.0554),
    ("R5", 22.666),
    ("R6", 0.76083),
    ("R7", 1.0162),
    ("R8", 14.818),
    ("R9", 0.86284),
    ("R10", 0.0),
    ("R11", 0.0),
    ("R12", 0.0),
    ("R13", 0.0),
    ("R14", 0.0),
    ("R15", 0.0),
];

const REFERENCE_COST_DELTAS: [(&str, f64); 6] = [
    ("R10", 413.553),
    ("R11", 766.538),
    ("R12", 81.405),
    ("R13", 777.350),
    ("R14", 0.72532),
    ("R15", 3060.927),
];

/// Percentile of a scratch buffer via selection (the buffer is reordered).
fn percentile_select(buf: &mut [f64], alpha: f64) -> f64 {
    let n = buf.len();
    let h = (n - 1) as f64 * alpha;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let (_, lo_value, rest) = buf.select_nth_unstable_by(lo, f64::total_cmp);
    let lo_value = *lo_value;
    if rest.is_empty() || frac == 0.0 {
        lo_value
    } else {
        let next = rest.iter().copied().fold(f64::INFINITY, f64::min);
        lo_value + frac * (next - lo_value)
    }
}

/// Paired bootstrap over iteration indices: resamples all scenarios with the
/// same index set, giving the joint distribution of their percentiles under
/// common random numbers.
fn bootstrap_percentiles(sample_sets: &[&[f64]], alpha: f64, replicates: usize) -> Vec<Vec<f64>> {
    let n = sample_sets[0].len();
    let mut rng = rand_chacha::ChaCha8Rng::from_seed([7u8; 32]);
    let mut indices = vec![0usize; n];
    let mut scratch = vec![0.0f64; n];
    let mut out = vec![Vec::with_capacity(replicates); sample_sets.len()];
    for _ in 0..replicates {
        for slot in indices.iter_mut() {
            *slot = (rng.next_u64() % n as u64) as usize;
        }
        for (s, samples) in sample_sets.iter().enumerate() {
            for (dst, &idx) in scratch.iter_mut().zip(&indices) {
                *dst = samples[idx];
            }
            out[s].push(percentile_select(&mut scratch, alpha));
        }
    }
    out
}

fn std_dev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}

use rand_core::SeedableRng;

#[test]
fn acceptance_5_calibrated_ranking_reproduction() {
    criterion("criterion 5, calibrated ranking", || {
        let (net, register, mut config) = load_case_study();
        config.iterations = 20_000;
        config.seed = 42;
        config.percentile = 0.95;
        let alpha = config.percentile;

        // Full scenario set: baseline plus one run per risk, same seed.
        let baseline = run_scenario(&Scenario::baseline(&net, &register), &config).unwrap();
        let mut with_risk = Vec::new();
        for risk in &register.risks {
            let scenario = Scenario::new(&net, &register, vec![risk.id.clone()]);
            with_risk.push((risk.id.clone(), run_scenario(&scenario, &config).unwrap()));
        }

        // The report must be consistent with the raw scenario runs.
        let report = prioritize(&net, &register, &config).unwrap();
        assert_eq!(report.baseline_duration, baseline.duration_percentile(alpha));
        for (id, result) in &with_risk {
            let row = report.row(id).unwrap();
            assert_eq!(row.duration_with_risk, result.duration_percentile(alpha));
            assert_eq!(row.cost_with_risk, result.cost_percentile(alpha));
        }

        // Hard requirements on the shipped calibration.
        let rank_dur = |id: &str| report.row(&id.into()).unwrap().rank_duration;
        let rank_cost = |id: &str| report.row(&id.into()).unwrap().rank_cost;
        assert_eq!(rank_dur("R3"), 1, "R3 must lead the duration ranking");
        let mut tier: Vec<usize> = ["R2", "R5", "R8"].iter().map(|r| rank_dur(r)).collect();
        tier.sort_unstable();
        assert_eq!(tier, vec![2, 3, 4], "R2, R5, R8 must fill duration ranks 2-4");
        assert_eq!(rank_cost("R15"), 1, "R15 must lead the cost ranking");

        // Pairwise order agreement with the reference run, exempting pairs
        // whose separation (in either dataset) is within twice the paired
        // bootstrap standard error of the difference.
        let duration_sets: Vec<&[f64]> = std::iter::once(baseline.duration_samples.as_slice())
            .chain(with_risk.iter().map(|(_, r)| r.duration_samples.as_slice()))
            .collect();
        let cost_sets: Vec<&[f64]> = std::iter::once(baseline.cost_samples.as_slice())
            .chain(with_risk.iter().map(|(_, r)| r.cost_samples.as_slice()))
            .collect();
        let boot_duration = bootstrap_percentiles(&duration_sets, alpha, 160);
        let boot_cost = bootstrap_percentiles(&cost_sets, alpha, 160);

        let index_of: HashMap<&str, usize> = with_risk
            .iter()
            .enumerate()
            .map(|(i, (id, _))| (id.as_str(), i + 1))
            .collect();

        let mut checked_pairs = 0;
        let mut exempt_pairs = 0;
        let mut check_column = |reference: &[(&str, f64)],
                                ours: &dyn Fn(&str) -> f64,
                                boot: &[Vec<f64>]| {
            for (i, &(id_a, ref_a)) in reference.iter().enumerate() {
                for &(id_b, ref_b) in reference.iter().skip(i + 1) {
                    let our_a = ours(id_a);
                    let our_b = ours(id_b);
                    // Bootstrap SE of the delta difference; the shared
                    // baseline percentile cancels out of the difference.
                    let diffs: Vec<f64> = boot[index_of[id_a]]
                        .iter()
                        .zip(&boot[index_of[id_b]])
                        .map(|(a, b)| a - b)
                        .collect();
                    let se = std_dev(&diffs);
                    let our_sep = (our_a - our_b).abs();
                    let ref_sep = (ref_a - ref_b).abs();
                    if our_sep.min(ref_sep) <= 2.0 * se {
                        exempt_pairs += 1;
                        continue;
                    }
                    checked_pairs += 1;
                    assert_eq!(
                        (our_a - our_b) > 0.0,
                        (ref_a - ref_b) > 0.0,
                        "pair ({id_a}, {id_b}): ours {our_a:.3} vs {our_b:.3}, \
                         reference {ref_a:.3} vs {ref_b:.3}, 2se {:.3}",
                        2.0 * se
                    );
                }
            }
        };

        let delta_dur =
            |id: &str| -> f64 { report.row(&id.into()).unwrap().delta_duration };
        let delta_cost = |id: &str| -> f64 { report.row(&id.into()).unwrap().delta_cost };
        check_column(&REFERENCE_DURATION_DELTAS, &delta_dur, &boot_duration);
        check_column(&REFERENCE_COST_DELTAS, &delta_cost, &boot_cost);

        format!(
            "R3 first, {{R2,R5,R8}} at ranks 2-4, R15 first; \
             {checked_pairs} well-separated pairs agree ({exempt_pairs} within noise)"
        )
    });
}

#[test]
fn acceptance_6_oracle_equivalence() {
    criterion("criterion 6, oracle equivalence", || {
        use riskprio_core::{
            Activity, DurationModel, ImpactModel, ProbabilityModel, RiskSpec,
        };

        // Three deterministic activities: A -> B chained, C parallel.
        let net = ProjectNetwork::new(vec![
            Activity::new("A", DurationModel::Deterministic(10.0)).costs(100.0, 1.0),
            Activity::new("B", DurationModel::Deterministic(5.0))
                .after(&["A"])
                .costs(0.0, 2.0),
            Activity::new("C", DurationModel::Deterministic(7.0)).costs(50.0, 0.0),
        ]);
        let (_, case_register, _) = load_case_study();
        let register = RiskRegister::new(
            case_register.ladders.clone(),
            vec![
                RiskSpec::new("X1", "A", ProbabilityModel::Point(0.3))
                    .duration_impact(ImpactModel::Point(10.0)),
                RiskSpec::new("X2", "B", ProbabilityModel::Point(0.2))
                    .duration_impact(ImpactModel::Point(4.0))
                    .cost_impact(ImpactModel::Point(50.0)),
            ],
        );

        // Exhaustive enumeration of the four outcome atoms, written against
        // the tiny network directly rather than the engine.
        let mut atoms: Vec<(f64, f64, f64)> = Vec::new(); // (prob, duration, cost)
        for x1 in [false, true] {
            for x2 in [false, true] {
                let p = (if x1 { 0.3 } else { 0.7 }) * (if x2 { 0.2 } else { 0.8 });
                let a = 10.0 + if x1 { 10.0 } else { 0.0 };
                let b = 5.0 + if x2 { 4.0 } else { 0.0 };
                let duration = f64::max(a + b, 7.0);
                let cost =
                    150.0 + a + 2.0 * b + if x2 { 50.0 } else { 0.0 };
                atoms.push((p, duration, cost));
            }
        }
        let quantile = |values: &dyn Fn(&(f64, f64, f64)) -> f64, alpha: f64| -> f64 {
            let mut sorted: Vec<(f64, f64)> =
                atoms.iter().map(|a| (values(a), a.0)).collect();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut cum = 0.0;
            for (value, p) in &sorted {
                cum += p;
                if cum >= alpha - 1e-12 {
                    return *value;
                }
            }
            sorted.last().unwrap().0
        };
        let alpha = 0.95;
        let exact_dur = quantile(&|a| a.1, alpha);
        let exact_cost = quantile(&|a| a.2, alpha);
        let base_dur = 15.0;
        let base_cost = 175.0;

        // The CDF step below the top atom is 1 - 0.3*0.2 = 0.94; its
        // distance from alpha (0.01) is over 3 standard errors of the
        // empirical CDF at n = 20,000, so the sample percentile identifies
        // the enumerated atom and deltas match to numerical precision.
        let boundary: f64 = 0.94;
        let se = (boundary * (1.0 - boundary) / 20_000.0_f64).sqrt();
        assert!((alpha - boundary).abs() > 3.0 * se);

        let config = SimulationConfig {
            iterations: 20_000,
            seed: 42,
            percentile: alpha,
        };
        let result = run_scenario(&Scenario::all_risks(&net, &register), &config).unwrap();
        let empirical_dur_delta = percentile(&result.duration_samples, alpha).unwrap() - base_dur;
        let empirical_cost_delta = percentile(&result.cost_samples, alpha).unwrap() - base_cost;
        let exact_dur_delta = exact_dur - base_dur;
        let exact_cost_delta = exact_cost - base_cost;
        assert!(
            (empirical_dur_delta - exact_dur_delta).abs() < 1e-9,
            "duration delta {empirical_dur_delta} vs enumerated {exact_dur_delta}"
        );
        assert!(
            (empirical_cost_delta - exact_cost_delta).abs() < 1e-9,
            "cost delta {empirical_cost_delta} vs enumerated {exact_cost_delta}"
        );
        format!(
            "P95 deltas match enumeration exactly (duration {exact_dur_delta}, cost {exact_cost_delta})"
        )
    });
}

#[test]
fn acceptance_7_property_suite() {
    criterion("criterion 7, property suite", || {
        let started = Instant::now();
        let (net, register, _) = load_case_study();
        let mut rng = rand_chacha::ChaCha8Rng::from_seed([42u8; 32]);
        let mut unit = |hi: f64| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * hi;

        // Monotonicity: a longer realized duration anywhere never shortens
        // the schedule or cheapens the project.
        let base = DurationAssignment::most_likely(&net);
        let base_duration = project_duration(&net, &base).unwrap();
        let base_cost = project_cost(&net, &base, &ExtraCosts::new()).unwrap();
        for _ in 0..200 {
            let idx = (unit(net.activities.len() as f64) as usize).min(net.activities.len() - 1);
            let id = net.activities[idx].id.clone();
            let mut bumped = base.clone();
            bumped.set(id.clone(), base.get(&id).unwrap() + unit(30.0));
            assert!(project_duration(&net, &bumped).unwrap() >= base_duration);
            assert!(project_cost(&net, &bumped, &ExtraCosts::new()).unwrap() >= base_cost);
        }

        // Percentile stays within the order statistics and is monotone.
        let samples: Vec<f64> = (0..2_000).map(|_| unit(100.0)).collect();
        let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut previous = min;
        for step in 1..100 {
            let q = percentile(&samples, step as f64 / 100.0).unwrap();
            assert!(q >= previous && q >= min && q <= max);
            previous = q;
        }

        // Triangular support and mean at 20,000 draws.
        let (tri_min, tri_mp, tri_max) = (10.0, 15.0, 26.0);
        let tri: Vec<f64> = (0..20_000)
            .map(|_| riskprio_core::sample_triangular(tri_min, tri_mp, tri_max, unit(1.0)).unwrap())
            .collect();
        assert!(tri.iter().all(|&v| (tri_min..=tri_max).contains(&v)));
        let mean = tri.iter().sum::<f64>() / tri.len() as f64;
        let sd = std_dev(&tri);
        let analytic = (tri_min + tri_mp + tri_max) / 3.0;
        assert!(
            (mean - analytic).abs() <= 3.0 * sd / (tri.len() as f64).sqrt(),
            "triangular mean {mean} vs {analytic}"
        );

        // Epistemic L-category occurrence frequency: interval [0.03, 0.10]
        // has marginal rate 0.065.
        let mut hits = 0u32;
        for _ in 0..20_000 {
            let p = 0.03 + unit(1.0) * 0.07;
            if unit(1.0) < p {
                hits += 1;
            }
        }
        let rate = hits as f64 / 20_000.0;
        let se = (0.065_f64 * 0.935 / 20_000.0).sqrt();
        assert!(
            (rate - 0.065).abs() <= 3.0 * se,
            "occurrence rate {rate} vs 0.065 (se {se})"
        );

        // Rank validity on a real report, and bit-identical reruns under
        // one worker vs the ambient pool.
        let config = SimulationConfig {
            iterations: 4_000,
            seed: 11,
            percentile: 0.95,
        };
        let report = prioritize(&net, &register, &config).unwrap();
        for extract in [
            |r: &riskprio_core::RiskDeltaRow| (r.delta_duration, r.rank_duration),
            |r: &riskprio_core::RiskDeltaRow| (r.delta_cost, r.rank_cost),
        ] {
            let pairs: Vec<(f64, usize)> = report.rows.iter().map(extract).collect();
            for &(delta, rank) in &pairs {
                assert_eq!(rank, pairs.iter().filter(|(d, _)| *d > delta).count() + 1);
            }
        }
        let scenario = Scenario::all_risks(&net, &register);
        let ambient = run_scenario(&scenario, &config).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_scenario(&scenario, &config).unwrap());
        assert_eq!(ambient, single, "worker count must not affect results");

        let elapsed = started.elapsed();
        assert!(elapsed.as_secs_f64() < 60.0, "suite took {elapsed:?}");
        format!("monotonicity, percentile bounds, triangular/Bernoulli stats, rank validity, worker determinism in {elapsed:?}")
    });
}
