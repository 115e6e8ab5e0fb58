//! Acceptance gate: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`).
//!
//! Criteria that need the real public datasets look for them under
//! `SBRBENCH_DATA_DIR` (see README for file names); without the data the
//! pipeline-fidelity check reports SKIPPED, and the hours-scale accuracy
//! reproduction additionally sits behind `--ignored`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use sbrbench::data::{
    compute_stats, ingest, preprocess, split_by_days, temporal_fraction, ItemId, PopularityTable,
    RawFormat, SessionDataset, DEFAULT_RETAIL_GAP,
};
use sbrbench::eval::{evaluate, render_table, ResultRow};
use sbrbench::models::{
    retrieve_neighbors, sr_fit, KnnConfig, ModelKind, ModelParams, ParamValue, ScoreMap,
    SessionIndex, SessionModel, ALL_MODEL_KINDS,
};
use sbrbench::synth::{
    dataset_from_owned_sessions, generate_events, random_corpus, EmptyModel, OracleModel,
    SynthConfig,
};
use sbrbench::tuning::{
    make_validation_split, random_search, sweep, tune_on_test, ParamDomain, SearchSpace,
    FLAW_DEMO_LABEL, OBJECTIVE_CUTOFF,
};

fn within_pct(actual: f64, expected: f64, pct: f64) -> bool {
    (actual - expected).abs() <= expected * pct / 100.0
}

fn data_dir() -> Option<PathBuf> {
    std::env::var_os("SBRBENCH_DATA_DIR").map(PathBuf::from)
}

fn dataset_file(dir: &Path, name: &str) -> Option<PathBuf> {
    let path = dir.join(name);
    path.exists().then_some(path)
}

// ---------------------------------------------------------------------
// Criterion 1: pipeline fidelity on the real datasets (2% per field,
// < 5 minutes per dataset).
// ---------------------------------------------------------------------

struct ExpectedStats {
    clicks: f64,
    items: f64,
    sessions: f64,
    avg: f64,
}

fn check_pipeline(
    label: &str,
    path: &Path,
    format: RawFormat,
    fraction: u64,
    expected: &ExpectedStats,
) {
    let started = Instant::now();
    let events = ingest(path, format, DEFAULT_RETAIL_GAP).unwrap();
    let preprocessed = preprocess(&events, 5, 2).unwrap();
    let dataset = temporal_fraction(&preprocessed, fraction).unwrap();
    let stats = compute_stats(&dataset).unwrap();
    let elapsed = started.elapsed();

    assert!(
        within_pct(stats.clicks as f64, expected.clicks, 2.0),
        "{label}: clicks {} vs expected {}",
        stats.clicks,
        expected.clicks
    );
    assert!(
        within_pct(stats.items as f64, expected.items, 2.0),
        "{label}: items {} vs expected {}",
        stats.items,
        expected.items
    );
    assert!(
        within_pct(stats.sessions as f64, expected.sessions, 2.0),
        "{label}: sessions {} vs expected {}",
        stats.sessions,
        expected.sessions
    );
    assert!(
        within_pct(stats.avg_session_length, expected.avg, 2.0),
        "{label}: avg length {} vs expected {}",
        stats.avg_session_length,
        expected.avg
    );
    assert!(
        elapsed < Duration::from_secs(300),
        "{label}: preprocessing took {elapsed:?}"
    );

    // Idempotence: re-filter the preprocessed corpus with the same
    // thresholds and document any drift (items can dip below support
    // after the session-length filter).
    let replay: Vec<_> = dataset
        .sessions
        .iter()
        .flat_map(|s| {
            s.items
                .iter()
                .zip(&s.times)
                .map(|(&item, &time)| sbrbench::data::InteractionEvent {
                    session_id: s.id.clone(),
                    item_id: dataset.interner.name(item).to_owned(),
                    timestamp: time,
                    category_id: None,
                })
        })
        .collect();
    let second = preprocess(&replay, 5, 2).unwrap();
    if second.sessions.len() != dataset.sessions.len() {
        println!(
            "  {label}: second preprocessing pass changes sessions \
             {} -> {} (items below support after session filter)",
            dataset.sessions.len(),
            second.sessions.len()
        );
    }
    println!(
        "  {label}: clicks {} items {} sessions {} avg {:.2} in {elapsed:.2?}",
        stats.clicks, stats.items, stats.sessions, stats.avg_session_length
    );
}

#[test]
fn criterion_1_pipeline_fidelity() {
    let Some(dir) = data_dir() else {
        println!("criterion 1 (pipeline fidelity): SKIPPED — set SBRBENCH_DATA_DIR to run");
        return;
    };
    let mut checked = 0;
    if let Some(path) = dataset_file(&dir, "train-item-views.csv") {
        check_pipeline(
            "DIGI",
            &path,
            RawFormat::Digi,
            1,
            &ExpectedStats {
                clicks: 1_004_598.0,
                items: 43_100.0,
                sessions: 216_134.0,
                avg: 4.65,
            },
        );
        checked += 1;
    }
    if let Some(path) = dataset_file(&dir, "events.csv") {
        check_pipeline(
            "RETAIL",
            &path,
            RawFormat::Retail,
            1,
            &ExpectedStats {
                clicks: 1_045_413.0,
                items: 44_540.0,
                sessions: 304_902.0,
                avg: 3.42,
            },
        );
        checked += 1;
    }
    if let Some(path) = dataset_file(&dir, "yoochoose-clicks.dat") {
        let started = Instant::now();
        let events = ingest(&path, RawFormat::Rsc15, DEFAULT_RETAIL_GAP).unwrap();
        let preprocessed = preprocess(&events, 5, 2).unwrap();
        let sixty_fourth = temporal_fraction(&preprocessed, 64).unwrap();
        let stats = compute_stats(&sixty_fourth).unwrap();
        assert!(
            within_pct(stats.sessions as f64, 26_464.0, 2.0),
            "RSC15 (1/64): sessions {}",
            stats.sessions
        );
        assert!(
            within_pct(stats.clicks as f64, 107_242.0, 2.0),
            "RSC15 (1/64): clicks {}",
            stats.clicks
        );
        let twelfth = temporal_fraction(&preprocessed, 12).unwrap();
        let stats12 = compute_stats(&twelfth).unwrap();
        assert!(
            within_pct(stats12.sessions as f64, 145_202.0, 2.0),
            "RSC15 (1/12): sessions {}",
            stats12.sessions
        );
        assert!(
            within_pct(stats12.avg_session_length, 3.95, 2.0),
            "RSC15 (1/12): avg length {}",
            stats12.avg_session_length
        );
        assert!(started.elapsed() < Duration::from_secs(300));
        println!(
            "  RSC15: 1/64 sessions {} clicks {}, 1/12 sessions {} avg {:.2}",
            stats.sessions, stats.clicks, stats12.sessions, stats12.avg_session_length
        );
        checked += 1;
    }
    assert!(
        checked > 0,
        "SBRBENCH_DATA_DIR set but no known dataset files found"
    );
    println!("criterion 1 (pipeline fidelity): PASS ({checked} datasets)");
}

// ---------------------------------------------------------------------
// Criterion 2: reproduction of the published baseline accuracy via
// this toolkit's random search. Hours-scale: behind --ignored as well
// as the data gate.
// ---------------------------------------------------------------------

fn tune_and_eval(
    kind: ModelKind,
    dataset: &SessionDataset,
    test_days: u32,
    n_trials: usize,
    seed: u64,
) -> (f64, f64, f64) {
    let split = split_by_days(dataset, test_days).unwrap();
    let validation = make_validation_split(&split.train, test_days).unwrap();
    let space = SearchSpace::default_for(kind);
    let outcome = random_search(
        kind,
        &space,
        n_trials,
        seed,
        &validation.train,
        &validation.test,
    )
    .unwrap();
    let popularity = PopularityTable::from_dataset(&split.train);
    let model = kind.fit(&split.train, &outcome.best_params, seed).unwrap();
    let eval = evaluate(
        model.as_ref(),
        &split.test,
        &popularity,
        &[10, 20],
        Duration::ZERO,
    )
    .unwrap();
    (
        eval.metrics.mrr_at(20).unwrap(),
        eval.metrics.hr_at(20).unwrap(),
        eval.metrics.hr_at(10).unwrap(),
    )
}

#[test]
#[ignore = "needs SBRBENCH_DATA_DIR and hours of tuning; see README"]
fn criterion_2_reference_accuracy_reproduction() {
    let dir = data_dir().expect("set SBRBENCH_DATA_DIR for this test");
    let seed = 42;

    // DIGI: SFSKNN 0.351, STAN 0.351, VSTAN 0.346, SR 0.337, all ±0.02.
    let digi_path = dir.join("train-item-views.csv");
    let events = ingest(&digi_path, RawFormat::Digi, DEFAULT_RETAIL_GAP).unwrap();
    let digi = preprocess(&events, 5, 2).unwrap();
    for (kind, expected) in [
        (ModelKind::Sfsknn, 0.351),
        (ModelKind::Stan, 0.351),
        (ModelKind::Vstan, 0.346),
        (ModelKind::Sr, 0.337),
    ] {
        let trials = SearchSpace::default_trials(kind);
        let (mrr20, _, _) = tune_and_eval(kind, &digi, 7, trials, seed);
        println!("  DIGI {kind}: mrr@20 {mrr20:.4} (expected {expected} ± 0.02)");
        assert!(
            (mrr20 - expected).abs() <= 0.02,
            "DIGI {kind}: mrr@20 {mrr20:.4} outside {expected} ± 0.02"
        );
    }

    // RETAIL: VSTAN mrr@20 0.631 ± 0.03 and hr@20 0.980 ± 0.015.
    let retail_path = dir.join("events.csv");
    let events = ingest(&retail_path, RawFormat::Retail, DEFAULT_RETAIL_GAP).unwrap();
    let retail = preprocess(&events, 5, 2).unwrap();
    let (mrr20, hr20, _) = tune_and_eval(
        ModelKind::Vstan,
        &retail,
        1,
        SearchSpace::default_trials(ModelKind::Vstan),
        seed,
    );
    println!("  RETAIL vstan: mrr@20 {mrr20:.4}, hr@20 {hr20:.4}");
    assert!((mrr20 - 0.631).abs() <= 0.03);
    assert!((hr20 - 0.980).abs() <= 0.015);

    // RSC15 (1/64): STAN mrr@20 0.296 ± 0.02; VSTAN hr@10 0.546 ± 0.03.
    let rsc_path = dir.join("yoochoose-clicks.dat");
    let events = ingest(&rsc_path, RawFormat::Rsc15, DEFAULT_RETAIL_GAP).unwrap();
    let rsc = temporal_fraction(&preprocess(&events, 5, 2).unwrap(), 64).unwrap();
    let (mrr20, _, _) = tune_and_eval(
        ModelKind::Stan,
        &rsc,
        1,
        SearchSpace::default_trials(ModelKind::Stan),
        seed,
    );
    println!("  RSC15 (1/64) stan: mrr@20 {mrr20:.4}");
    assert!((mrr20 - 0.296).abs() <= 0.02);
    let (_, _, hr10) = tune_and_eval(
        ModelKind::Vstan,
        &rsc,
        1,
        SearchSpace::default_trials(ModelKind::Vstan),
        seed,
    );
    println!("  RSC15 (1/64) vstan: hr@10 {hr10:.4}");
    assert!((hr10 - 0.546).abs() <= 0.03);

    println!("criterion 2 (reference accuracy reproduction): PASS");
}

#[test]
#[ignore = "needs SBRBENCH_DATA_DIR; the smoke budget is 30 minutes"]
fn criterion_2_smoke_path_under_30_minutes() {
    let dir = data_dir().expect("set SBRBENCH_DATA_DIR for this test");
    let rsc_path = dir.join("yoochoose-clicks.dat");
    let started = Instant::now();
    let events = ingest(&rsc_path, RawFormat::Rsc15, DEFAULT_RETAIL_GAP).unwrap();
    let rsc = temporal_fraction(&preprocess(&events, 5, 2).unwrap(), 64).unwrap();
    // The --smoke budget: at most 5 trials.
    let (mrr20, _, _) = tune_and_eval(ModelKind::Stan, &rsc, 1, 5, 42);
    let elapsed = started.elapsed();
    println!("  RSC15 (1/64) smoke: mrr@20 {mrr20:.4} in {elapsed:.0?}");
    assert!(
        elapsed < Duration::from_secs(30 * 60),
        "smoke path took {elapsed:?}"
    );
    println!("criterion 2 (smoke path): PASS");
}

// ---------------------------------------------------------------------
// Criterion 3: the report generator renders partial tables. Neural
// recommenders are out of scope here, so every table is inherently a
// subset of a wider comparison and must render as such.
// ---------------------------------------------------------------------

#[test]
fn criterion_3_report_renders_partial_tables() {
    let events = generate_events(&SynthConfig {
        sessions: 200,
        items: 40,
        days: 6,
        ..SynthConfig::default()
    });
    let dataset = preprocess(&events, 1, 2).unwrap();
    let split = split_by_days(&dataset, 1).unwrap();
    let popularity = PopularityTable::from_dataset(&split.train);
    let mut rows = Vec::new();
    for kind in ALL_MODEL_KINDS {
        let model = kind.fit(&split.train, &kind.default_params(), 0).unwrap();
        let outcome = evaluate(
            model.as_ref(),
            &split.test,
            &popularity,
            &[10, 20],
            Duration::ZERO,
        )
        .unwrap();
        rows.push(ResultRow::new(
            kind.as_str(),
            &outcome.metrics,
            &outcome.timing,
            0,
            "hash",
        ));
    }
    // Four baseline rows render without placeholders for absent models,
    // and so does any smaller subset, down to the empty table.
    let table = render_table("SYNTH", &rows);
    assert_eq!(table.lines().count(), 2 + rows.len());
    for subset_len in [1, 2, 3] {
        let partial = render_table("SYNTH", &rows[..subset_len]);
        assert_eq!(partial.lines().count(), 2 + subset_len);
    }
    let empty = render_table("SYNTH", &[]);
    assert!(empty.contains("(no results)"));
    println!("criterion 3 (partial tables): PASS");
}

// ---------------------------------------------------------------------
// Criterion 4: the dataset-free property suite.
// ---------------------------------------------------------------------

/// Random prefix-scoring model for the metric-invariant runs: scores a
/// random subset of the catalog with random finite values.
struct RandomScorer {
    vocab: usize,
    salt: u64,
}

impl SessionModel for RandomScorer {
    fn score(&self, prefix: &[ItemId], query_time: i64) -> ScoreMap {
        let mut rng = ChaCha8Rng::seed_from_u64(
            self.salt ^ (prefix.len() as u64) ^ (query_time as u64) ^ u64::from(prefix[0].0),
        );
        let mut scores = ScoreMap::new();
        for item in 0..self.vocab {
            if rng.gen::<f64>() < 0.4 {
                scores.insert(ItemId(item as u32), rng.gen::<f64>());
            }
        }
        scores
    }
}

#[test]
fn criterion_4a_metric_invariants_on_1000_randomized_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for run in 0..1000 {
        let corpus = random_corpus(&mut rng, 12, 10, 6);
        let (dataset, _) = dataset_from_owned_sessions(&corpus);
        let popularity = PopularityTable::from_dataset(&dataset);
        let model = RandomScorer {
            vocab: dataset.interner.len(),
            salt: run,
        };
        let outcome =
            evaluate(&model, &dataset, &popularity, &[5, 10, 20], Duration::ZERO).unwrap();
        let metrics = outcome.metrics;
        for idx in 0..metrics.cutoffs.len() {
            assert!(
                metrics.mrr[idx] <= metrics.hr[idx] + 1e-12,
                "run {run}: MRR exceeds HR"
            );
            if idx > 0 {
                assert!(metrics.hr[idx - 1] <= metrics.hr[idx] + 1e-12);
                assert!(metrics.mrr[idx - 1] <= metrics.mrr[idx] + 1e-12);
            }
        }
    }
    println!("criterion 4a (MRR<=HR, monotone in K, 1000 runs): PASS");
}

#[test]
fn criterion_4b_perfect_oracle_and_empty_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for round in 0..200 {
        // Distinct first items make (head, len) identify each event.
        let n_sessions = rng.gen_range(2..10);
        let corpus: Vec<Vec<String>> = (0..n_sessions)
            .map(|s| {
                let len = rng.gen_range(2..6);
                let mut items = vec![format!("head{s}")];
                items.extend((1..len).map(|_| format!("i{}", rng.gen_range(0..20))));
                items
            })
            .collect();
        let (dataset, _) = dataset_from_owned_sessions(&corpus);
        let popularity = PopularityTable::from_dataset(&dataset);
        let oracle = OracleModel::for_dataset(&dataset);
        let outcome = evaluate(&oracle, &dataset, &popularity, &[10, 20], Duration::ZERO).unwrap();
        for idx in 0..outcome.metrics.cutoffs.len() {
            assert_eq!(outcome.metrics.hr[idx], 1.0, "round {round}");
            assert_eq!(outcome.metrics.mrr[idx], 1.0, "round {round}");
        }
        let empty = evaluate(
            &EmptyModel,
            &dataset,
            &popularity,
            &[10, 20],
            Duration::ZERO,
        )
        .unwrap();
        assert_eq!(empty.metrics.hr_at(20).unwrap(), 0.0);
        assert_eq!(empty.metrics.cov, 0.0);
    }
    println!("criterion 4b (perfect oracle 1.0/1.0): PASS");
}

/// Independent brute-force neighbor search used as the retrieval oracle:
/// scans every training session, recomputing the similarity from its
/// definition.
fn oracle_neighbors(
    dataset: &SessionDataset,
    prefix: &[ItemId],
    query_time: i64,
    cfg: &KnnConfig,
) -> Vec<(u32, f64)> {
    // Last-occurrence position weights.
    let mut weights: HashMap<ItemId, f64> = HashMap::new();
    for (idx, &item) in prefix.iter().enumerate() {
        let w = match cfg.lambda1 {
            Some(l) => (((idx + 1) as f64 - prefix.len() as f64) / l).exp(),
            None => 1.0,
        };
        weights.insert(item, w);
    }
    let mut scored = Vec::new();
    for (idx, session) in dataset.sessions.iter().enumerate() {
        // Sum in ascending item order: the weight sum is only defined up
        // to float associativity, so the comparison pins one order.
        let mut distinct: Vec<ItemId> = session.items.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if !distinct.iter().any(|i| weights.contains_key(i)) {
            continue;
        }
        let overlap: f64 = distinct.iter().filter_map(|i| weights.get(i)).sum();
        let mut sim = overlap / ((prefix.len() * session.items.len()) as f64).sqrt();
        if let Some(l2) = cfg.lambda2 {
            let days = ((query_time - session.start_time()).max(0)) as f64 / 86_400.0;
            sim *= (-days / l2).exp();
        }
        scored.push((idx as u32, sim));
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(b.0.cmp(&a.0)));
    scored.truncate(cfg.k);
    scored
}

#[test]
fn criterion_4c_neighbor_retrieval_matches_brute_force_on_200_corpora() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for round in 0..200u64 {
        let corpus = random_corpus(&mut rng, 200, 25, 10);
        let (dataset, _) = dataset_from_owned_sessions(&corpus);
        let cfg = KnnConfig {
            k: rng.gen_range(1..30),
            m: dataset.sessions.len() + rng.gen_range(0..50),
            lambda1: if round % 2 == 0 {
                None
            } else {
                Some(rng.gen_range(0.2..10.0))
            },
            lambda2: if round % 3 == 0 {
                Some(rng.gen_range(0.5..20.0))
            } else {
                None
            },
            ..KnnConfig::default()
        };
        let index = SessionIndex::build(&dataset, cfg.m);
        for _ in 0..3 {
            let probe = &dataset.sessions[rng.gen_range(0..dataset.sessions.len())];
            let prefix_len = rng.gen_range(1..=probe.items.len());
            let prefix = &probe.items[..prefix_len];
            let query_time = probe.end_time() + rng.gen_range(0..200_000);
            let fast = retrieve_neighbors(&index, prefix, query_time, &cfg);
            let slow = oracle_neighbors(&dataset, prefix, query_time, &cfg);
            assert_eq!(fast.len(), slow.len(), "round {round}");
            for (a, (idx, sim)) in fast.iter().zip(&slow) {
                assert_eq!(a.session, *idx, "round {round}: neighbor set differs");
                assert!(
                    (a.similarity - sim).abs() < 1e-9,
                    "round {round}: {} vs {}",
                    a.similarity,
                    sim
                );
            }
        }
    }
    println!("criterion 4c (indexed retrieval == brute force, 200 corpora): PASS");
}

#[test]
fn criterion_4d_sr_rules_match_pair_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..50 {
        let corpus = random_corpus(&mut rng, 50, 12, 9);
        let (dataset, _) = dataset_from_owned_sessions(&corpus);
        let max_steps = [None, Some(1), Some(3), Some(7)][round % 4];
        let table = sr_fit(&dataset, max_steps);
        // Independent pair enumerator.
        let mut expected: HashMap<(ItemId, ItemId), f64> = HashMap::new();
        for session in &dataset.sessions {
            for a in 0..session.items.len() {
                for b in a + 1..session.items.len() {
                    if max_steps.map(|s| b - a <= s).unwrap_or(true) {
                        *expected
                            .entry((session.items[a], session.items[b]))
                            .or_insert(0.0) += 1.0 / (b - a) as f64;
                    }
                }
            }
        }
        let mut seen = 0;
        for (&(antecedent, consequent), &weight) in &expected {
            let actual = table
                .consequents(antecedent)
                .and_then(|m| m.get(&consequent))
                .copied()
                .expect("rule present");
            assert!((actual - weight).abs() < 1e-9, "round {round}");
            seen += 1;
        }
        assert_eq!(seen, table.rule_count(), "round {round}: extra rules");
    }
    println!("criterion 4d (SR == brute-force pair enumeration): PASS");
}

#[test]
fn criterion_4e_seed_sweeps_have_zero_diff() {
    let events = generate_events(&SynthConfig {
        sessions: 150,
        items: 30,
        days: 6,
        ..SynthConfig::default()
    });
    let dataset = preprocess(&events, 1, 2).unwrap();
    let split = split_by_days(&dataset, 1).unwrap();
    let seeds: Vec<ParamValue> = [100i64, 2_000, 300_000, 4_000_000, 10_000_000]
        .iter()
        .map(|&s| ParamValue::Int(s))
        .collect();
    for kind in ALL_MODEL_KINDS {
        let result = sweep(
            kind,
            &kind.default_params(),
            "seed",
            &seeds,
            &split.train,
            &split.test,
            0,
        )
        .unwrap();
        assert_eq!(result.summary.diff, 0.0, "{kind}");
        assert_eq!(result.summary.std, 0.0, "{kind}");
    }
    println!("criterion 4e (seed sweeps diff = 0 for all baselines): PASS");
}

// ---------------------------------------------------------------------
// Criterion 5: byte-identical result CSVs across reruns (timing columns
// excluded).
// ---------------------------------------------------------------------

fn strip_timing(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            fields
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != 7 && *i != 8)
                .map(|(_, f)| *f)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn criterion_5_determinism_across_full_runs() {
    use sbrbench::cli::{cmd_eval, cmd_prepare, cmd_tune};
    use sbrbench::config::{ExperimentConfig, Overrides};

    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("clicks.csv");
    let events = generate_events(&SynthConfig {
        sessions: 250,
        items: 40,
        days: 8,
        ..SynthConfig::default()
    });
    sbrbench::synth::write_raw_file(&events, RawFormat::Rsc15, &raw).unwrap();
    let config_text = format!(
        r#"
seed = 7
out = "PLACEHOLDER"
[dataset]
format = "rsc15"
path = "{}"
test_days = 2
min_item_support = 2
[models.sr]
n_trials = 3
[models.stan]
n_trials = 4
"#,
        raw.display()
    );
    let config_path = dir.path().join("exp.toml");
    std::fs::write(&config_path, config_text).unwrap();

    let mut results = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}"));
        let config = ExperimentConfig::load(
            &config_path,
            &Overrides {
                seed: None,
                out: Some(out.clone()),
            },
        )
        .unwrap();
        cmd_prepare(&config).unwrap();
        for model in ["sr", "stan"] {
            cmd_tune(&config, model, None, false, false).unwrap();
            cmd_eval(&config, model).unwrap();
        }
        results.push(strip_timing(&out.join("results.csv")));
        // The data files must be byte-identical including comments.
        if run == 1 {
            for file in ["data/normalized.csv", "data/train.csv", "data/stats.csv"] {
                assert_eq!(
                    std::fs::read(dir.path().join("run0").join(file)).unwrap(),
                    std::fs::read(out.join(file)).unwrap(),
                    "{file} differs between runs"
                );
            }
        }
    }
    assert_eq!(results[0], results[1], "result CSVs differ between runs");
    assert!(!results[0].is_empty());
    println!("criterion 5 (deterministic reruns): PASS");
}

// ---------------------------------------------------------------------
// Criterion 6: tune-on-test demonstrator on a constructed 2-config space.
// ---------------------------------------------------------------------

#[test]
fn criterion_6_tune_on_test_demonstrator() {
    let events = generate_events(&SynthConfig {
        sessions: 400,
        items: 60,
        days: 10,
        seed: 5,
        ..SynthConfig::default()
    });
    let dataset = preprocess(&events, 1, 2).unwrap();
    let split = split_by_days(&dataset, 2).unwrap();

    // Two-config toy space over SR's rule horizon.
    let space = SearchSpace::new(vec![(
        "max_steps".to_owned(),
        ParamDomain::Choice(vec![ParamValue::Int(1), ParamValue::Int(20)]),
    )]);
    let report = tune_on_test(ModelKind::Sr, &space, 10, 3, &split.train, &split.test, 2).unwrap();

    // Exhaustively evaluate both configs on the test set: the test-tuned
    // arm must sit at the maximum, hence >= the properly tuned arm.
    let popularity = PopularityTable::from_dataset(&split.train);
    let mut test_scores = Vec::new();
    for steps in [1i64, 20] {
        let mut params = ModelParams::new();
        params.insert("max_steps".into(), ParamValue::Int(steps));
        let model = ModelKind::Sr.fit(&split.train, &params, 0).unwrap();
        let outcome = evaluate(
            model.as_ref(),
            &split.test,
            &popularity,
            &[OBJECTIVE_CUTOFF],
            Duration::ZERO,
        )
        .unwrap();
        test_scores.push(outcome.metrics.mrr_at(OBJECTIVE_CUTOFF).unwrap());
    }
    let exhaustive_max = test_scores.iter().copied().fold(f64::MIN, f64::max);
    assert!((report.test_tuned_test_mrr - exhaustive_max).abs() < 1e-9);
    assert!(report.test_tuned_test_mrr >= report.proper_test_mrr - 1e-12);

    // Labeled output with a percent-formatted delta.
    let rendered = report.render();
    assert!(rendered.contains(FLAW_DEMO_LABEL));
    let delta_line = rendered
        .lines()
        .find(|l| l.contains("leakage advantage"))
        .expect("delta line");
    assert!(
        delta_line.contains('%') && (delta_line.contains('+') || delta_line.contains('-')),
        "delta must be a signed percentage: {delta_line}"
    );
    println!("criterion 6 (tune-on-test demonstrator): PASS");
    println!("{rendered}");
}
