use std::collections::BTreeSet;
use std::fs;

use defectbench::experiment::{aggregate, run_on_datasets, ExperimentConfig, ResultStore, THREADS_ENV};
use defectbench::sampling::stratified_folds;
use defectbench::seed::derive_seed;
use defectbench::stats::{average_ranks, MetricKind};
use defectbench::synthetic::{gaussian_blobs, BlobSpec};
use defectbench::Dataset;

const CONFIG: &str = r#"
master_seed = 77
metrics = ["auc", "h"]
outer_folds = 4
inner_folds = 3

[[classifiers]]
name = "nb"
algorithm = "gaussian_naive_bayes"

[[classifiers]]
name = "knn"
algorithm = "knn"
grid = { k = [3, 9] }

[[classifiers]]
name = "tree"
algorithm = "cart"
grid = { min_leaf = [2, 8] }

[[classifiers]]
name = "baseline"
algorithm = "constant"
"#;

fn datasets() -> Vec<Dataset> {
    [("alpha", 1.8, 1), ("beta", 1.4, 2)]
        .iter()
        .map(|&(name, separation, seed)| {
            gaussian_blobs(&BlobSpec {
                name: name.into(),
                n_rows: 160,
                n_features: 3,
                positive_fraction: 0.1,
                separation,
                seed,
            })
            .unwrap()
        })
        .collect()
}

fn config() -> ExperimentConfig {
    ExperimentConfig::from_toml_str(CONFIG, None).unwrap()
}

fn run(cfg: &ExperimentConfig) -> ResultStore {
    let store = run_on_datasets(cfg, datasets()).unwrap();
    assert!(store.is_publishable(), "{:?}", store.failures());
    store
}

#[test]
fn records_tile_each_dataset_and_keep_synthetic_rows_out_of_tests() {
    let cfg = config();
    let store = run(&cfg);
    assert_eq!(store.records.len(), 2 * 4 * cfg.outer_folds);
    for d in datasets() {
        for c in &store.classifiers {
            let records: Vec<_> = store.records_for(d.name(), c).collect();
            assert_eq!(records.len(), cfg.outer_folds);
            let mut rows: Vec<usize> = Vec::new();
            for r in records {
                let f = r.outcome.as_ref().unwrap();
                assert_eq!(f.n_synthetic_test, 0);
                assert!(f.n_synthetic_train > 0);
                assert_eq!(f.n_train, d.n_rows() - f.test_rows.len() + f.n_synthetic_train);
                assert_eq!(f.scores.len(), f.test_rows.len());
                rows.extend(&f.test_rows);
            }
            rows.sort_unstable();
            assert_eq!(rows, (0..d.n_rows()).collect::<Vec<_>>());
        }
    }
}

#[test]
fn inner_folds_cover_the_training_split() {
    let cfg = config();
    for d in datasets() {
        let outer = stratified_folds(d.labels(), cfg.outer_folds, derive_seed(cfg.master_seed, &[d.name(), "outer-folds"]))
            .unwrap();
        for f in 0..cfg.outer_folds {
            let train = d.select_rows(&outer.train_indices(f));
            let inner = stratified_folds(train.labels(), cfg.inner_folds, derive_seed(7, &["inner-folds"])).unwrap();
            let union: BTreeSet<usize> = (0..cfg.inner_folds).flat_map(|g| inner.test_indices(g)).collect();
            assert_eq!(union, (0..train.n_rows()).collect());
            let outer_test: BTreeSet<usize> = outer.test_indices(f).into_iter().collect();
            assert!(outer.train_indices(f).iter().all(|i| !outer_test.contains(i)));
        }
    }
}

#[test]
fn dropping_a_classifier_leaves_other_cells_unchanged() {
    let cfg = config();
    let full = run(&cfg);
    let mut reduced_cfg = cfg.clone();
    reduced_cfg.classifiers.retain(|c| c.name != "knn");
    let reduced = run(&reduced_cfg);
    for metric in [MetricKind::Auc, MetricKind::H] {
        let a = aggregate(&full, metric).unwrap();
        let b = aggregate(&reduced, metric).unwrap();
        assert_eq!((a.k(), a.n()), (4, 2));
        assert_eq!((b.k(), b.n()), (3, 2));
        for name in &b.classifiers {
            assert_eq!(a.row(name), b.row(name), "{name}");
        }
    }
}

#[test]
fn serial_and_parallel_runs_agree() {
    let cfg = config();
    let parallel = run(&cfg);
    std::env::set_var(THREADS_ENV, "1");
    let serial = run(&cfg);
    std::env::remove_var(THREADS_ENV);
    assert_eq!(parallel, serial);

    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    parallel.write_dir(&a, false).unwrap();
    serial.write_dir(&b, false).unwrap();
    for f in ["matrix_auc.csv", "matrix_h.csv", "folds.csv", "config.toml", "provenance.txt"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert!(a.join("scores/alpha/knn.csv").exists());
    assert!(parallel.write_dir(&a, false).is_err());
}

#[test]
fn constant_baseline_ranks_last() {
    let store = run(&config());
    for metric in [MetricKind::Auc, MetricKind::H] {
        let r = average_ranks(&aggregate(&store, metric).unwrap());
        assert_eq!(r.rank_of("baseline"), Some(4.0), "{metric}");
    }
}
