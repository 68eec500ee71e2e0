use defectbench::learners::{
    bootstrap_sample, evaluate, fit, select_candidate, tree_seed, Algorithm, DecisionTree, FittedModel, TreeParams,
};
use defectbench::metrics::{auc, CostWeighting};
use defectbench::sampling::stratified_folds;
use defectbench::seed::derive_seed;
use defectbench::stats::MetricKind;
use defectbench::synthetic::{gaussian_blobs, BlobSpec};
use defectbench::{CandidateGrid, ClassifierSpec, Dataset, Label};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn blobs(n_rows: usize, separation: f64, seed: u64) -> Dataset {
    gaussian_blobs(&BlobSpec {
        name: "blobs".into(),
        n_rows,
        n_features: 4,
        positive_fraction: 0.1,
        separation,
        seed,
    })
    .unwrap()
}

fn holdout(d: &Dataset) -> (Dataset, Dataset) {
    let plan = stratified_folds(d.labels(), 3, 17).unwrap();
    (d.select_rows(&plan.train_indices(0)), d.select_rows(&plan.test_indices(0)))
}

fn representative_specs() -> Vec<ClassifierSpec> {
    vec![
        ClassifierSpec::LogisticRegression,
        ClassifierSpec::RidgeRegression { lambda: 1.0 },
        ClassifierSpec::GaussianNaiveBayes,
        ClassifierSpec::Knn { k: 7 },
        ClassifierSpec::Cart {
            min_leaf: 5,
            max_depth: None,
        },
        ClassifierSpec::RandomForest {
            n_trees: 50,
            feature_fraction: 0.5,
        },
        ClassifierSpec::LinearSvm { c: 1.0 },
        ClassifierSpec::Mlp {
            hidden: 5,
            learning_rate: 0.5,
            epochs: 300,
        },
        ClassifierSpec::Adaboost { rounds: 50 },
    ]
}

#[test]
fn every_tuned_learner_separates_planted_blobs() {
    let (train, test) = holdout(&blobs(600, 2.0, 1));
    let w = CostWeighting::default();
    for alg in Algorithm::ALL.into_iter().filter(|a| *a != Algorithm::Constant) {
        let grid = CandidateGrid::default_for(alg, train.n_rows());
        let sel = select_candidate(&grid, &train, 5, MetricKind::Auc, w, 3).unwrap();
        let model = fit(&sel.spec, &train, 3).unwrap();
        let scores = model.predict_scores(test.features()).unwrap();
        assert!(scores.iter().all(|s| s.is_finite()));
        let a = auc(&scores, test.labels()).unwrap();
        assert!(a > 0.9, "{}: holdout AUC {a}", sel.spec);
    }
}

#[test]
fn representative_specs_fit_and_score() {
    let (train, test) = holdout(&blobs(300, 2.0, 2));
    for spec in representative_specs() {
        let model = fit(&spec, &train, 3).unwrap();
        assert_eq!(model.spec, spec);
        let scores = model.predict_scores(test.features()).unwrap();
        assert_eq!(scores.len(), test.n_rows());
        assert!(auc(&scores, test.labels()).unwrap() > 0.8, "{spec}");
    }
}

#[test]
fn forest_beats_a_stump() {
    let (train, test) = holdout(&blobs(600, 1.2, 2));
    let score = |spec: ClassifierSpec| {
        let m = fit(&spec, &train, 4).unwrap();
        auc(&m.predict_scores(test.features()).unwrap(), test.labels()).unwrap()
    };
    let forest = score(ClassifierSpec::RandomForest {
        n_trees: 100,
        feature_fraction: 0.5,
    });
    let stump = score(ClassifierSpec::Cart {
        min_leaf: 1,
        max_depth: Some(1),
    });
    assert!(forest > stump, "forest {forest} vs stump {stump}");
}

#[test]
fn constant_baseline_has_no_information() {
    let (train, test) = holdout(&blobs(300, 2.0, 3));
    let m = fit(&ClassifierSpec::Constant, &train, 0).unwrap();
    let s = m.predict_scores(test.features()).unwrap();
    assert_eq!(auc(&s, test.labels()).unwrap(), 0.5);
    assert_eq!(evaluate(MetricKind::H, &s, test.labels(), CostWeighting::default()).unwrap(), 0.0);
}

#[test]
fn fits_are_deterministic() {
    let d = blobs(200, 1.5, 4);
    for alg in Algorithm::ALL {
        let grid = CandidateGrid::default_for(alg, d.n_rows());
        let spec = &grid.candidates[0];
        let a = fit(spec, &d, 11).unwrap().predict_scores(d.features()).unwrap();
        let b = fit(spec, &d, 11).unwrap().predict_scores(d.features()).unwrap();
        assert_eq!(a, b, "{spec}");
    }
}

#[test]
fn one_tree_forest_is_a_bootstrap_cart() {
    let d = blobs(120, 1.0, 5);
    let seed = 21;
    let model = fit(
        &ClassifierSpec::RandomForest {
            n_trees: 1,
            feature_fraction: 1.0,
        },
        &d,
        seed,
    )
    .unwrap();
    let FittedModel::Forest(forest) = &model.model else {
        panic!("expected a forest");
    };
    let z = model.scaler.transform(d.features()).unwrap();
    let rows = bootstrap_sample(d.n_rows(), tree_seed(seed, 0));
    let params = TreeParams {
        min_leaf: 1,
        max_depth: None,
        max_features: None,
    };
    let cart = DecisionTree::fit(z.view(), d.labels(), &rows, &params, 0);
    assert_eq!(forest.trees[0], cart);
}

#[test]
fn forest_scores_are_vote_fractions() {
    let d = blobs(200, 1.0, 6);
    let n_trees = 7;
    let m = fit(
        &ClassifierSpec::RandomForest {
            n_trees,
            feature_fraction: 0.5,
        },
        &d,
        1,
    )
    .unwrap();
    for s in m.predict_scores(d.features()).unwrap() {
        assert!((0.0..=1.0).contains(&s));
        let votes = s * n_trees as f64;
        assert!((votes - votes.round()).abs() < 1e-12);
    }
}

#[test]
fn one_nearest_neighbour_recalls_training_labels() {
    let d = blobs(150, 0.5, 7);
    let m = fit(&ClassifierSpec::Knn { k: 1 }, &d, 0).unwrap();
    let s = m.predict_scores(d.features()).unwrap();
    for (score, label) in s.iter().zip(d.labels()) {
        assert_eq!(*score, if label.is_positive() { 1.0 } else { 0.0 });
    }
}

#[test]
fn logistic_ranks_separable_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 200;
    let y: Vec<Label> = (0..n).map(|i| if i < 100 { Label::Positive } else { Label::Negative }).collect();
    let x = Array2::from_shape_fn((n, 2), |(i, _)| {
        let centre = if i < 100 { 3.0 } else { -3.0 };
        centre + rng.random_range(-1.0..1.0)
    });
    let d = Dataset::new("sep", x, vec!["a".into(), "b".into()], y, "test").unwrap();
    let m = fit(&ClassifierSpec::LogisticRegression, &d, 0).unwrap();
    let s = m.predict_scores(d.features()).unwrap();
    assert!(s.iter().all(|v| v.is_finite()));
    assert!(auc(&s, d.labels()).unwrap() >= 0.999);
}

#[test]
fn naive_bayes_midpoint_of_symmetric_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let half: Vec<[f64; 2]> = (0..30)
        .map(|_| [1.0 + rng.random_range(-0.5..0.5), 2.0 + rng.random_range(-0.5..0.5)])
        .collect();
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for p in &half {
        rows.extend_from_slice(p);
        y.push(Label::Positive);
    }
    for p in &half {
        rows.extend_from_slice(&[-p[0], -p[1]]);
        y.push(Label::Negative);
    }
    let x = Array2::from_shape_vec((60, 2), rows).unwrap();
    let d = Dataset::new("sym", x, vec!["a".into(), "b".into()], y, "test").unwrap();
    let m = fit(&ClassifierSpec::GaussianNaiveBayes, &d, 0).unwrap();
    let s = m.predict_scores(Array2::zeros((1, 2)).view()).unwrap();
    assert!(s[0].abs() < 1e-9, "midpoint score {}", s[0]);
}

#[test]
fn prediction_checks_dimensions() {
    let d = blobs(100, 1.0, 10);
    let m = fit(&ClassifierSpec::GaussianNaiveBayes, &d, 0).unwrap();
    assert!(m.predict_scores(Array2::zeros((3, 5)).view()).is_err());
}

#[test]
fn selection_matches_exhaustive_inner_cv() {
    let d = blobs(300, 1.0, 11);
    let grid = CandidateGrid::new(vec![ClassifierSpec::Knn { k: 1 }, ClassifierSpec::Knn { k: 201 }]).unwrap();
    let seed = 33;
    let w = CostWeighting::default();
    let sel = select_candidate(&grid, &d, 5, MetricKind::Auc, w, seed).unwrap();

    let plan = stratified_folds(d.labels(), 5, derive_seed(seed, &["inner-folds"])).unwrap();
    let mut covered: Vec<usize> = (0..5).flat_map(|f| plan.test_indices(f)).collect();
    covered.sort_unstable();
    assert_eq!(covered, (0..d.n_rows()).collect::<Vec<_>>());
    let means: Vec<f64> = grid
        .candidates
        .iter()
        .map(|spec| {
            (0..5)
                .map(|f| {
                    let m = fit(spec, &d.select_rows(&plan.train_indices(f)), 0).unwrap();
                    let test = d.select_rows(&plan.test_indices(f));
                    auc(&m.predict_scores(test.features()).unwrap(), test.labels()).unwrap()
                })
                .sum::<f64>()
                / 5.0
        })
        .collect();
    for (a, b) in sel.inner_means.iter().zip(&means) {
        assert!((a - b).abs() < 1e-12);
    }
    let best = if means[1] > means[0] { 1 } else { 0 };
    assert_eq!(sel.index, best);
    assert!(sel.inner_means[sel.index] >= sel.inner_means[1 - sel.index]);
}

#[test]
fn single_candidate_skips_inner_cv() {
    let d = blobs(60, 1.0, 12);
    let grid = CandidateGrid::new(vec![ClassifierSpec::LogisticRegression]).unwrap();
    let sel = select_candidate(&grid, &d, 5, MetricKind::H, CostWeighting::default(), 0).unwrap();
    assert_eq!(sel.spec, ClassifierSpec::LogisticRegression);
    assert!(sel.inner_means.is_empty());
}
