use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::boost::{argmax, fit};
use super::dataset::LabeledDataset;
use super::metrics::{metrics_from_confusion, roc_auc_ovr, roc_curve, ConfusionMatrix, MetricSet, RocPoint};
use super::select::{select_features, SelectionMode};
use super::{ClassifierConfig, ClassifierError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub index: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified `k`-fold split. Each class is shuffled with a generator seeded
/// by `seed` and dealt round-robin across folds, continuing where the
/// previous class stopped so fold sizes differ by at most one.
pub fn stratified_folds(
    labels: &[usize],
    n_classes: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<Fold>, ClassifierError> {
    if k < 2 {
        return Err(ClassifierError::TooFewFolds(k));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    if let Some((class, members)) = by_class.iter().enumerate().find(|(_, m)| m.len() < k) {
        return Err(ClassifierError::ClassSupport {
            class,
            count: members.len(),
            folds: k,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];
    let mut next = 0;
    for members in &mut by_class {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            assignment[i] = next % k;
            next += 1;
        }
    }
    Ok((0..k)
        .map(|index| {
            let (test, train) = (0..labels.len()).partition(|&i| assignment[i] == index);
            Fold { index, train, test }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// Class treated as positive.
    pub class: usize,
    pub points: Vec<RocPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub index: usize,
    pub n_train: usize,
    pub test_indices: Vec<usize>,
    pub metrics: MetricSet,
    /// `[true][predicted]` counts on the held-out part.
    pub confusion: Vec<Vec<u64>>,
    pub selected_features: Vec<String>,
    pub predictions: Vec<usize>,
    pub roc: Vec<RocCurve>,
}

/// Fits on `train` (selecting features from its importances only) and
/// evaluates on `test`.
pub fn run_fold(
    train: &LabeledDataset,
    test: &LabeledDataset,
    cfg: &ClassifierConfig,
) -> Result<FoldReport, ClassifierError> {
    let first = fit(train, cfg)?;
    let (model, train_cols, test_cols);
    let kept = select_features(first.importances(), cfg.feature_selection);
    if cfg.feature_selection == SelectionMode::Off || kept.len() == train.n_features() {
        model = first;
        train_cols = None;
        test_cols = None;
    } else {
        let narrowed = train.columns(&kept);
        model = fit(&narrowed, cfg)?;
        train_cols = Some(narrowed);
        test_cols = Some(test.columns(&kept));
    }
    let test_view = test_cols.as_ref().unwrap_or(test);
    let selected_features = train_cols
        .as_ref()
        .map_or_else(|| train.feature_names().to_vec(), |t| t.feature_names().to_vec());

    let k = train.n_classes();
    let mut probs = Vec::with_capacity(test_view.n_samples() * k);
    let mut predictions = Vec::with_capacity(test_view.n_samples());
    for i in 0..test_view.n_samples() {
        let p = model.predict_proba(test_view.row(i))?;
        predictions.push(argmax(&p));
        probs.extend(p);
    }
    let labels = test_view.labels();
    let cm = ConfusionMatrix::from_predictions(k, labels, &predictions);
    let mut metrics = metrics_from_confusion(&cm)?;
    metrics.roc_auc = roc_auc_ovr(&probs, labels, k);
    if metrics.roc_auc.is_none() {
        metrics.undefined.push(String::from("roc_auc"));
    }

    let positive_classes: Vec<usize> = if k == 2 { vec![1] } else { (0..k).collect() };
    let roc = positive_classes
        .into_iter()
        .map(|class| {
            let scores: Vec<f64> = (0..labels.len()).map(|i| probs[i * k + class]).collect();
            let pos: Vec<bool> = labels.iter().map(|&l| l == class).collect();
            RocCurve {
                class,
                points: roc_curve(&scores, &pos),
            }
        })
        .collect();

    Ok(FoldReport {
        index: 0,
        n_train: train.n_samples(),
        test_indices: (0..test.n_samples()).collect(),
        metrics,
        confusion: cm.rows(),
        selected_features,
        predictions,
        roc,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub config: ClassifierConfig,
    pub folds_k: usize,
    pub n_samples: usize,
    pub n_features: usize,
    pub class_names: Vec<String>,
    pub folds: Vec<FoldReport>,
    /// Arithmetic mean of the per-fold metrics.
    pub mean: MetricSet,
    /// Fold-summed `[true][predicted]` counts.
    pub confusion_counts: Vec<Vec<u64>>,
    /// `confusion_counts` with each row divided by its class support.
    pub confusion_row_normalized: Vec<Vec<f64>>,
}

/// Runs every fold in order. Folds are independent, so callers with a
/// thread pool can map [`run_fold`] themselves and pass the results to
/// [`summarize`].
pub fn cross_validate(
    ds: &LabeledDataset,
    cfg: &ClassifierConfig,
    k: usize,
) -> Result<ClassifierReport, ClassifierError> {
    cfg.validate()?;
    let folds = stratified_folds(ds.labels(), ds.n_classes(), k, cfg.seed)?;
    let reports = folds
        .iter()
        .map(|fold| evaluate_fold(ds, fold, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(ds, cfg, reports))
}

/// [`run_fold`] on the rows named by `fold`, with indices mapped back to `ds`.
pub fn evaluate_fold(ds: &LabeledDataset, fold: &Fold, cfg: &ClassifierConfig) -> Result<FoldReport, ClassifierError> {
    let mut report = run_fold(&ds.subset(&fold.train), &ds.subset(&fold.test), cfg)?;
    report.index = fold.index;
    report.test_indices = fold.test.clone();
    Ok(report)
}

pub fn summarize(ds: &LabeledDataset, cfg: &ClassifierConfig, folds: Vec<FoldReport>) -> ClassifierReport {
    let k = ds.n_classes();
    let mut total = ConfusionMatrix::new(k);
    for f in &folds {
        total.merge(&ConfusionMatrix::from_rows(&f.confusion));
    }
    let nf = folds.len().max(1) as f64;
    let mean_of = |get: fn(&MetricSet) -> f64| folds.iter().map(|f| get(&f.metrics)).sum::<f64>() / nf;
    let aucs: Vec<f64> = folds.iter().filter_map(|f| f.metrics.roc_auc).collect();
    let mut undefined: Vec<String> = Vec::new();
    for name in folds.iter().flat_map(|f| &f.metrics.undefined) {
        if !undefined.contains(name) {
            undefined.push(name.clone());
        }
    }
    let mean = MetricSet {
        accuracy: mean_of(|m| m.accuracy),
        sensitivity: mean_of(|m| m.sensitivity),
        specificity: mean_of(|m| m.specificity),
        precision: mean_of(|m| m.precision),
        recall: mean_of(|m| m.recall),
        f1: mean_of(|m| m.f1),
        roc_auc: (!aucs.is_empty()).then(|| aucs.iter().sum::<f64>() / aucs.len() as f64),
        undefined,
    };
    ClassifierReport {
        config: cfg.clone(),
        folds_k: folds.len(),
        n_samples: ds.n_samples(),
        n_features: ds.n_features(),
        class_names: ds.class_names().to_vec(),
        folds,
        mean,
        confusion_counts: total.rows(),
        confusion_row_normalized: total.row_normalized(),
    }
}
