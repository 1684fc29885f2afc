//! Gradient-boosted decision trees over topological feature vectors.
//!
//! The learner follows the usual second-order boosting recipe: each round
//! fits depth-limited regression trees to the gradient and hessian of the
//! logistic (binary) or softmax (multiclass) loss, with L2-regularized leaf
//! weights shrunk by the learning rate. Every tree sees a random subset of
//! the features, drawn from a generator keyed on `(seed, tree index)`, so a
//! fit is reproducible regardless of how folds are scheduled.
//!
//! Around the learner sit importance-based feature selection, stratified
//! k-fold cross-validation and the metric suite (accuracy, sensitivity,
//! specificity, precision, recall, F1 and one-vs-rest ROC-AUC).

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod boost;
mod cv;
mod dataset;
mod metrics;
mod select;
mod tree;

pub use boost::{fit, Model};
pub use cv::{
    cross_validate, evaluate_fold, run_fold, stratified_folds, summarize, ClassifierReport, Fold, FoldReport, RocCurve,
};
pub use dataset::{LabeledDataset, CANONICAL_CLASSES};
pub use metrics::{metrics_from_confusion, roc_auc, roc_auc_ovr, roc_curve, ConfusionMatrix, MetricSet, RocPoint};
pub use select::{select_features, SelectionMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifierError {
    #[error("dataset shape mismatch: {0}")]
    Shape(&'static str),
    #[error("feature {feature} of sample {sample} is not finite")]
    NonFinite { sample: usize, feature: usize },
    #[error("label {label} of sample {sample} is outside the {classes} declared classes")]
    BadLabel { sample: usize, label: usize, classes: usize },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("model expects {expected} features, got {actual}")]
    FeatureCount { expected: usize, actual: usize },
    #[error("class {class} has {count} samples, fewer than the {folds} folds")]
    ClassSupport { class: usize, count: usize, folds: usize },
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("binary logistic objective used with {0} classes")]
    ObjectiveClasses(usize),
    #[error("invalid hyperparameter: {0}")]
    Config(&'static str),
    #[error("confusion matrix is empty")]
    EmptyConfusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    BinaryLogistic,
    #[default]
    MulticlassSoftmax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Candidate thresholds at up to `max_bins` training quantiles.
    #[default]
    Histogram,
    /// Every distinct training value is a candidate threshold.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierConfig {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub colsample_bytree: f64,
    pub objective: Objective,
    pub seed: u64,
    pub feature_selection: SelectionMode,
    pub split_mode: SplitMode,
    pub max_bins: usize,
    pub reg_lambda: f64,
    pub min_child_weight: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            n_estimators: 500,
            learning_rate: 0.2,
            max_depth: 7,
            colsample_bytree: 0.3,
            objective: Objective::MulticlassSoftmax,
            seed: 0,
            feature_selection: SelectionMode::Mean,
            split_mode: SplitMode::Histogram,
            max_bins: 64,
            reg_lambda: 1.0,
            min_child_weight: 1.0,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<(), ClassifierError> {
        let err = |msg| Err(ClassifierError::Config(msg));
        if self.n_estimators == 0 {
            return err("n_estimators must be >= 1");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return err("learning_rate must be > 0");
        }
        if self.max_depth == 0 {
            return err("max_depth must be >= 1");
        }
        if !(self.colsample_bytree > 0.0 && self.colsample_bytree <= 1.0) {
            return err("colsample_bytree must be in (0, 1]");
        }
        if !(2..=65_536).contains(&self.max_bins) {
            return err("max_bins must be in 2..=65536");
        }
        if !(self.reg_lambda.is_finite() && self.reg_lambda >= 0.0) {
            return err("reg_lambda must be >= 0");
        }
        if !(self.min_child_weight.is_finite() && self.min_child_weight >= 0.0) {
            return err("min_child_weight must be >= 0");
        }
        if let SelectionMode::Absolute(t) = self.feature_selection {
            if !t.is_finite() {
                return err("selection threshold must be finite");
            }
        }
        Ok(())
    }
}
