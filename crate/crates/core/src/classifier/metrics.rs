use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ClassifierError;

/// Counts indexed `[true class][predicted class]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    n_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(n_classes: usize) -> Self {
        Self {
            n_classes,
            counts: vec![0; n_classes * n_classes],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "confusion matrix must be square");
        Self {
            n_classes: n,
            counts: rows.iter().flatten().copied().collect(),
        }
    }

    /// Binary matrix with class 1 as the positive class.
    pub fn binary(tp: u64, fn_: u64, tn: u64, fp: u64) -> Self {
        Self::from_rows(&[vec![tn, fp], vec![fn_, tp]])
    }

    pub fn from_predictions(n_classes: usize, truth: &[usize], predicted: &[usize]) -> Self {
        let mut cm = Self::new(n_classes);
        for (&t, &p) in truth.iter().zip(predicted) {
            cm.add(t, p);
        }
        cm
    }

    pub fn add(&mut self, truth: usize, predicted: usize) {
        self.counts[truth * self.n_classes + predicted] += 1;
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.n_classes + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.n_classes.max(1)).map(<[u64]>::to_vec).collect()
    }

    /// Each row divided by its sum; empty rows stay zero.
    pub fn row_normalized(&self) -> Vec<Vec<f64>> {
        self.rows()
            .into_iter()
            .map(|row| {
                let total: u64 = row.iter().sum();
                row.iter()
                    .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
                    .collect()
            })
            .collect()
    }

    pub fn merge(&mut self, other: &Self) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Scores derived from a confusion matrix, plus ROC-AUC when scores were
/// available. Ratios with a zero denominator are reported as 0 and named in
/// `undefined`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricSet {
    pub accuracy: f64,
    /// Binary: recall of class 1. Multiclass: macro recall.
    pub sensitivity: f64,
    /// Binary: recall of class 0. Multiclass: macro one-vs-rest specificity.
    pub specificity: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub roc_auc: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<String>,
}

fn ratio(num: u64, den: u64, name: &str, undefined: &mut Vec<String>) -> f64 {
    if den == 0 {
        if !undefined.iter().any(|u| u == name) {
            undefined.push(String::from(name));
        }
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1_of(precision: f64, recall: f64, name: &str, undefined: &mut Vec<String>) -> f64 {
    if precision + recall == 0.0 {
        if !undefined.iter().any(|u| u == name) {
            undefined.push(String::from(name));
        }
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

pub fn metrics_from_confusion(cm: &ConfusionMatrix) -> Result<MetricSet, ClassifierError> {
    let total = cm.total();
    if total == 0 {
        return Err(ClassifierError::EmptyConfusion);
    }
    let k = cm.n_classes();
    let mut undefined = Vec::new();
    let trace: u64 = (0..k).map(|c| cm.get(c, c)).sum();
    let accuracy = trace as f64 / total as f64;

    if k == 2 {
        let (tn, fp, fn_, tp) = (cm.get(0, 0), cm.get(0, 1), cm.get(1, 0), cm.get(1, 1));
        let sensitivity = ratio(tp, tp + fn_, "sensitivity", &mut undefined);
        let specificity = ratio(tn, tn + fp, "specificity", &mut undefined);
        let precision = ratio(tp, tp + fp, "precision", &mut undefined);
        let f1 = f1_of(precision, sensitivity, "f1", &mut undefined);
        return Ok(MetricSet {
            accuracy,
            sensitivity,
            specificity,
            precision,
            recall: sensitivity,
            f1,
            roc_auc: None,
            undefined,
        });
    }

    let (mut recall, mut specificity, mut precision, mut f1) = (0.0, 0.0, 0.0, 0.0);
    for c in 0..k {
        let tp = cm.get(c, c);
        let support: u64 = (0..k).map(|p| cm.get(c, p)).sum();
        let predicted: u64 = (0..k).map(|t| cm.get(t, c)).sum();
        let fp = predicted - tp;
        let tn = total - support - fp;
        let r = ratio(tp, support, "recall", &mut undefined);
        let p = ratio(tp, predicted, "precision", &mut undefined);
        recall += r;
        precision += p;
        specificity += ratio(tn, tn + fp, "specificity", &mut undefined);
        f1 += f1_of(p, r, "f1", &mut undefined);
    }
    let kf = k as f64;
    Ok(MetricSet {
        accuracy,
        sensitivity: recall / kf,
        specificity: specificity / kf,
        precision: precision / kf,
        recall: recall / kf,
        f1: f1 / kf,
        roc_auc: None,
        undefined,
    })
}

/// Area under the ROC curve via the rank statistic (ties count one half).
/// `None` when either class is absent.
pub fn roc_auc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scores[idx[j + 1]] == scores[idx[i]] {
            j += 1;
        }
        // 1-based ranks i+1..=j+1 share their average.
        let avg = (i + j + 2) as f64 / 2.0;
        rank_sum += avg * idx[i..=j].iter().filter(|&&s| positive[s]).count() as f64;
        i = j + 1;
    }
    let np = n_pos as f64;
    Some((rank_sum - np * (np + 1.0) / 2.0) / (np * n_neg as f64))
}

/// Macro-averaged one-vs-rest ROC-AUC over classes that have both positive
/// and negative samples. `probs` is row-major `n_samples x n_classes`.
pub fn roc_auc_ovr(probs: &[f64], labels: &[usize], n_classes: usize) -> Option<f64> {
    if n_classes == 2 {
        let scores: Vec<f64> = labels.iter().enumerate().map(|(i, _)| probs[i * 2 + 1]).collect();
        let pos: Vec<bool> = labels.iter().map(|&l| l == 1).collect();
        return roc_auc(&scores, &pos);
    }
    let aucs: Vec<f64> = (0..n_classes)
        .filter_map(|c| {
            let scores: Vec<f64> = (0..labels.len()).map(|i| probs[i * n_classes + c]).collect();
            let pos: Vec<bool> = labels.iter().map(|&l| l == c).collect();
            roc_auc(&scores, &pos)
        })
        .collect();
    if aucs.is_empty() {
        None
    } else {
        Some(aucs.iter().sum::<f64>() / aucs.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Samples scoring at or above this are called positive; the first point
    /// uses +inf.
    pub threshold: f64,
}

/// ROC curve points from `(0, 0)` to `(1, 1)`, one per distinct score.
pub fn roc_curve(scores: &[f64], positive: &[bool]) -> Vec<RocPoint> {
    let n_pos = positive.iter().filter(|&&p| p).count() as f64;
    let n_neg = positive.len() as f64 - n_pos;
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let rate = |c: f64, n: f64| if n == 0.0 { 0.0 } else { c / n };
    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let (mut tp, mut fp) = (0.0, 0.0);
    let mut i = 0;
    while i < idx.len() {
        let s = scores[idx[i]];
        while i < idx.len() && scores[idx[i]] == s {
            if positive[idx[i]] {
                tp += 1.0;
            } else {
                fp += 1.0;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: rate(fp, n_neg),
            tpr: rate(tp, n_pos),
            threshold: s,
        });
    }
    points
}
