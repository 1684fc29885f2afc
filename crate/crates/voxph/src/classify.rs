//! Feature CSV → labeled dataset → cross-validated report files.

use std::collections::BTreeSet;

use rayon::prelude::*;
use voxph_core::classifier::{
    evaluate_fold, stratified_folds, summarize, ClassifierConfig, ClassifierReport, LabeledDataset, CANONICAL_CLASSES,
};

use crate::extract::thread_pool;
use crate::features::FeatureTable;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Task {
    /// Class 0 against every other class merged.
    Binary,
    #[default]
    ThreeClass,
}

/// Maps CSV labels to class indices. Labels drawn from NC/MCI/AD keep that
/// order (absent ones are skipped); anything else is sorted.
pub fn dataset_from_table(table: &FeatureTable, task: Task) -> Result<LabeledDataset, Error> {
    let present: BTreeSet<&str> = table.labels.iter().map(String::as_str).collect();
    let classes: Vec<String> = if present.iter().all(|l| CANONICAL_CLASSES.contains(l)) {
        CANONICAL_CLASSES
            .iter()
            .filter(|c| present.contains(*c))
            .map(|c| c.to_string())
            .collect()
    } else {
        present.iter().map(|l| l.to_string()).collect()
    };
    let labels = table
        .labels
        .iter()
        .map(|l| classes.iter().position(|c| c == l).expect("label collected above"))
        .collect();
    let rows = table.rows.iter().flatten().copied().collect();
    let ds = LabeledDataset::new(rows, labels, table.names.clone(), classes)?;
    Ok(match task {
        Task::Binary if ds.n_classes() > 2 => ds.merge_binary(),
        _ => ds,
    })
}

/// Stratified `folds`-fold cross-validation with folds spread over a pool
/// of `workers` threads. The report does not depend on `workers`.
pub fn classify(
    ds: &LabeledDataset,
    cfg: &ClassifierConfig,
    folds: usize,
    workers: usize,
) -> Result<ClassifierReport, Error> {
    cfg.validate()?;
    let splits = stratified_folds(ds.labels(), ds.n_classes(), folds, cfg.seed)?;
    let reports = thread_pool(workers)?.install(|| {
        splits
            .par_iter()
            .map(|fold| evaluate_fold(ds, fold, cfg))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(summarize(ds, cfg, reports))
}

pub fn report_json(report: &ClassifierReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Row-normalized fold-summed confusion matrix; rows are true classes.
pub fn confusion_csv(report: &ClassifierReport) -> String {
    let mut out = String::from("true");
    for c in &report.class_names {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (name, row) in report.class_names.iter().zip(&report.confusion_row_normalized) {
        out.push_str(name);
        for v in row {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// Per-fold ROC points: `fold,class,fpr,tpr,threshold`.
pub fn roc_csv(report: &ClassifierReport) -> String {
    let mut out = String::from("fold,class,fpr,tpr,threshold\n");
    for fold in &report.folds {
        for curve in &fold.roc {
            let class = &report.class_names[curve.class];
            for p in &curve.points {
                out.push_str(&format!("{},{class},{},{},{}\n", fold.index, p.fpr, p.tpr, p.threshold));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(labels: &[&str]) -> FeatureTable {
        let mut t = FeatureTable::new(vec!["x".into()]);
        for (i, l) in labels.iter().enumerate() {
            t.push(format!("v{i}"), l.to_string(), vec![i as f64]);
        }
        t
    }

    #[test]
    fn canonical_order_and_merge() {
        let ds = dataset_from_table(&table(&["AD", "NC", "MCI", "AD"]), Task::ThreeClass).unwrap();
        assert_eq!(ds.class_names(), ["NC", "MCI", "AD"]);
        assert_eq!(ds.labels(), &[2, 0, 1, 2]);
        let b = dataset_from_table(&table(&["AD", "NC", "MCI", "AD"]), Task::Binary).unwrap();
        assert_eq!(b.labels(), &[1, 0, 1, 1]);
        assert_eq!(b.n_classes(), 2);
    }

    #[test]
    fn missing_canonical_class_is_skipped() {
        let ds = dataset_from_table(&table(&["AD", "NC"]), Task::Binary).unwrap();
        assert_eq!(ds.class_names(), ["NC", "AD"]);
        assert_eq!(ds.labels(), &[1, 0]);
    }

    #[test]
    fn other_labels_sorted() {
        let ds = dataset_from_table(&table(&["torus", "ball", "shell"]), Task::ThreeClass).unwrap();
        assert_eq!(ds.class_names(), ["ball", "shell", "torus"]);
        assert_eq!(ds.labels(), &[2, 0, 1]);
    }
}
