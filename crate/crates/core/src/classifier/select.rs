use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Importance threshold used to drop features after a first fit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    /// Keep features at or above the mean importance.
    #[default]
    Mean,
    /// Keep features at or above the given importance.
    Absolute(f64),
    Off,
}

/// Indices of kept features, ascending. Never empty for non-empty input:
/// when nothing clears the threshold the most important feature is kept.
pub fn select_features(importances: &[f64], mode: SelectionMode) -> Vec<usize> {
    let threshold = match mode {
        SelectionMode::Off => return (0..importances.len()).collect(),
        SelectionMode::Mean => {
            if importances.is_empty() {
                return Vec::new();
            }
            importances.iter().sum::<f64>() / importances.len() as f64
        }
        SelectionMode::Absolute(t) => t,
    };
    let kept: Vec<usize> = (0..importances.len()).filter(|&i| importances[i] >= threshold).collect();
    if kept.is_empty() && !importances.is_empty() {
        let best = (1..importances.len()).fold(0, |best, i| {
            if importances[i] > importances[best] {
                i
            } else {
                best
            }
        });
        return alloc::vec![best];
    }
    kept
}
