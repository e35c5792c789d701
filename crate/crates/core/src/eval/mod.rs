//! Downstream evaluation of embeddings.

mod auc;
mod classify;
mod pca;
mod protocol;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use auc::{auc_from_scores, cosine, link_prediction_auc, score_edge, LinkPredictionResult};
pub use classify::{
    fit_logistic, micro_f1, node_classification, node_classification_with, ClassCount, ClassificationResult,
    LogisticConfig, LogisticModel,
};
pub use pca::{coordinates_to_text, pca_2d, Pca2d};
pub use protocol::{
    link_prediction_split, run_link_prediction, run_node_classification, run_sensitivity_sweep, sweep_rows,
    LinkPredictionSplit, SweepCell, SweepConfig,
};

/// One line of a results table: `setting,seed,metric,value`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub setting: String,
    pub seed: String,
    pub metric: String,
    pub value: f64,
}

impl MetricRow {
    pub fn new(setting: impl Into<String>, seed: impl Into<String>, metric: impl Into<String>, value: f64) -> Self {
        MetricRow {
            setting: setting.into(),
            seed: seed.into(),
            metric: metric.into(),
            value,
        }
    }
}

/// Mean of every `(setting, metric)` group, labelled with seed `mean`.
pub fn mean_rows(rows: &[MetricRow]) -> Vec<MetricRow> {
    let mut groups: BTreeMap<(&str, &str), (f64, usize)> = BTreeMap::new();
    let mut order = Vec::new();
    for r in rows {
        let key = (r.setting.as_str(), r.metric.as_str());
        let entry = groups.entry(key).or_insert_with(|| {
            order.push(key);
            (0.0, 0)
        });
        entry.0 += r.value;
        entry.1 += 1;
    }
    order
        .into_iter()
        .map(|key| {
            let (sum, count) = groups[&key];
            MetricRow::new(key.0, "mean", key.1, sum / count as f64)
        })
        .collect()
}

/// Header and the given rows, followed by their per-group means when
/// `with_means` is set.
pub fn rows_to_csv(rows: &[MetricRow], with_means: bool) -> String {
    let means = if with_means { mean_rows(rows) } else { Vec::new() };
    let mut out = String::from("setting,seed,metric,value\n");
    for r in rows.iter().chain(means.iter()) {
        let _ = writeln!(out, "{},{},{},{}", csv_field(&r.setting), csv_field(&r.seed), csv_field(&r.metric), r.value);
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_means() {
        let rows = vec![
            MetricRow::new("a", "0", "auc", 0.5),
            MetricRow::new("a", "1", "auc", 0.7),
            MetricRow::new("b,c", "0", "auc", 1.0),
        ];
        assert_eq!(rows_to_csv(&rows, false).lines().count(), 4);
        let csv = rows_to_csv(&rows, true);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "setting,seed,metric,value");
        assert_eq!(lines[3], "\"b,c\",0,auc,1");
        assert_eq!(lines[4], "a,mean,auc,0.6");
        assert_eq!(lines[5], "\"b,c\",mean,auc,1");
    }
}
