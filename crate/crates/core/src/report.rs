//! TSV and JSON renderings of labelings and sweep reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::labeler::{Contributor, DimensionLabeling, Theta};
use crate::metrics::{avg_labels_per_dimension, unnamed_ratio, AvgMode, SweepReport, SweepRow};

pub const UNNAMED: &str = "UNNAMED";

pub const SWEEP_TSV_HEADER: &str = "theta\tresource\tpct_unnamed\tavg_labels_dim";

/// One line per dimension: `index<TAB>name<TAB>label:count,...`.
pub fn render_labeling_tsv(labeling: &DimensionLabeling) -> String {
    let mut out = String::new();
    for dim in 0..labeling.dim_count() {
        let name = labeling.rendered_name(dim);
        let pairs = labeling
            .ranked(dim)
            .iter()
            .map(|(label, count)| format!("{label}:{count}"))
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            out,
            "{dim}\t{}\t{pairs}",
            name.as_deref().unwrap_or(UNNAMED)
        );
    }
    out
}

/// A sweep row as `theta<TAB>resource<TAB>pct%<TAB>avg`, with the
/// percentage and average at one decimal. An undefined average renders
/// as `NA`.
pub fn render_sweep_row(row: &SweepRow, mode: AvgMode) -> String {
    let avg = match row.avg_labels(mode) {
        Some(avg) => format!("{avg:.1}"),
        None => "NA".to_owned(),
    };
    format!(
        "{}\t{}\t{:.1}%\t{avg}",
        row.theta,
        row.resource,
        row.unnamed_ratio * 100.0
    )
}

pub fn render_sweep_tsv(report: &SweepReport, mode: AvgMode) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_TSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        out.push_str(&render_sweep_row(row, mode));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCount {
    pub label: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionRecord {
    pub index: usize,
    pub name: Option<String>,
    pub labels: Vec<LabelCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contributors: Option<Vec<Contributor>>,
}

/// JSON document for a labeling. Field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelingDocument {
    pub theta: Theta,
    pub resource: String,
    pub dim_count: usize,
    pub unnamed_ratio: f64,
    pub avg_labels_all: f64,
    pub avg_labels_named: Option<f64>,
    pub dimensions: Vec<DimensionRecord>,
}

impl LabelingDocument {
    pub fn from_labeling(labeling: &DimensionLabeling) -> Self {
        let contributors = labeling.contributors();
        let dimensions = (0..labeling.dim_count())
            .map(|dim| DimensionRecord {
                index: dim,
                name: labeling.rendered_name(dim),
                labels: labeling
                    .ranked(dim)
                    .into_iter()
                    .map(|(label, count)| LabelCount {
                        label: label.to_owned(),
                        count,
                    })
                    .collect(),
                contributors: contributors.map(|c| c[dim].clone()),
            })
            .collect();
        LabelingDocument {
            theta: labeling.theta(),
            resource: labeling.resource().to_owned(),
            dim_count: labeling.dim_count(),
            unnamed_ratio: unnamed_ratio(labeling),
            avg_labels_all: avg_labels_per_dimension(labeling, AvgMode::All)
                .expect("mode all never fails"),
            avg_labels_named: avg_labels_per_dimension(labeling, AvgMode::NamedOnly).ok(),
            dimensions,
        }
    }

    /// Rebuild the label counts (contributors are not restored).
    pub fn to_labeling(&self) -> Result<DimensionLabeling> {
        let per_dimension = self
            .dimensions
            .iter()
            .map(|d| {
                d.labels
                    .iter()
                    .map(|lc| (lc.label.clone(), lc.count))
                    .collect::<BTreeMap<_, _>>()
            })
            .collect();
        DimensionLabeling::from_counts(self.theta, self.resource.clone(), per_dimension)
    }
}

pub fn labeling_to_json(labeling: &DimensionLabeling) -> String {
    let mut json = serde_json::to_string_pretty(&LabelingDocument::from_labeling(labeling))
        .expect("labeling document serializes");
    json.push('\n');
    json
}

pub fn report_to_json(report: &SweepReport) -> String {
    let mut json = serde_json::to_string_pretty(report).expect("sweep report serializes");
    json.push('\n');
    json
}

pub fn report_from_json(text: &str) -> serde_json::Result<SweepReport> {
    serde_json::from_str(text)
}

pub fn labeling_from_json(text: &str) -> serde_json::Result<LabelingDocument> {
    serde_json::from_str(text)
}
