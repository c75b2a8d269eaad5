//! Coverage statistics for a labeling and theta sweeps over them.

use std::cmp::Ordering;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::NormalizedEmbeddingTable;
use crate::error::{Error, Result};
use crate::labeler::{label_dimensions, DimensionLabeling, LabelFilter, Theta};
use crate::lexicon::Lexicon;

/// Denominator used when averaging labels per dimension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AvgMode {
    /// Every dimension, named or not.
    #[default]
    All,
    /// Only dimensions with at least one label.
    NamedOnly,
}

impl FromStr for AvgMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "all" => Ok(AvgMode::All),
            "named" | "named-only" => Ok(AvgMode::NamedOnly),
            other => Err(format!(
                "unknown average mode `{other}` (expected all or named)"
            )),
        }
    }
}

/// What "labels" means when averaging.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LabelCounting {
    /// Every label attachment, with multiplicity.
    #[default]
    Mass,
    /// Distinct labels per dimension.
    Distinct,
}

/// Fraction of dimensions without any label.
pub fn unnamed_ratio(labeling: &DimensionLabeling) -> f64 {
    let unnamed = labeling.dim_count() - labeling.named_count();
    unnamed as f64 / labeling.dim_count() as f64
}

/// Average label mass (labels counted with multiplicity) per dimension.
pub fn avg_labels_per_dimension(labeling: &DimensionLabeling, mode: AvgMode) -> Result<f64> {
    average(labeling.total_mass(), labeling, mode)
}

/// Average number of distinct labels per dimension.
pub fn avg_distinct_labels_per_dimension(
    labeling: &DimensionLabeling,
    mode: AvgMode,
) -> Result<f64> {
    let distinct = labeling.dimensions().iter().map(|d| d.len()).sum();
    average(distinct, labeling, mode)
}

fn average(total: usize, labeling: &DimensionLabeling, mode: AvgMode) -> Result<f64> {
    let denominator = match mode {
        AvgMode::All => labeling.dim_count(),
        AvgMode::NamedOnly => match labeling.named_count() {
            0 => return Err(Error::NoNamedDimensions),
            n => n,
        },
    };
    Ok(total as f64 / denominator as f64)
}

/// One (resource, theta) cell of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub resource: String,
    pub unnamed_ratio: f64,
    pub avg_labels_all: f64,
    /// `None` when no dimension is named.
    pub avg_labels_named: Option<f64>,
}

impl SweepRow {
    pub fn from_labeling(labeling: &DimensionLabeling) -> Self {
        SweepRow::from_labeling_with(labeling, LabelCounting::Mass)
    }

    pub fn from_labeling_with(labeling: &DimensionLabeling, counting: LabelCounting) -> Self {
        let avg = match counting {
            LabelCounting::Mass => avg_labels_per_dimension,
            LabelCounting::Distinct => avg_distinct_labels_per_dimension,
        };
        SweepRow {
            theta: labeling.theta().value(),
            resource: labeling.resource().to_owned(),
            unnamed_ratio: unnamed_ratio(labeling),
            avg_labels_all: avg(labeling, AvgMode::All).expect("mode all never fails"),
            avg_labels_named: avg(labeling, AvgMode::NamedOnly).ok(),
        }
    }

    /// The average selected by `mode`, if defined.
    pub fn avg_labels(&self, mode: AvgMode) -> Option<f64> {
        match mode {
            AvgMode::All => Some(self.avg_labels_all),
            AvgMode::NamedOnly => self.avg_labels_named,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Sort rows by resource, then by descending theta. Rows with equal
    /// resource names keep their relative order.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.resource
                .cmp(&b.resource)
                .then(b.theta.partial_cmp(&a.theta).unwrap_or(Ordering::Equal))
        });
    }

    /// Check that, per resource, lowering theta never raises the unnamed
    /// ratio nor lowers the average label mass.
    pub fn check_trend(&self) -> Result<()> {
        for pair in self.rows.windows(2) {
            let (hi, lo) = (&pair[0], &pair[1]);
            if hi.resource != lo.resource || hi.theta <= lo.theta {
                continue;
            }
            if lo.unnamed_ratio > hi.unnamed_ratio || lo.avg_labels_all < hi.avg_labels_all {
                return Err(Error::TrendViolation {
                    resource: lo.resource.clone(),
                    theta: lo.theta,
                });
            }
        }
        Ok(())
    }
}

/// Label the table once per (lexicon, theta) pair and collect the metrics.
///
/// Duplicate thetas are evaluated once. Lexicons sharing a resource name
/// keep their input order in the report.
pub fn sweep(
    table: &NormalizedEmbeddingTable,
    lexicons: &[Lexicon],
    thetas: &[Theta],
) -> Result<SweepReport> {
    sweep_with(table, lexicons, thetas, SweepOptions::default())
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SweepOptions {
    pub counting: LabelCounting,
    /// Applied to every labeling before measuring it.
    pub filter: LabelFilter,
}

pub fn sweep_with(
    table: &NormalizedEmbeddingTable,
    lexicons: &[Lexicon],
    thetas: &[Theta],
    options: SweepOptions,
) -> Result<SweepReport> {
    if thetas.is_empty() {
        return Err(Error::EmptyThetaGrid);
    }
    if lexicons.is_empty() {
        return Err(Error::NoLexicons);
    }

    let mut grid = thetas.to_vec();
    grid.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    grid.dedup();

    let mut report = SweepReport::default();
    for lexicon in lexicons {
        for &theta in &grid {
            let labeling = options
                .filter
                .apply(label_dimensions(table, lexicon, theta, false)?);
            report
                .rows
                .push(SweepRow::from_labeling_with(&labeling, options.counting));
        }
    }
    report.sort();
    report.check_trend()?;
    Ok(report)
}
