//! Naming embedding dimensions with lexicon labels.
//!
//! A word that the lexicon knows contributes each of its labels to every
//! dimension where its normalized value lies strictly above `theta` (the
//! high band) or strictly below `1 - theta` (the low band).

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::NormalizedEmbeddingTable;
use crate::error::{Error, Result};
use crate::lexicon::{LabelId, Lexicon};

/// Selectivity threshold, always in `(0.5, 1.0]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Theta(f64);

impl Theta {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.5 && value <= 1.0 {
            Ok(Theta(value))
        } else {
            Err(Error::InvalidTheta(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Which band, if any, `value` falls in.
    pub fn band(self, value: f64) -> Option<Band> {
        if value > self.0 {
            Some(Band::High)
        } else if value < 1.0 - self.0 {
            Some(Band::Low)
        } else {
            None
        }
    }
}

impl TryFrom<f64> for Theta {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Theta::new(value)
    }
}

impl From<Theta> for f64 {
    fn from(theta: Theta) -> f64 {
        theta.0
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    High,
    Low,
}

/// One word attaching one label to a dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contributor {
    pub word: String,
    pub label: String,
    pub band: Band,
}

/// Label counts for every dimension of an embedding space.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionLabeling {
    per_dimension: Vec<BTreeMap<String, usize>>,
    contributors: Option<Vec<Vec<Contributor>>>,
    theta: Theta,
    resource: String,
}

impl DimensionLabeling {
    /// Build a labeling from precomputed counts, without contributors.
    pub fn from_counts(
        theta: Theta,
        resource: impl Into<String>,
        per_dimension: Vec<BTreeMap<String, usize>>,
    ) -> Result<Self> {
        if per_dimension.is_empty() {
            return Err(Error::InvalidTable("labeling has no dimensions".into()));
        }
        for (dim, counts) in per_dimension.iter().enumerate() {
            for (label, &count) in counts {
                if count == 0 || label.is_empty() || label.contains(['\t', '\n', '\r']) {
                    return Err(Error::InvalidEntry(format!(
                        "dimension {dim}: bad label entry `{}`:{count}",
                        label.escape_debug()
                    )));
                }
            }
        }
        Ok(DimensionLabeling {
            per_dimension,
            contributors: None,
            theta,
            resource: resource.into(),
        })
    }

    pub fn dim_count(&self) -> usize {
        self.per_dimension.len()
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn resource(&self) -> &str {
        &self.resource
    }

    pub fn dimension(&self, dim: usize) -> &BTreeMap<String, usize> {
        &self.per_dimension[dim]
    }

    pub fn dimensions(&self) -> &[BTreeMap<String, usize>] {
        &self.per_dimension
    }

    pub fn is_named(&self, dim: usize) -> bool {
        !self.per_dimension[dim].is_empty()
    }

    pub fn named_count(&self) -> usize {
        self.per_dimension.iter().filter(|d| !d.is_empty()).count()
    }

    /// Sum of all label counts over all dimensions.
    pub fn total_mass(&self) -> usize {
        self.per_dimension.iter().flat_map(|d| d.values()).sum()
    }

    /// Per-dimension contributor records, when they were kept.
    pub fn contributors(&self) -> Option<&[Vec<Contributor>]> {
        self.contributors.as_deref()
    }

    /// Labels of `dim` by descending count, ties in label order.
    pub fn ranked(&self, dim: usize) -> Vec<(&str, usize)> {
        let mut ranked: Vec<(&str, usize)> = self.per_dimension[dim]
            .iter()
            .map(|(label, &count)| (label.as_str(), count))
            .collect();
        // BTreeMap iteration is already in label order, so a stable sort
        // on count keeps ties lexicographic.
        ranked.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
        ranked
    }

    /// Dimension name: ranked labels joined with `+`, or `None` if unnamed.
    pub fn rendered_name(&self, dim: usize) -> Option<String> {
        let ranked = self.ranked(dim);
        if ranked.is_empty() {
            return None;
        }
        Some(
            ranked
                .iter()
                .map(|(label, _)| *label)
                .collect::<Vec<_>>()
                .join("+"),
        )
    }
}

/// Attach lexicon labels to embedding dimensions.
///
/// Words are visited in vocabulary order. With `keep_contributors`, each
/// dimension records which word attached which label, ordered by
/// vocabulary position and then label.
pub fn label_dimensions(
    table: &NormalizedEmbeddingTable,
    lexicon: &Lexicon,
    theta: Theta,
    keep_contributors: bool,
) -> Result<DimensionLabeling> {
    let dims = table.dim_count();
    let n_labels = lexicon.label_count();
    // counts[dim * n_labels + label]
    let mut counts = vec![0usize; dims * n_labels];
    let mut contributors = keep_contributors.then(|| vec![Vec::new(); dims]);

    for (word, row) in table.rows() {
        if row.len() != dims {
            return Err(Error::InvalidTable(format!(
                "word `{word}` has {} values, expected {dims}",
                row.len()
            )));
        }
        let mut ids = lexicon.lookup_ids(word);
        if ids.is_empty() {
            continue;
        }
        ids.sort_by_key(|&id| lexicon.label(id));

        for (dim, &value) in row.iter().enumerate() {
            let Some(band) = theta.band(value) else {
                continue;
            };
            let slot = &mut counts[dim * n_labels..(dim + 1) * n_labels];
            for &id in &ids {
                slot[id.index()] += 1;
            }
            if let Some(contributors) = contributors.as_mut() {
                contributors[dim].extend(ids.iter().map(|&id| Contributor {
                    word: word.to_owned(),
                    label: lexicon.label(id).to_owned(),
                    band,
                }));
            }
        }
    }

    let per_dimension = (0..dims)
        .map(|dim| {
            counts[dim * n_labels..(dim + 1) * n_labels]
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(id, &c)| (lexicon.label(LabelId::from_index(id)).to_owned(), c))
                .collect()
        })
        .collect();

    Ok(DimensionLabeling {
        per_dimension,
        contributors,
        theta,
        resource: lexicon.name().to_owned(),
    })
}

/// Keep at most `limit` labels per dimension, preferring higher counts and
/// then lexicographically smaller labels.
pub fn cap_labels(labeling: &DimensionLabeling, limit: NonZeroUsize) -> DimensionLabeling {
    let per_dimension: Vec<BTreeMap<String, usize>> = (0..labeling.dim_count())
        .map(|dim| {
            labeling
                .ranked(dim)
                .into_iter()
                .take(limit.get())
                .map(|(label, count)| (label.to_owned(), count))
                .collect()
        })
        .collect();

    let contributors = labeling.contributors.as_ref().map(|all| {
        all.iter()
            .zip(&per_dimension)
            .map(|(records, kept)| {
                records
                    .iter()
                    .filter(|r| kept.contains_key(&r.label))
                    .cloned()
                    .collect()
            })
            .collect()
    });

    DimensionLabeling {
        per_dimension,
        contributors,
        theta: labeling.theta,
        resource: labeling.resource.clone(),
    }
}

/// Keep the `k` most frequent labels per dimension. Same ranking as
/// [`cap_labels`].
pub fn top_k_frequent(labeling: &DimensionLabeling, k: NonZeroUsize) -> DimensionLabeling {
    cap_labels(labeling, k)
}

/// Post-labeling filter, parsed from `none`, `cap:N` or `topk:N`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LabelFilter {
    #[default]
    None,
    Cap(NonZeroUsize),
    TopK(NonZeroUsize),
}

impl LabelFilter {
    pub fn apply(self, labeling: DimensionLabeling) -> DimensionLabeling {
        match self {
            LabelFilter::None => labeling,
            LabelFilter::Cap(limit) => cap_labels(&labeling, limit),
            LabelFilter::TopK(k) => top_k_frequent(&labeling, k),
        }
    }
}

impl FromStr for LabelFilter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "none" {
            return Ok(LabelFilter::None);
        }
        let (kind, n) = s
            .split_once(':')
            .ok_or_else(|| format!("invalid filter `{s}` (expected none, cap:N or topk:N)"))?;
        let n: NonZeroUsize = n
            .parse()
            .map_err(|_| format!("filter limit `{n}` must be a positive integer"))?;
        match kind {
            "cap" => Ok(LabelFilter::Cap(n)),
            "topk" => Ok(LabelFilter::TopK(n)),
            other => Err(format!("unknown filter `{other}` (expected cap or topk)")),
        }
    }
}
