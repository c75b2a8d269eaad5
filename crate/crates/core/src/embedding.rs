//! Reading, writing and normalizing word embeddings in Word2Vec and GloVe
//! text formats.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Text layout of an embedding file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingFormat {
    /// A `<vocab_size> <dim_count>` header followed by one vector per line.
    Word2VecText,
    /// One vector per line, no header.
    GloVeText,
    /// Decide from the first line.
    Auto,
}

impl FromStr for EmbeddingFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(EmbeddingFormat::Auto),
            "word2vec" => Ok(EmbeddingFormat::Word2VecText),
            "glove" => Ok(EmbeddingFormat::GloVeText),
            other => Err(format!(
                "unknown embedding format `{other}` (expected auto, word2vec or glove)"
            )),
        }
    }
}

/// Guess the format of an embedding file from its first line.
///
/// A line made of exactly two positive integers is a Word2Vec header,
/// anything else is taken to be a GloVe data line.
pub fn detect_format(first_line: &str) -> EmbeddingFormat {
    let mut tokens = first_line.split_whitespace();
    let is_header = match (tokens.next(), tokens.next(), tokens.next()) {
        (Some(a), Some(b), None) => is_positive_integer(a) && is_positive_integer(b),
        _ => false,
    };
    if is_header {
        EmbeddingFormat::Word2VecText
    } else {
        EmbeddingFormat::GloVeText
    }
}

fn is_positive_integer(token: &str) -> bool {
    token.bytes().all(|b| b.is_ascii_digit()) && token.parse::<u64>().is_ok_and(|n| n > 0)
}

/// Words with one raw vector each, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    words: Vec<String>,
    values: Vec<f64>,
    dims: usize,
    duplicates_skipped: usize,
}

impl EmbeddingTable {
    /// Build a table from `(word, vector)` rows.
    pub fn new<I, W>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (W, Vec<f64>)>,
        W: Into<String>,
    {
        let mut words = Vec::new();
        let mut values = Vec::new();
        let mut seen = HashSet::new();
        let mut dims = None;
        for (word, vector) in rows {
            let word = word.into();
            if word.is_empty() || word.contains(char::is_whitespace) {
                return Err(Error::InvalidTable(format!(
                    "word `{}` is empty or contains whitespace",
                    word.escape_debug()
                )));
            }
            let expected = *dims.get_or_insert(vector.len());
            if vector.len() != expected {
                return Err(Error::InvalidTable(format!(
                    "word `{word}` has {} values, expected {expected}",
                    vector.len()
                )));
            }
            if !seen.insert(word.clone()) {
                return Err(Error::InvalidTable(format!("duplicate word `{word}`")));
            }
            words.push(word);
            values.extend(vector);
        }
        match dims {
            None => Err(Error::EmptyInput),
            Some(0) => Err(Error::InvalidTable("vectors have no dimensions".into())),
            Some(dims) => Ok(EmbeddingTable {
                words,
                values,
                dims,
                duplicates_skipped: 0,
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim_count(&self) -> usize {
        self.dims
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, idx: usize) -> &str {
        &self.words[idx]
    }

    pub fn row(&self, idx: usize) -> &[f64] {
        &self.values[idx * self.dims..(idx + 1) * self.dims]
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.words
            .iter()
            .map(String::as_str)
            .zip(self.values.chunks_exact(self.dims))
    }

    pub fn value(&self, word_idx: usize, dim: usize) -> f64 {
        self.values[word_idx * self.dims + dim]
    }

    /// Number of later duplicate words dropped while parsing.
    pub fn duplicates_skipped(&self) -> usize {
        self.duplicates_skipped
    }
}

/// Read an embedding table from a line-oriented text source.
///
/// Blank lines are ignored. When a word occurs more than once the first
/// vector is kept and later ones are counted in
/// [`EmbeddingTable::duplicates_skipped`].
pub fn parse_embeddings<R: BufRead>(reader: R, format: EmbeddingFormat) -> Result<EmbeddingTable> {
    let lines = reader
        .lines()
        .enumerate()
        .map(|(idx, line)| line.map(|l| (idx + 1, l)));

    let mut words = Vec::new();
    let mut values = Vec::new();
    let mut seen = HashSet::new();
    let mut duplicates_skipped = 0;
    let mut dims: Option<usize> = None;
    let mut header: Option<(usize, usize)> = None;
    let mut data_lines = 0;
    let mut resolved = format;

    for item in lines {
        let (line_no, line) = item?;
        if line.trim().is_empty() {
            continue;
        }

        if resolved == EmbeddingFormat::Auto {
            resolved = detect_format(&line);
        }
        if resolved == EmbeddingFormat::Word2VecText && header.is_none() {
            header = Some(parse_header(line_no, &line)?);
            continue;
        }

        let mut tokens = line.split_whitespace();
        let word = tokens.next().expect("line is not blank");
        let start = values.len();
        for token in tokens {
            let value = token.parse::<f64>().map_err(|_| Error::MalformedLine {
                line: line_no,
                reason: format!("cannot parse `{token}` as a number"),
            })?;
            values.push(value);
        }
        let found = values.len() - start;

        match dims {
            None => {
                if found == 0 {
                    return Err(Error::MalformedLine {
                        line: line_no,
                        reason: "word has no vector".into(),
                    });
                }
                if let Some((_, expected)) = header {
                    if expected != found {
                        return Err(Error::DimensionMismatch {
                            line: line_no,
                            expected,
                            found,
                        });
                    }
                }
                dims = Some(found);
            }
            Some(expected) if expected != found => {
                return Err(Error::MalformedLine {
                    line: line_no,
                    reason: format!("expected {expected} values, found {found}"),
                });
            }
            Some(_) => {}
        }

        data_lines += 1;
        if seen.contains(word) {
            values.truncate(start);
            duplicates_skipped += 1;
        } else {
            seen.insert(word.to_owned());
            words.push(word.to_owned());
        }
    }

    let dims = dims.ok_or(Error::EmptyInput)?;
    if let Some((expected, _)) = header {
        if expected != data_lines {
            return Err(Error::VocabSizeMismatch {
                expected,
                found: data_lines,
            });
        }
    }

    Ok(EmbeddingTable {
        words,
        values,
        dims,
        duplicates_skipped,
    })
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let malformed = || Error::MalformedLine {
        line: line_no,
        reason: format!("expected `<vocab_size> <dim_count>` header, found `{line}`"),
    };
    let mut tokens = line.split_whitespace();
    let vocab = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(malformed)?;
    let dims = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(malformed)?;
    if tokens.next().is_some() {
        return Err(malformed());
    }
    Ok((vocab, dims))
}

/// Write a table in the given text format.
///
/// With `precision` set, values are written with that many decimals.
/// Otherwise the shortest representation that parses back to the same
/// `f64` is used. `Auto` writes GloVe text.
pub fn write_embeddings<W: Write>(
    table: &EmbeddingTable,
    mut writer: W,
    format: EmbeddingFormat,
    precision: Option<usize>,
) -> Result<()> {
    if format == EmbeddingFormat::Word2VecText {
        writeln!(writer, "{} {}", table.len(), table.dim_count())?;
    }
    for (word, row) in table.rows() {
        write!(writer, "{word}")?;
        for value in row {
            match precision {
                Some(p) => write!(writer, " {value:.p$}")?,
                None => write!(writer, " {value}")?,
            }
        }
        writeln!(writer)?;
    }
    writer.flush()?;
    Ok(())
}

/// Which values share a min-max range during normalization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormalizationScope {
    /// Each dimension is scaled over all words.
    #[default]
    PerDimension,
    /// Each word vector is scaled over its own values.
    PerVector,
    /// One range for the whole matrix.
    Global,
}

impl FromStr for NormalizationScope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "per-dimension" => Ok(NormalizationScope::PerDimension),
            "per-vector" => Ok(NormalizationScope::PerVector),
            "global" => Ok(NormalizationScope::Global),
            other => Err(format!(
                "unknown normalization `{other}` (expected per-dimension, per-vector or global)"
            )),
        }
    }
}

impl fmt::Display for NormalizationScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalizationScope::PerDimension => "per-dimension",
            NormalizationScope::PerVector => "per-vector",
            NormalizationScope::Global => "global",
        })
    }
}

/// An embedding table whose values all lie in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedEmbeddingTable(EmbeddingTable);

impl NormalizedEmbeddingTable {
    /// Accept a table that is already normalized, checking the range.
    pub fn from_normalized(table: EmbeddingTable) -> Result<Self> {
        for (word, row) in table.rows() {
            for (dim, &value) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::NotNormalized {
                        word: word.to_owned(),
                        dim,
                        value,
                    });
                }
            }
        }
        Ok(NormalizedEmbeddingTable(table))
    }

    pub fn table(&self) -> &EmbeddingTable {
        &self.0
    }

    pub fn into_inner(self) -> EmbeddingTable {
        self.0
    }
}

impl std::ops::Deref for NormalizedEmbeddingTable {
    type Target = EmbeddingTable;

    fn deref(&self) -> &EmbeddingTable {
        &self.0
    }
}

/// Per-dimension min-max scaling into `[0, 1]`.
///
/// Constant dimensions map to 0.5, which no valid theta ever labels.
pub fn normalize(table: &EmbeddingTable) -> Result<NormalizedEmbeddingTable> {
    normalize_with(table, NormalizationScope::PerDimension)
}

pub fn normalize_with(
    table: &EmbeddingTable,
    scope: NormalizationScope,
) -> Result<NormalizedEmbeddingTable> {
    for (word, row) in table.rows() {
        if let Some(dim) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                word: word.to_owned(),
                dim,
            });
        }
    }

    let dims = table.dim_count();
    let mut out = table.clone();
    match scope {
        NormalizationScope::PerDimension => {
            for dim in 0..dims {
                let range = value_range(out.values.iter().skip(dim).step_by(dims).copied());
                for v in out.values.iter_mut().skip(dim).step_by(dims) {
                    *v = rescale(*v, range);
                }
            }
        }
        NormalizationScope::PerVector => {
            for row in out.values.chunks_exact_mut(dims) {
                let range = value_range(row.iter().copied());
                for v in row.iter_mut() {
                    *v = rescale(*v, range);
                }
            }
        }
        NormalizationScope::Global => {
            let range = value_range(out.values.iter().copied());
            for v in out.values.iter_mut() {
                *v = rescale(*v, range);
            }
        }
    }

    debug_assert!(out.values.iter().all(|v| (0.0..=1.0).contains(v)));
    Ok(NormalizedEmbeddingTable(out))
}

fn value_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn rescale(value: f64, (min, max): (f64, f64)) -> f64 {
    if max == min {
        return 0.5;
    }
    let span = max - min;
    let scaled = if span.is_finite() {
        (value - min) / span
    } else {
        // Halving is exact for normal floats and keeps the span finite.
        (value / 2.0 - min / 2.0) / (max / 2.0 - min / 2.0)
    };
    scaled.clamp(0.0, 1.0)
}
