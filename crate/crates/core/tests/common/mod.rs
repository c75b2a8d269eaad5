//! Shared test support: a brute-force reference labeler and random
//! instance generators. Nothing here calls into the crate's labeling or
//! lookup code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lex2vec::embedding::{EmbeddingTable, NormalizedEmbeddingTable};
use lex2vec::lexicon::Lexicon;
use rand::seq::SliceRandom;
use rand::Rng;

/// Lexicon entries in raw form: `(pattern, label, is_prefix)`.
#[derive(Clone, Debug, Default)]
pub struct RawLexicon {
    pub name: String,
    pub entries: Vec<(String, String, bool)>,
}

impl RawLexicon {
    pub fn build(&self) -> Lexicon {
        let mut lex = Lexicon::new(self.name.clone());
        for (pattern, label, is_prefix) in &self.entries {
            if *is_prefix {
                lex.insert_prefix(pattern, label).unwrap();
            } else {
                lex.insert_exact(pattern, label).unwrap();
            }
        }
        lex
    }

    /// Linear-scan lookup.
    pub fn labels_for(&self, word: &str) -> BTreeSet<String> {
        let word = word.to_lowercase();
        self.entries
            .iter()
            .filter(|(pattern, _, is_prefix)| {
                let pattern = pattern.to_lowercase();
                if *is_prefix {
                    word.starts_with(&pattern)
                } else {
                    word == pattern
                }
            })
            .map(|(_, label, _)| label.to_lowercase())
            .collect()
    }
}

pub struct Instance {
    pub rows: Vec<(String, Vec<f64>)>,
    pub lexicon: RawLexicon,
}

impl Instance {
    pub fn table(&self) -> NormalizedEmbeddingTable {
        let table = EmbeddingTable::new(self.rows.clone()).unwrap();
        NormalizedEmbeddingTable::from_normalized(table).unwrap()
    }

    pub fn dims(&self) -> usize {
        self.rows[0].1.len()
    }
}

/// Triple loop over dimensions, words and labels.
pub fn brute_force_counts(
    rows: &[(String, Vec<f64>)],
    lexicon: &RawLexicon,
    theta: f64,
) -> Vec<BTreeMap<String, usize>> {
    let dims = rows[0].1.len();
    let mut out = vec![BTreeMap::new(); dims];
    for (dim, counts) in out.iter_mut().enumerate() {
        for (word, values) in rows {
            let v = values[dim];
            let passes = v > theta || v < 1.0 - theta;
            if !passes {
                continue;
            }
            for label in lexicon.labels_for(word) {
                *counts.entry(label).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Values that hit band edges for the thetas used in tests, plus the
/// range ends.
const SPECIAL_VALUES: [f64; 12] = [
    0.0, 1.0, 0.5, 0.25, 0.75, 0.1, 0.9, 0.4, 0.6, 0.19, 0.81, 0.21,
];

fn random_word<R: Rng>(rng: &mut R) -> String {
    let len = rng.gen_range(1..=4);
    (0..len)
        .map(|_| *b"abcd".choose(rng).unwrap() as char)
        .collect()
}

pub fn random_instance<R: Rng>(rng: &mut R, max_words: usize, max_dims: usize) -> Instance {
    let dims = rng.gen_range(1..=max_dims);
    let target = rng.gen_range(1..=max_words);
    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for _ in 0..target * 4 {
        if rows.len() == target {
            break;
        }
        let word = random_word(rng);
        if !seen.insert(word.clone()) {
            continue;
        }
        let values = (0..dims)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    *SPECIAL_VALUES.choose(rng).unwrap()
                } else {
                    rng.gen::<f64>()
                }
            })
            .collect();
        rows.push((word, values));
    }
    Instance {
        rows,
        lexicon: random_lexicon(rng, "rand"),
    }
}

pub fn random_lexicon<R: Rng>(rng: &mut R, name: &str) -> RawLexicon {
    let n = rng.gen_range(0..=12);
    let entries = (0..n)
        .map(|_| {
            let pattern = random_word(rng);
            let label = format!("l{}", rng.gen_range(0..6));
            let is_prefix = rng.gen_bool(0.3);
            (pattern, label, is_prefix)
        })
        .collect();
    RawLexicon {
        name: name.to_owned(),
        entries,
    }
}

/// Raw (unnormalized) gaussian-ish table with distinct words.
pub fn random_raw_table<R: Rng>(rng: &mut R, words: usize, dims: usize) -> EmbeddingTable {
    let rows = (0..words).map(|i| {
        let v = (0..dims)
            .map(|_| rng.gen_range(-3.0..3.0))
            .collect::<Vec<f64>>();
        (format!("w{i}"), v)
    });
    EmbeddingTable::new(rows).unwrap()
}
