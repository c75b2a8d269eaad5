//! # lex2vec
//!
//! Give word-embedding dimensions human-readable names by joining the
//! vocabulary against a lexical resource such as LIWC or NRC.
//!
//! The pipeline is:
//!
//! 1. [`embedding::parse_embeddings`] reads Word2Vec or GloVe text vectors;
//! 2. [`embedding::normalize`] scales every dimension into `[0, 1]`;
//! 3. [`lexicon::load`] reads a lexicon;
//! 4. [`labeler::label_dimensions`] attaches a word's labels to every
//!    dimension where its value is above `theta` or below `1 - theta`;
//! 5. [`metrics`] summarizes how many dimensions stay unnamed and how many
//!    labels the named ones carry, optionally over a grid of thetas.
//!
//! ```
//! use lex2vec::embedding::{normalize, parse_embeddings, EmbeddingFormat};
//! use lex2vec::labeler::{label_dimensions, Theta};
//! use lex2vec::lexicon::load_nrc;
//!
//! let vectors = "good 2.0 -1.0\nbad -2.0 0.0\ntable 0.0 1.0\n";
//! let table = parse_embeddings(vectors.as_bytes(), EmbeddingFormat::Auto).unwrap();
//! let table = normalize(&table).unwrap();
//! let lexicon = load_nrc("good\tpositive\t1\nbad\tnegative\t1\n".as_bytes()).unwrap();
//!
//! let labeling = label_dimensions(&table, &lexicon, Theta::new(0.75).unwrap(), false).unwrap();
//! assert_eq!(labeling.rendered_name(0).as_deref(), Some("negative+positive"));
//! assert_eq!(labeling.rendered_name(1).as_deref(), Some("positive"));
//! ```

pub mod cli;
pub mod embedding;
pub mod error;
pub mod labeler;
pub mod lexicon;
pub mod metrics;
pub mod report;

pub use embedding::{EmbeddingFormat, EmbeddingTable, NormalizedEmbeddingTable};
pub use error::{Error, Result};
pub use labeler::{DimensionLabeling, Theta};
pub use lexicon::Lexicon;
pub use metrics::{SweepReport, SweepRow};
