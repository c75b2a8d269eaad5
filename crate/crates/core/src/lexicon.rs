//! Lexical resources mapping words to labels.
//!
//! Three on-disk layouts are understood:
//!
//! - NRC: `word<TAB>label<TAB>flag` with flag `0` or `1`;
//! - LIWC `.dic`: a `%`-delimited category section (`id<TAB>name`) followed
//!   by `word<TAB>id[<TAB>id...]` lines, where a trailing `*` on the word
//!   makes it a prefix pattern;
//! - plain: `word<TAB>label`.
//!
//! Words and labels are lowercased on load, and query words are lowercased
//! on lookup. Queries are always matched literally.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Index of an interned label inside a [`Lexicon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(u32);

impl LabelId {
    pub(crate) fn from_index(idx: usize) -> Self {
        LabelId(idx as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexiconFormat {
    Nrc,
    Liwc,
    Plain,
}

impl FromStr for LexiconFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "nrc" => Ok(LexiconFormat::Nrc),
            "liwc" => Ok(LexiconFormat::Liwc),
            "plain" => Ok(LexiconFormat::Plain),
            other => Err(format!(
                "unknown lexicon format `{other}` (expected nrc, liwc or plain)"
            )),
        }
    }
}

impl fmt::Display for LexiconFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LexiconFormat::Nrc => "nrc",
            LexiconFormat::Liwc => "liwc",
            LexiconFormat::Plain => "plain",
        })
    }
}

#[derive(Clone, Debug, Default)]
struct TrieNode {
    children: HashMap<char, usize>,
    entry: Option<usize>,
}

/// Character trie over prefix patterns. Each terminal node points at an
/// index into the lexicon's prefix entry list.
#[derive(Clone, Debug)]
struct PrefixTrie {
    nodes: Vec<TrieNode>,
}

impl Default for PrefixTrie {
    fn default() -> Self {
        PrefixTrie {
            nodes: vec![TrieNode::default()],
        }
    }
}

impl PrefixTrie {
    fn get(&self, key: &str) -> Option<usize> {
        let mut node = 0;
        for c in key.chars() {
            node = *self.nodes[node].children.get(&c)?;
        }
        self.nodes[node].entry
    }

    fn insert(&mut self, key: &str, entry: usize) {
        let mut node = 0;
        for c in key.chars() {
            node = match self.nodes[node].children.get(&c) {
                Some(&next) => next,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(TrieNode::default());
                    self.nodes[node].children.insert(c, next);
                    next
                }
            };
        }
        self.nodes[node].entry = Some(entry);
    }

    /// Entries whose key is a prefix of `word`, shortest first.
    fn matches<'a>(&'a self, word: &'a str) -> impl Iterator<Item = usize> + 'a {
        let mut node = 0;
        word.chars()
            .map_while(move |c| {
                node = *self.nodes[node].children.get(&c)?;
                Some(self.nodes[node].entry)
            })
            .flatten()
    }
}

#[derive(Clone, Debug)]
struct PrefixEntry {
    prefix: String,
    labels: Vec<LabelId>,
}

/// A lexical resource: exact word entries plus prefix patterns, each
/// carrying a non-empty set of labels.
#[derive(Clone, Debug)]
pub struct Lexicon {
    name: String,
    labels: Vec<String>,
    label_ids: HashMap<String, LabelId>,
    exact: HashMap<String, Vec<LabelId>>,
    prefixes: Vec<PrefixEntry>,
    trie: PrefixTrie,
}

impl Lexicon {
    pub fn new(name: impl Into<String>) -> Self {
        Lexicon {
            name: name.into(),
            labels: Vec::new(),
            label_ids: HashMap::new(),
            exact: HashMap::new(),
            prefixes: Vec::new(),
            trie: PrefixTrie::default(),
        }
    }

    /// Resource name, e.g. `liwc` or `nrc`.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Number of distinct interned labels.
    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, id: LabelId) -> &str {
        &self.labels[id.index()]
    }

    /// Number of stored (pattern, label) pairs.
    pub fn len(&self) -> usize {
        self.exact.values().map(Vec::len).sum::<usize>()
            + self.prefixes.iter().map(|p| p.labels.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty() && self.prefixes.is_empty()
    }

    /// Exact entries as `(word, labels)`, sorted by word.
    pub fn exact_entries(&self) -> Vec<(&str, BTreeSet<&str>)> {
        let mut entries: Vec<_> = self
            .exact
            .iter()
            .map(|(word, ids)| (word.as_str(), self.names(ids)))
            .collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(b.0));
        entries
    }

    /// Prefix entries as `(prefix, labels)` in insertion order.
    pub fn prefix_entries(&self) -> Vec<(&str, BTreeSet<&str>)> {
        self.prefixes
            .iter()
            .map(|p| (p.prefix.as_str(), self.names(&p.labels)))
            .collect()
    }

    fn names(&self, ids: &[LabelId]) -> BTreeSet<&str> {
        ids.iter().map(|&id| self.label(id)).collect()
    }

    fn intern(&mut self, label: &str) -> LabelId {
        if let Some(&id) = self.label_ids.get(label) {
            return id;
        }
        let id = LabelId(self.labels.len() as u32);
        self.labels.push(label.to_owned());
        self.label_ids.insert(label.to_owned(), id);
        id
    }

    /// Add `label` to the exact entry for `word`.
    pub fn insert_exact(&mut self, word: &str, label: &str) -> Result<()> {
        let word = clean_field("word", word)?;
        let label = clean_field("label", label)?;
        let id = self.intern(&label);
        let ids = self.exact.entry(word).or_default();
        if let Err(pos) = ids.binary_search(&id) {
            ids.insert(pos, id);
        }
        Ok(())
    }

    /// Add `label` to the prefix pattern `prefix` (given without the `*`).
    pub fn insert_prefix(&mut self, prefix: &str, label: &str) -> Result<()> {
        let prefix = clean_field("prefix", prefix)?;
        let label = clean_field("label", label)?;
        let id = self.intern(&label);
        let entry = match self.trie.get(&prefix) {
            Some(entry) => entry,
            None => {
                let entry = self.prefixes.len();
                self.trie.insert(&prefix, entry);
                self.prefixes.push(PrefixEntry {
                    prefix,
                    labels: Vec::new(),
                });
                entry
            }
        };
        let ids = &mut self.prefixes[entry].labels;
        if let Err(pos) = ids.binary_search(&id) {
            ids.insert(pos, id);
        }
        Ok(())
    }

    /// Labels for `word`: the exact entry united with every prefix pattern
    /// that `word` starts with.
    pub fn lookup(&self, word: &str) -> BTreeSet<&str> {
        self.lookup_ids(word)
            .into_iter()
            .map(|id| self.label(id))
            .collect()
    }

    /// Same as [`Lexicon::lookup`] but returns interned ids, sorted and
    /// deduplicated.
    pub fn lookup_ids(&self, word: &str) -> Vec<LabelId> {
        let word = word.to_lowercase();
        let mut ids: Vec<LabelId> = self.exact.get(&word).cloned().unwrap_or_default();
        for entry in self.trie.matches(&word) {
            ids.extend_from_slice(&self.prefixes[entry].labels);
        }
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Combine several lexicons into one whose name joins theirs with `+`.
    pub fn merged<'a>(lexicons: impl IntoIterator<Item = &'a Lexicon>) -> Lexicon {
        let mut out = Lexicon::new("");
        let mut names = Vec::new();
        for lex in lexicons {
            names.push(lex.name.clone());
            for (word, labels) in lex.exact_entries() {
                for label in labels {
                    out.insert_exact(word, label)
                        .expect("entries of a loaded lexicon are valid");
                }
            }
            for (prefix, labels) in lex.prefix_entries() {
                for label in labels {
                    out.insert_prefix(prefix, label)
                        .expect("entries of a loaded lexicon are valid");
                }
            }
        }
        out.name = names.join("+");
        out
    }

    /// Write the lexicon as a LIWC-style `.dic`, which can hold both exact
    /// and prefix entries. Category ids are assigned in label order.
    pub fn write_dic<W: Write>(&self, mut writer: W) -> Result<()> {
        let mut sorted: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        sorted.sort_unstable();
        let ids: HashMap<&str, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, l)| (*l, i + 1))
            .collect();

        writeln!(writer, "%")?;
        for (i, label) in sorted.iter().enumerate() {
            writeln!(writer, "{}\t{label}", i + 1)?;
        }
        writeln!(writer, "%")?;

        let mut rows: Vec<(String, BTreeSet<&str>)> = self
            .exact_entries()
            .into_iter()
            .map(|(w, l)| (w.to_owned(), l))
            .collect();
        rows.extend(
            self.prefix_entries()
                .into_iter()
                .map(|(p, l)| (format!("{p}*"), l)),
        );
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        for (pattern, labels) in rows {
            write!(writer, "{pattern}")?;
            for label in labels {
                write!(writer, "\t{}", ids[label])?;
            }
            writeln!(writer)?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn clean_field(what: &str, value: &str) -> Result<String> {
    if value.is_empty() {
        return Err(Error::InvalidEntry(format!("empty {what}")));
    }
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::InvalidEntry(format!(
            "{what} `{}` contains a tab or newline",
            value.escape_debug()
        )));
    }
    Ok(value.to_lowercase())
}

/// Iterate non-blank lines as `(line_number, line)` with trailing
/// whitespace removed.
fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| match line {
            Ok(line) => {
                let trimmed = line.trim_end();
                if trimmed.trim_start().is_empty() {
                    None
                } else {
                    Some(Ok((idx + 1, trimmed.to_owned())))
                }
            }
            Err(e) => Some(Err(e.into())),
        })
}

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedLexiconLine {
        line,
        reason: reason.into(),
    }
}

fn entry_error(line: usize, err: Error) -> Error {
    match err {
        Error::InvalidEntry(reason) => malformed(line, reason),
        other => other,
    }
}

/// Load a lexicon from `reader` in the given layout.
pub fn load<R: BufRead>(reader: R, format: LexiconFormat) -> Result<Lexicon> {
    match format {
        LexiconFormat::Nrc => load_nrc(reader),
        LexiconFormat::Liwc => load_liwc(reader),
        LexiconFormat::Plain => load_plain(reader),
    }
}

/// Load an NRC-style `word<TAB>label<TAB>flag` file. Only flag `1` lines
/// produce entries.
pub fn load_nrc<R: BufRead>(reader: R) -> Result<Lexicon> {
    let mut lex = Lexicon::new("nrc");
    for item in content_lines(reader) {
        let (line_no, line) = item?;
        let fields: Vec<&str> = line.split('\t').collect();
        let [word, label, flag] = fields[..] else {
            return Err(malformed(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        };
        match flag.trim() {
            "1" => lex
                .insert_exact(word.trim(), label.trim())
                .map_err(|e| entry_error(line_no, e))?,
            "0" => {}
            other => return Err(malformed(line_no, format!("flag `{other}` is not 0 or 1"))),
        }
    }
    Ok(lex)
}

/// Load a plain `word<TAB>label` file of exact entries.
pub fn load_plain<R: BufRead>(reader: R) -> Result<Lexicon> {
    let mut lex = Lexicon::new("plain");
    for item in content_lines(reader) {
        let (line_no, line) = item?;
        let fields: Vec<&str> = line.split('\t').collect();
        let [word, label] = fields[..] else {
            return Err(malformed(
                line_no,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        };
        lex.insert_exact(word.trim(), label.trim())
            .map_err(|e| entry_error(line_no, e))?;
    }
    Ok(lex)
}

/// Load a LIWC-style `.dic` file.
pub fn load_liwc<R: BufRead>(reader: R) -> Result<Lexicon> {
    let mut lines = content_lines(reader);

    match lines.next().transpose()? {
        Some((_, line)) if line.trim() == "%" => {}
        _ => return Err(Error::MissingDelimiter),
    }

    let mut categories: HashMap<String, String> = HashMap::new();
    let mut closed = false;
    for item in lines.by_ref() {
        let (line_no, line) = item?;
        if line.trim() == "%" {
            closed = true;
            break;
        }
        let fields: Vec<&str> = line.split('\t').filter(|f| !f.trim().is_empty()).collect();
        let [id, name] = fields[..] else {
            return Err(malformed(line_no, "expected `id<TAB>category` in header"));
        };
        let name = clean_field("category", name.trim()).map_err(|e| entry_error(line_no, e))?;
        if categories.insert(id.trim().to_owned(), name).is_some() {
            return Err(malformed(
                line_no,
                format!("category id `{}` declared twice", id.trim()),
            ));
        }
    }
    if !closed {
        return Err(Error::MissingDelimiter);
    }

    let mut lex = Lexicon::new("liwc");
    for item in lines {
        let (line_no, line) = item?;
        let mut fields = line.split('\t').map(str::trim).filter(|f| !f.is_empty());
        let pattern = fields.next().expect("line is not blank");
        let ids: Vec<&str> = fields.collect();
        if ids.is_empty() {
            return Err(malformed(
                line_no,
                format!("`{pattern}` has no category ids"),
            ));
        }
        for id in ids {
            let label = categories.get(id).ok_or_else(|| Error::UnknownCategoryId {
                line: line_no,
                id: id.to_owned(),
            })?;
            let inserted = match pattern.strip_suffix('*') {
                Some(prefix) => lex.insert_prefix(prefix, label),
                None => lex.insert_exact(pattern, label),
            };
            inserted.map_err(|e| entry_error(line_no, e))?;
        }
    }
    Ok(lex)
}
