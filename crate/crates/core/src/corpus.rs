//! Co-occurrence samples: `(head, slot, value)` triples with counts, test
//! quadruples, word normalization, and per-class counts over a taxonomy.

use crate::taxonomy::{NodeId, Taxonomy, TaxonomyError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Value word to occurrence count.
pub type ValueCounts = BTreeMap<String, u64>;

/// The head of a co-occurrence together with its case slot, e.g. `(fly, subj)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeadKey {
    pub head: String,
    pub slot: String,
}

impl HeadKey {
    pub fn new(head: impl Into<String>, slot: impl Into<String>) -> Self {
        HeadKey {
            head: head.into(),
            slot: slot.into(),
        }
    }
}

impl fmt::Display for HeadKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.head, self.slot)
    }
}

/// Multiset of `(value, head-key)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSample {
    records: BTreeMap<HeadKey, ValueCounts>,
    total: u64,
}

impl PairSample {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: HeadKey, value: impl Into<String>, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .records
            .entry(key)
            .or_default()
            .entry(value.into())
            .or_insert(0) += count;
        self.total += count;
    }

    /// `|S|`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn heads(&self) -> impl Iterator<Item = &HeadKey> {
        self.records.keys()
    }

    pub fn slots(&self) -> Vec<&str> {
        let mut slots: Vec<&str> = self.records.keys().map(|k| k.slot.as_str()).collect();
        slots.dedup();
        slots.sort_unstable();
        slots.dedup();
        slots
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HeadKey, &str, u64)> {
        self.records
            .iter()
            .flat_map(|(k, vs)| vs.iter().map(move |(v, &c)| (k, v.as_str(), c)))
    }

    /// Multiset of values regardless of head.
    pub fn project_values(&self) -> ValueCounts {
        let mut out = ValueCounts::new();
        for counts in self.records.values() {
            for (v, &c) in counts {
                *out.entry(v.clone()).or_insert(0) += c;
            }
        }
        out
    }

    pub fn slice_by_head(&self, key: &HeadKey) -> HeadSlice {
        match self.records.get(key) {
            Some(counts) => HeadSlice::new(key.clone(), counts.clone()),
            None => HeadSlice::new(key.clone(), ValueCounts::new()),
        }
    }

    /// Sub-sample restricted to one case slot.
    pub fn for_slot(&self, slot: &str) -> PairSample {
        self.filter(|k, _| k.slot == slot)
    }

    /// Value words that are not leaves of `t`, with their total counts.
    pub fn unknown_values(&self, t: &Taxonomy) -> ValueCounts {
        let mut out = ValueCounts::new();
        for (_, v, c) in self.iter() {
            if t.leaf(v).is_none() {
                *out.entry(v.to_string()).or_insert(0) += c;
            }
        }
        out
    }

    /// Sub-sample whose values are all leaves of `t`.
    pub fn known_only(&self, t: &Taxonomy) -> PairSample {
        self.filter(|_, v| t.leaf(v).is_some())
    }

    fn filter(&self, keep: impl Fn(&HeadKey, &str) -> bool) -> PairSample {
        let mut out = PairSample::new();
        for (k, v, c) in self.iter() {
            if keep(k, v) {
                out.add(k.clone(), v, c);
            }
        }
        out
    }
}

/// The part of a sample belonging to one head-key, `S_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadSlice {
    pub key: HeadKey,
    pub counts: ValueCounts,
    size: u64,
}

impl HeadSlice {
    pub fn new(key: HeadKey, counts: ValueCounts) -> Self {
        let size = counts.values().sum();
        HeadSlice { key, counts, size }
    }

    /// `|S_v|`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }
}

/// Occurrence counts of every node's class, `#(C, S)`, for one sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCounts {
    per_node: Vec<u64>,
    unknown: u64,
}

impl ClassCounts {
    /// Aggregates leaf counts up the tree. Words that are not leaves of `t`
    /// are skipped and reported by [`ClassCounts::unknown`].
    pub fn new(t: &Taxonomy, counts: &ValueCounts) -> Self {
        let mut per_node = vec![0u64; t.len()];
        let mut unknown = 0;
        for (word, &c) in counts {
            match t.leaf(word) {
                Some(leaf) => per_node[leaf.index()] += c,
                None => unknown += c,
            }
        }
        for &id in t.preorder().iter().rev() {
            if let Some(p) = t.parent(id) {
                per_node[p.index()] += per_node[id.index()];
            }
        }
        ClassCounts { per_node, unknown }
    }

    /// Counts given directly per leaf, in [`Taxonomy::leaves`] order.
    pub fn from_leaf_counts(t: &Taxonomy, leaf_counts: &[u64]) -> Self {
        assert_eq!(leaf_counts.len(), t.num_leaves(), "one count per leaf");
        let mut per_node = vec![0u64; t.len()];
        for (&leaf, &c) in t.leaves().iter().zip(leaf_counts) {
            per_node[leaf.index()] = c;
        }
        for &id in t.preorder().iter().rev() {
            if let Some(p) = t.parent(id) {
                per_node[p.index()] += per_node[id.index()];
            }
        }
        ClassCounts {
            per_node,
            unknown: 0,
        }
    }

    #[inline]
    pub fn get(&self, id: NodeId) -> u64 {
        self.per_node[id.index()]
    }

    /// Count of the root class, i.e. all known occurrences.
    pub fn total(&self, t: &Taxonomy) -> u64 {
        self.per_node[t.root().index()]
    }

    pub fn unknown(&self) -> u64 {
        self.unknown
    }
}

/// `#(C, S)` for a single node: the summed counts of the leaves under it.
pub fn class_count(t: &Taxonomy, node: NodeId, counts: &ValueCounts) -> Result<u64, TaxonomyError> {
    Ok(t.leaves_under(node)?
        .iter()
        .map(|&l| counts.get(t.label(l)).copied().unwrap_or(0))
        .sum())
}

/// Reads `head<TAB>slot<TAB>value[<TAB>count]` lines. Blank lines and lines
/// starting with `#` are skipped; repeated triples are merged.
pub fn ingest_triples<R: BufRead>(reader: R) -> Result<PairSample, CorpusError> {
    ingest_triples_with(reader, |w| w.to_string())
}

/// Like [`ingest_triples`], normalizing head and value words with `normalize`.
pub fn ingest_triples_with<R: BufRead>(
    reader: R,
    normalize: impl Fn(&str) -> String,
) -> Result<PairSample, CorpusError> {
    let mut sample = PairSample::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        let malformed = |message: String| CorpusError::Malformed {
            line: lineno,
            message,
        };
        let count = match fields.len() {
            3 => 1,
            4 => fields[3].trim().parse::<u64>().map_err(|_| {
                malformed(format!(
                    "count {:?} is not a nonnegative integer",
                    fields[3]
                ))
            })?,
            n => {
                return Err(malformed(format!(
                    "expected 3 or 4 tab-separated fields, found {n}"
                )))
            }
        };
        if let Some(empty) = fields[..3].iter().position(|f| f.trim().is_empty()) {
            return Err(malformed(format!("field {} is empty", empty + 1)));
        }
        let key = HeadKey::new(normalize(fields[0].trim()), fields[1].trim());
        sample.add(key, normalize(fields[2].trim()), count);
    }
    Ok(sample)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attachment {
    Verb,
    Noun,
}

impl Attachment {
    pub fn code(self) -> char {
        match self {
            Attachment::Verb => 'V',
            Attachment::Noun => 'N',
        }
    }
}

/// `(verb, noun1, prep, noun2)` with the correct attachment site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestQuadruple {
    pub verb: String,
    pub noun1: String,
    pub prep: String,
    pub noun2: String,
    pub gold: Attachment,
}

impl TestQuadruple {
    pub fn verb_key(&self) -> HeadKey {
        HeadKey::new(self.verb.clone(), self.prep.clone())
    }

    pub fn noun_key(&self) -> HeadKey {
        HeadKey::new(self.noun1.clone(), self.prep.clone())
    }
}

/// Reads `verb<TAB>noun1<TAB>prep<TAB>noun2<TAB>gold` lines, gold in {V, N}.
pub fn read_quadruples<R: BufRead>(reader: R) -> Result<Vec<TestQuadruple>, CorpusError> {
    read_quadruples_with(reader, |w| w.to_string())
}

pub fn read_quadruples_with<R: BufRead>(
    reader: R,
    normalize: impl Fn(&str) -> String,
) -> Result<Vec<TestQuadruple>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let malformed = |message: String| CorpusError::Malformed {
            line: i + 1,
            message,
        };
        let f: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        if f.len() != 5 {
            return Err(malformed(format!(
                "expected 5 tab-separated fields, found {}",
                f.len()
            )));
        }
        if let Some(empty) = f[..4].iter().position(|s| s.is_empty()) {
            return Err(malformed(format!("field {} is empty", empty + 1)));
        }
        let gold = match f[4] {
            "V" | "v" => Attachment::Verb,
            "N" | "n" => Attachment::Noun,
            other => return Err(malformed(format!("gold label {other:?} is not V or N"))),
        };
        out.push(TestQuadruple {
            verb: normalize(f[0]),
            noun1: normalize(f[1]),
            prep: f[2].to_string(),
            noun2: normalize(f[3]),
            gold,
        });
    }
    Ok(out)
}

/// Reduces an inflected form to its stem.
pub trait Stemmer: Send + Sync {
    fn stem(&self, word: &str) -> String;
}

/// Leaves words untouched.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityStemmer;

impl Stemmer for IdentityStemmer {
    fn stem(&self, word: &str) -> String {
        word.to_string()
    }
}

fn is_numeral(w: &str) -> bool {
    let mut digits = 0;
    let mut prev_sep = true;
    for c in w.chars() {
        match c {
            '0'..='9' => {
                digits += 1;
                prev_sep = false;
            }
            '.' | ',' if !prev_sep => prev_sep = true,
            _ => return false,
        }
    }
    digits > 0 && !prev_sep
}

/// Integers 1900..=2999 become `year`, other numerals `number`, everything
/// else goes through the stemmer.
pub fn preprocess_word(word: &str, stemmer: &dyn Stemmer) -> String {
    if word.len() == 4 && word.bytes().all(|b| b.is_ascii_digit()) {
        let n: u32 = word.parse().expect("four ascii digits");
        if (1900..=2999).contains(&n) {
            return "year".to_string();
        }
    }
    if is_numeral(word) {
        return "number".to_string();
    }
    stemmer.stem(word)
}

/// Shuffles `0..n` with `seed` and deals the indices into `k` folds whose
/// sizes differ by at most one.
pub fn fold_indices(n: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let k = k.max(1);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![Vec::with_capacity(n / k + 1); k];
    for (i, x) in idx.into_iter().enumerate() {
        folds[i % k].push(x);
    }
    folds
}
