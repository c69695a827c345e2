//! Similarity statistics shared by the semantic labeler and the
//! relationship-disambiguation features: token utilities, Jaccard and TF-IDF
//! cosine for textual data, two-sample Kolmogorov-Smirnov and Mann-Whitney
//! statistics for numeric data.

use std::collections::{BTreeMap, BTreeSet};

/// Lowercase tokens split on non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// Identifier tokens: splits camelCase and snake_case, lowercases.
/// `birthDate` -> ["birth", "date"].
pub fn split_identifier(name: &str) -> Vec<String> {
    let mut spaced = String::with_capacity(name.len() + 8);
    let chars: Vec<char> = name.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_uppercase() && i > 0 && chars[i - 1].is_lowercase() {
            spaced.push(' ');
        }
        spaced.push(c);
    }
    tokenize(&spaced)
}

pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let inter = a.intersection(b).count() as f64;
    let union = a.union(b).count() as f64;
    inter / union
}

/// Fraction of non-empty cells that parse as numbers; columns at or above
/// 0.8 are treated as numeric.
pub fn numeric_fraction(values: &[String]) -> f64 {
    let non_empty: Vec<&String> = values.iter().filter(|v| !v.trim().is_empty()).collect();
    if non_empty.is_empty() {
        return 0.0;
    }
    let numeric = non_empty
        .iter()
        .filter(|v| v.trim().parse::<f64>().is_ok())
        .count();
    numeric as f64 / non_empty.len() as f64
}

pub fn is_numeric_column(values: &[String]) -> bool {
    numeric_fraction(values) >= 0.8
}

pub fn parse_numeric(values: &[String]) -> Vec<f64> {
    values
        .iter()
        .filter_map(|v| v.trim().parse::<f64>().ok())
        .collect()
}

/// Two-sample Kolmogorov-Smirnov statistic: the maximum distance between the
/// empirical CDFs, in [0, 1].
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 1.0;
    }
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
    ys.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
    let (nx, ny) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut max_diff = 0.0_f64;
    while i < xs.len() && j < ys.len() {
        let step = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= step {
            i += 1;
        }
        while j < ys.len() && ys[j] <= step {
            j += 1;
        }
        let diff = (i as f64 / nx - j as f64 / ny).abs();
        max_diff = max_diff.max(diff);
    }
    // One sample exhausted: the remaining gap is the tail difference.
    let tail = (i as f64 / nx - j as f64 / ny).abs();
    max_diff.max(tail)
}

/// Two-sample Mann-Whitney statistic normalized to [0, 1]: U / (n1 * n2),
/// counting ties as one half.
pub fn mann_whitney_statistic(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.5;
    }
    let mut u = 0.0_f64;
    for &x in a {
        for &y in b {
            if x > y {
                u += 1.0;
            } else if (x - y).abs() < f64::EPSILON {
                u += 0.5;
            }
        }
    }
    u / (a.len() as f64 * b.len() as f64)
}

// ---------------------------------------------------------------------------
// TF-IDF cosine over token documents
// ---------------------------------------------------------------------------

/// A corpus of token documents with smoothed inverse document frequencies.
#[derive(Debug, Clone)]
pub struct TfIdfIndex {
    idf: BTreeMap<String, f64>,
    docs: Vec<BTreeMap<String, f64>>,
}

impl TfIdfIndex {
    pub fn build(documents: &[Vec<String>]) -> TfIdfIndex {
        let n = documents.len();
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in documents {
            let distinct: BTreeSet<&String> = doc.iter().collect();
            for t in distinct {
                *df.entry(t.clone()).or_insert(0) += 1;
            }
        }
        let idf: BTreeMap<String, f64> = df
            .into_iter()
            .map(|(t, d)| {
                let v = ((1.0 + n as f64) / (1.0 + d as f64)).ln() + 1.0;
                (t, v)
            })
            .collect();
        let docs = documents.iter().map(|doc| Self::weigh(doc, &idf)).collect();
        TfIdfIndex { idf, docs }
    }

    fn weigh(tokens: &[String], idf: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
        let mut tf: BTreeMap<String, f64> = BTreeMap::new();
        for t in tokens {
            *tf.entry(t.clone()).or_insert(0.0) += 1.0;
        }
        let default_idf = 2.0f64.ln() + 1.0;
        for (t, w) in tf.iter_mut() {
            *w *= idf.get(t).copied().unwrap_or(default_idf);
        }
        tf
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    /// Cosine similarity between a query token list and document `i`.
    pub fn cosine_with_doc(&self, query: &[String], i: usize) -> f64 {
        let q = Self::weigh(query, &self.idf);
        cosine(&q, &self.docs[i])
    }
}

fn cosine(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let dot: f64 = a.iter().filter_map(|(t, w)| b.get(t).map(|v| w * v)).sum();
    let na: f64 = a.values().map(|w| w * w).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|w| w * w).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na * nb)
}

/// Cosine over plain term-frequency vectors; used where the corpus is too
/// small for meaningful document frequencies.
pub fn tf_cosine(a: &[String], b: &[String]) -> f64 {
    let count = |tokens: &[String]| {
        let mut m: BTreeMap<String, f64> = BTreeMap::new();
        for t in tokens {
            *m.entry(t.clone()).or_insert(0.0) += 1.0;
        }
        m
    };
    cosine(&count(a), &count(b))
}
