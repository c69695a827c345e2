//! Semantic labeling: trains per-type value statistics from annotated
//! sources and predicts ranked candidate semantic types with confidence
//! scores for new columns.
//!
//! Textual columns are scored with max(TF-IDF cosine, Jaccard) against each
//! trained type's pooled values; numeric columns with 1 - KS statistic.
//! Scores are normalized over all trained types so downstream ratio rules
//! are scale-free.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SourceDescription;
use crate::stats;

/// A (class, data-property) annotation for one source column.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemanticType {
    pub class: String,
    pub property: String,
}

impl SemanticType {
    pub fn new(class: &str, property: &str) -> SemanticType {
        SemanticType { class: class.to_string(), property: property.to_string() }
    }

    pub fn display(&self) -> String {
        format!("{}#{}", self.class, self.property)
    }
}

/// Ranked candidate types for one column, descending by confidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateTypeSet {
    pub column: String,
    pub candidates: Vec<(SemanticType, f64)>,
}

impl CandidateTypeSet {
    pub fn top(&self) -> Option<&(SemanticType, f64)> {
        self.candidates.first()
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct TypeProfile {
    /// Distinct values pooled over all training columns of this type.
    values: BTreeSet<String>,
    /// All value tokens, pooled (multiset).
    tokens: Vec<String>,
    /// Parsed samples from numeric training columns.
    numeric: Vec<f64>,
    columns_seen: usize,
}

/// Trained semantic labeler. Immutable after training; predictions are
/// independent and side-effect free.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Labeler {
    profiles: BTreeMap<SemanticType, TypeProfile>,
}

impl Labeler {
    pub fn types(&self) -> impl Iterator<Item = &SemanticType> {
        self.profiles.keys()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Labeler> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// The semantic type of a column as recorded by its description's model.
pub fn column_semantic_type(desc: &SourceDescription, attribute: &str) -> Result<SemanticType> {
    let edge = desc.model.data_edge_of_attribute(attribute).ok_or_else(|| {
        Error::Labeling(format!(
            "column '{}' of source '{}' has no data edge in the model",
            attribute, desc.source.name
        ))
    })?;
    let class_node = desc.model.class_node(&edge.src).ok_or_else(|| {
        Error::Labeling(format!("data edge of '{attribute}' has no class node"))
    })?;
    Ok(SemanticType::new(&class_node.class, &edge.label))
}

pub fn train_labeler(training: &[SourceDescription]) -> Result<Labeler> {
    if training.is_empty() {
        return Err(Error::Labeling("training set is empty".to_string()));
    }
    let mut profiles: BTreeMap<SemanticType, TypeProfile> = BTreeMap::new();
    for desc in training {
        for column in &desc.source.columns {
            let ty = column_semantic_type(desc, &column.attribute)?;
            let profile = profiles.entry(ty).or_default();
            profile.columns_seen += 1;
            for v in &column.values {
                let v = v.trim();
                if v.is_empty() {
                    continue;
                }
                profile.values.insert(v.to_string());
                profile.tokens.extend(stats::tokenize(v));
            }
            if stats::is_numeric_column(&column.values) {
                profile.numeric.extend(stats::parse_numeric(&column.values));
            }
        }
    }
    Ok(Labeler { profiles })
}

/// Top-k candidate types for a column, scored and normalized. Ties break by
/// type name for determinism; zero-score types are not reported.
pub fn predict_types(
    labeler: &Labeler,
    column_name: &str,
    values: &[String],
    k: usize,
) -> Result<CandidateTypeSet> {
    if labeler.profiles.is_empty() {
        return Err(Error::Labeling("labeler has no trained types".to_string()));
    }
    let numeric_query = stats::is_numeric_column(values);
    let query_numbers = if numeric_query { stats::parse_numeric(values) } else { Vec::new() };
    let query_values: BTreeSet<String> = values
        .iter()
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    let query_tokens: Vec<String> = values.iter().flat_map(|v| stats::tokenize(v)).collect();

    // TF-IDF corpus: one document per trained type.
    let type_list: Vec<&SemanticType> = labeler.profiles.keys().collect();
    let documents: Vec<Vec<String>> = type_list
        .iter()
        .map(|t| labeler.profiles[*t].tokens.clone())
        .collect();
    let index = stats::TfIdfIndex::build(&documents);

    let mut scored: Vec<(SemanticType, f64)> = Vec::new();
    for (i, ty) in type_list.iter().enumerate() {
        let profile = &labeler.profiles[*ty];
        let score = if numeric_query && !profile.numeric.is_empty() {
            1.0 - stats::ks_statistic(&query_numbers, &profile.numeric)
        } else {
            let j = stats::jaccard(&query_values, &profile.values);
            let c = index.cosine_with_doc(&query_tokens, i);
            j.max(c)
        };
        if score > 0.0 {
            scored.push(((*ty).clone(), score));
        }
    }
    let total: f64 = scored.iter().map(|(_, s)| s).sum();
    if total > 0.0 {
        for (_, s) in scored.iter_mut() {
            *s /= total;
        }
    }
    scored.sort_by(|(ta, sa), (tb, sb)| {
        sb.partial_cmp(sa).unwrap_or(std::cmp::Ordering::Equal).then_with(|| ta.cmp(tb))
    });
    scored.truncate(k);
    Ok(CandidateTypeSet { column: column_name.to_string(), candidates: scored })
}

/// Mean reciprocal rank of the gold type within each prediction's candidates;
/// a miss contributes zero.
pub fn mrr(predictions: &[CandidateTypeSet], gold: &[SemanticType]) -> Result<f64> {
    if predictions.len() != gold.len() {
        return Err(Error::Labeling(format!(
            "mrr: {} predictions vs {} gold labels",
            predictions.len(),
            gold.len()
        )));
    }
    if predictions.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (pred, g) in predictions.iter().zip(gold) {
        if let Some(rank) = pred.candidates.iter().position(|(t, _)| t == g) {
            total += 1.0 / (rank as f64 + 1.0);
        }
    }
    Ok(total / predictions.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EdgeKind, SemanticModel};
    use crate::source::{Column, SourceTable};

    fn desc_with_columns(name: &str, cols: &[(&str, &str, &[&str])]) -> SourceDescription {
        // cols: (attribute, class, values); each column typed (class, "label").
        let mut model = SemanticModel::new();
        let mut columns = Vec::new();
        for (attr, class, values) in cols {
            let node_id = format!("{class}1");
            if model.class_node(&node_id).is_none() {
                model.add_class_node(&node_id, class, 1).unwrap();
            }
            model.add_data_node(attr, attr).unwrap();
            model.add_edge(&node_id, "label", attr, EdgeKind::Data).unwrap();
            columns.push(Column {
                attribute: attr.to_string(),
                values: values.iter().map(|v| v.to_string()).collect(),
            });
        }
        // Chain the class nodes so the model is connected.
        let ids: Vec<String> = model.class_nodes().map(|c| c.id.clone()).collect();
        for w in ids.windows(2) {
            model.add_edge(&w[0], "rel", &w[1], EdgeKind::Object).unwrap();
        }
        let table = SourceTable::new(name, columns).unwrap();
        SourceDescription::new(table, model).unwrap()
    }

    #[test]
    fn labeler_covers_training_types() {
        let d1 = desc_with_columns(
            "s1",
            &[
                ("title", "E35", &["alpha", "beta"]),
                ("name", "E21", &["smith", "jones"]),
            ],
        );
        let d2 = desc_with_columns("s2", &[("title", "E35", &["alpha", "gamma"])]);
        let labeler = train_labeler(&[d1, d2]).unwrap();
        let types: Vec<String> = labeler.types().map(|t| t.display()).collect();
        assert_eq!(types, vec!["E21#label", "E35#label"]);
    }

    #[test]
    fn empty_training_rejected() {
        assert!(train_labeler(&[]).is_err());
    }

    #[test]
    fn training_column_ranks_its_own_type_first() {
        let d1 = desc_with_columns(
            "s1",
            &[
                ("title", "E35", &["alpha", "beta", "gamma"]),
                ("name", "E21", &["smith", "jones", "brown"]),
            ],
        );
        let labeler = train_labeler(std::slice::from_ref(&d1)).unwrap();
        let values: Vec<String> = vec!["alpha".into(), "beta".into(), "gamma".into()];
        let pred = predict_types(&labeler, "title", &values, 4).unwrap();
        assert_eq!(pred.top().unwrap().0, SemanticType::new("E35", "label"));
    }

    #[test]
    fn numeric_column_scored_by_ks() {
        let d1 = desc_with_columns(
            "s1",
            &[
                ("birth", "E67", &["1700", "1710", "1720", "1730"]),
                ("death", "E69", &["1800", "1810", "1820", "1830"]),
            ],
        );
        let labeler = train_labeler(std::slice::from_ref(&d1)).unwrap();
        let values: Vec<String> = vec!["1705".into(), "1715".into(), "1725".into()];
        let pred = predict_types(&labeler, "q", &values, 4).unwrap();
        assert_eq!(pred.top().unwrap().0.class, "E67");

        // Scores match an independently computed KS oracle before normalization.
        let birth: Vec<f64> = vec![1700.0, 1710.0, 1720.0, 1730.0];
        let death: Vec<f64> = vec![1800.0, 1810.0, 1820.0, 1830.0];
        let q: Vec<f64> = vec![1705.0, 1715.0, 1725.0];
        let s_birth = 1.0 - oracle_ks(&q, &birth);
        let s_death = 1.0 - oracle_ks(&q, &death);
        let expect_first = s_birth / (s_birth + s_death);
        let got = pred.top().unwrap().1;
        assert!((got - expect_first).abs() < 1e-9, "{got} vs {expect_first}");
    }

    /// Brute-force two-sample KS: evaluate both CDFs at every sample point.
    fn oracle_ks(a: &[f64], b: &[f64]) -> f64 {
        let cdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
        a.iter()
            .chain(b.iter())
            .map(|&x| (cdf(a, x) - cdf(b, x)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn confidence_invariant_under_permutation() {
        let d1 = desc_with_columns(
            "s1",
            &[
                ("title", "E35", &["alpha", "beta", "gamma"]),
                ("name", "E21", &["smith", "jones"]),
            ],
        );
        let labeler = train_labeler(std::slice::from_ref(&d1)).unwrap();
        let v1: Vec<String> = vec!["beta".into(), "alpha".into(), "delta".into()];
        let v2: Vec<String> = vec!["delta".into(), "beta".into(), "alpha".into()];
        let p1 = predict_types(&labeler, "q", &v1, 4).unwrap();
        let p2 = predict_types(&labeler, "q", &v2, 4).unwrap();
        assert_eq!(p1.candidates, p2.candidates);
    }

    #[test]
    fn mrr_values() {
        let t = SemanticType::new("A", "p");
        let u = SemanticType::new("B", "p");
        let pred = |ranked: Vec<SemanticType>| CandidateTypeSet {
            column: "c".into(),
            candidates: ranked.into_iter().map(|t| (t, 0.5)).collect(),
        };
        // All gold ranked first.
        let ps = vec![pred(vec![t.clone(), u.clone()]), pred(vec![u.clone(), t.clone()])];
        let gold = vec![t.clone(), u.clone()];
        assert_eq!(mrr(&ps, &gold).unwrap(), 1.0);
        // Ranks 1 and 2.
        let gold2 = vec![t.clone(), t.clone()];
        assert_eq!(mrr(&ps, &gold2).unwrap(), 0.75);
        // Length mismatch.
        assert!(mrr(&ps, &gold[..1]).is_err());
    }
}
