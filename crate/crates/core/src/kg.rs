//! Instance-level knowledge graphs: typed entities and labeled relations,
//! with a derived class-level schema projection.
//!
//! The file format is tab-separated quads, one relation per line:
//! `subject_id<TAB>subject_class<TAB>property<TAB>object_id<TAB>object_class`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{EdgeKind, SourceDescription};

pub type EntityId = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relation {
    pub subject: EntityId,
    pub property: String,
    pub object: EntityId,
}

#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    entities: BTreeMap<EntityId, String>,
    relations: Vec<Relation>,
    schema: BTreeSet<(String, String, String)>,
}

impl KnowledgeGraph {
    pub fn new() -> KnowledgeGraph {
        KnowledgeGraph::default()
    }

    pub fn add_entity(&mut self, id: &str, class: &str) -> Result<()> {
        if let Some(existing) = self.entities.get(id) {
            if existing != class {
                return Err(Error::KnowledgeGraph {
                    line: None,
                    msg: format!("entity '{id}' declared with classes '{existing}' and '{class}'"),
                });
            }
            return Ok(());
        }
        self.entities.insert(id.to_string(), class.to_string());
        Ok(())
    }

    pub fn add_relation(&mut self, subject: &str, property: &str, object: &str) -> Result<()> {
        let sc = self.entities.get(subject).cloned().ok_or_else(|| Error::KnowledgeGraph {
            line: None,
            msg: format!("relation subject '{subject}' is not a declared entity"),
        })?;
        let oc = self.entities.get(object).cloned().ok_or_else(|| Error::KnowledgeGraph {
            line: None,
            msg: format!("relation object '{object}' is not a declared entity"),
        })?;
        self.relations.push(Relation {
            subject: subject.to_string(),
            property: property.to_string(),
            object: object.to_string(),
        });
        self.schema.insert((sc, property.to_string(), oc));
        Ok(())
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn entities(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entities.iter().map(|(id, c)| (id.as_str(), c.as_str()))
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn class_of(&self, entity: &str) -> Option<&str> {
        self.entities.get(entity).map(|s| s.as_str())
    }

    /// Distinct (subject-class, property, object-class) triples.
    pub fn schema_projection(&self) -> &BTreeSet<(String, String, String)> {
        &self.schema
    }

    pub fn has_schema_triple(&self, subject_class: &str, property: &str, object_class: &str) -> bool {
        // Borrowed lookup without allocating a key triple.
        self.schema.iter().any(|(s, p, o)| {
            s == subject_class && p == property && o == object_class
        })
    }

    // -- quad file i/o -------------------------------------------------------

    pub fn load(path: &Path) -> Result<KnowledgeGraph> {
        let text = std::fs::read_to_string(path)?;
        KnowledgeGraph::from_quads(&text)
    }

    pub fn from_quads(text: &str) -> Result<KnowledgeGraph> {
        let mut kg = KnowledgeGraph::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(Error::KnowledgeGraph {
                    line: Some(lineno),
                    msg: format!("expected 5 tab-separated fields, found {}", fields.len()),
                });
            }
            let (sid, sc, prop, oid, oc) = (fields[0], fields[1], fields[2], fields[3], fields[4]);
            kg.add_entity(sid, sc).map_err(|e| at_line(e, lineno))?;
            kg.add_entity(oid, oc).map_err(|e| at_line(e, lineno))?;
            kg.add_relation(sid, prop, oid).map_err(|e| at_line(e, lineno))?;
        }
        Ok(kg)
    }

    pub fn to_quads(&self) -> String {
        let mut out = String::new();
        let mut sorted: Vec<&Relation> = self.relations.iter().collect();
        sorted.sort();
        for r in sorted {
            let sc = &self.entities[&r.subject];
            let oc = &self.entities[&r.object];
            out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.subject, sc, r.property, r.object, oc));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_quads())?;
        Ok(())
    }
}

fn at_line(err: Error, lineno: usize) -> Error {
    match err {
        Error::KnowledgeGraph { msg, .. } => Error::KnowledgeGraph { line: Some(lineno), msg },
        other => other,
    }
}

/// Materializes one description into a KG: each table row instantiates one
/// entity per class node and one relation per object edge. Entity identity is
/// per (source, row, class-node); there is no cross-row entity resolution.
pub fn materialize_description(kg: &mut KnowledgeGraph, desc: &SourceDescription) -> Result<()> {
    if !desc.model.is_weakly_connected() {
        return Err(Error::Model(format!(
            "model of source '{}' is disconnected; cannot materialize",
            desc.source.name
        )));
    }
    let rows = desc.source.row_count();
    for row in 0..rows {
        for cn in desc.model.class_nodes() {
            let id = entity_id(&desc.source.name, row, &cn.id);
            kg.add_entity(&id, &cn.class)?;
        }
        for e in desc.model.edges() {
            if e.kind != EdgeKind::Object {
                continue;
            }
            let s = entity_id(&desc.source.name, row, &e.src);
            let o = entity_id(&desc.source.name, row, &e.dst);
            kg.add_relation(&s, &e.label, &o)?;
        }
    }
    Ok(())
}

fn entity_id(source: &str, row: usize, node: &str) -> String {
    format!("{source}:r{row}:{node}")
}

/// Union of the materializations of every description.
pub fn materialize_all(descriptions: &[SourceDescription]) -> Result<KnowledgeGraph> {
    let mut kg = KnowledgeGraph::new();
    for d in descriptions {
        materialize_description(&mut kg, d)?;
    }
    Ok(kg)
}

/// Builds the background KG for one held-out source by integrating every
/// other description.
pub fn build_leave_one_out_kg(
    descriptions: &[SourceDescription],
    held_out: &str,
) -> Result<KnowledgeGraph> {
    if !descriptions.iter().any(|d| d.source.name == held_out) {
        return Err(Error::KnowledgeGraph {
            line: None,
            msg: format!("held-out source '{held_out}' not found among descriptions"),
        });
    }
    let mut kg = KnowledgeGraph::new();
    for d in descriptions {
        if d.source.name == held_out {
            continue;
        }
        materialize_description(&mut kg, d)?;
    }
    Ok(kg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SemanticModel;
    use crate::source::{Column, SourceTable};

    fn toy_description(name: &str, rows: usize) -> SourceDescription {
        let mut m = SemanticModel::new();
        m.add_class_node("A1", "A", 1).unwrap();
        m.add_class_node("B1", "B", 1).unwrap();
        m.add_data_node("col", "col").unwrap();
        m.add_edge("A1", "p", "B1", EdgeKind::Object).unwrap();
        m.add_edge("B1", "label", "col", EdgeKind::Data).unwrap();
        let values: Vec<String> = (0..rows).map(|i| format!("v{i}")).collect();
        let table = SourceTable::new(name, vec![Column { attribute: "col".into(), values }]).unwrap();
        SourceDescription::new(table, m).unwrap()
    }

    #[test]
    fn three_row_toy_source_materializes_to_six_entities() {
        let desc = toy_description("s", 3);
        let kg = materialize_all(std::slice::from_ref(&desc)).unwrap();
        assert_eq!(kg.entity_count(), 6);
        assert_eq!(kg.relation_count(), 3);
        assert_eq!(
            kg.schema_projection().iter().cloned().collect::<Vec<_>>(),
            vec![("A".into(), "p".into(), "B".into())]
        );
    }

    #[test]
    fn leave_one_out_excludes_held_out_source() {
        let d1 = toy_description("s1", 2);
        let d2 = toy_description("s2", 3);
        let kg = build_leave_one_out_kg(&[d1, d2.clone()], "s1").unwrap();
        let solo = materialize_all(std::slice::from_ref(&d2)).unwrap();
        assert_eq!(kg.to_quads(), solo.to_quads());
    }

    #[test]
    fn unknown_held_out_source_is_an_error() {
        let d1 = toy_description("s1", 1);
        assert!(build_leave_one_out_kg(&[d1], "nope").is_err());
    }

    #[test]
    fn disconnected_model_is_rejected() {
        let mut m = SemanticModel::new();
        m.add_class_node("A1", "A", 1).unwrap();
        m.add_class_node("B1", "B", 1).unwrap();
        m.add_data_node("col", "col").unwrap();
        m.add_edge("A1", "label", "col", EdgeKind::Data).unwrap();
        let table = SourceTable::new(
            "s",
            vec![Column { attribute: "col".into(), values: vec!["v".into()] }],
        )
        .unwrap();
        let desc = SourceDescription { source: table, model: m };
        let mut kg = KnowledgeGraph::new();
        assert!(materialize_description(&mut kg, &desc).is_err());
    }

    #[test]
    fn quad_round_trip_and_line_errors() {
        let desc = toy_description("s", 2);
        let kg = materialize_all(std::slice::from_ref(&desc)).unwrap();
        let text = kg.to_quads();
        let again = KnowledgeGraph::from_quads(&text).unwrap();
        assert_eq!(text, again.to_quads());

        let bad = "a\tA\tp\tb\n";
        let err = KnowledgeGraph::from_quads(bad).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn conflicting_entity_class_is_an_error() {
        let text = "a\tA\tp\tb\tB\na\tC\tq\tb\tB\n";
        let err = KnowledgeGraph::from_quads(text).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
