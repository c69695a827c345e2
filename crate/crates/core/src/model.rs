//! Semantic models: directed labeled graphs of ontology class nodes and
//! source-attribute data nodes.
//!
//! The JSON file format is
//! `{nodes:[{id,kind:"class"|"data",label,index?}], edges:[{src,label,dst,kind:"object"|"data"}]}`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::source::SourceTable;

pub type NodeId = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassNode {
    pub id: NodeId,
    pub class: String,
    pub index: u32,
}

impl ClassNode {
    /// Rendering used in triples, e.g. `E52_Time-Span2`.
    pub fn display(&self) -> String {
        format!("{}{}", self.class, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DataNode {
    pub id: NodeId,
    pub attribute: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Object,
    Data,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: NodeId,
    pub label: String,
    pub dst: NodeId,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SemanticModel {
    class_nodes: BTreeMap<NodeId, ClassNode>,
    data_nodes: BTreeMap<NodeId, DataNode>,
    edges: BTreeSet<Edge>,
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: String,
    kind: String,
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct ModelRecord {
    nodes: Vec<NodeRecord>,
    edges: Vec<Edge>,
}

impl SemanticModel {
    pub fn new() -> SemanticModel {
        SemanticModel::default()
    }

    pub fn load(path: &Path) -> Result<SemanticModel> {
        let text = std::fs::read_to_string(path)?;
        SemanticModel::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<SemanticModel> {
        let record: ModelRecord = serde_json::from_str(text)?;
        let mut model = SemanticModel::new();
        for n in record.nodes {
            match n.kind.as_str() {
                "class" => model.add_class_node(&n.id, &n.label, n.index.unwrap_or(1))?,
                "data" => model.add_data_node(&n.id, &n.label)?,
                other => {
                    return Err(Error::Model(format!("unknown node kind '{other}'")));
                }
            }
        }
        for e in record.edges {
            model.add_edge(&e.src, &e.label, &e.dst, e.kind)?;
        }
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        let mut nodes: Vec<NodeRecord> = self
            .class_nodes
            .values()
            .map(|c| NodeRecord {
                id: c.id.clone(),
                kind: "class".to_string(),
                label: c.class.clone(),
                index: Some(c.index),
            })
            .collect();
        nodes.extend(self.data_nodes.values().map(|d| NodeRecord {
            id: d.id.clone(),
            kind: "data".to_string(),
            label: d.attribute.clone(),
            index: None,
        }));
        let record = ModelRecord {
            nodes,
            edges: self.edges.iter().cloned().collect(),
        };
        serde_json::to_string_pretty(&record).expect("model serialization cannot fail")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    // -- construction -------------------------------------------------------

    pub fn add_class_node(&mut self, id: &str, class: &str, index: u32) -> Result<()> {
        if self.class_nodes.contains_key(id) || self.data_nodes.contains_key(id) {
            return Err(Error::Model(format!("duplicate node id '{id}'")));
        }
        if index < 1 {
            return Err(Error::Model(format!("class node '{id}' has index < 1")));
        }
        self.class_nodes.insert(
            id.to_string(),
            ClassNode { id: id.to_string(), class: class.to_string(), index },
        );
        Ok(())
    }

    pub fn add_data_node(&mut self, id: &str, attribute: &str) -> Result<()> {
        if self.class_nodes.contains_key(id) || self.data_nodes.contains_key(id) {
            return Err(Error::Model(format!("duplicate node id '{id}'")));
        }
        self.data_nodes.insert(
            id.to_string(),
            DataNode { id: id.to_string(), attribute: attribute.to_string() },
        );
        Ok(())
    }

    pub fn add_edge(&mut self, src: &str, label: &str, dst: &str, kind: EdgeKind) -> Result<()> {
        match kind {
            EdgeKind::Object => {
                if !self.class_nodes.contains_key(src) || !self.class_nodes.contains_key(dst) {
                    return Err(Error::Model(format!(
                        "object edge ({src}, {label}, {dst}) must connect class nodes"
                    )));
                }
            }
            EdgeKind::Data => {
                if !self.class_nodes.contains_key(src) || !self.data_nodes.contains_key(dst) {
                    return Err(Error::Model(format!(
                        "data edge ({src}, {label}, {dst}) must go class node -> data node"
                    )));
                }
            }
        }
        self.edges.insert(Edge {
            src: src.to_string(),
            label: label.to_string(),
            dst: dst.to_string(),
            kind,
        });
        Ok(())
    }

    pub fn remove_edge(&mut self, edge: &Edge) -> bool {
        self.edges.remove(edge)
    }

    pub fn remove_class_node(&mut self, id: &str) {
        self.class_nodes.remove(id);
        self.edges.retain(|e| e.src != id && e.dst != id);
    }

    pub fn remove_data_node(&mut self, id: &str) {
        self.data_nodes.remove(id);
        self.edges.retain(|e| e.src != id && e.dst != id);
    }

    // -- validation ---------------------------------------------------------

    /// Structural invariants; connectivity is only required of final models
    /// and is checked separately via [`SemanticModel::is_weakly_connected`].
    pub fn validate(&self) -> Result<()> {
        let mut seen_pairs = BTreeSet::new();
        for c in self.class_nodes.values() {
            if !seen_pairs.insert((c.class.as_str(), c.index)) {
                return Err(Error::Model(format!(
                    "duplicate (class, index) pair ({}, {})",
                    c.class, c.index
                )));
            }
        }
        let mut data_in: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &self.edges {
            match e.kind {
                EdgeKind::Object => {
                    if !self.class_nodes.contains_key(&e.src) || !self.class_nodes.contains_key(&e.dst)
                    {
                        return Err(Error::Model(format!(
                            "object edge ({}, {}, {}) has a non-class endpoint",
                            e.src, e.label, e.dst
                        )));
                    }
                }
                EdgeKind::Data => {
                    if !self.class_nodes.contains_key(&e.src) || !self.data_nodes.contains_key(&e.dst)
                    {
                        return Err(Error::Model(format!(
                            "data edge ({}, {}, {}) has bad endpoints",
                            e.src, e.label, e.dst
                        )));
                    }
                    *data_in.entry(e.dst.as_str()).or_insert(0) += 1;
                }
            }
        }
        for d in self.data_nodes.values() {
            if data_in.get(d.id.as_str()).copied().unwrap_or(0) != 1 {
                return Err(Error::Model(format!(
                    "data node '{}' must have in-degree exactly 1",
                    d.id
                )));
            }
        }
        Ok(())
    }

    pub fn is_weakly_connected(&self) -> bool {
        let mut ids: Vec<&str> = self.class_nodes.keys().map(|s| s.as_str()).collect();
        ids.extend(self.data_nodes.keys().map(|s| s.as_str()));
        if ids.len() <= 1 {
            return true;
        }
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &self.edges {
            adj.entry(e.src.as_str()).or_default().push(e.dst.as_str());
            adj.entry(e.dst.as_str()).or_default().push(e.src.as_str());
        }
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut stack = vec![ids[0]];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if let Some(next) = adj.get(n) {
                stack.extend(next.iter().copied());
            }
        }
        seen.len() == ids.len()
    }

    // -- accessors ----------------------------------------------------------

    pub fn class_nodes(&self) -> impl Iterator<Item = &ClassNode> {
        self.class_nodes.values()
    }

    pub fn data_nodes(&self) -> impl Iterator<Item = &DataNode> {
        self.data_nodes.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn object_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Object)
    }

    pub fn data_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Data)
    }

    pub fn class_node(&self, id: &str) -> Option<&ClassNode> {
        self.class_nodes.get(id)
    }

    pub fn data_node(&self, id: &str) -> Option<&DataNode> {
        self.data_nodes.get(id)
    }

    pub fn is_empty(&self) -> bool {
        self.class_nodes.is_empty() && self.data_nodes.is_empty()
    }

    /// The data edge annotating a given source attribute, if any.
    pub fn data_edge_of_attribute(&self, attribute: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| {
            e.kind == EdgeKind::Data
                && self.data_nodes.get(&e.dst).map(|d| d.attribute.as_str()) == Some(attribute)
        })
    }

    /// The class node annotating a given source attribute, if any.
    pub fn class_node_of_attribute(&self, attribute: &str) -> Option<&ClassNode> {
        self.data_edge_of_attribute(attribute)
            .and_then(|e| self.class_nodes.get(&e.src))
    }

    pub fn incoming_object_edges<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Edge> {
        self.edges
            .iter()
            .filter(move |e| e.kind == EdgeKind::Object && e.dst == id)
    }

    pub fn outgoing_edges<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Edge> {
        self.edges.iter().filter(move |e| e.src == id)
    }

    /// Next unused instance index for a class.
    pub fn next_index(&self, class: &str) -> u32 {
        self.class_nodes
            .values()
            .filter(|c| c.class == class)
            .map(|c| c.index)
            .max()
            .map(|m| m + 1)
            .unwrap_or(1)
    }

    /// Adds a fresh class node with the next free index; returns its id.
    pub fn add_fresh_class_node(&mut self, class: &str) -> NodeId {
        let index = self.next_index(class);
        let mut id = format!("{class}{index}");
        let mut bump = index;
        while self.class_nodes.contains_key(&id) || self.data_nodes.contains_key(&id) {
            bump += 1;
            id = format!("{class}{bump}");
        }
        let index = bump.max(index);
        self.class_nodes.insert(
            id.clone(),
            ClassNode { id: id.clone(), class: class.to_string(), index },
        );
        id
    }

    /// One triple per edge, with class nodes rendered as name+index and data
    /// nodes as attribute names. Duplicates collapse by set semantics.
    pub fn triples(&self) -> BTreeSet<(String, String, String)> {
        self.edges
            .iter()
            .map(|e| {
                let src = self.render_node(&e.src);
                let dst = self.render_node(&e.dst);
                (src, e.label.clone(), dst)
            })
            .collect()
    }

    fn render_node(&self, id: &str) -> String {
        if let Some(c) = self.class_nodes.get(id) {
            c.display()
        } else if let Some(d) = self.data_nodes.get(id) {
            d.attribute.clone()
        } else {
            id.to_string()
        }
    }
}

/// The set of triples of a semantic model; the comparison unit used by the
/// evaluation metrics.
pub fn model_triples(model: &SemanticModel) -> BTreeSet<(String, String, String)> {
    model.triples()
}

/// A source table together with its (gold or learned) semantic model.
#[derive(Debug, Clone)]
pub struct SourceDescription {
    pub source: SourceTable,
    pub model: SemanticModel,
}

impl SourceDescription {
    pub fn new(source: SourceTable, model: SemanticModel) -> Result<SourceDescription> {
        let desc = SourceDescription { source, model };
        desc.validate()?;
        Ok(desc)
    }

    pub fn validate(&self) -> Result<()> {
        self.source.validate()?;
        self.model.validate()?;
        let attrs: BTreeSet<&str> = self.source.attribute_names().into_iter().collect();
        for d in self.model.data_nodes() {
            if !attrs.contains(d.attribute.as_str()) {
                return Err(Error::Model(format!(
                    "model of '{}' references attribute '{}' missing from the source",
                    self.source.name, d.attribute
                )));
            }
        }
        Ok(())
    }
}
