//! Exact graph-matching primitives: subgraph isomorphism, embedding
//! enumeration, minimum-image frequency, maximum common subgraph, and
//! canonical codes.

pub mod canonical;
pub mod mcs;
pub mod vf2;

use std::collections::{BTreeMap, BTreeSet};

use crate::kg::KnowledgeGraph;
use crate::model::{EdgeKind, NodeId, SemanticModel};

pub use canonical::canonical_code;
pub use mcs::max_common_subgraph;
pub use vf2::{enumerate_embeddings, is_subgraph_isomorphic, min_image_frequency};

/// The class-level abstraction of a semantic model: class nodes and object
/// edges only. Patterns produced mid-repair may be disconnected; the matcher
/// handles that.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternGraph {
    nodes: BTreeMap<NodeId, String>,
    edges: BTreeSet<(NodeId, String, NodeId)>,
}

impl PatternGraph {
    pub fn new() -> PatternGraph {
        PatternGraph::default()
    }

    pub fn from_model(model: &SemanticModel) -> PatternGraph {
        let mut p = PatternGraph::new();
        for c in model.class_nodes() {
            p.add_node(&c.id, &c.class);
        }
        for e in model.edges() {
            if e.kind == EdgeKind::Object {
                p.add_edge(&e.src, &e.label, &e.dst);
            }
        }
        p
    }

    pub fn add_node(&mut self, id: &str, class: &str) {
        self.nodes.insert(id.to_string(), class.to_string());
    }

    pub fn add_edge(&mut self, src: &str, label: &str, dst: &str) {
        debug_assert!(self.nodes.contains_key(src) && self.nodes.contains_key(dst));
        self.edges.insert((src.to_string(), label.to_string(), dst.to_string()));
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, &str)> {
        self.nodes.iter().map(|(id, c)| (id.as_str(), c.as_str()))
    }

    pub fn class_of(&self, id: &str) -> Option<&str> {
        self.nodes.get(id).map(|s| s.as_str())
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.edges.iter().map(|(s, p, d)| (s.as_str(), p.as_str(), d.as_str()))
    }

    pub fn has_edge(&self, src: &str, label: &str, dst: &str) -> bool {
        self.edges.contains(&(src.to_string(), label.to_string(), dst.to_string()))
    }

    /// Subgraph on a node subset with all induced edges.
    pub fn induced(&self, keep: &BTreeSet<&str>) -> PatternGraph {
        let mut p = PatternGraph::new();
        for (id, class) in &self.nodes {
            if keep.contains(id.as_str()) {
                p.add_node(id, class);
            }
        }
        for (s, l, d) in &self.edges {
            if keep.contains(s.as_str()) && keep.contains(d.as_str()) {
                p.add_edge(s, l, d);
            }
        }
        p
    }

    /// Weakly connected components, each as a node-id set.
    pub fn components(&self) -> Vec<BTreeSet<NodeId>> {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (s, _, d) in &self.edges {
            adj.entry(s.as_str()).or_default().push(d.as_str());
            adj.entry(d.as_str()).or_default().push(s.as_str());
        }
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut out = Vec::new();
        for id in self.nodes.keys() {
            if seen.contains(id.as_str()) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![id.as_str()];
            while let Some(n) = stack.pop() {
                if !seen.insert(n) {
                    continue;
                }
                comp.insert(n.to_string());
                if let Some(next) = adj.get(n) {
                    stack.extend(next.iter().copied());
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Merges another pattern in; shared node ids must agree on class.
    pub fn union(&self, other: &PatternGraph) -> PatternGraph {
        let mut p = self.clone();
        for (id, class) in &other.nodes {
            p.add_node(id, class);
        }
        for (s, l, d) in &other.edges {
            p.add_edge(s, l, d);
        }
        p
    }

    pub fn compiled(&self) -> CompiledGraph {
        let names: Vec<String> = self.nodes.keys().cloned().collect();
        let labels: Vec<String> = names.iter().map(|n| self.nodes[n].clone()).collect();
        let index: BTreeMap<&str, usize> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let edges: Vec<(usize, String, usize)> = self
            .edges
            .iter()
            .map(|(s, l, d)| (index[s.as_str()], l.clone(), index[d.as_str()]))
            .collect();
        CompiledGraph::build(names, labels, edges)
    }
}

/// An injective, label- and edge-preserving assignment of pattern nodes to
/// knowledge-graph entities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Embedding {
    pub assignment: BTreeMap<NodeId, String>,
}

/// Index-compiled labeled digraph; the common target form for the matcher.
#[derive(Debug, Clone)]
pub struct CompiledGraph {
    pub names: Vec<String>,
    pub labels: Vec<String>,
    pub props: Vec<String>,
    /// node -> [(prop_id, neighbor)]
    pub out: Vec<Vec<(usize, usize)>>,
    pub inn: Vec<Vec<(usize, usize)>>,
    pub by_label: BTreeMap<String, Vec<usize>>,
}

impl CompiledGraph {
    pub fn build(
        names: Vec<String>,
        labels: Vec<String>,
        edges: Vec<(usize, String, usize)>,
    ) -> CompiledGraph {
        let n = names.len();
        let mut prop_ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut props: Vec<String> = Vec::new();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (s, p, d) in edges {
            let pid = *prop_ids.entry(p.clone()).or_insert_with(|| {
                props.push(p);
                props.len() - 1
            });
            out[s].push((pid, d));
            inn[d].push((pid, s));
        }
        for v in out.iter_mut().chain(inn.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        let mut by_label: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            by_label.entry(l.clone()).or_default().push(i);
        }
        CompiledGraph { names, labels, props, out, inn, by_label }
    }

    pub fn from_kg(kg: &KnowledgeGraph) -> CompiledGraph {
        let names: Vec<String> = kg.entities().map(|(id, _)| id.to_string()).collect();
        let labels: Vec<String> = kg.entities().map(|(_, c)| c.to_string()).collect();
        let index: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let edges: Vec<(usize, String, usize)> = kg
            .relations()
            .iter()
            .map(|r| (index[r.subject.as_str()], r.property.clone(), index[r.object.as_str()]))
            .collect();
        CompiledGraph::build(names, labels, edges)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_drops_data_nodes() {
        let mut m = SemanticModel::new();
        m.add_class_node("A1", "A", 1).unwrap();
        m.add_class_node("B1", "B", 1).unwrap();
        m.add_data_node("col", "col").unwrap();
        m.add_edge("A1", "p", "B1", EdgeKind::Object).unwrap();
        m.add_edge("B1", "label", "col", EdgeKind::Data).unwrap();
        let p = PatternGraph::from_model(&m);
        assert_eq!(p.node_count(), 2);
        assert_eq!(p.edge_count(), 1);
    }

    #[test]
    fn components_found() {
        let mut p = PatternGraph::new();
        p.add_node("a", "A");
        p.add_node("b", "B");
        p.add_node("c", "C");
        p.add_edge("a", "p", "b");
        assert_eq!(p.components().len(), 2);
        assert!(!p.is_connected());
    }
}
