//! Subgraph-isomorphism search in the VF2 style: injective embeddings of a
//! labeled pattern into a labeled target, candidates visited
//! most-constrained-first.

use std::collections::BTreeSet;

use crate::kg::KnowledgeGraph;
use crate::matching::{CompiledGraph, Embedding, PatternGraph};

/// A pattern compiled against a fixed target, reusable across queries.
pub struct Matcher<'t> {
    target: &'t CompiledGraph,
    pattern: CompiledGraph,
    /// Pattern node visit order; each entry also carries the constraint edges
    /// to previously ordered nodes.
    order: Vec<OrderEntry>,
    /// Pattern prop id -> target prop id, if the target knows the property.
    prop_map: Vec<Option<usize>>,
}

struct OrderEntry {
    node: usize,
    /// Edges to already-mapped pattern nodes: (earlier position, prop name index
    /// into `pattern.props`, true if edge goes earlier -> this).
    constraints: Vec<(usize, usize, bool)>,
    /// Props of self-loop edges on this node.
    self_loops: Vec<usize>,
}

impl<'t> Matcher<'t> {
    pub fn new(pattern: &PatternGraph, target: &'t CompiledGraph) -> Matcher<'t> {
        let compiled = pattern.compiled();
        let order = visit_order(&compiled, target);
        let prop_map = compiled
            .props
            .iter()
            .map(|name| target.props.iter().position(|p| p == name))
            .collect();
        Matcher { target, pattern: compiled, order, prop_map }
    }

    /// Calls `f` with each embedding (pattern node index -> target node index,
    /// in `pattern` compiled order). Stops when `f` returns false.
    fn search(&self, f: &mut dyn FnMut(&[usize]) -> bool) {
        let n = self.pattern.node_count();
        if n == 0 {
            f(&[]);
            return;
        }
        let mut assignment = vec![usize::MAX; n];
        let mut used = vec![false; self.target.node_count()];
        self.extend(0, &mut assignment, &mut used, f);
    }

    fn extend(
        &self,
        pos: usize,
        assignment: &mut [usize],
        used: &mut [bool],
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if pos == self.order.len() {
            return f(assignment);
        }
        let entry = &self.order[pos];
        let label = &self.pattern.labels[entry.node];
        let candidates = self.candidates_for(entry, assignment);
        for t in candidates {
            if used[t] || &self.target.labels[t] != label {
                continue;
            }
            if !self.constraints_hold(entry, t, assignment) {
                continue;
            }
            assignment[entry.node] = t;
            used[t] = true;
            let keep_going = self.extend(pos + 1, assignment, used, f);
            assignment[entry.node] = usize::MAX;
            used[t] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn candidates_for(&self, entry: &OrderEntry, assignment: &[usize]) -> Vec<usize> {
        // Derive candidates from the first constraint edge when one exists;
        // it is always a smaller set than the whole label class.
        if let Some(&(earlier_pos, prop, from_earlier)) = entry.constraints.first() {
            let mapped = assignment[self.order[earlier_pos].node];
            let Some(tp) = self.prop_map[prop] else { return Vec::new() };
            let adj = if from_earlier { &self.target.out[mapped] } else { &self.target.inn[mapped] };
            adj.iter().filter(|(p, _)| *p == tp).map(|(_, n)| *n).collect()
        } else {
            self.target
                .by_label
                .get(&self.pattern.labels[entry.node])
                .cloned()
                .unwrap_or_default()
        }
    }

    fn constraints_hold(&self, entry: &OrderEntry, t: usize, assignment: &[usize]) -> bool {
        for &prop in &entry.self_loops {
            let Some(tp) = self.prop_map[prop] else { return false };
            if self.target.out[t].binary_search(&(tp, t)).is_err() {
                return false;
            }
        }
        for &(earlier_pos, prop, from_earlier) in &entry.constraints {
            let mapped = assignment[self.order[earlier_pos].node];
            let Some(tp) = self.prop_map[prop] else { return false };
            let ok = if from_earlier {
                self.target.out[mapped].binary_search(&(tp, t)).is_ok()
            } else {
                self.target.inn[mapped].binary_search(&(tp, t)).is_ok()
            };
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn exists(&self) -> bool {
        let mut found = false;
        self.search(&mut |_| {
            found = true;
            false
        });
        found
    }

    /// All embeddings as target-index vectors in compiled pattern-node order,
    /// sorted lexicographically by target names.
    pub fn all(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.search(&mut |a| {
            out.push(a.to_vec());
            true
        });
        out.sort_by(|a, b| {
            let ka: Vec<&str> = a.iter().map(|&t| self.target.names[t].as_str()).collect();
            let kb: Vec<&str> = b.iter().map(|&t| self.target.names[t].as_str()).collect();
            ka.cmp(&kb)
        });
        out
    }

    /// Minimum over pattern nodes of the number of distinct target nodes the
    /// node is assigned to across all embeddings; 0 when there is none.
    pub fn min_image(&self) -> usize {
        let n = self.pattern.node_count();
        if n == 0 {
            return 0;
        }
        let mut images: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut any = false;
        self.search(&mut |a| {
            any = true;
            for (node, &t) in a.iter().enumerate() {
                images[node].insert(t);
            }
            true
        });
        if !any {
            return 0;
        }
        images.iter().map(|s| s.len()).min().unwrap_or(0)
    }

    pub fn pattern_names(&self) -> &[String] {
        &self.pattern.names
    }

    pub fn target_names(&self) -> &[String] {
        &self.target.names
    }
}

/// Visit order: repeatedly take the frontier node (adjacent to an ordered
/// node) with the fewest label-compatible target candidates; when the
/// frontier is empty (new component), fall back to the global minimum.
fn visit_order(pattern: &CompiledGraph, target: &CompiledGraph) -> Vec<OrderEntry> {
    let n = pattern.node_count();
    let cand_count = |node: usize| -> usize {
        target.by_label.get(&pattern.labels[node]).map(|v| v.len()).unwrap_or(0)
    };
    let mut placed: Vec<Option<usize>> = vec![None; n]; // node -> position
    let mut order: Vec<OrderEntry> = Vec::with_capacity(n);

    // Undirected adjacency on the pattern for frontier computation.
    let mut adjacent = vec![BTreeSet::new(); n];
    for (s, row) in pattern.out.iter().enumerate() {
        for &(_, d) in row {
            adjacent[s].insert(d);
            adjacent[d].insert(s);
        }
    }

    while order.len() < n {
        let mut frontier: Vec<usize> = (0..n)
            .filter(|&v| placed[v].is_none() && adjacent[v].iter().any(|&u| placed[u].is_some()))
            .collect();
        if frontier.is_empty() {
            frontier = (0..n).filter(|&v| placed[v].is_none()).collect();
        }
        let next = *frontier
            .iter()
            .min_by_key(|&&v| (cand_count(v), v))
            .expect("frontier cannot be empty here");
        let mut constraints = Vec::new();
        let mut self_loops = Vec::new();
        for &(p, d) in &pattern.out[next] {
            if d == next {
                self_loops.push(p);
            } else if let Some(pos) = placed[d] {
                // Edge next -> d: from the earlier node's perspective this is incoming.
                constraints.push((pos, p, false));
            }
        }
        for &(p, s) in &pattern.inn[next] {
            if s == next {
                continue;
            }
            if let Some(pos) = placed[s] {
                constraints.push((pos, p, true));
            }
        }
        constraints.sort_unstable();
        placed[next] = Some(order.len());
        order.push(OrderEntry { node: next, constraints, self_loops });
    }
    order
}

// ---------------------------------------------------------------------------
// Public operations over knowledge graphs
// ---------------------------------------------------------------------------

pub fn is_subgraph_isomorphic(pattern: &PatternGraph, kg: &KnowledgeGraph) -> bool {
    let target = CompiledGraph::from_kg(kg);
    Matcher::new(pattern, &target).exists()
}

pub fn is_subgraph_isomorphic_compiled(pattern: &PatternGraph, target: &CompiledGraph) -> bool {
    Matcher::new(pattern, target).exists()
}

/// All (or the first `limit`) embeddings, ordered by the tuple of assigned
/// entity ids taken in sorted pattern-node order.
pub fn enumerate_embeddings(
    pattern: &PatternGraph,
    kg: &KnowledgeGraph,
    limit: Option<usize>,
) -> Vec<Embedding> {
    let target = CompiledGraph::from_kg(kg);
    let matcher = Matcher::new(pattern, &target);
    let mut all: Vec<Embedding> = matcher
        .all()
        .into_iter()
        .map(|a| {
            let assignment = matcher
                .pattern_names()
                .iter()
                .zip(a.iter())
                .map(|(n, &t)| (n.clone(), matcher.target_names()[t].clone()))
                .collect();
            Embedding { assignment }
        })
        .collect();
    all.sort();
    if let Some(k) = limit {
        all.truncate(k);
    }
    all
}

/// Minimum image-based support of the pattern in the knowledge graph.
pub fn min_image_frequency(pattern: &PatternGraph, kg: &KnowledgeGraph) -> usize {
    let target = CompiledGraph::from_kg(kg);
    Matcher::new(pattern, &target).min_image()
}

pub fn min_image_frequency_compiled(pattern: &PatternGraph, target: &CompiledGraph) -> usize {
    Matcher::new(pattern, target).min_image()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kg_from(rel: &[(&str, &str, &str, &str, &str)]) -> KnowledgeGraph {
        let mut kg = KnowledgeGraph::new();
        for (s, sc, p, o, oc) in rel {
            kg.add_entity(s, sc).unwrap();
            kg.add_entity(o, oc).unwrap();
            kg.add_relation(s, p, o).unwrap();
        }
        kg
    }

    #[test]
    fn single_node_pattern_matches_any_entity_of_class() {
        let mut kg = KnowledgeGraph::new();
        kg.add_entity("a1", "A").unwrap();
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        assert!(is_subgraph_isomorphic(&p, &kg));
        let mut q = PatternGraph::new();
        q.add_node("x", "B");
        assert!(!is_subgraph_isomorphic(&q, &kg));
    }

    #[test]
    fn two_embeddings_counted() {
        let kg = kg_from(&[("a1", "A", "p", "b1", "B"), ("a2", "A", "p", "b1", "B")]);
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        p.add_node("y", "B");
        p.add_edge("x", "p", "y");
        let embs = enumerate_embeddings(&p, &kg, None);
        assert_eq!(embs.len(), 2);
        // Deterministic order by entity-id tuples.
        assert_eq!(embs[0].assignment["x"], "a1");
        assert_eq!(embs[1].assignment["x"], "a2");
    }

    #[test]
    fn no_class_compatible_node_gives_empty() {
        let kg = kg_from(&[("a1", "A", "p", "b1", "B")]);
        let mut p = PatternGraph::new();
        p.add_node("x", "Z");
        assert!(enumerate_embeddings(&p, &kg, None).is_empty());
    }

    #[test]
    fn min_image_on_shared_endpoint() {
        let kg = kg_from(&[("a1", "A", "p", "b1", "B"), ("a2", "A", "p", "b1", "B")]);
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        p.add_node("y", "B");
        p.add_edge("x", "p", "y");
        assert_eq!(min_image_frequency(&p, &kg), 1);
    }

    #[test]
    fn min_image_zero_when_unmatched() {
        let kg = kg_from(&[("a1", "A", "p", "b1", "B")]);
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        p.add_node("y", "B");
        p.add_edge("y", "p", "x");
        assert_eq!(min_image_frequency(&p, &kg), 0);
    }

    #[test]
    fn min_image_single_node_counts_entities() {
        let mut kg = KnowledgeGraph::new();
        for i in 0..3 {
            kg.add_entity(&format!("a{i}"), "A").unwrap();
        }
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        assert_eq!(min_image_frequency(&p, &kg), 3);
    }

    #[test]
    fn injectivity_is_enforced() {
        // Pattern wants two distinct A entities; KG has only one.
        let kg = kg_from(&[("a1", "A", "p", "a1", "A")]);
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        p.add_node("y", "A");
        p.add_edge("x", "p", "y");
        assert!(!is_subgraph_isomorphic(&p, &kg));
    }

    #[test]
    fn disconnected_pattern_embeds_componentwise_injectively() {
        let kg = kg_from(&[("a1", "A", "p", "b1", "B"), ("c1", "C", "q", "d1", "D")]);
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        p.add_node("y", "B");
        p.add_edge("x", "p", "y");
        p.add_node("z", "C");
        assert!(is_subgraph_isomorphic(&p, &kg));
    }
}
