//! Maximum common subgraph between a (small) model-side pattern and a
//! knowledge graph: the connected subgraph of the pattern embeddable in the
//! KG with the most nodes, ties broken by edge count, then canonical code.

use std::collections::BTreeSet;

use crate::kg::KnowledgeGraph;
use crate::matching::vf2::Matcher;
use crate::matching::{canonical_code, CompiledGraph, PatternGraph};

pub fn max_common_subgraph(pattern: &PatternGraph, kg: &KnowledgeGraph) -> PatternGraph {
    let target = CompiledGraph::from_kg(kg);
    max_common_subgraph_compiled(pattern, &target)
}

pub fn max_common_subgraph_compiled(pattern: &PatternGraph, target: &CompiledGraph) -> PatternGraph {
    if pattern.is_empty() {
        return PatternGraph::new();
    }
    if Matcher::new(pattern, target).exists() && pattern.is_connected() {
        return pattern.clone();
    }

    // Nodes whose class never occurs in the KG can never be part of an
    // embeddable subgraph.
    let viable: Vec<String> = pattern
        .nodes()
        .filter(|(_, class)| target.by_label.contains_key(*class))
        .map(|(id, _)| id.to_string())
        .collect();

    let mut best: Option<(usize, usize, String, PatternGraph)> = None;
    let mut chosen: Vec<&str> = Vec::new();
    branch(
        &viable.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        0,
        &mut chosen,
        pattern,
        target,
        &mut best,
    );
    best.map(|(_, _, _, g)| g).unwrap_or_default()
}

/// Include/exclude search over node subsets, bounded by the number of nodes
/// still available. Equal-size candidates are still explored so edge-count
/// and canonical-code tie-breaks see every maximum.
fn branch(
    nodes: &[&str],
    pos: usize,
    chosen: &mut Vec<&str>,
    pattern: &PatternGraph,
    target: &CompiledGraph,
    best: &mut Option<(usize, usize, String, PatternGraph)>,
) {
    let best_size = best.as_ref().map(|(n, _, _, _)| *n).unwrap_or(0);
    if chosen.len() + (nodes.len() - pos) < best_size {
        return;
    }
    if pos == nodes.len() {
        if chosen.is_empty() {
            return;
        }
        consider(chosen, pattern, target, best);
        return;
    }
    chosen.push(nodes[pos]);
    branch(nodes, pos + 1, chosen, pattern, target, best);
    chosen.pop();
    branch(nodes, pos + 1, chosen, pattern, target, best);
}

fn consider(
    chosen: &[&str],
    pattern: &PatternGraph,
    target: &CompiledGraph,
    best: &mut Option<(usize, usize, String, PatternGraph)>,
) {
    let keep: BTreeSet<&str> = chosen.iter().copied().collect();
    let induced = pattern.induced(&keep);
    if !induced.is_connected() {
        return;
    }
    let n = induced.node_count();
    // Try the full induced edge set first; when it embeds it dominates every
    // sparser choice on the same nodes.
    if Matcher::new(&induced, target).exists() {
        offer(induced, n, best);
        return;
    }
    let all_edges: Vec<(String, String, String)> = induced
        .edges()
        .map(|(s, p, d)| (s.to_string(), p.to_string(), d.to_string()))
        .collect();
    let m = all_edges.len();
    if m > 16 {
        // Edge-subset search is only needed when the induced graph itself
        // does not embed; cap it to keep the search bounded.
        return;
    }
    let min_edges = n.saturating_sub(1);
    let current_best_edges = match best {
        Some((bn, be, _, _)) if *bn == n => Some(*be),
        Some((bn, _, _, _)) if *bn > n => return,
        _ => None,
    };
    for size in (min_edges..m).rev() {
        if let Some(be) = current_best_edges {
            if size < be {
                break;
            }
        }
        let mut found_at_size = false;
        for subset in combinations(m, size) {
            let mut g = PatternGraph::new();
            for (id, class) in induced.nodes() {
                g.add_node(id, class);
            }
            for &i in &subset {
                let (s, p, d) = &all_edges[i];
                g.add_edge(s, p, d);
            }
            if !g.is_connected() {
                continue;
            }
            if Matcher::new(&g, target).exists() {
                offer(g, n, best);
                found_at_size = true;
            }
        }
        if found_at_size {
            break;
        }
    }
}

fn offer(g: PatternGraph, n: usize, best: &mut Option<(usize, usize, String, PatternGraph)>) {
    let e = g.edge_count();
    let code = canonical_code(&g);
    let better = match best {
        None => true,
        Some((bn, be, bc, _)) => (n, e, std::cmp::Reverse(&code)) > (*bn, *be, std::cmp::Reverse(&*bc)),
    };
    if better {
        *best = Some((n, e, code, g));
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
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
    fn embeddable_model_is_its_own_mcs() {
        let kg = kg_from(&[("a", "A", "p", "b", "B")]);
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        p.add_node("y", "B");
        p.add_edge("x", "p", "y");
        let mcs = max_common_subgraph(&p, &kg);
        assert_eq!(mcs, p);
    }

    #[test]
    fn extra_node_dropped() {
        let kg = kg_from(&[("a", "A", "p", "b", "B")]);
        let mut p = PatternGraph::new();
        p.add_node("x", "A");
        p.add_node("y", "B");
        p.add_node("z", "C");
        p.add_edge("x", "p", "y");
        p.add_edge("y", "q", "z");
        let mcs = max_common_subgraph(&p, &kg);
        assert_eq!(mcs.node_count(), 2);
        assert!(mcs.contains_node("x"));
        assert!(mcs.contains_node("y"));
        assert!(!mcs.contains_node("z"));
    }

    #[test]
    fn nothing_matches_gives_empty() {
        let kg = kg_from(&[("a", "A", "p", "b", "B")]);
        let mut p = PatternGraph::new();
        p.add_node("z", "Z");
        let mcs = max_common_subgraph(&p, &kg);
        assert!(mcs.is_empty());
    }

    #[test]
    fn keeps_original_node_ids() {
        let kg = kg_from(&[("a", "A", "p", "b", "B"), ("c", "C", "q", "d", "D")]);
        let mut p = PatternGraph::new();
        p.add_node("n1", "A");
        p.add_node("n2", "B");
        p.add_node("n3", "Z");
        p.add_edge("n1", "p", "n2");
        p.add_edge("n2", "r", "n3");
        let mcs = max_common_subgraph(&p, &kg);
        assert!(mcs.contains_node("n1") && mcs.contains_node("n2"));
    }
}
