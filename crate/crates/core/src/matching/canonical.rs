//! Canonical codes for labeled digraphs: the minimum DFS code, grown by
//! rightmost-path extension. Two graphs get equal codes exactly when they are
//! isomorphic (label- and direction-preserving), so codes double as duplicate
//! keys during mining.

use std::collections::{BTreeMap, BTreeSet};

use crate::matching::PatternGraph;

/// Canonical code of a pattern graph. Disconnected graphs are encoded
/// per-component with the component codes sorted.
pub fn canonical_code(pattern: &PatternGraph) -> String {
    let names: Vec<&str> = pattern.nodes().map(|(id, _)| id).collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let labels: Vec<String> = pattern.nodes().map(|(_, c)| c.to_string()).collect();
    let edges: Vec<(usize, String, usize)> = pattern
        .edges()
        .map(|(s, p, d)| (index[s], p.to_string(), index[d]))
        .collect();
    canonical_code_raw(&labels, &edges)
}

/// Canonical code over an indexed node-label / edge list representation.
pub fn canonical_code_raw(labels: &[String], edges: &[(usize, String, usize)]) -> String {
    let n = labels.len();
    // Split into weakly connected components.
    let mut comp = vec![usize::MAX; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, _, d) in edges {
        adj[*s].push(*d);
        adj[*d].push(*s);
    }
    let mut comp_count = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if comp[v] != usize::MAX {
                continue;
            }
            comp[v] = comp_count;
            stack.extend(adj[v].iter().copied());
        }
        comp_count += 1;
    }

    let mut codes: Vec<String> = Vec::with_capacity(comp_count);
    for c in 0..comp_count {
        let nodes: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
        let comp_edges: Vec<&(usize, String, usize)> =
            edges.iter().filter(|(s, _, _)| comp[*s] == c).collect();
        if comp_edges.is_empty() {
            codes.push(format!("N\u{1f}{}", labels[nodes[0]]));
            continue;
        }
        codes.push(min_dfs_code(labels, &comp_edges));
    }
    codes.sort();
    codes.join("\u{1e}")
}

// ---------------------------------------------------------------------------
// Minimum DFS code of one connected component
// ---------------------------------------------------------------------------

/// One DFS-code entry. `dir` is 0 when the underlying edge is oriented from
/// the `from` time to the `to` time, 1 otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
struct CodeEdge {
    from_t: usize,
    to_t: usize,
    from_label: String,
    dir: u8,
    edge_label: String,
    to_label: String,
}

impl CodeEdge {
    fn is_backward(&self) -> bool {
        self.to_t <= self.from_t
    }

    fn render(&self) -> String {
        format!(
            "({},{},{}\u{1f}{},{}\u{1f}{})",
            self.from_t, self.to_t, self.from_label, self.dir, self.edge_label, self.to_label
        )
    }
}

impl Ord for CodeEdge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self.is_backward(), other.is_backward()) {
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (true, true) => {
                // Backward edges: smaller destination time first.
                (self.to_t, self.dir, &self.edge_label).cmp(&(other.to_t, other.dir, &other.edge_label))
            }
            (false, false) => {
                // Forward edges: deeper source time first.
                (other.from_t, &self.dir, &self.edge_label, &self.to_label).cmp(&(
                    self.from_t,
                    &other.dir,
                    &other.edge_label,
                    &other.to_label,
                ))
            }
        }
    }
}

impl PartialOrd for CodeEdge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct DfsState {
    /// time -> component-local node.
    node_of_time: Vec<usize>,
    used: Vec<bool>,
    /// Rightmost path as times, root first.
    path: Vec<usize>,
}

struct CompEdge {
    src: usize,
    dst: usize,
    label: String,
}

fn min_dfs_code(labels: &[String], comp_edges: &[&(usize, String, usize)]) -> String {
    // Local incidence: node -> [(edge index, other endpoint, oriented-out)].
    let edges: Vec<CompEdge> = comp_edges
        .iter()
        .map(|(s, p, d)| CompEdge { src: *s, dst: *d, label: p.clone() })
        .collect();
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        incident.entry(e.src).or_default().push(i);
        if e.dst != e.src {
            incident.entry(e.dst).or_default().push(i);
        }
    }

    // Start states grouped by their first code edge.
    let mut starts: BTreeMap<CodeEdge, Vec<DfsState>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        let mut used = vec![false; edges.len()];
        used[i] = true;
        if e.src == e.dst {
            let t = CodeEdge {
                from_t: 0,
                to_t: 0,
                from_label: labels[e.src].clone(),
                dir: 0,
                edge_label: e.label.clone(),
                to_label: labels[e.src].clone(),
            };
            starts.entry(t).or_default().push(DfsState {
                node_of_time: vec![e.src],
                used,
                path: vec![0],
            });
            continue;
        }
        for (root, other, dir) in [(e.src, e.dst, 0u8), (e.dst, e.src, 1u8)] {
            let t = CodeEdge {
                from_t: 0,
                to_t: 1,
                from_label: labels[root].clone(),
                dir,
                edge_label: e.label.clone(),
                to_label: labels[other].clone(),
            };
            starts.entry(t).or_default().push(DfsState {
                node_of_time: vec![root, other],
                used: used.clone(),
                path: vec![0, 1],
            });
        }
    }

    let mut code: Vec<CodeEdge> = Vec::new();
    let mut result: Vec<String> = Vec::new();
    search(labels, &edges, &incident, starts, &mut code, &mut result);
    result.join(";")
}

/// Depth-first over code prefixes, smallest extension first; the first
/// complete code reached is the minimum. Returns true once complete.
fn search(
    labels: &[String],
    edges: &[CompEdge],
    incident: &BTreeMap<usize, Vec<usize>>,
    grouped: BTreeMap<CodeEdge, Vec<DfsState>>,
    code: &mut Vec<CodeEdge>,
    result: &mut Vec<String>,
) -> bool {
    for (tuple, mut states) in grouped {
        states.sort();
        states.dedup();
        code.push(tuple);
        let done = states.iter().all(|s| s.used.iter().all(|&u| u));
        if done {
            *result = code.iter().map(|c| c.render()).collect();
            return true;
        }
        let mut next: BTreeMap<CodeEdge, Vec<DfsState>> = BTreeMap::new();
        for state in &states {
            extensions(labels, edges, incident, state, &mut next);
        }
        if search(labels, edges, incident, next, code, result) {
            return true;
        }
        code.pop();
    }
    false
}

fn extensions(
    labels: &[String],
    edges: &[CompEdge],
    incident: &BTreeMap<usize, Vec<usize>>,
    state: &DfsState,
    out: &mut BTreeMap<CodeEdge, Vec<DfsState>>,
) {
    let time_of: BTreeMap<usize, usize> = state
        .node_of_time
        .iter()
        .enumerate()
        .map(|(t, &v)| (v, t))
        .collect();
    let rightmost_t = *state.path.last().expect("path never empty");
    let rightmost_v = state.node_of_time[rightmost_t];
    let on_path: BTreeSet<usize> = state.path.iter().copied().collect();

    // Backward (and self-loop) extensions from the rightmost vertex.
    for &ei in incident.get(&rightmost_v).into_iter().flatten() {
        if state.used[ei] {
            continue;
        }
        let e = &edges[ei];
        let (other, dir) = if e.src == rightmost_v { (e.dst, 0u8) } else { (e.src, 1u8) };
        if other == rightmost_v {
            // self-loop
            let tuple = CodeEdge {
                from_t: rightmost_t,
                to_t: rightmost_t,
                from_label: labels[rightmost_v].clone(),
                dir: 0,
                edge_label: e.label.clone(),
                to_label: labels[rightmost_v].clone(),
            };
            let mut s = state.clone();
            s.used[ei] = true;
            out.entry(tuple).or_default().push(s);
            continue;
        }
        let Some(&t_other) = time_of.get(&other) else { continue };
        if !on_path.contains(&t_other) {
            continue;
        }
        let tuple = CodeEdge {
            from_t: rightmost_t,
            to_t: t_other,
            from_label: labels[rightmost_v].clone(),
            dir,
            edge_label: e.label.clone(),
            to_label: labels[other].clone(),
        };
        let mut s = state.clone();
        s.used[ei] = true;
        out.entry(tuple).or_default().push(s);
    }

    // Forward extensions from every vertex on the rightmost path.
    let new_t = state.node_of_time.len();
    for (pos, &t_u) in state.path.iter().enumerate() {
        let u = state.node_of_time[t_u];
        for &ei in incident.get(&u).into_iter().flatten() {
            if state.used[ei] {
                continue;
            }
            let e = &edges[ei];
            let (other, dir) = if e.src == u { (e.dst, 0u8) } else { (e.src, 1u8) };
            if other == u || time_of.contains_key(&other) {
                continue;
            }
            let tuple = CodeEdge {
                from_t: t_u,
                to_t: new_t,
                from_label: labels[u].clone(),
                dir,
                edge_label: e.label.clone(),
                to_label: labels[other].clone(),
            };
            let mut s = state.clone();
            s.used[ei] = true;
            s.node_of_time.push(other);
            s.path.truncate(pos + 1);
            s.path.push(new_t);
            out.entry(tuple).or_default().push(s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(nodes: &[(&str, &str)], edges: &[(&str, &str, &str)]) -> PatternGraph {
        let mut p = PatternGraph::new();
        for (id, c) in nodes {
            p.add_node(id, c);
        }
        for (s, l, d) in edges {
            p.add_edge(s, l, d);
        }
        p
    }

    #[test]
    fn relabeling_nodes_keeps_code() {
        let p1 = pat(
            &[("u", "A"), ("v", "B"), ("w", "C")],
            &[("u", "p", "v"), ("v", "q", "w")],
        );
        let p2 = pat(
            &[("x9", "A"), ("k", "B"), ("m", "C")],
            &[("x9", "p", "k"), ("k", "q", "m")],
        );
        assert_eq!(canonical_code(&p1), canonical_code(&p2));
    }

    #[test]
    fn direction_changes_code() {
        let p1 = pat(&[("a", "A"), ("b", "B")], &[("a", "p", "b")]);
        let p2 = pat(&[("a", "A"), ("b", "B")], &[("b", "p", "a")]);
        assert_ne!(canonical_code(&p1), canonical_code(&p2));
    }

    #[test]
    fn isolated_nodes_and_components() {
        let p1 = pat(&[("a", "A"), ("b", "B"), ("c", "C")], &[("a", "p", "b")]);
        let p2 = pat(&[("c", "C"), ("x", "A"), ("y", "B")], &[("x", "p", "y")]);
        assert_eq!(canonical_code(&p1), canonical_code(&p2));
    }

    #[test]
    fn self_loop_handled() {
        let p1 = pat(&[("a", "A")], &[("a", "p", "a")]);
        let p2 = pat(&[("z", "A")], &[("z", "p", "z")]);
        let p3 = pat(&[("z", "A")], &[]);
        assert_eq!(canonical_code(&p1), canonical_code(&p2));
        assert_ne!(canonical_code(&p1), canonical_code(&p3));
    }

    #[test]
    fn triangle_vs_path_differ() {
        let tri = pat(
            &[("a", "A"), ("b", "A"), ("c", "A")],
            &[("a", "p", "b"), ("b", "p", "c"), ("c", "p", "a")],
        );
        let path = pat(
            &[("a", "A"), ("b", "A"), ("c", "A")],
            &[("a", "p", "b"), ("b", "p", "c")],
        );
        assert_ne!(canonical_code(&tri), canonical_code(&path));
    }
}
