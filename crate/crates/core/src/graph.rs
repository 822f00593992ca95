//! Small graph helpers over adjacency lists.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Strongly connected components: component id per node.
pub fn scc_ids(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(adj.len(), 0);
    for _ in 0..adj.len() {
        g.add_node(());
    }
    for (p, out) in adj.iter().enumerate() {
        for &q in out {
            g.add_edge(NodeIndex::new(p), NodeIndex::new(q), ());
        }
    }
    let mut ids = vec![0; adj.len()];
    for (c, comp) in tarjan_scc(&g).into_iter().enumerate() {
        for n in comp {
            ids[n.index()] = c;
        }
    }
    ids
}

/// Nodes lying on a nonempty cycle.
pub fn on_cycle(adj: &[Vec<usize>]) -> Vec<bool> {
    let ids = scc_ids(adj);
    let mut size = vec![0usize; adj.len()];
    for &c in &ids {
        size[c] += 1;
    }
    (0..adj.len()).map(|p| size[ids[p]] > 1 || adj[p].contains(&p)).collect()
}

/// Nodes reachable from `sources` (sources included).
pub fn forward(adj: &[Vec<usize>], sources: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![];
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(p) = stack.pop() {
        for &q in &adj[p] {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    seen
}

/// Nodes from which some node in `targets` is reachable (targets included).
pub fn backward(adj: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let mut rev = vec![vec![]; adj.len()];
    for (p, out) in adj.iter().enumerate() {
        for &q in out {
            rev[q].push(p);
        }
    }
    let sources: Vec<usize> = (0..adj.len()).filter(|&p| targets[p]).collect();
    forward(&rev, &sources)
}
