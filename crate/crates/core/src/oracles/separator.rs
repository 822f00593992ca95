use std::collections::{HashSet, VecDeque};

use crate::alphabet::Word;
use crate::vpa::{Configuration, Dvpa};

/// Configuration pairs visited before the search gives up.
pub const SEPARATOR_SEARCH_LIMIT: usize = 1 << 20;

/// Shortest word of length at most `maxlen` accepted from exactly one of
/// the two configurations, by breadth-first search over configuration
/// pairs. A stalled run is represented by `None` and never accepts again.
/// Gives up after [`SEPARATOR_SEARCH_LIMIT`] pairs.
pub fn bounded_separator(d: &Dvpa, c1: &Configuration, c2: &Configuration, maxlen: usize) -> Option<Word> {
    type Node = (Option<Configuration>, Option<Configuration>);
    let acc = |c: &Option<Configuration>| c.as_ref().is_some_and(|c| d.is_accepting(c.state));
    let start: Node = (Some(c1.clone()), Some(c2.clone()));
    let mut seen: HashSet<Node> = HashSet::from([start.clone()]);
    let mut dq: VecDeque<(Node, Word)> = VecDeque::from([(start, vec![])]);
    while let Some((node, w)) = dq.pop_front() {
        if acc(&node.0) != acc(&node.1) {
            return Some(w);
        }
        if w.len() == maxlen || (node.0.is_none() && node.1.is_none()) {
            continue;
        }
        for a in 0..d.sigma().len() {
            let step = |c: &Option<Configuration>| c.as_ref().and_then(|c| d.step(c, a));
            let next = (step(&node.0), step(&node.1));
            if seen.len() < SEPARATOR_SEARCH_LIMIT && seen.insert(next.clone()) {
                let mut w2 = w.clone();
                w2.push(a);
                dq.push_back((next, w2));
            }
        }
    }
    None
}
