use std::collections::HashSet;

use crate::error::{Budget, Error, Result};
use crate::fa::{Nfa, StateId};
use crate::graph;

/// States reachable from `from` by a word of length at most `max` (length
/// at least `min`).
fn within(a: &Nfa, from: StateId, min: usize, max: usize) -> HashSet<StateId> {
    let mut out = HashSet::new();
    let mut cur: Vec<StateId> = vec![from];
    for len in 0..=max {
        if len >= min {
            out.extend(cur.iter().copied());
        }
        let mut next: HashSet<StateId> = HashSet::new();
        for &s in &cur {
            for x in 0..a.alphabet().len() {
                next.extend(a.succ(s, x));
            }
        }
        cur = next.into_iter().collect();
    }
    out
}

/// Bounded search for the three conditions: an access word and a loop of
/// length at most `n`, lockstep pairs of walks of length at most `2n²`
/// that differ somewhere, and from both ends a pumpable state with an
/// accepting tail within `n` letters.
fn witness_signal(a: &Nfa) -> bool {
    let n = a.num_states();
    let k = a.alphabet().len();
    let init: Vec<StateId> = a.initial().to_vec();
    let reach: HashSet<StateId> = init.iter().flat_map(|&q| within(a, q, 0, n)).collect();
    let loops = |q: StateId| within(a, q, 1, n).contains(&q);
    let pumpable: Vec<bool> = (0..n)
        .map(|p| loops(p) && within(a, p, 0, n).iter().any(|&f| a.is_accepting(f)))
        .collect();
    let leads_to_pump = |x: StateId| within(a, x, 0, n).iter().any(|&p| pumpable[p]);
    for q in 0..n {
        if !reach.contains(&q) || !loops(q) {
            continue;
        }
        let mut seen: HashSet<(StateId, StateId, bool)> = HashSet::from([(q, q, false)]);
        let mut layer = vec![(q, q, false)];
        for _ in 0..2 * n * n {
            let mut next = vec![];
            for &(x, y, d) in &layer {
                for a1 in 0..k {
                    for a2 in 0..k {
                        for x2 in a.succ(x, a1) {
                            for y2 in a.succ(y, a2) {
                                let s = (x2, y2, d || a1 != a2);
                                if seen.insert(s) {
                                    next.push(s);
                                }
                            }
                        }
                    }
                }
            }
            layer = next;
        }
        if seen.iter().any(|&(x, y, d)| d && leads_to_pump(x) && leads_to_pump(y)) {
            return true;
        }
    }
    false
}

const P1: u64 = (1 << 61) - 1;

fn addm(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P1 {
        s - P1
    } else {
        s
    }
}

/// Counting signal on the trimmed subset automaton with `N` states: for
/// every state `s` on a cycle with shortest loop length `g`, the number of
/// length-`ℓ` runs reaching `s` must be `g`-periodic for `N ≤ ℓ ≤ 2N²`.
/// Counts are kept modulo a large prime.
fn counting_signal(a: &Nfa, budget: &Budget) -> Result<bool> {
    let d = a.determinize(budget)?.to_nfa().trim();
    let n = d.num_states();
    if n == 0 {
        return Ok(false);
    }
    let k = d.alphabet().len();
    let adj: Vec<Vec<usize>> = (0..n).map(|p| (0..k).flat_map(|x| d.succ(p, x).collect::<Vec<_>>()).collect()).collect();
    let cyc = graph::on_cycle(&adj);
    // Shortest closed walk through each cycle state.
    let girth: Vec<usize> = (0..n)
        .map(|s| {
            if !cyc[s] {
                return 0;
            }
            let mut dist = vec![usize::MAX; n];
            let mut dq = std::collections::VecDeque::from([s]);
            dist[s] = 0;
            let mut best = usize::MAX;
            while let Some(p) = dq.pop_front() {
                for &q in &adj[p] {
                    if q == s {
                        best = best.min(dist[p] + 1);
                    } else if dist[q] == usize::MAX {
                        dist[q] = dist[p] + 1;
                        dq.push_back(q);
                    }
                }
            }
            best
        })
        .collect();
    let limit = 2 * n * n + n + 1;
    let mut counts: Vec<Vec<u64>> = vec![vec![0; n]];
    for &q in d.initial() {
        counts[0][q] = 1;
    }
    for l in 0..limit {
        let mut next = vec![0u64; n];
        for p in 0..n {
            if counts[l][p] != 0 {
                for &q in &adj[p] {
                    next[q] = addm(next[q], counts[l][p]);
                }
            }
        }
        counts.push(next);
    }
    for s in 0..n {
        if !cyc[s] {
            continue;
        }
        let g = girth[s];
        for l in n..=2 * n * n {
            if l + g < counts.len() && counts[l][s] != counts[l + g][s] {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Independent slenderness check. Two signals, bounded witness search and
/// periodicity of run counts on the determinized automaton, must agree;
/// otherwise a discrepancy error is raised.
pub fn brute_slender(a: &Nfa, budget: &Budget) -> Result<bool> {
    let a = a.eliminate_epsilon().trim();
    let by_witness = witness_signal(&a);
    let by_count = counting_signal(&a, budget)?;
    if by_witness != by_count {
        return Err(Error::Discrepancy(format!(
            "bounded witness search says {}, run counting says {}",
            if by_witness { "not slender" } else { "slender" },
            if by_count { "not slender" } else { "slender" }
        )));
    }
    Ok(!by_witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn examples() {
        let b = Budget::default();
        assert!(!brute_slender(&fixtures::astar_hash_bstar(), &b).unwrap());
        assert!(brute_slender(&fixtures::astar_b(), &b).unwrap());
    }
}
