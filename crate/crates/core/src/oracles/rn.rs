use std::collections::HashMap;

use crate::alphabet::{Alphabet, LetterId};
use crate::fa::{Label, StateId};
use crate::transducer::{padded_letter_id, SyncTransducer};

/// The generated machine for `R_n` has at most `RN_STATE_FACTOR · n²`
/// states for every `n ≥ 1`; exactly `(n+1)(3n+2)`.
pub const RN_STATE_FACTOR: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum RnState {
    /// `i` letters of `u` (and `t`) read; the position and `u`-bit under
    /// the `1` of `t`, if seen.
    Read(usize, Option<(usize, LetterId)>),
    /// `j` letters of `v` read after the separator.
    Check(usize, Option<(usize, LetterId)>),
}

/// Deterministic synchronous transducer for
/// `R_n = {(u#v, t) | u,v,t ∈ {0,1}^n, |t|_1 ≤ 1, t[i] = 1 → u[i] = v[i]}`.
/// Tape 1 is over `{0, 1, #}`, tape 2 over `{0, 1}`.
pub fn generate_rn(n: usize) -> SyncTransducer {
    let comps = vec![
        Alphabet::from_names(&["0", "1", "#"]).expect("distinct"),
        Alphabet::from_names(&["0", "1"]).expect("distinct"),
    ];
    let hash = 2;
    let mut t = SyncTransducer::empty(comps.clone(), 0);
    let mut ids: HashMap<RnState, StateId> = HashMap::new();
    let mut todo: Vec<RnState> = vec![];
    let mut edges: Vec<(StateId, LetterId, RnState)> = vec![];
    let start = RnState::Read(0, None);
    ids.insert(start, 0);
    todo.push(start);
    let mut i = 0;
    while i < todo.len() {
        let s = todo[i];
        let from = edges.len();
        match s {
            RnState::Read(k, mark) if k < n => {
                for x in 0..2 {
                    for y in 0..2 {
                        let m2 = match (y, mark) {
                            (1, Some(_)) => continue,
                            (1, None) => Some((k, x)),
                            _ => mark,
                        };
                        edges.push((i, padded_letter_id(&comps, &[Some(x), Some(y)]), RnState::Read(k + 1, m2)));
                    }
                }
            }
            RnState::Read(_, mark) => {
                edges.push((i, padded_letter_id(&comps, &[Some(hash), None]), RnState::Check(0, mark)));
            }
            RnState::Check(j, mark) if j < n => {
                for x in 0..2 {
                    if matches!(mark, Some((pos, b)) if pos == j && b != x) {
                        continue;
                    }
                    edges.push((i, padded_letter_id(&comps, &[Some(x), None]), RnState::Check(j + 1, mark)));
                }
            }
            RnState::Check(..) => {}
        }
        for e in &edges[from..] {
            if !ids.contains_key(&e.2) {
                ids.insert(e.2, todo.len());
                todo.push(e.2);
            }
        }
        i += 1;
    }
    let nfa = t.nfa_mut();
    for _ in 0..todo.len() {
        nfa.add_state();
    }
    nfa.add_initial(0);
    for (s, st) in todo.iter().enumerate() {
        if matches!(st, RnState::Check(j, _) if *j == n) {
            nfa.set_accepting(s, true);
        }
    }
    for (p, l, q) in edges {
        nfa.add_edge(p, Label::Sym(l), ids[&q]);
    }
    let names: Vec<String> = todo
        .iter()
        .map(|s| {
            let (tag, k, m) = match s {
                RnState::Read(k, m) => ("r", k, m),
                RnState::Check(k, m) => ("c", k, m),
            };
            match m {
                None => format!("{tag}{k}"),
                Some((pos, b)) => format!("{tag}{k}_{pos}_{b}"),
            }
        })
        .collect();
    nfa.set_names(names);
    SyncTransducer::new(comps, t.nfa().clone()).expect("R_n respects padding")
}

/// Membership in `R_n` straight from the definition; bits are 0/1 letters.
pub fn rn_member(n: usize, first: &[LetterId], t: &[LetterId]) -> bool {
    if first.len() != 2 * n + 1 || t.len() != n || first[n] != 2 {
        return false;
    }
    let (u, v) = (&first[..n], &first[n + 1..]);
    if u.iter().chain(v).chain(t).any(|&x| x > 1) {
        return false;
    }
    t.iter().filter(|&&x| x == 1).count() <= 1 && (0..n).all(|i| t[i] == 0 || u[i] == v[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::WordTuple;

    fn all_words(k: usize, len: usize) -> Vec<Vec<LetterId>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..k).map(move |x| {
                        let mut w2 = w.clone();
                        w2.push(x);
                        w2
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn matches_definition() {
        for n in 1..=2 {
            let t = generate_rn(n);
            assert_eq!(t.nfa().num_states(), (n + 1) * (3 * n + 2));
            assert!(t.nfa().num_states() <= RN_STATE_FACTOR * n * n);
            for len1 in [2 * n, 2 * n + 1] {
                for first in all_words(3, len1) {
                    for tw in all_words(2, n) {
                        let got = t.accepts(&WordTuple(vec![first.clone(), tw.clone()])).unwrap();
                        assert_eq!(got, rn_member(n, &first, &tw), "{first:?} {tw:?}");
                    }
                }
            }
        }
    }
}
