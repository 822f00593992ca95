//! Slenderness of regular languages (boundedly many words per length).

use std::collections::VecDeque;

use crate::alphabet::{LetterId, Word};
use crate::fa::{Label, Nfa, StateId};
use crate::graph;
use crate::omega::lcm;
use crate::verdict::Verdict;

/// Certificate of non-slenderness: a looping state `q` from which two words
/// that differ at position `index` lead to pumpable states `p1`, `p2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlenderWitness {
    pub q: StateId,
    pub w0: Word,
    pub w: Word,
    pub u1: Word,
    pub u2: Word,
    pub index: usize,
    pub p1: StateId,
    pub p2: StateId,
    pub w1: Word,
    pub w2: Word,
    pub v1: Word,
    pub v2: Word,
}

fn run_set(a: &Nfa, from: &[StateId], w: &[LetterId]) -> Vec<StateId> {
    let mut cur = a.closure(from);
    for &x in w {
        cur = a.step_set(&cur, x);
    }
    cur
}

impl SlenderWitness {
    /// Checks every run condition by direct simulation in `a`.
    pub fn replay(&self, a: &Nfa) -> bool {
        let reaches = |from: StateId, w: &[LetterId], to: StateId| run_set(a, &[from], w).contains(&to);
        let accepts_from = |from: StateId, w: &[LetterId]| run_set(a, &[from], w).iter().any(|&s| a.is_accepting(s));
        run_set(a, a.initial(), &self.w0).contains(&self.q)
            && !self.w.is_empty()
            && reaches(self.q, &self.w, self.q)
            && reaches(self.q, &self.u1, self.p1)
            && reaches(self.q, &self.u2, self.p2)
            && self.index < self.u1.len().min(self.u2.len())
            && self.u1[self.index] != self.u2[self.index]
            && !self.w1.is_empty()
            && reaches(self.p1, &self.w1, self.p1)
            && !self.w2.is_empty()
            && reaches(self.p2, &self.w2, self.p2)
            && accepts_from(self.p1, &self.v1)
            && accepts_from(self.p2, &self.v2)
    }

    /// The `n + 1` words `w0 W^i u W'^(n-i) v` for `i = 0..=n`, where `u`
    /// is whichever of `u1`, `u2` leaves `w^ω`, and `W`, `W'` are the loops
    /// unrolled to a common length. They are pairwise distinct and of equal
    /// length.
    pub fn pump(&self, n: usize) -> Vec<Word> {
        let leaves = |u: &Word| u.iter().enumerate().any(|(j, &x)| x != self.w[j % self.w.len()]);
        let (u, wp, v) = if leaves(&self.u1) { (&self.u1, &self.w1, &self.v1) } else { (&self.u2, &self.w2, &self.v2) };
        let l = lcm(self.w.len(), wp.len());
        let big_w: Word = self.w.iter().copied().cycle().take(l).collect();
        let big_p: Word = wp.iter().copied().cycle().take(l).collect();
        (0..=n)
            .map(|i| {
                let mut out = self.w0.clone();
                for _ in 0..i {
                    out.extend(&big_w);
                }
                out.extend(u);
                for _ in 0..n - i {
                    out.extend(&big_p);
                }
                out.extend(v);
                out
            })
            .collect()
    }
}

/// Shortest word leading from `from` to a state satisfying `goal`.
fn shortest_to(a: &Nfa, from: &[StateId], goal: impl Fn(StateId) -> bool) -> Option<(Word, StateId)> {
    let n = a.num_states();
    let mut parent: Vec<Option<(StateId, LetterId)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut dq = VecDeque::new();
    for &s in from {
        seen[s] = true;
        dq.push_back(s);
    }
    while let Some(s) = dq.pop_front() {
        if goal(s) {
            let mut w = vec![];
            let mut cur = s;
            while let Some((p, x)) = parent[cur] {
                w.push(x);
                cur = p;
            }
            w.reverse();
            return Some((w, s));
        }
        for &(l, t) in a.edges(s) {
            if let Label::Sym(x) = l {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, x));
                    dq.push_back(t);
                }
            }
        }
    }
    None
}

/// Shortest nonempty word looping on `q`.
fn shortest_cycle(a: &Nfa, q: StateId) -> Option<Word> {
    let mut best: Option<Word> = None;
    for &(l, t) in a.edges(q) {
        if let Label::Sym(x) = l {
            if let Some((rest, _)) = shortest_to(a, &[t], |s| s == q) {
                if best.as_ref().map_or(true, |b| rest.len() + 1 < b.len()) {
                    let mut w = vec![x];
                    w.extend(rest);
                    best = Some(w);
                }
            }
        }
    }
    best
}

/// Decides whether `L(a)` is slender. Epsilon moves are eliminated first.
pub fn is_slender(a: &Nfa) -> Verdict<SlenderWitness> {
    let a = a.eliminate_epsilon();
    let n = a.num_states();
    let adj: Vec<Vec<usize>> = (0..n).map(|q| a.edges(q).iter().map(|&(_, t)| t).collect()).collect();
    let reach = a.reachable();
    let looping = graph::on_cycle(&adj);
    let co = a.can_reach(&(0..n).map(|q| a.is_accepting(q)).collect::<Vec<_>>());
    let pump: Vec<bool> = (0..n).map(|q| looping[q] && co[q]).collect();
    let to_pump = graph::backward(&adj, &pump);
    let letters: Vec<Vec<(LetterId, StateId)>> = (0..n)
        .map(|q| a.edges(q).iter().filter_map(|&(l, t)| if let Label::Sym(x) = l { Some((x, t)) } else { None }).collect())
        .collect();
    let code = |x: usize, y: usize, b: usize| (x * n + y) * 2 + b;
    for q in 0..n {
        if !(reach[q] && looping[q]) {
            continue;
        }
        let mut parent: Vec<Option<(usize, LetterId, LetterId)>> = vec![None; n * n * 2];
        let mut seen = vec![false; n * n * 2];
        let start = code(q, q, 0);
        seen[start] = true;
        let mut dq = VecDeque::from([start]);
        let mut found = None;
        while let Some(c) = dq.pop_front() {
            let (b, xy) = (c % 2, c / 2);
            let (x, y) = (xy / n, xy % n);
            if b == 1 && to_pump[x] && to_pump[y] {
                found = Some(c);
                break;
            }
            for &(s1, x2) in &letters[x] {
                for &(s2, y2) in &letters[y] {
                    let nc = code(x2, y2, b | usize::from(s1 != s2));
                    if !seen[nc] {
                        seen[nc] = true;
                        parent[nc] = Some((c, s1, s2));
                        dq.push_back(nc);
                    }
                }
            }
        }
        let Some(end) = found else { continue };
        let (mut l1, mut l2) = (vec![], vec![]);
        let mut cur = end;
        while let Some((p, s1, s2)) = parent[cur] {
            l1.push(s1);
            l2.push(s2);
            cur = p;
        }
        l1.reverse();
        l2.reverse();
        let index = l1.iter().zip(&l2).position(|(s, t)| s != t).expect("flag set by a differing pair");
        let xy = end / 2;
        let (x, y) = (xy / n, xy % n);
        let (t1, p1) = shortest_to(&a, &[x], |s| pump[s]).expect("pump reachable");
        let (t2, p2) = shortest_to(&a, &[y], |s| pump[s]).expect("pump reachable");
        let accepting = |s: StateId| a.is_accepting(s);
        let witness = SlenderWitness {
            q,
            w0: shortest_to(&a, a.initial(), |s| s == q).expect("q reachable").0,
            w: shortest_cycle(&a, q).expect("q loops"),
            u1: l1.into_iter().chain(t1).collect(),
            u2: l2.into_iter().chain(t2).collect(),
            index,
            p1,
            p2,
            w1: shortest_cycle(&a, p1).expect("p1 loops"),
            w2: shortest_cycle(&a, p2).expect("p2 loops"),
            v1: shortest_to(&a, &[p1], accepting).expect("p1 productive").0,
            v2: shortest_to(&a, &[p2], accepting).expect("p2 productive").0,
        };
        return Verdict::no(witness);
    }
    Verdict::yes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::fixtures;

    #[test]
    fn astar_hash_bstar_is_not_slender() {
        let a = fixtures::astar_hash_bstar();
        let v = is_slender(&a);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(w.replay(&a));
        let words = w.pump(3);
        assert!(words.iter().all(|x| a.accepts(x) && x.len() == words[0].len()));
        let mut d = words.clone();
        d.sort();
        d.dedup();
        assert_eq!(d.len(), words.len());
    }

    #[test]
    fn astar_b_is_slender() {
        let s = Alphabet::from_names(&["a", "b"]).unwrap();
        let mut n = Nfa::new(s, 2);
        n.add_initial(0);
        n.set_accepting(1, true);
        n.add_edge(0, Label::Sym(0), 0);
        n.add_edge(0, Label::Sym(1), 1);
        assert!(is_slender(&n).holds);
    }

    #[test]
    fn sigma_star_is_not_slender() {
        let s = Alphabet::from_names(&["a", "b"]).unwrap();
        let mut n = Nfa::new(s, 1);
        n.add_initial(0);
        n.set_accepting(0, true);
        n.add_edge(0, Label::Sym(0), 0);
        n.add_edge(0, Label::Sym(1), 0);
        let v = is_slender(&n);
        assert!(!v.holds && v.witness.unwrap().replay(&n));
    }
}
