use crate::alphabet::LetterId;
use crate::error::{Error, Result};
use crate::graph;

use super::{BuchiAutomaton, UPWord};

/// Label of a profile edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    None = 0,
    Edge = 1,
    /// Some run realizing the edge visits an accepting state (endpoints
    /// included).
    Final = 2,
}

impl Mark {
    fn from_u8(x: u8) -> Mark {
        match x {
            0 => Mark::None,
            1 => Mark::Edge,
            _ => Mark::Final,
        }
    }
}

/// Summary of the runs of one automaton over a finite word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionProfile {
    owner: u64,
    n: usize,
    marks: Vec<u8>,
}

impl TransitionProfile {
    /// Profile of the empty word: identity, marked final on accepting states.
    pub fn identity(a: &BuchiAutomaton) -> TransitionProfile {
        let n = a.num_states();
        let mut marks = vec![0; n * n];
        for p in 0..n {
            marks[p * n + p] = if a.nfa().is_accepting(p) { 2 } else { 1 };
        }
        TransitionProfile { owner: a.fingerprint(), n, marks }
    }

    pub fn get(&self, p: usize, q: usize) -> Mark {
        Mark::from_u8(self.marks[p * self.n + q])
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn owner(&self) -> u64 {
        self.owner
    }

    /// Successor lists of the edges of the profile.
    pub fn edge_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|p| (0..self.n).filter(|&q| self.marks[p * self.n + q] > 0).collect()).collect()
    }
}

/// Profile of a single letter.
pub fn profile_of_letter(a: &BuchiAutomaton, x: LetterId) -> TransitionProfile {
    let n = a.num_states();
    let mut marks = vec![0; n * n];
    for p in 0..n {
        for q in a.nfa().succ(p, x) {
            let f = a.nfa().is_accepting(p) || a.nfa().is_accepting(q);
            marks[p * n + q] = if f { 2 } else { 1 };
        }
    }
    TransitionProfile { owner: a.fingerprint(), n, marks }
}

/// Relational composition; an edge is final if some composing pair of
/// edges has a final factor.
pub fn profile_product(s: &TransitionProfile, t: &TransitionProfile) -> Result<TransitionProfile> {
    if s.owner != t.owner || s.n != t.n {
        return Err(Error::ProfileMismatch);
    }
    let n = s.n;
    let mut marks = vec![0u8; n * n];
    for p in 0..n {
        for m in 0..n {
            let a = s.marks[p * n + m];
            if a == 0 {
                continue;
            }
            for q in 0..n {
                let b = t.marks[m * n + q];
                if b == 0 {
                    continue;
                }
                let c = if a == 2 || b == 2 { 2 } else { 1 };
                if c > marks[p * n + q] {
                    marks[p * n + q] = c;
                }
            }
        }
    }
    Ok(TransitionProfile { owner: s.owner, n, marks })
}

pub fn profile_of_word(a: &BuchiAutomaton, w: &[LetterId]) -> TransitionProfile {
    w.iter().fold(TransitionProfile::identity(a), |acc, &x| {
        profile_product(&acc, &profile_of_letter(a, x)).expect("same automaton")
    })
}

/// States from which, inside the graph of `t`, a cycle containing a final
/// edge is reachable.
pub fn f_cycle_reachable(t: &TransitionProfile) -> Vec<bool> {
    let adj = t.edge_lists();
    let ids = graph::scc_ids(&adj);
    let n = t.n;
    let mut hot = vec![false; n];
    for p in 0..n {
        for q in 0..n {
            if t.get(p, q) == Mark::Final && ids[p] == ids[q] {
                hot[p] = true;
            }
        }
    }
    graph::backward(&adj, &hot)
}

/// Lasso acceptance through profiles: some state `p` is reachable from an
/// initial state under τ(u), and from `p` a cycle with a final edge is
/// reachable in τ(v).
pub fn up_accepts_profiles(a: &BuchiAutomaton, w: &UPWord) -> bool {
    let tu = profile_of_word(a, &w.prefix);
    let tv = profile_of_word(a, &w.period);
    let good = f_cycle_reachable(&tv);
    a.nfa().initial().iter().any(|&q0| (0..a.num_states()).any(|p| tu.get(q0, p) != Mark::None && good[p]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::fa::{Label, Nfa};

    fn sample() -> BuchiAutomaton {
        let s = Alphabet::from_names(&["a", "b"]).unwrap();
        let mut n = Nfa::new(s, 2);
        n.add_initial(0);
        n.set_accepting(1, true);
        n.add_edge(0, Label::Sym(0), 0);
        n.add_edge(0, Label::Sym(1), 1);
        n.add_edge(1, Label::Sym(0), 0);
        BuchiAutomaton::new(n).unwrap()
    }

    #[test]
    fn empty_word_profile_is_identity() {
        let a = sample();
        let e = profile_of_word(&a, &[]);
        assert_eq!(e.get(0, 0), Mark::Edge);
        assert_eq!(e.get(1, 1), Mark::Final);
        assert_eq!(e.get(0, 1), Mark::None);
    }

    #[test]
    fn letter_profile_marks_edges_touching_f() {
        let a = sample();
        let b = profile_of_letter(&a, 1);
        assert_eq!(b.get(0, 1), Mark::Final);
        let x = profile_of_letter(&a, 0);
        assert_eq!(x.get(0, 0), Mark::Edge);
        assert_eq!(x.get(1, 0), Mark::Final);
    }

    #[test]
    fn homomorphism_on_ab() {
        let a = sample();
        let lhs = profile_of_word(&a, &[0, 1]);
        let rhs = profile_product(&profile_of_letter(&a, 0), &profile_of_letter(&a, 1)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mismatched_owner() {
        let a = sample();
        let mut n = a.nfa().clone();
        n.add_edge(1, Label::Sym(1), 1);
        let b = BuchiAutomaton::new(n).unwrap();
        let r = profile_product(&profile_of_letter(&a, 0), &profile_of_letter(&b, 0));
        assert_eq!(r, Err(Error::ProfileMismatch));
    }

    #[test]
    fn profiles_decide_lassos() {
        let a = sample();
        // (ab)^ω visits state 1 infinitely often; a^ω never does.
        assert!(up_accepts_profiles(&a, &UPWord::new(vec![], vec![0, 1]).unwrap()));
        assert!(!up_accepts_profiles(&a, &UPWord::new(vec![1], vec![0]).unwrap()));
    }
}
