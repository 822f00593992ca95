//! Recognizability of binary automatic relations through DVPA regularity.
//! `R` is recognizable iff `L_R = { rev(u) # v | (u, v) ∈ R }` is regular,
//! and `L_R` is accepted by a reverse powerset DVPA: the reversed first
//! component is pushed, the second component pops it letter by letter.

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::{Alphabet, Letter, LetterId};
use crate::error::{Budget, Error, Result};
use crate::fa::{Label, Nfa, StateId};
use crate::regularity::{is_regular, PairVerdict, RegularityStats};
use crate::transducer::{padded_letter_id, padded_letter_parts, SyncTransducer};
use crate::vpa::{Dvpa, PushdownAlphabet};

/// Name of the separator between `rev(u)` and `v`.
pub const SEPARATOR_NAME: &str = "#";

fn fresh_name(base: &str, taken: &dyn Fn(&Letter) -> bool) -> Letter {
    let mut name = base.to_string();
    while taken(&Letter::sym(name.as_str())) {
        name.push('\'');
    }
    Letter::sym(name)
}

/// Renames second-tape letters that also occur on the first tape to fresh
/// `x_2` copies. Transducers with disjoint tapes are returned unchanged.
pub fn disjointify(t: &SyncTransducer) -> Result<SyncTransducer> {
    if t.arity() != 2 {
        return Err(Error::Arity { expected: 2, found: t.arity() });
    }
    let (s1, s2) = (&t.components()[0], &t.components()[1]);
    if !s2.letters().iter().any(|l| s1.index_of(l).is_some()) {
        return Ok(t.clone());
    }
    let mut renamed: Vec<Letter> = vec![];
    for l in s2.letters() {
        let taken = |x: &Letter| s1.index_of(x).is_some() || s2.index_of(x).is_some() || renamed.contains(x);
        let fresh = if s1.index_of(l).is_some() { fresh_name(&format!("{l}_2"), &taken) } else { l.clone() };
        renamed.push(fresh);
    }
    let s2 = Alphabet::new(renamed)?;
    let comps = vec![s1.clone(), s2];
    let nfa = t.nfa().relabel(Alphabet::product(&comps, true), Some);
    SyncTransducer::new(comps, nfa)
}

/// Reverse powerset DVPA for `L_R` together with the provenance of its
/// states.
#[derive(Debug, Clone)]
pub struct LrDvpa {
    pub dvpa: Dvpa,
    /// Transducer (disjoint, epsilon-free) the machine was built from.
    pub source: SyncTransducer,
    pub states: Vec<LrState>,
    /// Stack symbols: the pushed first-tape letter and the backward set
    /// below it.
    pub stack: Vec<(LetterId, Vec<StateId>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LrState {
    /// Before `#`: source states from which the pushed suffix of `u`,
    /// against pads, reaches acceptance.
    Push(Vec<StateId>),
    /// After `#`: forward set over the pairs read so far, and backward set
    /// for the first-tape letters still on the stack.
    Pop(Vec<StateId>, Vec<StateId>),
}

fn render_set(s: &[StateId]) -> String {
    let parts: Vec<String> = s.iter().map(|q| q.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl LrDvpa {
    /// `rev(u) # v` as a word of the DVPA.
    pub fn encode(&self, u: &[LetterId], v: &[LetterId]) -> Vec<LetterId> {
        let (n1, n2) = (self.source.components()[0].len(), self.source.components()[1].len());
        let mut w: Vec<LetterId> = u.iter().rev().copied().collect();
        w.push(n1 + n2);
        w.extend(v.iter().map(|&b| n1 + b));
        w
    }
}

/// Builds the DVPA for `L_R`. Calls are the first tape, returns the second
/// tape, and `#` is the only internal letter. Only subsets reachable from
/// the accepting set are created, and moves into an empty forward set are
/// left undefined.
pub fn build_lr_dvpa(t: &SyncTransducer, budget: &Budget) -> Result<LrDvpa> {
    let t = disjointify(t)?;
    let nfa = t.nfa().eliminate_epsilon();
    let t = SyncTransducer::new(t.components().to_vec(), nfa)?;
    let comps = t.components().to_vec();
    let (s1, s2) = (&comps[0], &comps[1]);
    let a = t.nfa();
    let nq = a.num_states();

    // pre[(x, _)] and post[(x, y)] on sets.
    let mut moves: HashMap<(Option<LetterId>, Option<LetterId>), Vec<(StateId, StateId)>> = HashMap::new();
    for p in 0..nq {
        for &(l, q) in a.edges(p) {
            if let Label::Sym(x) = l {
                let parts = padded_letter_parts(&comps, x);
                moves.entry((parts[0], parts[1])).or_default().push((p, q));
            }
        }
    }
    let pre = |set: &[StateId], x: LetterId| -> Vec<StateId> {
        let mut out: BTreeSet<StateId> = BTreeSet::new();
        for &(p, q) in moves.get(&(Some(x), None)).map(Vec::as_slice).unwrap_or(&[]) {
            if set.binary_search(&q).is_ok() {
                out.insert(p);
            }
        }
        out.into_iter().collect()
    };
    let post = |set: &[StateId], x: Option<LetterId>, y: LetterId| -> Vec<StateId> {
        let mut out: BTreeSet<StateId> = BTreeSet::new();
        for &(p, q) in moves.get(&(x, Some(y))).map(Vec::as_slice).unwrap_or(&[]) {
            if set.binary_search(&p).is_ok() {
                out.insert(q);
            }
        }
        out.into_iter().collect()
    };

    let fin: Vec<StateId> = a.accepting_states();
    let mut init: Vec<StateId> = a.initial().to_vec();
    init.sort_unstable();
    init.dedup();

    let mut states: Vec<LrState> = vec![];
    let mut ids: HashMap<LrState, StateId> = HashMap::new();
    let mut intern = |s: LrState, states: &mut Vec<LrState>| -> Result<StateId> {
        if let Some(&i) = ids.get(&s) {
            return Ok(i);
        }
        budget.check(states.len() + 1, "building the reverse powerset DVPA")?;
        ids.insert(s.clone(), states.len());
        states.push(s);
        Ok(states.len() - 1)
    };
    let mut stack: Vec<(LetterId, Vec<StateId>)> = vec![];
    let mut stack_ids: HashMap<(LetterId, Vec<StateId>), usize> = HashMap::new();
    let mut push_t: Vec<(StateId, LetterId, StateId, usize)> = vec![];
    let mut hash_t: Vec<(StateId, StateId)> = vec![];
    let mut pop_t: Vec<(StateId, LetterId, Option<usize>, StateId)> = vec![];

    intern(LrState::Push(fin.clone()), &mut states)?;
    // Push phase first, so the stack alphabet is complete before popping.
    let mut i = 0;
    while i < states.len() {
        let LrState::Push(set) = states[i].clone() else { unreachable!() };
        for x in 0..s1.len() {
            let next = pre(&set, x);
            let g = *stack_ids.entry((x, set.clone())).or_insert_with(|| {
                stack.push((x, set.clone()));
                stack.len() - 1
            });
            let j = intern(LrState::Push(next), &mut states)?;
            push_t.push((i, x, j, g));
        }
        i += 1;
    }
    let push_count = states.len();
    for i in 0..push_count {
        let LrState::Push(set) = states[i].clone() else { unreachable!() };
        let j = intern(LrState::Pop(init.clone(), set), &mut states)?;
        hash_t.push((i, j));
    }
    let mut i = push_count;
    while i < states.len() {
        let LrState::Pop(fwd, _) = states[i].clone() else { unreachable!() };
        for y in 0..s2.len() {
            for (g, (x, below)) in stack.iter().enumerate() {
                let f2 = post(&fwd, Some(*x), y);
                if !f2.is_empty() {
                    let j = intern(LrState::Pop(f2, below.clone()), &mut states)?;
                    pop_t.push((i, y, Some(g), j));
                }
            }
            let f2 = post(&fwd, None, y);
            if !f2.is_empty() {
                let j = intern(LrState::Pop(f2, fin.clone()), &mut states)?;
                pop_t.push((i, y, None, j));
            }
        }
        i += 1;
    }

    let taken = |l: &Letter| s1.index_of(l).is_some() || s2.index_of(l).is_some();
    let sep = fresh_name(SEPARATOR_NAME, &taken);
    let sigma = PushdownAlphabet::new(s1.letters().to_vec(), s2.letters().to_vec(), vec![sep])?;
    let gamma_letters: Vec<Letter> = stack.iter().map(|(x, set)| Letter::sym(format!("{}{}", s1.letter(*x), render_set(set)))).collect();
    let gamma = if gamma_letters.is_empty() {
        Alphabet::possibly_empty(vec![])?
    } else {
        Alphabet::new(gamma_letters)?
    };
    let (c0, r0, hash) = (0, s1.len(), s1.len() + s2.len());
    let mut d = Dvpa::new(sigma, gamma, states.len(), 0)?;
    d.set_names(
        states
            .iter()
            .map(|s| match s {
                LrState::Push(p) => format!("P{}", render_set(p)),
                LrState::Pop(p, s) => format!("{}|{}", render_set(p), render_set(s)),
            })
            .collect(),
    );
    for (i, s) in states.iter().enumerate() {
        if let LrState::Pop(p, s) = s {
            d.set_accepting(i, p.iter().any(|q| s.binary_search(q).is_ok()));
        }
    }
    for (p, x, q, g) in push_t {
        d.add_push(p, c0 + x, q, g)?;
    }
    for (p, q) in hash_t {
        d.add_int(p, hash, q)?;
    }
    for (p, y, g, q) in pop_t {
        d.add_pop(p, r0 + y, g, q)?;
    }
    debug_assert!(d.vpa().is_deterministic());
    Ok(LrDvpa { dvpa: d, source: t, states, stack })
}

#[derive(Debug, Clone)]
pub struct RecognizabilityReport {
    pub lr_states: usize,
    pub lr_stack: usize,
    pub regularity: RegularityStats,
}

/// Decides recognizability of a binary automatic relation. The witness,
/// if any, is the non-regularity witness of the reverse powerset DVPA.
pub fn is_recognizable(t: &SyncTransducer, budget: &Budget, separator_depth: Option<usize>) -> Result<(PairVerdict, RecognizabilityReport, LrDvpa)> {
    let lr = build_lr_dvpa(t, budget)?;
    let (v, stats) = is_regular(&lr.dvpa, budget, separator_depth)?;
    let report = RecognizabilityReport { lr_states: lr.dvpa.num_states(), lr_stack: lr.stack.len(), regularity: stats };
    Ok((v, report, lr))
}

/// All accepted pairs with both components of length at most `k`.
pub fn accepted_pairs(t: &SyncTransducer, k: usize) -> Vec<(Vec<LetterId>, Vec<LetterId>)> {
    let comps = t.components();
    let mut out = vec![];
    let words = |a: &Alphabet| -> Vec<Vec<LetterId>> {
        let mut all = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..k {
            let mut next = vec![];
            for w in &layer {
                for x in 0..a.len() {
                    let mut w2: Vec<LetterId> = w.clone();
                    w2.push(x);
                    next.push(w2);
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    };
    let nfa: &Nfa = t.nfa();
    for u in words(&comps[0]) {
        for v in words(&comps[1]) {
            let len = u.len().max(v.len());
            let w: Vec<LetterId> = (0..len).map(|i| padded_letter_id(comps, &[u.get(i).copied(), v.get(i).copied()])).collect();
            if nfa.accepts(&w) {
                out.push((u.clone(), v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn eq2_words() {
        let lr = build_lr_dvpa(&fixtures::eq2(), &Budget::default()).unwrap();
        let d = &lr.dvpa;
        assert_eq!(d.sigma().letters().render(&d.word("b a # a_2 b_2").unwrap()), "b a # a_2 b_2");
        assert!(d.accepts(&d.word("b a # a_2 b_2").unwrap()));
        assert!(!d.accepts(&d.word("a b # a_2 b_2").unwrap()));
        assert!(d.accepts(&d.word("#").unwrap()));
        assert!(!d.accepts(&d.word("a #").unwrap()));
    }

    #[test]
    fn fixture_verdicts() {
        let b = Budget::default();
        assert!(!is_recognizable(&fixtures::eq2(), &b, Some(8)).unwrap().0.holds);
        assert!(is_recognizable(&fixtures::tot2(), &b, Some(8)).unwrap().0.holds);
        assert!(!is_recognizable(&fixtures::len1(), &b, Some(8)).unwrap().0.holds);
    }

    #[test]
    fn disjointify_renames_shared_letters() {
        let t = disjointify(&fixtures::eq2()).unwrap();
        assert_eq!(t.components()[1].render(&[0, 1]), "a_2 b_2");
        let l = disjointify(&fixtures::len1()).unwrap();
        assert_eq!(l.components(), fixtures::len1().components());
    }
}
