//! Finite-word relation machines: synchronous transducers (automatic
//! relations, end-padded) and deterministic multi-tape transducers with
//! endmarkers.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Letter, LetterId, Word};
use crate::error::{Budget, Error, Result};
use crate::fa::{intersect, Label, Nfa, StateId};

/// One word per tape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordTuple(pub Vec<Word>);

impl WordTuple {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

/// Letter of a padded product alphabet given by per-component letter ids
/// (`None` is the pad). Ids follow the mixed-radix order of
/// [`Alphabet::product`], in which the all-pad tuple is last.
pub fn padded_letter_id(components: &[Alphabet], parts: &[Option<LetterId>]) -> LetterId {
    let mut id = 0;
    for (c, p) in components.iter().zip(parts) {
        let radix = c.len() + 1;
        id = id * radix + p.unwrap_or(c.len());
    }
    id
}

/// Per-component decomposition of a padded product letter.
pub fn padded_letter_parts(components: &[Alphabet], mut id: LetterId) -> Vec<Option<LetterId>> {
    let mut parts = vec![None; components.len()];
    for (i, c) in components.iter().enumerate().rev() {
        let radix = c.len() + 1;
        let d = id % radix;
        id /= radix;
        parts[i] = if d == c.len() { None } else { Some(d) };
    }
    parts
}

/// Bit mask of padded components of a letter.
fn pad_mask(parts: &[Option<LetterId>]) -> u32 {
    parts.iter().enumerate().filter(|(_, p)| p.is_none()).fold(0, |m, (i, _)| m | (1 << i))
}

/// The language of well-padded words: once a component reads a pad it
/// reads pads forever. States are pad masks; all states accept.
pub fn well_padded(components: &[Alphabet]) -> Nfa {
    let k = components.len();
    assert!(k < 16, "arity too large");
    let alphabet = Alphabet::product(components, true);
    let mut n = Nfa::new(alphabet.clone(), 1 << k);
    n.add_initial(0);
    for m in 0..(1u32 << k) {
        n.set_accepting(m as usize, true);
        for a in 0..alphabet.len() {
            let p = pad_mask(&padded_letter_parts(components, a));
            if p & m == m {
                n.add_edge(m as usize, Label::Sym(a), p as usize);
            }
        }
    }
    n
}

/// Synchronous k-tape transducer: an Nfa over the padded product alphabet.
#[derive(Debug, Clone)]
pub struct SyncTransducer {
    components: Vec<Alphabet>,
    nfa: Nfa,
}

impl SyncTransducer {
    /// Wraps an Nfa over the padded product of `components`. Fails if the
    /// alphabet is not that product or a reachable transition breaks the
    /// padding discipline.
    pub fn new(components: Vec<Alphabet>, nfa: Nfa) -> Result<SyncTransducer> {
        let t = SyncTransducer::unchecked(components, nfa)?;
        if let Some((q, a)) = t.padding_violations().first() {
            return Err(Error::InvalidMachine(format!(
                "transition from state {} on `{}` reads a letter after a pad",
                t.nfa.state_name(*q),
                t.nfa.alphabet().letter(*a)
            )));
        }
        Ok(t)
    }

    fn unchecked(components: Vec<Alphabet>, nfa: Nfa) -> Result<SyncTransducer> {
        if components.is_empty() {
            return Err(Error::InvalidMachine("transducer without tapes".into()));
        }
        let expected = Alphabet::product(&components, true);
        if *nfa.alphabet() != expected {
            return Err(Error::AlphabetMismatch("Nfa alphabet is not the padded product".into()));
        }
        Ok(SyncTransducer { components, nfa })
    }

    /// Wraps an arbitrary Nfa over the padded product after intersecting it
    /// with the well-padded language.
    pub fn restricted(components: Vec<Alphabet>, nfa: &Nfa) -> Result<SyncTransducer> {
        let wp = well_padded(&components);
        let cut = intersect(nfa, &wp)?;
        SyncTransducer::new(components, cut)
    }

    /// Empty transducer with `states` states and no transitions.
    pub fn empty(components: Vec<Alphabet>, states: usize) -> SyncTransducer {
        let alphabet = Alphabet::product(&components, true);
        SyncTransducer { components, nfa: Nfa::new(alphabet, states) }
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Alphabet] {
        &self.components
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    /// Mutable access for builders; callers keep the padding discipline.
    pub fn nfa_mut(&mut self) -> &mut Nfa {
        &mut self.nfa
    }

    pub fn letter_id(&self, parts: &[Option<LetterId>]) -> LetterId {
        padded_letter_id(&self.components, parts)
    }

    pub fn letter_parts(&self, id: LetterId) -> Vec<Option<LetterId>> {
        padded_letter_parts(&self.components, id)
    }

    /// Letter id from component names, `_` standing for the pad.
    pub fn letter_by_names(&self, names: &[&str]) -> Result<LetterId> {
        if names.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), found: names.len() });
        }
        let parts = names
            .iter()
            .zip(&self.components)
            .map(|(n, c)| if *n == crate::alphabet::PAD_NAME { Ok(None) } else { c.id_of_name(n).map(Some) })
            .collect::<Result<Vec<_>>>()?;
        if parts.iter().all(Option::is_none) {
            return Err(Error::InvalidMachine("the all-pad tuple is not a letter".into()));
        }
        Ok(self.letter_id(&parts))
    }

    /// Reachable (state, letter) pairs that read a real letter in a
    /// component already padded on some path to the state.
    pub fn padding_violations(&self) -> Vec<(StateId, LetterId)> {
        let n = self.nfa.num_states();
        let mut masks: Vec<Vec<u32>> = vec![vec![]; n];
        let mut stack: Vec<(StateId, u32)> = vec![];
        for &q in self.nfa.initial() {
            masks[q].push(0);
            stack.push((q, 0));
        }
        let mut bad = vec![];
        while let Some((q, m)) = stack.pop() {
            for &(l, t) in self.nfa.edges(q) {
                let next = match l {
                    Label::Eps => m,
                    Label::Sym(a) => {
                        let p = pad_mask(&self.letter_parts(a));
                        if p & m != m {
                            if !bad.contains(&(q, a)) {
                                bad.push((q, a));
                            }
                            continue;
                        }
                        p
                    }
                };
                if !masks[t].contains(&next) {
                    masks[t].push(next);
                    stack.push((t, next));
                }
            }
        }
        bad.sort_unstable();
        bad
    }

    /// Padded encoding of a tuple.
    pub fn encode(&self, u: &WordTuple) -> Result<Word> {
        if u.arity() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), found: u.arity() });
        }
        for (w, c) in u.0.iter().zip(&self.components) {
            if let Some(&x) = w.iter().find(|&&x| x >= c.len()) {
                return Err(Error::UnknownSymbol(format!("letter index {x}")));
            }
        }
        let len = u.0.iter().map(Vec::len).max().unwrap_or(0);
        Ok((0..len)
            .map(|i| {
                let parts: Vec<Option<LetterId>> = u.0.iter().map(|w| w.get(i).copied()).collect();
                self.letter_id(&parts)
            })
            .collect())
    }

    /// Inverse of [`SyncTransducer::encode`] on well-padded words.
    pub fn decode(&self, w: &[LetterId]) -> WordTuple {
        let mut out = vec![vec![]; self.arity()];
        for &a in w {
            for (i, p) in self.letter_parts(a).into_iter().enumerate() {
                if let Some(x) = p {
                    out[i].push(x);
                }
            }
        }
        WordTuple(out)
    }

    /// Parses one word per tape with [`Alphabet::word`].
    pub fn tuple(&self, words: &[&str]) -> Result<WordTuple> {
        if words.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), found: words.len() });
        }
        Ok(WordTuple(words.iter().zip(&self.components).map(|(w, c)| c.word(w)).collect::<Result<_>>()?))
    }

    pub fn accepts(&self, u: &WordTuple) -> Result<bool> {
        sync_accepts(self, u)
    }
}

/// Membership of a tuple: the padded encoding must be accepted.
pub fn sync_accepts(t: &SyncTransducer, u: &WordTuple) -> Result<bool> {
    Ok(t.nfa.accepts(&t.encode(u)?))
}

/// The padded-product Nfa restricted to well-padded words.
pub fn sync_as_nfa(t: &SyncTransducer) -> Nfa {
    intersect(&t.nfa, &well_padded(&t.components)).expect("same product alphabet")
}

/// Complement relation over all tuples of the component alphabets.
pub fn sync_complement(t: &SyncTransducer, budget: &Budget) -> Result<SyncTransducer> {
    let d = t.nfa.determinize(budget)?.complement();
    SyncTransducer::restricted(t.components.clone(), &d.to_nfa())
}

/// Cylindrification: reinterprets `t` on a wider tuple. Tape `i` of `t`
/// becomes tape `positions[i]` of the result; the other tapes are
/// unconstrained. Letters whose restriction to `t`'s tapes is all-pad are
/// read as idle self-loops, which only occur after `t`'s tapes have ended.
pub fn cylindrify(t: &SyncTransducer, positions: &[usize], components: Vec<Alphabet>) -> Result<SyncTransducer> {
    if positions.len() != t.arity() {
        return Err(Error::Arity { expected: t.arity(), found: positions.len() });
    }
    for (i, &p) in positions.iter().enumerate() {
        if p >= components.len() {
            return Err(Error::IndexOutOfRange { index: p, arity: components.len() });
        }
        if components[p] != t.components[i] {
            return Err(Error::AlphabetMismatch(format!("tape {p}")));
        }
    }
    let src = t.nfa.eliminate_epsilon();
    let mut out = SyncTransducer::empty(components.clone(), src.num_states());
    let wide = Alphabet::product(&components, true);
    let mut by_inner: HashMap<LetterId, Vec<LetterId>> = HashMap::new();
    let mut idle: Vec<LetterId> = vec![];
    for a in 0..wide.len() {
        let parts = padded_letter_parts(&components, a);
        let inner: Vec<Option<LetterId>> = positions.iter().map(|&p| parts[p]).collect();
        if inner.iter().all(Option::is_none) {
            idle.push(a);
        } else {
            by_inner.entry(t.letter_id(&inner)).or_default().push(a);
        }
    }
    let nfa = &mut out.nfa;
    for q in 0..src.num_states() {
        nfa.set_accepting(q, src.is_accepting(q));
        for &(l, r) in src.edges(q) {
            if let Label::Sym(x) = l {
                for &a in by_inner.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                    nfa.add_edge(q, Label::Sym(a), r);
                }
            }
        }
        if src.is_accepting(q) {
            for &a in &idle {
                nfa.add_edge(q, Label::Sym(a), q);
            }
        }
    }
    for &q in src.initial() {
        nfa.add_initial(q);
    }
    SyncTransducer::restricted(components, &out.nfa)
}

/// Synchronous product of languages: accepts `(u, v)` with `u ∈ L(a)` and
/// `v ∈ L(b)`. Both inputs must be epsilon-free.
pub fn sync_product(a: &Nfa, b: &Nfa) -> SyncTransducer {
    assert!(!a.has_epsilon() && !b.has_epsilon(), "sync_product expects epsilon-free inputs");
    let components = vec![a.alphabet().clone(), b.alphabet().clone()];
    let mut t = SyncTransducer::empty(components.clone(), 0);
    // Component state: Some(q) while reading, None once the word has ended.
    let mut ids: HashMap<(Option<StateId>, Option<StateId>), StateId> = HashMap::new();
    let mut todo: Vec<(Option<StateId>, Option<StateId>)> = vec![];
    let mut intern = |key, t: &mut SyncTransducer, todo: &mut Vec<_>| -> StateId {
        *ids.entry(key).or_insert_with(|| {
            todo.push(key);
            let s = t.nfa.add_state();
            let done = |x: Option<StateId>, n: &Nfa| x.map_or(true, |q| n.is_accepting(q));
            t.nfa.set_accepting(s, done(key.0, a) && done(key.1, b));
            s
        })
    };
    for &p in a.initial() {
        for &q in b.initial() {
            let s = intern((Some(p), Some(q)), &mut t, &mut todo);
            t.nfa.add_initial(s);
        }
    }
    let mut i = 0;
    while i < todo.len() {
        let (x, y) = todo[i];
        let moves = |s: Option<StateId>, n: &Nfa| -> Vec<(Option<LetterId>, Option<StateId>)> {
            match s {
                None => vec![(None, None)],
                Some(q) => {
                    let mut v: Vec<_> = n
                        .edges(q)
                        .iter()
                        .filter_map(|&(l, r)| match l {
                            Label::Sym(c) => Some((Some(c), Some(r))),
                            Label::Eps => None,
                        })
                        .collect();
                    if n.is_accepting(q) {
                        v.push((None, None));
                    }
                    v
                }
            }
        };
        for (la, ta) in moves(x, a) {
            for &(lb, tb) in &moves(y, b) {
                if la.is_none() && lb.is_none() {
                    continue;
                }
                let letter = padded_letter_id(&components, &[la, lb]);
                let target = intern((ta, tb), &mut t, &mut todo);
                t.nfa.add_edge(i, Label::Sym(letter), target);
            }
        }
        i += 1;
    }
    t
}

/// Input consumed by a deterministic transducer move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Eps,
    Letter(LetterId),
    End,
}

/// Name of the endmarker symbol (written `HASH` in machine files).
pub const ENDMARKER: &str = "#";

/// Deterministic asynchronous k-tape transducer. Each state reads from one
/// tape; a state with an epsilon move has no other move.
#[derive(Debug, Clone)]
pub struct DetTransducer {
    tapes: Vec<Alphabet>,
    tape_of: Vec<usize>,
    initial: StateId,
    accepting: Vec<bool>,
    trans: Vec<Vec<(Move, StateId)>>,
    names: Option<Vec<String>>,
}

impl DetTransducer {
    pub fn new(tapes: Vec<Alphabet>, tape_of: Vec<usize>, initial: StateId) -> Result<DetTransducer> {
        for t in &tapes {
            if t.index_of(&Letter::sym(ENDMARKER)).is_some() {
                return Err(Error::InvalidAlphabet("the endmarker may not be a tape letter".into()));
            }
        }
        if let Some(&bad) = tape_of.iter().find(|&&t| t >= tapes.len()) {
            return Err(Error::IndexOutOfRange { index: bad, arity: tapes.len() });
        }
        if initial >= tape_of.len() {
            return Err(Error::InvalidMachine("initial state out of range".into()));
        }
        let n = tape_of.len();
        Ok(DetTransducer { tapes, tape_of, initial, accepting: vec![false; n], trans: vec![vec![]; n], names: None })
    }

    pub fn add_transition(&mut self, q: StateId, m: Move, p: StateId) -> Result<()> {
        if q >= self.num_states() || p >= self.num_states() {
            return Err(Error::InvalidMachine("state out of range".into()));
        }
        if let Move::Letter(a) = m {
            if a >= self.tapes[self.tape_of[q]].len() {
                return Err(Error::UnknownSymbol(format!("letter index {a}")));
            }
        }
        let out = &self.trans[q];
        if out.iter().any(|&(m2, _)| m2 == m) {
            return Err(Error::InvalidMachine(format!("two moves from {} on the same input", self.state_name(q))));
        }
        if (m == Move::Eps && !out.is_empty()) || out.iter().any(|&(m2, _)| m2 == Move::Eps) {
            return Err(Error::InvalidMachine(format!("epsilon move of {} competes with another move", self.state_name(q))));
        }
        self.trans[q].push((m, p));
        self.trans[q].sort_unstable();
        Ok(())
    }

    pub fn set_accepting(&mut self, q: StateId, acc: bool) {
        self.accepting[q] = acc;
    }

    pub fn set_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.num_states());
        self.names = Some(names);
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn state_name(&self, q: StateId) -> String {
        self.names.as_ref().map_or_else(|| format!("q{q}"), |n| n[q].clone())
    }

    pub fn tapes(&self) -> &[Alphabet] {
        &self.tapes
    }

    pub fn arity(&self) -> usize {
        self.tapes.len()
    }

    pub fn num_states(&self) -> usize {
        self.tape_of.len()
    }

    pub fn tape_of(&self, q: StateId) -> usize {
        self.tape_of[q]
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn moves(&self, q: StateId) -> &[(Move, StateId)] {
        &self.trans[q]
    }

    pub fn target(&self, q: StateId, m: Move) -> Option<StateId> {
        self.trans[q].iter().find(|&&(m2, _)| m2 == m).map(|&(_, p)| p)
    }

    /// Follows epsilon moves from `q`. Returns the visited chain, and `None`
    /// as last state when the chain closes into a pure-epsilon cycle.
    pub fn eps_chain(&self, q: StateId) -> (Vec<StateId>, Option<StateId>) {
        let mut chain = vec![q];
        let mut cur = q;
        while let Some(p) = self.target(cur, Move::Eps) {
            if chain.contains(&p) {
                return (chain, None);
            }
            chain.push(p);
            cur = p;
        }
        (chain, Some(cur))
    }

    pub fn accepts(&self, u: &WordTuple) -> Result<bool> {
        det_accepts(self, u)
    }
}

/// Runs the unique computation on `u` with one endmarker appended per tape.
/// Stalling, reading past an endmarker and epsilon divergence all reject.
pub fn det_accepts(t: &DetTransducer, u: &WordTuple) -> Result<bool> {
    if u.arity() != t.arity() {
        return Err(Error::Arity { expected: t.arity(), found: u.arity() });
    }
    let mut pos = vec![0usize; t.arity()];
    let mut q = t.initial;
    loop {
        let (chain, last) = t.eps_chain(q);
        let Some(cur) = last else { return Ok(false) };
        let finished = pos.iter().zip(&u.0).all(|(&p, w)| p == w.len() + 1);
        if finished {
            return Ok(chain.iter().any(|&s| t.accepting[s]));
        }
        let tape = t.tape_of[cur];
        let w = &u.0[tape];
        let m = match pos[tape] {
            p if p < w.len() => Move::Letter(w[p]),
            p if p == w.len() => Move::End,
            _ => return Ok(false),
        };
        match t.target(cur, m) {
            Some(p) => {
                pos[tape] += 1;
                q = p;
            }
            None => return Ok(false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn eq2_membership() {
        let t = fixtures::eq2();
        assert!(t.accepts(&t.tuple(&["ab", "ab"]).unwrap()).unwrap());
        assert!(!t.accepts(&t.tuple(&["ab", "a"]).unwrap()).unwrap());
        assert!(matches!(t.accepts(&WordTuple(vec![vec![]])), Err(Error::Arity { .. })));
    }

    #[test]
    fn len1_membership_by_enumeration() {
        let t = fixtures::len1();
        for i in 0..=4 {
            for j in 0..=4 {
                let u = WordTuple(vec![vec![0; i], vec![0; j]]);
                assert_eq!(t.accepts(&u).unwrap(), i == j, "{i} {j}");
            }
        }
    }

    #[test]
    fn gr_and_gs_runs() {
        let gr = fixtures::gr();
        let tup = |a: &str, b: &str| WordTuple(vec![gr.tapes()[0].word(a).unwrap(), gr.tapes()[1].word(b).unwrap()]);
        assert!(det_accepts(&gr, &tup("a", "b")).unwrap());
        assert!(!det_accepts(&gr, &tup("a", "")).unwrap());
        assert!(!det_accepts(&gr, &tup("aa", "b")).unwrap());
        let gs = fixtures::gs();
        assert!(det_accepts(&gs, &tup("aa", "b")).unwrap());
        assert!(!det_accepts(&gs, &tup("a", "b")).unwrap());
    }

    #[test]
    fn det_rejects_eps_cycle_and_competing_moves() {
        let ab = Alphabet::from_names(&["a"]).unwrap();
        let mut t = DetTransducer::new(vec![ab.clone(), ab], vec![0, 0], 0).unwrap();
        t.add_transition(0, Move::Eps, 1).unwrap();
        t.add_transition(1, Move::Eps, 0).unwrap();
        t.set_accepting(0, true);
        assert!(!det_accepts(&t, &WordTuple(vec![vec![], vec![]])).unwrap());
        assert!(t.add_transition(0, Move::End, 1).is_err());
    }

    #[test]
    fn sync_as_nfa_diagonal_and_empty() {
        let t = fixtures::eq2();
        let n = sync_as_nfa(&t);
        assert_eq!(n.alphabet().len(), 8);
        let w = t.encode(&t.tuple(&["ba", "ba"]).unwrap()).unwrap();
        assert!(n.accepts(&w));
        let e = SyncTransducer::empty(t.components().to_vec(), 1);
        assert!(sync_as_nfa(&e).is_empty().holds);
    }

    #[test]
    fn padding_violation_is_detected() {
        let ab = Alphabet::from_names(&["a"]).unwrap();
        let mut t = SyncTransducer::empty(vec![ab.clone(), ab], 1);
        let pad_a = t.letter_by_names(&["_", "a"]).unwrap();
        let a_a = t.letter_by_names(&["a", "a"]).unwrap();
        let n = t.nfa_mut();
        n.add_initial(0);
        n.set_accepting(0, true);
        n.add_edge(0, Label::Sym(pad_a), 0);
        n.add_edge(0, Label::Sym(a_a), 0);
        assert_eq!(t.padding_violations(), vec![(0, a_a)]);
        assert!(SyncTransducer::new(t.components().to_vec(), t.nfa().clone()).is_err());
        let fixed = SyncTransducer::restricted(t.components().to_vec(), t.nfa()).unwrap();
        assert!(fixed.padding_violations().is_empty());
    }

    #[test]
    fn complement_keeps_padding_discipline() {
        let t = fixtures::eq2();
        let c = sync_complement(&t, &Budget::default()).unwrap();
        assert!(c.padding_violations().is_empty());
        assert!(c.accepts(&t.tuple(&["ab", "a"]).unwrap()).unwrap());
        assert!(!c.accepts(&t.tuple(&["ab", "ab"]).unwrap()).unwrap());
    }

    #[test]
    fn sync_product_pads_shorter_word() {
        let ab = Alphabet::from_names(&["a", "b"]).unwrap();
        let mut astar = Nfa::new(ab.clone(), 1);
        astar.add_initial(0);
        astar.set_accepting(0, true);
        astar.add_edge(0, Label::Sym(0), 0);
        let mut bb = Nfa::new(ab, 3);
        bb.add_initial(0);
        bb.add_edge(0, Label::Sym(1), 1);
        bb.add_edge(1, Label::Sym(1), 2);
        bb.set_accepting(2, true);
        let t = sync_product(&astar, &bb);
        assert!(t.padding_violations().is_empty());
        for (u, v, exp) in [("", "bb", true), ("aaa", "bb", true), ("a", "b", false), ("ab", "bb", false)] {
            assert_eq!(t.accepts(&t.tuple(&[u, v]).unwrap()).unwrap(), exp, "{u} {v}");
        }
    }

    #[test]
    fn cylindrify_three_tapes() {
        let t = fixtures::eq2();
        let c = t.components()[0].clone();
        let lifted = cylindrify(&t, &[0, 2], vec![c.clone(), c.clone(), c]).unwrap();
        for (u, v, w, exp) in [("ab", "bbbb", "ab", true), ("ab", "", "ab", true), ("a", "a", "b", false), ("", "aa", "", true)] {
            assert_eq!(lifted.accepts(&lifted.tuple(&[u, v, w]).unwrap()).unwrap(), exp, "{u} {v} {w}");
        }
    }
}
