//! Finite automata over arbitrary finite alphabets.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Letter, LetterId, Word};
use crate::error::{Budget, Error, Result};
use crate::verdict::Verdict;

pub type StateId = usize;

/// Transition label: a letter of the alphabet or the reserved epsilon marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Eps,
    Sym(LetterId),
}

/// Nondeterministic finite automaton with optional epsilon moves.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Label, StateId)>>,
    names: Option<Vec<String>>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, states: usize) -> Nfa {
        Nfa {
            alphabet,
            initial: vec![],
            accepting: vec![false; states],
            edges: vec![vec![]; states],
            names: None,
        }
    }

    pub fn add_state(&mut self) -> StateId {
        self.accepting.push(false);
        self.edges.push(vec![]);
        if let Some(n) = &mut self.names {
            n.push(format!("q{}", n.len()));
        }
        self.accepting.len() - 1
    }

    pub fn add_initial(&mut self, q: StateId) {
        assert!(q < self.num_states(), "state {q} out of range");
        if !self.initial.contains(&q) {
            self.initial.push(q);
            self.initial.sort_unstable();
        }
    }

    pub fn set_accepting(&mut self, q: StateId, acc: bool) {
        self.accepting[q] = acc;
    }

    pub fn add_edge(&mut self, p: StateId, label: Label, q: StateId) {
        assert!(q < self.num_states(), "state {q} out of range");
        if let Label::Sym(a) = label {
            assert!(a < self.alphabet.len(), "letter {a} out of range");
        }
        let out = &mut self.edges[p];
        if !out.contains(&(label, q)) {
            out.push((label, q));
        }
    }

    pub fn set_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.num_states());
        self.names = Some(names);
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn state_name(&self, q: StateId) -> String {
        match &self.names {
            Some(n) => n[q].clone(),
            None => format!("q{q}"),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<StateId> {
        (0..self.num_states()).filter(|&q| self.accepting[q]).collect()
    }

    pub fn edges(&self, q: StateId) -> &[(Label, StateId)] {
        &self.edges[q]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Successors of `q` on letter `a` (epsilon moves excluded).
    pub fn succ(&self, q: StateId, a: LetterId) -> impl Iterator<Item = StateId> + '_ {
        self.edges[q].iter().filter(move |(l, _)| *l == Label::Sym(a)).map(|&(_, t)| t)
    }

    pub fn has_epsilon(&self) -> bool {
        self.edges.iter().flatten().any(|(l, _)| *l == Label::Eps)
    }

    /// Epsilon closure of a set of states, returned sorted.
    pub fn closure(&self, states: &[StateId]) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = states.to_vec();
        for &s in states {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &(l, t) in &self.edges[s] {
                if l == Label::Eps && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        (0..self.num_states()).filter(|&s| seen[s]).collect()
    }

    /// One letter step of the subset simulation (closure applied after).
    pub fn step_set(&self, states: &[StateId], a: LetterId) -> Vec<StateId> {
        let mut next: Vec<StateId> = states.iter().flat_map(|&s| self.succ(s, a)).collect();
        next.sort_unstable();
        next.dedup();
        self.closure(&next)
    }

    /// Forward subset simulation.
    pub fn accepts(&self, w: &[LetterId]) -> bool {
        let mut cur = self.closure(&self.initial);
        for &a in w {
            if cur.is_empty() {
                return false;
            }
            cur = self.step_set(&cur, a);
        }
        cur.iter().any(|&q| self.accepting[q])
    }

    /// Membership for a word given as letters; unknown letters are an error.
    pub fn accepts_letters(&self, w: &[Letter]) -> Result<bool> {
        let ids = w.iter().map(|l| self.alphabet.id(l)).collect::<Result<Vec<_>>>()?;
        Ok(self.accepts(&ids))
    }

    /// Epsilon-free automaton with the same language. Epsilon-free input is
    /// returned unchanged.
    pub fn eliminate_epsilon(&self) -> Nfa {
        if !self.has_epsilon() {
            return self.clone();
        }
        let mut out = Nfa::new(self.alphabet.clone(), self.num_states());
        out.names = self.names.clone();
        for &q in &self.initial {
            out.add_initial(q);
        }
        for q in 0..self.num_states() {
            let cl = self.closure(&[q]);
            out.accepting[q] = cl.iter().any(|&s| self.accepting[s]);
            for &s in &cl {
                for &(l, t) in &self.edges[s] {
                    if l != Label::Eps {
                        out.add_edge(q, l, t);
                    }
                }
            }
        }
        out
    }

    /// Subset construction over reachable subsets; the result is complete
    /// (the empty subset acts as trap when reached).
    pub fn determinize(&self, budget: &Budget) -> Result<Dfa> {
        let k = self.alphabet.len();
        let start = self.closure(&self.initial);
        let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut sets: Vec<Vec<StateId>> = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta: Vec<StateId> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let cur = sets[i].clone();
            for a in 0..k {
                let next = self.step_set(&cur, a);
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        budget.check(id + 1, "determinizing")?;
                        ids.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let accepting = sets.iter().map(|s| s.iter().any(|&q| self.accepting[q])).collect();
        Ok(Dfa { alphabet: self.alphabet.clone(), initial: 0, accepting, delta })
    }

    /// States reachable from the initial states.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &q in &self.initial {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &(_, t) in &self.edges[q] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which `targets` can be reached (targets included).
    pub fn can_reach(&self, targets: &[bool]) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<StateId>> = vec![vec![]; n];
        for p in 0..n {
            for &(_, q) in &self.edges[p] {
                rev[q].push(p);
            }
        }
        let mut seen = targets.to_vec();
        let mut stack: Vec<StateId> = (0..n).filter(|&q| targets[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Restriction to the states selected by `keep`, renumbered in order.
    pub fn restrict(&self, keep: &[bool]) -> Nfa {
        let mut map = vec![usize::MAX; self.num_states()];
        let mut n = 0;
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = n;
                n += 1;
            }
        }
        let mut out = Nfa::new(self.alphabet.clone(), n);
        if let Some(names) = &self.names {
            out.names = Some((0..self.num_states()).filter(|&q| keep[q]).map(|q| names[q].clone()).collect());
        }
        for q in 0..self.num_states() {
            if !keep[q] {
                continue;
            }
            out.accepting[map[q]] = self.accepting[q];
            for &(l, t) in &self.edges[q] {
                if keep[t] {
                    out.add_edge(map[q], l, map[t]);
                }
            }
        }
        for &q in &self.initial {
            if keep[q] {
                out.add_initial(map[q]);
            }
        }
        out
    }

    /// Removes states that are unreachable or cannot reach acceptance.
    pub fn trim(&self) -> Nfa {
        let reach = self.reachable();
        let co = self.can_reach(&self.accepting);
        let keep: Vec<bool> = reach.iter().zip(&co).map(|(a, b)| *a && *b).collect();
        self.restrict(&keep)
    }

    /// Same transition structure with a different initial set.
    pub fn with_initial(&self, init: &[StateId]) -> Nfa {
        let mut out = self.clone();
        out.initial.clear();
        for &q in init {
            out.add_initial(q);
        }
        out
    }

    /// Same transition structure with a different accepting set.
    pub fn with_accepting(&self, acc: &[StateId]) -> Nfa {
        let mut out = self.clone();
        out.accepting = vec![false; self.num_states()];
        for &q in acc {
            out.accepting[q] = true;
        }
        out
    }

    /// Rewrites every letter label through `f` into a new alphabet; `None`
    /// turns the transition into an epsilon move.
    pub fn relabel(&self, alphabet: Alphabet, f: impl Fn(LetterId) -> Option<LetterId>) -> Nfa {
        let mut out = Nfa::new(alphabet, self.num_states());
        out.names = self.names.clone();
        out.initial = self.initial.clone();
        out.accepting = self.accepting.clone();
        for q in 0..self.num_states() {
            for &(l, t) in &self.edges[q] {
                let nl = match l {
                    Label::Eps => Label::Eps,
                    Label::Sym(a) => f(a).map_or(Label::Eps, Label::Sym),
                };
                out.add_edge(q, nl, t);
            }
        }
        out
    }

    /// Emptiness with a shortest accepted word as witness of nonemptiness.
    pub fn is_empty(&self) -> Verdict<Word> {
        is_empty(self)
    }
}

/// Emptiness test by 0-1 breadth-first search; `holds` means empty.
pub fn is_empty(a: &Nfa) -> Verdict<Word> {
    let n = a.num_states();
    let mut dist = vec![usize::MAX; n];
    let mut parent: Vec<Option<(StateId, Label)>> = vec![None; n];
    let mut dq = VecDeque::new();
    for &q in a.initial() {
        dist[q] = 0;
        dq.push_back(q);
    }
    let mut done = vec![false; n];
    while let Some(q) = dq.pop_front() {
        if done[q] {
            continue;
        }
        done[q] = true;
        if a.is_accepting(q) {
            let mut word = vec![];
            let mut cur = q;
            while let Some((p, l)) = parent[cur] {
                if let Label::Sym(x) = l {
                    word.push(x);
                }
                cur = p;
            }
            word.reverse();
            return Verdict::no(word);
        }
        for &(l, t) in a.edges(q) {
            let w = if l == Label::Eps { 0 } else { 1 };
            if dist[q] + w < dist[t] {
                dist[t] = dist[q] + w;
                parent[t] = Some((q, l));
                if w == 0 {
                    dq.push_front(t);
                } else {
                    dq.push_back(t);
                }
            }
        }
    }
    Verdict::yes()
}

fn same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!("{a:?} vs {b:?}")))
    }
}

/// Product automaton over reachable state pairs.
pub fn intersect(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    same_alphabet(a.alphabet(), b.alphabet())?;
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs: Vec<(StateId, StateId)> = vec![];
    let mut out = Nfa::new(a.alphabet().clone(), 0);
    let mut intern = |p: (StateId, StateId), out: &mut Nfa, pairs: &mut Vec<_>| -> StateId {
        *ids.entry(p).or_insert_with(|| {
            pairs.push(p);
            let s = out.add_state();
            out.accepting[s] = a.is_accepting(p.0) && b.is_accepting(p.1);
            s
        })
    };
    for &p in a.initial() {
        for &q in b.initial() {
            let s = intern((p, q), &mut out, &mut pairs);
            out.add_initial(s);
        }
    }
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for &(l, p2) in a.edges(p) {
            match l {
                Label::Eps => {
                    let t = intern((p2, q), &mut out, &mut pairs);
                    out.add_edge(i, Label::Eps, t);
                }
                Label::Sym(x) => {
                    for &(m, q2) in b.edges(q) {
                        if m == l {
                            let t = intern((p2, q2), &mut out, &mut pairs);
                            out.add_edge(i, Label::Sym(x), t);
                        }
                    }
                }
            }
        }
        for &(m, q2) in b.edges(q) {
            if m == Label::Eps {
                let t = intern((p, q2), &mut out, &mut pairs);
                out.add_edge(i, Label::Eps, t);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Disjoint union.
pub fn union(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    same_alphabet(a.alphabet(), b.alphabet())?;
    let off = a.num_states();
    let mut out = Nfa::new(a.alphabet().clone(), off + b.num_states());
    for (src, shift) in [(a, 0), (b, off)] {
        for q in 0..src.num_states() {
            out.accepting[q + shift] = src.is_accepting(q);
            for &(l, t) in src.edges(q) {
                out.add_edge(q + shift, l, t + shift);
            }
        }
        for &q in src.initial() {
            out.add_initial(q + shift);
        }
    }
    Ok(out)
}

/// Arity of a tuple alphabet (every letter must be a tuple of that arity).
pub fn tuple_arity(alphabet: &Alphabet) -> Result<usize> {
    let mut arity = None;
    for l in alphabet.letters() {
        let k = l
            .components()
            .ok_or_else(|| Error::InvalidMachine(format!("letter `{l}` is not a tuple")))?
            .len();
        match arity {
            None => arity = Some(k),
            Some(k0) if k0 != k => return Err(Error::Arity { expected: k0, found: k }),
            _ => {}
        }
    }
    arity.ok_or_else(|| Error::InvalidMachine("empty tuple alphabet".into()))
}

fn projected_letter(l: &Letter, keep: &[usize]) -> Option<Letter> {
    let c = l.components().expect("tuple letter");
    let kept: Vec<Letter> = keep.iter().map(|&i| c[i].clone()).collect();
    if kept.iter().all(Letter::is_pad) {
        None
    } else if kept.len() == 1 {
        Some(kept.into_iter().next().unwrap())
    } else {
        Some(Letter::Tuple(kept))
    }
}

fn check_keep(alphabet: &Alphabet, keep: &[usize]) -> Result<()> {
    let k = tuple_arity(alphabet)?;
    if keep.is_empty() {
        return Err(Error::InvalidMachine("projection keeps no component".into()));
    }
    for &i in keep {
        if i >= k {
            return Err(Error::IndexOutOfRange { index: i, arity: k });
        }
    }
    Ok(())
}

/// Projection onto the components listed in `keep` (0-based). A single kept
/// component yields its letters directly, several yield tuples; letters that
/// project to pads only become epsilon moves. The result alphabet lists the
/// projected letters in order of first appearance.
pub fn project(a: &Nfa, keep: &[usize]) -> Result<Nfa> {
    check_keep(a.alphabet(), keep)?;
    let mut letters: Vec<Letter> = vec![];
    let mut map: Vec<Option<LetterId>> = vec![];
    let mut seen: HashMap<Letter, LetterId> = HashMap::new();
    for l in a.alphabet().letters() {
        match projected_letter(l, keep) {
            None => map.push(None),
            Some(p) => {
                let id = *seen.entry(p.clone()).or_insert_with(|| {
                    letters.push(p);
                    letters.len() - 1
                });
                map.push(Some(id));
            }
        }
    }
    let alphabet = Alphabet::possibly_empty(letters)?;
    Ok(a.relabel(alphabet, |x| map[x]))
}

/// Projection into a given target alphabet; every projected letter must
/// belong to `target`.
pub fn project_onto(a: &Nfa, keep: &[usize], target: &Alphabet) -> Result<Nfa> {
    check_keep(a.alphabet(), keep)?;
    let map = a
        .alphabet()
        .letters()
        .iter()
        .map(|l| projected_letter(l, keep).map(|p| target.id(&p)).transpose())
        .collect::<Result<Vec<_>>>()?;
    Ok(a.relabel(target.clone(), |x| map[x]))
}

/// Complete deterministic finite automaton.
#[derive(Debug, Clone)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: StateId,
    accepting: Vec<bool>,
    delta: Vec<StateId>,
}

impl Dfa {
    /// `delta[q * |alphabet| + a]` is the successor of `q` on `a`.
    pub fn from_parts(alphabet: Alphabet, initial: StateId, accepting: Vec<bool>, delta: Vec<StateId>) -> Result<Dfa> {
        let n = accepting.len();
        if delta.len() != n * alphabet.len() {
            return Err(Error::InvalidMachine("transition table is not total".into()));
        }
        if initial >= n || delta.iter().any(|&t| t >= n) {
            return Err(Error::InvalidMachine("state index out of range".into()));
        }
        Ok(Dfa { alphabet, initial, accepting, delta })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: StateId, a: LetterId) -> StateId {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn run(&self, w: &[LetterId]) -> StateId {
        w.iter().fold(self.initial, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, w: &[LetterId]) -> bool {
        self.accepting[self.run(w)]
    }

    pub fn complement(&self) -> Dfa {
        Dfa { accepting: self.accepting.iter().map(|b| !b).collect(), ..self.clone() }
    }

    pub fn to_nfa(&self) -> Nfa {
        let k = self.alphabet.len();
        let mut out = Nfa::new(self.alphabet.clone(), self.num_states());
        out.add_initial(self.initial);
        for q in 0..self.num_states() {
            out.accepting[q] = self.accepting[q];
            for a in 0..k {
                out.add_edge(q, Label::Sym(a), self.next(q, a));
            }
        }
        out
    }
}

/// Complement of a language given by an Nfa, by determinization.
pub fn complement_nfa(a: &Nfa, budget: &Budget) -> Result<Nfa> {
    Ok(a.determinize(budget)?.complement().to_nfa())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_names(&["a", "b"]).unwrap()
    }

    /// a*b
    fn astar_b() -> Nfa {
        let mut n = Nfa::new(ab(), 2);
        n.add_initial(0);
        n.set_accepting(1, true);
        n.add_edge(0, Label::Sym(0), 0);
        n.add_edge(0, Label::Sym(1), 1);
        n
    }

    /// ab*
    fn a_bstar() -> Nfa {
        let mut n = Nfa::new(ab(), 2);
        n.add_initial(0);
        n.set_accepting(1, true);
        n.add_edge(0, Label::Sym(0), 1);
        n.add_edge(1, Label::Sym(1), 1);
        n
    }

    fn words(k: usize, max: usize) -> Vec<Word> {
        let mut all = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max {
            let mut next = vec![];
            for w in &layer {
                for a in 0..k {
                    let mut v: Word = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }

    #[test]
    fn membership_basics() {
        let a = astar_b();
        assert!(a.accepts(&ab().word("ab").unwrap()));
        assert!(!a.accepts(&ab().word("ba").unwrap()));
        let mut e = Nfa::new(ab(), 1);
        e.add_initial(0);
        e.set_accepting(0, true);
        assert!(e.accepts(&[]));
        assert!(matches!(a.accepts_letters(&[Letter::sym("c")]), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn determinize_suffix_a() {
        // Sigma* a
        let mut n = Nfa::new(ab(), 2);
        n.add_initial(0);
        n.set_accepting(1, true);
        n.add_edge(0, Label::Sym(0), 0);
        n.add_edge(0, Label::Sym(1), 0);
        n.add_edge(0, Label::Sym(0), 1);
        let d = n.determinize(&Budget::default()).unwrap();
        assert_eq!(d.num_states(), 2);
        for w in words(2, 6) {
            assert_eq!(d.accepts(&w), w.last() == Some(&0));
        }
    }

    #[test]
    fn determinize_respects_budget() {
        let mut n = Nfa::new(ab(), 6);
        n.add_initial(0);
        n.add_edge(0, Label::Sym(0), 0);
        n.add_edge(0, Label::Sym(1), 0);
        n.add_edge(0, Label::Sym(0), 1);
        for q in 1..5 {
            n.add_edge(q, Label::Sym(0), q + 1);
            n.add_edge(q, Label::Sym(1), q + 1);
        }
        n.set_accepting(5, true);
        let err = n.determinize(&Budget::new(4)).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }

    #[test]
    fn empty_language_determinizes_to_no_accepting() {
        let mut n = Nfa::new(ab(), 1);
        n.add_initial(0);
        let d = n.determinize(&Budget::default()).unwrap();
        assert!((0..d.num_states()).all(|q| !d.is_accepting(q)));
    }

    #[test]
    fn complement_of_astar_b() {
        let d = astar_b().determinize(&Budget::default()).unwrap().complement();
        for w in words(2, 4) {
            let in_l = !w.is_empty() && w[..w.len() - 1].iter().all(|&x| x == 0) && w[w.len() - 1] == 1;
            assert_eq!(d.accepts(&w), !in_l);
        }
        assert!(!d.accepts(&[0, 1]));
        assert!(d.accepts(&[1, 0]));
    }

    #[test]
    fn intersect_astar_b_with_a_bstar() {
        let i = intersect(&astar_b(), &a_bstar()).unwrap();
        for w in words(2, 4) {
            assert_eq!(i.accepts(&w), w == vec![0, 1]);
        }
        let other = Nfa::new(Alphabet::from_names(&["a"]).unwrap(), 1);
        assert!(matches!(intersect(&astar_b(), &other), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn emptiness_witness_is_shortest() {
        let v = is_empty(&astar_b());
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap(), vec![1]);
        let mut n = Nfa::new(ab(), 2);
        n.add_initial(0);
        n.set_accepting(1, true);
        assert!(is_empty(&n).holds);
    }

    #[test]
    fn epsilon_chain_collapses() {
        let x = Alphabet::from_names(&["x"]).unwrap();
        let mut n = Nfa::new(x, 3);
        n.add_initial(0);
        n.set_accepting(2, true);
        n.add_edge(0, Label::Eps, 1);
        n.add_edge(1, Label::Sym(0), 2);
        let e = n.eliminate_epsilon();
        assert!(!e.has_epsilon());
        assert!(e.edges(0).contains(&(Label::Sym(0), 2)));
        let plain = astar_b();
        let same = plain.eliminate_epsilon();
        assert_eq!(format!("{:?}", plain), format!("{:?}", same));
    }

    #[test]
    fn projection_of_pair_loop() {
        let comps = [Alphabet::from_names(&["a", "b"]).unwrap(), Alphabet::from_names(&["x", "y"]).unwrap()];
        let prod = Alphabet::product(&comps, false);
        let ax = prod.id(&Letter::pair(Letter::sym("a"), Letter::sym("x"))).unwrap();
        let by = prod.id(&Letter::pair(Letter::sym("b"), Letter::sym("y"))).unwrap();
        let mut n = Nfa::new(prod, 1);
        n.add_initial(0);
        n.set_accepting(0, true);
        n.add_edge(0, Label::Sym(ax), 0);
        n.add_edge(0, Label::Sym(by), 0);
        let p = project(&n, &[0]).unwrap();
        assert_eq!(p.alphabet().letters(), &[Letter::sym("a"), Letter::sym("b")]);
        assert!(p.accepts(&[0, 1, 1, 0]));
        let all = project(&n, &[0, 1]).unwrap();
        assert_eq!(all.alphabet(), n.alphabet());
        assert!(matches!(project(&n, &[2]), Err(Error::IndexOutOfRange { .. })));
    }
}
