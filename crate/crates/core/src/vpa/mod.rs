//! Visibly pushdown automata in which the empty stack may be popped.
//!
//! Stacks are stored top-first and without the bottom symbol; a pop of
//! `BOT` fires exactly when the stored stack is empty and leaves it empty.

mod decompose;
mod poststar;
mod wellmatched;

pub use decompose::{call_decomposition, pop_decomposition, CallDecomposition, PopDecomposition};
pub use poststar::{post_star, ConfigAutomaton};
pub use wellmatched::{well_matched_pairs, well_matched_pairs_via_post_star, PairSummaries};

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Letter, LetterId, Word, BOT_NAME};
use crate::error::{Error, Result};
use crate::fa::StateId;

pub type StackId = usize;

/// Stack operation forced by a letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Call,
    Return,
    Internal,
}

/// Input alphabet split into calls, returns and internal letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushdownAlphabet {
    letters: Alphabet,
    kinds: Vec<Kind>,
}

impl PushdownAlphabet {
    pub fn new(calls: Vec<Letter>, returns: Vec<Letter>, internals: Vec<Letter>) -> Result<PushdownAlphabet> {
        let mut kinds = vec![Kind::Call; calls.len()];
        kinds.extend(std::iter::repeat(Kind::Return).take(returns.len()));
        kinds.extend(std::iter::repeat(Kind::Internal).take(internals.len()));
        let mut letters = calls;
        letters.extend(returns);
        letters.extend(internals);
        if letters.iter().any(|l| *l == Letter::sym(BOT_NAME)) {
            return Err(Error::InvalidAlphabet(format!("`{BOT_NAME}` is reserved")));
        }
        let letters = Alphabet::new(letters).map_err(|e| match e {
            Error::InvalidAlphabet(m) => Error::InvalidAlphabet(format!("alphabet parts overlap or are invalid: {m}")),
            other => other,
        })?;
        Ok(PushdownAlphabet { letters, kinds })
    }

    pub fn from_names(calls: &[&str], returns: &[&str], internals: &[&str]) -> Result<PushdownAlphabet> {
        let syms = |xs: &[&str]| xs.iter().map(|s| Letter::sym(*s)).collect();
        PushdownAlphabet::new(syms(calls), syms(returns), syms(internals))
    }

    pub fn letters(&self) -> &Alphabet {
        &self.letters
    }

    pub fn kind(&self, a: LetterId) -> Kind {
        self.kinds[a]
    }

    fn of_kind(&self, k: Kind) -> impl Iterator<Item = LetterId> + '_ {
        (0..self.kinds.len()).filter(move |&a| self.kinds[a] == k)
    }

    pub fn calls(&self) -> Vec<LetterId> {
        self.of_kind(Kind::Call).collect()
    }

    pub fn returns(&self) -> Vec<LetterId> {
        self.of_kind(Kind::Return).collect()
    }

    pub fn internals(&self) -> Vec<LetterId> {
        self.of_kind(Kind::Internal).collect()
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    /// Whether `w` is well-matched.
    pub fn is_well_matched(&self, w: &[LetterId]) -> bool {
        let mut depth = 0usize;
        for &a in w {
            match self.kinds[a] {
                Kind::Call => depth += 1,
                Kind::Return if depth == 0 => return false,
                Kind::Return => depth -= 1,
                Kind::Internal => {}
            }
        }
        depth == 0
    }
}

/// Control state plus stack contents, top first, bottom symbol omitted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<StackId>,
}

impl Configuration {
    pub fn new(state: StateId, stack: Vec<StackId>) -> Configuration {
        Configuration { state, stack }
    }
}

/// Visibly pushdown automaton, possibly nondeterministic.
#[derive(Debug, Clone)]
pub struct Vpa {
    sigma: PushdownAlphabet,
    gamma: Alphabet,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    push: Vec<Vec<(LetterId, StateId, StackId)>>,
    pop: Vec<Vec<(LetterId, Option<StackId>, StateId)>>,
    int: Vec<Vec<(LetterId, StateId)>>,
    names: Option<Vec<String>>,
}

impl Vpa {
    /// `gamma` excludes the bottom symbol.
    pub fn new(sigma: PushdownAlphabet, gamma: Alphabet, states: usize) -> Result<Vpa> {
        if gamma.index_of(&Letter::sym(BOT_NAME)).is_some() {
            return Err(Error::InvalidAlphabet(format!("`{BOT_NAME}` is reserved for the stack bottom")));
        }
        Ok(Vpa {
            sigma,
            gamma,
            initial: vec![],
            accepting: vec![false; states],
            push: vec![vec![]; states],
            pop: vec![vec![]; states],
            int: vec![vec![]; states],
            names: None,
        })
    }

    pub fn add_state(&mut self) -> StateId {
        self.accepting.push(false);
        self.push.push(vec![]);
        self.pop.push(vec![]);
        self.int.push(vec![]);
        if let Some(n) = &mut self.names {
            n.push(format!("q{}", self.accepting.len() - 1));
        }
        self.accepting.len() - 1
    }

    pub fn add_initial(&mut self, q: StateId) {
        if !self.initial.contains(&q) {
            self.initial.push(q);
            self.initial.sort_unstable();
        }
    }

    pub fn set_accepting(&mut self, q: StateId, acc: bool) {
        self.accepting[q] = acc;
    }

    fn check_kind(&self, a: LetterId, k: Kind) -> Result<()> {
        if a >= self.sigma.len() || self.sigma.kind(a) != k {
            return Err(Error::InvalidMachine(format!("letter {a} is not a {k:?} letter")));
        }
        Ok(())
    }

    pub fn add_push(&mut self, p: StateId, c: LetterId, q: StateId, g: StackId) -> Result<()> {
        self.check_kind(c, Kind::Call)?;
        if g >= self.gamma.len() {
            return Err(Error::InvalidMachine(format!("stack symbol {g} out of range")));
        }
        if !self.push[p].contains(&(c, q, g)) {
            self.push[p].push((c, q, g));
        }
        Ok(())
    }

    /// `g = None` pops the bottom.
    pub fn add_pop(&mut self, p: StateId, r: LetterId, g: Option<StackId>, q: StateId) -> Result<()> {
        self.check_kind(r, Kind::Return)?;
        if g.is_some_and(|g| g >= self.gamma.len()) {
            return Err(Error::InvalidMachine("stack symbol out of range".into()));
        }
        if !self.pop[p].contains(&(r, g, q)) {
            self.pop[p].push((r, g, q));
        }
        Ok(())
    }

    pub fn add_int(&mut self, p: StateId, a: LetterId, q: StateId) -> Result<()> {
        self.check_kind(a, Kind::Internal)?;
        if !self.int[p].contains(&(a, q)) {
            self.int[p].push((a, q));
        }
        Ok(())
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

    pub fn sigma(&self) -> &PushdownAlphabet {
        &self.sigma
    }

    pub fn gamma(&self) -> &Alphabet {
        &self.gamma
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

    pub fn pushes(&self, p: StateId) -> &[(LetterId, StateId, StackId)] {
        &self.push[p]
    }

    pub fn pops(&self, p: StateId) -> &[(LetterId, Option<StackId>, StateId)] {
        &self.pop[p]
    }

    pub fn internals(&self, p: StateId) -> &[(LetterId, StateId)] {
        &self.int[p]
    }

    /// All successor configurations on one letter.
    pub fn step(&self, c: &Configuration, a: LetterId) -> Vec<Configuration> {
        let p = c.state;
        match self.sigma.kind(a) {
            Kind::Call => self.push[p]
                .iter()
                .filter(|t| t.0 == a)
                .map(|&(_, q, g)| {
                    let mut s = Vec::with_capacity(c.stack.len() + 1);
                    s.push(g);
                    s.extend_from_slice(&c.stack);
                    Configuration::new(q, s)
                })
                .collect(),
            Kind::Return => {
                let top = c.stack.first().copied();
                self.pop[p]
                    .iter()
                    .filter(|t| t.0 == a && t.1 == top)
                    .map(|&(_, _, q)| Configuration::new(q, c.stack.get(1..).unwrap_or(&[]).to_vec()))
                    .collect()
            }
            Kind::Internal => {
                self.int[p].iter().filter(|t| t.0 == a).map(|&(_, q)| Configuration::new(q, c.stack.clone())).collect()
            }
        }
    }

    /// Nondeterministic acceptance by explicit configuration sets.
    pub fn accepts(&self, w: &[LetterId]) -> bool {
        let mut cur: Vec<Configuration> = self.initial.iter().map(|&q| Configuration::new(q, vec![])).collect();
        for &a in w {
            let mut next: Vec<Configuration> = cur.iter().flat_map(|c| self.step(c, a)).collect();
            next.sort();
            next.dedup();
            cur = next;
        }
        cur.iter().any(|c| self.accepting[c.state])
    }

    /// Whether there is at most one initial state and one outcome per state,
    /// letter and top of stack.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 {
            return false;
        }
        (0..self.num_states()).all(|p| {
            let mut pu: Vec<LetterId> = self.push[p].iter().map(|t| t.0).collect();
            let mut po: Vec<(LetterId, Option<StackId>)> = self.pop[p].iter().map(|t| (t.0, t.1)).collect();
            let mut it: Vec<LetterId> = self.int[p].iter().map(|t| t.0).collect();
            let (a, b, c) = (pu.len(), po.len(), it.len());
            pu.sort_unstable();
            pu.dedup();
            po.sort_unstable();
            po.dedup();
            it.sort_unstable();
            it.dedup();
            pu.len() == a && po.len() == b && it.len() == c
        })
    }
}

/// Deterministic VPA with a single initial state and indexed transitions.
#[derive(Debug, Clone)]
pub struct Dvpa {
    vpa: Vpa,
    push_t: HashMap<(StateId, LetterId), (StateId, StackId)>,
    pop_t: HashMap<(StateId, LetterId, Option<StackId>), StateId>,
    int_t: HashMap<(StateId, LetterId), StateId>,
}

impl Dvpa {
    pub fn new(sigma: PushdownAlphabet, gamma: Alphabet, states: usize, initial: StateId) -> Result<Dvpa> {
        if initial >= states {
            return Err(Error::InvalidMachine("initial state out of range".into()));
        }
        let mut vpa = Vpa::new(sigma, gamma, states)?;
        vpa.add_initial(initial);
        Ok(Dvpa { vpa, push_t: HashMap::new(), pop_t: HashMap::new(), int_t: HashMap::new() })
    }

    /// Wraps a Vpa after checking determinism.
    pub fn from_vpa(vpa: Vpa) -> Result<Dvpa> {
        if vpa.initial.len() != 1 {
            return Err(Error::InvalidMachine("a DVPA has exactly one initial state".into()));
        }
        let mut d = Dvpa::new(vpa.sigma.clone(), vpa.gamma.clone(), vpa.num_states(), vpa.initial[0])?;
        d.vpa.names = vpa.names.clone();
        d.vpa.accepting = vpa.accepting.clone();
        for p in 0..vpa.num_states() {
            for &(c, q, g) in &vpa.push[p] {
                d.add_push(p, c, q, g)?;
            }
            for &(r, g, q) in &vpa.pop[p] {
                d.add_pop(p, r, g, q)?;
            }
            for &(a, q) in &vpa.int[p] {
                d.add_int(p, a, q)?;
            }
        }
        Ok(d)
    }

    fn conflict(p: StateId) -> Error {
        Error::InvalidMachine(format!("nondeterminism at state {p}"))
    }

    pub fn add_push(&mut self, p: StateId, c: LetterId, q: StateId, g: StackId) -> Result<()> {
        match self.push_t.get(&(p, c)) {
            Some(&old) if old != (q, g) => return Err(Dvpa::conflict(p)),
            _ => {}
        }
        self.vpa.add_push(p, c, q, g)?;
        self.push_t.insert((p, c), (q, g));
        Ok(())
    }

    pub fn add_pop(&mut self, p: StateId, r: LetterId, g: Option<StackId>, q: StateId) -> Result<()> {
        match self.pop_t.get(&(p, r, g)) {
            Some(&old) if old != q => return Err(Dvpa::conflict(p)),
            _ => {}
        }
        self.vpa.add_pop(p, r, g, q)?;
        self.pop_t.insert((p, r, g), q);
        Ok(())
    }

    pub fn add_int(&mut self, p: StateId, a: LetterId, q: StateId) -> Result<()> {
        match self.int_t.get(&(p, a)) {
            Some(&old) if old != q => return Err(Dvpa::conflict(p)),
            _ => {}
        }
        self.vpa.add_int(p, a, q)?;
        self.int_t.insert((p, a), q);
        Ok(())
    }

    pub fn set_accepting(&mut self, q: StateId, acc: bool) {
        self.vpa.set_accepting(q, acc);
    }

    pub fn set_names(&mut self, names: Vec<String>) {
        self.vpa.set_names(names);
    }

    pub fn vpa(&self) -> &Vpa {
        &self.vpa
    }

    pub fn sigma(&self) -> &PushdownAlphabet {
        &self.vpa.sigma
    }

    pub fn gamma(&self) -> &Alphabet {
        &self.vpa.gamma
    }

    pub fn num_states(&self) -> usize {
        self.vpa.num_states()
    }

    pub fn initial(&self) -> StateId {
        self.vpa.initial[0]
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.vpa.accepting[q]
    }

    pub fn state_name(&self, q: StateId) -> String {
        self.vpa.state_name(q)
    }

    pub fn push_target(&self, p: StateId, c: LetterId) -> Option<(StateId, StackId)> {
        self.push_t.get(&(p, c)).copied()
    }

    pub fn pop_target(&self, p: StateId, r: LetterId, g: Option<StackId>) -> Option<StateId> {
        self.pop_t.get(&(p, r, g)).copied()
    }

    pub fn int_target(&self, p: StateId, a: LetterId) -> Option<StateId> {
        self.int_t.get(&(p, a)).copied()
    }

    pub fn step(&self, c: &Configuration, a: LetterId) -> Option<Configuration> {
        let p = c.state;
        match self.sigma().kind(a) {
            Kind::Call => self.push_target(p, a).map(|(q, g)| {
                let mut s = Vec::with_capacity(c.stack.len() + 1);
                s.push(g);
                s.extend_from_slice(&c.stack);
                Configuration::new(q, s)
            }),
            Kind::Return => self
                .pop_target(p, a, c.stack.first().copied())
                .map(|q| Configuration::new(q, c.stack.get(1..).unwrap_or(&[]).to_vec())),
            Kind::Internal => self.int_target(p, a).map(|q| Configuration::new(q, c.stack.clone())),
        }
    }

    /// Runs `w` from `c`; `None` if the run stalls.
    pub fn run(&self, c: &Configuration, w: &[LetterId]) -> Option<Configuration> {
        let mut cur = c.clone();
        for &a in w {
            cur = self.step(&cur, a)?;
        }
        Some(cur)
    }

    pub fn initial_config(&self) -> Configuration {
        Configuration::new(self.initial(), vec![])
    }

    pub fn accepts(&self, w: &[LetterId]) -> bool {
        self.accepts_from(&self.initial_config(), w)
    }

    pub fn accepts_from(&self, c: &Configuration, w: &[LetterId]) -> bool {
        self.run(c, w).is_some_and(|e| self.is_accepting(e.state))
    }

    /// Copy keeping only the states in `keep`, renumbered in order.
    pub fn restrict(&self, keep: &[bool]) -> Result<Dvpa> {
        let mut map = vec![None; self.num_states()];
        let mut next = 0;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                map[q] = Some(next);
                next += 1;
            }
        }
        let init = map[self.initial()].ok_or_else(|| Error::InvalidMachine("initial state removed".into()))?;
        let mut d = Dvpa::new(self.sigma().clone(), self.gamma().clone(), next, init)?;
        if let Some(names) = &self.vpa.names {
            d.set_names((0..self.num_states()).filter(|&q| keep[q]).map(|q| names[q].clone()).collect());
        }
        for p in 0..self.num_states() {
            let Some(np) = map[p] else { continue };
            d.set_accepting(np, self.is_accepting(p));
            for &(c, q, g) in self.vpa.pushes(p) {
                if let Some(nq) = map[q] {
                    d.add_push(np, c, nq, g)?;
                }
            }
            for &(r, g, q) in self.vpa.pops(p) {
                if let Some(nq) = map[q] {
                    d.add_pop(np, r, g, nq)?;
                }
            }
            for &(a, q) in self.vpa.internals(p) {
                if let Some(nq) = map[q] {
                    d.add_int(np, a, nq)?;
                }
            }
        }
        Ok(d)
    }

    /// Whether every move, including every pop of the empty stack, is defined.
    pub fn is_complete(&self) -> bool {
        let s = self.sigma();
        let ng = self.gamma().len();
        (0..self.num_states()).all(|p| {
            s.calls().iter().all(|&c| self.push_target(p, c).is_some())
                && s.internals().iter().all(|&a| self.int_target(p, a).is_some())
                && s.returns().iter().all(|&r| {
                    self.pop_target(p, r, None).is_some() && (0..ng).all(|g| self.pop_target(p, r, Some(g)).is_some())
                })
        })
    }

    /// Same language with a rejecting sink added as the last state so that
    /// no run stalls. If the stack alphabet is empty and there are calls, a
    /// stack letter `sink` is appended as well. Complete machines are
    /// returned unchanged.
    pub fn complete(&self) -> Result<Dvpa> {
        if self.is_complete() {
            return Ok(self.clone());
        }
        let s = self.sigma().clone();
        let mut gamma = self.gamma().clone();
        if gamma.is_empty() && !s.calls().is_empty() {
            gamma = Alphabet::new(vec![Letter::sym("sink")])?;
        }
        let n = self.num_states();
        let sink = n;
        let mut d = Dvpa::new(s.clone(), gamma.clone(), n + 1, self.initial())?;
        let mut names: Vec<String> = (0..n).map(|q| self.state_name(q)).collect();
        let mut sink_name = "sink".to_string();
        while names.contains(&sink_name) {
            sink_name.push('_');
        }
        names.push(sink_name);
        d.set_names(names);
        for p in 0..=n {
            if p < n {
                d.set_accepting(p, self.is_accepting(p));
            }
            for c in s.calls() {
                let (q, g) = if p < n { self.push_target(p, c).unwrap_or((sink, 0)) } else { (sink, 0) };
                d.add_push(p, c, q, g)?;
            }
            for a in s.internals() {
                let q = if p < n { self.int_target(p, a).unwrap_or(sink) } else { sink };
                d.add_int(p, a, q)?;
            }
            for r in s.returns() {
                for g in std::iter::once(None).chain((0..gamma.len()).map(Some)) {
                    let q = if p < n { self.pop_target(p, r, g).unwrap_or(sink) } else { sink };
                    d.add_pop(p, r, g, q)?;
                }
            }
        }
        Ok(d)
    }

    /// Renders a configuration as `state: g1 g2 ...`.
    pub fn render_config(&self, c: &Configuration) -> String {
        let stack: Vec<String> = c.stack.iter().map(|&g| self.gamma().letter(g).to_string()).collect();
        format!("({}, [{}])", self.state_name(c.state), stack.join(" "))
    }

    pub fn render_word(&self, w: &[LetterId]) -> String {
        self.sigma().letters().render(w)
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        self.sigma().letters().word(text)
    }
}

/// Product running two copies on a common input; stack symbols are pairs
/// and popping the empty stack is not allowed.
pub fn square(d: &Dvpa) -> Vpa {
    let n = d.num_states();
    let ng = d.gamma().len();
    let gamma2 = Alphabet::product(&[d.gamma().clone(), d.gamma().clone()], false);
    let mut v = Vpa::new(d.sigma().clone(), gamma2, n * n).expect("pair stack alphabet");
    v.add_initial(d.initial() * n + d.initial());
    let sig = d.sigma();
    let (calls, rets, ints) = (sig.calls(), sig.returns(), sig.internals());
    for a in 0..n {
        for b in 0..n {
            let x = a * n + b;
            v.set_accepting(x, d.is_accepting(a) && d.is_accepting(b));
            for &c in &calls {
                if let (Some((a1, g1)), Some((b1, g2))) = (d.push_target(a, c), d.push_target(b, c)) {
                    v.add_push(x, c, a1 * n + b1, g1 * ng + g2).expect("typed");
                }
            }
            for &r in &rets {
                for &(r2, g1, a1) in d.vpa().pops(a) {
                    let Some(g1) = g1 else { continue };
                    if r2 != r {
                        continue;
                    }
                    for &(r3, g2, b1) in d.vpa().pops(b) {
                        if let (true, Some(g2)) = (r3 == r, g2) {
                            v.add_pop(x, r, Some(g1 * ng + g2), a1 * n + b1).expect("typed");
                        }
                    }
                }
            }
            for &i in &ints {
                if let (Some(a1), Some(b1)) = (d.int_target(a, i), d.int_target(b, i)) {
                    v.add_int(x, i, a1 * n + b1).expect("typed");
                }
            }
        }
    }
    let names = (0..n * n).map(|x| format!("({},{})", d.state_name(x / n), d.state_name(x % n))).collect();
    v.set_names(names);
    v
}
