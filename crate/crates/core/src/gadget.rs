//! From intersection emptiness of deterministic transducers to equivalence
//! of deterministic Büchi transducers: normal form, the `B_R`/`B_S` pair and
//! lasso evaluation.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Letter, LetterId};
use crate::error::{Error, Result};
use crate::fa::StateId;
use crate::omega::UPWord;
use crate::transducer::{DetTransducer, Move, ENDMARKER};

/// A deterministic transducer in normal form: the initial state has no
/// incoming moves, and every run on a complete input ends in exactly one of
/// two sinks, entered by an endmarker move that finishes the last tape.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub machine: DetTransducer,
    pub accept: StateId,
    pub reject: StateId,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum NState {
    Init,
    Run(StateId, u32),
    Drain(u32),
    Accept,
    Reject,
}

fn unique_names(mut names: Vec<String>) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    for n in names.iter_mut() {
        while !seen.insert(n.clone()) {
            n.push('\'');
        }
    }
    names
}

/// Brings `a` into normal form. States of the result are pairs of an
/// original state and the set of tapes whose endmarker has been read, plus
/// drain states that consume the rest of a rejected input.
pub fn normalize(a: &DetTransducer) -> Normalized {
    let k = a.arity();
    let full: u32 = (1 << k) - 1;
    // Where a run lands after epsilon moves from `p`, given ended tapes `e`.
    let resolve = |p: StateId, e: u32| -> NState {
        let (chain, last) = a.eps_chain(p);
        if e == full {
            return if last.is_some() && chain.iter().any(|&s| a.is_accepting(s)) { NState::Accept } else { NState::Reject };
        }
        match last {
            Some(q) if e & (1 << a.tape_of(q)) == 0 => NState::Run(q, e),
            _ => NState::Drain(e),
        }
    };
    let drain = |e: u32| if e == full { NState::Reject } else { NState::Drain(e) };
    let first_open = |e: u32| (0..k).find(|t| e & (1 << t) == 0).expect("some tape open");

    let mut ids: HashMap<NState, StateId> = HashMap::new();
    let mut order: Vec<NState> = vec![];
    let intern = |s: NState, ids: &mut HashMap<NState, StateId>, order: &mut Vec<NState>| -> StateId {
        *ids.entry(s).or_insert_with(|| {
            order.push(s);
            order.len() - 1
        })
    };
    for s in [NState::Init, NState::Accept, NState::Reject] {
        intern(s, &mut ids, &mut order);
    }
    let start = resolve(a.initial(), 0);
    let mut edges: Vec<(StateId, Move, StateId)> = vec![];
    let mut tape_of: Vec<usize> = vec![];
    let mut i = 0;
    while i < order.len() {
        let s = order[i];
        // The fresh initial state behaves like the first real state.
        let body = if s == NState::Init { start } else { s };
        let (tape, moves): (usize, Vec<(Move, NState)>) = match body {
            NState::Run(q, e) => {
                let t = a.tape_of(q);
                let mut mv: Vec<(Move, NState)> = (0..a.tapes()[t].len())
                    .map(|x| (Move::Letter(x), a.target(q, Move::Letter(x)).map_or(drain(e), |p| resolve(p, e))))
                    .collect();
                let e2 = e | (1 << t);
                mv.push((Move::End, a.target(q, Move::End).map_or(drain(e2), |p| resolve(p, e2))));
                (t, mv)
            }
            NState::Drain(e) => {
                let t = first_open(e);
                let mut mv: Vec<(Move, NState)> = (0..a.tapes()[t].len()).map(|x| (Move::Letter(x), NState::Drain(e))).collect();
                mv.push((Move::End, drain(e | (1 << t))));
                (t, mv)
            }
            _ => (0, vec![]),
        };
        tape_of.push(tape);
        for (m, target) in moves {
            let j = intern(target, &mut ids, &mut order);
            edges.push((i, m, j));
        }
        i += 1;
    }
    let tape_name = |e: u32| -> String { (0..k).filter(|t| e & (1 << t) != 0).map(|t| (t + 1).to_string()).collect() };
    let names = order
        .iter()
        .map(|s| match *s {
            NState::Init => "init".to_string(),
            NState::Accept => "acc".to_string(),
            NState::Reject => "rej".to_string(),
            NState::Run(q, 0) => a.state_name(q),
            NState::Run(q, e) => format!("{}.e{}", a.state_name(q), tape_name(e)),
            NState::Drain(e) => format!("drain.e{}", tape_name(e)),
        })
        .collect();
    let mut t = DetTransducer::new(a.tapes().to_vec(), tape_of, 0).expect("tapes unchanged");
    for (p, m, q) in edges {
        t.add_transition(p, m, q).expect("one move per input");
    }
    t.set_accepting(1, true);
    t.set_names(unique_names(names));
    Normalized { machine: t, accept: 1, reject: 2 }
}

/// Deterministic Büchi transducer. Like [`DetTransducer`] each state reads
/// one tape, but `#` is an ordinary letter and acceptance is by visiting a
/// Büchi state infinitely often while every tape advances.
#[derive(Debug, Clone)]
pub struct DetBuchiTransducer {
    tapes: Vec<Alphabet>,
    tape_of: Vec<usize>,
    initial: StateId,
    buchi: Vec<bool>,
    trans: Vec<Vec<(Move, StateId)>>,
    names: Option<Vec<String>>,
}

impl DetBuchiTransducer {
    pub fn new(tapes: Vec<Alphabet>, tape_of: Vec<usize>, initial: StateId) -> Result<DetBuchiTransducer> {
        if let Some(&bad) = tape_of.iter().find(|&&t| t >= tapes.len()) {
            return Err(Error::IndexOutOfRange { index: bad, arity: tapes.len() });
        }
        if initial >= tape_of.len() {
            return Err(Error::InvalidMachine("initial state out of range".into()));
        }
        let n = tape_of.len();
        Ok(DetBuchiTransducer { tapes, tape_of, initial, buchi: vec![false; n], trans: vec![vec![]; n], names: None })
    }

    pub fn add_transition(&mut self, q: StateId, m: Move, p: StateId) -> Result<()> {
        if q >= self.num_states() || p >= self.num_states() {
            return Err(Error::InvalidMachine("state out of range".into()));
        }
        match m {
            Move::End => return Err(Error::InvalidMachine("Büchi transducers have no endmarker move".into())),
            Move::Letter(a) if a >= self.tapes[self.tape_of[q]].len() => {
                return Err(Error::UnknownSymbol(format!("letter index {a}")));
            }
            _ => {}
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

    pub fn set_buchi(&mut self, q: StateId, b: bool) {
        self.buchi[q] = b;
    }

    pub fn is_buchi(&self, q: StateId) -> bool {
        self.buchi[q]
    }

    pub fn set_initial(&mut self, q: StateId) {
        assert!(q < self.num_states());
        self.initial = q;
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

    pub fn moves(&self, q: StateId) -> &[(Move, StateId)] {
        &self.trans[q]
    }

    pub fn target(&self, q: StateId, m: Move) -> Option<StateId> {
        self.trans[q].iter().find(|&&(m2, _)| m2 == m).map(|&(_, p)| p)
    }

    /// Same transitions and Büchi states, up to the choice of initial state.
    pub fn same_structure(&self, other: &DetBuchiTransducer) -> bool {
        self.tapes == other.tapes && self.tape_of == other.tape_of && self.buchi == other.buchi && self.trans == other.trans
    }
}

/// The unique run on a tuple of lassos, folded into stem and cycle. A
/// stalled run has an empty cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoRun {
    pub stem: Vec<StateId>,
    pub cycle: Vec<StateId>,
    /// Whether each tape is read inside the cycle.
    pub advances: Vec<bool>,
}

impl LassoRun {
    pub fn accepting(&self, b: &DetBuchiTransducer) -> bool {
        !self.cycle.is_empty() && self.advances.iter().all(|&x| x) && self.cycle.iter().any(|&q| b.is_buchi(q))
    }
}

/// Simulates `b` on `words` over the finite space of (state, folded tape
/// positions) until a configuration repeats.
pub fn lasso_run(b: &DetBuchiTransducer, words: &[UPWord]) -> Result<LassoRun> {
    if words.len() != b.arity() {
        return Err(Error::Arity { expected: b.arity(), found: words.len() });
    }
    for (w, tape) in words.iter().zip(&b.tapes) {
        if w.period.is_empty() {
            return Err(Error::InvalidMachine("lasso period must be nonempty".into()));
        }
        if let Some(&x) = w.prefix.iter().chain(&w.period).find(|&&x| x >= tape.len()) {
            return Err(Error::UnknownSymbol(format!("letter index {x}")));
        }
    }
    let fold = |w: &UPWord, p: usize| if p < w.prefix.len() + w.period.len() { p } else { w.prefix.len() + (p - w.prefix.len()) % w.period.len() };
    let mut pos = vec![0usize; words.len()];
    let mut q = b.initial;
    let mut trace: Vec<(StateId, Option<usize>)> = vec![];
    let mut seen: HashMap<(StateId, Vec<usize>), usize> = HashMap::new();
    loop {
        if let Some(&start) = seen.get(&(q, pos.clone())) {
            let stem = trace[..start].iter().map(|&(s, _)| s).collect();
            let mut advances = vec![false; words.len()];
            for &(_, t) in &trace[start..] {
                if let Some(t) = t {
                    advances[t] = true;
                }
            }
            let cycle = trace[start..].iter().map(|&(s, _)| s).collect();
            return Ok(LassoRun { stem, cycle, advances });
        }
        seen.insert((q, pos.clone()), trace.len());
        let next = match b.target(q, Move::Eps) {
            Some(p) => Some((p, None)),
            None => {
                let t = b.tape_of[q];
                let x = words[t].letter_at(pos[t]);
                b.target(q, Move::Letter(x)).map(|p| (p, Some(t)))
            }
        };
        let Some((p, read)) = next else {
            let mut stem: Vec<StateId> = trace.iter().map(|&(s, _)| s).collect();
            stem.push(q);
            return Ok(LassoRun { stem, cycle: vec![], advances: vec![false; words.len()] });
        };
        trace.push((q, read));
        if let Some(t) = read {
            pos[t] = fold(&words[t], pos[t] + 1);
        }
        q = p;
    }
}

/// Büchi acceptance of the unique run: a Büchi state recurs and every tape
/// is read infinitely often.
pub fn det_buchi_lasso_accepts(b: &DetBuchiTransducer, words: &[UPWord]) -> Result<bool> {
    Ok(lasso_run(b, words)?.accepting(b))
}

/// `B_R` and `B_S` over the states of both normal forms (those of `A_R`
/// first), with their designated states.
#[derive(Debug, Clone)]
pub struct GadgetPair {
    pub b_r: DetBuchiTransducer,
    pub b_s: DetBuchiTransducer,
    pub accept_r: StateId,
    pub reject_r: StateId,
    pub accept_s: StateId,
    pub reject_s: StateId,
}

/// Each tape alphabet extended by `#` as its last letter.
pub fn with_endmarker(tapes: &[Alphabet]) -> Vec<Alphabet> {
    tapes
        .iter()
        .map(|a| {
            let mut l = a.letters().to_vec();
            l.push(Letter::sym(ENDMARKER));
            Alphabet::new(l).expect("endmarker is fresh")
        })
        .collect()
}

fn as_buchi_move(tapes: &[Alphabet], tape: usize, m: Move) -> Move {
    match m {
        Move::End => Move::Letter(tapes[tape].len()),
        other => other,
    }
}

/// The gadget: the union of both machines where the accepting sink of each
/// restarts it and the rejecting sink of each switches to the other one.
/// Büchi states are `q_a^R`, `q_r^R`, `q_r^S`; `q_a^S` is not one.
pub fn build_gadget(r: &Normalized, s: &Normalized) -> Result<GadgetPair> {
    let (ar, as_) = (&r.machine, &s.machine);
    if ar.tapes() != as_.tapes() {
        return Err(Error::AlphabetMismatch("the two transducers have different tape alphabets".into()));
    }
    let off = ar.num_states();
    let n = off + as_.num_states();
    let (q0r, q0s) = (ar.initial(), off + as_.initial());
    let (qar, qrr, qas, qrs) = (r.accept, r.reject, off + s.accept, off + s.reject);
    // Which state's moves each gadget state takes over.
    // Which state's moves each gadget state takes over, and the offset of
    // that machine's states.
    let source = |q: StateId| -> (&DetTransducer, StateId, usize) {
        if q == qrr || q == qas {
            (as_, as_.initial(), off)
        } else if q == qrs || q == qar {
            (ar, ar.initial(), 0)
        } else if q < off {
            (ar, q, 0)
        } else {
            (as_, q - off, off)
        }
    };
    let tape_of: Vec<usize> = (0..n).map(|q| {
        let (m, p, _) = source(q);
        m.tape_of(p)
    }).collect();
    let tapes = with_endmarker(ar.tapes());
    let mut b = DetBuchiTransducer::new(tapes.clone(), tape_of, q0r)?;
    for q in 0..n {
        let (m, p, shift) = source(q);
        for &(mv, t) in m.moves(p) {
            b.add_transition(q, as_buchi_move(ar.tapes(), m.tape_of(p), mv), t + shift)?;
        }
    }
    for f in [qar, qrr, qrs] {
        b.set_buchi(f, true);
    }
    let names: Vec<String> = (0..ar.num_states())
        .map(|q| format!("{}_R", ar.state_name(q)))
        .chain((0..as_.num_states()).map(|q| format!("{}_S", as_.state_name(q))))
        .collect();
    b.set_names(unique_names(names));
    let mut b_s = b.clone();
    b_s.set_initial(q0s);
    debug_assert!(b.same_structure(&b_s));
    Ok(GadgetPair { b_r: b, b_s, accept_r: qar, reject_r: qrr, accept_s: qas, reject_s: qrs })
}

/// Lasso pair `((u#)^ω, (v#)^ω)` over the gadget's tapes.
pub fn endmarker_lasso(tapes: &[Alphabet], u: &[LetterId], v: &[LetterId]) -> Vec<UPWord> {
    [u, v]
        .iter()
        .zip(tapes)
        .map(|(w, a)| {
            let mut p = w.to_vec();
            p.push(a.len() - 1);
            UPWord { prefix: vec![], period: p }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transducer::{det_accepts, WordTuple};

    fn words(k: usize, max: usize) -> Vec<Vec<LetterId>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<LetterId>| {
                    (0..k).map(move |x| {
                        let mut w2 = w.clone();
                        w2.push(x);
                        w2
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    #[test]
    fn normal_form_of_gr() {
        let gr = fixtures::gr();
        let nf = normalize(&gr);
        let m = &nf.machine;
        assert_eq!((0..m.num_states()).filter(|&q| m.is_accepting(q)).count(), 1);
        assert!(m.moves(nf.accept).is_empty() && m.moves(nf.reject).is_empty());
        for q in 0..m.num_states() {
            for &(mv, p) in m.moves(q) {
                assert_ne!(p, m.initial());
                if p == nf.accept || p == nf.reject {
                    assert_eq!(mv, Move::End);
                }
            }
        }
        for u in words(1, 3) {
            for v in words(1, 3) {
                let t = WordTuple(vec![u.clone(), v.clone()]);
                assert_eq!(det_accepts(&gr, &t).unwrap(), det_accepts(m, &t).unwrap());
            }
        }
    }

    #[test]
    fn gadget_separates_on_common_pair() {
        let nf = normalize(&fixtures::gr());
        let g = build_gadget(&nf, &nf).unwrap();
        let w = endmarker_lasso(g.b_r.tapes(), &[0], &[0]);
        let run = lasso_run(&g.b_r, &w).unwrap();
        assert!(run.accepting(&g.b_r));
        assert!(run.cycle.contains(&g.accept_r));
        assert!(!det_buchi_lasso_accepts(&g.b_s, &w).unwrap());
    }

    #[test]
    fn disjoint_relations_give_equal_verdicts() {
        let g = build_gadget(&normalize(&fixtures::gr()), &normalize(&fixtures::gs())).unwrap();
        for x in words(1, 3) {
            for y in words(1, 3) {
                let w = endmarker_lasso(g.b_r.tapes(), &x, &y);
                assert_eq!(det_buchi_lasso_accepts(&g.b_r, &w).unwrap(), det_buchi_lasso_accepts(&g.b_s, &w).unwrap());
            }
        }
    }

    #[test]
    fn one_tape_and_eps_cycles_reject() {
        let a = Alphabet::from_names(&["a"]).unwrap();
        let lasso = vec![UPWord::new(vec![], vec![0]).unwrap(); 2];
        let mut b = DetBuchiTransducer::new(vec![a.clone(), a.clone()], vec![0], 0).unwrap();
        b.add_transition(0, Move::Letter(0), 0).unwrap();
        b.set_buchi(0, true);
        let run = lasso_run(&b, &lasso).unwrap();
        assert_eq!(run.advances, vec![true, false]);
        assert!(!run.accepting(&b));
        let mut e = DetBuchiTransducer::new(vec![a.clone(), a], vec![0, 1], 0).unwrap();
        e.add_transition(0, Move::Eps, 1).unwrap();
        e.add_transition(1, Move::Eps, 0).unwrap();
        e.set_buchi(0, true);
        assert!(!det_buchi_lasso_accepts(&e, &lasso).unwrap());
    }
}
