//! Automata over infinite words: Büchi automata, deterministic parity
//! transducers, lassos and transition profiles.

mod parity;
mod profile;

pub use parity::{complete_parity, parity_complement, parity_to_nba, ParityTransducer};
pub use profile::{f_cycle_reachable, profile_of_letter, profile_of_word, profile_product, up_accepts_profiles, Mark, TransitionProfile};

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::alphabet::{Alphabet, LetterId, Word};
use crate::error::{Budget, Error, Result};
use crate::fa::{Label, Nfa, StateId};
use crate::graph;

/// Letter of an unpadded product alphabet from per-component ids.
pub fn tuple_letter_id(components: &[Alphabet], parts: &[LetterId]) -> LetterId {
    components.iter().zip(parts).fold(0, |id, (c, &p)| id * c.len() + p)
}

/// Per-component ids of an unpadded product letter.
pub fn tuple_letter_parts(components: &[Alphabet], mut id: LetterId) -> Vec<LetterId> {
    let mut parts = vec![0; components.len()];
    for (i, c) in components.iter().enumerate().rev() {
        parts[i] = id % c.len();
        id /= c.len();
    }
    parts
}

/// Ultimately periodic word `prefix · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPWord {
    pub prefix: Word,
    pub period: Word,
}

impl UPWord {
    pub fn new(prefix: Word, period: Word) -> Result<UPWord> {
        if period.is_empty() {
            return Err(Error::InvalidMachine("lasso period must be nonempty".into()));
        }
        Ok(UPWord { prefix, period })
    }

    /// Parses `u(v)^w`; `(v)^w` alone means an empty prefix.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<UPWord> {
        let t = text.trim();
        let bad = || Error::InvalidMachine(format!("lasso `{text}` is not of the form u(v)^w"));
        let body = t.strip_suffix(")^w").ok_or_else(bad)?;
        let open = body.rfind('(').ok_or_else(bad)?;
        UPWord::new(alphabet.word(&body[..open])?, alphabet.word(&body[open + 1..])?)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!("{}({})^w", alphabet.render(&self.prefix), alphabet.render(&self.period))
    }

    pub fn letter_at(&self, i: usize) -> LetterId {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The first `n` letters of the ω-word.
    pub fn unroll(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter_at(i)).collect()
    }

    /// Equality of the denoted ω-words.
    pub fn same_word(&self, other: &UPWord) -> bool {
        let n = self.prefix.len().max(other.prefix.len()) + lcm(self.period.len(), other.period.len());
        self.unroll(n) == other.unroll(n)
    }

    /// Combines per-component lassos into one lasso over the product
    /// alphabet of `components`.
    pub fn zip(components: &[Alphabet], parts: &[UPWord]) -> UPWord {
        let aligned = align_lassos(parts);
        let (p, l) = (aligned[0].prefix.len(), aligned[0].period.len());
        let letter = |i: usize| tuple_letter_id(components, &aligned.iter().map(|w| w.letter_at(i)).collect::<Vec<_>>());
        UPWord { prefix: (0..p).map(letter).collect(), period: (p..p + l).map(letter).collect() }
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Rewrites a family of lassos to a common prefix length and a common
/// period length without changing the ω-words: each prefix is extended by
/// letters of its own period (`u·v^p·v̂`), the period is rotated
/// accordingly (`ṽ·v̂`), and periods are unrolled to their lcm.
pub fn align_lassos(family: &[UPWord]) -> Vec<UPWord> {
    let p = family.iter().map(|w| w.prefix.len()).max().unwrap_or(0);
    let l = family.iter().fold(1, |acc, w| lcm(acc, w.period.len()));
    family
        .iter()
        .map(|w| UPWord { prefix: w.unroll(p), period: (p..p + l).map(|i| w.letter_at(i)).collect() })
        .collect()
}

/// Nondeterministic Büchi automaton. For relations the alphabet is the
/// unpadded product of `components`.
#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    components: Vec<Alphabet>,
    nfa: Nfa,
}

impl BuchiAutomaton {
    /// Büchi automaton over a plain alphabet.
    pub fn new(nfa: Nfa) -> Result<BuchiAutomaton> {
        BuchiAutomaton::with_components(vec![], nfa)
    }

    /// Büchi automaton over the product of `components` (empty for a plain
    /// alphabet).
    pub fn with_components(components: Vec<Alphabet>, nfa: Nfa) -> Result<BuchiAutomaton> {
        if nfa.has_epsilon() {
            return Err(Error::InvalidMachine("Büchi automata are epsilon-free".into()));
        }
        if !components.is_empty() && *nfa.alphabet() != Alphabet::product(&components, false) {
            return Err(Error::AlphabetMismatch("alphabet is not the product of the components".into()));
        }
        Ok(BuchiAutomaton { components, nfa })
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.nfa.alphabet()
    }

    pub fn components(&self) -> &[Alphabet] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn num_states(&self) -> usize {
        self.nfa.num_states()
    }

    /// Structural fingerprint used to tie profiles to their automaton.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.nfa.alphabet().letters().hash(&mut h);
        self.nfa.initial().hash(&mut h);
        for q in 0..self.num_states() {
            self.nfa.is_accepting(q).hash(&mut h);
            let mut e = self.nfa.edges(q).to_vec();
            e.sort_unstable();
            e.hash(&mut h);
        }
        h.finish()
    }

    /// Letter-indexed successor table.
    pub(crate) fn table(&self) -> Vec<Vec<Vec<StateId>>> {
        let k = self.alphabet().len();
        let mut t = vec![vec![vec![]; k]; self.num_states()];
        for q in 0..self.num_states() {
            for &(l, r) in self.nfa.edges(q) {
                if let Label::Sym(a) = l {
                    t[q][a].push(r);
                }
            }
        }
        t
    }

    pub fn lasso_accepts(&self, w: &UPWord) -> bool {
        lasso_accepts(self, w)
    }
}

/// Direct lasso semantics: product of the automaton with the lasso graph,
/// then search for a reachable cycle through an accepting state.
pub fn lasso_accepts(a: &BuchiAutomaton, w: &UPWord) -> bool {
    let len = w.prefix.len() + w.period.len();
    let n = a.num_states();
    let node = |q: StateId, i: usize| q * len + i;
    let next_pos = |i: usize| if i + 1 == len { w.prefix.len() } else { i + 1 };
    let mut adj = vec![vec![]; n * len];
    for q in 0..n {
        for i in 0..len {
            let x = w.letter_at(i);
            for r in a.nfa.succ(q, x) {
                adj[node(q, i)].push(node(r, next_pos(i)));
            }
        }
    }
    let sources: Vec<usize> = a.nfa.initial().iter().map(|&q| node(q, 0)).collect();
    let reach = graph::forward(&adj, &sources);
    let cyc = graph::on_cycle(&adj);
    (0..n * len).any(|v| reach[v] && cyc[v] && a.nfa.is_accepting(v / len))
}

fn check_same_alphabet(a: &BuchiAutomaton, b: &BuchiAutomaton) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", a.alphabet(), b.alphabet())));
    }
    Ok(())
}

/// Two-flag product; accepting states are `F_a × Q_b × {0}`.
pub fn nba_intersect(a: &BuchiAutomaton, b: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    check_same_alphabet(a, b)?;
    let (ta, tb) = (a.table(), b.table());
    let k = a.alphabet().len();
    let mut out = Nfa::new(a.alphabet().clone(), 0);
    let mut ids: HashMap<(StateId, StateId, u8), StateId> = HashMap::new();
    let mut todo: Vec<(StateId, StateId, u8)> = vec![];
    let mut intern = |key: (StateId, StateId, u8), out: &mut Nfa, todo: &mut Vec<_>| -> StateId {
        *ids.entry(key).or_insert_with(|| {
            todo.push(key);
            let s = out.add_state();
            out.set_accepting(s, key.2 == 0 && a.nfa.is_accepting(key.0));
            s
        })
    };
    for &p in a.nfa.initial() {
        for &q in b.nfa.initial() {
            let s = intern((p, q, 0), &mut out, &mut todo);
            out.add_initial(s);
        }
    }
    let mut i = 0;
    while i < todo.len() {
        let (p, q, f) = todo[i];
        let f2 = match f {
            0 if a.nfa.is_accepting(p) => 1,
            1 if b.nfa.is_accepting(q) => 0,
            _ => f,
        };
        for x in 0..k {
            for &p2 in &ta[p][x] {
                for &q2 in &tb[q][x] {
                    let t = intern((p2, q2, f2), &mut out, &mut todo);
                    out.add_edge(i, Label::Sym(x), t);
                }
            }
        }
        i += 1;
    }
    BuchiAutomaton::with_components(a.components.clone(), out)
}

/// Disjoint union.
pub fn nba_union(a: &BuchiAutomaton, b: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    check_same_alphabet(a, b)?;
    BuchiAutomaton::with_components(a.components.clone(), crate::fa::union(&a.nfa, &b.nfa)?)
}

/// Relabels tuple letters: component `i` of the result is component
/// `source[i]` of `a`'s letters. Only used for permutations and for
/// projections that keep at least one component.
fn remap_components(a: &BuchiAutomaton, components: Vec<Alphabet>, source: &[usize]) -> Result<BuchiAutomaton> {
    let target = Alphabet::product(&components, false);
    let map: Vec<LetterId> = (0..a.alphabet().len())
        .map(|x| {
            let parts = tuple_letter_parts(&a.components, x);
            tuple_letter_id(&components, &source.iter().map(|&s| parts[s]).collect::<Vec<_>>())
        })
        .collect();
    BuchiAutomaton::with_components(components, a.nfa.relabel(target, |x| Some(map[x])))
}

/// Moves the first `j` components behind the remaining ones:
/// `(u_1..u_k) ↦ (u_{j+1}..u_k, u_1..u_j)`.
pub fn swap_components(a: &BuchiAutomaton, j: usize) -> Result<BuchiAutomaton> {
    let k = a.arity();
    if k == 0 || j > k {
        return Err(Error::Arity { expected: k, found: j });
    }
    let source: Vec<usize> = (j..k).chain(0..j).collect();
    let comps = source.iter().map(|&s| a.components[s].clone()).collect();
    remap_components(a, comps, &source)
}

/// Extends `a` to a wider tuple: component `i` of `a` sits at position
/// `positions[i]` of `components`; the other components are free.
fn lift(a: &BuchiAutomaton, positions: &[usize], components: &[Alphabet]) -> Result<BuchiAutomaton> {
    let wide = Alphabet::product(components, false);
    let mut by_inner: Vec<Vec<LetterId>> = vec![vec![]; a.alphabet().len()];
    for x in 0..wide.len() {
        let parts = tuple_letter_parts(components, x);
        let inner: Vec<LetterId> = positions.iter().map(|&p| parts[p]).collect();
        by_inner[tuple_letter_id(&a.components, &inner)].push(x);
    }
    let mut out = Nfa::new(wide, a.num_states());
    for &q in a.nfa.initial() {
        out.add_initial(q);
    }
    for q in 0..a.num_states() {
        out.set_accepting(q, a.nfa.is_accepting(q));
        for &(l, r) in a.nfa.edges(q) {
            if let Label::Sym(x) = l {
                for &y in &by_inner[x] {
                    out.add_edge(q, Label::Sym(y), r);
                }
            }
        }
    }
    BuchiAutomaton::with_components(components.to_vec(), out)
}

/// Composition linking the last `middle` components of `r` with the first
/// `middle` components of `s`: lift both to (X̄,W̄,Ȳ), intersect, and
/// project W̄ away.
pub fn compose_j(r: &BuchiAutomaton, s: &BuchiAutomaton, middle: usize) -> Result<BuchiAutomaton> {
    let (kr, ks) = (r.arity(), s.arity());
    if middle > kr || middle > ks || kr - middle == 0 || ks - middle == 0 {
        return Err(Error::Arity { expected: middle, found: kr.min(ks) });
    }
    let x = kr - middle;
    if r.components[x..] != s.components[..middle] {
        return Err(Error::AlphabetMismatch("shared middle components differ".into()));
    }
    let mut wide: Vec<Alphabet> = r.components.clone();
    wide.extend(s.components[middle..].iter().cloned());
    let r_pos: Vec<usize> = (0..kr).collect();
    let s_pos: Vec<usize> = (x..x + ks).collect();
    let prod = nba_intersect(&lift(r, &r_pos, &wide)?, &lift(s, &s_pos, &wide)?)?;
    let keep: Vec<usize> = (0..x).chain(kr..wide.len()).collect();
    let comps = keep.iter().map(|&i| wide[i].clone()).collect();
    remap_components(&prod, comps, &keep)
}

/// Removes unreachable states and, to a fixpoint, states without a nonempty
/// path to an accepting state.
pub fn trim_buchi(a: &BuchiAutomaton) -> BuchiAutomaton {
    let n = a.num_states();
    let adj: Vec<Vec<usize>> = (0..n).map(|q| a.nfa.edges(q).iter().map(|&(_, t)| t).collect()).collect();
    let mut keep = a.nfa.reachable();
    loop {
        let sub: Vec<Vec<usize>> =
            (0..n).map(|q| if keep[q] { adj[q].iter().copied().filter(|&t| keep[t]).collect() } else { vec![] }).collect();
        let acc: Vec<bool> = (0..n).map(|q| keep[q] && a.nfa.is_accepting(q)).collect();
        let reach_acc = graph::backward(&sub, &acc);
        let nonempty: Vec<bool> = (0..n).map(|q| keep[q] && sub[q].iter().any(|&t| reach_acc[t])).collect();
        let init: Vec<usize> = a.nfa.initial().iter().copied().filter(|&q| nonempty[q]).collect();
        let sub2: Vec<Vec<usize>> =
            (0..n).map(|q| if nonempty[q] { sub[q].iter().copied().filter(|&t| nonempty[t]).collect() } else { vec![] }).collect();
        let fwd = graph::forward(&sub2, &init);
        let next: Vec<bool> = (0..n).map(|q| nonempty[q] && fwd[q]).collect();
        if next == keep {
            break;
        }
        keep = next;
    }
    BuchiAutomaton { components: a.components.clone(), nfa: a.nfa.restrict(&keep) }
}

/// Whether the ω-language is finite. Works on the deterministic automaton
/// of finite prefixes of the trimmed automaton: the ω-language is finite
/// iff that automaton has boundedly many paths per length, i.e. every
/// cyclic component is a single simple cycle and no path links two cycles.
pub fn omega_finite(a: &BuchiAutomaton, budget: &Budget) -> Result<bool> {
    let t = trim_buchi(a);
    if t.num_states() == 0 {
        return Ok(true);
    }
    let all: Vec<StateId> = (0..t.num_states()).collect();
    let d = t.nfa.with_accepting(&all).determinize(budget)?;
    let k = d.alphabet().len();
    // Nonempty subsets are exactly the accepting Dfa states.
    let live: Vec<bool> = (0..d.num_states()).map(|q| d.is_accepting(q)).collect();
    let mut adj: Vec<Vec<usize>> = vec![vec![]; d.num_states()];
    for q in 0..d.num_states() {
        if live[q] {
            for x in 0..k {
                let r = d.next(q, x);
                if live[r] {
                    adj[q].push(r);
                }
            }
        }
    }
    let ids = graph::scc_ids(&adj);
    let ncomp = ids.iter().max().map_or(0, |m| m + 1);
    let mut nodes = vec![0usize; ncomp];
    let mut inner = vec![0usize; ncomp];
    for q in 0..d.num_states() {
        nodes[ids[q]] += 1;
        inner[ids[q]] += adj[q].iter().filter(|&&r| ids[r] == ids[q]).count();
    }
    if (0..ncomp).any(|c| inner[c] > 0 && inner[c] != nodes[c]) {
        return Ok(false);
    }
    // Cyclic components: does any reach another one?
    let cyclic: Vec<bool> = (0..d.num_states()).map(|q| inner[ids[q]] > 0).collect();
    for q in 0..d.num_states() {
        if !cyclic[q] {
            continue;
        }
        let from: Vec<usize> = adj[q].iter().copied().filter(|&r| ids[r] != ids[q]).collect();
        let reach = graph::forward(&adj, &from);
        if (0..d.num_states()).any(|r| reach[r] && cyclic[r]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn loop_a() -> BuchiAutomaton {
        let s = Alphabet::from_names(&["a", "b"]).unwrap();
        let mut n = Nfa::new(s, 1);
        n.add_initial(0);
        n.set_accepting(0, true);
        n.add_edge(0, Label::Sym(0), 0);
        BuchiAutomaton::new(n).unwrap()
    }

    #[test]
    fn lasso_basics() {
        let a = loop_a();
        assert!(lasso_accepts(&a, &UPWord::new(vec![], vec![0]).unwrap()));
        assert!(!lasso_accepts(&a, &UPWord::new(vec![], vec![1]).unwrap()));
        assert!(UPWord::new(vec![0], vec![]).is_err());
    }

    #[test]
    fn lasso_parsing() {
        let s = Alphabet::from_names(&["a", "b"]).unwrap();
        let w = UPWord::parse("a(ba)^w", &s).unwrap();
        assert_eq!(w.prefix, vec![0]);
        assert_eq!(w.period, vec![1, 0]);
        assert_eq!(w.render(&s), "a(ba)^w");
        assert!(UPWord::parse("(b)^w", &s).unwrap().prefix.is_empty());
        assert!(UPWord::parse("ab", &s).is_err());
    }

    #[test]
    fn omega_finite_examples() {
        let b = Budget::default();
        assert!(omega_finite(&loop_a(), &b).unwrap());
        let mut n = loop_a().nfa().clone();
        n.add_edge(0, Label::Sym(1), 0);
        assert!(!omega_finite(&BuchiAutomaton::new(n).unwrap(), &b).unwrap());
    }

    #[test]
    fn trim_removes_dead_tail() {
        let mut n = loop_a().nfa().clone();
        let dead = n.add_state();
        n.add_edge(0, Label::Sym(1), dead);
        let t = trim_buchi(&BuchiAutomaton::new(n).unwrap());
        assert_eq!(t.num_states(), 1);
        let same = trim_buchi(&loop_a());
        assert_eq!(same.num_states(), 1);
    }

    #[test]
    fn swap_twice_is_identity() {
        let e = parity_to_nba(&fixtures::head_omega());
        let s = swap_components(&swap_components(&e, 1).unwrap(), 1).unwrap();
        assert_eq!(s.alphabet(), e.alphabet());
        assert_eq!(s.fingerprint(), e.fingerprint());
        assert!(swap_components(&e, 3).is_err());
    }

    #[test]
    fn align_keeps_words() {
        let fam = vec![
            UPWord::new(vec![0], vec![1, 0]).unwrap(),
            UPWord::new(vec![], vec![1, 1, 0]).unwrap(),
            UPWord::new(vec![1, 1, 1], vec![0]).unwrap(),
        ];
        let al = align_lassos(&fam);
        for (a, b) in fam.iter().zip(&al) {
            assert!(a.same_word(b));
            assert_eq!(b.prefix.len(), 3);
            assert_eq!(b.period.len(), 6);
        }
    }
}
