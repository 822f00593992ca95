use crate::alphabet::{Alphabet, LetterId};
use crate::error::{Error, Result};
use crate::fa::{Label, Nfa, StateId};

use super::{tuple_letter_id, BuchiAutomaton, UPWord};

/// Deterministic synchronous parity transducer over the product of its
/// component alphabets. A run accepts iff the largest priority seen
/// infinitely often is even.
#[derive(Debug, Clone)]
pub struct ParityTransducer {
    components: Vec<Alphabet>,
    alphabet: Alphabet,
    initial: StateId,
    delta: Vec<Option<StateId>>,
    priority: Vec<u32>,
    names: Option<Vec<String>>,
}

impl ParityTransducer {
    /// Machine with `states` states, no transitions and priority 0
    /// everywhere.
    pub fn new(components: Vec<Alphabet>, states: usize, initial: StateId) -> Result<ParityTransducer> {
        if components.is_empty() {
            return Err(Error::InvalidMachine("parity transducer without tapes".into()));
        }
        if initial >= states {
            return Err(Error::InvalidMachine("initial state out of range".into()));
        }
        let alphabet = Alphabet::product(&components, false);
        Ok(ParityTransducer {
            delta: vec![None; states * alphabet.len()],
            components,
            alphabet,
            initial,
            priority: vec![0; states],
            names: None,
        })
    }

    pub fn set_transition(&mut self, q: StateId, a: LetterId, p: StateId) -> Result<()> {
        let slot = &mut self.delta[q * self.alphabet.len() + a];
        match slot {
            Some(old) if *old != p => Err(Error::InvalidMachine(format!("two transitions from state {q} on one letter"))),
            _ => {
                *slot = Some(p);
                Ok(())
            }
        }
    }

    /// Transition on a letter given by component ids.
    pub fn set_transition_parts(&mut self, q: StateId, parts: &[LetterId], p: StateId) -> Result<()> {
        let a = tuple_letter_id(&self.components, parts);
        self.set_transition(q, a, p)
    }

    pub fn set_priority(&mut self, q: StateId, prio: u32) {
        self.priority[q] = prio;
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

    pub fn components(&self) -> &[Alphabet] {
        &self.components
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn num_states(&self) -> usize {
        self.priority.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn priority(&self, q: StateId) -> u32 {
        self.priority[q]
    }

    pub fn next(&self, q: StateId, a: LetterId) -> Option<StateId> {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(Option::is_some)
    }

    /// Deterministic run on a lasso; a missing transition rejects.
    pub fn lasso_accepts(&self, w: &UPWord) -> bool {
        let mut q = self.initial;
        for &a in &w.prefix {
            match self.next(q, a) {
                Some(p) => q = p,
                None => return false,
            }
        }
        // Iterate whole periods until the state at a period boundary repeats.
        let mut boundary = vec![q];
        let mut maxima = vec![];
        loop {
            let mut m = 0;
            for &a in &w.period {
                match self.next(q, a) {
                    Some(p) => q = p,
                    None => return false,
                }
                m = m.max(self.priority[q]);
            }
            maxima.push(m);
            if let Some(i) = boundary.iter().position(|&b| b == q) {
                let top = maxima[i..].iter().copied().max().unwrap_or(0);
                return top % 2 == 0;
            }
            boundary.push(q);
        }
    }
}

/// Adds an odd-priority sink for missing transitions; complete machines
/// are returned unchanged.
pub fn complete_parity(p: &ParityTransducer) -> ParityTransducer {
    if p.is_complete() {
        return p.clone();
    }
    let n = p.num_states();
    let k = p.alphabet.len();
    let mut out = p.clone();
    out.priority.push(1);
    out.delta.extend(std::iter::repeat(Some(n)).take(k));
    for slot in out.delta.iter_mut() {
        if slot.is_none() {
            *slot = Some(n);
        }
    }
    if let Some(names) = &mut out.names {
        let mut sink = "sink".to_string();
        while names.contains(&sink) {
            sink.push('_');
        }
        names.push(sink);
    }
    out
}

/// Complement by shifting every priority by one.
pub fn parity_complement(p: &ParityTransducer) -> Result<ParityTransducer> {
    if !p.is_complete() {
        return Err(Error::Incomplete("parity complement needs a complete machine".into()));
    }
    let mut out = p.clone();
    for x in out.priority.iter_mut() {
        *x += 1;
    }
    Ok(out)
}

/// Büchi automaton with states `Q ∪ Q×{even d}`: a run guesses the point
/// after which priorities stay ≤ d, and is accepting when it sees d.
pub fn parity_to_nba(p: &ParityTransducer) -> BuchiAutomaton {
    let n = p.num_states();
    let k = p.alphabet.len();
    let mut evens: Vec<u32> = p.priority.iter().copied().filter(|x| x % 2 == 0).collect();
    evens.sort_unstable();
    evens.dedup();
    let phase = |q: StateId, i: usize| n + i * n + q;
    let mut nfa = Nfa::new(p.alphabet.clone(), n * (1 + evens.len()));
    nfa.add_initial(p.initial);
    for (i, &d) in evens.iter().enumerate() {
        if p.priority[p.initial] <= d {
            nfa.add_initial(phase(p.initial, i));
        }
        for q in 0..n {
            nfa.set_accepting(phase(q, i), p.priority[q] == d);
        }
    }
    for q in 0..n {
        for a in 0..k {
            let Some(r) = p.next(q, a) else { continue };
            nfa.add_edge(q, Label::Sym(a), r);
            for (i, &d) in evens.iter().enumerate() {
                if p.priority[r] <= d {
                    nfa.add_edge(q, Label::Sym(a), phase(r, i));
                    if p.priority[q] <= d {
                        nfa.add_edge(phase(q, i), Label::Sym(a), phase(r, i));
                    }
                }
            }
        }
    }
    BuchiAutomaton::with_components(p.components.clone(), nfa).expect("product alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::omega::lasso_accepts;

    fn pair(p: &ParityTransducer, u: &[(usize, usize)], v: &[(usize, usize)]) -> UPWord {
        let enc = |w: &[(usize, usize)]| w.iter().map(|&(a, b)| tuple_letter_id(p.components(), &[a, b])).collect();
        UPWord::new(enc(u), enc(v)).unwrap()
    }

    #[test]
    fn eq_omega_semantics() {
        let eq = fixtures::eq_omega();
        assert!(eq.lasso_accepts(&pair(&eq, &[(0, 0)], &[(1, 1)])));
        assert!(!eq.lasso_accepts(&pair(&eq, &[], &[(0, 1)])));
        let c = parity_complement(&eq).unwrap();
        assert!(c.lasso_accepts(&pair(&eq, &[], &[(0, 1)])));
        let nba = parity_to_nba(&eq);
        assert!(lasso_accepts(&nba, &pair(&eq, &[(0, 0)], &[(1, 1), (0, 0)])));
        assert!(!lasso_accepts(&nba, &pair(&eq, &[(0, 0)], &[(1, 0)])));
    }

    #[test]
    fn full_omega_complement_rejects() {
        let full = fixtures::full_omega();
        let c = parity_complement(&full).unwrap();
        let w = pair(&full, &[(0, 1)], &[(1, 1)]);
        assert!(full.lasso_accepts(&w));
        assert!(!c.lasso_accepts(&w));
    }

    #[test]
    fn completion_adds_rejecting_sink() {
        let ab = Alphabet::from_names(&["a", "b"]).unwrap();
        let mut p = ParityTransducer::new(vec![ab.clone(), ab], 1, 0).unwrap();
        p.set_priority(0, 2);
        p.set_transition_parts(0, &[0, 0], 0).unwrap();
        p.set_transition_parts(0, &[1, 1], 0).unwrap();
        assert!(parity_complement(&p).is_err());
        let c = complete_parity(&p);
        assert!(c.is_complete());
        assert_eq!(c.num_states(), 2);
        assert!(c.lasso_accepts(&pair(&p, &[], &[(0, 0)])));
        assert!(!c.lasso_accepts(&pair(&p, &[(0, 0)], &[(0, 1)])));
        assert_eq!(complete_parity(&c).num_states(), 2);
    }
}
