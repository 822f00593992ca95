//! Recognizability of ω-automatic relations given by complete deterministic
//! parity transducers.
//!
//! For each `j`, the equivalence `E_j` on `j`-tuples is handled through its
//! complement `Ē_j`, a Büchi automaton on pairs. Ultimately periodic pairs
//! `(u v^ω, x y^ω)` with `|u| = |x|`, `|v| = |y|` are encoded as
//! `(u#v, x#y)`; the resulting finite-word relation `E_#` is automatic, a
//! regular set of representatives is computed from it, and `E_j` has finite
//! index iff the factors of that set around `#` are slender.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Letter, LetterId};
use crate::error::{Budget, Error, Result};
use crate::fa::{complement_nfa, intersect, project_onto, Label, Nfa, StateId};
use crate::omega::{
    compose_j, complete_parity, f_cycle_reachable, nba_union, parity_complement, parity_to_nba, profile_of_letter,
    profile_product, swap_components, trim_buchi, BuchiAutomaton, Mark, ParityTransducer,
    TransitionProfile,
};
use crate::slender::{is_slender, SlenderWitness};
use crate::transducer::{padded_letter_id, SyncTransducer};
use crate::verdict::Verdict;

/// Name of the separator letter of the encoding.
pub const SHARP: &str = "#";

/// Alphabet of `j`-tuples of the first `j` components.
fn tuple_alphabet(components: &[Alphabet]) -> Alphabet {
    if components.len() == 1 {
        components[0].clone()
    } else {
        Alphabet::product(components, false)
    }
}

/// Büchi automaton for the complement of `E_j`, read as a binary relation
/// over `j`-tuples: `Ē_j = R ∘ swap(R̄) ∪ R̄ ∘ swap(R)`.
pub fn build_ebar_j(r: &ParityTransducer, j: usize) -> Result<BuchiAutomaton> {
    let k = r.arity();
    if j == 0 || j > k {
        return Err(Error::Arity { expected: k, found: j });
    }
    let r = complete_parity(r);
    let rbar = parity_complement(&r)?;
    let (pos, neg) = (parity_to_nba(&r), parity_to_nba(&rbar));
    let left = compose_j(&pos, &swap_components(&neg, j)?, k - j)?;
    let right = compose_j(&neg, &swap_components(&pos, j)?, k - j)?;
    let flat = trim_buchi(&nba_union(&left, &right)?);
    // Regroup 2j tapes as a pair of j-tuples; mixed-radix ids coincide.
    let p = tuple_alphabet(&r.components()[..j]);
    let pair = vec![p.clone(), p];
    let nfa = flat.nfa().relabel(Alphabet::product(&pair, false), Some);
    BuchiAutomaton::with_components(pair, nfa)
}

/// State of the encoding transducer: the profile of the prefix, then the
/// profiles of prefix and period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SharpState {
    Prefix(TransitionProfile),
    Period(TransitionProfile, TransitionProfile),
}

/// Synchronous transducer over `Γ = {#} ∪ Σ` defining `E_#`.
#[derive(Debug, Clone)]
pub struct SharpTransducer {
    sync: SyncTransducer,
    source: u64,
    states: Vec<SharpState>,
}

impl SharpTransducer {
    pub fn sync(&self) -> &SyncTransducer {
        &self.sync
    }

    /// `Γ`, with `#` as letter 0 followed by the letters of `Σ`.
    pub fn gamma(&self) -> &Alphabet {
        &self.sync.components()[0]
    }

    /// Fingerprint of the Büchi automaton the profiles belong to.
    pub fn source(&self) -> u64 {
        self.source
    }

    pub fn states(&self) -> &[SharpState] {
        &self.states
    }

    pub fn num_profiles(&self) -> usize {
        self.states.iter().filter(|s| matches!(s, SharpState::Prefix(_))).count()
    }
}

/// `Γ` for a letter alphabet `Σ`.
pub fn sharp_alphabet(sigma: &Alphabet) -> Result<Alphabet> {
    let mut letters = vec![Letter::sym(SHARP)];
    letters.extend(sigma.letters().iter().cloned());
    Alphabet::new(letters)
}

/// The acceptance condition on `(τ, τ')`: no initial state reaches, under
/// `τ`, a state from which `τ'` reaches a cycle with a final edge.
fn sharp_accepting(ebar: &BuchiAutomaton, tau: &TransitionProfile, tau2: &TransitionProfile) -> bool {
    let good = f_cycle_reachable(tau2);
    !ebar.nfa().initial().iter().any(|&q0| (0..ebar.num_states()).any(|p| tau.get(q0, p) != Mark::None && good[p]))
}

/// Builds the transducer for `E_#` from a Büchi automaton for `Ē`, visiting
/// only profiles reachable from the identity.
pub fn build_a_sharp(ebar: &BuchiAutomaton, budget: &Budget) -> Result<SharpTransducer> {
    if ebar.arity() != 2 || ebar.components()[0] != ebar.components()[1] {
        return Err(Error::Arity { expected: 2, found: ebar.arity() });
    }
    let sigma = ebar.components()[0].clone();
    let gamma = sharp_alphabet(&sigma)?;
    let comps = vec![gamma.clone(), gamma];
    let ns = sigma.len();
    let letter_profiles: Vec<TransitionProfile> = (0..ebar.alphabet().len()).map(|x| profile_of_letter(ebar, x)).collect();
    let mut sync = SyncTransducer::empty(comps.clone(), 0);
    let mut ids: HashMap<SharpState, StateId> = HashMap::new();
    let mut states: Vec<SharpState> = vec![];
    let mut todo: Vec<StateId> = vec![];
    let mut intern = |s: SharpState, sync: &mut SyncTransducer, states: &mut Vec<SharpState>, todo: &mut Vec<StateId>| -> Result<StateId> {
        if let Some(&id) = ids.get(&s) {
            return Ok(id);
        }
        budget.check(states.len() + 1, "profile construction")?;
        let id = sync.nfa_mut().add_state();
        if let SharpState::Period(t, t2) = &s {
            sync.nfa_mut().set_accepting(id, sharp_accepting(ebar, t, t2));
        }
        ids.insert(s.clone(), id);
        states.push(s);
        todo.push(id);
        Ok(id)
    };
    let identity = TransitionProfile::identity(ebar);
    let init = intern(SharpState::Prefix(identity.clone()), &mut sync, &mut states, &mut todo)?;
    sync.nfa_mut().add_initial(init);
    while let Some(id) = todo.pop() {
        let s = states[id].clone();
        if let SharpState::Prefix(t) = &s {
            let hash = padded_letter_id(&comps, &[Some(0), Some(0)]);
            let to = intern(SharpState::Period(t.clone(), identity.clone()), &mut sync, &mut states, &mut todo)?;
            sync.nfa_mut().add_edge(id, Label::Sym(hash), to);
        }
        for a in 0..ns {
            for b in 0..ns {
                let x = a * ns + b;
                let next = match &s {
                    SharpState::Prefix(t) => SharpState::Prefix(profile_product(t, &letter_profiles[x])?),
                    SharpState::Period(t, t2) => SharpState::Period(t.clone(), profile_product(t2, &letter_profiles[x])?),
                };
                let to = intern(next, &mut sync, &mut states, &mut todo)?;
                let l = padded_letter_id(&comps, &[Some(a + 1), Some(b + 1)]);
                sync.nfa_mut().add_edge(id, Label::Sym(l), to);
            }
        }
    }
    let sync = SyncTransducer::new(comps, sync.nfa().clone())?;
    Ok(SharpTransducer { sync, source: ebar.fingerprint(), states })
}

/// Comparator over equal-length pairs: states equal / left smaller / left
/// greater, accepting left smaller. Pads are not read.
fn strict_lex_comparator(comps: &[Alphabet]) -> Nfa {
    let alphabet = Alphabet::product(comps, true);
    let n = comps[0].len();
    let mut c = Nfa::new(alphabet, 3);
    c.add_initial(0);
    c.set_accepting(1, true);
    for a in 0..n {
        for b in 0..n {
            let l = padded_letter_id(comps, &[Some(a), Some(b)]);
            let from_eq = match a.cmp(&b) {
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Greater => 2,
            };
            c.add_edge(0, Label::Sym(l), from_eq);
            c.add_edge(1, Label::Sym(l), 1);
            c.add_edge(2, Label::Sym(l), 2);
        }
    }
    c
}

/// `Σ* # Σ*` over `Γ`.
pub fn single_sharp(gamma: &Alphabet) -> Nfa {
    let mut n = Nfa::new(gamma.clone(), 2);
    n.add_initial(0);
    n.set_accepting(1, true);
    n.add_edge(0, Label::Sym(0), 1);
    for x in 1..gamma.len() {
        n.add_edge(0, Label::Sym(x), 0);
        n.add_edge(1, Label::Sym(x), 1);
    }
    n
}

/// Automaton for the representatives `L_#(E)`: the well-formed encodings
/// with no strictly smaller `E_#`-equivalent word.
pub fn build_representatives(s: &SharpTransducer, budget: &Budget) -> Result<Nfa> {
    let comps = s.sync().components().to_vec();
    let gamma = s.gamma().clone();
    let below = intersect(s.sync().nfa(), &strict_lex_comparator(&comps))?.trim();
    let has_smaller = project_onto(&below, &[1], &gamma)?;
    let reps = complement_nfa(&has_smaller, budget)?;
    Ok(intersect(&reps, &single_sharp(&gamma))?.trim())
}

/// One `#`-transition `(p, #, q)` with the languages before and after it.
#[derive(Debug, Clone)]
pub struct SharpFactor {
    pub p: StateId,
    pub q: StateId,
    pub before: Nfa,
    pub after: Nfa,
}

#[derive(Debug, Clone)]
pub struct SharpDecomposition {
    pub factors: Vec<SharpFactor>,
}

impl SharpDecomposition {
    /// Membership in the union of `before · # · after`.
    pub fn accepts(&self, w: &[LetterId]) -> bool {
        let Some(i) = w.iter().position(|&x| x == 0) else { return false };
        if w[i + 1..].contains(&0) {
            return false;
        }
        let shift = |v: &[LetterId]| v.iter().map(|&x| x - 1).collect::<Vec<_>>();
        let (u, v) = (shift(&w[..i]), shift(&w[i + 1..]));
        self.factors.iter().any(|f| f.before.accepts(&u) && f.after.accepts(&v))
    }
}

/// Copy of `b` over `Σ` without `#` edges, with the given initial and
/// accepting states, trimmed.
fn sigma_part(b: &Nfa, sigma: &Alphabet, init: &[StateId], acc: &[StateId]) -> Nfa {
    let mut n = Nfa::new(sigma.clone(), b.num_states());
    for &i in init {
        n.add_initial(i);
    }
    for &f in acc {
        n.set_accepting(f, true);
    }
    for q in 0..b.num_states() {
        for &(l, t) in b.edges(q) {
            match l {
                Label::Sym(0) => {}
                Label::Sym(x) => n.add_edge(q, Label::Sym(x - 1), t),
                Label::Eps => n.add_edge(q, Label::Eps, t),
            }
        }
    }
    n.trim()
}

/// Splits `b` (single-`#` words over `Γ`) at each `#`-transition; entries
/// with an empty side are dropped.
pub fn decompose_sharp(b: &Nfa) -> Result<SharpDecomposition> {
    let gamma = b.alphabet();
    if gamma.len() < 2 || gamma.letter(0) != &Letter::sym(SHARP) {
        return Err(Error::AlphabetMismatch("expected # as the first letter".into()));
    }
    let sigma = Alphabet::new(gamma.letters()[1..].to_vec())?;
    let acc = b.accepting_states();
    let mut factors = vec![];
    for p in 0..b.num_states() {
        for &(l, q) in b.edges(p) {
            if l != Label::Sym(0) {
                continue;
            }
            let before = sigma_part(b, &sigma, b.initial(), &[p]);
            let after = sigma_part(b, &sigma, &[q], &acc);
            if before.is_empty().holds || after.is_empty().holds {
                continue;
            }
            factors.push(SharpFactor { p, q, before, after });
        }
    }
    Ok(SharpDecomposition { factors })
}

/// Side of a factor that fails to be slender.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Before,
    After,
}

#[derive(Debug, Clone)]
pub struct IndexWitness {
    pub p: StateId,
    pub q: StateId,
    pub side: Side,
    /// Automaton over `Σ` of the offending factor.
    pub factor: Nfa,
    pub slender: SlenderWitness,
}

/// Statistics of one finite-index check.
#[derive(Debug, Clone, Default)]
pub struct IndexStats {
    pub sharp_states: usize,
    pub profiles: usize,
    pub representative_states: usize,
    pub factors: usize,
}

/// Whether the equivalence encoded by `s` has finite index.
pub fn finite_index(s: &SharpTransducer, budget: &Budget) -> Result<(Verdict<IndexWitness>, IndexStats)> {
    let b = build_representatives(s, budget)?;
    let dec = decompose_sharp(&b)?;
    let stats = IndexStats {
        sharp_states: s.states().len(),
        profiles: s.num_profiles(),
        representative_states: b.num_states(),
        factors: dec.factors.len(),
    };
    for f in &dec.factors {
        for (side, lang) in [(Side::Before, &f.before), (Side::After, &f.after)] {
            if let Some(w) = is_slender(lang).witness {
                let wit = IndexWitness { p: f.p, q: f.q, side, factor: lang.clone(), slender: w };
                return Ok((Verdict::no(wit), stats));
            }
        }
    }
    Ok((Verdict::yes(), stats))
}

/// Outcome for one `j`.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub j: usize,
    pub ebar_states: usize,
    pub stats: IndexStats,
    pub verdict: Verdict<IndexWitness>,
}

/// Failing level of a negative answer.
#[derive(Debug, Clone)]
pub struct OmegaRecFailure {
    pub j: usize,
    pub witness: IndexWitness,
}

/// Decides ω-recognizability of the relation of `r`; stops at the first
/// level without finite index. Returns the per-level reports as well.
pub fn is_omega_recognizable(r: &ParityTransducer, budget: &Budget) -> Result<(Verdict<OmegaRecFailure>, Vec<LevelReport>)> {
    let r = complete_parity(r);
    let mut reports = vec![];
    for j in 1..=r.arity() {
        let ebar = build_ebar_j(&r, j)?;
        let sharp = build_a_sharp(&ebar, budget)?;
        let (verdict, stats) = finite_index(&sharp, budget)?;
        let failed = verdict.witness.clone();
        reports.push(LevelReport { j, ebar_states: ebar.num_states(), stats, verdict });
        if let Some(witness) = failed {
            return Ok((Verdict::no(OmegaRecFailure { j, witness }), reports));
        }
    }
    Ok((Verdict::yes(), reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::omega::{lasso_accepts, UPWord};
    use crate::transducer::WordTuple;

    fn budget() -> Budget {
        Budget::new(200_000)
    }

    #[test]
    fn full_relation_has_empty_complement() {
        let e = build_ebar_j(&fixtures::full_omega(), 1).unwrap();
        assert_eq!(e.num_states(), 0);
    }

    #[test]
    fn equality_sharp_semantics() {
        let e = build_ebar_j(&fixtures::eq_omega(), 1).unwrap();
        let s = build_a_sharp(&e, &budget()).unwrap();
        let g = s.gamma().clone();
        let t = |a: &str, b: &str| WordTuple(vec![g.word(a).unwrap(), g.word(b).unwrap()]);
        assert!(s.sync().accepts(&t("a#b", "a#b")).unwrap());
        assert!(!s.sync().accepts(&t("a#ab", "a#ba")).unwrap());
        assert!(!s.sync().accepts(&t("a#ba", "ab#ab")).unwrap());
        assert!(s.sync().accepts(&t("#ab", "#ab")).unwrap());
        let u = UPWord::new(vec![0], vec![0, 1]).unwrap();
        let pair = UPWord::zip(e.components(), &[u.clone(), u]);
        assert!(!lasso_accepts(&e, &pair));
    }

    #[test]
    fn index_verdicts() {
        let (v, _) = is_omega_recognizable(&fixtures::full_omega(), &budget()).unwrap();
        assert!(v.holds);
        let (v, rep) = is_omega_recognizable(&fixtures::eq_omega(), &budget()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().j, 1);
        assert_eq!(rep.len(), 1);
        let (v, rep) = is_omega_recognizable(&fixtures::head_omega(), &budget()).unwrap();
        assert!(v.holds);
        assert_eq!(rep.len(), 2);
    }
}
