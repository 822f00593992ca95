use crate::alphabet::Alphabet;
use crate::error::{Budget, Error, Result};
use crate::fa::{complement_nfa, intersect, project_onto, union, Label, Nfa};
use crate::graph;
use crate::transducer::{cylindrify, padded_letter_id, sync_complement, SyncTransducer};

/// Pairs `(u, u')` over `sigma` with `u'` strictly smaller than `u` in
/// length-lexicographic order (shorter first, then by letter index).
pub fn llex_smaller(sigma: &Alphabet) -> Nfa {
    let comps = vec![sigma.clone(), sigma.clone()];
    let (eq, lt, gt, shorter) = (0, 1, 2, 3);
    let mut n = Nfa::new(Alphabet::product(&comps, true), 4);
    n.add_initial(eq);
    n.set_accepting(lt, true);
    n.set_accepting(shorter, true);
    for a in 0..sigma.len() {
        for b in 0..sigma.len() {
            let l = Label::Sym(padded_letter_id(&comps, &[Some(a), Some(b)]));
            let from_eq = match b.cmp(&a) {
                std::cmp::Ordering::Less => lt,
                std::cmp::Ordering::Greater => gt,
                std::cmp::Ordering::Equal => eq,
            };
            n.add_edge(eq, l, from_eq);
            n.add_edge(lt, l, lt);
            n.add_edge(gt, l, gt);
        }
        let l = Label::Sym(padded_letter_id(&comps, &[Some(a), None]));
        for s in [eq, lt, gt, shorter] {
            n.add_edge(s, l, shorter);
        }
    }
    n
}

/// `{(u, u') | ∃v. (u,v) ∈ R xor (u',v) ∈ R}`, by a three-tape product of
/// the relation and its complement sharing the `v` tape.
pub fn e1_complement(t: &SyncTransducer, budget: &Budget) -> Result<SyncTransducer> {
    if t.arity() != 2 {
        return Err(Error::Arity { expected: 2, found: t.arity() });
    }
    let (s1, s2) = (t.components()[0].clone(), t.components()[1].clone());
    let three = vec![s1.clone(), s1.clone(), s2];
    let comp = sync_complement(t, budget)?;
    let r13 = cylindrify(t, &[0, 2], three.clone())?;
    let r23 = cylindrify(t, &[1, 2], three.clone())?;
    let c13 = cylindrify(&comp, &[0, 2], three.clone())?;
    let c23 = cylindrify(&comp, &[1, 2], three)?;
    let both = union(&intersect(r13.nfa(), c23.nfa())?, &intersect(c13.nfa(), r23.nfa())?)?;
    let pair = vec![s1.clone(), s1];
    let proj = project_onto(&both, &[0, 1], &Alphabet::product(&pair, true))?.eliminate_epsilon();
    SyncTransducer::restricted(pair, &proj)
}

/// Length-lexicographically least members of the classes of `E_1`.
pub fn representatives(t: &SyncTransducer, budget: &Budget) -> Result<Nfa> {
    let s1 = t.components()[0].clone();
    let e1 = sync_complement(&e1_complement(t, budget)?, budget)?;
    let below = intersect(e1.nfa(), &llex_smaller(&s1))?;
    let has_smaller = project_onto(&below, &[0], &s1)?;
    Ok(complement_nfa(&has_smaller, budget)?.trim())
}

/// Recognizability of a binary automatic relation by the representative
/// method: `R` is recognizable iff `E_1` has finite index iff the set of
/// representatives is finite.
pub fn ccg06_recognizable(t: &SyncTransducer, budget: &Budget) -> Result<bool> {
    let reps = representatives(t, budget)?;
    let k = reps.alphabet().len();
    let adj: Vec<Vec<usize>> = (0..reps.num_states())
        .map(|p| (0..k).flat_map(|x| reps.succ(p, x).collect::<Vec<_>>()).collect())
        .collect();
    Ok(!graph::on_cycle(&adj).iter().any(|&c| c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_agree_with_expectations() {
        let b = Budget::default();
        assert!(!ccg06_recognizable(&fixtures::eq2(), &b).unwrap());
        assert!(ccg06_recognizable(&fixtures::tot2(), &b).unwrap());
        assert!(!ccg06_recognizable(&fixtures::len1(), &b).unwrap());
    }

    #[test]
    fn len1_representatives_are_all_powers() {
        let reps = representatives(&fixtures::len1(), &Budget::default()).unwrap();
        for n in 0..6 {
            assert!(reps.accepts(&vec![0; n]));
        }
    }
}
