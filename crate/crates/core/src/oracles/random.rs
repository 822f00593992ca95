//! Seeded instance generators. Every generator is a pure function of its
//! arguments; `density` is the probability of each candidate transition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::fa::{Label, Nfa};
use crate::omega::{BuchiAutomaton, ParityTransducer, UPWord};
use crate::transducer::{padded_letter_id, SyncTransducer};
use crate::vpa::{Dvpa, PushdownAlphabet, Vpa};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `{a, b, c, ...}` with `k` letters.
pub fn letters(k: usize) -> Alphabet {
    let names: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Alphabet::from_names(&names).expect("small alphabet")
}

fn fill_nfa(r: &mut ChaCha8Rng, alphabet: Alphabet, states: usize, density: f64) -> Nfa {
    let mut n = Nfa::new(alphabet.clone(), states);
    n.add_initial(0);
    for p in 0..states {
        n.set_accepting(p, r.gen_bool(0.5));
        for a in 0..alphabet.len() {
            for q in 0..states {
                if r.gen_bool(density) {
                    n.add_edge(p, Label::Sym(a), q);
                }
            }
        }
    }
    n
}

pub fn random_nfa(seed: u64, states: usize, alphabet: usize, density: f64) -> Nfa {
    fill_nfa(&mut rng(seed), letters(alphabet), states, density)
}

pub fn random_buchi(seed: u64, states: usize, alphabet: usize, density: f64) -> BuchiAutomaton {
    BuchiAutomaton::new(random_nfa(seed, states, alphabet, density)).expect("atomic alphabet")
}

/// Binary synchronous transducer over `{a,b} × {a,b}` with exactly
/// `states` states. Each state other than the initial one gets a mode:
/// both tapes running, first tape ended, or second tape ended. Edges only
/// read letters fitting the target's mode, so padding holds by construction.
pub fn random_sync(seed: u64, states: usize, density: f64) -> SyncTransducer {
    let mut r = rng(seed);
    let comps = vec![letters(2), letters(2)];
    let mut t = SyncTransducer::empty(comps.clone(), states);
    // 0 = both running, 1 = first ended, 2 = second ended.
    let modes: Vec<u8> = (0..states).map(|q| if q == 0 { 0 } else { r.gen_range(0..3) }).collect();
    let accepting: Vec<bool> = (0..states).map(|_| r.gen_bool(0.5)).collect();
    let mut edges = vec![];
    for p in 0..states {
        for q in 0..states {
            let fits = modes[p] == modes[q] || modes[p] == 0;
            if !fits {
                continue;
            }
            for x in 0..2 {
                for y in 0..2 {
                    let parts = match modes[q] {
                        0 => [Some(x), Some(y)],
                        1 if x == 0 => [None, Some(y)],
                        2 if y == 0 => [Some(x), None],
                        _ => continue,
                    };
                    if r.gen_bool(density) {
                        edges.push((p, padded_letter_id(&comps, &parts), q));
                    }
                }
            }
        }
    }
    let n = t.nfa_mut();
    n.add_initial(0);
    for (q, &acc) in accepting.iter().enumerate() {
        n.set_accepting(q, acc);
    }
    for (p, l, q) in edges {
        n.add_edge(p, Label::Sym(l), q);
    }
    SyncTransducer::new(comps, t.nfa().clone()).expect("modes respect padding")
}

/// Calls `c`, returns `r`, internal `i`; stack `{g, h}`.
pub fn small_pushdown_alphabet() -> (PushdownAlphabet, Alphabet) {
    (
        PushdownAlphabet::from_names(&["c"], &["r"], &["i"]).expect("disjoint"),
        Alphabet::from_names(&["g", "h"]).expect("stack"),
    )
}

pub fn random_vpa(seed: u64, states: usize, density: f64) -> Vpa {
    let mut r = rng(seed);
    let (sigma, gamma) = small_pushdown_alphabet();
    let ng = gamma.len();
    let mut v = Vpa::new(sigma.clone(), gamma, states).expect("valid");
    v.add_initial(0);
    for p in 0..states {
        v.set_accepting(p, r.gen_bool(0.5));
        for q in 0..states {
            for &c in &sigma.calls() {
                for g in 0..ng {
                    if r.gen_bool(density) {
                        v.add_push(p, c, q, g).expect("typed");
                    }
                }
            }
            for &x in &sigma.returns() {
                for g in std::iter::once(None).chain((0..ng).map(Some)) {
                    if r.gen_bool(density) {
                        v.add_pop(p, x, g, q).expect("typed");
                    }
                }
            }
            for &a in &sigma.internals() {
                if r.gen_bool(density) {
                    v.add_int(p, a, q).expect("typed");
                }
            }
        }
    }
    v
}

/// Each possible move is defined with probability `density`, with a
/// uniformly chosen target.
pub fn random_dvpa(seed: u64, states: usize, density: f64) -> Dvpa {
    let mut r = rng(seed);
    let (sigma, gamma) = small_pushdown_alphabet();
    let ng = gamma.len();
    let mut d = Dvpa::new(sigma.clone(), gamma, states, 0).expect("valid");
    for p in 0..states {
        d.set_accepting(p, r.gen_bool(0.5));
        for &c in &sigma.calls() {
            if r.gen_bool(density) {
                let (q, g) = (r.gen_range(0..states), r.gen_range(0..ng));
                d.add_push(p, c, q, g).expect("fresh");
            }
        }
        for &x in &sigma.returns() {
            for g in std::iter::once(None).chain((0..ng).map(Some)) {
                if r.gen_bool(density) {
                    let q = r.gen_range(0..states);
                    d.add_pop(p, x, g, q).expect("fresh");
                }
            }
        }
        for &a in &sigma.internals() {
            if r.gen_bool(density) {
                let q = r.gen_range(0..states);
                d.add_int(p, a, q).expect("fresh");
            }
        }
    }
    d
}

/// Deterministic parity transducer over the given tapes; each transition
/// is present with probability `density`, priorities are in `0..=max_priority`.
pub fn random_parity(seed: u64, components: Vec<Alphabet>, states: usize, density: f64, max_priority: u32) -> ParityTransducer {
    let mut r = rng(seed);
    let k: usize = components.iter().map(Alphabet::len).product();
    let mut p = ParityTransducer::new(components, states, 0).expect("valid");
    for q in 0..states {
        p.set_priority(q, r.gen_range(0..=max_priority));
        for a in 0..k {
            if r.gen_bool(density) {
                let t = r.gen_range(0..states);
                p.set_transition(q, a, t).expect("in range");
            }
        }
    }
    p
}

/// Lasso with prefix length in `0..=max_prefix` and period length in
/// `1..=max_period`.
pub fn random_lasso(seed: u64, alphabet: usize, max_prefix: usize, max_period: usize) -> UPWord {
    let mut r = rng(seed);
    let lp = r.gen_range(0..=max_prefix);
    let lv = r.gen_range(1..=max_period);
    let u = (0..lp).map(|_| r.gen_range(0..alphabet)).collect();
    let v = (0..lv).map(|_| r.gen_range(0..alphabet)).collect();
    UPWord::new(u, v).expect("nonempty period")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::complete_parity;

    #[test]
    fn reproducible() {
        let a = random_nfa(7, 4, 2, 0.3);
        let b = random_nfa(7, 4, 2, 0.3);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(format!("{:?}", random_sync(3, 3, 0.3)), format!("{:?}", random_sync(3, 3, 0.3)));
    }

    #[test]
    fn invariants() {
        for seed in 0..20 {
            assert!(random_dvpa(seed, 3, 0.6).vpa().is_deterministic());
            let p = random_parity(seed, vec![letters(2)], 3, 0.5, 3);
            assert!(complete_parity(&p).is_complete());
            let t = random_sync(seed, 3, 0.4);
            assert!(t.padding_violations().is_empty());
        }
    }
}
