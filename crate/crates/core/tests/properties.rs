use proptest::prelude::*;

use wordrel::format::{parse, serialize, Machine, MachineFile};
use wordrel::omega::{lasso_accepts, profile_of_word, profile_product, up_accepts_profiles, TransitionProfile, UPWord};
use wordrel::oracles::random::letters;
use wordrel::oracles::{random_buchi, random_nfa, random_parity, random_sync};
use wordrel::Budget;

fn word(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..2usize, 0..=max)
}

fn text(m: Machine) -> String {
    serialize(&MachineFile::new("p", m)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn serialize_is_a_fixpoint(seed in any::<u64>(), n in 1..5usize) {
        for m in [
            Machine::Nfa(random_nfa(seed, n, 2, 0.3)),
            Machine::Sync(random_sync(seed, n, 0.3)),
            Machine::Parity(random_parity(seed, vec![letters(2), letters(2)], n, 0.5, 3)),
        ] {
            let t = text(m);
            let back = parse(&t).unwrap();
            prop_assert_eq!(serialize(&back).unwrap(), t);
        }
    }

    #[test]
    fn parsed_nfa_accepts_the_same_words(seed in any::<u64>(), n in 1..5usize, w in word(8)) {
        let a = random_nfa(seed, n, 2, 0.3);
        let Machine::Nfa(b) = parse(&text(Machine::Nfa(a.clone()))).unwrap().machine else { panic!("kind") };
        prop_assert_eq!(a.accepts(&w), b.accepts(&w));
    }

    #[test]
    fn determinize_and_complement(seed in any::<u64>(), n in 1..6usize, w in word(10)) {
        let a = random_nfa(seed, n, 2, 0.3);
        let d = a.determinize(&Budget::default()).unwrap();
        prop_assert_eq!(d.accepts(&w), a.accepts(&w));
        prop_assert_eq!(d.complement().accepts(&w), !a.accepts(&w));
    }

    #[test]
    fn profiles_form_a_monoid(seed in any::<u64>(), n in 1..5usize, x in word(5), y in word(5), z in word(5)) {
        let a = random_buchi(seed, n, 2, 0.35);
        let p = |w: &[usize]| profile_of_word(&a, w);
        let m = |s: &TransitionProfile, t: &TransitionProfile| profile_product(s, t).unwrap();
        let (px, py, pz) = (p(&x), p(&y), p(&z));
        prop_assert_eq!(m(&m(&px, &py), &pz), m(&px, &m(&py, &pz)));
        let xy: Vec<usize> = x.iter().chain(&y).copied().collect();
        prop_assert_eq!(m(&px, &py), p(&xy));
        let id = TransitionProfile::identity(&a);
        prop_assert_eq!(m(&id, &px), px.clone());
        prop_assert_eq!(m(&px, &id), px);
    }

    #[test]
    fn lasso_membership_ignores_presentation(seed in any::<u64>(), n in 1..5usize, u in word(4), v in word(4), k in 1..3usize) {
        prop_assume!(!v.is_empty());
        let a = random_buchi(seed, n, 2, 0.35);
        let w = UPWord::new(u.clone(), v.clone()).unwrap();
        // Same ω-word: unroll one period into the prefix and repeat the period.
        let mut u2 = u.clone();
        u2.extend(&v);
        let w2 = UPWord::new(u2, v.repeat(k)).unwrap();
        prop_assert!(w.same_word(&w2));
        let verdict = lasso_accepts(&a, &w);
        prop_assert_eq!(lasso_accepts(&a, &w2), verdict);
        prop_assert_eq!(up_accepts_profiles(&a, &w), verdict);
    }
}
