use wordrel::oracles::{brute_slender, ccg06_recognizable, generate_rn, random_nfa, random_sync};
use wordrel::recognizable::is_recognizable;
use wordrel::slender::is_slender;
use wordrel::Budget;

#[test]
fn recognizability_routes_agree() {
    let b = Budget::default();
    let mut yes = 0;
    for seed in 0..200u64 {
        let t = random_sync(seed, 1 + (seed % 3) as usize, 0.3);
        let (v, _, _) = is_recognizable(&t, &b, Some(0)).unwrap();
        let o = ccg06_recognizable(&t, &b).unwrap();
        assert_eq!(v.holds, o, "seed {seed}");
        yes += usize::from(o);
    }
    eprintln!("recognizable: {yes}/200");
}

#[test]
fn slender_routes_agree() {
    let b = Budget::default();
    let mut yes = 0;
    for seed in 0..500u64 {
        let a = random_nfa(seed, 1 + (seed % 5) as usize, 2, 0.25);
        let v = is_slender(&a);
        let o = brute_slender(&a, &b).unwrap();
        assert_eq!(v.holds, o, "seed {seed}");
        yes += usize::from(o);
    }
    eprintln!("slender: {yes}/500");
}

#[test]
fn rn_is_recognizable() {
    for n in 1..=3 {
        let (v, r, _) = is_recognizable(&generate_rn(n), &Budget::default(), Some(0)).unwrap();
        eprintln!("n={n} lr={} m={}", r.lr_states, r.regularity.m);
        assert!(v.holds);
    }
}
