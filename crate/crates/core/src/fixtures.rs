//! Named machines used throughout the tests, the documentation and the
//! `fixtures` command.

use crate::alphabet::{Alphabet, BOT_NAME};
use crate::fa::{Label, Nfa};
use crate::omega::ParityTransducer;
use crate::transducer::{DetTransducer, Move, SyncTransducer};
use crate::vpa::{Dvpa, PushdownAlphabet};

fn alpha(names: &[&str]) -> Alphabet {
    Alphabet::from_names(names).expect("fixture alphabet")
}

fn sync_from(components: Vec<Alphabet>, states: &[&str], init: &str, acc: &[&str], edges: &[(&str, &[&str], &str)]) -> SyncTransducer {
    let mut t = SyncTransducer::empty(components, states.len());
    let idx = |s: &str| states.iter().position(|x| *x == s).expect("fixture state");
    let letters: Vec<_> = edges.iter().map(|(_, l, _)| t.letter_by_names(l).expect("fixture letter")).collect();
    let n = t.nfa_mut();
    n.set_names(states.iter().map(|s| s.to_string()).collect());
    n.add_initial(idx(init));
    for a in acc {
        n.set_accepting(idx(a), true);
    }
    for ((p, _, q), l) in edges.iter().zip(letters) {
        n.add_edge(idx(p), Label::Sym(l), idx(q));
    }
    SyncTransducer::new(t.components().to_vec(), t.nfa().clone()).expect("fixture respects padding")
}

/// Equality on {a,b}*.
pub fn eq2() -> SyncTransducer {
    let ab = alpha(&["a", "b"]);
    sync_from(vec![ab.clone(), ab], &["q"], "q", &["q"], &[("q", &["a", "a"], "q"), ("q", &["b", "b"], "q")])
}

/// {(a^n, b^n)}.
pub fn len1() -> SyncTransducer {
    sync_from(vec![alpha(&["a"]), alpha(&["b"])], &["q"], "q", &["q"], &[("q", &["a", "b"], "q")])
}

/// All pairs over {a,b}.
pub fn tot2() -> SyncTransducer {
    let ab = alpha(&["a", "b"]);
    let mut edges: Vec<(&str, Vec<&str>, &str)> = vec![];
    for x in ["a", "b"] {
        for y in ["a", "b"] {
            edges.push(("both", vec![x, y], "both"));
        }
        edges.push(("both", vec!["_", x], "right"));
        edges.push(("right", vec!["_", x], "right"));
        edges.push(("both", vec![x, "_"], "left"));
        edges.push(("left", vec![x, "_"], "left"));
    }
    let e: Vec<(&str, &[&str], &str)> = edges.iter().map(|(p, l, q)| (*p, l.as_slice(), *q)).collect();
    sync_from(vec![ab.clone(), ab], &["both", "left", "right"], "both", &["both", "left", "right"], &e)
}

/// a*#b* over {a,b,#}.
pub fn astar_hash_bstar() -> Nfa {
    let s = alpha(&["a", "b", "#"]);
    let mut n = Nfa::new(s, 2);
    n.add_initial(0);
    n.set_accepting(0, true);
    n.set_accepting(1, true);
    n.add_edge(0, Label::Sym(0), 0);
    n.add_edge(0, Label::Sym(2), 1);
    n.add_edge(1, Label::Sym(1), 1);
    n
}

/// a*b over {a,b}.
pub fn astar_b() -> Nfa {
    let mut n = Nfa::new(alpha(&["a", "b"]), 2);
    n.add_initial(0);
    n.set_accepting(1, true);
    n.add_edge(0, Label::Sym(0), 0);
    n.add_edge(0, Label::Sym(1), 1);
    n
}

fn det_chain(tape1: &[&str], tape2: &[&str]) -> DetTransducer {
    // Reads tape1 then the endmarker, then tape2 then the endmarker.
    let n = tape1.len() + tape2.len() + 3;
    let mut tape_of = vec![0; tape1.len() + 1];
    tape_of.extend(vec![1; tape2.len() + 1]);
    tape_of.push(0);
    let tapes = vec![alpha(&["a"]), alpha(&["b"])];
    let mut t = DetTransducer::new(tapes.clone(), tape_of, 0).expect("fixture");
    let mut q = 0;
    for (tape, word) in [(0, tape1), (1, tape2)] {
        for l in word {
            t.add_transition(q, Move::Letter(tapes[tape].id_of_name(l).unwrap()), q + 1).unwrap();
            q += 1;
        }
        t.add_transition(q, Move::End, q + 1).unwrap();
        q += 1;
    }
    t.set_accepting(q, true);
    assert_eq!(q + 1, n);
    t.set_names((0..n).map(|i| format!("g{i}")).collect());
    t
}

/// Deterministic transducer for {(a, b)}.
pub fn gr() -> DetTransducer {
    det_chain(&["a"], &["b"])
}

/// Deterministic transducer for {(aa, b)}.
pub fn gs() -> DetTransducer {
    det_chain(&["a", "a"], &["b"])
}

fn parity_from(names: &[&str], prio: &[u32], step: impl Fn(usize, usize, usize) -> usize) -> ParityTransducer {
    let ab = alpha(&["a", "b"]);
    let mut p = ParityTransducer::new(vec![ab.clone(), ab], names.len(), 0).expect("fixture");
    p.set_names(names.iter().map(|s| s.to_string()).collect());
    for (q, &x) in prio.iter().enumerate() {
        p.set_priority(q, x);
        for a in 0..2 {
            for b in 0..2 {
                p.set_transition_parts(q, &[a, b], step(q, a, b)).unwrap();
            }
        }
    }
    p
}

/// Equality of ω-words over {a,b}.
pub fn eq_omega() -> ParityTransducer {
    parity_from(&["eq", "bad"], &[2, 1], |q, a, b| if q == 0 && a == b { 0 } else { 1 })
}

/// All pairs of ω-words over {a,b}.
pub fn full_omega() -> ParityTransducer {
    parity_from(&["all"], &[2], |_, _, _| 0)
}

/// Pairs of ω-words over {a,b} with the same first letter.
pub fn head_omega() -> ParityTransducer {
    parity_from(&["start", "good", "bad"], &[1, 2, 1], |q, a, b| match q {
        0 if a == b => 1,
        0 => 2,
        _ => q,
    })
}

struct DvpaSpec<'a> {
    calls: &'a [&'a str],
    returns: &'a [&'a str],
    internals: &'a [&'a str],
    stack: &'a [&'a str],
    states: &'a [&'a str],
    accepting: &'a [&'a str],
    push: &'a [(&'a str, &'a str, &'a str, &'a str)],
    pop: &'a [(&'a str, &'a str, &'a str, &'a str)],
    int: &'a [(&'a str, &'a str, &'a str)],
}

/// Builds a DVPA whose initial state is the first one; `BOT` pops the
/// bottom.
fn dvpa_from(s: DvpaSpec) -> Dvpa {
    let sigma = PushdownAlphabet::from_names(s.calls, s.returns, s.internals).expect("fixture alphabet");
    let gamma = alpha(s.stack);
    let idx = |x: &str| s.states.iter().position(|y| *y == x).expect("fixture state");
    let letter = |x: &str| sigma.letters().id_of_name(x).expect("fixture letter");
    let mut d = Dvpa::new(sigma.clone(), gamma.clone(), s.states.len(), 0).expect("fixture");
    d.set_names(s.states.iter().map(|x| x.to_string()).collect());
    for a in s.accepting {
        d.set_accepting(idx(a), true);
    }
    for &(p, c, q, g) in s.push {
        d.add_push(idx(p), letter(c), idx(q), gamma.id_of_name(g).unwrap()).unwrap();
    }
    for &(p, r, g, q) in s.pop {
        let g = if g == BOT_NAME { None } else { Some(gamma.id_of_name(g).unwrap()) };
        d.add_pop(idx(p), letter(r), g, idx(q)).unwrap();
    }
    for &(p, a, q) in s.int {
        d.add_int(idx(p), letter(a), idx(q)).unwrap();
    }
    d
}

/// DVPA for c*r*, popping the empty stack in `q_r`.
pub fn cr() -> Dvpa {
    dvpa_from(DvpaSpec {
        calls: &["c"],
        returns: &["r"],
        internals: &[],
        stack: &["g"],
        states: &["q_c", "q_r"],
        accepting: &["q_c", "q_r"],
        push: &[("q_c", "c", "q_c", "g")],
        pop: &[("q_c", "r", "g", "q_r"), ("q_r", "r", "g", "q_r"), ("q_r", "r", BOT_NAME, "q_r")],
        int: &[],
    })
}

/// Variant of [`cr`] where the empty stack is signalled by an internal
/// letter `a_r` instead of bottom pops: c^n r^m with m ≤ n, or c^n r^n a_r*.
pub fn crx() -> Dvpa {
    dvpa_from(DvpaSpec {
        calls: &["c"],
        returns: &["r"],
        internals: &["a_r"],
        stack: &["g", "g_b"],
        states: &["q_c0", "q_c", "q_r", "q_e"],
        accepting: &["q_c0", "q_c", "q_r", "q_e"],
        push: &[("q_c0", "c", "q_c", "g_b"), ("q_c", "c", "q_c", "g")],
        pop: &[("q_c", "r", "g", "q_r"), ("q_r", "r", "g", "q_r"), ("q_c", "r", "g_b", "q_e"), ("q_r", "r", "g_b", "q_e")],
        int: &[("q_c0", "a_r", "q_e"), ("q_e", "a_r", "q_e")],
    })
}

/// DVPA without bottom pops: c^n r^m with m ≤ n.
pub fn cnrn() -> Dvpa {
    dvpa_from(DvpaSpec {
        calls: &["c"],
        returns: &["r"],
        internals: &[],
        stack: &["g"],
        states: &["s0", "s1"],
        accepting: &["s0", "s1"],
        push: &[("s0", "c", "s0", "g")],
        pop: &[("s0", "r", "g", "s1"), ("s1", "r", "g", "s1")],
        int: &[],
    })
}
