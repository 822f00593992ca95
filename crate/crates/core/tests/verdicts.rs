use wordrel::fixtures;
use wordrel::gadget::{build_gadget, det_buchi_lasso_accepts, endmarker_lasso, normalize};
use wordrel::oracles::bounded_separator;
use wordrel::recognizable::is_recognizable;
use wordrel::regularity::is_regular;
use wordrel::slender::is_slender;
use wordrel::vpa::Configuration;
use wordrel::Budget;

#[test]
fn cr_is_regular_and_deep_configurations_agree() {
    let d = fixtures::cr();
    let (v, stats) = is_regular(&d, &Budget::default(), None).unwrap();
    assert!(v.holds);
    assert!(stats.m > 0);
    // Stacks deeper than the search horizon cannot be told apart.
    for q in 0..d.num_states() {
        for i in 9..12 {
            for j in 9..12 {
                let (a, b) = (Configuration::new(q, vec![0; i]), Configuration::new(q, vec![0; j]));
                assert_eq!(bounded_separator(&d, &a, &b, 8), None, "state {q}, heights {i} and {j}");
            }
        }
    }
}

#[test]
fn non_regular_witnesses_are_separated() {
    for d in [fixtures::crx(), fixtures::cnrn()] {
        let (v, _) = is_regular(&d, &Budget::default(), None).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_ne!(w.left, w.right);
        let sep = w.separator.expect("short separator");
        assert_ne!(d.accepts_from(&w.left, &sep), d.accepts_from(&w.right, &sep));
    }
}

#[test]
fn binary_fixture_verdicts() {
    let b = Budget::default();
    assert!(!is_recognizable(&fixtures::eq2(), &b, Some(0)).unwrap().0.holds);
    assert!(!is_recognizable(&fixtures::len1(), &b, Some(0)).unwrap().0.holds);
    assert!(is_recognizable(&fixtures::tot2(), &b, Some(0)).unwrap().0.holds);
    assert!(!is_slender(&fixtures::astar_hash_bstar()).holds);
    assert!(is_slender(&fixtures::astar_b()).holds);
}

#[test]
fn tiny_budget_is_a_resource_error() {
    let r = is_recognizable(&fixtures::tot2(), &Budget::new(2), Some(0));
    assert!(matches!(r, Err(wordrel::Error::ResourceLimit { .. })), "{:?}", r.map(|x| x.0.holds));
}

#[test]
fn gadget_on_common_pair() {
    let gr = normalize(&fixtures::gr());
    let gs = normalize(&fixtures::gs());
    let same = build_gadget(&gr, &gr).unwrap();
    let a = gr.machine.tapes()[0].id_of_name("a").unwrap();
    let b = gr.machine.tapes()[1].id_of_name("b").unwrap();
    let w = endmarker_lasso(same.b_r.tapes(), &[a], &[b]);
    assert!(det_buchi_lasso_accepts(&same.b_r, &w).unwrap());
    assert!(!det_buchi_lasso_accepts(&same.b_s, &w).unwrap());

    let diff = build_gadget(&gr, &gs).unwrap();
    let w = endmarker_lasso(diff.b_r.tapes(), &[a], &[b]);
    assert_eq!(det_buchi_lasso_accepts(&diff.b_r, &w).unwrap(), det_buchi_lasso_accepts(&diff.b_s, &w).unwrap());
}
