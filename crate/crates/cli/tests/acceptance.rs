//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each and exits nonzero if any failed.

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

use wordrel::fixtures;
use wordrel::gadget::{build_gadget, det_buchi_lasso_accepts, endmarker_lasso, lasso_run, normalize};
use wordrel::omega::{
    lasso_accepts, omega_finite, profile_of_word, profile_product, trim_buchi, up_accepts_profiles, TransitionProfile, UPWord,
};
use wordrel::omega_rec::{build_a_sharp, build_ebar_j, is_omega_recognizable};
use wordrel::oracles::{
    bounded_separator, brute_slender, ccg06_recognizable, generate_rn, random_buchi, random_lasso, random_nfa, random_sync,
    random_vpa, RN_STATE_FACTOR,
};
use wordrel::recognizable::is_recognizable;
use wordrel::regularity::is_regular;
use wordrel::slender::is_slender;
use wordrel::transducer::WordTuple;
use wordrel::vpa::{post_star, ConfigAutomaton, Configuration, Vpa};
use wordrel::{Budget, LetterId};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.wr"))
}

fn cli_json(args: &[&str]) -> Result<(Value, Duration, i32), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_wordrel")).arg("--report").arg("json").args(args).output().map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("bad JSON from {args:?}: {e}"))?;
    Ok((v, took, out.status.code().unwrap_or(-1)))
}

fn words(k: usize, min: usize, max: usize) -> Vec<Vec<LetterId>> {
    let mut out = vec![];
    let mut layer = vec![vec![]];
    for len in 0..=max {
        if len >= min {
            out.extend(layer.iter().cloned());
        }
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
    }
    out
}

fn criterion_1() -> Outcome {
    let mut notes = vec![];
    for (name, regular) in [("cr", true), ("crx", false)] {
        let path = fixture_path(name);
        let (v, took, code) = cli_json(&["check-regular", path.to_str().unwrap()])?;
        ensure(v["holds"] == Value::Bool(regular), || format!("{name}: verdict {}", v["holds"]))?;
        ensure(code == if regular { 0 } else { 1 }, || format!("{name}: exit code {code}"))?;
        ensure(took < Duration::from_secs(1), || format!("{name}: took {took:?}"))?;
        notes.push(format!("{name} {} in {:.0} ms", if regular { "regular" } else { "not regular" }, took.as_secs_f64() * 1e3));
    }
    let d = fixtures::crx();
    let (v, _) = is_regular(&d, &Budget::default(), None).map_err(|e| e.to_string())?;
    let w = v.witness.ok_or("no witness for CRX")?;
    let sep = bounded_separator(&d, &w.left, &w.right, w.separator_depth).ok_or("witness pair has no separator")?;
    let (a1, a2) = (d.accepts_from(&w.left, &sep), d.accepts_from(&w.right, &sep));
    ensure(a1 != a2, || "separator accepted from both or neither".into())?;
    notes.push(format!("CRX separator of length {} validated", sep.len()));
    Ok(notes.join("; "))
}

fn criterion_2() -> Outcome {
    let b = Budget::default();
    let mut yes = 0;
    for seed in 0..200u64 {
        let t = random_sync(seed, 1 + (seed % 3) as usize, 0.3);
        let (v, _, _) = is_recognizable(&t, &b, Some(0)).map_err(|e| format!("seed {seed}: {e}"))?;
        let o = ccg06_recognizable(&t, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(v.holds == o, || format!("seed {seed}: DVPA route {} vs representatives {o}", v.holds))?;
        yes += usize::from(o);
    }
    Ok(format!("200/200 agree ({yes} recognizable)"))
}

fn criterion_3() -> Outcome {
    let b = Budget::default();
    let mut non = 0;
    for seed in 0..500u64 {
        let a = random_nfa(seed, 1 + (seed % 5) as usize, 2, 0.25);
        let v = is_slender(&a);
        let o = brute_slender(&a, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(v.holds == o, || format!("seed {seed}: is_slender {} vs oracle {o}", v.holds))?;
        if let Some(w) = &v.witness {
            non += 1;
            ensure(w.replay(&a), || format!("seed {seed}: witness does not replay"))?;
            let ws = w.pump(2);
            let distinct: HashSet<&Vec<LetterId>> = ws.iter().collect();
            ensure(distinct.len() >= 3 && ws.iter().all(|x| x.len() == ws[0].len() && a.accepts(x)), || {
                format!("seed {seed}: pumped words are not 3 distinct accepted words of one length")
            })?;
        }
    }
    let ex = fixtures::astar_hash_bstar();
    let v = is_slender(&ex);
    ensure(!v.holds, || "a*#b* reported slender".into())?;
    let w = v.witness.ok_or("a*#b* without witness")?;
    ensure(w.replay(&ex), || "a*#b* witness does not replay".into())?;
    Ok(format!("500/500 agree ({non} not slender, all witnesses pump); a*#b* not slender"))
}

fn criterion_4() -> Outcome {
    let mut samples = 0;
    for seed in 0..1000u64 {
        let a = random_buchi(seed, 1 + (seed % 4) as usize, 2, 0.35);
        let w = random_lasso(seed ^ 0x9e37, 2, 4, 4);
        let (p, l) = (up_accepts_profiles(&a, &w), lasso_accepts(&a, &w));
        ensure(p == l, || format!("seed {seed}: profiles {p}, lasso {l}"))?;
        samples += 1;
    }
    let mut splits = 0;
    for seed in 0..500u64 {
        let a = random_buchi(seed, 1 + (seed % 4) as usize, 2, 0.35);
        let w = random_lasso(seed.wrapping_mul(31) + 7, 2, 6, 6).unroll(3 + (seed % 9) as usize);
        let (i, j) = ((seed as usize) % (w.len() + 1), (seed as usize / 3) % (w.len() + 1));
        let (i, j) = (i.min(j), i.max(j));
        let (x, y, z) = (&w[..i], &w[i..j], &w[j..]);
        let (px, py, pz) = (profile_of_word(&a, x), profile_of_word(&a, y), profile_of_word(&a, z));
        let prod = |s: &TransitionProfile, t: &TransitionProfile| profile_product(s, t).expect("same automaton");
        let id = TransitionProfile::identity(&a);
        ensure(prod(&prod(&px, &py), &pz) == profile_of_word(&a, &w), || format!("seed {seed}: homomorphism"))?;
        ensure(prod(&prod(&px, &py), &pz) == prod(&px, &prod(&py, &pz)), || format!("seed {seed}: associativity"))?;
        ensure(prod(&id, &py) == py && prod(&py, &id) == py, || format!("seed {seed}: identity"))?;
        splits += 1;
    }
    Ok(format!("{samples} lasso samples agree; laws hold on {splits} splits"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let mut notes = vec![];
    for (name, m, expect) in [("EQω", fixtures::eq_omega(), false), ("FULLω", fixtures::full_omega(), true), ("HEADω", fixtures::head_omega(), true)] {
        let (v, _) = is_omega_recognizable(&m, &b).map_err(|e| format!("{name}: {e}"))?;
        ensure(v.holds == expect, || format!("{name}: verdict {}", v.holds))?;
        let ebar = build_ebar_j(&m, 1).map_err(|e| e.to_string())?;
        let sharp = build_a_sharp(&ebar, &b).map_err(|e| e.to_string())?;
        let comps = ebar.components().to_vec();
        let mut slices = 0;
        // Γ puts `#` first, so letter x of Σ is x + 1 in Γ.
        for u in words(2, 0, 3) {
            for x in words(2, u.len(), u.len()) {
                for v in words(2, 1, 3) {
                    for y in words(2, v.len(), v.len()) {
                        let lift = |w: &[LetterId]| w.iter().map(|&c| c + 1).collect::<Vec<_>>();
                        let mut left = lift(&u);
                        left.push(0);
                        left.extend(lift(&v));
                        let mut right = lift(&x);
                        right.push(0);
                        right.extend(lift(&y));
                        let in_sharp = sharp.sync().accepts(&WordTuple(vec![left, right])).map_err(|e| e.to_string())?;
                        let pair = UPWord::zip(&comps, &[UPWord { prefix: u.clone(), period: v.clone() }, UPWord { prefix: x.clone(), period: y.clone() }]);
                        let in_ebar = up_accepts_profiles(&ebar, &pair);
                        ensure(in_sharp != in_ebar, || format!("{name}: slice {u:?}#{v:?} / {x:?}#{y:?}"))?;
                        slices += 1;
                    }
                }
            }
        }
        notes.push(format!("{name} {} ({slices} slices)", if expect { "recognizable" } else { "not recognizable" }));
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{} in {:.1} s", notes.join(", "), took.as_secs_f64()))
}

fn criterion_6() -> Outcome {
    let b = Budget::default();
    let mut finite = 0;
    for seed in 0..200u64 {
        let a = random_buchi(seed, 1 + (seed % 5) as usize, 2, 0.3);
        let f = omega_finite(&trim_buchi(&a), &b).map_err(|e| format!("seed {seed}: {e}"))?;
        let s = is_slender(a.nfa()).holds;
        ensure(f == s, || format!("seed {seed}: omega_finite {f}, slender {s}"))?;
        finite += usize::from(f);
    }
    Ok(format!("200/200 agree ({finite} finite)"))
}

/// Configurations of height at most `keep` reachable from the initial
/// ones. Runs never need to climb more than `|Q|²` above the final height:
/// of two nested matched push/pop pairs with the same outer states the
/// inner one can replace the outer one.
fn bounded_reach(v: &Vpa, keep: usize) -> HashSet<Configuration> {
    let cap = keep + v.num_states() * v.num_states();
    let mut seen: HashSet<Configuration> = v.initial().iter().map(|&q| Configuration::new(q, vec![])).collect();
    let mut dq: VecDeque<Configuration> = seen.iter().cloned().collect();
    while let Some(c) = dq.pop_front() {
        for a in 0..v.sigma().len() {
            for n in v.step(&c, a) {
                if n.stack.len() <= cap && seen.insert(n.clone()) {
                    dq.push_back(n);
                }
            }
        }
    }
    seen.retain(|c| c.stack.len() <= keep);
    seen
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for seed in 0..100u64 {
        let v = random_vpa(seed, 3, 0.2);
        let init: Vec<Configuration> = v.initial().iter().map(|&q| Configuration::new(q, vec![])).collect();
        let post = post_star(&v, &ConfigAutomaton::from_configs(v.num_states(), v.gamma(), &init));
        let reach = bounded_reach(&v, 4);
        for q in 0..v.num_states() {
            for stack in words(v.gamma().len(), 0, 4) {
                let c = Configuration::new(q, stack);
                ensure(post.contains(&c) == reach.contains(&c), || format!("seed {seed}: {c:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("100 VPAs, {checked} configurations agree"))
}

fn criterion_8() -> Outcome {
    let nf = normalize(&fixtures::gr());
    let g = build_gadget(&nf, &nf).map_err(|e| e.to_string())?;
    let a = nf.machine.tapes()[0].id_of_name("a").map_err(|e| e.to_string())?;
    let bb = nf.machine.tapes()[1].id_of_name("b").map_err(|e| e.to_string())?;
    let w = endmarker_lasso(g.b_r.tapes(), &[a], &[bb]);
    let run = lasso_run(&g.b_r, &w).map_err(|e| e.to_string())?;
    ensure(run.accepting(&g.b_r), || "B_R rejects ((a#)^w, (b#)^w)".into())?;
    ensure(run.cycle.contains(&g.accept_r), || "B_R cycle misses the accepting sink of A_R".into())?;
    ensure(!det_buchi_lasso_accepts(&g.b_s, &w).map_err(|e| e.to_string())?, || "B_S accepts ((a#)^w, (b#)^w)".into())?;
    let d = build_gadget(&normalize(&fixtures::gr()), &normalize(&fixtures::gs())).map_err(|e| e.to_string())?;
    let mut sampled = 0;
    for x in words(1, 0, 3) {
        for y in words(1, 0, 3) {
            let w = endmarker_lasso(d.b_r.tapes(), &x, &y);
            let (r, s) = (det_buchi_lasso_accepts(&d.b_r, &w).map_err(|e| e.to_string())?, det_buchi_lasso_accepts(&d.b_s, &w).map_err(|e| e.to_string())?);
            ensure(r == s, || format!("disjoint fixture: B_R {r}, B_S {s} on {x:?}/{y:?}"))?;
            sampled += 1;
        }
    }
    Ok(format!("witness lasso separates B_R from B_S; disjoint pair agrees on {sampled} lassos"))
}

fn criterion_9() -> Outcome {
    let mut notes = vec![];
    for n in 1..=3 {
        let t = generate_rn(n);
        let states = t.nfa().num_states();
        ensure(states <= RN_STATE_FACTOR * n * n, || format!("n={n}: {states} states"))?;
        let (v, rep, _) = is_recognizable(&t, &Budget::default(), Some(0)).map_err(|e| e.to_string())?;
        ensure(v.holds, || format!("n={n}: not recognizable"))?;
        notes.push(format!("n={n}: {states} states, recognizable (m={})", rep.regularity.m));
    }
    Ok(format!("{}; c = {RN_STATE_FACTOR}", notes.join(", ")))
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; they are ignored.
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (i, f) in criteria {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {i}: PASS [{secs:.2}s] {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {i}: FAIL [{secs:.2}s] {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
