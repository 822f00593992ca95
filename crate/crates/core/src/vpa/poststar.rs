use std::collections::{HashMap, HashSet};

use crate::alphabet::Alphabet;
use crate::fa::{Label, Nfa, StateId};

use super::{Configuration, StackId, Vpa};

/// Regular set of configurations: `(p, γ1..γn)` belongs to the set iff the
/// Nfa accepts `γ1..γn` from `entry[p]`.
#[derive(Debug, Clone)]
pub struct ConfigAutomaton {
    pub nfa: Nfa,
    pub entry: Vec<StateId>,
}

impl ConfigAutomaton {
    /// The finite set `configs` over `states` control states.
    pub fn from_configs(states: usize, gamma: &Alphabet, configs: &[Configuration]) -> ConfigAutomaton {
        let mut nfa = Nfa::new(gamma.clone(), states);
        let entry: Vec<StateId> = (0..states).collect();
        for c in configs {
            let mut cur = entry[c.state];
            for &g in &c.stack {
                let next = nfa.add_state();
                nfa.add_edge(cur, Label::Sym(g), next);
                cur = next;
            }
            nfa.set_accepting(cur, true);
        }
        ConfigAutomaton { nfa, entry }
    }

    pub fn num_control(&self) -> usize {
        self.entry.len()
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        let mut cur = self.nfa.closure(&[self.entry[c.state]]);
        for &g in &c.stack {
            if cur.is_empty() {
                return false;
            }
            cur = self.nfa.step_set(&cur, g);
        }
        cur.iter().any(|&s| self.nfa.is_accepting(s))
    }

    /// Control states with at least one configuration in the set.
    pub fn live_states(&self) -> Vec<bool> {
        let acc: Vec<bool> = (0..self.nfa.num_states()).map(|s| self.nfa.is_accepting(s)).collect();
        let co = self.nfa.can_reach(&acc);
        self.entry.iter().map(|&e| co[e]).collect()
    }

    /// Stack words accepted for control state `p`.
    pub fn stacks_of(&self, p: StateId) -> Nfa {
        self.nfa.with_initial(&[self.entry[p]])
    }
}

/// Configurations reachable in `v` from the set `c` (saturation with an
/// explicit bottom symbol inside the engine).
pub fn post_star(v: &Vpa, c: &ConfigAutomaton) -> ConfigAutomaton {
    let n = v.num_states();
    assert_eq!(c.num_control(), n, "configuration automaton over other control states");
    let ng = v.gamma().len();
    let (bot, eps) = (ng, ng + 1);
    let src = c.nfa.eliminate_epsilon();
    let m = src.num_states();
    let fin = n + m;
    let mut out: Vec<Vec<(usize, usize)>> = vec![vec![]; n + m + 1];
    let mut rel: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut eps_into: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut work: Vec<(usize, usize, usize)> = vec![];
    let mut mids: HashMap<(StateId, StackId), usize> = HashMap::new();

    let insert_rel = |t: (usize, usize, usize),
                          rel: &mut HashSet<(usize, usize, usize)>,
                          out: &mut Vec<Vec<(usize, usize)>>,
                          eps_into: &mut HashMap<usize, Vec<usize>>|
     -> bool {
        if !rel.insert(t) {
            return false;
        }
        out[t.0].push((t.1, t.2));
        if t.1 == eps {
            eps_into.entry(t.2).or_default().push(t.0);
        }
        true
    };

    for s in 0..m {
        for &(l, t) in src.edges(s) {
            if let Label::Sym(g) = l {
                insert_rel((n + s, g, n + t), &mut rel, &mut out, &mut eps_into);
            }
        }
        if src.is_accepting(s) {
            insert_rel((n + s, bot, fin), &mut rel, &mut out, &mut eps_into);
        }
    }
    for p in 0..n {
        let e = c.entry[p];
        for &(l, t) in src.edges(e) {
            if let Label::Sym(g) = l {
                work.push((p, g, n + t));
            }
        }
        if src.is_accepting(e) {
            work.push((p, bot, fin));
        }
    }

    while let Some(t) = work.pop() {
        if !insert_rel(t, &mut rel, &mut out, &mut eps_into) {
            continue;
        }
        let (p, g, q) = t;
        if g == eps {
            for &(g2, q2) in &out[q] {
                work.push((p, g2, q2));
            }
            continue;
        }
        for &(_, pg, p2) in v.pops(p) {
            match pg {
                Some(x) if x == g => work.push((p2, eps, q)),
                None if g == bot => work.push((p2, bot, q)),
                _ => {}
            }
        }
        for &(_, p2) in v.internals(p) {
            work.push((p2, g, q));
        }
        for &(_, p2, g1) in v.pushes(p) {
            let mid = *mids.entry((p2, g1)).or_insert_with(|| {
                out.push(vec![]);
                out.len() - 1
            });
            work.push((p2, g1, mid));
            if insert_rel((mid, g, q), &mut rel, &mut out, &mut eps_into) {
                for &p3 in eps_into.get(&mid).map(Vec::as_slice).unwrap_or(&[]) {
                    work.push((p3, g, q));
                }
            }
        }
    }

    let total = out.len();
    let mut nfa = Nfa::new(v.gamma().clone(), total);
    for (s, edges) in out.iter().enumerate() {
        for &(g, t) in edges {
            if g == bot {
                nfa.set_accepting(s, true);
            } else if g == eps {
                nfa.add_edge(s, Label::Eps, t);
            } else {
                nfa.add_edge(s, Label::Sym(g), t);
            }
        }
    }
    ConfigAutomaton { nfa: nfa.eliminate_epsilon(), entry: (0..n).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::collections::VecDeque;

    /// Configurations reachable with stacks of height at most `h`, by BFS.
    fn bounded_reach(v: &Vpa, init: &[Configuration], h: usize, steps: usize) -> HashSet<Configuration> {
        let mut seen: HashSet<Configuration> = init.iter().cloned().collect();
        let mut dq: VecDeque<(Configuration, usize)> = init.iter().map(|c| (c.clone(), 0)).collect();
        while let Some((c, d)) = dq.pop_front() {
            if d == steps {
                continue;
            }
            for a in 0..v.sigma().len() {
                for nc in v.step(&c, a) {
                    if nc.stack.len() <= h && seen.insert(nc.clone()) {
                        dq.push_back((nc, d + 1));
                    }
                }
            }
        }
        seen
    }

    #[test]
    fn cnrn_post_star() {
        let d = fixtures::cnrn();
        let init = ConfigAutomaton::from_configs(d.num_states(), d.gamma(), &[d.initial_config()]);
        let post = post_star(d.vpa(), &init);
        let s0 = 0;
        let s1 = 1;
        assert!(post.contains(&Configuration::new(s0, vec![0, 0, 0])));
        assert!(post.contains(&Configuration::new(s1, vec![0, 0])));
        assert!(post.contains(&Configuration::new(s1, vec![])));
        let reach = bounded_reach(d.vpa(), &[d.initial_config()], 5, 12);
        assert!(reach.contains(&Configuration::new(s1, vec![0, 0])));
    }

    #[test]
    fn bottom_pops_are_modeled() {
        let d = fixtures::cr();
        let init = ConfigAutomaton::from_configs(d.num_states(), d.gamma(), &[d.initial_config()]);
        let post = post_star(d.vpa(), &init);
        let qr = 1;
        assert!(post.contains(&Configuration::new(qr, vec![])));
        assert!(post.contains(&Configuration::new(qr, vec![0, 0])));
    }
}
