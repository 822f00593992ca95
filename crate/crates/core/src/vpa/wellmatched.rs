use std::collections::{HashMap, HashSet};

use crate::alphabet::LetterId;
use crate::fa::StateId;

use super::{post_star, square, ConfigAutomaton, Configuration, Dvpa, StackId};

/// Lazily saturated summaries of the two-copy product of a DVPA. A pair
/// state `x = p·n + q` reaches `y` if both copies can read a common
/// well-matched word, from `p` and `q`, ending in the components of `y`.
/// Sources are computed on demand and shared across queries.
pub struct PairSummaries<'a> {
    d: &'a Dvpa,
    n: usize,
    calls: Vec<LetterId>,
    rets: Vec<LetterId>,
    ints: Vec<LetterId>,
    facts: HashSet<(usize, usize)>,
    reached: HashMap<usize, Vec<usize>>,
    callers: HashMap<usize, Vec<(usize, StackId, StackId)>>,
    caller_seen: HashSet<(usize, usize, StackId, StackId)>,
    work: Vec<(usize, usize)>,
    free: HashMap<usize, Vec<usize>>,
}

impl<'a> PairSummaries<'a> {
    pub fn new(d: &'a Dvpa) -> PairSummaries<'a> {
        let s = d.sigma();
        PairSummaries {
            d,
            n: d.num_states(),
            calls: s.calls(),
            rets: s.returns(),
            ints: s.internals(),
            facts: HashSet::new(),
            reached: HashMap::new(),
            callers: HashMap::new(),
            caller_seen: HashSet::new(),
            work: vec![],
            free: HashMap::new(),
        }
    }

    pub fn pair(&self, p: StateId, q: StateId) -> usize {
        p * self.n + q
    }

    pub fn split(&self, x: usize) -> (StateId, StateId) {
        (x / self.n, x % self.n)
    }

    fn add(&mut self, src: usize, y: usize) {
        if self.facts.insert((src, y)) {
            self.reached.entry(src).or_default().push(y);
            self.work.push((src, y));
        }
    }

    fn enter(&mut self, x: usize) {
        if !self.reached.contains_key(&x) {
            self.reached.insert(x, vec![]);
            self.add(x, x);
        }
    }

    /// Targets of matched pops of `(g1, g2)` from pair state `y`.
    fn matched_pops(&self, y: usize, g1: StackId, g2: StackId) -> Vec<usize> {
        let (a, b) = self.split(y);
        self.rets
            .iter()
            .filter_map(|&r| Some(self.pair(self.d.pop_target(a, r, Some(g1))?, self.d.pop_target(b, r, Some(g2))?)))
            .collect()
    }

    fn saturate(&mut self) {
        while let Some((src, y)) = self.work.pop() {
            let (a, b) = self.split(y);
            for i in 0..self.ints.len() {
                let x = self.ints[i];
                if let (Some(a1), Some(b1)) = (self.d.int_target(a, x), self.d.int_target(b, x)) {
                    self.add(src, self.pair(a1, b1));
                }
            }
            for i in 0..self.calls.len() {
                let c = self.calls[i];
                let (Some((a1, g1)), Some((b1, g2))) = (self.d.push_target(a, c), self.d.push_target(b, c)) else {
                    continue;
                };
                let y1 = self.pair(a1, b1);
                self.enter(y1);
                if !self.caller_seen.insert((y1, src, g1, g2)) {
                    continue;
                }
                self.callers.entry(y1).or_default().push((src, g1, g2));
                let exits = self.reached[&y1].clone();
                for y2 in exits {
                    for z in self.matched_pops(y2, g1, g2) {
                        self.add(src, z);
                    }
                }
            }
            // `y` as an exit of its source, seen by every caller of it.
            let waiting = self.callers.get(&src).cloned().unwrap_or_default();
            for (s2, g1, g2) in waiting {
                for z in self.matched_pops(y, g1, g2) {
                    self.add(s2, z);
                }
            }
        }
    }

    /// Pair states reachable from `x` by a common well-matched word.
    pub fn targets(&mut self, x: usize) -> &[usize] {
        self.enter(x);
        self.saturate();
        &self.reached[&x]
    }

    /// Pair states reachable from `x` by a common word without unmatched
    /// returns, with any stack left behind.
    pub fn free_targets(&mut self, x: usize) -> &[usize] {
        if !self.free.contains_key(&x) {
            let mut seen: HashSet<usize> = HashSet::from([x]);
            let mut stack = vec![x];
            let mut all = vec![];
            while let Some(y) = stack.pop() {
                all.push(y);
                let mut next: Vec<usize> = self.targets(y).to_vec();
                let (a, b) = self.split(y);
                for &c in &self.calls {
                    if let (Some((a1, _)), Some((b1, _))) = (self.d.push_target(a, c), self.d.push_target(b, c)) {
                        next.push(self.pair(a1, b1));
                    }
                }
                for z in next {
                    if seen.insert(z) {
                        stack.push(z);
                    }
                }
            }
            all.sort_unstable();
            self.free.insert(x, all);
        }
        &self.free[&x]
    }
}

/// The full well-matched relation, indexed by source pair `p·n + q`, each
/// target list sorted.
pub fn well_matched_pairs(d: &Dvpa) -> Vec<Vec<usize>> {
    let n = d.num_states();
    let mut s = PairSummaries::new(d);
    (0..n * n)
        .map(|x| {
            let mut t = s.targets(x).to_vec();
            t.sort_unstable();
            t
        })
        .collect()
}

/// The same relation by one post* run per source pair on the square:
/// `y` is a target of `x` iff `(y, empty)` is reachable from `(x, empty)`.
pub fn well_matched_pairs_via_post_star(d: &Dvpa) -> Vec<Vec<usize>> {
    let sq = square(d);
    let n2 = sq.num_states();
    (0..n2)
        .map(|x| {
            let init = ConfigAutomaton::from_configs(n2, sq.gamma(), &[Configuration::new(x, vec![])]);
            let post = post_star(&sq, &init);
            (0..n2).filter(|&y| post.contains(&Configuration::new(y, vec![]))).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn summaries_agree_with_post_star_on_fixtures() {
        for d in [fixtures::cr(), fixtures::cnrn(), fixtures::crx()] {
            assert_eq!(well_matched_pairs(&d), well_matched_pairs_via_post_star(&d));
        }
    }

    #[test]
    fn cr_pairs() {
        let d = fixtures::cr();
        let wm = well_matched_pairs(&d);
        let (qc, qr) = (0, 1);
        let n = d.num_states();
        assert!(wm[qc * n + qc].contains(&(qc * n + qc)));
        assert!(wm[qc * n + qc].contains(&(qr * n + qr)));
        assert!(!wm[qr * n + qr].contains(&(qc * n + qc)));
    }
}
