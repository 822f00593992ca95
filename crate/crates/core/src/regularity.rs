//! Regularity of DVPA languages. Two reachable configurations whose stacks
//! agree on the top `m = n³+1` letters are equivalent whenever the language
//! is regular, so the language is regular iff no such pair is separable.
//! Here `n` counts the reachable states of the completed machine.
//! The three conditions are synchronous transducers over configuration
//! words; [`is_regular`] explores their product lazily.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Letter, LetterId, Word};
use crate::error::{Budget, Result};
use crate::fa::{intersect, Dfa, Label, Nfa, StateId};
use crate::oracles::bounded_separator;
use crate::transducer::{padded_letter_id, sync_product, SyncTransducer, WordTuple};
use crate::verdict::Verdict;
use crate::vpa::{post_star, ConfigAutomaton, Configuration, Dvpa, PairSummaries, StackId};

/// Prefix marking control-state symbols in configuration words.
pub const STATE_MARK: &str = "@";

/// Control states first (`@name`), then the stack letters.
pub fn config_alphabet(d: &Dvpa) -> Alphabet {
    let mut letters: Vec<Letter> = (0..d.num_states()).map(|p| Letter::sym(format!("{STATE_MARK}{}", d.state_name(p)))).collect();
    letters.extend(d.gamma().letters().iter().cloned());
    Alphabet::new(letters).expect("state names are distinct")
}

/// The control state followed by the stack, top first.
pub fn config_word(d: &Dvpa, c: &Configuration) -> Word {
    let n = d.num_states();
    let mut w = vec![c.state];
    w.extend(c.stack.iter().map(|&g| n + g));
    w
}

pub fn parse_config_word(d: &Dvpa, w: &[LetterId]) -> Option<Configuration> {
    let n = d.num_states();
    let (&p, rest) = w.split_first()?;
    if p >= n || rest.iter().any(|&g| g < n) {
        return None;
    }
    Some(Configuration::new(p, rest.iter().map(|&g| g - n).collect()))
}

/// `m = n³ + 1`.
pub fn depth_bound(n: usize) -> usize {
    n.pow(3) + 1
}

fn reachable_configs(d: &Dvpa) -> ConfigAutomaton {
    let init = ConfigAutomaton::from_configs(d.num_states(), d.gamma(), &[d.initial_config()]);
    post_star(d.vpa(), &init)
}

/// Configuration words of the configurations reachable from the initial one.
pub fn reachable_config_words(d: &Dvpa) -> Nfa {
    let post = reachable_configs(d);
    let n = d.num_states();
    let src = &post.nfa;
    let mut out = Nfa::new(config_alphabet(d), src.num_states() + 1);
    out.add_initial(0);
    for p in 0..n {
        out.add_edge(0, Label::Sym(p), post.entry[p] + 1);
    }
    for s in 0..src.num_states() {
        out.set_accepting(s + 1, src.is_accepting(s));
        for &(l, t) in src.edges(s) {
            if let Label::Sym(g) = l {
                out.add_edge(s + 1, Label::Sym(n + g), t + 1);
            }
        }
    }
    out.trim()
}

/// Pairs of reachable configurations.
pub fn reachable_pairs(d: &Dvpa) -> SyncTransducer {
    let a = reachable_config_words(d);
    sync_product(&a, &a)
}

/// Pairs of distinct configuration words with the same control state whose
/// stacks agree on, and are at least as long as, the top `m` letters.
pub fn deep_equal_checker(d: &Dvpa, m: usize) -> Result<SyncTransducer> {
    let c = config_alphabet(d);
    let comps = vec![c.clone(), c.clone()];
    let n = d.num_states();
    let k = c.len();
    // 0 = start, 1 + i = i equal stack letters read (i ≤ m), m + 2 = differ.
    let diff = m + 2;
    let mut nfa = Nfa::new(Alphabet::product(&comps, true), m + 3);
    nfa.add_initial(0);
    nfa.set_accepting(diff, true);
    for p in 0..n {
        nfa.add_edge(0, Label::Sym(padded_letter_id(&comps, &[Some(p), Some(p)])), 1);
    }
    for i in 0..=m {
        for g in n..k {
            nfa.add_edge(1 + i, Label::Sym(padded_letter_id(&comps, &[Some(g), Some(g)])), 1 + (i + 1).min(m));
        }
    }
    let opts: Vec<Option<LetterId>> = std::iter::once(None).chain((0..k).map(Some)).collect();
    for &x in &opts {
        for &y in &opts {
            if x.is_none() && y.is_none() {
                continue;
            }
            let l = Label::Sym(padded_letter_id(&comps, &[x, y]));
            if x != y {
                nfa.add_edge(1 + m, l, diff);
            }
            nfa.add_edge(diff, l, diff);
        }
    }
    SyncTransducer::restricted(comps, &nfa)
}

/// Lazy transition structure of the non-equivalence checker over a
/// complete DVPA (a stalled run is its sink). Control is `x = p·n + q` for
/// a pair of states, or [`NeSteps::fin`].
struct NeSteps<'a> {
    d: &'a Dvpa,
    sums: PairSummaries<'a>,
    pops: HashMap<usize, HashMap<(Option<StackId>, Option<StackId>), Vec<usize>>>,
    zok: HashMap<usize, bool>,
    fin: usize,
}

impl<'a> NeSteps<'a> {
    fn new(d: &'a Dvpa) -> NeSteps<'a> {
        let n = d.num_states();
        NeSteps { d, sums: PairSummaries::new(d), pops: HashMap::new(), zok: HashMap::new(), fin: n * n }
    }

    fn pair(&self, p: StateId, q: StateId) -> usize {
        p * self.d.num_states() + q
    }

    /// Some common word without unmatched returns leads from `x` to a pair
    /// on which exactly one component accepts.
    fn separable_above(&mut self, x: usize) -> bool {
        if let Some(&b) = self.zok.get(&x) {
            return b;
        }
        let n = self.d.num_states();
        let d = self.d;
        let b = self.sums.free_targets(x).iter().any(|&y| d.is_accepting(y / n) != d.is_accepting(y % n));
        self.zok.insert(x, b);
        b
    }

    /// Well-matched common word, then one return popping `μ` and `ν`
    /// (`None` pops the bottom of an exhausted stack).
    fn pop_moves(&mut self, x: usize) -> &HashMap<(Option<StackId>, Option<StackId>), Vec<usize>> {
        if !self.pops.contains_key(&x) {
            let v = self.d.vpa();
            let mut m: HashMap<(Option<StackId>, Option<StackId>), Vec<usize>> = HashMap::new();
            let ys = self.sums.targets(x).to_vec();
            for y in ys {
                let (p1, q1) = self.sums.split(y);
                for &(r, g1, p2) in v.pops(p1) {
                    for &(r2, g2, q2) in v.pops(q1) {
                        if r == r2 {
                            m.entry((g1, g2)).or_default().push(self.pair(p2, q2));
                        }
                    }
                }
            }
            for t in m.values_mut() {
                t.sort_unstable();
                t.dedup();
            }
            self.pops.insert(x, m);
        }
        &self.pops[&x]
    }

    fn step(&mut self, ne: usize, mu: Option<StackId>, nu: Option<StackId>) -> Vec<usize> {
        if ne == self.fin {
            return vec![self.fin];
        }
        let mut out = self.pop_moves(ne).get(&(mu, nu)).cloned().unwrap_or_default();
        if self.separable_above(ne) {
            out.push(self.fin);
        }
        out
    }
}

/// Pairs of configurations that some word separates. States are a start
/// state, the control pairs and a final sink, each with two bits recording
/// which input is exhausted.
pub fn nonequiv_transducer(d: &Dvpa) -> Result<SyncTransducer> {
    let c = config_alphabet(d);
    let comps = vec![c.clone(), c.clone()];
    let n = d.num_states();
    let ng = d.gamma().len();
    let dc = d.complete()?;
    let mut ne = NeSteps::new(&dc);
    let fin = ne.fin;
    // Control codes: pairs 0..n², final n², start n²+1.
    let start = fin + 1;
    let id = |code: usize, i: bool, j: bool| code * 4 + 2 * usize::from(i) + usize::from(j);
    let mut t = SyncTransducer::empty(comps.clone(), (start + 1) * 4);
    let letter = |x: Option<StackId>, y: Option<StackId>| -> Label {
        if x.is_none() && y.is_none() {
            Label::Eps
        } else {
            Label::Sym(padded_letter_id(&comps, &[x.map(|g| n + g), y.map(|g| n + g)]))
        }
    };
    let mut edges: Vec<(StateId, Label, StateId)> = vec![];
    for p in 0..n {
        for q in 0..n {
            edges.push((id(start, false, false), Label::Sym(padded_letter_id(&comps, &[Some(p), Some(q)])), id(ne.pair(p, q), false, false)));
        }
    }
    let tops: Vec<Option<StackId>> = std::iter::once(None).chain((0..ng).map(Some)).collect();
    for x in 0..fin {
        for bits in 0..4 {
            let (i, j) = (bits & 2 != 0, bits & 1 != 0);
            for &mu in &tops {
                for &nu in &tops {
                    if (i && mu.is_some()) || (j && nu.is_some()) {
                        continue;
                    }
                    let (i2, j2) = (i || mu.is_none(), j || nu.is_none());
                    for y in ne.step(x, mu, nu) {
                        edges.push((id(x, i, j), letter(mu, nu), id(y, i2, j2)));
                    }
                }
            }
        }
    }
    let all: Vec<Option<LetterId>> = std::iter::once(None).chain((0..c.len()).map(Some)).collect();
    for bits in 0..4 {
        let (i, j) = (bits & 2 != 0, bits & 1 != 0);
        for &x in &all {
            for &y in &all {
                if (x.is_none() && y.is_none()) || (i && x.is_some()) || (j && y.is_some()) {
                    continue;
                }
                let l = Label::Sym(padded_letter_id(&comps, &[x, y]));
                edges.push((id(fin, i, j), l, id(fin, i || x.is_none(), j || y.is_none())));
            }
        }
    }
    let nfa = t.nfa_mut();
    nfa.add_initial(id(start, false, false));
    for bits in 0..4 {
        nfa.set_accepting(fin * 4 + bits, true);
    }
    for (p, l, q) in edges {
        nfa.add_edge(p, l, q);
    }
    let trimmed = t.nfa().trim();
    SyncTransducer::new(comps, trimmed)
}

/// Two reachable, deep-equal, separable configurations of the input DVPA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityWitness {
    pub left: Configuration,
    pub right: Configuration,
    /// Shortest word accepted from exactly one side, if the bounded search
    /// found one.
    pub separator: Option<Word>,
    pub separator_depth: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegularityStats {
    /// Control states reachable from the initial configuration.
    pub states: usize,
    pub m: usize,
    pub reach_states: usize,
    pub deep_states: usize,
    pub nonequiv_states: usize,
    /// Product states visited by the lazy search.
    pub explored: usize,
}

pub type PairVerdict = Verdict<RegularityWitness>;

/// Restriction to the control states that occur in reachable
/// configurations, with the map back to the original numbering.
fn trim_reachable(d: &Dvpa) -> Result<(Dvpa, Vec<StateId>)> {
    let live = reachable_configs(d).live_states();
    let back: Vec<StateId> = (0..d.num_states()).filter(|&q| live[q]).collect();
    Ok((d.restrict(&live)?, back))
}

/// Default cap on separator length: the witness stacks agree on their top
/// `m` letters, so a separator usually has to pop past them.
pub fn default_separator_depth(m: usize) -> usize {
    2 * m + 16
}

/// Decides whether `L(d)` is regular. A non-regular verdict carries a
/// configuration pair and, when one of length at most `separator_depth`
/// (default [`default_separator_depth`]) exists, a separating word.
pub fn is_regular(d: &Dvpa, budget: &Budget, separator_depth: Option<usize>) -> Result<(PairVerdict, RegularityStats)> {
    let (t, back) = trim_reachable(d)?;
    let n = t.num_states();
    let tc = t.complete()?;
    let nc = tc.num_states();
    let m = depth_bound(nc);
    let reach = reachable_config_words(&t).determinize(budget)?;
    let mut stats = RegularityStats {
        states: n,
        m,
        reach_states: reach.num_states(),
        deep_states: m + 3,
        nonequiv_states: (nc * nc + 2) * 4,
        explored: 0,
    };
    let found = search(&t, &tc, &reach, m, budget, &mut stats)?;
    let Some((w1, w2)) = found else {
        return Ok((Verdict::yes(), stats));
    };
    let lift = |w: &[LetterId]| {
        let c = parse_config_word(&t, w).expect("search emits configuration words");
        Configuration::new(back[c.state], c.stack)
    };
    let (left, right) = (lift(&w1), lift(&w2));
    let separator_depth = separator_depth.unwrap_or_else(|| default_separator_depth(m));
    let separator = bounded_separator(d, &left, &right, separator_depth);
    Ok((Verdict::no(RegularityWitness { left, right, separator, separator_depth }), stats))
}

fn live_states(a: &Dfa) -> Vec<bool> {
    let k = a.alphabet().len();
    let mut live: Vec<bool> = (0..a.num_states()).map(|s| a.is_accepting(s)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..a.num_states() {
            if !live[s] && (0..k).any(|x| live[a.next(s, x)]) {
                live[s] = true;
                changed = true;
            }
        }
    }
    live
}

/// Product of reachability, deep equality and non-equivalence. The first
/// `m` stack letters are equal on both sides, so that stretch runs on sets
/// of (reach state, checker state) layers until the layers repeat.
fn search(d: &Dvpa, dc: &Dvpa, reach: &Dfa, m: usize, budget: &Budget, stats: &mut RegularityStats) -> Result<Option<(Word, Word)>> {
    let n = d.num_states();
    let ng = d.gamma().len();
    let live = live_states(reach);
    let mut ne = NeSteps::new(dc);

    let mut first: Vec<(usize, usize)> = vec![];
    for p in 0..n {
        let s = reach.next(reach.initial(), p);
        if live[s] {
            first.push((s, ne.pair(p, p)));
        }
    }
    first.sort_unstable();
    let mut layers: Vec<Vec<(usize, usize)>> = vec![first];
    let mut seen_layer: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
    seen_layer.insert(layers[0].clone(), 0);
    // layer(k) = layers[k] below `layers.len()`, then periodic from k0.
    // preds[k] gives each element of layer k one predecessor and letter;
    // `wrap` does the same for layer k0 entered from the last stored layer.
    type Pred = HashMap<(usize, usize), ((usize, usize), StackId)>;
    let mut preds: Vec<Pred> = vec![HashMap::new()];
    let mut wrap: Pred = HashMap::new();
    let mut cycle: Option<(usize, usize)> = None;
    while layers.len() <= m {
        let last = layers.last().expect("nonempty");
        let mut pred: Pred = HashMap::new();
        for &(s, x) in last {
            for g in 0..ng {
                let s2 = reach.next(s, n + g);
                if !live[s2] {
                    continue;
                }
                for y in ne.step(x, Some(g), Some(g)) {
                    pred.entry((s2, y)).or_insert(((s, x), g));
                }
            }
        }
        let mut next: Vec<(usize, usize)> = pred.keys().copied().collect();
        next.sort_unstable();
        stats.explored += next.len();
        budget.check(stats.explored, "exploring the deep-stack prefix")?;
        if next.is_empty() {
            return Ok(None);
        }
        if let Some(&k0) = seen_layer.get(&next) {
            cycle = Some((k0, layers.len() - k0));
            wrap = pred;
            break;
        }
        seen_layer.insert(next.clone(), layers.len());
        layers.push(next);
        preds.push(pred);
    }
    let layer_index = |k: usize| match cycle {
        Some((k0, period)) if k >= layers.len() => k0 + (k - k0) % period,
        _ => k,
    };

    // Deep phase: (reach1, reach2, checker, still equal, done1, done2).
    type Node = (usize, usize, usize, bool, bool, bool);
    let mut parent: HashMap<Node, Option<(Node, Option<StackId>, Option<StackId>)>> = HashMap::new();
    let mut dq: VecDeque<Node> = VecDeque::new();
    for &(s, x) in &layers[layer_index(m)] {
        let node = (s, s, x, true, false, false);
        parent.insert(node, None);
        dq.push_back(node);
    }
    let tops: Vec<Option<StackId>> = std::iter::once(None).chain((0..ng).map(Some)).collect();
    let mut goal = None;
    while let Some(node) = dq.pop_front() {
        let (s1, s2, x, eq, i, j) = node;
        if x == ne.fin && !eq && reach.is_accepting(s1) && reach.is_accepting(s2) {
            goal = Some(node);
            break;
        }
        for &mu in &tops {
            for &nu in &tops {
                if (i && mu.is_some()) || (j && nu.is_some()) {
                    continue;
                }
                let t1 = mu.map_or(s1, |g| reach.next(s1, n + g));
                let t2 = nu.map_or(s2, |g| reach.next(s2, n + g));
                let (i2, j2) = (i || mu.is_none(), j || nu.is_none());
                if !live[t1] || !live[t2] || (i2 && !reach.is_accepting(t1)) || (j2 && !reach.is_accepting(t2)) {
                    continue;
                }
                for y in ne.step(x, mu, nu) {
                    let next = (t1, t2, y, eq && mu == nu, i2, j2);
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                        e.insert(Some((node, mu, nu)));
                        dq.push_back(next);
                    }
                }
            }
        }
        stats.explored += 1;
        budget.check(stats.explored, "searching configuration pairs")?;
    }
    let Some(goal) = goal else { return Ok(None) };

    let (mut tail1, mut tail2) = (vec![], vec![]);
    let mut cur = goal;
    while let Some((prev, mu, nu)) = parent[&cur] {
        tail1.extend(mu.map(|g| n + g));
        tail2.extend(nu.map(|g| n + g));
        cur = prev;
    }
    tail1.reverse();
    tail2.reverse();

    // Walk the layers back from the deep-phase start.
    let mut target = (cur.0, cur.2);
    let mut common: Vec<LetterId> = vec![];
    for k in (1..=m).rev() {
        let idx = layer_index(k);
        let map = match cycle {
            Some((k0, _)) if idx == k0 && k != k0 => &wrap,
            _ => &preds[idx],
        };
        let (prev, g) = map[&target];
        common.push(n + g);
        target = prev;
    }
    common.reverse();
    let p = target.1 / dc.num_states();
    let build = |tail: &[LetterId]| {
        let mut w = vec![p];
        w.extend(&common);
        w.extend(tail);
        w
    };
    Ok(Some((build(&tail1), build(&tail2))))
}

/// The same decision by explicit intersection of the three transducers,
/// for small machines. Returns the shortest accepted pair.
pub fn is_regular_explicit(d: &Dvpa) -> Result<Option<(Configuration, Configuration)>> {
    let (t, back) = trim_reachable(d)?;
    let m = depth_bound(t.complete()?.num_states());
    let rp = reachable_pairs(&t);
    let de = deep_equal_checker(&t, m)?;
    let ne = nonequiv_transducer(&t)?;
    let prod = intersect(&intersect(rp.nfa(), de.nfa())?, &ne.nfa().eliminate_epsilon())?;
    let v = prod.is_empty();
    let Some(w) = v.witness else { return Ok(None) };
    let WordTuple(parts) = rp.decode(&w);
    let lift = |w: &[LetterId]| {
        let c = parse_config_word(&t, w).expect("configuration word");
        Configuration::new(back[c.state], c.stack)
    };
    Ok(Some((lift(&parts[0]), lift(&parts[1]))))
}
