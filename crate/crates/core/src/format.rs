//! Plain-text machine files.
//!
//! ```text
//! # comment to end of line
//! machine <kind> <name>          kind: nfa dfa sync det det-buchi parity dvpa
//! alphabet: a b                  nfa, dfa
//! alphabet1: a b                 sync, det, det-buchi, parity (one per tape)
//! calls: c / returns: r / internals: i / stack: g h      dvpa
//! states: q0 q1
//! initial: q0
//! accepting: q1                  (Büchi states for det-buchi)
//! priorities: q0=2 q1=1          parity
//! partition: q0:1 q1:2           det, det-buchi (tape read by each state)
//!
//! q0 a -> q1                     nfa, dfa, det, det-buchi; `eps` for ε,
//!                                and `HASH` for the endmarker in det
//! q0 a|_ -> q1                   sync (`_` pads), parity
//! q0 push c -> q1 g              dvpa
//! q0 pop r g -> q1               dvpa; `BOT` pops the empty stack
//! q0 int i -> q1                 dvpa
//! ```
//!
//! A letter named `#` is written `HASH` everywhere. [`serialize`] emits the
//! declarations in the order above and the transitions sorted by source
//! state, input and target, so `serialize ∘ parse` is a canonical form.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::alphabet::{Alphabet, Letter, LetterId, BOT_NAME, EPS_NAME, PAD_NAME};
use crate::fa::{Dfa, Label, Nfa, StateId};
use crate::gadget::DetBuchiTransducer;
use crate::omega::{tuple_letter_parts, ParityTransducer};
use crate::transducer::{padded_letter_id, padded_letter_parts, DetTransducer, Move, SyncTransducer};
use crate::vpa::{Dvpa, PushdownAlphabet};

pub const HASH_TOKEN: &str = "HASH";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Nfa,
    Dfa,
    Sync,
    Det,
    DetBuchi,
    Parity,
    Dvpa,
}

impl Kind {
    pub const ALL: [Kind; 7] = [Kind::Nfa, Kind::Dfa, Kind::Sync, Kind::Det, Kind::DetBuchi, Kind::Parity, Kind::Dvpa];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Nfa => "nfa",
            Kind::Dfa => "dfa",
            Kind::Sync => "sync",
            Kind::Det => "det",
            Kind::DetBuchi => "det-buchi",
            Kind::Parity => "parity",
            Kind::Dvpa => "dvpa",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Kind::Nfa | Kind::Dfa => &["alphabet", "states", "initial", "accepting"],
            Kind::Sync => &["states", "initial", "accepting"],
            Kind::Det | Kind::DetBuchi => &["states", "initial", "accepting", "partition"],
            Kind::Parity => &["states", "initial", "priorities"],
            Kind::Dvpa => &["calls", "returns", "internals", "stack", "states", "initial", "accepting"],
        }
    }

    fn has_tapes(self) -> bool {
        matches!(self, Kind::Sync | Kind::Det | Kind::DetBuchi | Kind::Parity)
    }
}

#[derive(Debug, Clone)]
pub enum Machine {
    Nfa(Nfa),
    Dfa(Dfa),
    Sync(SyncTransducer),
    Det(DetTransducer),
    DetBuchi(DetBuchiTransducer),
    Parity(ParityTransducer),
    Dvpa(Dvpa),
}

impl Machine {
    pub fn kind(&self) -> Kind {
        match self {
            Machine::Nfa(_) => Kind::Nfa,
            Machine::Dfa(_) => Kind::Dfa,
            Machine::Sync(_) => Kind::Sync,
            Machine::Det(_) => Kind::Det,
            Machine::DetBuchi(_) => Kind::DetBuchi,
            Machine::Parity(_) => Kind::Parity,
            Machine::Dvpa(_) => Kind::Dvpa,
        }
    }

    pub fn num_states(&self) -> usize {
        match self {
            Machine::Nfa(m) => m.num_states(),
            Machine::Dfa(m) => m.num_states(),
            Machine::Sync(m) => m.nfa().num_states(),
            Machine::Det(m) => m.num_states(),
            Machine::DetBuchi(m) => m.num_states(),
            Machine::Parity(m) => m.num_states(),
            Machine::Dvpa(m) => m.num_states(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MachineFile {
    pub name: String,
    pub machine: Machine,
}

impl MachineFile {
    pub fn new(name: impl Into<String>, machine: Machine) -> MachineFile {
        MachineFile { name: name.into(), machine }
    }
}

/// Diagnostic with a 1-based position. Semantic errors point at the
/// offending token or, failing that, the start of its line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

type PResult<T> = std::result::Result<T, FormatError>;

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

impl Tok<'_> {
    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(FormatError { line: self.line, column: self.col, message: message.into() })
    }
}

fn at<T>(line: usize, message: impl Into<String>) -> PResult<T> {
    Err(FormatError { line, column: 1, message: message.into() })
}

fn tokenize(text: &str) -> Vec<Vec<Tok<'_>>> {
    let mut lines = vec![];
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = vec![];
        let mut start: Option<usize> = None;
        for (j, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    let col = body[..s].chars().count() + 1;
                    toks.push(Tok { text: &body[s..j], line: i + 1, col });
                    start = None;
                }
                (false, None) => start = Some(j),
                _ => {}
            }
        }
        if !toks.is_empty() {
            lines.push(toks);
        }
    }
    lines
}

struct Decl<'a> {
    line: usize,
    values: Vec<Tok<'a>>,
}

struct Trans<'a> {
    line: usize,
    lhs: Vec<Tok<'a>>,
    rhs: Vec<Tok<'a>>,
}

fn letter_name(t: &Tok) -> PResult<String> {
    match t.text {
        HASH_TOKEN => Ok("#".into()),
        PAD_NAME | EPS_NAME | BOT_NAME => t.err(format!("`{}` is reserved and cannot be a letter", t.text)),
        s => Ok(s.into()),
    }
}

fn alphabet_of(d: &Decl, allow_empty: bool) -> PResult<Alphabet> {
    let mut letters = vec![];
    for t in &d.values {
        let l = Letter::sym(letter_name(t)?);
        if letters.contains(&l) {
            return t.err(format!("duplicate letter `{}`", t.text));
        }
        letters.push(l);
    }
    if letters.is_empty() && !allow_empty {
        return at(d.line, "alphabet is empty");
    }
    Alphabet::possibly_empty(letters).or_else(|e| at(d.line, e.to_string()))
}

fn letter_in(a: &Alphabet, t: &Tok) -> PResult<LetterId> {
    let name = letter_name(t)?;
    match a.index_of(&Letter::sym(name)) {
        Some(x) => Ok(x),
        None => t.err(format!("unknown letter `{}`", t.text)),
    }
}

struct Parsed<'a> {
    kind: Kind,
    name: String,
    decls: HashMap<String, Decl<'a>>,
    tapes: Vec<Alphabet>,
    trans: Vec<Trans<'a>>,
    states: HashMap<&'a str, StateId>,
    state_names: Vec<String>,
    last_line: usize,
}

impl<'a> Parsed<'a> {
    fn decl(&self, key: &str) -> Option<&Decl<'a>> {
        self.decls.get(key)
    }

    fn required(&self, key: &str) -> PResult<&Decl<'a>> {
        self.decl(key).map_or_else(|| at(self.last_line, format!("missing `{key}:` declaration")), Ok)
    }

    fn state(&self, t: &Tok) -> PResult<StateId> {
        match self.states.get(t.text) {
            Some(&q) => Ok(q),
            None => t.err(format!("unknown state `{}`", t.text)),
        }
    }

    fn state_list(&self, key: &str) -> PResult<Vec<StateId>> {
        self.decl(key).map_or(Ok(vec![]), |d| d.values.iter().map(|t| self.state(t)).collect())
    }

    fn single_initial(&self) -> PResult<StateId> {
        let d = self.required("initial")?;
        match d.values.as_slice() {
            [t] => self.state(t),
            _ => at(d.line, "exactly one initial state expected"),
        }
    }

    fn accepting(&self) -> PResult<Vec<bool>> {
        let mut acc = vec![false; self.state_names.len()];
        for q in self.state_list("accepting")? {
            acc[q] = true;
        }
        Ok(acc)
    }

    fn shape(&self, t: &Trans, lhs: usize, rhs: usize, form: &str) -> PResult<()> {
        if t.lhs.len() != lhs || t.rhs.len() != rhs {
            return at(t.line, format!("expected a transition of the form `{form}`"));
        }
        Ok(())
    }

    /// `a|b|_` into one optional letter per tape.
    fn tuple(&self, t: &Tok, padded: bool) -> PResult<Vec<Option<LetterId>>> {
        let parts: Vec<&str> = t.text.split('|').collect();
        if parts.len() != self.tapes.len() {
            return t.err(format!("letter `{}` has {} components, expected {}", t.text, parts.len(), self.tapes.len()));
        }
        let mut out = vec![];
        for (p, a) in parts.iter().zip(&self.tapes) {
            let sub = Tok { text: p, ..*t };
            if *p == PAD_NAME {
                if !padded {
                    return t.err("padding is not allowed here");
                }
                out.push(None);
            } else {
                out.push(Some(letter_in(a, &sub)?));
            }
        }
        if out.iter().all(Option::is_none) {
            return t.err("the all-pad letter is not allowed");
        }
        Ok(out)
    }
}

fn structure(text: &str) -> PResult<Parsed<'_>> {
    let lines = tokenize(text);
    let Some(head) = lines.first() else { return at(1, "empty file") };
    if head[0].text != "machine" {
        return head[0].err("expected `machine <kind> <name>`");
    }
    if head.len() != 3 {
        return at(head[0].line, "expected `machine <kind> <name>`");
    }
    let kind = match Kind::parse(head[1].text) {
        Some(k) => k,
        None => {
            let all: Vec<&str> = Kind::ALL.iter().map(|k| k.as_str()).collect();
            return head[1].err(format!("unknown machine kind `{}` (expected one of {})", head[1].text, all.join(", ")));
        }
    };
    let mut decls: HashMap<String, Decl> = HashMap::new();
    let mut trans = vec![];
    for toks in &lines[1..] {
        let first = toks[0];
        if let Some(key) = first.text.strip_suffix(':') {
            let tape_key = key.strip_prefix("alphabet").is_some_and(|n| n.parse::<usize>().is_ok_and(|i| i >= 1));
            if !(kind.keys().contains(&key) || (kind.has_tapes() && tape_key)) {
                return first.err(format!("`{key}` is not a declaration of a {} file", kind.as_str()));
            }
            if decls.contains_key(key) {
                return first.err(format!("`{key}` is declared twice"));
            }
            decls.insert(key.to_string(), Decl { line: first.line, values: toks[1..].to_vec() });
        } else if let Some(arrow) = toks.iter().position(|t| t.text == "->") {
            trans.push(Trans { line: first.line, lhs: toks[..arrow].to_vec(), rhs: toks[arrow + 1..].to_vec() });
        } else {
            return first.err("expected a declaration `key: ...` or a transition `... -> ...`");
        }
    }
    let last_line = lines.last().map_or(1, |l| l[0].line);
    let mut tapes = vec![];
    if kind.has_tapes() {
        for i in 1.. {
            match decls.get(&format!("alphabet{i}")) {
                Some(d) => tapes.push(alphabet_of(d, false)?),
                None => break,
            }
        }
        if tapes.is_empty() {
            return at(last_line, "missing `alphabet1:` declaration");
        }
        let extra = decls.keys().filter(|k| k.starts_with("alphabet")).count();
        if extra != tapes.len() {
            return at(last_line, "tape alphabets must be numbered 1, 2, ... without gaps");
        }
    }
    let mut p = Parsed { kind, name: head[2].text.to_string(), decls, tapes, trans, states: HashMap::new(), state_names: vec![], last_line };
    let sd = p.required("states")?;
    let mut states = HashMap::new();
    let mut names = vec![];
    for t in &sd.values {
        if t.text.contains(['=', ':']) || t.text == "->" {
            return t.err(format!("`{}` is not a valid state name", t.text));
        }
        if states.insert(t.text, names.len()).is_some() {
            return t.err(format!("state `{}` is declared twice", t.text));
        }
        names.push(t.text.to_string());
    }
    if names.is_empty() {
        return at(sd.line, "no states declared");
    }
    p.states = states;
    p.state_names = names;
    Ok(p)
}

pub fn parse(text: &str) -> PResult<MachineFile> {
    let p = structure(text)?;
    let machine = match p.kind {
        Kind::Nfa => Machine::Nfa(parse_nfa(&p)?),
        Kind::Dfa => Machine::Dfa(parse_dfa(&p)?),
        Kind::Sync => Machine::Sync(parse_sync(&p)?),
        Kind::Det => Machine::Det(parse_det(&p)?),
        Kind::DetBuchi => Machine::DetBuchi(parse_det_buchi(&p)?),
        Kind::Parity => Machine::Parity(parse_parity(&p)?),
        Kind::Dvpa => Machine::Dvpa(parse_dvpa(&p)?),
    };
    Ok(MachineFile { name: p.name, machine })
}

fn parse_nfa(p: &Parsed) -> PResult<Nfa> {
    let alphabet = alphabet_of(p.required("alphabet")?, false)?;
    let mut n = Nfa::new(alphabet.clone(), p.state_names.len());
    n.set_names(p.state_names.clone());
    let init = p.state_list("initial")?;
    if init.is_empty() {
        return at(p.required("initial")?.line, "no initial state");
    }
    for q in init {
        n.add_initial(q);
    }
    for (q, a) in p.accepting()?.into_iter().enumerate() {
        n.set_accepting(q, a);
    }
    for t in &p.trans {
        p.shape(t, 2, 1, "q a -> p")?;
        let label = if t.lhs[1].text == EPS_NAME { Label::Eps } else { Label::Sym(letter_in(&alphabet, &t.lhs[1])?) };
        n.add_edge(p.state(&t.lhs[0])?, label, p.state(&t.rhs[0])?);
    }
    Ok(n)
}

fn parse_dfa(p: &Parsed) -> PResult<Dfa> {
    let alphabet = alphabet_of(p.required("alphabet")?, false)?;
    let k = alphabet.len();
    let n = p.state_names.len();
    let mut delta: Vec<Option<StateId>> = vec![None; n * k];
    for t in &p.trans {
        p.shape(t, 2, 1, "q a -> p")?;
        if t.lhs[1].text == EPS_NAME {
            return t.lhs[1].err("a dfa has no epsilon moves");
        }
        let (q, a, r) = (p.state(&t.lhs[0])?, letter_in(&alphabet, &t.lhs[1])?, p.state(&t.rhs[0])?);
        if delta[q * k + a].is_some_and(|old| old != r) {
            return at(t.line, format!("nondeterminism: second move of `{}` on `{}`", t.lhs[0].text, t.lhs[1].text));
        }
        delta[q * k + a] = Some(r);
    }
    let mut total = vec![];
    for (i, d) in delta.iter().enumerate() {
        match d {
            Some(r) => total.push(*r),
            None => {
                let msg = format!("dfa is not complete: `{}` has no move on `{}`", p.state_names[i / k], alphabet.letter(i % k));
                return at(p.required("states")?.line, msg);
            }
        }
    }
    let init = p.single_initial()?;
    Dfa::from_parts(alphabet, init, p.accepting()?, total).or_else(|e| at(p.last_line, e.to_string()))
}

fn parse_sync(p: &Parsed) -> PResult<SyncTransducer> {
    let comps = p.tapes.clone();
    let mut t = SyncTransducer::empty(comps.clone(), p.state_names.len());
    let mut origin: HashMap<(StateId, LetterId), usize> = HashMap::new();
    {
        let n = t.nfa_mut();
        n.set_names(p.state_names.clone());
        for q in p.state_list("initial")? {
            n.add_initial(q);
        }
        for (q, a) in p.accepting()?.into_iter().enumerate() {
            n.set_accepting(q, a);
        }
    }
    for tr in &p.trans {
        p.shape(tr, 2, 1, "q a|b -> p")?;
        let q = p.state(&tr.lhs[0])?;
        let label = if tr.lhs[1].text == EPS_NAME {
            Label::Eps
        } else {
            let l = padded_letter_id(&comps, &p.tuple(&tr.lhs[1], true)?);
            origin.insert((q, l), tr.line);
            Label::Sym(l)
        };
        let r = p.state(&tr.rhs[0])?;
        t.nfa_mut().add_edge(q, label, r);
    }
    if t.nfa().initial().is_empty() {
        return at(p.required("initial")?.line, "no initial state");
    }
    if let Some(&(q, l)) = t.padding_violations().first() {
        let line = origin.get(&(q, l)).copied().unwrap_or(p.last_line);
        return at(line, "padding violation: a tape letter can follow padding on that tape");
    }
    SyncTransducer::new(comps, t.nfa().clone()).or_else(|e| at(p.last_line, e.to_string()))
}

fn partition(p: &Parsed) -> PResult<Vec<usize>> {
    let d = p.required("partition")?;
    let mut tape_of: Vec<Option<usize>> = vec![None; p.state_names.len()];
    for t in &d.values {
        let Some((s, k)) = t.text.split_once(':') else { return t.err("expected `state:tape`") };
        let q = p.state(&Tok { text: s, ..*t })?;
        let k: usize = match k.parse() {
            Ok(k) if k >= 1 && k <= p.tapes.len() => k,
            _ => return t.err(format!("tape `{k}` does not exist")),
        };
        if tape_of[q].is_some() {
            return t.err(format!("state `{s}` is assigned twice"));
        }
        tape_of[q] = Some(k - 1);
    }
    tape_of
        .iter()
        .enumerate()
        .map(|(q, t)| t.map_or_else(|| at(d.line, format!("state `{}` has no tape", p.state_names[q])), Ok))
        .collect()
}

fn parse_det(p: &Parsed) -> PResult<DetTransducer> {
    let tape_of = partition(p)?;
    let init = p.single_initial()?;
    let mut d = DetTransducer::new(p.tapes.clone(), tape_of.clone(), init).or_else(|e| at(p.required("alphabet1")?.line, e.to_string()))?;
    d.set_names(p.state_names.clone());
    for (q, a) in p.accepting()?.into_iter().enumerate() {
        d.set_accepting(q, a);
    }
    for t in &p.trans {
        p.shape(t, 2, 1, "q a -> p")?;
        let q = p.state(&t.lhs[0])?;
        let m = match t.lhs[1].text {
            EPS_NAME => Move::Eps,
            HASH_TOKEN => Move::End,
            _ => Move::Letter(letter_in(&p.tapes[tape_of[q]], &t.lhs[1])?),
        };
        d.add_transition(q, m, p.state(&t.rhs[0])?).or_else(|e| at(t.line, e.to_string()))?;
    }
    Ok(d)
}

fn parse_det_buchi(p: &Parsed) -> PResult<DetBuchiTransducer> {
    let tape_of = partition(p)?;
    let init = p.single_initial()?;
    let mut d = DetBuchiTransducer::new(p.tapes.clone(), tape_of.clone(), init).or_else(|e| at(p.last_line, e.to_string()))?;
    d.set_names(p.state_names.clone());
    for (q, a) in p.accepting()?.into_iter().enumerate() {
        d.set_buchi(q, a);
    }
    for t in &p.trans {
        p.shape(t, 2, 1, "q a -> p")?;
        let q = p.state(&t.lhs[0])?;
        let m = match t.lhs[1].text {
            EPS_NAME => Move::Eps,
            _ => Move::Letter(letter_in(&p.tapes[tape_of[q]], &t.lhs[1])?),
        };
        d.add_transition(q, m, p.state(&t.rhs[0])?).or_else(|e| at(t.line, e.to_string()))?;
    }
    Ok(d)
}

fn parse_parity(p: &Parsed) -> PResult<ParityTransducer> {
    let init = p.single_initial()?;
    let mut m = ParityTransducer::new(p.tapes.clone(), p.state_names.len(), init).or_else(|e| at(p.last_line, e.to_string()))?;
    m.set_names(p.state_names.clone());
    let d = p.required("priorities")?;
    let mut seen = vec![false; p.state_names.len()];
    for t in &d.values {
        let Some((s, k)) = t.text.split_once('=') else { return t.err("expected `state=priority`") };
        let q = p.state(&Tok { text: s, ..*t })?;
        let Ok(k) = k.parse::<u32>() else { return t.err(format!("`{k}` is not a priority")) };
        if seen[q] {
            return t.err(format!("state `{s}` has two priorities"));
        }
        seen[q] = true;
        m.set_priority(q, k);
    }
    if let Some(q) = seen.iter().position(|&s| !s) {
        return at(d.line, format!("state `{}` has no priority", p.state_names[q]));
    }
    for t in &p.trans {
        p.shape(t, 2, 1, "q a|b -> p")?;
        let q = p.state(&t.lhs[0])?;
        let parts: Vec<LetterId> = p.tuple(&t.lhs[1], false)?.into_iter().map(|x| x.expect("unpadded")).collect();
        let r = p.state(&t.rhs[0])?;
        let a = crate::omega::tuple_letter_id(&p.tapes, &parts);
        if m.next(q, a).is_some_and(|old| old != r) {
            return at(t.line, format!("nondeterminism: second move of `{}` on `{}`", t.lhs[0].text, t.lhs[1].text));
        }
        m.set_transition(q, a, r).or_else(|e| at(t.line, e.to_string()))?;
    }
    Ok(m)
}

fn parse_dvpa(p: &Parsed) -> PResult<Dvpa> {
    let part = |key: &str| -> PResult<Vec<Letter>> {
        match p.decl(key) {
            None => Ok(vec![]),
            Some(d) => d.values.iter().map(|t| letter_name(t).map(Letter::sym)).collect(),
        }
    };
    let (calls, rets, ints) = (part("calls")?, part("returns")?, part("internals")?);
    let mut seen = std::collections::HashSet::new();
    for t in ["calls", "returns", "internals"].iter().filter_map(|k| p.decl(k)).flat_map(|d| &d.values) {
        if !seen.insert(t.text) {
            return t.err(format!("letter `{}` appears in two parts of the pushdown alphabet", t.text));
        }
    }
    let line = p.decl("calls").or(p.decl("returns")).map_or(p.last_line, |d| d.line);
    let sigma = PushdownAlphabet::new(calls, rets, ints).or_else(|e| at(line, e.to_string()))?;
    let gamma = match p.decl("stack") {
        Some(d) => alphabet_of(d, true)?,
        None => Alphabet::possibly_empty(vec![]).expect("empty"),
    };
    let init = p.single_initial()?;
    let mut d = Dvpa::new(sigma.clone(), gamma.clone(), p.state_names.len(), init).or_else(|e| at(p.last_line, e.to_string()))?;
    d.set_names(p.state_names.clone());
    for (q, a) in p.accepting()?.into_iter().enumerate() {
        d.set_accepting(q, a);
    }
    let stack = |t: &Tok| -> PResult<usize> {
        gamma.index_of(&Letter::sym(letter_name(t)?)).map_or_else(|| t.err(format!("`{}` is not a stack symbol", t.text)), Ok)
    };
    for t in &p.trans {
        let op = t.lhs.get(1).map(|x| x.text);
        let q = p.state(&t.lhs[0])?;
        let res = match op {
            Some("push") => {
                p.shape(t, 3, 2, "q push c -> p g")?;
                let c = letter_in(sigma.letters(), &t.lhs[2])?;
                d.add_push(q, c, p.state(&t.rhs[0])?, stack(&t.rhs[1])?)
            }
            Some("pop") => {
                p.shape(t, 4, 1, "q pop r g -> p")?;
                let r = letter_in(sigma.letters(), &t.lhs[2])?;
                let g = if t.lhs[3].text == BOT_NAME { None } else { Some(stack(&t.lhs[3])?) };
                d.add_pop(q, r, g, p.state(&t.rhs[0])?)
            }
            Some("int") => {
                p.shape(t, 3, 1, "q int a -> p")?;
                let a = letter_in(sigma.letters(), &t.lhs[2])?;
                d.add_int(q, a, p.state(&t.rhs[0])?)
            }
            _ => return at(t.line, "expected `push`, `pop` or `int` after the source state"),
        };
        res.or_else(|e| at(t.line, e.to_string()))?;
    }
    Ok(d)
}

fn token(l: &Letter) -> String {
    match l {
        Letter::Sym(s) if s == "#" => HASH_TOKEN.into(),
        Letter::Pad => PAD_NAME.into(),
        other => other.to_string(),
    }
}

fn check_token(s: &str) -> crate::Result<()> {
    if s.is_empty() || s.contains(char::is_whitespace) || s.contains('#') {
        return Err(crate::Error::InvalidMachine(format!("`{s}` cannot be written as a token")));
    }
    Ok(())
}

fn names_line(out: &mut String, key: &str, names: impl IntoIterator<Item = String>) -> crate::Result<()> {
    out.push_str(key);
    out.push(':');
    for n in names {
        check_token(&n)?;
        out.push(' ');
        out.push_str(&n);
    }
    out.push('\n');
    Ok(())
}

fn alphabet_line(out: &mut String, key: &str, a: &Alphabet) -> crate::Result<()> {
    names_line(out, key, a.letters().iter().map(token))
}

fn tape_lines(out: &mut String, tapes: &[Alphabet]) -> crate::Result<()> {
    for (i, a) in tapes.iter().enumerate() {
        alphabet_line(out, &format!("alphabet{}", i + 1), a)?;
    }
    Ok(())
}

fn state_names(n: usize, name: impl Fn(StateId) -> String) -> crate::Result<Vec<String>> {
    let names: Vec<String> = (0..n).map(name).collect();
    let mut seen = std::collections::HashSet::new();
    for s in &names {
        check_token(s)?;
        if s.contains(['=', ':']) || !seen.insert(s) {
            return Err(crate::Error::InvalidMachine(format!("state name `{s}` is duplicated or not writable")));
        }
    }
    Ok(names)
}

fn pick(names: &[String], states: impl IntoIterator<Item = StateId>) -> Vec<String> {
    states.into_iter().map(|q| names[q].clone()).collect()
}

fn tuple_token(tapes: &[Alphabet], parts: &[Option<LetterId>]) -> String {
    let s: Vec<String> = parts.iter().zip(tapes).map(|(p, a)| p.map_or(PAD_NAME.into(), |x| token(a.letter(x)))).collect();
    s.join("|")
}

/// Canonical text of a machine.
pub fn serialize(file: &MachineFile) -> crate::Result<String> {
    check_token(&file.name)?;
    let mut out = format!("machine {} {}\n", file.machine.kind().as_str(), file.name);
    let o = &mut out;
    let mut lines: Vec<(StateId, String)> = vec![];
    match &file.machine {
        Machine::Nfa(n) => {
            alphabet_line(o, "alphabet", n.alphabet())?;
            let names = state_names(n.num_states(), |q| n.state_name(q))?;
            names_line(o, "states", names.clone())?;
            let mut init = n.initial().to_vec();
            init.sort_unstable();
            names_line(o, "initial", pick(&names, init))?;
            names_line(o, "accepting", pick(&names, n.accepting_states()))?;
            for q in 0..n.num_states() {
                let mut e = n.edges(q).to_vec();
                e.sort_unstable_by_key(|&(l, r)| (matches!(l, Label::Sym(_)), if let Label::Sym(x) = l { x } else { 0 }, r));
                e.dedup();
                for (l, r) in e {
                    let lt = match l {
                        Label::Eps => EPS_NAME.to_string(),
                        Label::Sym(x) => token(n.alphabet().letter(x)),
                    };
                    lines.push((q, format!("{} {} -> {}", names[q], lt, names[r])));
                }
            }
        }
        Machine::Dfa(d) => {
            alphabet_line(o, "alphabet", d.alphabet())?;
            let names = state_names(d.num_states(), |q| format!("q{q}"))?;
            names_line(o, "states", names.clone())?;
            names_line(o, "initial", pick(&names, [d.initial()]))?;
            names_line(o, "accepting", pick(&names, (0..d.num_states()).filter(|&q| d.is_accepting(q))))?;
            for q in 0..d.num_states() {
                for a in 0..d.alphabet().len() {
                    lines.push((q, format!("{} {} -> {}", names[q], token(d.alphabet().letter(a)), names[d.next(q, a)])));
                }
            }
        }
        Machine::Sync(t) => {
            let n = t.nfa();
            tape_lines(o, t.components())?;
            let names = state_names(n.num_states(), |q| n.state_name(q))?;
            names_line(o, "states", names.clone())?;
            let mut init = n.initial().to_vec();
            init.sort_unstable();
            names_line(o, "initial", pick(&names, init))?;
            names_line(o, "accepting", pick(&names, n.accepting_states()))?;
            for q in 0..n.num_states() {
                let mut e = n.edges(q).to_vec();
                e.sort_unstable_by_key(|&(l, r)| (matches!(l, Label::Sym(_)), if let Label::Sym(x) = l { x } else { 0 }, r));
                e.dedup();
                for (l, r) in e {
                    let lt = match l {
                        Label::Eps => EPS_NAME.to_string(),
                        Label::Sym(x) => tuple_token(t.components(), &padded_letter_parts(t.components(), x)),
                    };
                    lines.push((q, format!("{} {} -> {}", names[q], lt, names[r])));
                }
            }
        }
        Machine::Det(d) => {
            tape_lines(o, d.tapes())?;
            let names = state_names(d.num_states(), |q| d.state_name(q))?;
            names_line(o, "states", names.clone())?;
            names_line(o, "initial", pick(&names, [d.initial()]))?;
            names_line(o, "accepting", pick(&names, (0..d.num_states()).filter(|&q| d.is_accepting(q))))?;
            names_line(o, "partition", (0..d.num_states()).map(|q| format!("{}:{}", names[q], d.tape_of(q) + 1)))?;
            for q in 0..d.num_states() {
                for &(m, r) in d.moves(q) {
                    let lt = match m {
                        Move::Eps => EPS_NAME.to_string(),
                        Move::End => HASH_TOKEN.to_string(),
                        Move::Letter(x) => token(d.tapes()[d.tape_of(q)].letter(x)),
                    };
                    lines.push((q, format!("{} {} -> {}", names[q], lt, names[r])));
                }
            }
        }
        Machine::DetBuchi(d) => {
            tape_lines(o, d.tapes())?;
            let names = state_names(d.num_states(), |q| d.state_name(q))?;
            names_line(o, "states", names.clone())?;
            names_line(o, "initial", pick(&names, [d.initial()]))?;
            names_line(o, "accepting", pick(&names, (0..d.num_states()).filter(|&q| d.is_buchi(q))))?;
            names_line(o, "partition", (0..d.num_states()).map(|q| format!("{}:{}", names[q], d.tape_of(q) + 1)))?;
            for q in 0..d.num_states() {
                for &(m, r) in d.moves(q) {
                    let lt = match m {
                        Move::Letter(x) => token(d.tapes()[d.tape_of(q)].letter(x)),
                        _ => EPS_NAME.to_string(),
                    };
                    lines.push((q, format!("{} {} -> {}", names[q], lt, names[r])));
                }
            }
        }
        Machine::Parity(m) => {
            tape_lines(o, m.components())?;
            let names = state_names(m.num_states(), |q| m.state_name(q))?;
            names_line(o, "states", names.clone())?;
            names_line(o, "initial", pick(&names, [m.initial()]))?;
            names_line(o, "priorities", (0..m.num_states()).map(|q| format!("{}={}", names[q], m.priority(q))))?;
            for q in 0..m.num_states() {
                for a in 0..m.alphabet().len() {
                    if let Some(r) = m.next(q, a) {
                        let parts: Vec<Option<LetterId>> = tuple_letter_parts(m.components(), a).into_iter().map(Some).collect();
                        lines.push((q, format!("{} {} -> {}", names[q], tuple_token(m.components(), &parts), names[r])));
                    }
                }
            }
        }
        Machine::Dvpa(d) => {
            let sig = d.sigma();
            let lt = |x: LetterId| token(sig.letters().letter(x));
            names_line(o, "calls", sig.calls().into_iter().map(lt))?;
            names_line(o, "returns", sig.returns().into_iter().map(lt))?;
            names_line(o, "internals", sig.internals().into_iter().map(lt))?;
            alphabet_line(o, "stack", d.gamma())?;
            let names = state_names(d.num_states(), |q| d.state_name(q))?;
            names_line(o, "states", names.clone())?;
            names_line(o, "initial", pick(&names, [d.initial()]))?;
            names_line(o, "accepting", pick(&names, (0..d.num_states()).filter(|&q| d.is_accepting(q))))?;
            let g = |x: usize| token(d.gamma().letter(x));
            let v = d.vpa();
            for q in 0..d.num_states() {
                let mut push = v.pushes(q).to_vec();
                push.sort_unstable();
                for (c, r, s) in push {
                    lines.push((q, format!("{} push {} -> {} {}", names[q], lt(c), names[r], g(s))));
                }
                let mut pop = v.pops(q).to_vec();
                pop.sort_unstable();
                for (x, s, r) in pop {
                    let st = s.map_or(BOT_NAME.to_string(), g);
                    lines.push((q, format!("{} pop {} {} -> {}", names[q], lt(x), st, names[r])));
                }
                let mut int = v.internals(q).to_vec();
                int.sort_unstable();
                for (a, r) in int {
                    lines.push((q, format!("{} int {} -> {}", names[q], lt(a), names[r])));
                }
            }
        }
    }
    if !lines.is_empty() {
        out.push('\n');
    }
    for (_, l) in lines {
        let _ = writeln!(out, "{l}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn round_trip(m: Machine) -> String {
        let text = serialize(&MachineFile::new("m", m)).unwrap();
        let again = serialize(&parse(&text).unwrap()).unwrap();
        assert_eq!(text, again);
        text
    }

    #[test]
    fn cr_round_trips() {
        let text = round_trip(Machine::Dvpa(fixtures::cr()));
        assert!(text.contains("q_r pop r BOT -> q_r"));
    }

    #[test]
    fn every_kind_round_trips() {
        round_trip(Machine::Nfa(fixtures::astar_hash_bstar()));
        round_trip(Machine::Dfa(fixtures::astar_b().determinize(&Default::default()).unwrap()));
        round_trip(Machine::Sync(fixtures::tot2()));
        round_trip(Machine::Det(fixtures::gs()));
        round_trip(Machine::Parity(fixtures::head_omega()));
        let nf = crate::gadget::normalize(&fixtures::gr());
        let g = crate::gadget::build_gadget(&nf, &nf).unwrap();
        let text = round_trip(Machine::DetBuchi(g.b_r));
        assert!(text.contains("HASH"));
    }

    #[test]
    fn pop_of_non_stack_symbol_names_line() {
        let text = "machine dvpa bad\ncalls: c\nreturns: r\nstack: g\nstates: p\ninitial: p\n\np pop r h -> p\n";
        let e = parse(text).unwrap_err();
        assert_eq!((e.line, e.column), (8, 9));
        assert!(e.message.contains("stack symbol"));
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse("machine nfa x\nalphabet: a\nstates: p\ninitial: p\np a p\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 1));
        let e = parse("machine nfb x\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
    }
}
