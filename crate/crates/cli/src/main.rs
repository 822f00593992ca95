use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wordrel::format::{self, Machine, MachineFile};
use wordrel::gadget::{build_gadget, det_buchi_lasso_accepts, normalize};
use wordrel::omega::UPWord;
use wordrel::omega_rec::{is_omega_recognizable, Side};
use wordrel::oracles::{bounded_separator, brute_slender, ccg06_recognizable, generate_rn};
use wordrel::recognizable::is_recognizable;
use wordrel::regularity::is_regular;
use wordrel::slender::is_slender;
use wordrel::transducer::{det_accepts, WordTuple};
use wordrel::vpa::{Configuration, Dvpa};
use wordrel::{fixtures, Budget, Error, Nfa};

#[derive(Parser)]
#[command(name = "wordrel", version, about = "Decision procedures for automatic, rational and omega-automatic relations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Report::Text)]
    report: Report,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Is the language of a DVPA regular?
    CheckRegular {
        file: PathBuf,
        /// Longest separator searched for a non-regular witness.
        #[arg(long)]
        separator_depth: Option<usize>,
    },
    /// Is a binary synchronous relation recognizable?
    CheckRecognizable {
        file: PathBuf,
        #[arg(long)]
        separator_depth: Option<usize>,
    },
    /// Is the relation of a deterministic parity transducer ω-recognizable?
    CheckOmegaRecognizable { file: PathBuf },
    /// Is the language of an nfa or dfa slender?
    Slender { file: PathBuf },
    /// Writes the Büchi gadget pair for two deterministic transducers.
    EquivGadget {
        file_r: PathBuf,
        file_s: PathBuf,
        #[arg(short, long)]
        output: String,
    },
    /// Membership of a word (one --input per tape).
    Run {
        file: PathBuf,
        #[arg(long, required = true)]
        input: Vec<String>,
    },
    /// Membership of a pair of ultimately periodic words `u(v)^w`.
    RunLasso {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Independent reference procedures.
    Oracle {
        #[command(subcommand)]
        oracle: Oracle,
    },
    /// Prints a named fixture; `list` shows the names.
    Fixtures { name: String },
}

#[derive(Subcommand)]
enum Oracle {
    /// Slenderness by bounded search and run counting.
    Slender { file: PathBuf },
    /// Recognizability through length-lexicographic representatives.
    Recognizable { file: PathBuf },
    /// Bounded search for a word separating two DVPA configurations,
    /// written `state g1 g2 ...` with the top of the stack first.
    Separator {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 12)]
        maxlen: usize,
    },
    /// Prints the transducer for R_n.
    Rn { n: usize },
}

enum Failure {
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// What a command found: `holds` decides the exit code, `lines` are the
/// text report, `data` the JSON one.
struct Outcome {
    holds: Option<bool>,
    lines: Vec<String>,
    data: Value,
}

fn load(path: &Path) -> Res<MachineFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn wrong_kind(path: &Path, m: &Machine, wanted: &str) -> Failure {
    Failure::Input(format!("{}: expected {wanted}, found a {} machine", path.display(), m.kind().as_str()))
}

fn parse_config(d: &Dvpa, text: &str) -> Res<Configuration> {
    let mut toks = text.split_whitespace();
    let s = toks.next().ok_or_else(|| Failure::Input("empty configuration".into()))?;
    let state = (0..d.num_states()).find(|&q| d.state_name(q) == s).ok_or_else(|| Failure::Input(format!("unknown state `{s}`")))?;
    let stack = toks.map(|g| d.gamma().id_of_name(g)).collect::<wordrel::Result<Vec<_>>>()?;
    Ok(Configuration::new(state, stack))
}

/// Space-separated tokens with runs of four or more written `x^n`.
fn compact(tokens: impl IntoIterator<Item = String>) -> String {
    let mut out: Vec<String> = vec![];
    let mut run: Option<(String, usize)> = None;
    let flush = |run: &mut Option<(String, usize)>, out: &mut Vec<String>| {
        if let Some((t, n)) = run.take() {
            if n >= 4 {
                out.push(format!("{t}^{n}"));
            } else {
                out.extend(std::iter::repeat_n(t, n));
            }
        }
    };
    for t in tokens {
        match &mut run {
            Some((x, n)) if *x == t => *n += 1,
            _ => {
                flush(&mut run, &mut out);
                run = Some((t, 1));
            }
        }
    }
    flush(&mut run, &mut out);
    out.join(" ")
}

fn show_config(d: &Dvpa, c: &Configuration) -> String {
    let stack = compact(c.stack.iter().map(|&g| d.gamma().letter(g).to_string()));
    format!("({}, [{}])", d.state_name(c.state), stack)
}

fn show_word(d: &Dvpa, w: &[usize]) -> String {
    compact(w.iter().map(|&x| d.sigma().letters().letter(x).to_string()))
}

fn check_regular(path: &Path, depth: Option<usize>, budget: &Budget) -> Res<Outcome> {
    let f = load(path)?;
    let Machine::Dvpa(d) = &f.machine else { return Err(wrong_kind(path, &f.machine, "a dvpa")) };
    let (v, st) = is_regular(d, budget, depth)?;
    let sizes = json!({"states": st.states, "m": st.m, "reach_states": st.reach_states, "deep_states": st.deep_states, "nonequiv_states": st.nonequiv_states, "explored": st.explored});
    let mut lines = vec![if v.holds { "regular".to_string() } else { "not regular".to_string() }];
    lines.push(format!("reachable control states {}, depth bound m = {}, explored {}", st.states, st.m, st.explored));
    let mut witness = Value::Null;
    if let Some(w) = &v.witness {
        let sep = w.separator.as_ref().map(|s| show_word(d, s));
        lines.push(format!("witness pair {} and {}", show_config(d, &w.left), show_config(d, &w.right)));
        lines.push(match &sep {
            Some(s) => format!("separator \"{s}\""),
            None => format!("no separator of length at most {}", w.separator_depth),
        });
        witness = json!({"left": show_config(d, &w.left), "right": show_config(d, &w.right), "separator": sep, "separator_depth": w.separator_depth});
    }
    Ok(Outcome { holds: Some(v.holds), lines, data: json!({"property": "regular", "holds": v.holds, "sizes": sizes, "witness": witness}) })
}

fn check_recognizable(path: &Path, depth: Option<usize>, budget: &Budget) -> Res<Outcome> {
    let f = load(path)?;
    let Machine::Sync(t) = &f.machine else { return Err(wrong_kind(path, &f.machine, "a sync transducer")) };
    let (v, rep, lr) = is_recognizable(t, budget, depth)?;
    let d = &lr.dvpa;
    let mut lines = vec![if v.holds { "recognizable".to_string() } else { "not recognizable".to_string() }];
    lines.push(format!("reverse powerset dvpa: {} states, {} stack symbols; depth bound m = {}", rep.lr_states, rep.lr_stack, rep.regularity.m));
    let mut witness = Value::Null;
    if let Some(w) = &v.witness {
        let sep = w.separator.as_ref().map(|s| show_word(d, s));
        lines.push(format!("witness pair {} and {}", show_config(d, &w.left), show_config(d, &w.right)));
        lines.push(match &sep {
            Some(s) => format!("separator \"{s}\""),
            None => format!("no separator of length at most {} found", w.separator_depth),
        });
        witness = json!({"left": show_config(d, &w.left), "right": show_config(d, &w.right), "separator": sep, "separator_depth": w.separator_depth});
    }
    let sizes = json!({"lr_states": rep.lr_states, "lr_stack": rep.lr_stack, "m": rep.regularity.m, "explored": rep.regularity.explored});
    Ok(Outcome { holds: Some(v.holds), lines, data: json!({"property": "recognizable", "holds": v.holds, "sizes": sizes, "witness": witness}) })
}

fn check_omega(path: &Path, budget: &Budget) -> Res<Outcome> {
    let f = load(path)?;
    let Machine::Parity(p) = &f.machine else { return Err(wrong_kind(path, &f.machine, "a parity transducer")) };
    let (v, levels) = is_omega_recognizable(p, budget)?;
    let mut lines = vec![if v.holds { "omega-recognizable".to_string() } else { "not omega-recognizable".to_string() }];
    let mut lv = vec![];
    for l in &levels {
        lines.push(format!(
            "j = {}: E-bar {} states, A# {} states, {} profiles, {} factors, finite index {}",
            l.j, l.ebar_states, l.stats.sharp_states, l.stats.profiles, l.stats.factors, l.verdict.holds
        ));
        lv.push(json!({"j": l.j, "ebar_states": l.ebar_states, "sharp_states": l.stats.sharp_states, "profiles": l.stats.profiles, "representative_states": l.stats.representative_states, "factors": l.stats.factors, "finite_index": l.verdict.holds}));
    }
    let mut witness = Value::Null;
    if let Some(w) = &v.witness {
        let alpha = w.witness.factor.alphabet();
        let words: Vec<String> = w.witness.slender.pump(3).iter().map(|x| alpha.render(x)).collect();
        let side = if w.witness.side == Side::Before { "before" } else { "after" };
        lines.push(format!("level {}: factor {} {} is not slender; equal-length words {}", w.j, side, w.witness.p, words.join(", ")));
        witness = json!({"j": w.j, "p": w.witness.p, "q": w.witness.q, "side": side, "words": words});
    }
    Ok(Outcome { holds: Some(v.holds), lines, data: json!({"property": "omega-recognizable", "holds": v.holds, "levels": lv, "witness": witness}) })
}

fn as_nfa(path: &Path, f: &MachineFile) -> Res<Nfa> {
    match &f.machine {
        Machine::Nfa(n) => Ok(n.clone()),
        Machine::Dfa(d) => Ok(d.to_nfa()),
        other => Err(wrong_kind(path, other, "an nfa or dfa")),
    }
}

fn slender(path: &Path) -> Res<Outcome> {
    let f = load(path)?;
    let a = as_nfa(path, &f)?;
    let v = is_slender(&a);
    let mut lines = vec![if v.holds { "slender".to_string() } else { "not slender".to_string() }];
    let mut witness = Value::Null;
    if let Some(w) = &v.witness {
        let words: Vec<String> = w.pump(3).iter().map(|x| a.alphabet().render(x)).collect();
        lines.push(format!("distinct accepted words of equal length: {}", words.join(", ")));
        witness = json!({"words": words, "loop_state": a.state_name(w.q)});
    }
    Ok(Outcome { holds: Some(v.holds), lines, data: json!({"property": "slender", "holds": v.holds, "states": a.num_states(), "witness": witness}) })
}

fn equiv_gadget(r: &Path, s: &Path, prefix: &str) -> Res<Outcome> {
    let (fr, fs) = (load(r)?, load(s)?);
    let Machine::Det(ar) = &fr.machine else { return Err(wrong_kind(r, &fr.machine, "a det transducer")) };
    let Machine::Det(as_) = &fs.machine else { return Err(wrong_kind(s, &fs.machine, "a det transducer")) };
    let g = build_gadget(&normalize(ar), &normalize(as_))?;
    let mut written = vec![];
    for (tag, b) in [("b_r", &g.b_r), ("b_s", &g.b_s)] {
        let path = format!("{prefix}.{tag}.wr");
        let text = format::serialize(&MachineFile::new(format!("{}_{tag}", fr.name), Machine::DetBuchi(b.clone())))?;
        std::fs::write(&path, text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        written.push(path);
    }
    let lines = vec![format!("wrote {} ({} states each)", written.join(" and "), g.b_r.num_states())];
    Ok(Outcome { holds: None, lines, data: json!({"files": written, "states": g.b_r.num_states()}) })
}

fn run(path: &Path, inputs: &[String]) -> Res<Outcome> {
    let f = load(path)?;
    let one = || -> Res<&String> {
        match inputs {
            [w] => Ok(w),
            _ => Err(Failure::Input(format!("expected one --input, got {}", inputs.len()))),
        }
    };
    let tuple = |tapes: &[wordrel::Alphabet]| -> Res<WordTuple> {
        if inputs.len() != tapes.len() {
            return Err(Failure::Input(format!("expected {} --input values, one per tape", tapes.len())));
        }
        Ok(WordTuple(inputs.iter().zip(tapes).map(|(w, a)| a.word(w)).collect::<wordrel::Result<_>>()?))
    };
    let accepted = match &f.machine {
        Machine::Nfa(n) => n.accepts(&n.alphabet().word(one()?)?),
        Machine::Dfa(d) => d.accepts(&d.alphabet().word(one()?)?),
        Machine::Dvpa(d) => d.accepts(&d.word(one()?)?),
        Machine::Sync(t) => t.accepts(&tuple(t.components())?)?,
        Machine::Det(t) => det_accepts(t, &tuple(t.tapes())?)?,
        other => return Err(wrong_kind(path, other, "a machine over finite words")),
    };
    let lines = vec![if accepted { "accepted".to_string() } else { "rejected".to_string() }];
    Ok(Outcome { holds: Some(accepted), lines, data: json!({"property": "accepted", "holds": accepted}) })
}

fn run_lasso(path: &Path, left: &str, right: &str) -> Res<Outcome> {
    let f = load(path)?;
    let accepted = match &f.machine {
        Machine::DetBuchi(b) if b.arity() == 2 => {
            let w = [UPWord::parse(left, &b.tapes()[0])?, UPWord::parse(right, &b.tapes()[1])?];
            det_buchi_lasso_accepts(b, &w)?
        }
        Machine::Parity(p) if p.arity() == 2 => {
            let w = [UPWord::parse(left, &p.components()[0])?, UPWord::parse(right, &p.components()[1])?];
            p.lasso_accepts(&UPWord::zip(p.components(), &w))
        }
        other => return Err(wrong_kind(path, other, "a binary det-buchi or parity transducer")),
    };
    let lines = vec![if accepted { "accepted".to_string() } else { "rejected".to_string() }];
    Ok(Outcome { holds: Some(accepted), lines, data: json!({"property": "accepted", "holds": accepted}) })
}

fn oracle(o: &Oracle, budget: &Budget) -> Res<Outcome> {
    match o {
        Oracle::Slender { file } => {
            let f = load(file)?;
            let holds = brute_slender(&as_nfa(file, &f)?, budget)?;
            let lines = vec![if holds { "slender".to_string() } else { "not slender".to_string() }];
            Ok(Outcome { holds: Some(holds), lines, data: json!({"property": "slender", "holds": holds, "oracle": "brute"}) })
        }
        Oracle::Recognizable { file } => {
            let f = load(file)?;
            let Machine::Sync(t) = &f.machine else { return Err(wrong_kind(file, &f.machine, "a sync transducer")) };
            let holds = ccg06_recognizable(t, budget)?;
            let lines = vec![if holds { "recognizable".to_string() } else { "not recognizable".to_string() }];
            Ok(Outcome { holds: Some(holds), lines, data: json!({"property": "recognizable", "holds": holds, "oracle": "representatives"}) })
        }
        Oracle::Separator { file, left, right, maxlen } => {
            let f = load(file)?;
            let Machine::Dvpa(d) = &f.machine else { return Err(wrong_kind(file, &f.machine, "a dvpa")) };
            let (c1, c2) = (parse_config(d, left)?, parse_config(d, right)?);
            let sep = bounded_separator(d, &c1, &c2, *maxlen);
            let text = sep.as_ref().map(|w| show_word(d, w));
            let lines = vec![match &text {
                Some(w) => format!("separator \"{w}\""),
                None => format!("no separator of length at most {maxlen}"),
            }];
            Ok(Outcome { holds: Some(sep.is_some()), lines, data: json!({"property": "separable", "holds": sep.is_some(), "separator": text}) })
        }
        Oracle::Rn { n } => {
            if *n == 0 {
                return Err(Failure::Input("n must be at least 1".into()));
            }
            let text = format::serialize(&MachineFile::new(format!("R{n}"), Machine::Sync(generate_rn(*n))))?;
            Ok(Outcome { holds: None, lines: vec![text.trim_end().to_string()], data: json!({"machine": text}) })
        }
    }
}

const FIXTURES: &[&str] = &[
    "eq2", "tot2", "len1", "eq-omega", "full-omega", "head-omega", "cr", "crx", "cnrn", "gr", "gs", "astar-hash-bstar", "astar-b", "rn1", "rn2", "rn3", "rn4",
];

fn fixture(name: &str) -> Option<Machine> {
    Some(match name {
        "eq2" => Machine::Sync(fixtures::eq2()),
        "tot2" => Machine::Sync(fixtures::tot2()),
        "len1" => Machine::Sync(fixtures::len1()),
        "eq-omega" => Machine::Parity(fixtures::eq_omega()),
        "full-omega" => Machine::Parity(fixtures::full_omega()),
        "head-omega" => Machine::Parity(fixtures::head_omega()),
        "cr" => Machine::Dvpa(fixtures::cr()),
        "crx" => Machine::Dvpa(fixtures::crx()),
        "cnrn" => Machine::Dvpa(fixtures::cnrn()),
        "gr" => Machine::Det(fixtures::gr()),
        "gs" => Machine::Det(fixtures::gs()),
        "astar-hash-bstar" => Machine::Nfa(fixtures::astar_hash_bstar()),
        "astar-b" => Machine::Nfa(fixtures::astar_b()),
        _ => {
            let n: usize = name.strip_prefix("rn")?.parse().ok().filter(|&n| n >= 1)?;
            Machine::Sync(generate_rn(n))
        }
    })
}

fn fixtures_cmd(name: &str) -> Res<Outcome> {
    if name == "list" {
        return Ok(Outcome { holds: None, lines: FIXTURES.iter().map(|s| s.to_string()).collect(), data: json!({"fixtures": FIXTURES}) });
    }
    let m = fixture(name).ok_or_else(|| Failure::Input(format!("unknown fixture `{name}`; try `fixtures list`")))?;
    let text = format::serialize(&MachineFile::new(name.replace('-', "_"), m))?;
    Ok(Outcome { holds: None, lines: vec![text.trim_end().to_string()], data: json!({"name": name, "machine": text}) })
}

fn dispatch(c: &Command, budget: &Budget) -> Res<Outcome> {
    match c {
        Command::CheckRegular { file, separator_depth } => check_regular(file, *separator_depth, budget),
        Command::CheckRecognizable { file, separator_depth } => check_recognizable(file, *separator_depth, budget),
        Command::CheckOmegaRecognizable { file } => check_omega(file, budget),
        Command::Slender { file } => slender(file),
        Command::EquivGadget { file_r, file_s, output } => equiv_gadget(file_r, file_s, output),
        Command::Run { file, input } => run(file, input),
        Command::RunLasso { file, left, right } => run_lasso(file, left, right),
        Command::Oracle { oracle: o } => oracle(o, budget),
        Command::Fixtures { name } => fixtures_cmd(name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget::from_env();
    let start = Instant::now();
    let result = dispatch(&cli.command, &budget);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    match result {
        Ok(o) => {
            match cli.report {
                Report::Text => {
                    for l in &o.lines {
                        println!("{l}");
                    }
                }
                Report::Json => {
                    let mut data = o.data;
                    data["elapsed_ms"] = json!(elapsed_ms);
                    println!("{data}");
                }
            }
            ExitCode::from(if o.holds == Some(false) { 1 } else { 0 })
        }
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Input(m) => (2, "input", m),
                Failure::Resource(m) => (3, "resource", m),
            };
            match cli.report {
                Report::Text => eprintln!("error: {msg}"),
                Report::Json => println!("{}", json!({"error": msg, "kind": kind, "elapsed_ms": elapsed_ms})),
            }
            ExitCode::from(code)
        }
    }
}
