use crate::alphabet::{LetterId, Word};

use super::{Kind, PushdownAlphabet};

/// `u = prefix · w_1 c_1 w_2 … c_n w_{n+1}` where the `c_i` are the calls
/// still pending at the end, the `w_i` are well-matched, and `prefix` is the
/// shortest prefix holding every unmatched return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallDecomposition {
    pub prefix: Word,
    pub wells: Vec<Word>,
    pub calls: Vec<LetterId>,
    /// Positions in `u` of the pending calls.
    pub call_positions: Vec<usize>,
}

impl CallDecomposition {
    pub fn concat(&self) -> Word {
        let mut out = self.prefix.clone();
        for (i, w) in self.wells.iter().enumerate() {
            out.extend(w);
            if let Some(&c) = self.calls.get(i) {
                out.push(c);
            }
        }
        out
    }
}

/// `u = w_n r_n … w_1 r_1 w_0 · suffix` where the `r_i` are the unmatched
/// returns (listed left to right), the `w_i` are well-matched, and `suffix`
/// is the shortest suffix holding every pending call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopDecomposition {
    pub wells: Vec<Word>,
    pub returns: Vec<LetterId>,
    pub return_positions: Vec<usize>,
    pub suffix: Word,
}

impl PopDecomposition {
    pub fn concat(&self) -> Word {
        let mut out = vec![];
        for (i, w) in self.wells.iter().enumerate() {
            out.extend(w);
            if let Some(&r) = self.returns.get(i) {
                out.push(r);
            }
        }
        out.extend(&self.suffix);
        out
    }
}

/// Positions of unmatched returns and of pending calls.
fn unmatched(sigma: &PushdownAlphabet, u: &[LetterId]) -> (Vec<usize>, Vec<usize>) {
    let mut open: Vec<usize> = vec![];
    let mut rets = vec![];
    for (i, &a) in u.iter().enumerate() {
        match sigma.kind(a) {
            Kind::Call => open.push(i),
            Kind::Return => {
                if open.pop().is_none() {
                    rets.push(i);
                }
            }
            Kind::Internal => {}
        }
    }
    (rets, open)
}

pub fn call_decomposition(sigma: &PushdownAlphabet, u: &[LetterId]) -> CallDecomposition {
    let (rets, calls) = unmatched(sigma, u);
    let start = rets.last().map_or(0, |&i| i + 1);
    let mut wells = vec![];
    let mut from = start;
    for &c in &calls {
        wells.push(u[from..c].to_vec());
        from = c + 1;
    }
    wells.push(u[from..].to_vec());
    CallDecomposition {
        prefix: u[..start].to_vec(),
        wells,
        calls: calls.iter().map(|&i| u[i]).collect(),
        call_positions: calls,
    }
}

pub fn pop_decomposition(sigma: &PushdownAlphabet, u: &[LetterId]) -> PopDecomposition {
    let (rets, calls) = unmatched(sigma, u);
    let end = calls.first().copied().unwrap_or(u.len());
    let mut wells = vec![];
    let mut from = 0;
    for &r in &rets {
        wells.push(u[from..r].to_vec());
        from = r + 1;
    }
    wells.push(u[from..end].to_vec());
    PopDecomposition {
        wells,
        returns: rets.iter().map(|&i| u[i]).collect(),
        return_positions: rets,
        suffix: u[end..].to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_example() {
        let s = PushdownAlphabet::from_names(&["c"], &["r"], &["i"]).unwrap();
        let u = s.letters().word("rircicrc").unwrap();
        let d = call_decomposition(&s, &u);
        assert_eq!(d.concat(), u);
        assert_eq!(d.call_positions, vec![3, 7]);
        assert_eq!(s.letters().render(&d.prefix), "rir");
        assert!(d.wells.iter().all(|w| s.is_well_matched(w)));
        let p = pop_decomposition(&s, &u);
        assert_eq!(p.concat(), u);
        assert_eq!(p.return_positions, vec![0, 2]);
        assert_eq!(s.letters().render(&p.suffix), "cicrc");
    }
}
