/// Outcome of a decision procedure together with an optional witness.
///
/// `holds` answers the question the procedure is named after (for
/// `is_empty`, `holds` means the language is empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn yes() -> Self {
        Verdict { holds: true, witness: None }
    }

    pub fn no(witness: W) -> Self {
        Verdict { holds: false, witness: Some(witness) }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        Verdict { holds: self.holds, witness: self.witness.map(f) }
    }
}
