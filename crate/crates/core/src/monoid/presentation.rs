use crate::error::{Error, Result};

/// A word as generator indices; the empty word is the identity.
pub type Word = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<(Word, Word)>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: Vec<(Word, Word)>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidParam("a presentation needs at least one generator".into()));
        }
        if generators.len() > u16::MAX as usize {
            return Err(Error::InvalidParam("too many generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || g == "1" || g.contains(['.', '=']) || g.chars().any(char::is_whitespace) {
                return Err(Error::InvalidParam(format!("invalid generator token {g:?}")));
            }
            if generators[..i].contains(g) {
                return Err(Error::InvalidParam(format!("generator {g:?} declared twice")));
            }
        }
        let n = generators.len() as u16;
        for (l, r) in &relations {
            if l.iter().chain(r).any(|&x| x >= n) {
                return Err(Error::InvalidParam("relation uses an undeclared generator".into()));
            }
        }
        Ok(Presentation { generators, relations })
    }

    /// Free monoid on the given generators.
    pub fn free(generators: &[&str]) -> Result<Self> {
        Self::new(generators.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    /// Builds a presentation from generator tokens and `lhs=rhs` strings.
    pub fn parse(generators: &[&str], relations: &[&str]) -> Result<Self> {
        let p = Self::free(generators)?;
        let rels = relations
            .iter()
            .map(|r| {
                let (l, rr) = r
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidParam(format!("relation {r:?} lacks `=`")))?;
                Ok((p.parse_word(l.trim())?, p.parse_word(rr.trim())?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p.generators, rels)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.relations
    }

    /// Parses a word. `1` is the empty word; tokens may be separated by `.`,
    /// otherwise the longest matching generator is taken at each position.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::new());
        }
        let mut out = Word::new();
        for chunk in s.split('.') {
            let mut rest = chunk;
            while !rest.is_empty() {
                let best = self
                    .generators
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| rest.starts_with(g.as_str()))
                    .max_by_key(|(i, g)| (g.len(), std::cmp::Reverse(*i)));
                match best {
                    Some((i, g)) => {
                        out.push(i as u16);
                        rest = &rest[g.len()..];
                    }
                    None => return Err(Error::InvalidParam(format!("cannot read word {s:?} over the declared generators"))),
                }
            }
        }
        Ok(out)
    }

    /// `1` for the empty word; generators concatenated when all are single
    /// characters, otherwise joined with `.`.
    pub fn format_word(&self, w: &[u16]) -> String {
        format_word(&self.generators, w)
    }
}

pub(crate) fn format_word(generators: &[String], w: &[u16]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let sep = if generators.iter().all(|g| g.chars().count() == 1) { "" } else { "." };
    w.iter().map(|&i| generators[i as usize].as_str()).collect::<Vec<_>>().join(sep)
}
