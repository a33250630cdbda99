//! Shortlex string rewriting with bounded Knuth–Bendix completion.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::presentation::{format_word, Presentation, Word};
use crate::error::{Error, Result};

/// Shorter words first, then lexicographic by generator index.
pub fn shortlex_cmp(a: &[u16], b: &[u16]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    generators: Vec<String>,
    rules: Vec<(Word, Word)>,
    confluent: bool,
    limits_hit: bool,
    assumed: bool,
}

impl RewriteSystem {
    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    pub fn confluent(&self) -> bool {
        self.confluent
    }

    pub fn limits_hit(&self) -> bool {
        self.limits_hit
    }

    /// Whether normal forms are trusted only because of [`assume_confluent`](Self::assume_confluent).
    pub fn assumed(&self) -> bool {
        self.assumed && !self.confluent
    }

    /// Caller override: use the rules as if they were confluent.
    pub fn assume_confluent(mut self) -> Self {
        self.assumed = true;
        self
    }

    fn usable(&self) -> Result<()> {
        if self.confluent || self.assumed {
            Ok(())
        } else {
            Err(Error::NotConfluent {
                limits_hit: self.limits_hit,
            })
        }
    }

    /// The irreducible descendant of `w`; refused unless confluent or overridden.
    pub fn normal_form(&self, w: &[u16]) -> Result<Word> {
        self.usable()?;
        Ok(reduce(&self.rules, w))
    }

    pub fn format_word(&self, w: &[u16]) -> String {
        format_word(&self.generators, w)
    }
}

/// Leftmost-innermost reduction: scan left to right, rewrite as soon as some
/// left-hand side is a suffix of the processed part, and re-scan the result.
pub(crate) fn reduce(rules: &[(Word, Word)], w: &[u16]) -> Word {
    if rules.is_empty() {
        return w.to_vec();
    }
    let mut input: Vec<u16> = w.iter().rev().copied().collect();
    let mut out: Word = Vec::with_capacity(w.len());
    while let Some(x) = input.pop() {
        out.push(x);
        for (l, r) in rules {
            if out.ends_with(l) {
                out.truncate(out.len() - l.len());
                input.extend(r.iter().rev());
                break;
            }
        }
    }
    out
}

fn contains(hay: &[u16], needle: &[u16]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Critical pairs between rule `a` and rule `b`: proper overlaps of a suffix of
/// `a`'s left side with a prefix of `b`'s, and `b` occurring inside `a`.
fn critical_pairs(a: &(Word, Word), b: &(Word, Word), same: bool) -> Vec<(Word, Word)> {
    let (la, ra) = a;
    let (lb, rb) = b;
    let mut out = Vec::new();
    for ov in 1..la.len().min(lb.len()) {
        if la[la.len() - ov..] == lb[..ov] {
            let mut left = ra.clone();
            left.extend_from_slice(&lb[ov..]);
            let mut right = la[..la.len() - ov].to_vec();
            right.extend_from_slice(rb);
            out.push((left, right));
        }
    }
    if !same && lb.len() <= la.len() {
        for p in 0..=la.len() - lb.len() {
            if la[p..p + lb.len()] == lb[..] {
                let mut other = la[..p].to_vec();
                other.extend_from_slice(rb);
                other.extend_from_slice(&la[p + lb.len()..]);
                out.push((ra.clone(), other));
            }
        }
    }
    out
}

struct Completion {
    rules: Vec<Option<(Word, Word)>>,
    pending: VecDeque<(Word, Word)>,
    pairs: VecDeque<(usize, usize)>,
    max_rules: usize,
    max_len: usize,
    dropped: bool,
    overflow: bool,
}

impl Completion {
    fn active(&self) -> Vec<(Word, Word)> {
        self.rules.iter().flatten().cloned().collect()
    }

    fn active_count(&self) -> usize {
        self.rules.iter().filter(|r| r.is_some()).count()
    }

    fn add_equation(&mut self, l: Word, r: Word) {
        let act = self.active();
        let (l, r) = (reduce(&act, &l), reduce(&act, &r));
        let (lhs, rhs) = match shortlex_cmp(&l, &r) {
            Ordering::Equal => return,
            Ordering::Greater => (l, r),
            Ordering::Less => (r, l),
        };
        if lhs.len() > self.max_len {
            self.dropped = true;
            return;
        }
        if self.active_count() >= self.max_rules {
            self.overflow = true;
            return;
        }
        let k = self.rules.len();
        self.rules.push(Some((lhs.clone(), rhs)));
        // Interreduce: rules whose left side now reduces go back to the queue;
        // right sides are re-normalized.
        for i in 0..k {
            let Some((li, ri)) = self.rules[i].clone() else { continue };
            if contains(&li, &lhs) {
                self.rules[i] = None;
                self.pending.push_back((li, ri));
            }
        }
        let act = self.active();
        for i in 0..=k {
            if let Some((li, ri)) = self.rules[i].clone() {
                let nr = reduce(&act, &ri);
                if nr != ri {
                    self.rules[i] = Some((li, nr));
                }
            }
        }
        for i in 0..=k {
            self.pairs.push_back((i, k));
            if i != k {
                self.pairs.push_back((k, i));
            }
        }
    }

    fn run(&mut self) {
        loop {
            while let Some((l, r)) = self.pending.pop_front() {
                self.add_equation(l, r);
                if self.overflow {
                    return;
                }
            }
            let Some((i, j)) = self.pairs.pop_front() else { return };
            let (Some(a), Some(b)) = (self.rules[i].clone(), self.rules[j].clone()) else {
                continue;
            };
            for eq in critical_pairs(&a, &b, i == j) {
                self.pending.push_back(eq);
            }
        }
    }
}

/// Every critical pair of `rules` resolves.
fn locally_confluent(rules: &[(Word, Word)]) -> bool {
    for (i, a) in rules.iter().enumerate() {
        for (j, b) in rules.iter().enumerate() {
            for (x, y) in critical_pairs(a, b, i == j) {
                if reduce(rules, &x) != reduce(rules, &y) {
                    return false;
                }
            }
        }
    }
    true
}

/// Shortlex completion within `max_rules` active rules and left sides of at
/// most `max_len` letters.
///
/// Dropped over-long equations or a rule overflow leave `confluent = false`
/// and `limits_hit = true`; the final rule set is always re-checked for
/// unresolved critical pairs.
pub fn complete(p: &Presentation, max_rules: usize, max_len: usize) -> Result<RewriteSystem> {
    if max_rules == 0 || max_len == 0 {
        return Err(Error::InvalidParam("completion limits must be positive".into()));
    }
    let mut c = Completion {
        rules: Vec::new(),
        pending: p.relations().iter().cloned().collect(),
        pairs: VecDeque::new(),
        max_rules,
        max_len,
        dropped: false,
        overflow: false,
    };
    c.run();
    let mut rules = c.active();
    rules.sort_by(|a, b| shortlex_cmp(&a.0, &b.0).then_with(|| shortlex_cmp(&a.1, &b.1)));
    let limits_hit = c.dropped || c.overflow;
    let confluent = !limits_hit && locally_confluent(&rules);
    Ok(RewriteSystem {
        generators: p.generators().to_vec(),
        rules,
        confluent,
        limits_hit,
        assumed: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(gens: &[&str], rels: &[&str]) -> RewriteSystem {
        complete(&Presentation::parse(gens, rels).unwrap(), 64, 16).unwrap()
    }

    #[test]
    fn free_monoid_has_no_rules() {
        let rs = sys(&["a", "b"], &[]);
        assert!(rs.rules().is_empty());
        assert!(rs.confluent());
        assert_eq!(rs.normal_form(&[0, 1, 1, 0]).unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn commutative_orients_ba_to_ab() {
        let rs = sys(&["a", "b"], &["ab=ba"]);
        assert_eq!(rs.rules(), &[(vec![1, 0], vec![0, 1])]);
        assert!(rs.confluent());
        assert_eq!(rs.normal_form(&[1, 0, 1]).unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn idempotent_generator() {
        let rs = sys(&["a"], &["aa=a"]);
        assert_eq!(rs.rules(), &[(vec![0, 0], vec![0])]);
        assert!(rs.confluent());
        assert_eq!(rs.normal_form(&[0, 0, 0]).unwrap(), vec![0]);
    }

    #[test]
    fn completion_adds_consequences() {
        // Bicyclic-like: ab=1, plus ba=1 gives a group; completion must stay confluent.
        let rs = sys(&["a", "b"], &["ab=1", "ba=1"]);
        assert!(rs.confluent());
        assert_eq!(rs.normal_form(&[0, 0, 1, 0, 1]).unwrap(), vec![0]);
        // aba=b with a^2=1: non-trivial overlaps.
        let rs = sys(&["a", "b"], &["aa=1", "bbb=1", "abab=1"]);
        assert!(rs.confluent());
    }

    #[test]
    fn limits_are_reported() {
        // The positive braid relation has no finite shortlex completion.
        let p = Presentation::parse(&["a", "b"], &["aba=bab"]).unwrap();
        let rs = complete(&p, 8, 8).unwrap();
        assert!(rs.limits_hit());
        assert!(!rs.confluent());
        assert!(matches!(rs.normal_form(&[0]), Err(Error::NotConfluent { limits_hit: true })));
        let forced = rs.clone().assume_confluent();
        assert!(forced.normal_form(&[0, 1]).is_ok());
        assert!(forced.assumed());
    }

    #[test]
    fn non_confluent_rules_detected() {
        // Both rules kept without completion: overlap aab is not resolved.
        let rules = vec![(vec![0, 0], vec![1]), (vec![0, 1], vec![0])];
        assert!(!locally_confluent(&rules));
    }
}
