//! String rewriting over the free monoid on the letters `x, x^-1` of a
//! presentation, with Knuth-Bendix completion under the shortlex order.
//!
//! Letters are ordered by code, so `a < a^-1 < b < b^-1 < ...`.

mod complete;
mod trie;

pub use complete::complete;

use std::cmp::Ordering;

use crate::presentation::{format_letters, Letter, Word};
use trie::Trie;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionLimits {
    /// Maximum number of live rules.
    pub max_rules: usize,
    /// Maximum length of a left-hand side.
    pub max_len: usize,
    /// Maximum number of overlap-and-interreduce passes.
    pub max_passes: usize,
}

impl Default for CompletionLimits {
    fn default() -> Self {
        CompletionLimits {
            max_rules: 20_000,
            max_len: 64,
            max_passes: 10_000,
        }
    }
}

/// Which completion limit was hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Limit {
    Rules,
    Length,
    Passes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionStatus {
    Confluent,
    /// Completion stopped at a limit; the rules are sound but not confluent.
    Exceeded(Limit),
    /// Built from explicit rules and not known to be confluent.
    Unchecked,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum RewritingError {
    #[error("the rewriting system is not known to be confluent")]
    NotConfluent,
    #[error("rule {index}: left side is not greater than right side in shortlex")]
    NotReducing { index: usize },
    #[error("rule {index}: letter outside the alphabet")]
    LetterOutOfRange { index: usize },
}

/// Result of counting irreducible words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalFormCount {
    Finite(u64),
    /// More irreducible words than the bound (possibly infinitely many).
    ExceedsBound(u64),
}

/// A critical pair: the overlap word and the two irreducible words it
/// rewrites to, as letter strings without free reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub overlap: Vec<Letter>,
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub confluent: bool,
    pub unresolved: Vec<CriticalPair>,
}

#[derive(Clone, Debug)]
pub(crate) struct Rule {
    pub(crate) lhs: Vec<u32>,
    pub(crate) rhs: Vec<u32>,
    pub(crate) alive: bool,
}

#[derive(Clone, Debug)]
pub struct RewritingSystem {
    names: Vec<String>,
    alphabet: usize,
    rules: Vec<Rule>,
    live: usize,
    /// Left sides read forwards.
    fwd: Trie,
    /// Left sides read backwards; used to find a left side ending at the
    /// last letter of a word.
    rev: Trie,
    status: CompletionStatus,
}

pub(crate) fn shortlex(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn to_codes(w: &Word) -> Vec<u32> {
    w.letters().iter().map(|l| l.code() as u32).collect()
}

fn to_letters(codes: &[u32]) -> Vec<Letter> {
    codes
        .iter()
        .map(|&c| Letter::from_code(c as usize))
        .collect()
}

fn to_word(codes: &[u32]) -> Word {
    Word::from_letters(to_letters(codes))
}

impl RewritingSystem {
    fn empty(names: Vec<String>) -> Self {
        let alphabet = 2 * names.len();
        RewritingSystem {
            names,
            alphabet,
            rules: Vec::new(),
            live: 0,
            fwd: Trie::new(alphabet),
            rev: Trie::new(alphabet),
            status: CompletionStatus::Unchecked,
        }
    }

    /// A system with exactly the given rules and no free-reduction rules
    /// added. Each rule must be shortlex-decreasing.
    pub fn from_rules(
        names: Vec<String>,
        rules: &[(Vec<Letter>, Vec<Letter>)],
    ) -> Result<Self, RewritingError> {
        let mut rs = RewritingSystem::empty(names);
        for (index, (l, r)) in rules.iter().enumerate() {
            if l.iter().chain(r).any(|x| x.gen() >= rs.names.len()) {
                return Err(RewritingError::LetterOutOfRange { index });
            }
            let code = |w: &[Letter]| w.iter().map(|x| x.code() as u32).collect::<Vec<u32>>();
            let (l, r) = (code(l), code(r));
            if shortlex(&l, &r) != Ordering::Greater {
                return Err(RewritingError::NotReducing { index });
            }
            rs.push_rule(l, r);
        }
        Ok(rs)
    }

    pub(crate) fn push_rule(&mut self, lhs: Vec<u32>, rhs: Vec<u32>) -> usize {
        let id = self.rules.len();
        self.fwd.insert(lhs.iter().copied(), id);
        self.rev.insert(lhs.iter().rev().copied(), id);
        self.rules.push(Rule {
            lhs,
            rhs,
            alive: true,
        });
        self.live += 1;
        id
    }

    pub(crate) fn kill_rule(&mut self, id: usize) {
        let rule = &mut self.rules[id];
        if !rule.alive {
            return;
        }
        rule.alive = false;
        self.live -= 1;
        self.fwd.remove(rule.lhs.iter().copied());
        self.rev.remove(rule.lhs.iter().rev().copied());
    }

    /// Drops dead rules and rebuilds the index.
    pub(crate) fn compact(&mut self) {
        let rules = std::mem::take(&mut self.rules);
        self.fwd = Trie::new(self.alphabet);
        self.rev = Trie::new(self.alphabet);
        self.live = 0;
        for r in rules.into_iter().filter(|r| r.alive) {
            self.push_rule(r.lhs, r.rhs);
        }
    }

    pub fn status(&self) -> CompletionStatus {
        self.status
    }

    pub fn is_confluent(&self) -> bool {
        self.status == CompletionStatus::Confluent
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn num_rules(&self) -> usize {
        self.live
    }

    /// The live rules as `(lhs, rhs)` letter strings. Sides are not freely
    /// reduced, so free-reduction rules such as `a*a^-1 -> 1` appear as is.
    pub fn rules(&self) -> Vec<(Vec<Letter>, Vec<Letter>)> {
        self.rules
            .iter()
            .filter(|r| r.alive)
            .map(|r| (to_letters(&r.lhs), to_letters(&r.rhs)))
            .collect()
    }

    /// Rule whose left side is a suffix of `w`, if any.
    #[inline]
    fn suffix_match(&self, w: &[u32]) -> Option<usize> {
        let mut node = Trie::ROOT;
        for &x in w.iter().rev() {
            node = self.rev.child(node, x)?;
            if let Some(id) = self.rev.terminal(node) {
                return Some(id);
            }
        }
        None
    }

    pub(crate) fn reduce_codes(&self, w: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::with_capacity(w.len());
        let mut pending: Vec<u32> = w.iter().rev().copied().collect();
        while let Some(x) = pending.pop() {
            out.push(x);
            if let Some(id) = self.suffix_match(&out) {
                let rule = &self.rules[id];
                out.truncate(out.len() - rule.lhs.len());
                pending.extend(rule.rhs.iter().rev());
            }
        }
        out
    }

    /// Rewrites `w` until no rule applies. Works on any system; the result
    /// is a canonical form only when the system is confluent.
    pub fn reduce(&self, w: &Word) -> Word {
        to_word(&self.reduce_codes(&to_codes(w)))
    }

    /// The unique irreducible word equal to `w`.
    pub fn normal_form(&self, w: &Word) -> Result<Word, RewritingError> {
        if !self.is_confluent() {
            return Err(RewritingError::NotConfluent);
        }
        Ok(self.reduce(w))
    }

    /// True iff no rule applies anywhere in `w`.
    pub fn is_irreducible(&self, w: &Word) -> bool {
        let codes = to_codes(w);
        (1..=codes.len()).all(|k| self.suffix_match(&codes[..k]).is_none())
    }

    /// Number of irreducible words, by depth-first search over the
    /// prefix-closed set of irreducible words. Stops once the count passes
    /// `bound`.
    pub fn count_normal_forms(&self, bound: u64) -> Result<NormalFormCount, RewritingError> {
        if !self.is_confluent() {
            return Err(RewritingError::NotConfluent);
        }
        Ok(self.count_irreducible(bound))
    }

    pub(crate) fn count_irreducible(&self, bound: u64) -> NormalFormCount {
        let mut count = 1u64;
        let mut word: Vec<u32> = Vec::new();
        // Next letter to try at each depth.
        let mut next: Vec<u32> = vec![0];
        while let Some(x) = next.last().copied() {
            if x as usize == self.alphabet {
                next.pop();
                word.pop();
                continue;
            }
            *next.last_mut().expect("nonempty") += 1;
            word.push(x);
            if self.suffix_match(&word).is_some() {
                word.pop();
                continue;
            }
            count += 1;
            if count > bound {
                return NormalFormCount::ExceedsBound(bound);
            }
            next.push(0);
        }
        NormalFormCount::Finite(count)
    }

    /// Calls `emit(overlap, left, right)` for the critical pairs of rule
    /// `i`: proper overlaps with live rules `j <= i` in either order, and
    /// live rules whose left side sits inside that of `i`.
    pub(crate) fn critical_pairs(
        &self,
        i: usize,
        mut emit: impl FnMut(Vec<u32>, Vec<u32>, Vec<u32>),
    ) {
        let (l, r) = (&self.rules[i].lhs, &self.rules[i].rhs);
        let n = l.len();
        let mut below = Vec::new();
        for s in 0..n {
            let mut node = Trie::ROOT;
            let mut t = s;
            while t < n {
                let Some(c) = self.fwd.child(node, l[t]) else {
                    break;
                };
                node = c;
                t += 1;
                if let Some(j) = self.fwd.terminal(node) {
                    if j != i && self.rules[j].alive {
                        let mut right = l[..s].to_vec();
                        right.extend_from_slice(&self.rules[j].rhs);
                        right.extend_from_slice(&l[t..]);
                        emit(l.clone(), r.clone(), right);
                    }
                }
            }
            if t < n || s == 0 {
                continue;
            }
            below.clear();
            self.fwd.below(node, &mut below);
            for &j in &below {
                if j > i || !self.rules[j].alive {
                    continue;
                }
                let tail = &self.rules[j].lhs[n - s..];
                let mut overlap = l.clone();
                overlap.extend_from_slice(tail);
                let mut left = r.clone();
                left.extend_from_slice(tail);
                let mut right = l[..s].to_vec();
                right.extend_from_slice(&self.rules[j].rhs);
                emit(overlap, left, right);
            }
        }
        for k in 1..n {
            let Some(node) = self.rev.walk(l[..k].iter().rev().copied()) else {
                break;
            };
            below.clear();
            self.rev.below(node, &mut below);
            for &j in &below {
                if j >= i || !self.rules[j].alive {
                    continue;
                }
                let lj = &self.rules[j].lhs;
                let head = &lj[..lj.len() - k];
                let mut overlap = head.to_vec();
                overlap.extend_from_slice(l);
                let mut left = self.rules[j].rhs.clone();
                left.extend_from_slice(&l[k..]);
                let mut right = head.to_vec();
                right.extend_from_slice(r);
                emit(overlap, left, right);
            }
        }
    }

    /// Checks every critical pair of the live rules.
    pub fn check_confluence(&self) -> ConfluenceReport {
        let mut unresolved = Vec::new();
        for i in 0..self.rules.len() {
            if !self.rules[i].alive {
                continue;
            }
            self.critical_pairs(i, |overlap, left, right| {
                let (a, b) = (self.reduce_codes(&left), self.reduce_codes(&right));
                if a != b {
                    unresolved.push(CriticalPair {
                        overlap: to_letters(&overlap),
                        left: to_letters(&a),
                        right: to_letters(&b),
                    });
                }
            });
        }
        ConfluenceReport {
            confluent: unresolved.is_empty(),
            unresolved,
        }
    }

    /// Marks the system confluent if every critical pair resolves.
    pub fn verify_confluence(&mut self) -> bool {
        let ok = self.check_confluence().confluent;
        if ok {
            self.status = CompletionStatus::Confluent;
        }
        ok
    }

    fn format(&self, codes: &[u32]) -> String {
        if codes.is_empty() {
            return "1".to_string();
        }
        codes
            .iter()
            .map(|&c| {
                let l = Letter::from_code(c as usize);
                let name = &self.names[l.gen()];
                if l.is_inverse() {
                    format!("{name}'")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// One `lhs -> rhs` line per rule; inverse letters carry a `'` suffix
    /// and the empty word is written `1`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in self.rules.iter().filter(|r| r.alive) {
            out.push_str(&self.format(&r.lhs));
            out.push_str(" -> ");
            out.push_str(&self.format(&r.rhs));
            out.push('\n');
        }
        out
    }

    /// A word in the usual `a^2*b^-1` notation.
    pub fn format_word(&self, w: &Word) -> String {
        format_letters(w.letters(), |g| self.names[g].as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    fn confluent(s: &str) -> (Presentation, RewritingSystem) {
        let p = pres(s);
        let rs = complete(&p, &CompletionLimits::default());
        assert!(rs.is_confluent(), "{s}");
        (p, rs)
    }

    fn count(rs: &RewritingSystem) -> u64 {
        match rs.count_normal_forms(1_000_000).unwrap() {
            NormalFormCount::Finite(n) => n,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let (p, rs) = confluent("a | a^3");
        assert_eq!(count(&rs), 3);
        let nf = |w: &str| rs.format_word(&rs.normal_form(&p.parse_word(w).unwrap()).unwrap());
        assert_eq!(nf("a^4"), "a");
        // a^-1 is shorter than a^2, so it is the normal form.
        assert_eq!(nf("a^2"), "a^-1");
        assert_eq!(rs.normal_form(&Word::empty()).unwrap(), Word::empty());
    }

    #[test]
    fn small_group_orders() {
        for (text, order) in [
            ("a | a", 1),
            ("a | a^6", 6),
            ("a b | a^2, b^3, (a*b)^2", 6),
            ("a b | a^4, b^2, (a*b)^2", 8),
            ("a b | a^4, a^2*b^-2, b^-1*a*b*a", 8),
        ] {
            let (_, rs) = confluent(text);
            assert_eq!(count(&rs), order, "{text}");
            assert!(rs.check_confluence().confluent);
        }
    }

    #[test]
    fn equal_words_share_a_normal_form() {
        let (p, rs) = confluent("a b | a^2, b^3, (a*b)^2");
        let ba = rs.normal_form(&p.parse_word("b*a").unwrap()).unwrap();
        let abb = rs.normal_form(&p.parse_word("a*b^2").unwrap()).unwrap();
        assert_eq!(ba, abb);
    }

    #[test]
    fn custom_systems() {
        let names = vec!["a".to_string(), "b".to_string()];
        let p = Presentation::new(names.clone(), vec![]).unwrap();
        let w = |s: &str| p.parse_word(s).unwrap().letters().to_vec();

        let rs =
            RewritingSystem::from_rules(names.clone(), &[(w("a*b"), vec![]), (w("b*a"), vec![])])
                .unwrap();
        let report = rs.check_confluence();
        assert!(report.confluent);
        assert!(report.unresolved.is_empty());

        let rs =
            RewritingSystem::from_rules(names.clone(), &[(w("a^2"), vec![]), (w("a*b*a"), w("b"))])
                .unwrap();
        let report = rs.check_confluence();
        assert!(!report.confluent);
        let aaba = report
            .unresolved
            .iter()
            .find(|c| c.overlap == w("a^2*b*a"))
            .expect("overlap aaba is reported");
        let mut sides = [aaba.left.clone(), aaba.right.clone()];
        sides.sort();
        assert_eq!(sides, [w("a*b"), w("b*a")]);
        assert_eq!(
            rs.normal_form(&p.parse_word("a").unwrap()),
            Err(RewritingError::NotConfluent)
        );

        assert_eq!(
            RewritingSystem::from_rules(names.clone(), &[(w("a"), w("b"))]).unwrap_err(),
            RewritingError::NotReducing { index: 0 }
        );

        let inverse_pair = vec![Letter::new(0, false), Letter::new(0, true)];
        let rs =
            RewritingSystem::from_rules(names.clone(), &[(inverse_pair.clone(), vec![])]).unwrap();
        assert_eq!(rs.rules(), vec![(inverse_pair, vec![])]);
        assert_eq!(
            RewritingSystem::from_rules(names, &[(vec![Letter::new(2, false)], vec![])])
                .unwrap_err(),
            RewritingError::LetterOutOfRange { index: 0 }
        );
    }

    #[test]
    fn infinite_group_exceeds_bound() {
        let (_, rs) = confluent("a b | a*b*a^-1*b^-1");
        assert_eq!(
            rs.count_normal_forms(1000).unwrap(),
            NormalFormCount::ExceedsBound(1000)
        );
    }

    #[test]
    fn limits_give_partial_system() {
        let p = pres("a b | a^2, b^3, (a*b)^2");
        let rs = complete(
            &p,
            &CompletionLimits {
                max_rules: 8,
                ..Default::default()
            },
        );
        assert_eq!(rs.status(), CompletionStatus::Exceeded(Limit::Rules));
        assert!(rs.count_normal_forms(10).is_err());
    }

    #[test]
    fn dump_uses_primes_for_inverses() {
        let (_, rs) = confluent("a | a^3");
        let dump = rs.dump();
        assert!(dump.lines().any(|l| l == "a*a -> a'"), "{dump}");
        assert!(dump.lines().all(|l| l.contains(" -> ")));
    }
}
