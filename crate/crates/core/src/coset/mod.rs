//! Todd-Coxeter coset enumeration.
//!
//! Tables have one column per letter code (`2 * gen` for a generator,
//! `2 * gen + 1` for its inverse). Coset `0` is the subgroup itself.

mod enumerate;
mod subgroup;

pub use enumerate::enumerate;
pub use subgroup::{enumerate_group, schreier_abelian_invariants};

use std::fmt;

use crate::perm::Permutation;
use crate::presentation::{Presentation, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Deduction-driven definitions; the default.
    #[default]
    Felsch,
    /// Relator-based (Haselgrove-Leech-Trotter) definitions.
    Hlt,
    /// HLT, with a full lookahead scan and compaction when storage runs out.
    HltLookahead,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "felsch" => Ok(Strategy::Felsch),
            "hlt" => Ok(Strategy::Hlt),
            "hlt-lookahead" | "hlt+lookahead" => Ok(Strategy::HltLookahead),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Maximum number of coset rows held at once.
    pub max_cosets: usize,
    pub strategy: Strategy,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: 1_000_000,
            strategy: Strategy::Felsch,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TableStatus {
    InProgress,
    Closed,
    Exceeded,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset {0} is not live")]
    DeadCoset(usize),
    #[error("table is not closed")]
    NotClosed,
    #[error("subgroup generator {index} uses generator {gen} outside the presentation")]
    InvalidSubgroupWord { index: usize, gen: usize },
    #[error("max_cosets must be at least 1")]
    InvalidLimits,
}

pub(crate) const UNDEF: u32 = u32::MAX;

/// Action of the generators on the cosets of a subgroup.
#[derive(Clone, PartialEq, Eq)]
pub struct CosetTable {
    num_gens: usize,
    rows: Vec<u32>,
    status: TableStatus,
}

impl CosetTable {
    pub(crate) fn from_raw(num_gens: usize, rows: Vec<u32>, status: TableStatus) -> Self {
        debug_assert_eq!(rows.len() % (2 * num_gens).max(1), 0);
        CosetTable {
            num_gens,
            rows,
            status,
        }
    }

    /// Builds a table from explicit rows (`None` = undefined). Closed status
    /// is claimed only when every entry is defined; nothing else is
    /// checked, so this is suitable for hand-built or corrupted tables.
    pub fn from_rows(num_gens: usize, rows: &[Vec<Option<usize>>]) -> Self {
        let cols = 2 * num_gens;
        let mut flat = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row width must be 2 * num_gens");
            flat.extend(r.iter().map(|e| e.map_or(UNDEF, |c| c as u32)));
        }
        let status = if flat.iter().all(|&e| e != UNDEF) {
            TableStatus::Closed
        } else {
            TableStatus::InProgress
        };
        CosetTable::from_raw(num_gens, flat, status)
    }

    pub fn num_generators(&self) -> usize {
        self.num_gens
    }

    fn cols(&self) -> usize {
        2 * self.num_gens
    }

    /// Number of cosets in the table.
    pub fn live_count(&self) -> usize {
        if self.num_gens == 0 {
            // Only the subgroup coset.
            return 1;
        }
        self.rows.len() / self.cols()
    }

    pub fn status(&self) -> TableStatus {
        self.status
    }

    pub fn is_closed(&self) -> bool {
        self.status == TableStatus::Closed
    }

    /// `c^x` for a letter code `x`.
    pub fn entry(&self, coset: usize, letter: usize) -> Option<usize> {
        let v = self.rows[coset * self.cols() + letter];
        (v != UNDEF).then_some(v as usize)
    }

    /// Applies the letters of `w` to `coset` from left to right. `Ok(None)`
    /// means a needed entry is undefined.
    pub fn trace(&self, coset: usize, w: &Word) -> Result<Option<usize>, CosetError> {
        if coset >= self.live_count() {
            return Err(CosetError::DeadCoset(coset));
        }
        let mut c = coset;
        for l in w.letters() {
            match self.entry(c, l.code()) {
                Some(d) => c = d,
                None => return Ok(None),
            }
        }
        Ok(Some(c))
    }

    /// True iff the table is complete, the columns of each generator and its
    /// inverse are mutually inverse permutations, and every relator traces
    /// closed at every coset.
    pub fn validate(&self, p: &Presentation) -> bool {
        if p.num_generators() != self.num_gens {
            return false;
        }
        let n = self.live_count();
        for c in 0..n {
            for x in 0..self.cols() {
                match self.entry(c, x) {
                    Some(d) if d < n => {
                        if self.entry(d, x ^ 1) != Some(c) {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        (0..n).all(|c| {
            p.relators()
                .iter()
                .all(|r| self.trace(c, r).ok().flatten() == Some(c))
        })
    }

    /// The permutation of the cosets induced by each generator.
    pub fn permutation_images(&self) -> Result<Vec<Permutation>, CosetError> {
        if !self.is_closed() {
            return Err(CosetError::NotClosed);
        }
        let n = self.live_count();
        (0..self.num_gens)
            .map(|g| {
                let images = (0..n).map(|c| self.rows[c * self.cols() + 2 * g]).collect();
                Permutation::from_images(images).ok_or(CosetError::NotClosed)
            })
            .collect()
    }

    /// Plain-text dump: a `cosets=<n> gens=<d>` header, then one row of
    /// `2d` one-based coset numbers per coset, `0` for undefined.
    pub fn dump(&self) -> String {
        let mut out = format!("cosets={} gens={}\n", self.live_count(), self.num_gens);
        for c in 0..self.live_count() {
            let row: Vec<String> = (0..self.cols())
                .map(|x| self.entry(c, x).map_or(0, |d| d + 1).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetTable")
            .field("num_gens", &self.num_gens)
            .field("live_count", &self.live_count())
            .field("status", &self.status)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    fn run(s: &str, strategy: Strategy) -> CosetTable {
        let limits = EnumerationLimits {
            strategy,
            ..Default::default()
        };
        enumerate(&pres(s), &[], &limits).unwrap()
    }

    const ALL: [Strategy; 3] = [Strategy::Felsch, Strategy::Hlt, Strategy::HltLookahead];

    #[test]
    fn small_groups_close_with_correct_index() {
        let cases = [
            ("a | a", 1),
            ("a | a^6", 6),
            ("a b | a^2, b^3, (a*b)^2", 6),
            ("a b | a^4, b^2, (a*b)^2", 8),
            ("a b | a^4, a^2*b^-2, b^-1*a*b*a", 8),
            ("a b | a^2, b^2, (a*b)^2", 4),
            ("a b | a^2, b^3, (a*b)^5", 60),
        ];
        for (s, n) in cases {
            for st in ALL {
                let t = run(s, st);
                assert_eq!(t.status(), TableStatus::Closed, "{s} {st:?}");
                assert_eq!(t.live_count(), n, "{s} {st:?}");
                assert!(t.validate(&pres(s)), "{s} {st:?}");
            }
        }
    }

    #[test]
    fn subgroup_index() {
        let p = pres("a b | a^2, b^3, (a*b)^2");
        let h = vec![p.parse_word("b").unwrap()];
        let t = enumerate(&p, &h, &EnumerationLimits::default()).unwrap();
        assert_eq!(t.live_count(), 2);
        assert_eq!(t.trace(0, &h[0]).unwrap(), Some(0));
        let bad = vec![Word::generator_power(5, 1)];
        assert!(matches!(
            enumerate(&p, &bad, &EnumerationLimits::default()),
            Err(CosetError::InvalidSubgroupWord { index: 0, gen: 5 })
        ));
    }

    #[test]
    fn trace_and_dead_cosets() {
        let t = run("a b | a^2, b^3, (a*b)^2", Strategy::Felsch);
        assert_eq!(t.trace(3, &Word::empty()).unwrap(), Some(3));
        assert_eq!(t.trace(99, &Word::empty()), Err(CosetError::DeadCoset(99)));
        let partial = CosetTable::from_rows(1, &[vec![None, Some(0)]]);
        assert_eq!(partial.status(), TableStatus::InProgress);
        assert_eq!(
            partial.trace(0, &Word::generator_power(0, 1)).unwrap(),
            None
        );
        assert_eq!(partial.permutation_images(), Err(CosetError::NotClosed));
    }

    #[test]
    fn corrupted_table_fails_validation() {
        let p = pres("a b | a^2, b^3, (a*b)^2");
        let t = run("a b | a^2, b^3, (a*b)^2", Strategy::Felsch);
        assert!(t.validate(&p));
        let mut rows: Vec<Vec<Option<usize>>> = (0..t.live_count())
            .map(|c| (0..4).map(|x| t.entry(c, x)).collect())
            .collect();
        let old = rows[2][2].unwrap();
        rows[2][2] = Some((old + 1) % 6);
        assert!(!CosetTable::from_rows(2, &rows).validate(&p));
        let triv = run("a | a", Strategy::Felsch);
        assert!(triv.validate(&pres("a | a")));
    }

    #[test]
    fn limit_reports_exceeded() {
        let limits = EnumerationLimits {
            max_cosets: 10,
            strategy: Strategy::Felsch,
        };
        let t = enumerate(&pres("a b | a^2, b^3, (a*b)^5"), &[], &limits).unwrap();
        assert_eq!(t.status(), TableStatus::Exceeded);
        let zero = EnumerationLimits {
            max_cosets: 0,
            strategy: Strategy::Felsch,
        };
        assert_eq!(
            enumerate(&pres("a | a"), &[], &zero),
            Err(CosetError::InvalidLimits)
        );
    }

    #[test]
    fn infinite_group_exceeds() {
        let limits = EnumerationLimits {
            max_cosets: 500,
            strategy: Strategy::HltLookahead,
        };
        let t = enumerate(&pres("a b | a*b*a^-1*b^-1"), &[], &limits).unwrap();
        assert_eq!(t.status(), TableStatus::Exceeded);
    }

    #[test]
    fn permutation_images_of_s3() {
        let t = run("a b | a^2, b^3, (a*b)^2", Strategy::Felsch);
        let perms = t.permutation_images().unwrap();
        assert_eq!(perms.len(), 2);
        assert!(perms.iter().all(|p| p.degree() == 6));
        assert!(crate::perm::acts_regularly(&perms));
        let triv = run("a | a", Strategy::Felsch).permutation_images().unwrap();
        assert_eq!(triv, vec![Permutation::identity(1)]);
    }

    #[test]
    fn dump_format() {
        let t = run("a | a^2", Strategy::Felsch);
        assert_eq!(t.dump(), "cosets=2 gens=1\n2 2\n1 1\n");
    }

    #[test]
    fn standardized_tables_are_deterministic() {
        let a = run("a b | a^4, b^2, (a*b)^2", Strategy::Felsch);
        let b = run("a b | a^4, b^2, (a*b)^2", Strategy::Felsch);
        assert_eq!(a, b);
        let c = run("a b | a^4, b^2, (a*b)^2", Strategy::Hlt);
        // Standardisation makes the closed table independent of strategy.
        assert_eq!(a, c);
    }
}
