//! Power-commutator presentations of the quotients `G / P_i(G)` of the
//! lower exponent-p central series, built by the p-quotient algorithm.
//!
//! Generators are `a1, ..., an` (zero-based `0..n` in the API). A normal
//! word is an exponent vector with entries in `0..p`, read as
//! `a1^e1 * a2^e2 * ... * an^en`.

mod step;

pub use step::{
    p_cover, p_cover_with_cap, p_quotient, p_quotient_with_limits, PqError, PqLimits, PqResult,
};

use std::fmt::Write;

/// Sparse normal word: `(generator, exponent)` pairs in increasing
/// generator order with exponents in `1..p`.
pub type SparseWord = Vec<(usize, u32)>;

/// How a generator was introduced.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definition {
    /// Image of the given generator of the defining presentation.
    Image(usize),
    /// Its power relation `a_i^p = w * a_new`.
    Power(usize),
    /// Its commutator relation `[a_j, a_i] = w * a_new`, stored as `(j, i)`.
    Commutator(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    prime: u32,
    weights: Vec<usize>,
    /// `power[i]` is the normal word equal to `a_i^p`.
    power: Vec<SparseWord>,
    /// `comm[j][i]` for `j > i` is the normal word equal to `[a_j, a_i]`.
    comm: Vec<Vec<SparseWord>>,
    definitions: Vec<Definition>,
}

/// A consistency test whose two evaluations disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// The test word, e.g. `a3*a2*a1` or `a2^2*a1`.
    pub test: String,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

impl PcPresentation {
    /// The trivial group.
    pub fn trivial(prime: u32) -> Self {
        PcPresentation {
            prime,
            weights: Vec::new(),
            power: Vec::new(),
            comm: Vec::new(),
            definitions: Vec::new(),
        }
    }

    /// A presentation with the given relations. `power[i]` is the word for
    /// `a_i^p`, `commutators` lists `(j, i, w)` meaning `[a_j, a_i] = w`;
    /// unlisted commutators are trivial. Words are given as
    /// `(generator, exponent)` pairs and must only involve generators of
    /// higher index than the left side.
    pub fn from_relations(
        prime: u32,
        weights: Vec<usize>,
        definitions: Vec<Definition>,
        power: Vec<SparseWord>,
        commutators: &[(usize, usize, SparseWord)],
    ) -> Result<Self, PqError> {
        let n = weights.len();
        if power.len() != n || definitions.len() != n {
            return Err(PqError::Malformed(
                "one power word and definition per generator".into(),
            ));
        }
        let mut pc = PcPresentation {
            prime,
            weights,
            power,
            comm: (0..n).map(|j| vec![Vec::new(); j]).collect(),
            definitions,
        };
        for (j, i, w) in commutators {
            if !(*i < *j && *j < n) {
                return Err(PqError::Malformed(format!("commutator [{j},{i}]")));
            }
            pc.comm[*j][*i] = w.clone();
        }
        let bad_word = |w: &SparseWord, above: usize| {
            w.windows(2).any(|p| p[0].0 >= p[1].0)
                || w.iter()
                    .any(|&(g, e)| g <= above || g >= n || e == 0 || e >= prime)
        };
        for i in 0..n {
            if bad_word(&pc.power[i], i) {
                return Err(PqError::Malformed(format!("power word of a{}", i + 1)));
            }
            for k in 0..i {
                if bad_word(&pc.comm[i][k], i) {
                    return Err(PqError::Malformed(format!(
                        "commutator [a{},a{}]",
                        i + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(pc)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn num_generators(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.definitions
    }

    pub fn power_word(&self, i: usize) -> &SparseWord {
        &self.power[i]
    }

    /// `[a_j, a_i]` for `j > i`.
    pub fn commutator_word(&self, j: usize, i: usize) -> &SparseWord {
        &self.comm[j][i]
    }

    /// Exponent-p class: the largest weight.
    pub fn class(&self) -> usize {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Number of generators of each weight `1..=class`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class()];
        for &w in &self.weights {
            sizes[w - 1] += 1;
        }
        sizes
    }

    /// Number of weight-one generators, i.e. the rank of the Frattini
    /// quotient.
    pub fn rank(&self) -> usize {
        self.weights.iter().filter(|&&w| w == 1).count()
    }

    /// `log_p` of the orders `|G/P_1|, |G/P_2|, ...`.
    pub fn series_exponents(&self) -> Vec<usize> {
        self.layer_sizes()
            .iter()
            .scan(0, |acc, &s| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    }

    /// Orders `|G/P_1|, |G/P_2|, ..., |G/P_c|`.
    pub fn series_orders(&self) -> Vec<num_bigint::BigUint> {
        self.series_exponents()
            .iter()
            .map(|&e| num_bigint::BigUint::from(self.prime).pow(e as u32))
            .collect()
    }

    /// Multiplies the normal word `e` on the right by the generators on
    /// `stack`, taken from the top, by collection from the left.
    fn collect_stack(&self, e: &mut [u32], stack: &mut Vec<usize>) {
        let n = e.len();
        let p = self.prime;
        let mut push: Vec<usize> = Vec::new();
        while let Some(i) = stack.pop() {
            push.clear();
            if e[i] + 1 == p {
                // prefix * a_i^p * (suffix)^{a_i}
                e[i] = 0;
                for &(g, x) in &self.power[i] {
                    push.extend(std::iter::repeat_n(g, x as usize));
                }
                self.conjugate_suffix(e, i, i + 1, &mut push);
            } else {
                e[i] += 1;
                // The leading part of the suffix commuting with a_i stays.
                if let Some(j0) = (i + 1..n).find(|&j| e[j] != 0 && !self.comm[j][i].is_empty()) {
                    self.conjugate_suffix(e, i, j0, &mut push);
                }
            }
            stack.extend(push.iter().rev());
        }
    }

    /// Moves `a_{from}^{e_from} ... a_n^{e_n}` out of `e` into `push` as the
    /// letters of its conjugate by `a_i`.
    fn conjugate_suffix(&self, e: &mut [u32], i: usize, from: usize, push: &mut Vec<usize>) {
        for (j, ej) in e.iter_mut().enumerate().skip(from) {
            for _ in 0..*ej {
                push.push(j);
                for &(g, x) in &self.comm[j][i] {
                    push.extend(std::iter::repeat_n(g, x as usize));
                }
            }
            *ej = 0;
        }
    }

    /// `e * a_i1 * a_i2 * ...` for the generator sequence `gens`.
    pub(crate) fn mul_gens(&self, e: &mut [u32], gens: &[usize]) {
        let mut stack: Vec<usize> = gens.iter().rev().copied().collect();
        self.collect_stack(e, &mut stack);
    }

    /// `e * w` for a normal word `w`.
    pub fn mul(&self, e: &mut [u32], w: &[u32]) {
        let gens = word_letters(w);
        self.mul_gens(e, &gens);
    }

    /// The inverse of a normal word.
    pub fn inverse(&self, w: &[u32]) -> Vec<u32> {
        let n = self.num_generators();
        let mut acc = w.to_vec();
        let mut inv = vec![0u32; n];
        while let Some(i) = acc.iter().position(|&x| x != 0) {
            let k = (self.prime - acc[i]) as usize;
            let gens = vec![i; k];
            self.mul_gens(&mut acc, &gens);
            self.mul_gens(&mut inv, &gens);
        }
        inv
    }

    /// Normal form of `a_{g1}^{x1} a_{g2}^{x2} ...`; exponents may be
    /// negative.
    pub fn collect(&self, word: &[(usize, i64)]) -> Vec<u32> {
        let n = self.num_generators();
        let mut e = vec![0u32; n];
        for &(g, x) in word {
            let k = x.unsigned_abs() as usize;
            if x >= 0 {
                self.mul_gens(&mut e, &vec![g; k]);
            } else {
                let mut unit = vec![0u32; n];
                unit[g] = 1;
                let inv = self.inverse(&unit);
                for _ in 0..k {
                    self.mul(&mut e, &inv);
                }
            }
        }
        e
    }

    fn unit(&self, i: usize) -> Vec<u32> {
        let mut e = vec![0u32; self.num_generators()];
        e[i] = 1;
        e
    }

    fn dense(&self, w: &SparseWord) -> Vec<u32> {
        let mut e = vec![0u32; self.num_generators()];
        for &(g, x) in w {
            e[g] = x;
        }
        e
    }

    /// Evaluates each consistency test word both ways, calling
    /// `f(label, left, right)`. Tests only involve generators below
    /// `upto` and have total weight at most `max_weight`, where `a_i^p`
    /// counts as weight `w_i + 1`.
    pub(crate) fn consistency_tests(
        &self,
        upto: usize,
        max_weight: usize,
        mut f: impl FnMut(&dyn Fn() -> String, Vec<u32>, Vec<u32>),
    ) {
        let p = self.prime as usize;
        let w = &self.weights;
        // a_j a_i for j > i as normal words.
        let prod: Vec<Vec<Vec<u32>>> = (0..upto)
            .map(|j| {
                (0..j)
                    .map(|i| {
                        let mut e = self.unit(j);
                        self.mul_gens(&mut e, &[i]);
                        e
                    })
                    .collect()
            })
            .collect();
        for k in 0..upto {
            for j in 0..k {
                for i in 0..j {
                    if w[i] + w[j] + w[k] > max_weight {
                        continue;
                    }
                    let mut left = self.unit(k);
                    self.mul_gens(&mut left, &[j, i]);
                    let mut right = self.unit(k);
                    self.mul(&mut right, &prod[j][i]);
                    f(&|| format!("a{}*a{}*a{}", k + 1, j + 1, i + 1), left, right);
                }
            }
        }
        for j in 0..upto {
            for i in 0..j {
                if w[i] + w[j] + 1 > max_weight {
                    continue;
                }
                // (a_j^p) a_i = a_j^(p-1) (a_j a_i)
                let mut left = self.dense(&self.power[j]);
                self.mul_gens(&mut left, &[i]);
                let mut right = vec![0u32; self.num_generators()];
                self.mul_gens(&mut right, &vec![j; p - 1]);
                self.mul(&mut right, &prod[j][i]);
                f(&|| format!("a{}^{p}*a{}", j + 1, i + 1), left, right);

                // a_j (a_i^p) = (a_j a_i) a_i^(p-1)
                let mut left = self.unit(j);
                self.mul(&mut left, &self.dense(&self.power[i]));
                let mut right = prod[j][i].clone();
                self.mul_gens(&mut right, &vec![i; p - 1]);
                f(&|| format!("a{}*a{}^{p}", j + 1, i + 1), left, right);
            }
        }
        for i in 0..upto {
            // a_i (a_i^p) = (a_i^p) a_i
            let mut left = self.unit(i);
            self.mul(&mut left, &self.dense(&self.power[i]));
            let mut right = self.dense(&self.power[i]);
            self.mul_gens(&mut right, &[i]);
            f(&|| format!("a{}^{}", i + 1, p + 1), left, right);
        }
    }

    /// The consistency tests that fail; empty iff the presentation is
    /// consistent, i.e. its group has order `p^n`.
    pub fn consistency_check(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.consistency_tests(self.num_generators(), usize::MAX, |label, left, right| {
            if left != right {
                out.push(Violation {
                    test: label(),
                    left,
                    right,
                });
            }
        });
        out
    }

    /// Text dump: `p=<p> n=<n> class=<c>`, then the nontrivial power and
    /// commutator relations.
    pub fn dump(&self) -> String {
        let n = self.num_generators();
        let mut out = format!("p={} n={} class={}\n", self.prime, n, self.class());
        for i in 0..n {
            if !self.power[i].is_empty() {
                let _ = writeln!(
                    out,
                    "a{}^{} = {}",
                    i + 1,
                    self.prime,
                    format_sparse(&self.power[i])
                );
            }
        }
        for j in 0..n {
            for i in 0..j {
                if !self.comm[j][i].is_empty() {
                    let _ = writeln!(
                        out,
                        "[a{},a{}] = {}",
                        j + 1,
                        i + 1,
                        format_sparse(&self.comm[j][i])
                    );
                }
            }
        }
        out
    }
}

/// The generator sequence spelling a normal word.
fn word_letters(w: &[u32]) -> Vec<usize> {
    w.iter()
        .enumerate()
        .flat_map(|(g, &x)| std::iter::repeat_n(g, x as usize))
        .collect()
}

pub(crate) fn sparse(e: &[u32]) -> SparseWord {
    e.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(g, &x)| (g, x))
        .collect()
}

/// `a1*a3^2` style; the empty word is `1`.
pub fn format_normal_word(e: &[u32]) -> String {
    format_sparse(&sparse(e))
}

fn format_sparse(w: &SparseWord) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter()
        .map(|&(g, x)| {
            if x == 1 {
                format!("a{}", g + 1)
            } else {
                format!("a{}^{}", g + 1, x)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}
