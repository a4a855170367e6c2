//! Smith normal form over the integers, abelian invariants of a
//! presentation, and the minimal number of generators modulo a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;
use crate::presentation::Presentation;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// Diagonal of the Smith normal form, with the unimodular transforms when
/// they were requested: `left * original * right = diag`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// `min(rows, cols)` nonnegative entries; each divides the next and
    /// zeros come last.
    pub diagonal: Vec<BigInt>,
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by repeated row and column reduction, always pivoting
/// on an entry of least nonzero absolute value.
pub fn smith_normal_form(m: &IntMatrix, keep_transforms: bool) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = keep_transforms.then(|| IntMatrix::identity(rows));
    let mut right = keep_transforms.then(|| IntMatrix::identity(cols));

    let k = rows.min(cols);
    for t in 0..k {
        while let Some((pi, pj)) = smallest_nonzero(&a, t) {
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some(l) = left.as_mut() {
                l.swap_rows(t, pi);
            }
            if let Some(r) = right.as_mut() {
                r.swap_cols(t, pj);
            }

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&pivot);
                a.row_sub(i, t, &q);
                if let Some(l) = left.as_mut() {
                    l.row_sub(i, t, &q);
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&pivot);
                a.col_sub(j, t, &q);
                if let Some(r) = right.as_mut() {
                    r.col_sub(j, t, &q);
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility.
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    a.row_sub(t, i, &minus_one);
                    if let Some(l) = left.as_mut() {
                        l.row_sub(t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(l) = left.as_mut() {
                l.negate_row(t);
            }
        }
    }

    SnfResult {
        diagonal: (0..k).map(|i| a[(i, i)].clone()).collect(),
        left,
        right,
    }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Torsion and free invariants of the abelianisation, as a divisibility
/// chain with `0` standing for a free cyclic factor. Trivial factors are
/// dropped.
pub fn abelian_invariants(p: &Presentation) -> Vec<BigInt> {
    let m = p.exponent_sum_matrix();
    let snf = smith_normal_form(&m, false);
    let mut inv: Vec<BigInt> = snf.diagonal.into_iter().filter(|d| !d.is_one()).collect();
    let free = p.num_generators() - m.rows().min(m.cols());
    inv.extend(std::iter::repeat_n(BigInt::zero(), free));
    inv
}

/// Order of the abelianisation, or `None` if it is infinite.
pub fn abelianization_order(p: &Presentation) -> Option<BigInt> {
    let inv = abelian_invariants(p);
    if inv.iter().any(Zero::is_zero) {
        None
    } else {
        Some(inv.iter().product())
    }
}

/// An abelian group `Z^n / L` written as a direct sum of cyclic factors,
/// together with the image of each standard generator.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    /// Orders of the cyclic factors, as in [`abelian_invariants`].
    pub invariants: Vec<BigInt>,
    /// `images[j][i]` is the coordinate of generator `j` in factor `i`,
    /// reduced modulo `invariants[i]` when that is nonzero.
    pub images: Vec<Vec<BigInt>>,
}

/// The abelian group with `ncols` generators and the given sparse integer
/// relations, each a list of `(column, coefficient)` pairs.
///
/// Columns with a unit coefficient are eliminated first so that only a
/// small dense remainder goes through [`smith_normal_form`].
pub fn sparse_abelian_quotient(ncols: usize, relations: &[Vec<(usize, i64)>]) -> AbelianQuotient {
    let mut rows: Vec<Option<BTreeMap<usize, BigInt>>> = relations
        .iter()
        .map(|r| {
            let mut m: BTreeMap<usize, BigInt> = BTreeMap::new();
            for &(j, v) in r {
                *m.entry(j).or_default() += v;
            }
            m.retain(|_, v| !v.is_zero());
            (!m.is_empty()).then_some(m)
        })
        .collect();
    let mut by_col: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &j in r.iter().flat_map(|m| m.keys()) {
            by_col[j].insert(i);
        }
    }
    // Each eliminated column with the relation that expresses it.
    let mut eliminated: Vec<(usize, BTreeMap<usize, BigInt>)> = Vec::new();
    let mut is_eliminated = vec![false; ncols];
    loop {
        // Sparsest row holding a unit entry.
        let pick = rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let r = r.as_ref()?;
                let (&j, _) = r.iter().find(|(_, v)| v.abs().is_one())?;
                Some((r.len(), i, j))
            })
            .min();
        let Some((_, pi, pj)) = pick else {
            break;
        };
        let pivot = rows[pi].take().expect("picked row is present");
        for &j in pivot.keys() {
            by_col[j].remove(&pi);
        }
        let unit = pivot[&pj].clone();
        let others: Vec<usize> = by_col[pj].iter().copied().collect();
        for i in others {
            let row = rows[i].as_mut().expect("indexed row is present");
            // The pivot is +-1, so it is its own inverse.
            let f = &row[&pj] * &unit;
            for (&j, v) in &pivot {
                let e = row.entry(j).or_default();
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(&j);
                    by_col[j].remove(&i);
                } else {
                    by_col[j].insert(i);
                }
            }
            if row.is_empty() {
                rows[i] = None;
            }
        }
        is_eliminated[pj] = true;
        eliminated.push((pj, pivot));
    }

    let remaining: Vec<usize> = (0..ncols).filter(|&j| !is_eliminated[j]).collect();
    let pos: BTreeMap<usize, usize> = remaining.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let dense: Vec<&BTreeMap<usize, BigInt>> = rows.iter().flatten().collect();
    let mut m = IntMatrix::zeros(dense.len(), remaining.len());
    for (i, r) in dense.iter().enumerate() {
        for (j, v) in r.iter() {
            m[(i, pos[j])] = v.clone();
        }
    }
    let snf = smith_normal_form(&m, true);
    let right = snf.right.expect("transforms were requested");
    // Coordinate i of the quotient is (x * right)_i modulo diagonal entry i
    // (free when past the diagonal).
    let factors: Vec<(usize, BigInt)> = (0..remaining.len())
        .filter_map(|i| {
            let d = snf.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero);
            (!d.is_one()).then_some((i, d))
        })
        .collect();
    let reduce = |v: BigInt, d: &BigInt| if d.is_zero() { v } else { v.mod_floor(d) };

    let mut images: Vec<Vec<BigInt>> = vec![Vec::new(); ncols];
    for (k, &j) in remaining.iter().enumerate() {
        images[j] = factors
            .iter()
            .map(|(i, d)| reduce(right[(k, *i)].clone(), d))
            .collect();
    }
    for (pj, pivot) in eliminated.iter().rev() {
        let unit = &pivot[pj];
        let mut img = vec![BigInt::zero(); factors.len()];
        for (&j, v) in pivot {
            if j == *pj {
                continue;
            }
            for (t, x) in img.iter_mut().zip(&images[j]) {
                *t -= unit * v * x;
            }
        }
        images[*pj] = img
            .into_iter()
            .zip(&factors)
            .map(|(v, (_, d))| reduce(v, d))
            .collect();
    }
    AbelianQuotient {
        invariants: factors.into_iter().map(|(_, d)| d).collect(),
        images,
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Rank over GF(p) of an integer matrix.
pub fn rank_mod_p(m: &IntMatrix, prime: u64) -> Result<usize, AbelianError> {
    if !is_prime(prime) {
        return Err(AbelianError::NotPrime(prime));
    }
    let pb = BigInt::from(prime);
    let mut rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let r = m[(i, j)].mod_floor(&pb);
                    u64::try_from(r).expect("residue below prime")
                })
                .collect()
        })
        .collect();
    Ok(crate::gf::row_reduce(&mut rows, prime).len())
}

/// Number of generators minus the GF(p)-rank of the exponent-sum matrix,
/// i.e. the rank of `G / [G,G] G^p`. For a finite p-group this is the
/// minimal number of generators.
pub fn minimal_generators_mod_p(p: &Presentation, prime: u64) -> Result<usize, AbelianError> {
    let r = rank_mod_p(&p.exponent_sum_matrix(), prime)?;
    Ok(p.num_generators() - r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = IntMatrix::from_rows_i64(rows.len(), rows[0].len(), rows);
        smith_normal_form(&m, false)
            .diagonal
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(
            diag(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            vec![1, 1, 1]
        );
        assert_eq!(
            diag(&[vec![2, 0, 0], vec![2, 2, 2], vec![2, -2, 2]]),
            vec![2, 2, 4]
        );
        assert_eq!(diag(&[vec![0]]), vec![0]);
        assert_eq!(diag(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(diag(&[vec![0, 0, 0], vec![0, 0, 4]]), vec![4, 0]);
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let rows = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let m = IntMatrix::from_rows_i64(3, 3, &rows);
        let s = smith_normal_form(&m, true);
        let d = s
            .left
            .as_ref()
            .unwrap()
            .mul(&m)
            .mul(s.right.as_ref().unwrap());
        assert!(d.is_diagonal());
        let got: Vec<BigInt> = (0..3).map(|i| d[(i, i)].clone()).collect();
        assert_eq!(got, s.diagonal);
        let expect: Vec<BigInt> = [2, 6, 12].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(s.diagonal, expect);
    }

    fn inv(text: &str) -> Vec<i64> {
        abelian_invariants(&Presentation::parse(text).unwrap())
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn invariants_examples() {
        assert_eq!(
            inv("a b c | b^-1*a*c*a*b*c^-1, c^2*a*b^2*a, a*b^-1*c*a*c*b^-1"),
            vec![2, 2, 4]
        );
        assert_eq!(inv("a | a^6"), vec![6]);
        assert_eq!(inv("a b |"), vec![0, 0]);
        assert_eq!(inv("a | a"), Vec::<i64>::new());
        assert_eq!(inv("a b | a^2, b^3, (a*b)^2"), vec![2]);
    }

    #[test]
    fn generators_mod_p() {
        let g1 = Presentation::parse("a b c | b^-1*a*c*a*b*c^-1, c^2*a*b^2*a, a*b^-1*c*a*c*b^-1")
            .unwrap();
        assert_eq!(minimal_generators_mod_p(&g1, 2), Ok(3));
        let s3 = Presentation::parse("a b | a^2, b^3, (a*b)^2").unwrap();
        assert_eq!(minimal_generators_mod_p(&s3, 2), Ok(1));
        let triv = Presentation::parse("a | a").unwrap();
        assert_eq!(minimal_generators_mod_p(&triv, 2), Ok(0));
        assert_eq!(
            minimal_generators_mod_p(&triv, 4),
            Err(AbelianError::NotPrime(4))
        );
    }
}
