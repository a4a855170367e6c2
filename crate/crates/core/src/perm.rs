//! Permutations on `0..n` and a regularity test for permutation groups.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// Returns `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self` then `other` (points act on the right).
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut seen = vec![false; self.0.len()];
        let mut acc = BigUint::one();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            acc = acc.lcm(&BigUint::from(len));
        }
        acc
    }
}

/// True iff the group generated by `gens` acts transitively and no
/// nonidentity element fixes a point, i.e. the group order equals the
/// degree.
///
/// Semiregularity is tested through the centraliser: for a transitive
/// group, the map `0^g -> c^g` is well defined for every point `c` exactly
/// when point stabilisers are trivial.
pub fn acts_regularly(gens: &[Permutation]) -> bool {
    let Some(n) = gens.first().map(Permutation::degree) else {
        return true;
    };
    if gens.iter().any(|g| g.degree() != n) {
        return false;
    }
    if n == 0 {
        return true;
    }
    // Breadth-first spanning tree from point 0.
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                order.push(y);
            }
        }
    }
    if order.len() != n {
        return false;
    }
    let mut phi = vec![usize::MAX; n];
    for c in 0..n {
        phi.iter_mut().for_each(|v| *v = usize::MAX);
        phi[0] = c;
        for &x in &order {
            let fx = phi[x];
            for g in gens {
                let (y, fy) = (g.apply(x), g.apply(fx));
                if phi[y] == usize::MAX {
                    phi[y] = fy;
                } else if phi[y] != fy {
                    return false;
                }
            }
        }
    }
    true
}
