//! Dense linear algebra over GF(p) for small primes.

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Brings `rows` to reduced row echelon form in place, dropping zero rows.
/// Pivots are taken in the leftmost available column, so columns listed
/// first are the ones that get solved for. Returns the pivot column of each
/// remaining row.
pub(crate) fn row_reduce(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = inv_mod(rows[r][col], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + (p - f) * y) % p;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Rows kept in echelon form as they arrive. Each stored row has a leading
/// 1 at its pivot and zeros at the pivots of the rows stored before it.
pub(crate) struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub(crate) fn new(p: u64) -> Self {
        Echelon {
            p,
            rows: Vec::new(),
        }
    }

    /// Reduces `row` against the stored rows and keeps the remainder if it
    /// is nonzero.
    pub(crate) fn insert(&mut self, mut row: Vec<u64>) {
        let p = self.p;
        for (c, r) in &self.rows {
            let f = row[*c];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(r) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        let Some(c) = row.iter().position(|&x| x != 0) else {
            return;
        };
        let inv = inv_mod(row[c], p);
        for x in row.iter_mut() {
            *x = *x * inv % p;
        }
        self.rows.push((c, row));
    }

    /// The reduced row echelon form of everything inserted, with pivots as
    /// in [`row_reduce`].
    pub(crate) fn into_reduced(self) -> (Vec<Vec<u64>>, Vec<usize>) {
        let mut rows: Vec<Vec<u64>> = self.rows.into_iter().map(|(_, r)| r).collect();
        let pivots = row_reduce(&mut rows, self.p);
        (rows, pivots)
    }
}
