use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{enumerate, CosetError, CosetTable, EnumerationLimits};
use crate::abelian::{sparse_abelian_quotient, AbelianQuotient};
use crate::presentation::{free_reduce, Letter, Presentation, Word};

/// Reidemeister-Schreier data for a closed coset table: coset
/// representatives from a breadth-first spanning tree, and one Schreier
/// generator `u_c g u_{c^g}^-1` per table entry off the tree.
struct Schreier {
    reps: Vec<Word>,
    /// Column of Schreier generator `(c, g)` at index `c * d + g`, or `None`
    /// on tree edges, where it is trivial.
    column: Vec<Option<usize>>,
    ncols: usize,
}

impl Schreier {
    fn new(table: &CosetTable) -> Result<Self, CosetError> {
        let (n, d) = (table.live_count(), table.num_generators());
        let mut reps: Vec<Option<Word>> = vec![None; n];
        reps[0] = Some(Word::empty());
        let mut tree = vec![false; n * d];
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for x in 0..2 * d {
                let e = table.entry(c, x).ok_or(CosetError::NotClosed)?;
                if reps[e].is_some() {
                    continue;
                }
                let u = reps[c]
                    .as_ref()
                    .expect("visited coset has a representative");
                reps[e] = Some(u.concat(&Word::from_letters(vec![Letter::from_code(x)])));
                queue.push_back(e);
                let g = x / 2;
                tree[if x % 2 == 0 { c * d + g } else { e * d + g }] = true;
            }
        }
        let reps = reps
            .into_iter()
            .collect::<Option<Vec<Word>>>()
            .ok_or(CosetError::NotClosed)?;
        let mut ncols = 0;
        let column = tree
            .iter()
            .map(|&t| {
                (!t).then(|| {
                    ncols += 1;
                    ncols - 1
                })
            })
            .collect();
        Ok(Schreier {
            reps,
            column,
            ncols,
        })
    }

    /// The word `w` read from coset `c`, rewritten as an exponent-sum
    /// vector over the Schreier generators.
    fn rewrite(
        &self,
        table: &CosetTable,
        c: usize,
        w: &Word,
    ) -> Result<Vec<(usize, i64)>, CosetError> {
        let d = table.num_generators();
        let mut row = Vec::new();
        let mut cur = c;
        for l in w.letters() {
            let next = table.entry(cur, l.code()).ok_or(CosetError::NotClosed)?;
            let var = if l.is_inverse() {
                next * d + l.gen()
            } else {
                cur * d + l.gen()
            };
            if let Some(col) = self.column[var] {
                row.push((col, l.sign()));
            }
            cur = next;
        }
        Ok(row)
    }

    fn quotient(
        &self,
        p: &Presentation,
        table: &CosetTable,
    ) -> Result<AbelianQuotient, CosetError> {
        let mut relations = Vec::with_capacity(table.live_count() * p.relators().len());
        for c in 0..table.live_count() {
            for r in p.relators() {
                relations.push(self.rewrite(table, c, r)?);
            }
        }
        Ok(sparse_abelian_quotient(self.ncols, &relations))
    }
}

fn check_table(p: &Presentation, table: &CosetTable) -> Result<(), CosetError> {
    if !table.is_closed() || table.num_generators() != p.num_generators() {
        return Err(CosetError::NotClosed);
    }
    Ok(())
}

/// Abelian invariants of `H / [H, H]`, where `table` is a closed coset
/// table of the subgroup `H` of the group presented by `p`.
///
/// The Reidemeister-Schreier presentation of `H` is read off the table and
/// abelianised. For a cyclic `H` the product of the invariants is `|H|`.
pub fn schreier_abelian_invariants(
    p: &Presentation,
    table: &CosetTable,
) -> Result<Vec<BigInt>, CosetError> {
    check_table(p, table)?;
    let schreier = Schreier::new(table)?;
    Ok(schreier.quotient(p, table)?.invariants)
}

/// For a closed coset table of `H = <h>`, returns relators that hold in the
/// group: `h^m` with `m = |H|`, and for every Schreier generator the
/// identity `u_c g u_{c^g}^-1 = h^t` it satisfies. Returns `None` when `H`
/// is infinite.
fn cyclic_subgroup_relators(
    p: &Presentation,
    table: &CosetTable,
    h: &Word,
) -> Result<Option<Vec<Word>>, CosetError> {
    check_table(p, table)?;
    let schreier = Schreier::new(table)?;
    let q = schreier.quotient(p, table)?;
    let order = match q.invariants.as_slice() {
        [] => BigInt::one(),
        [m] if !m.is_zero() => m.clone(),
        _ => return Ok(None),
    };
    let Some(m) = order.to_i64() else {
        return Ok(None);
    };
    // Coordinate of h itself, inverted so that h maps to 1.
    let scale = if m == 1 {
        BigInt::zero()
    } else {
        let mut h_coord = BigInt::zero();
        for (col, sign) in schreier.rewrite(table, 0, h)? {
            h_coord += &q.images[col][0] * sign;
        }
        let g = h_coord.mod_floor(&order).extended_gcd(&order);
        if !g.gcd.is_one() {
            return Ok(None);
        }
        g.x
    };

    let d = table.num_generators();
    let mut relators = vec![h.pow(m)];
    for c in 0..table.live_count() {
        for g in 0..d {
            let Some(col) = schreier.column[c * d + g] else {
                continue;
            };
            let t = if m == 1 {
                0
            } else {
                (&q.images[col][0] * &scale)
                    .mod_floor(&order)
                    .to_i64()
                    .expect("residue below a 64-bit order")
            };
            let e = table.entry(c, 2 * g).ok_or(CosetError::NotClosed)?;
            let w = schreier.reps[c]
                .concat(&Word::generator_power(g, 1))
                .concat(&schreier.reps[e].inverse())
                .concat(&h.pow(-t));
            let w = free_reduce(w.letters());
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    Ok(Some(relators))
}

/// Enumerates the cosets of the trivial subgroup, i.e. the elements of the
/// group.
///
/// When the direct enumeration runs out of storage, each generator `g` is
/// tried in turn: if the cosets of `<g>` close and `<g>` is finite, the
/// Reidemeister-Schreier rewriting of the table expresses every Schreier
/// generator as a power of `g`. Those identities hold in the group, and with
/// them appended the enumeration closes at once. The returned table always
/// satisfies the relators of `p` itself.
pub fn enumerate_group(
    p: &Presentation,
    limits: &EnumerationLimits,
) -> Result<CosetTable, CosetError> {
    let direct = enumerate(p, &[], limits)?;
    if direct.is_closed() {
        return Ok(direct);
    }
    for g in 0..p.num_generators() {
        let h = Word::generator_power(g, 1);
        let table = enumerate(p, std::slice::from_ref(&h), limits)?;
        if !table.is_closed() {
            continue;
        }
        let Some(extra) = cyclic_subgroup_relators(p, &table, &h)? else {
            continue;
        };
        let mut relators = p.relators().to_vec();
        relators.extend(extra);
        let augmented = Presentation::new(p.generator_names().to_vec(), relators)
            .expect("words over existing generators are valid relators");
        let table = enumerate(&augmented, &[], limits)?;
        if table.is_closed() {
            return Ok(table);
        }
    }
    Ok(direct)
}
