//! Schur multiplier triviality for finite p-groups, and the descendant
//! filters used to prune the search for 2-groups with trivial multiplier.
//!
//! For a d-generator p-group `G = F/R` the p-multiplicator
//! `R/[R,F]R^p` is elementary abelian of rank `d + d(M(G))`, so `M(G)` is
//! trivial exactly when that rank equals `d`.

use num_bigint::BigUint;

use crate::coset::{enumerate_group, CosetError, EnumerationLimits};
use crate::pquotient::{p_cover, p_quotient_with_limits, PcPresentation, PqError, PqLimits};
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MultiplierVerdict {
    /// Rank of the p-multiplicator `R/[R,F]R^p`.
    pub multiplicator_rank: usize,
    /// Minimal number of generators of the group.
    pub d: usize,
    pub trivial: bool,
    /// Invariant factors of the p-multiplicator (all equal to p).
    pub invariants_of_multiplicator: Vec<u64>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum MultiplierError {
    #[error(transparent)]
    PQuotient(#[from] PqError),
    #[error(transparent)]
    Enumeration(#[from] CosetError),
    #[error("p-quotient did not terminate by class {0}")]
    Incomplete(usize),
    #[error("coset enumeration ran out of space; the group order is unknown")]
    OrderUnknown,
    #[error("group of order {order} is not a p-group (largest p-quotient has order {quotient})")]
    NotPGroup { order: usize, quotient: BigUint },
}

/// Reads the verdict off the p-cover of a complete, consistent pc
/// presentation of a finite p-group.
pub fn multiplier_of_pc(pc: &PcPresentation) -> Result<MultiplierVerdict, PqError> {
    let cover = p_cover(pc)?;
    let rank = cover.num_generators() - pc.num_generators();
    let d = pc.rank();
    Ok(MultiplierVerdict {
        multiplicator_rank: rank,
        d,
        trivial: rank == d,
        invariants_of_multiplicator: vec![pc.prime() as u64; rank],
    })
}

/// Decides whether the group presented by `p` has trivial Schur
/// multiplier. The group must be a finite `prime`-group: its order from
/// coset enumeration has to match its largest `prime`-quotient.
pub fn multiplier_is_trivial(
    p: &Presentation,
    prime: u64,
) -> Result<MultiplierVerdict, MultiplierError> {
    let limits = PqLimits::default();
    let pq = p_quotient_with_limits(p, prime, &limits)?;
    if !pq.complete {
        return Err(MultiplierError::Incomplete(pq.class));
    }
    let table = enumerate_group(p, &EnumerationLimits::default())?;
    if !table.is_closed() {
        return Err(MultiplierError::OrderUnknown);
    }
    let quotient = pq.order();
    if BigUint::from(table.live_count()) != quotient {
        return Err(MultiplierError::NotPGroup {
            order: table.live_count(),
            quotient,
        });
    }
    Ok(multiplier_of_pc(&pq.pc)?)
}

/// Input to the descendant filters: a candidate parent `G` of a group `E`
/// and the invariant factors of `M(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterInput {
    pub order_e: u64,
    pub order_g: u64,
    pub multiplier_invariants: Vec<u64>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("{0} is not a power of 2 above 1")]
    NotTwoPower(u64),
    #[error("order {order_g} does not divide order {order_e}")]
    OrderNotDividing { order_e: u64, order_g: u64 },
}

/// `(log2 |E|, log2 |G|, number of invariants equal to 2, number equal to 4,
/// number above 4)`.
fn shape(f: &FilterInput) -> Result<(u32, u32, usize, usize, usize), FilterError> {
    let log2 = |x: u64| {
        if x.is_power_of_two() {
            Ok(x.trailing_zeros())
        } else {
            Err(FilterError::NotTwoPower(x))
        }
    };
    let e = log2(f.order_e)?;
    let n = log2(f.order_g)?;
    if n > e {
        return Err(FilterError::OrderNotDividing {
            order_e: f.order_e,
            order_g: f.order_g,
        });
    }
    let (mut twos, mut fours, mut larger) = (0, 0, 0);
    for &x in &f.multiplier_invariants {
        match log2(x)? {
            0 => return Err(FilterError::NotTwoPower(x)),
            1 => twos += 1,
            2 => fours += 1,
            _ => larger += 1,
        }
    }
    Ok((e, n, twos, fours, larger))
}

/// Whether `G` can be the parent of an immediate descendant `E` with
/// trivial multiplier: `M(G)` must embed in the elementary abelian last
/// layer of `E`, so `M(G) = Z_2^l` with `l <= log2|E| - log2|G|`.
pub fn descendant_filter_lemma23(f: &FilterInput) -> Result<bool, FilterError> {
    let (e, n, twos, fours, larger) = shape(f)?;
    Ok(fours == 0 && larger == 0 && twos as i64 <= e as i64 - n as i64)
}

/// Whether `G` can be the parent of an immediate descendant `E` with
/// `M(E) = Z_2`: then `|M(G)| <= 2 |E| / |G|` and `M(G)` is either
/// `Z_2^l` or `Z_4 x Z_2^l`.
pub fn descendant_filter_thm24(f: &FilterInput) -> Result<bool, FilterError> {
    let (e, n, twos, fours, larger) = shape(f)?;
    let budget = e as i64 + 1 - n as i64;
    Ok(larger == 0
        && match fours {
            0 => twos as i64 <= budget,
            1 => twos as i64 + 2 <= budget,
            _ => false,
        })
}
