use std::cmp::Ordering;

use super::{shortlex, CompletionLimits, CompletionStatus, Limit, RewritingSystem};
use crate::presentation::Presentation;

/// Critical pairs gathered per pass before they are turned into rules.
const PASS_BATCH: usize = 256;

/// Knuth-Bendix completion of the presentation's relators together with
/// the free-reduction rules `x x^-1 -> 1`.
///
/// Each pass walks the rules not yet overlapped, collects the critical
/// pairs that fail to resolve, adds them as rules shortest first, and then
/// interreduces. When a limit is hit, the partial system is returned with
/// status [`CompletionStatus::Exceeded`]; its rules still hold in the group.
pub fn complete(p: &Presentation, limits: &CompletionLimits) -> RewritingSystem {
    let mut rs = RewritingSystem::empty(p.generator_names().to_vec());
    for x in 0..rs.alphabet as u32 {
        rs.push_rule(vec![x, x ^ 1], Vec::new());
    }
    let mut equations: Vec<(Vec<u32>, Vec<u32>)> = p
        .relators()
        .iter()
        .map(|r| {
            let codes: Vec<u32> = r.letters().iter().map(|l| l.code() as u32).collect();
            // r = uv becomes u = v^-1.
            let half = codes.len().div_ceil(2);
            let u = codes[..half].to_vec();
            let v_inv = codes[half..].iter().rev().map(|&x| x ^ 1).collect();
            (u, v_inv)
        })
        .collect();

    let mut frontier = 0usize;
    let mut passes = 0usize;
    loop {
        if let Err(limit) = add_equations(&mut rs, &mut equations, limits) {
            rs.status = CompletionStatus::Exceeded(limit);
            return rs;
        }
        if let Err(limit) = interreduce(&mut rs, &mut frontier, limits) {
            rs.status = CompletionStatus::Exceeded(limit);
            return rs;
        }
        if frontier == rs.rules.len() {
            rs.compact();
            rs.status = CompletionStatus::Confluent;
            return rs;
        }
        passes += 1;
        if passes > limits.max_passes {
            rs.status = CompletionStatus::Exceeded(Limit::Passes);
            return rs;
        }
        while frontier < rs.rules.len() && equations.len() < PASS_BATCH {
            if rs.rules[frontier].alive {
                rs.critical_pairs(frontier, |_, left, right| {
                    let (a, b) = (rs.reduce_codes(&left), rs.reduce_codes(&right));
                    if a != b {
                        equations.push((a, b));
                    }
                });
            }
            frontier += 1;
        }
    }
}

/// Adds each equation as an oriented rule, shortest pairs first and in
/// discovery order within a length.
fn add_equations(
    rs: &mut RewritingSystem,
    equations: &mut Vec<(Vec<u32>, Vec<u32>)>,
    limits: &CompletionLimits,
) -> Result<(), Limit> {
    equations.sort_by_key(|(a, b)| a.len() + b.len());
    for (a, b) in equations.drain(..) {
        let (a, b) = (rs.reduce_codes(&a), rs.reduce_codes(&b));
        let (lhs, rhs) = match shortlex(&a, &b) {
            Ordering::Equal => continue,
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
        };
        if lhs.len() > limits.max_len {
            return Err(Limit::Length);
        }
        rs.push_rule(lhs, rhs);
        if rs.num_rules() > limits.max_rules {
            return Err(Limit::Rules);
        }
    }
    Ok(())
}

/// Removes rules whose left side contains another left side (they come
/// back as new rules), and brings every right side to irreducible form.
fn interreduce(
    rs: &mut RewritingSystem,
    frontier: &mut usize,
    limits: &CompletionLimits,
) -> Result<(), Limit> {
    loop {
        let mut readd = Vec::new();
        for i in 0..rs.rules.len() {
            if rs.rules[i].alive && rs.lhs_contains_other(i) {
                readd.push((rs.rules[i].lhs.clone(), rs.rules[i].rhs.clone()));
                rs.kill_rule(i);
            }
        }
        for i in 0..rs.rules.len() {
            if rs.rules[i].alive {
                let rhs = rs.reduce_codes(&rs.rules[i].rhs);
                rs.rules[i].rhs = rhs;
            }
        }
        if readd.is_empty() {
            break;
        }
        add_equations(rs, &mut readd, limits)?;
    }
    // Keep dead rules from piling up; the frontier moves with the renumbering.
    if rs.rules.len() > 2 * rs.num_rules() + 1024 {
        let done = rs.rules[..*frontier].iter().filter(|r| r.alive).count();
        rs.compact();
        *frontier = done;
    }
    Ok(())
}

impl RewritingSystem {
    /// True iff some other live left side occurs inside rule `i`'s.
    fn lhs_contains_other(&self, i: usize) -> bool {
        let l = &self.rules[i].lhs;
        (0..l.len()).any(|s| {
            let mut node = super::Trie::ROOT;
            for (t, &x) in l[s..].iter().enumerate() {
                let Some(c) = self.fwd.child(node, x) else {
                    return false;
                };
                node = c;
                if let Some(j) = self.fwd.terminal(node) {
                    if j != i && !(s == 0 && t + 1 == l.len()) {
                        return true;
                    }
                }
            }
            false
        })
    }
}
