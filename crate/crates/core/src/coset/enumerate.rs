use super::{CosetError, CosetTable, EnumerationLimits, Strategy, TableStatus, UNDEF};
use crate::presentation::{Presentation, Word};

/// Enumerates the cosets of the subgroup generated by `subgroup_gens`.
///
/// On closure the table is standardised: cosets are renumbered in
/// breadth-first order from the subgroup coset, scanning letters by code.
/// When storage runs out the returned table has status
/// [`TableStatus::Exceeded`] and makes no claim about the index.
pub fn enumerate(
    p: &Presentation,
    subgroup_gens: &[Word],
    limits: &EnumerationLimits,
) -> Result<CosetTable, CosetError> {
    if limits.max_cosets < 1 {
        return Err(CosetError::InvalidLimits);
    }
    for (index, w) in subgroup_gens.iter().enumerate() {
        if let Some(l) = w.letters().iter().find(|l| l.gen() >= p.num_generators()) {
            return Err(CosetError::InvalidSubgroupWord {
                index,
                gen: l.gen(),
            });
        }
    }
    let d = p.num_generators();
    if d == 0 {
        return Ok(CosetTable::from_raw(0, Vec::new(), TableStatus::Closed));
    }
    let mut e = Enumerator::new(p, limits);
    let subgroup: Vec<Vec<usize>> = subgroup_gens
        .iter()
        .filter(|w| !w.is_empty())
        .map(Word::codes)
        .collect();
    let closed = match limits.strategy {
        Strategy::Felsch => e.felsch(&subgroup),
        Strategy::Hlt => e.hlt(&subgroup, false),
        Strategy::HltLookahead => e.hlt(&subgroup, true),
    };
    Ok(if closed {
        e.standardize()
    } else {
        e.compact();
        CosetTable::from_raw(d, e.table, TableStatus::Exceeded)
    })
}

const PREFERRED_CAP: usize = 256;

/// Preferred definitions are only used while the table holds fewer than
/// this many rows per coset already passed by the first-hole pointer.
fn fill_factor(cols: usize) -> usize {
    5 * (cols / 2 + 2) / 4
}

struct Enumerator {
    cols: usize,
    /// Row-major `cols` entries per allocated coset.
    table: Vec<u32>,
    /// Union-find forest; `parent[c] == c` for live cosets.
    parent: Vec<u32>,
    live: usize,
    max: usize,
    relators: Vec<Vec<usize>>,
    /// Cyclic conjugates of relators and their inverses, bucketed by first
    /// letter.
    by_first: Vec<Vec<Vec<usize>>>,
    deductions: Vec<(u32, usize)>,
    track_deductions: bool,
    queue: Vec<u32>,
    /// Entries `(c, x)` whose definition would immediately complete some
    /// relator cycle through a deduction.
    preferred: std::collections::VecDeque<(u32, usize)>,
}

impl Enumerator {
    fn new(p: &Presentation, limits: &EnumerationLimits) -> Self {
        let cols = 2 * p.num_generators();
        let relators: Vec<Vec<usize>> = p.relators().iter().map(Word::codes).collect();
        let mut by_first: Vec<Vec<Vec<usize>>> = vec![Vec::new(); cols];
        for r in p.relators() {
            for w in [r.clone(), r.inverse()] {
                let codes = w.codes();
                for k in 0..codes.len() {
                    let mut rot = codes[k..].to_vec();
                    rot.extend_from_slice(&codes[..k]);
                    let bucket = &mut by_first[rot[0]];
                    if !bucket.contains(&rot) {
                        bucket.push(rot);
                    }
                }
            }
        }
        let mut e = Enumerator {
            cols,
            table: Vec::new(),
            parent: Vec::new(),
            live: 0,
            max: limits.max_cosets,
            relators,
            by_first,
            deductions: Vec::new(),
            track_deductions: limits.strategy == Strategy::Felsch,
            queue: Vec::new(),
            preferred: std::collections::VecDeque::new(),
        };
        e.alloc();
        e
    }

    fn allocated(&self) -> usize {
        self.parent.len()
    }

    fn alloc(&mut self) -> u32 {
        let c = self.parent.len() as u32;
        self.parent.push(c);
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.live += 1;
        c
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.cols + x] = v;
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent.get(c as usize) == Some(&c)
    }

    /// New coset `c^x`. Returns false when storage is exhausted.
    fn define(&mut self, c: u32, x: usize) -> bool {
        if self.allocated() >= self.max {
            return false;
        }
        let d = self.alloc();
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        if self.track_deductions {
            self.deductions.push((c, x));
        }
        true
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let live_before = self.live;
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                self.set(d, x ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != UNDEF {
                    self.merge(nu, mx);
                } else {
                    let nx = self.get(nu, x ^ 1);
                    if nx != UNDEF {
                        self.merge(mu, nx);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                        if self.track_deductions {
                            self.deductions.push((mu, x));
                        }
                    }
                }
            }
        }
        self.queue.clear();
        debug_assert!(self.live <= live_before);
    }

    /// Scans `w` at `c`, deducing a single missing entry or a coincidence.
    /// With `fill`, missing entries are defined until the scan completes;
    /// returns false if that ran out of storage.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> bool {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len();
        loop {
            while i < j {
                let n = self.get(f, w[i]);
                if n == UNDEF {
                    break;
                }
                f = n;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j > i {
                let n = self.get(b, w[j - 1] ^ 1);
                if n == UNDEF {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return true;
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                if self.track_deductions {
                    self.deductions.push((f, w[i]));
                }
                return true;
            }
            if !fill {
                if j == i + 2 && self.track_deductions {
                    if self.preferred.len() == PREFERRED_CAP {
                        self.preferred.pop_front();
                    }
                    self.preferred.push_back((f, w[i]));
                }
                return true;
            }
            if !self.define(f, w[i]) {
                return false;
            }
        }
    }

    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.is_live(c) {
                continue;
            }
            let n = self.by_first[x].len();
            for k in 0..n {
                let w = std::mem::take(&mut self.by_first[x][k]);
                self.scan(c, &w, false);
                self.by_first[x][k] = w;
                if !self.is_live(c) {
                    break;
                }
            }
            if !self.is_live(c) {
                continue;
            }
            let d = self.get(c, x);
            if d == UNDEF || !self.is_live(d) {
                continue;
            }
            let n = self.by_first[x ^ 1].len();
            for k in 0..n {
                let w = std::mem::take(&mut self.by_first[x ^ 1][k]);
                self.scan(d, &w, false);
                self.by_first[x ^ 1][k] = w;
                if !self.is_live(d) {
                    break;
                }
            }
        }
    }

    fn felsch(&mut self, subgroup: &[Vec<usize>]) -> bool {
        for w in subgroup {
            if !self.scan(0, w, true) {
                return false;
            }
            self.process_deductions();
        }
        let fill_factor = fill_factor(self.cols);
        loop {
            let mut changed = false;
            let mut c = 0u32;
            while (c as usize) < self.allocated() {
                if !self.is_live(c) {
                    c += 1;
                    continue;
                }
                let Some(x) = (0..self.cols).find(|&x| self.get(c, x) == UNDEF) else {
                    c += 1;
                    continue;
                };
                let (mut dc, mut dx) = (c, x);
                if self.allocated() < fill_factor * (c as usize + 1) {
                    while let Some((pc, px)) = self.preferred.pop_back() {
                        if self.is_live(pc) && self.get(pc, px) == UNDEF {
                            (dc, dx) = (pc, px);
                            break;
                        }
                    }
                }
                if !self.define(dc, dx) {
                    return false;
                }
                changed = true;
                self.process_deductions();
            }
            if !changed || self.is_complete() {
                return self.is_complete();
            }
        }
    }

    fn hlt(&mut self, subgroup: &[Vec<usize>], lookahead: bool) -> bool {
        for w in subgroup {
            if !self.scan(0, w, true) {
                return false;
            }
        }
        let relators = std::mem::take(&mut self.relators);
        let closed = self.hlt_main(&relators, lookahead);
        self.relators = relators;
        closed
    }

    fn hlt_main(&mut self, relators: &[Vec<usize>], lookahead: bool) -> bool {
        loop {
            let mut c = 0u32;
            'cosets: while (c as usize) < self.allocated() {
                if self.is_live(c) {
                    for r in relators {
                        while !self.scan(c, r, true) {
                            if !lookahead || !self.lookahead(relators, &mut c) {
                                return false;
                            }
                            if !self.is_live(c) {
                                c += 1;
                                continue 'cosets;
                            }
                        }
                        if !self.is_live(c) {
                            break;
                        }
                    }
                    if self.is_live(c) {
                        for x in 0..self.cols {
                            if self.get(c, x) == UNDEF {
                                while !self.define(c, x) {
                                    if !lookahead || !self.lookahead(relators, &mut c) {
                                        return false;
                                    }
                                    if !self.is_live(c) {
                                        c += 1;
                                        continue 'cosets;
                                    }
                                }
                            }
                        }
                    }
                }
                c += 1;
            }
            if self.is_complete() {
                // Every coset was scanned under every relator after its
                // row was last touched only if no late coincidence
                // rewrote it; a final check pass settles that.
                let mut ok = true;
                for c in 0..self.allocated() as u32 {
                    if !self.is_live(c) {
                        continue;
                    }
                    for r in relators {
                        self.scan(c, r, false);
                    }
                    ok &= self.is_live(c);
                }
                if ok && self.is_complete() {
                    return true;
                }
            }
        }
    }

    /// Scans every live coset without defining anything, then compacts.
    /// `current` is renumbered to follow the compaction. Returns false if
    /// no storage was freed.
    fn lookahead(&mut self, relators: &[Vec<usize>], current: &mut u32) -> bool {
        let before = self.allocated();
        for c in 0..self.allocated() as u32 {
            if !self.is_live(c) {
                continue;
            }
            for r in relators {
                self.scan(c, r, false);
                if !self.is_live(c) {
                    break;
                }
            }
        }
        let map = self.compact();
        // First live coset at or after the old position.
        let mut k = *current as usize;
        while k < map.len() && map[k] == UNDEF {
            k += 1;
        }
        *current = if k < map.len() {
            map[k]
        } else {
            self.allocated() as u32
        };
        self.allocated() < before
    }

    fn is_complete(&self) -> bool {
        (0..self.allocated() as u32)
            .filter(|&c| self.is_live(c))
            .all(|c| (0..self.cols).all(|x| self.get(c, x) != UNDEF))
    }

    /// Removes dead rows preserving order. Returns old -> new numbering.
    fn compact(&mut self) -> Vec<u32> {
        let n = self.allocated();
        let mut map = vec![UNDEF; n];
        let mut next = 0u32;
        for c in 0..n as u32 {
            if self.is_live(c) {
                map[c as usize] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.cols);
        for c in 0..n as u32 {
            if map[c as usize] == UNDEF {
                continue;
            }
            for x in 0..self.cols {
                let v = self.get(c, x);
                table.push(if v == UNDEF { UNDEF } else { map[v as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.live = next as usize;
        self.deductions.clear();
        map
    }

    fn standardize(mut self) -> CosetTable {
        self.compact();
        let n = self.allocated();
        let mut map = vec![UNDEF; n];
        let mut order = Vec::with_capacity(n);
        map[0] = 0;
        order.push(0u32);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(c, x);
                if map[d as usize] == UNDEF {
                    map[d as usize] = order.len() as u32;
                    order.push(d);
                }
            }
        }
        debug_assert_eq!(order.len(), n, "closed table is connected");
        let mut table = Vec::with_capacity(n * self.cols);
        for &c in &order {
            for x in 0..self.cols {
                table.push(map[self.get(c, x) as usize]);
            }
        }
        CosetTable::from_raw(self.cols / 2, table, TableStatus::Closed)
    }
}
