//! Brute-force reference solver for small instances.
//!
//! Instead of enumerating candidate solution matrices, the oracle
//! backtracks over coverage slots: each adjacent pair must be covered by
//! as many distinct cliques as its weight, so the search repeatedly picks
//! the first under-covered pair and assigns it to an existing compatible
//! clique or to a fresh one. Joining a clique implicitly covers the pairs
//! with all current members, which both propagates constraints and prunes
//! inconsistent branches early. A new clique index may be opened only
//! when all earlier ones are in use, cutting column permutations.
//!
//! Annotated vertices are reconciled at the end: membership can only be
//! short, and the deficit is met by fresh singleton cliques, which is the
//! only way a clique can host an under-covered vertex once every pair is
//! exact.
//!
//! Never called by the production pipeline; tests and benchmarks use it
//! as ground truth.

use std::collections::HashSet;
use std::time::Instant;

use thiserror::Error;

use crate::model::{BinaryMatrix, WildcardEntry, WildcardMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle guard exceeded: {0} cells over the limit of {1}; raise the guard to override")]
    GuardExceeded(u64, u64),
    #[error("oracle supports at most 64 vertices, instance has {0}")]
    TooManyVertices(usize),
    #[error("matrix counting is limited to k <= {1}, got {0}")]
    CountGuardExceeded(usize, usize),
    #[error("solution count exceeds u64")]
    CountOverflow,
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    /// Limit on `n * k`; exhaustive search beyond it is refused.
    pub max_cells: u64,
    /// Cooperative cutoff for `oracle_solve`.
    pub deadline: Option<Instant>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_cells: 42,
            deadline: None,
        }
    }
}

impl OracleOptions {
    pub fn with_max_cells(max_cells: u64) -> Self {
        OracleOptions {
            max_cells,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Solution(BinaryMatrix),
    No,
    Timeout,
}

enum Flow {
    Continue,
    Abort,
}

struct Search<'a> {
    n: usize,
    k: usize,
    pairs: Vec<(usize, usize)>,
    remaining: Vec<u32>,
    need: Vec<Option<u32>>,
    membership: Vec<u32>,
    cliques: Vec<u64>,
    used: usize,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
    _a: std::marker::PhantomData<&'a ()>,
}

struct Undo {
    affected: Vec<usize>,
    newcomers: Vec<usize>,
    clique: usize,
    opened: bool,
}

impl<'a> Search<'a> {
    fn new(a: &'a WildcardMatrix, k: usize, deadline: Option<Instant>) -> Self {
        let n = a.dim();
        let mut pairs = Vec::new();
        let mut remaining = vec![0u32; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                if let WildcardEntry::Value(w) = a.entry(u, v) {
                    if w > 0 {
                        pairs.push((u, v));
                        remaining[u * n + v] = w;
                    }
                }
            }
        }
        let need = (0..n).map(|v| a.entry(v, v).as_value()).collect();
        Search {
            n,
            k,
            pairs,
            remaining,
            need,
            membership: vec![0; n],
            cliques: vec![0; k],
            used: 0,
            deadline,
            nodes: 0,
            timed_out: false,
            _a: std::marker::PhantomData,
        }
    }

    fn remaining_at(&self, u: usize, v: usize) -> u32 {
        self.remaining[u.min(v) * self.n + u.max(v)]
    }

    /// Under-covered pair with the fewest cliques that could still take
    /// it, lexicographically first on ties. Branching on the tightest
    /// pair keeps the tree shallow and surfaces dead ends early.
    fn select_pair(&self) -> Option<(usize, usize, usize)> {
        let fresh = self.k - self.used;
        let mut best: Option<(usize, usize, usize)> = None;
        for &(u, v) in &self.pairs {
            if self.remaining[u * self.n + v] == 0 {
                continue;
            }
            let candidates =
                (0..self.used).filter(|&j| self.can_cover(u, v, j)).count() + fresh;
            if best.is_none_or(|(_, _, c)| candidates < c) {
                best = Some((u, v, candidates));
                if candidates == 0 {
                    break;
                }
            }
        }
        best
    }

    /// Fast feasibility test mirroring `try_add` without mutating.
    fn can_cover(&self, u: usize, v: usize, j: usize) -> bool {
        let mask = self.cliques[j];
        let u_in = mask >> u & 1 == 1;
        let v_in = mask >> v & 1 == 1;
        if u_in && v_in {
            return false;
        }
        let mut cur = mask;
        for x in [u, v] {
            if cur >> x & 1 == 1 {
                continue;
            }
            if let Some(c) = self.need[x] {
                if self.membership[x] >= c {
                    return false;
                }
            }
            let mut others = cur;
            while others != 0 {
                let y = others.trailing_zeros() as usize;
                others &= others - 1;
                if self.remaining_at(x, y) == 0 {
                    return false;
                }
            }
            cur |= 1 << x;
        }
        true
    }

    fn try_add(&mut self, u: usize, v: usize, j: usize) -> Option<Undo> {
        if !self.can_cover(u, v, j) {
            return None;
        }
        let mask = self.cliques[j];
        let mut newcomers = Vec::with_capacity(2);
        let mut affected = Vec::new();
        let mut cur = mask;
        for x in [u, v] {
            if cur >> x & 1 == 1 {
                continue;
            }
            newcomers.push(x);
            let mut others = cur;
            while others != 0 {
                let y = others.trailing_zeros() as usize;
                others &= others - 1;
                affected.push(x.min(y) * self.n + x.max(y));
            }
            cur |= 1 << x;
        }
        for &idx in &affected {
            self.remaining[idx] -= 1;
        }
        for &x in &newcomers {
            self.membership[x] += 1;
            self.cliques[j] |= 1 << x;
        }
        let opened = j == self.used;
        if opened {
            self.used += 1;
        }
        Some(Undo {
            affected,
            newcomers,
            clique: j,
            opened,
        })
    }

    fn undo(&mut self, undo: Undo) {
        for idx in undo.affected {
            self.remaining[idx] += 1;
        }
        for x in undo.newcomers {
            self.membership[x] -= 1;
            self.cliques[undo.clique] &= !(1 << x);
        }
        if undo.opened {
            self.used -= 1;
        }
    }

    fn annotation_deficit(&self) -> u64 {
        (0..self.n)
            .filter_map(|v| self.need[v].map(|c| u64::from(c - self.membership[v])))
            .sum()
    }

    /// Core columns of the current assignment: opened cliques plus one
    /// singleton per missing annotated membership.
    fn core_columns(&self) -> Vec<u64> {
        let mut cols: Vec<u64> = self.cliques[..self.used].to_vec();
        for v in 0..self.n {
            if let Some(c) = self.need[v] {
                for _ in self.membership[v]..c {
                    cols.push(1 << v);
                }
            }
        }
        cols
    }

    fn build_solution(&self) -> BinaryMatrix {
        let cols = self.core_columns();
        let mut masks = vec![0u64; self.n];
        for (j, col) in cols.iter().enumerate() {
            for (v, mask) in masks.iter_mut().enumerate() {
                *mask |= (col >> v & 1) << j;
            }
        }
        BinaryMatrix::from_row_masks(cols.len(), masks)
    }

    fn dfs(&mut self, on_solution: &mut dyn FnMut(&Search) -> bool) -> Flow {
        self.nodes += 1;
        if self.nodes & 1023 == 0
            && self.deadline.is_some_and(|d| Instant::now() >= d)
        {
            self.timed_out = true;
            return Flow::Abort;
        }
        let Some((u, v, candidates)) = self.select_pair() else {
            if self.used as u64 + self.annotation_deficit() <= self.k as u64
                && on_solution(self)
            {
                return Flow::Abort;
            }
            return Flow::Continue;
        };
        // Each required covering of this pair needs a distinct feasible
        // clique, so too few candidates kills the whole subtree.
        if (candidates as u64) < u64::from(self.remaining[u * self.n + v]) {
            return Flow::Continue;
        }
        let choices = (self.used + 1).min(self.k);
        for j in 0..choices {
            if let Some(undo) = self.try_add(u, v, j) {
                let flow = self.dfs(on_solution);
                self.undo(undo);
                if matches!(flow, Flow::Abort) {
                    return Flow::Abort;
                }
            }
        }
        Flow::Continue
    }
}

fn check_guards(a: &WildcardMatrix, k: usize, opts: &OracleOptions) -> Result<(), OracleError> {
    let cells = a.dim() as u64 * k as u64;
    if cells > opts.max_cells {
        return Err(OracleError::GuardExceeded(cells, opts.max_cells));
    }
    if a.dim() > 64 {
        return Err(OracleError::TooManyVertices(a.dim()));
    }
    Ok(())
}

/// Exhaustive solve; agrees with `verify_bsd` on every output.
pub fn oracle_solve(
    a: &WildcardMatrix,
    k: usize,
    opts: &OracleOptions,
) -> Result<OracleOutcome, OracleError> {
    check_guards(a, k, opts)?;
    let mut search = Search::new(a, k, opts.deadline);
    let mut solution = None;
    search.dfs(&mut |s| {
        solution = Some(s.build_solution());
        true
    });
    if search.timed_out {
        Ok(OracleOutcome::Timeout)
    } else if let Some(b) = solution {
        debug_assert_eq!(crate::model::verify_bsd(a, &b, k), Ok(true));
        Ok(OracleOutcome::Solution(b))
    } else {
        Ok(OracleOutcome::No)
    }
}

fn binomial(n: u64, r: u64) -> Option<u128> {
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(u128::from(n - i))?;
        acc /= u128::from(i + 1);
    }
    Some(acc)
}

/// Number of solutions up to column permutation.
///
/// The search enumerates cores: covering cliques plus forced annotation
/// singletons. Each core extends to full solutions by filling the free
/// columns with junk, i.e. empty columns or singletons of unannotated
/// vertices, and distinct multisets of junk come from the stars-and-bars
/// count over those choices.
pub fn oracle_count(
    a: &WildcardMatrix,
    k: usize,
    opts: &OracleOptions,
) -> Result<u64, OracleError> {
    check_guards(a, k, opts)?;
    let mut cores: HashSet<Vec<u64>> = HashSet::new();
    let mut search = Search::new(a, k, None);
    search.dfs(&mut |s| {
        let mut cols = s.core_columns();
        cols.sort_unstable();
        cores.insert(cols);
        false
    });
    let wildcard_vertices = (0..a.dim())
        .filter(|&v| a.entry(v, v).is_wildcard())
        .count() as u64;
    let mut total: u128 = 0;
    for core in &cores {
        let free = k as u64 - core.len() as u64;
        let ways =
            binomial(free + wildcard_vertices, wildcard_vertices).ok_or(OracleError::CountOverflow)?;
        total = total.checked_add(ways).ok_or(OracleError::CountOverflow)?;
    }
    u64::try_from(total).map_err(|_| OracleError::CountOverflow)
}

/// Brute-force count of w-limited `k x k` binary matrices over all
/// `2^(k*k)` candidates. Kept independent of the streaming enumerator on
/// purpose; each checks the other in tests.
pub fn count_w_limited(k: usize, w: u32) -> Result<u64, OracleError> {
    const MAX_K: usize = 4;
    if k > MAX_K {
        return Err(OracleError::CountGuardExceeded(k, MAX_K));
    }
    let mut count = 0u64;
    let mut rows = vec![0u64; k];
    for code in 0..1u64 << (k * k) {
        for (r, row) in rows.iter_mut().enumerate() {
            *row = (code >> (r * k)) & ((1u64 << k) - 1);
        }
        if crate::solver::is_w_limited(&rows, w) {
            count += 1;
        }
    }
    Ok(count)
}
