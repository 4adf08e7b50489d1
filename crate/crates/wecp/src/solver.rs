//! Fixed-parameter search for binary symmetric decompositions.
//!
//! The search guesses a `k x k` candidate basis matrix `P`, then grows a
//! working matrix with possibly null rows: basis rows are copied in one
//! at a time, and after each copy every remaining null row is filled
//! greedily with the first compatible bit vector. A row that cannot be
//! filled is exactly where the next basis row belongs, so the guesswork
//! stays confined to the basis entries.
//!
//! Only w-limited candidates need to be guessed, where `w` is the largest
//! integer entry of the input: any pair of distinct rows of a valid
//! solution has dot product at most `w`. Such matrices carry at most
//! `k^(3/2) * w^(1/2) + k` ones, which prunes the enumeration further.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::kernel::{kernelize, lift_solution, KernelResult};
use crate::model::{
    awecp_to_bsddw, matrix_to_cliques, verify_bsd, AwecpInstance, BinaryMatrix, CliquePartition,
    ModelError, WildcardMatrix, MAX_COLS,
};

/// Candidate bit vector for lexicographic index `m`: component 0 is the
/// most significant position, so ascending `m` walks `{0,1}^k` in
/// lexicographic order.
fn lex_mask(m: u64, k: usize) -> u64 {
    if k == 0 {
        0
    } else {
        m.reverse_bits() >> (64 - k)
    }
}

/// Every pair of distinct rows has dot product at most `w`.
pub fn is_w_limited(rows: &[u64], w: u32) -> bool {
    rows.iter().enumerate().all(|(i, &r)| {
        rows[i + 1..]
            .iter()
            .all(|&s| (r & s).count_ones() <= w)
    })
}

fn isqrt_u128(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    while r * r > x {
        r -= 1;
    }
    r
}

/// Upper bound on the number of ones in a w-limited `k x k` binary
/// matrix: `floor(k^(3/2) * w^(1/2)) + k`, computed exactly as the
/// integer square root of `k^3 * w`.
pub fn zarankiewicz_bound(k: usize, w: u32) -> u64 {
    let k = k as u128;
    isqrt_u128(k * k * k * u128::from(w)) as u64 + k as u64
}

/// Ones cap used while enumerating candidates. Rounds the square root up
/// so the prune can never drop a feasible basis even when `k^3 * w` is
/// not a perfect square.
pub fn enumeration_ones_cap(k: usize, w: u32) -> u64 {
    let prod = (k as u128).pow(3) * u128::from(w);
    let root = isqrt_u128(prod);
    let ceil = if root * root == prod { root } else { root + 1 };
    ceil as u64 + k as u64
}

/// Streaming enumeration of w-limited `k x k` binary matrices with at
/// most `ones_cap` ones, in lexicographic row-major order, each exactly
/// once. Backtracks over rows and prunes a partial matrix as soon as two
/// rows exceed dot product `w` or the ones budget is spent.
pub struct WLimitedMatrices {
    k: usize,
    w: u32,
    ones_cap: u64,
    rows: Vec<u64>,
    index: Vec<u64>,
    ones: u64,
    first_offset: u64,
    first_stride: u64,
    started: bool,
    done: bool,
}

impl WLimitedMatrices {
    pub fn new(k: usize, w: u32, ones_cap: u64) -> Self {
        Self::with_first_row_stride(k, w, ones_cap, 0, 1)
    }

    /// Restricts the first row to lexicographic indices congruent to
    /// `offset` modulo `stride`; used to split the stream across workers.
    pub fn with_first_row_stride(
        k: usize,
        w: u32,
        ones_cap: u64,
        offset: u64,
        stride: u64,
    ) -> Self {
        assert!(k <= MAX_COLS);
        assert!(stride >= 1 && offset < stride.max(1));
        WLimitedMatrices {
            k,
            w,
            ones_cap,
            rows: vec![0; k],
            index: vec![0; k],
            ones: 0,
            first_offset: offset,
            first_stride: stride,
            started: false,
            done: false,
        }
    }

    /// Rows of the current matrix; valid after `next_in_place` returned true.
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    fn row_limit(&self) -> u128 {
        1u128 << self.k
    }

    fn fits(&self, level: usize, v: u64) -> bool {
        if self.ones + u64::from(v.count_ones()) > self.ones_cap {
            return false;
        }
        self.rows[..level]
            .iter()
            .all(|&r| (r & v).count_ones() <= self.w)
    }

    /// Advances to the next matrix without allocating. Returns false when
    /// the stream is exhausted.
    pub fn next_in_place(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            if self.k == 0 {
                // Single empty matrix, owned by the first worker.
                return self.first_offset == 0;
            }
            let mut m = u128::from(self.first_offset);
            while m < self.row_limit() {
                let v = lex_mask(m as u64, self.k);
                if self.fits(0, v) {
                    self.rows[0] = v;
                    self.index[0] = m as u64;
                    self.ones = u64::from(v.count_ones());
                    return true;
                }
                m += u128::from(self.first_stride);
            }
            self.done = true;
            return false;
        }
        if self.k == 0 {
            self.done = true;
            return false;
        }
        let mut level = self.k - 1;
        loop {
            self.ones -= u64::from(self.rows[level].count_ones());
            let step = if level == 0 { self.first_stride } else { 1 };
            let mut m = u128::from(self.index[level]) + u128::from(step);
            let mut placed = false;
            while m < self.row_limit() {
                let v = lex_mask(m as u64, self.k);
                if self.fits(level, v) {
                    self.rows[level] = v;
                    self.index[level] = m as u64;
                    self.ones += u64::from(v.count_ones());
                    placed = true;
                    break;
                }
                m += u128::from(step);
            }
            if placed {
                for deeper in level + 1..self.k {
                    self.rows[deeper] = 0;
                    self.index[deeper] = 0;
                }
                return true;
            }
            if level == 0 {
                self.done = true;
                return false;
            }
            level -= 1;
        }
    }
}

impl Iterator for WLimitedMatrices {
    type Item = BinaryMatrix;

    fn next(&mut self) -> Option<BinaryMatrix> {
        if self.next_in_place() {
            Some(BinaryMatrix::from_row_masks(self.k, self.rows.clone()))
        } else {
            None
        }
    }
}

/// All w-limited `k x k` binary matrices with at most `ones_cap` ones
/// (no cap when `None`), in deterministic lexicographic row-major order.
pub fn enumerate_w_limited(k: usize, w: u32, ones_cap: Option<u64>) -> WLimitedMatrices {
    WLimitedMatrices::new(k, w, ones_cap.unwrap_or(u64::MAX))
}

/// Working matrix whose rows are either a bit vector or null. Null marks
/// a row not filled yet and is distinct from the all-zero vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialBinaryMatrix {
    cols: usize,
    rows: Vec<Option<u64>>,
}

impl PartialBinaryMatrix {
    pub fn all_null(n: usize, cols: usize) -> Self {
        assert!(cols <= MAX_COLS);
        PartialBinaryMatrix {
            cols,
            rows: vec![None; n],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> Option<u64> {
        self.rows[i]
    }

    pub fn set_row(&mut self, i: usize, v: u64) {
        debug_assert!(self.cols == MAX_COLS || v >> self.cols == 0);
        self.rows[i] = Some(v);
    }

    pub fn rows_slice(&self) -> &[Option<u64>] {
        &self.rows
    }

    pub fn filled_count(&self) -> usize {
        self.rows.iter().flatten().count()
    }

    /// Converts to a full matrix; `None` while any row is still null.
    pub fn into_binary(self) -> Option<BinaryMatrix> {
        let masks: Option<Vec<u64>> = self.rows.into_iter().collect();
        masks.map(|m| BinaryMatrix::from_row_masks(self.cols, m))
    }
}

/// Integer view of the input matrix for the hot search loops: diagonal
/// requirements (or none for wildcards) and a flat off-diagonal grid.
struct DenseView {
    n: usize,
    diag: Vec<Option<u32>>,
    entries: Vec<u32>,
}

impl DenseView {
    fn from_matrix(a: &WildcardMatrix) -> Self {
        let n = a.dim();
        let mut diag = Vec::with_capacity(n);
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            diag.push(a.entry(i, i).as_value());
            for j in 0..n {
                if i != j {
                    entries[i * n + j] = a.entry(i, j).as_value().expect("off-diagonal integer");
                }
            }
        }
        DenseView { n, diag, entries }
    }

    fn compatible(&self, v: u64, i: usize, rows: &[Option<u64>]) -> bool {
        if let Some(c) = self.diag[i] {
            if v.count_ones() != c {
                return false;
            }
        }
        let base = i * self.n;
        for (j, r) in rows.iter().enumerate() {
            if j == i {
                continue;
            }
            if let Some(rj) = r {
                if (v & rj).count_ones() != self.entries[base + j] {
                    return false;
                }
            }
        }
        true
    }

    /// Fills null rows in increasing index order with the first
    /// compatible vector; returns the first row that admits none.
    fn fill_rows(&self, cols: usize, rows: &mut [Option<u64>], scratch: &mut RowScratch) -> Option<usize> {
        let limit: u128 = 1u128 << cols;
        for i in 0..rows.len() {
            if rows[i].is_some() {
                continue;
            }
            // Collect the constraints once per row; the candidate loop
            // then touches only packed arrays.
            scratch.masks.clear();
            scratch.targets.clear();
            let base = i * self.n;
            for (j, r) in rows.iter().enumerate() {
                if j != i {
                    if let Some(rj) = r {
                        scratch.masks.push(*rj);
                        scratch.targets.push(self.entries[base + j]);
                    }
                }
            }
            let need = self.diag[i];
            let mut m: u128 = 0;
            let mut filled = false;
            'candidates: while m < limit {
                let v = lex_mask(m as u64, cols);
                m += 1;
                if let Some(c) = need {
                    if v.count_ones() != c {
                        continue;
                    }
                }
                for (mask, target) in scratch.masks.iter().zip(&scratch.targets) {
                    if (v & mask).count_ones() != *target {
                        continue 'candidates;
                    }
                }
                rows[i] = Some(v);
                filled = true;
                break;
            }
            if !filled {
                return Some(i);
            }
        }
        None
    }
}

struct RowScratch {
    masks: Vec<u64>,
    targets: Vec<u32>,
}

impl RowScratch {
    fn new(n: usize) -> Self {
        RowScratch {
            masks: Vec::with_capacity(n),
            targets: Vec::with_capacity(n),
        }
    }
}

/// Candidate row test: `v` may fill row `i` when its self dot product
/// matches the diagonal under wildcard equality and its dot product with
/// every filled row `j` equals the entry at `(i, j)` exactly.
pub fn i_compatible(v: u64, i: usize, b: &PartialBinaryMatrix, a: &WildcardMatrix) -> bool {
    DenseView::from_matrix(a).compatible(v, i, b.rows_slice())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendResult {
    /// Every row was filled; the matrix is a complete candidate solution.
    Complete(BinaryMatrix),
    /// Row `row` admits no compatible vector; rows before it were filled.
    Stuck { matrix: PartialBinaryMatrix, row: usize },
}

/// Fills each null row, in increasing index order, with the first
/// compatible vector in lexicographic order. Stops at the first row that
/// admits none.
pub fn extend_basis(a: &WildcardMatrix, mut b: PartialBinaryMatrix) -> ExtendResult {
    assert_eq!(b.len(), a.dim());
    let view = DenseView::from_matrix(a);
    let cols = b.cols();
    let mut scratch = RowScratch::new(a.dim());
    match view.fill_rows(cols, &mut b.rows, &mut scratch) {
        None => ExtendResult::Complete(b.into_binary().expect("no null rows remain")),
        Some(row) => ExtendResult::Stuck { matrix: b, row },
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Single-threaded search in enumeration order; repeated runs return
    /// bit-identical solutions.
    pub deterministic: bool,
    /// Worker count for the parallel mode (ignored when deterministic).
    pub threads: usize,
    /// Kernelize before solving (graph pipeline only).
    pub use_kernel: bool,
    /// Cooperative cutoff; the search reports a timeout soon after.
    pub deadline: Option<Instant>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            deterministic: true,
            threads: 1,
            use_kernel: true,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    /// Candidate basis matrices enumerated.
    pub candidates: u64,
    /// Calls that tried to complete a partial solution.
    pub extend_calls: u64,
    /// Budget after capping at the instance's total weight.
    pub effective_budget: usize,
    /// Kernel size when the graph pipeline ran the kernelization.
    pub kernel_vertices: Option<usize>,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BsdOutcome {
    Solution(BinaryMatrix),
    No,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WecpOutcome {
    Partition(CliquePartition),
    No,
    Timeout,
}

fn deadline_passed(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

struct Scratch {
    basis: Vec<Option<u64>>,
    work: Vec<Option<u64>>,
    rows: RowScratch,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            basis: vec![None; n],
            work: vec![None; n],
            rows: RowScratch::new(n),
        }
    }
}

/// One pass of the growth loop for a fixed candidate basis `p`.
fn grow_with_basis(
    view: &DenseView,
    k: usize,
    p: &[u64],
    scratch: &mut Scratch,
    extend_calls: &mut u64,
) -> Option<BinaryMatrix> {
    scratch.basis.iter_mut().for_each(|r| *r = None);
    let mut i = 0usize;
    for (b, &basis_row) in p.iter().enumerate().take(k) {
        if !view.compatible(basis_row, i, &scratch.basis) {
            return None;
        }
        scratch.basis[i] = Some(basis_row);
        // The non-null rows are exactly the basis prefix placed so far.
        debug_assert!({
            let mut placed: Vec<u64> = scratch.basis.iter().flatten().copied().collect();
            let mut prefix = p[..=b].to_vec();
            placed.sort_unstable();
            prefix.sort_unstable();
            placed == prefix
        });
        scratch.work.copy_from_slice(&scratch.basis);
        *extend_calls += 1;
        match view.fill_rows(k, &mut scratch.work, &mut scratch.rows) {
            None => {
                let masks = scratch.work.iter().map(|r| r.unwrap()).collect();
                return Some(BinaryMatrix::from_row_masks(k, masks));
            }
            Some(stuck) => i = stuck,
        }
    }
    None
}

fn sequential_search(
    view: &DenseView,
    k: usize,
    w: u32,
    deadline: Option<Instant>,
    stats: &mut SolveStats,
) -> BsdOutcome {
    let mut en = WLimitedMatrices::new(k, w, enumeration_ones_cap(k, w));
    let mut scratch = Scratch::new(view.n);
    while en.next_in_place() {
        stats.candidates += 1;
        if stats.candidates & 1023 == 0 && deadline_passed(deadline) {
            return BsdOutcome::Timeout;
        }
        if let Some(b) = grow_with_basis(view, k, en.rows(), &mut scratch, &mut stats.extend_calls)
        {
            return BsdOutcome::Solution(b);
        }
    }
    BsdOutcome::No
}

fn parallel_search(
    view: &DenseView,
    k: usize,
    w: u32,
    threads: usize,
    deadline: Option<Instant>,
    stats: &mut SolveStats,
) -> BsdOutcome {
    let found = AtomicBool::new(false);
    let timed_out = AtomicBool::new(false);
    let result: Mutex<Option<BinaryMatrix>> = Mutex::new(None);
    let candidates = AtomicU64::new(0);
    let extend_calls = AtomicU64::new(0);
    let cap = enumeration_ones_cap(k, w);
    std::thread::scope(|scope| {
        for t in 0..threads {
            let (found, timed_out, result) = (&found, &timed_out, &result);
            let (candidates, extend_calls) = (&candidates, &extend_calls);
            scope.spawn(move || {
                let mut en =
                    WLimitedMatrices::with_first_row_stride(k, w, cap, t as u64, threads as u64);
                let mut scratch = Scratch::new(view.n);
                let mut local_c = 0u64;
                let mut local_e = 0u64;
                while en.next_in_place() {
                    if found.load(Ordering::Relaxed) || timed_out.load(Ordering::Relaxed) {
                        break;
                    }
                    local_c += 1;
                    if local_c & 1023 == 0 && deadline_passed(deadline) {
                        timed_out.store(true, Ordering::Relaxed);
                        break;
                    }
                    if let Some(b) =
                        grow_with_basis(view, k, en.rows(), &mut scratch, &mut local_e)
                    {
                        if !found.swap(true, Ordering::SeqCst) {
                            *result.lock().unwrap() = Some(b);
                        }
                        break;
                    }
                }
                candidates.fetch_add(local_c, Ordering::Relaxed);
                extend_calls.fetch_add(local_e, Ordering::Relaxed);
            });
        }
    });
    stats.candidates += candidates.load(Ordering::Relaxed);
    stats.extend_calls += extend_calls.load(Ordering::Relaxed);
    match result.into_inner().unwrap() {
        Some(b) => BsdOutcome::Solution(b),
        None if timed_out.load(Ordering::Relaxed) => BsdOutcome::Timeout,
        None => BsdOutcome::No,
    }
}

/// Decides whether `a` has a binary symmetric decomposition with at most
/// `k` columns, returning one if so.
///
/// The budget is first capped at the total integer weight of the matrix:
/// a solution never needs more nonzero columns than that, and the cap
/// keeps tiny instances with an oversized `k` out of the exponential
/// enumeration. `k = 0` and all-zero matrices short-circuit.
pub fn solve_bsddw(
    a: &WildcardMatrix,
    k: usize,
    opts: &SolveOptions,
) -> Result<(BsdOutcome, SolveStats), ModelError> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let n = a.dim();
    let w = a.max_weight();
    let outcome = if n == 0 {
        BsdOutcome::Solution(BinaryMatrix::zero(0, 0))
    } else if w == 0 {
        // Every integer entry is zero; the empty decomposition works.
        BsdOutcome::Solution(BinaryMatrix::zero(n, 0))
    } else {
        let k_eff = k.min(a.total_slots().min(usize::MAX as u64) as usize);
        stats.effective_budget = k_eff;
        if u64::from(w) > k_eff as u64 {
            // Some entry needs more covering cliques than the budget has.
            BsdOutcome::No
        } else if k_eff > MAX_COLS {
            return Err(ModelError::BudgetTooLarge(k_eff, MAX_COLS));
        } else {
            let view = DenseView::from_matrix(a);
            if opts.deterministic || opts.threads <= 1 {
                sequential_search(&view, k_eff, w, opts.deadline, &mut stats)
            } else {
                parallel_search(&view, k_eff, w, opts.threads, opts.deadline, &mut stats)
            }
        }
    };
    if let BsdOutcome::Solution(b) = &outcome {
        debug_assert_eq!(verify_bsd(a, b, k), Ok(true));
    }
    stats.wall_time = start.elapsed();
    Ok((outcome, stats))
}

/// Full graph pipeline: map to the matrix view, kernelize, solve the
/// kernel, lift the solution back and read it off as cliques.
pub fn solve_wecp(
    inst: &AwecpInstance,
    opts: &SolveOptions,
) -> Result<(WecpOutcome, SolveStats), ModelError> {
    let start = Instant::now();
    let (a, k) = awecp_to_bsddw(inst);
    let (outcome, mut stats) = if opts.use_kernel {
        match kernelize(&a, k) {
            KernelResult::No => (WecpOutcome::No, SolveStats::default()),
            KernelResult::Reduced(kernel) => {
                let (outcome, mut stats) = solve_bsddw(&kernel.matrix, kernel.budget, opts)?;
                stats.kernel_vertices = Some(kernel.matrix.dim());
                let outcome = match outcome {
                    BsdOutcome::Solution(b) => {
                        let lifted = lift_solution(&b, &kernel.lift)?;
                        debug_assert_eq!(verify_bsd(&a, &lifted, k), Ok(true));
                        WecpOutcome::Partition(matrix_to_cliques(&lifted))
                    }
                    BsdOutcome::No => WecpOutcome::No,
                    BsdOutcome::Timeout => WecpOutcome::Timeout,
                };
                (outcome, stats)
            }
        }
    } else {
        let (outcome, stats) = solve_bsddw(&a, k, opts)?;
        let outcome = match outcome {
            BsdOutcome::Solution(b) => WecpOutcome::Partition(matrix_to_cliques(&b)),
            BsdOutcome::No => WecpOutcome::No,
            BsdOutcome::Timeout => WecpOutcome::Timeout,
        };
        (outcome, stats)
    };
    stats.wall_time = start.elapsed();
    Ok((outcome, stats))
}
