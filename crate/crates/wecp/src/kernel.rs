//! Twin-block kernelization.
//!
//! Two distinct vertices are twins when they are adjacent and their matrix
//! rows agree entrywise under wildcard equality. Twins form equivalence
//! classes called blocks. A solvable instance has at most `2^k` blocks
//! (rule 1 answers NO otherwise), and any block larger than `2^k` can be
//! collapsed to a single representative whose diagonal is pinned to the
//! block's common entry (rule 2). The result has at most `4^k` vertices
//! and preserves solvability in both directions; a solution of the kernel
//! lifts back by copying the representative's row to every block member.

use crate::model::{BinaryMatrix, ModelError, WildcardEntry, WildcardMatrix};

/// Equivalence classes of the twin relation, singletons included. Blocks
/// are ordered by smallest member; members are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Exact twin test: adjacent, rows equal off both diagonals, and each
/// diagonal either a wildcard or the common edge weight.
pub fn are_twins(a: &WildcardMatrix, u: usize, v: usize) -> bool {
    debug_assert_ne!(u, v);
    let alpha = match a.entry(u, v) {
        WildcardEntry::Value(0) | WildcardEntry::Wildcard => return false,
        WildcardEntry::Value(w) => w,
    };
    let (ru, rv) = (a.row(u), a.row(v));
    for z in 0..a.dim() {
        if z == u || z == v {
            continue;
        }
        if ru[z] != rv[z] {
            return false;
        }
    }
    let alpha = WildcardEntry::Value(alpha);
    crate::model::wildcard_eq(a.entry(u, u), alpha) && crate::model::wildcard_eq(a.entry(v, v), alpha)
}

/// Groups vertices into twin blocks.
///
/// Rows are first bucketed by the multiset of their off-diagonal entries,
/// which twins always share. Inside a bucket each vertex is tested
/// against one representative per class found so far; transitivity of
/// the twin relation makes the single-representative check exact.
pub fn compute_blocks(a: &WildcardMatrix) -> BlockPartition {
    let n = a.dim();
    let mut buckets: std::collections::HashMap<Vec<u32>, Vec<usize>> =
        std::collections::HashMap::new();
    for u in 0..n {
        let mut key: Vec<u32> = (0..n)
            .filter(|&z| z != u)
            .map(|z| a.entry(u, z).as_value().expect("off-diagonal is integer"))
            .collect();
        key.sort_unstable();
        buckets.entry(key).or_default().push(u);
    }
    let mut dsu = Dsu::new(n);
    for group in buckets.values() {
        let mut reps: Vec<usize> = Vec::new();
        for &v in group {
            match reps.iter().find(|&&rep| are_twins(a, rep, v)) {
                Some(&rep) => dsu.union(rep, v),
                None => reps.push(v),
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> =
        std::collections::BTreeMap::new();
    for u in 0..n {
        by_root.entry(dsu.find(u)).or_default().push(u);
    }
    BlockPartition {
        blocks: by_root.into_values().collect(),
    }
}

/// `count > 2^k`, avoiding overflow for large budgets.
fn exceeds_pow2(count: usize, k: usize) -> bool {
    if k >= usize::BITS as usize - 1 {
        false
    } else {
        count > 1usize << k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule1Verdict {
    /// More than `2^k` blocks: the instance has no solution.
    No,
    Continue,
}

/// Rejects instances with more than `2^k` blocks.
pub fn apply_rule1(blocks: &BlockPartition, k: usize) -> Rule1Verdict {
    if exceeds_pow2(blocks.len(), k) {
        Rule1Verdict::No
    } else {
        Rule1Verdict::Continue
    }
}

/// Result of collapsing oversized blocks.
#[derive(Debug, Clone)]
pub struct Rule2Outcome {
    pub matrix: WildcardMatrix,
    /// Input vertex index to its vertex in the collapsed matrix.
    pub kernel_of: Vec<usize>,
}

/// Collapses every block larger than `2^k` to its lowest-id member and
/// pins that representative's diagonal to the block's common entry.
pub fn apply_rule2(a: &WildcardMatrix, blocks: &BlockPartition, k: usize) -> Rule2Outcome {
    let n = a.dim();
    let mut keep = vec![true; n];
    let mut pinned_diag: Vec<Option<WildcardEntry>> = vec![None; n];
    for block in blocks.blocks() {
        if exceeds_pow2(block.len(), k) {
            let rep = block[0];
            let second = block[1];
            pinned_diag[rep] = Some(a.entry(second, rep));
            for &other in &block[1..] {
                keep[other] = false;
            }
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&u| keep[u]).collect();
    let mut index_of = vec![usize::MAX; n];
    for (new, &old) in kept.iter().enumerate() {
        index_of[old] = new;
    }
    let matrix = WildcardMatrix::from_fn(kept.len(), |i, j| {
        let (u, v) = (kept[i], kept[j]);
        if u == v {
            pinned_diag[u].unwrap_or_else(|| a.entry(u, u))
        } else {
            a.entry(u, v)
        }
    })
    .expect("submatrix of a valid matrix is valid");
    let mut kernel_of = vec![usize::MAX; n];
    for block in blocks.blocks() {
        let rep = block[0];
        for &u in block {
            kernel_of[u] = index_of[if keep[u] { u } else { rep }];
        }
    }
    Rule2Outcome { matrix, kernel_of }
}

/// Vertices removed or collapsed on the way to the kernel. Maps every
/// original vertex either to its kernel vertex or to `None` when its
/// solution row is forced to all zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftMap {
    kernel_n: usize,
    targets: Vec<Option<usize>>,
}

impl LiftMap {
    pub fn new(kernel_n: usize, targets: Vec<Option<usize>>) -> Self {
        assert!(
            targets.iter().flatten().all(|&t| t < kernel_n),
            "targets must address kernel vertices"
        );
        LiftMap { kernel_n, targets }
    }

    pub fn identity(n: usize) -> Self {
        LiftMap {
            kernel_n: n,
            targets: (0..n).map(Some).collect(),
        }
    }

    pub fn original_n(&self) -> usize {
        self.targets.len()
    }

    pub fn kernel_n(&self) -> usize {
        self.kernel_n
    }

    /// Kernel vertex backing the original vertex, or `None` for a removed
    /// isolated vertex whose row lifts to all zeros.
    pub fn target(&self, original: usize) -> Option<usize> {
        self.targets[original]
    }
}

#[derive(Debug, Clone)]
pub struct Kernel {
    pub matrix: WildcardMatrix,
    pub budget: usize,
    pub lift: LiftMap,
}

#[derive(Debug, Clone)]
pub enum KernelResult {
    /// Rule 1 proved the instance unsolvable.
    No,
    Reduced(Kernel),
}

impl KernelResult {
    pub fn as_kernel(&self) -> Option<&Kernel> {
        match self {
            KernelResult::Reduced(k) => Some(k),
            KernelResult::No => None,
        }
    }

    pub fn is_no(&self) -> bool {
        matches!(self, KernelResult::No)
    }
}

/// Pre-pass result: isolated vertices with a wildcard or zero diagonal
/// are dropped since their solution row is forced to all zeros.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub matrix: WildcardMatrix,
    /// Original index of each surviving vertex, ascending.
    pub kept: Vec<usize>,
    /// Original indices of the removed vertices.
    pub removed: Vec<usize>,
}

pub fn preprocess(a: &WildcardMatrix) -> Preprocessed {
    let n = a.dim();
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for v in 0..n {
        let droppable = a.is_isolated(v)
            && matches!(
                a.entry(v, v),
                WildcardEntry::Wildcard | WildcardEntry::Value(0)
            );
        if droppable {
            removed.push(v);
        } else {
            kept.push(v);
        }
    }
    let matrix = WildcardMatrix::from_fn(kept.len(), |i, j| a.entry(kept[i], kept[j]))
        .expect("submatrix of a valid matrix is valid");
    Preprocessed { matrix, kept, removed }
}

/// Full kernelization: preprocess, group blocks, apply both rules once.
/// Block structure is invariant under rule 2, so a single pass is
/// exhaustive; `kernelize` is idempotent.
pub fn kernelize(a: &WildcardMatrix, k: usize) -> KernelResult {
    let pre = preprocess(a);
    let blocks = compute_blocks(&pre.matrix);
    if apply_rule1(&blocks, k) == Rule1Verdict::No {
        return KernelResult::No;
    }
    let rule2 = apply_rule2(&pre.matrix, &blocks, k);
    let mut targets = vec![None; a.dim()];
    for (pre_idx, &orig) in pre.kept.iter().enumerate() {
        targets[orig] = Some(rule2.kernel_of[pre_idx]);
    }
    let kernel_n = rule2.matrix.dim();
    KernelResult::Reduced(Kernel {
        matrix: rule2.matrix,
        budget: k,
        lift: LiftMap { kernel_n, targets },
    })
}

/// Expands a kernel solution to the original instance: block members copy
/// their representative's row, removed vertices get the zero row.
pub fn lift_solution(b: &BinaryMatrix, lift: &LiftMap) -> Result<BinaryMatrix, ModelError> {
    if b.rows() != lift.kernel_n() {
        return Err(ModelError::DimensionMismatch(b.rows(), lift.kernel_n()));
    }
    let masks = (0..lift.original_n())
        .map(|v| lift.target(v).map_or(0, |t| b.row(t)))
        .collect();
    Ok(BinaryMatrix::from_row_masks(b.cols(), masks))
}
