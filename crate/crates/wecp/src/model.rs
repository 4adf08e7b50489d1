//! Core data types and the mappings between the two problem views.
//!
//! An annotated weighted instance asks for at most `k` cliques covering
//! every edge exactly as often as its weight and every annotated vertex
//! exactly as often as its vertex weight. The matrix view asks for a
//! binary matrix `B` with at most `k` columns such that `B * B^T` matches
//! the input matrix entrywise, where diagonal wildcards match anything.
//! Both directions of the instance mapping and the solution mapping live
//! here, together with the verifiers for each view.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

/// Widest supported solution matrix; rows are stored as single machine words.
pub const MAX_COLS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("matrix entry ({0},{1}) is not symmetric")]
    NotSymmetric(usize, usize),
    #[error("wildcard off the diagonal at ({0},{1})")]
    OffDiagonalWildcard(usize, usize),
    #[error("vertex {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} has zero weight")]
    ZeroWeight(usize, usize),
    #[error("duplicate vertex {0} in clique {1}")]
    DuplicateVertex(usize, usize),
    #[error("solution exceeds budget: {0} cliques with budget {1}")]
    BudgetExceeded(usize, usize),
    #[error("dimension mismatch: {0} rows against {1}")]
    DimensionMismatch(usize, usize),
    #[error("budget {0} exceeds the supported maximum of {1} columns")]
    BudgetTooLarge(usize, usize),
}

/// A matrix entry: a nonnegative integer or the diagonal wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WildcardEntry {
    Value(u32),
    Wildcard,
}

impl WildcardEntry {
    pub fn as_value(self) -> Option<u32> {
        match self {
            WildcardEntry::Value(v) => Some(v),
            WildcardEntry::Wildcard => None,
        }
    }

    pub fn is_wildcard(self) -> bool {
        matches!(self, WildcardEntry::Wildcard)
    }
}

impl fmt::Display for WildcardEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WildcardEntry::Value(v) => write!(f, "{v}"),
            WildcardEntry::Wildcard => write!(f, "*"),
        }
    }
}

/// Wildcard equality: values match if equal or if either side is the
/// wildcard. Not transitive through a wildcard in the middle.
pub fn wildcard_eq(a: WildcardEntry, b: WildcardEntry) -> bool {
    match (a, b) {
        (WildcardEntry::Wildcard, _) | (_, WildcardEntry::Wildcard) => true,
        (WildcardEntry::Value(x), WildcardEntry::Value(y)) => x == y,
    }
}

/// Symmetric nonnegative integer matrix whose diagonal entries may be
/// wildcards. Wildcards never appear off the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WildcardMatrix {
    n: usize,
    entries: Vec<WildcardEntry>,
}

impl WildcardMatrix {
    /// All off-diagonal entries zero, all diagonal entries wildcard.
    pub fn new(n: usize) -> Self {
        let mut entries = vec![WildcardEntry::Value(0); n * n];
        for i in 0..n {
            entries[i * n + i] = WildcardEntry::Wildcard;
        }
        WildcardMatrix { n, entries }
    }

    /// Builds a matrix from a generator, validating symmetry and wildcard
    /// placement.
    pub fn from_fn(
        n: usize,
        mut f: impl FnMut(usize, usize) -> WildcardEntry,
    ) -> Result<Self, ModelError> {
        let mut entries = vec![WildcardEntry::Value(0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = f(i, j);
            }
        }
        Self::from_entries(n, entries)
    }

    /// Builds a matrix from row-major entries, validating symmetry and
    /// wildcard placement.
    pub fn from_entries(n: usize, entries: Vec<WildcardEntry>) -> Result<Self, ModelError> {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(ModelError::NotSymmetric(i, j));
                }
                if entries[i * n + j].is_wildcard() {
                    return Err(ModelError::OffDiagonalWildcard(i, j));
                }
            }
        }
        Ok(WildcardMatrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> WildcardEntry {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[WildcardEntry] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn set_entry(&mut self, i: usize, j: usize, e: WildcardEntry) {
        self.entries[i * self.n + j] = e;
    }

    /// Largest integer entry anywhere in the matrix; 0 when every entry is
    /// zero or a wildcard.
    pub fn max_weight(&self) -> u32 {
        self.entries
            .iter()
            .filter_map(|e| e.as_value())
            .max()
            .unwrap_or(0)
    }

    /// True when vertex `v` has no incident edge (all off-diagonal entries
    /// in its row are zero).
    pub fn is_isolated(&self, v: usize) -> bool {
        self.row(v)
            .iter()
            .enumerate()
            .all(|(j, e)| j == v || *e == WildcardEntry::Value(0))
    }

    /// Sum of all integer entries on the upper triangle plus the integer
    /// diagonal entries. Any solution needs at most this many nonzero
    /// columns, which bounds the useful budget.
    pub(crate) fn total_slots(&self) -> u64 {
        let mut total = 0u64;
        for i in 0..self.n {
            for j in i..self.n {
                if let WildcardEntry::Value(v) = self.entry(i, j) {
                    total += u64::from(v);
                }
            }
        }
        total
    }
}

/// Graph instance: positive integer edge weights, an annotated vertex set
/// with required membership counts, and a clique budget.
///
/// Vertex annotations of weight zero are accepted; they force the vertex
/// into no clique at all and keep the matrix mapping a bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AwecpInstance {
    vertex_count: usize,
    edges: Vec<(usize, usize, u32)>,
    annotations: BTreeMap<usize, u32>,
    budget: usize,
}

impl AwecpInstance {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, u32)>,
        annotations: impl IntoIterator<Item = (usize, u32)>,
        budget: usize,
    ) -> Result<Self, ModelError> {
        let mut normalized = Vec::new();
        for (u, v, w) in edges {
            if u == v {
                return Err(ModelError::SelfLoop(u));
            }
            if u >= vertex_count {
                return Err(ModelError::VertexOutOfRange(u, vertex_count));
            }
            if v >= vertex_count {
                return Err(ModelError::VertexOutOfRange(v, vertex_count));
            }
            if w == 0 {
                return Err(ModelError::ZeroWeight(u, v));
            }
            normalized.push((u.min(v), u.max(v), w));
        }
        normalized.sort_unstable();
        for pair in normalized.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(ModelError::DuplicateEdge(pair[0].0, pair[0].1));
            }
        }
        let mut anns = BTreeMap::new();
        for (v, c) in annotations {
            if v >= vertex_count {
                return Err(ModelError::VertexOutOfRange(v, vertex_count));
            }
            anns.insert(v, c);
        }
        Ok(AwecpInstance {
            vertex_count,
            edges: normalized,
            annotations: anns,
            budget,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges normalised to `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    pub fn annotations(&self) -> &BTreeMap<usize, u32> {
        &self.annotations
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Ordered list of vertex sets, each expected to induce a clique in the
/// instance it solves. Singletons and empty cliques are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePartition {
    cliques: Vec<Vec<usize>>,
}

impl CliquePartition {
    /// Sorts each clique; rejects a vertex repeated within one clique.
    pub fn new(cliques: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let mut sorted = cliques;
        for (idx, clique) in sorted.iter_mut().enumerate() {
            clique.sort_unstable();
            for pair in clique.windows(2) {
                if pair[0] == pair[1] {
                    return Err(ModelError::DuplicateVertex(pair[0], idx));
                }
            }
        }
        Ok(CliquePartition { cliques: sorted })
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }
}

/// Dense binary matrix with up to [`MAX_COLS`] columns; each row is one
/// machine word with bit `j` giving membership in column `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_COLS, "at most {MAX_COLS} columns supported");
        BinaryMatrix {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn from_row_masks(cols: usize, masks: Vec<u64>) -> Self {
        assert!(cols <= MAX_COLS, "at most {MAX_COLS} columns supported");
        if cols < MAX_COLS {
            debug_assert!(masks.iter().all(|m| m >> cols == 0), "mask wider than cols");
        }
        BinaryMatrix {
            rows: masks.len(),
            cols,
            data: masks,
        }
    }

    /// Convenience constructor from 0/1 row slices.
    pub fn from_bits(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let masks = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.iter()
                    .enumerate()
                    .fold(0u64, |m, (j, &b)| m | (u64::from(b & 1) << j))
            })
            .collect();
        Self::from_row_masks(cols, masks)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub fn row_masks(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(j < self.cols);
        self.data[i] >> j & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|m| u64::from(m.count_ones())).sum()
    }

    /// Column `j` as a mask over rows. Only valid for at most 64 rows.
    pub fn column_mask(&self, j: usize) -> u64 {
        assert!(self.rows <= 64);
        let mut mask = 0u64;
        for (i, &row) in self.data.iter().enumerate() {
            mask |= (row >> j & 1) << i;
        }
        mask
    }
}

/// Maps a graph instance to its matrix form: edge weights off the
/// diagonal, annotation weights (or wildcards) on it.
pub fn awecp_to_bsddw(inst: &AwecpInstance) -> (WildcardMatrix, usize) {
    let mut m = WildcardMatrix::new(inst.vertex_count());
    for &(u, v, w) in inst.edges() {
        m.set_entry(u, v, WildcardEntry::Value(w));
        m.set_entry(v, u, WildcardEntry::Value(w));
    }
    for (&v, &c) in inst.annotations() {
        m.set_entry(v, v, WildcardEntry::Value(c));
    }
    (m, inst.budget())
}

/// Exact inverse of [`awecp_to_bsddw`].
pub fn bsddw_to_awecp(a: &WildcardMatrix, k: usize) -> AwecpInstance {
    let n = a.dim();
    let mut edges = Vec::new();
    let mut annotations = Vec::new();
    for u in 0..n {
        if let WildcardEntry::Value(c) = a.entry(u, u) {
            annotations.push((u, c));
        }
        for v in (u + 1)..n {
            if let WildcardEntry::Value(w) = a.entry(u, v) {
                if w > 0 {
                    edges.push((u, v, w));
                }
            }
        }
    }
    AwecpInstance::new(n, edges, annotations, k).expect("valid matrix maps to valid instance")
}

/// Membership incidence of a partition: entry `(u, j)` is set when vertex
/// `u` is in clique `j`. Columns beyond the partition length stay zero.
pub fn cliques_to_matrix(
    sol: &CliquePartition,
    n: usize,
    k: usize,
) -> Result<BinaryMatrix, ModelError> {
    if sol.len() > k {
        return Err(ModelError::BudgetExceeded(sol.len(), k));
    }
    if k > MAX_COLS {
        return Err(ModelError::BudgetTooLarge(k, MAX_COLS));
    }
    let mut masks = vec![0u64; n];
    for (j, clique) in sol.cliques().iter().enumerate() {
        for &u in clique {
            if u >= n {
                return Err(ModelError::VertexOutOfRange(u, n));
            }
            masks[u] |= 1 << j;
        }
    }
    Ok(BinaryMatrix::from_row_masks(k, masks))
}

/// Reads each nonzero column as one clique; all-zero columns are dropped.
pub fn matrix_to_cliques(b: &BinaryMatrix) -> CliquePartition {
    let mut cliques = Vec::new();
    for j in 0..b.cols() {
        let members: Vec<usize> = (0..b.rows()).filter(|&i| b.get(i, j)).collect();
        if !members.is_empty() {
            cliques.push(members);
        }
    }
    CliquePartition::new(cliques).expect("columns have no duplicate vertices")
}

/// True when `b` has at most `k` columns and `b * b^T` matches `a`
/// entrywise under wildcard equality.
pub fn verify_bsd(a: &WildcardMatrix, b: &BinaryMatrix, k: usize) -> Result<bool, ModelError> {
    if b.rows() != a.dim() {
        return Err(ModelError::DimensionMismatch(b.rows(), a.dim()));
    }
    if b.cols() > k {
        return Ok(false);
    }
    let n = a.dim();
    for i in 0..n {
        for j in i..n {
            let dot = (b.row(i) & b.row(j)).count_ones();
            if !wildcard_eq(WildcardEntry::Value(dot), a.entry(i, j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// First constraint a candidate partition violates, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BudgetExceeded { cliques: usize, budget: usize },
    NotAClique { clique: usize, u: usize, v: usize },
    CoverageMismatch { u: usize, v: usize, expected: u32, actual: u32 },
    AnnotationMismatch { v: usize, expected: u32, actual: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BudgetExceeded { cliques, budget } => {
                write!(f, "budget exceeded: {cliques} cliques with budget {budget}")
            }
            Violation::NotAClique { clique, u, v } => write!(
                f,
                "clique {} contains non-adjacent vertices {} and {}",
                clique + 1,
                u + 1,
                v + 1
            ),
            Violation::CoverageMismatch { u, v, expected, actual } => write!(
                f,
                "pair {}-{} covered {actual} times, expected {expected}",
                u + 1,
                v + 1
            ),
            Violation::AnnotationMismatch { v, expected, actual } => write!(
                f,
                "vertex {} appears in {actual} cliques, expected {expected}",
                v + 1
            ),
        }
    }
}

/// Checks a partition against an instance, reporting the first violated
/// constraint. `Ok(None)` means the partition is a valid solution.
pub fn awecp_violation(
    inst: &AwecpInstance,
    sol: &CliquePartition,
) -> Result<Option<Violation>, ModelError> {
    let n = inst.vertex_count();
    for clique in sol.cliques() {
        for &u in clique {
            if u >= n {
                return Err(ModelError::VertexOutOfRange(u, n));
            }
        }
    }
    if sol.len() > inst.budget() {
        return Ok(Some(Violation::BudgetExceeded {
            cliques: sol.len(),
            budget: inst.budget(),
        }));
    }
    let mut weight = HashMap::new();
    for &(u, v, w) in inst.edges() {
        weight.insert((u, v), w);
    }
    let mut cover: HashMap<(usize, usize), u32> = HashMap::new();
    let mut membership = vec![0u32; n];
    for (idx, clique) in sol.cliques().iter().enumerate() {
        for (a, &u) in clique.iter().enumerate() {
            membership[u] += 1;
            for &v in &clique[a + 1..] {
                if !weight.contains_key(&(u, v)) {
                    return Ok(Some(Violation::NotAClique { clique: idx, u, v }));
                }
                *cover.entry((u, v)).or_default() += 1;
            }
        }
    }
    for (&(u, v), &w) in &weight {
        let actual = cover.get(&(u, v)).copied().unwrap_or(0);
        if actual != w {
            return Ok(Some(Violation::CoverageMismatch { u, v, expected: w, actual }));
        }
    }
    // Cliques only ever cover adjacent pairs, so non-edges need no check
    // beyond the clique test above.
    for (&v, &c) in inst.annotations() {
        if membership[v] != c {
            return Ok(Some(Violation::AnnotationMismatch {
                v,
                expected: c,
                actual: membership[v],
            }));
        }
    }
    Ok(None)
}

/// True when the partition solves the instance exactly.
pub fn verify_awecp(inst: &AwecpInstance, sol: &CliquePartition) -> Result<bool, ModelError> {
    Ok(awecp_violation(inst, sol)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(k: usize) -> AwecpInstance {
        AwecpInstance::new(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)], [], k).unwrap()
    }

    fn star_k13(k: usize) -> AwecpInstance {
        AwecpInstance::new(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)], [], k).unwrap()
    }

    #[test]
    fn wildcard_eq_relation() {
        let v = WildcardEntry::Value;
        let star = WildcardEntry::Wildcard;
        assert!(wildcard_eq(v(3), v(3)));
        assert!(wildcard_eq(v(3), star));
        assert!(wildcard_eq(star, v(3)));
        assert!(wildcard_eq(star, star));
        assert!(!wildcard_eq(v(3), v(4)));
        // Symmetric on a small domain.
        for a in [v(0), v(1), v(2), star] {
            for b in [v(0), v(1), v(2), star] {
                assert_eq!(wildcard_eq(a, b), wildcard_eq(b, a));
            }
        }
        // Transitive only when the middle value is not a wildcard.
        assert!(wildcard_eq(v(1), star) && wildcard_eq(star, v(2)) && !wildcard_eq(v(1), v(2)));
        for a in [v(0), v(1), star] {
            for b in [v(0), v(1)] {
                for c in [v(0), v(1), star] {
                    if wildcard_eq(a, b) && wildcard_eq(b, c) {
                        assert!(wildcard_eq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_to_matrix() {
        let (m, k) = awecp_to_bsddw(&triangle(1));
        assert_eq!(k, 1);
        assert_eq!(m.dim(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j {
                    WildcardEntry::Wildcard
                } else {
                    WildcardEntry::Value(1)
                };
                assert_eq!(m.entry(i, j), expected);
            }
        }
    }

    #[test]
    fn weighted_edge_to_matrix() {
        let inst = AwecpInstance::new(2, [(0, 1, 2)], [], 2).unwrap();
        let (m, _) = awecp_to_bsddw(&inst);
        assert_eq!(m.entry(0, 1), WildcardEntry::Value(2));
        assert_eq!(m.entry(0, 0), WildcardEntry::Wildcard);
        assert_eq!(m.entry(1, 1), WildcardEntry::Wildcard);
    }

    #[test]
    fn annotated_singleton_to_matrix() {
        let inst = AwecpInstance::new(1, [], [(0, 3)], 3).unwrap();
        let (m, k) = awecp_to_bsddw(&inst);
        assert_eq!(m.dim(), 1);
        assert_eq!(k, 3);
        assert_eq!(m.entry(0, 0), WildcardEntry::Value(3));
    }

    #[test]
    fn matrix_to_instance() {
        let m = WildcardMatrix::from_fn(2, |i, j| {
            if i == j {
                WildcardEntry::Wildcard
            } else {
                WildcardEntry::Value(2)
            }
        })
        .unwrap();
        let inst = bsddw_to_awecp(&m, 2);
        assert_eq!(inst.edges(), &[(0, 1, 2)]);
        assert!(inst.annotations().is_empty());

        let m2 = WildcardMatrix::from_entries(
            2,
            vec![
                WildcardEntry::Value(1),
                WildcardEntry::Value(0),
                WildcardEntry::Value(0),
                WildcardEntry::Wildcard,
            ],
        )
        .unwrap();
        let inst2 = bsddw_to_awecp(&m2, 1);
        assert!(inst2.edges().is_empty());
        assert_eq!(inst2.annotations().get(&0), Some(&1));
    }

    #[test]
    fn round_trip_identity() {
        let inst = AwecpInstance::new(
            5,
            [(0, 1, 2), (1, 2, 1), (3, 4, 3)],
            [(0, 2), (4, 1)],
            4,
        )
        .unwrap();
        let (m, k) = awecp_to_bsddw(&inst);
        assert_eq!(bsddw_to_awecp(&m, k), inst);
        let (m2, k2) = awecp_to_bsddw(&bsddw_to_awecp(&m, k));
        assert_eq!((m2, k2), (m, k));
    }

    #[test]
    fn cliques_to_matrix_examples() {
        let sol = CliquePartition::new(vec![vec![0, 1, 2]]).unwrap();
        let b = cliques_to_matrix(&sol, 3, 1).unwrap();
        assert_eq!(b.row_masks(), &[1, 1, 1]);

        let sol = CliquePartition::new(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let b = cliques_to_matrix(&sol, 3, 2).unwrap();
        assert_eq!(b.row_masks(), &[0b01, 0b11, 0b10]);

        let sol = CliquePartition::new(vec![]).unwrap();
        let b = cliques_to_matrix(&sol, 2, 1).unwrap();
        assert_eq!(b.row_masks(), &[0, 0]);
        assert_eq!(b.cols(), 1);

        let sol = CliquePartition::new(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(
            cliques_to_matrix(&sol, 2, 1),
            Err(ModelError::BudgetExceeded(2, 1))
        );
    }

    #[test]
    fn matrix_to_cliques_examples() {
        let b = BinaryMatrix::from_row_masks(1, vec![1, 1, 1]);
        assert_eq!(matrix_to_cliques(&b).cliques(), &[vec![0, 1, 2]]);

        let b = BinaryMatrix::zero(2, 2);
        assert!(matrix_to_cliques(&b).is_empty());

        let b = BinaryMatrix::from_row_masks(2, vec![0b01, 0b11, 0b10]);
        assert_eq!(matrix_to_cliques(&b).cliques(), &[vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn drop_empty_columns_round_trip() {
        let sol = CliquePartition::new(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let b = cliques_to_matrix(&sol, 3, 4).unwrap();
        assert_eq!(matrix_to_cliques(&b), sol);
    }

    #[test]
    fn verify_bsd_examples() {
        let (tri, _) = awecp_to_bsddw(&triangle(1));
        let ones = BinaryMatrix::from_row_masks(1, vec![1, 1, 1]);
        assert_eq!(verify_bsd(&tri, &ones, 1), Ok(true));

        let edge2 = WildcardMatrix::from_fn(2, |i, j| {
            if i == j {
                WildcardEntry::Wildcard
            } else {
                WildcardEntry::Value(2)
            }
        })
        .unwrap();
        let b = BinaryMatrix::from_row_masks(2, vec![0b11, 0b11]);
        assert_eq!(verify_bsd(&edge2, &b, 2), Ok(true));

        let path = awecp_to_bsddw(&AwecpInstance::new(3, [(0, 1, 1), (1, 2, 1)], [], 1).unwrap()).0;
        let ones = BinaryMatrix::from_row_masks(1, vec![1, 1, 1]);
        assert_eq!(verify_bsd(&path, &ones, 1), Ok(false));

        let short = BinaryMatrix::from_row_masks(1, vec![1, 1]);
        assert_eq!(
            verify_bsd(&path, &short, 1),
            Err(ModelError::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn verify_bsd_rejects_wide_matrix() {
        let (tri, _) = awecp_to_bsddw(&triangle(1));
        let b = BinaryMatrix::from_row_masks(2, vec![0b01, 0b01, 0b01]);
        assert_eq!(verify_bsd(&tri, &b, 1), Ok(false));
        assert_eq!(verify_bsd(&tri, &b, 2), Ok(true));
    }

    #[test]
    fn verify_awecp_examples() {
        let sol = CliquePartition::new(vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(verify_awecp(&triangle(1), &sol), Ok(true));

        let star = star_k13(3);
        let sol =
            CliquePartition::new(vec![vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        assert_eq!(verify_awecp(&star, &sol), Ok(true));

        let heavy = AwecpInstance::new(2, [(0, 1, 2)], [], 2).unwrap();
        let sol = CliquePartition::new(vec![vec![0, 1]]).unwrap();
        assert_eq!(verify_awecp(&heavy, &sol), Ok(false));
        assert_eq!(
            awecp_violation(&heavy, &sol),
            Ok(Some(Violation::CoverageMismatch {
                u: 0,
                v: 1,
                expected: 2,
                actual: 1
            }))
        );

        let sol = CliquePartition::new(vec![vec![0, 5]]).unwrap();
        assert_eq!(
            verify_awecp(&heavy, &sol),
            Err(ModelError::VertexOutOfRange(5, 2))
        );
    }

    #[test]
    fn verify_awecp_annotations() {
        let inst = AwecpInstance::new(2, [(0, 1, 1)], [(0, 2)], 2).unwrap();
        let once = CliquePartition::new(vec![vec![0, 1]]).unwrap();
        assert_eq!(verify_awecp(&inst, &once), Ok(false));
        let fixed = CliquePartition::new(vec![vec![0, 1], vec![0]]).unwrap();
        assert_eq!(verify_awecp(&inst, &fixed), Ok(true));
        // Zero-weight annotation pins the vertex out of every clique.
        let zero = AwecpInstance::new(2, [], [(1, 0)], 1).unwrap();
        let empty = CliquePartition::new(vec![]).unwrap();
        assert_eq!(verify_awecp(&zero, &empty), Ok(true));
        let bad = CliquePartition::new(vec![vec![1]]).unwrap();
        assert_eq!(verify_awecp(&zero, &bad), Ok(false));
    }

    #[test]
    fn max_weight_cases() {
        let all_star = WildcardMatrix::new(3);
        assert_eq!(all_star.max_weight(), 0);
        let (m, _) = awecp_to_bsddw(&AwecpInstance::new(2, [(0, 1, 7)], [(0, 9)], 1).unwrap());
        assert_eq!(m.max_weight(), 9);
    }

    #[test]
    fn instance_validation() {
        assert_eq!(
            AwecpInstance::new(2, [(0, 0, 1)], [], 1),
            Err(ModelError::SelfLoop(0))
        );
        assert_eq!(
            AwecpInstance::new(2, [(0, 1, 1), (1, 0, 2)], [], 1),
            Err(ModelError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            AwecpInstance::new(2, [(0, 1, 0)], [], 1),
            Err(ModelError::ZeroWeight(0, 1))
        );
        assert_eq!(
            AwecpInstance::new(2, [(0, 3, 1)], [], 1),
            Err(ModelError::VertexOutOfRange(3, 2))
        );
    }

    #[test]
    fn matrix_validation() {
        let bad = WildcardMatrix::from_entries(
            2,
            vec![
                WildcardEntry::Wildcard,
                WildcardEntry::Value(1),
                WildcardEntry::Value(2),
                WildcardEntry::Wildcard,
            ],
        );
        assert_eq!(bad, Err(ModelError::NotSymmetric(0, 1)));
        let bad = WildcardMatrix::from_entries(
            2,
            vec![
                WildcardEntry::Wildcard,
                WildcardEntry::Wildcard,
                WildcardEntry::Wildcard,
                WildcardEntry::Wildcard,
            ],
        );
        assert_eq!(bad, Err(ModelError::OffDiagonalWildcard(0, 1)));
    }
}
