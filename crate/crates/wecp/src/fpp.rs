//! Finite projective planes and the split-graph instances they induce.
//!
//! A plane of order `N` has `N^2 + N + 1` points and as many sets, every
//! two points in exactly one common set, every two sets meeting in one
//! point, and four points in general position. The generator uses the
//! classical homogeneous-coordinate construction over GF(N): points and
//! sets are nonzero coordinate triples up to scalars, incident when
//! orthogonal.
//!
//! The derived graph takes one set as an independent set `I` and joins
//! everything else into a clique fully connected to `I`. Partitions of
//! its edges into at most `N^2 + N` cliques correspond exactly to planes
//! of order `N`, which makes the graph a structured hard instance with a
//! known certificate.

use thiserror::Error;

use crate::gf::{FieldError, GaloisField};
use crate::model::{
    awecp_violation, AwecpInstance, BinaryMatrix, CliquePartition, ModelError,
};
use crate::rank::{rank_from_fn, rank_of_bit_rows};

#[derive(Debug, Error)]
pub enum FppError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("plane order {0} exceeds the supported maximum of {1}")]
    OrderTooLarge(usize, usize),
    #[error("graph order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("incidence structure violates plane axioms: {0}")]
    InvalidPlane(String),
    #[error("invalid clique partition: {0}")]
    InvalidPartition(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Largest plane order the dense incidence representation accepts.
pub const MAX_PLANE_ORDER: usize = 128;

/// Bit-packed rectangular bit matrix; rows span several words.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRows {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitRows {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn row_count(&self, r: usize) -> u32 {
        self.row(r).iter().map(|w| w.count_ones()).sum()
    }

    fn intersection_count(&self, r1: usize, r2: usize) -> u32 {
        self.row(r1)
            .iter()
            .zip(self.row(r2))
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }
}

/// Element-set incidence structure of a finite projective plane; rows are
/// points, columns are sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FppPlane {
    order: usize,
    incidence: BitRows,
}

impl FppPlane {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of points, equal to the number of sets.
    pub fn size(&self) -> usize {
        self.incidence.rows
    }

    pub fn incident(&self, point: usize, set: usize) -> bool {
        self.incidence.get(point, set)
    }

    pub fn set_members(&self, set: usize) -> Vec<usize> {
        (0..self.size()).filter(|&p| self.incident(p, set)).collect()
    }

    pub fn sets_containing(&self, point: usize) -> Vec<usize> {
        (0..self.size()).filter(|&s| self.incident(point, s)).collect()
    }

    /// Exact rank of the incidence matrix over the rationals.
    pub fn rank(&self) -> usize {
        rank_from_fn(self.size(), self.size(), |r, c| self.incident(r, c))
    }

    fn from_sets(order: usize, size: usize, sets: &[Vec<usize>]) -> Self {
        let mut incidence = BitRows::new(size, sets.len());
        for (s, members) in sets.iter().enumerate() {
            for &p in members {
                incidence.set(p, s);
            }
        }
        FppPlane { order, incidence }
    }

    /// Checks every plane axiom: uniform set sizes and point degrees,
    /// unique common set per point pair, unique common point per set
    /// pair, a four-point witness in general position, and full rational
    /// rank of the incidence matrix.
    pub fn validate(&self) -> Result<(), FppError> {
        let n = self.order;
        let size = n * n + n + 1;
        if self.size() != size || self.incidence.cols != size {
            return Err(FppError::InvalidPlane(format!(
                "expected {size} points and sets for order {n}"
            )));
        }
        let mut columns = BitRows::new(size, size);
        for p in 0..size {
            for s in 0..size {
                if self.incident(p, s) {
                    columns.set(s, p);
                }
            }
        }
        for p in 0..size {
            if self.incidence.row_count(p) as usize != n + 1 {
                return Err(FppError::InvalidPlane(format!(
                    "point {p} lies in {} sets, expected {}",
                    self.incidence.row_count(p),
                    n + 1
                )));
            }
            if columns.row_count(p) as usize != n + 1 {
                return Err(FppError::InvalidPlane(format!(
                    "set {p} has {} members, expected {}",
                    columns.row_count(p),
                    n + 1
                )));
            }
        }
        for a in 0..size {
            for b in (a + 1)..size {
                if self.incidence.intersection_count(a, b) != 1 {
                    return Err(FppError::InvalidPlane(format!(
                        "points {a} and {b} share {} sets",
                        self.incidence.intersection_count(a, b)
                    )));
                }
                if columns.intersection_count(a, b) != 1 {
                    return Err(FppError::InvalidPlane(format!(
                        "sets {a} and {b} share {} points",
                        columns.intersection_count(a, b)
                    )));
                }
            }
        }
        if !self.has_general_position_witness(&columns) {
            return Err(FppError::InvalidPlane(
                "no four points avoid sharing sets three at a time".into(),
            ));
        }
        let rank = self.rank();
        if rank != size {
            return Err(FppError::InvalidPlane(format!(
                "incidence rank {rank}, expected full rank {size}"
            )));
        }
        Ok(())
    }

    fn has_general_position_witness(&self, columns: &BitRows) -> bool {
        let size = self.size();
        // Quadruple is in general position when no set contains three of
        // its points.
        let mut quad = [0usize; 4];
        fn search(
            columns: &BitRows,
            size: usize,
            quad: &mut [usize; 4],
            depth: usize,
            start: usize,
        ) -> bool {
            if depth == 4 {
                return true;
            }
            'next: for p in start..size {
                quad[depth] = p;
                if depth >= 2 {
                    // Any set already containing two chosen points must
                    // not contain this one as a third.
                    for i in 0..depth {
                        for j in (i + 1)..depth {
                            for s in 0..size {
                                if columns.get(s, quad[i])
                                    && columns.get(s, quad[j])
                                    && columns.get(s, p)
                                {
                                    continue 'next;
                                }
                            }
                        }
                    }
                }
                if search(columns, size, quad, depth + 1, p + 1) {
                    return true;
                }
            }
            false
        }
        search(columns, size, &mut quad, 0, 0)
    }
}

/// Standard construction of the plane of prime-power order `n` from
/// homogeneous coordinates over GF(n).
pub fn gen_fpp(order: usize) -> Result<FppPlane, FppError> {
    if order > MAX_PLANE_ORDER {
        return Err(FppError::OrderTooLarge(order, MAX_PLANE_ORDER));
    }
    let field = GaloisField::for_order(order as u32)?;
    let q = field.order();
    // Canonical representatives of the projective points: (1, y, z),
    // (0, 1, z), (0, 0, 1). Sets use the same triples as dual
    // coordinates; incidence is a vanishing dot product.
    let mut triples: Vec<[u32; 3]> = Vec::new();
    for y in 0..q {
        for z in 0..q {
            triples.push([1, y, z]);
        }
    }
    for z in 0..q {
        triples.push([0, 1, z]);
    }
    triples.push([0, 0, 1]);
    let size = triples.len();
    debug_assert_eq!(size, order * order + order + 1);
    let mut incidence = BitRows::new(size, size);
    for (p, point) in triples.iter().enumerate() {
        for (s, line) in triples.iter().enumerate() {
            let dot = field.add(
                field.add(field.mul(point[0], line[0]), field.mul(point[1], line[1])),
                field.mul(point[2], line[2]),
            );
            if dot == 0 {
                incidence.set(p, s);
            }
        }
    }
    Ok(FppPlane { order, incidence })
}

/// The split graph on `N^2 + N + 1` vertices: the first `N + 1` vertices
/// form an independent set, everything else is a clique, and all
/// cross edges are present. Unit weights, no annotations, budget
/// `N^2 + N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnInstance {
    pub order: usize,
    /// The independent set; always the first `order + 1` vertices.
    pub independent: Vec<usize>,
    pub instance: AwecpInstance,
}

pub fn gen_gn(order: usize) -> Result<GnInstance, FppError> {
    if order < 2 {
        return Err(FppError::OrderTooSmall(order));
    }
    if order > MAX_PLANE_ORDER {
        return Err(FppError::OrderTooLarge(order, MAX_PLANE_ORDER));
    }
    let n = order * order + order + 1;
    let independent: Vec<usize> = (0..=order).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if u > order || v > order {
                edges.push((u, v, 1));
            }
        }
    }
    debug_assert_eq!(edges.len(), order * order * (order + 1) * (order + 1) / 2);
    let instance = AwecpInstance::new(n, edges, [], order * order + order)?;
    Ok(GnInstance {
        order,
        independent,
        instance,
    })
}

/// Reads a plane as a clique partition of the split graph: the chosen
/// set becomes the independent set, every other set becomes one clique.
/// Points of the chosen set map to the independent vertices in sorted
/// order; the rest map to the clique side.
pub fn fpp_to_partition(plane: &FppPlane, set_for_independent: usize) -> CliquePartition {
    let size = plane.size();
    assert!(set_for_independent < size, "set index out of range");
    let chosen = plane.set_members(set_for_independent);
    let mut vertex_of_point = vec![usize::MAX; size];
    for (i, &p) in chosen.iter().enumerate() {
        vertex_of_point[p] = i;
    }
    let mut next = chosen.len();
    for vertex in vertex_of_point.iter_mut() {
        if *vertex == usize::MAX {
            *vertex = next;
            next += 1;
        }
    }
    let cliques: Vec<Vec<usize>> = (0..size)
        .filter(|&s| s != set_for_independent)
        .map(|s| {
            plane
                .set_members(s)
                .into_iter()
                .map(|p| vertex_of_point[p])
                .collect()
        })
        .collect();
    CliquePartition::new(cliques).expect("plane sets have no repeated points")
}

/// Reads a valid clique partition of the split graph back as a plane:
/// the clique vertex sets together with the independent set. Fails when
/// the partition does not solve the instance or the result violates the
/// plane axioms.
pub fn partition_to_fpp(sol: &CliquePartition, gn: &GnInstance) -> Result<FppPlane, FppError> {
    if let Some(violation) = awecp_violation(&gn.instance, sol)? {
        return Err(FppError::InvalidPartition(violation.to_string()));
    }
    let size = gn.instance.vertex_count();
    let mut sets: Vec<Vec<usize>> = sol.cliques().to_vec();
    sets.push(gn.independent.clone());
    if sets.len() != size {
        return Err(FppError::InvalidPlane(format!(
            "{} sets cannot form a plane on {size} points",
            sets.len()
        )));
    }
    let plane = FppPlane::from_sets(gn.order, size, &sets);
    plane.validate()?;
    Ok(plane)
}

/// Rank and ones statistics of a solution matrix's row bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisOnesReport {
    /// Rank over the rationals.
    pub rank: usize,
    pub total_ones: u64,
    /// Minimum ones over all row bases when `exact`, otherwise a lower
    /// bound obtained by discarding the heaviest non-basis rows.
    pub min_basis_ones: u64,
    pub exact: bool,
}

/// Measures how many ones any row basis of `b` must carry. Exact by
/// exhaustive subset search for up to 12 rows, a subtraction bound
/// beyond that.
pub fn basis_ones(b: &BinaryMatrix) -> BasisOnesReport {
    let rank = rank_of_bit_rows(b.row_masks(), b.cols());
    let total_ones = b.count_ones();
    let rows = b.rows();
    if rows == rank {
        return BasisOnesReport {
            rank,
            total_ones,
            min_basis_ones: total_ones,
            exact: true,
        };
    }
    if rows <= 12 {
        let mut best = u64::MAX;
        for subset in 0u32..1 << rows {
            if subset.count_ones() as usize != rank {
                continue;
            }
            let picked: Vec<u64> = (0..rows)
                .filter(|&r| subset >> r & 1 == 1)
                .map(|r| b.row(r))
                .collect();
            if rank_of_bit_rows(&picked, b.cols()) == rank {
                let ones: u64 = picked.iter().map(|m| u64::from(m.count_ones())).sum();
                best = best.min(ones);
            }
        }
        BasisOnesReport {
            rank,
            total_ones,
            min_basis_ones: best,
            exact: true,
        }
    } else {
        let mut weights: Vec<u64> = b
            .row_masks()
            .iter()
            .map(|m| u64::from(m.count_ones()))
            .collect();
        weights.sort_unstable_by(|a, b| b.cmp(a));
        let dropped: u64 = weights[..rows - rank].iter().sum();
        BasisOnesReport {
            rank,
            total_ones,
            min_basis_ones: total_ones - dropped,
            exact: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cliques_to_matrix, verify_awecp};

    #[test]
    fn fano_plane_structure() {
        let plane = gen_fpp(2).unwrap();
        assert_eq!(plane.size(), 7);
        assert_eq!(plane.rank(), 7);
        plane.validate().unwrap();
        for s in 0..7 {
            assert_eq!(plane.set_members(s).len(), 3);
        }
    }

    #[test]
    fn planes_up_to_order_five() {
        for (order, size, line) in [(3usize, 13usize, 4usize), (4, 21, 5), (5, 31, 6)] {
            let plane = gen_fpp(order).unwrap();
            assert_eq!(plane.size(), size);
            for s in 0..size {
                assert_eq!(plane.set_members(s).len(), line, "order {order}");
            }
            plane.validate().unwrap();
        }
    }

    #[test]
    fn rejects_non_prime_power_order() {
        assert!(matches!(
            gen_fpp(6),
            Err(FppError::Field(FieldError::NotPrimePower(6)))
        ));
        assert!(matches!(gen_fpp(1000), Err(FppError::OrderTooLarge(..))));
    }

    #[test]
    fn split_graph_shape() {
        let gn = gen_gn(2).unwrap();
        assert_eq!(gn.instance.vertex_count(), 7);
        assert_eq!(gn.instance.edge_count(), 18);
        assert_eq!(gn.instance.budget(), 6);
        assert_eq!(gn.independent, vec![0, 1, 2]);
        // Non-edges are exactly the pairs inside the independent set.
        let total_pairs = 7 * 6 / 2;
        assert_eq!(total_pairs - gn.instance.edge_count(), 3);

        let gn3 = gen_gn(3).unwrap();
        assert_eq!(gn3.instance.vertex_count(), 13);
        assert_eq!(gn3.instance.edge_count(), 72);
        assert_eq!(gn3.instance.budget(), 12);

        assert!(matches!(gen_gn(1), Err(FppError::OrderTooSmall(1))));
    }

    #[test]
    fn plane_partitions_split_graph() {
        for order in [2usize, 3] {
            let plane = gen_fpp(order).unwrap();
            let gn = gen_gn(order).unwrap();
            let partition = fpp_to_partition(&plane, 0);
            assert_eq!(partition.len(), order * order + order);
            for clique in partition.cliques() {
                assert_eq!(clique.len(), order + 1);
                let in_independent = clique.iter().filter(|&&v| v <= order).count();
                assert!(in_independent <= 1);
            }
            assert_eq!(verify_awecp(&gn.instance, &partition), Ok(true));
        }
    }

    #[test]
    fn partition_round_trips_to_plane() {
        let plane = gen_fpp(2).unwrap();
        let gn = gen_gn(2).unwrap();
        let partition = fpp_to_partition(&plane, 3);
        let rebuilt = partition_to_fpp(&partition, &gn).unwrap();
        rebuilt.validate().unwrap();
        assert_eq!(rebuilt.order(), 2);
    }

    #[test]
    fn partition_to_fpp_rejects_garbage() {
        let gn = gen_gn(2).unwrap();
        // An oversized clique cannot cover the edges exactly.
        let bogus = CliquePartition::new(vec![vec![0, 3, 4, 5]]).unwrap();
        assert!(matches!(
            partition_to_fpp(&bogus, &gn),
            Err(FppError::InvalidPartition(_))
        ));
    }

    #[test]
    fn basis_ones_identity() {
        let b = BinaryMatrix::from_row_masks(3, vec![0b001, 0b010, 0b100]);
        let report = basis_ones(&b);
        assert_eq!(report.rank, 3);
        assert_eq!(report.total_ones, 3);
        assert_eq!(report.min_basis_ones, 3);
        assert!(report.exact);
    }

    #[test]
    fn basis_ones_fano_solution() {
        let plane = gen_fpp(2).unwrap();
        let partition = fpp_to_partition(&plane, 0);
        let b = cliques_to_matrix(&partition, 7, 6).unwrap();
        let report = basis_ones(&b);
        assert_eq!(report.total_ones, 18); // k * (N + 1)
        assert_eq!(report.rank, 6);
        assert!(report.exact);
        // Dropping any single row keeps the rank, so the cheapest basis
        // discards one clique-side row of three ones.
        assert_eq!(report.min_basis_ones, 15);
        assert!(report.min_basis_ones >= 12); // k * (N + 1) - k
    }

    #[test]
    fn basis_ones_bound_path() {
        let plane = gen_fpp(3).unwrap();
        let gn = gen_gn(3).unwrap();
        let partition = fpp_to_partition(&plane, 0);
        let b = cliques_to_matrix(&partition, 13, 12).unwrap();
        let report = basis_ones(&b);
        assert_eq!(report.total_ones, 48);
        assert_eq!(report.rank, 12);
        assert!(!report.exact);
        assert_eq!(report.min_basis_ones, 44);
        assert!(report.min_basis_ones >= 36);
        assert_eq!(verify_awecp(&gn.instance, &partition), Ok(true));
    }
}
