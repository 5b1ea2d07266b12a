//! Score-preserving simplifications of partially assigned boards.
//!
//! Two positions are completion-equivalent when, under a bijection between
//! their unassigned vertices, every way of finishing one gives the same
//! final score as the corresponding way of finishing the other. Because the
//! move trees are then isomorphic, both positions also have the same game
//! value for the same player to move.
//!
//! Every reduction here returns a new [`Position`] together with an
//! old-to-new index map. A removed vertex maps to nothing, a duplicated one
//! to both copies.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{build_family, disjoint_union, FamilySpec};
use crate::game::{completed_score, Cell, Sign};
use crate::graph::Graph;

/// Default cap on unassigned vertices for [`check_completion_equivalence`].
pub const EQUIVALENCE_BUDGET: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("the two vertices must differ")]
    SameVertex,
    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),
    #[error("leaves {0} and {1} hang off different vertices")]
    DifferentNeighbors(usize, usize),
    #[error("vertex {0} is unassigned")]
    Unassigned(usize),
    #[error("vertices {0} and {1} do not carry opposite signs")]
    NotOpposite(usize, usize),
    #[error("the board is not a path numbered 0..n")]
    NotAPath,
    #[error("the board is not a cycle numbered 0..n")]
    NotACycle,
    #[error("vertex {0} is an endpoint, not an internal path vertex")]
    Endpoint(usize),
    #[error("the board is not the complete multipartite graph with parts {0:?}")]
    NotMultipartite(Vec<usize>),
    #[error("vertices {0} and {1} lie in different parts")]
    DifferentParts(usize, usize),
    #[error("malformed correspondence: {0}")]
    BadCorrespondence(String),
    #[error("{unassigned} unassigned vertices exceed the enumeration budget of {budget}")]
    BudgetExceeded { unassigned: usize, budget: usize },
    #[error("{got} cells for a board with {expected} vertices")]
    CellCount { expected: usize, got: usize },
}

/// A board with some vertices assigned and no turn information.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    pub graph: Graph,
    pub cells: Vec<Cell>,
}

impl Position {
    pub fn new(graph: Graph, cells: Vec<Cell>) -> Result<Self, ReductionError> {
        if cells.len() != graph.vertex_count() {
            return Err(ReductionError::CellCount {
                expected: graph.vertex_count(),
                got: cells.len(),
            });
        }
        Ok(Position { graph, cells })
    }

    pub fn empty(graph: Graph) -> Self {
        let n = graph.vertex_count();
        Position {
            graph,
            cells: vec![None; n],
        }
    }

    pub fn unassigned(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&v| self.cells[v].is_none())
            .collect()
    }

    fn vertex(&self, v: usize) -> Result<(), ReductionError> {
        if v >= self.cells.len() {
            Err(ReductionError::OutOfRange(v))
        } else {
            Ok(())
        }
    }

    fn sign(&self, v: usize) -> Result<Sign, ReductionError> {
        self.vertex(v)?;
        self.cells[v].ok_or(ReductionError::Unassigned(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub position: Position,
    /// `index_map[old]` lists the new indices of vertex `old`.
    pub index_map: Vec<Vec<usize>>,
}

impl Reduction {
    /// The bijection between unassigned vertices induced by the index map,
    /// as `(old, new)` pairs.
    pub fn correspondence(&self, original: &Position) -> Vec<(usize, usize)> {
        original
            .unassigned()
            .into_iter()
            .filter_map(|v| match self.index_map[v].as_slice() {
                [new] => Some((v, *new)),
                _ => None,
            })
            .collect()
    }
}

fn remove_vertices(pos: &Position, drop: &[usize]) -> Reduction {
    let keep: Vec<usize> = (0..pos.cells.len()).filter(|v| !drop.contains(v)).collect();
    let mut index_map = vec![Vec::new(); pos.cells.len()];
    for (new, &old) in keep.iter().enumerate() {
        index_map[old].push(new);
    }
    Reduction {
        position: Position {
            graph: pos.graph.induced(&keep),
            cells: keep.iter().map(|&v| pos.cells[v]).collect(),
        },
        index_map,
    }
}

fn opposite(pos: &Position, a: usize, b: usize) -> Result<(), ReductionError> {
    if a == b {
        return Err(ReductionError::SameVertex);
    }
    let (sa, sb) = (pos.sign(a)?, pos.sign(b)?);
    if sa == sb {
        return Err(ReductionError::NotOpposite(a, b));
    }
    Ok(())
}

/// Drops two leaves that share a neighbour and carry opposite signs: their
/// two edges always score `x*c + (-x)*c = 0`.
pub fn cancel_opposite_leaves(
    pos: &Position,
    leaf_a: usize,
    leaf_b: usize,
) -> Result<Reduction, ReductionError> {
    pos.vertex(leaf_a)?;
    pos.vertex(leaf_b)?;
    if leaf_a == leaf_b {
        return Err(ReductionError::SameVertex);
    }
    for v in [leaf_a, leaf_b] {
        if pos.graph.degree(v) != 1 {
            return Err(ReductionError::NotALeaf(v));
        }
    }
    if pos.graph.neighbors(leaf_a) != pos.graph.neighbors(leaf_b) {
        return Err(ReductionError::DifferentNeighbors(leaf_a, leaf_b));
    }
    opposite(pos, leaf_a, leaf_b)?;
    Ok(remove_vertices(pos, &[leaf_a, leaf_b]))
}

fn is_family(g: &Graph, spec: FamilySpec) -> bool {
    build_family(&spec).is_ok_and(|h| &h == g)
}

/// Splits a path at an assigned internal vertex `i` into the paths on
/// `0..=i` and `i..n`, duplicating vertex `i` into both with its sign.
pub fn split_path_at_assigned(pos: &Position, i: usize) -> Result<Reduction, ReductionError> {
    let n = pos.cells.len();
    if n < 2 || !is_family(&pos.graph, FamilySpec::Path(n)) {
        return Err(ReductionError::NotAPath);
    }
    pos.vertex(i)?;
    if i == 0 || i == n - 1 {
        return Err(ReductionError::Endpoint(i));
    }
    pos.sign(i)?;
    let left = build_family(&FamilySpec::Path(i + 1)).expect("i >= 1");
    let right = build_family(&FamilySpec::Path(n - i)).expect("i <= n - 2");
    let graph = disjoint_union(&[left, right]);
    let mut cells = pos.cells[..=i].to_vec();
    cells.extend_from_slice(&pos.cells[i..]);
    let index_map = (0..n)
        .map(|j| match j.cmp(&i) {
            std::cmp::Ordering::Less => vec![j],
            std::cmp::Ordering::Equal => vec![i, i + 1],
            std::cmp::Ordering::Greater => vec![j + 1],
        })
        .collect();
    Ok(Reduction {
        position: Position { graph, cells },
        index_map,
    })
}

/// Cuts a cycle open at an assigned vertex `v`, giving the path
/// `v, v+1, ..., v-1, v` on `n + 1` vertices whose two ends both carry `v`'s
/// sign.
pub fn open_cycle(pos: &Position, v: usize) -> Result<Reduction, ReductionError> {
    let n = pos.cells.len();
    if n < 3 || !is_family(&pos.graph, FamilySpec::Cycle(n)) {
        return Err(ReductionError::NotACycle);
    }
    let sign = pos.sign(v)?;
    let graph = build_family(&FamilySpec::Path(n + 1)).expect("n >= 3");
    let mut cells: Vec<Cell> = (0..n).map(|k| pos.cells[(v + k) % n]).collect();
    cells.push(Some(sign));
    let mut index_map: Vec<Vec<usize>> = (0..n).map(|old| vec![(old + n - v) % n]).collect();
    index_map[v].push(n);
    Ok(Reduction {
        position: Position { graph, cells },
        index_map,
    })
}

/// Removes two same-part vertices with opposite signs from a complete
/// multipartite board: against any vertex `w` of another part they score
/// `x*w + (-x)*w = 0`. Returns the reduction and the new part sizes (a part
/// may become empty).
pub fn cancel_bipartite_pair(
    pos: &Position,
    part_sizes: &[usize],
    u: usize,
    v: usize,
) -> Result<(Reduction, Vec<usize>), ReductionError> {
    if part_sizes.len() < 2
        || !is_family(
            &pos.graph,
            FamilySpec::CompleteMultipartite(part_sizes.to_vec()),
        )
    {
        return Err(ReductionError::NotMultipartite(part_sizes.to_vec()));
    }
    pos.vertex(u)?;
    pos.vertex(v)?;
    let part_of = |x: usize| {
        let mut acc = 0;
        part_sizes
            .iter()
            .position(|&size| {
                acc += size;
                x < acc
            })
            .expect("vertex in range")
    };
    if u != v && part_of(u) != part_of(v) {
        return Err(ReductionError::DifferentParts(u, v));
    }
    opposite(pos, u, v)?;
    let mut parts = part_sizes.to_vec();
    parts[part_of(u)] -= 2;
    Ok((remove_vertices(pos, &[u, v]), parts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Signs given to the first position's unassigned vertices, in
    /// correspondence order.
    pub completion: Vec<Sign>,
    pub score1: i64,
    pub score2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub completions_checked: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<Mismatch>,
}

/// Enumerates every completion of `p1`'s unassigned vertices, mirrors it onto
/// `p2` through `correspondence` (pairs `(vertex in p1, vertex in p2)`), and
/// compares the final scores.
pub fn check_completion_equivalence(
    p1: &Position,
    p2: &Position,
    correspondence: &[(usize, usize)],
) -> Result<EquivalenceReport, ReductionError> {
    let bad = |msg: String| Err(ReductionError::BadCorrespondence(msg));
    let free1 = p1.unassigned();
    let free2 = p2.unassigned();
    if correspondence.len() != free1.len() || correspondence.len() != free2.len() {
        return bad(format!(
            "{} pairs for {} and {} unassigned vertices",
            correspondence.len(),
            free1.len(),
            free2.len()
        ));
    }
    let mut seen1 = vec![false; p1.cells.len()];
    let mut seen2 = vec![false; p2.cells.len()];
    for &(a, b) in correspondence {
        if a >= p1.cells.len() || p1.cells[a].is_some() || seen1[a] {
            return bad(format!(
                "vertex {a} is not a distinct unassigned vertex of the first position"
            ));
        }
        if b >= p2.cells.len() || p2.cells[b].is_some() || seen2[b] {
            return bad(format!(
                "vertex {b} is not a distinct unassigned vertex of the second position"
            ));
        }
        seen1[a] = true;
        seen2[b] = true;
    }
    let u = correspondence.len();
    if u > EQUIVALENCE_BUDGET {
        return Err(ReductionError::BudgetExceeded {
            unassigned: u,
            budget: EQUIVALENCE_BUDGET,
        });
    }

    let mut c1 = p1.cells.clone();
    let mut c2 = p2.cells.clone();
    let mut mismatches = 0;
    let mut first_mismatch = None;
    for mask in 0u64..(1 << u) {
        let mut completion = Vec::with_capacity(u);
        for (bit, &(a, b)) in correspondence.iter().enumerate() {
            let s = if mask >> bit & 1 == 1 {
                Sign::Minus
            } else {
                Sign::Plus
            };
            c1[a] = Some(s);
            c2[b] = Some(s);
            completion.push(s);
        }
        let score1 = completed_score(&p1.graph, &c1);
        let score2 = completed_score(&p2.graph, &c2);
        if score1 != score2 {
            mismatches += 1;
            first_mismatch.get_or_insert(Mismatch {
                completion,
                score1,
                score2,
            });
        }
    }
    Ok(EquivalenceReport {
        equivalent: mismatches == 0,
        completions_checked: 1 << u,
        mismatches,
        first_mismatch,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    /// Edge `i` joins path vertices `i` and `i + 1`.
    pub edges: Range<usize>,
    pub endvertices: (usize, usize),
    pub interior: Vec<usize>,
}

impl Segment {
    fn new(edges: Range<usize>) -> Self {
        Segment {
            endvertices: (edges.start, edges.end),
            interior: (edges.start + 1..edges.end).collect(),
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Blocks of four consecutive edges of the path on `n + 1` vertices obtained
/// by opening `C_n`, followed by one block of the remaining `n mod 4` edges
/// when that is nonzero. Vertices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentDecomposition {
    pub four_segments: Vec<Segment>,
    pub k_segment: Option<Segment>,
}

impl SegmentDecomposition {
    pub fn segments(&self) -> impl Iterator<Item = &Segment> {
        self.four_segments.iter().chain(self.k_segment.as_ref())
    }

    /// Distinct endvertices in path order.
    pub fn endvertices(&self) -> Vec<usize> {
        let mut ends: Vec<usize> = self
            .segments()
            .flat_map(|s| [s.endvertices.0, s.endvertices.1])
            .collect();
        ends.dedup();
        ends
    }
}

pub fn decompose_segments(n: usize) -> SegmentDecomposition {
    let full = n / 4;
    let four_segments = (0..full).map(|j| Segment::new(4 * j..4 * j + 4)).collect();
    let k_segment = (!n.is_multiple_of(4)).then(|| Segment::new(4 * full..n));
    SegmentDecomposition {
        four_segments,
        k_segment,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::cells_from_str;

    fn pos(spec: FamilySpec, cells: &str) -> Position {
        Position::new(build_family(&spec).unwrap(), cells_from_str(cells).unwrap()).unwrap()
    }

    #[test]
    fn star_leaf_pair() {
        // Centre +, one leaf +, one leaf -, two leaves open.
        let g1 = pos(FamilySpec::Star(4), "++-..");
        let r = cancel_opposite_leaves(&g1, 1, 2).unwrap();
        assert_eq!(r.position, pos(FamilySpec::Star(2), "+.."));
        assert_eq!(r.index_map, vec![vec![0], vec![], vec![], vec![1], vec![2]]);
        let corr = r.correspondence(&g1);
        assert_eq!(corr, vec![(3, 1), (4, 2)]);
        let report = check_completion_equivalence(&g1, &r.position, &corr).unwrap();
        assert!(report.equivalent);
        assert_eq!(report.completions_checked, 4);
    }

    #[test]
    fn star_leaf_pair_open_centre() {
        let p = pos(FamilySpec::Star(2), ".+-");
        let r = cancel_opposite_leaves(&p, 1, 2).unwrap();
        assert_eq!(r.position.graph, Graph::empty(1));
        assert_eq!(r.position.cells, vec![None]);
        let corr = r.correspondence(&p);
        assert!(
            check_completion_equivalence(&p, &r.position, &corr)
                .unwrap()
                .equivalent
        );
    }

    #[test]
    fn leaf_precondition_errors() {
        let p = pos(FamilySpec::Star(3), "++-+");
        assert_eq!(
            cancel_opposite_leaves(&p, 0, 1),
            Err(ReductionError::NotALeaf(0))
        );
        assert_eq!(
            cancel_opposite_leaves(&p, 1, 3),
            Err(ReductionError::NotOpposite(1, 3))
        );
        assert_eq!(
            cancel_opposite_leaves(&p, 1, 1),
            Err(ReductionError::SameVertex)
        );
        let q = pos(FamilySpec::Star(3), "++.-");
        assert_eq!(
            cancel_opposite_leaves(&q, 1, 2),
            Err(ReductionError::Unassigned(2))
        );
        let forest = pos(FamilySpec::StarForest(vec![1, 1]), "++-+");
        assert_eq!(
            cancel_opposite_leaves(&forest, 1, 3),
            Err(ReductionError::DifferentNeighbors(1, 3))
        );
        assert_eq!(
            cancel_opposite_leaves(&p, 1, 9),
            Err(ReductionError::OutOfRange(9))
        );
    }

    #[test]
    fn path_split_examples() {
        let p4 = pos(FamilySpec::Path(4), "..+.");
        let r = split_path_at_assigned(&p4, 2).unwrap();
        let expected = Position::new(
            disjoint_union(&[
                build_family(&FamilySpec::Path(3)).unwrap(),
                build_family(&FamilySpec::Path(2)).unwrap(),
            ]),
            cells_from_str("..++.").unwrap(),
        )
        .unwrap();
        assert_eq!(r.position, expected);
        assert_eq!(r.index_map[2], vec![2, 3]);

        let p3 = pos(FamilySpec::Path(3), ".-.");
        let r = split_path_at_assigned(&p3, 1).unwrap();
        assert_eq!(r.position.cells, cells_from_str(".--.").unwrap());
        assert_eq!(r.position.graph.edges(), &[(0, 1), (2, 3)]);
        let corr = r.correspondence(&p3);
        assert!(
            check_completion_equivalence(&p3, &r.position, &corr)
                .unwrap()
                .equivalent
        );

        assert_eq!(
            split_path_at_assigned(&p4, 0),
            Err(ReductionError::Endpoint(0))
        );
        assert_eq!(
            split_path_at_assigned(&p4, 1),
            Err(ReductionError::Unassigned(1))
        );
        let c4 = pos(FamilySpec::Cycle(4), "..+.");
        assert_eq!(
            split_path_at_assigned(&c4, 2),
            Err(ReductionError::NotAPath)
        );
    }

    #[test]
    fn cycle_opening_examples() {
        let c4 = pos(FamilySpec::Cycle(4), "+...");
        let r = open_cycle(&c4, 0).unwrap();
        assert_eq!(r.position, pos(FamilySpec::Path(5), "+...+"));

        let c3 = pos(FamilySpec::Cycle(3), ".-.");
        let r = open_cycle(&c3, 1).unwrap();
        assert_eq!(r.position, pos(FamilySpec::Path(4), "-..-"));
        assert_eq!(r.index_map, vec![vec![2], vec![0, 3], vec![1]]);
        let corr = r.correspondence(&c3);
        assert!(
            check_completion_equivalence(&c3, &r.position, &corr)
                .unwrap()
                .equivalent
        );

        assert_eq!(open_cycle(&c4, 1), Err(ReductionError::Unassigned(1)));
        let p4 = pos(FamilySpec::Path(4), "+...");
        assert_eq!(open_cycle(&p4, 0), Err(ReductionError::NotACycle));
    }

    #[test]
    fn bipartite_pair_examples() {
        let k23 = pos(FamilySpec::CompleteMultipartite(vec![2, 3]), "+-...");
        let (r, parts) = cancel_bipartite_pair(&k23, &[2, 3], 0, 1).unwrap();
        assert_eq!(parts, vec![0, 3]);
        assert_eq!(r.position.graph, Graph::empty(3));
        let corr = r.correspondence(&k23);
        assert!(
            check_completion_equivalence(&k23, &r.position, &corr)
                .unwrap()
                .equivalent
        );

        let k33 = pos(FamilySpec::CompleteMultipartite(vec![3, 3]), "+.-...");
        let (r, parts) = cancel_bipartite_pair(&k33, &[3, 3], 0, 2).unwrap();
        assert_eq!(parts, vec![1, 3]);
        assert_eq!(
            r.position.graph,
            build_family(&FamilySpec::CompleteMultipartite(vec![1, 3])).unwrap()
        );

        let k33b = pos(FamilySpec::CompleteMultipartite(vec![3, 3]), "+..-..");
        assert_eq!(
            cancel_bipartite_pair(&k33b, &[3, 3], 0, 3),
            Err(ReductionError::DifferentParts(0, 3))
        );
        let same = pos(FamilySpec::CompleteMultipartite(vec![3, 3]), "++....");
        assert_eq!(
            cancel_bipartite_pair(&same, &[3, 3], 0, 1),
            Err(ReductionError::NotOpposite(0, 1))
        );
        assert!(matches!(
            cancel_bipartite_pair(&k33, &[2, 4], 0, 1),
            Err(ReductionError::NotMultipartite(_))
        ));
    }

    #[test]
    fn checker_finds_mismatch_and_is_reflexive() {
        let a = pos(FamilySpec::Path(2), "+.");
        let b = pos(FamilySpec::Path(2), "-.");
        let r = check_completion_equivalence(&a, &b, &[(1, 1)]).unwrap();
        assert!(!r.equivalent);
        assert_eq!(r.mismatches, 2);
        let m = r.first_mismatch.unwrap();
        assert_eq!(
            (m.completion, m.score1, m.score2),
            (vec![Sign::Plus], 1, -1)
        );

        let c = pos(FamilySpec::Cycle(5), "+.-..");
        let id: Vec<_> = c.unassigned().into_iter().map(|v| (v, v)).collect();
        let r = check_completion_equivalence(&c, &c, &id).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.completions_checked, 8);
    }

    #[test]
    fn checker_rejects_bad_bijections() {
        let c = pos(FamilySpec::Cycle(4), "+...");
        assert!(matches!(
            check_completion_equivalence(&c, &c, &[(1, 1), (2, 2)]),
            Err(ReductionError::BadCorrespondence(_))
        ));
        assert!(matches!(
            check_completion_equivalence(&c, &c, &[(1, 1), (1, 2), (3, 3)]),
            Err(ReductionError::BadCorrespondence(_))
        ));
        assert!(matches!(
            check_completion_equivalence(&c, &c, &[(0, 1), (2, 2), (3, 3)]),
            Err(ReductionError::BadCorrespondence(_))
        ));
        let big = Position::empty(build_family(&FamilySpec::Path(21)).unwrap());
        let id: Vec<_> = (0..21).map(|v| (v, v)).collect();
        assert!(matches!(
            check_completion_equivalence(&big, &big, &id),
            Err(ReductionError::BudgetExceeded { unassigned: 21, .. })
        ));
    }

    #[test]
    fn segments() {
        let d = decompose_segments(11);
        assert_eq!(d.four_segments.len(), 2);
        assert_eq!(d.k_segment.as_ref().map(Segment::len), Some(3));
        assert_eq!(d.endvertices(), vec![0, 4, 8, 11]);
        assert_eq!(d.four_segments[0].interior, vec![1, 2, 3]);

        let d = decompose_segments(8);
        assert_eq!(d.four_segments.len(), 2);
        assert!(d.k_segment.is_none());

        let d = decompose_segments(3);
        assert!(d.four_segments.is_empty());
        assert_eq!(d.k_segment.unwrap().edges, 0..3);

        for n in 1..40 {
            let d = decompose_segments(n);
            let mut next = 0;
            for s in d.segments() {
                assert_eq!(s.edges.start, next);
                assert!(!s.is_empty());
                next = s.edges.end;
            }
            assert_eq!(next, n);
        }
    }
}
