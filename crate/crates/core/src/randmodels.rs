//! Random subgraphs of a blow-up and sparse families of canonical copies.
//!
//! Two canonical copies of `H` meet in `H[S]`, where `S` is the set of parts
//! on which they use the same vertex. A family is sparse when every such
//! intersection is empty or a clique.

use std::collections::HashMap;

use rand::seq::index;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{canonical_copies, Board, EdgeSet, ElementId, GraphError, Pattern, VertexId};
use crate::invariants::{f_lower, InvariantError};

pub const EMBEDDING_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RandError {
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("edge count {got} exceeds the {max} board elements")]
    EdgeCount { got: usize, max: usize },
    #[error("board is not a blow-up")]
    NotBlowup,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// Keeps every board element independently with probability `p`.
pub fn sample_gnp(board: &Board, p: f64, seed: u64) -> Result<EdgeSet, RandError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(RandError::Probability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = board.empty_set();
    for e in 0..board.element_count() as ElementId {
        if rng.gen_bool(p) {
            set.insert(e);
        }
    }
    Ok(set)
}

/// A uniformly random set of exactly `m` board elements.
pub fn sample_gnm(board: &Board, m: usize, seed: u64) -> Result<EdgeSet, RandError> {
    if m > board.element_count() {
        return Err(RandError::EdgeCount { got: m, max: board.element_count() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = index::sample(&mut rng, board.element_count(), m);
    Ok(EdgeSet::from_elements(board.element_count(), picked.into_iter().map(|i| i as ElementId)))
}

/// Parts on which two canonical copies agree, as a bit mask.
pub fn shared_parts(a: &[VertexId], b: &[VertexId]) -> u64 {
    a.iter().zip(b).enumerate().filter(|(_, (x, y))| x == y).fold(0, |m, (i, _)| m | 1 << i)
}

/// True when `H[S]` is empty or complete.
pub fn clique_or_empty(h: &Pattern, mask: u64) -> bool {
    let v = mask.count_ones() as usize;
    mask == 0 || h.induced_edge_count(mask) == v * (v - 1) / 2
}

/// Canonical copies of `H` with pairwise clique-or-empty intersections.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseFamily {
    pub pattern: Pattern,
    pub copies: Vec<Vec<VertexId>>,
}

impl SparseFamily {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// Exhaustive check of membership in `g` and of every pairwise intersection.
    pub fn verify(&self, board: &Board, g: &EdgeSet) -> bool {
        let present = self.copies.iter().all(|c| {
            self.pattern.edges().iter().all(|&(a, b)| board.edge_id(c[a], c[b]).is_some_and(|e| g.contains(e)))
                && c.iter().enumerate().all(|(i, &v)| board.part_of(v) == Some(i))
        });
        present
            && self.copies.iter().enumerate().all(|(i, a)| {
                self.copies[i + 1..].iter().all(|b| a != b && clique_or_empty(&self.pattern, shared_parts(a, b)))
            })
    }
}

/// For each copy, the other copies sharing at least one vertex with it,
/// paired with the shared part mask.
fn overlaps(copies: &[Vec<VertexId>]) -> Vec<Vec<(usize, u64)>> {
    let mut by_vertex: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, c) in copies.iter().enumerate() {
        for &v in c {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    copies
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut others: Vec<usize> = c.iter().flat_map(|v| by_vertex[v].iter().copied()).filter(|&j| j != i).collect();
            others.sort_unstable();
            others.dedup();
            others.into_iter().map(|j| (j, shared_parts(c, &copies[j]))).collect()
        })
        .collect()
}

/// Keeps copies in the given order whenever they meet every kept copy in
/// nothing or a clique.
pub fn greedy_sparse(h: &Pattern, copies: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
    let mut by_vertex: HashMap<VertexId, Vec<usize>> = HashMap::new();
    let mut kept: Vec<Vec<VertexId>> = Vec::new();
    for c in copies {
        let ok = c.iter().all(|v| {
            by_vertex.get(v).is_none_or(|list| list.iter().all(|&j| clique_or_empty(h, shared_parts(c, &kept[j]))))
        });
        if ok {
            for &v in c {
                by_vertex.entry(v).or_default().push(kept.len());
            }
            kept.push(c.clone());
        }
    }
    kept
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PropertyReport {
    /// Density `|G| / (e(H) s^2)`.
    pub p: f64,
    pub c: f64,
    pub union_edges: usize,
    pub p1_ok: bool,
    /// Per-edge limit `C f_H(s,p) / (s^2 p)`.
    pub edge_limit: f64,
    /// Edges lying in more copies than the limit, with their counts.
    pub p2_violations: Vec<(ElementId, usize)>,
    /// Copy pairs meeting in exactly two non-adjacent vertices.
    pub p3_violations: Vec<(usize, usize)>,
    /// Copy pairs meeting in at least three vertices spanning at most one edge.
    pub p4_violations: Vec<(usize, usize)>,
    /// (copy, shared part mask, number of partners) beyond the limit `C`.
    pub p5_violations: Vec<(usize, u64, usize)>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.p1_ok
            && self.p2_violations.is_empty()
            && self.p3_violations.is_empty()
            && self.p4_violations.is_empty()
            && self.p5_violations.is_empty()
    }

    pub fn flags(&self) -> [bool; 5] {
        [
            self.p1_ok,
            self.p2_violations.is_empty(),
            self.p3_violations.is_empty(),
            self.p4_violations.is_empty(),
            self.p5_violations.is_empty(),
        ]
    }
}

/// Edge ids of a canonical copy.
fn copy_edges(board: &Board, h: &Pattern, c: &[VertexId]) -> Vec<ElementId> {
    h.edges().iter().filter_map(|&(a, b)| board.edge_id(c[a], c[b])).collect()
}

fn density(board: &Board, h: &Pattern, g: &EdgeSet) -> f64 {
    let s = board.part_size().unwrap_or(0) as f64;
    g.count() as f64 / (h.edge_count() as f64 * s * s)
}

/// Evaluates the five properties on a family of canonical copies in `g`.
pub fn check_properties(board: &Board, g: &EdgeSet, copies: &[Vec<VertexId>], c: f64) -> Result<PropertyReport, RandError> {
    let h = board.blowup_pattern().ok_or(RandError::NotBlowup)?.clone();
    let s = board.part_size().unwrap();
    let p = density(board, &h, g);
    let mut report = PropertyReport { p, c, ..Default::default() };

    let mut per_edge: HashMap<ElementId, usize> = HashMap::new();
    for copy in copies {
        for e in copy_edges(board, &h, copy) {
            *per_edge.entry(e).or_default() += 1;
        }
    }
    let s2 = (s * s) as f64;
    report.union_edges = per_edge.len();
    report.p1_ok = per_edge.len() as f64 <= c * s2 * p;
    report.edge_limit = if p > 0.0 && h.edge_count() >= 2 { c * f_lower(&h, s, p)? / (s2 * p) } else { f64::INFINITY };
    let mut p2: Vec<(ElementId, usize)> =
        per_edge.into_iter().filter(|&(_, n)| n as f64 > report.edge_limit).collect();
    p2.sort_unstable();
    report.p2_violations = p2;

    for (i, list) in overlaps(copies).into_iter().enumerate() {
        let mut by_mask: HashMap<u64, usize> = HashMap::new();
        for (j, mask) in list {
            let v = mask.count_ones() as usize;
            let e = h.induced_edge_count(mask);
            if v == 2 && e == 0 && i < j {
                report.p3_violations.push((i, j));
            }
            if v >= 3 && e <= 1 && i < j {
                report.p4_violations.push((i, j));
            }
            if e >= 2 && !clique_or_empty(&h, mask) {
                *by_mask.entry(mask).or_default() += 1;
            }
        }
        let mut over: Vec<(usize, u64, usize)> =
            by_mask.into_iter().filter(|&(_, n)| n as f64 > c).map(|(m, n)| (i, m, n)).collect();
        over.sort_unstable();
        report.p5_violations.extend(over);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtractMode {
    /// Random acceptance, one deletion pass, then greedy disjointification.
    Paper,
    /// Greedy scan over all canonical copies in lexicographic order.
    Greedy,
}

impl std::str::FromStr for ExtractMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(ExtractMode::Paper),
            "greedy" => Ok(ExtractMode::Greedy),
            other => Err(format!("unknown extraction mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub family: SparseFamily,
    /// Properties of the family before greedy disjointification.
    pub report: PropertyReport,
    /// Canonical copies present in `g`.
    pub found: usize,
    /// Acceptance probability actually used, and whether it was clamped.
    pub rho: f64,
    pub rho_clamped: bool,
    /// Copies left after acceptance and deletion.
    pub screened: usize,
}

/// Copies that the one-pass deletion rules remove from an accepted family.
fn deletions(board: &Board, h: &Pattern, copies: &[Vec<VertexId>], edge_limit: f64, c: f64) -> Vec<bool> {
    let mut per_edge: HashMap<ElementId, usize> = HashMap::new();
    let edges: Vec<Vec<ElementId>> = copies.iter().map(|cp| copy_edges(board, h, cp)).collect();
    for list in &edges {
        for &e in list {
            *per_edge.entry(e).or_default() += 1;
        }
    }
    let mut doomed = vec![false; copies.len()];
    for (i, list) in overlaps(copies).into_iter().enumerate() {
        // other copies sharing an edge with this one
        if edges[i].iter().any(|e| (per_edge[e] - 1) as f64 > edge_limit) {
            doomed[i] = true;
        }
        let mut by_mask: HashMap<u64, usize> = HashMap::new();
        for (_, mask) in list {
            let v = mask.count_ones() as usize;
            let e = h.induced_edge_count(mask);
            if (v == 2 && e == 0) || (v >= 3 && e <= 1) {
                doomed[i] = true;
            }
            if e >= 2 && !clique_or_empty(h, mask) {
                *by_mask.entry(mask).or_default() += 1;
            }
        }
        if by_mask.values().any(|&n| n as f64 > c) {
            doomed[i] = true;
        }
    }
    doomed
}

/// Extracts a sparse family of canonical copies of the blow-up pattern from `g`.
pub fn extract_sparse_family(
    board: &Board,
    g: &EdgeSet,
    c: f64,
    mode: ExtractMode,
    seed: u64,
) -> Result<Extraction, RandError> {
    let h = board.blowup_pattern().ok_or(RandError::NotBlowup)?.clone();
    let s = board.part_size().unwrap();
    let all = canonical_copies(board, g, EMBEDDING_CAP)?;
    let found = all.len();
    let p = density(board, &h, g);
    let (screened, rho, rho_clamped) = match mode {
        ExtractMode::Greedy => (all, 1.0, false),
        ExtractMode::Paper => {
            let expected = (s as f64).powi(h.vertex_count() as i32) * p.powi(h.edge_count() as i32);
            let f = if p > 0.0 && h.edge_count() >= 2 { f_lower(&h, s, p)? } else { 0.0 };
            let raw = if expected > 0.0 { f / expected } else { 0.0 };
            let rho = raw.clamp(0.0, 1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let accepted: Vec<Vec<VertexId>> = all.into_iter().filter(|_| rng.gen_bool(rho)).collect();
            let edge_limit = if p > 0.0 && h.edge_count() >= 2 { c * f / ((s * s) as f64 * p) } else { f64::INFINITY };
            let doomed = deletions(board, &h, &accepted, edge_limit, c);
            let kept = accepted.into_iter().zip(doomed).filter(|(_, d)| !d).map(|(x, _)| x).collect();
            (kept, rho, raw != rho)
        }
    };
    let report = check_properties(board, g, &screened, c)?;
    let copies = greedy_sparse(&h, &screened);
    Ok(Extraction {
        family: SparseFamily { pattern: h, copies },
        report,
        found,
        rho,
        rho_clamped,
        screened: screened.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3_board(s: usize) -> Board {
        Board::blowup(&Pattern::complete(3), s).unwrap()
    }

    #[test]
    fn sampler_extremes() {
        let b = k3_board(4);
        assert_eq!(sample_gnp(&b, 1.0, 1).unwrap().count(), 48);
        assert_eq!(sample_gnp(&b, 0.0, 1).unwrap().count(), 0);
        assert_eq!(sample_gnm(&b, 0, 1).unwrap().count(), 0);
        assert_eq!(sample_gnm(&b, 17, 1).unwrap().count(), 17);
        assert_eq!(sample_gnm(&b, 17, 9).unwrap(), sample_gnm(&b, 17, 9).unwrap());
        assert!(sample_gnp(&b, 1.5, 1).is_err());
        assert!(sample_gnm(&b, 49, 1).is_err());
    }

    #[test]
    fn triangles_sharing_an_edge_are_both_kept() {
        let h = Pattern::complete(3);
        let copies = vec![vec![0, 2, 4], vec![0, 2, 5]];
        assert_eq!(greedy_sparse(&h, &copies).len(), 2);
    }

    #[test]
    fn non_adjacent_pair_is_rejected() {
        // path 0-1-2: parts 0 and 2 are not adjacent
        let h = Pattern::path(3);
        let copies = vec![vec![0, 2, 4], vec![0, 3, 4]];
        assert_eq!(greedy_sparse(&h, &copies).len(), 1);
        let board = Board::blowup(&h, 2).unwrap();
        let g = board.full_set();
        let r = check_properties(&board, &g, &copies, 10.0).unwrap();
        assert_eq!(r.p3_violations, vec![(0, 1)]);
    }

    #[test]
    fn greedy_on_full_k3_blowup() {
        let board = k3_board(2);
        let g = board.full_set();
        let ex = extract_sparse_family(&board, &g, 1.0, ExtractMode::Greedy, 0).unwrap();
        assert_eq!(ex.found, 8);
        // a triangle meets another in at most an edge, always a clique
        assert_eq!(ex.family.len(), 8);
        assert!(ex.family.verify(&board, &g));
    }

    #[test]
    fn single_copy_passes_everything() {
        let board = k3_board(3);
        let g = board.full_set();
        let r = check_properties(&board, &g, &[vec![0, 3, 6]], 1.0).unwrap();
        assert!(r.all_pass());
    }

    #[test]
    fn zero_constant_flags_shared_edges() {
        let board = k3_board(3);
        let g = board.full_set();
        let r = check_properties(&board, &g, &[vec![0, 3, 6], vec![0, 3, 7]], 0.0).unwrap();
        assert!(!r.p2_violations.is_empty());
    }
}
