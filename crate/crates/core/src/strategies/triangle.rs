//! Three-stage Waiter for triangles on the blow-up of K3.
//!
//! Stage I gives every `x` in `V1` exactly `floor(s/(b+1))` Client
//! neighbours in `V2`, Stage II does the same from `V2` into `V3`. Stage III
//! offers the edges of `E(V1, V3)` in blocks of `b+1`, sorted by the number
//! `t(xz)` of Client paths `x-y-z`, largest first.

use rand_chacha::ChaCha8Rng;

use super::{StrategyError, Waiter};
use crate::engine::GameState;
use crate::graph::{ElementId, Pattern, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Stage {
    Star { from_part: usize, to_part: usize, vertex: VertexId, done: u64 },
    Closing { next: usize },
    Filler,
}

#[derive(Clone, Debug)]
pub struct TriangleWaiter {
    s: usize,
    block: usize,
    per_vertex: u64,
    stage: Stage,
    cursor: VertexId,
    /// E(V1, V3) sorted by t descending, ties by lowest id.
    closing: Vec<(u64, ElementId)>,
}

/// Lower bound `(s^3/(5 b^2) - s)/(b+1)` on the canonical triangles forced.
pub fn triangle_guarantee(s: u64, b: u64) -> f64 {
    let s = s as f64;
    let b = b as f64;
    (s * s * s / (5.0 * b * b) - s) / (b + 1.0)
}

impl TriangleWaiter {
    pub fn new(s: usize, b: u64) -> Self {
        let per_vertex = s as u64 / (b + 1);
        let stage = if per_vertex > 0 {
            Stage::Star { from_part: 0, to_part: 1, vertex: 0, done: 0 }
        } else {
            Stage::Closing { next: 0 }
        };
        Self { s, block: b as usize + 1, per_vertex, stage, cursor: 0, closing: Vec::new() }
    }

    fn check_board(&self, state: &GameState) -> Result<(), StrategyError> {
        let board = state.board();
        let ok = board.blowup_pattern().is_some_and(|p| *p == Pattern::complete(3)) && board.part_size() == Some(self.s);
        if !ok {
            return Err(StrategyError::new(format!("triangle strategy needs the blow-up of K3 with parts of size {}", self.s)));
        }
        Ok(())
    }

    /// `t(xz)` for every edge of `E(V1, V3)`.
    fn path_counts(state: &GameState) -> Vec<(u64, ElementId)> {
        let board = state.board();
        let v1 = board.part_vertices(0);
        let v3 = board.part_vertices(2);
        let mut out = Vec::with_capacity(v1.len() * v3.len());
        for x in v1 {
            let mids: Vec<VertexId> = state.client_neighbors(x).iter().copied().filter(|&y| board.part_of(y) == Some(1)).collect();
            for z in v3.clone() {
                let t = mids.iter().filter(|&&y| state.client_has_edge(y, z)).count() as u64;
                out.push((t, board.edge_id(x, z).expect("blow-up edge")));
            }
        }
        out.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        out
    }

    /// Stage III order, available once Stage III has started.
    pub fn closing_order(&self) -> &[(u64, ElementId)] {
        &self.closing
    }

    pub fn per_vertex(&self) -> u64 {
        self.per_vertex
    }
}

impl Waiter for TriangleWaiter {
    fn name(&self) -> String {
        "triangle".into()
    }

    fn offer(&mut self, state: &GameState, _rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, StrategyError> {
        self.check_board(state)?;
        let k = state.offer_size();
        let board = state.board();
        match self.stage.clone() {
            Stage::Star { from_part, to_part, vertex, .. } => {
                let x = board.part_vertices(from_part).start + vertex;
                let targets = board.part_vertices(to_part);
                if self.cursor < targets.start {
                    self.cursor = targets.start;
                }
                let mut out = Vec::with_capacity(k);
                let mut y = self.cursor;
                while out.len() < k && y < targets.end {
                    let e = board.edge_id(x, y).expect("blow-up edge");
                    if state.is_free(e) {
                        out.push(e);
                    }
                    y += 1;
                }
                if out.len() < k {
                    return Err(StrategyError::new("star stage ran out of edges"));
                }
                self.cursor = y;
                out.sort_unstable();
                Ok(out)
            }
            Stage::Closing { next } => {
                if self.closing.is_empty() {
                    self.closing = Self::path_counts(state);
                }
                let end = next + k;
                if end <= self.closing.len() {
                    let mut out: Vec<ElementId> = self.closing[next..end].iter().map(|&(_, e)| e).collect();
                    out.sort_unstable();
                    Ok(out)
                } else {
                    self.stage = Stage::Filler;
                    Ok(state.lowest_free(k))
                }
            }
            Stage::Filler => Ok(state.lowest_free(k)),
        }
    }

    fn observe(&mut self, _state: &GameState, _offer: &[ElementId], _pick: ElementId) {
        match &mut self.stage {
            Stage::Star { from_part, vertex, done, .. } => {
                *done += 1;
                if *done == self.per_vertex {
                    *done = 0;
                    *vertex += 1;
                    self.cursor = 0;
                    if *vertex as usize == self.s {
                        self.stage = if *from_part == 0 {
                            Stage::Star { from_part: 1, to_part: 2, vertex: 0, done: 0 }
                        } else {
                            Stage::Closing { next: 0 }
                        };
                    }
                }
            }
            Stage::Closing { next } => *next += self.block,
            Stage::Filler => {}
        }
    }

    fn box_clone(&self) -> Box<dyn Waiter> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, value, WinningFamily};
    use crate::graph::Board;
    use crate::strategies::baseline::{GreedyClient, RandomClient};
    use std::sync::Arc;

    #[test]
    fn guarantee_at_thirty() {
        assert_eq!(triangle_guarantee(30, 2), 440.0);
    }

    #[test]
    fn stages_follow_the_script() {
        let s = 10;
        let board = Arc::new(Board::blowup(&Pattern::complete(3), s).unwrap());
        let mut w = TriangleWaiter::new(s, 1);
        let state = play(board.clone(), 1, &mut w, &mut RandomClient, 3).unwrap();
        for x in board.part_vertices(0) {
            let into_v2 = state.client_neighbors(x).iter().filter(|&&y| board.part_of(y) == Some(1)).count();
            assert_eq!(into_v2, 5);
        }
        let order = w.closing_order();
        assert_eq!(order.len(), s * s);
        assert!(order.windows(2).all(|p| p[0].0 >= p[1].0));
        assert!(order.iter().all(|&(t, _)| t <= 5));
    }

    #[test]
    fn guarantee_holds_for_small_parts() {
        let s = 30;
        let board = Arc::new(Board::blowup(&Pattern::complete(3), s).unwrap());
        let fam = WinningFamily::canonical(Pattern::complete(3));
        for b in 1..=3u64 {
            let mut w = TriangleWaiter::new(s, b);
            let mut c = GreedyClient::new(&Pattern::complete(3), true);
            let state = play(board.clone(), b, &mut w, &mut c, 0).unwrap();
            let v = value(&state, &fam).unwrap() as f64;
            assert!(v >= triangle_guarantee(s as u64, b), "b={b}: {v}");
        }
    }
}
