//! Exact game values on tiny boards.
//!
//! Positions are keyed by the ownership vector in base 3 (free, Client,
//! Waiter), so a table of `3^N` entries covers every position. The round
//! number is implied by the key.

use std::collections::HashSet;
use std::sync::Arc;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::{GameError, GameState, Transcript, WinningFamily};
use crate::graph::{Board, ElementId};
use crate::strategies::Waiter;

pub const MAX_ELEMENTS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("board has {0} elements, the solver handles at most {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

struct Search {
    b1: usize,
    sets: Vec<u16>,
    pow3: Vec<u32>,
    memo: Vec<u16>,
}

const UNKNOWN: u16 = u16::MAX;

impl Search {
    fn new(n: usize, b: u64, sets: Vec<u16>) -> Self {
        let pow3: Vec<u32> = (0..=n).map(|i| 3u32.pow(i as u32)).collect();
        Self { b1: b as usize + 1, sets, pow3: pow3.clone(), memo: vec![UNKNOWN; pow3[n] as usize] }
    }

    fn count_within(&self, mask: u16) -> u16 {
        self.sets.iter().filter(|&&s| s & !mask == 0).count() as u16
    }

    fn child_key(&self, key: u32, offer: u16, pick: usize) -> u32 {
        let mut k = key + self.pow3[pick];
        let mut rest = offer & !(1 << pick);
        while rest != 0 {
            let y = rest.trailing_zeros() as usize;
            k += 2 * self.pow3[y];
            rest &= rest - 1;
        }
        k
    }

    /// Value for Client when Client owns `client` and `free` is unclaimed.
    fn value(&mut self, key: u32, client: u16, free: u16) -> u16 {
        if self.memo[key as usize] != UNKNOWN {
            return self.memo[key as usize];
        }
        let v = if (free.count_ones() as usize) < self.b1 {
            self.count_within(client)
        } else {
            let ceiling = self.count_within(client | free);
            let mut best = 0;
            for offer in subsets(free, self.b1) {
                best = best.max(self.reply_value(key, client, free, offer));
                if best == ceiling {
                    break;
                }
            }
            best
        };
        self.memo[key as usize] = v;
        v
    }

    fn reply_value(&mut self, key: u32, client: u16, free: u16, offer: u16) -> u16 {
        let floor = self.count_within(client);
        let mut worst = u16::MAX;
        for x in bits(offer) {
            let v = self.value(self.child_key(key, offer, x), client | 1 << x, free & !offer);
            worst = worst.min(v);
            if worst == floor {
                break;
            }
        }
        worst
    }
}

fn bits(mask: u16) -> impl Iterator<Item = usize> {
    (0..16).filter(move |i| mask >> i & 1 == 1)
}

/// All `k`-subsets of `mask`, in increasing order of their sorted member lists.
fn subsets(mask: u16, k: usize) -> Vec<u16> {
    let items: Vec<usize> = bits(mask).collect();
    let mut out = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, acc: u16, out: &mut Vec<u16>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..=items.len() - k {
            rec(items, k - 1, i + 1, acc | 1 << items[i], out);
        }
    }
    if items.len() >= k {
        rec(&items, k, 0, 0, &mut out);
    }
    out
}

fn prepare(board: &Board, family: &WinningFamily, b: u64) -> Result<(Search, bool), SolverError> {
    let n = board.element_count();
    if n > MAX_ELEMENTS {
        return Err(SolverError::TooLarge(n));
    }
    if b == 0 {
        return Err(GameError::ZeroBias.into());
    }
    let explicit = family.to_explicit(board)?;
    if explicit.universe() != n {
        return Err(GameError::Family("family universe does not match the board".into()).into());
    }
    let sets = explicit.sets().iter().map(|s| s.iter().fold(0u16, |m, &e| m | 1 << e)).collect();
    let symmetric = board.is_complete() && matches!(family, WinningFamily::Pattern { canonical: false, .. });
    Ok((Search::new(n, b, sets), symmetric))
}

/// One representative per orbit of first offers under vertex permutations of K_n.
fn root_offers(board: &Board, free: u16, k: usize, symmetric: bool) -> Vec<u16> {
    let all = subsets(free, k);
    if !symmetric {
        return all;
    }
    let perms = permutations(board.vertex_count());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for offer in all {
        let image = |p: &[u32]| {
            bits(offer).fold(0u16, |m, e| {
                let (u, v) = board.endpoints(e as ElementId);
                m | 1 << board.edge_id(p[u as usize], p[v as usize]).unwrap()
            })
        };
        let canon = perms.iter().map(|p| image(p)).min().unwrap();
        if seen.insert(canon) {
            out.push(offer);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..n as u32).collect();
    fn rec(k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub value: u64,
    /// A line of optimal play: first best offer, first best reply.
    pub principal_variation: Transcript,
}

/// The value of the game under optimal play, with a principal variation.
pub fn solve(board: &Board, family: &WinningFamily, b: u64) -> Result<Solution, SolverError> {
    let (mut search, symmetric) = prepare(board, family, b)?;
    let n = board.element_count();
    let full: u16 = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
    let k = search.b1;

    let mut value = 0;
    let mut best_root = None;
    if n >= k {
        for offer in root_offers(board, full, k, symmetric) {
            let v = search.reply_value(0, 0, full, offer);
            if best_root.is_none() || v > value {
                value = v;
                best_root = Some(offer);
            }
        }
    } else {
        value = search.value(0, 0, full);
    }

    let mut pv = Transcript::new(board.descriptor(), b, 0);
    let (mut key, mut client, mut free) = (0u32, 0u16, full);
    let mut next_offer = best_root;
    while let Some(offer) = next_offer {
        let target = search.reply_value(key, client, free, offer);
        let pick = bits(offer)
            .find(|&x| search.value(search.child_key(key, offer, x), client | 1 << x, free & !offer) == target)
            .unwrap();
        let list: Vec<ElementId> = bits(offer).map(|e| e as ElementId).collect();
        pv.push(&list, pick as ElementId);
        key = search.child_key(key, offer, pick);
        client |= 1 << pick;
        free &= !offer;
        next_offer = if (free.count_ones() as usize) < k {
            None
        } else {
            let goal = search.value(key, client, free);
            subsets(free, k).into_iter().find(|&o| search.reply_value(key, client, free, o) == goal)
        };
    }
    Ok(Solution { value: value as u64, principal_variation: pv })
}

pub fn exact_value(board: &Board, family: &WinningFamily, b: u64) -> Result<u64, SolverError> {
    solve(board, family, b).map(|s| s.value)
}

/// Walks every sequence of Client replies against a fixed Waiter and calls
/// `visit` on each finished game with the Waiter's final state.
pub fn visit_reply_paths<W, F>(board: Arc<Board>, b: u64, waiter: W, seed: u64, mut visit: F) -> Result<(), SolverError>
where
    W: Waiter + Clone,
    F: FnMut(&GameState, &W),
{
    if board.element_count() > MAX_ELEMENTS {
        return Err(SolverError::TooLarge(board.element_count()));
    }
    let state = GameState::new(board, b)?;
    walk(state, waiter, ChaCha8Rng::seed_from_u64(seed), &mut visit)
}

fn walk<W, F>(state: GameState, mut waiter: W, mut rng: ChaCha8Rng, visit: &mut F) -> Result<(), SolverError>
where
    W: Waiter + Clone,
    F: FnMut(&GameState, &W),
{
    if !state.can_offer() {
        let mut done = state;
        done.finalize()?;
        visit(&done, &waiter);
        return Ok(());
    }
    let offer = waiter
        .offer(&state, &mut rng)
        .map_err(|e| GameError::Strategy { strategy: waiter.name(), message: e.0 })?;
    state.validate(&offer, offer[0])?;
    for &x in &offer {
        let mut next = state.clone();
        next.apply_round(&offer, x)?;
        let mut w = waiter.clone();
        w.observe(&next, &offer, x);
        walk(next, w, rng.clone(), visit)?;
    }
    Ok(())
}

#[derive(Clone)]
struct Boxed(Box<dyn Waiter>);

impl Waiter for Boxed {
    fn name(&self) -> String {
        self.0.name()
    }
    fn offer(&mut self, state: &GameState, rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, crate::strategies::StrategyError> {
        self.0.offer(state, rng)
    }
    fn observe(&mut self, state: &GameState, offer: &[ElementId], pick: ElementId) {
        self.0.observe(state, offer, pick)
    }
    fn box_clone(&self) -> Box<dyn Waiter> {
        self.0.box_clone()
    }
}

/// The value a Waiter strategy guarantees: the minimum over every Client
/// reply sequence.
pub fn certify_waiter(board: &Board, family: &WinningFamily, b: u64, waiter: &dyn Waiter) -> Result<u64, SolverError> {
    let mut worst = u64::MAX;
    let mut err = None;
    visit_reply_paths(Arc::new(board.clone()), b, Boxed(waiter.box_clone()), 0, |state, _| match family.count(state.board(), state.owners()) {
        Ok(v) => worst = worst.min(v),
        Err(e) => err = Some(e),
    })?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(worst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{replay, value, SetFamily};
    use crate::graph::Pattern;
    use crate::strategies::baseline::RandomWaiter;

    #[test]
    fn single_edges_on_k3() {
        let board = Board::complete(3).unwrap();
        assert_eq!(exact_value(&board, &WinningFamily::copies(Pattern::complete(2)), 1).unwrap(), 1);
    }

    #[test]
    fn no_triangle_on_k4() {
        let board = Board::complete(4).unwrap();
        assert_eq!(exact_value(&board, &WinningFamily::copies(Pattern::complete(3)), 1).unwrap(), 0);
    }

    #[test]
    fn triangle_on_k5_fixture() {
        // bounded by floor(10/8) = 1
        let board = Board::complete(5).unwrap();
        let v = exact_value(&board, &WinningFamily::copies(Pattern::complete(3)), 1).unwrap();
        assert!(v <= 1);
        assert_eq!(v, 1);
    }

    #[test]
    fn symmetry_pruning_matches_full_search() {
        let board = Board::complete(5).unwrap();
        let fam = WinningFamily::copies(Pattern::path(3));
        let explicit = WinningFamily::Explicit(fam.to_explicit(&board).unwrap());
        for b in 1..=3 {
            assert_eq!(exact_value(&board, &fam, b).unwrap(), exact_value(&board, &explicit, b).unwrap());
        }
    }

    #[test]
    fn principal_variation_replays_to_the_value() {
        let board = Arc::new(Board::complete(5).unwrap());
        let fam = WinningFamily::copies(Pattern::path(3));
        let sol = solve(&board, &fam, 1).unwrap();
        let state = replay(board.clone(), &sol.principal_variation).unwrap();
        assert_eq!(value(&state, &fam).unwrap(), sol.value);
    }

    #[test]
    fn certification_is_dominated() {
        let board = Board::complete(5).unwrap();
        let fam = WinningFamily::copies(Pattern::path(3));
        let exact = exact_value(&board, &fam, 1).unwrap();
        let cert = certify_waiter(&board, &fam, 1, &RandomWaiter).unwrap();
        assert!(cert <= exact);
    }

    #[test]
    fn brute_minimax_on_tiny_families() {
        // plain recursion without memo or pruning
        fn brute(sets: &[u16], client: u16, free: u16, b1: usize) -> u16 {
            if (free.count_ones() as usize) < b1 {
                return sets.iter().filter(|&&s| s & !client == 0).count() as u16;
            }
            subsets(free, b1)
                .into_iter()
                .map(|o| bits(o).map(|x| brute(sets, client | 1 << x, free & !o, b1)).min().unwrap())
                .max()
                .unwrap()
        }
        let fam = SetFamily::new(7, vec![vec![0, 1], vec![1, 2, 3], vec![4, 5], vec![0, 6], vec![2, 5, 6]]).unwrap();
        let masks: Vec<u16> = fam.sets().iter().map(|s| s.iter().fold(0, |m, &e| m | 1 << e)).collect();
        let board = Board::ground_set(7);
        for b in 1..=3u64 {
            let want = brute(&masks, 0, 0x7f, b as usize + 1) as u64;
            assert_eq!(exact_value(&board, &WinningFamily::Explicit(fam.clone()), b).unwrap(), want);
        }
    }

    #[test]
    fn caps() {
        let board = Board::complete(6).unwrap();
        assert!(matches!(exact_value(&board, &WinningFamily::copies(Pattern::complete(3)), 1), Err(SolverError::TooLarge(15))));
    }
}
