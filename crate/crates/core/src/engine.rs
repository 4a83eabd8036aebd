//! Game mechanics for the (b:1) Waiter-Client game.
//!
//! Each round Waiter offers exactly `b+1` free elements; Client keeps one
//! and Waiter takes the rest. Once fewer than `b+1` elements are free they
//! all go to Waiter.

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use rand::seq::index;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{count_canonical_copies, count_copies, Board, EdgeSet, ElementId, GraphError, LabeledPattern, Pattern, VertexId};
use crate::strategies::{Client, Waiter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Owner {
    Free = 0,
    Client = 1,
    Waiter = 2,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("bias must be at least 1")]
    ZeroBias,
    #[error("board has no elements")]
    EmptyBoard,
    #[error("round {round}: offer has {got} elements, expected {expected}")]
    OfferSize { round: u64, got: usize, expected: usize },
    #[error("round {round}: element {element} is not free")]
    NotFree { round: u64, element: ElementId },
    #[error("round {round}: element {element} is offered twice")]
    Duplicate { round: u64, element: ElementId },
    #[error("round {round}: element {element} does not exist")]
    NoSuchElement { round: u64, element: ElementId },
    #[error("round {round}: pick {pick} is not in the offer")]
    PickOutsideOffer { round: u64, pick: ElementId },
    #[error("finalize called with {free} free elements and bias {b}")]
    FinalizeTooEarly { free: usize, b: u64 },
    #[error("game is already finished")]
    Finished,
    #[error("{strategy} played an illegal move: {source} (round {round}, {free} free elements, offer {offer:?})")]
    Illegal {
        strategy: String,
        round: u64,
        free: usize,
        offer: Vec<ElementId>,
        #[source]
        source: Box<GameError>,
    },
    #[error("{strategy} failed: {message}")]
    Strategy { strategy: String, message: String },
    #[error("transcript line {line}: {message}")]
    Transcript { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("winning family is unresolved: {0}")]
    Family(String),
}

/// Ownership of every element plus the round log.
#[derive(Clone)]
pub struct GameState {
    board: Arc<Board>,
    owner: Vec<Owner>,
    b: u64,
    round: u64,
    finished: bool,
    free_list: Vec<ElementId>,
    pos: Vec<u32>,
    lowest: Cell<usize>,
    client_deg: Vec<u32>,
    free_deg: Vec<u32>,
    client_adj: Vec<Vec<VertexId>>,
    client_count: usize,
    waiter_count: usize,
    transcript: Transcript,
}

impl fmt::Debug for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameState")
            .field("board", &self.board.descriptor_short())
            .field("b", &self.b)
            .field("round", &self.round)
            .field("free", &self.free_list.len())
            .field("client", &self.client_count)
            .field("waiter", &self.waiter_count)
            .finish()
    }
}

impl Board {
    fn descriptor_short(&self) -> String {
        let d = self.descriptor();
        if d.len() > 60 {
            format!("{}...", &d[..60])
        } else {
            d
        }
    }
}

impl GameState {
    pub fn new(board: Arc<Board>, b: u64) -> Result<Self, GameError> {
        if b == 0 {
            return Err(GameError::ZeroBias);
        }
        if board.element_count() == 0 {
            return Err(GameError::EmptyBoard);
        }
        let n = board.element_count();
        let v = board.vertex_count();
        let free_deg = (0..v as u32).map(|x| board.degree(x) as u32).collect();
        Ok(Self {
            owner: vec![Owner::Free; n],
            b,
            round: 0,
            finished: false,
            free_list: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            lowest: Cell::new(0),
            client_deg: vec![0; v],
            free_deg,
            client_adj: vec![Vec::new(); v],
            client_count: 0,
            waiter_count: 0,
            transcript: Transcript::new(board.descriptor(), b, 0),
            board,
        })
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn board_arc(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn bias(&self) -> u64 {
        self.b
    }

    /// Number of elements in every offer.
    pub fn offer_size(&self) -> usize {
        self.b as usize + 1
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    #[inline]
    pub fn owner(&self, e: ElementId) -> Owner {
        self.owner[e as usize]
    }

    #[inline]
    pub fn is_free(&self, e: ElementId) -> bool {
        self.owner[e as usize] == Owner::Free
    }

    pub fn free_count(&self) -> usize {
        self.free_list.len()
    }

    pub fn client_count(&self) -> usize {
        self.client_count
    }

    pub fn waiter_count(&self) -> usize {
        self.waiter_count
    }

    /// True while a full offer can still be made.
    pub fn can_offer(&self) -> bool {
        !self.finished && self.free_list.len() >= self.offer_size()
    }

    /// Free elements in no particular order.
    pub fn free_elements(&self) -> &[ElementId] {
        &self.free_list
    }

    /// The `k` free elements with the smallest ids.
    pub fn lowest_free(&self, k: usize) -> Vec<ElementId> {
        let mut i = self.lowest.get();
        while i < self.owner.len() && self.owner[i] != Owner::Free {
            i += 1;
        }
        self.lowest.set(i);
        let mut out = Vec::with_capacity(k);
        while out.len() < k && i < self.owner.len() {
            if self.owner[i] == Owner::Free {
                out.push(i as u32);
            }
            i += 1;
        }
        out
    }

    /// `k` distinct free elements chosen uniformly, sorted by id.
    pub fn random_free<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Vec<ElementId> {
        let k = k.min(self.free_list.len());
        let mut out: Vec<ElementId> =
            index::sample(rng, self.free_list.len(), k).into_iter().map(|i| self.free_list[i]).collect();
        out.sort_unstable();
        out
    }

    /// Client degree of a vertex.
    #[inline]
    pub fn client_degree(&self, v: VertexId) -> u32 {
        self.client_deg[v as usize]
    }

    /// Number of free board elements at a vertex.
    #[inline]
    pub fn free_degree(&self, v: VertexId) -> u32 {
        self.free_deg[v as usize]
    }

    pub fn client_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.client_adj[v as usize]
    }

    /// True if the pair is a board element owned by Client.
    #[inline]
    pub fn client_has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.board.edge_id(u, v).is_some_and(|e| self.owner(e) == Owner::Client)
    }

    pub fn client_set(&self) -> EdgeSet {
        let mut s = self.board.empty_set();
        for (i, &o) in self.owner.iter().enumerate() {
            if o == Owner::Client {
                s.insert(i as u32);
            }
        }
        s
    }

    pub fn client_elements(&self) -> Vec<ElementId> {
        (0..self.owner.len() as u32).filter(|&e| self.owner(e) == Owner::Client).collect()
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owner
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.transcript.seed = seed;
    }

    fn take(&mut self, e: ElementId, to: Owner) {
        debug_assert_eq!(self.owner[e as usize], Owner::Free);
        self.owner[e as usize] = to;
        let p = self.pos[e as usize] as usize;
        let last = *self.free_list.last().unwrap();
        self.free_list.swap_remove(p);
        if last != e {
            self.pos[last as usize] = p as u32;
        }
        let (u, v) = self.board.endpoints(e);
        self.free_deg[u as usize] -= 1;
        self.free_deg[v as usize] -= 1;
        match to {
            Owner::Client => {
                self.client_deg[u as usize] += 1;
                self.client_deg[v as usize] += 1;
                self.client_adj[u as usize].push(v);
                self.client_adj[v as usize].push(u);
                self.client_count += 1;
            }
            Owner::Waiter => self.waiter_count += 1,
            Owner::Free => unreachable!(),
        }
    }

    /// Checks an offer and pick without applying them.
    pub fn validate(&self, offer: &[ElementId], pick: ElementId) -> Result<(), GameError> {
        let round = self.round + 1;
        if self.finished {
            return Err(GameError::Finished);
        }
        if offer.len() != self.offer_size() {
            return Err(GameError::OfferSize { round, got: offer.len(), expected: self.offer_size() });
        }
        for (i, &e) in offer.iter().enumerate() {
            if e as usize >= self.owner.len() {
                return Err(GameError::NoSuchElement { round, element: e });
            }
            if !self.is_free(e) {
                return Err(GameError::NotFree { round, element: e });
            }
            if offer[..i].contains(&e) {
                return Err(GameError::Duplicate { round, element: e });
            }
        }
        if !offer.contains(&pick) {
            return Err(GameError::PickOutsideOffer { round, pick });
        }
        Ok(())
    }

    pub fn apply_round(&mut self, offer: &[ElementId], pick: ElementId) -> Result<(), GameError> {
        self.validate(offer, pick)?;
        for &e in offer {
            self.take(e, if e == pick { Owner::Client } else { Owner::Waiter });
        }
        self.round += 1;
        self.transcript.offers.extend_from_slice(offer);
        self.transcript.picks.push(pick);
        Ok(())
    }

    /// Hands every remaining free element to Waiter.
    pub fn finalize(&mut self) -> Result<(), GameError> {
        if self.free_list.len() >= self.offer_size() {
            return Err(GameError::FinalizeTooEarly { free: self.free_list.len(), b: self.b });
        }
        while let Some(&e) = self.free_list.last() {
            self.take(e, Owner::Waiter);
        }
        self.finished = true;
        Ok(())
    }
}

/// Round log of one game. Offers are stored flat, `b+1` per round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub board: String,
    pub b: u64,
    pub seed: u64,
    offers: Vec<ElementId>,
    picks: Vec<ElementId>,
}

impl Transcript {
    pub fn new(board: String, b: u64, seed: u64) -> Self {
        Self { board, b, seed, offers: Vec::new(), picks: Vec::new() }
    }

    pub fn rounds(&self) -> usize {
        self.picks.len()
    }

    pub fn offer(&self, i: usize) -> &[ElementId] {
        let w = self.b as usize + 1;
        &self.offers[i * w..(i + 1) * w]
    }

    pub fn pick(&self, i: usize) -> ElementId {
        self.picks[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[ElementId], ElementId)> + '_ {
        (0..self.rounds()).map(move |i| (self.offer(i), self.pick(i)))
    }

    pub fn push(&mut self, offer: &[ElementId], pick: ElementId) {
        assert_eq!(offer.len(), self.b as usize + 1);
        self.offers.extend_from_slice(offer);
        self.picks.push(pick);
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "# posgame transcript v1").unwrap();
        writeln!(out, "board={}", self.board).unwrap();
        writeln!(out, "b={}", self.b).unwrap();
        writeln!(out, "seed={}", self.seed).unwrap();
        for (i, (offer, pick)) in self.iter().enumerate() {
            let ids: Vec<String> = offer.iter().map(|e| e.to_string()).collect();
            writeln!(out, "R{}: offer={} pick={}", i + 1, ids.join(","), pick).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, GameError> {
        let err = |line: usize, message: &str| GameError::Transcript { line, message: message.to_string() };
        let mut board = None;
        let mut b = None;
        let mut seed = None;
        let mut rounds: Vec<(Vec<ElementId>, ElementId)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(v) = line.strip_prefix("board=") {
                board = Some(v.to_string());
            } else if let Some(v) = line.strip_prefix("b=") {
                b = Some(v.parse::<u64>().map_err(|_| err(line_no, "bad bias"))?);
            } else if let Some(v) = line.strip_prefix("seed=") {
                seed = Some(v.parse::<u64>().map_err(|_| err(line_no, "bad seed"))?);
            } else if line.starts_with('R') {
                let (head, rest) = line.split_once(':').ok_or_else(|| err(line_no, "missing ':'"))?;
                let idx: usize = head[1..].parse().map_err(|_| err(line_no, "bad round index"))?;
                if idx != rounds.len() + 1 {
                    return Err(err(line_no, "rounds out of order"));
                }
                let rest = rest.trim();
                let (offer_part, pick_part) =
                    rest.split_once(" pick=").ok_or_else(|| err(line_no, "missing pick"))?;
                let offer_ids = offer_part.strip_prefix("offer=").ok_or_else(|| err(line_no, "missing offer"))?;
                let offer = offer_ids
                    .split(',')
                    .map(|t| t.parse::<ElementId>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| err(line_no, "bad offer id"))?;
                let pick = pick_part.trim().parse().map_err(|_| err(line_no, "bad pick id"))?;
                rounds.push((offer, pick));
            } else {
                return Err(err(line_no, "unrecognized line"));
            }
        }
        let b = b.ok_or_else(|| err(0, "missing b="))?;
        let mut t = Transcript::new(board.ok_or_else(|| err(0, "missing board="))?, b, seed.unwrap_or(0));
        for (i, (offer, pick)) in rounds.iter().enumerate() {
            if offer.len() != b as usize + 1 {
                return Err(err(i + 1, "offer size does not match b"));
            }
            t.push(offer, *pick);
        }
        Ok(t)
    }
}

/// Explicit sets of element ids with an element-to-set incidence index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    universe: usize,
    sets: Vec<Vec<ElementId>>,
    incidence: Vec<Vec<u32>>,
}

impl SetFamily {
    /// Sorts and dedups each set; repeated sets are kept.
    pub fn new(universe: usize, sets: Vec<Vec<ElementId>>) -> Result<Self, GameError> {
        let mut incidence = vec![Vec::new(); universe];
        let mut clean = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            for &e in &s {
                if e as usize >= universe {
                    return Err(GameError::Family(format!("set {i} mentions element {e} outside 0..{universe}")));
                }
                incidence[e as usize].push(i as u32);
            }
            clean.push(s);
        }
        Ok(Self { universe, sets: clean, incidence })
    }

    /// Edge sets of all copies of `h` in the board.
    pub fn copies_of(board: &Board, h: &Pattern) -> Self {
        Self::from_embeddings(board, h, None)
    }

    /// Edge sets of canonical copies of `h` on a blow-up board.
    pub fn canonical_copies_of(board: &Board, h: &Pattern) -> Self {
        Self::from_embeddings(board, h, Some(LabeledPattern::identity(h)))
    }

    fn from_embeddings(board: &Board, h: &Pattern, labels: Option<LabeledPattern>) -> Self {
        use crate::graph::{ClaimedGraph, EmbeddingSearch};
        let full = board.full_set();
        let host = ClaimedGraph::new(board, &full);
        let search = match &labels {
            Some(l) => EmbeddingSearch::canonical(l),
            None => EmbeddingSearch::new(h),
        };
        let mut seen = std::collections::BTreeSet::new();
        search.for_each(&host, &|w| board.part_of(w), |m| {
            let mut set: Vec<ElementId> =
                h.edges().iter().map(|&(a, b)| board.edge_id(m[a], m[b]).unwrap()).collect();
            set.sort_unstable();
            seen.insert(set);
            true
        });
        Self::new(board.element_count(), seen.into_iter().collect()).expect("copies use board elements")
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Vec<ElementId>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[ElementId] {
        &self.sets[i]
    }

    /// Indices of sets containing `e`.
    pub fn containing(&self, e: ElementId) -> &[u32] {
        &self.incidence[e as usize]
    }

    pub fn degree(&self, e: ElementId) -> usize {
        self.incidence[e as usize].len()
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Sum over sets of (b+1)^{-|A|}.
    pub fn potential_bound(&self, b: u64) -> f64 {
        self.sets.iter().map(|s| ((b + 1) as f64).powi(-(s.len() as i32))).sum()
    }

    /// Number of sets whose elements are all owned by Client.
    pub fn count_claimed(&self, owners: &[Owner]) -> u64 {
        self.sets.iter().filter(|s| s.iter().all(|&e| owners[e as usize] == Owner::Client)).count() as u64
    }
}

/// The sets whose full ownership by Client counts toward the value.
#[derive(Clone, Debug)]
pub enum WinningFamily {
    Explicit(SetFamily),
    /// All copies of a pattern, or only canonical ones on a blow-up board.
    Pattern { pattern: Pattern, canonical: bool },
}

impl WinningFamily {
    pub fn copies(pattern: Pattern) -> Self {
        WinningFamily::Pattern { pattern, canonical: false }
    }

    pub fn canonical(pattern: Pattern) -> Self {
        WinningFamily::Pattern { pattern, canonical: true }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, WinningFamily::Pattern { canonical: true, .. })
    }

    pub fn pattern(&self) -> Option<&Pattern> {
        match self {
            WinningFamily::Pattern { pattern, .. } => Some(pattern),
            WinningFamily::Explicit(_) => None,
        }
    }

    /// Materializes the family as explicit sets.
    pub fn to_explicit(&self, board: &Board) -> Result<SetFamily, GameError> {
        match self {
            WinningFamily::Explicit(f) => Ok(f.clone()),
            WinningFamily::Pattern { pattern, canonical: false } => Ok(SetFamily::copies_of(board, pattern)),
            WinningFamily::Pattern { pattern, canonical: true } => {
                if board.part_size().is_none() {
                    return Err(GameError::Family("canonical copies need a blow-up board".into()));
                }
                Ok(SetFamily::canonical_copies_of(board, pattern))
            }
        }
    }

    /// Number of family sets fully owned by Client.
    pub fn count(&self, board: &Board, owners: &[Owner]) -> Result<u64, GameError> {
        match self {
            WinningFamily::Explicit(f) => {
                if f.universe() != board.element_count() {
                    return Err(GameError::Family("family universe does not match the board".into()));
                }
                Ok(f.count_claimed(owners))
            }
            WinningFamily::Pattern { pattern, canonical } => {
                let mut claimed = board.empty_set();
                for (i, &o) in owners.iter().enumerate() {
                    if o == Owner::Client {
                        claimed.insert(i as u32);
                    }
                }
                if *canonical {
                    count_canonical_copies(board, &claimed, &LabeledPattern::identity(pattern))
                        .map_err(|e| GameError::Family(e.to_string()))
                } else {
                    Ok(count_copies(board, &claimed, pattern))
                }
            }
        }
    }
}

/// Number of family sets fully owned by Client in a finished game.
pub fn value(state: &GameState, family: &WinningFamily) -> Result<u64, GameError> {
    family.count(state.board(), state.owners())
}

/// Plays a full game. Both strategies share one random stream seeded by `seed`.
pub fn play(
    board: Arc<Board>,
    b: u64,
    waiter: &mut dyn Waiter,
    client: &mut dyn Client,
    seed: u64,
) -> Result<GameState, GameError> {
    let mut state = GameState::new(board, b)?;
    state.set_seed(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    play_from(&mut state, waiter, client, &mut rng)?;
    Ok(state)
}

/// Continues a game until it is finalized.
pub fn play_from(
    state: &mut GameState,
    waiter: &mut dyn Waiter,
    client: &mut dyn Client,
    rng: &mut ChaCha8Rng,
) -> Result<(), GameError> {
    while state.can_offer() {
        let offer = waiter
            .offer(state, rng)
            .map_err(|e| GameError::Strategy { strategy: waiter.name(), message: e.0 })?;
        if let Err(source) = state.validate(&offer, offer.first().copied().unwrap_or(u32::MAX)) {
            return Err(GameError::Illegal {
                strategy: waiter.name(),
                round: state.round() + 1,
                free: state.free_count(),
                offer,
                source: Box::new(source),
            });
        }
        let pick = client
            .pick(state, &offer, rng)
            .map_err(|e| GameError::Strategy { strategy: client.name(), message: e.0 })?;
        if let Err(source) = state.apply_round(&offer, pick) {
            return Err(GameError::Illegal {
                strategy: client.name(),
                round: state.round() + 1,
                free: state.free_count(),
                offer,
                source: Box::new(source),
            });
        }
        waiter.observe(state, &offer, pick);
        client.observe(state, &offer, pick);
    }
    if !state.is_finished() {
        state.finalize()?;
    }
    Ok(())
}

/// Rebuilds the final state of a recorded game.
pub fn replay(board: Arc<Board>, transcript: &Transcript) -> Result<GameState, GameError> {
    let mut state = GameState::new(board, transcript.b)?;
    state.set_seed(transcript.seed);
    for (offer, pick) in transcript.iter() {
        state.apply_round(offer, pick)?;
    }
    state.finalize()?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::baseline::{RandomClient, RandomWaiter};

    fn k(n: usize) -> Arc<Board> {
        Arc::new(Board::complete(n).unwrap())
    }

    #[test]
    fn new_game_and_errors() {
        let s = GameState::new(k(4), 1).unwrap();
        assert_eq!(s.free_count(), 6);
        let blow = Arc::new(Board::blowup(&Pattern::complete(3), 2).unwrap());
        assert_eq!(GameState::new(blow, 2).unwrap().free_count(), 12);
        assert_eq!(GameState::new(k(4), 0).unwrap_err(), GameError::ZeroBias);
    }

    #[test]
    fn apply_round_rules() {
        let mut s = GameState::new(k(4), 1).unwrap();
        s.apply_round(&[3, 5], 5).unwrap();
        assert_eq!(s.owner(5), Owner::Client);
        assert_eq!(s.owner(3), Owner::Waiter);
        assert!(matches!(s.apply_round(&[3, 4], 4), Err(GameError::NotFree { element: 3, .. })));
        assert!(matches!(s.apply_round(&[4], 4), Err(GameError::OfferSize { .. })));
        assert!(matches!(s.apply_round(&[0, 1], 2), Err(GameError::PickOutsideOffer { .. })));
        assert!(matches!(s.apply_round(&[0, 0], 0), Err(GameError::Duplicate { .. })));
        assert!(matches!(s.apply_round(&[0, 99], 0), Err(GameError::NoSuchElement { .. })));
        assert_eq!(s.round(), 1);
    }

    #[test]
    fn finalize_rules() {
        let mut s = GameState::new(k(4), 1).unwrap();
        for r in 0..3u32 {
            s.apply_round(&[2 * r, 2 * r + 1], 2 * r).unwrap();
        }
        s.finalize().unwrap();
        assert_eq!((s.client_count(), s.waiter_count()), (3, 3));

        let seven = Arc::new(Board::from_edges(8, &(0..7).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap());
        let mut s = GameState::new(seven, 1).unwrap();
        assert!(s.finalize().is_err());
        for r in 0..3u32 {
            s.apply_round(&[2 * r, 2 * r + 1], 2 * r + 1).unwrap();
        }
        s.finalize().unwrap();
        assert_eq!(s.owner(6), Owner::Waiter);

        let ten = Arc::new(Board::ground_set(10));
        let mut s = GameState::new(ten, 2).unwrap();
        for r in 0..3u32 {
            s.apply_round(&[3 * r, 3 * r + 1, 3 * r + 2], 3 * r).unwrap();
        }
        s.finalize().unwrap();
        assert_eq!(s.owner(9), Owner::Waiter);
        assert_eq!(s.waiter_count(), 7);
    }

    #[test]
    fn tiny_board_finalizes_at_once() {
        let one = Arc::new(Board::ground_set(1));
        let mut w = RandomWaiter;
        let mut c = RandomClient;
        let s = play(one, 1, &mut w, &mut c, 7).unwrap();
        assert_eq!(s.round(), 0);
        assert_eq!(value(&s, &WinningFamily::copies(Pattern::complete(2))).unwrap(), 0);
    }

    #[test]
    fn random_play_is_reproducible_and_conserves() {
        for n in [4usize, 7, 9] {
            for b in 1..4u64 {
                let board = k(n);
                let run = |seed| {
                    let (mut w, mut c) = (RandomWaiter, RandomClient);
                    play(board.clone(), b, &mut w, &mut c, seed).unwrap()
                };
                let a = run(11);
                let again = run(11);
                assert_eq!(a.transcript(), again.transcript());
                let nel = board.element_count();
                assert_eq!(a.round() as usize, nel / (b as usize + 1));
                assert_eq!(a.client_count(), nel / (b as usize + 1));
                assert_eq!(a.client_count() + a.waiter_count(), nel);
                let k2 = value(&a, &WinningFamily::copies(Pattern::complete(2))).unwrap();
                assert_eq!(k2 as usize, nel / (b as usize + 1));
            }
        }
    }

    #[test]
    fn transcript_round_trip_and_replay() {
        let board = k(6);
        let (mut w, mut c) = (RandomWaiter, RandomClient);
        let s = play(board.clone(), 2, &mut w, &mut c, 99).unwrap();
        let text = s.transcript().to_text();
        assert!(text.starts_with("# posgame transcript v1\nboard=complete:6\nb=2\nseed=99\nR1: offer="));
        let t = Transcript::parse(&text).unwrap();
        assert_eq!(&t, s.transcript());
        assert_eq!(t.to_text(), text);
        let r = replay(board, &t).unwrap();
        assert_eq!(r.owners(), s.owners());
        assert!(Transcript::parse("b=1\nR2: offer=0,1 pick=0").is_err());
    }

    #[test]
    fn value_examples() {
        let board = k(4);
        let tri = WinningFamily::copies(Pattern::complete(3));
        let mut s = GameState::new(board.clone(), 1).unwrap();
        assert_eq!(value(&s, &tri).unwrap(), 0);
        // edges 0-1, 0-2, 1-2 are ids 0, 1, 3
        s.apply_round(&[0, 2], 0).unwrap();
        s.apply_round(&[1, 4], 1).unwrap();
        s.apply_round(&[3, 5], 3).unwrap();
        s.finalize().unwrap();
        assert_eq!(value(&s, &tri).unwrap(), 1);
        let explicit = WinningFamily::Explicit(tri.to_explicit(&board).unwrap());
        assert_eq!(value(&s, &explicit).unwrap(), 1);
        // all six edges, counted through the family directly
        let all = vec![Owner::Client; 6];
        assert_eq!(tri.count(&board, &all).unwrap(), 4);
    }

    #[test]
    fn copies_family_sizes() {
        let f = SetFamily::copies_of(&Board::complete(5).unwrap(), &Pattern::complete(3));
        assert_eq!(f.len(), 10);
        assert!(f.sets().iter().all(|s| s.len() == 3));
        let p3 = SetFamily::copies_of(&Board::complete(4).unwrap(), &Pattern::path(3));
        assert_eq!(p3.len(), 12);
        let blow = Board::blowup(&Pattern::path(3), 2).unwrap();
        let canon = SetFamily::canonical_copies_of(&blow, &Pattern::path(3));
        assert_eq!(canon.len(), 8);
        assert!((f.potential_bound(1) - 10.0 / 8.0).abs() < 1e-12);
    }
}
