//! Patterns, boards and subgraph counting.
//!
//! A [`Pattern`] is the small fixed graph a game is played for. A [`Board`]
//! is the indexed edge universe the game is played on: either a complete
//! graph or a blow-up of a pattern. Everything above this module talks in
//! element ids (`0..N`), never in vertex pairs.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub type VertexId = u32;
pub type ElementId = u32;

/// Patterns are stored with `u64` adjacency masks.
pub const MAX_PATTERN_VERTICES: usize = 64;
/// Exhaustive subgraph enumeration is limited to this many pattern vertices.
pub const MAX_SUBGRAPH_ENUM_VERTICES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: loop edge {vertex}-{vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("line {line}: malformed token {token:?}")]
    Malformed { line: usize, token: String },
    #[error("vertex {vertex} out of range for declared count {count}")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("pattern has {0} vertices, more than the supported {MAX_PATTERN_VERTICES}")]
    TooManyVertices(usize),
    #[error("subgraph enumeration is capped at {MAX_SUBGRAPH_ENUM_VERTICES} vertices, pattern has {0}")]
    EnumerationCap(usize),
    #[error("board with {0} elements exceeds the element index capacity")]
    ElementOverflow(u128),
    #[error("blow-up needs a pattern with at least one edge and part size >= 1")]
    EmptyBlowup,
    #[error("unknown pattern name {0:?}")]
    UnknownName(String),
    #[error("invalid board descriptor {0:?}")]
    BadDescriptor(String),
    #[error("board is not a blow-up")]
    NotBlowup,
    #[error("part label {part} not present on a board with {parts} parts")]
    MissingPart { part: usize, parts: usize },
    #[error("embedding enumeration exceeded the cap of {0}")]
    EmbeddingCap(u64),
}

/// A small labeled graph without loops or repeated edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u64>,
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern(v={}, edges={:?})", self.vertex_count, self.edges)
    }
}

impl Pattern {
    /// Builds a pattern, normalizing each edge to `(min, max)` and dropping
    /// repeated pairs. Edge order follows first occurrence.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if vertex_count > MAX_PATTERN_VERTICES {
            return Err(GraphError::TooManyVertices(vertex_count));
        }
        let mut adj = vec![0u64; vertex_count];
        let mut out = Vec::with_capacity(edges.len());
        for (idx, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(GraphError::Loop { line: idx + 1, vertex: u });
            }
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: w, count: vertex_count });
                }
            }
            let (a, b) = (u.min(v), u.max(v));
            if adj[a] >> b & 1 == 1 {
                continue;
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
            out.push((a, b));
        }
        Ok(Self { vertex_count, edges: out, adj })
    }

    pub fn complete(k: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                edges.push((u, v));
            }
        }
        Self::new(k, &edges).expect("complete graph is valid")
    }

    /// Path on `k` vertices `0-1-...-(k-1)`.
    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (1..k).map(|v| (v - 1, v)).collect();
        Self::new(k, &edges).expect("path is valid")
    }

    /// Star on `k` vertices with center 0.
    pub fn star(k: usize) -> Self {
        let edges: Vec<_> = (1..k).map(|v| (0, v)).collect();
        Self::new(k, &edges).expect("star is valid")
    }

    pub fn cycle(k: usize) -> Self {
        let mut edges: Vec<_> = (1..k).map(|v| (v - 1, v)).collect();
        if k >= 3 {
            edges.push((0, k - 1));
        }
        Self::new(k, &edges).expect("cycle is valid")
    }

    /// Resolves the shorthand names `kN`, `pN`, `sN` and `cN`
    /// (clique, path, star, cycle on `N` vertices).
    pub fn named(name: &str) -> Result<Self, GraphError> {
        let name = name.trim();
        let bad = || GraphError::UnknownName(name.to_string());
        let mut chars = name.chars();
        let kind = chars.next().ok_or_else(bad)?.to_ascii_lowercase();
        let k: usize = chars.as_str().parse().map_err(|_| bad())?;
        if k == 0 || k > MAX_PATTERN_VERTICES {
            return Err(bad());
        }
        match kind {
            'k' => Ok(Self::complete(k)),
            'p' => Ok(Self::path(k)),
            's' => Ok(Self::star(k)),
            'c' if k >= 3 => Ok(Self::cycle(k)),
            _ => Err(bad()),
        }
    }

    /// Parses an edge-list document: lines `u v`, optionally preceded by a
    /// line `n <count>`. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut declared: Option<usize> = None;
        let mut edges = Vec::new();
        let mut max_vertex: Option<usize> = None;
        let mut seen_edge = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let malformed = |t: &str| GraphError::Malformed { line: line_no, token: t.to_string() };
            if tokens[0] == "n" {
                if seen_edge || declared.is_some() || tokens.len() != 2 {
                    return Err(malformed(line));
                }
                declared = Some(tokens[1].parse().map_err(|_| malformed(tokens[1]))?);
                continue;
            }
            if tokens.len() != 2 {
                return Err(malformed(line));
            }
            let u: usize = tokens[0].parse().map_err(|_| malformed(tokens[0]))?;
            let v: usize = tokens[1].parse().map_err(|_| malformed(tokens[1]))?;
            if u == v {
                return Err(GraphError::Loop { line: line_no, vertex: u });
            }
            if let Some(count) = declared {
                for w in [u, v] {
                    if w >= count {
                        return Err(GraphError::VertexOutOfRange { vertex: w, count });
                    }
                }
            }
            max_vertex = Some(max_vertex.unwrap_or(0).max(u).max(v));
            edges.push((u, v));
            seen_edge = true;
        }
        let count = declared.unwrap_or_else(|| max_vertex.map_or(0, |m| m + 1));
        Self::new(count, &edges)
    }

    /// Accepts a shorthand name, `edges:0-1,1-2`, or an edge-list document.
    pub fn from_spec(spec: &str) -> Result<Self, GraphError> {
        let spec = spec.trim();
        if let Some(list) = spec.strip_prefix("edges:") {
            let mut doc = String::new();
            for item in list.split(',').filter(|s| !s.trim().is_empty()) {
                let (u, v) = item
                    .split_once('-')
                    .ok_or_else(|| GraphError::Malformed { line: 1, token: item.to_string() })?;
                doc.push_str(&format!("{} {}\n", u.trim(), v.trim()));
            }
            return Self::parse(&doc);
        }
        if spec.contains(char::is_whitespace) {
            return Self::parse(spec);
        }
        Self::named(spec)
    }

    /// Compact textual form accepted by [`Pattern::from_spec`].
    pub fn to_spec(&self) -> String {
        let body: Vec<String> = self.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        if self.vertex_count == self.edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(0) {
            format!("edges:{}", body.join(","))
        } else {
            // isolated trailing vertices need the document form
            let mut doc = format!("n {}\n", self.vertex_count);
            for (u, v) in &self.edges {
                doc.push_str(&format!("{u} {v}\n"));
            }
            doc
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adj[u] >> v & 1 == 1
    }

    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn full_mask(&self) -> u64 {
        if self.vertex_count == 64 {
            u64::MAX
        } else {
            (1u64 << self.vertex_count) - 1
        }
    }

    /// Number of edges of the subgraph induced on the vertex set `mask`.
    pub fn induced_edge_count(&self, mask: u64) -> usize {
        let mut twice = 0;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            twice += (self.adj[v] & mask).count_ones() as usize;
        }
        twice / 2
    }

    pub fn is_complete(&self) -> bool {
        let v = self.vertex_count;
        self.edges.len() == v * v.saturating_sub(1) / 2
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count).filter(|&v| self.adj[v] == 0).collect()
    }

    /// Removes isolated vertices, relabeling the rest in increasing order.
    pub fn strip_isolated(&self) -> Pattern {
        let keep: Vec<usize> = (0..self.vertex_count).filter(|&v| self.adj[v] != 0).collect();
        self.relabeled(&keep)
    }

    /// The subgraph induced on the listed vertices; vertex `keep[i]` becomes `i`.
    pub fn relabeled(&self, keep: &[usize]) -> Pattern {
        let mut index = vec![usize::MAX; self.vertex_count];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        Pattern::new(keep.len(), &edges).expect("relabeled subgraph is valid")
    }

    /// Same vertex set, selected edges removed.
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> Pattern {
        let norm: Vec<_> = removed.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        let edges: Vec<_> = self.edges.iter().copied().filter(|e| !norm.contains(e)).collect();
        Pattern::new(self.vertex_count, &edges).expect("edge removal keeps validity")
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == self.full_mask()
    }

    pub fn is_forest(&self) -> bool {
        // a graph is a forest iff e = v - (number of components)
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count >= 1 && self.is_connected() && self.is_forest()
    }

    /// True if some vertex has degree at least two, i.e. a path on three
    /// vertices is a subgraph.
    pub fn contains_cherry(&self) -> bool {
        self.max_degree() >= 2
    }

    /// |Aut(H)|, counted as the number of embeddings of the pattern into itself.
    pub fn automorphism_count(&self) -> u64 {
        let host = AdjacencyHost::from_pattern(self);
        EmbeddingSearch::new(self).count(&host)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_spec())
    }
}

/// A pattern whose vertices carry part indices of a blow-up board.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPattern {
    pub pattern: Pattern,
    pub parts: Vec<usize>,
}

impl LabeledPattern {
    /// Vertex `i` of the pattern lives in part `i`.
    pub fn identity(pattern: &Pattern) -> Self {
        Self { parts: (0..pattern.vertex_count()).collect(), pattern: pattern.clone() }
    }

    /// The subgraph of `h` induced on `vertices`, keeping original labels as parts.
    pub fn induced(h: &Pattern, vertices: &[usize]) -> Self {
        Self { pattern: h.relabeled(vertices), parts: vertices.to_vec() }
    }

    /// A subgraph of `h` on `vertices` using only the listed edges (original labels).
    pub fn subgraph(h: &Pattern, vertices: &[usize], edges: &[(usize, usize)]) -> Self {
        let mut index = vec![usize::MAX; h.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let local: Vec<_> = edges.iter().map(|&(u, v)| (index[u], index[v])).collect();
        Self {
            pattern: Pattern::new(vertices.len(), &local).expect("subgraph edges lie on the vertex set"),
            parts: vertices.to_vec(),
        }
    }
}

// ---------------------------------------------------------------------------
// boards

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoardKind {
    Complete,
    Blowup { pattern: Pattern, part_size: usize },
    Explicit,
}

/// An indexed edge universe.
#[derive(Clone, Debug)]
pub struct Board {
    vertex_count: usize,
    elements: Vec<(VertexId, VertexId)>,
    part_of: Option<Vec<u32>>,
    kind: BoardKind,
    // blow-ups: pattern-edge index for each ordered part pair, or u32::MAX
    part_pair_edge: Vec<u32>,
    // explicit boards only
    lookup: HashMap<(VertexId, VertexId), ElementId>,
    adjacency: Vec<Vec<(VertexId, ElementId)>>,
}

impl PartialEq for Board {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.elements == other.elements && self.part_of == other.part_of
    }
}

impl Board {
    /// `K_n`; elements are the pairs in lexicographic order.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let count = (n as u128) * (n as u128).saturating_sub(1) / 2;
        if count > u32::MAX as u128 {
            return Err(GraphError::ElementOverflow(count));
        }
        let mut elements = Vec::with_capacity(count as usize);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                elements.push((u, v));
            }
        }
        Ok(Self {
            vertex_count: n,
            elements,
            part_of: None,
            kind: BoardKind::Complete,
            part_pair_edge: Vec::new(),
            lookup: HashMap::new(),
            adjacency: Vec::new(),
        })
    }

    /// The `s`-th blow-up of `h`: part `i` is the vertex block `i*s..(i+1)*s`,
    /// and each pattern edge `(i, j)` contributes the `s*s` pairs between
    /// parts `i` and `j`, in pattern-edge order.
    pub fn blowup(h: &Pattern, s: usize) -> Result<Self, GraphError> {
        if s == 0 || h.edge_count() == 0 {
            return Err(GraphError::EmptyBlowup);
        }
        let count = h.edge_count() as u128 * (s as u128) * (s as u128);
        let vertices = h.vertex_count() as u128 * s as u128;
        if count > u32::MAX as u128 || vertices > u32::MAX as u128 {
            return Err(GraphError::ElementOverflow(count));
        }
        let t = h.vertex_count();
        let mut elements = Vec::with_capacity(count as usize);
        let mut part_pair_edge = vec![u32::MAX; t * t];
        for (idx, &(i, j)) in h.edges().iter().enumerate() {
            part_pair_edge[i * t + j] = idx as u32;
            part_pair_edge[j * t + i] = idx as u32;
            for x in 0..s {
                for y in 0..s {
                    elements.push(((i * s + x) as u32, (j * s + y) as u32));
                }
            }
        }
        let part_of = (0..t * s).map(|v| (v / s) as u32).collect();
        Ok(Self {
            vertex_count: t * s,
            elements,
            part_of: Some(part_of),
            kind: BoardKind::Blowup { pattern: h.clone(), part_size: s },
            part_pair_edge,
            lookup: HashMap::new(),
            adjacency: Vec::new(),
        })
    }

    /// A board on an arbitrary edge list (duplicates dropped, order kept).
    pub fn from_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut lookup = HashMap::new();
        let mut elements = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for (idx, &(u, v)) in pairs.iter().enumerate() {
            if u == v {
                return Err(GraphError::Loop { line: idx + 1, vertex: u });
            }
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u.max(v), count: n });
            }
            let key = (u.min(v) as u32, u.max(v) as u32);
            if lookup.contains_key(&key) {
                continue;
            }
            let id = elements.len() as u32;
            lookup.insert(key, id);
            elements.push(key);
            adjacency[key.0 as usize].push((key.1, id));
            adjacency[key.1 as usize].push((key.0, id));
        }
        Ok(Self {
            vertex_count: n,
            elements,
            part_of: None,
            kind: BoardKind::Explicit,
            part_pair_edge: Vec::new(),
            lookup,
            adjacency,
        })
    }

    /// An abstract ground set of `n` elements, realized as a perfect matching.
    pub fn ground_set(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
        Self::from_edges(2 * n, &pairs).expect("matching board is valid")
    }

    /// Parses `complete:<n>`, `k<n>`, `blowup:<pattern>:<s>` or
    /// `explicit:<n>:<u-v,...>`.
    pub fn from_descriptor(desc: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::BadDescriptor(desc.to_string());
        let desc = desc.trim();
        if let Some(n) = desc.strip_prefix("complete:") {
            return Self::complete(n.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = desc.strip_prefix("blowup:") {
            let (pat, s) = rest.rsplit_once(':').ok_or_else(bad)?;
            let h = Pattern::from_spec(pat)?;
            return Self::blowup(&h, s.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = desc.strip_prefix("explicit:") {
            let (n, list) = rest.split_once(':').ok_or_else(bad)?;
            let n: usize = n.parse().map_err(|_| bad())?;
            let mut pairs = Vec::new();
            for item in list.split(',').filter(|s| !s.is_empty()) {
                let (u, v) = item.split_once('-').ok_or_else(bad)?;
                pairs.push((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?));
            }
            return Self::from_edges(n, &pairs);
        }
        if let Some(n) = desc.strip_prefix('k').or_else(|| desc.strip_prefix('K')) {
            return Self::complete(n.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }

    pub fn descriptor(&self) -> String {
        match &self.kind {
            BoardKind::Complete => format!("complete:{}", self.vertex_count),
            BoardKind::Blowup { pattern, part_size } => format!("blowup:{}:{}", pattern.to_spec(), part_size),
            BoardKind::Explicit => {
                let body: Vec<String> = self.elements.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                format!("explicit:{}:{}", self.vertex_count, body.join(","))
            }
        }
    }

    pub fn kind(&self) -> &BoardKind {
        &self.kind
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.kind, BoardKind::Complete)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn endpoints(&self, e: ElementId) -> (VertexId, VertexId) {
        self.elements[e as usize]
    }

    pub fn elements(&self) -> &[(VertexId, VertexId)] {
        &self.elements
    }

    pub fn part_of(&self, v: VertexId) -> Option<usize> {
        self.part_of.as_ref().map(|p| p[v as usize] as usize)
    }

    pub fn part_count(&self) -> usize {
        match &self.kind {
            BoardKind::Blowup { pattern, .. } => pattern.vertex_count(),
            _ => 0,
        }
    }

    pub fn part_size(&self) -> Option<usize> {
        match &self.kind {
            BoardKind::Blowup { part_size, .. } => Some(*part_size),
            _ => None,
        }
    }

    pub fn blowup_pattern(&self) -> Option<&Pattern> {
        match &self.kind {
            BoardKind::Blowup { pattern, .. } => Some(pattern),
            _ => None,
        }
    }

    /// Vertices of part `i` of a blow-up.
    pub fn part_vertices(&self, i: usize) -> std::ops::Range<VertexId> {
        let s = self.part_size().expect("part_vertices on a blow-up board");
        (i * s) as u32..((i + 1) * s) as u32
    }

    /// Element id of the pair `{u, v}`, if it is a board element.
    #[inline]
    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<ElementId> {
        if u == v {
            return None;
        }
        let (a, b) = (u.min(v) as u64, u.max(v) as u64);
        match &self.kind {
            BoardKind::Complete => {
                let n = self.vertex_count as u64;
                if b >= n {
                    return None;
                }
                Some((a * (2 * n - a - 1) / 2 + (b - a - 1)) as u32)
            }
            BoardKind::Blowup { pattern, part_size } => {
                let s = *part_size as u64;
                let t = pattern.vertex_count() as u64;
                if b >= t * s {
                    return None;
                }
                let (pa, pb) = (a / s, b / s);
                let idx = self.part_pair_edge[(pa * t + pb) as usize];
                if idx == u32::MAX {
                    return None;
                }
                // pattern edges are stored with the smaller part first, and
                // parts are contiguous blocks, so `a` lies in the first part
                Some((idx as u64 * s * s + (a - pa * s) * s + (b - pb * s)) as u32)
            }
            BoardKind::Explicit => self.lookup.get(&(a as u32, b as u32)).copied(),
        }
    }

    /// Calls `f(w, element)` for every board neighbor `w` of `v`.
    #[inline]
    pub fn for_each_neighbor(&self, v: VertexId, mut f: impl FnMut(VertexId, ElementId)) {
        match &self.kind {
            BoardKind::Complete => {
                for w in 0..self.vertex_count as u32 {
                    if w != v {
                        f(w, self.edge_id(v, w).unwrap());
                    }
                }
            }
            BoardKind::Blowup { pattern, part_size } => {
                let p = v as usize / part_size;
                let mut mask = pattern.neighbor_mask(p);
                while mask != 0 {
                    let q = mask.trailing_zeros() as usize;
                    mask &= mask - 1;
                    for w in (q * part_size) as u32..((q + 1) * part_size) as u32 {
                        f(w, self.edge_id(v, w).unwrap());
                    }
                }
            }
            BoardKind::Explicit => {
                for &(w, e) in &self.adjacency[v as usize] {
                    f(w, e);
                }
            }
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        match &self.kind {
            BoardKind::Complete => self.vertex_count - 1,
            BoardKind::Blowup { pattern, part_size } => pattern.degree(v as usize / part_size) * part_size,
            BoardKind::Explicit => self.adjacency[v as usize].len(),
        }
    }

    /// An edge set holding every element.
    pub fn full_set(&self) -> EdgeSet {
        EdgeSet::full(self.element_count())
    }

    pub fn empty_set(&self) -> EdgeSet {
        EdgeSet::new(self.element_count())
    }
}

// ---------------------------------------------------------------------------
// edge sets

/// Bitset over board element ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl EdgeSet {
    pub fn new(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self { len, words: vec![u64::MAX; len.div_ceil(64)] };
        if len % 64 != 0 {
            if let Some(last) = s.words.last_mut() {
                *last = (1u64 << (len % 64)) - 1;
            }
        }
        s
    }

    pub fn from_elements(len: usize, elements: impl IntoIterator<Item = ElementId>) -> Self {
        let mut s = Self::new(len);
        for e in elements {
            s.insert(e);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, e: ElementId) -> bool {
        let e = e as usize;
        e < self.len && self.words[e / 64] >> (e % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: ElementId) {
        let e = e as usize;
        assert!(e < self.len, "element {e} outside edge set of length {}", self.len);
        self.words[e / 64] |= 1 << (e % 64);
    }

    #[inline]
    pub fn remove(&mut self, e: ElementId) {
        let e = e as usize;
        if e < self.len {
            self.words[e / 64] &= !(1 << (e % 64));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * 64) as u32 + b)
            })
        })
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

// ---------------------------------------------------------------------------
// host graphs and embedding search

/// A graph that patterns can be embedded into.
pub trait Host {
    fn vertex_count(&self) -> usize;
    fn has_edge(&self, u: VertexId, v: VertexId) -> bool;
    fn neighbors(&self, v: VertexId) -> &[VertexId];
    fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }
}

/// The subgraph of a board spanned by a set of claimed elements.
pub struct ClaimedGraph<'a> {
    board: &'a Board,
    set: &'a EdgeSet,
    adj: Vec<Vec<VertexId>>,
}

impl<'a> ClaimedGraph<'a> {
    pub fn new(board: &'a Board, set: &'a EdgeSet) -> Self {
        let mut adj = vec![Vec::new(); board.vertex_count()];
        for e in set.iter() {
            let (u, v) = board.endpoints(e);
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Self { board, set, adj }
    }
}

impl Host for ClaimedGraph<'_> {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.board.edge_id(u, v).is_some_and(|e| self.set.contains(e))
    }

    fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }
}

/// A plain adjacency-list host.
pub struct AdjacencyHost {
    adj: Vec<Vec<VertexId>>,
    masks: Option<Vec<u64>>,
}

impl AdjacencyHost {
    pub fn from_pattern(p: &Pattern) -> Self {
        let adj = (0..p.vertex_count())
            .map(|v| (0..p.vertex_count() as u32).filter(|&w| p.has_edge(v, w as usize)).collect())
            .collect();
        Self { adj, masks: Some((0..p.vertex_count()).map(|v| p.neighbor_mask(v)).collect()) }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        Self { adj, masks: None }
    }
}

impl Host for AdjacencyHost {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        match &self.masks {
            Some(m) => m[u as usize] >> v & 1 == 1,
            None => self.adj[u as usize].binary_search(&v).is_ok(),
        }
    }

    fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }
}

/// Backtracking injective embedding of a pattern into a host.
///
/// Vertices are placed in an order that starts from a maximum-degree vertex
/// and then always takes the vertex with the most already-placed neighbors
/// (ties: higher degree, then lower index). Candidates for a vertex come from
/// the host neighborhood of one placed neighbor; the remaining placed
/// neighbors are checked with `has_edge`.
#[derive(Clone, Debug)]
pub struct EmbeddingSearch {
    order: Vec<usize>,
    // for each step: placed neighbor used to generate candidates
    source: Vec<Option<usize>>,
    // for each step: other placed neighbors to check
    checks: Vec<Vec<usize>>,
    vertex_count: usize,
    // optional required part per pattern vertex
    parts: Option<Vec<usize>>,
}

impl EmbeddingSearch {
    pub fn new(pattern: &Pattern) -> Self {
        Self::with_fixed(pattern, &[])
    }

    /// Canonical search: pattern vertex `i` must land in part `labels.parts[i]`.
    pub fn canonical(labeled: &LabeledPattern) -> Self {
        let mut s = Self::new(&labeled.pattern);
        s.parts = Some(labeled.parts.clone());
        s
    }

    /// Search order in which the listed pattern vertices are placed first
    /// (in the given order) and the rest follow the greedy rule.
    pub fn with_fixed(pattern: &Pattern, fixed: &[usize]) -> Self {
        let n = pattern.vertex_count();
        let mut placed = 0u64;
        let mut order = Vec::with_capacity(n);
        for &v in fixed {
            order.push(v);
            placed |= 1 << v;
        }
        while order.len() < n {
            let mut best: Option<(usize, usize, usize)> = None;
            for v in 0..n {
                if placed >> v & 1 == 1 {
                    continue;
                }
                let key = ((pattern.neighbor_mask(v) & placed).count_ones() as usize, pattern.degree(v));
                if best.is_none_or(|(_, a, b)| key > (a, b)) {
                    best = Some((v, key.0, key.1));
                }
            }
            let v = best.unwrap().0;
            order.push(v);
            placed |= 1 << v;
        }
        let mut source = Vec::with_capacity(n);
        let mut checks = Vec::with_capacity(n);
        let mut before = 0u64;
        for &v in &order {
            let nb = pattern.neighbor_mask(v) & before;
            let mut list: Vec<usize> = (0..n).filter(|&w| nb >> w & 1 == 1).collect();
            // generate from the earliest-placed neighbor
            list.sort_by_key(|w| order.iter().position(|x| x == w));
            let src = if list.is_empty() { None } else { Some(list.remove(0)) };
            source.push(src);
            checks.push(list);
            before |= 1 << v;
        }
        Self { order, source, checks, vertex_count: n, parts: None }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// For each search step, the placed neighbor whose host neighborhood
    /// supplies candidates.
    pub fn sources(&self) -> &[Option<usize>] {
        &self.source
    }

    /// For each search step, the other placed neighbors that must be adjacent.
    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    fn allowed(&self, pattern_vertex: usize, w: VertexId, part_of: &dyn Fn(VertexId) -> Option<usize>) -> bool {
        match &self.parts {
            None => true,
            Some(parts) => part_of(w) == Some(parts[pattern_vertex]),
        }
    }

    /// Number of injective embeddings.
    pub fn count<H: Host>(&self, host: &H) -> u64 {
        self.count_with_parts(host, &|_| None)
    }

    /// Number of injective embeddings respecting the part constraint.
    pub fn count_with_parts<H: Host>(&self, host: &H, part_of: &dyn Fn(VertexId) -> Option<usize>) -> u64 {
        if self.vertex_count == 0 {
            return 1;
        }
        let mut map = vec![u32::MAX; self.vertex_count];
        let mut used: Vec<VertexId> = Vec::with_capacity(self.vertex_count);
        self.count_rec(host, part_of, 0, &mut map, &mut used)
    }

    fn candidates<H: Host>(&self, host: &H, step: usize, map: &[u32], mut f: impl FnMut(VertexId)) {
        match self.source[step] {
            Some(src) => {
                for &w in host.neighbors(map[src]) {
                    f(w);
                }
            }
            None => {
                for w in 0..host.vertex_count() as u32 {
                    f(w);
                }
            }
        }
    }

    fn fits<H: Host>(
        &self,
        host: &H,
        part_of: &dyn Fn(VertexId) -> Option<usize>,
        step: usize,
        w: VertexId,
        map: &[u32],
        used: &[VertexId],
    ) -> bool {
        let v = self.order[step];
        !used.contains(&w)
            && self.allowed(v, w, part_of)
            && self.checks[step].iter().all(|&x| host.has_edge(map[x], w))
    }

    fn count_rec<H: Host>(
        &self,
        host: &H,
        part_of: &dyn Fn(VertexId) -> Option<usize>,
        step: usize,
        map: &mut Vec<u32>,
        used: &mut Vec<VertexId>,
    ) -> u64 {
        let last = step + 1 == self.vertex_count;
        if last && self.checks[step].is_empty() && self.parts.is_none() {
            // count the final vertex without enumerating it
            return match self.source[step] {
                Some(src) => {
                    let img = map[src];
                    let blocked = used.iter().filter(|&&u| host.has_edge(img, u)).count();
                    (host.degree(img) - blocked) as u64
                }
                None => (host.vertex_count() - used.len()) as u64,
            };
        }
        let mut total = 0u64;
        let mut cands = Vec::new();
        self.candidates(host, step, map, |w| cands.push(w));
        for w in cands {
            if !self.fits(host, part_of, step, w, map, used) {
                continue;
            }
            if last {
                total += 1;
                continue;
            }
            map[self.order[step]] = w;
            used.push(w);
            total += self.count_rec(host, part_of, step + 1, map, used);
            used.pop();
        }
        map[self.order[step]] = u32::MAX;
        total
    }

    /// Visits every embedding as a slice `pattern vertex -> host vertex`.
    /// Stops early when the callback returns `false`.
    pub fn for_each<H: Host>(
        &self,
        host: &H,
        part_of: &dyn Fn(VertexId) -> Option<usize>,
        mut f: impl FnMut(&[VertexId]) -> bool,
    ) {
        if self.vertex_count == 0 {
            f(&[]);
            return;
        }
        let mut map = vec![u32::MAX; self.vertex_count];
        let mut used = Vec::with_capacity(self.vertex_count);
        self.visit_rec(host, part_of, 0, &mut map, &mut used, &mut f);
    }

    fn visit_rec<H: Host>(
        &self,
        host: &H,
        part_of: &dyn Fn(VertexId) -> Option<usize>,
        step: usize,
        map: &mut Vec<u32>,
        used: &mut Vec<VertexId>,
        f: &mut impl FnMut(&[VertexId]) -> bool,
    ) -> bool {
        let mut cands = Vec::new();
        self.candidates(host, step, map, |w| cands.push(w));
        for w in cands {
            if !self.fits(host, part_of, step, w, map, used) {
                continue;
            }
            map[self.order[step]] = w;
            used.push(w);
            let keep_going = if step + 1 == self.vertex_count {
                f(map)
            } else {
                self.visit_rec(host, part_of, step + 1, map, used, f)
            };
            used.pop();
            map[self.order[step]] = u32::MAX;
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Number of unlabeled copies of `h` in the claimed subgraph of `board`.
pub fn count_copies(board: &Board, claimed: &EdgeSet, h: &Pattern) -> u64 {
    if h.vertex_count() == 0 {
        return 1;
    }
    let host = ClaimedGraph::new(board, claimed);
    count_copies_in(&host, h)
}

/// Number of unlabeled copies of `h` in any host.
pub fn count_copies_in<H: Host>(host: &H, h: &Pattern) -> u64 {
    let aut = h.automorphism_count();
    EmbeddingSearch::new(h).count(host) / aut
}

/// Number of canonical copies of a part-labeled subgraph of the blow-up pattern.
pub fn count_canonical_copies(board: &Board, claimed: &EdgeSet, sub: &LabeledPattern) -> Result<u64, GraphError> {
    let parts = board.part_count();
    if board.part_size().is_none() {
        return Err(GraphError::NotBlowup);
    }
    if let Some(&bad) = sub.parts.iter().find(|&&p| p >= parts) {
        return Err(GraphError::MissingPart { part: bad, parts });
    }
    let host = ClaimedGraph::new(board, claimed);
    let search = EmbeddingSearch::canonical(sub);
    Ok(search.count_with_parts(&host, &|w| board.part_of(w)))
}

/// Enumerates canonical copies of the full blow-up pattern in the claimed
/// graph, as vertex tuples indexed by part, in lexicographic order.
pub fn canonical_copies(board: &Board, claimed: &EdgeSet, cap: u64) -> Result<Vec<Vec<VertexId>>, GraphError> {
    let h = board.blowup_pattern().ok_or(GraphError::NotBlowup)?;
    canonical_copies_of(board, claimed, &LabeledPattern::identity(h), cap)
}

/// Enumerates canonical copies of `sub`, as tuples indexed like `sub.parts`.
pub fn canonical_copies_of(
    board: &Board,
    claimed: &EdgeSet,
    sub: &LabeledPattern,
    cap: u64,
) -> Result<Vec<Vec<VertexId>>, GraphError> {
    if board.part_size().is_none() {
        return Err(GraphError::NotBlowup);
    }
    let host = ClaimedGraph::new(board, claimed);
    let search = EmbeddingSearch::canonical(sub);
    let mut out = Vec::new();
    let mut steps = 0u64;
    let mut over = false;
    search.for_each(&host, &|w| board.part_of(w), |m| {
        steps += 1;
        if steps > cap {
            over = true;
            return false;
        }
        out.push(m.to_vec());
        true
    });
    if over {
        return Err(GraphError::EmbeddingCap(cap));
    }
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// subgraph profiles

/// Vertex count, edge count and clique flag of a subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgraphProfile {
    pub vertices: usize,
    pub edges: usize,
    pub clique: bool,
}

/// Profiles of the densest subgraphs on every vertex set, plus the two-vertex
/// empty graph.
///
/// For each vertex set `S` this yields the induced profile, and additionally
/// the profile with one edge fewer when `H[S]` is complete or when `S` is a
/// proper vertex subset that already carries every edge of `H`. Those are the
/// only subgraphs that can attain the extremal ratios used by the density
/// invariants.
pub fn candidate_subgraphs(h: &Pattern) -> Result<Vec<SubgraphProfile>, GraphError> {
    let v = h.vertex_count();
    if v > MAX_SUBGRAPH_ENUM_VERTICES {
        return Err(GraphError::EnumerationCap(v));
    }
    let mut out = std::collections::BTreeSet::new();
    let full = h.full_mask();
    for mask in 1..=full {
        let vs = mask.count_ones() as usize;
        let es = h.induced_edge_count(mask);
        let clique = es == vs * (vs - 1) / 2;
        out.insert(SubgraphProfile { vertices: vs, edges: es, clique });
        let carries_all = mask != full && es == h.edge_count();
        if es >= 1 && (clique || carries_all) {
            out.insert(SubgraphProfile { vertices: vs, edges: es - 1, clique: false });
        }
    }
    if v >= 2 {
        out.insert(SubgraphProfile { vertices: 2, edges: 0, clique: false });
    }
    Ok(out.into_iter().collect())
}

/// Every (vertex subset, edge subset) pair of a small pattern. Test oracle.
pub fn all_subgraph_profiles(h: &Pattern) -> Vec<(u64, SubgraphProfile, bool)> {
    let full = h.full_mask();
    let mut out = Vec::new();
    for mask in 1..=full {
        let vs = mask.count_ones() as usize;
        let inside: Vec<(usize, usize)> =
            h.edges().iter().copied().filter(|&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1).collect();
        for sub in 0u64..(1u64 << inside.len()) {
            let es = sub.count_ones() as usize;
            let clique = es == vs * (vs - 1) / 2;
            let whole = mask == full && es == h.edge_count();
            out.push((mask, SubgraphProfile { vertices: vs, edges: es, clique }, whole));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn claimed_all(board: &Board) -> EdgeSet {
        board.full_set()
    }

    #[test]
    fn parse_triangle_and_declared_count() {
        let t = Pattern::parse("0 1\n1 2\n0 2").unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (3, 3));
        let k2 = Pattern::parse("n 4\n0 1").unwrap();
        assert_eq!((k2.vertex_count(), k2.edge_count()), (4, 1));
        assert_eq!(k2.isolated_vertices(), vec![2, 3]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Pattern::parse("0 0"), Err(GraphError::Loop { .. })));
        assert!(matches!(Pattern::parse("0 x"), Err(GraphError::Malformed { .. })));
        assert!(matches!(Pattern::parse("n 3\n0 3"), Err(GraphError::VertexOutOfRange { .. })));
        assert!(matches!(Pattern::parse("0 1 2"), Err(GraphError::Malformed { .. })));
    }

    #[test]
    fn parse_dedups_unordered_pairs() {
        let p = Pattern::parse("0 1\n1 0\n1 2\n2 1").unwrap();
        assert_eq!(p.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn named_patterns() {
        assert_eq!(Pattern::named("k4").unwrap().edge_count(), 6);
        assert_eq!(Pattern::named("p3").unwrap().edges(), &[(0, 1), (1, 2)]);
        assert_eq!(Pattern::named("s4").unwrap().max_degree(), 3);
        assert_eq!(Pattern::named("c5").unwrap().edge_count(), 5);
        assert!(Pattern::named("q3").is_err());
        assert!(Pattern::named("c2").is_err());
        let p = Pattern::from_spec("edges:0-1,1-2").unwrap();
        assert_eq!(Pattern::from_spec(&p.to_spec()).unwrap(), p);
        let iso = Pattern::parse("n 4\n0 1").unwrap();
        assert_eq!(Pattern::from_spec(&iso.to_spec()).unwrap(), iso);
    }

    #[test]
    fn strip_isolated_relabels() {
        let p = Pattern::parse("n 5\n1 3\n3 4").unwrap();
        let q = p.strip_isolated();
        assert_eq!(q.vertex_count(), 3);
        assert_eq!(q.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn complete_board_indexing() {
        let b = Board::complete(6).unwrap();
        assert_eq!(b.element_count(), 15);
        for (id, &(u, v)) in b.elements().iter().enumerate() {
            assert_eq!(b.edge_id(u, v), Some(id as u32));
            assert_eq!(b.edge_id(v, u), Some(id as u32));
        }
        assert_eq!(b.edge_id(2, 2), None);
    }

    #[test]
    fn blowup_shapes() {
        let k3 = Pattern::complete(3);
        for s in 1..5 {
            let b = Board::blowup(&k3, s).unwrap();
            assert_eq!(b.vertex_count(), 3 * s);
            assert_eq!(b.element_count(), 3 * s * s);
        }
        let k2 = Board::blowup(&Pattern::complete(2), 2).unwrap();
        assert_eq!(k2.elements(), &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(k2.part_of(1), Some(0));
        assert_eq!(k2.part_of(2), Some(1));
        let p3 = Board::blowup(&Pattern::path(3), 3).unwrap();
        assert_eq!((p3.vertex_count(), p3.element_count()), (9, 18));
        for (id, &(u, v)) in p3.elements().iter().enumerate() {
            assert_ne!(p3.part_of(u), p3.part_of(v));
            assert_eq!(p3.edge_id(v, u), Some(id as u32));
        }
        // parts 0 and 2 are not adjacent in the path
        assert_eq!(p3.edge_id(0, 6), None);
        assert!(Board::blowup(&Pattern::new(3, &[]).unwrap(), 2).is_err());
    }

    #[test]
    fn neighbor_iteration_matches_edge_ids() {
        let boards = [
            Board::complete(5).unwrap(),
            Board::blowup(&Pattern::path(4), 2).unwrap(),
            Board::from_edges(4, &[(0, 1), (1, 2), (3, 1)]).unwrap(),
        ];
        for b in &boards {
            let mut seen = 0;
            for v in 0..b.vertex_count() as u32 {
                let mut deg = 0;
                b.for_each_neighbor(v, |w, e| {
                    assert_eq!(b.edge_id(v, w), Some(e));
                    deg += 1;
                });
                assert_eq!(deg, b.degree(v));
                seen += deg;
            }
            assert_eq!(seen, 2 * b.element_count());
        }
    }

    #[test]
    fn descriptors_round_trip() {
        for d in ["complete:5", "blowup:k3:4", "explicit:4:0-1,1-2,2-3"] {
            let b = Board::from_descriptor(d).unwrap();
            assert_eq!(Board::from_descriptor(&b.descriptor()).unwrap(), b);
        }
        assert_eq!(Board::from_descriptor("k4").unwrap().element_count(), 6);
        assert!(Board::from_descriptor("torus:3").is_err());
    }

    #[test]
    fn edge_set_basics() {
        let mut s = EdgeSet::new(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(s.count(), 3);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(EdgeSet::full(130).count(), 130);
        assert!(s.is_subset(&EdgeSet::full(130)));
    }

    #[test]
    fn automorphisms() {
        assert_eq!(Pattern::complete(4).automorphism_count(), 24);
        assert_eq!(Pattern::path(3).automorphism_count(), 2);
        assert_eq!(Pattern::cycle(5).automorphism_count(), 10);
        assert_eq!(Pattern::star(4).automorphism_count(), 6);
        assert_eq!(Pattern::parse("n 4\n0 1").unwrap().automorphism_count(), 4);
    }

    #[test]
    fn copy_counts_small() {
        let k4 = Board::complete(4).unwrap();
        assert_eq!(count_copies(&k4, &claimed_all(&k4), &Pattern::complete(3)), 4);
        let k3 = Board::complete(3).unwrap();
        assert_eq!(count_copies(&k3, &claimed_all(&k3), &Pattern::complete(2)), 3);
        let c5 = Board::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(count_copies(&c5, &claimed_all(&c5), &Pattern::path(3)), 5);
        assert_eq!(count_copies(&k4, &k4.empty_set(), &Pattern::complete(3)), 0);
    }

    #[test]
    fn canonical_counts_on_full_blowup() {
        for s in 1..4usize {
            let k2 = Pattern::complete(2);
            let b = Board::blowup(&k2, s).unwrap();
            let n = count_canonical_copies(&b, &b.full_set(), &LabeledPattern::identity(&k2)).unwrap();
            assert_eq!(n, (s * s) as u64);
            let k3 = Pattern::complete(3);
            let b = Board::blowup(&k3, s).unwrap();
            let n = count_canonical_copies(&b, &b.full_set(), &LabeledPattern::identity(&k3)).unwrap();
            assert_eq!(n, (s * s * s) as u64);
        }
        let k3 = Pattern::complete(3);
        let b = Board::blowup(&k3, 2).unwrap();
        let bad = LabeledPattern { pattern: Pattern::complete(2), parts: vec![0, 5] };
        assert!(matches!(count_canonical_copies(&b, &b.full_set(), &bad), Err(GraphError::MissingPart { .. })));
    }

    #[test]
    fn canonical_copy_listing_is_lexicographic() {
        let k3 = Pattern::complete(3);
        let b = Board::blowup(&k3, 2).unwrap();
        let all = canonical_copies(&b, &b.full_set(), 1_000).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], vec![0, 2, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(canonical_copies(&b, &b.full_set(), 3).is_err());
    }

    #[test]
    fn candidate_profiles_examples() {
        let k3 = candidate_subgraphs(&Pattern::complete(3)).unwrap();
        for p in [(3, 3, true), (3, 2, false), (2, 1, true), (2, 0, false)] {
            assert!(k3.contains(&SubgraphProfile { vertices: p.0, edges: p.1, clique: p.2 }), "{p:?}");
        }
        let p3 = candidate_subgraphs(&Pattern::path(3)).unwrap();
        assert!(p3.contains(&SubgraphProfile { vertices: 3, edges: 2, clique: false }));
        assert!(p3.iter().all(|p| !(p.vertices == 3 && p.edges == 3)));
        assert!(candidate_subgraphs(&Pattern::complete(11)).is_err());
    }
}
