//! Fat graphs stored as rotation systems.
//!
//! A fat graph on `2E` half-edges is a pair of permutations: `pairing`, a
//! fixed-point-free involution whose orbits are the edges, and
//! `next_at_vertex`, whose orbits are the vertices listed in their cyclic
//! order. A half-edge `h` stands for the oriented edge leaving the vertex of
//! `h`. Boundary cycles are the orbits of `t = next_at_vertex ∘ pairing`:
//! cross the edge, then take the next half-edge in the cyclic order at the
//! far end.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a half-edge (`0..2E`).
pub type HalfEdge = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FatGraphError {
    #[error("half-edge {0} is paired with itself")]
    FixedPointInPairing(HalfEdge),
    #[error("vertex {vertex} has valence {valence}, at least {min} required")]
    ValenceTooLow {
        vertex: usize,
        valence: usize,
        min: usize,
    },
    #[error("graph has {components} connected components")]
    Disconnected { components: usize },
    #[error("inconsistent tables: {0}")]
    InconsistentTables(String),
    #[error("Euler characteristic {chi} with {boundaries} boundary cycles gives a non-integer or negative genus")]
    NonIntegerGenus { chi: i64, boundaries: usize },
}

/// Unvalidated pairing table plus cyclic vertex lists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFatGraph {
    pub pairs: Vec<(HalfEdge, HalfEdge)>,
    pub vertices: Vec<Vec<HalfEdge>>,
}

/// Knobs for [`FatGraph::validate_with`].
#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    pub min_valence: usize,
    pub allow_disconnected: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            min_valence: 3,
            allow_disconnected: false,
        }
    }
}

/// An oriented surface with boundary, encoded combinatorially.
///
/// Vertices are numbered by their smallest half-edge and edges likewise, so
/// the numbering depends only on the two permutations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FatGraph {
    pairing: Vec<HalfEdge>,
    next: Vec<HalfEdge>,
    vertex_of: Vec<usize>,
    vertices: Vec<Vec<HalfEdge>>,
    edge_of: Vec<usize>,
    edges: Vec<[HalfEdge; 2]>,
}

/// An orbit of the tracing permutation, listed from its smallest half-edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryCycle {
    pub oriented_edges: Vec<HalfEdge>,
}

impl BoundaryCycle {
    pub fn len(&self) -> usize {
        self.oriented_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oriented_edges.is_empty()
    }

    pub fn contains(&self, h: HalfEdge) -> bool {
        self.oriented_edges.contains(&h)
    }
}

/// Genus and incoming/outgoing boundary counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TopType {
    pub genus: u32,
    pub incoming: u32,
    pub outgoing: u32,
}

impl TopType {
    pub const fn new(genus: u32, incoming: u32, outgoing: u32) -> Self {
        TopType {
            genus,
            incoming,
            outgoing,
        }
    }

    pub fn boundaries(&self) -> u32 {
        self.incoming + self.outgoing
    }

    /// `2 - 2g - p - q`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundaries() as i64
    }
}

impl fmt::Display for TopType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{},{})", self.genus, self.incoming, self.outgoing)
    }
}

impl std::str::FromStr for TopType {
    type Err = String;

    /// Accepts `g,p,q`, `g;p,q` and `(g;p,q)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = trimmed.split([',', ';']).map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected g,p,q but got `{s}`"));
        }
        let mut nums = [0u32; 3];
        for (slot, part) in nums.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| format!("`{part}` is not a non-negative integer"))?;
        }
        Ok(TopType::new(nums[0], nums[1], nums[2]))
    }
}

/// A canonical byte string identifying an isomorphism class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(pub Vec<u8>);

impl CanonicalCode {
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.0.len() * 2);
        for b in &self.0 {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl FatGraph {
    /// Validates a raw table with the default options (valence ≥ 3, connected).
    pub fn validate(raw: &RawFatGraph) -> Result<FatGraph, FatGraphError> {
        Self::validate_with(raw, ValidateOptions::default())
    }

    pub fn validate_with(raw: &RawFatGraph, opts: ValidateOptions) -> Result<FatGraph, FatGraphError> {
        let n = 2 * raw.pairs.len();
        let mut pairing = vec![usize::MAX; n];
        for &(a, b) in &raw.pairs {
            if a == b {
                return Err(FatGraphError::FixedPointInPairing(a));
            }
            for h in [a, b] {
                if h >= n {
                    return Err(FatGraphError::InconsistentTables(format!(
                        "half-edge {h} out of range 0..{n}"
                    )));
                }
            }
            if pairing[a] != usize::MAX || pairing[b] != usize::MAX {
                let dup = if pairing[a] != usize::MAX { a } else { b };
                return Err(FatGraphError::InconsistentTables(format!(
                    "half-edge {dup} appears in two pairs"
                )));
            }
            pairing[a] = b;
            pairing[b] = a;
        }
        let mut next = vec![usize::MAX; n];
        for cycle in &raw.vertices {
            if cycle.is_empty() {
                return Err(FatGraphError::InconsistentTables("empty vertex".into()));
            }
            for (i, &h) in cycle.iter().enumerate() {
                if h >= n {
                    return Err(FatGraphError::InconsistentTables(format!(
                        "half-edge {h} out of range 0..{n}"
                    )));
                }
                if next[h] != usize::MAX {
                    return Err(FatGraphError::InconsistentTables(format!(
                        "half-edge {h} appears at two vertex positions"
                    )));
                }
                next[h] = cycle[(i + 1) % cycle.len()];
            }
        }
        if let Some(h) = next.iter().position(|&x| x == usize::MAX) {
            return Err(FatGraphError::InconsistentTables(format!(
                "half-edge {h} is not listed at any vertex"
            )));
        }
        Self::from_permutations_with(pairing, next, opts)
    }

    /// Builds a graph from the two permutations directly.
    pub fn from_permutations(pairing: Vec<HalfEdge>, next: Vec<HalfEdge>) -> Result<FatGraph, FatGraphError> {
        Self::from_permutations_with(pairing, next, ValidateOptions::default())
    }

    pub fn from_permutations_with(
        pairing: Vec<HalfEdge>,
        next: Vec<HalfEdge>,
        opts: ValidateOptions,
    ) -> Result<FatGraph, FatGraphError> {
        let n = pairing.len();
        if next.len() != n {
            return Err(FatGraphError::InconsistentTables(format!(
                "pairing has {n} entries but next_at_vertex has {}",
                next.len()
            )));
        }
        if n % 2 != 0 {
            return Err(FatGraphError::InconsistentTables("odd number of half-edges".into()));
        }
        for (h, &p) in pairing.iter().enumerate() {
            if p >= n {
                return Err(FatGraphError::InconsistentTables(format!("pairing({h}) = {p} out of range")));
            }
            if p == h {
                return Err(FatGraphError::FixedPointInPairing(h));
            }
            if pairing[p] != h {
                return Err(FatGraphError::InconsistentTables(format!("pairing is not an involution at {h}")));
            }
        }
        let mut seen = vec![false; n];
        for &x in &next {
            if x >= n || seen[x] {
                return Err(FatGraphError::InconsistentTables("next_at_vertex is not a permutation".into()));
            }
            seen[x] = true;
        }

        let vertices = orbits(&next);
        let mut vertex_of = vec![0; n];
        for (v, cyc) in vertices.iter().enumerate() {
            for &h in cyc {
                vertex_of[h] = v;
            }
        }
        let mut edges = Vec::with_capacity(n / 2);
        let mut edge_of = vec![0; n];
        for h in 0..n {
            if h < pairing[h] {
                edge_of[h] = edges.len();
                edge_of[pairing[h]] = edges.len();
                edges.push([h, pairing[h]]);
            }
        }
        let g = FatGraph {
            pairing,
            next,
            vertex_of,
            vertices,
            edge_of,
            edges,
        };
        for (v, cyc) in g.vertices.iter().enumerate() {
            if cyc.len() < opts.min_valence {
                return Err(FatGraphError::ValenceTooLow {
                    vertex: v,
                    valence: cyc.len(),
                    min: opts.min_valence,
                });
            }
        }
        if !opts.allow_disconnected {
            let c = g.component_count();
            if c > 1 {
                return Err(FatGraphError::Disconnected { components: c });
            }
        }
        Ok(g)
    }

    pub fn half_edge_count(&self) -> usize {
        self.pairing.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn pair(&self, h: HalfEdge) -> HalfEdge {
        self.pairing[h]
    }

    pub fn next_at_vertex(&self, h: HalfEdge) -> HalfEdge {
        self.next[h]
    }

    pub fn pairing(&self) -> &[HalfEdge] {
        &self.pairing
    }

    pub fn next_table(&self) -> &[HalfEdge] {
        &self.next
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.vertex_of[h]
    }

    /// Cyclic list of half-edges at `v`, starting at the smallest.
    pub fn vertex(&self, v: usize) -> &[HalfEdge] {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Vec<HalfEdge>] {
        &self.vertices
    }

    pub fn edge_of(&self, h: HalfEdge) -> usize {
        self.edge_of[h]
    }

    /// Half-edges of edge `e`, smaller first.
    pub fn edge(&self, e: usize) -> [HalfEdge; 2] {
        self.edges[e]
    }

    pub fn edges(&self) -> &[[HalfEdge; 2]] {
        &self.edges
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let [a, b] = self.edges[e];
        self.vertex_of[a] == self.vertex_of[b]
    }

    /// The tracing permutation `t(h) = next_at_vertex(pairing(h))`.
    pub fn trace(&self, h: HalfEdge) -> HalfEdge {
        self.next[self.pairing[h]]
    }

    pub fn to_raw(&self) -> RawFatGraph {
        RawFatGraph {
            pairs: self.edges.iter().map(|&[a, b]| (a, b)).collect(),
            vertices: self.vertices.clone(),
        }
    }

    /// Orbits of `t`, each listed from its smallest half-edge, ordered by
    /// that half-edge.
    pub fn boundary_cycles(&self) -> Vec<BoundaryCycle> {
        let tracing: Vec<HalfEdge> = (0..self.half_edge_count()).map(|h| self.trace(h)).collect();
        orbits(&tracing)
            .into_iter()
            .map(|oriented_edges| BoundaryCycle { oriented_edges })
            .collect()
    }

    /// Per half-edge, the index of its boundary cycle in [`Self::boundary_cycles`].
    pub fn boundary_index(&self, cycles: &[BoundaryCycle]) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.half_edge_count()];
        for (i, c) in cycles.iter().enumerate() {
            for &h in &c.oriented_edges {
                idx[h] = i;
            }
        }
        idx
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64
    }

    /// `(genus, boundary count)` from `2 - 2g - n = V - E`.
    pub fn topological_type(&self) -> Result<(u32, usize), FatGraphError> {
        let n = self.boundary_cycles().len();
        let chi = self.euler_characteristic();
        let twice_genus = 2 - chi - n as i64;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(FatGraphError::NonIntegerGenus { chi, boundaries: n });
        }
        Ok(((twice_genus / 2) as u32, n))
    }

    pub fn component_count(&self) -> usize {
        let n = self.half_edge_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(h) = stack.pop() {
                for x in [self.pairing[h], self.next[h]] {
                    if !seen[x] {
                        seen[x] = true;
                        stack.push(x);
                    }
                }
            }
        }
        count
    }

    /// Canonical code of the undecorated graph.
    pub fn canonical_code(&self) -> CanonicalCode {
        self.canonical_code_colored(&vec![0; self.half_edge_count()])
    }

    /// Canonical code where each half-edge carries a color that any
    /// isomorphism must preserve.
    pub fn canonical_code_colored(&self, colors: &[u32]) -> CanonicalCode {
        self.canonical_form(colors).0
    }

    /// Canonical code together with the relabeling (`old -> new`) that
    /// realizes it. Requires a connected graph.
    pub fn canonical_form(&self, colors: &[u32]) -> (CanonicalCode, Vec<HalfEdge>) {
        assert_eq!(colors.len(), self.half_edge_count());
        let n = self.half_edge_count();
        let mut best: Option<(Vec<u32>, Vec<HalfEdge>)> = None;
        let min_color = colors.iter().copied().min();
        let mut order = Vec::with_capacity(n);
        let mut label = vec![usize::MAX; n];
        let mut row = Vec::with_capacity(3 * n);
        for start in 0..n {
            if Some(colors[start]) != min_color {
                continue;
            }
            self.bfs_relabel(start, &mut order, &mut label);
            row.clear();
            for &old in &order {
                row.push(label[self.pairing[old]] as u32);
                row.push(label[self.next[old]] as u32);
                row.push(colors[old]);
            }
            let better = match &best {
                None => true,
                Some((b, _)) => row < *b,
            };
            if better {
                best = Some((row.clone(), label.clone()));
            }
        }
        let mut bytes = Vec::with_capacity(8 + 12 * n);
        bytes.extend_from_slice(&(self.vertex_count() as u32).to_be_bytes());
        bytes.extend_from_slice(&(self.edge_count() as u32).to_be_bytes());
        let (row, label) = best.unwrap_or_default();
        for x in row {
            bytes.extend_from_slice(&x.to_be_bytes());
        }
        (CanonicalCode(bytes), label)
    }

    /// Breadth-first relabeling from `start`, following `pairing` then
    /// `next_at_vertex`.
    fn bfs_relabel(&self, start: HalfEdge, order: &mut Vec<HalfEdge>, label: &mut [usize]) {
        label.iter_mut().for_each(|l| *l = usize::MAX);
        order.clear();
        let mut queue = VecDeque::new();
        label[start] = 0;
        order.push(start);
        queue.push_back(start);
        while let Some(h) = queue.pop_front() {
            for x in [self.pairing[h], self.next[h]] {
                if label[x] == usize::MAX {
                    label[x] = order.len();
                    order.push(x);
                    queue.push_back(x);
                }
            }
        }
    }

    /// Applies a half-edge relabeling `old -> new`.
    pub fn relabel(&self, map: &[HalfEdge]) -> FatGraph {
        let n = self.half_edge_count();
        let mut pairing = vec![0; n];
        let mut next = vec![0; n];
        for h in 0..n {
            pairing[map[h]] = map[self.pairing[h]];
            next[map[h]] = map[self.next[h]];
        }
        FatGraph::from_permutations_with(
            pairing,
            next,
            ValidateOptions {
                min_valence: 1,
                allow_disconnected: true,
            },
        )
        .expect("relabeling a valid graph stays valid")
    }

    pub fn is_isomorphic(&self, other: &FatGraph) -> bool {
        self.half_edge_count() == other.half_edge_count()
            && self.vertex_count() == other.vertex_count()
            && self.canonical_code() == other.canonical_code()
    }
}

impl fmt::Debug for FatGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FatGraph")
            .field("edges", &self.edges)
            .field("vertices", &self.vertices)
            .finish()
    }
}

/// Cycles of a permutation, each starting at its minimum, ordered by minimum.
pub(crate) fn orbits(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut h = s;
        while !seen[h] {
            seen[h] = true;
            cyc.push(h);
            h = perm[h];
        }
        out.push(cyc);
    }
    out
}

/// Isomorphism test by explicit search: fix a half-edge of `a` and try
/// every image in `b`, propagating along both permutations. Independent of
/// the canonical-code route; used to cross-check it.
pub fn isomorphic_by_search(a: &FatGraph, colors_a: &[u32], b: &FatGraph, colors_b: &[u32]) -> bool {
    let n = a.half_edge_count();
    if n != b.half_edge_count() || a.vertex_count() != b.vertex_count() {
        return false;
    }
    if n == 0 {
        return true;
    }
    'outer: for image in 0..n {
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut stack = vec![(0usize, image)];
        while let Some((x, y)) = stack.pop() {
            if map[x] != usize::MAX {
                if map[x] != y {
                    continue 'outer;
                }
                continue;
            }
            if used[y] || colors_a[x] != colors_b[y] {
                continue 'outer;
            }
            map[x] = y;
            used[y] = true;
            stack.push((a.pair(x), b.pair(y)));
            stack.push((a.next_at_vertex(x), b.next_at_vertex(y)));
        }
        if map.iter().all(|&m| m != usize::MAX) {
            return true;
        }
    }
    false
}

/// Small named graphs used in tests and examples.
pub mod samples {
    use super::*;

    /// Two trivalent vertices joined by three edges, planar rotation.
    pub fn theta() -> FatGraph {
        FatGraph::validate(&RawFatGraph {
            pairs: vec![(0, 3), (1, 5), (2, 4)],
            vertices: vec![vec![0, 1, 2], vec![3, 4, 5]],
        })
        .expect("theta graph")
    }

    /// One vertex with loops `a = (0,1)`, `b = (2,3)` in the order `(a, ā, b, b̄)`.
    pub fn rose_planar() -> FatGraph {
        FatGraph::validate(&RawFatGraph {
            pairs: vec![(0, 1), (2, 3)],
            vertices: vec![vec![0, 1, 2, 3]],
        })
        .expect("planar rose")
    }

    /// One vertex with loops in the interleaved order `(a, b, ā, b̄)`.
    pub fn rose_torus() -> FatGraph {
        FatGraph::validate(&RawFatGraph {
            pairs: vec![(0, 2), (1, 3)],
            vertices: vec![vec![0, 1, 2, 3]],
        })
        .expect("toral rose")
    }
}
