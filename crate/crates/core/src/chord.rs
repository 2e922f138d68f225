//! Sullivan chord diagrams.
//!
//! A chord diagram is a fat graph whose edges are labeled circular or ghost.
//! The circular edges form `p` disjoint circles, each of which is an
//! (incoming) boundary cycle; the ghost edges form a forest hanging off the
//! circles. Boundary cycles are ordered, the first `p` being the incoming
//! circles, and each cycle carries a marking: one circular half-edge that
//! lies on it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fatgraph::{BoundaryCycle, CanonicalCode, FatGraph, FatGraphError, HalfEdge, RawFatGraph, TopType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeLabel {
    Circular,
    Ghost,
}

impl EdgeLabel {
    pub fn is_circular(self) -> bool {
        self == EdgeLabel::Circular
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordError {
    #[error(transparent)]
    Graph(#[from] FatGraphError),
    #[error("expected {expected} edge labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("ghost edges contain a cycle through edge {edge}")]
    GhostCycle { edge: usize },
    #[error("circles are not disjoint: {0}")]
    CircleNotDisjoint(String),
    #[error("circle through edge {edge} is not one of the incoming boundary cycles")]
    IncomingNotBoundaryCycle { edge: usize },
    #[error("boundary cycle at position {position} contains no circular edge")]
    NoCircularEdgeOnCycle { position: usize },
    #[error("bad marking on boundary cycle {cycle}: {reason}")]
    BadMarking { cycle: usize, reason: String },
    #[error("bad boundary order: {0}")]
    BadBoundaryOrder(String),
    #[error("a ghost component containing vertex {vertex} touches no circle")]
    GhostTreeOffCircle { vertex: usize },
    #[error("diagram has no incoming circle")]
    NoIncomingCircle,
    #[error("diagram has no outgoing boundary cycle")]
    NoOutgoingCycle,
    #[error("edge {0} is essential and cannot be collapsed")]
    EssentialEdge(usize),
    #[error("edge {0} is a loop and cannot be collapsed")]
    LoopEdge(usize),
    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),
    #[error("type {0} admits no chord diagram with vertices of valence at least 3")]
    UnrepresentableType(TopType),
    #[error("cannot glue: first diagram has {outgoing} outgoing cycles, second has {incoming} incoming circles")]
    ArityMismatch { outgoing: usize, incoming: usize },
    #[error("invalid glue schedule: {0}")]
    InvalidSchedule(String),
    #[error("glued diagram is invalid: {0}")]
    GlueValidationFailed(Box<ChordError>),
}

/// Unvalidated chord-diagram records.
///
/// Edge ids follow [`FatGraph::edges`] (ordered by smallest half-edge) and
/// cycle ids follow [`FatGraph::boundary_cycles`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawChord {
    pub graph: RawFatGraph,
    pub labels: Vec<EdgeLabel>,
    pub incoming: usize,
    pub order: Vec<usize>,
    pub marks: Vec<(usize, HalfEdge)>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChordDiagram {
    graph: FatGraph,
    circular: Vec<bool>,
    incoming: usize,
    /// Boundary cycles in boundary order, each listed from its marking.
    cycles: Vec<BoundaryCycle>,
    top_type: TopType,
}

/// `S(c)`: the fat graph obtained by contracting every ghost edge.
#[derive(Debug, Clone)]
pub struct CollapsedGraph {
    pub s_graph: FatGraph,
    /// Vertex of `c` to vertex of `S(c)`.
    pub projection: Vec<usize>,
    /// Half-edge of `c` to half-edge of `S(c)`; ghost half-edges map to `None`.
    pub half_edge_map: Vec<Option<HalfEdge>>,
    /// Number of circular vertices of `c` over each vertex of `S(c)`.
    pub multiplicities: Vec<usize>,
}

impl CollapsedGraph {
    pub fn multiplicity(&self, v: usize) -> usize {
        self.multiplicities[v]
    }
}

/// Splitting one vertex into two joined by a new edge.
///
/// The vertex rotation `r` (as returned by [`FatGraph::vertex`]) is cut at
/// the gaps before `r[first]` and `r[second]`; `r[first..second]` goes to one
/// side of the new edge and the rest to the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Split {
    pub vertex: usize,
    pub first: usize,
    pub second: usize,
    pub label: EdgeLabel,
}

/// Placement of the second diagram's circle vertices during gluing.
///
/// `offsets[j][i]` is the position, counted along outgoing cycle `j` of the
/// first diagram from its marking, at which vertex `i` of incoming circle
/// `j` of the second diagram (counted along the circle from its marking)
/// is attached. Along a cycle the offsets must be non-increasing, since
/// outgoing cycles run against the circle direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueSchedule {
    pub offsets: Vec<Vec<usize>>,
}

impl ChordDiagram {
    pub fn validate(raw: &RawChord) -> Result<ChordDiagram, ChordError> {
        let graph = FatGraph::validate(&raw.graph)?;
        if raw.labels.len() != graph.edge_count() {
            return Err(ChordError::LabelCount {
                expected: graph.edge_count(),
                found: raw.labels.len(),
            });
        }
        let mut circular = vec![false; graph.half_edge_count()];
        for (e, label) in raw.labels.iter().enumerate() {
            for h in graph.edge(e) {
                circular[h] = label.is_circular();
            }
        }
        let cycles = graph.boundary_cycles();
        let n = cycles.len();
        if raw.order.len() != n {
            return Err(ChordError::BadBoundaryOrder(format!(
                "{} cycles listed but the graph has {n}",
                raw.order.len()
            )));
        }
        let mut seen = vec![false; n];
        for &id in &raw.order {
            if id >= n || seen[id] {
                return Err(ChordError::BadBoundaryOrder(format!("cycle id {id} is out of range or repeated")));
            }
            seen[id] = true;
        }
        if raw.incoming > n {
            return Err(ChordError::BadBoundaryOrder(format!("{} incoming of {n} cycles", raw.incoming)));
        }
        let mut mark_of = vec![None; n];
        for &(id, h) in &raw.marks {
            if id >= n {
                return Err(ChordError::BadMarking {
                    cycle: id,
                    reason: "no such cycle".into(),
                });
            }
            if mark_of[id].is_some() {
                return Err(ChordError::BadMarking {
                    cycle: id,
                    reason: "marked twice".into(),
                });
            }
            if !cycles[id].contains(h) {
                return Err(ChordError::BadMarking {
                    cycle: id,
                    reason: format!("half-edge {h} is not on this cycle"),
                });
            }
            mark_of[id] = Some(h);
        }
        let mut marks = Vec::with_capacity(n);
        for &id in &raw.order {
            match mark_of[id] {
                Some(h) => marks.push(h),
                None => {
                    return Err(ChordError::BadMarking {
                        cycle: id,
                        reason: "missing marking".into(),
                    })
                }
            }
        }
        Self::assemble(graph, circular, raw.incoming, &marks)
    }

    /// Builds a diagram from a validated graph, per-half-edge circularity,
    /// the incoming count and one marking per boundary position; the
    /// boundary order is the order of the cycles containing the markings.
    pub(crate) fn assemble(
        graph: FatGraph,
        circular: Vec<bool>,
        incoming: usize,
        marks: &[HalfEdge],
    ) -> Result<ChordDiagram, ChordError> {
        let all = graph.boundary_cycles();
        let index = graph.boundary_index(&all);
        if marks.len() != all.len() {
            return Err(ChordError::BadBoundaryOrder(format!(
                "{} markings for {} boundary cycles",
                marks.len(),
                all.len()
            )));
        }
        let mut used = vec![false; all.len()];
        let mut cycles = Vec::with_capacity(all.len());
        for (pos, &m) in marks.iter().enumerate() {
            if m >= graph.half_edge_count() {
                return Err(ChordError::BadMarking {
                    cycle: pos,
                    reason: format!("half-edge {m} out of range"),
                });
            }
            let id = index[m];
            if used[id] {
                return Err(ChordError::BadMarking {
                    cycle: pos,
                    reason: "two markings on one cycle".into(),
                });
            }
            used[id] = true;
            let src = &all[id].oriented_edges;
            let at = src.iter().position(|&h| h == m).expect("mark lies on its cycle");
            let mut oriented_edges = Vec::with_capacity(src.len());
            oriented_edges.extend_from_slice(&src[at..]);
            oriented_edges.extend_from_slice(&src[..at]);
            cycles.push(BoundaryCycle { oriented_edges });
        }
        let top_type = check_structure(&graph, &circular, incoming, &cycles)?;
        Ok(ChordDiagram {
            graph,
            circular,
            incoming,
            cycles,
            top_type,
        })
    }

    pub fn graph(&self) -> &FatGraph {
        &self.graph
    }

    pub fn top_type(&self) -> TopType {
        self.top_type
    }

    pub fn incoming_count(&self) -> usize {
        self.incoming
    }

    pub fn outgoing_count(&self) -> usize {
        self.cycles.len() - self.incoming
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_circular_half_edge(&self, h: HalfEdge) -> bool {
        self.circular[h]
    }

    pub fn label(&self, e: usize) -> EdgeLabel {
        if self.circular[self.graph.edge(e)[0]] {
            EdgeLabel::Circular
        } else {
            EdgeLabel::Ghost
        }
    }

    pub fn labels(&self) -> Vec<EdgeLabel> {
        (0..self.graph.edge_count()).map(|e| self.label(e)).collect()
    }

    /// Boundary cycles in boundary order, each starting at its marking.
    pub fn boundary_cycles(&self) -> &[BoundaryCycle] {
        &self.cycles
    }

    pub fn incoming_cycles(&self) -> &[BoundaryCycle] {
        &self.cycles[..self.incoming]
    }

    pub fn outgoing_cycles(&self) -> &[BoundaryCycle] {
        &self.cycles[self.incoming..]
    }

    pub fn markings(&self) -> Vec<HalfEdge> {
        self.cycles.iter().map(|c| c.oriented_edges[0]).collect()
    }

    pub fn is_circular_vertex(&self, v: usize) -> bool {
        self.graph.vertex(v).iter().any(|&h| self.circular[h])
    }

    pub fn circular_vertex_count(&self) -> usize {
        (0..self.graph.vertex_count()).filter(|&v| self.is_circular_vertex(v)).count()
    }

    /// Boundary position of each half-edge.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.graph.half_edge_count()];
        for (i, c) in self.cycles.iter().enumerate() {
            for &h in &c.oriented_edges {
                pos[h] = i;
            }
        }
        pos
    }

    pub fn to_raw(&self) -> RawChord {
        let ids = self.graph.boundary_cycles();
        let index = self.graph.boundary_index(&ids);
        let marks = self.markings();
        let order: Vec<usize> = marks.iter().map(|&m| index[m]).collect();
        let mut mark_records: Vec<(usize, HalfEdge)> = order.iter().copied().zip(marks.iter().copied()).collect();
        mark_records.sort_unstable();
        RawChord {
            graph: self.graph.to_raw(),
            labels: self.labels(),
            incoming: self.incoming,
            order,
            marks: mark_records,
        }
    }

    /// Ghost-component id of every vertex.
    pub fn ghost_components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.graph.vertex_count());
        for &[a, b] in self.graph.edges() {
            if !self.circular[a] {
                uf.union(self.graph.vertex_of(a), self.graph.vertex_of(b));
            }
        }
        (0..self.graph.vertex_count()).map(|v| uf.find(v)).collect()
    }

    /// Contracts every ghost edge.
    pub fn collapse_ghosts(&self) -> CollapsedGraph {
        let mut draft = Draft::from_diagram(self);
        let ghosts: Vec<usize> = (0..self.edge_count())
            .filter(|&e| !self.label(e).is_circular())
            .collect();
        let mut owner: Vec<usize> = (0..self.graph.vertex_count()).collect();
        for e in ghosts {
            let [a, b] = self.graph.edge(e);
            let (keep, gone) = draft.contract(a, b);
            for o in owner.iter_mut() {
                if *o == gone {
                    *o = keep;
                }
            }
        }
        let (graph, _circ, map) = draft.compact_with(crate::fatgraph::ValidateOptions {
            min_valence: 1,
            allow_disconnected: false,
        })
        .expect("contracting a ghost forest keeps the graph valid");
        let mut projection = Vec::with_capacity(owner.len());
        for &o in &owner {
            let rep = draft.rot[o][0];
            projection.push(graph.vertex_of(map[rep].expect("live half-edge")));
        }
        let mut multiplicities = vec![0; graph.vertex_count()];
        for v in 0..self.graph.vertex_count() {
            if self.is_circular_vertex(v) {
                multiplicities[projection[v]] += 1;
            }
        }
        CollapsedGraph {
            s_graph: graph,
            projection,
            half_edge_map: map,
            multiplicities,
        }
    }

    /// `v(c) - σ(c)`: circular vertices minus vertices of `S(c)`.
    pub fn chi_defect(&self) -> i64 {
        self.circular_vertex_count() as i64 - self.collapse_ghosts().s_graph.vertex_count() as i64
    }

    /// An edge is essential when no single collapse may remove it: a chord
    /// between two circular vertices, or a circular edge whose endpoints are
    /// already joined through the ghost forest.
    pub fn is_essential(&self, e: usize) -> bool {
        let [a, b] = self.graph.edge(e);
        let (u, w) = (self.graph.vertex_of(a), self.graph.vertex_of(b));
        if self.circular[a] {
            let comp = self.ghost_components();
            comp[u] == comp[w]
        } else {
            self.is_circular_vertex(u) && self.is_circular_vertex(w)
        }
    }

    pub fn collapsible_edges(&self) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| !self.graph.is_loop(e) && !self.is_essential(e))
            .collect()
    }

    /// Contracts a single non-essential, non-loop edge. A marking sitting on
    /// the contracted edge moves to the next circular half-edge of its cycle.
    pub fn collapse_edge(&self, e: usize) -> Result<ChordDiagram, ChordError> {
        if e >= self.edge_count() {
            return Err(ChordError::NoSuchEdge(e));
        }
        if self.graph.is_loop(e) {
            return Err(ChordError::LoopEdge(e));
        }
        if self.is_essential(e) {
            return Err(ChordError::EssentialEdge(e));
        }
        let [a, b] = self.graph.edge(e);
        let mut draft = Draft::from_diagram(self);
        for (pos, cycle) in self.cycles.iter().enumerate() {
            let m = cycle.oriented_edges[0];
            if m == a || m == b {
                let replacement = cycle
                    .oriented_edges
                    .iter()
                    .copied()
                    .find(|&h| h != a && h != b && self.circular[h])
                    .ok_or(ChordError::NoCircularEdgeOnCycle { position: pos })?;
                draft.marks[pos] = replacement;
            }
        }
        draft.contract(a, b);
        draft.finish()
    }

    /// Every valid single-vertex split, with the diagram it produces.
    pub fn expansion_moves(&self) -> Vec<(Split, ChordDiagram)> {
        let mut out = Vec::new();
        for v in 0..self.graph.vertex_count() {
            let d = self.graph.vertex(v).len();
            for first in 0..d {
                for second in first + 2..d {
                    if d - (second - first) < 2 {
                        continue;
                    }
                    for label in [EdgeLabel::Ghost, EdgeLabel::Circular] {
                        let split = Split {
                            vertex: v,
                            first,
                            second,
                            label,
                        };
                        if let Ok(c) = self.expand(split) {
                            out.push((split, c));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn expansions(&self) -> Vec<ChordDiagram> {
        self.expansion_moves().into_iter().map(|(_, c)| c).collect()
    }

    /// Applies one split; the new edge gets half-edges `2E` (on the side of
    /// `r[first..second]`) and `2E + 1`.
    pub fn expand(&self, split: Split) -> Result<ChordDiagram, ChordError> {
        let Split {
            vertex,
            first,
            second,
            label,
        } = split;
        if vertex >= self.graph.vertex_count() {
            return Err(ChordError::InvalidSchedule(format!("no vertex {vertex}")));
        }
        let rot = self.graph.vertex(vertex).to_vec();
        let d = rot.len();
        if !(first < second && second <= d && second - first >= 2 && d - (second - first) >= 2) {
            return Err(ChordError::InvalidSchedule(format!("bad split {first}..{second} of a {d}-valent vertex")));
        }
        let mut draft = Draft::from_diagram(self);
        let x = draft.new_edge(label.is_circular());
        let y = x + 1;
        let mut side_a: Vec<HalfEdge> = rot[first..second].to_vec();
        side_a.push(x);
        let mut side_b: Vec<HalfEdge> = rot[second..].iter().chain(&rot[..first]).copied().collect();
        side_b.push(y);
        draft.rot[vertex] = side_a;
        draft.rot.push(side_b);
        draft.finish()
    }

    /// Canonical code of the unmarked diagram: edge labels and boundary
    /// positions are colors, markings are ignored.
    pub fn canonical_code(&self) -> CanonicalCode {
        self.graph.canonical_code_colored(&self.half_edge_colors(false))
    }

    /// Canonical code including markings.
    pub fn marked_code(&self) -> CanonicalCode {
        self.graph.canonical_code_colored(&self.half_edge_colors(true))
    }

    /// Per half-edge color used by the canonical codes: boundary position,
    /// ghost bit and, optionally, mark bit.
    pub fn half_edge_colors(&self, with_marks: bool) -> Vec<u32> {
        let pos = self.positions();
        let marks = self.markings();
        (0..self.graph.half_edge_count())
            .map(|h| {
                let mut c = (pos[h] as u32) << 2;
                if !self.circular[h] {
                    c |= 2;
                }
                if with_marks && marks[pos[h]] == h {
                    c |= 1;
                }
                c
            })
            .collect()
    }

    /// The same diagram with half-edges renumbered canonically, so that
    /// isomorphic marked diagrams become identical.
    pub fn canonical_relabel(&self) -> ChordDiagram {
        let (_, map) = self.graph.canonical_form(&self.half_edge_colors(true));
        self.relabel(&map)
    }

    /// Renumbers half-edges by `map` (`old -> new`).
    pub fn relabel(&self, map: &[HalfEdge]) -> ChordDiagram {
        let graph = self.graph.relabel(map);
        let mut circular = vec![false; self.circular.len()];
        for (h, &c) in self.circular.iter().enumerate() {
            circular[map[h]] = c;
        }
        let marks: Vec<HalfEdge> = self.markings().iter().map(|&m| map[m]).collect();
        ChordDiagram::assemble(graph, circular, self.incoming, &marks).expect("relabeling preserves validity")
    }
}

impl std::fmt::Debug for ChordDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChordDiagram")
            .field("type", &self.top_type)
            .field("graph", &self.graph)
            .field("labels", &self.labels())
            .field("marks", &self.markings())
            .finish()
    }
}

/// Checks the chord-diagram invariants on an assembled candidate and
/// returns its type.
fn check_structure(
    graph: &FatGraph,
    circular: &[bool],
    incoming: usize,
    cycles: &[BoundaryCycle],
) -> Result<TopType, ChordError> {
    for v in 0..graph.vertex_count() {
        let circ: Vec<HalfEdge> = graph.vertex(v).iter().copied().filter(|&h| circular[h]).collect();
        if !(circ.is_empty() || circ.len() == 2) {
            return Err(ChordError::CircleNotDisjoint(format!(
                "vertex {v} has {} circular half-edges",
                circ.len()
            )));
        }
    }
    let mut uf = UnionFind::new(graph.vertex_count());
    for (e, &[a, b]) in graph.edges().iter().enumerate() {
        if !circular[a] && !uf.union(graph.vertex_of(a), graph.vertex_of(b)) {
            return Err(ChordError::GhostCycle { edge: e });
        }
    }
    let mut touches = vec![false; graph.vertex_count()];
    for v in 0..graph.vertex_count() {
        if graph.vertex(v).iter().any(|&h| circular[h]) {
            touches[uf.find(v)] = true;
        }
    }
    for v in 0..graph.vertex_count() {
        if !touches[uf.find(v)] {
            return Err(ChordError::GhostTreeOffCircle { vertex: v });
        }
    }
    if incoming == 0 {
        return Err(ChordError::NoIncomingCircle);
    }
    if incoming >= cycles.len() {
        return Err(ChordError::NoOutgoingCycle);
    }
    let mut covered = vec![false; graph.edge_count()];
    for cycle in &cycles[..incoming] {
        for &h in &cycle.oriented_edges {
            if !circular[h] {
                return Err(ChordError::CircleNotDisjoint(format!(
                    "incoming cycle traverses ghost edge {}",
                    graph.edge_of(h)
                )));
            }
            let e = graph.edge_of(h);
            if covered[e] {
                return Err(ChordError::IncomingNotBoundaryCycle { edge: e });
            }
            covered[e] = true;
        }
    }
    for (e, &[a, _]) in graph.edges().iter().enumerate() {
        if circular[a] && !covered[e] {
            return Err(ChordError::IncomingNotBoundaryCycle { edge: e });
        }
    }
    for (pos, cycle) in cycles.iter().enumerate() {
        if !cycle.oriented_edges.iter().any(|&h| circular[h]) {
            return Err(ChordError::NoCircularEdgeOnCycle { position: pos });
        }
        if !circular[cycle.oriented_edges[0]] {
            return Err(ChordError::BadMarking {
                cycle: pos,
                reason: format!("half-edge {} is not circular", cycle.oriented_edges[0]),
            });
        }
    }
    let (genus, n) = graph.topological_type()?;
    Ok(TopType::new(genus, incoming as u32, (n - incoming) as u32))
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Mutable working copy used by moves, Γ₀ and gluing. Vertices are
/// rotation lists; removed half-edges simply stop appearing in any list.
#[derive(Debug, Clone, Default)]
pub(crate) struct Draft {
    pub(crate) pairing: Vec<HalfEdge>,
    pub(crate) rot: Vec<Vec<HalfEdge>>,
    pub(crate) circular: Vec<bool>,
    pub(crate) incoming: usize,
    pub(crate) marks: Vec<HalfEdge>,
}

impl Draft {
    pub(crate) fn from_diagram(c: &ChordDiagram) -> Draft {
        Draft {
            pairing: c.graph.pairing().to_vec(),
            rot: c.graph.vertices().to_vec(),
            circular: c.circular.clone(),
            incoming: c.incoming,
            marks: c.markings(),
        }
    }

    pub(crate) fn new_vertex(&mut self) -> usize {
        self.rot.push(Vec::new());
        self.rot.len() - 1
    }

    /// Allocates half-edges `h` and `h + 1`, paired, at no vertex yet.
    pub(crate) fn new_edge(&mut self, circular: bool) -> HalfEdge {
        let h = self.pairing.len();
        self.pairing.push(h + 1);
        self.pairing.push(h);
        self.circular.push(circular);
        self.circular.push(circular);
        h
    }

    fn locate(&self, h: HalfEdge) -> (usize, usize) {
        for (v, r) in self.rot.iter().enumerate() {
            if let Some(i) = r.iter().position(|&x| x == h) {
                return (v, i);
            }
        }
        panic!("half-edge {h} is not placed");
    }

    /// Contracts the edge `{a, b}`; returns `(kept vertex, emptied vertex)`.
    pub(crate) fn contract(&mut self, a: HalfEdge, b: HalfEdge) -> (usize, usize) {
        let (u, ia) = self.locate(a);
        let (w, ib) = self.locate(b);
        assert_ne!(u, w, "cannot contract a loop");
        let ru = &self.rot[u];
        let rw = &self.rot[w];
        let mut merged: Vec<HalfEdge> = ru[ia + 1..].iter().chain(&ru[..ia]).copied().collect();
        merged.extend(rw[ib + 1..].iter().chain(&rw[..ib]).copied());
        let (keep, gone) = if u < w { (u, w) } else { (w, u) };
        self.rot[keep] = merged;
        self.rot[gone] = Vec::new();
        (keep, gone)
    }

    /// Renumbers live half-edges densely (preserving order) and builds the
    /// graph. Returns the old-to-new map.
    pub(crate) fn compact_with(
        &self,
        opts: crate::fatgraph::ValidateOptions,
    ) -> Result<(FatGraph, Vec<bool>, Vec<Option<HalfEdge>>), ChordError> {
        let total = self.pairing.len();
        let mut live = vec![false; total];
        for r in &self.rot {
            for &h in r {
                live[h] = true;
            }
        }
        let mut map = vec![None; total];
        let mut count = 0;
        for h in 0..total {
            if live[h] {
                map[h] = Some(count);
                count += 1;
            }
        }
        let mut pairing = vec![0; count];
        let mut next = vec![0; count];
        let mut circular = vec![false; count];
        for h in 0..total {
            if let Some(nh) = map[h] {
                pairing[nh] = map[self.pairing[h]].ok_or_else(|| {
                    ChordError::Graph(FatGraphError::InconsistentTables(format!(
                        "half-edge {h} is paired with an unplaced half-edge"
                    )))
                })?;
                circular[nh] = self.circular[h];
            }
        }
        for r in &self.rot {
            for (i, &h) in r.iter().enumerate() {
                next[map[h].unwrap()] = map[r[(i + 1) % r.len()]].unwrap();
            }
        }
        let graph = FatGraph::from_permutations_with(pairing, next, opts)?;
        Ok((graph, circular, map))
    }

    pub(crate) fn finish(self) -> Result<ChordDiagram, ChordError> {
        let (graph, circular, map) = self.compact_with(Default::default())?;
        let marks = self
            .marks
            .iter()
            .enumerate()
            .map(|(pos, &m)| {
                map.get(m).copied().flatten().ok_or_else(|| ChordError::BadMarking {
                    cycle: pos,
                    reason: format!("marked half-edge {m} was removed"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ChordDiagram::assemble(graph, circular, self.incoming, &marks)
    }
}

/// The base-point diagram Γ₀ of type `(g; p, q)`.
///
/// One big circle carries the distinguished vertex `v0`, the only vertex of
/// valence above three, and every ghost edge is a chord from `v0`. Chords to
/// `u_1, …, u_{q-1}` on the big circle cut off `q - 1` short outgoing
/// cycles; `g` pairs of chords attached in crossed order create the genus;
/// and `p - 1` one-vertex circles hang off `v0`. The twisted pairs and the
/// small circles all sit on the last outgoing cycle. Boundary order: big
/// circle, small circles in the cyclic order at `v0`, then outgoing cycles
/// in the cyclic order at `v0` with the complicated one last.
pub fn canonical_gamma0(genus: u32, incoming: u32, outgoing: u32) -> Result<ChordDiagram, ChordError> {
    let ty = TopType::new(genus, incoming, outgoing);
    if incoming == 0 || outgoing == 0 || (genus == 0 && incoming == 1 && outgoing == 1) {
        return Err(ChordError::UnrepresentableType(ty));
    }
    let mut d = Draft {
        incoming: incoming as usize,
        ..Default::default()
    };
    let v0 = d.new_vertex();
    // Big circle in circle order: v0, u_1.., then x_1, y_1, .., x_g, y_g.
    let mut circle = vec![v0];
    let us: Vec<usize> = (1..outgoing).map(|_| d.new_vertex()).collect();
    circle.extend(&us);
    let mut pairs = Vec::new();
    for _ in 0..genus {
        let x = d.new_vertex();
        let y = d.new_vertex();
        circle.push(x);
        circle.push(y);
        pairs.push((x, y));
    }
    let len = circle.len();
    // Circle edge i runs from circle[i] (half-edge fwd[i]) to circle[i+1] (half-edge back[i]).
    let mut fwd = Vec::with_capacity(len);
    let mut back = Vec::with_capacity(len);
    for _ in 0..len {
        let h = d.new_edge(true);
        fwd.push(h);
        back.push(h + 1);
    }
    let c_in = |i: usize| back[(i + len - 1) % len];
    let chord_to = |d: &mut Draft, w: usize| -> HalfEdge {
        let h = d.new_edge(false);
        d.rot[w].push(h + 1);
        h
    };
    for (i, &w) in circle.iter().enumerate().skip(1) {
        d.rot[w].push(c_in(i));
        d.rot[w].push(fwd[i]);
    }
    let mut at_v0 = vec![c_in(0), fwd[0]];
    for &u in &us {
        at_v0.push(chord_to(&mut d, u));
    }
    for &(x, y) in &pairs {
        let hy = chord_to(&mut d, y);
        let hx = chord_to(&mut d, x);
        at_v0.push(hy);
        at_v0.push(hx);
    }
    let mut small = Vec::new();
    for _ in 1..incoming {
        let s = d.new_vertex();
        let loop_edge = d.new_edge(true);
        d.rot[s].push(loop_edge + 1);
        d.rot[s].push(loop_edge);
        let g = d.new_edge(false);
        d.rot[s].push(g + 1);
        at_v0.push(g);
        small.push(loop_edge);
    }
    d.rot[v0] = at_v0.clone();

    let (graph, circular, map) = d.compact_with(Default::default())?;
    let m = |h: HalfEdge| map[h].expect("all Γ₀ half-edges are placed");
    let cycles = graph.boundary_cycles();
    let index = graph.boundary_index(&cycles);
    let first_circular = |id: usize| -> HalfEdge {
        cycles[id]
            .oriented_edges
            .iter()
            .copied()
            .find(|&h| circular[h])
            .expect("every Γ₀ cycle meets a circle")
    };
    let mut marks = vec![m(fwd[0])];
    marks.extend(small.iter().map(|&h| m(h)));
    let incoming_ids: Vec<usize> = marks.iter().map(|&h| index[h]).collect();
    // Outgoing cycles sorted by where they first pass v0, reading the
    // rotation from the outgoing circle half-edge.
    let mut rotation: Vec<HalfEdge> = at_v0[1..].iter().map(|&h| m(h)).collect();
    rotation.push(m(at_v0[0]));
    let mut outgoing_ids: Vec<usize> = Vec::new();
    for h in rotation {
        let id = index[h];
        if !incoming_ids.contains(&id) && !outgoing_ids.contains(&id) {
            outgoing_ids.push(id);
        }
    }
    for id in 0..cycles.len() {
        if !incoming_ids.contains(&id) && !outgoing_ids.contains(&id) {
            outgoing_ids.push(id);
        }
    }
    marks.extend(outgoing_ids.iter().map(|&id| first_circular(id)));
    let c = ChordDiagram::assemble(graph, circular, incoming as usize, &marks)?;
    debug_assert_eq!(c.top_type(), ty);
    Ok(c)
}

/// Glues the outgoing cycles of `c1` to the incoming circles of `c2`.
///
/// The circle vertices of `c2` are inserted into `c1` at the scheduled
/// positions along each outgoing cycle and keep their ghost edges; the
/// circular edges of `c2` disappear. The default schedule puts all of them
/// on the circular edge under the marking, in circle order. Placing a vertex
/// on a ghost half-edge attaches its ghosts to the source vertex of that
/// half-edge; if that closes a ghost cycle the glue fails.
pub fn glue(c1: &ChordDiagram, c2: &ChordDiagram, schedule: Option<&GlueSchedule>) -> Result<ChordDiagram, ChordError> {
    let q = c1.outgoing_count();
    if q != c2.incoming_count() {
        return Err(ChordError::ArityMismatch {
            outgoing: q,
            incoming: c2.incoming_count(),
        });
    }
    let p = c1.incoming_count();
    let r = c2.outgoing_count();

    // Circle vertices of c2, per incoming circle, from the marked vertex on.
    let g2 = c2.graph();
    let circle_vertices: Vec<Vec<usize>> = c2
        .incoming_cycles()
        .iter()
        .map(|cyc| cyc.oriented_edges.iter().map(|&h| g2.vertex_of(h)).collect())
        .collect();

    let offsets: Vec<Vec<usize>> = match schedule {
        Some(s) => {
            if s.offsets.len() != q {
                return Err(ChordError::InvalidSchedule(format!(
                    "{} circles scheduled, {q} expected",
                    s.offsets.len()
                )));
            }
            for (j, row) in s.offsets.iter().enumerate() {
                if row.len() != circle_vertices[j].len() {
                    return Err(ChordError::InvalidSchedule(format!(
                        "circle {j} has {} vertices but {} offsets",
                        circle_vertices[j].len(),
                        row.len()
                    )));
                }
                let len = c1.outgoing_cycles()[j].len();
                if let Some(&bad) = row.iter().find(|&&o| o >= len) {
                    return Err(ChordError::InvalidSchedule(format!(
                        "offset {bad} exceeds outgoing cycle {j} of length {len}"
                    )));
                }
                if row.windows(2).any(|w| w[0] < w[1]) {
                    return Err(ChordError::InvalidSchedule(format!(
                        "offsets for circle {j} must be non-increasing"
                    )));
                }
            }
            s.offsets.clone()
        }
        None => circle_vertices.iter().map(|vs| vec![0; vs.len()]).collect(),
    };

    let mut d = Draft::from_diagram(c1);
    d.marks.truncate(p);

    // Copy every ghost half-edge of c2 with fresh ids.
    let base = d.pairing.len();
    let mut map2 = vec![usize::MAX; g2.half_edge_count()];
    for h in 0..g2.half_edge_count() {
        if !c2.is_circular_half_edge(h) {
            map2[h] = base + h;
        }
    }
    d.pairing.resize(base + g2.half_edge_count(), usize::MAX);
    d.circular.resize(base + g2.half_edge_count(), false);
    for h in 0..g2.half_edge_count() {
        if map2[h] != usize::MAX {
            d.pairing[map2[h]] = map2[g2.pair(h)];
        }
    }
    for v in 0..g2.vertex_count() {
        if !c2.is_circular_vertex(v) {
            let rot = g2.vertex(v).iter().map(|&h| map2[h]).collect();
            d.rot.push(rot);
        }
    }
    // Ghost half-edges of a circle vertex, read from after its circular pair.
    let ghosts_at = |v: usize| -> Vec<HalfEdge> {
        let rot = g2.vertex(v);
        let k = rot.len();
        let start = (0..k)
            .find(|&i| c2.is_circular_half_edge(rot[i]) && c2.is_circular_half_edge(rot[(i + 1) % k]))
            .expect("circle vertex has consecutive circular half-edges");
        (2..k).map(|t| map2[rot[(start + t) % k]]).collect()
    };

    // Per c2 circle vertex, the half-edge at its image that plays the role
    // of its incoming-side circular half-edge (used to transport markings).
    let mut image_in: BTreeMap<usize, HalfEdge> = BTreeMap::new();

    for (j, verts) in circle_vertices.iter().enumerate() {
        let out_cycle = &c1.outgoing_cycles()[j].oriented_edges;
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &off) in offsets[j].iter().enumerate() {
            groups.entry(off).or_default().push(i);
        }
        for (off, members) in groups {
            let h = out_cycle[off];
            if c1.is_circular_half_edge(h) {
                // h runs against the circle from b to a; hb = pairing(h) leaves a.
                let hb = d.pairing[h];
                let mut prev = hb;
                for &i in &members {
                    let w = verts[i];
                    let seg = d.new_edge(true);
                    let (out_half, in_half) = (seg, seg + 1);
                    // Re-pair: prev <-> in_half, out_half continues.
                    d.pairing[prev] = in_half;
                    d.pairing[in_half] = prev;
                    let z = d.new_vertex();
                    let mut rot = vec![in_half, out_half];
                    rot.extend(ghosts_at(w));
                    d.rot[z] = rot;
                    image_in.insert(w, in_half);
                    prev = out_half;
                }
                d.pairing[prev] = h;
                d.pairing[h] = prev;
            } else {
                let (v, at) = d.locate(h);
                let mut inserted = Vec::new();
                for &i in members.iter().rev() {
                    inserted.extend(ghosts_at(verts[i]));
                }
                let rot = &mut d.rot[v];
                let tail = rot.split_off(at);
                rot.extend(inserted);
                rot.extend(tail);
            }
        }
    }

    // Outgoing cycles of c2: anchor on a surviving ghost half-edge, then
    // mark the transported marking if it survived, else the first circular
    // half-edge from the anchor on.
    let (graph, circular, map) = d.compact_with(Default::default()).map_err(|e| ChordError::GlueValidationFailed(Box::new(e)))?;
    let fail = |e: ChordError| ChordError::GlueValidationFailed(Box::new(e));
    let mut uf = UnionFind::new(graph.vertex_count());
    for (e, &[a, b]) in graph.edges().iter().enumerate() {
        if !circular[a] && !uf.union(graph.vertex_of(a), graph.vertex_of(b)) {
            return Err(fail(ChordError::GhostCycle { edge: e }));
        }
    }
    let mut marks: Vec<HalfEdge> = d.marks.iter().map(|&m| map[m].expect("c1 incoming marks survive")).collect();
    let cycles = graph.boundary_cycles();
    let index = graph.boundary_index(&cycles);
    for (pos, cyc) in c2.outgoing_cycles().iter().enumerate() {
        let anchor = cyc
            .oriented_edges
            .iter()
            .copied()
            .find(|&h| !c2.is_circular_half_edge(h))
            .ok_or_else(|| fail(ChordError::NoCircularEdgeOnCycle { position: q + pos }))?;
        let anchor = map[map2[anchor]].expect("c2 ghosts survive");
        let id = index[anchor];
        let transported = image_in
            .get(&g2.vertex_of(cyc.oriented_edges[0]))
            .and_then(|&h| map[h])
            .filter(|&h| index[h] == id);
        let mark = match transported {
            Some(h) => h,
            None => {
                let ring = &cycles[id].oriented_edges;
                let at = ring.iter().position(|&h| h == anchor).unwrap();
                (0..ring.len())
                    .map(|t| ring[(at + t) % ring.len()])
                    .find(|&h| circular[h])
                    .ok_or_else(|| fail(ChordError::NoCircularEdgeOnCycle { position: p + pos }))?
            }
        };
        marks.push(mark);
    }
    let glued = ChordDiagram::assemble(graph, circular, p, &marks).map_err(fail)?;
    let expected = TopType::new(
        c1.top_type().genus + c2.top_type().genus + q as u32 - 1,
        p as u32,
        r as u32,
    );
    if glued.top_type() != expected {
        return Err(fail(ChordError::BadBoundaryOrder(format!(
            "glued type {} differs from {expected}",
            glued.top_type()
        ))));
    }
    Ok(glued)
}

/// Small hand-built diagrams.
pub mod samples {
    use super::*;

    /// One circle with two vertices joined by a single chord: type (0;1,2).
    pub fn single_chord() -> ChordDiagram {
        // Circle edges 0: (0,1) from A to B, 1: (2,3) from B to A; chord (4,5).
        // A = [3, 0, 4] (in, out, ghost), B = [1, 2, 5].
        ChordDiagram::validate(&RawChord {
            graph: RawFatGraph {
                pairs: vec![(0, 1), (2, 3), (4, 5)],
                vertices: vec![vec![0, 4, 3], vec![1, 2, 5]],
            },
            labels: vec![EdgeLabel::Circular, EdgeLabel::Circular, EdgeLabel::Ghost],
            incoming: 1,
            order: vec![0, 1, 2],
            marks: vec![(0, 0), (1, 1), (2, 3)],
        })
        .expect("single chord diagram")
    }
}

#[cfg(test)]
mod tests {
    use super::samples::single_chord;
    use super::*;

    #[test]
    fn single_chord_type_and_collapse() {
        let c = single_chord();
        assert_eq!(c.top_type(), TopType::new(0, 1, 2));
        let s = c.collapse_ghosts();
        assert_eq!(s.s_graph.vertex_count(), 1);
        assert_eq!(s.s_graph.edge_count(), 2);
        assert_eq!(s.multiplicity(0), 2);
        assert_eq!(c.chi_defect(), 1);
        assert_eq!(c.chi_defect(), -c.graph().euler_characteristic());
        let chord = (0..3).find(|&e| c.label(e) == EdgeLabel::Ghost).unwrap();
        assert!(c.is_essential(chord));
        assert!(c.collapsible_edges().is_empty());
        assert_eq!(c.collapse_edge(chord).unwrap_err(), ChordError::EssentialEdge(chord));
        assert!(c.expansions().is_empty());
    }

    #[test]
    fn ghost_triangle_rejected() {
        // Three circle vertices pairwise joined by chords.
        let mut raw = single_chord().to_raw();
        raw.graph = RawFatGraph {
            pairs: vec![(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11)],
            vertices: vec![vec![5, 0, 6, 11], vec![1, 2, 8, 7], vec![3, 4, 10, 9]],
        };
        raw.labels = vec![
            EdgeLabel::Circular,
            EdgeLabel::Circular,
            EdgeLabel::Circular,
            EdgeLabel::Ghost,
            EdgeLabel::Ghost,
            EdgeLabel::Ghost,
        ];
        let g = FatGraph::validate(&raw.graph).unwrap();
        let n = g.boundary_cycles().len();
        raw.order = (0..n).collect();
        raw.marks = g
            .boundary_cycles()
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.oriented_edges[0]))
            .collect();
        assert!(matches!(ChordDiagram::validate(&raw), Err(ChordError::GhostCycle { .. })));
    }

    #[test]
    fn circle_through_ghost_rejected() {
        let mut raw = single_chord().to_raw();
        raw.labels = vec![EdgeLabel::Circular, EdgeLabel::Ghost, EdgeLabel::Circular];
        let err = ChordDiagram::validate(&raw).unwrap_err();
        assert!(matches!(err, ChordError::CircleNotDisjoint(_)), "{err:?}");
    }

    #[test]
    fn marks_must_be_circular_and_on_cycle() {
        let c = single_chord();
        let mut raw = c.to_raw();
        let (id, _) = raw.marks[1];
        let ghost_on_cycle = c.graph().boundary_cycles()[id]
            .oriented_edges
            .iter()
            .copied()
            .find(|&h| !c.is_circular_half_edge(h))
            .unwrap();
        raw.marks[1].1 = ghost_on_cycle;
        assert!(matches!(ChordDiagram::validate(&raw), Err(ChordError::BadMarking { .. })));
        let mut raw = c.to_raw();
        raw.marks.pop();
        assert!(matches!(ChordDiagram::validate(&raw), Err(ChordError::BadMarking { .. })));
        let mut raw = c.to_raw();
        raw.order = vec![0, 0, 1];
        assert!(matches!(ChordDiagram::validate(&raw), Err(ChordError::BadBoundaryOrder(_))));
    }

    #[test]
    fn incoming_must_be_circle() {
        let c = single_chord();
        let mut raw = c.to_raw();
        // Swap the incoming circle with an outgoing cycle in the order.
        raw.order.swap(0, 1);
        let err = ChordDiagram::validate(&raw).unwrap_err();
        assert!(matches!(err, ChordError::CircleNotDisjoint(_)), "{err:?}");
        let mut raw = c.to_raw();
        raw.incoming = 0;
        assert_eq!(ChordDiagram::validate(&raw).unwrap_err(), ChordError::NoIncomingCircle);
        let mut raw = c.to_raw();
        raw.incoming = 3;
        assert!(ChordDiagram::validate(&raw).is_err());
    }

    #[test]
    fn gamma0_small_types() {
        for (g, p, q) in [(0, 1, 2), (1, 1, 1), (0, 2, 1), (0, 3, 3), (1, 3, 3), (2, 2, 2)] {
            let c = canonical_gamma0(g, p, q).unwrap();
            assert_eq!(c.top_type(), TopType::new(g, p, q), "Γ₀({g},{p},{q})");
            // Only v0 exceeds valence three.
            let big = (0..c.graph().vertex_count())
                .filter(|&v| c.graph().vertex(v).len() > 3)
                .count();
            assert!(big <= 1);
        }
        assert_eq!(
            canonical_gamma0(0, 1, 1).unwrap_err(),
            ChordError::UnrepresentableType(TopType::new(0, 1, 1))
        );
    }

    #[test]
    fn gamma0_multiplicity_of_v0() {
        for (g, p, q) in [(0, 1, 2), (1, 2, 3), (2, 3, 1)] {
            let c = canonical_gamma0(g, p, q).unwrap();
            let s = c.collapse_ghosts();
            // v0 plus p-1 small circle vertices plus the chords landing on the big circle.
            let expected = 1 + (p as usize - 1) + (q as usize - 1) + 2 * g as usize;
            assert_eq!(s.multiplicities.iter().copied().max().unwrap(), expected);
            assert_eq!(s.multiplicities.iter().sum::<usize>(), c.circular_vertex_count());
        }
    }

    #[test]
    fn gamma0_boundary_order() {
        let c = canonical_gamma0(1, 3, 3).unwrap();
        let v0 = c.graph().vertex_of(c.markings()[0]);
        assert!(c.graph().vertex(v0).len() > 3);
        // Outgoing cycles other than the last are short.
        for cyc in &c.outgoing_cycles()[..2] {
            assert!(cyc.len() <= 3);
        }
        assert!(c.outgoing_cycles()[2].len() > 3);
    }

    #[test]
    fn collapse_then_expand_round_trip() {
        let c = canonical_gamma0(1, 2, 2).unwrap();
        let bigger: Vec<ChordDiagram> = c.expansions();
        assert!(!bigger.is_empty());
        for d in &bigger {
            assert_eq!(d.top_type(), c.top_type());
            for e in d.collapsible_edges() {
                let back = d.collapse_edge(e).unwrap();
                assert_eq!(back.top_type(), d.top_type());
                let codes: Vec<_> = back.expansions().iter().map(|x| x.canonical_code()).collect();
                assert!(codes.contains(&d.canonical_code()));
            }
        }
    }

    #[test]
    fn glue_arity_mismatch() {
        let a = canonical_gamma0(0, 1, 2).unwrap();
        let b = canonical_gamma0(0, 1, 2).unwrap();
        assert_eq!(
            glue(&a, &b, None).unwrap_err(),
            ChordError::ArityMismatch {
                outgoing: 2,
                incoming: 1
            }
        );
    }

    #[test]
    fn glue_types() {
        let a = canonical_gamma0(0, 1, 2).unwrap();
        let b = canonical_gamma0(0, 2, 2).unwrap();
        assert_eq!(glue(&a, &b, None).unwrap().top_type(), TopType::new(1, 1, 2));
        let c = canonical_gamma0(1, 2, 2).unwrap();
        assert_eq!(glue(&c, &c, None).unwrap().top_type(), TopType::new(3, 2, 2));
    }
}
