//! The collapse/expansion move graph on isomorphism classes of chord
//! diagrams of one type.
//!
//! Classes are keyed by the unmarked canonical code (edge labels and
//! boundary order are colors). [`explore`] runs a breadth-first search from
//! Γ₀ and, independently, enumerates every class of the type within the
//! edge bound by direct generation; any generated class the search did not
//! reach is reported rather than assumed connected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chord::{canonical_gamma0, ChordDiagram, ChordError, Draft, EdgeLabel, Split, UnionFind};
use crate::fatgraph::{CanonicalCode, HalfEdge, TopType};
use crate::par::Executor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    Chord(#[from] ChordError),
    #[error("edge bound {bound} is below the {needed} edges of the base-point diagram")]
    BoundTooSmall { bound: usize, needed: usize },
    #[error("search exhausted at {explored} classes below the edge ceiling {ceiling} (frontier {frontier}); no path found")]
    SearchExhausted {
        explored: usize,
        frontier: usize,
        ceiling: usize,
    },
    #[error("replayed path ends at a diagram that is not the base point")]
    ReplayMismatch,
}

/// One elementary move, relative to the diagram it is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    Collapse { edge: usize },
    Expand(Split),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Collapse { edge } => write!(f, "collapse edge {edge}"),
            Move::Expand(s) => write!(
                f,
                "expand vertex {} at {}..{} ({})",
                s.vertex,
                s.first,
                s.second,
                match s.label {
                    EdgeLabel::Circular => "circular",
                    EdgeLabel::Ghost => "ghost",
                }
            ),
        }
    }
}

pub fn apply(c: &ChordDiagram, mv: Move) -> Result<ChordDiagram, ChordError> {
    match mv {
        Move::Collapse { edge } => c.collapse_edge(edge),
        Move::Expand(split) => c.expand(split),
    }
}

pub fn replay(start: &ChordDiagram, moves: &[Move]) -> Result<ChordDiagram, ChordError> {
    let mut cur = start.clone();
    for &mv in moves {
        cur = apply(&cur, mv)?;
    }
    Ok(cur)
}

/// Every single move out of `c`: collapses first (by edge), then splits.
pub fn neighbor_moves(c: &ChordDiagram) -> Vec<(Move, ChordDiagram)> {
    let mut out: Vec<(Move, ChordDiagram)> = c
        .collapsible_edges()
        .into_iter()
        .filter_map(|edge| c.collapse_edge(edge).ok().map(|d| (Move::Collapse { edge }, d)))
        .collect();
    out.extend(c.expansion_moves().into_iter().map(|(s, d)| (Move::Expand(s), d)));
    out
}

/// Neighbors up to isomorphism, sorted by canonical code.
pub fn neighbors(c: &ChordDiagram) -> Vec<ChordDiagram> {
    let mut by_code = BTreeMap::new();
    for (_, d) in neighbor_moves(c) {
        by_code.entry(d.canonical_code()).or_insert(d);
    }
    by_code.into_values().collect()
}

/// Summary of one exploration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveGraphReport {
    #[serde(rename = "type")]
    pub top_type: String,
    pub bound: usize,
    pub classes: usize,
    pub components: usize,
    pub unreached: Vec<String>,
    pub witness_lengths: BTreeMap<String, usize>,
    pub moves_checked: usize,
    pub type_violations: usize,
}

#[derive(Debug, Clone)]
struct ClassInfo {
    rep: ChordDiagram,
    distance: Option<usize>,
    parent: Option<CanonicalCode>,
}

/// Full result of [`explore`]: the report plus the class table needed to
/// produce witness paths.
#[derive(Debug, Clone)]
pub struct Exploration {
    pub top_type: TopType,
    pub edge_bound: usize,
    pub base: ChordDiagram,
    pub base_code: CanonicalCode,
    pub component_count: usize,
    pub unreached: Vec<CanonicalCode>,
    pub moves_checked: usize,
    pub type_violations: usize,
    /// Classes found by direct generation.
    pub generated: BTreeSet<CanonicalCode>,
    classes: BTreeMap<CanonicalCode, ClassInfo>,
}

impl Exploration {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn codes(&self) -> impl Iterator<Item = &CanonicalCode> {
        self.classes.keys()
    }

    pub fn representative(&self, code: &CanonicalCode) -> Option<&ChordDiagram> {
        self.classes.get(code).map(|i| &i.rep)
    }

    pub fn distance(&self, code: &CanonicalCode) -> Option<usize> {
        self.classes.get(code).and_then(|i| i.distance)
    }

    /// Classes reached from Γ₀ by the search.
    pub fn reached(&self) -> impl Iterator<Item = &CanonicalCode> {
        self.classes.iter().filter(|(_, i)| i.distance.is_some()).map(|(c, _)| c)
    }

    /// A move sequence from the stored representative of `code` to a
    /// diagram isomorphic to Γ₀.
    pub fn witness_path(&self, code: &CanonicalCode) -> Option<Vec<Move>> {
        let mut chain = vec![code.clone()];
        let mut cur = self.classes.get(code)?;
        cur.distance?;
        while let Some(p) = &cur.parent {
            chain.push(p.clone());
            cur = &self.classes[p];
        }
        concretize(&self.classes[code].rep, &chain[1..], self.edge_bound)
    }

    pub fn report(&self) -> MoveGraphReport {
        MoveGraphReport {
            top_type: self.top_type.to_string(),
            bound: self.edge_bound,
            classes: self.class_count(),
            components: self.component_count,
            unreached: self.unreached.iter().map(|c| c.to_hex()).collect(),
            witness_lengths: self
                .classes
                .iter()
                .filter_map(|(c, i)| i.distance.map(|d| (c.to_hex(), d)))
                .collect(),
            moves_checked: self.moves_checked,
            type_violations: self.type_violations,
        }
    }
}

/// Walks the class chain from a concrete start, picking at each step the
/// first move whose result lies in the next class.
fn concretize(start: &ChordDiagram, chain: &[CanonicalCode], bound: usize) -> Option<Vec<Move>> {
    let mut cur = start.clone();
    let mut moves = Vec::with_capacity(chain.len());
    for target in chain {
        let (mv, next) = neighbor_moves(&cur)
            .into_iter()
            .find(|(_, d)| d.edge_count() <= bound && d.canonical_code() == *target)?;
        moves.push(mv);
        cur = next;
    }
    Some(moves)
}

struct Expanded {
    neighbors: Vec<(CanonicalCode, ChordDiagram)>,
    moves: usize,
    violations: usize,
}

fn expand_class(c: &ChordDiagram, bound: usize) -> Expanded {
    let ty = c.top_type();
    let mut moves = 0;
    let mut violations = 0;
    let mut by_code = BTreeMap::new();
    for (_, d) in neighbor_moves(c) {
        if d.edge_count() > bound {
            continue;
        }
        moves += 1;
        if d.top_type() != ty {
            violations += 1;
            continue;
        }
        by_code.entry(d.canonical_code()).or_insert(d);
    }
    Expanded {
        neighbors: by_code.into_iter().collect(),
        moves,
        violations,
    }
}

/// Breadth-first search of the move graph from Γ₀ within `edge_bound`
/// edges, cross-checked against direct generation of every class.
pub fn explore(ty: TopType, edge_bound: usize, exec: &Executor) -> Result<Exploration, MoveError> {
    let base = canonical_gamma0(ty.genus, ty.incoming, ty.outgoing)?;
    if edge_bound < base.edge_count() {
        return Err(MoveError::BoundTooSmall {
            bound: edge_bound,
            needed: base.edge_count(),
        });
    }
    let base_code = base.canonical_code();
    let mut classes: BTreeMap<CanonicalCode, ClassInfo> = BTreeMap::new();
    classes.insert(
        base_code.clone(),
        ClassInfo {
            rep: base.clone(),
            distance: Some(0),
            parent: None,
        },
    );
    let mut moves_checked = 0;
    let mut type_violations = 0;
    let mut frontier = vec![base_code.clone()];
    let mut depth = 0;
    while !frontier.is_empty() {
        let reps: Vec<ChordDiagram> = frontier.iter().map(|c| classes[c].rep.clone()).collect();
        let results = exec.map(&reps, |c| expand_class(c, edge_bound));
        let mut next = Vec::new();
        for (parent, res) in frontier.iter().zip(results) {
            moves_checked += res.moves;
            type_violations += res.violations;
            for (code, d) in res.neighbors {
                if !classes.contains_key(&code) {
                    classes.insert(
                        code.clone(),
                        ClassInfo {
                            rep: d,
                            distance: Some(depth + 1),
                            parent: Some(parent.clone()),
                        },
                    );
                    next.push(code);
                }
            }
        }
        next.sort();
        frontier = next;
        depth += 1;
    }

    let generated_map = generate_all(ty, edge_bound, exec);
    let generated: BTreeSet<CanonicalCode> = generated_map.keys().cloned().collect();
    let mut unreached = Vec::new();
    for (code, d) in generated_map {
        if !classes.contains_key(&code) {
            unreached.push(code.clone());
            classes.insert(
                code,
                ClassInfo {
                    rep: d,
                    distance: None,
                    parent: None,
                },
            );
        }
    }

    // Components among unreached classes, by searching from each in code order.
    let mut component_count = 1;
    let mut assigned: BTreeSet<CanonicalCode> = BTreeSet::new();
    for start in &unreached {
        if assigned.contains(start) {
            continue;
        }
        component_count += 1;
        assigned.insert(start.clone());
        let mut frontier = vec![start.clone()];
        while !frontier.is_empty() {
            let reps: Vec<ChordDiagram> = frontier.iter().map(|c| classes[c].rep.clone()).collect();
            let results = exec.map(&reps, |c| expand_class(c, edge_bound));
            let mut next = Vec::new();
            for res in results {
                moves_checked += res.moves;
                type_violations += res.violations;
                for (code, d) in res.neighbors {
                    if assigned.insert(code.clone()) {
                        classes.entry(code.clone()).or_insert(ClassInfo {
                            rep: d,
                            distance: None,
                            parent: None,
                        });
                        next.push(code);
                    }
                }
            }
            next.sort();
            frontier = next;
        }
    }

    Ok(Exploration {
        top_type: ty,
        edge_bound,
        base,
        base_code,
        component_count,
        unreached,
        moves_checked,
        type_violations,
        generated,
        classes,
    })
}

/// A move sequence from `c` to a diagram isomorphic to Γ₀ of its type,
/// found by bidirectional breadth-first search over classes with at most
/// `max(edges(c), edges(Γ₀)) + slack` edges. The path is replayed before
/// it is returned.
pub fn path_to_canonical(c: &ChordDiagram, slack: usize, exec: &Executor) -> Result<Vec<Move>, MoveError> {
    let ty = c.top_type();
    let base = canonical_gamma0(ty.genus, ty.incoming, ty.outgoing)?;
    let target = base.canonical_code();
    let start = c.canonical_code();
    if start == target {
        return Ok(Vec::new());
    }
    let ceiling = c.edge_count().max(base.edge_count()) + slack;

    struct Side {
        seen: BTreeMap<CanonicalCode, (Option<CanonicalCode>, ChordDiagram)>,
        frontier: Vec<CanonicalCode>,
    }
    let mut sides = [
        Side {
            seen: BTreeMap::from([(start.clone(), (None, c.clone()))]),
            frontier: vec![start.clone()],
        },
        Side {
            seen: BTreeMap::from([(target.clone(), (None, base.clone()))]),
            frontier: vec![target.clone()],
        },
    ];
    let meet = loop {
        let grow = match (sides[0].frontier.is_empty(), sides[1].frontier.is_empty()) {
            (true, true) => {
                return Err(MoveError::SearchExhausted {
                    explored: sides[0].seen.len() + sides[1].seen.len(),
                    frontier: 0,
                    ceiling,
                })
            }
            (false, true) => 0,
            (true, false) => 1,
            (false, false) => usize::from(sides[1].frontier.len() < sides[0].frontier.len()),
        };
        let other = 1 - grow;
        let reps: Vec<ChordDiagram> = sides[grow].frontier.iter().map(|k| sides[grow].seen[k].1.clone()).collect();
        let results = exec.map(&reps, |d| expand_class(d, ceiling));
        let mut next = Vec::new();
        let mut found = None;
        let parents = std::mem::take(&mut sides[grow].frontier);
        for (parent, res) in parents.iter().zip(results) {
            for (code, d) in res.neighbors {
                if sides[grow].seen.contains_key(&code) {
                    continue;
                }
                sides[grow].seen.insert(code.clone(), (Some(parent.clone()), d));
                if found.is_none() && sides[other].seen.contains_key(&code) {
                    found = Some(code.clone());
                }
                next.push(code);
            }
        }
        next.sort();
        sides[grow].frontier = next;
        if let Some(m) = found {
            break m;
        }
    };
    // Class chain start -> meet -> target.
    let mut forward = vec![meet.clone()];
    let mut k = meet.clone();
    while let Some(p) = sides[0].seen[&k].0.clone() {
        forward.push(p.clone());
        k = p;
    }
    forward.reverse();
    let mut k = meet;
    while let Some(p) = sides[1].seen[&k].0.clone() {
        forward.push(p.clone());
        k = p;
    }
    let moves = concretize(c, &forward[1..], ceiling).ok_or(MoveError::ReplayMismatch)?;
    let end = replay(c, &moves)?;
    if end.canonical_code() != target {
        return Err(MoveError::ReplayMismatch);
    }
    Ok(moves)
}

/// Every isomorphism class of chord diagrams of type `ty` with at most
/// `edge_bound` edges, by direct construction.
///
/// With `C` circular vertices, `G` ghost vertices and Euler characteristic
/// `χ`, the ghost forest has `C + χ` components and `G - χ` edges, and the
/// valence conditions force `G ≤ -2χ - C`. Every choice of circle sizes,
/// ghost forest, cyclic orders and boundary order is built and validated.
pub fn generate_all(ty: TopType, edge_bound: usize, exec: &Executor) -> BTreeMap<CanonicalCode, ChordDiagram> {
    let chi = ty.euler_characteristic();
    let p = ty.incoming as usize;
    let mut skeletons = Vec::new();
    if chi >= 0 || p == 0 || ty.outgoing == 0 {
        return BTreeMap::new();
    }
    let max_c = (-2 * chi) as usize;
    for circ in p..=max_c {
        let comps = circ as i64 + chi;
        if comps < 1 || 2 * comps > circ as i64 {
            continue;
        }
        for ghosts in 0..=(max_c - circ) {
            let ghost_edges = (ghosts as i64 - chi) as usize;
            if circ + ghost_edges > edge_bound {
                continue;
            }
            for sizes in partitions(circ, p) {
                for forest in forests(circ, ghosts, ghost_edges) {
                    skeletons.push(Skeleton {
                        sizes: sizes.clone(),
                        ghosts,
                        forest,
                    });
                }
            }
        }
    }
    let results = exec.map(&skeletons, |s| s.diagrams(ty));
    let mut out = BTreeMap::new();
    for batch in results {
        for (code, d) in batch {
            out.entry(code).or_insert(d);
        }
    }
    out
}

#[derive(Debug, Clone)]
struct Skeleton {
    sizes: Vec<usize>,
    ghosts: usize,
    forest: Vec<(usize, usize)>,
}

impl Skeleton {
    fn diagrams(&self, ty: TopType) -> Vec<(CanonicalCode, ChordDiagram)> {
        let circ: usize = self.sizes.iter().sum();
        let verts = circ + self.ghosts;
        let mut draft = Draft::default();
        for _ in 0..verts {
            draft.new_vertex();
        }
        // Circle edges: per circle, vertex i -> i+1 with half-edges (out at i, in at i+1).
        let mut c_in = vec![0; circ];
        let mut c_out = vec![0; circ];
        let mut start = 0;
        for &size in &self.sizes {
            for i in 0..size {
                let h = draft.new_edge(true);
                c_out[start + i] = h;
                c_in[start + (i + 1) % size] = h + 1;
            }
            start += size;
        }
        let mut ghost_half: Vec<Vec<HalfEdge>> = vec![Vec::new(); verts];
        for &(a, b) in &self.forest {
            let h = draft.new_edge(false);
            ghost_half[a].push(h);
            ghost_half[b].push(h + 1);
        }
        let choices: Vec<Vec<Vec<HalfEdge>>> = (0..verts)
            .map(|v| {
                if v < circ {
                    permutations(&ghost_half[v])
                        .into_iter()
                        .map(|perm| {
                            let mut r = vec![c_in[v], c_out[v]];
                            r.extend(perm);
                            r
                        })
                        .collect()
                } else {
                    let (first, rest) = ghost_half[v].split_first().expect("ghost vertex has edges");
                    permutations(rest)
                        .into_iter()
                        .map(|perm| {
                            let mut r = vec![*first];
                            r.extend(perm);
                            r
                        })
                        .collect()
                }
            })
            .collect();
        let circle_marks: Vec<HalfEdge> = {
            let mut s = 0;
            self.sizes
                .iter()
                .map(|&size| {
                    let h = c_out[s];
                    s += size;
                    h
                })
                .collect()
        };

        let mut out = Vec::new();
        let mut pick = vec![0usize; verts];
        loop {
            for v in 0..verts {
                draft.rot[v] = choices[v][pick[v]].clone();
            }
            self.emit(&draft, &circle_marks, ty, &mut out);
            // Odometer over rotation choices.
            let mut v = 0;
            while v < verts {
                pick[v] += 1;
                if pick[v] < choices[v].len() {
                    break;
                }
                pick[v] = 0;
                v += 1;
            }
            if v == verts {
                break;
            }
        }
        out
    }

    fn emit(&self, draft: &Draft, circle_marks: &[HalfEdge], ty: TopType, out: &mut Vec<(CanonicalCode, ChordDiagram)>) {
        let Ok((graph, circular, map)) = draft.compact_with(Default::default()) else {
            return;
        };
        let cycles = graph.boundary_cycles();
        if cycles.len() != ty.boundaries() as usize {
            return;
        }
        let index = graph.boundary_index(&cycles);
        let incoming: Vec<usize> = circle_marks.iter().map(|&h| index[map[h].unwrap()]).collect();
        let outgoing: Vec<usize> = (0..cycles.len()).filter(|id| !incoming.contains(id)).collect();
        let first_circular = |id: usize| cycles[id].oriented_edges.iter().copied().find(|&h| circular[h]);
        let mut seen = BTreeSet::new();
        for inc in permutations(&incoming) {
            for outg in permutations(&outgoing) {
                let marks: Option<Vec<HalfEdge>> = inc.iter().chain(&outg).map(|&id| first_circular(id)).collect();
                let Some(marks) = marks else { return };
                let Ok(c) = ChordDiagram::assemble(graph.clone(), circular.clone(), incoming.len(), &marks) else {
                    continue;
                };
                if c.top_type() != ty {
                    continue;
                }
                let code = c.canonical_code();
                if seen.insert(code.clone()) {
                    out.push((code, c));
                }
            }
        }
    }
}

/// Non-increasing compositions of `n` into exactly `k` positive parts.
fn partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for part in (1..=max.min(n)).rev() {
            if n - part < k - 1 {
                continue;
            }
            cur.push(part);
            go(n - part, k - 1, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, n, &mut Vec::new(), &mut out);
    out
}

/// Edge sets of forests on `circ + ghosts` labeled vertices with exactly
/// `edges` edges, every circular vertex of degree ≥ 1 and every ghost
/// vertex of degree ≥ 3.
fn forests(circ: usize, ghosts: usize, edges: usize) -> Vec<Vec<(usize, usize)>> {
    let n = circ + ghosts;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut degree = vec![0usize; n];
    fn go(
        pairs: &[(usize, usize)],
        from: usize,
        left: usize,
        circ: usize,
        chosen: &mut Vec<(usize, usize)>,
        degree: &mut Vec<usize>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if left == 0 {
            let ok = degree
                .iter()
                .enumerate()
                .all(|(v, &d)| if v < circ { d >= 1 } else { d >= 3 });
            if ok {
                let mut uf = UnionFind::new(degree.len());
                if chosen.iter().all(|&(a, b)| uf.union(a, b)) {
                    out.push(chosen.clone());
                }
            }
            return;
        }
        if pairs.len() - from < left {
            return;
        }
        // Deficit check: remaining edges must be able to lift every degree.
        let deficit: usize = degree
            .iter()
            .enumerate()
            .map(|(v, &d)| if v < circ { 1usize.saturating_sub(d) } else { 3usize.saturating_sub(d) })
            .sum();
        if deficit > 2 * left {
            return;
        }
        for i in from..pairs.len() {
            let (a, b) = pairs[i];
            let mut uf = UnionFind::new(degree.len());
            for &(x, y) in chosen.iter() {
                uf.union(x, y);
            }
            if !uf.union(a, b) {
                continue;
            }
            chosen.push((a, b));
            degree[a] += 1;
            degree[b] += 1;
            go(pairs, i + 1, left - 1, circ, chosen, degree, out);
            degree[a] -= 1;
            degree[b] -= 1;
            chosen.pop();
        }
    }
    go(&pairs, 0, edges, circ, &mut chosen, &mut degree, &mut out);
    out
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::samples::single_chord;

    #[test]
    fn partitions_and_permutations() {
        assert_eq!(partitions(4, 2), vec![vec![3, 1], vec![2, 2]]);
        assert_eq!(partitions(3, 3), vec![vec![1, 1, 1]]);
        assert!(partitions(2, 3).is_empty());
        assert_eq!(permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(permutations::<u8>(&[]).len(), 1);
    }

    #[test]
    fn forests_respect_degrees() {
        // Two circular vertices, one edge between them.
        assert_eq!(forests(2, 0, 1), vec![vec![(0, 1)]]);
        // Three circular vertices, one ghost vertex of degree 3: the star.
        assert_eq!(forests(3, 1, 3), vec![vec![(0, 3), (1, 3), (2, 3)]]);
        // Paths on three circular vertices.
        assert_eq!(forests(3, 0, 2).len(), 3);
    }

    #[test]
    fn single_chord_has_no_neighbors() {
        assert!(neighbors(&single_chord()).is_empty());
    }

    #[test]
    fn small_census_counts() {
        let exec = Executor::sequential();
        assert_eq!(generate_all(TopType::new(0, 1, 2), 10, &exec).len(), 1);
        assert_eq!(generate_all(TopType::new(0, 2, 1), 10, &exec).len(), 1);
        assert!(generate_all(TopType::new(0, 1, 1), 10, &exec).is_empty());
    }

    #[test]
    fn bound_too_small() {
        let err = explore(TopType::new(1, 1, 1), 3, &Executor::sequential()).unwrap_err();
        assert_eq!(err, MoveError::BoundTooSmall { bound: 3, needed: 5 });
        let err = explore(TopType::new(0, 1, 1), 10, &Executor::sequential()).unwrap_err();
        assert!(matches!(err, MoveError::Chord(ChordError::UnrepresentableType(_))));
    }

    #[test]
    fn gamma0_path_is_empty() {
        let g = canonical_gamma0(1, 1, 2).unwrap();
        assert!(path_to_canonical(&g, 2, &Executor::sequential()).unwrap().is_empty());
    }
}
