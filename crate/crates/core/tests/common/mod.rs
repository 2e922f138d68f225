#![allow(dead_code)]

use chordlab::chord::GlueSchedule;
use chordlab::moves::neighbor_moves;
use chordlab::{canonical_gamma0, ChordDiagram, FatGraph, TopType};
use rand::seq::SliceRandom;
use rand::Rng;

/// A connected fat graph with every vertex of valence at least 3 and
/// between 2 and `max_edges` edges, by rejection.
pub fn random_fatgraph<R: Rng>(rng: &mut R, max_edges: usize) -> FatGraph {
    loop {
        let edges = rng.gen_range(2..=max_edges);
        let n = 2 * edges;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut pairing = vec![0; n];
        for pair in order.chunks(2) {
            pairing[pair[0]] = pair[1];
            pairing[pair[1]] = pair[0];
        }
        order.shuffle(rng);
        let mut sizes = Vec::new();
        let mut left = n;
        while left > 0 {
            let s = if left < 6 { left } else { rng.gen_range(3..=left.min(6)) };
            if left - s != 0 && left - s < 3 {
                continue;
            }
            sizes.push(s);
            left -= s;
        }
        let mut next = vec![0; n];
        let mut at = 0;
        for s in sizes {
            let cyc = &order[at..at + s];
            for i in 0..s {
                next[cyc[i]] = cyc[(i + 1) % s];
            }
            at += s;
        }
        if let Ok(g) = FatGraph::from_permutations(pairing, next) {
            return g;
        }
    }
}

/// Every type with `g ≤ max_g`, `1 ≤ p, q ≤ max_pq` except the cylinder.
pub fn types(max_g: u32, max_pq: u32) -> Vec<TopType> {
    let mut out = Vec::new();
    for g in 0..=max_g {
        for p in 1..=max_pq {
            for q in 1..=max_pq {
                if (g, p, q) != (0, 1, 1) {
                    out.push(TopType::new(g, p, q));
                }
            }
        }
    }
    out
}

/// A random walk of `steps` moves from Γ₀ of type `t`, staying within
/// `slack` edges above Γ₀.
pub fn random_walk<R: Rng>(rng: &mut R, t: TopType, steps: usize, slack: usize) -> Vec<ChordDiagram> {
    let base = canonical_gamma0(t.genus, t.incoming, t.outgoing).expect("representable type");
    let ceiling = base.edge_count() + slack;
    let mut cur = base;
    let mut out = vec![cur.clone()];
    for _ in 0..steps {
        let options: Vec<ChordDiagram> = neighbor_moves(&cur)
            .into_iter()
            .map(|(_, d)| d)
            .filter(|d| d.edge_count() <= ceiling)
            .collect();
        let Some(next) = options.choose(rng) else { break };
        cur = next.clone();
        out.push(cur.clone());
    }
    out
}

/// A random diagram of type `t`, randomly relabeled.
pub fn random_diagram<R: Rng>(rng: &mut R, t: TopType) -> ChordDiagram {
    let steps = rng.gen_range(0..8);
    let walk = random_walk(rng, t, steps, 3);
    let d = walk.last().unwrap();
    shuffle_labels(rng, d)
}

pub fn shuffle_labels<R: Rng>(rng: &mut R, d: &ChordDiagram) -> ChordDiagram {
    let mut map: Vec<usize> = (0..d.graph().half_edge_count()).collect();
    map.shuffle(rng);
    d.relabel(&map)
}

/// A random well-formed schedule for gluing `c1` to `c2`. Offsets mostly
/// land on circular edges; the rest may land on ghost edges.
pub fn random_schedule<R: Rng>(rng: &mut R, c1: &ChordDiagram, c2: &ChordDiagram) -> GlueSchedule {
    let offsets = c2
        .incoming_cycles()
        .iter()
        .zip(c1.outgoing_cycles())
        .map(|(circle, out)| {
            let circular: Vec<usize> =
                (0..out.len()).filter(|&i| c1.is_circular_half_edge(out.oriented_edges[i])).collect();
            let mut row: Vec<usize> = (0..circle.len())
                .map(|_| {
                    if rng.gen_bool(0.8) {
                        *circular.choose(rng).expect("outgoing cycles contain circular edges")
                    } else {
                        rng.gen_range(0..out.len())
                    }
                })
                .collect();
            row.sort_unstable_by(|a, b| b.cmp(a));
            row
        })
        .collect();
    GlueSchedule { offsets }
}

/// A gluable pair of random diagrams with `g ≤ 1` and arities at most 3.
pub fn random_pair<R: Rng>(rng: &mut R) -> (ChordDiagram, ChordDiagram) {
    loop {
        let (p, q, r) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (g1, g2) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        if (g1, p, q) == (0, 1, 1) || (g2, q, r) == (0, 1, 1) {
            continue;
        }
        let c1 = random_diagram(rng, TopType::new(g1, p, q));
        let c2 = random_diagram(rng, TopType::new(g2, q, r));
        return (c1, c2);
    }
}
