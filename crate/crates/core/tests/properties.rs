mod common;

use chordlab::fatgraph::isomorphic_by_search;
use chordlab::format::{parse_chord, parse_fatgraph, write_chord, write_fatgraph};
use chordlab::moves::{apply, explore, neighbor_moves, neighbors, path_to_canonical, replay, Move};
use chordlab::par::{Executor, Parallelism};
use chordlab::tqft::{builtins, check_axioms, mu, verify_gluing, Field, Matrix};
use chordlab::{canonical_gamma0, ChordDiagram, TopType};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_type() -> impl Strategy<Value = TopType> {
    (0u32..=1, 1u32..=3, 1u32..=3)
        .prop_filter("cylinder", |&(g, p, q)| (g, p, q) != (0, 1, 1))
        .prop_map(|(g, p, q)| TopType::new(g, p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_code_is_relabeling_invariant(seed in any::<u64>(), t in small_type()) {
        let mut rng = seeded(seed);
        let c = random_diagram(&mut rng, t);
        let d = shuffle_labels(&mut rng, &c);
        prop_assert_eq!(c.canonical_code(), d.canonical_code());
        prop_assert_eq!(c.marked_code(), d.marked_code());
        prop_assert_eq!(c.canonical_relabel(), d.canonical_relabel());
    }

    #[test]
    fn canonical_code_agrees_with_search(seed in any::<u64>(), t in small_type()) {
        let mut rng = seeded(seed);
        let a = random_diagram(&mut rng, t);
        let b = random_diagram(&mut rng, t);
        let by_code = a.marked_code() == b.marked_code();
        let by_search = isomorphic_by_search(a.graph(), &a.half_edge_colors(true), b.graph(), &b.half_edge_colors(true));
        prop_assert_eq!(by_code, by_search);
    }

    #[test]
    fn fatgraph_code_agrees_with_search(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = random_fatgraph(&mut rng, 5);
        let b = random_fatgraph(&mut rng, 5);
        let plain_a = vec![0; a.half_edge_count()];
        let plain_b = vec![0; b.half_edge_count()];
        prop_assert_eq!(a.is_isomorphic(&b), isomorphic_by_search(&a, &plain_a, &b, &plain_b));
    }

    #[test]
    fn every_move_preserves_type_and_forest(seed in any::<u64>(), t in small_type()) {
        let mut rng = seeded(seed);
        let c = random_diagram(&mut rng, t);
        for (mv, d) in neighbor_moves(&c) {
            prop_assert_eq!(d.top_type(), t, "{}", mv);
            let comps = d.ghost_components();
            let ghost_edges = d.labels().iter().filter(|l| !l.is_circular()).count();
            let distinct: std::collections::BTreeSet<_> = comps.iter().collect();
            // A forest has exactly V - E components.
            prop_assert_eq!(distinct.len(), d.graph().vertex_count() - ghost_edges);
        }
    }

    #[test]
    fn collapse_and_expansion_are_inverse(seed in any::<u64>(), t in small_type()) {
        let mut rng = seeded(seed);
        let c = random_diagram(&mut rng, t);
        let code = c.canonical_code();
        for (mv, d) in neighbor_moves(&c) {
            let back = neighbors(&d).iter().any(|e| e.canonical_code() == code);
            prop_assert!(back, "{} has no inverse", mv);
        }
    }

    #[test]
    fn chord_files_round_trip(seed in any::<u64>(), t in small_type()) {
        let mut rng = seeded(seed);
        let c = random_diagram(&mut rng, t);
        let text = write_chord(&c);
        let back = parse_chord(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(write_chord(&back), text);
    }

    #[test]
    fn fatgraph_files_round_trip(seed in any::<u64>()) {
        let g = random_fatgraph(&mut seeded(seed), 12);
        prop_assert_eq!(parse_fatgraph(&write_fatgraph(&g)).unwrap(), g);
    }

    #[test]
    fn boundary_cycles_match_collapsed_graph(seed in any::<u64>(), t in small_type()) {
        let c = random_diagram(&mut seeded(seed), t);
        let s = c.collapse_ghosts();
        prop_assert_eq!(s.s_graph.boundary_cycles().len() as u32, t.boundaries());
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = chordlab::format::parse_document(&text);
    }

    #[test]
    fn parser_never_panics_on_headers(body in "[ a-zA-Z0-9>/#\\-\n]{0,200}", tag in 0usize..4) {
        let head = ["fatgraph v1\n", "chord v1\n", "frob v1\n", "schedule v1\n"][tag];
        let _ = chordlab::format::parse_document(&format!("{head}{body}"));
    }
}

fn fields() -> [Field; 4] {
    [Field::Rationals, Field::Prime(2), Field::Prime(3), Field::Prime(5)]
}

#[test]
fn builtins_pass_axioms_over_every_field() {
    for f in fields() {
        for a in [builtins::pd2(f), builtins::st2(f), builtins::zero_coproduct(f)] {
            assert!(check_axioms(&a).all_passed(), "{f}");
        }
    }
}

#[test]
fn handle_commutes_with_multiplication() {
    for f in fields() {
        for a in [builtins::pd2(f), builtins::st2(f)] {
            let h = a.handle();
            for i in 0..a.dim() {
                let l = a.left_multiplication(i);
                assert_eq!(h.compose(&l), l.compose(&h));
            }
        }
    }
}

#[test]
fn gluing_with_a_disk() {
    // Capping an incoming circle with the unit: μ(g;p,q) ∘ (u ⊗ id) = μ(g;p-1,q).
    let a = builtins::pd2(Field::Rationals);
    for g in 0..=2 {
        assert!(verify_gluing(&a, 0, 1, 2, 0, g).unwrap().holds);
        assert!(verify_gluing(&a, 0, 2, 1, 0, g).unwrap().holds);
    }
}

#[test]
fn pd2_handle_powers_by_hand() {
    // H(1) = 2x and H(x) = 0, so H² = 0.
    let f = Field::Rationals;
    let a = builtins::pd2(f);
    let h2 = mu(&a, 1, 1, 2).unwrap().matrix;
    assert!(h2.is_zero());
    let h = mu(&a, 1, 1, 1).unwrap().matrix;
    assert_eq!(h.get(1, 0), &f.int(2));
    // Over F2 the handle already vanishes.
    assert!(mu(&builtins::pd2(Field::Prime(2)), 1, 1, 1).unwrap().matrix.is_zero());
}

#[test]
fn coproduct_from_single_chord() {
    let c = canonical_gamma0(0, 1, 2).unwrap();
    for a in [builtins::pd2(Field::Rationals), builtins::st2(Field::Rationals)] {
        let op = chordlab::tqft::operation_from_diagram(&c, &a).unwrap();
        assert_eq!(op.matrix, a.coproduct_matrix());
    }
}

#[test]
fn genus_one_diagrams_give_one_operation() {
    let e = explore(TopType::new(1, 1, 1), 9, &Executor::sequential()).unwrap();
    let a = builtins::pd2(Field::Rationals);
    let ops: Vec<Matrix> = e
        .codes()
        .map(|c| chordlab::tqft::operation_from_diagram(e.representative(c).unwrap(), &a).unwrap().matrix)
        .collect();
    assert!(ops.len() >= 2);
    assert!(ops.windows(2).all(|w| w[0] == w[1]));
}

// Class counts from exhaustive generation at bound = edges(Γ₀) + 4,
// cross-checked against the breadth-first search from Γ₀.
#[test]
fn frozen_class_counts() {
    let expected = [((0, 1, 2), 1), ((0, 2, 1), 1), ((0, 2, 2), 21), ((1, 1, 1), 3), ((1, 1, 2), 90)];
    for ((g, p, q), n) in expected {
        let bound = canonical_gamma0(g, p, q).unwrap().edge_count() + 4;
        let e = explore(TopType::new(g, p, q), bound, &Executor::sequential()).unwrap();
        assert_eq!(e.class_count(), n, "({g};{p},{q})");
        assert_eq!(e.generated.len(), n);
    }
}

#[test]
fn explore_is_independent_of_workers() {
    let t = TopType::new(0, 2, 2);
    let a = explore(t, 9, &Executor::new(Parallelism::Sequential)).unwrap().report();
    let b = explore(t, 9, &Executor::new(Parallelism::Threads(4))).unwrap().report();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn paths_from_random_diagrams_replay() {
    let mut rng = seeded(99);
    let exec = Executor::sequential();
    for _ in 0..20 {
        let c = random_diagram(&mut rng, TopType::new(0, 2, 1));
        assert!(c.edge_count() <= 8);
        let path = path_to_canonical(&c, 2, &exec).unwrap();
        let end = replay(&c, &path).unwrap();
        assert_eq!(end.canonical_code(), canonical_gamma0(0, 2, 1).unwrap().canonical_code());
    }
    for t in [TopType::new(0, 2, 2), TopType::new(1, 1, 2)] {
        for _ in 0..5 {
            let c = random_diagram(&mut rng, t);
            let path = path_to_canonical(&c, 2, &exec).unwrap();
            let base = canonical_gamma0(t.genus, t.incoming, t.outgoing).unwrap();
            assert_eq!(replay(&c, &path).unwrap().canonical_code(), base.canonical_code());
        }
    }
}

#[test]
fn path_after_expand_then_collapse() {
    let g = canonical_gamma0(0, 2, 2).unwrap();
    let (split_move, expanded) = neighbor_moves(&g)
        .into_iter()
        .find(|(m, _)| matches!(m, Move::Expand(_)))
        .expect("Γ₀(0,2,2) expands");
    let path = path_to_canonical(&expanded, 1, &Executor::sequential()).unwrap();
    assert!(!path.is_empty(), "{split_move}");
    let end = replay(&expanded, &path).unwrap();
    assert_eq!(end.canonical_code(), g.canonical_code());
    let one = apply(&expanded, path[0]).unwrap();
    assert_eq!(one.top_type(), g.top_type());
}

#[test]
fn tight_ceiling_reports_exhaustion() {
    // With no slack and Γ₀ itself at the ceiling, a diagram that needs a
    // larger intermediate cannot be connected; the error must say so.
    let mut rng = seeded(5);
    let mut saw_ok = false;
    for _ in 0..10 {
        let c: ChordDiagram = random_diagram(&mut rng, TopType::new(1, 1, 2));
        match path_to_canonical(&c, 0, &Executor::sequential()) {
            Ok(p) => {
                saw_ok = true;
                assert_eq!(
                    replay(&c, &p).unwrap().canonical_code(),
                    canonical_gamma0(1, 1, 2).unwrap().canonical_code()
                );
            }
            Err(chordlab::moves::MoveError::SearchExhausted { ceiling, .. }) => assert!(ceiling >= c.edge_count()),
            Err(e) => panic!("{e}"),
        }
    }
    assert!(saw_ok);
}
