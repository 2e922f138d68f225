//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p chordlab-core --test acceptance` (add
//! `--release` for realistic timings).

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use chordlab::format::{
    parse_chord, parse_document, parse_fatgraph, parse_frobenius, write_chord, write_document, write_fatgraph,
    write_frobenius,
};
use chordlab::moves::{explore, replay};
use chordlab::par::{Executor, Parallelism};
use chordlab::tqft::{
    builtins, counit_solve, graded_violation, mu, operation_from_diagram, verify_sweep, Field, SweepRange,
};
use chordlab::{canonical_gamma0, glue, ChordDiagram, ChordError, TopType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
    limit: Option<Duration>,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
        limit: None,
    }
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn boundary_partition() -> Outcome {
    let mut rng = rng(1);
    for i in 0..1000 {
        let g = random_fatgraph(&mut rng, 12);
        let cycles = g.boundary_cycles();
        let mut count = vec![0; g.half_edge_count()];
        for c in &cycles {
            for &h in &c.oriented_edges {
                count[h] += 1;
            }
        }
        if count.iter().any(|&k| k != 1) {
            return outcome(false, format!("graph {i}: half-edges not partitioned"));
        }
        let chi = g.vertex_count() as i64 - g.edge_count() as i64;
        let two_g = 2 - chi - cycles.len() as i64;
        if two_g < 0 || two_g % 2 != 0 {
            return outcome(false, format!("graph {i}: 2g = {two_g}"));
        }
    }
    outcome(true, "1000 random graphs, E <= 12")
}

fn diagram_corpus() -> Vec<ChordDiagram> {
    let mut rng = rng(2);
    let mut out = Vec::new();
    for t in types(2, 3) {
        for _ in 0..3 {
            out.extend(random_walk(&mut rng, t, 12, 3));
        }
    }
    out
}

fn chi_identity() -> Outcome {
    let corpus = diagram_corpus();
    for c in &corpus {
        let t = c.top_type();
        let chi = 2 - 2 * t.genus as i64 - t.boundaries() as i64;
        let s = c.collapse_ghosts();
        let total: usize = (0..s.s_graph.vertex_count()).map(|v| s.multiplicity(v)).sum();
        if c.chi_defect() != -chi || total != c.circular_vertex_count() {
            return outcome(false, format!("{t}: v - sigma = {}, -chi = {}", c.chi_defect(), -chi));
        }
    }
    let kinds: BTreeSet<TopType> = corpus.iter().map(|c| c.top_type()).collect();
    outcome(
        corpus.len() >= 500,
        format!("{} diagrams across {} types", corpus.len(), kinds.len()),
    )
}

fn gamma0_types() -> Outcome {
    let mut n = 0;
    for g in 0..=3 {
        for p in 1..=4 {
            for q in 1..=4 {
                if (g, p, q) == (0, 1, 1) {
                    continue;
                }
                match canonical_gamma0(g, p, q) {
                    Ok(c) if c.top_type() == TopType::new(g, p, q) => n += 1,
                    Ok(c) => return outcome(false, format!("({g};{p},{q}) built as {}", c.top_type())),
                    Err(e) => return outcome(false, format!("({g};{p},{q}): {e}")),
                }
            }
        }
    }
    let mut o = outcome(true, format!("{n} types"));
    o.limit = Some(Duration::from_secs(1));
    o
}

fn gluing_types() -> Outcome {
    let mut rng = rng(4);
    let mut glued_ok = 0;
    let mut rejected = 0;
    for _ in 0..200 {
        let (c1, c2) = random_pair(&mut rng);
        let (t1, t2) = (c1.top_type(), c2.top_type());
        let want = TopType::new(t1.genus + t2.genus + t1.outgoing - 1, t1.incoming, t2.outgoing);
        let schedule = random_schedule(&mut rng, &c1, &c2);
        for s in [None, Some(&schedule)] {
            match glue(&c1, &c2, s) {
                Ok(c) if c.top_type() == want => glued_ok += 1,
                Ok(c) => return outcome(false, format!("{t1} # {t2} gave {}", c.top_type())),
                // A scheduled vertex snapped onto a ghost edge and closed a ghost cycle.
                Err(ChordError::GlueValidationFailed(e)) if s.is_some() && matches!(*e, ChordError::GhostCycle { .. }) => {
                    rejected += 1
                }
                Err(e) => return outcome(false, format!("{t1} # {t2}: {e}")),
            }
        }
    }
    let n = format!("{glued_ok} glued pairs ({rejected} random schedules rejected for closing a ghost cycle)");
    let read = |name: &str| parse_chord(&std::fs::read_to_string(fixtures().join(name)).unwrap()).unwrap();
    let (c1, c2) = (read("glue_c1.chord"), read("glue_c2.chord"));
    let glued = glue(&c1, &c2, None).unwrap();
    let fixture_ok = c1.top_type() == TopType::new(0, 1, 2)
        && c2.top_type() == TopType::new(0, 2, 2)
        && glued.top_type() == TopType::new(1, 1, 2);
    let mut o = outcome(
        fixture_ok,
        format!("{n}; fixture pair {} # {} = {}", c1.top_type(), c2.top_type(), glued.top_type()),
    );
    o.limit = Some(Duration::from_secs(10));
    o
}

const CONNECT_TYPES: [(u32, u32, u32); 5] = [(0, 1, 2), (0, 2, 1), (0, 2, 2), (1, 1, 1), (1, 1, 2)];

fn connectivity() -> (Outcome, Outcome) {
    let one = Executor::new(Parallelism::Sequential);
    let eight = Executor::new(Parallelism::Threads(8));
    let mut details = Vec::new();
    let mut pass = true;
    let mut violations = 0;
    let mut moves = 0;
    for (g, p, q) in CONNECT_TYPES {
        let t = TopType::new(g, p, q);
        let bound = canonical_gamma0(g, p, q).unwrap().edge_count() + 4;
        let a = explore(t, bound, &one).unwrap();
        let b = explore(t, bound, &eight).unwrap();
        let ja = serde_json::to_string(&a.report()).unwrap();
        let jb = serde_json::to_string(&b.report()).unwrap();
        let reached: BTreeSet<_> = a.reached().cloned().collect();
        let all_reached = a.generated.iter().all(|c| reached.contains(c));
        let witnesses_ok = reached.iter().all(|code| {
            let Some(path) = a.witness_path(code) else { return false };
            replay(a.representative(code).unwrap(), &path)
                .map(|end| end.canonical_code() == a.base_code)
                .unwrap_or(false)
        });
        let ok = a.component_count == 1 && a.unreached.is_empty() && all_reached && witnesses_ok && ja == jb;
        pass &= ok;
        violations += a.type_violations + b.type_violations;
        moves += a.moves_checked;
        details.push(format!("{t}@{bound}: {} classes{}", a.class_count(), if ok { "" } else { " FAILED" }));
    }
    let mut c5 = outcome(pass, details.join(", ") + "; reports identical at 1 and 8 workers");
    c5.limit = Some(Duration::from_secs(300));
    let c6 = outcome(violations == 0, format!("{violations} violations in {moves} moves"));
    (c5, c6)
}

fn fields() -> [Field; 4] {
    [Field::Rationals, Field::Prime(2), Field::Prime(3), Field::Prime(5)]
}

fn sewing() -> Outcome {
    let range: SweepRange = "3,3,3,2,2".parse().unwrap();
    let exec = Executor::new(Parallelism::Auto);
    let mut total = 0;
    for f in fields() {
        for a in [builtins::pd2(f), builtins::st2(f)] {
            let checks = verify_sweep(&a, range, &exec).unwrap();
            total += checks.len();
            if let Some(c) = checks.iter().find(|c| !c.holds) {
                return outcome(false, format!("{f}: p={} q={} r={} g1={} g2={}", c.p, c.q, c.r, c.g1, c.g2));
            }
        }
    }
    let mut o = outcome(true, format!("{total} identities over Q, F2, F3, F5"));
    o.limit = Some(Duration::from_secs(30));
    o
}

fn degree_shift() -> Outcome {
    let mut n = 0;
    for f in fields() {
        let a = builtins::st2(f);
        for p in 0..=3 {
            for q in 1..=3 {
                for g in 0..=6 {
                    let op = mu(&a, p, q, g).unwrap();
                    if let Some((r, c)) = graded_violation(&a, &op) {
                        return outcome(false, format!("mu({g};{p},{q}) entry ({r},{c}) over {f}"));
                    }
                    n += 1;
                }
            }
        }
    }
    outcome(true, format!("{n} operations, every nonzero entry shifts by -(2g-2+p+q)n"))
}

fn counit() -> Outcome {
    let f = Field::Rationals;
    let pd2 = counit_solve(&builtins::pd2(f));
    let ok = pd2.as_ref().is_some_and(|c| c.theta == vec![f.int(0), f.int(1)] && c.nondegenerate)
        && counit_solve(&builtins::st2(f)).is_none()
        && counit_solve(&builtins::zero_coproduct(f)).is_none();
    outcome(ok, "PD2 has theta = (0, 1), nondegenerate; ST2 and zero coproduct have none")
}

fn coherence() -> Outcome {
    let mut rng = rng(10);
    for i in 0..50 {
        let (c1, c2) = random_pair(&mut rng);
        let glued = glue(&c1, &c2, None).unwrap();
        for a in [builtins::pd2(Field::Rationals), builtins::st2(Field::Rationals)] {
            let lhs = operation_from_diagram(&glued, &a).unwrap().matrix;
            let rhs = operation_from_diagram(&c2, &a)
                .unwrap()
                .matrix
                .compose(&operation_from_diagram(&c1, &a).unwrap().matrix);
            if lhs != rhs {
                return outcome(false, format!("pair {i}: {} # {}", c1.top_type(), c2.top_type()));
            }
        }
    }
    outcome(true, "50 glued pairs x PD2, ST2")
}

fn round_trip() -> Outcome {
    let mut files = 0;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let Ok(doc) = parse_document(&text) else { continue };
        let again = write_document(&doc);
        if parse_document(&again).as_ref() != Ok(&doc) || write_document(&parse_document(&again).unwrap()) != again {
            return outcome(false, format!("{} does not round-trip", path.display()));
        }
        files += 1;
    }
    let mut rng = rng(11);
    for i in 0..500 {
        let ok = match i % 3 {
            0 => {
                let g = random_fatgraph(&mut rng, 12);
                parse_fatgraph(&write_fatgraph(&g)).as_ref() == Ok(&g)
            }
            1 => {
                let ts = types(2, 3);
                let t = ts[rng.gen_range(0..ts.len())];
                let c = random_diagram(&mut rng, t);
                let back = parse_chord(&write_chord(&c));
                back.as_ref() == Ok(&c) && back.unwrap().marked_code() == c.marked_code()
            }
            _ => {
                let f = fields()[rng.gen_range(0..4)];
                let a = if rng.gen_bool(0.5) { builtins::pd2(f) } else { builtins::st2(f) };
                parse_frobenius(&write_frobenius(&a)).as_ref() == Ok(&a)
            }
        };
        if !ok {
            return outcome(false, format!("random value {i} does not round-trip"));
        }
    }
    let fuzzed = fuzz(100_000);
    outcome(
        true,
        format!("{files} fixtures, 500 random values, {fuzzed} fuzz inputs without a crash"),
    )
}

/// Random token streams and byte soup fed to the parser; any panic aborts
/// the suite.
fn fuzz(n: usize) -> usize {
    const WORDS: &[&str] = &[
        "fatgraph", "chord", "frob", "schedule", "v1", "pair", "vertex", "edge", "C", "G", "incoming", "order",
        "mark", "field", "Q", "Fp", "n", "basis", "m", "Delta", "->", "unit", "circle", "0", "1", "2", "3", "5",
        "-1", "1/2", "0/0", "99999999999999999999", "#", "x", "\n", "\n", "\n",
    ];
    let headers = ["fatgraph v1\n", "chord v1\n", "frob v1\n", "schedule v1\n", ""];
    let mut rng = rng(12);
    for _ in 0..n {
        let mut text = headers[rng.gen_range(0..headers.len())].to_string();
        if rng.gen_bool(0.1) {
            let len = rng.gen_range(0..64);
            let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            text.push_str(&String::from_utf8_lossy(&bytes));
        } else {
            for _ in 0..rng.gen_range(0..40) {
                text.push_str(WORDS[rng.gen_range(0..WORDS.len())]);
                text.push(' ');
            }
        }
        let _ = parse_document(&text);
    }
    n
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let checks: [(usize, &str, fn() -> Outcome); 4] = [
        (1, "boundary tracing partitions half-edges", boundary_partition),
        (2, "v(c) - sigma(c) = -chi", chi_identity),
        (3, "base-point diagrams have their type", gamma0_types),
        (4, "gluing adds genus q - 1", gluing_types),
    ];
    for (id, name, f) in checks {
        let (o, t) = timed(f);
        results.push((id, name, o, t));
    }
    let ((c5, c6), t) = timed(connectivity);
    results.push((5, "move graph connected within bound", c5, t));
    results.push((6, "moves preserve type", c6, t));
    let checks: [(usize, &str, fn() -> Outcome); 5] = [
        (7, "operator sewing identities", sewing),
        (8, "graded operations shift degree", degree_shift),
        (9, "counit exists for PD2 only", counit),
        (10, "diagram operations respect gluing", coherence),
        (11, "formats round-trip, parser survives fuzzing", round_trip),
    ];
    for (id, name, f) in checks {
        let (o, t) = timed(f);
        results.push((id, name, o, t));
    }

    let mut failed = 0;
    for (id, name, o, time) in &results {
        let in_time = o.limit.is_none_or(|l| *time <= l);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        let limit = o.limit.map(|l| format!(" (limit {l:?})")).unwrap_or_default();
        println!(
            "criterion {id:>2} {}: {name}: {} [{time:.2?}{limit}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
