//! `chordlab`: command-line front end.
//!
//! Exit status: 0 on success, 1 on a domain error or a failed check, 2 on
//! a usage error.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use chordlab::dot::{emit_dot, DotOptions};
use chordlab::format::{parse_document, parse_schedule, write_chord, Document};
use chordlab::moves::{explore, path_to_canonical};
use chordlab::par::{Executor, Parallelism};
use chordlab::tqft::{
    self, builtins, check_axioms, counit_solve, operation_from_diagram, verify_sweep, Field, FrobeniusAlgebra,
    SweepRange,
};
use chordlab::{canonical_gamma0, glue, ChordDiagram, TopType};

#[derive(Parser)]
#[command(name = "chordlab", version, about = "Fat graphs, chord diagrams and their TQFT operations")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a `fatgraph`, `chord`, `frob` or `schedule` file.
    Validate { input: PathBuf },
    /// Print the topological type.
    Type { input: PathBuf },
    /// List boundary cycles as half-edge sequences.
    Boundaries { input: PathBuf },
    /// Print the canonical code.
    Code {
        input: PathBuf,
        /// Include markings in the code.
        #[arg(long)]
        marked: bool,
    },
    /// Decide isomorphism; exits 1 when the inputs differ.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        marked: bool,
    },
    /// Glue the outgoing cycles of A to the incoming circles of B.
    Glue {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Write the base-point diagram of type (g;p,q).
    Gamma0 {
        g: u32,
        p: u32,
        q: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Explore the move graph of a type; exits 1 unless it is connected.
    Connect {
        /// Type as g,p,q.
        #[arg(long = "type", value_parser = parse_type)]
        top_type: TopType,
        #[arg(long)]
        max_edges: usize,
        /// Worker threads; 1 runs sequentially.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Find a move sequence from a diagram to the base point of its type.
    Path {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        slack: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Operations of the 2d TQFT.
    #[command(subcommand)]
    Tqft(TqftCommand),
    /// Render a chord diagram as Graphviz DOT.
    Dot {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Relabel canonically first.
        #[arg(long)]
        canon: bool,
    },
}

#[derive(Args)]
struct AlgebraArgs {
    /// Built-in algebra (`pd2`, `st2`, `zero`) or a `frob v1` file.
    #[arg(long, default_value = "pd2")]
    algebra: String,
    /// Field for built-in algebras: `Q` or `F<p>`.
    #[arg(long, default_value = "Q", value_parser = parse_field)]
    field: Field,
}

#[derive(Subcommand)]
enum TqftCommand {
    /// Matrix of the operation of type (g;p,q), or of a diagram's type.
    Op {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Take p, q and the genus from this chord diagram.
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// Check every gluing identity up to p,q,r,g1,g2; exits 1 on failure.
    Verify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value = "3,3,3,2,2")]
        range: SweepRange,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Solve for a counit.
    Counit {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Check the algebra axioms; exits 1 on failure.
    Axioms {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
}

fn parse_type(s: &str) -> Result<TopType, String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [g, p, q] => Ok(TopType::new(g, p, q)),
        _ => Err("expected g,p,q".into()),
    }
}

fn parse_field(s: &str) -> Result<Field, String> {
    if s == "Q" {
        return Ok(Field::Rationals);
    }
    let p: u64 = s
        .strip_prefix('F')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| format!("expected Q or F<prime>, got {s:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

enum Failure {
    /// Domain error: message for stderr.
    Domain(String),
    /// A check ran and failed; output has already been printed.
    Check,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
}

impl Ctx {
    /// Prints `value` in JSON mode, `text` otherwise.
    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
        let mut out = io::stdout().lock();
        let s = if self.json {
            serde_json::to_string_pretty(&value()).expect("JSON values serialize")
        } else {
            text()
        };
        let _ = writeln!(out, "{}", s.trim_end());
    }
}

fn read(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn read_chord(path: &Path) -> Result<ChordDiagram, Failure> {
    match read(path)? {
        Document::Chord(c) => Ok(c),
        _ => Err(Failure::Domain(format!("{}: expected a `chord v1` file", path.display()))),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Domain(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn kind(d: &Document) -> &'static str {
    match d {
        Document::FatGraph(_) => "fatgraph",
        Document::Chord(_) => "chord",
        Document::Frobenius(_) => "frob",
        Document::Schedule(_) => "schedule",
    }
}

fn algebra(args: &AlgebraArgs) -> Result<FrobeniusAlgebra, Failure> {
    if let Some(a) = builtins::by_name(&args.algebra, args.field) {
        return Ok(a);
    }
    match read(Path::new(&args.algebra))? {
        Document::Frobenius(a) => Ok(a),
        _ => Err(Failure::Domain(format!("{}: expected a `frob v1` file", args.algebra))),
    }
}

fn executor(jobs: Option<usize>) -> Executor {
    Executor::new(Parallelism::from_jobs(jobs))
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { json: cli.json };
    match cli.command {
        Command::Validate { input } => {
            let doc = read(&input)?;
            let detail = match &doc {
                Document::Chord(c) => Some(c.top_type().to_string()),
                Document::FatGraph(g) => Some(format!("{} vertices, {} edges", g.vertex_count(), g.edge_count())),
                Document::Frobenius(a) => Some(format!("dimension {} over {}", a.dim(), a.field())),
                Document::Schedule(_) => None,
            };
            ctx.emit(
                || format!("ok: {}{}", kind(&doc), detail.as_ref().map(|d| format!(" {d}")).unwrap_or_default()),
                || json!({ "valid": true, "kind": kind(&doc), "detail": detail }),
            );
        }
        Command::Type { input } => match read(&input)? {
            Document::Chord(c) => {
                let t = c.top_type();
                ctx.emit(
                    || t.to_string(),
                    || json!({ "type": t.to_string(), "genus": t.genus, "incoming": t.incoming, "outgoing": t.outgoing }),
                );
            }
            Document::FatGraph(g) => {
                let (genus, n) = g.topological_type()?;
                ctx.emit(
                    || format!("genus {genus}, {n} boundary cycles"),
                    || json!({ "genus": genus, "boundaries": n }),
                );
            }
            d => return Err(Failure::Domain(format!("{} files have no topological type", kind(&d)))),
        },
        Command::Boundaries { input } => {
            let (cycles, incoming): (Vec<Vec<usize>>, Option<usize>) = match read(&input)? {
                Document::Chord(c) => (
                    c.boundary_cycles().iter().map(|b| b.oriented_edges.clone()).collect(),
                    Some(c.incoming_count()),
                ),
                Document::FatGraph(g) => (g.boundary_cycles().into_iter().map(|b| b.oriented_edges).collect(), None),
                d => return Err(Failure::Domain(format!("{} files have no boundary cycles", kind(&d)))),
            };
            let role = |i: usize| match incoming {
                Some(k) if i < k => "in",
                Some(_) => "out",
                None => "cycle",
            };
            ctx.emit(
                || {
                    cycles
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            let hs: Vec<String> = c.iter().map(|h| h.to_string()).collect();
                            format!("{} {i}: {}\n", role(i), hs.join(" "))
                        })
                        .collect()
                },
                || {
                    json!({ "cycles": cycles.iter().enumerate()
                        .map(|(i, c)| json!({ "role": role(i), "half_edges": c }))
                        .collect::<Vec<_>>() })
                },
            );
        }
        Command::Code { input, marked } => {
            let code = match read(&input)? {
                Document::Chord(c) if marked => c.marked_code(),
                Document::Chord(c) => c.canonical_code(),
                Document::FatGraph(g) => g.canonical_code(),
                d => return Err(Failure::Domain(format!("{} files have no canonical code", kind(&d)))),
            };
            ctx.emit(|| code.to_hex(), || json!({ "code": code.to_hex() }));
        }
        Command::Iso { a, b, marked } => {
            let same = match (read(&a)?, read(&b)?) {
                (Document::Chord(x), Document::Chord(y)) if marked => x.marked_code() == y.marked_code(),
                (Document::Chord(x), Document::Chord(y)) => x.canonical_code() == y.canonical_code(),
                (Document::FatGraph(x), Document::FatGraph(y)) => x.is_isomorphic(&y),
                (x, y) => return Err(Failure::Domain(format!("cannot compare {} with {}", kind(&x), kind(&y)))),
            };
            ctx.emit(
                || if same { "isomorphic" } else { "not isomorphic" }.to_string(),
                || json!({ "isomorphic": same }),
            );
            if !same {
                return Err(Failure::Check);
            }
        }
        Command::Glue { a, b, output, schedule } => {
            let c1 = read_chord(&a)?;
            let c2 = read_chord(&b)?;
            let schedule = match schedule {
                Some(p) => {
                    let text = fs::read_to_string(&p).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
                    Some(parse_schedule(&text).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?)
                }
                None => None,
            };
            let c = glue(&c1, &c2, schedule.as_ref())?;
            write_result(&ctx, &c, output.as_deref())?;
        }
        Command::Gamma0 { g, p, q, output } => {
            let c = canonical_gamma0(g, p, q)?;
            write_result(&ctx, &c, output.as_deref())?;
        }
        Command::Connect {
            top_type,
            max_edges,
            jobs,
            report,
        } => {
            let e = explore(top_type, max_edges, &executor(jobs))?;
            let r = e.report();
            let text = serde_json::to_string_pretty(&r).expect("report serializes") + "\n";
            if let Some(p) = &report {
                fs::write(p, &text).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
            }
            ctx.emit(
                || {
                    let longest = r.witness_lengths.values().max().copied().unwrap_or(0);
                    format!(
                        "type {}: {} classes within {} edges, {} component(s), {} unreached, longest witness {}, {} moves checked, {} type violations",
                        r.top_type,
                        r.classes,
                        r.bound,
                        r.components,
                        r.unreached.len(),
                        longest,
                        r.moves_checked,
                        r.type_violations
                    )
                },
                || serde_json::to_value(&r).expect("report serializes"),
            );
            if r.components != 1 || r.type_violations != 0 {
                return Err(Failure::Check);
            }
        }
        Command::Path { input, slack, jobs } => {
            let c = read_chord(&input)?;
            let moves = path_to_canonical(&c, slack, &executor(jobs))?;
            let lines: Vec<String> = moves.iter().map(|m| m.to_string()).collect();
            ctx.emit(
                || {
                    let mut s = format!("{} moves\n", moves.len());
                    for l in &lines {
                        s.push_str(l);
                        s.push('\n');
                    }
                    s
                },
                || json!({ "length": moves.len(), "moves": moves, "described": lines }),
            );
        }
        Command::Tqft(cmd) => tqft_command(&ctx, cmd)?,
        Command::Dot { input, output, canon } => {
            let c = read_chord(&input)?;
            write_out(output.as_deref(), &emit_dot(&c, DotOptions { canon }))?;
        }
    }
    Ok(())
}

fn write_result(ctx: &Ctx, c: &ChordDiagram, output: Option<&Path>) -> Outcome {
    let text = write_chord(c);
    match output {
        Some(p) => {
            write_out(Some(p), &text)?;
            ctx.emit(
                || c.top_type().to_string(),
                || json!({ "type": c.top_type().to_string(), "edges": c.edge_count(), "output": p.display().to_string() }),
            );
        }
        None => write_out(None, &text)?,
    }
    Ok(())
}

fn tqft_command(ctx: &Ctx, cmd: TqftCommand) -> Outcome {
    match cmd {
        TqftCommand::Op {
            algebra: args,
            p,
            q,
            genus,
            diagram,
        } => {
            let a = algebra(&args)?;
            let op = match diagram {
                Some(path) => operation_from_diagram(&read_chord(&path)?, &a)?,
                None => tqft::mu(&a, p, q, genus)?,
            };
            ctx.emit(
                || {
                    let shift = op.degree_shift.map(|s| format!(", degree shift {s}")).unwrap_or_default();
                    format!(
                        "mu({};{},{}) {}x{}{shift}\n{}",
                        op.genus,
                        op.incoming,
                        op.outgoing,
                        op.matrix.rows(),
                        op.matrix.cols(),
                        op.matrix
                    )
                },
                || {
                    json!({
                        "field": a.field().to_string(),
                        "basis": a.names(),
                        "genus": op.genus,
                        "incoming": op.incoming,
                        "outgoing": op.outgoing,
                        "degree_shift": op.degree_shift,
                        "matrix": op.matrix,
                    })
                },
            );
        }
        TqftCommand::Verify {
            algebra: args,
            range,
            jobs,
        } => {
            let a = algebra(&args)?;
            let checks = verify_sweep(&a, range, &executor(jobs))?;
            let failed: Vec<_> = checks.iter().filter(|c| !c.holds).collect();
            ctx.emit(
                || {
                    let mut s = format!(
                        "{} of {} gluing identities hold over {}\n",
                        checks.len() - failed.len(),
                        checks.len(),
                        a.field()
                    );
                    for c in &failed {
                        s.push_str(&format!("FAIL p={} q={} r={} g1={} g2={}\n", c.p, c.q, c.r, c.g1, c.g2));
                    }
                    s
                },
                || {
                    json!({
                        "field": a.field().to_string(),
                        "all_pass": failed.is_empty(),
                        "total": checks.len(),
                        "checks": checks.iter().map(|c| {
                            let mut v = json!({ "p": c.p, "q": c.q, "r": c.r, "g1": c.g1, "g2": c.g2, "holds": c.holds });
                            if !c.holds {
                                v["difference"] = serde_json::to_value(&c.difference).expect("matrix serializes");
                            }
                            v
                        }).collect::<Vec<_>>(),
                    })
                },
            );
            if !failed.is_empty() {
                return Err(Failure::Check);
            }
        }
        TqftCommand::Counit { algebra: args } => {
            let a = algebra(&args)?;
            let c = counit_solve(&a);
            ctx.emit(
                || match &c {
                    Some(c) => {
                        let theta: Vec<String> = c.theta.iter().map(tqft::scalar_text).collect();
                        format!(
                            "counit ({}), pairing {}",
                            theta.join(", "),
                            if c.nondegenerate { "nondegenerate" } else { "degenerate" }
                        )
                    }
                    None => "no counit".to_string(),
                },
                || json!({ "field": a.field().to_string(), "counit": c }),
            );
        }
        TqftCommand::Axioms { algebra: args } => {
            let a = algebra(&args)?;
            let r = check_axioms(&a);
            ctx.emit(
                || {
                    r.checks
                        .iter()
                        .map(|c| match &c.witness {
                            None => format!("pass {}\n", c.axiom),
                            Some(w) => format!("FAIL {} at ({})\n", c.axiom, w.join(", ")),
                        })
                        .collect()
                },
                || json!({ "field": a.field().to_string(), "all_passed": r.all_passed(), "checks": r.checks }),
            );
            if !r.all_passed() {
                return Err(Failure::Check);
            }
        }
    }
    Ok(())
}

fn color_enabled() -> bool {
    match std::env::var("CHORDLAB_COLOR").as_deref() {
        Ok("never") => false,
        _ => io::stderr().is_terminal(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            let prefix = if color_enabled() { "\x1b[31merror\x1b[0m" } else { "error" };
            eprintln!("{prefix}: {msg}");
            ExitCode::from(1)
        }
    }
}
