//! Line-oriented text formats.
//!
//! Every document starts with a tag line (`fatgraph v1`, `chord v1`,
//! `frob v1`, `schedule v1`) followed by one record per line. `#` starts a
//! comment. Writers emit records in a fixed sorted order, so equal values
//! give byte-identical text.
//!
//! ```text
//! chord v1
//! pair 0 1
//! pair 2 3
//! pair 4 5
//! vertex 0 4 3
//! vertex 1 2 5
//! edge 0 C
//! edge 1 C
//! edge 2 G
//! incoming 1
//! order 0 1 2
//! mark 0 0
//! mark 1 1
//! mark 2 3
//! ```
//!
//! `edge` ids number edges by smallest half-edge; cycle ids in `order` and
//! `mark` number boundary cycles by smallest half-edge.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::chord::{ChordDiagram, ChordError, EdgeLabel, GlueSchedule, RawChord};
use crate::fatgraph::{FatGraph, FatGraphError, RawFatGraph};
use crate::tqft::{parse_scalar, scalar_text, Field, FrobeniusAlgebra, Grading, TqftError};

/// Largest basis accepted in `frob v1` input.
pub const MAX_BASIS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error(transparent)]
    Graph(#[from] FatGraphError),
    #[error(transparent)]
    Chord(#[from] ChordError),
    #[error(transparent)]
    Algebra(#[from] TqftError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("line {line}: {error}")]
    Validation { line: usize, error: DomainError },
}

impl FormatError {
    pub fn line(&self) -> usize {
        match self {
            FormatError::Syntax { line, .. } | FormatError::Validation { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    FatGraph(FatGraph),
    Chord(ChordDiagram),
    Frobenius(FrobeniusAlgebra),
    Schedule(GlueSchedule),
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Debug)]
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    /// Column just past the last token, for "expected more" errors.
    end: usize,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        let mut column = 0;
        for (ci, (bi, ch)) in body.char_indices().enumerate() {
            column = ci + 1;
            if ch.is_whitespace() {
                if let Some((s, c)) = start.take() {
                    tokens.push(Token { text: &body[s..bi], column: c });
                }
            } else if start.is_none() {
                start = Some((bi, ci + 1));
            }
        }
        if let Some((s, c)) = start {
            tokens.push(Token { text: &body[s..], column: c });
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: i + 1,
                tokens,
                end: column + 1,
            });
        }
    }
    out
}

fn syntax(line: &Line, column: usize, expected: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line: line.number,
        column,
        expected: expected.into(),
    }
}

struct Cursor<'l, 'a> {
    line: &'l Line<'a>,
    pos: usize,
}

impl<'l, 'a> Cursor<'l, 'a> {
    fn new(line: &'l Line<'a>) -> Self {
        Cursor { line, pos: 1 }
    }

    fn column(&self) -> usize {
        self.line.tokens.get(self.pos).map_or(self.line.end, |t| t.column)
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, FormatError> {
        let t = self
            .line
            .tokens
            .get(self.pos)
            .copied()
            .ok_or_else(|| syntax(self.line, self.line.end, what))?;
        self.pos += 1;
        Ok(t)
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, FormatError> {
        let t = self.next(what)?;
        t.text.parse().map_err(|_| syntax(self.line, t.column, what))
    }

    fn literal(&mut self, lit: &str) -> Result<(), FormatError> {
        let t = self.next(&format!("`{lit}`"))?;
        if t.text != lit {
            return Err(syntax(self.line, t.column, format!("`{lit}`")));
        }
        Ok(())
    }

    fn rest_numbers(&mut self, what: &str) -> Result<Vec<usize>, FormatError> {
        let mut v = Vec::new();
        while self.pos < self.line.tokens.len() {
            v.push(self.number(what)?);
        }
        Ok(v)
    }

    fn finish(&self) -> Result<(), FormatError> {
        match self.line.tokens.get(self.pos) {
            Some(t) => Err(syntax(self.line, t.column, "end of line")),
            None => Ok(()),
        }
    }

    fn keyword(&self) -> &'a str {
        self.line.tokens[0].text
    }
}

fn header<'l, 'a>(ls: &'l [Line<'a>], tag: &str) -> Result<&'l [Line<'a>], FormatError> {
    let Some(first) = ls.first() else {
        return Err(FormatError::Syntax {
            line: 1,
            column: 1,
            expected: format!("`{tag}` header"),
        });
    };
    let words: Vec<&str> = first.tokens.iter().map(|t| t.text).collect();
    let want: Vec<&str> = tag.split(' ').collect();
    if words != want {
        return Err(syntax(first, first.tokens[0].column, format!("`{tag}` header")));
    }
    Ok(&ls[1..])
}

/// Parses any tagged document.
pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let ls = lines(text);
    let tag: Vec<&str> = ls.first().map(|l| l.tokens.iter().map(|t| t.text).collect()).unwrap_or_default();
    match tag[..] {
        ["fatgraph", "v1"] => parse_fatgraph(text).map(Document::FatGraph),
        ["chord", "v1"] => parse_chord(text).map(Document::Chord),
        ["frob", "v1"] => parse_frobenius(text).map(Document::Frobenius),
        ["schedule", "v1"] => parse_schedule(text).map(Document::Schedule),
        _ => Err(match ls.first() {
            Some(l) => syntax(l, 1, "a format header (`fatgraph v1`, `chord v1`, `frob v1` or `schedule v1`)"),
            None => FormatError::Syntax {
                line: 1,
                column: 1,
                expected: "a format header".into(),
            },
        }),
    }
}

/// Graph records with the line each came from.
#[derive(Default)]
struct GraphRecords {
    raw: RawFatGraph,
    pair_lines: Vec<usize>,
    vertex_lines: Vec<usize>,
}

impl GraphRecords {
    fn take(&mut self, cur: &mut Cursor) -> Result<bool, FormatError> {
        match cur.keyword() {
            "pair" => {
                let a = cur.number("half-edge id")?;
                let b = cur.number("half-edge id")?;
                cur.finish()?;
                self.raw.pairs.push((a, b));
                self.pair_lines.push(cur.line.number);
            }
            "vertex" => {
                let hs = cur.rest_numbers("half-edge id")?;
                if hs.is_empty() {
                    return Err(syntax(cur.line, cur.column(), "half-edge id"));
                }
                self.raw.vertices.push(hs);
                self.vertex_lines.push(cur.line.number);
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Best line for a graph error.
    fn locate(&self, e: &FatGraphError, fallback: usize) -> usize {
        let half_edge_line = |h: usize| {
            self.raw
                .vertices
                .iter()
                .position(|v| v.contains(&h))
                .map(|i| self.vertex_lines[i])
                .or_else(|| {
                    self.raw
                        .pairs
                        .iter()
                        .position(|&(a, b)| a == h || b == h)
                        .map(|i| self.pair_lines[i])
                })
        };
        match e {
            FatGraphError::FixedPointInPairing(h) => self
                .raw
                .pairs
                .iter()
                .position(|&(a, b)| a == *h && b == *h)
                .map(|i| self.pair_lines[i]),
            FatGraphError::ValenceTooLow { valence, .. } => self
                .raw
                .vertices
                .iter()
                .position(|v| v.len() == *valence)
                .map(|i| self.vertex_lines[i]),
            FatGraphError::InconsistentTables(msg) => msg
                .split_whitespace()
                .nth(1)
                .and_then(|w| w.parse().ok())
                .and_then(half_edge_line),
            _ => None,
        }
        .unwrap_or(fallback)
    }

    fn validate(&self, header_line: usize) -> Result<FatGraph, FormatError> {
        FatGraph::validate(&self.raw).map_err(|e| FormatError::Validation {
            line: self.locate(&e, header_line),
            error: e.into(),
        })
    }
}

fn unknown(cur: &Cursor, allowed: &str) -> FormatError {
    syntax(cur.line, cur.line.tokens[0].column, format!("one of {allowed}"))
}

pub fn parse_fatgraph(text: &str) -> Result<FatGraph, FormatError> {
    let ls = lines(text);
    let body = header(&ls, "fatgraph v1")?;
    let mut g = GraphRecords::default();
    for line in body {
        let mut cur = Cursor::new(line);
        if !g.take(&mut cur)? {
            return Err(unknown(&cur, "`pair`, `vertex`"));
        }
    }
    g.validate(ls[0].number)
}

pub fn parse_chord(text: &str) -> Result<ChordDiagram, FormatError> {
    let ls = lines(text);
    let body = header(&ls, "chord v1")?;
    let head = ls[0].number;
    let mut g = GraphRecords::default();
    let mut labels: BTreeMap<usize, (EdgeLabel, usize)> = BTreeMap::new();
    let mut incoming: Option<(usize, usize)> = None;
    let mut order: Option<(Vec<usize>, usize)> = None;
    let mut marks: Vec<(usize, usize, usize)> = Vec::new();
    for line in body {
        let mut cur = Cursor::new(line);
        if g.take(&mut cur)? {
            continue;
        }
        match cur.keyword() {
            "edge" => {
                let id: usize = cur.number("edge id")?;
                let t = cur.next("`C` or `G`")?;
                let label = match t.text {
                    "C" => EdgeLabel::Circular,
                    "G" => EdgeLabel::Ghost,
                    _ => return Err(syntax(line, t.column, "`C` or `G`")),
                };
                cur.finish()?;
                if labels.insert(id, (label, line.number)).is_some() {
                    return Err(syntax(line, line.tokens[1].column, "an edge id not already labeled"));
                }
            }
            "incoming" => {
                let k = cur.number("incoming count")?;
                cur.finish()?;
                if incoming.replace((k, line.number)).is_some() {
                    return Err(syntax(line, 1, "a single `incoming` record"));
                }
            }
            "order" => {
                let ids = cur.rest_numbers("cycle id")?;
                if order.replace((ids, line.number)).is_some() {
                    return Err(syntax(line, 1, "a single `order` record"));
                }
            }
            "mark" => {
                let c = cur.number("cycle id")?;
                let h = cur.number("half-edge id")?;
                cur.finish()?;
                marks.push((c, h, line.number));
            }
            _ => return Err(unknown(&cur, "`pair`, `vertex`, `edge`, `incoming`, `order`, `mark`")),
        }
    }
    let graph = g.validate(head)?;
    let e = graph.edge_count();
    if let Some((&id, &(_, l))) = labels.iter().find(|(&id, _)| id >= e) {
        return Err(FormatError::Validation {
            line: l,
            error: ChordError::NoSuchEdge(id).into(),
        });
    }
    if labels.len() != e {
        return Err(FormatError::Validation {
            line: head,
            error: ChordError::LabelCount {
                expected: e,
                found: labels.len(),
            }
            .into(),
        });
    }
    let (incoming, incoming_line) = incoming.ok_or_else(|| FormatError::Syntax {
        line: head,
        column: 1,
        expected: "an `incoming` record".into(),
    })?;
    let (order, order_line) = order.ok_or_else(|| FormatError::Syntax {
        line: head,
        column: 1,
        expected: "an `order` record".into(),
    })?;
    let raw = RawChord {
        graph: g.raw.clone(),
        labels: labels.values().map(|&(l, _)| l).collect(),
        incoming,
        order: order.clone(),
        marks: marks.iter().map(|&(c, h, _)| (c, h)).collect(),
    };
    ChordDiagram::validate(&raw).map_err(|err| {
        let mark_line = |cycle: usize| marks.iter().find(|m| m.0 == cycle).map(|m| m.2);
        let edge_line = |edge: usize| labels.get(&edge).map(|&(_, l)| l);
        let line = match &err {
            ChordError::Graph(ge) => Some(g.locate(ge, head)),
            ChordError::GhostCycle { edge } | ChordError::IncomingNotBoundaryCycle { edge } => edge_line(*edge),
            ChordError::BadMarking { cycle, .. } => mark_line(*cycle).or(Some(order_line)),
            ChordError::BadBoundaryOrder(_) | ChordError::NoCircularEdgeOnCycle { .. } => Some(order_line),
            ChordError::NoIncomingCircle | ChordError::NoOutgoingCycle => Some(incoming_line),
            _ => None,
        };
        FormatError::Validation {
            line: line.unwrap_or(head),
            error: err.into(),
        }
    })
}

pub fn parse_frobenius(text: &str) -> Result<FrobeniusAlgebra, FormatError> {
    let ls = lines(text);
    let body = header(&ls, "frob v1")?;
    let head = ls[0].number;
    let mut field: Option<Field> = None;
    let mut n: Option<i64> = None;
    let mut basis: Vec<(String, Option<i64>, usize)> = Vec::new();
    let mut records: Vec<&Line> = Vec::new();
    for line in body {
        let mut cur = Cursor::new(line);
        match cur.keyword() {
            "field" => {
                let t = cur.next("`Q` or `Fp`")?;
                let f = match t.text {
                    "Q" => Field::Rationals,
                    "Fp" => {
                        let p: u64 = cur.number("a prime")?;
                        Field::prime(p).map_err(|e| FormatError::Validation {
                            line: line.number,
                            error: e.into(),
                        })?
                    }
                    _ => return Err(syntax(line, t.column, "`Q` or `Fp`")),
                };
                cur.finish()?;
                if field.replace(f).is_some() {
                    return Err(syntax(line, 1, "a single `field` record"));
                }
            }
            "n" => {
                let v = cur.number("ambient dimension")?;
                cur.finish()?;
                if n.replace(v).is_some() {
                    return Err(syntax(line, 1, "a single `n` record"));
                }
            }
            "basis" => {
                let name = cur.next("basis name")?.text.to_string();
                let deg = if cur.pos < line.tokens.len() {
                    Some(cur.number("degree")?)
                } else {
                    None
                };
                cur.finish()?;
                if basis.iter().any(|b| b.0 == name) {
                    return Err(syntax(line, line.tokens[1].column, "a basis name not already used"));
                }
                if basis.len() == MAX_BASIS {
                    return Err(syntax(line, 1, format!("at most {MAX_BASIS} basis elements")));
                }
                basis.push((name, deg, line.number));
            }
            "m" | "Delta" | "unit" => records.push(line),
            _ => return Err(unknown(&cur, "`field`, `n`, `basis`, `m`, `Delta`, `unit`")),
        }
    }
    let field = field.ok_or_else(|| FormatError::Syntax {
        line: head,
        column: 1,
        expected: "a `field` record".into(),
    })?;
    let graded = basis.iter().filter(|b| b.1.is_some()).count();
    let grading = match (n, graded) {
        (None, 0) => None,
        (Some(n), k) if k == basis.len() => Some(Grading {
            degrees: basis.iter().map(|b| b.1.unwrap()).collect(),
            n,
        }),
        _ => {
            let line = basis.iter().find(|b| b.1.is_none() == n.is_some()).map_or(head, |b| b.2);
            return Err(FormatError::Syntax {
                line,
                column: 1,
                expected: "degrees on every basis element together with an `n` record, or neither".into(),
            });
        }
    };
    let names: Vec<String> = basis.iter().map(|b| b.0.clone()).collect();
    let mut a = FrobeniusAlgebra::new(field, names, grading).map_err(|e| FormatError::Validation {
        line: head,
        error: e.into(),
    })?;
    let d = a.dim();
    let mut seen_unit = false;
    let mut filled = std::collections::BTreeSet::new();
    for line in records {
        let mut cur = Cursor::new(line);
        let index = |cur: &mut Cursor| -> Result<usize, FormatError> {
            let col = cur.column();
            let i: usize = cur.number("basis index")?;
            if i >= d {
                return Err(syntax(cur.line, col, format!("basis index below {d}")));
            }
            Ok(i)
        };
        let coeff = |cur: &mut Cursor| -> Result<_, FormatError> {
            let t = cur.next("coefficient")?;
            parse_scalar(field, t.text).map_err(|_| syntax(cur.line, t.column, format!("a coefficient in {field}")))
        };
        let kw = cur.keyword();
        match kw {
            "m" | "Delta" => {
                let (i, j, k) = if kw == "m" {
                    let i = index(&mut cur)?;
                    let j = index(&mut cur)?;
                    cur.literal("->")?;
                    (i, j, index(&mut cur)?)
                } else {
                    let i = index(&mut cur)?;
                    cur.literal("->")?;
                    let j = index(&mut cur)?;
                    (i, j, index(&mut cur)?)
                };
                let c = coeff(&mut cur)?;
                cur.finish()?;
                if !filled.insert((kw, i, j, k)) {
                    return Err(syntax(line, 1, "each structure constant at most once"));
                }
                if kw == "m" {
                    a.set_product(i, j, k, c).expect("indices checked");
                } else {
                    a.set_coproduct(i, j, k, c).expect("indices checked");
                }
            }
            _ => {
                let mut u = Vec::with_capacity(d);
                for _ in 0..d {
                    u.push(coeff(&mut cur)?);
                }
                cur.finish()?;
                if seen_unit {
                    return Err(syntax(line, 1, "a single `unit` record"));
                }
                seen_unit = true;
                a.set_unit(u).expect("length checked");
            }
        }
    }
    if !seen_unit {
        return Err(FormatError::Syntax {
            line: head,
            column: 1,
            expected: "a `unit` record".into(),
        });
    }
    Ok(a)
}

pub fn parse_schedule(text: &str) -> Result<GlueSchedule, FormatError> {
    let ls = lines(text);
    let body = header(&ls, "schedule v1")?;
    let mut offsets = Vec::new();
    for line in body {
        let mut cur = Cursor::new(line);
        if cur.keyword() != "circle" {
            return Err(unknown(&cur, "`circle`"));
        }
        offsets.push(cur.rest_numbers("offset")?);
    }
    Ok(GlueSchedule { offsets })
}

fn graph_records(out: &mut String, raw: &RawFatGraph) {
    let mut pairs: Vec<(usize, usize)> = raw.pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    pairs.sort_unstable();
    for (a, b) in pairs {
        out.push_str(&format!("pair {a} {b}\n"));
    }
    let mut verts: Vec<Vec<usize>> = raw
        .vertices
        .iter()
        .map(|v| {
            let m = v.iter().enumerate().min_by_key(|&(_, h)| h).map_or(0, |(i, _)| i);
            let mut r = v.clone();
            r.rotate_left(m);
            r
        })
        .collect();
    verts.sort_unstable();
    for v in verts {
        let hs: Vec<String> = v.iter().map(|h| h.to_string()).collect();
        out.push_str(&format!("vertex {}\n", hs.join(" ")));
    }
}

pub fn write_fatgraph(g: &FatGraph) -> String {
    let mut out = String::from("fatgraph v1\n");
    graph_records(&mut out, &g.to_raw());
    out
}

pub fn write_chord(c: &ChordDiagram) -> String {
    let raw = c.to_raw();
    let mut out = String::from("chord v1\n");
    graph_records(&mut out, &raw.graph);
    for (e, l) in raw.labels.iter().enumerate() {
        let t = match l {
            EdgeLabel::Circular => "C",
            EdgeLabel::Ghost => "G",
        };
        out.push_str(&format!("edge {e} {t}\n"));
    }
    out.push_str(&format!("incoming {}\n", raw.incoming));
    let ids: Vec<String> = raw.order.iter().map(|i| i.to_string()).collect();
    out.push_str(&format!("order {}\n", ids.join(" ")));
    for (cyc, h) in raw.marks {
        out.push_str(&format!("mark {cyc} {h}\n"));
    }
    out
}

pub fn write_frobenius(a: &FrobeniusAlgebra) -> String {
    let mut out = format!("frob v1\nfield {}\n", a.field());
    if let Some(g) = a.grading() {
        out.push_str(&format!("n {}\n", g.n));
    }
    for (i, name) in a.names().iter().enumerate() {
        match a.grading() {
            Some(g) => out.push_str(&format!("basis {name} {}\n", g.degrees[i])),
            None => out.push_str(&format!("basis {name}\n")),
        }
    }
    let d = a.dim();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let c = a.product(i, j, k);
                if !c.is_zero() {
                    out.push_str(&format!("m {i} {j} -> {k} {}\n", scalar_text(c)));
                }
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let c = a.coproduct(i, j, k);
                if !c.is_zero() {
                    out.push_str(&format!("Delta {i} -> {j} {k} {}\n", scalar_text(c)));
                }
            }
        }
    }
    let u: Vec<String> = a.unit().iter().map(scalar_text).collect();
    out.push_str(&format!("unit {}\n", u.join(" ")));
    out
}

pub fn write_schedule(s: &GlueSchedule) -> String {
    let mut out = String::from("schedule v1\n");
    for row in &s.offsets {
        let v: Vec<String> = row.iter().map(|o| o.to_string()).collect();
        if v.is_empty() {
            out.push_str("circle\n");
        } else {
            out.push_str(&format!("circle {}\n", v.join(" ")));
        }
    }
    out
}

pub fn write_document(d: &Document) -> String {
    match d {
        Document::FatGraph(g) => write_fatgraph(g),
        Document::Chord(c) => write_chord(c),
        Document::Frobenius(a) => write_frobenius(a),
        Document::Schedule(s) => write_schedule(s),
    }
}
