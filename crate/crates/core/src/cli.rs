// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Text format for decorated graphs, DOT export and the command-line front end.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::decoration::{validate_decoration, Decoration, DecorationError, Violation};
use crate::graph::{GraphError, TrivalentGraph};
use crate::invariants::{classify, equivalent, normal_form, InvariantError};
use crate::moves::{
    apply_script, ih_apply, ih_graph, ih_plan, replay_graph, stamp_script, IhMove, MoveError, MoveScript, Pairing, Step,
};
use crate::oracle::{check_classification, move_orbit, OracleError, OrbitBounds};

/// A diagnostic for a decorated-graph file. `col` is 0 for semantic errors
/// that apply to a whole statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "error",
        };
        if self.col > 0 {
            write!(f, "{}:{}: {kind}: {}", self.line, self.col, self.message)
        } else {
            write!(f, "{}: {kind}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Default)]
struct Lines {
    vertex: BTreeMap<String, usize>,
    half_edge: BTreeMap<String, usize>,
    alpha: BTreeMap<String, usize>,
    edge: BTreeMap<String, usize>,
    boundary: usize,
    last: usize,
}

impl Lines {
    fn for_graph_error(&self, e: &GraphError) -> usize {
        let name = match e {
            GraphError::InvalidName(n)
            | GraphError::DuplicateHalfEdge(n)
            | GraphError::HalfEdgeInTwoVertices(n)
            | GraphError::SelfPairing(n)
            | GraphError::DanglingPair(n)
            | GraphError::DoublePairing(n) => n.as_str(),
            GraphError::DuplicateVertex(n) => return self.vertex.get(n).copied().unwrap_or(self.last),
            GraphError::BadBoundaryOrder(_) => return self.boundary.max(1),
            _ => return self.last,
        };
        self.edge
            .get(name)
            .or_else(|| self.half_edge.get(name))
            .copied()
            .unwrap_or(self.last)
    }

    fn for_violation(&self, v: &Violation) -> usize {
        let found = match v {
            Violation::VertexSum { vertex, .. } | Violation::BetaCongruence { vertex, .. } => self.vertex.get(vertex),
            Violation::EdgeSum { x, .. } => self.edge.get(x),
            Violation::VertexSumImpossible { vertices } => vertices.first().and_then(|n| self.vertex.get(n)),
            Violation::Shape => None,
        };
        found.copied().unwrap_or(self.last)
    }
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        kind: ParseErrorKind::Syntax,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col: 0,
        kind: ParseErrorKind::Semantic,
        message: message.into(),
    }
}

/// Splits a line into words with their 1-based starting columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, w)| (line[..s].chars().count() + 1, w))
        .collect()
}

/// Parses a decorated-graph file. The decoration is present when the file
/// has any `alpha` statement. β sources without a statement get the lift 0
/// towards their first neighbour in token order; the rest is completed
/// through the vertex congruence.
pub fn parse_decorated_graph(text: &str) -> Result<(TrivalentGraph, Option<Decoration>), ParseError> {
    let mut vertices: Vec<(String, [String; 3])> = Vec::new();
    let mut pairing: Vec<(String, String)> = Vec::new();
    let mut boundary: Option<Vec<String>> = None;
    let mut alpha: BTreeMap<String, i64> = BTreeMap::new();
    let mut beta: Vec<(usize, String, String, String, i64)> = Vec::new();
    let mut lines = Lines::default();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let ws = words(content);
        if ws.is_empty() {
            continue;
        }
        lines.last = line;
        let end_col = content.chars().count() + 1;
        let token = |k: usize, what: &str| -> Result<&str, ParseError> {
            let (col, w) = ws
                .get(k)
                .copied()
                .ok_or_else(|| syntax(line, end_col, format!("expected {what}")))?;
            if crate::graph::is_valid_token(w) {
                Ok(w)
            } else {
                Err(syntax(line, col, format!("expected {what}, found {w:?}")))
            }
        };
        let integer = |k: usize| -> Result<i64, ParseError> {
            let (col, w) = ws
                .get(k)
                .copied()
                .ok_or_else(|| syntax(line, end_col, "expected an integer"))?;
            w.parse::<i64>()
                .map_err(|_| syntax(line, col, format!("expected an integer, found {w:?}")))
        };
        let arity = |n: usize| -> Result<(), ParseError> {
            match ws.get(n) {
                Some(&(col, w)) => Err(syntax(line, col, format!("unexpected {w:?}"))),
                None => Ok(()),
            }
        };
        match ws[0].1 {
            "vertex" => {
                let name = token(1, "a vertex name")?;
                match ws.get(2) {
                    Some(&(_, ":")) => {}
                    Some(&(col, w)) => return Err(syntax(line, col, format!("expected ':', found {w:?}"))),
                    None => return Err(syntax(line, end_col, "expected ':'")),
                }
                let hs = [
                    token(3, "a half-edge")?,
                    token(4, "a half-edge")?,
                    token(5, "a half-edge")?,
                ];
                arity(6)?;
                lines.vertex.insert(name.to_string(), line);
                for h in hs {
                    lines.half_edge.insert(h.to_string(), line);
                }
                vertices.push((name.to_string(), hs.map(str::to_string)));
            }
            "edge" => {
                let a = token(1, "a half-edge")?;
                let b = token(2, "a half-edge")?;
                arity(3)?;
                lines.edge.insert(a.to_string(), line);
                lines.edge.insert(b.to_string(), line);
                pairing.push((a.to_string(), b.to_string()));
            }
            "boundary" => {
                if boundary.is_some() {
                    return Err(syntax(line, ws[0].0, "duplicate boundary statement"));
                }
                let names = (1..ws.len())
                    .map(|k| token(k, "a half-edge").map(str::to_string))
                    .collect::<Result<Vec<_>, _>>()?;
                lines.boundary = line;
                boundary = Some(names);
            }
            "alpha" => {
                let h = token(1, "a half-edge")?;
                let v = integer(2)?;
                arity(3)?;
                if alpha.insert(h.to_string(), v).is_some() {
                    return Err(semantic(line, format!("duplicate alpha for {h}")));
                }
                lines.alpha.insert(h.to_string(), line);
            }
            "beta" => {
                let v = token(1, "a vertex name")?;
                let from = token(2, "a half-edge")?;
                let to = token(3, "a half-edge")?;
                let val = integer(4)?;
                arity(5)?;
                beta.push((line, v.to_string(), from.to_string(), to.to_string(), val));
            }
            other => {
                return Err(syntax(
                    line,
                    ws[0].0,
                    format!("expected vertex, edge, boundary, alpha or beta, found {other:?}"),
                ))
            }
        }
    }

    let g = TrivalentGraph::from_parts(vertices, pairing, boundary)
        .map_err(|e| semantic(lines.for_graph_error(&e), e.to_string()))?;
    if alpha.is_empty() {
        if let Some(&(line, ..)) = beta.first() {
            return Err(semantic(line, "beta statements need alpha values"));
        }
        return Ok((g, None));
    }
    for (h, &line) in &lines.alpha {
        if g.index_of(h).is_none() {
            return Err(semantic(line, format!("alpha for unknown half-edge {h}")));
        }
    }
    for v in 0..g.vertex_count() {
        let missing: Vec<&str> = g
            .vertex(v)
            .into_iter()
            .map(|h| g.name(h))
            .filter(|h| !alpha.contains_key(*h))
            .collect();
        if !missing.is_empty() {
            let name = g.vertex_name(v);
            return Err(semantic(
                lines.vertex.get(name).copied().unwrap_or(lines.last),
                format!("vertex sum at {name} undetermined: no alpha for {}", missing.join(", ")),
            ));
        }
    }
    let mut bmap: BTreeMap<(String, String), i64> = BTreeMap::new();
    for (line, v, from, to, val) in &beta {
        let vi = g
            .vertex_index(v)
            .ok_or_else(|| semantic(*line, format!("unknown vertex {v}")))?;
        let t = g.vertex(vi);
        for h in [from, to] {
            match g.index_of(h) {
                Some(i) if t.contains(&i) => {}
                _ => return Err(semantic(*line, format!("{h} is not at vertex {v}"))),
            }
        }
        if from == to {
            return Err(semantic(*line, "beta needs two distinct half-edges"));
        }
        if bmap.insert((from.clone(), to.clone()), *val).is_some() {
            return Err(semantic(*line, format!("duplicate beta {from} {to}")));
        }
    }
    for x in 0..g.half_edge_count() {
        let [o0, o1] = g.others(x);
        let has = [o0, o1]
            .iter()
            .any(|&o| bmap.contains_key(&(g.name(x).to_string(), g.name(o).to_string())));
        if !has {
            bmap.insert((g.name(x).to_string(), g.name(o0).to_string()), 0);
        }
    }
    let dec = Decoration::new(&g, &alpha, &bmap).map_err(|e| {
        let line = match &e {
            DecorationError::MissingAlpha(h) => lines.half_edge.get(h).copied(),
            DecorationError::InconsistentBeta(h) => beta.iter().find(|b| &b.2 == h).map(|b| b.0),
            _ => None,
        };
        semantic(line.unwrap_or(lines.last), e.to_string())
    })?;
    if let Err(vs) = validate_decoration(&g, &dec) {
        let v = &vs[0];
        return Err(semantic(lines.for_violation(v), v.to_string()));
    }
    Ok((g, Some(dec)))
}

/// Canonical text: vertices, edges, the boundary in declared order, α, then
/// all six β per vertex as least nonnegative lifts.
pub fn serialize(g: &TrivalentGraph, dec: Option<&Decoration>) -> String {
    let mut out = String::new();
    for v in 0..g.vertex_count() {
        let [a, b, c] = g.vertex(v).map(|h| g.name(h));
        out.push_str(&format!("vertex {} : {a} {b} {c}\n", g.vertex_name(v)));
    }
    for (a, b) in g.internal_edges() {
        out.push_str(&format!("edge {} {}\n", g.name(a), g.name(b)));
    }
    out.push_str("boundary");
    for &h in g.boundary() {
        out.push(' ');
        out.push_str(g.name(h));
    }
    out.push('\n');
    if let Some(dec) = dec {
        let dec = dec.canonical();
        for h in 0..g.half_edge_count() {
            out.push_str(&format!("alpha {} {}\n", g.name(h), dec.alpha(h)));
        }
        for v in 0..g.vertex_count() {
            for x in g.vertex(v) {
                for y in g.others(x) {
                    let b = dec.beta(g, x, y).expect("same vertex");
                    out.push_str(&format!("beta {} {} {} {b}\n", g.vertex_name(v), g.name(x), g.name(y)));
                }
            }
        }
    }
    out
}

/// DOT rendering: α on half-edge ends, β at vertex corners.
pub fn to_dot(g: &TrivalentGraph, dec: Option<&Decoration>) -> String {
    let dec = dec.map(Decoration::canonical);
    let mut out = String::from("graph trivalent {\n  node [shape=circle];\n");
    for v in 0..g.vertex_count() {
        let name = g.vertex_name(v);
        let mut label = name.to_string();
        if let Some(d) = &dec {
            for x in g.vertex(v) {
                for y in g.others(x) {
                    let b = d.beta(g, x, y).expect("same vertex");
                    label.push_str(&format!("\\nβ {}→{} = {b}", g.name(x), g.name(y)));
                }
            }
        }
        out.push_str(&format!("  \"v:{name}\" [label=\"{name}\", xlabel=\"{label}\"];\n"));
    }
    let alpha = |h: usize| {
        dec.as_ref()
            .map(|d| format!("{}={}", g.name(h), d.alpha(h)))
            .unwrap_or_else(|| g.name(h).to_string())
    };
    for (a, b) in g.internal_edges() {
        out.push_str(&format!(
            "  \"v:{}\" -- \"v:{}\" [taillabel=\"{}\", headlabel=\"{}\"];\n",
            g.vertex_name(g.vertex_of(a)),
            g.vertex_name(g.vertex_of(b)),
            alpha(a),
            alpha(b)
        ));
    }
    for &h in g.boundary() {
        out.push_str(&format!("  \"e:{}\" [shape=point];\n", g.name(h)));
        out.push_str(&format!(
            "  \"v:{}\" -- \"e:{}\" [taillabel=\"{}\"];\n",
            g.vertex_name(g.vertex_of(h)),
            g.name(h),
            alpha(h)
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Parser)]
#[command(
    name = "trivalent",
    about = "Decorated trivalent graphs: moves, invariants and normal forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file parses to a valid graph and decoration.
    Validate { file: PathBuf },
    /// Print the invariant report of a decorated graph.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide equivalence; exit 0 if equivalent, 1 if not.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        /// Boundary identification `a=b,...` from the first file to the second.
        #[arg(long)]
        map: Option<String>,
    },
    /// Apply one IH move.
    Ih {
        file: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long, value_parser = ["b", "c"])]
        pairing: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a move script taking the first graph to the second.
    Plan {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        map: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Replay a move script.
    Run {
        file: PathBuf,
        script: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the decorated normal form.
    Normalize {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Explore the bounded move orbit of a decoration, or check the
    /// classification on every decoration of a bare graph within the window.
    Orbit {
        file: PathBuf,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Print the graph in DOT format.
    Dot { file: PathBuf },
}

enum CliError {
    Input(String),
    Internal(String),
}

impl From<MoveError> for CliError {
    fn from(e: MoveError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        let internal = match &e {
            OracleError::Invariant(i) => i.is_internal(),
            OracleError::Move(m) => m.is_internal(),
            OracleError::Decoration(d) => matches!(d, DecorationError::Internal(_)),
            _ => false,
        };
        if internal {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<DecorationError> for CliError {
    fn from(e: DecorationError) -> Self {
        if matches!(e, DecorationError::Internal(_)) {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(TrivalentGraph, Option<Decoration>), CliError> {
    parse_decorated_graph(&read_text(path)?).map_err(|e| CliError::Input(format!("{}:{e}", path.display())))
}

fn load_decorated(path: &Path) -> Result<(TrivalentGraph, Decoration), CliError> {
    match load(path)? {
        (g, Some(d)) => Ok((g, d)),
        (_, None) => Err(CliError::Input(format!("{}: file has no decoration", path.display()))),
    }
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so a failed command never leaves partial output.
fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Input(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn parse_map(text: Option<&str>, g1: &TrivalentGraph) -> Result<BTreeMap<String, String>, CliError> {
    let Some(text) = text else {
        return Ok(g1
            .boundary()
            .iter()
            .map(|&h| (g1.name(h).to_string(), g1.name(h).to_string()))
            .collect());
    };
    let mut map = BTreeMap::new();
    for item in text.split(',').filter(|s| !s.is_empty()) {
        let (a, b) = item
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("bad map entry '{item}', expected a=b")))?;
        if map.insert(a.trim().to_string(), b.trim().to_string()).is_some() {
            return Err(CliError::Input(format!("'{a}' mapped twice")));
        }
    }
    Ok(map)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut say = |s: &str| {
        let _ = out.write_all(s.as_bytes());
    };
    match cli.command {
        Command::Validate { file } => {
            let (g, d) = load(&file)?;
            say(&format!(
                "ok: {} vertices, {} boundary, genus {}, {}\n",
                g.vertex_count(),
                g.boundary().len(),
                g.genus(),
                if d.is_some() { "decorated" } else { "undecorated" }
            ));
        }
        Command::Invariants { file, json } => {
            let (g, d) = load_decorated(&file)?;
            let report = classify(&g, &d)?;
            if json {
                let text =
                    serde_json::to_string_pretty(&report.to_json()).map_err(|e| CliError::Internal(e.to_string()))?;
                say(&format!("{text}\n"));
            } else {
                say(&report.to_text());
            }
        }
        Command::Equiv { file1, file2, map } => {
            let (g1, d1) = load_decorated(&file1)?;
            let (g2, d2) = load_decorated(&file2)?;
            let map = parse_map(map.as_deref(), &g1)?;
            return Ok(if equivalent(&g1, &d1, &g2, &d2, &map)? {
                say("equivalent\n");
                0
            } else {
                say("not equivalent\n");
                1
            });
        }
        Command::Ih {
            file,
            edge,
            pairing,
            output,
        } => {
            let (g, d) = load(&file)?;
            let (a, b) = edge
                .split_once('-')
                .ok_or_else(|| CliError::Input(format!("bad edge '{edge}', expected u-v")))?;
            let p = if pairing == "b" { Pairing::B } else { Pairing::C };
            let mv = IhMove::new(a, b, p);
            let text = match d {
                Some(d) => {
                    let (g2, d2, _) = ih_apply(&g, &d, &mv)?;
                    serialize(&g2, Some(&d2))
                }
                None => serialize(&ih_graph(&g, &mv)?.0, None),
            };
            write_atomic(&output, &text)?;
        }
        Command::Plan {
            file1,
            file2,
            map,
            output,
        } => {
            let (g1, d1) = load(&file1)?;
            let (g2, _) = load(&file2)?;
            let map = parse_map(map.as_deref(), &g1)?;
            let mut script = ih_plan(&g1, &g2, &map)?;
            if let Some(d1) = &d1 {
                script = stamp_script(&g1, d1, &script)?;
            }
            write_atomic(&output, &script.to_text())?;
            say(&format!("{} moves\n", script.len()));
        }
        Command::Run { file, script, output } => {
            let (g, d) = load(&file)?;
            let script = MoveScript::parse(&read_text(&script)?)?;
            let text = match d {
                Some(d) => {
                    let (g2, d2) = apply_script(&g, &d, &script)?;
                    serialize(&g2, Some(&d2))
                }
                None => {
                    if script.steps.iter().any(|s| matches!(s.step, Step::Trivial(_))) {
                        return Err(CliError::Input("trivial modifications need a decoration".into()));
                    }
                    serialize(&replay_graph(&g, &script)?, None)
                }
            };
            write_atomic(&output, &text)?;
        }
        Command::Normalize { file, output } => {
            let (g, d) = load_decorated(&file)?;
            let nf = normal_form(&g, &d)?;
            write_atomic(&output, &nf.record())?;
        }
        Command::Orbit { file, bound, depth } => {
            if bound < 0 {
                return Err(CliError::Input("--bound must be nonnegative".into()));
            }
            let (g, d) = load(&file)?;
            let bounds = OrbitBounds {
                depth,
                value_window: bound,
                ..OrbitBounds::default()
            };
            match d {
                Some(d) => {
                    let orbit = move_orbit(&g, &d, &bounds)?;
                    let record = classify(&g, &d)?.record();
                    let mut split = 0;
                    for s in &orbit.snapshots {
                        if classify(&g, s)?.record() != record {
                            split += 1;
                        }
                    }
                    say(&format!(
                        "within window ±{bound}, depth {depth}: {} decorations{}\ninvariant changes: {split}\n",
                        orbit.snapshots.len(),
                        if orbit.truncated { " (truncated)" } else { "" }
                    ));
                    if split > 0 {
                        return Err(CliError::Internal("invariants differ along the orbit".into()));
                    }
                }
                None => {
                    let report = check_classification(&g, bound, &bounds)?;
                    say(&report.to_text());
                    if !report.violations.is_empty() {
                        return Err(CliError::Internal("an orbit meets two invariant classes".into()));
                    }
                }
            }
        }
        Command::Dot { file } => {
            let (g, d) = load(&file)?;
            say(&to_dot(&g, d.as_ref()));
        }
    }
    Ok(0)
}

/// Runs the command line `argv` (program name first). Exit codes: 0 success,
/// 1 not equivalent, 2 invalid input, 3 internal invariant breach.
pub fn run_command(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(cli, out)));
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(CliError::Input(m))) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Ok(Err(CliError::Internal(m))) => {
            let _ = writeln!(err, "internal error: {m}");
            3
        }
        Err(_) => {
            let _ = writeln!(err, "internal error: panic");
            3
        }
    }
}
