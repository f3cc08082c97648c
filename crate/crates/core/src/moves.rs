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

//! IH moves with decoration transport, the local torsor coordinates B and B′,
//! the refined ε̂ invariant, the IH-move planner and replayable move scripts.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::decoration::{
    apply_trivial_mod, ensure_valid, reduce, validate_decoration, Decoration, DecorationError, TrivialMod,
};
use crate::graph::{boundary_isomorphism, boundary_map_indices, GraphError, TrivalentGraph};
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
    #[error("{0} is an external half-edge")]
    ExternalEdge(String),
    #[error("{0}-{1} is not an internal edge")]
    NotAnEdge(String, String),
    #[error("edge {0}-{1} is a loop")]
    LoopEdge(String, String),
    #[error("local data have different boundary alpha")]
    ModuliMismatch,
    #[error("graphs have different genus ({0} and {1})")]
    GenusMismatch(usize, usize),
    #[error("graph is not connected")]
    NotConnected,
    #[error("step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<MoveError>,
    },
    #[error("snapshot hash mismatch: expected {expected}, got {actual}")]
    HashMismatch { expected: String, actual: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl MoveError {
    /// Whether this error signals a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        match self {
            MoveError::Internal(_) | MoveError::Decoration(DecorationError::Internal(_)) => true,
            MoveError::Step { source, .. } => source.is_internal(),
            _ => false,
        }
    }
}

/// Which re-gluing an IH move produces. With the edge `u ∪ v`, `x < y` the
/// other half-edges at `u` and `z < w` those at `v`, choice B yields the
/// vertices `{x, z, u}` and `{y, w, v}`; choice C is B with the roles of `x`
/// and `y` exchanged, giving `{y, z, u}` and `{x, w, v}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pairing {
    B,
    C,
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::B => "b",
            Pairing::C => "c",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IhMove {
    pub edge: (String, String),
    pub pairing: Pairing,
}

impl IhMove {
    pub fn new(a: &str, b: &str, pairing: Pairing) -> IhMove {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        IhMove {
            edge: (u.to_string(), v.to_string()),
            pairing,
        }
    }
}

impl fmt::Display for IhMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IH {}-{} {}", self.edge.0, self.edge.1, self.pairing)
    }
}

/// Role assignment of the six half-edges of a move, as indices. The indices
/// stay valid after the move because IH moves keep half-edge names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IhLabels {
    pub u: usize,
    pub v: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub w: usize,
}

impl IhLabels {
    /// Vertex contents after the move: the vertex of `u`, then that of `v`.
    pub fn after(&self) -> ([usize; 3], [usize; 3]) {
        ([self.x, self.z, self.u], [self.y, self.w, self.v])
    }

    pub fn names(&self, g: &TrivalentGraph) -> [String; 6] {
        [self.u, self.v, self.x, self.y, self.z, self.w].map(|h| g.name(h).to_string())
    }
}

pub fn ih_labels(g: &TrivalentGraph, mv: &IhMove) -> Result<IhLabels, MoveError> {
    let a = g.require(&mv.edge.0)?;
    let b = g.require(&mv.edge.1)?;
    for h in [a, b] {
        if g.is_external(h) {
            return Err(MoveError::ExternalEdge(g.name(h).to_string()));
        }
    }
    if g.pair(a) != Some(b) {
        return Err(MoveError::NotAnEdge(mv.edge.0.clone(), mv.edge.1.clone()));
    }
    let (u, v) = (a.min(b), a.max(b));
    if g.vertex_of(u) == g.vertex_of(v) {
        return Err(MoveError::LoopEdge(g.name(u).to_string(), g.name(v).to_string()));
    }
    let [x, y] = g.others(u);
    let [z, w] = g.others(v);
    Ok(match mv.pairing {
        Pairing::B => IhLabels { u, v, x, y, z, w },
        Pairing::C => IhLabels { u, v, x: y, y: x, z, w },
    })
}

/// Applies the move to the graph only.
pub fn ih_graph(g: &TrivalentGraph, mv: &IhMove) -> Result<(TrivalentGraph, IhLabels), MoveError> {
    let l = ih_labels(g, mv)?;
    let (left, right) = l.after();
    let g2 = g.regroup(&[(g.vertex_of(l.u), left), (g.vertex_of(l.v), right)]);
    Ok((g2, l))
}

/// The move on `edge` that puts the outer half-edges `group` at one vertex,
/// or `None` when they already share a vertex.
pub fn choice_for_partition(
    g: &TrivalentGraph,
    edge: (usize, usize),
    group: [usize; 2],
) -> Result<Option<IhMove>, MoveError> {
    let target: BTreeSet<usize> = group.into_iter().collect();
    for pairing in [Pairing::B, Pairing::C] {
        let mv = IhMove::new(g.name(edge.0), g.name(edge.1), pairing);
        let l = ih_labels(g, &mv)?;
        let (left, right) = l.after();
        let sides = [BTreeSet::from([left[0], left[1]]), BTreeSet::from([right[0], right[1]])];
        if sides.contains(&target) {
            return Ok(Some(mv));
        }
    }
    Ok(None)
}

/// The move on `after` that undoes `mv` applied to `before`.
pub fn inverse_move(before: &TrivalentGraph, after: &TrivalentGraph, mv: &IhMove) -> Result<IhMove, MoveError> {
    let l = ih_labels(before, mv)?;
    let [p, q] = before.others(l.u);
    choice_for_partition(after, (l.u, l.v), [p, q])?
        .ok_or_else(|| MoveError::Internal("move does not change the partition".into()))
}

/// Torsor coordinates of a decoration near a moved edge, with the outer α
/// values in the order (x, y, z, w).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalB {
    pub b: [i64; 4],
    pub alpha: [i64; 4],
}

impl LocalB {
    /// α of the edge before the move.
    pub fn alpha_u(&self) -> i64 {
        2 - self.alpha[0] - self.alpha[1]
    }

    /// α of the edge after the move.
    pub fn alpha_u_prime(&self) -> i64 {
        2 - self.alpha[0] - self.alpha[2]
    }

    /// Generators of the common quotient relations, moduli included.
    pub fn relations(&self) -> Vec<[i64; 4]> {
        let (au, au2) = (self.alpha_u(), self.alpha_u_prime());
        let mut out = vec![[1, 1, 1, 1], [0, 0, au, au], [0, au2, 0, au2]];
        for k in 0..4 {
            let mut r = [0; 4];
            r[k] = self.alpha[k];
            out.push(r);
        }
        out
    }
}

/// B(β) = (β_{xu}, β_{yx}, β_{zw} + δ, β_{wv} + δ) with δ = β_{ux} − β_{vw}.
pub fn local_b(g: &TrivalentGraph, dec: &Decoration, l: &IhLabels) -> Result<LocalB, MoveError> {
    let b = |p, q| dec.beta(g, p, q);
    let delta = b(l.u, l.x)? - b(l.v, l.w)?;
    Ok(LocalB {
        b: [b(l.x, l.u)?, b(l.y, l.x)?, b(l.z, l.w)? + delta, b(l.w, l.v)? + delta],
        alpha: [l.x, l.y, l.z, l.w].map(|h| dec.alpha(h)),
    })
}

/// B′(β′) = (β′_{xu′}, β′_{yv′} + δ′, β′_{zu′}, β′_{wv′} + δ′) with
/// δ′ = β′_{u′x} − β′_{v′w}, evaluated on the graph after the move.
pub fn local_b_prime(g: &TrivalentGraph, dec: &Decoration, l: &IhLabels) -> Result<LocalB, MoveError> {
    let b = |p, q| dec.beta(g, p, q);
    let delta = b(l.u, l.x)? - b(l.v, l.w)?;
    Ok(LocalB {
        b: [b(l.x, l.u)?, b(l.y, l.v)? + delta, b(l.z, l.u)?, b(l.w, l.v)? + delta],
        alpha: [l.x, l.y, l.z, l.w].map(|h| dec.alpha(h)),
    })
}

/// Whether B and B′ agree in the common quotient group.
pub fn local_equivalent(b1: &LocalB, b2: &LocalB) -> Result<bool, MoveError> {
    if b1.alpha != b2.alpha {
        return Err(MoveError::ModuliMismatch);
    }
    let rows: Vec<Vec<i128>> = b1
        .relations()
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let overflow = |_| MoveError::Internal("lattice arithmetic overflow".into());
    let lattice = Lattice::new(4, &rows).map_err(overflow)?;
    let diff: Vec<i128> = (0..4).map(|k| (b2.b[k] - b1.b[k]) as i128).collect();
    lattice.contains(&diff).map_err(overflow)
}

/// ε̂ with components ordered (yx, zx, wx, zy, wy, wz), each in Z₄, taken
/// modulo the subgroup generated by (0,2,2,2,2,0) and (2,0,2,2,0,2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EpsilonHat(pub [i64; 6]);

const YX: usize = 0;
const ZX: usize = 1;
const ZY: usize = 3;
const WY: usize = 4;
const WZ: usize = 5;

impl EpsilonHat {
    /// Representative with the yx and zx components in {0, 1}.
    fn canonical(mut e: [i64; 6]) -> EpsilonHat {
        for c in e.iter_mut() {
            *c = c.rem_euclid(4);
        }
        if e[YX] >= 2 {
            for (c, g) in e.iter_mut().zip([2, 0, 2, 2, 0, 2]) {
                *c = (*c + g) % 4;
            }
        }
        if e[ZX] >= 2 {
            for (c, g) in e.iter_mut().zip([0, 2, 2, 2, 2, 0]) {
                *c = (*c + g) % 4;
            }
        }
        EpsilonHat(e)
    }

    /// ε̂_wz − ε̂_yx = ε̂_wy − ε̂_zx + 2 in Z₄.
    pub fn first_identity(&self) -> bool {
        let e = &self.0;
        (e[WZ] - e[YX] - e[WY] + e[ZX] - 2).rem_euclid(4) == 0
    }

    /// ε̂_yx + ε̂_wz = ε̂_zx + ε̂_wy − 2ε̂_zy in Z₄.
    pub fn second_identity(&self) -> bool {
        let e = &self.0;
        (e[YX] + e[WZ] - e[ZX] - e[WY] + 2 * e[ZY]).rem_euclid(4) == 0
    }
}

pub fn refined_epsilon(b: &LocalB) -> EpsilonHat {
    let [bx, by, bz, bw] = b.b;
    EpsilonHat::canonical([by - bx + 1, bz - bx, bw - bx, bz - by, bw - by, bw - bz - 1])
}

/// Record of one decorated IH move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IhTrace {
    pub labels: IhLabels,
    pub before: LocalB,
    pub after: LocalB,
}

/// Applies an IH move and transports the decoration. α is unchanged on the
/// surviving half-edges, the new edge gets α_u = 2 − α_x − α_z, and β is set
/// in the gauge β′_{ux} = β′_{vw} = 0 with the four outer entries equal to
/// B(β), so that B′(β′) = B(β) as integer tuples.
pub fn ih_apply(
    g: &TrivalentGraph,
    dec: &Decoration,
    mv: &IhMove,
) -> Result<(TrivalentGraph, Decoration, IhTrace), MoveError> {
    ensure_valid(g, dec)?;
    let (g2, l) = ih_graph(g, mv)?;
    let before = local_b(g, dec, &l)?;
    let mut alpha = dec.alphas().to_vec();
    alpha[l.u] = before.alpha_u_prime();
    alpha[l.v] = -alpha[l.u];
    let [bx, by, bz, bw] = before.b;
    let fixed = [
        (l.u, l.x, 0),
        (l.v, l.w, 0),
        (l.x, l.u, bx),
        (l.z, l.u, bz),
        (l.y, l.v, by),
        (l.w, l.v, bw),
    ];
    let mut rows: Vec<[i64; 2]> = (0..g.half_edge_count()).map(|h| dec.beta_row(h)).collect();
    for (from, to, value) in fixed {
        let [o0, o1] = g2.others(from);
        rows[from] = if to == o0 {
            [value, reduce(value + alpha[o1] - 1, alpha[from])]
        } else {
            [reduce(value + alpha[o0] - 1, alpha[from]), value]
        };
    }
    let dec2 = Decoration::from_raw(alpha, rows);
    if let Err(v) = validate_decoration(&g2, &dec2) {
        return Err(MoveError::Internal(format!("transported decoration invalid: {v:?}")));
    }
    let after = local_b_prime(&g2, &dec2, &l)?;
    if after.b != before.b {
        return Err(MoveError::Internal("transport changed B".into()));
    }
    Ok((
        g2,
        dec2,
        IhTrace {
            labels: l,
            before,
            after,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Trivial(TrivialMod),
    Ih(IhMove),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Trivial(TrivialMod::V { vertex, n }) => write!(f, "V {vertex} {n}"),
            Step::Trivial(TrivialMod::I { edge, m }) => write!(f, "I {}-{} {m}", edge.0, edge.1),
            Step::Trivial(TrivialMod::E { half_edge, m }) => write!(f, "E {half_edge} {m}"),
            Step::Ih(mv) => mv.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScriptStep {
    pub step: Step,
    /// Snapshot hash of the graph and decoration after this step.
    pub hash: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MoveScript {
    pub steps: Vec<ScriptStep>,
}

impl MoveScript {
    pub fn new() -> MoveScript {
        MoveScript::default()
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(ScriptStep { step, hash: None });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn ih_moves(&self) -> impl Iterator<Item = &IhMove> {
        self.steps.iter().filter_map(|s| match &s.step {
            Step::Ih(m) => Some(m),
            Step::Trivial(_) => None,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&s.step.to_string());
            if let Some(h) = &s.hash {
                out.push_str(" # ");
                out.push_str(h);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<MoveScript, MoveError> {
        let mut script = MoveScript::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| MoveError::Parse { line, message };
            let (body, comment) = match raw.split_once('#') {
                Some((b, c)) => (b.trim(), Some(c.trim())),
                None => (raw.trim(), None),
            };
            if body.is_empty() {
                continue;
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            let int = |s: &str| {
                s.parse::<i64>()
                    .map_err(|_| err(format!("expected an integer, found {s:?}")))
            };
            let edge = |s: &str| {
                s.split_once('-')
                    .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .ok_or_else(|| err(format!("expected an edge a-b, found {s:?}")))
            };
            let step = match words.as_slice() {
                ["V", v, n] => Step::Trivial(TrivialMod::V {
                    vertex: v.to_string(),
                    n: int(n)?,
                }),
                ["I", e, m] => Step::Trivial(TrivialMod::I {
                    edge: edge(e)?,
                    m: int(m)?,
                }),
                ["E", x, m] => Step::Trivial(TrivialMod::E {
                    half_edge: x.to_string(),
                    m: int(m)?,
                }),
                ["IH", e, p] => {
                    let (a, b) = edge(e)?;
                    let pairing = match *p {
                        "b" => Pairing::B,
                        "c" => Pairing::C,
                        other => return Err(err(format!("expected b or c, found {other:?}"))),
                    };
                    Step::Ih(IhMove::new(&a, &b, pairing))
                }
                _ => return Err(err(format!("unrecognised step {body:?}"))),
            };
            let hash = comment.filter(|c| !c.is_empty()).map(str::to_string);
            script.steps.push(ScriptStep { step, hash });
        }
        Ok(script)
    }
}

/// Truncated SHA-256 of the canonical text of a decorated graph.
pub fn snapshot_hash(g: &TrivalentGraph, dec: &Decoration) -> String {
    let text = crate::cli::serialize(g, Some(dec));
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}

/// Applies one step to a decorated graph.
pub fn apply_step(
    g: &TrivalentGraph,
    dec: &Decoration,
    step: &Step,
) -> Result<(TrivalentGraph, Decoration), MoveError> {
    match step {
        Step::Trivial(m) => {
            let d = apply_trivial_mod(g, dec, m)?;
            Ok((g.clone(), d))
        }
        Step::Ih(mv) => {
            let (g2, d2, _) = ih_apply(g, dec, mv)?;
            Ok((g2, d2))
        }
    }
}

/// Replays a script, validating every intermediate decoration and checking
/// recorded snapshot hashes.
pub fn apply_script(
    g: &TrivalentGraph,
    dec: &Decoration,
    script: &MoveScript,
) -> Result<(TrivalentGraph, Decoration), MoveError> {
    ensure_valid(g, dec)?;
    let mut cur = (g.clone(), dec.clone());
    for (index, s) in script.steps.iter().enumerate() {
        let wrap = |e: MoveError| MoveError::Step {
            index,
            source: Box::new(e),
        };
        cur = apply_step(&cur.0, &cur.1, &s.step).map_err(wrap)?;
        ensure_valid(&cur.0, &cur.1).map_err(|e| wrap(e.into()))?;
        if let Some(expected) = &s.hash {
            let actual = snapshot_hash(&cur.0, &cur.1);
            if &actual != expected {
                return Err(wrap(MoveError::HashMismatch {
                    expected: expected.clone(),
                    actual,
                }));
            }
        }
    }
    Ok(cur)
}

/// Copy of `script` with the snapshot hash recorded after every step.
pub fn stamp_script(g: &TrivalentGraph, dec: &Decoration, script: &MoveScript) -> Result<MoveScript, MoveError> {
    let mut cur = (g.clone(), dec.clone());
    let mut out = MoveScript::new();
    for s in &script.steps {
        cur = apply_step(&cur.0, &cur.1, &s.step)?;
        out.steps.push(ScriptStep {
            step: s.step.clone(),
            hash: Some(snapshot_hash(&cur.0, &cur.1)),
        });
    }
    Ok(out)
}

/// Replays the IH moves of a script on a bare graph.
pub fn replay_graph(g: &TrivalentGraph, script: &MoveScript) -> Result<TrivalentGraph, MoveError> {
    let mut cur = g.clone();
    for (index, mv) in script.ih_moves().enumerate() {
        cur = ih_graph(&cur, mv)
            .map_err(|e| MoveError::Step {
                index,
                source: Box::new(e),
            })?
            .0;
    }
    Ok(cur)
}

/// A loop of a planned apple tree: the cut edge `(p, q)` and the stem at
/// their common vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlannedLoop {
    pub p: usize,
    pub q: usize,
    pub stem: usize,
}

/// Result of driving a graph to an apple tree.
#[derive(Debug, Clone)]
pub struct ApplePlan {
    pub moves: Vec<IhMove>,
    pub graph: TrivalentGraph,
    pub loops: Vec<PlannedLoop>,
}

type EdgeKey = (usize, usize);

fn key(a: usize, b: usize) -> EdgeKey {
    (a.min(b), a.max(b))
}

struct Planner {
    g: TrivalentGraph,
    blocked: BTreeSet<EdgeKey>,
    moves: Vec<IhMove>,
}

impl Planner {
    /// Vertices from `from` to `to` over unblocked internal edges, as the
    /// list of (half at current vertex, half at next vertex).
    fn path(&self, from: usize, to: usize) -> Option<Vec<(usize, usize)>> {
        let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for h in self.g.vertex(v) {
                let Some(p) = self.g.pair(h) else { continue };
                if self.blocked.contains(&key(h, p)) {
                    continue;
                }
                let w = self.g.vertex_of(p);
                if seen.insert(w) {
                    prev.insert(w, (h, p));
                    queue.push_back(w);
                }
            }
        }
        if !seen.contains(&to) {
            return None;
        }
        let mut out = Vec::new();
        let mut v = to;
        while v != from {
            let (h, p) = prev[&v];
            out.push((h, p));
            v = self.g.vertex_of(h);
        }
        out.reverse();
        Some(out)
    }

    /// Moves `t` to the vertex of `a` by repeatedly pulling the next path
    /// half-edge onto `a`'s vertex. `a` keeps its vertex.
    fn meet(&mut self, a: usize, t: usize) -> Result<(), MoveError> {
        while self.g.vertex_of(a) != self.g.vertex_of(t) {
            let path = self
                .path(self.g.vertex_of(a), self.g.vertex_of(t))
                .ok_or_else(|| MoveError::Internal("planner lost its path".into()))?;
            let (u, v) = path[0];
            let d = if path.len() == 1 { t } else { path[1].0 };
            let mv = choice_for_partition(&self.g, (u, v), [a, d])?
                .ok_or_else(|| MoveError::Internal("path move is trivial".into()))?;
            self.g = ih_graph(&self.g, &mv)?.0;
            self.moves.push(mv);
        }
        Ok(())
    }

    fn third(&self, a: usize, b: usize) -> usize {
        let t = self.g.vertex(self.g.vertex_of(a));
        t.into_iter().find(|&h| h != a && h != b).unwrap()
    }
}

/// Drives a connected graph to the apple tree whose spine carries the
/// boundary in `order` followed by the loops.
///
/// One edge per basis cycle is cut; cut edges are never moved, so the tree
/// part stays a tree. Each cut pair is brought to a common vertex, forming a
/// loop. The remaining tree is then straightened leaf by leaf.
pub fn plan_apple_tree(g: &TrivalentGraph, order: &[usize]) -> Result<ApplePlan, MoveError> {
    if !g.is_connected() {
        return Err(MoveError::NotConnected);
    }
    let tree = crate::graph::spanning_tree_edges(g);
    let cuts: Vec<EdgeKey> = g.internal_edges().into_iter().filter(|e| !tree.contains(e)).collect();
    let mut pl = Planner {
        g: g.clone(),
        blocked: cuts.iter().copied().collect(),
        moves: Vec::new(),
    };
    let mut loops = Vec::new();
    for &(p, q) in &cuts {
        pl.meet(p, q)?;
        let stem = pl.third(p, q);
        if let Some(s) = pl.g.pair(stem) {
            pl.blocked.insert(key(stem, s));
        }
        loops.push(PlannedLoop { p, q, stem });
    }
    let mut leaves: Vec<usize> = order.to_vec();
    leaves.extend(loops.iter().filter_map(|l| pl.g.pair(l.stem)));
    let m = leaves.len();
    if m == 3 {
        pl.meet(leaves[0], leaves[1])?;
    } else if m > 3 {
        pl.meet(leaves[0], leaves[1])?;
        let mut lambda = link_end(&mut pl, leaves[0], leaves[1]);
        for &leaf in &leaves[2..m - 2] {
            pl.meet(lambda, leaf)?;
            lambda = link_end(&mut pl, lambda, leaf);
        }
    }
    Ok(ApplePlan {
        moves: pl.moves,
        graph: pl.g,
        loops,
    })
}

/// Blocks the spine link leaving the vertex of `a` and `b` and returns its
/// far end.
fn link_end(pl: &mut Planner, a: usize, b: usize) -> usize {
    let t = pl.third(a, b);
    let far = pl.g.pair(t).expect("spine link is internal");
    pl.blocked.insert(key(t, far));
    far
}

/// IH moves taking `g1` to a graph isomorphic to `g2` by an isomorphism that
/// extends `boundary_map`. Both graphs are driven to the same apple tree and
/// the second path is replayed backwards on the first.
pub fn ih_plan(
    g1: &TrivalentGraph,
    g2: &TrivalentGraph,
    boundary_map: &BTreeMap<String, String>,
) -> Result<MoveScript, MoveError> {
    for g in [g1, g2] {
        if !g.is_connected() {
            return Err(MoveError::NotConnected);
        }
    }
    let pairs = boundary_map_indices(g1, g2, boundary_map)?;
    if g1.genus() != g2.genus() {
        return Err(MoveError::GenusMismatch(g1.genus(), g2.genus()));
    }
    let image: BTreeMap<usize, usize> = pairs.into_iter().collect();
    let order1: Vec<usize> = g1.boundary().to_vec();
    let order2: Vec<usize> = order1.iter().map(|b| image[b]).collect();
    let p1 = plan_apple_tree(g1, &order1)?;
    let p2 = plan_apple_tree(g2, &order2)?;
    let iso = boundary_isomorphism(&p1.graph, &p2.graph, boundary_map)?
        .ok_or_else(|| MoveError::Internal("apple trees differ".into()))?;
    let mut inv = vec![0; g2.half_edge_count()];
    for (a, &b) in iso.half_edges.iter().enumerate() {
        inv[b] = a;
    }
    // states of the second path, so each inverse step knows the partition to restore
    let mut states = vec![g2.clone()];
    for mv in &p2.moves {
        let next = ih_graph(states.last().unwrap(), mv)?.0;
        states.push(next);
    }
    let mut cur = p1.graph.clone();
    let mut moves = p1.moves.clone();
    for (i, mv) in p2.moves.iter().enumerate().rev() {
        let before = &states[i];
        let l = ih_labels(before, mv)?;
        let [p, q] = before.others(l.u);
        let back = choice_for_partition(&cur, (inv[l.u], inv[l.v]), [inv[p], inv[q]])?
            .ok_or_else(|| MoveError::Internal("reverse step is trivial".into()))?;
        cur = ih_graph(&cur, &back)?.0;
        moves.push(back);
        // the restored pair may sit with the other half of the edge
        if cur.vertex_of(inv[l.u]) != cur.vertex_of(inv[p]) {
            inv.swap(l.u, l.v);
        }
    }
    let mut script = MoveScript::new();
    for mv in moves {
        script.push(Step::Ih(mv));
    }
    let end = replay_graph(g1, &script)?;
    if boundary_isomorphism(&end, g2, boundary_map)?.is_none() {
        return Err(MoveError::Internal("planned script misses the target".into()));
    }
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoration::trivial_mod_equivalent;
    use crate::graph::build_graph;

    fn fig_a() -> TrivalentGraph {
        build_graph(&[["a", "b", "u"], ["v", "c", "d"]], &[("u", "v")]).unwrap()
    }

    fn fig_a_dec(g: &TrivalentGraph, a: [i64; 4], base: [i64; 6]) -> Decoration {
        let mut alpha = vec![0; 6];
        for (n, v) in [("a", a[0]), ("b", a[1]), ("c", a[2]), ("d", a[3])] {
            alpha[g.index_of(n).unwrap()] = v;
        }
        let au = 2 - a[0] - a[1];
        alpha[g.index_of("u").unwrap()] = au;
        alpha[g.index_of("v").unwrap()] = -au;
        Decoration::from_base(g, alpha, &base)
    }

    fn identity(g: &TrivalentGraph) -> BTreeMap<String, String> {
        g.boundary()
            .iter()
            .map(|&h| (g.name(h).to_string(), g.name(h).to_string()))
            .collect()
    }

    #[test]
    fn figure_b_and_c_shapes() {
        let g = fig_a();
        let (gb, _) = ih_graph(&g, &IhMove::new("u", "v", Pairing::B)).unwrap();
        let fig_b = build_graph(&[["a", "c", "u"], ["v", "b", "d"]], &[("u", "v")]).unwrap();
        assert!(boundary_isomorphism(&gb, &fig_b, &identity(&g)).unwrap().is_some());
        let (gc, _) = ih_graph(&g, &IhMove::new("v", "u", Pairing::C)).unwrap();
        let fig_c = build_graph(&[["b", "c", "u"], ["v", "a", "d"]], &[("u", "v")]).unwrap();
        assert!(boundary_isomorphism(&gc, &fig_c, &identity(&g)).unwrap().is_some());
    }

    #[test]
    fn external_and_loop_edges_rejected() {
        let g = fig_a();
        assert!(matches!(
            ih_graph(&g, &IhMove::new("a", "b", Pairing::B)),
            Err(MoveError::ExternalEdge(_))
        ));
        let wheel = build_graph(&[["x", "y", "z"]], &[("x", "y")]).unwrap();
        assert!(matches!(
            ih_graph(&wheel, &IhMove::new("x", "y", Pairing::B)),
            Err(MoveError::LoopEdge(..))
        ));
    }

    #[test]
    fn transport_is_exact() {
        let g = fig_a();
        let d = fig_a_dec(&g, [2, 0, 0, 2], [0; 6]);
        let mv = IhMove::new("u", "v", Pairing::B);
        let (g2, d2, t) = ih_apply(&g, &d, &mv).unwrap();
        assert_eq!(t.before.b, t.after.b);
        assert_eq!(d2.alpha(g2.index_of("u").unwrap()), 0);
        assert!(local_equivalent(&t.before, &t.after).unwrap());
        assert_eq!(refined_epsilon(&t.before), refined_epsilon(&t.after));
    }

    #[test]
    fn local_equivalence_cases() {
        let b = LocalB {
            b: [1, 2, 3, 4],
            alpha: [4, 8, -4, -4],
        };
        assert!(local_equivalent(&b, &b).unwrap());
        let shifted = LocalB { b: [2, 3, 4, 5], ..b };
        assert!(local_equivalent(&b, &shifted).unwrap());
        let odd = LocalB { b: [1, 2, 4, 5], ..b };
        assert_eq!(b.alpha_u().rem_euclid(4), 2);
        assert!(!local_equivalent(&b, &odd).unwrap());
        let other = LocalB {
            alpha: [4, 8, -4, 0],
            ..b
        };
        assert_eq!(local_equivalent(&b, &other), Err(MoveError::ModuliMismatch));
    }

    #[test]
    fn epsilon_at_zero() {
        let e = refined_epsilon(&LocalB {
            b: [0; 4],
            alpha: [0, 0, 0, 4],
        });
        assert_eq!(e, EpsilonHat::canonical([1, 0, 0, 0, 0, -1]));
        assert!(e.first_identity());
        assert!(e.second_identity());
    }

    #[test]
    fn gauge_move_keeps_local_class() {
        let g = fig_a();
        let d = fig_a_dec(&g, [4, 2, -4, 2], [1, 2, 3, 0, 1, 2]);
        let mv = IhMove::new("u", "v", Pairing::B);
        let l = ih_labels(&g, &mv).unwrap();
        let b1 = local_b(&g, &d, &l).unwrap();
        let vx = g.vertex_name(g.vertex_of(l.x)).to_string();
        let d2 = apply_trivial_mod(&g, &d, &TrivialMod::V { vertex: vx, n: 3 }).unwrap();
        let b2 = local_b(&g, &d2, &l).unwrap();
        assert!(local_equivalent(&b1, &b2).unwrap());
    }

    #[test]
    fn inverse_restores_graph() {
        let g = fig_a();
        let d = fig_a_dec(&g, [3, 1, -1, 1], [0, 1, 0, 2, 0, 0]);
        for pairing in [Pairing::B, Pairing::C] {
            let mv = IhMove::new("u", "v", pairing);
            let (g2, d2, _) = ih_apply(&g, &d, &mv).unwrap();
            let back = inverse_move(&g, &g2, &mv).unwrap();
            let (g3, d3, _) = ih_apply(&g2, &d2, &back).unwrap();
            assert_eq!(g3, g);
            // genus 0, so the round trip is trivial-mod equivalent
            assert!(trivial_mod_equivalent(&g, &d, &d3).unwrap().is_some());
        }
    }

    #[test]
    fn script_text_round_trip() {
        let text = "V v0 3\nI u-v -2\nE x 5\nIH u-v c # 0011aabb\n";
        let s = MoveScript::parse(text).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.to_text(), text);
        assert!(matches!(
            MoveScript::parse("IH u-v d"),
            Err(MoveError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            MoveScript::parse("\nV v0 x"),
            Err(MoveError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn plan_figure_a_to_b() {
        let g = fig_a();
        let fig_b = build_graph(&[["a", "c", "u"], ["v", "b", "d"]], &[("u", "v")]).unwrap();
        let s = ih_plan(&g, &fig_b, &identity(&g)).unwrap();
        let end = replay_graph(&g, &s).unwrap();
        assert!(boundary_isomorphism(&end, &fig_b, &identity(&g)).unwrap().is_some());
        let same = ih_plan(&g, &g, &identity(&g)).unwrap();
        assert!(
            boundary_isomorphism(&replay_graph(&g, &same).unwrap(), &g, &identity(&g))
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn plan_genus_mismatch() {
        let g = fig_a();
        let wheel = build_graph(&[["x", "y", "z"], ["p", "q", "w"]], &[("x", "y"), ("z", "p")]).unwrap();
        let map: BTreeMap<String, String> = [("a", "q"), ("b", "w"), ("c", "q"), ("d", "w")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert!(ih_plan(&g, &wheel, &map).is_err());
    }
}
