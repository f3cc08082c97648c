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

//! Decorations, their residue invariants and trivial modifications.
//!
//! A decoration stores one integer per half-edge (α) and, for each half-edge
//! `x`, integer lifts of β from `x` to the two other half-edges at its vertex.
//! β from `x` is only meaningful modulo α_x; lifts are kept as given and
//! reduced where a residue is needed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::graph::{cycle_basis, GraphError, OrientedCycle, TrivalentGraph};
use crate::lattice::Lattice;

/// Nonnegative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_all<I: IntoIterator<Item = i64>>(it: I) -> i64 {
    it.into_iter().fold(0, gcd)
}

/// Least nonnegative representative modulo `|m|`; modulus 0 leaves `v`.
pub fn reduce(v: i64, m: i64) -> i64 {
    if m == 0 {
        v
    } else {
        v.mod_floor(&m.abs())
    }
}

/// An integer modulo a nonnegative modulus. Modulus 0 is the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: i64,
    modulus: i64,
}

impl Residue {
    pub fn new(value: i64, modulus: i64) -> Residue {
        let modulus = modulus.abs();
        Residue {
            value: reduce(value, modulus),
            modulus,
        }
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    /// Image in `Z / gcd(modulus, m)`.
    pub fn coarsen(&self, m: i64) -> Residue {
        Residue::new(self.value, gcd(self.modulus, m))
    }

    pub fn neg(&self) -> Residue {
        Residue::new(-self.value, self.modulus)
    }

    /// Sum in the common quotient of both moduli.
    pub fn add(&self, other: &Residue) -> Residue {
        Residue::new(self.value + other.value, gcd(self.modulus, other.modulus))
    }

    /// Whether `v` represents this residue.
    pub fn represents(&self, v: i64) -> bool {
        reduce(v, self.modulus) == self.value
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecorationError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no alpha value for half-edge {0}")]
    MissingAlpha(String),
    #[error("no beta value with source {0}")]
    MissingBeta(String),
    #[error("{0} and {1} do not meet at a vertex")]
    NotAtVertex(String, String),
    #[error("beta values from {0} violate the vertex congruence")]
    InconsistentBeta(String),
    #[error("{0} is an external half-edge")]
    ExternalEdge(String),
    #[error("bad trivial modification target: {0}")]
    BadTarget(String),
    #[error("decorations have different alpha")]
    AlphaMismatch,
    #[error("alpha is odd on {0}")]
    OddAlpha(String),
    #[error("planar condition fails on edge {0}-{1}")]
    ConditionFails(String, String),
    #[error("rotation system is not planar")]
    NotPlanar,
    #[error("bad rotation system: {0}")]
    BadRotation(String),
    #[error("invalid decoration: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

/// A violated decoration constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Shape,
    VertexSum {
        vertex: String,
        sum: i64,
    },
    EdgeSum {
        x: String,
        y: String,
        sum: i64,
    },
    BetaCongruence {
        vertex: String,
        from: String,
        to: String,
    },
    /// A component without external edges has vertex sums `2v` but half-edge
    /// sum 0, so no α can satisfy it.
    VertexSumImpossible {
        vertices: Vec<String>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape => write!(f, "decoration does not match the graph"),
            Violation::VertexSum { vertex, sum } => {
                write!(f, "vertex sum at {vertex} is {sum}, expected 2")
            }
            Violation::EdgeSum { x, y, sum } => {
                write!(f, "alpha sum on edge {x}-{y} is {sum}, expected 0")
            }
            Violation::BetaCongruence { vertex, from, to } => {
                write!(f, "beta congruence fails at {vertex} for {from}->{to}")
            }
            Violation::VertexSumImpossible { vertices } => write!(
                f,
                "vertex sum cannot hold on a component without external edges ({})",
                vertices.join(" ")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decoration {
    alpha: Vec<i64>,
    /// `beta[x][k]` is the lift of β from `x` to `g.others(x)[k]`.
    beta: Vec<[i64; 2]>,
}

impl Decoration {
    pub(crate) fn from_raw(alpha: Vec<i64>, beta: Vec<[i64; 2]>) -> Decoration {
        Decoration { alpha, beta }
    }

    /// Completes β from one lift per source, `base[x]` being β from `x` to
    /// `g.others(x)[0]`.
    pub fn from_base(g: &TrivalentGraph, alpha: Vec<i64>, base: &[i64]) -> Decoration {
        let beta = (0..g.half_edge_count())
            .map(|x| {
                let [_, o1] = g.others(x);
                [base[x], reduce(base[x] + alpha[o1] - 1, alpha[x])]
            })
            .collect();
        Decoration { alpha, beta }
    }

    /// Builds a decoration from named values. Every half-edge needs α and at
    /// least one β entry as source; missing entries are completed through the
    /// vertex congruence with the least nonnegative lift.
    pub fn new(
        g: &TrivalentGraph,
        alpha: &BTreeMap<String, i64>,
        beta: &BTreeMap<(String, String), i64>,
    ) -> Result<Decoration, DecorationError> {
        let n = g.half_edge_count();
        let mut a = vec![0; n];
        for (h, slot) in a.iter_mut().enumerate() {
            *slot = *alpha
                .get(g.name(h))
                .ok_or_else(|| DecorationError::MissingAlpha(g.name(h).to_string()))?;
        }
        for k in alpha.keys() {
            g.require(k)?;
        }
        let mut given: Vec<[Option<i64>; 2]> = vec![[None, None]; n];
        for ((from, to), &v) in beta {
            let x = g.require(from)?;
            let y = g.require(to)?;
            let others = g.others(x);
            let k = others
                .iter()
                .position(|&o| o == y)
                .ok_or_else(|| DecorationError::NotAtVertex(from.clone(), to.clone()))?;
            given[x][k] = Some(v);
        }
        let mut b = vec![[0; 2]; n];
        for x in 0..n {
            let [o0, o1] = g.others(x);
            b[x] = match given[x] {
                [Some(p), Some(q)] => {
                    if reduce(q - p - a[o1] + 1, a[x]) != 0 {
                        return Err(DecorationError::InconsistentBeta(g.name(x).to_string()));
                    }
                    [p, q]
                }
                [Some(p), None] => [p, reduce(p + a[o1] - 1, a[x])],
                [None, Some(q)] => [reduce(q + a[o0] - 1, a[x]), q],
                [None, None] => return Err(DecorationError::MissingBeta(g.name(x).to_string())),
            };
        }
        Ok(Decoration { alpha: a, beta: b })
    }

    pub fn alpha(&self, h: usize) -> i64 {
        self.alpha[h]
    }

    pub fn alphas(&self) -> &[i64] {
        &self.alpha
    }

    pub(crate) fn beta_row(&self, x: usize) -> [i64; 2] {
        self.beta[x]
    }

    /// The stored lift of β_{xy}.
    pub fn beta(&self, g: &TrivalentGraph, x: usize, y: usize) -> Result<i64, DecorationError> {
        let others = g.others(x);
        others
            .iter()
            .position(|&o| o == y)
            .map(|k| self.beta[x][k])
            .ok_or_else(|| DecorationError::NotAtVertex(g.name(x).to_string(), g.name(y).to_string()))
    }

    /// Same decoration with every β lift reduced to the least nonnegative
    /// representative.
    pub fn canonical(&self) -> Decoration {
        let beta = self
            .beta
            .iter()
            .enumerate()
            .map(|(x, row)| row.map(|v| reduce(v, self.alpha[x])))
            .collect();
        Decoration {
            alpha: self.alpha.clone(),
            beta,
        }
    }

    /// Equality of α and of every β as a residue.
    pub fn same_residues(&self, other: &Decoration) -> bool {
        self.canonical() == other.canonical()
    }

    /// Adds `k` to both β lifts with source `x`.
    pub(crate) fn shift_source(&mut self, x: usize, k: i64) {
        self.beta[x][0] += k;
        self.beta[x][1] += k;
    }
}

/// Fills in α from partial values using the vertex sums and the edge sums.
/// Returns `None` if some value stays undetermined or a constraint fails.
pub fn propagate_alpha(g: &TrivalentGraph, partial: &[Option<i64>]) -> Option<Vec<i64>> {
    let mut a = partial.to_vec();
    loop {
        let mut changed = false;
        for (x, y) in g.internal_edges() {
            match (a[x], a[y]) {
                (Some(p), None) => {
                    a[y] = Some(-p);
                    changed = true;
                }
                (None, Some(q)) => {
                    a[x] = Some(-q);
                    changed = true;
                }
                _ => {}
            }
        }
        for v in 0..g.vertex_count() {
            let t = g.vertex(v);
            let unknown: Vec<usize> = t.iter().copied().filter(|&h| a[h].is_none()).collect();
            if unknown.len() == 1 {
                let known: i64 = t.iter().filter_map(|&h| a[h]).sum();
                a[unknown[0]] = Some(2 - known);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let out: Vec<i64> = a.into_iter().collect::<Option<_>>()?;
    let ok = (0..g.vertex_count()).all(|v| g.vertex(v).iter().map(|&h| out[h]).sum::<i64>() == 2)
        && g.internal_edges().iter().all(|&(x, y)| out[x] + out[y] == 0);
    ok.then_some(out)
}

pub fn validate_decoration(g: &TrivalentGraph, dec: &Decoration) -> Result<(), Vec<Violation>> {
    let n = g.half_edge_count();
    if dec.alpha.len() != n || dec.beta.len() != n {
        return Err(vec![Violation::Shape]);
    }
    let mut out = Vec::new();
    for comp in g.components() {
        let has_external = comp.iter().any(|&v| g.vertex(v).iter().any(|&h| g.is_external(h)));
        if !has_external {
            out.push(Violation::VertexSumImpossible {
                vertices: comp.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
            });
        }
    }
    for v in 0..g.vertex_count() {
        let sum: i64 = g.vertex(v).iter().map(|&h| dec.alpha[h]).sum();
        if sum != 2 {
            out.push(Violation::VertexSum {
                vertex: g.vertex_name(v).to_string(),
                sum,
            });
        }
    }
    for (x, y) in g.internal_edges() {
        let sum = dec.alpha[x] + dec.alpha[y];
        if sum != 0 {
            out.push(Violation::EdgeSum {
                x: g.name(x).to_string(),
                y: g.name(y).to_string(),
                sum,
            });
        }
    }
    for x in 0..n {
        let [o0, o1] = g.others(x);
        let [b0, b1] = dec.beta[x];
        let ok01 = reduce(b1 - b0 - dec.alpha[o1] + 1, dec.alpha[x]) == 0;
        let ok10 = reduce(b0 - b1 - dec.alpha[o0] + 1, dec.alpha[x]) == 0;
        for (ok, to) in [(ok01, o1), (ok10, o0)] {
            if !ok {
                out.push(Violation::BetaCongruence {
                    vertex: g.vertex_name(g.vertex_of(x)).to_string(),
                    from: g.name(x).to_string(),
                    to: g.name(to).to_string(),
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

pub(crate) fn ensure_valid(g: &TrivalentGraph, dec: &Decoration) -> Result<(), DecorationError> {
    validate_decoration(g, dec).map_err(DecorationError::Invalid)
}

/// γ_{xy} = β_{xy} − β_{yx} modulo gcd(α_x, α_y).
pub fn gamma(
    g: &TrivalentGraph,
    dec: &Decoration,
    vertex: usize,
    x: usize,
    y: usize,
) -> Result<Residue, DecorationError> {
    let t = g.vertex(vertex);
    if x == y || !t.contains(&x) || !t.contains(&y) {
        return Err(DecorationError::NotAtVertex(
            g.name(x).to_string(),
            g.name(y).to_string(),
        ));
    }
    let v = dec.beta(g, x, y)? - dec.beta(g, y, x)?;
    Ok(Residue::new(v, gcd(dec.alpha[x], dec.alpha[y])))
}

/// The four δ invariants of an internal edge `x1 ∪ y1`, modulo α_{x1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaEdge {
    pub x1: usize,
    pub y1: usize,
    /// Other half-edges at the vertex of `x1`.
    pub xs: [usize; 2],
    /// Other half-edges at the vertex of `y1`.
    pub ys: [usize; 2],
    /// `values[i][j]` is δ_{xs[i] ys[j]}.
    pub values: [[Residue; 2]; 2],
}

impl DeltaEdge {
    pub fn get(&self, a: usize, b: usize) -> Option<Residue> {
        let i = self.xs.iter().position(|&h| h == a)?;
        let j = self.ys.iter().position(|&h| h == b)?;
        Some(self.values[i][j])
    }
}

pub fn delta_edge(g: &TrivalentGraph, dec: &Decoration, x1: usize) -> Result<DeltaEdge, DecorationError> {
    let y1 = g
        .pair(x1)
        .ok_or_else(|| DecorationError::ExternalEdge(g.name(x1).to_string()))?;
    let m = dec.alpha[x1];
    let xs = g.others(x1);
    let ys = g.others(y1);
    let values: [[Residue; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| Residue::new(dec.beta[x1][i] - dec.beta[y1][j], m)));
    // δ_{x2 y3} = δ_{x2 y2} − α_{y3} + 1
    let expected = Residue::new(values[0][0].value() - dec.alpha[ys[1]] + 1, m);
    if values[0][1] != expected {
        return Err(DecorationError::InconsistentBeta(g.name(y1).to_string()));
    }
    Ok(DeltaEdge { x1, y1, xs, ys, values })
}

/// The ideal I_c, as its nonnegative generator.
pub fn cycle_modulus(dec: &Decoration, c: &OrientedCycle) -> i64 {
    gcd_all(c.half_edges().into_iter().map(|h| dec.alpha[h]))
}

/// Alternating β sum around `c`, as an integer lift.
pub fn cycle_b_lift(g: &TrivalentGraph, dec: &Decoration, c: &OrientedCycle) -> Result<i64, DecorationError> {
    let mut total = 0;
    for s in c.steps(g) {
        total += dec.beta(g, s.outward, s.inward)? - dec.beta(g, s.inward, s.outward)?;
    }
    Ok(total)
}

/// b_c by the β sum, the γ sum over vertices and the δ sum over edges.
pub fn cycle_b_three_ways(
    g: &TrivalentGraph,
    dec: &Decoration,
    c: &OrientedCycle,
) -> Result<[Residue; 3], DecorationError> {
    let m = cycle_modulus(dec, c);
    let steps = c.steps(g);
    let by_beta = Residue::new(cycle_b_lift(g, dec, c)?, m);
    let mut by_gamma = 0;
    for s in &steps {
        by_gamma += gamma(g, dec, s.vertex, s.outward, s.inward)?.value();
    }
    let mut by_delta = 0;
    let k = steps.len();
    for i in 0..k {
        let d = delta_edge(g, dec, steps[i].outward)?;
        let r = d
            .get(steps[i].inward, steps[(i + 1) % k].outward)
            .ok_or_else(|| DecorationError::Internal("cycle step outside its edge".into()))?;
        by_delta += r.value();
    }
    Ok([by_beta, Residue::new(by_gamma, m), Residue::new(by_delta, m)])
}

pub fn cycle_b(g: &TrivalentGraph, dec: &Decoration, c: &OrientedCycle) -> Result<Residue, DecorationError> {
    let [a, b, d] = cycle_b_three_ways(g, dec, c)?;
    if a != b || a != d {
        return Err(DecorationError::Internal(format!(
            "cycle invariant disagrees: {a}, {b}, {d}"
        )));
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrivialMod {
    /// Adds `n` to all six β at a vertex.
    V { vertex: String, n: i64 },
    /// Adds `m` to the four β with source on the internal edge.
    I { edge: (String, String), m: i64 },
    /// Adds `m` to both β with source an external half-edge.
    E { half_edge: String, m: i64 },
}

impl TrivialMod {
    pub fn inverse(&self) -> TrivialMod {
        match self {
            TrivialMod::V { vertex, n } => TrivialMod::V {
                vertex: vertex.clone(),
                n: -n,
            },
            TrivialMod::I { edge, m } => TrivialMod::I {
                edge: edge.clone(),
                m: -m,
            },
            TrivialMod::E { half_edge, m } => TrivialMod::E {
                half_edge: half_edge.clone(),
                m: -m,
            },
        }
    }
}

pub fn apply_trivial_mod(g: &TrivalentGraph, dec: &Decoration, m: &TrivialMod) -> Result<Decoration, DecorationError> {
    let mut out = dec.clone();
    match m {
        TrivialMod::V { vertex, n } => {
            let v = g
                .vertex_index(vertex)
                .ok_or_else(|| DecorationError::BadTarget(format!("no vertex {vertex}")))?;
            for h in g.vertex(v) {
                out.shift_source(h, *n);
            }
        }
        TrivialMod::I { edge, m } => {
            let x = g.index_of(&edge.0);
            let y = g.index_of(&edge.1);
            match (x, y) {
                (Some(x), Some(y)) if g.pair(x) == Some(y) => {
                    out.shift_source(x, *m);
                    out.shift_source(y, *m);
                }
                _ => {
                    return Err(DecorationError::BadTarget(format!(
                        "{}-{} is not an internal edge",
                        edge.0, edge.1
                    )))
                }
            }
        }
        TrivialMod::E { half_edge, m } => match g.index_of(half_edge) {
            Some(x) if g.is_external(x) => out.shift_source(x, *m),
            _ => {
                return Err(DecorationError::BadTarget(format!(
                    "{half_edge} is not an external half-edge"
                )))
            }
        },
    }
    Ok(out)
}

pub fn apply_trivial_mods(
    g: &TrivalentGraph,
    dec: &Decoration,
    mods: &[TrivialMod],
) -> Result<Decoration, DecorationError> {
    mods.iter().try_fold(dec.clone(), |d, m| apply_trivial_mod(g, &d, m))
}

/// The move generators in lattice order: V per vertex, I per internal edge,
/// E per external half-edge (index order).
fn move_generators(g: &TrivalentGraph) -> Vec<(TrivialMod, Vec<usize>)> {
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        out.push((
            TrivialMod::V {
                vertex: g.vertex_name(v).to_string(),
                n: 1,
            },
            g.vertex(v).to_vec(),
        ));
    }
    for (x, y) in g.internal_edges() {
        out.push((
            TrivialMod::I {
                edge: (g.name(x).to_string(), g.name(y).to_string()),
                m: 1,
            },
            vec![x, y],
        ));
    }
    for x in 0..g.half_edge_count() {
        if g.is_external(x) {
            out.push((
                TrivialMod::E {
                    half_edge: g.name(x).to_string(),
                    m: 1,
                },
                vec![x],
            ));
        }
    }
    out
}

fn scaled(m: &TrivialMod, k: i64) -> TrivialMod {
    match m {
        TrivialMod::V { vertex, .. } => TrivialMod::V {
            vertex: vertex.clone(),
            n: k,
        },
        TrivialMod::I { edge, .. } => TrivialMod::I {
            edge: edge.clone(),
            m: k,
        },
        TrivialMod::E { half_edge, .. } => TrivialMod::E {
            half_edge: half_edge.clone(),
            m: k,
        },
    }
}

/// Decides whether `dec2` is reachable from `dec1` by trivial modifications.
///
/// Every move shifts both lifts of a source by the same amount, so it is
/// enough to track one coordinate per source half-edge: `d_x`, the shift of
/// β from `x` to its first neighbour, taken modulo α_x. The answer is
/// membership of `d` in the lattice spanned by the move vectors and the
/// vectors α_x·e_x.
pub fn trivial_mod_equivalent(
    g: &TrivalentGraph,
    dec1: &Decoration,
    dec2: &Decoration,
) -> Result<Option<Vec<TrivialMod>>, DecorationError> {
    if dec1.alpha != dec2.alpha {
        return Err(DecorationError::AlphaMismatch);
    }
    let n = g.half_edge_count();
    let alpha = &dec1.alpha;
    let d: Vec<i64> = (0..n).map(|x| dec2.beta[x][0] - dec1.beta[x][0]).collect();
    for x in 0..n {
        let d1 = dec2.beta[x][1] - dec1.beta[x][1];
        if reduce(d1 - d[x], alpha[x]) != 0 {
            return Err(DecorationError::InconsistentBeta(g.name(x).to_string()));
        }
    }
    let gens = move_generators(g);
    let settles = |res: &[i64]| (0..n).all(|x| reduce(res[x], alpha[x]) == 0);
    if settles(&d) {
        return Ok(Some(Vec::new()));
    }
    // a single move is the common case when checking one step
    for (m, support) in &gens {
        let candidates: BTreeSet<i64> = support.iter().map(|&x| d[x]).collect();
        for k in candidates {
            let mut res = d.clone();
            for &x in support {
                res[x] -= k;
            }
            if settles(&res) {
                return Ok(Some(vec![scaled(m, k)]));
            }
        }
    }
    let mut rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|(_, support)| {
            let mut r = vec![0i128; n];
            for &x in support {
                r[x] += 1;
            }
            r
        })
        .collect();
    for x in 0..n {
        if alpha[x] != 0 {
            let mut r = vec![0i128; n];
            r[x] = alpha[x] as i128;
            rows.push(r);
        }
    }
    let overflow = |_| DecorationError::Internal("lattice arithmetic overflow".into());
    let lattice = Lattice::new(n, &rows).map_err(overflow)?;
    let target: Vec<i128> = d.iter().map(|&v| v as i128).collect();
    let Some(coef) = lattice.solve(&target).map_err(overflow)? else {
        return Ok(None);
    };
    let mut script = Vec::new();
    for ((m, _), &c) in gens.iter().zip(&coef) {
        if c != 0 {
            let k = i64::try_from(c).map_err(|_| DecorationError::Internal("witness too large".into()))?;
            script.push(scaled(m, k));
        }
    }
    let check = apply_trivial_mods(g, dec1, &script)?;
    if !check.same_residues(dec2) {
        return Err(DecorationError::Internal("lattice witness does not replay".into()));
    }
    Ok(Some(script))
}

/// A Z₂-valued β with β_{xz} = β_{xy} + 1 at every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakDecoration {
    beta2: Vec<[u8; 2]>,
}

impl WeakDecoration {
    /// `base[x]` is β from `x` to its first neighbour.
    pub fn from_base(base: &[u8]) -> WeakDecoration {
        WeakDecoration {
            beta2: base.iter().map(|&b| [b & 1, (b + 1) & 1]).collect(),
        }
    }

    /// Reduction of a decoration whose α values are all even.
    pub fn from_decoration(g: &TrivalentGraph, dec: &Decoration) -> Result<WeakDecoration, DecorationError> {
        if let Some(h) = (0..g.half_edge_count()).find(|&h| dec.alpha[h] % 2 != 0) {
            return Err(DecorationError::OddAlpha(g.name(h).to_string()));
        }
        Ok(WeakDecoration {
            beta2: dec.beta.iter().map(|r| r.map(|v| v.rem_euclid(2) as u8)).collect(),
        })
    }

    pub fn is_valid(&self) -> bool {
        self.beta2.iter().all(|r| r[1] == (r[0] + 1) & 1)
    }

    pub fn beta(&self, g: &TrivalentGraph, x: usize, y: usize) -> Option<u8> {
        let k = g.others(x).iter().position(|&o| o == y)?;
        Some(self.beta2[x][k])
    }

    /// b_c in Z₂.
    pub fn cycle_b(&self, g: &TrivalentGraph, c: &OrientedCycle) -> u8 {
        c.steps(g)
            .iter()
            .map(|s| self.beta(g, s.outward, s.inward).unwrap() + self.beta(g, s.inward, s.outward).unwrap())
            .sum::<u8>()
            & 1
    }
}

/// Class of a weak decoration as b_c mod 2 over [`cycle_basis`].
pub fn weak_class_of(g: &TrivalentGraph, w: &WeakDecoration) -> Vec<u8> {
    cycle_basis(g).iter().map(|c| w.cycle_b(g, c)).collect()
}

/// Weak class of a decoration with even α.
pub fn weak_class(g: &TrivalentGraph, dec: &Decoration) -> Result<Vec<u8>, DecorationError> {
    Ok(weak_class_of(g, &WeakDecoration::from_decoration(g, dec)?))
}

/// Cyclic order of the half-edges at each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    succ: Vec<usize>,
    pred: Vec<usize>,
}

impl RotationSystem {
    /// `orders` maps each vertex name to its half-edges in cyclic order.
    pub fn new(g: &TrivalentGraph, orders: &BTreeMap<String, [String; 3]>) -> Result<RotationSystem, DecorationError> {
        let n = g.half_edge_count();
        let mut succ = vec![usize::MAX; n];
        let mut pred = vec![usize::MAX; n];
        for v in 0..g.vertex_count() {
            let name = g.vertex_name(v);
            let order = orders
                .get(name)
                .ok_or_else(|| DecorationError::BadRotation(format!("no order for {name}")))?;
            let idx: Vec<usize> = order.iter().map(|h| g.require(h)).collect::<Result<_, _>>()?;
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            if sorted != g.vertex(v) {
                return Err(DecorationError::BadRotation(format!("order at {name}")));
            }
            for k in 0..3 {
                succ[idx[k]] = idx[(k + 1) % 3];
                pred[idx[(k + 1) % 3]] = idx[k];
            }
        }
        Ok(RotationSystem { succ, pred })
    }

    pub fn succ(&self, h: usize) -> usize {
        self.succ[h]
    }

    pub fn pred(&self, h: usize) -> usize {
        self.pred[h]
    }

    /// Face walks. Darts are half-edges traversed away from their vertex;
    /// after an internal dart `h` the walk continues with `succ(pair(h))`,
    /// after an external one it turns around the leaf and continues with
    /// `succ(h)`. Returns each face as its darts, flagged when it touches the
    /// boundary.
    pub fn faces(&self, g: &TrivalentGraph) -> Vec<(Vec<usize>, bool)> {
        let n = g.half_edge_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut darts = Vec::new();
            let mut open = false;
            let mut h = start;
            loop {
                seen[h] = true;
                darts.push(h);
                h = match g.pair(h) {
                    Some(p) => self.succ[p],
                    None => {
                        open = true;
                        self.succ[h]
                    }
                };
                if h == start {
                    break;
                }
            }
            out.push((darts, open));
        }
        out
    }

    /// Euler characteristic check with each external edge ending at its own
    /// leaf vertex.
    pub fn is_planar(&self, g: &TrivalentGraph) -> bool {
        let v = (g.vertex_count() + g.boundary().len()) as i64;
        let e = (g.internal_edges().len() + g.boundary().len()) as i64;
        let f = self.faces(g).len() as i64;
        v - e + f == 2 * g.components().len() as i64
    }

    /// Faces that avoid the boundary, as closed edge walks.
    pub fn interior_faces(&self, g: &TrivalentGraph) -> Vec<Vec<(usize, usize)>> {
        self.faces(g)
            .into_iter()
            .filter(|(_, open)| !open)
            .map(|(darts, _)| darts.iter().map(|&h| (h, g.pair(h).unwrap())).collect())
            .collect()
    }
}

/// β with δ = 0 across every internal edge for the side pairing induced by
/// the embedding. Along a face walk that enters through `pred(u)` and leaves
/// through `u`, the next vertex is left through `succ(v)`, so the pairing is
/// `pred(u) ↔ succ(v)` and `succ(u) ↔ pred(v)`.
pub fn canonical_beta_planar(
    g: &TrivalentGraph,
    rotation: &RotationSystem,
    alpha: &[i64],
) -> Result<Decoration, DecorationError> {
    if !rotation.is_planar(g) {
        return Err(DecorationError::NotPlanar);
    }
    let n = g.half_edge_count();
    // target of the zero lift for each source
    let mut zero_to = vec![usize::MAX; n];
    for (u, v) in g.internal_edges() {
        let m = alpha[u];
        let ok = reduce(alpha[rotation.succ(u)] - alpha[rotation.pred(v)], m) == 0
            && reduce(alpha[rotation.pred(u)] - alpha[rotation.succ(v)], m) == 0;
        if !ok {
            return Err(DecorationError::ConditionFails(
                g.name(u).to_string(),
                g.name(v).to_string(),
            ));
        }
        zero_to[u] = rotation.pred(u);
        zero_to[v] = rotation.succ(v);
    }
    for &x in g.boundary() {
        zero_to[x] = rotation.succ(x);
    }
    let base: Vec<i64> = (0..n)
        .map(|x| {
            let [o0, _] = g.others(x);
            if zero_to[x] == o0 {
                0
            } else {
                // β_{x o1} = 0, so β_{x o0} ≡ α_{o0} − 1
                reduce(alpha[o0] - 1, alpha[x])
            }
        })
        .collect();
    let dec = Decoration::from_base(g, alpha.to_vec(), &base);
    ensure_valid(g, &dec)?;
    Ok(dec)
}
