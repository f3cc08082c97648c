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

//! The classification of decorations up to trivial modifications and IH
//! moves: Ã in genus one, the cycle system 𝔠 and the Arf invariant in higher
//! genus, the four classes, the decision procedure and the normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::cli::serialize;
use crate::decoration::{
    cycle_b, cycle_b_lift, ensure_valid, gcd, gcd_all, propagate_alpha, weak_class, Decoration, DecorationError,
    Residue,
};
use crate::graph::{boundary_map_indices, cycle_basis, GraphError, OrientedCycle, TrivalentGraph};
use crate::moves::{ih_apply, plan_apple_tree, MoveError, MoveScript, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error("graph is not connected")]
    NotConnected,
    #[error("expected genus 1, found genus {0}")]
    WrongGenus(usize),
    #[error("conditions fail: {0}")]
    ConditionsFail(String),
    #[error("tuple reduction stuck at {0}")]
    ReductionStuck(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl InvariantError {
    /// Whether this error signals a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        match self {
            InvariantError::Internal(_)
            | InvariantError::ReductionStuck(_)
            | InvariantError::Decoration(DecorationError::Internal(_)) => true,
            InvariantError::Move(e) => e.is_internal(),
            _ => false,
        }
    }
}

fn require_connected(g: &TrivalentGraph) -> Result<(), InvariantError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(InvariantError::NotConnected)
    }
}

/// gcd of α_x − 2 over the boundary.
pub fn boundary_gcd(g: &TrivalentGraph, dec: &Decoration) -> i64 {
    gcd_all(g.boundary().iter().map(|&h| dec.alpha(h) - 2))
}

/// Ã = gcd(α_x − 2 over the boundary, a, b) for a connected genus-one graph,
/// with `a` the α of a half-edge on the cycle and `b` a lift of its cycle
/// invariant.
pub fn a_tilde(g: &TrivalentGraph, dec: &Decoration) -> Result<i64, InvariantError> {
    require_connected(g)?;
    if g.genus() != 1 {
        return Err(InvariantError::WrongGenus(g.genus()));
    }
    let c = &cycle_basis(g)[0];
    let a = dec.alpha(c.edges()[0].0);
    let b = cycle_b_lift(g, dec, c)?;
    Ok(gcd_all([boundary_gcd(g, dec), a, b]))
}

/// Checks that every α is even and every boundary α is 2 mod 4.
fn check_alpha_conditions(g: &TrivalentGraph, dec: &Decoration) -> Result<(), InvariantError> {
    if let Some(h) = (0..g.half_edge_count()).find(|&h| dec.alpha(h) % 2 != 0) {
        return Err(InvariantError::ConditionsFail(format!("alpha is odd on {}", g.name(h))));
    }
    if let Some(&h) = g.boundary().iter().find(|&&h| dec.alpha(h).rem_euclid(4) != 2) {
        return Err(InvariantError::ConditionsFail(format!(
            "boundary alpha on {} is not 2 mod 4",
            g.name(h)
        )));
    }
    Ok(())
}

/// The disjoint cycles formed by internal edges with α ≡ 0 mod 4.
pub fn frak_c(g: &TrivalentGraph, dec: &Decoration) -> Result<Vec<OrientedCycle>, InvariantError> {
    check_alpha_conditions(g, dec)?;
    let in_c = |h: usize| g.pair(h).is_some() && dec.alpha(h).rem_euclid(4) == 0;
    for v in 0..g.vertex_count() {
        let deg = g.vertex(v).iter().filter(|&&h| in_c(h)).count();
        if deg != 0 && deg != 2 {
            return Err(InvariantError::Internal(format!(
                "vertex {} meets {deg} half-edges with alpha 0 mod 4",
                g.vertex_name(v)
            )));
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in 0..g.half_edge_count() {
        if !in_c(start) || seen.contains(&start) {
            continue;
        }
        let mut edges = Vec::new();
        let mut h = start;
        loop {
            let p = g.pair(h).unwrap();
            seen.insert(h);
            seen.insert(p);
            edges.push((h, p));
            h = g
                .vertex(g.vertex_of(p))
                .into_iter()
                .find(|&k| k != p && in_c(k))
                .unwrap();
            if h == start {
                break;
            }
        }
        out.push(OrientedCycle::new(g, edges)?);
    }
    Ok(out)
}

/// A = Σ over 𝔠 of (b_c / 2 + 1) mod 2. Defined when α is even everywhere,
/// boundary α ≡ 2 mod 4 and every b_c is even.
pub fn arf(g: &TrivalentGraph, dec: &Decoration) -> Result<u8, InvariantError> {
    let cycles = frak_c(g, dec)?;
    if weak_class(g, dec)?.iter().any(|&b| b != 0) {
        return Err(InvariantError::ConditionsFail("some cycle has odd b".into()));
    }
    let mut total = 0;
    for c in &cycles {
        let b = cycle_b(g, dec, c)?.coarsen(4).value();
        if b % 2 != 0 {
            return Err(InvariantError::Internal("odd cycle invariant on an even class".into()));
        }
        total += b / 2 + 1;
    }
    Ok((total % 2) as u8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecorationClass {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for DecorationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecorationClass::I => "I",
            DecorationClass::II => "II",
            DecorationClass::III => "III",
            DecorationClass::IV => "IV",
        })
    }
}

/// The class of a decoration. Parity of b_c is additive over cycles, so
/// checking the cycle basis decides whether some cycle is odd.
pub fn decoration_class(g: &TrivalentGraph, dec: &Decoration) -> Result<DecorationClass, InvariantError> {
    require_connected(g)?;
    if (0..g.half_edge_count()).any(|h| dec.alpha(h) % 2 != 0) {
        return Ok(DecorationClass::I);
    }
    if weak_class(g, dec)?.iter().any(|&b| b != 0) {
        return Ok(DecorationClass::I);
    }
    if g.boundary().iter().any(|&h| dec.alpha(h).rem_euclid(4) == 0) {
        return Ok(DecorationClass::II);
    }
    Ok(match arf(g, dec)? {
        0 => DecorationClass::III,
        _ => DecorationClass::IV,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub genus: usize,
    /// Boundary half-edges with their α, in declared order.
    pub boundary_alpha: Vec<(String, i64)>,
    /// b_c over the cycle basis.
    pub cycle_b: Vec<Residue>,
    pub a_tilde: Option<i64>,
    pub class: Option<DecorationClass>,
    pub arf: Option<u8>,
}

impl InvariantReport {
    pub fn to_json(&self) -> Value {
        let mut v = self.record_json();
        v["cycle_b"] = Value::Array(
            self.cycle_b
                .iter()
                .map(|r| json!({"modulus": r.modulus(), "value": r.value()}))
                .collect(),
        );
        v
    }

    fn record_json(&self) -> Value {
        let boundary: Vec<Value> = self
            .boundary_alpha
            .iter()
            .map(|(n, a)| json!({"alpha": a, "half_edge": n}))
            .collect();
        let mut v = json!({"genus": self.genus, "boundary": boundary});
        if let Some(a) = self.a_tilde {
            v["a_tilde"] = json!(a);
        }
        if let Some(c) = self.class {
            v["class"] = json!(c.to_string());
        }
        if let Some(a) = self.arf {
            v["arf"] = json!(a);
        }
        v
    }

    /// Comparable record: everything except the basis-dependent cycle values.
    pub fn record(&self) -> String {
        self.record_json().to_string()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("genus {}\n", self.genus);
        for (n, a) in &self.boundary_alpha {
            out.push_str(&format!("boundary {n} alpha {a}\n"));
        }
        for (i, r) in self.cycle_b.iter().enumerate() {
            out.push_str(&format!("cycle {i} b {r}\n"));
        }
        if let Some(a) = self.a_tilde {
            out.push_str(&format!("a_tilde {a}\n"));
        }
        if let Some(c) = self.class {
            out.push_str(&format!("class {c}\n"));
        }
        if let Some(a) = self.arf {
            out.push_str(&format!("arf {a}\n"));
        }
        out
    }
}

pub fn classify(g: &TrivalentGraph, dec: &Decoration) -> Result<InvariantReport, InvariantError> {
    require_connected(g)?;
    ensure_valid(g, dec)?;
    let genus = g.genus();
    let cycle_b = cycle_basis(g)
        .iter()
        .map(|c| cycle_b(g, dec, c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = InvariantReport {
        genus,
        boundary_alpha: g
            .boundary()
            .iter()
            .map(|&h| (g.name(h).to_string(), dec.alpha(h)))
            .collect(),
        cycle_b,
        a_tilde: None,
        class: None,
        arf: None,
    };
    if genus == 1 {
        report.a_tilde = Some(a_tilde(g, dec)?);
    } else if genus >= 2 {
        let class = decoration_class(g, dec)?;
        report.class = Some(class);
        if matches!(class, DecorationClass::III | DecorationClass::IV) {
            report.arf = Some(arf(g, dec)?);
        }
    }
    Ok(report)
}

/// Decides equivalence under trivial modifications and IH moves, given a
/// boundary identification `g1 -> g2`.
pub fn equivalent(
    g1: &TrivalentGraph,
    dec1: &Decoration,
    g2: &TrivalentGraph,
    dec2: &Decoration,
    boundary_map: &BTreeMap<String, String>,
) -> Result<bool, InvariantError> {
    let pairs = boundary_map_indices(g1, g2, boundary_map)?;
    require_connected(g1)?;
    require_connected(g2)?;
    ensure_valid(g1, dec1)?;
    ensure_valid(g2, dec2)?;
    if g1.genus() != g2.genus() {
        return Ok(false);
    }
    if pairs.iter().any(|&(a, b)| dec1.alpha(a) != dec2.alpha(b)) {
        return Ok(false);
    }
    Ok(match g1.genus() {
        0 => true,
        1 => a_tilde(g1, dec1)? == a_tilde(g2, dec2)?,
        _ => decoration_class(g1, dec1)? == decoration_class(g2, dec2)?,
    })
}

/// Loop data of an apple tree: `(α_i, b̃_i)` per loop and the boundary α.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopTuple {
    pub pairs: Vec<(i64, i64)>,
    pub boundary_alpha: Vec<i64>,
}

impl LoopTuple {
    fn boundary_gcd(&self) -> i64 {
        gcd_all(self.boundary_alpha.iter().map(|a| a - 2))
    }

    /// Class computed from the tuple alone (genus at least 2). The tree part
    /// of an apple tree has α ≡ 2 mod 4 whenever the boundary does, so 𝔠 is
    /// the set of loops with α ≡ 0 mod 4.
    pub fn class(&self) -> DecorationClass {
        let odd = |v: &i64| v.rem_euclid(2) != 0;
        if self.boundary_alpha.iter().any(odd) || self.pairs.iter().any(|(a, b)| odd(a) || odd(b)) {
            return DecorationClass::I;
        }
        if self.boundary_alpha.iter().any(|a| a.rem_euclid(4) == 0) {
            return DecorationClass::II;
        }
        let arf: i64 = self
            .pairs
            .iter()
            .filter(|(a, _)| a.rem_euclid(4) == 0)
            .map(|(_, b)| b.rem_euclid(4) / 2 + 1)
            .sum();
        if arf % 2 == 0 {
            DecorationClass::III
        } else {
            DecorationClass::IV
        }
    }

    /// Ã of a one-loop tuple.
    pub fn a_tilde(&self) -> i64 {
        let (a, b) = self.pairs[0];
        gcd_all([self.boundary_gcd(), a, b])
    }
}

impl fmt::Display for LoopTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "({})", ps.join(","))
    }
}

/// (a, b) to (gcd, 0) using b ↦ b mod a, (a, b) ↦ (b, −a) and negation.
fn euclid((mut a, mut b): (i64, i64)) -> (i64, i64) {
    while b != 0 {
        if a != 0 {
            b = b.rem_euclid(a.abs());
            if b == 0 {
                break;
            }
        }
        (a, b) = (b, -a);
    }
    (a.abs(), 0)
}

/// Reduces one pair given the step `m` by which α may move.
fn reduce_pair(p: (i64, i64), m: i64, high_genus: bool) -> (i64, i64) {
    let (h, _) = euclid(p);
    let mut out = if m == 0 { (h, 0) } else { euclid((m, -h)) };
    if high_genus && out.0 == 4 {
        out = (0, 0);
    }
    out
}

/// The pairwise move (α₁, b̃₁, α₂, b̃₂) ↦ (α₁, b̃₁ + b̃₂ − 2, α₂ − α₁ + 2, b̃₂).
fn pair_move(p: (i64, i64), q: (i64, i64)) -> ((i64, i64), (i64, i64)) {
    ((p.0, p.1 + q.1 - 2), (q.0 - p.0 + 2, q.1))
}

fn is_canonical(t: &LoopTuple, class: DecorationClass) -> bool {
    let g = t.pairs.len();
    match g {
        0 => true,
        1 => t.pairs[0] == (t.a_tilde(), 0),
        _ => {
            let rest_two = t.pairs[1..].iter().all(|&p| p == (2, 0));
            match class {
                DecorationClass::I => t.pairs.iter().all(|&p| p == (1, 0)),
                DecorationClass::II | DecorationClass::III => t.pairs[0] == (2, 0) && rest_two,
                DecorationClass::IV => t.pairs[0] == (0, 0) && rest_two,
            }
        }
    }
}

/// Reduces loop data to the canonical tuple of its class. In genus one the
/// result is (Ã, 0); in higher genus α may move by gcd(4, α_x − 2).
pub fn tuple_reduce(t: &LoopTuple, class: Option<DecorationClass>) -> Result<LoopTuple, InvariantError> {
    let g = t.pairs.len();
    let stuck = |t: &LoopTuple| InvariantError::ReductionStuck(t.to_string());
    if g == 0 {
        return Ok(t.clone());
    }
    if g == 1 {
        let m = t.boundary_gcd();
        let out = LoopTuple {
            pairs: vec![reduce_pair(t.pairs[0], m, false)],
            boundary_alpha: t.boundary_alpha.clone(),
        };
        if out.a_tilde() != t.a_tilde() || !is_canonical(&out, DecorationClass::I) {
            return Err(stuck(&out));
        }
        return Ok(out);
    }
    let class_in = t.class();
    if class.is_some_and(|c| c != class_in) {
        return Err(InvariantError::Internal(format!(
            "tuple {t} has class {class_in}, expected {}",
            class.unwrap()
        )));
    }
    let m = gcd(4, t.boundary_gcd());
    let mut pairs: Vec<(i64, i64)> = t.pairs.iter().map(|&p| reduce_pair(p, m, true)).collect();
    if let Some(i) = pairs.iter().position(|&p| p == (1, 0)) {
        for j in 0..g {
            if j != i && pairs[j] != (1, 0) {
                let (p, q) = pair_move(pairs[i], pairs[j]);
                pairs[i] = reduce_pair(p, m, true);
                pairs[j] = reduce_pair(q, m, true);
            }
        }
    }
    loop {
        let zeros: Vec<usize> = (0..g).filter(|&k| pairs[k] == (0, 0)).collect();
        if zeros.len() < 2 {
            break;
        }
        let (p, q) = pair_move(pairs[zeros[0]], pairs[zeros[1]]);
        pairs[zeros[0]] = reduce_pair(p, m, true);
        pairs[zeros[1]] = reduce_pair(q, m, true);
    }
    pairs.sort_unstable();
    let out = LoopTuple {
        pairs,
        boundary_alpha: t.boundary_alpha.clone(),
    };
    if out.class() != class_in || !is_canonical(&out, class_in) {
        return Err(stuck(&out));
    }
    Ok(out)
}

/// A prefix that no boundary name starts with.
fn fresh_prefix(base: &str, taken: &[String]) -> String {
    let mut p = base.to_string();
    while taken.iter().any(|n| n.starts_with(&p)) {
        p.push('_');
    }
    p
}

/// The canonical apple tree: a straight tree whose leaves are the boundary in
/// the given order followed by one stem per loop, each stem ending in a
/// vertex with a loop. Loop `i` has half-edges `l < l′` with α_{l′} = α_i and
/// β_{l′l} = b̃_i; all other base β lifts are 0.
pub fn apple_tree(boundary: &[String], t: &LoopTuple) -> Result<(TrivalentGraph, Decoration), InvariantError> {
    let n = boundary.len();
    let g = t.pairs.len();
    let prefix = fresh_prefix("h", boundary);
    let mut counter = 0;
    let mut fresh = || {
        counter += 1;
        format!("{prefix}{}", counter - 1)
    };
    let mut vertices: Vec<[String; 3]> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut loops: Vec<(String, String)> = Vec::new();
    let mut leaves: Vec<String> = boundary.to_vec();
    let mut stems: Vec<String> = Vec::new();
    for _ in 0..g {
        let (a, b, stem) = (fresh(), fresh(), fresh());
        let (l, l2) = if a < b { (a, b) } else { (b, a) };
        vertices.push([l.clone(), l2.clone(), stem.clone()]);
        edges.push((l.clone(), l2.clone()));
        loops.push((l, l2));
        stems.push(stem);
    }
    let m = n + g;
    if m == 2 && g == 1 {
        // the stem is the boundary edge itself
        vertices[0][2] = boundary[0].clone();
    } else if m == 2 {
        edges.push((stems[0].clone(), stems[1].clone()));
    } else {
        for stem in &stems {
            let s = fresh();
            edges.push((stem.clone(), s.clone()));
            leaves.push(s);
        }
        if m == 3 {
            vertices.push([leaves[0].clone(), leaves[1].clone(), leaves[2].clone()]);
        } else if m > 3 {
            let mut link = fresh();
            vertices.push([leaves[0].clone(), leaves[1].clone(), link.clone()]);
            for leaf in &leaves[2..m - 2] {
                let (back, next) = (fresh(), fresh());
                edges.push((link.clone(), back.clone()));
                vertices.push([back, leaf.clone(), next.clone()]);
                link = next;
            }
            let back = fresh();
            edges.push((link, back.clone()));
            vertices.push([back, leaves[m - 2].clone(), leaves[m - 1].clone()]);
        } else {
            return Err(InvariantError::Internal(format!(
                "no apple tree with {n} ends and genus {g}"
            )));
        }
    }
    let named: Vec<(String, [String; 3])> = vertices
        .into_iter()
        .enumerate()
        .map(|(i, t)| (format!("n{i}"), t))
        .collect();
    let graph = TrivalentGraph::from_parts(named, edges, Some(boundary.to_vec()))?;
    let mut partial = vec![None; graph.half_edge_count()];
    for (k, name) in boundary.iter().enumerate() {
        partial[graph.require(name)?] = Some(t.boundary_alpha[k]);
    }
    for ((l, l2), &(a, _)) in loops.iter().zip(&t.pairs) {
        partial[graph.require(l2)?] = Some(a);
        partial[graph.require(l)?] = Some(-a);
    }
    let alpha = propagate_alpha(&graph, &partial)
        .ok_or_else(|| InvariantError::Internal("boundary alpha does not sum to 2v".into()))?;
    let alpha_map: BTreeMap<String, i64> = (0..graph.half_edge_count())
        .map(|h| (graph.name(h).to_string(), alpha[h]))
        .collect();
    let mut beta: BTreeMap<(String, String), i64> = BTreeMap::new();
    let loop_of: BTreeMap<&str, (&str, i64, bool)> = loops
        .iter()
        .zip(&t.pairs)
        .flat_map(|((l, l2), &(_, b))| {
            [
                (l.as_str(), (l2.as_str(), 0, false)),
                (l2.as_str(), (l.as_str(), b, true)),
            ]
        })
        .collect();
    for h in 0..graph.half_edge_count() {
        let name = graph.name(h);
        let (to, v) = match loop_of.get(name) {
            Some(&(other, b, _)) => (other.to_string(), b),
            None => (graph.name(graph.others(h)[0]).to_string(), 0),
        };
        beta.insert((name.to_string(), to), v);
    }
    let dec = Decoration::new(&graph, &alpha_map, &beta)?;
    ensure_valid(&graph, &dec)?;
    Ok((graph, dec))
}

/// Loop data of a decorated apple tree produced by the planner.
fn extract_tuple(g: &TrivalentGraph, dec: &Decoration, loops: &[(usize, usize)]) -> Result<LoopTuple, InvariantError> {
    let mut pairs = Vec::new();
    for &(p, q) in loops {
        let (l, l2) = (p.min(q), p.max(q));
        let c = OrientedCycle::new(g, vec![(l2, l)])?;
        pairs.push((dec.alpha(l2), cycle_b_lift(g, dec, &c)?));
    }
    Ok(LoopTuple {
        pairs,
        boundary_alpha: g.boundary().iter().map(|&h| dec.alpha(h)).collect(),
    })
}

#[derive(Debug, Clone)]
pub struct NormalForm {
    pub graph: TrivalentGraph,
    pub decoration: Decoration,
    /// IH moves from the input to the intermediate apple tree.
    pub script: MoveScript,
    pub tuple: LoopTuple,
}

impl NormalForm {
    /// Canonical text of the normal form; equal records mean equivalent inputs.
    pub fn record(&self) -> String {
        serialize(&self.graph, Some(&self.decoration))
    }
}

/// Drives the graph to an apple tree with transported decoration, reads off
/// the loop data, reduces it and rebuilds the canonical decorated apple tree.
pub fn normal_form(g: &TrivalentGraph, dec: &Decoration) -> Result<NormalForm, InvariantError> {
    require_connected(g)?;
    ensure_valid(g, dec)?;
    let plan = plan_apple_tree(g, g.boundary())?;
    let mut cur = (g.clone(), dec.clone());
    let mut script = MoveScript::new();
    for mv in &plan.moves {
        let (g2, d2, _) = ih_apply(&cur.0, &cur.1, mv)?;
        cur = (g2, d2);
        script.push(Step::Ih(mv.clone()));
    }
    let loops: Vec<(usize, usize)> = plan.loops.iter().map(|l| (l.p, l.q)).collect();
    let tuple = extract_tuple(&cur.0, &cur.1, &loops)?;
    let genus = loops.len();
    let class = if genus >= 2 {
        let before = decoration_class(g, dec)?;
        if tuple.class() != before {
            return Err(InvariantError::Internal(format!(
                "class changed along the planned moves: {before} to {}",
                tuple.class()
            )));
        }
        Some(before)
    } else {
        if genus == 1 && tuple.a_tilde() != a_tilde(g, dec)? {
            return Err(InvariantError::Internal(
                "a_tilde changed along the planned moves".into(),
            ));
        }
        None
    };
    let reduced = tuple_reduce(&tuple, class)?;
    let boundary: Vec<String> = g.boundary().iter().map(|&h| g.name(h).to_string()).collect();
    let (graph, decoration) = apple_tree(&boundary, &reduced)?;
    Ok(NormalForm {
        graph,
        decoration,
        script,
        tuple: reduced,
    })
}

/// Renames half-edges through an injective map, carrying the decoration.
pub fn rename_decorated(
    g: &TrivalentGraph,
    dec: &Decoration,
    f: &dyn Fn(&str) -> String,
) -> Result<(TrivalentGraph, Decoration), InvariantError> {
    let g2 = g.rename(f)?;
    let alpha: BTreeMap<String, i64> = (0..g.half_edge_count()).map(|h| (f(g.name(h)), dec.alpha(h))).collect();
    let mut beta = BTreeMap::new();
    for x in 0..g.half_edge_count() {
        for y in g.others(x) {
            beta.insert((f(g.name(x)), f(g.name(y))), dec.beta(g, x, y)?);
        }
    }
    Ok((g2.clone(), Decoration::new(&g2, &alpha, &beta)?))
}

/// Renames `g2` so that its boundary carries the `g1` names given by
/// `boundary_map` (a map from `g1` names to `g2` names) in `order`; internal
/// half-edges get fresh names.
pub fn align_decorated(
    g2: &TrivalentGraph,
    dec2: &Decoration,
    boundary_map: &BTreeMap<String, String>,
    order: &[String],
) -> Result<(TrivalentGraph, Decoration), InvariantError> {
    let inverse: BTreeMap<String, String> = boundary_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
    let prefix = fresh_prefix("k", order);
    let index: BTreeMap<String, usize> = (0..g2.half_edge_count()).map(|h| (g2.name(h).to_string(), h)).collect();
    let f = |n: &str| match inverse.get(n) {
        Some(m) => m.clone(),
        None => format!("{prefix}{}", index[n]),
    };
    let (g, d) = rename_decorated(g2, dec2, &f)?;
    let g = g.with_boundary_order(order)?;
    let d = {
        let alpha: BTreeMap<String, i64> = (0..g.half_edge_count())
            .map(|h| (g.name(h).to_string(), d.alpha(h)))
            .collect();
        let mut beta = BTreeMap::new();
        for x in 0..g.half_edge_count() {
            for y in g.others(x) {
                beta.insert((g.name(x).to_string(), g.name(y).to_string()), d.beta(&g, x, y)?);
            }
        }
        Decoration::new(&g, &alpha, &beta)?
    };
    Ok((g, d))
}
