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

//! Brute-force verifiers: the SL₂ orbit of genus-one loop data and bounded
//! orbit exploration under trivial modifications and IH round trips.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde_json::{json, Value};
use thiserror::Error;

use crate::decoration::{apply_trivial_mod, propagate_alpha, Decoration, DecorationError, TrivialMod};
use crate::graph::{spanning_tree_edges, TrivalentGraph};
use crate::invariants::{classify, InvariantError};
use crate::moves::{ih_apply, inverse_move, IhMove, MoveError, Pairing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("window holds more than {0} decorations")]
    TooLarge(usize),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
}

/// BFS closure of `(a, b)` under `(a, b) ↦ (a, b ± a)` and
/// `(a, b) ↦ (±b, ∓a)`, restricted to `|a|, |b| ≤ bound`.
pub fn sl2_orbit(a: i64, b: i64, bound: i64) -> BTreeSet<(i64, i64)> {
    let inside = |(p, q): (i64, i64)| p.abs() <= bound && q.abs() <= bound;
    let mut seen = BTreeSet::new();
    if !inside((a, b)) {
        return seen;
    }
    seen.insert((a, b));
    let mut queue = VecDeque::from([(a, b)]);
    while let Some((p, q)) = queue.pop_front() {
        for next in [(p, q + p), (p, q - p), (q, -p), (-q, p)] {
            if inside(next) && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitBounds {
    /// Largest |parameter| of a trivial modification.
    pub param: i64,
    /// Largest number of BFS rounds.
    pub depth: usize,
    /// Largest number of snapshots kept.
    pub frontier: usize,
    /// Largest |β lift| kept for sources with α = 0, where lifts do not reduce.
    pub value_window: i64,
}

impl Default for OrbitBounds {
    fn default() -> Self {
        OrbitBounds {
            param: 2,
            depth: 3,
            frontier: 100_000,
            value_window: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitResult {
    pub snapshots: Vec<Decoration>,
    pub truncated: bool,
}

fn in_window(dec: &Decoration, window: i64) -> bool {
    (0..dec.alphas().len())
        .filter(|&h| dec.alpha(h) == 0)
        .all(|h| dec.beta_row(h).iter().all(|v| v.abs() <= window))
}

/// Carries a decoration on `g3` back to `g` through the half-edge map `f`
/// (index in `g` to index in `g3`), if `f` preserves incidence.
fn pull_back(
    g: &TrivalentGraph,
    g3: &TrivalentGraph,
    dec3: &Decoration,
    f: &dyn Fn(usize) -> usize,
) -> Option<Decoration> {
    let n = g.half_edge_count();
    let mut alpha = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for x in 0..n {
        if g.pair(x).map(f) != g3.pair(f(x)) {
            return None;
        }
        let [o0, o1] = g.others(x);
        alpha.push(dec3.alpha(f(x)));
        rows.push([dec3.beta(g3, f(x), f(o0)).ok()?, dec3.beta(g3, f(x), f(o1)).ok()?]);
    }
    Some(Decoration::from_raw(alpha, rows))
}

/// Applies `mv` and then the move that restores the partition. The second
/// move may leave the two halves of the edge exchanged; the result is then
/// read through that exchange.
fn ih_round_trip(g: &TrivalentGraph, dec: &Decoration, mv: &IhMove) -> Result<Decoration, MoveError> {
    let (g2, d2, _) = ih_apply(g, dec, mv)?;
    let back = inverse_move(g, &g2, mv)?;
    let (g3, d3, _) = ih_apply(&g2, &d2, &back)?;
    let u = g.require(&mv.edge.0)?;
    let v = g.require(&mv.edge.1)?;
    let swap = move |h: usize| {
        if h == u {
            v
        } else if h == v {
            u
        } else {
            h
        }
    };
    let same = g3.vertex(g3.vertex_of(u)) == g.vertex(g.vertex_of(u));
    let f: &dyn Fn(usize) -> usize = if same { &|h| h } else { &swap };
    pull_back(g, &g3, &d3, f).ok_or_else(|| MoveError::Internal("round trip does not return to the graph".into()))
}

/// All single-step neighbours: trivial modifications with parameters in
/// `±param` and IH round trips on every non-loop edge for both pairings.
fn neighbours(g: &TrivalentGraph, dec: &Decoration, param: i64) -> Result<Vec<Decoration>, OracleError> {
    let mut mods = Vec::new();
    for k in (-param..=param).filter(|&k| k != 0) {
        for v in 0..g.vertex_count() {
            mods.push(TrivialMod::V {
                vertex: g.vertex_name(v).to_string(),
                n: k,
            });
        }
        for (x, y) in g.internal_edges() {
            mods.push(TrivialMod::I {
                edge: (g.name(x).to_string(), g.name(y).to_string()),
                m: k,
            });
        }
        for &x in g.boundary() {
            mods.push(TrivialMod::E {
                half_edge: g.name(x).to_string(),
                m: k,
            });
        }
    }
    let mut out = Vec::new();
    for m in &mods {
        out.push(apply_trivial_mod(g, dec, m)?.canonical());
    }
    for (x, y) in g.internal_edges() {
        if g.is_loop(x) {
            continue;
        }
        for pairing in [Pairing::B, Pairing::C] {
            let mv = IhMove::new(g.name(x), g.name(y), pairing);
            out.push(ih_round_trip(g, dec, &mv)?.canonical());
        }
    }
    Ok(out)
}

/// Bounded BFS orbit of a decoration, deduplicated by least lifts.
pub fn move_orbit(g: &TrivalentGraph, dec: &Decoration, bounds: &OrbitBounds) -> Result<OrbitResult, OracleError> {
    let start = dec.canonical();
    let mut seen: HashSet<Decoration> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut frontier = vec![start];
    let mut truncated = false;
    'outer: for _ in 0..bounds.depth {
        let mut next = Vec::new();
        for d in &frontier {
            for n in neighbours(g, d, bounds.param)? {
                if !in_window(&n, bounds.value_window) || seen.contains(&n) {
                    continue;
                }
                if seen.len() >= bounds.frontier {
                    truncated = true;
                    break 'outer;
                }
                seen.insert(n.clone());
                order.push(n.clone());
                next.push(n);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(OrbitResult {
        snapshots: order,
        truncated,
    })
}

/// Every valid decoration with α in `[-window, window]` and least β lifts
/// (β lifts in the window where α = 0).
pub fn enumerate_decorations(g: &TrivalentGraph, window: i64, limit: usize) -> Result<Vec<Decoration>, OracleError> {
    if !g.is_connected() {
        return Err(OracleError::NotConnected);
    }
    let tree = spanning_tree_edges(g);
    let mut free: Vec<usize> = g
        .internal_edges()
        .into_iter()
        .filter(|e| !tree.contains(e))
        .map(|(p, _)| p)
        .collect();
    let b = g.boundary();
    free.extend(b.iter().take(b.len().saturating_sub(1)));
    let n = g.half_edge_count();
    let mut out = Vec::new();
    let span = (2 * window + 1) as usize;
    let total = span.checked_pow(free.len() as u32).unwrap_or(usize::MAX);
    for code in 0..total {
        let mut partial = vec![None; n];
        let mut c = code;
        for &h in &free {
            partial[h] = Some((c % span) as i64 - window);
            c /= span;
        }
        let Some(alpha) = propagate_alpha(g, &partial) else {
            continue;
        };
        if alpha.iter().any(|a| a.abs() > window) {
            continue;
        }
        let ranges: Vec<Vec<i64>> = alpha
            .iter()
            .map(|&a| {
                if a == 0 {
                    (-window..=window).collect()
                } else {
                    (0..a.abs()).collect()
                }
            })
            .collect();
        let mut idx = vec![0usize; n];
        loop {
            let base: Vec<i64> = (0..n).map(|h| ranges[h][idx[h]]).collect();
            out.push(Decoration::from_base(g, alpha.clone(), &base).canonical());
            if out.len() > limit {
                return Err(OracleError::TooLarge(limit));
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < ranges[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub window: i64,
    pub decorations: usize,
    pub orbits: usize,
    pub classes: usize,
    /// Orbits containing decorations with different invariant records, as
    /// the two records and canonical texts of witnesses.
    pub violations: Vec<(String, String)>,
    /// Number of invariant classes met by more than one orbit in the window.
    pub split_classes: usize,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "scope": "within window",
            "window": self.window,
            "decorations": self.decorations,
            "orbits": self.orbits,
            "classes": self.classes,
            "soundness_violations": self.violations.len(),
            "counterexamples": self.violations.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "classes_split_across_orbits": self.split_classes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "within window ±{}: {} decorations, {} orbits, {} classes\nsoundness violations: {}\nclasses split across orbits: {}\n",
            self.window,
            self.decorations,
            self.orbits,
            self.classes,
            self.violations.len(),
            self.split_classes
        );
        for (a, b) in &self.violations {
            out.push_str(&format!("counterexample: {a} vs {b}\n"));
        }
        out
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partitions the window into orbits of single moves that stay inside it and
/// compares the partition with the invariant records.
pub fn check_classification(
    g: &TrivalentGraph,
    window: i64,
    bounds: &OrbitBounds,
) -> Result<ClassificationReport, OracleError> {
    let decs = enumerate_decorations(g, window, bounds.frontier)?;
    let index: HashMap<Decoration, usize> = decs.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
    let mut parent: Vec<usize> = (0..decs.len()).collect();
    for (i, d) in decs.iter().enumerate() {
        for n in neighbours(g, d, bounds.param)? {
            if let Some(&j) = index.get(&n) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let records: Vec<String> = decs
        .iter()
        .map(|d| classify(g, d).map(|r| r.record()))
        .collect::<Result<_, _>>()?;
    let mut orbit_record: BTreeMap<usize, usize> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut class_orbits: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..decs.len() {
        let root = find(&mut parent, i);
        class_orbits.entry(records[i].as_str()).or_default().insert(root);
        match orbit_record.get(&root) {
            None => {
                orbit_record.insert(root, i);
            }
            Some(&j) if records[j] != records[i] => {
                violations.push((records[j].clone(), records[i].clone()));
            }
            Some(_) => {}
        }
    }
    Ok(ClassificationReport {
        window,
        decorations: decs.len(),
        orbits: orbit_record.len(),
        classes: class_orbits.len(),
        violations,
        split_classes: class_orbits.values().filter(|s| s.len() > 1).count(),
    })
}
