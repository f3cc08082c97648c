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

//! Corpus and random generators shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::Rng;
use trivalent::cli::parse_decorated_graph;
use trivalent::decoration::{propagate_alpha, Decoration, TrivialMod};
use trivalent::graph::{spanning_tree_edges, OrientedCycle, TrivalentGraph};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

/// Every `.dg` file under `tests/data`, sorted by name.
pub fn named_files() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(data_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "dg"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

pub fn named_corpus() -> Vec<(String, TrivalentGraph, Decoration)> {
    named_files()
        .into_iter()
        .map(|(n, text)| {
            let (g, d) = parse_decorated_graph(&text).unwrap();
            (n, g, d.expect("corpus files are decorated"))
        })
        .collect()
}

/// Builds a graph from loop counts and edge multiplicities; remaining slots
/// become boundary legs. Half-edges are named `h0`, `h1`, ... .
fn graph_from_counts(n: usize, loops: &[usize], mult: &[Vec<usize>]) -> TrivalentGraph {
    let mut slots: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut next = 0;
    let mut fresh = || {
        next += 1;
        format!("h{}", next - 1)
    };
    let mut pairing = Vec::new();
    for v in 0..n {
        for _ in 0..loops[v] {
            let (a, b) = (fresh(), fresh());
            slots[v].push(a.clone());
            slots[v].push(b.clone());
            pairing.push((a, b));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..mult[i][j] {
                let (a, b) = (fresh(), fresh());
                slots[i].push(a.clone());
                slots[j].push(b.clone());
                pairing.push((a, b));
            }
        }
    }
    for s in slots.iter_mut() {
        while s.len() < 3 {
            s.push(fresh());
        }
    }
    let vertices = slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("v{i}"), [s[0].clone(), s[1].clone(), s[2].clone()]))
        .collect();
    TrivalentGraph::from_parts(vertices, pairing, None).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn canonical_counts(n: usize, loops: &[usize], mult: &[Vec<usize>]) -> Vec<usize> {
    permutations(n)
        .into_iter()
        .map(|p| {
            let mut key: Vec<usize> = (0..n).map(|i| loops[p[i]]).collect();
            for i in 0..n {
                for j in i + 1..n {
                    key.push(mult[p[i]][p[j]]);
                }
            }
            key
        })
        .min()
        .unwrap()
}

fn connected(n: usize, mult: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if !seen[w] && (mult[v][w] > 0 || mult[w][v] > 0) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// All connected trivalent graphs with 1 to `max_vertices` vertices and at
/// least one boundary leg, up to isomorphism.
pub fn small_graphs(max_vertices: usize) -> Vec<TrivalentGraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut seen = BTreeSet::new();
        let loop_codes = 2usize.pow(n as u32);
        let mult_codes = 4usize.pow(pairs.len() as u32);
        for lc in 0..loop_codes {
            let loops: Vec<usize> = (0..n).map(|i| (lc >> i) & 1).collect();
            for mc in 0..mult_codes {
                let mut mult = vec![vec![0; n]; n];
                let mut c = mc;
                for &(i, j) in &pairs {
                    mult[i][j] = c % 4;
                    c /= 4;
                }
                let degree_ok = (0..n).all(|v| {
                    let d: usize = 2 * loops[v]
                        + (0..n)
                            .map(|w| mult[v.min(w)][v.max(w)] * (v != w) as usize)
                            .sum::<usize>();
                    d <= 3
                });
                let internal: usize =
                    loops.iter().sum::<usize>() + pairs.iter().map(|&(i, j)| mult[i][j]).sum::<usize>();
                if !degree_ok || 3 * n == 2 * internal || !connected(n, &mult) {
                    continue;
                }
                if seen.insert(canonical_counts(n, &loops, &mult)) {
                    out.push(graph_from_counts(n, &loops, &mult));
                }
            }
        }
    }
    out
}

/// A random connected graph with `v` vertices and genus `genus`; needs
/// `v + 2 > 2 * genus` so that a boundary leg remains.
pub fn random_graph_with(rng: &mut impl Rng, v: usize, genus: usize) -> TrivalentGraph {
    assert!(v + 2 > 2 * genus);
    let mut free: Vec<Vec<String>> = (0..v)
        .map(|i| (0..3).map(|k| format!("h{}", 3 * i + k)).collect())
        .collect();
    let names: Vec<[String; 3]> = free
        .iter()
        .map(|s| [s[0].clone(), s[1].clone(), s[2].clone()])
        .collect();
    let mut pairing = Vec::new();
    let take = |free: &mut Vec<Vec<String>>, rng: &mut dyn rand::RngCore, i: usize| {
        let k = rng.random_range(0..free[i].len());
        free[i].swap_remove(k)
    };
    for i in 1..v {
        let open: Vec<usize> = (0..i).filter(|&j| !free[j].is_empty()).collect();
        let j = open[rng.random_range(0..open.len())];
        let a = take(&mut free, rng, i);
        let b = take(&mut free, rng, j);
        pairing.push((a, b));
    }
    for _ in 0..genus {
        let open: Vec<(usize, usize)> = (0..v).flat_map(|i| (0..free[i].len()).map(move |k| (i, k))).collect();
        let a = open[rng.random_range(0..open.len())];
        let rest: Vec<&(usize, usize)> = open.iter().filter(|&&b| b != a).collect();
        let b = *rest[rng.random_range(0..rest.len())];
        let (hi, lo) = if a.1 >= b.1 || a.0 != b.0 { (a, b) } else { (b, a) };
        let x = free[hi.0].remove(hi.1);
        let y = free[lo.0].remove(lo.1);
        pairing.push((x, y));
    }
    let vertices = names
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("v{i}"), s))
        .collect();
    TrivalentGraph::from_parts(vertices, pairing, None).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, max_genus: usize) -> TrivalentGraph {
    let v = rng.random_range(1..=max_vertices);
    let top = max_genus.min(v.div_ceil(2));
    let genus = rng.random_range(0..=top);
    random_graph_with(rng, v, genus)
}

/// Random α from free values in `±range`, then random β bases in `±range`.
pub fn random_decoration(rng: &mut impl Rng, g: &TrivalentGraph, range: i64) -> Decoration {
    random_decoration_filtered(rng, g, range, |_| true)
}

pub fn random_decoration_filtered(
    rng: &mut impl Rng,
    g: &TrivalentGraph,
    range: i64,
    free_value: impl Fn(i64) -> bool,
) -> Decoration {
    let tree = spanning_tree_edges(g);
    let mut free: Vec<usize> = g
        .internal_edges()
        .into_iter()
        .filter(|e| !tree.contains(e))
        .map(|(p, _)| p)
        .collect();
    let b = g.boundary();
    free.extend(b.iter().take(b.len() - 1));
    loop {
        let mut partial = vec![None; g.half_edge_count()];
        for &h in &free {
            let v = loop {
                let v = rng.random_range(-range..=range);
                if free_value(v) {
                    break v;
                }
            };
            partial[h] = Some(v);
        }
        let Some(alpha) = propagate_alpha(g, &partial) else {
            continue;
        };
        let base: Vec<i64> = (0..g.half_edge_count())
            .map(|_| rng.random_range(-range..=range))
            .collect();
        return Decoration::from_base(g, alpha, &base);
    }
}

/// Random decoration with every α even.
pub fn random_even_decoration(rng: &mut impl Rng, g: &TrivalentGraph, range: i64) -> Decoration {
    random_decoration_filtered(rng, g, range, |v| v % 2 == 0)
}

pub fn random_trivial_mod(rng: &mut impl Rng, g: &TrivalentGraph) -> TrivialMod {
    let internal = g.internal_edges();
    let k = rng.random_range(1..=3i64) * if rng.random_bool(0.5) { 1 } else { -1 };
    loop {
        match rng.random_range(0..3) {
            0 => {
                let v = rng.random_range(0..g.vertex_count());
                return TrivialMod::V {
                    vertex: g.vertex_name(v).to_string(),
                    n: k,
                };
            }
            1 if !internal.is_empty() => {
                let (x, y) = internal[rng.random_range(0..internal.len())];
                let (x, y) = if rng.random_bool(0.5) { (x, y) } else { (y, x) };
                return TrivialMod::I {
                    edge: (g.name(x).to_string(), g.name(y).to_string()),
                    m: k,
                };
            }
            2 if !g.boundary().is_empty() => {
                let b = g.boundary();
                return TrivialMod::E {
                    half_edge: g.name(b[rng.random_range(0..b.len())]).to_string(),
                    m: k,
                };
            }
            _ => {}
        }
    }
}

/// Named files plus every small graph with `per_graph` random decorations.
pub fn corpus(rng: &mut impl Rng, per_graph: usize) -> Vec<(String, TrivalentGraph, Decoration)> {
    let mut out = named_corpus();
    for (i, g) in small_graphs(4).into_iter().enumerate() {
        for k in 0..per_graph {
            let d = random_decoration(rng, &g, 6);
            out.push((format!("small{i}.{k}"), g.clone(), d));
        }
    }
    out
}

/// Image of a cycle through the moved edge `u-v` on the graph after the move,
/// with a flag set when the image dropped that edge. `None` when the cycle
/// does not use the edge.
pub fn transport_cycle(g2: &TrivalentGraph, u: usize, v: usize, c: &OrientedCycle) -> Option<(OrientedCycle, bool)> {
    let edges = c.edges();
    let k = edges.len();
    let i = edges.iter().position(|&e| e == (u, v) || e == (v, u))?;
    let entered = edges[(i + k - 1) % k].1;
    let left = edges[(i + 1) % k].0;
    let mut out: Vec<(usize, usize)> = edges.to_vec();
    let shorter = g2.vertex_of(entered) == g2.vertex_of(left);
    if shorter {
        out.remove(i);
    } else if g2.vertex_of(u) == g2.vertex_of(entered) {
        out[i] = (u, v);
    } else {
        out[i] = (v, u);
    }
    Some((OrientedCycle::new(g2, out).expect("transported cycle"), shorter))
}

/// Every simple oriented cycle, one orientation and rotation each.
pub fn simple_cycles(g: &TrivalentGraph) -> Vec<OrientedCycle> {
    let mut found = BTreeSet::new();
    fn walk(
        g: &TrivalentGraph,
        start: usize,
        path: &mut Vec<(usize, usize)>,
        visited: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<(usize, usize)>>,
    ) {
        let here = match path.last() {
            Some(&(_, inn)) => g.vertex_of(inn),
            None => start,
        };
        let arrived = path.last().map(|&(_, inn)| inn);
        for out in g.vertex(here) {
            if Some(out) == arrived {
                continue;
            }
            let Some(inn) = g.pair(out) else { continue };
            let next = g.vertex_of(inn);
            if next == start {
                if path.first().is_some_and(|&(o, _)| o == inn) {
                    continue;
                }
                path.push((out, inn));
                let mut key = path.clone();
                let rot = key.iter().enumerate().min_by_key(|(_, e)| **e).unwrap().0;
                key.rotate_left(rot);
                let rev: Vec<(usize, usize)> = {
                    let mut r: Vec<(usize, usize)> = key.iter().rev().map(|&(a, b)| (b, a)).collect();
                    let rot = r.iter().enumerate().min_by_key(|(_, e)| **e).unwrap().0;
                    r.rotate_left(rot);
                    r
                };
                found.insert(key.min(rev));
                path.pop();
            } else if next > start && !visited.contains(&next) {
                visited.push(next);
                path.push((out, inn));
                walk(g, start, path, visited, found);
                path.pop();
                visited.pop();
            }
        }
    }
    for s in 0..g.vertex_count() {
        walk(g, s, &mut Vec::new(), &mut vec![s], &mut found);
    }
    found
        .into_iter()
        .filter_map(|e| OrientedCycle::new(g, e).ok())
        .collect()
}

/// Wheel (one vertex, loop `x-y`, boundary `z`) with α_x = a and b_c = b.
pub fn wheel(a: i64, b: i64) -> (TrivalentGraph, Decoration) {
    let g = trivalent::graph::build_graph(&[["x", "y", "z"]], &[("x", "y")]).unwrap();
    let c = &trivalent::graph::cycle_basis(&g)[0];
    let with = |t: i64| Decoration::from_base(&g, vec![a, -a, 2], &[0, t, 0]);
    let b0 = trivalent::decoration::cycle_b_lift(&g, &with(0), c).unwrap();
    let b1 = trivalent::decoration::cycle_b_lift(&g, &with(1), c).unwrap();
    let d = with((b - b0) * (b1 - b0));
    assert!(trivalent::decoration::cycle_b(&g, &d, c).unwrap().represents(b));
    (g, d)
}

/// Random cyclic orders at every vertex.
pub fn random_rotation(rng: &mut impl Rng, g: &TrivalentGraph) -> BTreeMap<String, [String; 3]> {
    (0..g.vertex_count())
        .map(|v| {
            let [a, b, c] = g.vertex(v).map(|h| g.name(h).to_string());
            let order = if rng.random_bool(0.5) { [a, b, c] } else { [a, c, b] };
            (g.vertex_name(v).to_string(), order)
        })
        .collect()
}
