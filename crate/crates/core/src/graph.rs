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

//! Half-edge representation of trivalent graphs.
//!
//! A graph is a set of named half-edges grouped into vertex triples, plus a
//! fixed-point-free partial pairing. Paired half-edges form internal edges;
//! the unpaired ones are the boundary. Loops and multiple edges are allowed.
//!
//! Half-edges are indexed by their position in token order, so every
//! deterministic output (cycle bases, serialization, planner scripts) follows
//! that order. IH moves keep the half-edge set and only regroup vertices, which
//! means indices stay meaningful across a move.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

/// Name of a half-edge.
pub type HalfEdgeId = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid name {0:?}")]
    InvalidName(String),
    #[error("half-edge {0} appears twice in one vertex")]
    DuplicateHalfEdge(String),
    #[error("half-edge {0} belongs to two vertices")]
    HalfEdgeInTwoVertices(String),
    #[error("duplicate vertex name {0}")]
    DuplicateVertex(String),
    #[error("half-edge {0} is paired with itself")]
    SelfPairing(String),
    #[error("pairing references unknown half-edge {0}")]
    DanglingPair(String),
    #[error("half-edge {0} is paired more than once")]
    DoublePairing(String),
    #[error("declared boundary order does not match the unpaired half-edges: {0}")]
    BadBoundaryOrder(String),
    #[error("boundary map is not a bijection between the boundaries: {0}")]
    BadBoundaryMap(String),
    #[error("not a valid oriented cycle: {0}")]
    InvalidCycle(String),
    #[error("unknown half-edge {0}")]
    UnknownHalfEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
}

/// Tokens are nonempty and use only ASCII alphanumerics, `_`, `.` and `'`.
pub fn is_valid_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\'')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrivalentGraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    vertex_names: Vec<String>,
    vertices: Vec<[usize; 3]>,
    vertex_of: Vec<usize>,
    pair: Vec<Option<usize>>,
    boundary: Vec<usize>,
}

/// Builds a graph from unnamed vertex triples; vertices are named `v0`, `v1`, ...
/// in input order.
pub fn build_graph(vertex_triples: &[[&str; 3]], pairing: &[(&str, &str)]) -> Result<TrivalentGraph, GraphError> {
    let named: Vec<(String, [String; 3])> = vertex_triples
        .iter()
        .enumerate()
        .map(|(i, t)| (format!("v{i}"), t.map(str::to_string)))
        .collect();
    let pairs: Vec<(String, String)> = pairing.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    TrivalentGraph::from_parts(named, pairs, None)
}

impl TrivalentGraph {
    /// Builds and validates a graph. `boundary` fixes the boundary order; when
    /// absent the unpaired half-edges are taken in token order.
    pub fn from_parts(
        vertices: Vec<(String, [String; 3])>,
        pairing: Vec<(String, String)>,
        boundary: Option<Vec<String>>,
    ) -> Result<TrivalentGraph, GraphError> {
        let mut owner: BTreeMap<String, String> = BTreeMap::new();
        let mut vnames = BTreeSet::new();
        for (vname, triple) in &vertices {
            if !is_valid_token(vname) {
                return Err(GraphError::InvalidName(vname.clone()));
            }
            if !vnames.insert(vname.clone()) {
                return Err(GraphError::DuplicateVertex(vname.clone()));
            }
            for (k, h) in triple.iter().enumerate() {
                if !is_valid_token(h) {
                    return Err(GraphError::InvalidName(h.clone()));
                }
                if triple[..k].contains(h) {
                    return Err(GraphError::DuplicateHalfEdge(h.clone()));
                }
                if owner.insert(h.clone(), vname.clone()).is_some() {
                    return Err(GraphError::HalfEdgeInTwoVertices(h.clone()));
                }
            }
        }
        let names: Vec<String> = owner.keys().cloned().collect();
        let index: BTreeMap<String, usize> = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let vertex_names: Vec<String> = vnames.into_iter().collect();
        let vindex: BTreeMap<&str, usize> = vertex_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

        let mut vert = vec![[0usize; 3]; vertex_names.len()];
        let mut vertex_of = vec![0usize; names.len()];
        for (vname, triple) in &vertices {
            let vi = vindex[vname.as_str()];
            let mut t = triple.clone().map(|h| index[&h]);
            t.sort_unstable();
            for &h in &t {
                vertex_of[h] = vi;
            }
            vert[vi] = t;
        }

        let mut pair = vec![None; names.len()];
        for (a, b) in &pairing {
            let ia = *index.get(a).ok_or_else(|| GraphError::DanglingPair(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| GraphError::DanglingPair(b.clone()))?;
            if ia == ib {
                return Err(GraphError::SelfPairing(a.clone()));
            }
            for (x, name) in [(ia, a), (ib, b)] {
                if pair[x].is_some() {
                    return Err(GraphError::DoublePairing(name.clone()));
                }
            }
            pair[ia] = Some(ib);
            pair[ib] = Some(ia);
        }

        let unpaired: Vec<usize> = (0..names.len()).filter(|&h| pair[h].is_none()).collect();
        let boundary = match boundary {
            None => unpaired,
            Some(order) => {
                let mut idx = Vec::with_capacity(order.len());
                for n in &order {
                    let i = *index
                        .get(n)
                        .ok_or_else(|| GraphError::BadBoundaryOrder(format!("unknown {n}")))?;
                    idx.push(i);
                }
                let mut sorted = idx.clone();
                sorted.sort_unstable();
                if sorted != unpaired {
                    return Err(GraphError::BadBoundaryOrder(order.join(" ")));
                }
                idx
            }
        };

        Ok(TrivalentGraph {
            names,
            index,
            vertex_names,
            vertices: vert,
            vertex_of,
            pair,
            boundary,
        })
    }

    pub fn half_edge_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn name(&self, h: usize) -> &str {
        &self.names[h]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name)
            .ok_or_else(|| GraphError::UnknownHalfEdge(name.to_string()))
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    /// Half-edges of vertex `v` in ascending index order.
    pub fn vertex(&self, v: usize) -> [usize; 3] {
        self.vertices[v]
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn pair(&self, h: usize) -> Option<usize> {
        self.pair[h]
    }

    pub fn is_external(&self, h: usize) -> bool {
        self.pair[h].is_none()
    }

    /// Boundary half-edges in declared order.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// The two other half-edges at the vertex of `h`, ascending.
    pub fn others(&self, h: usize) -> [usize; 2] {
        let t = self.vertices[self.vertex_of[h]];
        let mut out = [0; 2];
        let mut k = 0;
        for x in t {
            if x != h {
                out[k] = x;
                k += 1;
            }
        }
        out
    }

    /// Internal edges as `(a, b)` with `a < b`, ascending.
    pub fn internal_edges(&self) -> Vec<(usize, usize)> {
        (0..self.names.len())
            .filter_map(|h| match self.pair[h] {
                Some(p) if h < p => Some((h, p)),
                _ => None,
            })
            .collect()
    }

    pub fn is_loop(&self, h: usize) -> bool {
        self.pair[h].is_some_and(|p| self.vertex_of[p] == self.vertex_of[h])
    }

    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for h in self.vertices[v] {
                    if let Some(p) = self.pair[h] {
                        let w = self.vertex_of[p];
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// First Betti number of the whole graph.
    pub fn genus(&self) -> usize {
        let i = self.internal_edges().len();
        i + self.components().len() - self.vertices.len()
    }

    /// Returns a copy with the given vertices regrouped. Half-edge names and
    /// the pairing are unchanged.
    pub(crate) fn regroup(&self, changes: &[(usize, [usize; 3])]) -> TrivalentGraph {
        let mut g = self.clone();
        for &(v, mut t) in changes {
            t.sort_unstable();
            g.vertices[v] = t;
            for h in t {
                g.vertex_of[h] = v;
            }
        }
        g
    }

    /// Renames half-edges through `f`, which must be injective. Vertex names
    /// are kept. The boundary order is carried over.
    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> Result<TrivalentGraph, GraphError> {
        let vertices = (0..self.vertices.len())
            .map(|v| {
                (
                    self.vertex_names[v].clone(),
                    self.vertices[v].map(|h| f(&self.names[h])),
                )
            })
            .collect();
        let pairing = self
            .internal_edges()
            .into_iter()
            .map(|(a, b)| (f(&self.names[a]), f(&self.names[b])))
            .collect();
        let boundary = self.boundary.iter().map(|&h| f(&self.names[h])).collect();
        TrivalentGraph::from_parts(vertices, pairing, Some(boundary))
    }

    /// Same graph with a different declared boundary order.
    pub fn with_boundary_order(&self, order: &[String]) -> Result<TrivalentGraph, GraphError> {
        let vertices = (0..self.vertices.len())
            .map(|v| {
                (
                    self.vertex_names[v].clone(),
                    self.vertices[v].map(|h| self.names[h].clone()),
                )
            })
            .collect();
        let pairing = self
            .internal_edges()
            .into_iter()
            .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect();
        TrivalentGraph::from_parts(vertices, pairing, Some(order.to_vec()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub vertices: usize,
    pub internal: usize,
    pub external: usize,
    pub components: usize,
    /// Genus of each component, in the order of [`TrivalentGraph::components`].
    pub genus: Vec<usize>,
}

pub fn graph_stats(g: &TrivalentGraph) -> GraphStats {
    let comps = g.components();
    let genus = comps
        .iter()
        .map(|comp| {
            let half: usize = comp
                .iter()
                .map(|&v| g.vertex(v).iter().filter(|&&h| g.pair(h).is_some()).count())
                .sum();
            half / 2 + 1 - comp.len()
        })
        .collect();
    GraphStats {
        vertices: g.vertex_count(),
        internal: g.internal_edges().len(),
        external: g.boundary().len(),
        components: comps.len(),
        genus,
    }
}

/// An oriented simple cycle, stored as its traversed edges. Each entry
/// `(out, in)` leaves a vertex through `out` and enters the next vertex
/// through `in = pair(out)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedCycle {
    edges: Vec<(usize, usize)>,
}

/// One visit of a cycle to a vertex: entered through `inward`, left through
/// `outward`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleStep {
    pub vertex: usize,
    pub inward: usize,
    pub outward: usize,
}

impl OrientedCycle {
    pub fn new(g: &TrivalentGraph, edges: Vec<(usize, usize)>) -> Result<OrientedCycle, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::InvalidCycle("empty".into()));
        }
        let k = edges.len();
        let mut seen = BTreeSet::new();
        for i in 0..k {
            let (out, inn) = edges[i];
            if out >= g.half_edge_count() || g.pair(out) != Some(inn) {
                return Err(GraphError::InvalidCycle(format!("edge {i} is not internal")));
            }
            let next_out = edges[(i + 1) % k].0;
            if g.vertex_of(inn) != g.vertex_of(next_out) || inn == next_out {
                return Err(GraphError::InvalidCycle(format!("break after edge {i}")));
            }
            if !seen.insert(g.vertex_of(inn)) {
                return Err(GraphError::InvalidCycle("vertex visited twice".into()));
            }
        }
        Ok(OrientedCycle { edges })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertex visits; step `i` leaves through `edges[i].0`.
    pub fn steps(&self, g: &TrivalentGraph) -> Vec<CycleStep> {
        let k = self.edges.len();
        (0..k)
            .map(|i| {
                let outward = self.edges[i].0;
                let inward = self.edges[(i + k - 1) % k].1;
                CycleStep {
                    vertex: g.vertex_of(outward),
                    inward,
                    outward,
                }
            })
            .collect()
    }

    pub fn reversed(&self) -> OrientedCycle {
        let edges = self.edges.iter().rev().map(|&(a, b)| (b, a)).collect();
        OrientedCycle { edges }
    }

    /// Half-edges on the cycle, ascending.
    pub fn half_edges(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v
    }

    pub fn vertices(&self, g: &TrivalentGraph) -> Vec<usize> {
        self.edges.iter().map(|&(o, _)| g.vertex_of(o)).collect()
    }

    pub fn display(&self, g: &TrivalentGraph) -> String {
        self.edges
            .iter()
            .map(|&(a, b)| format!("{}-{}", g.name(a), g.name(b)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

type Forest = (Vec<Option<(usize, usize)>>, BTreeSet<(usize, usize)>);

/// BFS spanning forest. Returns `parent[v] = Some((half at v, half at parent))`
/// and the set of tree edges as `(a, b)` with `a < b`.
fn spanning_forest(g: &TrivalentGraph) -> Forest {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree = BTreeSet::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for h in g.vertex(v) {
                if let Some(p) = g.pair(h) {
                    let w = g.vertex_of(p);
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((p, h));
                        tree.insert((h.min(p), h.max(p)));
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    (parent, tree)
}

fn path_to_root(parent: &[Option<(usize, usize)>], g: &TrivalentGraph, mut v: usize) -> Vec<usize> {
    let mut out = vec![v];
    while let Some((_, up)) = parent[v] {
        v = g.vertex_of(up);
        out.push(v);
    }
    out
}

/// Tree edges of the BFS spanning forest used by [`cycle_basis`].
pub fn spanning_tree_edges(g: &TrivalentGraph) -> BTreeSet<(usize, usize)> {
    spanning_forest(g).1
}

/// Fundamental cycles of a BFS spanning forest. For a non-tree edge `{p, q}`
/// with `p < q` the cycle leaves through `q`, enters through `p` and returns
/// along the tree.
pub fn cycle_basis(g: &TrivalentGraph) -> Vec<OrientedCycle> {
    let (parent, tree) = spanning_forest(g);
    let mut out = Vec::new();
    for (p, q) in g.internal_edges() {
        if tree.contains(&(p, q)) {
            continue;
        }
        let a = g.vertex_of(p);
        let b = g.vertex_of(q);
        let up_a = path_to_root(&parent, g, a);
        let up_b = path_to_root(&parent, g, b);
        let lca = *up_a
            .iter()
            .find(|v| up_b.contains(v))
            .expect("endpoints share a component");
        let mut edges = vec![(q, p)];
        // a up to the lca
        let mut v = a;
        while v != lca {
            let (down, up) = parent[v].unwrap();
            edges.push((down, up));
            v = g.vertex_of(up);
        }
        // lca down to b
        let mut down_path = Vec::new();
        let mut v = b;
        while v != lca {
            let (down, up) = parent[v].unwrap();
            down_path.push((up, down));
            v = g.vertex_of(up);
        }
        edges.extend(down_path.into_iter().rev());
        out.push(OrientedCycle::new(g, edges).expect("fundamental cycles are simple"));
    }
    out
}

/// A half-edge and vertex bijection between two graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub half_edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl Isomorphism {
    pub fn name_map(&self, g1: &TrivalentGraph, g2: &TrivalentGraph) -> BTreeMap<String, String> {
        self.half_edges
            .iter()
            .enumerate()
            .map(|(a, &b)| (g1.name(a).to_string(), g2.name(b).to_string()))
            .collect()
    }
}

/// Checks that `map` is a bijection `boundary(g1) -> boundary(g2)` and
/// returns it as indices.
pub fn boundary_map_indices(
    g1: &TrivalentGraph,
    g2: &TrivalentGraph,
    map: &BTreeMap<String, String>,
) -> Result<Vec<(usize, usize)>, GraphError> {
    if map.len() != g1.boundary().len() || g1.boundary().len() != g2.boundary().len() {
        return Err(GraphError::BadBoundaryMap(format!(
            "{} entries for boundaries of size {} and {}",
            map.len(),
            g1.boundary().len(),
            g2.boundary().len()
        )));
    }
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    for (a, b) in map {
        let ia = g1
            .index_of(a)
            .filter(|&i| g1.is_external(i))
            .ok_or_else(|| GraphError::BadBoundaryMap(format!("{a} is not external")))?;
        let ib = g2
            .index_of(b)
            .filter(|&i| g2.is_external(i))
            .ok_or_else(|| GraphError::BadBoundaryMap(format!("{b} is not external")))?;
        if !used.insert(ib) {
            return Err(GraphError::BadBoundaryMap(format!("{b} hit twice")));
        }
        out.push((ia, ib));
    }
    Ok(out)
}

#[derive(Clone)]
struct IsoState {
    f: Vec<Option<usize>>,
    finv: Vec<Option<usize>>,
    vmap: Vec<Option<usize>>,
    vinv: Vec<Option<usize>>,
}

impl IsoState {
    fn assign(&mut self, g1: &TrivalentGraph, g2: &TrivalentGraph, a: usize, b: usize, queue: &mut Vec<usize>) -> bool {
        match (self.f[a], self.finv[b]) {
            (Some(x), _) if x != b => return false,
            (_, Some(y)) if y != a => return false,
            (Some(_), Some(_)) => return true,
            _ => {}
        }
        if g1.is_external(a) != g2.is_external(b) {
            return false;
        }
        let (va, vb) = (g1.vertex_of(a), g2.vertex_of(b));
        match (self.vmap[va], self.vinv[vb]) {
            (Some(x), _) if x != vb => return false,
            (_, Some(y)) if y != va => return false,
            _ => {}
        }
        self.f[a] = Some(b);
        self.finv[b] = Some(a);
        self.vmap[va] = Some(vb);
        self.vinv[vb] = Some(va);
        queue.push(a);
        true
    }

    fn propagate(&mut self, g1: &TrivalentGraph, g2: &TrivalentGraph, mut queue: Vec<usize>) -> bool {
        while let Some(a) = queue.pop() {
            let b = self.f[a].unwrap();
            if let (Some(pa), Some(pb)) = (g1.pair(a), g2.pair(b)) {
                if !self.assign(g1, g2, pa, pb, &mut queue) {
                    return false;
                }
            }
            // a vertex with a single unmapped half-edge is forced
            let oa = g1.others(a);
            let ob = g2.others(b);
            let free_a: Vec<usize> = oa.iter().copied().filter(|&h| self.f[h].is_none()).collect();
            let free_b: Vec<usize> = ob.iter().copied().filter(|&h| self.finv[h].is_none()).collect();
            if free_a.len() != free_b.len() {
                return false;
            }
            if free_a.len() == 1 && !self.assign(g1, g2, free_a[0], free_b[0], &mut queue) {
                return false;
            }
        }
        true
    }

    fn search(self, g1: &TrivalentGraph, g2: &TrivalentGraph) -> Option<IsoState> {
        // a mapped vertex with two free half-edges: branch on their order
        for va in 0..g1.vertex_count() {
            let Some(vb) = self.vmap[va] else { continue };
            let free_a: Vec<usize> = g1.vertex(va).into_iter().filter(|&h| self.f[h].is_none()).collect();
            if free_a.is_empty() {
                continue;
            }
            let free_b: Vec<usize> = g2.vertex(vb).into_iter().filter(|&h| self.finv[h].is_none()).collect();
            if free_a.len() != free_b.len() {
                return None;
            }
            for perm in permutations(&free_b) {
                let mut st = self.clone();
                let mut queue = Vec::new();
                let ok = free_a
                    .iter()
                    .zip(&perm)
                    .all(|(&a, &b)| st.assign(g1, g2, a, b, &mut queue));
                if ok && st.propagate(g1, g2, queue) {
                    if let Some(done) = st.search(g1, g2) {
                        return Some(done);
                    }
                }
            }
            return None;
        }
        // an unmapped component: try every image of its first vertex
        let Some(va) = (0..g1.vertex_count()).find(|&v| self.vmap[v].is_none()) else {
            return Some(self);
        };
        let ta = g1.vertex(va);
        for vb in 0..g2.vertex_count() {
            if self.vinv[vb].is_some() {
                continue;
            }
            for perm in permutations(&g2.vertex(vb)) {
                let mut st = self.clone();
                let mut queue = Vec::new();
                let ok = ta.iter().zip(&perm).all(|(&a, &b)| st.assign(g1, g2, a, b, &mut queue));
                if ok && st.propagate(g1, g2, queue) {
                    if let Some(done) = st.search(g1, g2) {
                        return Some(done);
                    }
                }
            }
        }
        None
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Finds a bijection `g1 -> g2` extending `boundary_map` and commuting with
/// the pairing and the vertex grouping.
pub fn boundary_isomorphism(
    g1: &TrivalentGraph,
    g2: &TrivalentGraph,
    boundary_map: &BTreeMap<String, String>,
) -> Result<Option<Isomorphism>, GraphError> {
    let pairs = boundary_map_indices(g1, g2, boundary_map)?;
    if g1.half_edge_count() != g2.half_edge_count() || g1.vertex_count() != g2.vertex_count() {
        return Ok(None);
    }
    let n = g1.half_edge_count();
    let m = g1.vertex_count();
    let mut st = IsoState {
        f: vec![None; n],
        finv: vec![None; n],
        vmap: vec![None; m],
        vinv: vec![None; m],
    };
    let mut queue = Vec::new();
    for (a, b) in pairs {
        if !st.assign(g1, g2, a, b, &mut queue) {
            return Ok(None);
        }
    }
    if !st.propagate(g1, g2, queue) {
        return Ok(None);
    }
    let Some(done) = st.search(g1, g2) else {
        return Ok(None);
    };
    let iso = Isomorphism {
        half_edges: done.f.into_iter().map(Option::unwrap).collect(),
        vertices: done.vmap.into_iter().map(Option::unwrap).collect(),
    };
    debug_assert!(is_isomorphism(g1, g2, &iso));
    Ok(Some(iso))
}

/// Independent check of a claimed isomorphism.
pub fn is_isomorphism(g1: &TrivalentGraph, g2: &TrivalentGraph, iso: &Isomorphism) -> bool {
    let n = g1.half_edge_count();
    if iso.half_edges.len() != n || g2.half_edge_count() != n {
        return false;
    }
    let image: BTreeSet<usize> = iso.half_edges.iter().copied().collect();
    if image.len() != n {
        return false;
    }
    (0..n).all(|a| {
        let b = iso.half_edges[a];
        g2.pair(b) == g1.pair(a).map(|p| iso.half_edges[p]) && iso.vertices[g1.vertex_of(a)] == g2.vertex_of(b)
    })
}
