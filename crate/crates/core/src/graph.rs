//! Simple undirected graphs with stable edge ids, the edge-list text format, and seeded
//! generators.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng as _;
use thiserror::Error;

use crate::rng;

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header announces {expected} edges but {found} were listed")]
    EdgeCount { expected: usize, found: usize },
    #[error("no simple {d}-regular graph on {n} vertices exists")]
    Infeasible { n: usize, d: usize },
    #[error("random generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
}

/// An immutable simple undirected graph on vertices `0..n`.
///
/// Edges carry ids `0..m` in insertion order and are stored with the smaller endpoint
/// first. Each vertex keeps its incident `(neighbour, edge id)` pairs in edge-id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<(Vertex, EdgeId)>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list; line numbers in errors are 1-based indices into
    /// `edges` offset by one (matching the file format, whose first line is the header).
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Self::empty(n);
        let mut seen = HashSet::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            g.push_checked(u, v, i + 2, &mut seen)?;
        }
        Ok(g)
    }

    fn push_checked(
        &mut self,
        u: Vertex,
        v: Vertex,
        line: usize,
        seen: &mut HashSet<(Vertex, Vertex)>,
    ) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { line, vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(GraphError::DuplicateEdge { line, u, v });
        }
        self.push_unchecked(key.0, key.1);
        Ok(())
    }

    fn push_unchecked(&mut self, u: Vertex, v: Vertex) {
        let id = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v { b } else { a }
    }

    pub fn neighbours(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    /// The spanning subgraph on the given edges, together with the map from its edge ids
    /// back to ids in `self`. Edges keep their relative order.
    pub fn edge_subgraph(&self, edges: &[EdgeId]) -> (Graph, Vec<EdgeId>) {
        let mut ids = edges.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut g = Self::empty(self.n);
        for &e in &ids {
            let (u, v) = self.edges[e];
            g.push_unchecked(u, v);
        }
        (g, ids)
    }

    /// Connected components of the subgraph formed by `edges`, restricted to vertices
    /// touched by at least one of them. Components are listed by smallest vertex, each
    /// sorted ascending.
    pub fn components_of(&self, edges: &[EdgeId]) -> Vec<Vec<Vertex>> {
        let mut parent: Vec<Vertex> = (0..self.n).collect();
        fn find(p: &mut [Vertex], mut x: Vertex) -> Vertex {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut touched = vec![false; self.n];
        for &e in edges {
            let (u, v) = self.edges[e];
            touched[u] = true;
            touched[v] = true;
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        let mut index = vec![usize::MAX; self.n];
        let mut comps: Vec<Vec<Vertex>> = Vec::new();
        for (v, _) in touched.iter().enumerate().filter(|&(_, &t)| t) {
            let r = find(&mut parent, v);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[index[r]].push(v);
        }
        comps
    }

    /// Connected components of the whole graph, isolated vertices included.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let all: Vec<EdgeId> = (0..self.edge_count()).collect();
        let mut comps = self.components_of(&all);
        for v in 0..self.n {
            if self.adj[v].is_empty() {
                comps.push(vec![v]);
            }
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Serializes to the edge-list format: `"n m"`, then one `"u v"` line per edge in id
    /// order with `u < v`. Every line ends in `\n`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    // ---- generators ----

    pub fn complete(k: usize) -> Self {
        let mut g = Self::empty(k);
        for u in 0..k {
            for v in u + 1..k {
                g.push_unchecked(u, v);
            }
        }
        g
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.push_unchecked(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Self::empty(n);
        for v in 0..n {
            let w = (v + 1) % n;
            g.push_unchecked(v.min(w), v.max(w));
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            g.push_unchecked(v - 1, v);
        }
        g
    }

    /// `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Self {
        let mut g = Self::empty(k + 1);
        for v in 1..=k {
            g.push_unchecked(0, v);
        }
        g
    }

    /// Erdős–Rényi `G(n, p)`: pairs `(u, v)`, `u < v`, are visited in lexicographic order
    /// and each is kept when a fresh uniform `f64` in `[0, 1)` falls below `p`.
    pub fn gnp(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = rng::from_seed(seed);
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    g.push_unchecked(u, v);
                }
            }
        }
        g
    }

    /// Random bipartite graph with parts `0..a` and `a..a+b`, each cross pair present with
    /// probability `p`.
    pub fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Self {
        let mut rng = rng::from_seed(seed);
        let mut g = Self::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                if rng.gen::<f64>() < p {
                    g.push_unchecked(u, v);
                }
            }
        }
        g
    }

    /// A simple `d`-regular graph on `n` vertices from the pairing model.
    ///
    /// Stubs are paired uniformly at random and a pair that would create a loop or a
    /// repeated edge is rejected and redrawn. When only invalid pairs remain, the leftover
    /// stubs are absorbed by edge switches (remove `xy`, add `ux` and `vy`). Each attempt
    /// is seeded from `seed`; after 64 failed attempts the generator gives up.
    pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Self, GraphError> {
        if d >= n || (n * d) % 2 == 1 {
            return Err(GraphError::Infeasible { n, d });
        }
        const ATTEMPTS: usize = 64;
        for attempt in 0..ATTEMPTS {
            let mut rng = rng::from_seed(rng::derive_seed(seed, attempt as u64));
            if let Some(edges) = pairing_attempt(n, d, &mut rng) {
                let mut g = Self::empty(n);
                for (u, v) in edges {
                    g.push_unchecked(u, v);
                }
                return Ok(g);
            }
        }
        Err(GraphError::GenerationFailed { attempts: ATTEMPTS })
    }
}

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    (u.min(v), u.max(v))
}

fn pairing_attempt(n: usize, d: usize, rng: &mut rng::Rng) -> Option<Vec<(Vertex, Vertex)>> {
    let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    stubs.shuffle(rng);
    let mut present: HashSet<(Vertex, Vertex)> = HashSet::with_capacity(n * d / 2);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(n * d / 2);

    let mut misses = 0usize;
    while stubs.len() >= 2 {
        let i = rng.gen_range(0..stubs.len());
        let mut j = rng.gen_range(0..stubs.len() - 1);
        if j >= i {
            j += 1;
        }
        let (u, v) = (stubs[i], stubs[j]);
        if u != v && !present.contains(&key(u, v)) {
            present.insert(key(u, v));
            edges.push(key(u, v));
            let (hi, lo) = (i.max(j), i.min(j));
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
            misses = 0;
            continue;
        }
        misses += 1;
        if misses > 32 + 4 * stubs.len() && !has_valid_pair(&stubs, &present) {
            break;
        }
    }

    // Absorb whatever is left by switching.
    stubs.sort_unstable();
    while stubs.len() >= 2 {
        let u = stubs.pop().unwrap();
        let v = stubs.pop().unwrap();
        let mut done = false;
        for _ in 0..64 * edges.len().max(1) {
            let k = rng.gen_range(0..edges.len().max(1));
            if edges.is_empty() {
                break;
            }
            let (mut x, mut y) = edges[k];
            if rng.gen::<bool>() {
                std::mem::swap(&mut x, &mut y);
            }
            if x == u || x == v || y == u || y == v {
                continue;
            }
            if present.contains(&key(u, x)) || present.contains(&key(v, y)) {
                continue;
            }
            present.remove(&key(x, y));
            present.insert(key(u, x));
            present.insert(key(v, y));
            edges[k] = key(u, x);
            edges.push(key(v, y));
            done = true;
            break;
        }
        if !done {
            return None;
        }
    }
    edges.sort_unstable();
    Some(edges)
}

fn has_valid_pair(stubs: &[Vertex], present: &HashSet<(Vertex, Vertex)>) -> bool {
    let mut distinct: Vec<Vertex> = stubs.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for (i, &u) in distinct.iter().enumerate() {
        for &v in &distinct[i + 1..] {
            if !present.contains(&(u, v)) {
                return true;
            }
        }
    }
    false
}

/// Parses the edge-list format. See [`Graph::to_edge_list`].
pub fn load_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or(GraphError::Malformed { line: 1, reason: "missing header \"n m\"".into() })?;
    let nums = parse_fields(header, hline + 1, 2)?;
    let (n, m) = (nums[0], nums[1]);

    let mut g = Graph::empty(n);
    let mut seen = HashSet::with_capacity(m);
    let mut found = 0;
    for (i, line) in lines {
        let f = parse_fields(line, i + 1, 2)?;
        g.push_checked(f[0], f[1], i + 1, &mut seen)?;
        found += 1;
    }
    if found != m {
        return Err(GraphError::EdgeCount { expected: m, found });
    }
    Ok(g)
}

pub(crate) fn parse_fields(line: &str, lineno: usize, count: usize) -> Result<Vec<usize>, GraphError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != count {
        return Err(GraphError::Malformed {
            line: lineno,
            reason: format!("expected {count} integers, found {:?}", line.trim()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>().map_err(|_| GraphError::Malformed {
                line: lineno,
                reason: format!("{f:?} is not a non-negative integer"),
            })
        })
        .collect()
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        load_edge_list(s)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// One of the two subgraphs of a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::One, Side::Two];

    /// 0 for `One`, 1 for `Two`.
    pub fn index(self) -> usize {
        match self {
            Side::One => 0,
            Side::Two => 1,
        }
    }

    /// 1 or 2, as written in files.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(k: usize) -> Option<Side> {
        match k {
            1 => Some(Side::One),
            2 => Some(Side::Two),
            _ => None,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Which step of a construction placed an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// First coordinates equal, second differ.
    R1,
    /// Second coordinates equal, first differ.
    R2,
    /// Both differ, odd coordinate sum.
    R3,
    /// Both differ, even coordinate sum.
    R4,
    /// Identical pairs and equal moduli: Eulerian split of the same-class subgraph.
    R5,
    /// Identical pairs, different moduli.
    R6,
    /// Far-degree edge, placed by the Eulerian split of that subgraph.
    HPrime,
    /// Placed by a plain Eulerian split of the whole graph.
    Euler,
    /// Whole graph kept on one side.
    Whole,
    /// Found by exhaustive search.
    Search,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::R1 => "rule-1",
            Rule::R2 => "rule-2",
            Rule::R3 => "rule-3",
            Rule::R4 => "rule-4",
            Rule::R5 => "rule-5",
            Rule::R6 => "rule-6",
            Rule::HPrime => "h-prime",
            Rule::Euler => "euler",
            Rule::Whole => "whole",
            Rule::Search => "search",
        };
        f.write_str(s)
    }
}

/// A total assignment of a graph's edges to the two sides of a decomposition, with the
/// rule that placed each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBipartition {
    side: Vec<Side>,
    provenance: Vec<Rule>,
}

impl EdgeBipartition {
    pub fn new(side: Vec<Side>, provenance: Vec<Rule>) -> Self {
        assert_eq!(side.len(), provenance.len());
        Self { side, provenance }
    }

    /// Every edge on `side`, tagged `rule`.
    pub fn uniform(m: usize, side: Side, rule: Rule) -> Self {
        Self { side: vec![side; m], provenance: vec![rule; m] }
    }

    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    pub fn side(&self, e: EdgeId) -> Side {
        self.side[e]
    }

    pub fn rule(&self, e: EdgeId) -> Rule {
        self.provenance[e]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    /// Edge ids on `side`, ascending.
    pub fn edges_on(&self, side: Side) -> Vec<EdgeId> {
        (0..self.side.len()).filter(|&e| self.side[e] == side).collect()
    }

    /// Per-vertex degree on each side.
    pub fn side_degrees(&self, g: &Graph) -> [Vec<usize>; 2] {
        let mut deg = [vec![0; g.vertex_count()], vec![0; g.vertex_count()]];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let s = self.side[e].index();
            deg[s][u] += 1;
            deg[s][v] += 1;
        }
        deg
    }
}
