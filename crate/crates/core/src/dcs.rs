//! Degree-constrained subgraphs with modular degree targets.
//!
//! Given `G`, moduli `λ_v >= 2` and integer targets `a(v)`, find `S ⊆ E(G)` such that at
//! every vertex
//!
//! ```text
//! d(v)/3 <= d_S(v) <= 2d(v)/3    and    d_S(v) mod λ_v ∈ {a(v), a(v) + 1} mod λ_v.
//! ```
//!
//! Small instances are settled by a complete depth-first search, which either returns a
//! witness or proves that none exists. Larger ones go to a randomized local search over
//! edge flips and two-edge alternating swaps that minimises a violation potential; it can
//! only report that its budget ran out. Every returned witness is re-checked by
//! [`verify_dcs`].

use std::fmt;
use std::fmt::Write as _;

use rand::Rng as _;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{load_edge_list, EdgeId, Graph, GraphError, Vertex};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModTarget {
    a: Vec<i64>,
    lambda: Vec<u64>,
    /// Whether degrees must also lie in `[d/3, 2d/3]`.
    bounded: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TargetError {
    #[error("vertex {vertex}: modulus {lambda} is below 2")]
    SmallModulus { vertex: Vertex, lambda: u64 },
    #[error("target lists have lengths {a} and {lambda}")]
    Length { a: usize, lambda: usize },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ModTarget {
    pub fn new(a: Vec<i64>, lambda: Vec<u64>) -> Result<Self, TargetError> {
        if a.len() != lambda.len() {
            return Err(TargetError::Length { a: a.len(), lambda: lambda.len() });
        }
        if let Some(v) = lambda.iter().position(|&l| l < 2) {
            return Err(TargetError::SmallModulus { vertex: v, lambda: lambda[v] });
        }
        Ok(Self { a, lambda, bounded: true })
    }

    pub fn uniform(n: usize, a: i64, lambda: u64) -> Result<Self, TargetError> {
        Self::new(vec![a; n], vec![lambda; n])
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self, v: Vertex) -> i64 {
        self.a[v]
    }

    pub fn lambda(&self, v: Vertex) -> u64 {
        self.lambda[v]
    }

    /// The same residue targets without the degree interval.
    pub fn residue_only(mut self) -> Self {
        self.bounded = false;
        self
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Allowed degrees at a vertex of degree `d`: `[⌈d/3⌉, ⌊2d/3⌋]`, or `[0, d]` for
    /// residue-only targets.
    pub fn interval(&self, d: usize) -> (usize, usize) {
        if self.bounded {
            degree_interval(d)
        } else {
            (0, d)
        }
    }

    /// `(a mod λ, (a + 1) mod λ)`.
    pub fn residues(&self, v: Vertex) -> (u64, u64) {
        let l = self.lambda[v] as i64;
        (self.a[v].rem_euclid(l) as u64, (self.a[v] + 1).rem_euclid(l) as u64)
    }

    fn hits(&self, v: Vertex, x: usize) -> bool {
        let r = x as u64 % self.lambda[v];
        let (r0, r1) = self.residues(v);
        r == r0 || r == r1
    }
}

/// `[⌈d/3⌉, ⌊2d/3⌋]`.
pub fn degree_interval(d: usize) -> (usize, usize) {
    (d.div_ceil(3), 2 * d / 3)
}

fn admissible(d: usize, targets: &ModTarget, v: Vertex, x: usize) -> bool {
    let (lo, hi) = targets.interval(d);
    lo <= x && x <= hi && targets.hits(v, x)
}

/// Why one vertex fails its constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexDiagnostic {
    pub vertex: Vertex,
    pub degree_s: usize,
    pub interval: (usize, usize),
    pub residue: u64,
    pub targets: (u64, u64),
    pub lambda: u64,
}

impl fmt::Display for VertexDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertex {}: d_S = {} (interval [{}, {}]), residue {} mod {} (targets {}, {})",
            self.vertex, self.degree_s, self.interval.0, self.interval.1, self.residue, self.lambda,
            self.targets.0, self.targets.1
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcsCheck {
    pub ok: bool,
    pub violations: Vec<VertexDiagnostic>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DcsError {
    #[error("edge id {0} is not an edge of the graph")]
    UnknownEdge(EdgeId),
    #[error("targets cover {got} vertices, graph has {expected}")]
    Length { expected: usize, got: usize },
    #[error("proven infeasible: {reason}")]
    ProvenInfeasible { vertex: Option<Vertex>, reason: String },
    #[error("budget exhausted after {steps} steps; best potential {best_potential}, {} violated vertices", violations.len())]
    BudgetExhausted { steps: u64, best_potential: u64, violations: Vec<VertexDiagnostic> },
}

/// Checks `s` against the interval and residue constraints at every vertex.
pub fn verify_dcs(g: &Graph, s: &[EdgeId], targets: &ModTarget) -> Result<DcsCheck, DcsError> {
    if targets.len() != g.vertex_count() {
        return Err(DcsError::Length { expected: g.vertex_count(), got: targets.len() });
    }
    let mut deg = vec![0usize; g.vertex_count()];
    let mut seen = vec![false; g.edge_count()];
    for &e in s {
        if e >= g.edge_count() {
            return Err(DcsError::UnknownEdge(e));
        }
        if std::mem::replace(&mut seen[e], true) {
            continue;
        }
        let (u, v) = g.endpoints(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    let violations: Vec<VertexDiagnostic> = (0..g.vertex_count())
        .filter(|&v| !admissible(g.degree(v), targets, v, deg[v]))
        .map(|v| diagnostic(g, targets, v, deg[v]))
        .collect();
    Ok(DcsCheck { ok: violations.is_empty(), violations })
}

fn diagnostic(g: &Graph, targets: &ModTarget, v: Vertex, x: usize) -> VertexDiagnostic {
    VertexDiagnostic {
        vertex: v,
        degree_s: x,
        interval: targets.interval(g.degree(v)),
        residue: x as u64 % targets.lambda(v),
        targets: targets.residues(v),
        lambda: targets.lambda(v),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DcsMethod {
    Exact,
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcsSolution {
    /// Witness edge ids, ascending.
    pub edges: Vec<EdgeId>,
    pub method: DcsMethod,
    /// Search nodes (exact) or moves (local search) spent.
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcsOptions {
    /// Instances with at most this many edges are solved by complete search.
    pub exact_threshold: usize,
    /// Node limit for the complete search; past it the instance falls back to local search.
    pub exact_node_limit: u64,
    /// Local-search moves per restart.
    pub budget: u64,
    /// Independent local-search restarts, run in parallel; the lowest-index success wins.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for DcsOptions {
    fn default() -> Self {
        Self { exact_threshold: 30, exact_node_limit: 100_000_000, budget: 1_000_000, restarts: 1, seed: 0 }
    }
}

pub fn find_dcs(g: &Graph, targets: &ModTarget, opts: &DcsOptions) -> Result<DcsSolution, DcsError> {
    if targets.len() != g.vertex_count() {
        return Err(DcsError::Length { expected: g.vertex_count(), got: targets.len() });
    }
    for v in 0..g.vertex_count() {
        let d = g.degree(v);
        if !(0..=d).any(|x| admissible(d, targets, v, x)) {
            let (lo, hi) = targets.interval(d);
            let (r0, r1) = targets.residues(v);
            return Err(DcsError::ProvenInfeasible {
                vertex: Some(v),
                reason: format!(
                    "vertex {v}: no degree in [{lo}, {hi}] is congruent to {r0} or {r1} mod {}",
                    targets.lambda(v)
                ),
            });
        }
    }

    let solution = if g.edge_count() <= opts.exact_threshold {
        match exact_search(g, targets, opts.exact_node_limit) {
            ExactOutcome::Found(edges, nodes) => DcsSolution { edges, method: DcsMethod::Exact, steps: nodes },
            ExactOutcome::Exhausted(nodes) => {
                return Err(DcsError::ProvenInfeasible {
                    vertex: None,
                    reason: format!("complete search exhausted after {nodes} nodes"),
                })
            }
            ExactOutcome::Limit => local_search_restarts(g, targets, opts)?,
        }
    } else {
        local_search_restarts(g, targets, opts)?
    };
    let check = verify_dcs(g, &solution.edges, targets)?;
    assert!(check.ok, "solver produced an uncertified witness: {:?}", check.violations);
    Ok(solution)
}

// ---------------------------------------------------------------------------
// Complete search

enum ExactOutcome {
    Found(Vec<EdgeId>, u64),
    Exhausted(u64),
    Limit,
}

struct Exact<'a> {
    g: &'a Graph,
    order: Vec<EdgeId>,
    /// next_ok[v][x]: least admissible degree >= x, or usize::MAX.
    next_ok: Vec<Vec<usize>>,
    target: Vec<usize>,
    cur: Vec<usize>,
    rem: Vec<usize>,
    chosen: Vec<bool>,
    nodes: u64,
    limit: u64,
}

fn exact_search(g: &Graph, targets: &ModTarget, limit: u64) -> ExactOutcome {
    let n = g.vertex_count();
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| g.endpoints(e));
    let mut next_ok = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    for v in 0..n {
        let d = g.degree(v);
        let mut row = vec![usize::MAX; d + 2];
        for x in (0..=d).rev() {
            row[x] = if admissible(d, targets, v, x) { x } else { row[x + 1] };
        }
        let mid = d / 2;
        let t = (0..=d)
            .filter(|&x| admissible(d, targets, v, x))
            .min_by_key(|&x| (x.abs_diff(mid), x))
            .unwrap_or(mid);
        next_ok.push(row);
        target.push(t);
    }
    let mut s = Exact {
        g,
        order,
        next_ok,
        target,
        cur: vec![0; n],
        rem: g.degrees(),
        chosen: vec![false; g.edge_count()],
        nodes: 0,
        limit,
    };
    if !(0..n).all(|v| s.feasible(v)) {
        return ExactOutcome::Exhausted(0);
    }
    match s.dfs(0) {
        Some(true) => {
            let edges = (0..g.edge_count()).filter(|&e| s.chosen[e]).collect();
            ExactOutcome::Found(edges, s.nodes)
        }
        Some(false) => ExactOutcome::Exhausted(s.nodes),
        None => ExactOutcome::Limit,
    }
}

impl Exact<'_> {
    fn feasible(&self, v: Vertex) -> bool {
        let x = self.next_ok[v][self.cur[v]];
        x != usize::MAX && x <= self.cur[v] + self.rem[v]
    }

    /// `Some(true)` when a witness extends the current prefix, `Some(false)` when none
    /// does, `None` when the node limit was hit.
    fn dfs(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        let e = self.order[depth];
        let (u, w) = self.g.endpoints(e);
        let include_first = self.cur[u] < self.target[u] && self.cur[w] < self.target[w];
        for include in [include_first, !include_first] {
            self.rem[u] -= 1;
            self.rem[w] -= 1;
            if include {
                self.cur[u] += 1;
                self.cur[w] += 1;
            }
            self.chosen[e] = include;
            let ok = self.feasible(u) && self.feasible(w);
            let found = if ok { self.dfs(depth + 1) } else { Some(false) };
            if include {
                self.cur[u] -= 1;
                self.cur[w] -= 1;
            }
            self.rem[u] += 1;
            self.rem[w] += 1;
            match found {
                Some(true) => {
                    self.chosen[e] = include;
                    return Some(true);
                }
                None => return None,
                Some(false) => {}
            }
        }
        self.chosen[e] = false;
        Some(false)
    }
}

// ---------------------------------------------------------------------------
// Local search

/// Violation potential of degree `x` at `v`: distance to the degree interval plus cyclic
/// distance from `x mod λ` to the nearer admissible residue.
pub fn vertex_potential(d: usize, targets: &ModTarget, v: Vertex, x: usize) -> u64 {
    let (lo, hi) = targets.interval(d);
    let interval = lo.saturating_sub(x) + x.saturating_sub(hi);
    let l = targets.lambda(v);
    let r = x as u64 % l;
    let (r0, r1) = targets.residues(v);
    let cyc = |a: u64, b: u64| {
        let diff = a.abs_diff(b);
        diff.min(l - diff)
    };
    interval as u64 + cyc(r, r0).min(cyc(r, r1))
}

fn local_search_restarts(g: &Graph, targets: &ModTarget, opts: &DcsOptions) -> Result<DcsSolution, DcsError> {
    let restarts = opts.restarts.max(1);
    let results: Vec<Result<DcsSolution, (u64, Vec<bool>)>> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let seed = if restarts == 1 { opts.seed } else { rng::derive_seed(opts.seed, i as u64) };
            local_search(g, targets, opts.budget, seed)
        })
        .collect();
    let mut best: Option<(u64, Vec<bool>)> = None;
    for r in results {
        match r {
            Ok(sol) => return Ok(sol),
            Err((pot, state)) => {
                if best.as_ref().is_none_or(|b| pot < b.0) {
                    best = Some((pot, state));
                }
            }
        }
    }
    let (best_potential, state) = best.expect("at least one restart");
    let s: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| state[e]).collect();
    let violations = verify_dcs(g, &s, targets)?.violations;
    Err(DcsError::BudgetExhausted { steps: opts.budget * restarts as u64, best_potential, violations })
}

struct SearchState<'a> {
    g: &'a Graph,
    targets: &'a ModTarget,
    in_s: Vec<bool>,
    deg: Vec<usize>,
    pot: Vec<u64>,
    total: u64,
    violated: Vec<Vertex>,
    pos: Vec<usize>,
}

impl<'a> SearchState<'a> {
    fn new(g: &'a Graph, targets: &'a ModTarget, in_s: Vec<bool>) -> Self {
        let n = g.vertex_count();
        let mut deg = vec![0; n];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if in_s[e] {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        let mut s = Self {
            g,
            targets,
            in_s,
            deg,
            pot: vec![0; n],
            total: 0,
            violated: Vec::new(),
            pos: vec![usize::MAX; n],
        };
        for v in 0..n {
            s.update(v);
        }
        s
    }

    fn phi(&self, v: Vertex, x: usize) -> u64 {
        vertex_potential(self.g.degree(v), self.targets, v, x)
    }

    fn update(&mut self, v: Vertex) {
        let p = self.phi(v, self.deg[v]);
        self.total = self.total - self.pot[v] + p;
        self.pot[v] = p;
        let listed = self.pos[v] != usize::MAX;
        if p > 0 && !listed {
            self.pos[v] = self.violated.len();
            self.violated.push(v);
        } else if p == 0 && listed {
            let i = self.pos[v];
            self.violated.swap_remove(i);
            if i < self.violated.len() {
                self.pos[self.violated[i]] = i;
            }
            self.pos[v] = usize::MAX;
        }
    }

    /// Potential change at `v` if its degree moves by `delta`.
    fn shift(&self, v: Vertex, delta: isize) -> i64 {
        let x = self.deg[v] as isize + delta;
        if x < 0 || x as usize > self.g.degree(v) {
            return i64::MAX / 4;
        }
        self.phi(v, x as usize) as i64 - self.pot[v] as i64
    }

    fn flip(&mut self, e: EdgeId) {
        let (u, v) = self.g.endpoints(e);
        let now = !self.in_s[e];
        self.in_s[e] = now;
        for x in [u, v] {
            if now {
                self.deg[x] += 1;
            } else {
                self.deg[x] -= 1;
            }
            self.update(x);
        }
    }

    fn sign(&self, e: EdgeId) -> isize {
        if self.in_s[e] { -1 } else { 1 }
    }
}

fn local_search(g: &Graph, targets: &ModTarget, budget: u64, seed: u64) -> Result<DcsSolution, (u64, Vec<bool>)> {
    let mut rng = rng::from_seed(seed);
    // Start near the middle of every interval.
    let init: Vec<bool> = (0..g.edge_count()).map(|_| rng.gen_bool(0.5)).collect();
    let mut st = SearchState::new(g, targets, init);
    let mut best = (st.total, st.in_s.clone());
    let noise = 0.1;

    let mut steps = 0u64;
    while st.total > 0 && steps < budget {
        steps += 1;
        let v = st.violated[rng.gen_range(0..st.violated.len())];
        let inc = g.neighbours(v);
        if inc.is_empty() {
            continue;
        }
        if rng.gen_bool(noise) {
            let (_, e) = inc[rng.gen_range(0..inc.len())];
            st.flip(e);
        } else {
            // Candidate moves: single flips at v, and swaps v-x-w that keep x's degree.
            let mut best_delta = i64::MAX;
            let mut best_moves: Vec<(EdgeId, Option<EdgeId>)> = Vec::new();
            let mut consider = |delta: i64, mv: (EdgeId, Option<EdgeId>), moves: &mut Vec<_>| {
                if delta < best_delta {
                    best_delta = delta;
                    moves.clear();
                    moves.push(mv);
                } else if delta == best_delta {
                    moves.push(mv);
                }
            };
            for &(u, e) in inc {
                let s = st.sign(e);
                let delta = st.shift(v, s) + st.shift(u, s);
                consider(delta, (e, None), &mut best_moves);
            }
            for _ in 0..inc.len().min(64) {
                let (x, e1) = inc[rng.gen_range(0..inc.len())];
                let inc_x = g.neighbours(x);
                let (w, e2) = inc_x[rng.gen_range(0..inc_x.len())];
                if w == v || st.in_s[e1] == st.in_s[e2] {
                    continue;
                }
                let delta = st.shift(v, st.sign(e1)) + st.shift(w, st.sign(e2));
                consider(delta, (e1, Some(e2)), &mut best_moves);
            }
            let (e1, e2) = best_moves[rng.gen_range(0..best_moves.len())];
            st.flip(e1);
            if let Some(e2) = e2 {
                st.flip(e2);
            }
        }
        if st.total < best.0 {
            best = (st.total, st.in_s.clone());
        }
    }
    if st.total == 0 {
        let edges = (0..g.edge_count()).filter(|&e| st.in_s[e]).collect();
        Ok(DcsSolution { edges, method: DcsMethod::LocalSearch, steps })
    } else {
        Err(best)
    }
}

// ---------------------------------------------------------------------------
// Instance format: an edge-list block followed by n lines "v a lambda".

pub fn instance_to_text(g: &Graph, targets: &ModTarget) -> String {
    let mut out = g.to_edge_list();
    for v in 0..targets.len() {
        let _ = writeln!(out, "{v} {} {}", targets.a(v), targets.lambda(v));
    }
    out
}

pub fn parse_instance(text: &str) -> Result<(Graph, ModTarget), TargetError> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines
        .iter()
        .position(|l| !l.trim().is_empty())
        .ok_or(TargetError::Malformed { line: 1, reason: "empty instance".into() })?;
    let m: usize = lines[header]
        .split_whitespace()
        .nth(1)
        .and_then(|x| x.parse().ok())
        .ok_or(TargetError::Malformed { line: header + 1, reason: "bad header".into() })?;
    let graph_end = header + 1 + m;
    if lines.len() < graph_end {
        return Err(TargetError::Malformed { line: lines.len(), reason: "truncated edge list".into() });
    }
    let g = load_edge_list(&lines[..graph_end].join("\n"))?;
    let n = g.vertex_count();
    let mut a = vec![0i64; n];
    let mut lambda = vec![0u64; n];
    let mut seen = vec![false; n];
    for (i, line) in lines.iter().enumerate().skip(graph_end) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| TargetError::Malformed { line: i + 1, reason };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad(format!("expected \"v a lambda\", found {:?}", line.trim())));
        }
        let v: usize = f[0].parse().map_err(|_| bad(format!("bad vertex {:?}", f[0])))?;
        if v >= n || seen[v] {
            return Err(bad(format!("vertex {v} out of range or repeated")));
        }
        seen[v] = true;
        a[v] = f[1].parse().map_err(|_| bad(format!("bad target {:?}", f[1])))?;
        lambda[v] = f[2].parse().map_err(|_| bad(format!("bad modulus {:?}", f[2])))?;
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(TargetError::Malformed { line: lines.len(), reason: format!("no target for vertex {v}") });
    }
    Ok((g, ModTarget::new(a, lambda)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamilton_cycle(g: &Graph) -> Vec<EdgeId> {
        let n = g.vertex_count();
        (0..n).map(|i| g.edge_between(i, (i + 1) % n).unwrap()).collect()
    }

    #[test]
    fn c6_matching() {
        let g = Graph::cycle(6);
        let t = ModTarget::uniform(6, 1, 2).unwrap();
        let matching: Vec<EdgeId> = (0..6).filter(|&i| i % 2 == 0).map(|i| g.edge_between(i, i + 1).unwrap()).collect();
        assert!(verify_dcs(&g, &matching, &t).unwrap().ok);
        let sol = find_dcs(&g, &t, &DcsOptions::default()).unwrap();
        assert_eq!(sol.method, DcsMethod::Exact);
        assert!(verify_dcs(&g, &sol.edges, &t).unwrap().ok);
    }

    #[test]
    fn empty_set_fails_interval() {
        let g = Graph::cycle(6);
        let t = ModTarget::uniform(6, 0, 2).unwrap();
        let check = verify_dcs(&g, &[], &t).unwrap();
        assert!(!check.ok);
        assert_eq!(check.violations.len(), 6);
        assert_eq!(check.violations[0].interval, (1, 1));
    }

    #[test]
    fn k7_hamilton_cycle() {
        let g = Graph::complete(7);
        let t = ModTarget::uniform(7, 0, 2).unwrap();
        assert!(verify_dcs(&g, &hamilton_cycle(&g), &t).unwrap().ok);
        let sol = find_dcs(&g, &t, &DcsOptions::default()).unwrap();
        assert!(verify_dcs(&g, &sol.edges, &t).unwrap().ok);
    }

    #[test]
    fn k4_modulus_twelve_is_infeasible() {
        let g = Graph::complete(4);
        let t = ModTarget::uniform(4, 5, 12).unwrap();
        assert!(matches!(find_dcs(&g, &t, &DcsOptions::default()), Err(DcsError::ProvenInfeasible { .. })));
    }

    #[test]
    fn exhausted_search_proves_infeasibility() {
        // Triangle, interval [1, 1] everywhere, even residue demanded at vertex 0 only:
        // degree sequence must be all ones, impossible (sum odd).
        let g = Graph::complete(3);
        let t = ModTarget::new(vec![1, 1, 1], vec![2, 3, 3]).unwrap();
        // Vertex 0 needs d_S ≡ 1 or 0 mod 2; any d_S = 1 works there, so the obstruction is
        // parity: three vertices of degree exactly 1 in a triangle do not exist.
        match find_dcs(&g, &t, &DcsOptions::default()) {
            Err(DcsError::ProvenInfeasible { vertex: None, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_edge() {
        let g = Graph::cycle(4);
        let t = ModTarget::uniform(4, 0, 2).unwrap();
        assert_eq!(verify_dcs(&g, &[9], &t), Err(DcsError::UnknownEdge(9)));
        assert!(ModTarget::uniform(4, 0, 1).is_err());
    }

    #[test]
    fn negative_targets_reduce() {
        let t = ModTarget::new(vec![-1, -13], vec![2, 12]).unwrap();
        assert_eq!(t.residues(0), (1, 0));
        assert_eq!(t.residues(1), (11, 0));
    }

    #[test]
    fn potential_zero_iff_admissible() {
        let t = ModTarget::new(vec![3], vec![5]).unwrap();
        for d in 0..30 {
            for x in 0..=d {
                assert_eq!(vertex_potential(d, &t, 0, x) == 0, admissible(d, &t, 0, x));
            }
        }
    }

    #[test]
    fn local_search_on_dense_graph() {
        let g = Graph::random_regular(80, 40, 3).unwrap();
        let a: Vec<i64> = (0..80).map(|v| (v * 7 % 5) as i64).collect();
        let t = ModTarget::new(a, vec![5; 80]).unwrap();
        let opts = DcsOptions { seed: 9, ..DcsOptions::default() };
        let sol = find_dcs(&g, &t, &opts).unwrap();
        assert_eq!(sol.method, DcsMethod::LocalSearch);
        assert!(verify_dcs(&g, &sol.edges, &t).unwrap().ok);
    }

    #[test]
    fn local_search_budget_is_reported() {
        // Triangle forced to local search: infeasible, so the budget runs out.
        let g = Graph::complete(3);
        let t = ModTarget::new(vec![1, 1, 1], vec![2, 3, 3]).unwrap();
        let opts = DcsOptions { exact_threshold: 0, budget: 500, ..DcsOptions::default() };
        match find_dcs(&g, &t, &opts) {
            Err(DcsError::BudgetExhausted { best_potential, violations, .. }) => {
                assert!(best_potential > 0);
                assert!(!violations.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn instance_round_trip() {
        let g = Graph::cycle(5);
        let t = ModTarget::new(vec![-1, 0, 1, 2, 3], vec![2, 3, 4, 5, 6]).unwrap();
        let text = instance_to_text(&g, &t);
        assert_eq!(parse_instance(&text).unwrap(), (g, t));
        assert!(parse_instance("2 1\n0 1\n0 0 2\n").is_err());
    }
}
