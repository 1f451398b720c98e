//! The structural half of the construction: far-degree edges, per-vertex moduli, and the
//! pair-colour rules that split the remaining edges into two sides.
//!
//! Every vertex `v` carries a pair `(c1, c2)` with both coordinates in `0..y_v`. For an
//! edge `uv` whose endpoints carry different pairs the side is fixed by the pairs alone:
//!
//! | rule | condition                                    | side |
//! |------|----------------------------------------------|------|
//! | 1    | `c1` equal, `c2` differ                      | 2    |
//! | 2    | `c2` equal, `c1` differ                      | 1    |
//! | 3    | both differ, `c1u + c2u + c1v + c2v` odd     | 1    |
//! | 4    | both differ, coordinate sum even             | 2    |
//!
//! Edges between identical pairs form `E0`. Those whose endpoints also share `y` make up
//! the same-class subgraphs, which are split by [`crate::euler::split_edges`] (rule 5;
//! the exceptional vertices of those splits are the special vertices `V*`). The rest of
//! `E0` goes to side two (rule 6).

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::euler;
use crate::graph::{parse_fields, EdgeBipartition, EdgeId, Graph, GraphError, Rule, Side, Vertex};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("vertex {vertex} has degree {degree}, too small for y >= 1 (need q*d >= 24t)")]
    DegreeTooSmall { vertex: Vertex, degree: usize },
    #[error("t must be positive")]
    ZeroT,
    #[error("order parameter must be a positive even integer, got {0}")]
    InvalidOrder(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("vertex {vertex}: y must be positive")]
    ZeroModulus { vertex: Vertex },
    #[error("vertex {vertex}: pair ({c1}, {c2}) outside [0, {y})^2")]
    OutOfRange { vertex: Vertex, c1: u64, c2: u64, y: u64 },
    #[error("assignment covers {got} vertices, graph has {expected}")]
    Length { expected: usize, got: usize },
    #[error("line {line}: vertex {vertex} listed twice")]
    Repeated { line: usize, vertex: Vertex },
    #[error("vertex {0} missing from assignment")]
    Missing(Vertex),
    #[error(transparent)]
    Parse(#[from] GraphError),
}

/// A colour pair and modulus base per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairAssignment {
    c1: Vec<u64>,
    c2: Vec<u64>,
    y: Vec<u64>,
}

impl PairAssignment {
    pub fn new(c1: Vec<u64>, c2: Vec<u64>, y: Vec<u64>) -> Result<Self, PairError> {
        if c1.len() != y.len() || c2.len() != y.len() {
            return Err(PairError::Length { expected: y.len(), got: c1.len().min(c2.len()) });
        }
        for v in 0..y.len() {
            if y[v] == 0 {
                return Err(PairError::ZeroModulus { vertex: v });
            }
            if c1[v] >= y[v] || c2[v] >= y[v] {
                return Err(PairError::OutOfRange { vertex: v, c1: c1[v], c2: c2[v], y: y[v] });
            }
        }
        Ok(Self { c1, c2, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn pair(&self, v: Vertex) -> (u64, u64) {
        (self.c1[v], self.c2[v])
    }

    pub fn y(&self, v: Vertex) -> u64 {
        self.y[v]
    }

    pub fn ys(&self) -> &[u64] {
        &self.y
    }

    /// Coordinate `side.number()` of the pair at `v`.
    pub fn coordinate(&self, v: Vertex, side: Side) -> u64 {
        match side {
            Side::One => self.c1[v],
            Side::Two => self.c2[v],
        }
    }

    pub(crate) fn set_pair(&mut self, v: Vertex, c1: u64, c2: u64) {
        debug_assert!(c1 < self.y[v] && c2 < self.y[v]);
        self.c1[v] = c1;
        self.c2[v] = c2;
    }

    pub fn check_against(&self, g: &Graph) -> Result<(), PairError> {
        if self.len() != g.vertex_count() {
            return Err(PairError::Length { expected: g.vertex_count(), got: self.len() });
        }
        Ok(())
    }

    /// Same pair and same `y`.
    pub fn same_class(&self, u: Vertex, v: Vertex) -> bool {
        self.pair(u) == self.pair(v) && self.y[u] == self.y[v]
    }

    /// `n` lines `"v c1 c2 y"` in vertex order.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 * self.len());
        for v in 0..self.len() {
            let _ = writeln!(out, "{v} {} {} {}", self.c1[v], self.c2[v], self.y[v]);
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output; lines may come in any order but every
    /// vertex `0..n` must appear exactly once.
    pub fn parse(text: &str, n: usize) -> Result<Self, PairError> {
        let mut c1 = vec![0; n];
        let mut c2 = vec![0; n];
        let mut y = vec![0; n];
        let mut seen = vec![false; n];
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f = parse_fields(line, i + 1, 4)?;
            let v = f[0];
            if v >= n {
                return Err(GraphError::VertexOutOfRange { line: i + 1, vertex: v, n }.into());
            }
            if seen[v] {
                return Err(PairError::Repeated { line: i + 1, vertex: v });
            }
            seen[v] = true;
            (c1[v], c2[v], y[v]) = (f[1] as u64, f[2] as u64, f[3] as u64);
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(PairError::Missing(v));
        }
        Self::new(c1, c2, y)
    }
}

/// Edges split by the far-degree test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarSplit {
    /// Edges `uv` with `d(u) ∉ [d(v)/2, 2d(v)]`, ascending.
    pub hprime: Vec<EdgeId>,
    /// The remaining edges, ascending.
    pub h: Vec<EdgeId>,
}

pub fn is_far(du: usize, dv: usize) -> bool {
    du.max(dv) > 2 * du.min(dv)
}

pub fn split_far_edges(g: &Graph) -> FarSplit {
    let (mut hprime, mut h) = (Vec::new(), Vec::new());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if is_far(g.degree(u), g.degree(v)) {
            hprime.push(e);
        } else {
            h.push(e);
        }
    }
    FarSplit { hprime, h }
}

/// `y_v = 2^⌊log2(q·d(v) / 24t)⌋`, computed exactly.
pub fn compute_y(g: &Graph, q: Rational, t: u64) -> Result<Vec<u64>, DecomposeError> {
    if t == 0 {
        return Err(DecomposeError::ZeroT);
    }
    (0..g.vertex_count())
        .map(|v| y_for_degree(g.degree(v), q, t).ok_or(DecomposeError::DegreeTooSmall { vertex: v, degree: g.degree(v) }))
        .collect()
}

/// The largest power of two `y` with `24·t·y <= q·d`, if any.
pub fn y_for_degree(d: usize, q: Rational, t: u64) -> Option<u64> {
    let lhs = q.num() as u128 * d as u128;
    let unit = 24 * t as u128 * q.den() as u128;
    if lhs < unit {
        return None;
    }
    let mut y: u128 = 1;
    while (y * 2) * unit <= lhs {
        y *= 2;
    }
    Some(y as u64)
}

/// Side and rule for an edge between pairs `pu` and `pv`, or `None` if the pairs are
/// identical.
pub fn classify_pairs(pu: (u64, u64), pv: (u64, u64)) -> Option<(Side, Rule)> {
    let ((a1, a2), (b1, b2)) = (pu, pv);
    match (a1 == b1, a2 == b2) {
        (true, true) => None,
        (true, false) => Some((Side::Two, Rule::R1)),
        (false, true) => Some((Side::One, Rule::R2)),
        (false, false) => {
            if (a1 + a2 + b1 + b2) % 2 == 1 {
                Some((Side::One, Rule::R3))
            } else {
                Some((Side::Two, Rule::R4))
            }
        }
    }
}

/// One connected same-class subgraph (identical pairs, equal `y`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SameClassComponent {
    pub c1: u64,
    pub c2: u64,
    pub y: u64,
    pub vertices: Vec<Vertex>,
}

/// Result of [`apply_rules`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOutcome {
    pub h1: Vec<EdgeId>,
    pub h2: Vec<EdgeId>,
    /// Edges whose endpoints carry identical pairs.
    pub e0: Vec<EdgeId>,
    /// Special vertices: exceptional vertices of the same-class splits.
    pub vstar: Vec<Vertex>,
    /// Least `T` such that no vertex has more than `2T - 2` same-class neighbours.
    pub t_value: u64,
    pub classes: Vec<SameClassComponent>,
    /// `(edge, side, rule)` for every classified edge, ascending by edge.
    pub placement: Vec<(EdgeId, Side, Rule)>,
}

impl PartitionOutcome {
    /// `H''_i = H_i - E0`.
    pub fn h_double_prime(&self, side: Side) -> Vec<EdgeId> {
        let e0: HashSet<EdgeId> = self.e0.iter().copied().collect();
        let h = match side {
            Side::One => &self.h1,
            Side::Two => &self.h2,
        };
        h.iter().copied().filter(|e| !e0.contains(e)).collect()
    }

    /// Edges of the side-`i` halves of the same-class subgraphs.
    pub fn same_class_edges(&self, side: Side) -> Vec<EdgeId> {
        self.placement
            .iter()
            .filter(|&&(_, s, r)| r == Rule::R5 && s == side)
            .map(|&(e, _, _)| e)
            .collect()
    }
}

/// Classifies the edges `h` of `g` under `pa` by rules 1–6.
pub fn apply_rules(g: &Graph, h: &[EdgeId], pa: &PairAssignment) -> PartitionOutcome {
    let mut placement = Vec::with_capacity(h.len());
    let mut e0 = Vec::new();
    let mut same_class = Vec::new();
    for &e in h {
        let (u, v) = g.endpoints(e);
        match classify_pairs(pa.pair(u), pa.pair(v)) {
            Some((side, rule)) => placement.push((e, side, rule)),
            None => {
                e0.push(e);
                if pa.y(u) == pa.y(v) {
                    same_class.push(e);
                } else {
                    placement.push((e, Side::Two, Rule::R6));
                }
            }
        }
    }
    let split = euler::split_edges(g, &same_class);
    placement.extend(split.assignment.iter().map(|&(e, s)| (e, s, Rule::R5)));
    placement.sort_unstable_by_key(|&(e, _, _)| e);
    e0.sort_unstable();

    let classes = g
        .components_of(&same_class)
        .into_iter()
        .map(|vertices| {
            let (c1, c2) = pa.pair(vertices[0]);
            SameClassComponent { c1, c2, y: pa.y(vertices[0]), vertices }
        })
        .collect();

    let mut class_degree = vec![0u64; g.vertex_count()];
    for &e in &same_class {
        let (u, v) = g.endpoints(e);
        class_degree[u] += 1;
        class_degree[v] += 1;
    }
    let max_a = class_degree.iter().copied().max().unwrap_or(0);

    let side_list = |s: Side| placement.iter().filter(|p| p.1 == s).map(|p| p.0).collect();
    PartitionOutcome {
        h1: side_list(Side::One),
        h2: side_list(Side::Two),
        e0,
        vstar: split.exceptional,
        t_value: (max_a + 3) / 2,
        classes,
        placement,
    }
}

/// `K_{n²}` on vertex set `[0, n)²` (vertex `(i, j)` has id `i·n + j`) with pair `(i, j)`
/// and `y = n` at every vertex.
pub fn knsq_assignment(n: usize) -> Result<(Graph, PairAssignment), DecomposeError> {
    if n == 0 || n % 2 == 1 {
        return Err(DecomposeError::InvalidOrder(n));
    }
    let g = Graph::complete(n * n);
    let c1 = (0..n * n).map(|v| (v / n) as u64).collect();
    let c2 = (0..n * n).map(|v| (v % n) as u64).collect();
    let pa = PairAssignment::new(c1, c2, vec![n as u64; n * n]).expect("coordinates below n");
    Ok((g, pa))
}

/// Turns a rule outcome over all edges of `g` into a bipartition.
pub fn outcome_bipartition(g: &Graph, outcome: &PartitionOutcome) -> EdgeBipartition {
    let mut side = vec![Side::One; g.edge_count()];
    let mut rule = vec![Rule::R1; g.edge_count()];
    let mut covered = 0;
    for &(e, s, r) in &outcome.placement {
        side[e] = s;
        rule[e] = r;
        covered += 1;
    }
    assert_eq!(covered, g.edge_count(), "outcome must cover every edge");
    EdgeBipartition::new(side, rule)
}
