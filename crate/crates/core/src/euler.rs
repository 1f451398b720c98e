//! Balanced two-way edge splits along Eulerian tours.
//!
//! Each connected component is made Eulerian (an auxiliary vertex is joined to every
//! odd-degree vertex; if there are none, the tour starts at the lowest-id vertex of
//! minimum degree), a tour is walked with Hierholzer's method and its edges are placed
//! alternately on side one and side two. Every vertex then has at least `⌊d/2⌋` edges on
//! each side, except possibly the start vertex of an all-even component with an odd
//! number of edges, which ends with `⌈(d+1)/2⌉` edges on side one and `⌊(d-1)/2⌋` on side
//! two.
//!
//! Neighbours are visited in edge-id order and auxiliary edges come last, so the output
//! is a deterministic function of the input.

use crate::graph::{EdgeBipartition, EdgeId, Graph, Rule, Side, Vertex};

/// The result of splitting a set of edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerSplit {
    /// `(edge, side)` for every split edge, in ascending edge id.
    pub assignment: Vec<(EdgeId, Side)>,
    /// Vertices left below `⌊d/2⌋` on side two, at most one per component, ascending.
    pub exceptional: Vec<Vertex>,
}

/// Splits all edges of `g`. Provenance of every edge is [`Rule::Euler`].
pub fn balanced_split(g: &Graph) -> (EdgeBipartition, Vec<Vertex>) {
    let all: Vec<EdgeId> = (0..g.edge_count()).collect();
    let split = split_edges(g, &all);
    let mut side = vec![Side::One; g.edge_count()];
    for &(e, s) in &split.assignment {
        side[e] = s;
    }
    (EdgeBipartition::new(side, vec![Rule::Euler; g.edge_count()]), split.exceptional)
}

/// Splits the subgraph of `g` formed by `edges`, one component after another. Degrees in
/// the guarantee are degrees inside that subgraph.
pub fn split_edges(g: &Graph, edges: &[EdgeId]) -> EulerSplit {
    let mut in_set = vec![false; g.edge_count()];
    for &e in edges {
        in_set[e] = true;
    }
    let mut assignment = Vec::with_capacity(edges.len());
    let mut exceptional = Vec::new();
    for comp in g.components_of(edges) {
        let (sides, exc) = split_component(g, &comp, &in_set);
        assignment.extend(sides);
        exceptional.extend(exc);
    }
    assignment.sort_unstable_by_key(|&(e, _)| e);
    exceptional.sort_unstable();
    EulerSplit { assignment, exceptional }
}

fn split_component(g: &Graph, comp: &[Vertex], in_set: &[bool]) -> (Vec<(EdgeId, Side)>, Option<Vertex>) {
    // Local indexing: component vertices 0..k, auxiliary vertex k.
    let k = comp.len();
    let local = |v: Vertex| comp.binary_search(&v).expect("vertex in component");

    // Local edges: (a, b, Some(original id)) or (a, aux, None).
    let mut ends: Vec<(usize, usize, Option<EdgeId>)> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    let mut degree = vec![0usize; k];
    for (i, &v) in comp.iter().enumerate() {
        for &(w, e) in g.neighbours(v) {
            if !in_set[e] {
                continue;
            }
            degree[i] += 1;
            if v < w {
                let j = local(w);
                let id = ends.len();
                ends.push((i, j, Some(e)));
                adj[i].push(id);
                adj[j].push(id);
            }
        }
    }
    // Neighbour order: the per-vertex lists were filled in edge-id order only for the
    // lower endpoint; restore edge-id order everywhere.
    for list in adj.iter_mut() {
        list.sort_unstable_by_key(|&id| ends[id].2);
    }
    let odd: Vec<usize> = (0..k).filter(|&i| degree[i] % 2 == 1).collect();
    let start = if odd.is_empty() {
        (0..k).min_by_key(|&i| (degree[i], i)).expect("non-empty component")
    } else {
        for &i in &odd {
            let id = ends.len();
            ends.push((i, k, None));
            adj[i].push(id);
            adj[k].push(id);
        }
        k
    };

    let tour = hierholzer(&ends, &adj, start);
    debug_assert_eq!(tour.len(), ends.len());

    let mut d1 = vec![0usize; k];
    let mut out = Vec::with_capacity(tour.len());
    for (pos, &id) in tour.iter().enumerate() {
        let side = if pos % 2 == 0 { Side::One } else { Side::Two };
        let (a, b, orig) = ends[id];
        if let Some(e) = orig {
            if side == Side::One {
                d1[a] += 1;
                d1[b] += 1;
            }
            out.push((e, side));
        }
    }
    let mut exceptional = None;
    for i in 0..k {
        let d2 = degree[i] - d1[i];
        if d1[i].min(d2) < degree[i] / 2 {
            debug_assert!(exceptional.is_none(), "at most one exceptional vertex per component");
            debug_assert_eq!(i, start);
            exceptional = Some(comp[i]);
        }
    }
    (out, exceptional)
}

/// Eulerian circuit from `start`, as the sequence of local edge ids in traversal order.
fn hierholzer(ends: &[(usize, usize, Option<EdgeId>)], adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut used = vec![false; ends.len()];
    let mut next = vec![0usize; adj.len()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit = Vec::with_capacity(ends.len());
    while let Some(&(v, _)) = stack.last() {
        while next[v] < adj[v].len() && used[adj[v][next[v]]] {
            next[v] += 1;
        }
        if next[v] < adj[v].len() {
            let id = adj[v][next[v]];
            used[id] = true;
            let (a, b, _) = ends[id];
            let w = if a == v { b } else { a };
            stack.push((w, Some(id)));
        } else {
            let (_, via) = stack.pop().unwrap();
            if let Some(id) = via {
                circuit.push(id);
            }
        }
    }
    circuit.reverse();
    circuit
}
