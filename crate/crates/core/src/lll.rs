//! Uniform pair sampling and Moser–Tardos resampling of the two bad events per vertex.
//!
//! For a vertex `v` with `H`-neighbourhood `N_H(v)`:
//!
//! - `A_v` holds when at least `2t - 1` neighbours share both `y` and the pair of `v`;
//! - `B_v` holds when `d_H(v) > (1 - 2q)·d(v) - 2` and one of the rule-1..4 degrees
//!   `d_{H''_1}(v)`, `d_{H''_2}(v)` falls below `q·d_H(v) + 1`.
//!
//! Both events are determined by the pairs on `{v} ∪ N_H(v)`, which is the scope that gets
//! resampled. The violated event with the smallest vertex id is fixed first, `A` before
//! `B`.

use std::collections::BTreeSet;

use rand::Rng as _;

use crate::decompose::{classify_pairs, PairAssignment};
use crate::graph::{EdgeId, Graph, Side, Vertex};
use crate::rational::Rational;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub iteration: u64,
    pub kind: EventKind,
    pub vertex: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventReport {
    pub violated_a: Vec<Vertex>,
    pub violated_b: Vec<Vertex>,
    /// Resampling rounds performed.
    pub iterations: u64,
    pub resample_log: Option<Vec<LogEntry>>,
}

impl EventReport {
    pub fn success(&self) -> bool {
        self.violated_a.is_empty() && self.violated_b.is_empty()
    }
}

/// Witness for `B_v`: `(d_H(v), d_{H''_1}(v), d_{H''_2}(v))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BWitness {
    pub d_h: usize,
    pub d1: usize,
    pub d2: usize,
}

/// Draws every pair uniformly from `[0, y_v)²`, vertex by vertex.
pub fn sample_uniform(y: &[u64], seed: u64) -> PairAssignment {
    sample_with(y, &mut rng::from_seed(seed))
}

fn sample_with(y: &[u64], rng: &mut rng::Rng) -> PairAssignment {
    let mut c1 = Vec::with_capacity(y.len());
    let mut c2 = Vec::with_capacity(y.len());
    for &yv in y {
        c1.push(rng.gen_range(0..yv));
        c2.push(rng.gen_range(0..yv));
    }
    PairAssignment::new(c1, c2, y.to_vec()).expect("sampled inside range")
}

/// `H` as adjacency lists over the vertices of `G`, with `G`-degrees kept alongside.
#[derive(Clone, Debug)]
pub struct HView {
    adj: Vec<Vec<Vertex>>,
    degree_g: Vec<usize>,
}

impl HView {
    pub fn new(g: &Graph, h: &[EdgeId]) -> Self {
        let mut adj = vec![Vec::new(); g.vertex_count()];
        for &e in h {
            let (u, v) = g.endpoints(e);
            adj[u].push(v);
            adj[v].push(u);
        }
        Self { adj, degree_g: g.degrees() }
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    /// `|A(v)|`.
    pub fn same_class_count(&self, pa: &PairAssignment, v: Vertex) -> usize {
        self.adj[v].iter().filter(|&&u| pa.same_class(u, v)).count()
    }

    pub fn check_a(&self, pa: &PairAssignment, v: Vertex, t: u64) -> (bool, usize) {
        let a = self.same_class_count(pa, v);
        (a as u64 + 1 >= 2 * t, a)
    }

    pub fn h_double_prime_degrees(&self, pa: &PairAssignment, v: Vertex) -> BWitness {
        let (mut d1, mut d2) = (0, 0);
        for &u in &self.adj[v] {
            match classify_pairs(pa.pair(u), pa.pair(v)) {
                Some((Side::One, _)) => d1 += 1,
                Some((Side::Two, _)) => d2 += 1,
                None => {}
            }
        }
        BWitness { d_h: self.adj[v].len(), d1, d2 }
    }

    pub fn check_b(&self, pa: &PairAssignment, v: Vertex, q: Rational) -> (bool, BWitness) {
        let w = self.h_double_prime_degrees(pa, v);
        let (num, den) = (q.num() as i128, q.den() as i128);
        let d = self.degree_g[v] as i128;
        let d_h = w.d_h as i128;
        // d_H > (1 - 2q) d - 2
        let active = d_h * den > (den - 2 * num) * d - 2 * den;
        // min_i d_{H''_i} < q d_H + 1
        let short = (w.d1.min(w.d2) as i128) * den < num * d_h + den;
        (active && short, w)
    }

    /// Fresh scan over all vertices.
    pub fn scan(&self, pa: &PairAssignment, q: Rational, t: u64) -> (Vec<Vertex>, Vec<Vertex>) {
        let n = self.adj.len();
        let a = (0..n).filter(|&v| self.check_a(pa, v, t).0).collect();
        let b = (0..n).filter(|&v| self.check_b(pa, v, q).0).collect();
        (a, b)
    }
}

pub fn check_a(g: &Graph, h: &[EdgeId], pa: &PairAssignment, v: Vertex, t: u64) -> (bool, usize) {
    HView::new(g, h).check_a(pa, v, t)
}

pub fn check_b(g: &Graph, h: &[EdgeId], pa: &PairAssignment, v: Vertex, q: Rational) -> (bool, BWitness) {
    HView::new(g, h).check_b(pa, v, q)
}

/// Moser–Tardos state: the current assignment plus the set of violated events.
pub struct Resampler {
    view: HView,
    q: Rational,
    t: u64,
    rng: rng::Rng,
    pa: PairAssignment,
    bad_a: Vec<bool>,
    bad_b: Vec<bool>,
    queue: BTreeSet<(Vertex, EventKind)>,
    /// `|A(v)|`, kept up to date edge by edge.
    same: Vec<usize>,
    /// `(d_{H''_1}(v), d_{H''_2}(v))`, kept up to date edge by edge.
    split: Vec<[usize; 2]>,
    stamp: Vec<u64>,
    in_scope: Vec<u64>,
    rounds: u64,
}

impl Resampler {
    /// Samples the initial assignment from `seed` and scans all events.
    pub fn new(g: &Graph, h: &[EdgeId], y: &[u64], q: Rational, t: u64, seed: u64) -> Self {
        let mut rng = rng::from_seed(seed);
        let pa = sample_with(y, &mut rng);
        let n = g.vertex_count();
        let mut s = Self {
            view: HView::new(g, h),
            q,
            t,
            rng,
            pa,
            bad_a: vec![false; n],
            bad_b: vec![false; n],
            queue: BTreeSet::new(),
            same: vec![0; n],
            split: vec![[0, 0]; n],
            stamp: vec![0; n],
            in_scope: vec![0; n],
            rounds: 0,
        };
        for v in 0..n {
            s.same[v] = s.view.same_class_count(&s.pa, v);
            let w = s.view.h_double_prime_degrees(&s.pa, v);
            s.split[v] = [w.d1, w.d2];
            s.refresh(v);
        }
        s
    }

    /// Adds (`sign = 1`) or removes (`sign = -1`) the contribution of every edge with an
    /// end in the current scope (marked with `round`) to the counters at both of its ends.
    fn count_scope_edges(&mut self, scope: &[Vertex], round: u64, sign: isize) {
        let Self { view, pa, same, split, in_scope, .. } = self;
        for &w in scope {
            let pw = pa.pair(w);
            for &x in &view.adj[w] {
                if in_scope[x] == round && x < w {
                    continue;
                }
                if let Some((side, _)) = classify_pairs(pw, pa.pair(x)) {
                    let i = side.index();
                    split[w][i] = split[w][i].wrapping_add_signed(sign);
                    split[x][i] = split[x][i].wrapping_add_signed(sign);
                } else if pa.y(w) == pa.y(x) {
                    same[w] = same[w].wrapping_add_signed(sign);
                    same[x] = same[x].wrapping_add_signed(sign);
                }
            }
        }
    }

    fn refresh(&mut self, v: Vertex) {
        let a = self.same[v] as u64 + 1 >= 2 * self.t;
        let b = {
            let (num, den) = (self.q.num() as i128, self.q.den() as i128);
            let d = self.view.degree_g[v] as i128;
            let d_h = self.view.adj[v].len() as i128;
            let active = d_h * den > (den - 2 * num) * d - 2 * den;
            let short = (self.split[v][0].min(self.split[v][1]) as i128) * den < num * d_h + den;
            active && short
        };
        for (now, was, kind) in [(a, self.bad_a[v], EventKind::A), (b, self.bad_b[v], EventKind::B)] {
            if now && !was {
                self.queue.insert((v, kind));
            } else if !now && was {
                self.queue.remove(&(v, kind));
            }
        }
        self.bad_a[v] = a;
        self.bad_b[v] = b;
    }

    pub fn assignment(&self) -> &PairAssignment {
        &self.pa
    }

    pub fn violated_count(&self) -> usize {
        self.queue.len()
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    /// The event the next [`step`](Self::step) would resample.
    pub fn next_event(&self) -> Option<(Vertex, EventKind)> {
        self.queue.first().copied()
    }

    /// The resampling scope of events at `v`: `v` followed by its `H`-neighbours.
    pub fn scope(&self, v: Vertex) -> Vec<Vertex> {
        std::iter::once(v).chain(self.view.neighbours(v).iter().copied()).collect()
    }

    /// Resamples the first violated event. Returns it, or `None` if nothing is violated.
    pub fn step(&mut self) -> Option<(Vertex, EventKind)> {
        let (v, kind) = self.next_event()?;
        self.rounds += 1;
        let round = self.rounds;
        let scope = self.scope(v);
        for &w in &scope {
            self.in_scope[w] = round;
        }
        self.count_scope_edges(&scope, round, -1);
        for &w in &scope {
            let yw = self.pa.y(w);
            let c1 = self.rng.gen_range(0..yw);
            let c2 = self.rng.gen_range(0..yw);
            self.pa.set_pair(w, c1, c2);
        }
        self.count_scope_edges(&scope, round, 1);
        let mut touched = Vec::new();
        for &w in &scope {
            for x in std::iter::once(w).chain(self.view.neighbours(w).iter().copied()) {
                if self.stamp[x] != round {
                    self.stamp[x] = round;
                    touched.push(x);
                }
            }
        }
        for x in touched {
            self.refresh(x);
        }
        Some((v, kind))
    }
}

/// Resamples until no `A_v` or `B_v` holds, or `max_rounds` rounds have been spent.
///
/// On success the final assignment is returned; otherwise the assignment with the fewest
/// violated events seen (earliest on ties). The report's violated sets always come from a
/// fresh scan of the returned assignment.
#[allow(clippy::too_many_arguments)]
pub fn resample_until_good(
    g: &Graph,
    h: &[EdgeId],
    y: &[u64],
    q: Rational,
    t: u64,
    seed: u64,
    max_rounds: u64,
    record_log: bool,
) -> (PairAssignment, EventReport) {
    let mut rs = Resampler::new(g, h, y, q, t, seed);
    let mut log = record_log.then(Vec::new);
    let mut best = (rs.violated_count(), rs.assignment().clone());
    while rs.violated_count() > 0 && rs.rounds() < max_rounds {
        let (vertex, kind) = rs.step().expect("violated event present");
        if let Some(log) = log.as_mut() {
            log.push(LogEntry { iteration: rs.rounds(), kind, vertex });
        }
        if rs.violated_count() < best.0 {
            best = (rs.violated_count(), rs.assignment().clone());
        }
    }
    let iterations = rs.rounds();
    let pa = if rs.violated_count() == 0 { rs.pa } else { best.1 };
    let (violated_a, violated_b) = rs.view.scan(&pa, q, t);
    (pa, EventReport { violated_a, violated_b, iterations, resample_log: log })
}

pub fn default_max_rounds(n: usize) -> u64 {
    100 * n.max(1) as u64
}
