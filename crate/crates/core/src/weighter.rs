//! Residue lists, target assignment, `{1,2}`-weightings and the end-to-end pipeline.
//!
//! A side graph `G_i` is weighted by finding a degree-constrained subgraph `H'''_i` whose
//! degrees hit prescribed residues, then putting weight 2 on `H'''_i` and 1 elsewhere, so
//! that `s_i(v) = d_{G_i}(v) + d_{H'''_i}(v)` lands in a residue class chosen per vertex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::dcs::{self, DcsError, DcsOptions, DcsSolution, ModTarget};
use crate::decompose::{self, PairAssignment, PartitionOutcome};
use crate::euler;
use crate::graph::{parse_fields, EdgeBipartition, EdgeId, Graph, Rule, Side, Vertex};
use crate::lll::{self, EventReport};
use crate::rational::Rational;
use crate::rng::derive_seed;
use crate::verify::{self, CertFailure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("vertex {vertex}: y = {y} is not a power of two")]
    NotPowerOfTwo { vertex: Vertex, y: u64 },
    #[error("side {side}: every list element at vertex {vertex} is taken by a same-class neighbour")]
    ListExhausted { side: Side, vertex: Vertex },
    #[error("greedy colouring uses {chi} colours; need 12*{chi} <= minimum degree {delta}")]
    Precondition { chi: usize, delta: usize },
    #[error("colouring is not proper at edge {0}")]
    ImproperColouring(EdgeId),
    #[error(transparent)]
    Dcs(#[from] DcsError),
}

/// `A_v^1` and `A_v^2`: `4t·c^i + 2·(log2 y mod 2) + {0, 4, …, 4t-4}`.
pub fn build_lists(v: Vertex, pa: &PairAssignment, t: u64) -> Result<[Vec<u64>; 2], WeightError> {
    let y = pa.y(v);
    if !y.is_power_of_two() {
        return Err(WeightError::NotPowerOfTwo { vertex: v, y });
    }
    let shift = 2 * (y.trailing_zeros() as u64 % 2);
    Ok(Side::BOTH.map(|side| {
        let base = 4 * t * pa.coordinate(v, side) + shift;
        (0..t).map(|k| base + 4 * k).collect()
    }))
}

/// Per-side residue targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideTargets {
    /// Chosen list element `a'_i(v)`.
    pub aprime: [Vec<u64>; 2],
    /// `a'_i(v) - d_{G_i}(v)`.
    pub a: [Vec<i64>; 2],
    /// `4t·y_v`.
    pub lambda: Vec<u64>,
    /// `d_{G_i}(v)`.
    pub side_degree: [Vec<usize>; 2],
}

impl SideTargets {
    /// DCS targets for side `side`. Vertices without side edges get `a = 0`, which the
    /// empty witness satisfies; they carry no constraint on that side.
    pub fn mod_target(&self, side: Side) -> ModTarget {
        let i = side.index();
        let a = (0..self.lambda.len())
            .map(|v| if self.side_degree[i][v] == 0 { 0 } else { self.a[i][v] })
            .collect();
        ModTarget::new(a, self.lambda.clone()).expect("lambda is at least 4")
    }
}

/// Greedy choice of `a'_i`: special vertices first, then the rest in ascending id, each
/// taking the smallest list element not already fixed at a neighbour inside its
/// same-class subgraph on that side.
pub fn assign_targets(
    g: &Graph,
    bipartition: &EdgeBipartition,
    outcome: &PartitionOutcome,
    pa: &PairAssignment,
    t: u64,
) -> Result<SideTargets, WeightError> {
    let n = g.vertex_count();
    let lists = (0..n).map(|v| build_lists(v, pa, t)).collect::<Result<Vec<_>, _>>()?;
    let side_degree = bipartition.side_degrees(g);
    let special: BTreeSet<Vertex> = outcome.vstar.iter().copied().collect();
    let order: Vec<Vertex> = outcome.vstar.iter().copied().chain((0..n).filter(|v| !special.contains(v))).collect();

    let mut aprime = [vec![0u64; n], vec![0u64; n]];
    for side in Side::BOTH {
        let i = side.index();
        let mut adj = vec![Vec::new(); n];
        for e in outcome.same_class_edges(side) {
            let (u, v) = g.endpoints(e);
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut fixed: Vec<Option<u64>> = vec![None; n];
        for &v in &order {
            let taken: BTreeSet<u64> = adj[v].iter().filter_map(|&u| fixed[u]).collect();
            let choice = lists[v][i]
                .iter()
                .copied()
                .find(|x| !taken.contains(x))
                .ok_or(WeightError::ListExhausted { side, vertex: v })?;
            fixed[v] = Some(choice);
            aprime[i][v] = choice;
        }
    }
    let a = Side::BOTH.map(|s| {
        let i = s.index();
        (0..n).map(|v| aprime[i][v] as i64 - side_degree[i][v] as i64).collect()
    });
    let lambda = (0..n).map(|v| 4 * t * pa.y(v)).collect();
    Ok(SideTargets { aprime, a, lambda, side_degree })
}

/// Verdict carried by a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// A side with two adjacent vertices of equal weighted degree, or another failed check
    /// pinned to an edge.
    Invalid { side: Side, edge: EdgeId },
    /// A stage did not complete; the certificate is partial.
    Failed { stage: String, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Valid => write!(f, "valid"),
            Verdict::Invalid { side, edge } => write!(f, "invalid {side} {edge}"),
            Verdict::Failed { stage, reason } => write!(f, "failed {stage}: {reason}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("certificate line {line}: {reason}")]
pub struct CertificateParseError {
    pub line: usize,
    pub reason: String,
}

/// A decomposition into two sides with a `{1,2}`-weighting of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub m: usize,
    /// Side of each edge; `None` when the run stopped before the split was known.
    pub sides: Vec<Option<Side>>,
    pub weights: [BTreeMap<EdgeId, u64>; 2],
    pub sums: [BTreeMap<Vertex, u64>; 2],
    pub verdict: Verdict,
}

const SECTIONS: [&str; 6] = ["BIPARTITION", "WEIGHTS-1", "WEIGHTS-2", "SUMS-1", "SUMS-2", "VERDICT"];

impl Certificate {
    /// Certificate for `bipartition` with the given weights. Sums are recomputed and the
    /// verdict comes from [`verify::verify_certificate`].
    pub fn from_parts(g: &Graph, bipartition: &EdgeBipartition, weights: [BTreeMap<EdgeId, u64>; 2]) -> Self {
        let mut sums = [BTreeMap::new(), BTreeMap::new()];
        for side in Side::BOTH {
            let i = side.index();
            for v in 0..g.vertex_count() {
                sums[i].insert(v, 0);
            }
            for (&e, &w) in &weights[i] {
                let (u, v) = g.endpoints(e);
                *sums[i].get_mut(&u).unwrap() += w;
                *sums[i].get_mut(&v).unwrap() += w;
            }
        }
        let mut cert = Self {
            n: g.vertex_count(),
            m: g.edge_count(),
            sides: bipartition.sides().iter().map(|&s| Some(s)).collect(),
            weights,
            sums,
            verdict: Verdict::Valid,
        };
        cert.verdict = judge(g, &cert);
        cert
    }

    /// A partial certificate for a run that stopped at `stage`.
    pub fn failed(g: &Graph, bipartition: Option<&EdgeBipartition>, stage: &str, reason: impl Into<String>) -> Self {
        Self {
            n: g.vertex_count(),
            m: g.edge_count(),
            sides: match bipartition {
                Some(b) => b.sides().iter().map(|&s| Some(s)).collect(),
                None => vec![None; g.edge_count()],
            },
            weights: [BTreeMap::new(), BTreeMap::new()],
            sums: [BTreeMap::new(), BTreeMap::new()],
            verdict: Verdict::Failed { stage: stage.to_string(), reason: one_line(reason.into()) },
        }
    }

    /// `H'''_i`: the side-`i` edges of weight 2.
    pub fn witness(&self, side: Side) -> Vec<EdgeId> {
        self.weights[side.index()].iter().filter(|&(_, &w)| w == 2).map(|(&e, _)| e).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("CERTIFICATE {} {}\n{}\n", self.n, self.m, SECTIONS[0]);
        for (e, s) in self.sides.iter().enumerate() {
            if let Some(s) = s {
                writeln!(out, "{e} {s}").unwrap();
            }
        }
        for side in Side::BOTH {
            writeln!(out, "{}", SECTIONS[1 + side.index()]).unwrap();
            for (e, w) in &self.weights[side.index()] {
                writeln!(out, "{e} {w}").unwrap();
            }
        }
        for side in Side::BOTH {
            writeln!(out, "{}", SECTIONS[3 + side.index()]).unwrap();
            for (v, s) in &self.sums[side.index()] {
                writeln!(out, "{v} {s}").unwrap();
            }
        }
        writeln!(out, "{}\n{}", SECTIONS[5], self.verdict).unwrap();
        out
    }

    pub fn parse(text: &str) -> Result<Self, CertificateParseError> {
        let err = |line: usize, reason: String| CertificateParseError { line, reason };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());

        let (lineno, header) = lines.next().ok_or_else(|| err(1, "empty certificate".into()))?;
        let rest = header
            .strip_prefix("CERTIFICATE")
            .ok_or_else(|| err(lineno, "expected CERTIFICATE header".into()))?;
        let nm = parse_fields(rest, lineno, 2).map_err(|e| err(lineno, e.to_string()))?;
        let (n, m) = (nm[0], nm[1]);

        // `section` is the index of the current section; `seen` the number of headers read.
        let mut section = 0usize;
        let mut seen = 0usize;
        let mut sides = vec![None; m];
        let mut weights = [BTreeMap::new(), BTreeMap::new()];
        let mut sums = [BTreeMap::new(), BTreeMap::new()];
        let mut verdict = None;
        for (lineno, line) in lines {
            if SECTIONS.contains(&line) {
                if SECTIONS.get(seen) != Some(&line) {
                    return Err(err(lineno, format!("unexpected section {line}")));
                }
                section = seen;
                seen += 1;
                continue;
            }
            if seen == 0 {
                return Err(err(lineno, "expected BIPARTITION".into()));
            }
            if section == 5 {
                if verdict.is_some() {
                    return Err(err(lineno, "more than one verdict".into()));
                }
                verdict = Some(parse_verdict(line).ok_or_else(|| err(lineno, format!("bad verdict {line:?}")))?);
                continue;
            }
            let f = parse_fields(line, lineno, 2).map_err(|e| err(lineno, e.to_string()))?;
            let (key, value) = (f[0], f[1]);
            match section {
                0 => {
                    let s = Side::from_number(value).ok_or_else(|| err(lineno, format!("side must be 1 or 2, got {value}")))?;
                    let slot = sides.get_mut(key).ok_or_else(|| err(lineno, format!("edge {key} out of range")))?;
                    if slot.replace(s).is_some() {
                        return Err(err(lineno, format!("edge {key} listed twice")));
                    }
                }
                1 | 2 => {
                    if weights[section - 1].insert(key, value as u64).is_some() {
                        return Err(err(lineno, format!("edge {key} weighted twice")));
                    }
                }
                _ => {
                    if sums[section - 3].insert(key, value as u64).is_some() {
                        return Err(err(lineno, format!("vertex {key} summed twice")));
                    }
                }
            }
        }
        let verdict = verdict.ok_or_else(|| err(text.lines().count(), "missing VERDICT".into()))?;
        Ok(Self { n, m, sides, weights, sums, verdict })
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_verdict(line: &str) -> Option<Verdict> {
    if line == "valid" {
        return Some(Verdict::Valid);
    }
    if let Some(rest) = line.strip_prefix("invalid ") {
        let mut it = rest.split_whitespace();
        let side = Side::from_number(it.next()?.parse().ok()?)?;
        let edge = it.next()?.parse().ok()?;
        return it.next().is_none().then_some(Verdict::Invalid { side, edge });
    }
    let rest = line.strip_prefix("failed ")?;
    let (stage, reason) = rest.split_once(": ")?;
    Some(Verdict::Failed { stage: stage.to_string(), reason: reason.to_string() })
}

fn one_line(s: String) -> String {
    s.lines().collect::<Vec<_>>().join("; ")
}

fn judge(g: &Graph, cert: &Certificate) -> Verdict {
    match verify::verify_certificate(g, cert) {
        Ok(check) => match check.failure {
            None => Verdict::Valid,
            Some(CertFailure::Conflict { side, edge, .. }) => Verdict::Invalid { side, edge },
            Some(other) => Verdict::Failed { stage: "verify".into(), reason: other.to_string() },
        },
        Err(e) => Verdict::Failed { stage: "verify".into(), reason: e.to_string() },
    }
}

/// Weight 2 on `witness`, 1 on the other edges of `side_edges`.
fn side_weights(side_edges: &[EdgeId], witness: &[EdgeId]) -> BTreeMap<EdgeId, u64> {
    let heavy: BTreeSet<EdgeId> = witness.iter().copied().collect();
    side_edges.iter().map(|&e| (e, if heavy.contains(&e) { 2 } else { 1 })).collect()
}

/// Solves both sides' DCS instances (concurrently) and assembles the certificate. The
/// per-side results are returned alongside for reporting.
pub fn build_weighting(
    g: &Graph,
    bipartition: &EdgeBipartition,
    targets: &SideTargets,
    opts: &DcsOptions,
) -> (Certificate, [Result<DcsSolution, DcsError>; 2]) {
    let solve = |side: Side| {
        let (sub, map) = g.edge_subgraph(&bipartition.edges_on(side));
        let mut o = opts.clone();
        o.seed = derive_seed(opts.seed, side.number() as u64);
        dcs::find_dcs(&sub, &targets.mod_target(side), &o).map(|mut sol| {
            sol.edges = sol.edges.iter().map(|&e| map[e]).collect();
            sol
        })
    };
    let (r1, r2) = rayon::join(|| solve(Side::One), || solve(Side::Two));
    let results = [r1, r2];
    (assemble(g, bipartition, &results), results)
}

fn assemble(g: &Graph, bipartition: &EdgeBipartition, results: &[Result<DcsSolution, DcsError>; 2]) -> Certificate {
    for side in Side::BOTH {
        if let Err(e) = &results[side.index()] {
            return Certificate::failed(g, Some(bipartition), &format!("dcs-{side}"), e.to_string());
        }
    }
    let weights = Side::BOTH.map(|side| {
        let witness = &results[side.index()].as_ref().unwrap().edges;
        side_weights(&bipartition.edges_on(side), witness)
    });
    Certificate::from_parts(g, bipartition, weights)
}

/// Greedy proper colouring in ascending vertex id; each vertex takes the least colour
/// absent from its earlier neighbours.
pub fn greedy_colouring(g: &Graph) -> Vec<usize> {
    let mut colour = vec![usize::MAX; g.vertex_count()];
    let mut used = Vec::new();
    for v in 0..g.vertex_count() {
        used.clear();
        used.extend(g.neighbours(v).iter().map(|&(u, _)| colour[u]).filter(|&c| c != usize::MAX));
        used.sort_unstable();
        let mut c = 0;
        for &u in &used {
            if u == c {
                c += 1;
            } else if u > c {
                break;
            }
        }
        colour[v] = c;
    }
    colour
}

/// A single `{1,2}`-weighting derived from a proper colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleWeighting {
    pub colouring: Vec<usize>,
    /// Number of colours; the modulus is `2·chi`.
    pub chi: usize,
    /// Weight per edge id.
    pub weights: Vec<u64>,
    pub sums: Vec<u64>,
    /// Weight-2 edges, ascending.
    pub witness: Vec<EdgeId>,
    pub steps: u64,
}

/// Weights `g` so that `s(v) mod 2χ ∈ {2·colour(v), 2·colour(v) + 1}`, with no check that
/// the degree condition guaranteeing a witness holds.
pub fn weight_by_colouring(g: &Graph, colouring: &[usize], opts: &DcsOptions) -> Result<SingleWeighting, WeightError> {
    colouring_weighting(g, colouring, opts, true)
}

/// As [`weight_by_colouring`], but the weight-2 subgraph only has to hit the residues; its
/// degrees may fall outside `[d/3, 2d/3]`. Distinctness needs nothing more.
pub fn weight_by_colouring_residues(
    g: &Graph,
    colouring: &[usize],
    opts: &DcsOptions,
) -> Result<SingleWeighting, WeightError> {
    colouring_weighting(g, colouring, opts, false)
}

fn colouring_weighting(g: &Graph, colouring: &[usize], opts: &DcsOptions, bounded: bool) -> Result<SingleWeighting, WeightError> {
    if let Some(e) = g.edges().iter().position(|&(u, v)| colouring[u] == colouring[v]) {
        return Err(WeightError::ImproperColouring(e));
    }
    let chi = colouring.iter().max().map_or(1, |&c| c + 1);
    let lambda = 2 * chi as u64;
    let a = (0..g.vertex_count())
        .map(|v| if g.degree(v) == 0 { 0 } else { 2 * colouring[v] as i64 - g.degree(v) as i64 })
        .collect();
    let mut targets = ModTarget::new(a, vec![lambda; g.vertex_count()]).expect("lambda >= 2");
    if !bounded {
        targets = targets.residue_only();
    }
    let sol = dcs::find_dcs(g, &targets, opts)?;
    let mut weights = vec![1u64; g.edge_count()];
    for &e in &sol.edges {
        weights[e] = 2;
    }
    let sums = verify::weighted_degrees(g, &weights);
    Ok(SingleWeighting { colouring: colouring.to_vec(), chi, weights, sums, witness: sol.edges, steps: sol.steps })
}

/// The colouring shortcut: requires `12·χ̂ <= δ` for the greedy colour count `χ̂`.
pub fn chromatic_shortcut(g: &Graph, opts: &DcsOptions) -> Result<SingleWeighting, WeightError> {
    let colouring = greedy_colouring(g);
    let chi = colouring.iter().max().map_or(1, |&c| c + 1);
    let delta = g.min_degree();
    if delta < 12 || 12 * chi > delta {
        return Err(WeightError::Precondition { chi, delta });
    }
    weight_by_colouring(g, &colouring, opts)
}

impl SingleWeighting {
    /// As a certificate with every edge on side one and an empty side two.
    pub fn to_certificate(&self, g: &Graph) -> Certificate {
        let bip = EdgeBipartition::uniform(g.edge_count(), Side::One, Rule::Whole);
        let w1 = self.weights.iter().enumerate().map(|(e, &w)| (e, w)).collect();
        Certificate::from_parts(g, &bip, [w1, BTreeMap::new()])
    }
}

/// Largest colour count for which [`colour_sides`] tries relabelled colourings.
const MAX_RELABEL_COLOURS: usize = 6;

/// Rearranges `p` into the next permutation in lexicographic order; false after the last.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Weights one side graph from `colouring`: first with the degree interval, then by
/// residues alone, then by residues under each relabelling of the colours in
/// lexicographic order. Any proper colouring serves, so relabelling keeps the argument.
fn weight_side(sub: &Graph, colouring: &[usize], opts: &DcsOptions) -> Result<SingleWeighting, WeightError> {
    let first = match weight_by_colouring(sub, colouring, opts) {
        Ok(w) => return Ok(w),
        Err(WeightError::Dcs(_)) => weight_by_colouring_residues(sub, colouring, opts),
        Err(e) => return Err(e),
    };
    let Err(mut last) = first else { return first };
    let chi = colouring.iter().max().map_or(1, |&c| c + 1);
    if chi > MAX_RELABEL_COLOURS {
        return Err(last);
    }
    let mut perm: Vec<usize> = (0..chi).collect();
    while next_permutation(&mut perm) {
        let relabelled: Vec<usize> = colouring.iter().map(|&c| perm[c]).collect();
        match weight_by_colouring_residues(sub, &relabelled, opts) {
            Ok(w) => return Ok(w),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Weights each side of `bipartition` through a colouring of that side graph.
fn colour_sides(
    g: &Graph,
    bipartition: &EdgeBipartition,
    colourings: [Vec<usize>; 2],
    opts: &DcsOptions,
) -> Certificate {
    let mut weights = [BTreeMap::new(), BTreeMap::new()];
    for side in Side::BOTH {
        let (sub, map) = g.edge_subgraph(&bipartition.edges_on(side));
        let mut o = opts.clone();
        o.seed = derive_seed(opts.seed, side.number() as u64);
        match weight_side(&sub, &colourings[side.index()], &o) {
            Ok(w) => {
                weights[side.index()] = map.iter().enumerate().map(|(i, &e)| (e, w.weights[i])).collect();
            }
            Err(e) => return Certificate::failed(g, Some(bipartition), &format!("dcs-{side}"), e.to_string()),
        }
    }
    Certificate::from_parts(g, bipartition, weights)
}

/// `K_{n²}` split by the pair rules on `(i, j)` coordinates, each side weighted through
/// the coordinate colouring (first coordinate on side one, second on side two).
pub fn knsq_certificate(n: usize, opts: &DcsOptions) -> Result<(Graph, Certificate), decompose::DecomposeError> {
    let (g, pa) = decompose::knsq_assignment(n)?;
    let all: Vec<EdgeId> = (0..g.edge_count()).collect();
    let outcome = decompose::apply_rules(&g, &all, &pa);
    let bip = decompose::outcome_bipartition(&g, &outcome);
    let colourings = Side::BOTH.map(|s| (0..g.vertex_count()).map(|v| pa.coordinate(v, s) as usize).collect());
    let cert = colour_sides(&g, &bip, colourings, opts);
    Ok((g, cert))
}

/// Euler-split `g` and weight each side through a greedy colouring of that side.
pub fn euler_certificate(g: &Graph, opts: &DcsOptions) -> Certificate {
    let (bip, _) = euler::balanced_split(g);
    let colourings = Side::BOTH.map(|s| greedy_colouring(&g.edge_subgraph(&bip.edges_on(s)).0));
    colour_sides(g, &bip, colourings, opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineParams {
    pub q: Rational,
    pub t: u64,
    pub seed: u64,
    /// Resampling rounds; `None` means [`lll::default_max_rounds`].
    pub max_rounds: Option<u64>,
    pub dcs: DcsOptions,
    pub record_log: bool,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            q: Rational::new(9, 20).unwrap(),
            t: 18,
            seed: 0,
            max_rounds: None,
            dcs: DcsOptions::default(),
            record_log: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageTiming {
    pub stage: &'static str,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PipelineReport {
    pub timings: Vec<StageTiming>,
    pub lll: Option<EventReport>,
    /// `T` from the pair rules.
    pub t_value: Option<u64>,
    /// Whether `d_{G_i}(v) >= q·d(v)` held at every vertex on both sides.
    pub balance_held: Option<bool>,
    pub unbalanced: Vec<Vertex>,
    pub dcs_steps: [Option<u64>; 2],
    pub warnings: Vec<String>,
}

impl PipelineReport {
    pub fn elapsed(&self, stage: &str) -> Duration {
        self.timings.iter().filter(|t| t.stage == stage).map(|t| t.elapsed).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineRun {
    pub certificate: Certificate,
    pub bipartition: Option<EdgeBipartition>,
    pub pairs: Option<PairAssignment>,
    pub targets: Option<SideTargets>,
    pub report: PipelineReport,
}

fn timed<T>(report: &mut PipelineReport, stage: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    report.timings.push(StageTiming { stage, elapsed: start.elapsed() });
    out
}

/// Far-edge separation, Euler split of the far edges, moduli, resampling, pair rules,
/// targets and weighting. Every failure still yields a certificate whose verdict names
/// the stage.
pub fn full_pipeline(g: &Graph, params: &PipelineParams) -> PipelineRun {
    let mut report = PipelineReport::default();
    let (q, t) = (params.q, params.t);
    if q.num() * 13 <= q.den() * 5 {
        report.warnings.push(format!("q = {q} is at most 5/13; far edges across the split lose their guarantee"));
    }
    if 2 * q.num() >= q.den() {
        report.warnings.push(format!("q = {q} is not below 1/2"));
    }
    let mut run = PipelineRun {
        certificate: Certificate::failed(g, None, "start", "not run"),
        bipartition: None,
        pairs: None,
        targets: None,
        report: PipelineReport::default(),
    };

    let far = timed(&mut report, "split_far_edges", || decompose::split_far_edges(g));
    let hprime = timed(&mut report, "euler_h_prime", || euler::split_edges(g, &far.hprime));

    let y = match timed(&mut report, "compute_y", || decompose::compute_y(g, q, t)) {
        Ok(y) => y,
        Err(e) => {
            run.certificate = Certificate::failed(g, None, "compute_y", e.to_string());
            run.report = report;
            return run;
        }
    };

    let max_rounds = params.max_rounds.unwrap_or_else(|| lll::default_max_rounds(g.vertex_count()));
    let (pa, events) = timed(&mut report, "resample", || {
        lll::resample_until_good(g, &far.h, &y, q, t, derive_seed(params.seed, 0), max_rounds, params.record_log)
    });
    let lll_ok = events.success();
    let lll_reason = format!(
        "{} A-events and {} B-events still violated after {} rounds",
        events.violated_a.len(),
        events.violated_b.len(),
        events.iterations
    );
    report.lll = Some(events);
    run.pairs = Some(pa.clone());
    if !lll_ok {
        run.certificate = Certificate::failed(g, None, "resample", lll_reason);
        run.report = report;
        return run;
    }

    let outcome = timed(&mut report, "apply_rules", || decompose::apply_rules(g, &far.h, &pa));
    report.t_value = Some(outcome.t_value);
    let mut side = vec![Side::One; g.edge_count()];
    let mut rule = vec![Rule::HPrime; g.edge_count()];
    for &(e, s) in &hprime.assignment {
        side[e] = s;
    }
    for &(e, s, r) in &outcome.placement {
        side[e] = s;
        rule[e] = r;
    }
    let bip = EdgeBipartition::new(side, rule);

    let [d1, d2] = bip.side_degrees(g);
    report.unbalanced = (0..g.vertex_count())
        .filter(|&v| {
            let need = q.num() as u128 * g.degree(v) as u128;
            let den = q.den() as u128;
            (d1[v] as u128) * den < need || (d2[v] as u128) * den < need
        })
        .collect();
    report.balance_held = Some(report.unbalanced.is_empty());

    if outcome.t_value > t {
        run.certificate =
            Certificate::failed(g, Some(&bip), "apply_rules", format!("T = {} exceeds t = {t}", outcome.t_value));
        run.bipartition = Some(bip);
        run.report = report;
        return run;
    }

    let targets = match timed(&mut report, "assign_targets", || assign_targets(g, &bip, &outcome, &pa, t)) {
        Ok(x) => x,
        Err(e) => {
            run.certificate = Certificate::failed(g, Some(&bip), "assign_targets", e.to_string());
            run.bipartition = Some(bip);
            run.report = report;
            return run;
        }
    };

    let mut dcs_opts = params.dcs.clone();
    dcs_opts.seed = derive_seed(params.seed, 1);
    let (cert, results) = timed(&mut report, "build_weighting", || build_weighting(g, &bip, &targets, &dcs_opts));
    report.dcs_steps = [0, 1].map(|i| results[i].as_ref().ok().map(|s| s.steps));

    run.certificate = cert;
    run.bipartition = Some(bip);
    run.targets = Some(targets);
    run.report = report;
    run
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pa1(c1: u64, c2: u64, y: u64) -> PairAssignment {
        PairAssignment::new(vec![c1], vec![c2], vec![y]).unwrap()
    }

    #[test]
    fn list_examples() {
        let l = build_lists(0, &pa1(0, 0, 1024), 18).unwrap();
        assert_eq!(l[0], (0..18).map(|k| 4 * k).collect::<Vec<_>>());
        let l = build_lists(0, &pa1(1, 0, 1024), 18).unwrap();
        assert_eq!(l[0].first(), Some(&72));
        assert_eq!(l[0].last(), Some(&140));
        let l = build_lists(0, &pa1(0, 1, 2), 2).unwrap();
        assert_eq!(l[0], vec![2, 6]);
        assert_eq!(l[1], vec![10, 14]);
    }

    #[test]
    fn lists_are_even_and_below_lambda() {
        for y in [1u64, 2, 4, 8, 16] {
            for t in 1..5 {
                for c in 0..y {
                    let l = build_lists(0, &pa1(c, y - 1 - c, y), t).unwrap();
                    for list in l {
                        assert_eq!(list.len() as u64, t);
                        assert!(list.iter().all(|&x| x % 2 == 0 && x < 4 * t * y));
                    }
                }
            }
        }
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(matches!(build_lists(0, &pa1(0, 0, 6), 2), Err(WeightError::NotPowerOfTwo { .. })));
    }

    #[test]
    fn greedy_targets_on_same_class_edge() {
        // Two adjacent vertices with identical pairs and y: the same-class edge goes by the
        // Euler split to side one, and the greedy choice separates their targets there.
        let g = Graph::complete(2);
        let pa = PairAssignment::new(vec![0, 0], vec![0, 0], vec![2, 2]).unwrap();
        let outcome = decompose::apply_rules(&g, &[0], &pa);
        let bip = decompose::outcome_bipartition(&g, &outcome);
        let tg = assign_targets(&g, &bip, &outcome, &pa, 2).unwrap();
        let side = bip.side(0).index();
        let mut got = [tg.aprime[side][0], tg.aprime[side][1]];
        got.sort_unstable();
        assert_eq!(got, [2, 6]);
        assert_eq!(tg.lambda, vec![16, 16]);
    }

    #[test]
    fn c6_matching_sums() {
        // Side graph C6, lambda 2, a = 1 - 2: a perfect matching gives s = 3 everywhere.
        let g = Graph::cycle(6);
        let bip = EdgeBipartition::uniform(6, Side::One, Rule::Whole);
        let targets = SideTargets {
            aprime: [vec![1; 6], vec![0; 6]],
            a: [vec![-1; 6], vec![0; 6]],
            lambda: vec![2; 6],
            side_degree: bip.side_degrees(&g),
        };
        let (cert, res) = build_weighting(&g, &bip, &targets, &DcsOptions::default());
        assert!(res[0].is_ok() && res[1].is_ok());
        assert_eq!(cert.sums[0].values().copied().collect::<Vec<_>>(), vec![3; 6]);
        assert_eq!(cert.witness(Side::One).len(), 3);
        // s = 3 on every vertex is not distinguishing.
        assert!(matches!(cert.verdict, Verdict::Invalid { side: Side::One, .. }));
    }

    #[test]
    fn chromatic_precondition() {
        let err = chromatic_shortcut(&Graph::complete_bipartite(13, 13), &DcsOptions::default()).unwrap_err();
        assert_eq!(err, WeightError::Precondition { chi: 2, delta: 13 });
    }

    #[test]
    fn chromatic_k25_25() {
        let g = Graph::complete_bipartite(25, 25);
        let w = chromatic_shortcut(&g, &DcsOptions::default()).unwrap();
        assert_eq!(w.chi, 2);
        assert!(verify::verify_nsd(&g, &w.weights).unwrap().ok);
        for v in 0..g.vertex_count() {
            let r = w.sums[v] % 4;
            assert!(r == 2 * w.colouring[v] as u64 || r == 2 * w.colouring[v] as u64 + 1);
        }
        assert!(w.to_certificate(&g).verdict.is_valid());
    }

    #[test]
    fn greedy_colouring_is_proper() {
        for seed in 0..20 {
            let g = Graph::gnp(40, 0.3, seed);
            let c = greedy_colouring(&g);
            assert!(g.edges().iter().all(|&(u, v)| c[u] != c[v]));
        }
    }

    #[test]
    fn permutations_in_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    #[test]
    fn knsq_certificates_are_valid() {
        for n in [2, 4, 6] {
            let (g, cert) = knsq_certificate(n, &DcsOptions::default()).unwrap();
            if n == 2 {
                // Side one of K_4 is a perfect matching: no weighting separates its ends.
                assert!(!cert.verdict.is_valid());
                continue;
            }
            assert!(cert.verdict.is_valid(), "n={n}: {}", cert.verdict);
            assert!(verify::verify_certificate(&g, &cert).unwrap().ok);
        }
    }

    #[test]
    fn pipeline_reports_small_degree() {
        let run = full_pipeline(&Graph::cycle(10), &PipelineParams::default());
        match &run.certificate.verdict {
            Verdict::Failed { stage, .. } => assert_eq!(stage, "compute_y"),
            v => panic!("unexpected verdict {v}"),
        }
    }

    fn far_bipartite_params() -> PipelineParams {
        PipelineParams { t: 1, ..PipelineParams::default() }
    }

    #[test]
    fn pipeline_on_far_degree_graph() {
        // Every edge of K_{110,54} is far, so the pair rules have nothing to do and the
        // moduli alone separate the two parts.
        let g = Graph::complete_bipartite(110, 54);
        let run = full_pipeline(&g, &far_bipartite_params());
        assert!(run.certificate.verdict.is_valid(), "{}", run.certificate.verdict);
        assert!(verify::verify_certificate(&g, &run.certificate).unwrap().ok);
        assert_eq!(run.report.balance_held, Some(true));
        let again = full_pipeline(&g, &far_bipartite_params());
        assert_eq!(run.certificate, again.certificate);
    }

    #[test]
    fn certificate_text_round_trip() {
        let g = Graph::cycle(4);
        let cert = verify::brute_force_22(&g).unwrap().unwrap();
        let text = cert.to_text();
        assert_eq!(Certificate::parse(&text).unwrap(), cert);
        let failed = Certificate::failed(&g, None, "compute_y", "too small");
        assert_eq!(Certificate::parse(&failed.to_text()).unwrap(), failed);
    }

    #[test]
    fn certificate_parse_errors() {
        assert!(Certificate::parse("").is_err());
        assert!(Certificate::parse("CERTIFICATE 2 1\nBIPARTITION\n0 3\nWEIGHTS-1\nWEIGHTS-2\nSUMS-1\nSUMS-2\nVERDICT\nvalid\n").is_err());
        assert!(Certificate::parse("CERTIFICATE 2 1\nBIPARTITION\n0 1\n0 1\nWEIGHTS-1\nWEIGHTS-2\nSUMS-1\nSUMS-2\nVERDICT\nvalid\n").is_err());
        assert!(Certificate::parse("CERTIFICATE 2 1\nBIPARTITION\n0 1\nWEIGHTS-1\nWEIGHTS-2\nSUMS-1\nSUMS-2\n").is_err());
    }
}
