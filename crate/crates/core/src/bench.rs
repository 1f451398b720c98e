//! Parameter sweeps over random regular graphs, printed as a fixed-column table.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::dcs::DcsOptions;
use crate::graph::Graph;
use crate::rational::Rational;
use crate::rng::derive_seed;
use crate::weighter::{full_pipeline, PipelineParams, Verdict};

/// The grid `n × d × q × t × replicate`; instance seeds are derived from `seed`.
#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub ns: Vec<usize>,
    pub ds: Vec<usize>,
    pub qs: Vec<Rational>,
    pub ts: Vec<u64>,
    pub replicates: u64,
    pub seed: u64,
    pub max_rounds: Option<u64>,
    pub dcs: DcsOptions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub id: usize,
    pub n: usize,
    pub d: usize,
    pub q: Rational,
    pub t: u64,
    pub seed: u64,
    pub gen_ms: f64,
    /// Milliseconds per pipeline stage, in [`STAGES`] order.
    pub stage_ms: [f64; STAGES.len()],
    pub total_ms: f64,
    pub rounds: Option<u64>,
    pub verdict: String,
}

pub const STAGES: [&str; 7] =
    ["split_far_edges", "euler_h_prime", "compute_y", "resample", "apply_rules", "assign_targets", "build_weighting"];

const HEADER: [&str; 8] = ["id", "n", "d", "q", "t", "seed", "gen_ms", "far_ms"];
const TAIL: [&str; 9] = ["euler_ms", "y_ms", "lll_ms", "rules_ms", "targets_ms", "weight_ms", "total_ms", "rounds", "verdict"];

impl BenchSpec {
    /// Instances in row order: `(n, d, q, t, seed)`.
    pub fn instances(&self) -> Vec<(usize, usize, Rational, u64, u64)> {
        let mut out = Vec::new();
        for &n in &self.ns {
            for &d in &self.ds {
                for &q in &self.qs {
                    for &t in &self.ts {
                        for _ in 0..self.replicates {
                            let seed = derive_seed(self.seed, out.len() as u64);
                            out.push((n, d, q, t, seed));
                        }
                    }
                }
            }
        }
        out
    }
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs every instance (in parallel) and returns rows sorted by instance id.
pub fn run_bench(spec: &BenchSpec) -> Vec<BenchRow> {
    let instances = spec.instances();
    let mut rows: Vec<BenchRow> = instances
        .par_iter()
        .enumerate()
        .map(|(id, &(n, d, q, t, seed))| {
            let start = Instant::now();
            let g = Graph::random_regular(n, d, seed);
            let gen_ms = ms(start.elapsed());
            let mut row = BenchRow {
                id,
                n,
                d,
                q,
                t,
                seed,
                gen_ms,
                stage_ms: [0.0; STAGES.len()],
                total_ms: 0.0,
                rounds: None,
                verdict: String::new(),
            };
            let g = match g {
                Ok(g) => g,
                Err(e) => {
                    row.verdict = format!("failed gen: {e}");
                    return row;
                }
            };
            let params = PipelineParams {
                q,
                t,
                seed,
                max_rounds: spec.max_rounds,
                dcs: spec.dcs.clone(),
                record_log: false,
            };
            let run = full_pipeline(&g, &params);
            for (i, stage) in STAGES.iter().enumerate() {
                row.stage_ms[i] = ms(run.report.elapsed(stage));
            }
            row.total_ms = row.stage_ms.iter().sum();
            row.rounds = run.report.lll.as_ref().map(|r| r.iterations);
            row.verdict = match &run.certificate.verdict {
                Verdict::Failed { stage, .. } => format!("failed:{stage}"),
                v => v.to_string().replace(' ', ":"),
            };
            row
        })
        .collect();
    rows.sort_by_key(|r| r.id);
    rows
}

/// One header line, then one whitespace-separated row per instance.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let header: Vec<&str> = HEADER.iter().chain(TAIL.iter()).copied().collect();
    writeln!(out, "{}", header.iter().map(|h| format!("{h:>10}")).collect::<Vec<_>>().join(" ")).unwrap();
    for r in rows {
        let mut cols = vec![
            r.id.to_string(),
            r.n.to_string(),
            r.d.to_string(),
            r.q.to_string(),
            r.t.to_string(),
            format!("{:016x}", r.seed),
            format!("{:.3}", r.gen_ms),
        ];
        cols.extend(r.stage_ms.iter().map(|x| format!("{x:.3}")));
        cols.push(format!("{:.3}", r.total_ms));
        cols.push(r.rounds.map_or("-".into(), |x| x.to_string()));
        cols.push(r.verdict.clone());
        writeln!(out, "{}", cols.iter().map(|c| format!("{c:>10}")).collect::<Vec<_>>().join(" ")).unwrap();
    }
    out
}
