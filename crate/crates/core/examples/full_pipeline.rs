//! Runs the whole construction: far-degree edges, moduli, resampling, pair rules,
//! targets, and the two weightings, then re-checks the certificate.
//!
//! cargo run --release --example full_pipeline

use nsd22::weighter::{full_pipeline, PipelineParams};
use nsd22::{verify, Graph};

fn main() {
    // Every edge of K_{110,54} joins degrees 54 and 110, so all of them are far-degree
    // edges; t = 1 keeps the moduli at 1 and 2.
    let g = Graph::complete_bipartite(110, 54);
    let params = PipelineParams { t: 1, seed: 4, ..PipelineParams::default() };
    let run = full_pipeline(&g, &params);
    print_run("K_{110,54}", &g, &run);

    // Regular graphs need q·d ≥ 24t before the moduli exist at all.
    let g = Graph::random_regular(200, 96, 1).unwrap();
    let run = full_pipeline(&g, &PipelineParams { t: 2, ..PipelineParams::default() });
    print_run("96-regular, t = 2", &g, &run);
}

fn print_run(name: &str, g: &Graph, run: &nsd22::weighter::PipelineRun) {
    println!("{name}: {} vertices, {} edges", g.vertex_count(), g.edge_count());
    for t in &run.report.timings {
        println!("  {:<16} {:>9.3} ms", t.stage, t.elapsed.as_secs_f64() * 1e3);
    }
    if let Some(r) = &run.report.lll {
        println!("  resampling rounds {}", r.iterations);
    }
    if let Some(b) = run.report.balance_held {
        println!("  balance held {b}");
    }
    println!("  verdict: {}", run.certificate.verdict);
    if run.certificate.verdict.is_valid() {
        println!("  independent check: {}", verify::verify_certificate(g, &run.certificate).unwrap().ok);
    }
}
