//! Samples colour pairs on a random regular graph and resamples bad events until none
//! remain, then replays the run from the same seed.
//!
//! cargo run --release --example lll_resampling

use nsd22::{decompose, lll, Graph, Rational};

fn main() {
    let g = Graph::random_regular(100, 20, 3).unwrap();
    let h: Vec<usize> = (0..g.edge_count()).collect();
    let y = vec![8; g.vertex_count()];
    let q = Rational::new(1, 5).unwrap();
    let t = 2;

    let initial = lll::sample_uniform(&y, 11);
    let view = lll::HView::new(&g, &h);
    let (a0, b0) = view.scan(&initial, q, t);
    println!("initial sample: {} A-events, {} B-events violated", a0.len(), b0.len());

    let rounds = lll::default_max_rounds(g.vertex_count());
    let (pairs, report) = lll::resample_until_good(&g, &h, &y, q, t, 11, rounds, true);
    println!("after {} resampling rounds: success = {}", report.iterations, report.success());
    for entry in report.resample_log.as_deref().unwrap_or_default().iter().take(5) {
        println!("  round {}: resampled {:?} at vertex {}", entry.iteration, entry.kind, entry.vertex);
    }

    let (again, _) = lll::resample_until_good(&g, &h, &y, q, t, 11, rounds, false);
    println!("replay identical: {}", again == pairs);
    let outcome = decompose::apply_rules(&g, &h, &pairs);
    println!("T = {} (t = {t}), {} identical-pair edges", outcome.t_value, outcome.e0.len());
}
