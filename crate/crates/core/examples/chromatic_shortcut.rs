//! Weights a graph of small chromatic number directly from a proper colouring.
//!
//! cargo run --release --example chromatic_shortcut

use nsd22::dcs::DcsOptions;
use nsd22::{verify, weighter, Graph};

fn main() {
    for (a, b) in [(13, 13), (25, 25), (30, 40)] {
        let g = Graph::complete_bipartite(a, b);
        match weighter::chromatic_shortcut(&g, &DcsOptions::default()) {
            Ok(w) => {
                let check = verify::verify_nsd(&g, &w.weights).unwrap();
                let in_class = (0..g.vertex_count()).all(|v| {
                    let r = w.sums[v] % (2 * w.chi as u64);
                    r / 2 == w.colouring[v] as u64
                });
                println!(
                    "K_{a},{b}: {} colours, {} weight-2 edges, distinguishing {}, sums in colour classes {in_class}",
                    w.chi,
                    w.witness.len(),
                    check.ok
                );
            }
            Err(e) => println!("K_{a},{b}: {e}"),
        }
    }
}
