//! Splits K_{n²} by the coordinate rules and weights each side through its coordinate
//! colouring.
//!
//! cargo run --example knsq_construction -- 6

use nsd22::dcs::DcsOptions;
use nsd22::{decompose, verify, weighter, Side};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let (g, pairs) = decompose::knsq_assignment(n).expect("n must be even and positive");
    let all: Vec<usize> = (0..g.edge_count()).collect();
    let outcome = decompose::apply_rules(&g, &all, &pairs);
    let bip = decompose::outcome_bipartition(&g, &outcome);
    let degrees = bip.side_degrees(&g);

    println!("K_{} with {} edges", n * n, g.edge_count());
    for side in Side::BOTH {
        let min = degrees[side.index()].iter().min().unwrap();
        let proper = bip
            .edges_on(side)
            .iter()
            .all(|&e| {
                let (u, v) = g.endpoints(e);
                pairs.coordinate(u, side) != pairs.coordinate(v, side)
            });
        println!("side {side}: {} edges, min degree {min}, coordinate colouring proper: {proper}", bip.edges_on(side).len());
    }
    println!("bound floor((n^2-1)/2) = {}", (n * n - 1) / 2);

    let (_, cert) = weighter::knsq_certificate(n, &DcsOptions::default()).unwrap();
    let check = verify::verify_certificate(&g, &cert).unwrap();
    println!("verdict: {}, independent check: {}", cert.verdict, if check.ok { "ok" } else { "failed" });
}
