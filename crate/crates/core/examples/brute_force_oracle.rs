//! Exhaustive oracles on small graphs: the first distinguishing weighting with weights up
//! to k, and the first decomposition into two {1,2}-weight colourable subgraphs.
//!
//! cargo run --release --example brute_force_oracle

use nsd22::verify::{self, DEFAULT_BRUTE_LIMIT};
use nsd22::Graph;

fn main() {
    let cases = [
        ("K2", Graph::complete(2)),
        ("K3", Graph::complete(3)),
        ("C4", Graph::cycle(4)),
        ("P5", Graph::path(5)),
        ("K5", Graph::complete(5)),
        ("G(7, 0.5)", Graph::gnp(7, 0.5, 2)),
    ];
    for (name, g) in &cases {
        print!("{name:<24}");
        for k in 1..=3 {
            let r = verify::brute_force_nsd(g, k, DEFAULT_BRUTE_LIMIT).unwrap();
            print!(" k={k}: {:<14}", r.map_or("none".to_string(), |w| format!("{w:?}")).chars().take(14).collect::<String>());
        }
        match verify::brute_force_22(g) {
            Ok(Some(cert)) => println!(" std22: sides {:?}", cert.sides.iter().map(|s| s.unwrap().number()).collect::<Vec<_>>()),
            Ok(None) => println!(" std22: none"),
            Err(e) => println!(" std22: {e}"),
        }
    }
}
