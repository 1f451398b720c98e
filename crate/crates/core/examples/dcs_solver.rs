//! Degree-constrained subgraphs with modular targets: one instance small enough for
//! complete search, one solved by local search, one proven infeasible.
//!
//! cargo run --release --example dcs_solver

use nsd22::dcs::{self, DcsOptions, ModTarget};
use nsd22::Graph;

fn report(name: &str, g: &Graph, targets: &ModTarget) {
    match dcs::find_dcs(g, targets, &DcsOptions::default()) {
        Ok(sol) => {
            let check = dcs::verify_dcs(g, &sol.edges, targets).unwrap();
            println!("{name}: {:?}, {} edges chosen in {} steps, verified {}", sol.method, sol.edges.len(), sol.steps, check.ok);
        }
        Err(e) => println!("{name}: {e}"),
    }
}

fn main() {
    let c6 = Graph::cycle(6);
    report("C6, degree 1 mod 2", &c6, &ModTarget::uniform(6, 1, 2).unwrap());

    let g = Graph::random_regular(80, 40, 5).unwrap();
    let a: Vec<i64> = (0..80).map(|v| (v % 5) as i64).collect();
    report("40-regular on 80 vertices, lambda 5", &g, &ModTarget::new(a, vec![5; 80]).unwrap());

    let k4 = Graph::complete(4);
    report("K4, degree 5 or 6 mod 12", &k4, &ModTarget::uniform(4, 5, 12).unwrap());
}
