//! Balanced two-way edge split of a random graph along Eulerian tours.
//!
//! cargo run --example euler_split -- 40 0.3 7

use nsd22::{euler, Graph};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(30);
    let p: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.3);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);

    let g = Graph::gnp(n, p, seed);
    let (bip, exceptional) = euler::balanced_split(&g);
    let [d1, d2] = bip.side_degrees(&g);
    println!("G(n={n}, p={p}) seed {seed}: {} edges, {} components", g.edge_count(), g.components().len());
    println!("{:>6} {:>6} {:>6} {:>6}", "vertex", "d", "d1", "d2");
    for v in 0..n.min(12) {
        println!("{v:>6} {:>6} {:>6} {:>6}", g.degree(v), d1[v], d2[v]);
    }
    let worst = (0..n).filter(|v| !exceptional.contains(v)).map(|v| d1[v].min(d2[v]) as i64 - (g.degree(v) / 2) as i64).min();
    println!("exceptional vertices: {exceptional:?}");
    println!("min over ordinary vertices of min(d1, d2) - floor(d/2): {}", worst.unwrap_or(0));
}
