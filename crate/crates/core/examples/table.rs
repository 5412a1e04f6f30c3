//! Prints TPM and diminimal counts for the vertex counts given as arguments.

use std::time::Instant;

use torusmap::generate::{generate_graphs, generate_tpms, GenerationTask};
use torusmap::moves::is_diminimal;

fn main() {
    for arg in std::env::args().skip(1) {
        let n: usize = arg.parse().expect("vertex count");
        let start = Instant::now();
        let graphs = generate_graphs(n).len();
        let graph_time = start.elapsed();
        let maps = generate_tpms(&GenerationTask::new(n));
        let diminimal = maps.iter().filter(|m| is_diminimal(m).unwrap()).count();
        println!(
            "n={n} graphs={graphs} ({:.1?}) tpms={} diminimal={diminimal} total {:.1?}",
            graph_time,
            maps.len(),
            start.elapsed()
        );
    }
}
