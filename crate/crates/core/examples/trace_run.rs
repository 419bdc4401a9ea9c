//! Prints the IGD trace of a single seeded run.
//!
//! Usage: `trace_run [PROBLEM] [ALGORITHM] [GENERATIONS]`, e.g.
//! `cargo run --release -p demeda-core --example trace_run -- F5 de-rm-meda 500`

use demeda_core::{run, AlgoConfig, Algorithm, ProblemId};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let problem: ProblemId = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(ProblemId::F1);
    let algorithm: Algorithm =
        args.get(2).map(|s| s.parse().unwrap()).unwrap_or(Algorithm::DeRmMeda);
    let generations: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(500);

    let mut config = AlgoConfig::new(problem, algorithm, 42);
    config.generations = generations;
    config.trace_stride = (generations / 10).max(1);
    let result = run(&config).unwrap();
    for point in &result.igd_trace {
        println!("gen {:>5}  igd {:.6}", point.generation, point.igd);
    }
    println!("evaluations {}  wall {:?}", result.evaluations, result.wall_time);
}
