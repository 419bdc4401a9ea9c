//! Acceptance suite: every release gate in one target, one pass/fail line
//! per criterion (run with `--nocapture` to see them).
//!
//! Quantitative gates run the desk-scale battery: 5 repeats, population 300
//! (600 for F6), 500 generations. Thresholds are wide by design; they check
//! that the optimizers land in the right regime, not exact literature means.
//! Property gates are self-contained and fast.

use std::collections::HashMap;
use std::sync::LazyLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use demeda_core::allocator::{allocate, convergence_ratio, MixParams};
use demeda_core::de::{polynomial_delta, polynomial_mutation, DeParams};
use demeda_core::local_pca::{cluster_statistics, distance_to_subspace, partition, AffineSubspace};
use demeda_core::metrics::igd;
use demeda_core::model::{build_model, sample_model, ManifoldModel};
use demeda_core::mop::{dominates, BoxBounds, DecisionVector, ObjectiveVector};
use demeda_core::problems::{sample_true_pf, PfReference};
use demeda_core::selection::fast_nondominated_sort;
use demeda_core::{run, AlgoConfig, Algorithm, ProblemId, RunResult};

// Desk-scale battery settings and the pinned acceptance thresholds.
const BASE_SEED: u64 = 42;
const REPEATS: usize = 5;
const F1_MEAN_IGD_MAX: f64 = 0.005;
const F5_MEAN_IGD_MAX: f64 = 0.03;
const F6_MEAN_IGD_MAX: f64 = 0.10;
const F1_GEN100_OVER_FINAL_MAX: f64 = 3.0;

/// Whole lines under a stdout lock so concurrent tests cannot interleave
/// mid-line.
fn say(line: String) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

fn check(criterion: &str, pass: bool, detail: &str) {
    say(format!("[{}] {criterion}: {detail}", if pass { "PASS" } else { "FAIL" }));
    assert!(pass, "{criterion}: {detail}");
}

fn soft_check(criterion: &str, pass: bool, detail: &str) {
    // Ordering trends of a stochastic method: a miss is logged for
    // investigation, not treated as an automatic rejection.
    say(format!("[{}] {criterion}: {detail}", if pass { "SOFT-PASS" } else { "SOFT-FAIL" }));
}

static BATTERIES: LazyLock<HashMap<(ProblemId, Algorithm), Vec<RunResult>>> =
    LazyLock::new(|| {
        let pairs = [
            (ProblemId::F1, Algorithm::DeRmMeda),
            (ProblemId::F3, Algorithm::DeRmMeda),
            (ProblemId::F3, Algorithm::RmMeda),
            (ProblemId::F5, Algorithm::DeRmMeda),
            (ProblemId::F6, Algorithm::DeRmMeda),
            (ProblemId::F7, Algorithm::DeRmMeda),
            (ProblemId::F8, Algorithm::DeRmMeda),
            (ProblemId::F9, Algorithm::DeRmMeda),
            (ProblemId::F5, Algorithm::Nsga2De),
            (ProblemId::F6, Algorithm::Nsga2De),
            (ProblemId::F7, Algorithm::Nsga2De),
            (ProblemId::F8, Algorithm::Nsga2De),
            (ProblemId::F9, Algorithm::Nsga2De),
        ];
        let jobs: Vec<(ProblemId, Algorithm, u64)> = pairs
            .iter()
            .flat_map(|&(p, a)| (0..REPEATS as u64).map(move |r| (p, a, BASE_SEED + r)))
            .collect();
        let results: Vec<((ProblemId, Algorithm), RunResult)> = jobs
            .par_iter()
            .map(|&(problem, algorithm, seed)| {
                let mut config = AlgoConfig::new(problem, algorithm, seed);
                config.trace_stride = 100;
                ((problem, algorithm), run(&config).expect("battery run failed"))
            })
            .collect();
        let mut map: HashMap<(ProblemId, Algorithm), Vec<RunResult>> = HashMap::new();
        for (key, result) in results {
            map.entry(key).or_default().push(result);
        }
        let mut keys: Vec<_> = map.keys().copied().collect();
        keys.sort_by_key(|(p, a)| (*p, format!("{a}")));
        for key in keys {
            let results = &map[&key];
            let mean = mean(&results.iter().map(RunResult::final_igd).collect::<Vec<_>>());
            say(format!("battery {} {}: mean final IGD {mean:.5}", key.0, key.1));
        }
        map
    });

fn battery(problem: ProblemId, algorithm: Algorithm) -> &'static [RunResult] {
    &BATTERIES[&(problem, algorithm)]
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn mean_final_igd(problem: ProblemId, algorithm: Algorithm) -> f64 {
    mean(&battery(problem, algorithm).iter().map(RunResult::final_igd).collect::<Vec<_>>())
}

#[test]
fn criterion_01_f1_hybrid_mean_igd() {
    let value = mean_final_igd(ProblemId::F1, Algorithm::DeRmMeda);
    check(
        "criterion 1 (F1 hybrid mean final IGD)",
        value <= F1_MEAN_IGD_MAX,
        &format!("{value:.5} <= {F1_MEAN_IGD_MAX}"),
    );
}

#[test]
fn criterion_02_f5_hybrid_mean_igd() {
    let value = mean_final_igd(ProblemId::F5, Algorithm::DeRmMeda);
    check(
        "criterion 2 (F5 hybrid mean final IGD)",
        value <= F5_MEAN_IGD_MAX,
        &format!("{value:.5} <= {F5_MEAN_IGD_MAX}"),
    );
}

#[test]
fn criterion_03_f6_hybrid_mean_igd() {
    let runs = battery(ProblemId::F6, Algorithm::DeRmMeda);
    assert!(runs.iter().all(|r| r.final_population.len() == 600), "F6 runs at population 600");
    let value = mean_final_igd(ProblemId::F6, Algorithm::DeRmMeda);
    check(
        "criterion 3 (F6 hybrid mean final IGD, N = 600)",
        value <= F6_MEAN_IGD_MAX,
        &format!("{value:.5} <= {F6_MEAN_IGD_MAX}"),
    );
}

#[test]
fn criterion_04_f1_generational_improvement() {
    let runs = battery(ProblemId::F1, Algorithm::DeRmMeda);
    let at_100 = mean(&runs.iter().map(|r| r.igd_at(100).expect("stride hits 100")).collect::<Vec<_>>());
    let at_500 = mean(&runs.iter().map(|r| r.igd_at(500).expect("stride hits 500")).collect::<Vec<_>>());
    let pass = at_100 <= F1_GEN100_OVER_FINAL_MAX * at_500 && at_500 <= at_100;
    check(
        "criterion 4 (F1 improves from generation 100 to 500)",
        pass,
        &format!("gen100 {at_100:.5}, gen500 {at_500:.5}"),
    );
}

#[test]
fn criterion_05_ordering_trends() {
    // Majority of paired seeds, hybrid vs the DE baseline.
    for problem in [ProblemId::F5, ProblemId::F6, ProblemId::F7, ProblemId::F8] {
        let hybrid = battery(problem, Algorithm::DeRmMeda);
        let baseline = battery(problem, Algorithm::Nsga2De);
        let wins = hybrid
            .iter()
            .zip(baseline)
            .filter(|(h, b)| h.final_igd() <= b.final_igd())
            .count();
        soft_check(
            &format!("criterion 5 ({problem} hybrid <= DE baseline)"),
            2 * wins > REPEATS,
            &format!(
                "{wins}/{REPEATS} seeds, means {:.5} vs {:.5}",
                mean_final_igd(problem, Algorithm::DeRmMeda),
                mean_final_igd(problem, Algorithm::Nsga2De)
            ),
        );
    }
    let hybrid = battery(ProblemId::F9, Algorithm::DeRmMeda);
    let baseline = battery(ProblemId::F9, Algorithm::Nsga2De);
    let wins =
        baseline.iter().zip(hybrid).filter(|(b, h)| b.final_igd() <= h.final_igd()).count();
    soft_check(
        "criterion 5 (F9 DE baseline <= hybrid)",
        2 * wins > REPEATS,
        &format!(
            "{wins}/{REPEATS} seeds, means {:.5} vs {:.5}",
            mean_final_igd(ProblemId::F9, Algorithm::Nsga2De),
            mean_final_igd(ProblemId::F9, Algorithm::DeRmMeda)
        ),
    );
}

#[test]
fn f3_model_baseline_stays_competitive_with_the_hybrid() {
    // On F3 the pure model baseline and the hybrid are conventionally within
    // a few percent of each other; assert the same regime, not an ordering.
    let baseline = mean_final_igd(ProblemId::F3, Algorithm::RmMeda);
    let hybrid = mean_final_igd(ProblemId::F3, Algorithm::DeRmMeda);
    let ratio = baseline / hybrid;
    soft_check(
        "F3 model baseline vs hybrid (ordering is noise-level)",
        baseline <= hybrid,
        &format!("means {baseline:.5} vs {hybrid:.5}"),
    );
    check(
        "F3 model baseline and hybrid in the same regime",
        (0.5..=2.0).contains(&ratio) && baseline < 0.1 && hybrid < 0.1,
        &format!("ratio {ratio:.3}"),
    );
}

/// Independent oracle: rank by repeatedly extracting the non-dominated set.
fn ranks_by_extraction(objectives: &[ObjectiveVector]) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..objectives.len()).collect();
    let mut rank = vec![0usize; objectives.len()];
    let mut level = 0;
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| remaining.iter().all(|&j| !dominates(&objectives[j], &objectives[i])))
            .collect();
        for &i in &front {
            rank[i] = level;
        }
        remaining.retain(|i| !front.contains(i));
        level += 1;
    }
    rank
}

#[test]
fn criterion_06_sort_matches_extraction_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(600);
    for instance in 0..500 {
        let n = rng.random_range(1..=200);
        let m = if rng.random::<bool>() { 2 } else { 3 };
        // Mix a discrete grid (forcing ties and duplicates) with continuous draws.
        let grid: bool = rng.random();
        let objectives: Vec<ObjectiveVector> = (0..n)
            .map(|_| {
                ObjectiveVector::new(
                    (0..m)
                        .map(|_| {
                            if grid {
                                rng.random_range(0..8) as f64
                            } else {
                                rng.random::<f64>()
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        let ranking = fast_nondominated_sort(&objectives);
        assert_eq!(
            ranking.rank(),
            ranks_by_extraction(&objectives),
            "instance {instance} diverged from the oracle"
        );
        for (level, front) in ranking.fronts().iter().enumerate() {
            for &i in front {
                assert_eq!(ranking.rank()[i], level);
            }
        }
    }
    check("criterion 6 (sort vs extraction oracle)", true, "500 instances, exact agreement");
}

/// Independent oracle: full distance matrix, then row minima.
fn igd_matrix_oracle(approx: &[ObjectiveVector], reference: &PfReference) -> f64 {
    let mut total = 0.0;
    for v in reference.points() {
        let mut row = Vec::with_capacity(approx.len());
        for p in approx {
            let d: f64 = v
                .values()
                .iter()
                .zip(p.values())
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            row.push(d);
        }
        row.sort_by(|a, b| a.partial_cmp(b).unwrap());
        total += row[0];
    }
    total / reference.len() as f64
}

#[test]
fn criterion_07_igd_matches_bruteforce_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(700);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let m = if rng.random::<bool>() { 2 } else { 3 };
        let na = rng.random_range(1..=1000);
        let nr = rng.random_range(1..=1000);
        let draw = |rng: &mut ChaCha12Rng, count: usize| -> Vec<ObjectiveVector> {
            (0..count)
                .map(|_| {
                    ObjectiveVector::new((0..m).map(|_| rng.random_range(-5.0..5.0)).collect())
                })
                .collect()
        };
        let approx = draw(&mut rng, na);
        let reference = PfReference::new(draw(&mut rng, nr));
        let fast = igd(&approx, &reference);
        let oracle = igd_matrix_oracle(&approx, &reference);
        worst = worst.max((fast - oracle).abs());
    }
    let identity = sample_true_pf(ProblemId::F2, 500);
    let identity_igd = igd(identity.points(), &identity);
    check(
        "criterion 7 (IGD vs brute-force oracle)",
        worst <= 1e-12 && identity_igd == 0.0,
        &format!("max |error| {worst:.2e}, identity IGD {identity_igd}"),
    );
}

#[test]
fn criterion_08_allocator_conservation_and_scale_invariance() {
    let mut rng = ChaCha12Rng::seed_from_u64(800);
    for _ in 0..10_000 {
        let k = rng.random_range(1..=9);
        let n = rng.random_range(1..=500);
        let volumes: Vec<f64> = (0..k).map(|_| rng.random_range(1e-12..100.0)).collect();
        let ratios: Vec<f64> = (0..k).map(|_| rng.random()).collect();
        let alpha: f64 = rng.random();
        let beta: f64 = rng.random_range(0.0..=(1.0 - alpha));
        let quotas = allocate(n, &volumes, &ratios, &MixParams::new(alpha, beta));
        let total: usize = quotas.iter().map(|q| q.model + q.de).sum();
        assert_eq!(total, n, "allocation must conserve the population size");
    }
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let len = rng.random_range(2..=30);
        let m = rng.random_range(2..=3.min(len));
        let mut spectrum: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
        spectrum.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let c: f64 = rng.random_range(1e-9..1e9);
        let scaled: Vec<f64> = spectrum.iter().map(|l| c * l).collect();
        worst = worst.max((convergence_ratio(&spectrum, m) - convergence_ratio(&scaled, m)).abs());
    }
    check(
        "criterion 8 (allocator conservation, ratio scale invariance)",
        worst <= 1e-12,
        &format!("10^4 draws conserve N exactly; max ratio drift {worst:.2e}"),
    );
}

#[test]
fn criterion_09_model_sampling_containment_and_noise() {
    // Noiseless model over a planted 2-D cluster: samples stay in the box
    // and, pre-noise, inside the 25%-extended projection interval.
    let mut rng = ChaCha12Rng::seed_from_u64(900);
    let members: Vec<DecisionVector> = (0..50)
        .map(|_| {
            let t: f64 = rng.random_range(-1.0..1.0);
            DecisionVector::new(vec![t, 2.0 * t])
        })
        .collect();
    let subspace = cluster_statistics(&members, 2);
    let model = build_model(&members, &subspace);
    assert_eq!(model.noise_sd(), 0.0, "collinear cluster has zero noise");
    let bounds = BoxBounds::uniform(2, -10.0, 10.0);
    let (lo, hi) = model.extended_interval(0);
    let samples = sample_model(&model, 100_000, &bounds, &mut rng);
    let mut contained = true;
    for s in &samples {
        if !bounds.contains(s) {
            contained = false;
            break;
        }
        let u = &model.subspace().basis()[0];
        let proj: f64 = s
            .coords()
            .iter()
            .zip(model.subspace().mean())
            .zip(u)
            .map(|((v, mu), uk)| (v - mu) * uk)
            .sum();
        if proj < lo - 1e-12 || proj > hi + 1e-12 {
            contained = false;
            break;
        }
    }

    // Axis-aligned noisy model: off-manifold coordinates carry exactly the
    // injected isotropic noise.
    let sd = 0.4;
    let noisy = ManifoldModel::new(
        AffineSubspace::singleton(&[0.0; 4], 2),
        vec![-2.0],
        vec![2.0],
        sd,
    );
    let wide = BoxBounds::uniform(4, -1e9, 1e9);
    let noisy_samples = sample_model(&noisy, 100_000, &wide, &mut rng);
    let mut worst_rel: f64 = 0.0;
    for dim in 1..4 {
        let mean_d =
            noisy_samples.iter().map(|s| s[dim]).sum::<f64>() / noisy_samples.len() as f64;
        let var = noisy_samples.iter().map(|s| (s[dim] - mean_d).powi(2)).sum::<f64>()
            / (noisy_samples.len() - 1) as f64;
        worst_rel = worst_rel.max((var - sd * sd).abs() / (sd * sd));
    }
    check(
        "criterion 9 (model sampling containment and noise variance)",
        contained && worst_rel < 0.05,
        &format!("10^5 samples contained; orthogonal variance within {:.2}%", worst_rel * 100.0),
    );
}

#[test]
fn criterion_10_local_pca_invariants() {
    let mut rng = ChaCha12Rng::seed_from_u64(1000);
    let mut converged_checked = 0;
    for trial in 0..60 {
        let n = rng.random_range(5..120);
        let dim = rng.random_range(2..6);
        let points: Vec<DecisionVector> = (0..n)
            .map(|_| DecisionVector::new((0..dim).map(|_| rng.random::<f64>()).collect()))
            .collect();
        let k = 1 + trial % 5.min(n);
        let result = partition(&points, k, 2, &mut rng, 60);

        let mut seen = vec![false; n];
        for cluster in result.clusters() {
            for &i in cluster {
                assert!(!seen[i], "index {i} in two clusters");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|s| *s), "partition must cover the population");

        if result.converged() {
            converged_checked += 1;
            for (j, cluster) in result.clusters().iter().enumerate() {
                for &i in cluster {
                    let own = distance_to_subspace(&points[i], &result.subspaces()[j]);
                    for s in result.subspaces() {
                        assert!(
                            own <= distance_to_subspace(&points[i], s) + 1e-9,
                            "converged assignment not distance-optimal"
                        );
                    }
                }
            }
        }
    }
    assert!(converged_checked > 30, "most trials should converge");

    // K = 1 equals global PCA: spectrum sum matches the covariance trace and
    // the top eigenvalue matches power iteration on an independently built
    // covariance matrix.
    let points: Vec<DecisionVector> = (0..80)
        .map(|_| {
            let a: f64 = rng.random();
            let b: f64 = rng.random();
            DecisionVector::new(vec![3.0 * a, a + 0.1 * b, b, 0.05 * rng.random::<f64>()])
        })
        .collect();
    let result = partition(&points, 1, 2, &mut rng, 50);
    let spectrum = result.subspaces()[0].eigenvalues();

    let dim = 4;
    let count = points.len();
    let mut mean = vec![0.0; dim];
    for p in &points {
        for (m, v) in mean.iter_mut().zip(p.coords()) {
            *m += v / count as f64;
        }
    }
    let mut cov = vec![vec![0.0; dim]; dim];
    for p in &points {
        for r in 0..dim {
            for c in 0..dim {
                cov[r][c] += (p[r] - mean[r]) * (p[c] - mean[c]) / (count - 1) as f64;
            }
        }
    }
    let trace: f64 = (0..dim).map(|i| cov[i][i]).sum();
    let spectrum_sum: f64 = spectrum.iter().sum();

    let mut v = vec![1.0; dim];
    let mut top = 0.0;
    for _ in 0..200 {
        let mut next = vec![0.0; dim];
        for r in 0..dim {
            for c in 0..dim {
                next[r] += cov[r][c] * v[c];
            }
        }
        top = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut next {
            *x /= top;
        }
        v = next;
    }

    let pass = (trace - spectrum_sum).abs() <= 1e-10 && (spectrum[0] - top).abs() <= 1e-8;
    check(
        "criterion 10 (local PCA cover, optimality, K=1 global spectrum)",
        pass,
        &format!(
            "trace drift {:.2e}, top eigenvalue drift {:.2e}, {converged_checked}/60 converged",
            (trace - spectrum_sum).abs(),
            (spectrum[0] - top).abs()
        ),
    );
}

#[test]
fn criterion_11_mutation_delta_and_bounds() {
    let mut rng = ChaCha12Rng::seed_from_u64(1100);
    for _ in 0..1_000_000 {
        let d = polynomial_delta(rng.random(), 20.0);
        assert!((-1.0..=1.0).contains(&d), "delta {d} outside [-1, 1]");
    }
    assert_eq!(polynomial_delta(0.5, 20.0), 0.0);

    let bounds = BoxBounds::new(vec![-1.0, 0.0, 5.0], vec![1.0, 0.125, 6.0]);
    let params = DeParams::new(0.5, 0.9, 1.0, 20.0);
    let mut in_bounds = true;
    for _ in 0..10_000 {
        let x = DecisionVector::new(vec![
            rng.random_range(-1.0..1.0),
            rng.random_range(0.0..0.125),
            rng.random_range(5.0..6.0),
        ]);
        if !bounds.contains(&polynomial_mutation(&x, &params, &bounds, &mut rng)) {
            in_bounds = false;
            break;
        }
    }
    check(
        "criterion 11 (mutation delta range and bound repair)",
        in_bounds,
        "10^6 deltas in [-1, 1], delta(0.5) = 0, 10^4 mutations in bounds",
    );
}

#[test]
fn criterion_12_reproducibility_and_parallel_equality() {
    // Bitwise-identical reruns for every algorithm.
    for algorithm in Algorithm::ALL {
        let mut config = AlgoConfig::new(ProblemId::F4, algorithm, 77);
        config.population = 30;
        config.generations = 6;
        config.clusters = 3;
        config.pf_size = 60;
        let a = run(&config).unwrap();
        let b = run(&config).unwrap();
        assert_eq!(a.final_population, b.final_population, "{algorithm} rerun differs");
        assert_eq!(a.igd_trace, b.igd_trace, "{algorithm} trace differs");
        assert_eq!(a.evaluations, b.evaluations);
    }

    // Harness outputs: parallel run equals serial run byte for byte.
    let config_text = "\
repeats = 3
base_seed = 9
trace_stride = 2
generations = 4

[f2-hybrid]
problem = F2
algorithm = de-rm-meda
population = 20
clusters = 2

[f2-baseline]
problem = F2
algorithm = nsga2-de
population = 20
";
    let mut spec = demeda_cli::config::parse_experiment(config_text).unwrap();
    spec.measure_time = false;
    let dir_serial = tempfile::tempdir().unwrap();
    let dir_parallel = tempfile::tempdir().unwrap();
    let mut serial_spec = spec.clone();
    serial_spec.output_dir = dir_serial.path().to_path_buf();
    let mut parallel_spec = spec;
    parallel_spec.output_dir = dir_parallel.path().to_path_buf();
    demeda_cli::experiment::run_experiment(&serial_spec, Some(1)).unwrap();
    demeda_cli::experiment::run_experiment(&parallel_spec, Some(4)).unwrap();
    let mut names: Vec<String> = std::fs::read_dir(dir_serial.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"summary.csv".to_string()));
    for name in &names {
        let a = std::fs::read(dir_serial.path().join(name)).unwrap();
        let b = std::fs::read(dir_parallel.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between serial and parallel execution");
    }
    check(
        "criterion 12 (seed reproducibility, parallel = serial bytes)",
        true,
        &format!("3 algorithms bitwise stable; {} files byte-identical", names.len()),
    );
}
