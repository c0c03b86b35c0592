use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use nogo_core::pipeline::{cluster_points, grid_len, hausdorff_distance, locus_from_grid, torus_distance};
use nogo_core::{
    apply_superposer_to_set, build_counterexample, build_usd, certify_independence, forbidden_task_demo,
    numerical_rank, scan_degeneracy_grid, simulate_usd, solve_degeneracy_analytic, success_probabilities, PureState64,
    ScanPoint, StateSet64, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{DemoArgs, Output, ScanArgs, Seed, UsdArgs, VerifyArgs};
use crate::config::{self, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report;

fn base(command: &'static str, seed: &Seed, out: &Output) -> RunConfig {
    RunConfig {
        command,
        seed: seed.seed,
        output: out.output.clone(),
        deterministic: out.deterministic,
        ..RunConfig::default()
    }
}

fn open(path: &Option<PathBuf>) -> CliResult<Option<File>> {
    path.as_deref().map(report::create).transpose()
}

fn nearest(p: (f64, f64), set: &[(f64, f64)]) -> Option<f64> {
    set.iter().map(|&q| torus_distance(p, q)).min_by(f64::total_cmp)
}

fn pairs(points: &[(f64, f64)]) -> Value {
    Value::Array(points.iter().map(|&(t21, t31)| json!([t21, t31])).collect())
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    let mut cfg = base("verify", &args.seed, &args.output);
    let params = config::params(&args.geometry, &mut cfg)?;
    let weights = config::weights(&args.weights, &mut cfg)?;
    let oracle = config::superposer(&args.policies, weights, &params, &mut cfg)?;
    let tol = config::tolerance("rank-tol", args.rank_tol)?;
    cfg.rank_tol = Some(tol);
    let sink = open(&cfg.output)?;

    let inputs = build_counterexample(&params).map_err(CliError::runtime)?;
    let (outputs, phases) = apply_superposer_to_set(&oracle, &params).map_err(CliError::runtime)?;
    let input_rank = numerical_rank(inputs.gram(), tol).map_err(CliError::runtime)?;
    let output_rank = numerical_rank(outputs.gram(), tol).map_err(CliError::runtime)?;
    let certificate = certify_independence(&outputs).map_err(CliError::runtime)?;
    let locus = solve_degeneracy_analytic(params.a(), params.b()).map_err(CliError::runtime)?;
    let here = (phases.theta21(), phases.theta31());

    let result = json!({
        "input_rank": input_rank.rank,
        "output_rank": output_rank.rank,
        "input_gram_rank": report::rank(&input_rank),
        "output_gram_rank": report::rank(&output_rank),
        "phases": report::phases(&phases),
        "certificate": report::certificate(&certificate),
        "inputs": report::states(&inputs),
        "phi": report::state(params.phi()),
        "outputs": report::states(&outputs),
        "output_gram": report::matrix(outputs.gram()),
        "degeneracy_locus": {
            "solutions": pairs(&locus.solutions),
            "distance_to_phases": nearest(here, &locus.solutions),
        },
    });
    report::emit(&cfg, result, sink)
}

fn write_csv(file: File, grid: &[ScanPoint<f64>]) -> CliResult<()> {
    let mut w = BufWriter::new(file);
    let io = |e: std::io::Error| CliError::Runtime(format!("writing CSV: {e}"));
    writeln!(w, "theta21,theta31,min_singular_value,rank").map_err(io)?;
    for pt in grid {
        writeln!(w, "{},{},{},{}", pt.theta21, pt.theta31, pt.min_singular_value, pt.rank).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn scan(args: &ScanArgs) -> CliResult<()> {
    let mut cfg = base("scan", &args.seed, &args.output);
    let params = config::params(&args.geometry, &mut cfg)?;
    let (alpha, beta) = config::weights(&args.weights, &mut cfg)?;
    let step = config::grid_step(args.grid_step)?;
    let tol = config::tolerance("scan-tol", args.scan_tol)?;
    cfg.grid_step = Some(step);
    cfg.scan_tol = Some(tol);
    cfg.csv = args.csv.clone();
    let sink = open(&cfg.output)?;
    let csv = open(&cfg.csv)?;

    let grid = scan_degeneracy_grid(&params, alpha, beta, step, tol).map_err(CliError::runtime)?;
    if let Some(f) = csv {
        write_csv(f, &grid)?;
    }
    let detected = locus_from_grid(&grid).solutions;
    let analytic = solve_degeneracy_analytic(params.a(), params.b())
        .map_err(CliError::runtime)?
        .solutions;

    // Neighbouring grid nodes, diagonals included, belong to one cluster.
    let clusters: Vec<Value> = cluster_points(&detected, 1.5 * step)
        .iter()
        .map(|members| {
            let best = grid
                .iter()
                .filter(|pt| members.contains(&(pt.theta21, pt.theta31)))
                .min_by(|x, y| x.min_singular_value.total_cmp(&y.min_singular_value))
                .expect("cluster members come from the grid");
            json!({
                "size": members.len(),
                "representative": [best.theta21, best.theta31],
                "min_singular_value": best.min_singular_value,
                "distance_to_analytic": nearest((best.theta21, best.theta31), &analytic),
            })
        })
        .collect();
    let solutions: Vec<Value> = analytic
        .iter()
        .map(|&(t21, t31)| {
            json!({
                "theta21": t21,
                "theta31": t31,
                "distance_to_detected": nearest((t21, t31), &detected),
            })
        })
        .collect();
    let max_deviation = hausdorff_distance(&detected, &analytic);

    let result = json!({
        "grid_points_per_axis": grid_len(step),
        "detected_count": detected.len(),
        "detected_clusters": clusters,
        "analytic_solutions": solutions,
        "max_deviation": max_deviation,
        "within_one_step": max_deviation <= step,
    });
    report::emit(&cfg, result, sink)
}

pub fn demo(args: &DemoArgs) -> CliResult<()> {
    let mut cfg = base("demo", &args.seed, &args.output);
    let params = config::params(&args.geometry, &mut cfg)?;
    let weights = config::weights(&args.weights, &mut cfg)?;
    let oracle = config::superposer(&args.policies, weights, &params, &mut cfg)?;
    cfg.trials = Some(args.trials);
    let sink = open(&cfg.output)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r = forbidden_task_demo(&params, &oracle, args.trials, &mut rng).map_err(CliError::runtime)?;
    let result = json!({
        "trials": r.trials,
        "phases": report::phases(&r.phases),
        "certificate": report::certificate(&r.certificate),
        "usd_success_probabilities": r.usd_success_probabilities,
        "superposer_probabilities": r.superposer_probabilities,
        "secret_counts": r.secret_counts,
        "superposer_failures": r.superposer_failures,
        "inconclusive": r.inconclusive,
        "conclusive_per_hypothesis": r.conclusive_per_hypothesis,
        "conclusive": r.conclusive(),
        "misidentifications": r.misidentifications,
        "clone_successes": r.clone_successes,
        "min_clone_fidelity": r.min_clone_fidelity,
        "predicted_conclusive_rate": r.predicted_conclusive_rate,
        "empirical_conclusive_rate": r.empirical_conclusive_rate,
        "rate_std_error": r.rate_std_error,
        "within_three_sigma": r.rate_within_three_sigma(),
    });
    report::emit(&cfg, result, sink)
}

fn load_states(path: &PathBuf) -> CliResult<StateSet64> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let raw: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text).map_err(|e| {
        CliError::Config(format!(
            "{}: expected an array of states of [re, im] pairs ({e})",
            path.display()
        ))
    })?;
    let members = raw
        .into_iter()
        .enumerate()
        .map(|(k, amps)| {
            let v: Vec<C64> = amps.iter().map(|&[re, im]| C64::new(re, im)).collect();
            PureState64::normalize(v).map_err(|e| CliError::Config(format!("state {k}: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    StateSet64::new(members).map_err(CliError::config)
}

pub fn usd(args: &UsdArgs) -> CliResult<()> {
    let mut cfg = base("usd", &args.seed, &args.output);
    let tol = config::tolerance("rank-tol", args.rank_tol)?;
    cfg.rank_tol = Some(tol);
    cfg.states = Some(args.states.clone());
    cfg.truth = args.truth;
    cfg.trials = Some(args.trials);
    let set = load_states(&args.states)?;
    if let Some(t) = args.truth {
        if t >= set.len() {
            return Err(CliError::Config(format!(
                "--truth {t} out of range for {} states (indices are zero-based)",
                set.len()
            )));
        }
    }
    let sink = open(&cfg.output)?;

    let gram_rank = numerical_rank(set.gram(), tol).map_err(CliError::runtime)?;
    if gram_rank.rank < set.len() {
        // Dependent hypotheses admit no unambiguous measurement; that is a
        // finding, not a failure.
        let result = json!({
            "linearly_independent": false,
            "gram_rank": report::rank(&gram_rank),
            "gram": report::matrix(set.gram()),
        });
        return report::emit(&cfg, result, sink);
    }

    let m = build_usd(&set).map_err(CliError::runtime)?;
    let probs = success_probabilities(&m, &set).map_err(CliError::runtime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let truths: Vec<usize> = args.truth.map_or_else(|| (0..set.len()).collect(), |t| vec![t]);
    let mut simulations = Vec::with_capacity(truths.len());
    for j in truths {
        let out = simulate_usd(&m, &set.members()[j], args.trials, &mut rng).map_err(CliError::runtime)?;
        let p = probs[j].clamp(0.0, 1.0);
        let (rate, sigma) = if args.trials == 0 {
            (0.0, 0.0)
        } else {
            let n = args.trials as f64;
            (out.per_label_counts[j] as f64 / n, (p * (1.0 - p) / n).sqrt())
        };
        simulations.push(json!({
            "truth": j,
            "trials": out.trials,
            "inconclusive": out.inconclusive,
            "per_label_counts": out.per_label_counts,
            "misidentifications": out.misidentifications(j),
            "predicted_success": probs[j],
            "empirical_success": rate,
            "std_error": sigma,
            "within_three_sigma": (rate - p).abs() <= 3.0 * sigma,
        }));
    }

    let result = json!({
        "linearly_independent": true,
        "gram_rank": report::rank(&gram_rank),
        "states": report::states(&set),
        "success_probabilities": probs,
        "measurement": {
            "scale": m.scale(),
            "reciprocal_basis": report::states(m.reciprocal_basis()),
            "elements": m.elements().iter().map(report::matrix).collect::<Vec<_>>(),
            "inconclusive": report::matrix(m.inconclusive()),
            "span_projector": report::matrix(m.span_projector()),
        },
        "simulations": simulations,
    });
    report::emit(&cfg, result, sink)
}
