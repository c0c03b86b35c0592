//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::{Complex as NaComplex, DMatrix};
use nogo_core::pipeline::{hausdorff_distance, torus_distance};
use nogo_core::{
    apply_superposer_to_set, build_counterexample, build_usd, certify_independence, forbidden_task_demo,
    is_linearly_independent, numerical_rank, scan_degeneracy_numeric, simulate_usd, solve_degeneracy_analytic,
    success_probabilities, superpose_set_with_phases, CounterexampleParams, PhasePolicy, PhaseTriple, PureState,
    StateSet, SuccessPolicy, SuperposerConfig, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<f64, String> {
    let secs = start.elapsed().as_secs_f64();
    ensure(start.elapsed() < limit, || {
        format!("took {secs:.2}s, limit {}s", limit.as_secs())
    })?;
    Ok(secs)
}

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    // Box–Muller, two independent normals per draw.
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    let r = (-2.0 * u.ln()).sqrt();
    C64::new(r * (TAU * v).cos(), r * (TAU * v).sin())
}

fn random_weights<R: Rng>(rng: &mut R) -> (C64, C64) {
    let r: f64 = rng.gen_range(0.15..0.98);
    (
        C64::from_polar(r, rng.gen::<f64>() * TAU),
        C64::from_polar((1.0 - r * r).sqrt(), rng.gen::<f64>() * TAU),
    )
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut checked, mut skipped) = (0, 0);
    for _ in 0..100 {
        let dim = rng.gen_range(3..=6);
        let p = CounterexampleParams::random(dim, &mut rng).map_err(|e| e.to_string())?;
        let (alpha, beta) = random_weights(&mut rng);
        let locus = solve_degeneracy_analytic(p.a(), p.b()).map_err(|e| e.to_string())?;
        let input_rank = numerical_rank(build_counterexample(&p).unwrap().gram(), 1e-9)
            .unwrap()
            .rank;
        ensure(input_rank == 2, || format!("input rank {input_rank} in dim {dim}"))?;
        let policies = [
            PhasePolicy::Constant(rng.gen::<f64>() * TAU),
            PhasePolicy::OverlapArg,
            PhasePolicy::CanonicalHash,
        ];
        for policy in policies {
            let name = policy.name();
            let cfg = SuperposerConfig::new(alpha, beta, policy, SuccessPolicy::Always).unwrap();
            let (out, phases) = apply_superposer_to_set(&cfg, &p).map_err(|e| e.to_string())?;
            let here = (phases.theta21(), phases.theta31());
            if locus.solutions.iter().any(|&s| torus_distance(here, s) <= 1e-6) {
                skipped += 1;
                continue;
            }
            let rank = numerical_rank(out.gram(), 1e-9).unwrap().rank;
            ensure(rank == 3, || format!("{name} policy: output rank {rank} at {here:?}"))?;
            checked += 1;
        }
    }
    let secs = within(Duration::from_secs(5), start)?;
    Ok(format!(
        "{checked} policy runs rank 2 -> 3, {skipped} on-locus skipped, {secs:.2}s"
    ))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let step = PI / 180.0;
    let h = FRAC_1_SQRT_2;
    let p = CounterexampleParams::standard(3, h, h).unwrap();
    let w = C64::new(h, 0.0);
    let detected = scan_degeneracy_numeric(&p, w, w, step).map_err(|e| e.to_string())?;
    let analytic = solve_degeneracy_analytic(h, h).unwrap();
    let expected = [(PI / 2.0, PI / 4.0), (1.5 * PI, 1.75 * PI)];
    ensure(hausdorff_distance(&analytic.solutions, &expected) <= 1e-12, || {
        format!("analytic solutions {:?}", analytic.solutions)
    })?;
    ensure(!detected.solutions.is_empty(), || "no degeneracies detected".into())?;
    let d = hausdorff_distance(&detected.solutions, &analytic.solutions);
    ensure(d <= step, || format!("Hausdorff deviation {d} exceeds {step}"))?;
    let secs = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "{} grid hits, Hausdorff {d:.3e} <= {step:.5}, {secs:.2}s",
        detected.solutions.len()
    ))
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let standard = CounterexampleParams::standard(3, FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
    let mut params = vec![(standard, (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)))];
    for _ in 0..50 {
        let dim = rng.gen_range(3..=6);
        params.push((
            CounterexampleParams::random(dim, &mut rng).unwrap(),
            random_weights(&mut rng),
        ));
    }
    for (p, (alpha, beta)) in &params {
        let (a, b) = (p.a(), p.b());
        // θ₂ = π/2 with a + ib = e^{iθ₃}, and its mirror branch.
        for (t2, t3) in [(PI / 2.0, b.atan2(a)), (1.5 * PI, (-b).atan2(a))] {
            let out = superpose_set_with_phases(p, *alpha, *beta, &PhaseTriple::new(0.0, t2, t3))
                .map_err(|e| e.to_string())?;
            let cert = certify_independence(&out).map_err(|e| e.to_string())?;
            ensure(!cert.independent, || format!("independent at a={a}, b={b}, θ₂={t2}"))?;
            ensure(cert.residual_norm <= 1e-8, || {
                format!("residual {}", cert.residual_norm)
            })?;
            worst = worst.max(cert.residual_norm);
            cases += 1;
        }
    }
    Ok(format!("{cases} on-locus sets dependent, max residual {worst:.2e}"))
}

/// USD success probabilities from nalgebra's inverse and eigensolver.
fn oracle_usd_success(states: &[[f64; 2]]) -> Vec<f64> {
    let n = states.len();
    let a = DMatrix::from_fn(2, n, |i, j| NaComplex::new(states[j][i], 0.0));
    let g = a.adjoint() * &a;
    let dual = &a * g.try_inverse().expect("independent states");
    let mut frame = DMatrix::<NaComplex<f64>>::zeros(2, 2);
    let mut duals = Vec::new();
    for j in 0..n {
        let col = dual.column(j).normalize();
        frame += &col * col.adjoint();
        duals.push(col);
    }
    let lambda = frame
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    (0..n)
        .map(|j| (duals[j].dotc(&a.column(j))).norm_sqr() / lambda)
        .collect()
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let target = 1.0 - FRAC_1_SQRT_2;
    let raw = [[1.0, 0.0], [FRAC_1_SQRT_2, FRAC_1_SQRT_2]];
    let members: Vec<PureState<f64>> = raw
        .iter()
        .map(|v| PureState::new(v.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap())
        .collect();
    let set = StateSet::new(members).unwrap();
    let m = build_usd(&set).map_err(|e| e.to_string())?;
    let probs = success_probabilities(&m, &set).map_err(|e| e.to_string())?;
    let oracle = oracle_usd_success(&raw);
    for (p, o) in probs.iter().zip(&oracle) {
        ensure((p - target).abs() <= 1e-9, || format!("success {p} vs 1 - 1/sqrt2"))?;
        ensure((p - o).abs() <= 1e-9, || format!("success {p} vs eigen oracle {o}"))?;
    }
    let trials = 100_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sigma = (target * (1.0 - target) / trials as f64).sqrt();
    let mut rates = Vec::new();
    for (j, truth) in set.members().iter().enumerate() {
        let out = simulate_usd(&m, truth, trials, &mut rng).map_err(|e| e.to_string())?;
        let wrong = out.misidentifications(j);
        ensure(wrong == 0, || format!("{wrong} misidentifications of state {j}"))?;
        let rate = out.per_label_counts[j] as f64 / trials as f64;
        ensure((rate - probs[j]).abs() <= 3.0 * sigma, || {
            format!("rate {rate} outside 3σ of {}", probs[j])
        })?;
        rates.push(rate);
    }
    let secs = within(Duration::from_secs(2), start)?;
    Ok(format!(
        "success {:.9}, empirical {rates:?}, 0 wrong, {secs:.2}s",
        probs[0]
    ))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let p = CounterexampleParams::standard(3, FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
    let cfg = SuperposerConfig::balanced(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let r = forbidden_task_demo(&p, &cfg, 100_000, &mut rng).map_err(|e| e.to_string())?;
    ensure(r.misidentifications == 0, || {
        format!("{} misidentifications", r.misidentifications)
    })?;
    ensure(r.conclusive() > 0, || "no conclusive outcomes".into())?;
    ensure(r.rate_within_three_sigma(), || {
        format!(
            "rate {} vs predicted {} (σ {})",
            r.empirical_conclusive_rate, r.predicted_conclusive_rate, r.rate_std_error
        )
    })?;
    let f = r.min_clone_fidelity.ok_or("no successful clones")?;
    ensure((f - 1.0).abs() <= 1e-10, || format!("clone fidelity {f}"))?;
    ensure(r.clone_successes == r.conclusive(), || {
        "clone count differs from identifications".into()
    })?;
    let secs = within(Duration::from_secs(10), start)?;
    Ok(format!(
        "rate {:.5} vs {:.5} ± {:.5}, 0 wrong, {} clones, {secs:.2}s",
        r.empirical_conclusive_rate, r.predicted_conclusive_rate, r.rate_std_error, r.clone_successes
    ))
}

/// Set of `size` unit vectors spanning a random `rank`-dimensional subspace.
fn random_set<R: Rng>(dim: usize, size: usize, rank: usize, rng: &mut R) -> StateSet<f64> {
    let basis: Vec<Vec<C64>> = (0..rank).map(|_| (0..dim).map(|_| gaussian(rng)).collect()).collect();
    let members = (0..size)
        .map(|k| {
            let coeffs: Vec<C64> = if k < rank {
                (0..rank).map(|i| C64::new(f64::from(u8::from(i == k)), 0.0)).collect()
            } else {
                (0..rank).map(|_| gaussian(rng)).collect()
            };
            let v = (0..dim)
                .map(|i| (0..rank).map(|r| coeffs[r] * basis[r][i]).sum())
                .collect();
            PureState::normalize(v).unwrap()
        })
        .collect();
    StateSet::new(members).unwrap()
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut agreed, mut independent, mut filtered) = (0, 0, 0);
    while agreed < 1000 {
        let dim = rng.gen_range(2..=6);
        let size = rng.gen_range(1..=6);
        let rank = rng.gen_range(1..=size.min(dim));
        let set = random_set(dim, size, rank, &mut rng);
        let a = DMatrix::from_fn(dim, size, |i, j| {
            let z = set.members()[j].amplitudes()[i];
            NaComplex::new(z.re, z.im)
        });
        let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        // Gram eigenvalues are squared singular values of the amplitudes.
        let gram_sv: Vec<f64> = sv.iter().map(|s| s * s).collect();
        let conditioning = gram_sv[rank - 1] / gram_sv[0];
        if conditioning < 1e-6 {
            filtered += 1;
            continue;
        }
        let oracle = size <= dim && gram_sv.iter().filter(|&&s| s > 1e-9 * gram_sv[0]).count() == size;
        let got = is_linearly_independent(&set, 1e-9).map_err(|e| e.to_string())?;
        ensure(got == oracle, || {
            format!("dim {dim} size {size} rank {rank}: got {got}, oracle {oracle}")
        })?;
        independent += usize::from(got);
        agreed += 1;
    }
    Ok(format!(
        "1000/1000 agree ({independent} independent), {filtered} ill-conditioned redrawn"
    ))
}

fn criterion_7() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    // Same path both times: the resolved config, output path included, is
    // part of the report.
    let path = dir.path().join("demo.json");
    let run = || -> Result<Vec<u8>, String> {
        let status = Command::new(env!("CARGO_BIN_EXE_nogo"))
            .args([
                "demo",
                "--deterministic",
                "--seed",
                "42",
                "--trials",
                "20000",
                "--output",
            ])
            .arg(&path)
            .env_remove("NOGO_SEED")
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("demo exited with {status}"))?;
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    ensure(!first.is_empty(), || "empty report".into())?;
    ensure(first == second, || "reports differ".into())?;
    Ok(format!("two runs byte-identical ({} bytes)", first.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("counterexample rank 2 -> 3", criterion_1),
        ("degeneracy locus scan", criterion_2),
        ("on-locus dependence", criterion_3),
        ("USD on |0>, |+>", criterion_4),
        ("forbidden-task demo", criterion_5),
        ("independence oracle agreement", criterion_6),
        ("deterministic demo reports", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
