//! Acceptance report: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use splitkit::certificates::{certify, omega_residual, CertificateReport};
use splitkit::dynamics::{simulate_dr_flow, simulate_ppa, FlowParams};
use splitkit::operator::lipschitz_check;
use splitkit::problems::{make_affine_instance, make_saddle_instance, solve_affine_direct, AffineInstance};
use splitkit::rng::{stream, uniform_vector};
use splitkit::solvers::{run, InitialHistory};
use splitkit::{Method, MonotoneOperator, ProblemTriple, SolverConfig, Status, Trace, Vector};

const DIM: usize = 50;
const SKEW: f64 = 0.8;
const SEEDS: std::ops::RangeInclusive<u64> = 1..=10;

type Outcome = Result<String, String>;

fn instances() -> Vec<AffineInstance> {
    SEEDS.map(|s| make_affine_instance(DIM, s, SKEW).unwrap()).collect()
}

fn bforb_lambda(p: &ProblemTriple) -> f64 {
    0.9 / (8.0 * p.lipschitz())
}

fn brfob_lambda(p: &ProblemTriple) -> f64 {
    0.9 / (22.0 * p.lipschitz())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Iterations needed to reach `‖x_k − x*‖ ≤ 1e-6·(1 + ‖x*‖)` against the
/// direct solve, per seed.
fn convergence(method: Method, budget: usize) -> Result<Vec<usize>, String> {
    let mut hits = Vec::new();
    for inst in instances() {
        let x_star = solve_affine_direct(&inst).map_err(e)?;
        let p = inst.problem().map_err(e)?.with_solution(x_star.clone()).map_err(e)?;
        let lambda = if method == Method::Bforb { bforb_lambda(&p) } else { brfob_lambda(&p) };
        let target = 1e-6 * (1.0 + x_star.norm());
        let cfg = SolverConfig::new(method, lambda, Vector::zeros(DIM)).max_iters(budget).tol(1e-12);
        let t = run(&p, cfg).map_err(e)?;
        let hit = t
            .first_within(target)
            .map(|k| k + 1)
            .ok_or_else(|| format!("seed {}: not within {target:.1e} after {} iterations", inst.seed, t.iterations()))?;
        hits.push(hit);
    }
    Ok(hits)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let hits = convergence(Method::Bforb, 50_000)?;
    let secs = start.elapsed().as_secs_f64();
    check(secs < 10.0, || format!("runtime {secs:.2}s"))?;
    Ok(format!(
        "BFoRB within tolerance after {}..{} iterations (budget 50000), {secs:.2}s",
        hits.iter().min().unwrap(),
        hits.iter().max().unwrap()
    ))
}

fn criterion_2() -> Outcome {
    let hits = convergence(Method::Brfob, 200_000)?;
    Ok(format!(
        "BRFoB within tolerance after {}..{} iterations (budget 200000)",
        hits.iter().min().unwrap(),
        hits.iter().max().unwrap()
    ))
}

/// Certificate along the first 1000 iterations (or until divergence).
fn certified(p: &ProblemTriple, method: Method, lambda: f64) -> Result<(Trace, CertificateReport), String> {
    let cfg = SolverConfig::new(method, lambda, Vector::zeros(DIM)).max_iters(1000).tol(1e-300).record(true);
    let t = run(p, cfg).map_err(e)?;
    let rep = certify(p, &t).map_err(e)?;
    Ok((t, rep))
}

fn lemma_criterion(method: Method, lambda_of: fn(&ProblemTriple) -> f64) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut worst_large = f64::INFINITY;
    let mut diverged = 0;
    for inst in instances() {
        let p = inst.problem().map_err(e)?;
        for (large, lambda) in [(false, lambda_of(&p)), (true, 2.0 / p.lipschitz())] {
            let (t, rep) = certified(&p, method, lambda)?;
            let s = &rep.summary;
            check(s.lemma_holds, || {
                format!(
                    "seed {} lambda*L = {:.3}: min slack {:.3e} below -{:.1e}",
                    inst.seed,
                    lambda * p.lipschitz(),
                    s.min_lemma_slack,
                    s.slack_tolerance
                )
            })?;
            if large {
                worst_large = worst_large.min(s.min_lemma_slack);
                diverged += (t.status == Status::Diverged) as usize;
            } else {
                worst = worst.min(s.min_lemma_slack);
            }
        }
    }
    Ok(format!(
        "{method} min slack {worst:.2e} at 0.9x bound, {worst_large:.2e} at lambda = 2/L ({diverged}/10 runs diverged), warm-up {} excluded",
        if method == Method::Bforb { 2 } else { 3 }
    ))
}

fn criterion_3() -> Outcome {
    lemma_criterion(Method::Bforb, bforb_lambda)
}

fn criterion_4() -> Outcome {
    lemma_criterion(Method::Brfob, brfob_lambda)
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    for (method, lambda_of, c) in [
        (Method::Bforb, bforb_lambda as fn(&ProblemTriple) -> f64, 0.75),
        (Method::Brfob, brfob_lambda as fn(&ProblemTriple) -> f64, 6.0 / 11.0),
    ] {
        let mut eps = 0.0;
        for inst in instances() {
            let p = inst.problem().map_err(e)?;
            let (t, rep) = certified(&p, method, lambda_of(&p))?;
            eps = rep.epsilon;
            let tol = 1e-9 * (1.0 + rep.phi[0]);
            let bad = rep.descent.violations.iter().filter(|&&v| v > tol).count();
            check(bad == 0, || format!("{method} seed {}: descent violated at {bad} steps", inst.seed))?;
            check(rep.descent.max_violation <= tol && rep.descent.max_telescoped_violation <= tol, || {
                format!("{method} seed {}: descent violation {:.2e}", inst.seed, rep.descent.max_violation)
            })?;
            // φ_k ≥ c‖z_k − z‖² for every k ≥ 1, from the raw sequences.
            let z = &t.history.as_ref().unwrap().z;
            let r = splitkit::certificates::reference_point(&p, rep.lambda).map_err(e)?;
            for k in 1..z.len() {
                let lower = c * (&z[k] - &r.z).norm_squared();
                check(rep.phi[k] >= lower - tol, || {
                    format!("{method} seed {} k = {k}: phi {:.3e} < {lower:.3e}", inst.seed, rep.phi[k])
                })?;
            }
        }
        notes.push(format!("{method} eps = {eps:.3}"));
    }
    Ok(format!("no descent or lower-bound violations ({})", notes.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut max_gap: f64 = 0.0;
    let mut max_formula: f64 = 0.0;
    for inst in instances() {
        let full = inst.problem().map_err(e)?;
        let lambda = bforb_lambda(&full);
        let z0 = uniform_vector(&mut stream(inst.seed, 99), DIM);
        let zs = |p: &ProblemTriple, cfg: SolverConfig| -> Result<Vec<Vector>, String> {
            let t = run(p, cfg.max_iters(200).tol(1e-300).record(true)).map_err(e)?;
            Ok(t.history.unwrap().z)
        };

        let no_b = ProblemTriple::new(full.a.clone(), MonotoneOperator::zero(DIM), full.c.clone()).map_err(e)?;
        let dr = zs(&no_b, SolverConfig::new(Method::Dr, lambda, z0.clone()))?;
        check(dr.len() == 201, || format!("seed {}: DR stopped early", inst.seed))?;
        for m in [Method::Bforb, Method::Brfob, Method::DavisYin] {
            let other = zs(&no_b, SolverConfig::new(m, lambda, z0.clone()))?;
            check(other == dr, || format!("seed {}: {m} not bit-identical to DR", inst.seed))?;
        }

        let no_a = ProblemTriple::new(MonotoneOperator::zero(DIM), full.b.clone(), full.c.clone()).map_err(e)?;
        let z_prev = uniform_vector(&mut stream(inst.seed, 100), DIM);
        let three = InitialHistory::Explicit { prev: z0.clone(), prev2: z_prev.clone() };
        let two = InitialHistory::Explicit { prev: z_prev.clone(), prev2: z_prev.clone() };
        for (m3, m2) in [(Method::Bforb, Method::Forb), (Method::Brfob, Method::Rfob)] {
            let lam = if m3 == Method::Bforb { lambda } else { brfob_lambda(&full) };
            let a = zs(&no_a, SolverConfig::new(m3, lam, z0.clone()).history(three.clone()))?;
            let b = zs(&no_a, SolverConfig::new(m2, lam, z0.clone()).history(two.clone()))?;
            check(a.len() == 201 && b.len() == 201, || format!("seed {}: reduction run stopped early", inst.seed))?;
            for (u, v) in a.iter().zip(&b) {
                let gap = (u - v).norm();
                max_gap = max_gap.max(gap);
                check(gap <= 1e-12, || format!("seed {}: {m3} vs {m2} gap {gap:.2e}", inst.seed))?;
            }
        }

        let lam = 0.9 / (2.0 * full.lipschitz());
        let xs = zs(&full, SolverConfig::new(Method::Forb, lam, z0.clone()))?;
        let jc = full.c.resolvent_map(lam).map_err(e)?;
        for k in 0..xs.len() - 1 {
            let prev = &xs[k.saturating_sub(1)];
            let b_k = full.b.forward(&xs[k]).map_err(e)?;
            let b_prev = full.b.forward(prev).map_err(e)?;
            let expected = jc.apply(&(&xs[k] - b_k * (2.0 * lam) + b_prev * lam)).map_err(e)?;
            let gap = (&xs[k + 1] - &expected).norm() / (1.0 + expected.norm());
            max_formula = max_formula.max(gap);
            check(gap <= 1e-15, || format!("seed {} k = {k}: FoRB step off by {gap:.2e}", inst.seed))?;
        }
    }
    Ok(format!(
        "B = 0 bit-identical to DR; A = 0 max gap {max_gap:.1e}; FoRB formula max relative gap {max_formula:.1e}"
    ))
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    for inst in instances() {
        let p = inst.problem().map_err(e)?;
        let l = p.lipschitz();
        // γ = 4λ and λ = 0.9γ/(1 + 2Lγ) give λ = 2.6/(8L).
        let lambda = 2.6 / (8.0 * l);
        let gamma = 4.0 * lambda;
        check((lambda - 0.9 * gamma / (1.0 + 2.0 * l * gamma)).abs() <= 1e-12 * lambda, || "stepsize algebra".into())?;
        let frdr = run(
            &p,
            SolverConfig::new(Method::Frdr, lambda, Vector::zeros(DIM)).gamma(gamma).max_iters(100_000).tol(1e-12),
        )
        .map_err(e)?;
        let bforb = run(&p, SolverConfig::new(Method::Bforb, bforb_lambda(&p), Vector::zeros(DIM)).max_iters(100_000).tol(1e-12))
            .map_err(e)?;
        check(frdr.status == Status::Converged, || format!("seed {}: FRDR {}", inst.seed, frdr.status))?;
        let gap = (&frdr.solution - &bforb.solution).norm();
        worst = worst.max(gap);
        check(gap <= 1e-5, || format!("seed {}: |x_frdr - x_bforb| = {gap:.2e}", inst.seed))?;
    }
    Ok(format!("max |x_frdr - x_bforb| = {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let budget = 1_000_000;
    let inst = make_saddle_instance(20, 30, 11, 0.5, 1.0).map_err(e)?;
    let p = inst.problem();
    let l = inst.lipschitz();
    let mut blocks = Vec::new();
    let mut omegas = Vec::new();
    for (m, lambda) in [(Method::Bforb, 0.9 / (8.0 * l)), (Method::Brfob, 0.9 / (22.0 * l))] {
        let t = run(p, SolverConfig::new(m, lambda, Vector::zeros(inst.dim())).max_iters(budget).tol(1e-11)).map_err(e)?;
        let omega = omega_residual(p, lambda, &t.final_state.z).map_err(e)?;
        check(omega <= 1e-6, || format!("{m}: omega {omega:.2e} after {} iterations", t.iterations()))?;
        omegas.push(omega);
        blocks.push(inst.x_block(&t.solution));
    }
    let gap = (&blocks[0] - &blocks[1]).norm();
    check(gap <= 1e-4, || format!("x-block gap {gap:.2e}"))?;

    let bilinear = inst.bilinear_variant().map_err(e)?;
    let lambda = 0.9 / (8.0 * l);
    let fb = run(
        bilinear.problem(),
        SolverConfig::new(Method::Fb, lambda, Vector::zeros(inst.dim())).max_iters(budget).tol(1e-11),
    )
    .map_err(e)?;
    let reached = fb.records.iter().any(|r| r.omega_residual <= 1e-6);
    check(!reached, || "forward-backward reached 1e-6 on the bilinear variant".into())?;
    Ok(format!(
        "omega {:.1e} (BFoRB), {:.1e} (BRFoB), x-block gap {gap:.1e}; FB on bilinear variant ends at omega {:.2e} ({})",
        omegas[0],
        omegas[1],
        fb.final_residual().unwrap(),
        fb.status
    ))
}

fn criterion_9() -> Outcome {
    let scalar = ProblemTriple::new(MonotoneOperator::zero(1), MonotoneOperator::identity(1), MonotoneOperator::zero(1)).map_err(e)?;
    let exact = (-2.5_f64).exp();
    let err = |h: f64| -> Result<f64, String> {
        let flow = simulate_ppa(&scalar, &FlowParams::new(1.0, h, 5.0), &Vector::from_element(1, 1.0)).map_err(e)?;
        Ok((flow.terminal()[0] - exact).abs())
    };
    let (e1, e2) = (err(1e-3)?, err(5e-4)?);
    check(e1 <= 5e-3, || format!("Euler error {e1:.2e}"))?;
    let ratio = e2 / e1;
    check((0.3..=0.7).contains(&ratio), || format!("halving ratio {ratio:.3}"))?;

    let p = make_affine_instance(10, 7, SKEW).map_err(e)?.problem().map_err(e)?;
    let flow = simulate_dr_flow(&p, &FlowParams::new(0.1, 1e-2, 200.0), &Vector::zeros(10)).map_err(e)?;
    let omega = omega_residual(&p, 0.1, flow.terminal()).map_err(e)?;
    check(omega <= 1e-4, || format!("DR flow terminal omega {omega:.2e}"))?;
    Ok(format!("PPA error {e1:.2e}, halving ratio {ratio:.3}; DR flow terminal omega {omega:.2e}"))
}

fn criterion_10() -> Outcome {
    let mut rng = stream(2024, 7);
    let mut draw = |scale: f64| Vector::from_fn(common::DIM, |_, _| rng.random_range(-scale..scale));
    let pairs = 1000;
    let mut kinds = 0;
    for (name, op) in common::resolvent_zoo() {
        for _ in 0..pairs {
            let (v, w) = (draw(10.0), draw(10.0));
            let lambda = 10f64.powf(rand::random_range(-2.0..1.3));
            let excess = common::firm_nonexpansive_excess(&op, lambda, &v, &w);
            check(excess <= 1e-10 * (&v - &w).norm_squared(), || format!("{name}: firm nonexpansivity excess {excess:.2e}"))?;
        }
        kinds += 1;
    }
    for (name, op) in common::forward_zoo() {
        for _ in 0..pairs {
            let (u, v) = (draw(10.0), draw(10.0));
            let gap = common::monotonicity_gap(&op, &u, &v);
            check(gap >= -1e-10 * (&u - &v).norm_squared(), || format!("{name}: monotonicity gap {gap:.2e}"))?;
        }
        let declared = op.lipschitz().unwrap();
        let observed = lipschitz_check(&op, pairs, 5).map_err(e)?;
        check(observed <= declared * (1.0 + 1e-8), || format!("{name}: observed L {observed} > declared {declared}"))?;
        kinds += 1;
    }
    let mut generated = 0;
    for inst in instances() {
        let p = inst.problem().map_err(e)?;
        let observed = lipschitz_check(&p.b, pairs, inst.seed).map_err(e)?;
        check(observed <= p.lipschitz() * (1.0 + 1e-8), || format!("seed {}: observed L {observed}", inst.seed))?;
        generated += 1;
    }
    let saddle = make_saddle_instance(20, 30, 11, 0.5, 1.0).map_err(e)?;
    let observed = lipschitz_check(&saddle.problem().b, pairs, 11).map_err(e)?;
    check(observed <= saddle.lipschitz() * (1.0 + 1e-8), || format!("saddle: observed L {observed}"))?;
    Ok(format!(
        "{kinds} operator kinds x {pairs} pairs; declared L held on {} operators",
        common::forward_zoo().len() + generated + 1
    ))
}

fn criterion_11() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_splitkit");
    let tmp = tempfile::TempDir::new().map_err(e)?;
    let write = |name: &str, text: &str| -> Result<String, String> {
        let path = tmp.path().join(name);
        fs::write(&path, text).map_err(e)?;
        Ok(path.to_string_lossy().into_owned())
    };
    let exec = |cfg: &str, out: &Path| -> Result<i32, String> {
        let o = Command::new(bin)
            .args(["run", "--config", cfg, "--out", out.to_str().unwrap(), "--quiet"])
            .output()
            .map_err(e)?;
        o.status.code().ok_or_else(|| "terminated by signal".to_string())
    };
    let cfg = write(
        "det.toml",
        "[problem]\nkind = \"affine\"\ndim = 50\nseed = 1\n\n[run]\nmethods = [\"bforb\", \"brfob\", \"frdr\"]\nlambda_fraction = 0.9\ngamma_ratio = 4.0\nmax_iters = 50000\ncertify = true\n",
    )?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    check(exec(&cfg, &a)? == 0 && exec(&cfg, &b)? == 0, || "run did not exit 0".into())?;
    let mut csvs = 0;
    for entry in fs::read_dir(&a).map_err(e)? {
        let name = entry.map_err(e)?.file_name();
        if name.to_string_lossy().ends_with(".csv") {
            let left = fs::read(a.join(&name)).map_err(e)?;
            let right = fs::read(b.join(&name)).map_err(e)?;
            check(left == right, || format!("{} differs between runs", name.to_string_lossy()))?;
            csvs += 1;
        }
    }
    check(csvs >= 5, || format!("only {csvs} CSV artifacts"))?;

    let fb = write("fb.toml", "[problem]\nkind = \"skew2d\"\n\n[run]\nmethods = [\"fb\"]\nlambda = 0.5\nmax_iters = 1000000\nz0 = 1.0\n")?;
    let fb_code = exec(&fb, &tmp.path().join("fb"))?;
    check(fb_code == 2, || format!("divergent FB exited {fb_code}"))?;
    let gamma = write("g.toml", "[problem]\nkind = \"affine\"\ndim = 10\nseed = 7\n\n[run]\nmethods = [\"frdr\"]\nlambda = 0.1\n")?;
    let gamma_code = exec(&gamma, &tmp.path().join("g"))?;
    check(gamma_code == 1, || format!("missing gamma exited {gamma_code}"))?;
    Ok(format!("{csvs} CSV artifacts byte-identical; divergent FB exit 2; missing gamma exit 1"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "BFoRB convergence", criterion_1),
        (2, "BRFoB convergence", criterion_2),
        (3, "BFoRB one-step inequality", criterion_3),
        (4, "BRFoB one-step inequality", criterion_4),
        (5, "Lyapunov descent", criterion_5),
        (6, "reduction equivalences", criterion_6),
        (7, "FRDR cross-check", criterion_7),
        (8, "saddle-point instance", criterion_8),
        (9, "continuous-time flows", criterion_9),
        (10, "operator properties", criterion_10),
        (11, "harness determinism and exit codes", criterion_11),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why} [{secs:.1}s]");
            }
        }
    }
    println!("{} of {} criteria passed", 11 - failed, 11);
    if failed > 0 {
        std::process::exit(1);
    }
}
