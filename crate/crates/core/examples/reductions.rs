//! Special cases of the three-operator methods.
//!
//! With `B = 0`, BFoRB, BRFoB and Davis–Yin all collapse to Douglas–Rachford
//! and produce the same iterates bit for bit. With `A = 0` and a matching
//! start-up history, BFoRB reproduces forward-reflected-backward and BRFoB
//! reproduces reflected-forward-backward.
//!
//! ```bash
//! cargo run --example reductions
//! ```

use splitkit::problems::make_affine_instance;
use splitkit::solvers::{run, InitialHistory};
use splitkit::{Method, MonotoneOperator, ProblemTriple, SolverConfig, Vector};

fn iterates(problem: &ProblemTriple, cfg: SolverConfig) -> splitkit::Result<Vec<Vector>> {
    let t = run(problem, cfg.max_iters(200).tol(1e-300).record(true))?;
    Ok(t.history.expect("recorded").z)
}

fn main() -> splitkit::Result<()> {
    let inst = make_affine_instance(8, 3, 0.8)?;
    let full = inst.problem()?;
    let z0 = Vector::from_fn(8, |i, _| (i as f64 * 0.7).sin());
    let lambda = 0.05;

    let no_b = ProblemTriple::new(full.a.clone(), MonotoneOperator::zero(8), full.c.clone())?;
    let dr = iterates(&no_b, SolverConfig::new(Method::Dr, lambda, z0.clone()))?;
    for m in [Method::Bforb, Method::Brfob, Method::DavisYin] {
        let zs = iterates(&no_b, SolverConfig::new(m, lambda, z0.clone()))?;
        println!("B = 0: {m:>9} identical to dr over {} iterates: {}", zs.len(), zs == dr);
    }

    let no_a = ProblemTriple::new(MonotoneOperator::zero(8), full.b.clone(), full.c.clone())?;
    // y_{-1} = z_0 and y_{-2} = z_{-1} on the three-operator side match
    // x_{-1} = z_{-1} on the two-operator side.
    let z_prev = z0.map(|v| 0.5 * v);
    let three_hist = InitialHistory::Explicit { prev: z0.clone(), prev2: z_prev.clone() };
    let two_hist = InitialHistory::Explicit { prev: z_prev.clone(), prev2: z_prev };
    for (three, two) in [(Method::Bforb, Method::Forb), (Method::Brfob, Method::Rfob)] {
        let a = iterates(&no_a, SolverConfig::new(three, lambda, z0.clone()).history(three_hist.clone()))?;
        let b = iterates(&no_a, SolverConfig::new(two, lambda, z0.clone()).history(two_hist.clone()))?;
        let gap = a.iter().zip(&b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        println!("A = 0: {three} vs {two}: max gap {gap:.2e}");
    }
    Ok(())
}
